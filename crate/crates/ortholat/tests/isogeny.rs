use ortholat::groups::cartan;
use ortholat::groups::isogeny::{
    plus_coset_representatives, psi_adjoint, psi_quasi, psi_split, quasi_unipotent_preimages, random_sl2_quad,
    spinor_norm, sqrt_minus_one, SquareClass,
};
use ortholat::groups::sl2::{a_p, random_k as random_sl2};
use ortholat::groups::{ModelGroup, ModelKind};
use ortholat::padic::PadicCtx;
use ortholat::quadext::QuadExt;
use ortholat::Mat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const N: i64 = 32;

#[test]
fn adjoint_isogeny() {
    let ctx = PadicCtx::new(13, 50).unwrap();
    let grp = ModelGroup::new(ModelKind::Ternary, &ctx).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let minus = Mat::from_vec(2, 2, vec![ctx.int(-1), ctx.zero(), ctx.zero(), ctx.int(-1)]);
    assert!(psi_adjoint(&minus).unwrap().congruent(&grp.identity(), N));
    for _ in 0..20 {
        let m = rng.random_range(0..4);
        let g = random_sl2(&ctx, &mut rng, 6).mul(&a_p(&ctx, m)).mul(&random_sl2(&ctx, &mut rng, 6));
        let h = random_sl2(&ctx, &mut rng, 6);
        let (pg, ph) = (psi_adjoint(&g).unwrap(), psi_adjoint(&h).unwrap());
        assert!(grp.contains(&pg, N));
        assert!(psi_adjoint(&g.mul(&h)).unwrap().congruent(&pg.mul(&ph), N));
        assert!(psi_adjoint(&minus.mul(&g)).unwrap().congruent(&pg, N));
        assert!(!pg.congruent(&grp.identity(), 1) || m == 0);
        assert_eq!(cartan(&grp, &pg).unwrap().m, 2 * m);
        assert_eq!(spinor_norm(&grp, &pg).unwrap(), SquareClass::ONE);
    }
}

#[test]
fn quasi_split_isogeny() {
    let ctx = PadicCtx::new(13, 50).unwrap();
    let grp = ModelGroup::new(ModelKind::QuasiSplit, &ctx).unwrap();
    let eta = ctx.int(grp.eta());
    let eps = sqrt_minus_one(&ctx).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10 {
        let t = ctx.random_zp(&mut rng).shift(rng.random_range(-2..2));
        let pre = quasi_unipotent_preimages(&grp, &t).unwrap();
        let want = [grp.u3(&t), grp.v3(&t), grp.u4(&t).unwrap(), grp.v4(&t).unwrap()];
        for (x, w) in pre.iter().zip(&want) {
            assert!(psi_quasi(x, &eps).unwrap().congruent(w, N - 8));
        }
    }
    let q = |x: i64| QuadExt::from_base(ctx.int(x), &eta);
    let minus = Mat::from_vec(2, 2, vec![q(-1), q(0), q(0), q(-1)]);
    assert!(psi_quasi(&minus, &eps).unwrap().congruent(&grp.identity(), N));
    let w = Mat::from_vec(2, 2, vec![q(0), q(-1), q(1), q(0)]);
    let half = ctx.ratio(1, 2);
    let mut want = Mat::from_i64(&[&[0, 0, 0, 0], &[2, 0, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, 1]], &ctx.one());
    want[(0, 1)] = half;
    assert!(psi_quasi(&w, &eps).unwrap().congruent(&want, N));
    for _ in 0..20 {
        let m = rng.random_range(0..4);
        let a = Mat::from_vec(
            2,
            2,
            vec![QuadExt::from_base(ctx.p_pow(m), &eta), q(0), q(0), QuadExt::from_base(ctx.p_pow(-m), &eta)],
        );
        let g = random_sl2_quad(&ctx, &eta, &mut rng, 6).mul(&a).mul(&random_sl2_quad(&ctx, &eta, &mut rng, 6));
        let h = random_sl2_quad(&ctx, &eta, &mut rng, 6);
        let (pg, ph) = (psi_quasi(&g, &eps).unwrap(), psi_quasi(&h, &eps).unwrap());
        assert!(grp.contains(&pg, N));
        assert!(psi_quasi(&g.mul(&h), &eps).unwrap().congruent(&pg.mul(&ph), N - 8));
        assert!(psi_quasi(&minus.mul(&g), &eps).unwrap().congruent(&pg, N));
        assert_eq!(cartan(&grp, &pg).unwrap().m, 2 * m);
        assert_eq!(spinor_norm(&grp, &pg).unwrap(), SquareClass::ONE);
    }
}

#[test]
fn split_isogeny_preserves_cartan() {
    let ctx = PadicCtx::new(13, 50).unwrap();
    let grp = ModelGroup::new(ModelKind::Split, &ctx).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let e = Mat::identity_like(2, &ctx.one());
    let minus = e.neg();
    assert!(psi_split(&minus, &minus).unwrap().congruent(&grp.identity(), N));
    assert!(!psi_split(&minus, &e).unwrap().congruent(&grp.identity(), 1));
    for m in 0..4 {
        for n in 0..4 {
            let g = random_sl2(&ctx, &mut rng, 6).mul(&a_p(&ctx, m)).mul(&random_sl2(&ctx, &mut rng, 6));
            let h = random_sl2(&ctx, &mut rng, 6).mul(&a_p(&ctx, n)).mul(&random_sl2(&ctx, &mut rng, 6));
            let x = psi_split(&g, &h).unwrap();
            assert!(grp.contains(&x, N));
            let f = cartan(&grp, &x).unwrap();
            assert_eq!((f.m, f.n.abs()), (m + n, (m - n).abs()));
            assert_eq!(x.wedge2_norm_exp(), Some(f.m + f.n.abs()));
            assert_eq!(spinor_norm(&grp, &x).unwrap(), SquareClass::ONE);
            assert!(psi_split(&minus.mul(&g), &minus.mul(&h)).unwrap().congruent(&x, N));
        }
    }
}

#[test]
fn plus_cosets_exhaust_square_classes() {
    let ctx = PadicCtx::new(13, 40).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for kind in [ModelKind::Ternary, ModelKind::QuasiSplit, ModelKind::Split] {
        let grp = ModelGroup::new(kind, &ctx).unwrap();
        let reps = plus_coset_representatives(&grp).unwrap();
        assert_eq!(reps.len(), 4);
        assert!(reps[0].matrix.congruent(&grp.identity(), 40));
        let classes: Vec<SquareClass> = reps.iter().map(|r| spinor_norm(&grp, &r.matrix).unwrap()).collect();
        assert_eq!(classes, SquareClass::all().to_vec(), "{kind:?}");
        for a in &reps {
            assert!(grp.contains(&a.matrix, 30));
            for b in &reps {
                let c = spinor_norm(&grp, &a.matrix.mul(&b.matrix)).unwrap();
                assert_eq!(c, a.class.mul(b.class));
            }
            // K-elements built from unipotents and ω lie in H⁺ up to the torus
            let mut u = grp.identity();
            for _ in 0..5 {
                let t = ctx.random_zp(&mut rng);
                u = u.mul(&grp.u3(&t)).mul(&grp.v3(&t));
            }
            assert_eq!(spinor_norm(&grp, &a.matrix.mul(&u)).unwrap(), a.class);
        }
    }
}
