use num_bigint::BigInt;
use num_rational::BigRational;
use ortholat::groups::tree::{
    coset_representatives, count_ball, lattice_key, neighbours, sphere_words, tree_distance, word_distance,
    word_matrix, ModRing, TreeWord,
};
use ortholat::groups::volume::{ball_volume, BallKind};
use ortholat::groups::{ModelGroup, ModelKind};
use ortholat::padic::{smallest_nonresidue, PadicCtx};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn ball_counts_match_volumes() {
    for p in [5u64, 13] {
        let eta = smallest_nonresidue(p).unwrap() as i64;
        for kind in BallKind::ALL {
            let counts = count_ball(kind, p, eta, 3).unwrap();
            let mut total = 0u64;
            for (l, c) in counts.iter().enumerate() {
                assert_eq!(c.words, c.distinct, "{kind} p={p} l={l}");
                assert!(c.norms_exact, "{kind} p={p} l={l}");
                total += c.distinct;
                let v = ball_volume(kind, p, l as u32);
                assert_eq!(BigRational::from_integer(BigInt::from(total)), v, "{kind} p={p} l={l}");
            }
        }
    }
}

#[test]
fn quasi_split_first_spheres() {
    let ctx = PadicCtx::new(5, 20).unwrap();
    let g = ModelGroup::new(ModelKind::QuasiSplit, &ctx).unwrap();
    assert_eq!(sphere_words(ModelKind::QuasiSplit, 5, 1).unwrap().len(), 26);
    assert_eq!(sphere_words(ModelKind::QuasiSplit, 5, 2).unwrap().len(), 650);
    let reps = coset_representatives(&g, 1).unwrap();
    for (_, m) in &reps {
        assert!(g.contains(m, 16));
        assert_eq!(m.norm_exp(), Some(1));
    }
    // pairwise inequivalent: g₁⁻¹g₂ is never integral
    for (i, (_, a)) in reps.iter().enumerate() {
        for (_, b) in &reps[i + 1..] {
            assert!(!g.inverse(a).mul(b).is_integral());
        }
    }
}

#[test]
fn norm_and_word_distances_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for kind in [ModelKind::Ternary, ModelKind::QuasiSplit] {
        let ctx = PadicCtx::new(5, 30).unwrap();
        let g = ModelGroup::new(kind, &ctx).unwrap();
        let js = if kind == ModelKind::QuasiSplit { 5 } else { 1 };
        let random_word = |rng: &mut ChaCha8Rng| {
            let len = rng.random_range(0..4usize);
            let omega = len > 0 && rng.random_bool(0.3);
            let letters = (0..len - omega as usize).map(|_| (rng.random_range(0..5), rng.random_range(0..js))).collect();
            TreeWord { omega, letters }
        };
        for _ in 0..60 {
            let a = random_word(&mut rng);
            let b = random_word(&mut rng);
            let (ga, gb) = (word_matrix(&g, &a).unwrap(), word_matrix(&g, &b).unwrap());
            assert_eq!(tree_distance(&g, &ga, &gb).unwrap() as usize, word_distance(&a, &b), "{a} / {b}");
            assert_eq!(ga.norm_exp(), Some(a.len() as i64));
        }
        let shared = TreeWord { omega: false, letters: vec![(1, 0), (2, 0)] };
        let other = TreeWord { omega: false, letters: vec![(1, 0), (3, 0)] };
        let (x, y) = (word_matrix(&g, &shared).unwrap(), word_matrix(&g, &other).unwrap());
        assert_eq!(tree_distance(&g, &x, &y).unwrap(), 2);
        assert_eq!(tree_distance(&g, &x, &x).unwrap(), 0);
        assert_eq!(tree_distance(&g, &g.identity(), &g.a(1, 0)).unwrap(), 1);
    }
}

#[test]
fn every_vertex_has_the_right_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (kind, degree) in [(ModelKind::Ternary, 6), (ModelKind::QuasiSplit, 26)] {
        let ctx = PadicCtx::new(5, 30).unwrap();
        let g = ModelGroup::new(kind, &ctx).unwrap();
        for _ in 0..3 {
            let v = g.random_k(&mut rng, 6).mul(&g.a(rng.random_range(0..3), 0));
            let nb = neighbours(&g, &v).unwrap();
            assert_eq!(nb.len(), degree);
            for (i, a) in nb.iter().enumerate() {
                assert_eq!(tree_distance(&g, &v, a).unwrap(), 1);
                for b in &nb[i + 1..] {
                    assert_eq!(tree_distance(&g, a, b).unwrap(), 2);
                }
            }
        }
    }
}

#[test]
fn keys_ignore_the_representative() {
    let ctx = PadicCtx::new(13, 24).unwrap();
    let g = ModelGroup::new(ModelKind::QuasiSplit, &ctx).unwrap();
    let r = ModRing::new(13, 6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let w = TreeWord { omega: true, letters: vec![(4, 7), (0, 12)] };
    let m = word_matrix(&g, &w).unwrap();
    let res = |x: &ortholat::PadicMat| -> Vec<u64> { x.data().iter().map(|e| r.residue(&e.shift(3)).unwrap()).collect() };
    let base = lattice_key(&r, 4, &res(&m));
    for _ in 0..20 {
        let k = g.random_k(&mut rng, 10);
        assert_eq!(lattice_key(&r, 4, &res(&m.mul(&k))), base);
    }
}
