use ortholat::forms::{
    check_diagonalization, choose_prime, classify, diagonalize, diagonalize_zp, verify_conjugation,
    DEFAULT_PRIME_CUTOFF,
};
use ortholat::groups::ModelKind;
use ortholat::padic::{is_prime, PadicCtx};
use ortholat::sphere::{int_det, ortho_lattice, sphere_orbit_reps, SpherePoint};
use ortholat::Mat;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_symmetric<R: Rng>(rng: &mut R, n: usize, p: i64) -> Mat<i64> {
    let mut a = Mat::from_fn(n, n, |_, _| 0i64);
    for i in 0..n {
        for j in i..n {
            let x = rng.random_range(-30..=30) * p.pow(rng.random_range(0..3));
            a[(i, j)] = x;
            a[(j, i)] = x;
        }
    }
    a
}

fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> Mat<i64> {
    let mut u = Mat::<i64>::identity(n);
    for _ in 0..3 * n {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i != j {
            let c = rng.random_range(-2..=2);
            for k in 0..n {
                let x = u[(j, k)];
                u[(i, k)] += c * x;
            }
        } else {
            for k in 0..n {
                u[(i, k)] = -u[(i, k)];
            }
        }
    }
    u
}

#[test]
fn prime_choice_is_least_admissible() {
    for disc in 2..3000u64 {
        let c = choose_prime(disc, DEFAULT_PRIME_CUTOFF).unwrap();
        assert!(c.p >= 17 && c.p % 4 == 1 && disc % c.p != 0 && is_prime(c.p));
        for q in 17..c.p {
            assert!(!(is_prime(q) && q % 4 == 1 && disc % q != 0), "{disc}: {q} is smaller");
        }
    }
    let c = choose_prime(17 * 29 * 37 * 41, 17).unwrap();
    assert_eq!(c.p, 53);
}

#[test]
fn random_forms_diagonalize() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [5u64, 13] {
        let ctx = PadicCtx::new(p, 40).unwrap();
        for n in 2..=5 {
            for _ in 0..100 {
                let a = random_symmetric(&mut rng, n, p as i64);
                let d = diagonalize_zp(&a, &ctx).unwrap();
                let chk = check_diagonalization(&a, &d, 32);
                assert!(chk.all(), "{a:?}: {chk:?}");
            }
        }
    }
}

#[test]
fn padic_and_exact_paths_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let ctx = PadicCtx::new(13, 40).unwrap();
    for _ in 0..50 {
        let a = random_symmetric(&mut rng, 4, 13);
        let exact = diagonalize_zp(&a, &ctx).unwrap();
        let direct = diagonalize(&a.to_padic(&ctx), 13).unwrap();
        assert!(exact.u.congruent(&direct.u, 30));
        for (x, y) in exact.coeffs.iter().zip(&direct.coeffs) {
            assert!(x.congruent(y, 30));
        }
    }
}

#[test]
fn zero_form() {
    let ctx = PadicCtx::new(5, 20).unwrap();
    let a = Mat::from_fn(3, 3, |_, _| 0i64);
    let d = diagonalize_zp(&a, &ctx).unwrap();
    assert!(d.coeffs.iter().all(|c| c.is_zero()));
    assert!(check_diagonalization(&a, &d, 20).all());
}

#[test]
fn orthogonal_lattice_determinant_survives() {
    let ctx = PadicCtx::new(5, 32).unwrap();
    let l = ortho_lattice(&SpherePoint::new(vec![1, 1, 1, 2]).unwrap()).unwrap();
    assert_eq!(int_det(&l.gram), 7);
    let d = diagonalize_zp(&l.gram, &ctx).unwrap();
    let v: i64 = d.coeffs.iter().map(|c| c.valuation().unwrap()).sum();
    assert_eq!(v, 0);
    let cls = classify(&l.gram, &ctx).unwrap();
    assert_eq!(cls.kind, ModelKind::Ternary);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    assert!(verify_conjugation(&l.gram, &cls, 100, 28, &mut rng).unwrap());
}

#[test]
fn split_identity_form_conjugates() {
    let ctx = PadicCtx::new(13, 40).unwrap();
    let a = Mat::<i64>::identity(4);
    let cls = classify(&a, &ctx).unwrap();
    assert_eq!(cls.kind, ModelKind::Split);
    assert_eq!(cls.scale, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    assert!(verify_conjugation(&a, &cls, 100, 32, &mut rng).unwrap());
}

#[test]
fn every_square_pattern_is_handled() {
    let ctx = PadicCtx::new(5, 32).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    // 1, 4 squares and 2, 3 non-squares mod 5
    for pattern in 0..16u32 {
        let c: Vec<i64> = (0..4).map(|i| if pattern >> i & 1 == 1 { 2 } else { 1 }).collect();
        let m = pattern.count_ones();
        let cls = classify(&Mat::diag(&c), &ctx).unwrap();
        let want = if m % 2 == 0 { ModelKind::Split } else { ModelKind::QuasiSplit };
        assert_eq!(cls.kind, want, "{c:?}");
        assert!(verify_conjugation(&Mat::diag(&c), &cls, 20, 28, &mut rng).unwrap());
        let c3 = &c[..3];
        let cls = classify(&Mat::diag(c3), &ctx).unwrap();
        assert_eq!(cls.kind, ModelKind::Ternary);
        assert!(verify_conjugation(&Mat::diag(c3), &cls, 20, 28, &mut rng).unwrap());
    }
}

#[test]
fn small_spheres_classify() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for d in [4usize, 5] {
        for disc in 1..=60i64 {
            let p = choose_prime(disc.max(2) as u64, DEFAULT_PRIME_CUTOFF).unwrap().p;
            let ctx = PadicCtx::new(p, 40).unwrap();
            for rep in sphere_orbit_reps(d, disc).unwrap() {
                let l = ortho_lattice(&SpherePoint::new(rep.v.clone()).unwrap()).unwrap();
                let cls = classify(&l.gram, &ctx).unwrap();
                assert_eq!(cls.kind == ModelKind::Ternary, d == 4);
                assert!(verify_conjugation(&l.gram, &cls, 10, 32, &mut rng).unwrap(), "{:?}", rep.v);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn classification_ignores_base_change(seed in any::<u64>(), n in 3usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = PadicCtx::new(13, 32).unwrap();
        let a = loop {
            let a = random_symmetric(&mut rng, n, 1);
            if int_det(&a) % 13 != 0 {
                break a;
            }
        };
        let u = random_unimodular(&mut rng, n);
        let b = u.mul(&a).mul(&u.transpose());
        let (ca, cb) = (classify(&a, &ctx).unwrap(), classify(&b, &ctx).unwrap());
        prop_assert_eq!(ca.kind, cb.kind);
        prop_assert_eq!(ca.eta, cb.eta);
    }

    #[test]
    fn diagonalization_invariants(seed in any::<u64>(), n in 2usize..=5, big in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = if big { 13 } else { 5 };
        let ctx = PadicCtx::new(p, 40).unwrap();
        let a = random_symmetric(&mut rng, n, p as i64);
        let d = diagonalize_zp(&a, &ctx).unwrap();
        prop_assert!(check_diagonalization(&a, &d, 32).all());
    }
}
