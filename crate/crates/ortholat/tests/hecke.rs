use ortholat::hecke::*;
use ortholat::sphere::{enumerate_sphere, SpherePoint};

fn pt(v: &[i64]) -> SpherePoint {
    SpherePoint::new(v.to_vec()).unwrap()
}

#[test]
fn reflexive_and_signed_permutation_witnesses() {
    let v = pt(&[1, 1, 1, 2]);
    let w = hecke_related(&v, &v, 5, 1).unwrap().unwrap();
    assert_eq!(w.k, 0);
    assert_eq!(w.m, vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]);
    let u = pt(&[-2, 1, 1, -1]);
    let w = hecke_related(&v, &u, 5, 1).unwrap().unwrap();
    assert_eq!(w.k, 0);
    assert!(w.verify(5));
    assert!(w.m.iter().flatten().all(|x| x.abs() <= 1));
}

#[test]
fn rejects_bad_primes() {
    let v = pt(&[1, 2, 0, 0]);
    assert!(hecke_related(&v, &v, 5, 1).is_err());
    assert!(hecke_related(&v, &v, 9, 1).is_err());
    assert!(hecke_classes(4, 5, 5, 1).is_err());
}

#[test]
fn rotation_counts() {
    assert_eq!(scaled_rotations(4, 5, 0).len(), 192);
    assert_eq!(scaled_rotations(4, 5, 1).len(), 18624);
    for m in scaled_rotations(4, 3, 1) {
        let w = ScaledRotationWitness { k: 1, m, source: vec![0; 4], target: vec![0; 4] };
        assert!(w.verify(3));
    }
}

#[test]
fn unit_sphere_in_five_dimensions() {
    let c = hecke_classes(5, 1, 3, 0).unwrap();
    assert_eq!(c.sizes(), vec![10]);
}

#[test]
fn level_one_merges_integral_orbits() {
    let c0 = hecke_classes(4, 21, 5, 0).unwrap();
    let c1 = hecke_classes(4, 21, 5, 1).unwrap();
    let mut s0 = c0.sizes();
    s0.sort();
    assert_eq!(s0, vec![64, 192]);
    assert_eq!(c1.sizes(), vec![256]);
    let a = pt(&[0, 1, 2, 4]);
    let b = pt(&[2, 2, 2, 3]);
    let w = hecke_related(&a, &b, 5, 1).unwrap().unwrap();
    assert_eq!(w.k, 1);
    assert!(w.verify(5));
    assert!(hecke_related(&a, &b, 5, 0).unwrap().is_none());
}

#[test]
fn witness_algebra_on_d7() {
    let pts = enumerate_sphere(4, 7).unwrap();
    let mut ws = vec![vec![None; pts.len()]; pts.len()];
    for (i, v) in pts.iter().enumerate() {
        for (j, w) in pts.iter().enumerate() {
            ws[i][j] = hecke_related(v, w, 5, 1).unwrap();
        }
    }
    for i in 0..pts.len() {
        assert!(ws[i][i].is_some());
        for j in 0..pts.len() {
            let Some(w) = &ws[i][j] else { continue };
            assert!(w.verify(5));
            let t = w.transpose();
            assert!(t.verify(5));
            assert!(ws[j][i].is_some());
        }
    }
    for i in (0..pts.len()).step_by(3) {
        for j in 0..pts.len() {
            for l in (0..pts.len()).step_by(5) {
                if let (Some(a), Some(b)) = (&ws[i][j], &ws[j][l]) {
                    let c = a.compose(b).unwrap();
                    assert_eq!(c.k, a.k + b.k);
                    assert!(c.verify(5));
                }
            }
        }
    }
}

#[test]
fn d7_partition_fixture() {
    let c = hecke_classes(4, 7, 5, 1).unwrap();
    let expected: HeckeFixture = serde_json::from_str(include_str!("fixtures/hecke_d4_D7_p5_k1.json")).unwrap();
    assert_eq!(c.classes, expected.classes);
}

#[derive(serde::Deserialize)]
struct HeckeFixture {
    classes: Vec<Vec<Vec<i64>>>,
}

#[test]
fn local_certificates() {
    let pts = enumerate_sphere(4, 21).unwrap();
    for w in pts.iter().step_by(7) {
        for v in pts.iter().step_by(11) {
            let c = local_certificate(v, w, 5).unwrap();
            assert!(c.verify(v, w, 5));
        }
    }
}

#[test]
fn stabilizers() {
    let v = pt(&[1, 1, 1, 2]);
    let s = find_small_stabilizer(&v, 5, 1, default_norm_bound(5)).unwrap();
    let k0 = s.iter().filter(|w| w.k == 0).count();
    assert_eq!(k0, 3);
    assert!(s.iter().any(|w| w.k == 1 && w.m.iter().flatten().any(|x| x % 5 != 0)));
    assert!(s.iter().all(|w| w.verify(5)));
}
