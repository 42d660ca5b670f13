//! Hecke friends on a sphere: points related by a rotation with `p`-power
//! denominators, searched for as integer matrices `M` with
//! `M Mᵀ = p^{2k} I`, `det M = p^{dk}` and `v M = p^k w`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::padic::is_prime;
use crate::scalar::PValued;
use crate::sphere::{enumerate_sphere, SpherePoint};

pub const DEFAULT_K_MAX: u32 = 1;

/// `M` with `M Mᵀ = p^{2k} I`, `det M = p^{dk}` and `v M = p^k w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScaledRotationWitness {
    pub k: u32,
    pub m: Vec<Vec<i64>>,
    pub source: Vec<i64>,
    pub target: Vec<i64>,
}

fn pk(p: u64, k: u32) -> i64 {
    (p as i64).pow(k)
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn int_mat(rows: &[Vec<i64>]) -> Mat<i64> {
    Mat::from_rows(rows.to_vec())
}

fn det_i128(rows: &[Vec<i64>]) -> i128 {
    crate::sphere::int_det(&int_mat(rows))
}

impl ScaledRotationWitness {
    /// The three defining identities, exactly over the integers.
    pub fn verify(&self, p: u64) -> bool {
        let d = self.m.len();
        let s = pk(p, self.k);
        let gram_ok = (0..d).all(|i| (0..d).all(|j| dot(&self.m[i], &self.m[j]) == if i == j { s * s } else { 0 }));
        let det_ok = det_i128(&self.m) == (s as i128).pow(d as u32);
        let vm: Vec<i64> = (0..d).map(|j| (0..d).map(|i| self.source[i] * self.m[i][j]).sum()).collect();
        let image_ok = vm.iter().zip(&self.target).all(|(a, b)| *a == s * b);
        gram_ok && det_ok && image_ok
    }

    /// `Mᵀ` relates `w` to `v`.
    pub fn transpose(&self) -> Self {
        let d = self.m.len();
        let m = (0..d).map(|i| (0..d).map(|j| self.m[j][i]).collect()).collect();
        ScaledRotationWitness { k: self.k, m, source: self.target.clone(), target: self.source.clone() }
    }

    /// `M₁ M₂` relates `v` to `x` when `M₁: v → w` and `M₂: w → x`.
    pub fn compose(&self, next: &Self) -> Result<Self> {
        if self.target != next.source {
            return Err(Error::invalid("witnesses do not chain"));
        }
        let m = int_mat(&self.m).mul(&int_mat(&next.m));
        let rows = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
        Ok(ScaledRotationWitness { k: self.k + next.k, m: rows, source: self.source.clone(), target: next.target.clone() })
    }
}

/// All `x ∈ Z^d` with `‖x‖² = n`, lexicographic.
pub fn vectors_of_norm(d: usize, n: i64) -> Vec<Vec<i64>> {
    fn rec(d: usize, n: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == d {
            if n == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let b = (n as f64).sqrt().floor() as i64 + 1;
        for x in -b..=b {
            if x * x <= n {
                prefix.push(x);
                rec(d, n - x * x, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(d, n, &mut Vec::new(), &mut out);
    out
}

/// Semi-decision for Hecke friendship at level `≤ k_max`: the first
/// witness in lexicographic row order, or `None` (inconclusive).
pub fn hecke_related(v: &SpherePoint, w: &SpherePoint, p: u64, k_max: u32) -> Result<Option<ScaledRotationWitness>> {
    check_pair(v, w, p)?;
    let d = v.dim();
    let (vv, ww) = (v.coords(), w.coords());
    if vv == ww {
        let m = (0..d).map(|i| (0..d).map(|j| (i == j) as i64).collect()).collect();
        return Ok(Some(ScaledRotationWitness { k: 0, m, source: vv.to_vec(), target: ww.to_vec() }));
    }
    // the row with the largest |v_j| is solved from the image condition
    let j = (0..d).max_by_key(|&i| (vv[i].abs(), std::cmp::Reverse(i))).expect("nonempty");
    for k in 0..=k_max {
        let s = pk(p, k);
        let vecs = vectors_of_norm(d, s * s);
        let free: Vec<usize> = (0..d).filter(|&i| i != j).collect();
        let mut rows: Vec<Vec<i64>> = vec![Vec::new(); d];
        if let Some(m) = search_rows(&vecs, &free, 0, &mut rows, &|rows: &mut Vec<Vec<i64>>| {
            let mut last = vec![0i64; d];
            for c in 0..d {
                let rest: i64 = free.iter().map(|&i| vv[i] * rows[i][c]).sum();
                let num = s * ww[c] - rest;
                if num % vv[j] != 0 {
                    return None;
                }
                last[c] = num / vv[j];
            }
            rows[j] = last;
            let cand = ScaledRotationWitness { k, m: rows.clone(), source: vv.to_vec(), target: ww.to_vec() };
            cand.verify(p).then_some(cand)
        }) {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

fn search_rows(
    vecs: &[Vec<i64>],
    free: &[usize],
    depth: usize,
    rows: &mut Vec<Vec<i64>>,
    finish: &dyn Fn(&mut Vec<Vec<i64>>) -> Option<ScaledRotationWitness>,
) -> Option<ScaledRotationWitness> {
    if depth == free.len() {
        return finish(rows);
    }
    let i = free[depth];
    for x in vecs {
        if free[..depth].iter().all(|&r| dot(&rows[r], x) == 0) {
            rows[i] = x.clone();
            if let Some(w) = search_rows(vecs, free, depth + 1, rows, finish) {
                return Some(w);
            }
        }
    }
    None
}

fn check_pair(v: &SpherePoint, w: &SpherePoint, p: u64) -> Result<()> {
    if !is_prime(p) || p == 2 {
        return Err(Error::invalid(format!("p = {p} must be an odd prime")));
    }
    if v.dim() != w.dim() || v.disc() != w.disc() {
        return Err(Error::invalid("points must lie on the same sphere"));
    }
    if v.disc() % p as i64 == 0 {
        return Err(Error::invalid(format!("p = {p} divides D = {}", v.disc())));
    }
    Ok(())
}

/// Every `M` with `M Mᵀ = p^{2k} I` and `det M = p^{dk}`.
pub fn scaled_rotations(d: usize, p: u64, k: u32) -> Vec<Vec<Vec<i64>>> {
    let s = pk(p, k);
    let vecs = vectors_of_norm(d, s * s);
    let target = (s as i128).pow(d as u32);
    vecs.par_iter()
        .flat_map_iter(|first| {
            let mut out = Vec::new();
            let cands: Vec<&Vec<i64>> = vecs.iter().filter(|x| dot(first, x) == 0).collect();
            let mut rows = vec![first.clone()];
            extend(&mut rows, &cands, d, target, &mut out);
            out
        })
        .collect()
}

fn extend(rows: &mut Vec<Vec<i64>>, cands: &[&Vec<i64>], d: usize, det: i128, out: &mut Vec<Vec<Vec<i64>>>) {
    if rows.len() == d {
        if det_i128(rows) == det {
            out.push(rows.clone());
        }
        return;
    }
    for (idx, x) in cands.iter().enumerate() {
        let next: Vec<&Vec<i64>> = cands[idx + 1..].iter().chain(&cands[..idx]).filter(|y| dot(x, y) == 0).copied().collect();
        rows.push((*x).clone());
        extend(rows, &next, d, det, out);
        rows.pop();
    }
}

/// Certificate for the `SO_d(Z_p)` side condition: `b ∈ SO_d(Z_(p))`
/// with `v b = w`, a product of two reflections with `p`-unit norms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalCertificate {
    pub b: Mat<BigRational>,
}

fn reflection(a: &[BigRational]) -> Mat<BigRational> {
    let d = a.len();
    let qa: BigRational = a.iter().map(|x| x * x).sum();
    let two = BigRational::from_integer(BigInt::from(2));
    Mat::from_fn(d, d, |i, j| {
        let delta = if i == j { BigRational::one() } else { BigRational::zero() };
        delta - &two * &a[i] * &a[j] / &qa
    })
}

fn to_q(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
}

fn is_p_unit(x: &BigRational, p: u64) -> bool {
    x.pval(p) == Some(0)
}

/// Exhibits `b ∈ SO_d(Z_(p))` with `v b = w`; requires `p ∤ 2D`.
pub fn local_certificate(v: &SpherePoint, w: &SpherePoint, p: u64) -> Result<LocalCertificate> {
    check_pair(v, w, p)?;
    let d = v.dim();
    let (vq, wq) = (to_q(v.coords()), to_q(w.coords()));
    let norm = |a: &[BigRational]| a.iter().map(|x| x * x).sum::<BigRational>();
    let diff: Vec<BigRational> = vq.iter().zip(&wq).map(|(a, b)| a - b).collect();
    let sum: Vec<BigRational> = vq.iter().zip(&wq).map(|(a, b)| a + b).collect();
    let b = if diff.iter().all(|x| x.is_zero()) {
        Mat::identity_like(d, &BigRational::zero())
    } else if is_p_unit(&norm(&diff), p) {
        // s_{v−w} sends v to w; a reflection fixing w restores det 1
        let disc = BigRational::from_integer(BigInt::from(w.disc()));
        let fix = (0..)
            .flat_map(|n: i64| vectors_of_norm(d, n))
            .map(|u| {
                let uq = to_q(&u);
                let uw: BigRational = uq.iter().zip(&wq).map(|(a, b)| a * b).sum();
                uq.iter().zip(&wq).map(|(a, b)| &disc * a - &uw * b).collect::<Vec<_>>()
            })
            .find(|u| is_p_unit(&norm(u), p))
            .expect("an anisotropic vector orthogonal to w exists");
        reflection(&diff).mul(&reflection(&fix))
    } else {
        // Q(v+w) = 4D − Q(v−w) is a unit; s_{v+w} sends v to −w, s_w fixes the sign
        reflection(&sum).mul(&reflection(&wq))
    };
    let cert = LocalCertificate { b };
    if !cert.verify(v, w, p) {
        return Err(Error::internal("local certificate failed verification"));
    }
    Ok(cert)
}

impl LocalCertificate {
    pub fn verify(&self, v: &SpherePoint, w: &SpherePoint, p: u64) -> bool {
        let d = v.dim();
        let vb = self.b.left_apply(&to_q(v.coords()));
        let integral = self.b.iter().all(|x| x.pval(p).is_none_or(|e| e >= 0));
        integral
            && vb == to_q(w.coords())
            && self.b.mul(&self.b.transpose()) == Mat::identity_like(d, &BigRational::zero())
            && self.b.det().is_one()
    }
}

/// The partition of a sphere generated by witnesses of level `≤ k_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeckeClasses {
    pub d: usize,
    pub disc: i64,
    pub p: u64,
    pub k_max: u32,
    /// Classes sorted by smallest member; members sorted.
    pub classes: Vec<Vec<Vec<i64>>>,
}

impl HeckeClasses {
    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.len()).collect()
    }

    pub fn class_of(&self, v: &[i64]) -> Option<usize> {
        self.classes.iter().position(|c| c.binary_search(&v.to_vec()).is_ok())
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut x = x;
        while self.0[x] != r {
            let next = self.0[x];
            self.0[x] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Union-find closure of all witnesses with `k ≤ k_max`. Each scaled
/// rotation is applied to every point, which yields exactly the edges a
/// pairwise search would find.
pub fn hecke_classes(d: usize, disc: i64, p: u64, k_max: u32) -> Result<HeckeClasses> {
    let points = enumerate_sphere(d, disc)?;
    if let Some(v) = points.first() {
        check_pair(v, v, p)?;
    }
    let index: BTreeMap<Vec<i64>, usize> = points.iter().enumerate().map(|(i, v)| (v.coords().to_vec(), i)).collect();
    let mut uf = UnionFind((0..points.len()).collect());
    for k in 0..=k_max {
        let s = pk(p, k);
        let edges: Vec<(usize, usize)> = scaled_rotations(d, p, k)
            .par_iter()
            .flat_map_iter(|m| {
                let index = &index;
                points.iter().enumerate().filter_map(move |(i, v)| {
                    let vm: Vec<i64> = (0..d).map(|c| (0..d).map(|r| v.coords()[r] * m[r][c]).sum()).collect();
                    if vm.iter().any(|x| x % s != 0) {
                        return None;
                    }
                    let w: Vec<i64> = vm.iter().map(|x| x / s).collect();
                    index.get(&w).map(|&j| (i, j))
                })
            })
            .collect();
        for (a, b) in edges {
            uf.union(a, b);
        }
    }
    let mut groups: BTreeMap<usize, Vec<Vec<i64>>> = BTreeMap::new();
    for (i, v) in points.iter().enumerate() {
        let r = uf.find(i);
        groups.entry(r).or_default().push(v.coords().to_vec());
    }
    let mut classes: Vec<Vec<Vec<i64>>> = groups.into_values().collect();
    classes.sort();
    Ok(HeckeClasses { d, disc, p, k_max, classes })
}

/// Witnesses fixing `v` with `k ≤ k_max` and entries bounded by `norm_bound`.
pub fn find_small_stabilizer(v: &SpherePoint, p: u64, k_max: u32, norm_bound: i64) -> Result<Vec<ScaledRotationWitness>> {
    check_pair(v, v, p)?;
    let d = v.dim();
    let mut out = Vec::new();
    for k in 0..=k_max {
        let s = pk(p, k);
        for m in scaled_rotations(d, p, k) {
            if m.iter().flatten().any(|x| x.abs() > norm_bound) {
                continue;
            }
            let w = ScaledRotationWitness { k, m, source: v.coords().to_vec(), target: v.coords().to_vec() };
            let vm: Vec<i64> = (0..d).map(|c| (0..d).map(|r| v.coords()[r] * w.m[r][c]).sum()).collect();
            if vm.iter().zip(v.coords()).all(|(a, b)| *a == s * b) {
                out.push(w);
            }
        }
    }
    out.sort_by(|a, b| (a.k, &a.m).cmp(&(b.k, &b.m)));
    Ok(out)
}

/// Default entry bound `16 p²`.
pub fn default_norm_bound(p: u64) -> i64 {
    16 * (p as i64).pow(2)
}
