//! Right cosets `gK`, tree words and the tree metric.
//!
//! A coset `gK` with `‖g‖_p = p^ℓ` is determined by the lattice `g Z_p^n`,
//! which lies between `p^{-ℓ} Z_p^n` and `p^ℓ Z_p^n`. Counting uses the
//! canonical echelon form of `p^ℓ g Z_p^n / p^{2ℓ} Z_p^n` over machine
//! integers.

use std::hash::{DefaultHasher, Hash, Hasher};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::model::{ModelGroup, ModelKind};
use crate::groups::volume::BallKind;
use crate::matrix::Mat;
use crate::padic::{Padic, PadicCtx};

/// A word `[ω] u_{i₁,j₁} ⋯ u_{i_k,j_k}`; `j` is always 0 in the ternary case.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TreeWord {
    pub omega: bool,
    pub letters: Vec<(u64, u64)>,
}

impl TreeWord {
    pub fn len(&self) -> usize {
        self.letters.len() + self.omega as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn symbols(&self) -> Vec<Option<(u64, u64)>> {
        let mut s = Vec::with_capacity(self.len());
        if self.omega {
            s.push(None);
        }
        s.extend(self.letters.iter().map(|&l| Some(l)));
        s
    }
}

impl std::fmt::Display for TreeWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.omega {
            parts.push("w".into());
        }
        parts.extend(self.letters.iter().map(|(i, j)| format!("u{i}.{j}")));
        if parts.is_empty() {
            f.write_str("e")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

fn rank_one(group: &ModelGroup) -> Result<()> {
    if group.kind == ModelKind::Split {
        return Err(Error::invalid("tree words exist for the rank one groups only"));
    }
    Ok(())
}

/// `u_{i,j}`: the lower unipotent with parameters `(-i, -j)` times `a_p`.
pub fn letter(group: &ModelGroup, i: u64, j: u64) -> Result<Mat<Padic>> {
    rank_one(group)?;
    let c = group.ctx();
    let mut u = group.u3(&c.int(-(i as i64)));
    if group.kind == ModelKind::QuasiSplit {
        u = u.mul(&group.u4(&c.int(-(j as i64)))?);
    }
    Ok(u.mul(&group.a(1, 0)))
}

/// `ω a_p`, the neighbour of `K` not of the form `u_{i,j} K`.
pub fn tree_omega(group: &ModelGroup) -> Result<Mat<Padic>> {
    rank_one(group)?;
    Ok(group.omega().mul(&group.a(1, 0)))
}

pub fn word_matrix(group: &ModelGroup, w: &TreeWord) -> Result<Mat<Padic>> {
    let mut g = if w.omega { tree_omega(group)? } else { group.identity() };
    for &(i, j) in &w.letters {
        g = g.mul(&letter(group, i, j)?);
    }
    Ok(g)
}

fn letter_range(kind: ModelKind, p: u64) -> Vec<(u64, u64)> {
    let js = if kind == ModelKind::QuasiSplit { p } else { 1 };
    (0..p).flat_map(|i| (0..js).map(move |j| (i, j))).collect()
}

fn all_words(kind: ModelKind, p: u64, len: usize) -> Vec<Vec<(u64, u64)>> {
    let letters = letter_range(kind, p);
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                letters.iter().map(move |&l| {
                    let mut v = w.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
    }
    out
}

/// Words labelling the cosets of `K` in `K a_p^ℓ K`: `S^ℓ` followed by
/// `ω S^{ℓ-1}`, each block in lexicographic order.
pub fn sphere_words(kind: ModelKind, p: u64, l: usize) -> Result<Vec<TreeWord>> {
    if kind == ModelKind::Split {
        return Err(Error::invalid("tree words exist for the rank one groups only"));
    }
    if l == 0 {
        return Ok(vec![TreeWord { omega: false, letters: vec![] }]);
    }
    let mut out: Vec<TreeWord> =
        all_words(kind, p, l).into_iter().map(|letters| TreeWord { omega: false, letters }).collect();
    out.extend(all_words(kind, p, l - 1).into_iter().map(|letters| TreeWord { omega: true, letters }));
    Ok(out)
}

/// Coset representatives of the sphere of radius `ℓ`, as words and matrices.
pub fn coset_representatives(group: &ModelGroup, l: usize) -> Result<Vec<(TreeWord, Mat<Padic>)>> {
    sphere_words(group.kind, group.p(), l)?
        .into_par_iter()
        .map(|w| word_matrix(group, &w).map(|g| (w, g)))
        .collect()
}

/// `d(gK, hK) = log_p ‖g⁻¹h‖_p`.
pub fn tree_distance(group: &ModelGroup, g: &Mat<Padic>, h: &Mat<Padic>) -> Result<i64> {
    group.inverse(g).mul(h).norm_exp().ok_or(Error::ZeroAtPrecision)
}

/// Distance between the vertices of two words, from their longest common
/// prefix.
pub fn word_distance(a: &TreeWord, b: &TreeWord) -> usize {
    let (sa, sb) = (a.symbols(), b.symbols());
    let common = sa.iter().zip(&sb).take_while(|(x, y)| x == y).count();
    sa.len() + sb.len() - 2 * common
}

/// The `p²+1` (or `p+1`) neighbours `g u_{i,j}` and `g ω` of `gK`.
pub fn neighbours(group: &ModelGroup, g: &Mat<Padic>) -> Result<Vec<Mat<Padic>>> {
    let mut out: Vec<Mat<Padic>> = letter_range(group.kind, group.p())
        .into_iter()
        .map(|(i, j)| letter(group, i, j).map(|u| g.mul(&u)))
        .collect::<Result<_>>()?;
    out.push(g.mul(&tree_omega(group)?));
    Ok(out)
}

/// Arithmetic modulo `p^e` on `u64`.
#[derive(Clone, Copy, Debug)]
pub struct ModRing {
    pub p: u64,
    pub e: u32,
    pub m: u64,
}

impl ModRing {
    pub fn new(p: u64, e: u32) -> Result<ModRing> {
        let m = p.checked_pow(e).filter(|&m| m < 1 << 62).ok_or_else(|| Error::invalid("modulus exceeds 62 bits"))?;
        Ok(ModRing { p, e, m })
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.m < 1 << 32 {
            return a * b % self.m;
        }
        ((a as u128 * b as u128) % self.m as u128) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.m as i64) as u64
    }

    /// Valuation, `e` for zero.
    pub fn val(&self, mut x: u64) -> u32 {
        if x == 0 {
            return self.e;
        }
        let mut v = 0;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }

    pub fn pow_p(&self, k: u32) -> u64 {
        self.p.pow(k)
    }

    /// Inverse of a unit.
    pub fn inv(&self, a: u64) -> u64 {
        let (mut r0, mut r1) = (self.m as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1, "not a unit");
        t0.rem_euclid(self.m as i128) as u64
    }

    /// Reduction of an integral p-adic number.
    pub fn residue(&self, x: &Padic) -> Result<u64> {
        x.residue_u64(self.e)
    }

    pub fn mat_mul(&self, n: usize, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = a[i * n + k];
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] = self.add(out[i * n + j], self.mul(x, b[k * n + j]));
                }
            }
        }
        out
    }
}

/// Canonical upper triangular echelon form of the column span of the
/// `n × n` row-major matrix `a` modulo `p^e`, as `n` diagonal exponents
/// followed by the reduced entries above the diagonal, column by column.
pub fn lattice_key(r: &ModRing, n: usize, a: &[u64]) -> Vec<u64> {
    let mut key = [0u64; 10];
    let len = lattice_key_into(r, n, a, &mut key);
    key[..len].to_vec()
}

fn lattice_key_into(r: &ModRing, n: usize, a: &[u64], key: &mut [u64; 10]) -> usize {
    assert!(n <= 4 && a.len() == n * n);
    // generators, plus one extra per processed row
    let mut pool = [[0u64; 4]; 8];
    let mut len = n;
    for j in 0..n {
        for i in 0..n {
            pool[j][i] = a[i * n + j];
        }
    }
    let mut basis = [[0u64; 4]; 4];
    let mut exps = [r.e; 4];
    for row in (0..n).rev() {
        let mut best: Option<(u32, usize)> = None;
        for (k, g) in pool[..len].iter().enumerate() {
            let v = r.val(g[row]);
            if best.is_none_or(|(bv, _)| v < bv) {
                best = Some((v, k));
            }
        }
        let Some((v, k)) = best else { continue };
        if v >= r.e {
            continue;
        }
        let mut g = pool[k];
        pool[k] = pool[len - 1];
        len -= 1;
        let pv = r.pow_p(v);
        let u = r.inv(g[row] / pv);
        for x in g.iter_mut().take(n) {
            *x = r.mul(*x, u);
        }
        for h in pool[..len].iter_mut() {
            let q = h[row] / pv;
            if q != 0 {
                for i in 0..n {
                    h[i] = r.sub(h[i], r.mul(q, g[i]));
                }
            }
        }
        let s = r.pow_p(r.e - v);
        let mut extra = [0u64; 4];
        for i in 0..n {
            extra[i] = r.mul(g[i], s);
        }
        pool[len] = extra;
        len += 1;
        let mut w = 0;
        for k in 0..len {
            if pool[k].iter().any(|&x| x != 0) {
                pool[w] = pool[k];
                w += 1;
            }
        }
        len = w;
        basis[row] = g;
        exps[row] = v;
    }
    for c in 0..n {
        for i in (0..c).rev() {
            if exps[i] >= r.e {
                continue;
            }
            let q = basis[c][i] / r.pow_p(exps[i]);
            if q != 0 {
                let bi = basis[i];
                for t in 0..=i {
                    basis[c][t] = r.sub(basis[c][t], r.mul(q, bi[t]));
                }
            }
        }
    }
    for i in 0..n {
        key[i] = exps[i] as u64;
    }
    let mut w = n;
    for c in 0..n {
        for i in 0..c {
            key[w] = basis[c][i];
            w += 1;
        }
    }
    w
}

fn key_fingerprint(r: &ModRing, n: usize, a: &[u64]) -> u64 {
    let mut key = [0u64; 10];
    let len = lattice_key_into(r, n, a, &mut key);
    fingerprint(&key[..len])
}

fn fingerprint(key: &[u64]) -> u64 {
    let mut h = DefaultHasher::new();
    key.hash(&mut h);
    h.finish()
}

/// Outcome of enumerating the cosets in one sphere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetCount {
    pub level: u32,
    /// Representatives enumerated.
    pub words: u64,
    /// Pairwise distinct lattice fingerprints among them. Equal fingerprints
    /// are necessary for equal cosets, so `distinct == words` certifies that
    /// all representatives are inequivalent.
    pub distinct: u64,
    /// Every representative has norm exactly `p^ℓ`.
    pub norms_exact: bool,
}

fn distinct(mut fps: Vec<u64>) -> u64 {
    fps.par_sort_unstable();
    fps.dedup();
    fps.len() as u64
}

fn integral_residues(r: &ModRing, g: &Mat<Padic>, shift: i64) -> Result<Vec<u64>> {
    g.data().iter().map(|x| r.residue(&x.shift(shift))).collect()
}

fn rank_one_sphere(kind: ModelKind, ctx: &std::sync::Arc<PadicCtx>, eta: i64, l: u32) -> Result<CosetCount> {
    let p = ctx.p();
    let group = ModelGroup::with_eta(kind, ctx, eta);
    let n = group.dim();
    let r = ModRing::new(p, 2 * l)?;
    let letters = letter_range(kind, p);
    let mats: Vec<Vec<u64>> =
        letters.iter().map(|&(i, j)| integral_residues(&r, &letter(&group, i, j)?, 1)).collect::<Result<_>>()?;
    let om = integral_residues(&r, &tree_omega(&group)?, 1)?;
    // a fixed element of K on the right: keys must not depend on the representative
    let k0 = integral_residues(&r, &group.u3(&ctx.one()).mul(&group.v3(&ctx.int(2))).mul(&group.omega()), 0)?;

    fn walk(r: &ModRing, n: usize, mats: &[Vec<u64>], prefix: &[u64], depth: u32, k0: &[u64], out: &mut Vec<u64>, ok: &mut bool) {
        if depth == 0 {
            if prefix.iter().all(|&x| x % r.p == 0) {
                *ok = false;
            }
            out.push(key_fingerprint(r, n, &r.mat_mul(n, prefix, k0)));
            return;
        }
        for m in mats {
            walk(r, n, mats, &r.mat_mul(n, prefix, m), depth - 1, k0, out, ok);
        }
    }

    let mut starts: Vec<(Vec<u64>, u32)> = mats.iter().map(|m| (m.clone(), l - 1)).collect();
    starts.push((om, l - 1));
    let parts: Vec<(Vec<u64>, bool)> = starts
        .par_iter()
        .map(|(start, depth)| {
            let mut out = Vec::new();
            let mut ok = true;
            walk(&r, n, &mats, start, *depth, &k0, &mut out, &mut ok);
            (out, ok)
        })
        .collect();
    let norms_exact = parts.iter().all(|(_, ok)| *ok);
    let fps: Vec<u64> = parts.into_iter().flat_map(|(v, _)| v).collect();
    Ok(CosetCount { level: l, words: fps.len() as u64, distinct: distinct(fps), norms_exact })
}

/// The `SL₂` sphere representatives `g = [[p^k, n p^{-L}], [0, p^{-k}]]` of
/// norm exactly `p^L`, as the integers `(p^{L+k}, n, p^{L-k})` of `p^L g`.
fn sl2_sphere(p: u64, l: u32) -> Vec<(u64, u64, u64)> {
    let li = l as i64;
    let mut out = Vec::new();
    for k in -li..=li {
        let top = p.pow((li + k) as u32);
        let bottom = p.pow((li - k) as u32);
        for n in 0..top {
            if k.abs() < li && n % p == 0 {
                continue;
            }
            out.push((top, n, bottom));
        }
    }
    out
}

fn sl2_count(p: u64, l: u32) -> Result<CosetCount> {
    let r = ModRing::new(p, 2 * l)?;
    let k0 = [1u64, 1, 1, 2];
    let reps: Vec<[u64; 4]> = sl2_sphere(p, l).into_iter().map(|(a, b, d)| [a % r.m, b, 0, d % r.m]).collect();
    let norms_exact = reps.iter().all(|g| g.iter().any(|&x| x % p != 0));
    let fps: Vec<u64> =
        reps.par_iter().map(|g| key_fingerprint(&r, 2, &r.mat_mul(2, g, &k0))).collect();
    Ok(CosetCount { level: l, words: fps.len() as u64, distinct: distinct(fps), norms_exact })
}

/// `ψ(g, h) v = g v h⁻¹` in the basis `(E₁₁, E₂₂, E₁₂, -E₂₁)`, from `g` and
/// `h⁻¹` given row-major.
pub fn psi_split_mod(r: &ModRing, g: &[u64; 4], hinv: &[u64; 4]) -> [u64; 16] {
    // g E_ab h⁻¹ = (column a of g)(row b of h⁻¹), with signs for -E₂₁
    let terms: [(usize, usize, bool); 4] = [(0, 0, false), (1, 1, false), (0, 1, false), (1, 0, true)];
    let mut out = [0u64; 16];
    for (col, &(a, b, neg)) in terms.iter().enumerate() {
        let x = |i: usize, j: usize| r.mul(g[i * 2 + a], hinv[b * 2 + j]);
        let coords = [x(0, 0), x(1, 1), x(0, 1), r.sub(0, x(1, 0))];
        for (row, &c) in coords.iter().enumerate() {
            out[row * 4 + col] = if neg { r.sub(0, c) } else { c };
        }
    }
    out
}

fn so22_count(p: u64, l: u32) -> Result<CosetCount> {
    let r = ModRing::new(p, 2 * l)?;
    let mut fps = Vec::new();
    let mut norms_exact = true;
    for m in 0..=l {
        // p^m g and p^{l-m} h⁻¹, reduced modulo p^{2l}
        let gs: Vec<[u64; 4]> = if m == 0 {
            vec![[1, 0, 0, 1]]
        } else {
            sl2_sphere(p, m).into_iter().map(|(a, b, d)| [a % r.m, b, 0, d % r.m]).collect()
        };
        let hs: Vec<[u64; 4]> = if m == l {
            vec![[1, 0, 0, 1]]
        } else {
            sl2_sphere(p, l - m).into_iter().map(|(a, b, d)| [d % r.m, r.sub(0, b), 0, a % r.m]).collect()
        };
        let part: Vec<(u64, bool)> = gs
            .par_iter()
            .flat_map_iter(|g| {
                let r = &r;
                hs.iter().map(move |h| {
                    let x = psi_split_mod(r, g, h);
                    let ok = x.iter().any(|&v| v % p != 0);
                    (key_fingerprint(r, 4, &x), ok)
                })
            })
            .collect();
        norms_exact &= part.iter().all(|(_, ok)| *ok);
        fps.extend(part.into_iter().map(|(f, _)| f));
    }
    Ok(CosetCount { level: l, words: fps.len() as u64, distinct: distinct(fps), norms_exact })
}

/// Enumerates the cosets of `K` in the sphere of radius `ℓ` and certifies
/// that they are pairwise distinct.
pub fn count_sphere(kind: BallKind, p: u64, eta: i64, l: u32) -> Result<CosetCount> {
    if l == 0 {
        return Ok(CosetCount { level: 0, words: 1, distinct: 1, norms_exact: true });
    }
    match kind {
        BallKind::So21 | BallKind::So31 => {
            let ctx = PadicCtx::new(p, 2 * l + 4)?;
            let mk = if kind == BallKind::So21 { ModelKind::Ternary } else { ModelKind::QuasiSplit };
            rank_one_sphere(mk, &ctx, eta, l)
        }
        BallKind::Sl2 => sl2_count(p, l),
        BallKind::So22Plus => so22_count(p, l),
    }
}

/// Sphere counts for radii `0..=ℓ`.
pub fn count_ball(kind: BallKind, p: u64, eta: i64, l: u32) -> Result<Vec<CosetCount>> {
    (0..=l).map(|k| count_sphere(kind, p, eta, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_of_identity_and_scalars() {
        let r = ModRing::new(5, 4).unwrap();
        let e = [1, 0, 0, 1];
        assert_eq!(lattice_key(&r, 2, &e), vec![0, 0, 0]);
        let a = [25, 0, 0, 1];
        assert_eq!(lattice_key(&r, 2, &a), vec![2, 0, 0]);
        // the same lattice from a different generating matrix
        let b = [25, 25, 0, 1];
        assert_eq!(lattice_key(&r, 2, &b), lattice_key(&r, 2, &a));
    }

    #[test]
    fn small_spheres() {
        for kind in BallKind::ALL {
            let c = count_sphere(kind, 5, 2, 1).unwrap();
            assert_eq!(c.words, c.distinct, "{kind}");
            assert!(c.norms_exact);
        }
    }

    #[test]
    fn word_metric() {
        let a = TreeWord { omega: false, letters: vec![(1, 0), (2, 0)] };
        let b = TreeWord { omega: false, letters: vec![(1, 0), (3, 0)] };
        assert_eq!(word_distance(&a, &b), 2);
        let c = TreeWord { omega: true, letters: vec![(1, 0)] };
        assert_eq!(word_distance(&a, &c), 4);
    }
}
