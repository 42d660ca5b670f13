//! Exponential coordinates on congruence subgroups: `p`-adic exp/log and
//! the digit-by-digit lifting that writes `g ∈ K[m]` as `u₁(t₁)···u_k(t_k)`
//! with `u_i(t) = exp(t v_i)`.

use std::sync::Arc;

use num_rational::BigRational;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::ModelKind;
use crate::matrix::Mat;
use crate::padic::{pow_mod, Padic, PadicCtx};

use super::algebra::Space;
use super::complement::{adjoint, exp_nilpotent, Complement};

/// The groups on which coordinates are exercised.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CoordinateGroup {
    /// A model group, with the nilpotent basis `Ad(exp tY)` of highest
    /// weight vectors, `t = 0, 1, 2`.
    Model(ModelKind),
    /// `SL_{d−1}`, with the basis from the generation certificate.
    Special(ModelKind),
}

impl CoordinateGroup {
    pub const ALL: [CoordinateGroup; 6] = [
        CoordinateGroup::Model(ModelKind::Ternary),
        CoordinateGroup::Model(ModelKind::QuasiSplit),
        CoordinateGroup::Model(ModelKind::Split),
        CoordinateGroup::Special(ModelKind::Ternary),
        CoordinateGroup::Special(ModelKind::QuasiSplit),
        CoordinateGroup::Special(ModelKind::Split),
    ];

    pub fn name(&self) -> String {
        match self {
            CoordinateGroup::Model(k) => k.name().to_string(),
            CoordinateGroup::Special(ModelKind::Ternary) => "sl3".into(),
            CoordinateGroup::Special(k) => format!("sl4-{}", k.name()),
        }
    }

    /// A `Z_p`-basis of `𝔤[0]` made of nilpotent elements.
    pub fn nilpotent_basis(&self, p: u64, lambda: i64) -> Result<Vec<Mat<BigRational>>> {
        match *self {
            CoordinateGroup::Model(kind) => {
                let c = Complement::new(kind, Space::H, p, lambda)?;
                let mut out = Vec::new();
                for comp in &c.decomposition.components {
                    for t in 0..=2 {
                        let n = exp_nilpotent(&c.triple.y.scale(&BigRational::from_integer(t.into())))?;
                        out.push(adjoint(&n, &comp.chain[0])?);
                    }
                }
                Ok(out)
            }
            CoordinateGroup::Special(kind) => {
                let c = Complement::new(kind, Space::S2, p, lambda)?;
                let r = c.highest_weight_vector().clone();
                let mut out = c.n_vectors(&r, &c.n_set())?;
                out.extend(c.m_vectors(&r)?);
                Ok(out)
            }
        }
    }
}

/// `exp(x)` by its series for `x ≡ 0 mod p`, to the context precision.
pub fn exp_series(x: &Mat<Padic>) -> Result<Mat<Padic>> {
    let ctx = x.ctx().clone();
    if !x.iter().all(|e| e.valuation_lower_bound() >= 1) {
        return Err(Error::invalid("exp_series needs x ≡ 0 mod p"));
    }
    let target = ctx.prec() as i64;
    let mut acc = Mat::identity_like(x.rows(), &ctx.zero());
    let mut term = acc.clone();
    for k in 1.. {
        term = term.mul(x).scale(&ctx.ratio(1, k));
        if term.iter().all(|e| e.valuation_lower_bound() >= target) {
            break;
        }
        acc = acc.add(&term);
    }
    Ok(acc.truncate_abs(target))
}

/// `log(g)` by its series for `g ≡ e mod p`.
pub fn log_series(g: &Mat<Padic>) -> Result<Mat<Padic>> {
    let ctx = g.ctx().clone();
    let y = g.sub(&Mat::identity_like(g.rows(), &ctx.zero()));
    if !y.iter().all(|e| e.valuation_lower_bound() >= 1) {
        return Err(Error::invalid("log_series needs g ≡ e mod p"));
    }
    let target = ctx.prec() as i64;
    let mut acc = Mat::zeros_like(g.rows(), g.cols(), &ctx.zero());
    let mut pow = Mat::identity_like(g.rows(), &ctx.zero());
    for k in 1i64.. {
        pow = pow.mul(&y);
        if pow.iter().all(|e| e.valuation_lower_bound() >= target + 2 * (k as f64).log(ctx.p() as f64) as i64 + 2) {
            break;
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        acc = acc.add(&pow.scale(&ctx.ratio(sign, k)));
    }
    Ok(acc.truncate_abs(target))
}

/// Whether `g ≡ e mod p^m`.
pub fn in_congruence_subgroup(g: &Mat<Padic>, m: u32) -> bool {
    let e = Mat::identity_like(g.rows(), &g.ctx().zero());
    g.congruent(&e, m as i64)
}

/// Solves `Σ c_j v_j ≡ e` over `F_p`, vectors given by residues.
fn solve_mod_p(vs: &[Vec<u64>], e: &[u64], p: u64) -> Option<Vec<u64>> {
    let k = vs.len();
    let mut rows: Vec<Vec<u64>> = (0..e.len()).map(|i| vs.iter().map(|v| v[i]).chain([e[i]]).collect()).collect();
    let mut piv_cols = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, pr);
        let inv = pow_mod(rows[r][c], p - 2, p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..=k {
                    rows[i][j] = (rows[i][j] + p * p - f * rows[r][j] % p) % p;
                }
            }
        }
        piv_cols.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| row[k] != 0) || piv_cols.len() < k {
        return None;
    }
    let mut out = vec![0; k];
    for (i, &c) in piv_cols.iter().enumerate() {
        out[c] = rows[i][k];
    }
    Some(out)
}

/// A nilpotent `Z_p`-basis prepared for lifting.
#[derive(Clone, Debug)]
pub struct NilpotentBasis {
    pub ctx: Arc<PadicCtx>,
    pub vs: Vec<Mat<Padic>>,
    residues: Vec<Vec<u64>>,
}

impl NilpotentBasis {
    /// Errors if a vector is not nilpotent, not integral, or the vectors
    /// are dependent modulo `p`.
    pub fn new(basis: &[Mat<BigRational>], ctx: &Arc<PadicCtx>) -> Result<Self> {
        let vs: Vec<Mat<Padic>> = basis.iter().map(|b| b.to_padic(ctx)).collect();
        let mut residues = Vec::new();
        for v in &vs {
            if !v.pow(v.rows() as u32).is_zero() {
                return Err(Error::invalid("basis vector is not nilpotent"));
            }
            residues.push(v.iter().map(|x| x.residue_u64(1)).collect::<Result<Vec<_>>>()?);
        }
        let n = residues.first().map_or(0, |r| r.len());
        let zero = vec![0; n];
        if residues.is_empty() || solve_mod_p(&residues, &zero, ctx.p()).is_none() {
            return Err(Error::invalid("basis is not unimodular"));
        }
        Ok(NilpotentBasis { ctx: ctx.clone(), vs, residues })
    }

    /// `u₁(t₁)···u_k(t_k)`.
    pub fn product(&self, t: &[Padic]) -> Result<Mat<Padic>> {
        let n = self.vs[0].rows();
        let mut g = Mat::identity_like(n, &self.ctx.zero());
        for (v, tj) in self.vs.iter().zip(t) {
            g = g.mul(&exp_nilpotent(&v.scale(tj))?);
        }
        Ok(g)
    }

    /// `Σ t_i v_i` with `t_i ∈ p^m Z_p` random.
    pub fn random_element<R: Rng + ?Sized>(&self, m: u32, rng: &mut R) -> Mat<Padic> {
        let n = self.vs[0].rows();
        self.vs.iter().fold(Mat::zeros_like(n, n, &self.ctx.zero()), |acc, v| {
            acc.add(&v.scale(&self.ctx.random_zp(rng).shift(m as i64)))
        })
    }

    /// A random element of `K[m]` of the group: a scrambled product of
    /// `u_i(p^m s)` factors times `exp` of a random element of `𝔤[m]`.
    pub fn random_group_element<R: Rng + ?Sized>(&self, m: u32, rng: &mut R) -> Result<Mat<Padic>> {
        let n = self.vs[0].rows();
        let mut g = exp_series(&self.random_element(m, rng))?;
        for _ in 0..2 * self.vs.len() {
            let v = &self.vs[rng.random_range(0..self.vs.len())];
            let s = self.ctx.random_zp(rng).shift(m as i64);
            let f = exp_nilpotent(&v.scale(&s))?;
            g = if rng.random_bool(0.5) { g.mul(&f) } else { f.mul(&g) };
        }
        debug_assert_eq!(g.rows(), n);
        Ok(g)
    }

    /// Coordinates `t ∈ (p^m Z_p)^k` with `u(t) ≡ g mod p^N`.
    pub fn coordinates(&self, g: &Mat<Padic>, m: u32, n: u32) -> Result<Vec<Padic>> {
        if m == 0 {
            return Err(Error::invalid("hensel coordinates need m ≥ 1"));
        }
        if !in_congruence_subgroup(g, m) {
            return Err(Error::invalid(format!("g is not in K[{m}]")));
        }
        let p = self.ctx.p();
        let mut t = vec![self.ctx.zero(); self.vs.len()];
        for level in m..n {
            let e = g.sub(&self.product(&t)?);
            if !e.iter().all(|x| x.valuation_lower_bound() >= level as i64) {
                return Err(Error::internal(format!("lifting lost congruence at level {level}")));
            }
            let digits = e.iter().map(|x| x.shift(-(level as i64)).residue_u64(1)).collect::<Result<Vec<_>>>()?;
            let c = solve_mod_p(&self.residues, &digits, p)
                .ok_or_else(|| Error::invalid("g is not in the group generated by the basis"))?;
            for (tj, cj) in t.iter_mut().zip(c) {
                *tj = tj.add(&self.ctx.int(cj as i64).shift(level as i64));
            }
        }
        if !self.product(&t)?.congruent(g, n as i64) {
            return Err(Error::internal("lifted coordinates do not reproduce g"));
        }
        Ok(t)
    }
}

/// Coordinates of `g ∈ K[m]` in the basis, modulo `p^N`.
pub fn hensel_coordinates(g: &Mat<Padic>, basis: &NilpotentBasis, m: u32, n: u32) -> Result<Vec<Padic>> {
    basis.coordinates(g, m, n)
}
