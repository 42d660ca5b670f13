//! `K A₊ K` decompositions of the model groups.

use crate::error::{Error, Result};
use crate::groups::model::{ModelGroup, ModelKind};
use crate::matrix::Mat;
use crate::padic::Padic;

/// `g = k₁ a k₂` with `a = diag(p^{-m}, p^m, …)`.
///
/// For the split group `a = diag(p^{-m}, p^m, p^{-n}, p^n)` with
/// `m ≥ |n|`: the sign of `n` is an invariant of the `K` double coset.
#[derive(Clone, Debug)]
pub struct CartanFactors {
    pub k1: Mat<Padic>,
    pub k2: Mat<Padic>,
    pub m: i64,
    pub n: i64,
}

impl CartanFactors {
    pub fn a(&self, group: &ModelGroup) -> Mat<Padic> {
        group.a(self.m, self.n)
    }

    pub fn reassemble(&self, group: &ModelGroup) -> Mat<Padic> {
        self.k1.mul(&self.a(group)).mul(&self.k2)
    }
}

/// Digits consumed by a decomposition of an element of norm `p^m`.
pub fn precision_overhead(m: i64) -> i64 {
    2 * m + 8
}

fn max_entry(h: &Mat<Padic>) -> Option<(usize, usize, i64)> {
    let mut best: Option<(usize, usize, i64)> = None;
    for i in 0..h.rows() {
        for j in 0..h.cols() {
            if let Some(e) = h[(i, j)].norm_exp() {
                if best.is_none_or(|(_, _, b)| e > b) {
                    best = Some((i, j, e));
                }
            }
        }
    }
    best
}

fn first_row_inequality(g: &Mat<Padic>) -> bool {
    let n = |i: usize, j: usize| g[(i, j)].norm_exp().unwrap_or(i64::MIN);
    let iso = n(0, 0).max(n(0, 1));
    let aniso = (2..g.cols()).map(|j| n(0, j)).max().unwrap_or(i64::MIN);
    iso >= aniso
}

/// Cartan decomposition in any of the three model groups.
pub fn cartan(group: &ModelGroup, g: &Mat<Padic>) -> Result<CartanFactors> {
    let d = group.dim();
    if g.rows() != d || g.cols() != d {
        return Err(Error::invalid("matrix size does not match the model group"));
    }
    let m0 = g.norm_exp().ok_or_else(|| Error::invalid("zero matrix"))?;
    if m0 < 0 {
        return Err(Error::invalid("norm below one: not a group element"));
    }
    let avail = g.min_abs_precision();
    let needed = precision_overhead(m0) + 1;
    if avail < needed {
        return Err(Error::Precision { needed, available: avail });
    }
    let check = avail - 2 * m0 - 2;
    if !group.contains(g, check) {
        return Err(Error::invalid("matrix does not preserve the model form"));
    }
    if group.kind != ModelKind::Split && !first_row_inequality(g) {
        return Err(Error::internal("first-row norm inequality violated"));
    }
    let c = group.ctx().clone();
    let e = group.identity();
    if m0 == 0 {
        return Ok(CartanFactors { k1: g.clone(), k2: e, m: 0, n: 0 });
    }
    let mut h = g.clone();
    let mut left = e.clone();
    let mut right = e.clone();
    let (i, j, _) = max_entry(&h).expect("nonzero");
    match group.kind {
        ModelKind::Split => {
            let w1 = group.omega();
            let w2 = group.omega2()?;
            let row_fix = match i {
                0 => None,
                1 => Some(w1.clone()),
                2 => Some(w2.clone()),
                _ => Some(w1.mul(&w2)),
            };
            let col_fix = match j {
                0 => None,
                1 => Some(w1.clone()),
                2 => Some(w2.clone()),
                _ => Some(w2.mul(&w1)),
            };
            if let Some(x) = row_fix {
                h = x.mul(&h);
                left = x.mul(&left);
            }
            if let Some(x) = col_fix {
                h = h.mul(&x);
                right = right.mul(&x);
            }
        }
        _ => {
            if i > 1 || j > 1 {
                return Err(Error::internal("largest entry outside the isotropic block"));
            }
            let w = group.omega();
            if i == 1 {
                h = w.mul(&h);
                left = w.mul(&left);
            }
            if j == 1 {
                h = h.mul(&w);
                right = right.mul(&w);
            }
        }
    }
    let g11 = h[(0, 0)].clone();
    if g11.norm_exp() != Some(m0) {
        return Err(Error::internal("pivot does not carry the norm"));
    }
    let inv11 = g11.inv()?;
    let split = group.kind == ModelKind::Split;
    let sgn = |t: Padic| if split { t.neg() } else { t };
    // clear the first column below the hyperbolic plane
    let t = sgn(h[(2, 0)].mul(&inv11));
    let u = group.u3(&t);
    h = u.mul(&h);
    left = u.mul(&left);
    if d == 4 {
        let t = sgn(h[(3, 0)].mul(&inv11));
        let u = group.u4(&t)?;
        h = u.mul(&h);
        left = u.mul(&left);
    }
    // clear the first row
    let t = sgn(h[(0, 2)].mul(&inv11)).neg();
    let v = group.v3(&t);
    h = h.mul(&v);
    right = right.mul(&v);
    if d == 4 {
        let mut t = sgn(h[(0, 3)].mul(&inv11)).neg();
        if group.kind == ModelKind::QuasiSplit {
            t = t.mul(&c.ratio(1, group.eta()));
        }
        let v = group.v4(&t)?;
        h = h.mul(&v);
        right = right.mul(&v);
    }
    let tol = (avail - 2 * m0 - 4).max(1);
    for (a, b) in [(1, 0), (0, 1), (2, 0), (0, 2)] {
        if !h[(a, b)].congruent(&c.zero(), tol.min(h[(a, b)].abs_precision())) {
            return Err(Error::internal("off-block entries did not vanish"));
        }
    }
    // the remaining block is integral and lies in K
    let block_idx: Vec<usize> = (2..d).collect();
    let block = h.submatrix(&block_idx, &block_idx);
    let mut n = 0i64;
    match group.kind {
        ModelKind::Ternary => {}
        ModelKind::QuasiSplit => {
            if !block.is_integral() {
                return Err(Error::internal("anisotropic block is not integral"));
            }
            let binv = block.inverse()?;
            let fix = Mat::identity_like(2, &c.one()).block_diag(&binv, &c.zero());
            h = fix.mul(&h);
            left = fix.mul(&left);
        }
        ModelKind::Split => {
            let delta = &h[(2, 2)];
            n = -delta.valuation()?;
            let unit = delta.shift(n);
            let fix = group.torus2(&unit.inv()?)?;
            h = fix.mul(&h);
            left = fix.mul(&left);
        }
    }
    let m = -h[(0, 0)].valuation()?;
    let unit = h[(0, 0)].shift(m);
    let fix = group.torus(&unit.inv()?)?;
    h = fix.mul(&h);
    left = fix.mul(&left);
    if !h.congruent(&group.a(m, n), tol.min(h.min_abs_precision())) {
        return Err(Error::internal("reduction did not reach the torus"));
    }
    if m < n.abs() {
        return Err(Error::internal("exponents outside the closed chamber"));
    }
    Ok(CartanFactors { k1: group.inverse(&left), k2: group.inverse(&right), m, n })
}

/// `(log_p ‖g‖, log_p ‖Λ²g‖)`.
pub fn norm_invariants(g: &Mat<Padic>) -> (Option<i64>, Option<i64>) {
    (g.norm_exp(), g.wedge2_norm_exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PadicCtx;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_inputs() {
        let ctx = PadicCtx::new(5, 40).unwrap();
        let g = ModelGroup::new(ModelKind::QuasiSplit, &ctx).unwrap();
        let f = cartan(&g, &g.a(2, 0)).unwrap();
        assert_eq!(f.m, 2);
        let s = ModelGroup::new(ModelKind::Split, &ctx).unwrap();
        let f = cartan(&s, &s.a(2, 1)).unwrap();
        assert_eq!((f.m, f.n), (2, 1));
    }

    #[test]
    fn roundtrip_small() {
        let ctx = PadicCtx::new(13, 46).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for kind in [ModelKind::Ternary, ModelKind::QuasiSplit, ModelKind::Split] {
            let grp = ModelGroup::new(kind, &ctx).unwrap();
            for m in 0..4 {
                let n = if kind == ModelKind::Split { m / 2 } else { 0 };
                let k1 = grp.random_k(&mut rng, 12);
                let k2 = grp.random_k(&mut rng, 12);
                let g = k1.mul(&grp.a(m, n)).mul(&k2);
                let f = cartan(&grp, &g).unwrap();
                assert_eq!((f.m, f.n), (m, n), "{kind:?}");
                assert!(f.reassemble(&grp).congruent(&g, 32));
                assert!(grp.in_k(&f.k1, 32) && grp.in_k(&f.k2, 32));
            }
        }
    }
}
