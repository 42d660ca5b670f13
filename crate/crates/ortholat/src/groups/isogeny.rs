//! The isogenies `ψ` from `SL₂` and its forms onto the subgroups `H⁺`
//! generated by unipotents, spinor norms, and coset representatives of
//! `H / H⁺`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::model::{ModelGroup, ModelKind};
use crate::matrix::Mat;
use crate::padic::{hensel_sqrt, Padic, PadicCtx};
use crate::quadext::QuadExt;

/// The three isogenies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IsogenyKind {
    /// `SL₂ → SO(2,1)` by the adjoint action.
    Adjoint,
    /// `SL₂(Q_p(√η)) → SO_η(3,1)`.
    QuasiSplit,
    /// `SL₂ × SL₂ → SO(2,2)`, `v ↦ g v h⁻¹`.
    Split,
}

impl IsogenyKind {
    pub fn target(self) -> ModelKind {
        match self {
            IsogenyKind::Adjoint => ModelKind::Ternary,
            IsogenyKind::QuasiSplit => ModelKind::QuasiSplit,
            IsogenyKind::Split => ModelKind::Split,
        }
    }
}

/// Canonical `ε = √-1`; needs `p ≡ 1 (mod 4)`.
pub fn sqrt_minus_one(ctx: &Arc<PadicCtx>) -> Result<Padic> {
    hensel_sqrt(&ctx.int(-1))
}

fn sl2_parts<T: Clone>(g: &Mat<T>) -> Result<(T, T, T, T)> {
    if g.rows() != 2 || g.cols() != 2 {
        return Err(Error::invalid("expected a 2×2 matrix"));
    }
    Ok((g[(0, 0)].clone(), g[(0, 1)].clone(), g[(1, 0)].clone(), g[(1, 1)].clone()))
}

/// Coordinates of a traceless `[[x, y], [z, -x]]` in the basis
/// `(E₁₂, 2E₂₁, diag(1,-1))`, on which `-det` is `2xy + z²`.
fn adjoint_coords(t: &Mat<Padic>) -> [Padic; 3] {
    let half = t[(0, 0)].ctx().ratio(1, 2);
    [t[(0, 1)].clone(), t[(1, 0)].mul(&half), t[(0, 0)].clone()]
}

/// `ψ(g) X = g X g⁻¹` on traceless matrices.
pub fn psi_adjoint(g: &Mat<Padic>) -> Result<Mat<Padic>> {
    let (a, b, c, d) = sl2_parts(g)?;
    let ctx = a.ctx().clone();
    let ginv = Mat::from_vec(2, 2, vec![d, b.neg(), c.neg(), a]);
    let (z, o) = (ctx.zero(), ctx.one());
    let basis = [
        Mat::from_vec(2, 2, vec![z.clone(), o.clone(), z.clone(), z.clone()]),
        Mat::from_vec(2, 2, vec![z.clone(), z.clone(), ctx.int(2), z.clone()]),
        Mat::from_vec(2, 2, vec![o.clone(), z.clone(), z, o.neg()]),
    ];
    let cols: Vec<[Padic; 3]> = basis.iter().map(|e| adjoint_coords(&g.mul(e).mul(&ginv))).collect();
    Ok(Mat::from_fn(3, 3, |i, j| cols[j][i].clone()))
}

/// `ψ` for `SL₂(Q_p(√η))`, with `|x|² = x x̄`.
pub fn psi_quasi(g: &Mat<QuadExt>, eps: &Padic) -> Result<Mat<Padic>> {
    let (a, b, c, d) = sl2_parts(g)?;
    let ctx = eps.ctx().clone();
    let eta = a.eta().clone();
    let two = ctx.int(2);
    let half = ctx.ratio(1, 2);
    let n = |x: &QuadExt| x.norm();
    let prod = |x: &QuadExt, y: &QuadExt| x.mul(&y.conj());
    let (ab, cd, ac, bd) = (prod(&a, &b), prod(&c, &d), prod(&a, &c), prod(&b, &d));
    let ad = prod(&a, &d);
    let bc = prod(&b, &c);
    let s = ad.add(&bc);
    let t = ad.sub(&bc);
    let m = |x: &Padic, y: &Padic| x.mul(y);
    let rows = vec![
        vec![n(&a), m(&half, &n(&b)), m(eps, &ab.re()), m(&eta, &ab.im())],
        vec![m(&two, &n(&c)), n(&d), m(&two, &m(eps, &cd.re())), m(&two, &m(&eta, &cd.im()))],
        vec![
            m(&two, &m(eps, &ac.re())).neg(),
            m(eps, &bd.re()).neg(),
            s.re(),
            m(eps, &m(&eta, &t.im())).neg(),
        ],
        vec![m(&two, &ac.im()), bd.im(), m(eps, &s.im()), t.re()],
    ];
    Ok(Mat::from_rows(rows))
}

/// `ψ(g, h) v = g v h⁻¹` on `2×2` matrices in the basis
/// `(E₁₁, E₂₂, E₁₂, -E₂₁)`, on which `2 det` is `2xy + 2zw`.
pub fn psi_split(g: &Mat<Padic>, h: &Mat<Padic>) -> Result<Mat<Padic>> {
    let (a, b, c, d) = sl2_parts(h)?;
    sl2_parts(g)?;
    let hinv = Mat::from_vec(2, 2, vec![d, b.neg(), c.neg(), a]);
    let ctx = g.ctx().clone();
    let (z, o) = (ctx.zero(), ctx.one());
    let unit = |i: usize, j: usize, s: &Padic| {
        let mut e = Mat::from_vec(2, 2, vec![z.clone(), z.clone(), z.clone(), z.clone()]);
        e[(i, j)] = s.clone();
        e
    };
    let basis = [unit(0, 0, &o), unit(1, 1, &o), unit(0, 1, &o), unit(1, 0, &o.neg())];
    let cols: Vec<[Padic; 4]> = basis
        .iter()
        .map(|e| {
            let x = g.mul(e).mul(&hinv);
            [x[(0, 0)].clone(), x[(1, 1)].clone(), x[(0, 1)].clone(), x[(1, 0)].neg()]
        })
        .collect();
    Ok(Mat::from_fn(4, 4, |i, j| cols[j][i].clone()))
}

fn quad(ctx: &Arc<PadicCtx>, eta: &Padic, a: Padic, b: Padic) -> QuadExt {
    QuadExt::from_base(a, eta).add(&QuadExt::sqrt_eta(ctx, eta).scale(&b))
}

/// The preimages in `SL₂(Q_p(√η))` of `u₃(t)`, `v₃(t)`, `u₄(t)`, `v₄(t)`:
/// lower `-εt/2`, upper `-εt`, lower `√η t/2`, upper `-√η t`.
pub fn quasi_unipotent_preimages(group: &ModelGroup, t: &Padic) -> Result<[Mat<QuadExt>; 4]> {
    if group.kind != ModelKind::QuasiSplit {
        return Err(Error::invalid("needs the quasi-split group"));
    }
    let ctx = group.ctx();
    let eta = ctx.int(group.eta());
    let eps = sqrt_minus_one(ctx)?;
    let one = QuadExt::from_base(ctx.one(), &eta);
    let zero = QuadExt::from_base(ctx.zero(), &eta);
    let et = eps.mul(t);
    let half = ctx.ratio(1, 2);
    let m = |x: QuadExt, lower: bool| {
        if lower {
            Mat::from_vec(2, 2, vec![one.clone(), zero.clone(), x, one.clone()])
        } else {
            Mat::from_vec(2, 2, vec![one.clone(), x, zero.clone(), one.clone()])
        }
    };
    Ok([
        m(quad(ctx, &eta, et.mul(&half).neg(), ctx.zero()), true),
        m(quad(ctx, &eta, et.neg(), ctx.zero()), false),
        m(quad(ctx, &eta, ctx.zero(), t.mul(&half)), true),
        m(quad(ctx, &eta, ctx.zero(), t.neg()), false),
    ])
}

/// Random element of `SL₂(O)` for `O` the integers of `Q_p(√η)`.
pub fn random_sl2_quad<R: Rng + ?Sized>(ctx: &Arc<PadicCtx>, eta: &Padic, rng: &mut R, len: usize) -> Mat<QuadExt> {
    let one = QuadExt::from_base(ctx.one(), eta);
    let zero = QuadExt::from_base(ctx.zero(), eta);
    let mut g = Mat::from_vec(2, 2, vec![one.clone(), zero.clone(), zero.clone(), one.clone()]);
    for _ in 0..len {
        let t = quad(ctx, eta, ctx.random_zp(rng), ctx.random_zp(rng));
        let h = match rng.random_range(0..3) {
            0 => Mat::from_vec(2, 2, vec![one.clone(), t, zero.clone(), one.clone()]),
            1 => Mat::from_vec(2, 2, vec![one.clone(), zero.clone(), t, one.clone()]),
            _ => Mat::from_vec(2, 2, vec![zero.clone(), one.neg(), one.clone(), zero.clone()]),
        };
        g = g.mul(&h);
    }
    g
}

/// A class in `Q_p^× / (Q_p^×)²`: parity of the valuation and the
/// quadratic character of the unit part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SquareClass {
    pub odd_valuation: bool,
    pub nonsquare_unit: bool,
}

impl SquareClass {
    pub const ONE: SquareClass = SquareClass { odd_valuation: false, nonsquare_unit: false };

    pub fn all() -> [SquareClass; 4] {
        [
            SquareClass::ONE,
            SquareClass { odd_valuation: false, nonsquare_unit: true },
            SquareClass { odd_valuation: true, nonsquare_unit: false },
            SquareClass { odd_valuation: true, nonsquare_unit: true },
        ]
    }

    pub fn of(x: &Padic) -> Result<SquareClass> {
        let v = x.valuation()?;
        Ok(SquareClass { odd_valuation: v.rem_euclid(2) == 1, nonsquare_unit: x.unit_legendre()? == -1 })
    }

    pub fn mul(self, o: SquareClass) -> SquareClass {
        SquareClass {
            odd_valuation: self.odd_valuation ^ o.odd_valuation,
            nonsquare_unit: self.nonsquare_unit ^ o.nonsquare_unit,
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match (self.odd_valuation, self.nonsquare_unit) {
            (false, false) => "1",
            (false, true) => "eta",
            (true, false) => "p",
            (true, true) => "p*eta",
        })
    }
}

/// Spinor norm of `g ∈ SO(Q)`, as `det((1 + g)/2)` when `-1` is not an
/// eigenvalue; otherwise `g` is first multiplied by unipotents.
pub fn spinor_norm(group: &ModelGroup, g: &Mat<Padic>) -> Result<SquareClass> {
    let ctx = group.ctx();
    let half = ctx.ratio(1, 2);
    let id = group.identity();
    let mut h = g.clone();
    let shifts = [ctx.one(), ctx.int(2), ctx.int(3)];
    for t in std::iter::once(None).chain(shifts.iter().map(Some)) {
        if let Some(t) = t {
            h = h.mul(&group.u3(t)).mul(&group.v3(t));
        }
        let d = id.add(&h).scale(&half).det();
        if d.is_zero() {
            continue;
        }
        if d.relative_precision() == 0 {
            return Err(Error::ZeroAtPrecision);
        }
        return SquareClass::of(&d);
    }
    Err(Error::internal("could not avoid the eigenvalue -1"))
}

/// A representative of a coset of `H⁺` in `H`.
#[derive(Clone, Debug)]
pub struct PlusCoset {
    pub class: SquareClass,
    pub matrix: Mat<Padic>,
}

/// Four diagonal representatives of `H / H⁺`, one per spinor class, in the
/// order `1, η, p, pη`.
pub fn plus_coset_representatives(group: &ModelGroup) -> Result<Vec<PlusCoset>> {
    let ctx = group.ctx();
    let eta = ctx.int(group.eta());
    let p = ctx.p_pow(1);
    let pairs = [
        (ctx.one(), ctx.one()),
        (ctx.one(), eta.clone()),
        (p.clone(), ctx.one()),
        (p.clone(), eta.clone()),
    ];
    pairs
        .into_iter()
        .zip(SquareClass::all())
        .map(|((s, t), class)| {
            let matrix = if group.kind == ModelKind::Split {
                group.torus(&s)?.mul(&group.torus2(&t)?)
            } else {
                group.torus(&s.mul(&t))?
            };
            Ok(PlusCoset { class, matrix })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjoint_is_multiplicative_on_generators() {
        let ctx = PadicCtx::new(5, 20).unwrap();
        let t = ctx.int(3);
        let lower = Mat::from_vec(2, 2, vec![ctx.one(), ctx.zero(), t.clone(), ctx.one()]);
        let g = ModelGroup::new(ModelKind::Ternary, &ctx).unwrap();
        assert!(psi_adjoint(&lower).unwrap().congruent(&g.u3(&t), 18));
    }
}
