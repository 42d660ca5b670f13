//! The three model orthogonal groups over Q_p.
//!
//! Elements act on column vectors and preserve the Gram matrix `J` in the
//! sense `gᵀ J g = J`.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::padic::{smallest_nonresidue, Padic, PadicCtx};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ModelKind {
    /// `2xy + z²`.
    Ternary,
    /// `2xy + z² + ηw²`.
    QuasiSplit,
    /// `2xy + 2zw`.
    Split,
}

impl ModelKind {
    pub fn dim(self) -> usize {
        match self {
            ModelKind::Ternary => 3,
            _ => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Ternary => "so21",
            ModelKind::QuasiSplit => "so31",
            ModelKind::Split => "so22",
        }
    }

    /// Integer Gram matrix for a given `η`.
    pub fn gram_i64(self, eta: i64) -> Mat<i64> {
        match self {
            ModelKind::Ternary => Mat::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]], &0),
            ModelKind::QuasiSplit => {
                Mat::from_i64(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, eta]], &0)
            }
            ModelKind::Split => Mat::from_i64(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]], &0),
        }
    }
}

/// A model group with its prime, precision and `η`.
#[derive(Clone, Debug)]
pub struct ModelGroup {
    pub kind: ModelKind,
    ctx: Arc<PadicCtx>,
    eta: i64,
    gram: Mat<Padic>,
}

impl ModelGroup {
    pub fn new(kind: ModelKind, ctx: &Arc<PadicCtx>) -> Result<Self> {
        let eta = smallest_nonresidue(ctx.p())? as i64;
        Ok(Self::with_eta(kind, ctx, eta))
    }

    pub fn with_eta(kind: ModelKind, ctx: &Arc<PadicCtx>, eta: i64) -> Self {
        let gram = kind.gram_i64(eta).to_padic(ctx);
        ModelGroup { kind, ctx: ctx.clone(), eta, gram }
    }

    pub fn ctx(&self) -> &Arc<PadicCtx> {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    pub fn eta(&self) -> i64 {
        self.eta
    }

    pub fn dim(&self) -> usize {
        self.kind.dim()
    }

    pub fn gram(&self) -> &Mat<Padic> {
        &self.gram
    }

    pub fn identity(&self) -> Mat<Padic> {
        Mat::identity_like(self.dim(), &self.ctx.one())
    }

    fn int_mat(&self, rows: &[&[i64]]) -> Mat<Padic> {
        Mat::from_i64(rows, &self.ctx.one())
    }

    /// `gᵀ J g ≡ J` and `det g ≡ 1` modulo `p^k`.
    pub fn contains(&self, g: &Mat<Padic>, k: i64) -> bool {
        let lhs = g.transpose().mul(&self.gram).mul(g);
        lhs.congruent(&self.gram, k) && g.det().congruent(&self.ctx.one(), k)
    }

    /// In `K`: a member with integral entries.
    pub fn in_k(&self, g: &Mat<Padic>, k: i64) -> bool {
        g.is_integral() && self.contains(g, k)
    }

    /// `g⁻¹ = J⁻¹ gᵀ J`.
    pub fn inverse(&self, g: &Mat<Padic>) -> Mat<Padic> {
        let jinv = self.gram_inverse();
        jinv.mul(&g.transpose()).mul(&self.gram)
    }

    pub fn gram_inverse(&self) -> Mat<Padic> {
        let c = &self.ctx;
        let mut m = self.gram.clone();
        if self.kind == ModelKind::QuasiSplit {
            m[(3, 3)] = c.ratio(1, self.eta);
        }
        m
    }

    /// `a_p^m` (rank one) or `diag(p^{-m}, p^m, p^{-n}, p^n)` (split).
    pub fn a(&self, m: i64, n: i64) -> Mat<Padic> {
        let c = &self.ctx;
        match self.kind {
            ModelKind::Ternary => Mat::diag(&[c.p_pow(-m), c.p_pow(m), c.one()]),
            ModelKind::QuasiSplit => Mat::diag(&[c.p_pow(-m), c.p_pow(m), c.one(), c.one()]),
            ModelKind::Split => Mat::diag(&[c.p_pow(-m), c.p_pow(m), c.p_pow(-n), c.p_pow(n)]),
        }
    }

    /// The Weyl element of `K` swapping the two isotropic coordinates.
    pub fn omega(&self) -> Mat<Padic> {
        match self.kind {
            ModelKind::Ternary => self.int_mat(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -1]]),
            ModelKind::QuasiSplit => {
                self.int_mat(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, 1]])
            }
            ModelKind::Split => self.int_mat(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]),
        }
    }

    /// Split case: the element exchanging the two hyperbolic planes.
    pub fn omega2(&self) -> Result<Mat<Padic>> {
        if self.kind != ModelKind::Split {
            return Err(Error::invalid("omega2 exists only for the split group"));
        }
        Ok(self.int_mat(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, 1, 0, 0]]))
    }

    /// Lower unipotent `u₃(t)`.
    pub fn u3(&self, t: &Padic) -> Mat<Padic> {
        let c = &self.ctx;
        let mut g = self.identity();
        match self.kind {
            ModelKind::Split => {
                g[(1, 3)] = t.neg();
                g[(2, 0)] = t.clone();
            }
            _ => {
                g[(1, 0)] = t.mul(t).mul(&c.ratio(-1, 2));
                g[(1, 2)] = t.clone();
                g[(2, 0)] = t.neg();
            }
        }
        g
    }

    /// Upper unipotent `v₃(t)`.
    pub fn v3(&self, t: &Padic) -> Mat<Padic> {
        let c = &self.ctx;
        let mut g = self.identity();
        match self.kind {
            ModelKind::Split => {
                g[(0, 2)] = t.neg();
                g[(3, 1)] = t.clone();
            }
            _ => {
                g[(0, 1)] = t.mul(t).mul(&c.ratio(-1, 2));
                g[(0, 2)] = t.clone();
                g[(2, 1)] = t.neg();
            }
        }
        g
    }

    /// Lower unipotent `u₄(t)`; not defined for the ternary group.
    pub fn u4(&self, t: &Padic) -> Result<Mat<Padic>> {
        let c = &self.ctx;
        let mut g = self.identity();
        match self.kind {
            ModelKind::Ternary => return Err(Error::invalid("u4 needs a fourth coordinate")),
            ModelKind::Split => {
                g[(1, 2)] = t.neg();
                g[(3, 0)] = t.clone();
            }
            ModelKind::QuasiSplit => {
                let eta = c.int(self.eta);
                g[(1, 0)] = t.mul(t).mul(&eta).mul(&c.ratio(-1, 2));
                g[(1, 3)] = eta.mul(t);
                g[(3, 0)] = t.neg();
            }
        }
        Ok(g)
    }

    /// Upper unipotent `v₄(t)`; not defined for the ternary group.
    pub fn v4(&self, t: &Padic) -> Result<Mat<Padic>> {
        let c = &self.ctx;
        let mut g = self.identity();
        match self.kind {
            ModelKind::Ternary => return Err(Error::invalid("v4 needs a fourth coordinate")),
            ModelKind::Split => {
                g[(0, 3)] = t.neg();
                g[(2, 1)] = t.clone();
            }
            ModelKind::QuasiSplit => {
                let eta = c.int(self.eta);
                g[(0, 1)] = t.mul(t).mul(&eta).mul(&c.ratio(-1, 2));
                g[(0, 3)] = eta.mul(t);
                g[(3, 1)] = t.neg();
            }
        }
        Ok(g)
    }

    /// `diag(u, u⁻¹, …)` acting on the first hyperbolic plane.
    pub fn torus(&self, u: &Padic) -> Result<Mat<Padic>> {
        let mut g = self.identity();
        g[(0, 0)] = u.clone();
        g[(1, 1)] = u.inv()?;
        Ok(g)
    }

    /// Split case: `diag(1, 1, u, u⁻¹)`.
    pub fn torus2(&self, u: &Padic) -> Result<Mat<Padic>> {
        if self.kind != ModelKind::Split {
            return Err(Error::invalid("second torus exists only for the split group"));
        }
        let mut g = self.identity();
        g[(2, 2)] = u.clone();
        g[(3, 3)] = u.inv()?;
        Ok(g)
    }

    /// Quasi-split case: the rotation of `z² + ηw²` with parameter `s`,
    /// `a = (1 − ηs²)/(1 + ηs²)`, `b = 2s/(1 + ηs²)`.
    pub fn anisotropic_rotation(&self, s: &Padic) -> Result<Mat<Padic>> {
        if self.kind != ModelKind::QuasiSplit {
            return Err(Error::invalid("anisotropic rotations need the quasi-split group"));
        }
        let c = &self.ctx;
        let eta = c.int(self.eta);
        let es2 = eta.mul(&s.mul(s));
        let den = c.one().add(&es2).inv()?;
        let a = c.one().sub(&es2).mul(&den);
        let b = c.int(2).mul(s).mul(&den);
        let mut g = self.identity();
        g[(2, 2)] = a.clone();
        g[(2, 3)] = eta.mul(&b).neg();
        g[(3, 2)] = b;
        g[(3, 3)] = a;
        Ok(g)
    }

    /// A random element of `K` as a product of `len` generators with
    /// uniform `Z_p` parameters.
    pub fn random_k<R: Rng + ?Sized>(&self, rng: &mut R, len: usize) -> Mat<Padic> {
        let c = &self.ctx;
        let mut g = self.identity();
        for _ in 0..len {
            let t = c.random_zp(rng);
            let choices = match self.kind {
                ModelKind::Ternary => 4,
                ModelKind::QuasiSplit => 7,
                ModelKind::Split => 8,
            };
            let h = match rng.random_range(0..choices) {
                0 => self.u3(&t),
                1 => self.v3(&t),
                2 => self.omega(),
                3 => self.torus(&c.random_unit(rng)).expect("unit"),
                4 => self.u4(&t).expect("rank checked"),
                5 => self.v4(&t).expect("rank checked"),
                6 if self.kind == ModelKind::QuasiSplit => {
                    self.anisotropic_rotation(&t).unwrap_or_else(|_| self.identity())
                }
                6 => self.omega2().expect("split"),
                _ => self.torus2(&c.random_unit(rng)).expect("split"),
            };
            g = g.mul(&h);
        }
        g
    }

    /// The generators used by [`Self::random_k`], with parameter `t`.
    pub fn unipotents(&self, t: &Padic) -> Vec<Mat<Padic>> {
        let mut v = vec![self.u3(t), self.v3(t)];
        if self.kind == ModelKind::Ternary {
            return v;
        }
        v.push(self.u4(t).expect("four-dimensional"));
        v.push(self.v4(t).expect("four-dimensional"));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_preserve_the_form() {
        let ctx = PadicCtx::new(13, 24).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for kind in [ModelKind::Ternary, ModelKind::QuasiSplit, ModelKind::Split] {
            let g = ModelGroup::new(kind, &ctx).unwrap();
            let t = ctx.random_zp(&mut rng).shift(-2);
            for u in g.unipotents(&t) {
                assert!(g.contains(&u, 20), "{kind:?}");
            }
            assert!(g.in_k(&g.omega(), 24));
            let k = g.random_k(&mut rng, 10);
            assert!(g.in_k(&k, 20), "{kind:?}");
            let kinv = g.inverse(&k);
            assert!(k.mul(&kinv).congruent(&g.identity(), 20));
            assert!(g.contains(&g.a(3, 1), 20));
        }
    }
}
