//! The unramified quadratic extension Q_p(√η).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::padic::{Padic, PadicCtx};
use crate::scalar::{Field, Ring};

/// `a + b√η`.
#[derive(Clone)]
pub struct QuadExt {
    pub a: Padic,
    pub b: Padic,
    eta: Padic,
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) + ({:?})√η", self.a, self.b)
    }
}

impl QuadExt {
    /// `eta` must be a unit non-square.
    pub fn new(a: Padic, b: Padic, eta: Padic) -> Result<QuadExt> {
        if !eta.is_unit() || eta.unit_legendre()? != -1 {
            return Err(Error::invalid("eta must be a non-square unit"));
        }
        Ok(QuadExt { a, b, eta })
    }

    pub fn from_base(a: Padic, eta: &Padic) -> QuadExt {
        let z = a.ctx().zero();
        QuadExt { a, b: z, eta: eta.clone() }
    }

    /// √η itself.
    pub fn sqrt_eta(ctx: &Arc<PadicCtx>, eta: &Padic) -> QuadExt {
        QuadExt { a: ctx.zero(), b: ctx.one(), eta: eta.clone() }
    }

    pub fn eta(&self) -> &Padic {
        &self.eta
    }

    fn with(&self, a: Padic, b: Padic) -> QuadExt {
        QuadExt { a, b, eta: self.eta.clone() }
    }

    pub fn conj(&self) -> QuadExt {
        self.with(self.a.clone(), self.b.neg())
    }

    /// `x x̄ = a² − η b²`.
    pub fn norm(&self) -> Padic {
        self.a.mul(&self.a).sub(&self.eta.mul(&self.b.mul(&self.b)))
    }

    /// `(x + x̄)/2`.
    pub fn re(&self) -> Padic {
        self.a.clone()
    }

    /// `(x − x̄)/(2√η)`.
    pub fn im(&self) -> Padic {
        self.b.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Valuation in the extension; equal to `min(v(a), v(b))` because the
    /// extension is unramified.
    pub fn valuation(&self) -> Result<i64> {
        match (self.a.valuation(), self.b.valuation()) {
            (Ok(x), Ok(y)) => Ok(x.min(y)),
            (Ok(x), Err(_)) | (Err(_), Ok(x)) => Ok(x),
            (Err(e), Err(_)) => Err(e),
        }
    }

    pub fn add(&self, o: &QuadExt) -> QuadExt {
        self.with(self.a.add(&o.a), self.b.add(&o.b))
    }

    pub fn sub(&self, o: &QuadExt) -> QuadExt {
        self.with(self.a.sub(&o.a), self.b.sub(&o.b))
    }

    pub fn neg(&self) -> QuadExt {
        self.with(self.a.neg(), self.b.neg())
    }

    pub fn mul(&self, o: &QuadExt) -> QuadExt {
        let a = self.a.mul(&o.a).add(&self.eta.mul(&self.b.mul(&o.b)));
        let b = self.a.mul(&o.b).add(&self.b.mul(&o.a));
        self.with(a, b)
    }

    pub fn scale(&self, s: &Padic) -> QuadExt {
        self.with(self.a.mul(s), self.b.mul(s))
    }

    pub fn inv(&self) -> Result<QuadExt> {
        let n = self.norm().inv()?;
        Ok(self.conj().scale(&n))
    }

    pub fn eq_at_precision(&self, o: &QuadExt) -> bool {
        self.sub(o).is_zero()
    }
}

impl Ring for QuadExt {
    fn zero_like(&self) -> Self {
        let z = self.a.ctx().zero();
        self.with(z.clone(), z)
    }
    fn one_like(&self) -> Self {
        let c = self.a.ctx();
        self.with(c.one(), c.zero())
    }
    fn from_i64_like(&self, n: i64) -> Self {
        let c = self.a.ctx();
        self.with(c.int(n), c.zero())
    }
    fn is_zero_el(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
}

impl Field for QuadExt {
    fn inv_ref(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn pivot_weight(&self) -> Option<f64> {
        self.valuation().ok().map(|v| -(v as f64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::smallest_nonresidue;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn norm_is_multiplicative() {
        let ctx = PadicCtx::new(13, 20).unwrap();
        let eta = ctx.int(smallest_nonresidue(13).unwrap() as i64);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let x = QuadExt::new(ctx.random_zp(&mut rng), ctx.random_zp(&mut rng), eta.clone()).unwrap();
            let y = QuadExt::new(ctx.random_zp(&mut rng), ctx.random_zp(&mut rng), eta.clone()).unwrap();
            assert!(x.mul(&y).norm().eq_at_precision(&x.norm().mul(&y.norm())));
            assert!(x.mul(&y).conj().eq_at_precision(&x.conj().mul(&y.conj())));
        }
    }

    #[test]
    fn units_have_unit_norm() {
        let ctx = PadicCtx::new(5, 10).unwrap();
        let eta = ctx.int(2);
        let x = QuadExt::new(ctx.int(5), ctx.int(1), eta).unwrap();
        assert_eq!(x.valuation().unwrap(), 0);
        assert_eq!(x.norm().valuation().unwrap(), 0);
        let y = x.inv().unwrap();
        let one = x.mul(&y);
        assert!(one.a.sub(&ctx.one()).is_zero());
        assert!(one.b.is_zero());
    }

    #[test]
    fn rejects_square_eta() {
        let ctx = PadicCtx::new(5, 10).unwrap();
        assert!(QuadExt::new(ctx.one(), ctx.one(), ctx.int(4)).is_err());
    }
}
