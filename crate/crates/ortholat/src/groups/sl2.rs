//! Cartan and Iwasawa decompositions in `SL₂(Q_p)`.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::padic::{Padic, PadicCtx};

pub fn sl2(a: Padic, b: Padic, c: Padic, d: Padic) -> Mat<Padic> {
    Mat::from_vec(2, 2, vec![a, b, c, d])
}

/// `diag(p^k, p^{-k})`.
pub fn a_p(ctx: &Arc<PadicCtx>, k: i64) -> Mat<Padic> {
    sl2(ctx.p_pow(k), ctx.zero(), ctx.zero(), ctx.p_pow(-k))
}

pub fn upper(ctx: &Arc<PadicCtx>, t: &Padic) -> Mat<Padic> {
    sl2(ctx.one(), t.clone(), ctx.zero(), ctx.one())
}

pub fn lower(ctx: &Arc<PadicCtx>, t: &Padic) -> Mat<Padic> {
    sl2(ctx.one(), ctx.zero(), t.clone(), ctx.one())
}

pub fn weyl(ctx: &Arc<PadicCtx>) -> Mat<Padic> {
    sl2(ctx.zero(), ctx.int(-1), ctx.one(), ctx.zero())
}

/// Inverse of a determinant-one 2×2 matrix.
pub fn sl2_inverse(g: &Mat<Padic>) -> Mat<Padic> {
    sl2(g[(1, 1)].clone(), g[(0, 1)].neg(), g[(1, 0)].neg(), g[(0, 0)].clone())
}

/// Random element of `SL₂(Z_p)`.
pub fn random_k<R: Rng + ?Sized>(ctx: &Arc<PadicCtx>, rng: &mut R, len: usize) -> Mat<Padic> {
    let mut g = Mat::identity_like(2, &ctx.one());
    for _ in 0..len {
        let t = ctx.random_zp(rng);
        let h = match rng.random_range(0..4) {
            0 => upper(ctx, &t),
            1 => lower(ctx, &t),
            2 => weyl(ctx),
            _ => {
                let u = ctx.random_unit(rng);
                sl2(u.clone(), ctx.zero(), ctx.zero(), u.inv().expect("unit"))
            }
        };
        g = g.mul(&h);
    }
    g
}

/// `g = k₁ diag(p^{-m}, p^m) k₂`.
#[derive(Clone, Debug)]
pub struct Sl2Cartan {
    pub k1: Mat<Padic>,
    pub k2: Mat<Padic>,
    pub m: i64,
}

/// `g = k · diag(p^e, p^{-e}) · [[1, n], [0, 1]]`.
#[derive(Clone, Debug)]
pub struct Iwasawa {
    pub k: Mat<Padic>,
    pub e: i64,
    pub n: Padic,
}

impl Iwasawa {
    pub fn reassemble(&self) -> Mat<Padic> {
        let ctx = self.n.ctx();
        self.k.mul(&a_p(ctx, self.e)).mul(&upper(ctx, &self.n))
    }
}

impl Sl2Cartan {
    pub fn reassemble(&self) -> Mat<Padic> {
        let ctx = self.k1[(0, 0)].ctx();
        self.k1.mul(&a_p(ctx, -self.m)).mul(&self.k2)
    }
}

fn check(g: &Mat<Padic>) -> Result<Arc<PadicCtx>> {
    if g.rows() != 2 || g.cols() != 2 {
        return Err(Error::invalid("expected a 2×2 matrix"));
    }
    let ctx = g.ctx().clone();
    let det = g.det();
    let m = g.norm_exp().unwrap_or(0).max(0);
    if !det.congruent(&ctx.one(), (g.min_abs_precision() - 2 * m).max(1)) {
        return Err(Error::invalid("determinant is not one"));
    }
    Ok(ctx)
}

pub fn sl2_cartan(g: &Mat<Padic>) -> Result<Sl2Cartan> {
    let ctx = check(g)?;
    let mut h = g.clone();
    let w = weyl(&ctx);
    let mut left = Mat::identity_like(2, &ctx.one());
    let mut right = left.clone();
    let (mut bi, mut bj, mut be) = (0, 0, i64::MIN);
    for i in 0..2 {
        for j in 0..2 {
            if let Some(e) = h[(i, j)].norm_exp() {
                if e > be {
                    (bi, bj, be) = (i, j, e);
                }
            }
        }
    }
    if bi == 1 {
        h = w.mul(&h);
        left = w.mul(&left);
    }
    if bj == 1 {
        h = h.mul(&w);
        right = right.mul(&w);
    }
    let inv = h[(0, 0)].inv()?;
    let l = lower(&ctx, &h[(1, 0)].mul(&inv).neg());
    h = l.mul(&h);
    left = l.mul(&left);
    let r = upper(&ctx, &h[(0, 1)].mul(&inv).neg());
    h = h.mul(&r);
    right = right.mul(&r);
    let m = -h[(0, 0)].valuation()?;
    let u = h[(0, 0)].shift(m);
    let t = sl2(u.inv()?, ctx.zero(), ctx.zero(), u);
    left = t.mul(&left);
    Ok(Sl2Cartan { k1: sl2_inverse(&left), k2: sl2_inverse(&right), m })
}

pub fn sl2_iwasawa(g: &Mat<Padic>) -> Result<Iwasawa> {
    let ctx = check(g)?;
    let mut h = g.clone();
    let mut left = Mat::identity_like(2, &ctx.one());
    let n0 = h[(0, 0)].norm_exp();
    let n1 = h[(1, 0)].norm_exp();
    if n1 > n0 {
        let wi = sl2_inverse(&weyl(&ctx));
        h = wi.mul(&h);
        left = wi.mul(&left);
    }
    let l = lower(&ctx, &h[(1, 0)].mul(&h[(0, 0)].inv()?).neg());
    h = l.mul(&h);
    left = l.mul(&left);
    let e = h[(0, 0)].valuation()?;
    let u = h[(0, 0)].shift(-e);
    let t = sl2(u.inv()?, ctx.zero(), ctx.zero(), u);
    h = t.mul(&h);
    left = t.mul(&left);
    // h = diag(p^e, p^{-e}) · [[1, n], [0, 1]]
    let n = h[(0, 1)].shift(-e);
    Ok(Iwasawa { k: sl2_inverse(&left), e, n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn roundtrips() {
        let ctx = PadicCtx::new(5, 40).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for m in 0..5 {
            let g = random_k(&ctx, &mut rng, 8).mul(&a_p(&ctx, m)).mul(&random_k(&ctx, &mut rng, 8));
            let c = sl2_cartan(&g).unwrap();
            assert_eq!(c.m, m);
            assert!(c.reassemble().congruent(&g, 30));
            let i = sl2_iwasawa(&g).unwrap();
            assert!(i.reassemble().congruent(&g, 30));
            assert!(i.k.is_integral());
        }
    }
}
