//! Capped relative precision p-adic numbers.
//!
//! An element is stored as `p^val * unit` with `unit` known modulo
//! `p^rel`, `1 <= rel <= N`. Zero at working precision is a separate state
//! that only remembers how many absolute digits are known to vanish.

use std::cmp::{max, min};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::{Field, PValued, Ring};

/// Absolute precision of an exact zero.
pub const EXACT: i64 = i64::MAX;

/// The prime and digit cap shared by all elements of one computation.
pub struct PadicCtx {
    p: u64,
    prec: u32,
    p_big: BigUint,
    pows: Vec<BigUint>,
}

impl fmt::Debug for PadicCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q_{}(N={})", self.p, self.prec)
    }
}

impl PadicCtx {
    pub fn new(p: u64, prec: u32) -> Result<Arc<PadicCtx>> {
        if p < 3 || !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not an odd prime")));
        }
        if prec == 0 {
            return Err(Error::invalid("precision must be positive"));
        }
        let p_big = BigUint::from(p);
        let mut pows = Vec::with_capacity(prec as usize + 1);
        let mut acc = BigUint::one();
        for _ in 0..=prec {
            pows.push(acc.clone());
            acc *= &p_big;
        }
        Ok(Arc::new(PadicCtx { p, prec, p_big, pows }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// `p^k` for `0 <= k <= N`.
    pub fn modulus(&self, k: u32) -> &BigUint {
        &self.pows[k as usize]
    }

    pub fn zero(self: &Arc<Self>) -> Padic {
        Padic::zero_abs(self, EXACT)
    }

    pub fn one(self: &Arc<Self>) -> Padic {
        self.int(1)
    }

    pub fn int(self: &Arc<Self>, n: i64) -> Padic {
        self.bigint(&BigInt::from(n))
    }

    pub fn bigint(self: &Arc<Self>, n: &BigInt) -> Padic {
        if n.is_zero() {
            return self.zero();
        }
        let mut m = n.magnitude().clone();
        let mut v = 0i64;
        loop {
            let (q, r) = m.div_rem(&self.p_big);
            if !r.is_zero() {
                break;
            }
            m = q;
            v += 1;
        }
        let k = self.prec;
        let mut u = m % &self.pows[k as usize];
        if n.sign() == Sign::Minus {
            u = &self.pows[k as usize] - u;
        }
        Padic { ctx: self.clone(), val: v, unit: u, rel: k }
    }

    pub fn ratio(self: &Arc<Self>, num: i64, den: i64) -> Padic {
        assert!(den != 0, "zero denominator");
        self.int(num).div(&self.int(den)).expect("nonzero denominator")
    }

    pub fn rational(self: &Arc<Self>, q: &BigRational) -> Padic {
        let n = self.bigint(q.numer());
        let d = self.bigint(q.denom());
        n.div(&d).expect("rational denominators are nonzero")
    }

    /// `p^k` as an exact element, `k` may be negative.
    pub fn p_pow(self: &Arc<Self>, k: i64) -> Padic {
        Padic { ctx: self.clone(), val: k, unit: BigUint::one(), rel: self.prec }
    }

    /// Builds `p^val * unit` from a unit residue known to `rel` digits.
    pub fn from_parts(self: &Arc<Self>, val: i64, unit: BigUint, rel: u32) -> Result<Padic> {
        let rel = min(rel, self.prec);
        if rel == 0 {
            return Ok(Padic::zero_abs(self, val));
        }
        let u = unit % &self.pows[rel as usize];
        if (&u % &self.p_big).is_zero() {
            return Err(Error::invalid("unit part divisible by p"));
        }
        Ok(Padic { ctx: self.clone(), val, unit: u, rel })
    }

    /// Uniform element of Z_p at full precision.
    pub fn random_zp<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R) -> Padic {
        let mut acc = BigUint::zero();
        for _ in 0..self.prec {
            acc = acc * &self.p_big + BigUint::from(rng.random_range(0..self.p));
        }
        self.bigint(&BigInt::from(acc))
    }

    /// Uniform element of Z_p^x at full precision.
    pub fn random_unit<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R) -> Padic {
        loop {
            let x = self.random_zp(rng);
            if x.valuation() == Ok(0) {
                return x;
            }
        }
    }
}

/// An element of Q_p with tracked precision.
#[derive(Clone)]
pub struct Padic {
    ctx: Arc<PadicCtx>,
    /// Valuation, or absolute precision when `rel == 0`.
    val: i64,
    unit: BigUint,
    rel: u32,
}

impl fmt::Debug for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rel == 0 {
            if self.val == EXACT {
                write!(f, "0")
            } else {
                write!(f, "O({}^{})", self.ctx.p, self.val)
            }
        } else {
            write!(f, "{}^{}*{} + O({}^{})", self.ctx.p, self.val, self.unit, self.ctx.p, self.val + self.rel as i64)
        }
    }
}

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn sat_add(a: i64, b: i64) -> i64 {
    if a == EXACT || b == EXACT {
        EXACT
    } else {
        a + b
    }
}

impl Padic {
    fn zero_abs(ctx: &Arc<PadicCtx>, abs: i64) -> Padic {
        Padic { ctx: ctx.clone(), val: abs, unit: BigUint::zero(), rel: 0 }
    }

    /// `p^val0 * s` where `s` is known modulo `p^k`.
    fn normalize(ctx: &Arc<PadicCtx>, val0: i64, mut s: BigUint, k: u32) -> Padic {
        if s.is_zero() {
            return Padic::zero_abs(ctx, val0 + k as i64);
        }
        let mut v = 0u32;
        loop {
            let (q, r) = s.div_rem(&ctx.p_big);
            if !r.is_zero() {
                break;
            }
            s = q;
            v += 1;
        }
        Padic { ctx: ctx.clone(), val: val0 + v as i64, unit: s, rel: k - v }
    }

    pub fn ctx(&self) -> &Arc<PadicCtx> {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p
    }

    /// True when every tracked digit vanishes.
    pub fn is_zero(&self) -> bool {
        self.rel == 0
    }

    pub fn is_exact_zero(&self) -> bool {
        self.rel == 0 && self.val == EXACT
    }

    pub fn valuation(&self) -> Result<i64> {
        if self.rel == 0 {
            Err(Error::ZeroAtPrecision)
        } else {
            Ok(self.val)
        }
    }

    /// Valuation, with zero at precision reported as its absolute precision.
    pub fn valuation_lower_bound(&self) -> i64 {
        self.val
    }

    /// Number of known digits of the unit part.
    pub fn relative_precision(&self) -> u32 {
        self.rel
    }

    /// The element is known modulo `p^abs_precision()`.
    pub fn abs_precision(&self) -> i64 {
        if self.rel == 0 {
            self.val
        } else {
            self.val + self.rel as i64
        }
    }

    pub fn unit_part(&self) -> Option<&BigUint> {
        if self.rel == 0 {
            None
        } else {
            Some(&self.unit)
        }
    }

    /// `|x|_p` as a power of p: `Some(e)` means `p^e`; `None` for zero.
    pub fn norm_exp(&self) -> Option<i64> {
        if self.rel == 0 {
            None
        } else {
            Some(-self.val)
        }
    }

    pub fn abs_f64(&self) -> f64 {
        match self.norm_exp() {
            None => 0.0,
            Some(e) => (self.ctx.p as f64).powi(e as i32),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.rel == 0 && self.val >= 0 || self.rel > 0 && self.val >= 0
    }

    pub fn is_unit(&self) -> bool {
        self.rel > 0 && self.val == 0
    }

    /// Drops digits beyond absolute precision `abs`.
    pub fn truncate_abs(&self, abs: i64) -> Padic {
        if abs == EXACT || abs >= self.abs_precision() {
            return self.clone();
        }
        if self.rel == 0 || self.val >= abs {
            return Padic::zero_abs(&self.ctx, min(abs, self.abs_precision()));
        }
        let k = (abs - self.val) as u32;
        let u = &self.unit % &self.ctx.pows[k as usize];
        Padic { ctx: self.ctx.clone(), val: self.val, unit: u, rel: k }
    }

    pub fn add(&self, o: &Padic) -> Padic {
        match (self.rel == 0, o.rel == 0) {
            (true, true) => Padic::zero_abs(&self.ctx, min(self.val, o.val)),
            (true, false) => o.truncate_abs(self.val),
            (false, true) => self.truncate_abs(o.val),
            (false, false) => {
                let (a, b) = if self.val <= o.val { (self, o) } else { (o, self) };
                let abs = min(a.abs_precision(), b.abs_precision());
                let k = (abs - a.val) as u32;
                let shift = b.val - a.val;
                let mut s = a.unit.clone();
                if shift < k as i64 {
                    s += &b.unit * &self.ctx.pows[shift as usize];
                }
                let m = &self.ctx.pows[k as usize];
                if &s >= m {
                    s %= m;
                }
                if shift > 0 {
                    // leading digit comes from `a` alone
                    Padic { ctx: self.ctx.clone(), val: a.val, unit: s, rel: k }
                } else {
                    Padic::normalize(&self.ctx, a.val, s, k)
                }
            }
        }
    }

    pub fn neg(&self) -> Padic {
        if self.rel == 0 {
            return self.clone();
        }
        let m = &self.ctx.pows[self.rel as usize];
        Padic { ctx: self.ctx.clone(), val: self.val, unit: m - &self.unit, rel: self.rel }
    }

    pub fn sub(&self, o: &Padic) -> Padic {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Padic) -> Padic {
        match (self.rel == 0, o.rel == 0) {
            (true, true) => Padic::zero_abs(&self.ctx, sat_add(self.val, o.val)),
            (true, false) => Padic::zero_abs(&self.ctx, sat_add(self.val, o.val)),
            (false, true) => Padic::zero_abs(&self.ctx, sat_add(self.val, o.val)),
            (false, false) => {
                let rel = min(self.rel, o.rel);
                let u = (&self.unit * &o.unit) % &self.ctx.pows[rel as usize];
                Padic { ctx: self.ctx.clone(), val: self.val + o.val, unit: u, rel }
            }
        }
    }

    pub fn inv(&self) -> Result<Padic> {
        if self.rel == 0 {
            return Err(Error::DivisionByZero);
        }
        let m = &self.ctx.pows[self.rel as usize];
        let u = mod_inverse(&self.unit, m);
        Ok(Padic { ctx: self.ctx.clone(), val: -self.val, unit: u, rel: self.rel })
    }

    pub fn div(&self, o: &Padic) -> Result<Padic> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: u32) -> Padic {
        let mut acc = self.ctx.one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplication by `p^k`.
    pub fn shift(&self, k: i64) -> Padic {
        let mut r = self.clone();
        if r.val != EXACT {
            r.val += k;
        }
        r
    }

    /// Representative in `[0, p^k)` of an integral element known mod `p^k`.
    pub fn residue(&self, k: u32) -> Result<BigUint> {
        if self.rel > 0 && self.val < 0 {
            return Err(Error::invalid("element is not integral"));
        }
        if self.abs_precision() < k as i64 {
            return Err(Error::Precision { needed: k as i64, available: self.abs_precision() });
        }
        if self.rel == 0 || self.val >= k as i64 {
            return Ok(BigUint::zero());
        }
        let m = &self.ctx.pows[k as usize];
        Ok((&self.unit * &self.ctx.pows[self.val as usize]) % m)
    }

    /// Residue modulo `p^k` as a machine integer; requires `p^k < 2^64`.
    pub fn residue_u64(&self, k: u32) -> Result<u64> {
        self.residue(k)?.to_u64().ok_or_else(|| Error::invalid("residue exceeds 64 bits"))
    }

    /// Whether `self - o` vanishes modulo `p^k`, with precision certified.
    pub fn congruent(&self, o: &Padic, k: i64) -> bool {
        self.sub(o).val >= k
    }

    /// Legendre symbol of the unit part.
    pub fn unit_legendre(&self) -> Result<i8> {
        if self.rel == 0 {
            return Err(Error::ZeroAtPrecision);
        }
        let r = (&self.unit % &self.ctx.p_big).to_u64().expect("residue mod p fits");
        Ok(legendre_u64(r, self.ctx.p))
    }

    /// Whether the element is a nonzero square in Q_p.
    pub fn is_square(&self) -> Result<bool> {
        let v = self.valuation()?;
        Ok(v.rem_euclid(2) == 0 && self.unit_legendre()? == 1)
    }

    /// Canonical square root; see [`hensel_sqrt`].
    pub fn sqrt(&self) -> Result<Padic> {
        hensel_sqrt(self)
    }

    pub fn eq_at_precision(&self, o: &Padic) -> bool {
        self.sub(o).is_zero()
    }
}

impl<'a> Add<&'a Padic> for &'a Padic {
    type Output = Padic;
    fn add(self, o: &Padic) -> Padic {
        Padic::add(self, o)
    }
}

impl<'a> Sub<&'a Padic> for &'a Padic {
    type Output = Padic;
    fn sub(self, o: &Padic) -> Padic {
        Padic::sub(self, o)
    }
}

impl<'a> Mul<&'a Padic> for &'a Padic {
    type Output = Padic;
    fn mul(self, o: &Padic) -> Padic {
        Padic::mul(self, o)
    }
}

impl<'a> Neg for &'a Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        Padic::neg(self)
    }
}

impl Ring for Padic {
    fn zero_like(&self) -> Self {
        self.ctx.zero()
    }
    fn one_like(&self) -> Self {
        self.ctx.one()
    }
    fn from_i64_like(&self, n: i64) -> Self {
        self.ctx.int(n)
    }
    fn is_zero_el(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        Padic::add(self, other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        Padic::sub(self, other)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        Padic::mul(self, other)
    }
    fn neg_ref(&self) -> Self {
        Padic::neg(self)
    }
}

impl Field for Padic {
    fn inv_ref(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn pivot_weight(&self) -> Option<f64> {
        self.valuation().ok().map(|v| -(v as f64))
    }
}

impl PValued for Padic {
    fn pval(&self, p: u64) -> Option<i64> {
        debug_assert_eq!(p, self.ctx.p);
        self.valuation().ok()
    }
}

fn mod_inverse(a: &BigUint, m: &BigUint) -> BigUint {
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let e = a.extended_gcd(&m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(&m).to_biguint().expect("nonnegative")
}

/// `a^e mod m` on machine integers.
pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u128 % m as u128;
    let mut b = (a % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m as u128;
        }
        b = b * b % m as u128;
        e >>= 1;
    }
    a = r as u64;
    a
}

/// Deterministic primality for `u64` (trial division is enough at the
/// sizes used here, Miller–Rabin covers the rest).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn legendre_u64(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Legendre symbol `(a/p)` for `a` coprime to the odd prime `p`.
pub fn legendre_symbol(a: i64, p: u64) -> Result<i8> {
    if p < 3 || !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not an odd prime")));
    }
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return Err(Error::invalid(format!("{a} is divisible by {p}")));
    }
    Ok(legendre_u64(r, p))
}

/// Least positive integer that is a non-square modulo `p`.
pub fn smallest_nonresidue(p: u64) -> Result<u64> {
    if p < 3 || !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not an odd prime")));
    }
    Ok((2..p).find(|&a| legendre_u64(a, p) == -1).expect("odd primes have non-residues"))
}

/// Square root of a quadratic residue modulo the odd prime `p`
/// (Tonelli–Shanks), returning the smaller of the two roots in `[1, p)`.
pub fn sqrt_mod_p(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre_u64(a, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| legendre_u64(z, p) == -1).unwrap();
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulm(tt, tt);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulm(b, b);
        t = mulm(t, c);
        r = mulm(r, b);
    }
    Some(min(r, p - r))
}

/// Canonical Hensel square root.
///
/// The residue of the root modulo `p` is the smaller of the two roots in
/// `[1, p)`; the lift is unique from there. Odd valuation or a non-square
/// unit part is an error.
pub fn hensel_sqrt(a: &Padic) -> Result<Padic> {
    let ctx = a.ctx.clone();
    if a.rel == 0 {
        let abs = if a.val == EXACT { EXACT } else { a.val.div_euclid(2) };
        return Ok(Padic::zero_abs(&ctx, abs));
    }
    if a.val.rem_euclid(2) != 0 {
        return Err(Error::NotSquare);
    }
    let p = ctx.p;
    let u0 = (&a.unit % &ctx.p_big).to_u64().unwrap();
    let r0 = sqrt_mod_p(u0, p).ok_or(Error::NotSquare)?;
    let target = a.rel;
    let mut r = BigInt::from(r0);
    let mut k = 1u32;
    let unit = BigInt::from(a.unit.clone());
    while k < target {
        k = min(2 * k, target);
        let m = BigInt::from(ctx.pows[k as usize].clone());
        // Newton step r <- r - (r^2 - u) / (2r)
        let f = (&r * &r - &unit).mod_floor(&m);
        let inv2r = {
            let e = (BigInt::from(2) * &r).extended_gcd(&m);
            e.x.mod_floor(&m)
        };
        r = (&r - f * inv2r).mod_floor(&m);
    }
    let r = r.to_biguint().unwrap();
    Ok(Padic { ctx: ctx.clone(), val: a.val / 2, unit: r, rel: target })
}

/// Largest `e` with `p^e` dividing a nonzero integer.
pub fn int_pval(mut n: i64, p: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let mut v = 0;
    while n % p as i64 == 0 {
        n /= p as i64;
        v += 1;
    }
    Some(v)
}

/// Unit part and valuation of `max(a, b)` in precision bookkeeping terms.
pub fn max_norm_exp<'a, I: IntoIterator<Item = &'a Padic>>(xs: I) -> Option<i64> {
    xs.into_iter().filter_map(|x| x.norm_exp()).max()
}

/// Combine two optional norm exponents as `max`.
pub fn norm_max(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(max(x, y)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_symbol(1, 5).unwrap(), 1);
        assert_eq!(legendre_symbol(2, 5).unwrap(), -1);
        assert!(legendre_symbol(10, 5).is_err());
        for a in 1..40i64 {
            assert_eq!(legendre_symbol(a * a, 13).unwrap_or(1), 1);
        }
    }

    #[test]
    fn nonresidues() {
        assert_eq!(smallest_nonresidue(5).unwrap(), 2);
        assert_eq!(smallest_nonresidue(13).unwrap(), 2);
        assert_eq!(smallest_nonresidue(17).unwrap(), 3);
    }

    #[test]
    fn sqrt_minus_one() {
        let c = PadicCtx::new(5, 1).unwrap();
        let r = hensel_sqrt(&c.int(-1)).unwrap();
        assert_eq!(r.residue(1).unwrap(), BigUint::from(2u32));
        let c = PadicCtx::new(13, 1).unwrap();
        let r = hensel_sqrt(&c.int(-1)).unwrap();
        assert_eq!(r.residue(1).unwrap(), BigUint::from(5u32));
        let c = PadicCtx::new(5, 8).unwrap();
        let r = hensel_sqrt(&c.int(-1)).unwrap();
        let s = r.mul(&r).add(&c.one());
        assert!(s.is_zero());
        assert!(s.abs_precision() >= 8);
        assert_eq!(r.residue(1).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn cancellation_loses_digits() {
        let c = PadicCtx::new(5, 10).unwrap();
        let a = c.int(1 + 5 * 5 * 5);
        let b = c.one();
        let d = a.sub(&b);
        assert_eq!(d.valuation().unwrap(), 3);
        assert_eq!(d.relative_precision(), 7);
        let z = a.sub(&a);
        assert!(z.is_zero());
        assert_eq!(z.valuation(), Err(Error::ZeroAtPrecision));
        assert_eq!(z.abs_precision(), 10);
    }

    #[test]
    fn ultrametric_equality_case() {
        let c = PadicCtx::new(7, 20).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let x = c.random_unit(&mut rng);
            let y = c.random_unit(&mut rng).shift(3);
            assert_eq!(x.add(&y).valuation().unwrap(), 0);
        }
    }

    #[test]
    fn inverse_and_rationals() {
        let c = PadicCtx::new(5, 12).unwrap();
        let half = c.ratio(1, 2);
        assert!(half.mul(&c.int(2)).sub(&c.one()).is_zero());
        let x = c.ratio(3, 25);
        assert_eq!(x.valuation().unwrap(), -2);
        let y = x.inv().unwrap();
        assert!(y.mul(&c.int(3)).sub(&c.int(25)).is_zero());
    }

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(1_000_003));
        assert!(!is_prime(1_000_001));
    }
}
