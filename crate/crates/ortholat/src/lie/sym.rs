//! Laurent polynomials in `η` and `λ` with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::Ring;

/// `Σ c_{i,j} η^i λ^j`, stored without zero coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Sym {
    terms: BTreeMap<(i32, i32), BigRational>,
}

impl Sym {
    pub fn zero() -> Sym {
        Sym::default()
    }

    pub fn monomial(c: BigRational, eta: i32, lambda: i32) -> Sym {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((eta, lambda), c);
        }
        Sym { terms }
    }

    pub fn int(n: i64) -> Sym {
        Sym::monomial(BigRational::from_integer(BigInt::from(n)), 0, 0)
    }

    pub fn ratio(n: i64, d: i64) -> Sym {
        Sym::monomial(BigRational::new(BigInt::from(n), BigInt::from(d)), 0, 0)
    }

    pub fn eta() -> Sym {
        Sym::monomial(BigRational::one(), 1, 0)
    }

    pub fn lambda() -> Sym {
        Sym::monomial(BigRational::one(), 0, 1)
    }

    /// `c η^i λ^j` with integer `c`.
    pub fn term(c: i64, eta: i32, lambda: i32) -> Sym {
        Sym::monomial(BigRational::from_integer(BigInt::from(c)), eta, lambda)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn accumulate(&mut self, key: (i32, i32), c: BigRational) {
        let e = self.terms.entry(key).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Value at `η`, `λ`.
    pub fn eval(&self, eta: &BigRational, lambda: &BigRational) -> BigRational {
        let pow = |x: &BigRational, e: i32| {
            let b = if e < 0 { x.recip() } else { x.clone() };
            (0..e.unsigned_abs()).fold(BigRational::one(), |acc, _| acc * &b)
        };
        self.terms.iter().map(|(&(i, j), c)| c * pow(eta, i) * pow(lambda, j)).sum()
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (&(i, j), c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else if k > 0 { "+" } else { "" };
            write!(f, "{sign}")?;
            let a = c.abs();
            let bare = i == 0 && j == 0;
            if !a.is_one() || bare {
                write!(f, "{a}")?;
            }
            for (name, e) in [("η", i), ("λ", j)] {
                match e {
                    0 => {}
                    1 => write!(f, "{name}")?,
                    _ => write!(f, "{name}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl Ring for Sym {
    fn zero_like(&self) -> Self {
        Sym::zero()
    }
    fn one_like(&self) -> Self {
        Sym::int(1)
    }
    fn from_i64_like(&self, n: i64) -> Self {
        Sym::int(n)
    }
    fn is_zero_el(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.accumulate(k, c.clone());
        }
        out
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }
    fn mul_ref(&self, other: &Self) -> Self {
        let mut out = Sym::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &other.terms {
                out.accumulate((i + k, j + l), a * b);
            }
        }
        out
    }
    fn neg_ref(&self) -> Self {
        Sym { terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_arithmetic() {
        let x = Sym::eta().add_ref(&Sym::int(2));
        let y = Sym::term(1, -1, 1);
        let prod = x.mul_ref(&y);
        assert_eq!(prod, Sym::lambda().add_ref(&Sym::term(2, -1, 1)));
        assert!(prod.sub_ref(&prod).is_zero());
        let v = prod.eval(&BigRational::from_integer(2.into()), &BigRational::from_integer(3.into()));
        assert_eq!(v, BigRational::from_integer(6.into()));
        assert_eq!(format!("{}", Sym::term(-4, 1, 0).add_ref(&Sym::ratio(1, 3))), "1/3-4η");
    }
}
