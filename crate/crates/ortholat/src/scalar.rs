//! Scalar abstractions shared by the matrix layer.
//!
//! Exact and p-adic scalars need a context (the prime, the precision) to
//! build constants, so the traits here produce constants from an existing
//! value instead of from nothing.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Zero};

/// A commutative ring with unit.
pub trait Ring: Clone + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_i64_like(&self, n: i64) -> Self;
    fn is_zero_el(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
}

/// A field: every nonzero element has an inverse.
pub trait Field: Ring {
    fn inv_ref(&self) -> Option<Self>;

    fn div_ref(&self, other: &Self) -> Option<Self> {
        other.inv_ref().map(|i| self.mul_ref(&i))
    }

    /// Preference for elimination pivots, larger is better; `None` for zero.
    fn pivot_weight(&self) -> Option<f64> {
        if self.is_zero_el() {
            None
        } else {
            Some(0.0)
        }
    }
}

/// Scalars carrying a p-adic valuation.
pub trait PValued: Field {
    /// Valuation at `p`; `None` for zero.
    fn pval(&self, p: u64) -> Option<i64>;
}

impl<T> Ring for T
where
    T: Num + Clone + Debug + std::ops::Neg<Output = T> + FromPrimitive,
{
    fn zero_like(&self) -> Self {
        T::zero()
    }
    fn one_like(&self) -> Self {
        T::one()
    }
    fn from_i64_like(&self, n: i64) -> Self {
        T::from_i64(n).expect("integer constant representable")
    }
    fn is_zero_el(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.clone() - other.clone()
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }
    fn neg_ref(&self) -> Self {
        -self.clone()
    }
}

macro_rules! float_field {
    ($t:ty) => {
        impl Field for $t {
            fn inv_ref(&self) -> Option<Self> {
                if *self == 0.0 {
                    None
                } else {
                    Some(1.0 / *self)
                }
            }
            fn pivot_weight(&self) -> Option<f64> {
                if *self == 0.0 {
                    None
                } else {
                    Some(self.abs() as f64)
                }
            }
        }
    };
}
float_field!(f32);
float_field!(f64);

macro_rules! ratio_field {
    ($i:ty) => {
        impl Field for Ratio<$i> {
            fn inv_ref(&self) -> Option<Self> {
                if self.is_zero() {
                    None
                } else {
                    Some(self.recip())
                }
            }
        }
    };
}
ratio_field!(BigInt);
ratio_field!(i64);
ratio_field!(i128);

/// Valuation of a nonzero big integer at `p`.
pub fn bigint_pval(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

impl PValued for Ratio<BigInt> {
    fn pval(&self, p: u64) -> Option<i64> {
        let vn = bigint_pval(self.numer(), p)?;
        let vd = bigint_pval(self.denom(), p).expect("denominator nonzero");
        Some(vn - vd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn rational_valuation() {
        let x = BigRational::new(BigInt::from(50), BigInt::from(3));
        assert_eq!(x.pval(5), Some(2));
        let y = BigRational::new(BigInt::from(7), BigInt::from(125));
        assert_eq!(y.pval(5), Some(-3));
        assert_eq!(BigRational::zero().pval(5), None);
    }

    #[test]
    fn blanket_ring_on_integers() {
        let a: i64 = 7;
        assert_eq!(a.mul_ref(&3), 21);
        assert_eq!(a.from_i64_like(-4), -4);
        assert!(0i64.is_zero_el());
    }
}
