//! Haar volumes of norm balls and spheres, normalised by `m(K) = 1`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::Error;

/// Groups whose ball volumes are known in closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BallKind {
    So21,
    So31,
    Sl2,
    /// The image of `SL₂ × SL₂` in `SO(2,2)`.
    So22Plus,
}

impl BallKind {
    pub const ALL: [BallKind; 4] = [BallKind::So21, BallKind::So31, BallKind::Sl2, BallKind::So22Plus];

    pub fn name(self) -> &'static str {
        match self {
            BallKind::So21 => "so21",
            BallKind::So31 => "so31",
            BallKind::Sl2 => "sl2",
            BallKind::So22Plus => "so22",
        }
    }
}

impl fmt::Display for BallKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BallKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "so21" => Ok(BallKind::So21),
            "so31" => Ok(BallKind::So31),
            "sl2" => Ok(BallKind::Sl2),
            "so22" | "so22plus" | "so22+" => Ok(BallKind::So22Plus),
            _ => Err(Error::invalid(format!("unknown group kind {s:?}"))),
        }
    }
}

fn int(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

fn pw(p: u64, e: u32) -> BigInt {
    BigInt::from(p).pow(e)
}

/// Volume of the sphere `{‖g‖_p = p^ℓ}`.
pub fn sphere_volume(kind: BallKind, p: u64, l: u32) -> BigRational {
    if l == 0 {
        return int(BigInt::from(1));
    }
    let pb = BigInt::from(p);
    let v = match kind {
        BallKind::So21 => (&pb + 1) * pw(p, l - 1),
        BallKind::So31 => (&pb * &pb + 1) * pw(p, 2 * (l - 1)),
        BallKind::Sl2 => (&pb + 1) * pw(p, 2 * l - 1),
        BallKind::So22Plus => {
            let q = &pb + 1;
            (BigInt::from(2) * &q * &pb + &q * &q * BigInt::from(l - 1)) * pw(p, 2 * l - 2)
        }
    };
    int(v)
}

/// Volume of the ball `{‖g‖_p ≤ p^ℓ}`.
pub fn ball_volume(kind: BallKind, p: u64, l: u32) -> BigRational {
    let one = int(BigInt::from(1));
    let pr = int(BigInt::from(p));
    match kind {
        BallKind::So21 => {
            &one + (&pr + &one) / (&pr - &one) * (int(pw(p, l)) - &one)
        }
        BallKind::So31 => {
            let p2 = &pr * &pr;
            &one + (&p2 + &one) / (&p2 - &one) * (int(pw(p, 2 * l)) - &one)
        }
        BallKind::Sl2 => &one + &pr / (&pr - &one) * (int(pw(p, 2 * l)) - &one),
        BallKind::So22Plus => (0..=l).map(|k| sphere_volume(kind, p, k)).sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances() {
        assert_eq!(ball_volume(BallKind::So21, 5, 2), int(BigInt::from(37)));
        assert_eq!(ball_volume(BallKind::So31, 5, 1), int(BigInt::from(27)));
        assert_eq!(sphere_volume(BallKind::So22Plus, 5, 1), int(BigInt::from(60)));
    }

    #[test]
    fn balls_are_sums_of_spheres() {
        for kind in BallKind::ALL {
            for p in [3, 5, 13] {
                for l in 0..5 {
                    let s: BigRational = (0..=l).map(|k| sphere_volume(kind, p, k)).sum();
                    assert_eq!(s, ball_volume(kind, p, l), "{kind} {p} {l}");
                }
            }
        }
    }
}
