//! Spherical caps `{u : ⟨u, c⟩ ≥ t}`, their normalized measures, and
//! empirical fractions either over explicit points or exactly over
//! signed-permutation orbits.

use serde::Serialize;
use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};

/// Relative tolerance under which a point counts as lying on a cap boundary.
const BOUNDARY_TOL: f64 = 1e-12;

/// Normalized surface measure of `{u ∈ S^{d−1} : u₁ ≥ t}`.
pub fn cap_measure(d: usize, t: f64) -> f64 {
    assert!(d >= 2, "caps need d ≥ 2");
    if t >= 1.0 {
        return 0.0;
    }
    if t <= -1.0 {
        return 1.0;
    }
    if t == 0.0 {
        return 0.5;
    }
    let half = 0.5 * beta_reg((d as f64 - 1.0) / 2.0, 0.5, 1.0 - t * t);
    if t > 0.0 { half } else { 1.0 - half }
}

/// A cap with an integer center direction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cap {
    pub direction: Vec<i64>,
    pub center: Vec<f64>,
    pub threshold: f64,
    pub measure: f64,
}

impl Cap {
    pub fn new(direction: Vec<i64>, threshold: f64) -> Result<Self> {
        let d = direction.len();
        if d < 2 || direction.iter().all(|&x| x == 0) {
            return Err(Error::invalid("cap direction must be a nonzero vector in d ≥ 2"));
        }
        if !(threshold > -1.0 && threshold < 1.0) {
            return Err(Error::invalid("cap threshold must lie in (−1, 1)"));
        }
        let norm = (direction.iter().map(|&x| (x * x) as f64).sum::<f64>()).sqrt();
        let center = direction.iter().map(|&x| x as f64 / norm).collect();
        Ok(Cap { measure: cap_measure(d, threshold), direction, center, threshold })
    }

    /// 1, ½ or 0 for a unit vector inside, on the boundary of, or outside the cap.
    pub fn indicator(&self, u: &[f64]) -> f64 {
        let s: f64 = self.center.iter().zip(u).map(|(c, x)| c * x).sum();
        step(s - self.threshold)
    }

    fn support(&self) -> Vec<(usize, f64)> {
        self.center.iter().copied().enumerate().filter(|&(_, c)| c != 0.0).collect()
    }
}

fn step(x: f64) -> f64 {
    if x.abs() <= BOUNDARY_TOL {
        0.5
    } else if x > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Default center directions: one per signed-permutation class of small
/// integer vectors with support at most three.
pub const DEFAULT_DIRECTIONS: [&[i64]; 8] =
    [&[1], &[1, 1], &[2, 1], &[3, 1], &[1, 1, 1], &[2, 1, 1], &[2, 2, 1], &[3, 2, 1]];

pub const DEFAULT_THRESHOLDS: [f64; 4] = [0.0, 0.25, 0.5, 0.75];

/// A finite family of caps. The empirical fraction of any signed-permutation
/// invariant point set is the same for a cap and for its images, so the
/// default family stands for the closure of its centers under signed
/// permutations and `c ↦ −c`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapFamily {
    pub d: usize,
    pub caps: Vec<Cap>,
}

impl CapFamily {
    pub fn new(d: usize, caps: Vec<Cap>) -> Result<Self> {
        if caps.is_empty() {
            return Err(Error::invalid("empty cap family"));
        }
        if caps.iter().any(|c| c.direction.len() != d) {
            return Err(Error::invalid("cap dimension mismatch"));
        }
        Ok(CapFamily { d, caps })
    }

    pub fn standard(d: usize) -> Result<Self> {
        Self::from_directions(d, &DEFAULT_DIRECTIONS, &DEFAULT_THRESHOLDS)
    }

    /// Caps for each direction (padded with zeros to length `d`, skipped
    /// when longer) and each threshold.
    pub fn from_directions(d: usize, directions: &[&[i64]], thresholds: &[f64]) -> Result<Self> {
        let mut caps = Vec::new();
        for dir in directions.iter().filter(|dir| dir.len() <= d) {
            let mut v = dir.to_vec();
            v.resize(d, 0);
            for &t in thresholds {
                caps.push(Cap::new(v.clone(), t)?);
            }
        }
        Self::new(d, caps)
    }

    /// The coordinate hemispheres `u_i ≥ 0` and `u_i ≤ 0`.
    pub fn coordinate_hemispheres(d: usize) -> Result<Self> {
        let mut caps = Vec::new();
        for i in 0..d {
            for s in [1, -1] {
                let mut v = vec![0; d];
                v[i] = s;
                caps.push(Cap::new(v, 0.0)?);
            }
        }
        Self::new(d, caps)
    }

    pub fn len(&self) -> usize {
        self.caps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.caps.is_empty()
    }
}

/// Fraction of unit vectors in each cap.
pub fn cap_fractions(points: &[Vec<f64>], family: &CapFamily) -> Result<Vec<f64>> {
    if points.is_empty() {
        return Err(Error::invalid("cap discrepancy of an empty point set"));
    }
    if points.iter().any(|u| u.len() != family.d) {
        return Err(Error::invalid("point dimension mismatch"));
    }
    let n = points.len() as f64;
    Ok(family.caps.iter().map(|c| points.iter().map(|u| c.indicator(u)).sum::<f64>() / n).collect())
}

/// `max_cap |fraction − σ(cap)|` over explicit unit vectors.
pub fn cap_discrepancy(points: &[Vec<f64>], family: &CapFamily) -> Result<f64> {
    let f = cap_fractions(points, family)?;
    Ok(discrepancy_of(&f, family))
}

/// `max_cap |fraction − σ(cap)|` for given fractions.
pub fn discrepancy_of(fractions: &[f64], family: &CapFamily) -> f64 {
    fractions.iter().zip(&family.caps).map(|(f, c)| (f - c.measure).abs()).fold(0.0, f64::max).min(1.0)
}

/// Calls `f` with the first `s` coordinates of `w·u` for every signed
/// permutation `w`, grouped so that each call stands for the same number of
/// group elements. Returns the number of calls.
pub fn for_each_orbit_prefix(u: &[f64], s: usize, mut f: impl FnMut(&[f64])) -> usize {
    let d = u.len();
    assert!(s <= d);
    let mut idx = vec![0usize; s];
    let mut used = vec![false; d];
    let mut buf = vec![0.0; s];
    let mut calls = 0;
    fn rec(
        k: usize, u: &[f64], idx: &mut [usize], used: &mut [bool], buf: &mut [f64], f: &mut dyn FnMut(&[f64]),
        calls: &mut usize,
    ) {
        if k == idx.len() {
            let s = idx.len();
            for mask in 0..(1u32 << s) {
                for j in 0..s {
                    let x = u[idx[j]];
                    buf[j] = if mask >> j & 1 == 1 { -x } else { x };
                }
                f(buf);
                *calls += 1;
            }
            return;
        }
        for i in 0..u.len() {
            if !used[i] {
                used[i] = true;
                idx[k] = i;
                rec(k + 1, u, idx, used, buf, f, calls);
                used[i] = false;
            }
        }
    }
    rec(0, u, &mut idx, &mut used, &mut buf, &mut f, &mut calls);
    calls
}

/// Fraction of the signed-permutation orbit of `u` in each cap, exactly:
/// a cap sees only the coordinates on its center's support, and those are
/// uniformly distributed over ordered choices of distinct source
/// coordinates with independent signs.
pub fn orbit_cap_fractions(u: &[f64], family: &CapFamily) -> Vec<f64> {
    let caps = &family.caps;
    let mut out = vec![0.0; caps.len()];
    let mut i = 0;
    while i < caps.len() {
        // caps sharing a center share one pass over the orbit
        let j = i + caps[i..].iter().take_while(|c| c.direction == caps[i].direction).count();
        let sup = caps[i].support();
        let n = for_each_orbit_prefix(u, sup.len(), |x| {
            let s: f64 = sup.iter().zip(x).map(|(&(_, c), xi)| c * xi).sum();
            for (o, cap) in out[i..j].iter_mut().zip(&caps[i..j]) {
                *o += step(s - cap.threshold);
            }
        });
        for o in &mut out[i..j] {
            *o /= n as f64;
        }
        i = j;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measure_values() {
        for d in 2..8 {
            assert_eq!(cap_measure(d, 0.0), 0.5);
            let mut prev = 1.0;
            for i in -19..20 {
                let m = cap_measure(d, i as f64 / 20.0);
                assert!(m <= prev + 1e-15 && (0.0..=1.0).contains(&m));
                prev = m;
                assert!((m + cap_measure(d, -(i as f64) / 20.0) - 1.0).abs() < 1e-12);
            }
        }
        // d = 3: Archimedes, σ = (1 − t)/2
        assert!((cap_measure(3, 0.3) - 0.35).abs() < 1e-12);
        // d = 2: arc length, σ = arccos(t)/π
        assert!((cap_measure(2, 0.5) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn orbit_fractions_match_explicit_orbits() {
        use crate::sphere::signed_permutations;
        let fam = CapFamily::standard(5).unwrap();
        for v in [vec![3i64, 2, 1, 1, 0], vec![5, 1, 1, 0, 0], vec![2, 2, 2, 1, 1]] {
            let n = (v.iter().map(|x| x * x).sum::<i64>() as f64).sqrt();
            let orbit: Vec<Vec<f64>> =
                signed_permutations(&v).iter().map(|w| w.iter().map(|&x| x as f64 / n).collect()).collect();
            let u: Vec<f64> = v.iter().map(|&x| x as f64 / n).collect();
            let exact = orbit_cap_fractions(&u, &fam);
            let direct = cap_fractions(&orbit, &fam).unwrap();
            for (a, b) in exact.iter().zip(&direct) {
                assert!((a - b).abs() < 1e-12, "{v:?}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn rejects_bad_caps() {
        assert!(Cap::new(vec![0, 0, 0], 0.1).is_err());
        assert!(Cap::new(vec![1, 0, 0], 1.0).is_err());
        assert!(cap_discrepancy(&[], &CapFamily::standard(4).unwrap()).is_err());
    }
}
