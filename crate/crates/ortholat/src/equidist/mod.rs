//! Empirical equidistribution harness: cap discrepancy of the sphere
//! marginal, shape statistics, sphere/shape independence and the growth of
//! `|Q_D|`.

pub mod caps;
pub mod stats;
pub mod sweep;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::shape::ShapeObservables;
use crate::sphere::{feasible, sphere_orbit_reps};

pub use caps::{cap_discrepancy, cap_fractions, cap_measure, orbit_cap_fractions, Cap, CapFamily};
pub use stats::{ks_distance, ks_distance_weighted, ols, weighted_pearson, OlsFit};
pub use sweep::{log_uniform_grid, run_sweep, EquidistConfig, EquidistReport, SweepRow};

/// The shape data used by the statistics: `λ_i/λ₁` and the height.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShapeSample {
    pub ratios: Vec<f64>,
    pub ht: f64,
}

impl From<&ShapeObservables> for ShapeSample {
    fn from(s: &ShapeObservables) -> Self {
        ShapeSample { ratios: s.ratios.clone(), ht: s.ht }
    }
}

/// Weighted empirical distribution function.
#[derive(Clone, Debug, PartialEq)]
pub struct Ecdf {
    /// Distinct values with cumulative probability `P(X ≤ x)`.
    pub steps: Vec<(f64, f64)>,
}

impl Ecdf {
    pub fn new(sample: &[(f64, f64)]) -> Result<Self> {
        let total: f64 = sample.iter().map(|x| x.1).sum();
        if sample.is_empty() || total <= 0.0 {
            return Err(Error::invalid("empirical distribution of an empty sample"));
        }
        let mut s = sample.to_vec();
        s.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut steps: Vec<(f64, f64)> = Vec::new();
        let mut acc = 0.0;
        for (v, w) in s {
            acc += w;
            match steps.last_mut() {
                Some(last) if last.0 == v => last.1 = acc / total,
                _ => steps.push((v, acc / total)),
            }
        }
        Ok(Ecdf { steps })
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self.steps.partition_point(|s| s.0 <= x) {
            0 => 0.0,
            k => self.steps[k - 1].1,
        }
    }

    /// Smallest value `x` with `cdf(x) ≥ q`.
    pub fn quantile(&self, q: f64) -> f64 {
        let k = self.steps.partition_point(|s| s.1 < q - 1e-12);
        self.steps[k.min(self.steps.len() - 1)].0
    }

    pub fn summary(&self) -> DistSummary {
        DistSummary {
            min: self.steps[0].0,
            q10: self.quantile(0.1),
            q25: self.quantile(0.25),
            median: self.quantile(0.5),
            q75: self.quantile(0.75),
            q90: self.quantile(0.9),
            max: self.steps[self.steps.len() - 1].0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DistSummary {
    pub min: f64,
    pub q10: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub q90: f64,
    pub max: f64,
}

pub const DEFAULT_HT_THRESHOLDS: [f64; 3] = [1.25, 1.5, 2.0];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShapeStatistics {
    /// Total weight (the number of points for unit weights).
    pub weight: f64,
    /// Summaries of `λ_{i+1}/λ₁`, `i = 1, 2, …`.
    pub ratios: Vec<DistSummary>,
    pub ht: DistSummary,
    /// `(R, fraction with ht > R)`.
    pub ht_tail: Vec<(f64, f64)>,
    #[serde(skip)]
    pub ratio_ecdfs: Vec<Ecdf>,
    #[serde(skip)]
    pub ht_ecdf: Ecdf,
}

/// Distribution summaries of weighted shapes.
pub fn shape_statistics_weighted(shapes: &[(ShapeSample, f64)], ht_thresholds: &[f64]) -> Result<ShapeStatistics> {
    let Some(first) = shapes.first() else {
        return Err(Error::invalid("shape statistics of an empty sample"));
    };
    let n = first.0.ratios.len();
    if shapes.iter().any(|s| s.0.ratios.len() != n) {
        return Err(Error::invalid("shapes of different ranks"));
    }
    let ratio_ecdfs = (1..n)
        .map(|i| Ecdf::new(&shapes.iter().map(|(s, w)| (s.ratios[i], *w)).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    let ht_ecdf = Ecdf::new(&shapes.iter().map(|(s, w)| (s.ht, *w)).collect::<Vec<_>>())?;
    let ht_tail = ht_thresholds.iter().map(|&r| (r, 1.0 - ht_ecdf.cdf(r))).collect();
    Ok(ShapeStatistics {
        weight: shapes.iter().map(|s| s.1).sum(),
        ratios: ratio_ecdfs.iter().map(Ecdf::summary).collect(),
        ht: ht_ecdf.summary(),
        ht_tail,
        ratio_ecdfs,
        ht_ecdf,
    })
}

pub fn shape_statistics(shapes: &[ShapeObservables]) -> Result<ShapeStatistics> {
    let s: Vec<(ShapeSample, f64)> = shapes.iter().map(|s| (s.into(), 1.0)).collect();
    shape_statistics_weighted(&s, &DEFAULT_HT_THRESHOLDS)
}

/// Two-sample KS distance of `λ₂/λ₁` between two weighted pools.
pub fn shape_ks(a: &[(ShapeSample, f64)], b: &[(ShapeSample, f64)]) -> Result<f64> {
    let pick = |p: &[(ShapeSample, f64)]| -> Result<Vec<(f64, f64)>> {
        p.iter()
            .map(|(s, w)| s.ratios.get(1).map(|&r| (r, *w)).ok_or_else(|| Error::invalid("rank-one shape")))
            .collect()
    };
    ks_distance_weighted(&pick(a)?, &pick(b)?)
}

pub const POSITION_FEATURES: [&str; 5] = ["u1", "u1^4", "cap(e1,0.5)", "cap(e1+e2,0.5)", "cap(e1+e2+e3,0.5)"];
pub const SHAPE_FEATURES: [&str; 3] = ["l2/l1", "lmax/l1", "ht"];

/// Position features of a unit vector; they read only `u₁, u₂, u₃`.
pub fn position_features(u: &[f64]) -> [f64; 5] {
    let x = |i: usize| u.get(i).copied().unwrap_or(0.0);
    let ind = |s: f64| if s > 0.5 { 1.0 } else { 0.0 };
    let sq = x(0) * x(0);
    [
        x(0),
        sq * sq,
        ind(x(0)),
        ind((x(0) + x(1)) / 2f64.sqrt()),
        ind((x(0) + x(1) + x(2)) / 3f64.sqrt()),
    ]
}

pub fn shape_features(s: &ShapeSample) -> [f64; 3] {
    [s.ratios.get(1).copied().unwrap_or(1.0), *s.ratios.last().unwrap_or(&1.0), s.ht]
}

/// One signed-permutation orbit, reduced to what the correlations need.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndependenceRow {
    pub weight: f64,
    /// Orbit means of the position features and of their squares.
    pub mean: [f64; 5],
    pub mean_sq: [f64; 5],
    /// Shape features, constant along the orbit.
    pub shape: [f64; 3],
}

impl IndependenceRow {
    pub fn from_orbit(u: &[f64], weight: f64, shape: &ShapeSample) -> Self {
        let mut mean = [0.0; 5];
        let mut mean_sq = [0.0; 5];
        let n = caps::for_each_orbit_prefix(u, u.len().min(3), |x| {
            for (k, f) in position_features(x).into_iter().enumerate() {
                mean[k] += f;
                mean_sq[k] += f * f;
            }
        }) as f64;
        for k in 0..5 {
            mean[k] /= n;
            mean_sq[k] /= n;
        }
        IndependenceRow { weight, mean, mean_sq, shape: shape_features(shape) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Independence {
    /// `max |corr|` over (position, shape) feature pairs.
    pub statistic: f64,
    pub position_feature: String,
    pub shape_feature: String,
    /// Row-major `5 × 3` correlations.
    pub correlations: Vec<Vec<f64>>,
}

fn independence_from(correlations: Vec<Vec<f64>>) -> Independence {
    let mut best = (0.0, 0, 0);
    for (i, row) in correlations.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c.abs() > best.0 {
                best = (c.abs(), i, j);
            }
        }
    }
    Independence {
        statistic: best.0.min(1.0),
        position_feature: POSITION_FEATURES[best.1].into(),
        shape_feature: SHAPE_FEATURES[best.2].into(),
        correlations,
    }
}

/// Correlations between position and shape features over paired lists.
pub fn joint_independence(points: &[Vec<f64>], shapes: &[ShapeSample]) -> Result<Independence> {
    if points.len() != shapes.len() {
        return Err(Error::invalid("points and shapes must be paired"));
    }
    if points.len() < 2 {
        return Err(Error::invalid("independence needs at least two pairs"));
    }
    let pos: Vec<[f64; 5]> = points.iter().map(|u| position_features(u)).collect();
    let sh: Vec<[f64; 3]> = shapes.iter().map(shape_features).collect();
    let w = vec![1.0; points.len()];
    let mut corr = vec![vec![0.0; 3]; 5];
    for (i, row) in corr.iter_mut().enumerate() {
        for (j, c) in row.iter_mut().enumerate() {
            let x: Vec<f64> = pos.iter().map(|p| p[i]).collect();
            let y: Vec<f64> = sh.iter().map(|s| s[j]).collect();
            *c = weighted_pearson(&x, &y, &w)?;
        }
    }
    Ok(independence_from(corr))
}

/// The same correlations over the union of the orbits, computed exactly
/// from orbit means: shapes are constant on orbits, so only the first two
/// orbit moments of each position feature enter.
pub fn orbit_independence(rows: &[IndependenceRow]) -> Result<Independence> {
    let total: f64 = rows.iter().map(|r| r.weight).sum();
    if rows.is_empty() || total <= 0.0 {
        return Err(Error::invalid("independence of an empty set"));
    }
    let mut corr = vec![vec![0.0; 3]; 5];
    for (i, row) in corr.iter_mut().enumerate() {
        let mu = rows.iter().map(|r| r.weight * r.mean[i]).sum::<f64>() / total;
        let var_f = (rows.iter().map(|r| r.weight * r.mean_sq[i]).sum::<f64>() / total - mu * mu).max(0.0);
        for (j, c) in row.iter_mut().enumerate() {
            let nu = rows.iter().map(|r| r.weight * r.shape[j]).sum::<f64>() / total;
            let var_g = rows.iter().map(|r| r.weight * (r.shape[j] - nu) * (r.shape[j] - nu)).sum::<f64>() / total;
            let cov = rows.iter().map(|r| r.weight * (r.mean[i] - mu) * (r.shape[j] - nu)).sum::<f64>() / total;
            *c = if var_f <= 1e-15 || var_g <= 1e-15 { 0.0 } else { cov / (var_f * var_g).sqrt() };
        }
    }
    Ok(independence_from(corr))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthFit {
    pub d: usize,
    /// `(D, |Q_D|)` over the feasible `D` of the range.
    pub counts: Vec<(i64, u64)>,
    pub slope: OlsFit,
    pub exponent: f64,
    /// `max (log|Q_D| − (d−1)/2·log D)` over the lower half of the range.
    pub c_fit: f64,
    /// The same maximum over the whole range.
    pub c_max: f64,
    /// Whether the upper half satisfies the bound with `c_fit`.
    pub holdout_holds: bool,
}

/// Fits `log|Q_D|` against `log D` over the given discriminants.
pub fn growth_fit(d: usize, counts: &[(i64, u64)]) -> Result<GrowthFit> {
    let pts: Vec<(i64, u64)> = counts.iter().copied().filter(|&(_, c)| c > 0).collect();
    let x: Vec<f64> = pts.iter().map(|p| (p.0 as f64).ln()).collect();
    let y: Vec<f64> = pts.iter().map(|p| (p.1 as f64).ln()).collect();
    let slope = ols(&x, &y)?;
    let exponent = (d as f64 - 1.0) / 2.0;
    let excess: Vec<f64> = x.iter().zip(&y).map(|(a, b)| b - exponent * a).collect();
    let half = excess.len() / 2;
    let c_fit = excess[..half].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let c_max = excess.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let holdout_holds = excess[half..].iter().all(|&e| e <= c_fit);
    Ok(GrowthFit { d, counts: pts, slope, exponent, c_fit, c_max, holdout_holds })
}

/// `|Q_D|` for every feasible `D` in the list and the fitted exponent.
pub fn growth_experiment(d: usize, discs: &[i64]) -> Result<GrowthFit> {
    if !(4..=5).contains(&d) {
        return Err(Error::invalid("growth experiment needs d ∈ {4, 5}"));
    }
    let mut counts = Vec::new();
    for &disc in discs {
        if feasible(d, disc)? {
            let n: u64 = sphere_orbit_reps(d, disc)?.iter().map(|r| r.orbit_size).sum();
            counts.push((disc, n));
        }
    }
    growth_fit(d, &counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ecdf_steps() {
        let e = Ecdf::new(&[(2.0, 1.0), (1.0, 1.0), (2.0, 2.0)]).unwrap();
        assert_eq!(e.steps, vec![(1.0, 0.25), (2.0, 1.0)]);
        assert_eq!(e.cdf(0.5), 0.0);
        assert_eq!(e.cdf(1.5), 0.25);
        assert_eq!(e.quantile(0.5), 2.0);
        assert_eq!(e.quantile(0.25), 1.0);
    }

    #[test]
    fn cubic_shapes_are_a_point_mass() {
        let s = ShapeSample { ratios: vec![1.0; 4], ht: 1.0 };
        let st = shape_statistics_weighted(&vec![(s, 1.0); 10], &DEFAULT_HT_THRESHOLDS).unwrap();
        for r in &st.ratios {
            assert_eq!((r.min, r.max), (1.0, 1.0));
        }
        assert!(st.ht_tail.iter().all(|t| t.1 == 0.0));
    }
}
