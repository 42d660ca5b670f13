//! The discriminant sweep: one work unit per `D`, parallel over orbit
//! representatives, merged sequentially in `D` order so that the report does
//! not depend on the number of workers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::caps::{discrepancy_of, orbit_cap_fractions, CapFamily, DEFAULT_DIRECTIONS};
use super::stats::{effective_size, ks_distance_weighted, ks_pvalue, ols, OlsFit};
use super::{
    growth_fit, orbit_independence, shape_statistics_weighted, DistSummary, GrowthFit, IndependenceRow, ShapeSample,
    DEFAULT_HT_THRESHOLDS,
};
use crate::error::{Error, Result};
use crate::shape::shape;
use crate::sphere::{feasible, sphere_orbit_reps, SpherePoint};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquidistConfig {
    pub d: usize,
    pub dmin: i64,
    pub dmax: i64,
    /// Number of log-uniform strata; each contributes at most one `D`.
    pub samples: usize,
    pub cap_thresholds: Vec<f64>,
    pub ht_thresholds: Vec<f64>,
    pub seed: u64,
}

impl Default for EquidistConfig {
    fn default() -> Self {
        EquidistConfig {
            d: 5,
            dmin: 1_000,
            dmax: 100_000,
            samples: 100,
            cap_thresholds: super::caps::DEFAULT_THRESHOLDS.to_vec(),
            ht_thresholds: DEFAULT_HT_THRESHOLDS.to_vec(),
            seed: 1,
        }
    }
}

impl EquidistConfig {
    pub fn validate(&self) -> Result<()> {
        if !(4..=5).contains(&self.d) {
            return Err(Error::invalid("the sweep supports d ∈ {4, 5}"));
        }
        if self.dmin < 1 || self.dmax <= self.dmin {
            return Err(Error::invalid("need 1 ≤ dmin < dmax"));
        }
        if self.samples < 4 {
            return Err(Error::invalid("need at least four samples"));
        }
        if self.cap_thresholds.is_empty() {
            return Err(Error::invalid("no cap thresholds"));
        }
        Ok(())
    }

    pub fn cap_family(&self) -> Result<CapFamily> {
        CapFamily::from_directions(self.d, &DEFAULT_DIRECTIONS, &self.cap_thresholds)
    }
}

/// One jittered point per stratum of `[log dmin, log dmax]`, rounded,
/// deduplicated, infeasible values dropped; sorted ascending.
pub fn log_uniform_grid(d: usize, dmin: i64, dmax: i64, samples: usize, seed: u64) -> Result<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b) = ((dmin as f64).ln(), (dmax as f64).ln());
    let mut out = Vec::with_capacity(samples);
    for i in 0..samples {
        let u: f64 = rng.random();
        let disc = (a + (i as f64 + u) / samples as f64 * (b - a)).exp().round() as i64;
        let disc = disc.clamp(dmin, dmax);
        if feasible(d, disc)? {
            out.push(disc);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub disc: i64,
    /// `|Q_D|`.
    pub count: u64,
    pub orbit_reps: usize,
    pub discrepancy: f64,
    /// Index into the cap family of the cap attaining the discrepancy.
    pub worst_cap: usize,
    pub independence: f64,
    pub ratio2: DistSummary,
    pub ht_tail: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShapeComparison {
    pub split: f64,
    pub weight_a: f64,
    pub weight_b: f64,
    pub ks: f64,
    /// Asymptotic p-value with Kish effective sizes (orbits are not
    /// independent samples, so this is indicative only).
    pub pvalue: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquidistReport {
    pub config: EquidistConfig,
    pub caps: usize,
    pub rows: Vec<SweepRow>,
    /// `log discrepancy ~ log D`.
    pub discrepancy_fit: OlsFit,
    /// `log independence ~ log D`, over rows with a nonzero statistic.
    pub independence_fit: OlsFit,
    pub growth: GrowthFit,
    /// `λ₂/λ₁` pools below and above the geometric midpoint of the range;
    /// `None` when a pool is empty.
    pub shape_halves: Option<ShapeComparison>,
    /// Pools on the four quarters of the log range: (Q1 vs Q2, Q3 vs Q4).
    pub shape_quarters: (Option<ShapeComparison>, Option<ShapeComparison>),
}

struct RepRecord {
    weight: f64,
    fractions: Vec<f64>,
    independence: IndependenceRow,
    shape: ShapeSample,
}

fn rep_record(v: &[i64], weight: f64, family: &CapFamily) -> Result<RepRecord> {
    let p = SpherePoint::new(v.to_vec())?;
    let u = p.unit();
    let shape: ShapeSample = (&shape(&p)?).into();
    Ok(RepRecord {
        weight,
        fractions: orbit_cap_fractions(&u, family),
        independence: IndependenceRow::from_orbit(&u, weight, &shape),
        shape,
    })
}

struct DiscResult {
    row: SweepRow,
    ratio2: Vec<(f64, f64)>,
}

fn run_disc(d: usize, disc: i64, family: &CapFamily, ht: &[f64]) -> Result<DiscResult> {
    let reps = sphere_orbit_reps(d, disc)?;
    if reps.is_empty() {
        return Err(Error::invalid(format!("no primitive points of norm {disc} in dimension {d}")));
    }
    let recs: Vec<RepRecord> =
        reps.par_iter().map(|r| rep_record(&r.v, r.orbit_size as f64, family)).collect::<Result<Vec<_>>>()?;
    let count: u64 = reps.iter().map(|r| r.orbit_size).sum();
    let total = count as f64;
    let mut fractions = vec![0.0; family.len()];
    for r in &recs {
        for (f, x) in fractions.iter_mut().zip(&r.fractions) {
            *f += r.weight * x;
        }
    }
    fractions.iter_mut().for_each(|f| *f /= total);
    let discrepancy = discrepancy_of(&fractions, family);
    let worst_cap = fractions
        .iter()
        .zip(&family.caps)
        .map(|(f, c)| (f - c.measure).abs())
        .enumerate()
        .fold((0, -1.0), |b, (i, e)| if e > b.1 { (i, e) } else { b })
        .0;
    let rows: Vec<IndependenceRow> = recs.iter().map(|r| r.independence.clone()).collect();
    let independence = orbit_independence(&rows)?.statistic;
    let shapes: Vec<(ShapeSample, f64)> = recs.iter().map(|r| (r.shape.clone(), r.weight)).collect();
    let st = shape_statistics_weighted(&shapes, ht)?;
    let ratio2 = recs.iter().map(|r| (r.shape.ratios[1], r.weight)).collect();
    Ok(DiscResult {
        row: SweepRow {
            disc,
            count,
            orbit_reps: reps.len(),
            discrepancy,
            worst_cap,
            independence,
            ratio2: st.ratios[0],
            ht_tail: st.ht_tail,
        },
        ratio2,
    })
}

fn compare(split: f64, a: &[&DiscResult], b: &[&DiscResult]) -> Result<Option<ShapeComparison>> {
    let pool = |xs: &[&DiscResult]| xs.iter().flat_map(|r| r.ratio2.iter().copied()).collect::<Vec<_>>();
    let (pa, pb) = (pool(a), pool(b));
    if pa.is_empty() || pb.is_empty() {
        return Ok(None);
    }
    let ks = ks_distance_weighted(&pa, &pb)?;
    let wa: Vec<f64> = pa.iter().map(|x| x.1).collect();
    let wb: Vec<f64> = pb.iter().map(|x| x.1).collect();
    Ok(Some(ShapeComparison {
        split,
        weight_a: wa.iter().sum(),
        weight_b: wb.iter().sum(),
        ks,
        pvalue: ks_pvalue(ks, effective_size(&wa), effective_size(&wb)),
    }))
}

fn log_fit(rows: &[SweepRow], f: impl Fn(&SweepRow) -> f64) -> Result<OlsFit> {
    let pts: Vec<(f64, f64)> =
        rows.iter().filter(|r| f(r) > 0.0).map(|r| ((r.disc as f64).ln(), f(r).ln())).collect();
    let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
    ols(&x, &y)
}

/// Runs the sweep. Work inside each `D` is spread over the current rayon
/// pool; everything else is sequential and in `D` order.
pub fn run_sweep(config: &EquidistConfig) -> Result<EquidistReport> {
    config.validate()?;
    let family = config.cap_family()?;
    let discs = log_uniform_grid(config.d, config.dmin, config.dmax, config.samples, config.seed)?;
    let results =
        discs.iter().map(|&disc| run_disc(config.d, disc, &family, &config.ht_thresholds)).collect::<Result<Vec<_>>>()?;
    let rows: Vec<SweepRow> = results.iter().map(|r| r.row.clone()).collect();

    let (la, lb) = ((config.dmin as f64).ln(), (config.dmax as f64).ln());
    let at = |q: f64| (la + q * (lb - la)).exp();
    let part = |lo: f64, hi: f64| -> Vec<&DiscResult> {
        results.iter().filter(|r| (r.row.disc as f64) >= lo && (r.row.disc as f64) < hi).collect()
    };
    let inf = f64::INFINITY;
    let shape_halves = compare(at(0.5), &part(0.0, at(0.5)), &part(at(0.5), inf))?;
    let shape_quarters = (
        compare(at(0.25), &part(0.0, at(0.25)), &part(at(0.25), at(0.5)))?,
        compare(at(0.75), &part(at(0.5), at(0.75)), &part(at(0.75), inf))?,
    );
    let counts: Vec<(i64, u64)> = rows.iter().map(|r| (r.disc, r.count)).collect();
    Ok(EquidistReport {
        config: config.clone(),
        caps: family.len(),
        discrepancy_fit: log_fit(&rows, |r| r.discrepancy)?,
        independence_fit: log_fit(&rows, |r| r.independence)?,
        growth: growth_fit(config.d, &counts)?,
        shape_halves,
        shape_quarters,
        rows,
    })
}
