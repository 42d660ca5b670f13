//! Least squares, correlations and two-sample Kolmogorov–Smirnov distances.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

/// Ordinary least squares `y = a + b x` with standard errors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OlsFit {
    pub n: usize,
    pub slope: f64,
    pub intercept: f64,
    pub se_slope: f64,
    pub se_intercept: f64,
    pub r2: f64,
    /// 95% confidence interval for the slope.
    pub slope_ci95: (f64, f64),
}

pub fn ols(x: &[f64], y: &[f64]) -> Result<OlsFit> {
    let n = x.len();
    if n != y.len() {
        return Err(Error::invalid("ols: length mismatch"));
    }
    if n < 3 {
        return Err(Error::invalid("ols: need at least three points"));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("ols: x is constant"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x.iter().zip(y).map(|(a, b)| { let r = b - intercept - slope * a; r * r }).sum();
    let s2 = sse / (nf - 2.0);
    let se_slope = (s2 / sxx).sqrt();
    let se_intercept = (s2 * (1.0 / nf + mx * mx / sxx)).sqrt();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    let t = StudentsT::new(0.0, 1.0, nf - 2.0).expect("valid degrees of freedom").inverse_cdf(0.975);
    Ok(OlsFit { n, slope, intercept, se_slope, se_intercept, r2, slope_ci95: (slope - t * se_slope, slope + t * se_slope) })
}

/// Weighted Pearson correlation; 0 when either side has no variance.
pub fn weighted_pearson(x: &[f64], y: &[f64], w: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() != w.len() {
        return Err(Error::invalid("pearson: length mismatch"));
    }
    let sw: f64 = w.iter().sum();
    if x.is_empty() || sw <= 0.0 {
        return Err(Error::invalid("pearson: empty input"));
    }
    let mx = x.iter().zip(w).map(|(a, c)| a * c).sum::<f64>() / sw;
    let my = y.iter().zip(w).map(|(a, c)| a * c).sum::<f64>() / sw;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for ((a, b), c) in x.iter().zip(y).zip(w) {
        sxy += c * (a - mx) * (b - my);
        sxx += c * (a - mx) * (a - mx);
        syy += c * (b - my) * (b - my);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Ok(0.0);
    }
    Ok(sxy / (sxx * syy).sqrt())
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    weighted_pearson(x, y, &vec![1.0; x.len()])
}

/// `sup |F_a − F_b|` for weighted samples `(value, weight)`.
pub fn ks_distance_weighted(a: &[(f64, f64)], b: &[(f64, f64)]) -> Result<f64> {
    let wa: f64 = a.iter().map(|x| x.1).sum();
    let wb: f64 = b.iter().map(|x| x.1).sum();
    if a.is_empty() || b.is_empty() || wa <= 0.0 || wb <= 0.0 {
        return Err(Error::invalid("ks: empty sample"));
    }
    let mut all: Vec<(f64, f64, f64)> = a.iter().map(|&(v, w)| (v, w / wa, 0.0)).collect();
    all.extend(b.iter().map(|&(v, w)| (v, 0.0, w / wb)));
    all.sort_by(|x, y| x.0.total_cmp(&y.0));
    let (mut fa, mut fb, mut best) = (0.0f64, 0.0f64, 0.0f64);
    let mut i = 0;
    while i < all.len() {
        let v = all[i].0;
        while i < all.len() && all[i].0 == v {
            fa += all[i].1;
            fb += all[i].2;
            i += 1;
        }
        best = best.max((fa - fb).abs());
    }
    Ok(best.min(1.0))
}

pub fn ks_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    let wa: Vec<(f64, f64)> = a.iter().map(|&v| (v, 1.0)).collect();
    let wb: Vec<(f64, f64)> = b.iter().map(|&v| (v, 1.0)).collect();
    ks_distance_weighted(&wa, &wb)
}

/// Kish effective sample size `(Σw)² / Σw²`.
pub fn effective_size(w: &[f64]) -> f64 {
    let s: f64 = w.iter().sum();
    let s2: f64 = w.iter().map(|x| x * x).sum();
    if s2 == 0.0 { 0.0 } else { s * s / s2 }
}

/// Asymptotic two-sample KS p-value via the Kolmogorov series.
pub fn ks_pvalue(dist: f64, n_a: f64, n_b: f64) -> f64 {
    let en = (n_a * n_b / (n_a + n_b)).sqrt();
    let lambda = (en + 0.12 + 0.11 / en) * dist;
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    for j in 1..=100 {
        let jf = j as f64;
        let term = 2.0 * if j % 2 == 1 { 1.0 } else { -1.0 } * (-2.0 * jf * jf * lambda * lambda).exp();
        sum += term;
        if term.abs() < 1e-12 {
            break;
        }
    }
    sum.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|a| 3.0 - 0.5 * a).collect();
        let f = ols(&x, &y).unwrap();
        assert!((f.slope + 0.5).abs() < 1e-12 && (f.intercept - 3.0).abs() < 1e-12);
        assert!(f.se_slope < 1e-12 && (f.r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn standard_errors_match_textbook() {
        // x = 1..5, y = (2, 4, 5, 4, 5): slope 0.6, intercept 2.2, s = √(2.4/3)
        let f = ols(&[1.0, 2.0, 3.0, 4.0, 5.0], &[2.0, 4.0, 5.0, 4.0, 5.0]).unwrap();
        assert!((f.slope - 0.6).abs() < 1e-12);
        assert!((f.intercept - 2.2).abs() < 1e-12);
        assert!((f.se_slope - (0.8f64 / 10.0).sqrt()).abs() < 1e-12);
        // t_{0.975, 3} = 3.182446
        assert!((f.slope_ci95.1 - f.slope - 3.182446 * f.se_slope).abs() < 1e-5);
    }

    #[test]
    fn correlation_calibration() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert!((pearson(&x, &[2.0, 4.0, 6.0, 8.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((pearson(&x, &[8.0, 6.0, 4.0, 2.0]).unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(pearson(&x, &[1.0; 4]).unwrap(), 0.0);
        // weights act as multiplicities
        let w = weighted_pearson(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0], &[2.0, 1.0, 1.0]).unwrap();
        let r = pearson(&[1.0, 1.0, 2.0, 3.0], &[1.0, 1.0, 3.0, 2.0]).unwrap();
        assert!((w - r).abs() < 1e-12);
    }

    #[test]
    fn ks_basics() {
        assert_eq!(ks_distance(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 0.0);
        assert_eq!(ks_distance(&[1.0, 2.0], &[3.0, 4.0]).unwrap(), 1.0);
        assert!((ks_distance(&[1.0, 2.0, 3.0, 4.0], &[3.0, 4.0, 5.0, 6.0]).unwrap() - 0.5).abs() < 1e-12);
        assert!(ks_pvalue(0.0, 100.0, 100.0) > 0.99);
        assert!(ks_pvalue(0.5, 100.0, 100.0) < 1e-8);
        assert!(ks_distance(&[], &[1.0]).is_err());
    }
}
