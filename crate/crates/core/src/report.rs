//! Per-run error reports and their aggregation across seeded runs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metricspace::{binomial, DistanceMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub algorithm: String,
    pub base: Option<usize>,
    pub seed: Option<u64>,
    pub n: usize,
    /// `‖d − d_fit‖₁` over unordered pairs.
    pub l1_total: f64,
    /// `l1_total / C(n,2)`.
    pub l1_avg: f64,
    /// `‖d − d_fit‖∞`.
    pub linf: f64,
    pub wall_time_seconds: f64,
    /// Guaranteed upper bound on `l1_total`, when it was computed.
    pub bound: Option<f64>,
}

impl FitReport {
    pub fn from_matrices(algorithm: &str, d: &DistanceMatrix, fit: &DistanceMatrix) -> Self {
        let l1_total = d.l1_distance(fit);
        let pairs = binomial(d.n() as u64, 2);
        Self {
            algorithm: algorithm.into(),
            base: None,
            seed: None,
            n: d.n(),
            l1_total,
            l1_avg: if pairs == 0 { 0.0 } else { l1_total / pairs as f64 },
            linf: d.linf_distance(fit),
            wall_time_seconds: 0.0,
            bound: None,
        }
    }

    pub fn with_base(mut self, base: usize) -> Self {
        self.base = Some(base);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_time(mut self, seconds: f64) -> Self {
        self.wall_time_seconds = seconds;
        self
    }

    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound = Some(bound);
        self
    }

    /// Whether `l1_total` respects the recorded bound (vacuously true
    /// without one).
    pub fn within_bound(&self, tol: f64) -> bool {
        self.bound.is_none_or(|b| self.l1_total <= b + tol)
    }
}

/// Sample mean and standard deviation (`n − 1` denominator; 0 for a single
/// value).
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    let k = values.len();
    if k == 0 {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / k as f64;
    if k == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
    (mean, var.sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub algorithm: String,
    pub runs: usize,
    pub seeds: Vec<u64>,
    pub l1_avg_mean: f64,
    pub l1_avg_sd: f64,
    pub linf_mean: f64,
    pub linf_sd: f64,
    pub time_mean: f64,
    pub time_sd: f64,
}

impl BenchSummary {
    pub fn from_reports(reports: &[FitReport]) -> Result<Self> {
        let first = reports
            .first()
            .ok_or_else(|| Error::InvalidArgument("cannot summarize zero runs".into()))?;
        if reports.iter().any(|r| r.algorithm != first.algorithm) {
            return Err(Error::InvalidArgument("reports mix algorithms".into()));
        }
        let col = |f: fn(&FitReport) -> f64| mean_sd(&reports.iter().map(f).collect::<Vec<_>>());
        let (l1_avg_mean, l1_avg_sd) = col(|r| r.l1_avg);
        let (linf_mean, linf_sd) = col(|r| r.linf);
        let (time_mean, time_sd) = col(|r| r.wall_time_seconds);
        Ok(Self {
            algorithm: first.algorithm.clone(),
            runs: reports.len(),
            seeds: reports.iter().filter_map(|r| r.seed).collect(),
            l1_avg_mean,
            l1_avg_sd,
            linf_mean,
            linf_sd,
            time_mean,
            time_sd,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_from_matrices() {
        let d = DistanceMatrix::from_fn(3, |_, _| 2.0);
        let f = DistanceMatrix::from_fn(3, |i, _| if i == 0 { 1.0 } else { 2.0 });
        let r = FitReport::from_matrices("x", &d, &f);
        assert_eq!(r.l1_total, 2.0);
        assert!((r.l1_avg * 3.0 - r.l1_total).abs() < 1e-12);
        assert_eq!(r.linf, 1.0);
    }

    #[test]
    fn summary_statistics() {
        assert_eq!(mean_sd(&[2.0]), (2.0, 0.0));
        let (m, s) = mean_sd(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-12);
        let d = DistanceMatrix::zeros(2);
        let one = FitReport::from_matrices("hcc", &d, &d).with_seed(0);
        let s = BenchSummary::from_reports(&[one]).unwrap();
        assert_eq!((s.runs, s.l1_avg_sd, s.linf_sd), (1, 0.0, 0.0));
        assert!(BenchSummary::from_reports(&[]).is_err());
    }
}
