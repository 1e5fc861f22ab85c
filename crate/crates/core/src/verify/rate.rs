//! Exponential rate estimation.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{invalid, Result};
use crate::verify::stats::pairwise_sum;

/// Maximum-likelihood rate with a two-sided confidence interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub rate: f64,
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    /// Number of observed (uncensored) events.
    pub events: usize,
    pub exposure: f64,
}

impl RateFit {
    pub fn contains(&self, rate: f64) -> bool {
        self.lower <= rate && rate <= self.upper
    }
}

fn chi2_quantile(dof: f64, p: f64) -> f64 {
    ChiSquared::new(dof).expect("positive degrees of freedom").inverse_cdf(p)
}

/// Rate `1 / mean` of i.i.d. exponential samples with the exact 99% interval
/// `chi2_{2n}(0.005) / (2 S) .. chi2_{2n}(0.995) / (2 S)`, `S` the sample sum.
pub fn exp_rate_fit(samples: &[f64]) -> Result<RateFit> {
    if samples.is_empty() {
        return Err(invalid("samples", "empty sample"));
    }
    if samples.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(invalid("samples", "all samples must be finite and > 0"));
    }
    let n = samples.len() as f64;
    let s = pairwise_sum(samples);
    Ok(RateFit {
        rate: n / s,
        lower: chi2_quantile(2.0 * n, 0.005) / (2.0 * s),
        upper: chi2_quantile(2.0 * n, 0.995) / (2.0 * s),
        level: 0.99,
        events: samples.len(),
        exposure: s,
    })
}

/// Rate from completed durations plus right-censored ones: events / total exposure,
/// with the exact Poisson-count 99% interval.
pub fn exp_rate_fit_censored(completed: &[f64], censored: &[f64]) -> Result<RateFit> {
    if completed.is_empty() {
        return Err(invalid("completed", "no completed durations"));
    }
    if completed.iter().chain(censored).any(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(invalid("samples", "durations must be finite and >= 0"));
    }
    let d = completed.len() as f64;
    let s = pairwise_sum(completed) + pairwise_sum(censored);
    if s <= 0.0 {
        return Err(invalid("samples", "zero total exposure"));
    }
    Ok(RateFit {
        rate: d / s,
        lower: chi2_quantile(2.0 * d, 0.005) / (2.0 * s),
        upper: chi2_quantile(2.0 * d + 2.0, 0.995) / (2.0 * s),
        level: 0.99,
        events: completed.len(),
        exposure: s,
    })
}
