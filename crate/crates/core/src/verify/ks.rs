//! Kolmogorov-Smirnov statistics.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Significance level used when no explicit threshold is supplied.
pub const DEFAULT_ALPHA: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsReport {
    pub statistic: f64,
    /// Sample size, or the effective size `n m / (n + m)` for two samples.
    pub n: f64,
    /// Asymptotic Kolmogorov tail probability of `statistic`.
    pub p_value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl KsReport {
    fn new(statistic: f64, n: f64) -> Self {
        let p_value = kolmogorov_sf(scaled(statistic, n));
        let threshold = critical_value(n, DEFAULT_ALPHA);
        KsReport { statistic, n, p_value, threshold, pass: statistic < threshold }
    }

    /// Re-judges against a fixed bound on `D`.
    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self.pass = self.statistic < threshold;
        self
    }
}

fn scaled(d: f64, n: f64) -> f64 {
    let rn = n.sqrt();
    (rn + 0.12 + 0.11 / rn) * d
}

/// `P(K > lambda)` for the Kolmogorov distribution.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // Theta-function form converges fast for small lambda.
        let c = std::f64::consts::PI * std::f64::consts::PI / (8.0 * lambda * lambda);
        let mut s = 0.0;
        for k in 0..20 {
            let j = (2 * k + 1) as f64;
            s += (-j * j * c).exp();
        }
        return (1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * s).clamp(0.0, 1.0);
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// Smallest `D` whose asymptotic p-value falls to `alpha`.
pub fn critical_value(n: f64, alpha: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 5.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_sf(mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let rn = n.sqrt();
    hi / (rn + 0.12 + 0.11 / rn)
}

fn sorted(samples: &[f64]) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(invalid("samples", "empty sample"));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::Numerical("sample contains NaN".into()));
    }
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// One-sample statistic `sup |F_n - F|` against a continuous CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<KsReport> {
    let v = sorted(samples)?;
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < v.len() {
        // Treat ties as one jump.
        let mut j = i;
        while j + 1 < v.len() && v[j + 1] == v[i] {
            j += 1;
        }
        let f = cdf(v[i]);
        if !(0.0..=1.0).contains(&f) {
            return Err(Error::Numerical(format!("cdf returned {f} at {}", v[i])));
        }
        d = d.max(f - i as f64 / n).max((j + 1) as f64 / n - f);
        i = j + 1;
    }
    Ok(KsReport::new(d, n))
}

/// Two-sample statistic `sup |F_n - G_m|` from a merged sweep.
pub fn two_sample_ks(a: &[f64], b: &[f64]) -> Result<KsReport> {
    let x = sorted(a)?;
    let y = sorted(b)?;
    let (n, m) = (x.len(), y.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let t = x[i].min(y[j]);
        while i < n && x[i] == t {
            i += 1;
        }
        while j < m && y[j] == t {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let ne = (n * m) as f64 / (n + m) as f64;
    Ok(KsReport::new(d, ne))
}

/// Kaplan-Meier estimate for right-censored data, as `(time, F(time))` at each event.
pub fn kaplan_meier(times: &[f64], observed: &[bool]) -> Result<Vec<(f64, f64)>> {
    if times.len() != observed.len() {
        return Err(Error::Mismatch("times and censoring flags differ in length".into()));
    }
    if times.is_empty() {
        return Err(invalid("times", "empty sample"));
    }
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(invalid("times", "durations must be finite and >= 0"));
    }
    let mut idx: Vec<usize> = (0..times.len()).collect();
    // Events before censorings at equal times.
    idx.sort_by(|&p, &q| times[p].total_cmp(&times[q]).then(observed[q].cmp(&observed[p])));
    let mut at_risk = times.len() as f64;
    let mut surv = 1.0;
    let mut out = Vec::new();
    let mut k = 0;
    while k < idx.len() {
        let t = times[idx[k]];
        let (mut deaths, mut leaving) = (0.0, 0.0);
        while k < idx.len() && times[idx[k]] == t {
            if observed[idx[k]] {
                deaths += 1.0;
            }
            leaving += 1.0;
            k += 1;
        }
        if deaths > 0.0 {
            surv *= 1.0 - deaths / at_risk;
            out.push((t, 1.0 - surv));
        }
        at_risk -= leaving;
    }
    Ok(out)
}

/// KS distance between the Kaplan-Meier estimate and `cdf`, over the observed range.
/// The reported size is the number of uncensored events.
pub fn km_ks_statistic<F: Fn(f64) -> f64>(times: &[f64], observed: &[bool], cdf: F) -> Result<KsReport> {
    let km = kaplan_meier(times, observed)?;
    if km.is_empty() {
        return Err(invalid("observed", "no uncensored events"));
    }
    let mut d: f64 = 0.0;
    let mut before = 0.0;
    for &(t, f) in &km {
        let g = cdf(t);
        d = d.max((g - before).abs()).max((f - g).abs());
        before = f;
    }
    Ok(KsReport::new(d, km.len() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_computed_uniform() {
        let s = [0.1, 0.4, 0.45, 0.9];
        // Largest gap is just after 0.45: 3/4 - 0.45.
        let r = ks_statistic(&s, |x| x).unwrap();
        assert!((r.statistic - 0.3).abs() < 1e-15);
    }

    #[test]
    fn constant_sample_is_far() {
        let r = ks_statistic(&[0.5; 20], |x: f64| x.clamp(0.0, 1.0)).unwrap();
        assert!(r.statistic >= 0.5);
        assert!(!r.pass);
    }

    #[test]
    fn empty_rejected() {
        assert!(ks_statistic(&[], |x| x).is_err());
        assert!(two_sample_ks(&[], &[1.0]).is_err());
    }

    #[test]
    fn kolmogorov_tail_values() {
        // Classical table values.
        assert!((kolmogorov_sf(1.358) - 0.05).abs() < 2e-4);
        assert!((kolmogorov_sf(1.628) - 0.01).abs() < 2e-4);
        assert!((kolmogorov_sf(1.949) - 0.001).abs() < 2e-5);
        // Both series agree where they meet.
        let c = std::f64::consts::PI.powi(2) / (8.0 * 1.18f64.powi(2));
        let theta: f64 = 1.0 - (2.0 * std::f64::consts::PI).sqrt() / 1.18 * (0..20).map(|k| (-((2 * k + 1) as f64).powi(2) * c).exp()).sum::<f64>();
        assert!((theta - kolmogorov_sf(1.18)).abs() < 1e-12);
    }

    #[test]
    fn two_sample_identical_is_zero() {
        let a = [3.0, 1.0, 2.0];
        let r = two_sample_ks(&a, &a).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
        let r = two_sample_ks(&[0.0, 1.0], &[2.0, 3.0]).unwrap();
        assert_eq!(r.statistic, 1.0);
    }

    #[test]
    fn kaplan_meier_without_censoring_is_empirical() {
        let t = [3.0, 1.0, 2.0, 2.0];
        let km = kaplan_meier(&t, &[true; 4]).unwrap();
        assert_eq!(km, vec![(1.0, 0.25), (2.0, 0.75), (3.0, 1.0)]);
    }

    #[test]
    fn kaplan_meier_with_censoring() {
        // Censored at 1.5 leaves 2 at risk at time 2.
        let km = kaplan_meier(&[1.0, 1.5, 2.0, 3.0], &[true, false, true, true]).unwrap();
        assert_eq!(km[0], (1.0, 0.25));
        assert!((km[1].1 - (1.0 - 0.75 * 0.5)).abs() < 1e-15);
        assert_eq!(km[2].1, 1.0);
    }
}
