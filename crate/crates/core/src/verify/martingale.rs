//! Martingale-problem residuals `f(X_t) - f(X_0) - ∫ A f(X_s) ds`.

use crate::construct::SidedPath;
use crate::error::{invalid, Error, Result};
use crate::kernel::{generator_apply, TestFunction};
use crate::line::{PrbmParams, SidedReal};
use crate::verify::stats::MeanSe;

/// Accumulates the residual along one path with the trapezoidal rule in time.
#[derive(Clone, Debug)]
pub struct ResidualTracker {
    f: TestFunction,
    half_var: f64,
    start: f64,
    last_gen: f64,
    last_value: f64,
    integral: f64,
}

impl ResidualTracker {
    pub fn new(f: TestFunction, params: &PrbmParams, x0: SidedReal) -> Result<Self> {
        let g0 = generator_apply(&f, x0, params)?;
        let v0 = f.value(x0);
        Ok(ResidualTracker {
            f,
            half_var: 0.5 * params.sigma * params.sigma,
            start: v0,
            last_gen: g0,
            last_value: v0,
            integral: 0.0,
        })
    }

    /// Records the state after a time step of length `dt`.
    #[inline]
    pub fn push(&mut self, dt: f64, x: SidedReal) {
        let g = self.half_var * self.f.second_derivative(x);
        self.integral += 0.5 * dt * (self.last_gen + g);
        self.last_gen = g;
        self.last_value = self.f.value(x);
    }

    pub fn residual(&self) -> f64 {
        self.last_value - self.start - self.integral
    }
}

/// Residual of a single path up to grid time `t`.
pub fn path_residual(p: &SidedPath, f: &TestFunction, params: &PrbmParams, t: f64) -> Result<f64> {
    if p.params.gamma != params.gamma {
        return Err(Error::Mismatch(format!(
            "path has gamma={}, expected {}",
            p.params.gamma, params.gamma
        )));
    }
    let end = p
        .times
        .iter()
        .position(|&s| (s - t).abs() <= 1e-9 * t.max(1.0))
        .ok_or_else(|| invalid("t", format!("{t} is not a grid time of the path")))?;
    let mut tr = ResidualTracker::new(*f, params, p.values[0])?;
    for k in 1..=end {
        tr.push(p.times[k] - p.times[k - 1], p.values[k]);
    }
    Ok(tr.residual())
}

/// Ensemble mean of the residual at `t` with its standard error.
pub fn martingale_residual<'a, I>(paths: I, f: &TestFunction, params: &PrbmParams, t: f64) -> Result<MeanSe>
where
    I: IntoIterator<Item = &'a SidedPath>,
{
    let r: Vec<f64> = paths
        .into_iter()
        .map(|p| path_residual(p, f, params, t))
        .collect::<Result<_>>()?;
    if r.iter().all(|&v| v == 0.0) {
        return Ok(MeanSe { mean: 0.0, se: 0.0, n: r.len() });
    }
    MeanSe::of(&r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::line::Permeability;

    #[test]
    fn zero_function_has_zero_residual() {
        let params = PrbmParams::standard(1.0).unwrap();
        let f = TestFunction::new(Permeability::Finite(1.0), 0.0, 0.0, 0.0, 0.0, 1.0).unwrap();
        let p = SidedPath {
            times: vec![0.0, 0.5, 1.0],
            values: vec![SidedReal::ZERO_PLUS, "0.3".parse().unwrap(), "-0.2".parse().unwrap()],
            params,
            local_time: None,
        };
        let r = martingale_residual([&p, &p], &f, &params, 1.0).unwrap();
        assert_eq!(r.mean, 0.0);
        assert!(path_residual(&p, &f, &params, 0.7).is_err());
    }

    #[test]
    fn gamma_mismatch_rejected() {
        let params = PrbmParams::standard(1.0).unwrap();
        let f = TestFunction::new(Permeability::Finite(2.0), 1.0, 0.0, 0.0, 0.0, 1.0).unwrap();
        assert!(ResidualTracker::new(f, &params, SidedReal::ZERO_PLUS).is_err());
    }
}
