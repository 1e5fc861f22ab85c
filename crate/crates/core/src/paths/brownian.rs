//! Euler-grid Brownian paths and their reflections.

use super::reflection::skorokhod_map;
use super::rng::RngStream;
use crate::error::{require_finite, require_nonnegative, require_positive, Result};
use crate::line::{uniform_grid, Path};

/// `x0 + sigma W` on the grid `0, dt, ..., T`.
pub fn simulate_bm(x0: f64, sigma: f64, dt: f64, horizon: f64, rng: &mut RngStream) -> Result<Path> {
    require_finite("x0", x0)?;
    require_positive("sigma", sigma)?;
    let times = uniform_grid(dt, horizon)?;
    let mut values = Vec::with_capacity(times.len());
    let mut x = x0;
    values.push(x);
    for w in times.windows(2) {
        x += sigma * (w[1] - w[0]).sqrt() * rng.normal();
        values.push(x);
    }
    Ok(Path { times, values })
}

/// Reflected Brownian motion from `x0 >= 0` and its regulator, which is the
/// symmetric local time at 0.
pub fn reflected_bm_with_local_time(
    x0: f64,
    sigma: f64,
    dt: f64,
    horizon: f64,
    rng: &mut RngStream,
) -> Result<(Path, Path)> {
    require_nonnegative("x0", x0)?;
    let f = simulate_bm(x0, sigma, dt, horizon, rng)?;
    skorokhod_map(&f)
}

/// Streaming version of [`reflected_bm_with_local_time`] on a uniform grid.
///
/// In grid mode it reproduces the batch function from the same stream. In bridge
/// mode the regulator uses the exact minimum of the Brownian bridge between grid
/// points, so `(W, L)` at grid times has the law of the continuous process.
#[derive(Clone, Debug)]
pub struct ReflectedStepper {
    drive: f64,
    regulator: f64,
    scale: f64,
    bridge: bool,
}

impl ReflectedStepper {
    pub fn new(x0: f64, sigma: f64, dt: f64) -> Result<Self> {
        require_nonnegative("x0", x0)?;
        require_positive("sigma", sigma)?;
        require_positive("dt", dt)?;
        Ok(ReflectedStepper {
            drive: x0,
            regulator: 0.0,
            scale: sigma * dt.sqrt(),
            bridge: false,
        })
    }

    /// Bridge mode: exact at grid times.
    pub fn bridge(x0: f64, sigma: f64, dt: f64) -> Result<Self> {
        Ok(ReflectedStepper { bridge: true, ..Self::new(x0, sigma, dt)? })
    }

    /// Advances one step and returns `(W, L)`.
    #[inline]
    pub fn step(&mut self, rng: &mut RngStream) -> (f64, f64) {
        let prev = self.drive;
        self.drive += self.scale * rng.normal();
        if self.bridge {
            // A dip deeper than 8 step deviations below both endpoints has
            // probability below exp(-128); skip the draw there.
            let low = prev.min(self.drive);
            if low + self.regulator < 8.0 * self.scale {
                let d = self.drive - prev;
                let u = 1.0 - rng.uniform();
                let dip = (d * d - 2.0 * self.scale * self.scale * u.ln()).sqrt();
                let m = 0.5 * (prev + self.drive - dip);
                self.regulator = self.regulator.max(-m);
            }
        } else {
            self.regulator = self.regulator.max(-self.drive);
        }
        (self.drive + self.regulator, self.regulator)
    }

    pub fn state(&self) -> (f64, f64) {
        (self.drive + self.regulator, self.regulator)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stepper_matches_batch() {
        let mut a = RngStream::new(5, 0);
        let mut b = RngStream::new(5, 0);
        let (w, l) = reflected_bm_with_local_time(0.2, 1.3, 0.01, 1.0, &mut a).unwrap();
        let mut s = ReflectedStepper::new(0.2, 1.3, 0.01).unwrap();
        for k in 1..w.len() {
            let (wk, lk) = s.step(&mut b);
            assert!((wk - w.values[k]).abs() < 1e-12);
            assert_eq!(lk, l.values[k]);
        }
    }

    #[test]
    fn reflected_path_is_nonnegative() {
        let mut r = RngStream::new(9, 1);
        let (w, l) = reflected_bm_with_local_time(0.0, 1.0, 1e-3, 2.0, &mut r).unwrap();
        assert!(w.values.iter().all(|&v| v >= 0.0));
        assert!(l.values.windows(2).all(|p| p[1] >= p[0]));
    }

    #[test]
    fn rejects_bad_input() {
        let mut r = RngStream::new(0, 0);
        assert!(reflected_bm_with_local_time(-1.0, 1.0, 0.1, 1.0, &mut r).is_err());
        assert!(simulate_bm(0.0, 0.0, 0.1, 1.0, &mut r).is_err());
        assert!(simulate_bm(0.0, 1.0, 0.0, 1.0, &mut r).is_err());
    }
}
