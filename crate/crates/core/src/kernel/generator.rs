//! Test functions in the generator's domain and the generator itself.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, require_finite, require_positive, Error, Result};
use crate::line::{Permeability, PrbmParams, Side, SidedReal};

/// `f(x) = (alpha_s + beta x + delta_s x^2) exp(-x^2 / w^2)` on side `s`.
///
/// The slope `beta` is tied to the jump `alpha_+ - alpha_-` so that
/// `f'(0+) = f'(0-) = gamma (f(0+) - f(0-))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub gamma: Permeability,
    pub alpha_plus: f64,
    pub alpha_minus: f64,
    pub beta: f64,
    pub delta_plus: f64,
    pub delta_minus: f64,
    pub width: f64,
}

impl TestFunction {
    /// For finite `gamma` the slope is forced to `gamma (alpha_+ - alpha_-)`.
    /// For `gamma = inf` the values must agree and the slope is zero; use
    /// [`TestFunction::continuous`] to choose it.
    pub fn new(
        gamma: Permeability,
        alpha_plus: f64,
        alpha_minus: f64,
        delta_plus: f64,
        delta_minus: f64,
        width: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("alpha_plus", alpha_plus),
            ("alpha_minus", alpha_minus),
            ("delta_plus", delta_plus),
            ("delta_minus", delta_minus),
        ] {
            require_finite(name, v)?;
        }
        require_positive("width", width)?;
        let beta = match gamma {
            Permeability::Finite(g) => g * (alpha_plus - alpha_minus),
            Permeability::Infinite => {
                if alpha_plus != alpha_minus {
                    return Err(invalid("alpha", "gamma = inf needs a continuous function"));
                }
                0.0
            }
        };
        Ok(TestFunction {
            gamma,
            alpha_plus,
            alpha_minus,
            beta,
            delta_plus,
            delta_minus,
            width,
        })
    }

    /// A `C^1` function for the free case, with arbitrary slope at the origin.
    pub fn continuous(alpha: f64, beta: f64, delta_plus: f64, delta_minus: f64, width: f64) -> Result<Self> {
        require_finite("beta", beta)?;
        let mut f = Self::new(Permeability::Infinite, alpha, alpha, delta_plus, delta_minus, width)?;
        f.beta = beta;
        Ok(f)
    }

    fn coeffs(&self, side: Side) -> (f64, f64) {
        match side {
            Side::Plus => (self.alpha_plus, self.delta_plus),
            Side::Minus => (self.alpha_minus, self.delta_minus),
        }
    }

    pub fn value(&self, x: SidedReal) -> f64 {
        let (a, d) = self.coeffs(x.side());
        let y = x.projection();
        let w2 = self.width * self.width;
        (a + self.beta * y + d * y * y) * (-y * y / w2).exp()
    }

    pub fn derivative(&self, x: SidedReal) -> f64 {
        let (a, d) = self.coeffs(x.side());
        let y = x.projection();
        let w2 = self.width * self.width;
        let p = a + self.beta * y + d * y * y;
        let dp = self.beta + 2.0 * d * y;
        (-y * y / w2).exp() * (dp - 2.0 * y / w2 * p)
    }

    pub fn second_derivative(&self, x: SidedReal) -> f64 {
        let (a, d) = self.coeffs(x.side());
        let y = x.projection();
        let w2 = self.width * self.width;
        let p = a + self.beta * y + d * y * y;
        let dp = self.beta + 2.0 * d * y;
        (-y * y / w2).exp() * (2.0 * d - 4.0 * y / w2 * dp + (4.0 * y * y / (w2 * w2) - 2.0 / w2) * p)
    }

    /// Supremum of `|f|`, bounded by scanning both sides finely.
    pub fn sup_norm(&self) -> f64 {
        let reach = 6.0 * self.width;
        let steps = 4000;
        let mut best: f64 = 0.0;
        for side in [Side::Plus, Side::Minus] {
            for i in 0..=steps {
                let m = reach * i as f64 / steps as f64;
                best = best.max(self.value(SidedReal::raw(m, side)).abs());
            }
        }
        best
    }
}

/// `A f(x) = (sigma^2 / 2) f''(x)` for `f` in the domain matching `params.gamma`.
pub fn generator_apply(f: &TestFunction, x: SidedReal, params: &PrbmParams) -> Result<f64> {
    if f.gamma != params.gamma {
        return Err(Error::Mismatch(format!(
            "test function built for gamma={}, process has gamma={}",
            f.gamma, params.gamma
        )));
    }
    Ok(0.5 * params.sigma * params.sigma * f.second_derivative(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_condition_holds() {
        let g = Permeability::Finite(1.7);
        let f = TestFunction::new(g, 0.4, -0.3, 0.2, -0.5, 1.3).unwrap();
        let dp = f.derivative(SidedReal::ZERO_PLUS);
        let dm = f.derivative(SidedReal::ZERO_MINUS);
        let jump = f.value(SidedReal::ZERO_PLUS) - f.value(SidedReal::ZERO_MINUS);
        assert!((dp - dm).abs() < 1e-15);
        assert!((dp - 1.7 * jump).abs() < 1e-15);
    }

    #[test]
    fn derivatives_match_differences() {
        let f = TestFunction::new(Permeability::Finite(0.6), 1.0, 0.5, 0.3, -0.2, 1.5).unwrap();
        let h = 1e-4;
        for y in [0.3, 1.1, -0.7, -2.0] {
            let x = SidedReal::from_real(y).unwrap();
            let xp = SidedReal::from_real(y + h).unwrap();
            let xm = SidedReal::from_real(y - h).unwrap();
            let d1 = (f.value(xp) - f.value(xm)) / (2.0 * h);
            let d2 = (f.value(xp) - 2.0 * f.value(x) + f.value(xm)) / (h * h);
            assert!((d1 - f.derivative(x)).abs() < 1e-7);
            assert!((d2 - f.second_derivative(x)).abs() < 1e-5);
        }
    }

    #[test]
    fn domain_mismatch_is_rejected() {
        let f = TestFunction::new(Permeability::Finite(1.0), 1.0, 0.0, 0.0, 0.0, 1.0).unwrap();
        let pr = PrbmParams::standard(2.0).unwrap();
        assert!(generator_apply(&f, SidedReal::ZERO_PLUS, &pr).is_err());
        assert!(TestFunction::new(Permeability::Infinite, 1.0, 0.0, 0.0, 0.0, 1.0).is_err());
    }
}
