//! Resolvent `(lambda - A)^{-1} f` on a uniform grid of both half lines.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, require_positive, Error, Result};
use crate::line::{Permeability, PrbmParams};

/// A function sampled at `0, dx, 2 dx, ...` on each half line (magnitudes).
/// `plus[0]` is the value at `0+`, `minus[0]` at `0-`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfLineGrid {
    pub dx: f64,
    pub plus: Vec<f64>,
    pub minus: Vec<f64>,
}

impl HalfLineGrid {
    pub fn new(dx: f64, plus: Vec<f64>, minus: Vec<f64>) -> Result<Self> {
        require_positive("dx", dx)?;
        if plus.len() < 3 || plus.len() != minus.len() {
            return Err(invalid("grid", "need equal-length sides with at least 3 nodes"));
        }
        Ok(HalfLineGrid { dx, plus, minus })
    }

    /// Samples `f(x)` at the projected nodes; `f` receives the signed coordinate
    /// and the side flag (`true` for plus).
    pub fn sample<F: FnMut(f64, bool) -> f64>(dx: f64, nodes: usize, mut f: F) -> Result<Self> {
        let plus = (0..nodes).map(|j| f(j as f64 * dx, true)).collect();
        let minus = (0..nodes).map(|j| f(-(j as f64) * dx, false)).collect();
        Self::new(dx, plus, minus)
    }

    pub fn nodes(&self) -> usize {
        self.plus.len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolventSolution {
    pub values: HalfLineGrid,
    /// Coefficients of `exp(-k|x|)` added on each side to meet the origin conditions.
    pub coef_plus: f64,
    pub coef_minus: f64,
    /// One-sided derivatives at `0+` and `0-`.
    pub deriv_plus: f64,
    pub deriv_minus: f64,
}

/// Partial sums `P_j = ∫_0^{x_j} e^{-k(x_j-y)} h`, `Q_j = ∫_{x_j}^{X} e^{-k(y-x_j)} h`
/// with `h` linear between nodes.
fn convolve(h: &[f64], k: f64, dx: f64) -> (Vec<f64>, Vec<f64>) {
    let n = h.len();
    let kd = k * dx;
    let e = (-kd).exp();
    let c0 = -(-kd).exp_m1() / k;
    // ∫_0^dx r e^{-k r} dr
    let i1 = if kd < 1e-4 {
        dx * dx * (0.5 - kd / 3.0 + kd * kd / 8.0)
    } else {
        (c0 - dx * e) / k
    };
    let w_near = c0 - i1 / dx;
    let w_far = i1 / dx;
    let mut p = vec![0.0; n];
    for j in 1..n {
        p[j] = e * p[j - 1] + w_near * h[j] + w_far * h[j - 1];
    }
    let mut q = vec![0.0; n];
    for j in (0..n - 1).rev() {
        q[j] = e * q[j + 1] + w_near * h[j] + w_far * h[j + 1];
    }
    (p, q)
}

/// Solves `lambda g - (sigma^2/2) g'' = f` on both half lines with the
/// permeability condition at the origin and decay at infinity.
///
/// `f` should be negligible beyond the last node.
pub fn resolvent_solve(params: &PrbmParams, lambda: f64, f: &HalfLineGrid) -> Result<ResolventSolution> {
    require_positive("lambda", lambda)?;
    if f.plus.iter().chain(&f.minus).any(|v| !v.is_finite()) {
        return Err(Error::Numerical("f has non-finite samples".into()));
    }
    let s2 = params.sigma * params.sigma;
    let k = (2.0 * lambda / s2).sqrt();
    let dx = f.dx;
    let hp: Vec<f64> = f.plus.iter().map(|v| 2.0 * v / s2).collect();
    let hm: Vec<f64> = f.minus.iter().map(|v| 2.0 * v / s2).collect();
    let (pp, qp) = convolve(&hp, k, dx);
    let (pm, qm) = convolve(&hm, k, dx);
    let (ip, im) = (qp[0], qm[0]);
    // Near the origin g(0+) = ip/(2k) + A, g'(0+) = ip/2 - kA,
    // g(0-) = im/(2k) + B, g'(0-) = -im/2 + kB.
    let (a, b) = match params.gamma {
        Permeability::Finite(g) if g == 0.0 => (ip / (2.0 * k), im / (2.0 * k)),
        Permeability::Finite(g) => {
            // k A + k B = (ip + im)/2
            // (k + g) A - g B = ip/2 - g (ip - im)/(2k)
            let r1 = 0.5 * (ip + im);
            let r2 = 0.5 * ip - g * (ip - im) / (2.0 * k);
            let det = -k * (k + 2.0 * g);
            let a = (r1 * (-g) - k * r2) / det;
            let b = (k * r2 - (k + g) * r1) / det;
            (a, b)
        }
        Permeability::Infinite => {
            // A - B = (im - ip)/(2k), k A + k B = (ip + im)/2
            let sum = (ip + im) / (2.0 * k);
            let diff = (im - ip) / (2.0 * k);
            (0.5 * (sum + diff), 0.5 * (sum - diff))
        }
    };
    let n = f.nodes();
    let side = |p: &[f64], q: &[f64], c: f64| -> Vec<f64> {
        (0..n)
            .map(|j| (p[j] + q[j]) / (2.0 * k) + c * (-k * j as f64 * dx).exp())
            .collect()
    };
    let plus = side(&pp, &qp, a);
    let minus = side(&pm, &qm, b);
    Ok(ResolventSolution {
        values: HalfLineGrid { dx, plus, minus },
        coef_plus: a,
        coef_minus: b,
        deriv_plus: 0.5 * ip - k * a,
        deriv_minus: -0.5 * im + k * b,
    })
}
