//! Python bindings: `import prbm`.
//!
//! Points on the doubled line are passed as `SidedReal` objects, strings such as
//! `"0+"` or `"-1.5"`, or nonzero floats. Permeability `gamma` may be `math.inf`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use prbm_core::construct::{sample_marginals, Sampler};
use prbm_core::kernel;
use prbm_core::lattice::{self, LatticeConfig};
use prbm_core::pde::{self, InitialProfile, PdeGrid, Scheme};
use prbm_core::suite::{run_suite, Suite};
use prbm_core::{ensemble, Permeability, PrbmParams, Side};

fn err(e: prbm_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parsed<T: std::str::FromStr<Err = prbm_core::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(err)
}

fn params(gamma: f64, sigma: f64) -> PyResult<PrbmParams> {
    PrbmParams::new(Permeability::new(gamma).map_err(err)?, sigma).map_err(err)
}

/// A point of the doubled line: a magnitude and a side.
#[pyclass(name = "SidedReal", module = "prbm", frozen, eq, from_py_object)]
#[derive(Clone, Copy, PartialEq)]
struct PySided(prbm_core::SidedReal);

#[pymethods]
impl PySided {
    #[new]
    #[pyo3(signature = (magnitude, side = "+"))]
    fn new(magnitude: f64, side: &str) -> PyResult<Self> {
        let side = match side {
            "+" => Side::Plus,
            "-" => Side::Minus,
            _ => return Err(PyValueError::new_err(format!("side must be '+' or '-', got {side:?}"))),
        };
        Ok(PySided(prbm_core::SidedReal::new(magnitude, side).map_err(err)?))
    }

    #[staticmethod]
    fn parse(s: &str) -> PyResult<Self> {
        Ok(PySided(parsed(s)?))
    }

    #[getter]
    fn magnitude(&self) -> f64 {
        self.0.magnitude()
    }

    #[getter]
    fn side(&self) -> &'static str {
        self.0.side().symbol()
    }

    /// Signed coordinate; both origins project to 0.
    fn projection(&self) -> f64 {
        self.0.projection()
    }

    fn __repr__(&self) -> String {
        format!("SidedReal('{}')", self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

fn point(obj: &Bound<'_, PyAny>) -> PyResult<prbm_core::SidedReal> {
    if let Ok(p) = obj.extract::<PySided>() {
        return Ok(p.0);
    }
    if let Ok(s) = obj.extract::<String>() {
        return parsed(&s);
    }
    let x: f64 = obj.extract()?;
    if x == 0.0 {
        return Err(PyValueError::new_err("0 is ambiguous on the doubled line; pass '0+' or '0-'"));
    }
    prbm_core::SidedReal::from_real(x).map_err(err)
}

/// `2 gamma ∫ exp(-2 gamma l) G_t(a + l) dl`.
#[pyfunction]
fn barrier_integral(a: f64, gamma: f64, t: f64) -> PyResult<f64> {
    kernel::barrier_integral(a, gamma, t).map_err(err)
}

/// Transition density `g_t(x, y)`.
#[pyfunction]
#[pyo3(signature = (gamma, t, x, y, sigma = 1.0))]
fn transition_density(gamma: f64, t: f64, x: &Bound<'_, PyAny>, y: &Bound<'_, PyAny>, sigma: f64) -> PyResult<f64> {
    kernel::transition_density(&params(gamma, sigma)?, t, point(x)?, point(y)?).map_err(err)
}

/// `P_x(X_t <= y)` in the projected order, with `0-` counted at and below 0.
#[pyfunction]
#[pyo3(signature = (gamma, t, x, y, sigma = 1.0))]
fn transition_cdf(gamma: f64, t: f64, x: &Bound<'_, PyAny>, y: f64, sigma: f64) -> PyResult<f64> {
    kernel::transition_cdf(&params(gamma, sigma)?, t, point(x)?, y).map_err(err)
}

/// Probability of being on the other side at time `t`.
#[pyfunction]
#[pyo3(signature = (gamma, t, x, sigma = 1.0))]
fn crossing_probability(gamma: f64, t: f64, x: &Bound<'_, PyAny>, sigma: f64) -> PyResult<f64> {
    kernel::crossing_probability(&params(gamma, sigma)?, t, point(x)?).map_err(err)
}

/// `P_x(reach 0- before y)` for `0 < x < y`.
#[pyfunction]
fn hitting_prob(x: f64, y: f64, gamma: f64) -> PyResult<f64> {
    kernel::hitting_prob(x, y, gamma).map_err(err)
}

#[pyfunction]
fn dotted_distance(a: &Bound<'_, PyAny>, b: &Bound<'_, PyAny>) -> PyResult<f64> {
    Ok(prbm_core::dotted_distance(point(a)?, point(b)?))
}

#[pyfunction]
fn scale_r(x: f64, gamma: f64) -> PyResult<PySided> {
    Ok(PySided(prbm_core::scale_r(x, gamma).map_err(err)?))
}

#[pyfunction]
fn scale_r_inv(x: &Bound<'_, PyAny>, gamma: f64) -> PyResult<f64> {
    prbm_core::scale_r_inv(point(x)?, gamma).map_err(err)
}

/// Values of `paths` independent paths at `times`, as `[path][time]` projections
/// together with the matching sides.
#[pyfunction]
#[pyo3(signature = (sampler, gamma, x0, times, paths, dt = 1e-4, seed = 0, sigma = 1.0))]
#[allow(clippy::too_many_arguments)]
fn sample(
    py: Python<'_>,
    sampler: &str,
    gamma: f64,
    x0: &Bound<'_, PyAny>,
    times: Vec<f64>,
    paths: usize,
    dt: f64,
    seed: u64,
    sigma: f64,
) -> PyResult<(Vec<Vec<f64>>, Vec<Vec<String>>)> {
    let sampler: Sampler = parsed(sampler)?;
    let prm = params(gamma, sigma)?;
    let x0 = point(x0)?;
    let out = py
        .detach(|| ensemble::try_run(seed, paths, |_, rng| sample_marginals(sampler, &prm, x0, dt, &times, rng)))
        .map_err(err)?;
    let proj = out.iter().map(|p| p.iter().map(|x| x.projection()).collect()).collect();
    let sides = out.iter().map(|p| p.iter().map(|x| x.side().symbol().to_string()).collect()).collect();
    Ok((proj, sides))
}

/// Lattice walk with `K` slow edges at the origin.
#[pyclass(name = "Lattice", module = "prbm", frozen)]
struct PyLattice(LatticeConfig);

#[pymethods]
impl PyLattice {
    #[new]
    #[pyo3(signature = (k, n, c_n, m = 1.0, x0 = None))]
    fn new(k: u32, n: u64, c_n: f64, m: f64, x0: Option<i64>) -> PyResult<Self> {
        let h = (k as i64 + 1) / 2;
        Ok(PyLattice(LatticeConfig::new(k, m, c_n, n, x0.unwrap_or(h + 1)).map_err(err)?))
    }

    /// Attenuation `gamma K / sqrt(n)`.
    #[staticmethod]
    fn auto_attenuation(k: u32, gamma: f64, n: u64) -> PyResult<f64> {
        LatticeConfig::auto_attenuation(k, gamma, n).map_err(err)
    }

    fn jump_rate(&self, i: i64, j: i64) -> PyResult<f64> {
        lattice::jump_rates(&self.0, i, j).map_err(err)
    }

    /// Probability that a barrier visit ends on the far side.
    fn crossing_param(&self) -> f64 {
        lattice::crossing_geometric_param(&self.0).p
    }

    fn expected_exit_time(&self, site: i64) -> PyResult<f64> {
        lattice::expected_exit_time(&self.0, site).map_err(err)
    }

    /// Final rescaled positions of `paths` walks run to `horizon`.
    #[pyo3(signature = (horizon, paths, seed = 0))]
    fn final_positions(&self, py: Python<'_>, horizon: f64, paths: usize, seed: u64) -> PyResult<Vec<f64>> {
        let cfg = self.0;
        py.detach(|| ensemble::try_run(seed, paths, |_, rng| lattice::simulate_walk(&cfg, horizon, rng).map(|p| p.final_position())))
            .map_err(err)
    }
}

/// Finite-difference solution at `horizon`: `{"x": nodes, "plus": ..., "minus": ..., "mass": ...}`,
/// with `minus[j]` the value at `-x[j]`.
#[pyfunction]
#[pyo3(signature = (gamma, horizon, profile = "step", dx = 1e-2, dt = 1e-3, sigma = 1.0, scheme = "implicit"))]
#[allow(clippy::too_many_arguments)]
fn solve_pde<'py>(
    py: Python<'py>,
    gamma: f64,
    horizon: f64,
    profile: &str,
    dx: f64,
    dt: f64,
    sigma: f64,
    scheme: &str,
) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
    let profile: InitialProfile = parsed(profile)?;
    let scheme = match scheme {
        "implicit" => Scheme::Implicit,
        "explicit" => Scheme::Explicit,
        _ => return Err(PyValueError::new_err(format!("unknown scheme {scheme:?}"))),
    };
    let g = Permeability::new(gamma).map_err(err)?;
    let std = PdeGrid::standard(dx, dt, g, sigma, horizon).map_err(err)?;
    let grid = PdeGrid::new(dx, std.x_max, dt, g, sigma, scheme).map_err(err)?;
    let p0 = profile.on_grid(&grid).map_err(err)?;
    let sol = py.detach(|| pde::solve_transmission_heat(&grid, &p0, horizon)).map_err(err)?;
    let d = pyo3::types::PyDict::new(py);
    let x: Vec<f64> = (0..sol.values.plus.len()).map(|j| j as f64 * dx).collect();
    d.set_item("x", x)?;
    d.set_item("plus", sol.values.plus)?;
    d.set_item("minus", sol.values.minus)?;
    d.set_item("mass", sol.mass.iter().map(|m| m.1).collect::<Vec<_>>())?;
    Ok(d)
}

/// Runs an acceptance suite and returns the verdict document as JSON text.
#[pyfunction]
#[pyo3(signature = (suite = "kernel", seed = 42))]
fn verify(py: Python<'_>, suite: &str, seed: u64) -> PyResult<String> {
    let suite: Suite = parsed(suite)?;
    let report = py.detach(|| run_suite(suite, seed, &mut |_| {})).map_err(err)?;
    serde_json::to_string(&report).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn prbm(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySided>()?;
    m.add_class::<PyLattice>()?;
    m.add_function(wrap_pyfunction!(barrier_integral, m)?)?;
    m.add_function(wrap_pyfunction!(transition_density, m)?)?;
    m.add_function(wrap_pyfunction!(transition_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(crossing_probability, m)?)?;
    m.add_function(wrap_pyfunction!(hitting_prob, m)?)?;
    m.add_function(wrap_pyfunction!(dotted_distance, m)?)?;
    m.add_function(wrap_pyfunction!(scale_r, m)?)?;
    m.add_function(wrap_pyfunction!(scale_r_inv, m)?)?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(solve_pde, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
