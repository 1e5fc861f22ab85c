//! Every tolerance and ensemble size used by the acceptance suite.

/// Configuration of the acceptance suite. There is exactly one instance, [`ACCEPTANCE`].
#[derive(Clone, Copy, Debug)]
pub struct AcceptanceTable {
    // 1. closed form vs quadrature
    pub kernel_grid: usize,
    pub kernel_a: (f64, f64),
    pub kernel_gamma: (f64, f64),
    pub kernel_t: (f64, f64),
    pub kernel_rel_err: f64,

    // 2. kernel invariants
    pub normalization_tol: f64,
    pub symmetry_tol: f64,
    pub chapman_kolmogorov_tol: f64,

    // 3. sampler triangle
    pub triangle_gammas: [f64; 3],
    pub triangle_starts: [&'static str; 2],
    pub triangle_times: [f64; 3],
    pub triangle_paths: usize,
    pub triangle_p_value: f64,

    /// Step for the stepping samplers.
    pub dt: f64,

    // 4. absolute value law
    pub abs_paths: usize,
    pub abs_ks: f64,
    pub se_multiple: f64,

    // 5. local-time increments
    pub increments: usize,
    pub increment_horizon: f64,
    pub increment_ks: f64,

    // 6. hitting probability
    pub hitting_paths: usize,
    pub hitting_x: f64,
    pub hitting_y: f64,

    // 7. martingale residuals
    pub martingale_paths: usize,
    /// Residuals are integrated in time on every `martingale_stride`-th step.
    pub martingale_stride: usize,
    /// Bias allowance is `martingale_bias * sqrt(dt) * sup |f|`.
    pub martingale_bias: f64,

    // 8. lattice
    pub lattice_paths: usize,
    pub lattice_n: u64,
    pub lattice_start: i64,
    pub lattice_ks: f64,
    pub visit_samples: usize,
    pub exit_m: f64,
    pub exit_n: u64,
    pub exit_c: f64,
    pub exit_time_zero: f64,
    pub exact_tol: f64,

    // 9. occupation time
    pub occupation_ns: [u64; 3],
    pub occupation_paths: usize,
    pub occupation_slope: f64,

    // 10. finite differences
    pub pde_dx: f64,
    pub pde_dt: f64,
    pub pde_gap: f64,
    pub pde_mass_drift: f64,
    pub pde_order_dx: [f64; 3],
    pub pde_order_dt: f64,
    pub pde_order: f64,
}

pub const ACCEPTANCE: AcceptanceTable = AcceptanceTable {
    kernel_grid: 10,
    kernel_a: (1e-3, 3.0),
    kernel_gamma: (1e-2, 1e2),
    kernel_t: (1e-2, 10.0),
    kernel_rel_err: 1e-10,

    normalization_tol: 1e-8,
    symmetry_tol: 1e-12,
    chapman_kolmogorov_tol: 1e-6,

    triangle_gammas: [0.2, 1.0, 5.0],
    triangle_starts: ["0+", "1"],
    triangle_times: [0.25, 1.0, 4.0],
    triangle_paths: 100_000,
    triangle_p_value: 1e-3,

    dt: 1e-4,

    abs_paths: 100_000,
    abs_ks: 0.01,
    se_multiple: 3.0,

    increments: 10_000,
    increment_horizon: 4.0,
    increment_ks: 0.02,

    hitting_paths: 100_000,
    hitting_x: 1.0,
    hitting_y: 2.0,

    martingale_paths: 100_000,
    martingale_stride: 10,
    martingale_bias: 1.0,

    lattice_paths: 10_000,
    lattice_n: 10_000,
    lattice_start: 50,
    lattice_ks: 0.05,
    visit_samples: 100_000,
    exit_m: 0.4,
    exit_n: 100,
    exit_c: 0.1,
    exit_time_zero: 0.325,
    exact_tol: 1e-12,

    occupation_ns: [100, 1_000, 10_000],
    occupation_paths: 4_000,
    occupation_slope: -0.4,

    pde_dx: 1e-2,
    pde_dt: 1e-3,
    pde_gap: 1e-3,
    pde_mass_drift: 1e-8,
    pde_order_dx: [4e-2, 2e-2, 1e-2],
    pde_order_dt: 2.5e-4,
    pde_order: 1.8,
};
