//! Finite differences for the heat equation with a permeable interface at the origin:
//! `p_t = (sigma^2/2) p_xx` on both half lines, `p_x(0+) = p_x(0-) = gamma (p(0+) - p(0-))`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, require_positive, Error, Result};
use crate::kernel::quad::integrate;
use crate::kernel::{transition_density, HalfLineGrid};
use crate::line::{Permeability, PrbmParams, Side, SidedReal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// BDF2 after one implicit Euler step; unconditionally stable.
    Implicit,
    /// Forward Euler; needs `dt <= dx^2 / sigma^2`.
    Explicit,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PdeGrid {
    pub dx: f64,
    pub x_max: f64,
    pub dt: f64,
    pub gamma: Permeability,
    pub sigma: f64,
    pub scheme: Scheme,
}

impl PdeGrid {
    pub fn new(dx: f64, x_max: f64, dt: f64, gamma: Permeability, sigma: f64, scheme: Scheme) -> Result<Self> {
        require_positive("dx", dx)?;
        require_positive("x_max", x_max)?;
        require_positive("dt", dt)?;
        require_positive("sigma", sigma)?;
        let g = PdeGrid { dx, x_max, dt, gamma, sigma, scheme };
        if g.intervals() < 4 {
            return Err(invalid("x_max", "need at least 4 cells per side"));
        }
        if scheme == Scheme::Explicit && dt > dx * dx / (sigma * sigma) {
            return Err(invalid(
                "dt",
                format!("explicit scheme unstable: dt = {dt} > dx^2/sigma^2 = {}", dx * dx / (sigma * sigma)),
            ));
        }
        Ok(g)
    }

    /// Implicit grid with `X_max = 10 sigma sqrt(T)` rounded up to a whole number of cells.
    pub fn standard(dx: f64, dt: f64, gamma: Permeability, sigma: f64, horizon: f64) -> Result<Self> {
        require_positive("T", horizon)?;
        let cells = (10.0 * sigma * horizon.sqrt() / dx).ceil().max(4.0);
        Self::new(dx, cells * dx, dt, gamma, sigma, Scheme::Implicit)
    }

    /// Cells per side; nodes per side are one more.
    pub fn intervals(&self) -> usize {
        (self.x_max / self.dx).round() as usize
    }

    pub fn sample<F: FnMut(f64, bool) -> f64>(&self, f: F) -> Result<HalfLineGrid> {
        HalfLineGrid::sample(self.dx, self.intervals() + 1, f)
    }
}

/// Discrete mass conserved exactly by both schemes: per side
/// `dx (3/2 p_1 + p_2 + ... + p_{N-2} + 3/2 p_{N-1})`. Boundary nodes carry no
/// weight because their values are fixed by the one-sided flux stencils.
pub fn discrete_mass(p: &HalfLineGrid) -> f64 {
    let side = |v: &[f64]| {
        let n = v.len() - 1;
        let inner: f64 = v[2..n - 1].iter().sum();
        1.5 * v[1] + inner + 1.5 * v[n - 1]
    };
    p.dx * (side(&p.plus) + side(&p.minus))
}

/// Banded LU with partial pivoting, `kl` sub- and `ku` super-diagonals.
struct Banded {
    n: usize,
    kl: usize,
    width: usize,
    a: Vec<f64>,
    piv: Vec<usize>,
}

impl Banded {
    fn new(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Banded { n, kl, width, a: vec![0.0; n * width], piv: vec![0; n] }
    }

    #[inline]
    fn at(&mut self, i: usize, j: usize) -> &mut f64 {
        debug_assert!(j + self.kl >= i && j < i + self.width - self.kl);
        &mut self.a[i * self.width + j + self.kl - i]
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.width + j + self.kl - i]
    }

    fn factor(&mut self) -> Result<()> {
        let (n, kl) = (self.n, self.kl);
        let reach = self.width - kl - 1;
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let mut p = k;
            for i in k + 1..=last_row {
                if self.get(i, k).abs() > self.get(p, k).abs() {
                    p = i;
                }
            }
            if self.get(p, k) == 0.0 {
                return Err(Error::Numerical("singular finite-difference matrix".into()));
            }
            self.piv[k] = p;
            let last_col = (k + reach).min(n - 1);
            if p != k {
                for j in k..=last_col {
                    let t = self.get(k, j);
                    *self.at(k, j) = self.get(p, j);
                    *self.at(p, j) = t;
                }
            }
            let d = self.get(k, k);
            for i in k + 1..=last_row {
                let l = self.get(i, k) / d;
                *self.at(i, k) = l;
                if l != 0.0 {
                    for j in k + 1..=last_col {
                        let v = self.get(k, j);
                        *self.at(i, j) -= l * v;
                    }
                }
            }
        }
        Ok(())
    }

    fn solve(&self, b: &mut [f64]) {
        let (n, kl) = (self.n, self.kl);
        let reach = self.width - kl - 1;
        for k in 0..n {
            b.swap(k, self.piv[k]);
            for i in k + 1..=(k + kl).min(n - 1) {
                b[i] -= self.get(i, k) * b[k];
            }
        }
        for k in (0..n).rev() {
            let mut s = b[k];
            for j in k + 1..=(k + reach).min(n - 1) {
                s -= self.get(k, j) * b[j];
            }
            b[k] = s / self.get(k, k);
        }
    }
}

/// Unknowns are ordered `minus[N], ..., minus[0], plus[0], ..., plus[N]`.
struct Layout {
    n: usize,
}

impl Layout {
    fn minus(&self, j: usize) -> usize {
        self.n - j
    }
    fn plus(&self, j: usize) -> usize {
        self.n + 1 + j
    }
    fn size(&self) -> usize {
        2 * self.n + 2
    }
    fn pack(&self, p: &HalfLineGrid) -> Vec<f64> {
        let mut v = vec![0.0; self.size()];
        for j in 0..=self.n {
            v[self.minus(j)] = p.minus[j];
            v[self.plus(j)] = p.plus[j];
        }
        v
    }
    fn unpack(&self, v: &[f64], dx: f64) -> HalfLineGrid {
        HalfLineGrid {
            dx,
            plus: (0..=self.n).map(|j| v[self.plus(j)]).collect(),
            minus: (0..=self.n).map(|j| v[self.minus(j)]).collect(),
        }
    }
}

/// Implicit system with `c = theta dt kappa / dx^2` on interior rows.
fn assemble(grid: &PdeGrid, lay: &Layout, c: f64) -> Result<Banded> {
    let n = lay.n;
    let mut m = Banded::new(lay.size(), 3, 2);
    for side in [Side::Plus, Side::Minus] {
        let idx = |j: usize| match side {
            Side::Plus => lay.plus(j),
            Side::Minus => lay.minus(j),
        };
        for j in 1..n {
            *m.at(idx(j), idx(j)) = 1.0 + 2.0 * c;
            *m.at(idx(j), idx(j - 1)) = -c;
            *m.at(idx(j), idx(j + 1)) = -c;
        }
        // Zero flux at the far end: 3 p_N - 4 p_{N-1} + p_{N-2} = 0.
        *m.at(idx(n), idx(n)) = 3.0;
        *m.at(idx(n), idx(n - 1)) = -4.0;
        *m.at(idx(n), idx(n - 2)) = 1.0;
    }
    let (p0, p1, p2) = (lay.plus(0), lay.plus(1), lay.plus(2));
    let (m0, m1, m2) = (lay.minus(0), lay.minus(1), lay.minus(2));
    match grid.gamma {
        Permeability::Finite(g) => {
            // (-3 p0+ + 4 p1+ - p2+) = 2 dx g (p0+ - p0-), mirrored on the minus side.
            let k = 2.0 * grid.dx * g;
            *m.at(p0, p0) = 3.0 + k;
            *m.at(p0, p1) = -4.0;
            *m.at(p0, p2) = 1.0;
            *m.at(p0, m0) = -k;
            *m.at(m0, m0) = 3.0 + k;
            *m.at(m0, m1) = -4.0;
            *m.at(m0, m2) = 1.0;
            *m.at(m0, p0) = -k;
        }
        Permeability::Infinite => {
            // Equal one-sided derivatives, and continuity.
            *m.at(p0, p0) = -3.0;
            *m.at(p0, p1) = 4.0;
            *m.at(p0, p2) = -1.0;
            *m.at(p0, m0) = -3.0;
            *m.at(p0, m1) = 4.0;
            *m.at(p0, m2) = -1.0;
            *m.at(m0, m0) = -1.0;
            *m.at(m0, p0) = 1.0;
        }
    }
    m.factor()?;
    Ok(m)
}

/// Closes the boundary nodes after an explicit interior update.
fn close_boundaries(grid: &PdeGrid, p: &mut HalfLineGrid) {
    let n = p.plus.len() - 1;
    for v in [&mut p.plus, &mut p.minus] {
        v[n] = (4.0 * v[n - 1] - v[n - 2]) / 3.0;
    }
    let rp = 4.0 * p.plus[1] - p.plus[2];
    let rm = 4.0 * p.minus[1] - p.minus[2];
    match grid.gamma {
        Permeability::Finite(g) => {
            let k = 2.0 * grid.dx * g;
            let det = 9.0 + 6.0 * k;
            p.plus[0] = ((3.0 + k) * rp + k * rm) / det;
            p.minus[0] = ((3.0 + k) * rm + k * rp) / det;
        }
        Permeability::Infinite => {
            let v = (rp + rm) / 6.0;
            p.plus[0] = v;
            p.minus[0] = v;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PdeSolution {
    pub values: HalfLineGrid,
    /// `(time, discrete mass)` after every step, starting at time 0.
    pub mass: Vec<(f64, f64)>,
    /// One-sided derivatives at `0+` and `0-` after the final step.
    pub flux_plus: f64,
    pub flux_minus: f64,
}

/// One-sided second-order derivatives at the doubled origin, in the projected coordinate.
pub fn interface_derivatives(p: &HalfLineGrid) -> (f64, f64) {
    let dp = (-3.0 * p.plus[0] + 4.0 * p.plus[1] - p.plus[2]) / (2.0 * p.dx);
    let dm = (3.0 * p.minus[0] - 4.0 * p.minus[1] + p.minus[2]) / (2.0 * p.dx);
    (dp, dm)
}

/// Advances `p0` to time `T`. The step is shrunk so that a whole number of steps lands on `T`.
pub fn solve_transmission_heat(grid: &PdeGrid, p0: &HalfLineGrid, horizon: f64) -> Result<PdeSolution> {
    require_positive("T", horizon)?;
    let n = grid.intervals();
    if p0.nodes() != n + 1 || (p0.dx - grid.dx).abs() > 1e-12 * grid.dx {
        return Err(Error::Mismatch("initial data does not live on the solver grid".into()));
    }
    if p0.plus.iter().chain(&p0.minus).any(|v| !v.is_finite()) {
        return Err(invalid("p0", "initial data must be finite"));
    }
    let steps = (horizon / grid.dt).ceil().max(1.0) as usize;
    let dt = horizon / steps as f64;
    let kappa = 0.5 * grid.sigma * grid.sigma;
    let r = kappa * dt / (grid.dx * grid.dx);
    let mut mass = vec![(0.0, discrete_mass(p0))];
    let mut p = p0.clone();

    match grid.scheme {
        Scheme::Explicit => {
            let mut next = p.clone();
            for s in 1..=steps {
                for (new, old) in [(&mut next.plus, &p.plus), (&mut next.minus, &p.minus)] {
                    for j in 1..n {
                        new[j] = old[j] + r * (old[j + 1] - 2.0 * old[j] + old[j - 1]);
                    }
                }
                // Interior row j = 1 reads the node at the origin on its own side.
                close_boundaries(grid, &mut next);
                std::mem::swap(&mut p, &mut next);
                mass.push((s as f64 * dt, discrete_mass(&p)));
            }
        }
        Scheme::Implicit => {
            let lay = Layout { n };
            let euler = assemble(grid, &lay, r)?;
            let bdf2 = if steps > 1 { Some(assemble(grid, &lay, 2.0 * r / 3.0)?) } else { None };
            let mut prev = lay.pack(&p);
            let mut cur = prev.clone();
            let boundary = [lay.minus(n), lay.minus(0), lay.plus(0), lay.plus(n)];
            for s in 1..=steps {
                let mut rhs = if s == 1 {
                    cur.clone()
                } else {
                    cur.iter().zip(&prev).map(|(c, q)| (4.0 * c - q) / 3.0).collect()
                };
                for &b in &boundary {
                    rhs[b] = 0.0;
                }
                match (s, &bdf2) {
                    (1, _) | (_, None) => euler.solve(&mut rhs),
                    (_, Some(m)) => m.solve(&mut rhs),
                }
                prev = std::mem::replace(&mut cur, rhs);
                let snap = lay.unpack(&cur, grid.dx);
                mass.push((s as f64 * dt, discrete_mass(&snap)));
            }
            p = lay.unpack(&cur, grid.dx);
        }
    }
    let (flux_plus, flux_minus) = interface_derivatives(&p);
    Ok(PdeSolution { values: p, mass, flux_plus, flux_minus })
}

/// `∫ g_t(x, y) p0(y) dy` over both half lines by adaptive quadrature.
pub fn semigroup_solution<F: Fn(SidedReal) -> f64>(params: &PrbmParams, p0: F, t: f64, x: SidedReal) -> Result<f64> {
    require_positive("t", t)?;
    let st = params.sigma * t.sqrt();
    let u = x.magnitude();
    let reach = 12.0 * st;
    let mut total = 0.0;
    for side in [x.side(), x.side().flip()] {
        let f = |v: f64| {
            let y = SidedReal::raw(v, side);
            transition_density(params, t, x, y).unwrap_or(f64::NAN) * p0(y)
        };
        let pieces: Vec<(f64, f64)> = if side == x.side() {
            vec![(0.0, u), (u, u + reach)]
        } else {
            vec![(0.0, reach)]
        };
        for (a, b) in pieces {
            if b > a {
                total += integrate(f, a, b, 1e-13, 1e-12)?.value;
            }
        }
    }
    if !total.is_finite() {
        return Err(Error::Numerical("semigroup integrand was not finite".into()));
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialProfile {
    /// `1` on the plus side, `0` on the minus side.
    Step,
    /// `exp(-(x - 1)^2 / 0.5)`: a bump sitting on the plus side.
    Gaussian,
}

impl InitialProfile {
    pub fn value(self, x: SidedReal) -> f64 {
        match self {
            InitialProfile::Step => {
                if x.side() == Side::Plus {
                    1.0
                } else {
                    0.0
                }
            }
            InitialProfile::Gaussian => {
                let d = x.projection() - 1.0;
                (-d * d / 0.5).exp()
            }
        }
    }

    /// Samples on a grid; with `gamma = inf` the two origin nodes share their average.
    pub fn on_grid(self, grid: &PdeGrid) -> Result<HalfLineGrid> {
        let mut g = grid.sample(|x, plus| {
            let side = if plus { Side::Plus } else { Side::Minus };
            self.value(SidedReal::raw(x.abs(), side))
        })?;
        if grid.gamma == Permeability::Infinite {
            let mid = 0.5 * (g.plus[0] + g.minus[0]);
            g.plus[0] = mid;
            g.minus[0] = mid;
        }
        Ok(g)
    }
}

impl std::str::FromStr for InitialProfile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "step" => Ok(InitialProfile::Step),
            "gaussian" => Ok(InitialProfile::Gaussian),
            _ => Err(Error::Parse { input: s.to_string() }),
        }
    }
}
