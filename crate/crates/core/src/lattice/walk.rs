//! The continuous-time random walk with a barrier of `K` slow edges.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, require_positive, Error, Result};
use crate::line::Path;
use crate::paths::RngStream;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeConfig {
    /// Number of attenuated edges.
    pub k: u32,
    /// Migration rate.
    pub m: f64,
    /// Attenuation factor on barrier edges.
    pub c_n: f64,
    /// Scaling index: space by `1/sqrt(n)`, time by `n`.
    pub n: u64,
    /// Starting site.
    pub x0: i64,
}

impl LatticeConfig {
    pub fn new(k: u32, m: f64, c_n: f64, n: u64, x0: i64) -> Result<Self> {
        if k == 0 {
            return Err(invalid("K", "barrier width must be at least 1"));
        }
        require_positive("m", m)?;
        if !(c_n > 0.0 && c_n <= 1.0) {
            return Err(invalid("c_n", format!("must lie in (0, 1], got {c_n}")));
        }
        if n == 0 {
            return Err(invalid("n", "scaling index must be at least 1"));
        }
        let cfg = LatticeConfig { k, m, c_n, n, x0 };
        if !cfg.contains(x0) {
            return Err(invalid("x0", format!("site {x0} is not in the state space for K={k}")));
        }
        Ok(cfg)
    }

    /// Attenuation `gamma K / sqrt(n)` matching permeability `gamma` in the limit.
    pub fn auto_attenuation(k: u32, gamma: f64, n: u64) -> Result<f64> {
        require_positive("gamma", gamma)?;
        let c = gamma * k as f64 / (n as f64).sqrt();
        if c > 1.0 {
            return Err(invalid("c_n", format!("gamma K / sqrt(n) = {c} exceeds 1; increase n")));
        }
        Ok(c)
    }

    pub fn odd(&self) -> bool {
        self.k % 2 == 1
    }

    /// Largest `|i|` of a site touching a slow edge: `K/2` or `(K+1)/2`.
    pub fn half_width(&self) -> i64 {
        (self.k as i64 + 1) / 2
    }

    /// Whether `site` belongs to the state space (zero is removed for odd `K`).
    pub fn contains(&self, site: i64) -> bool {
        !(self.odd() && site == 0)
    }

    pub fn in_barrier(&self, site: i64) -> bool {
        site.abs() <= self.half_width()
    }

    pub fn scale(&self) -> f64 {
        1.0 / (self.n as f64).sqrt()
    }

    pub fn position(&self, site: i64) -> f64 {
        site as f64 * self.scale()
    }

    pub fn left(&self, site: i64) -> i64 {
        if self.odd() && site == 1 {
            -1
        } else {
            site - 1
        }
    }

    pub fn right(&self, site: i64) -> i64 {
        if self.odd() && site == -1 {
            1
        } else {
            site + 1
        }
    }

    /// Rate of the edge between neighbouring sites, unscaled.
    #[inline]
    pub(crate) fn edge_rate(&self, i: i64, j: i64) -> f64 {
        let h = self.half_width();
        if i.abs().max(j.abs()) <= h {
            self.c_n * self.m * 0.5
        } else {
            self.m * 0.5
        }
    }
}

/// Jump rate `q(i, j)` of the unscaled walk.
pub fn jump_rates(cfg: &LatticeConfig, i: i64, j: i64) -> Result<f64> {
    for s in [i, j] {
        if !cfg.contains(s) {
            return Err(invalid("site", format!("{s} is not in the state space for K={}", cfg.k)));
        }
    }
    if i == j {
        return Err(invalid("site", "need two distinct sites"));
    }
    if j == cfg.left(i) || j == cfg.right(i) {
        Ok(cfg.edge_rate(i, j))
    } else {
        Ok(0.0)
    }
}

/// Event-by-event walk in rescaled time (rates multiplied by `n`).
#[derive(Clone, Debug)]
pub struct WalkStepper {
    cfg: LatticeConfig,
    site: i64,
    time: f64,
}

impl WalkStepper {
    pub fn new(cfg: &LatticeConfig, start: i64) -> Result<Self> {
        if !cfg.contains(start) {
            return Err(invalid("start", format!("site {start} is not in the state space")));
        }
        Ok(WalkStepper { cfg: *cfg, site: start, time: 0.0 })
    }

    pub fn site(&self) -> i64 {
        self.site
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Holding time and destination of the next jump, without applying it.
    #[inline]
    pub fn propose(&self, rng: &mut RngStream) -> (f64, i64) {
        let (l, r) = (self.cfg.left(self.site), self.cfg.right(self.site));
        let ql = self.cfg.edge_rate(self.site, l);
        let qr = self.cfg.edge_rate(self.site, r);
        let total = (ql + qr) * self.cfg.n as f64;
        let hold = rng.exponential(total);
        let to = if rng.uniform() * (ql + qr) < ql { l } else { r };
        (hold, to)
    }

    #[inline]
    pub fn apply(&mut self, hold: f64, to: i64) {
        self.time += hold;
        self.site = to;
    }

    /// Advances one jump; returns `(time, previous site, new site)`.
    #[inline]
    pub fn step(&mut self, rng: &mut RngStream) -> (f64, i64, i64) {
        let (hold, to) = self.propose(rng);
        let from = self.site;
        self.apply(hold, to);
        (self.time, from, to)
    }

    /// Runs to `horizon` and returns the site occupied then.
    pub fn run_until(&mut self, horizon: f64, rng: &mut RngStream) -> i64 {
        loop {
            let (hold, to) = self.propose(rng);
            if self.time + hold > horizon {
                self.time = horizon;
                return self.site;
            }
            self.apply(hold, to);
        }
    }
}

/// Sparse rescaled path: jump times and the sites entered at them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkPath {
    pub config: LatticeConfig,
    pub horizon: f64,
    /// Starts at 0; entry `k > 0` is the time of the `k`-th jump.
    pub times: Vec<f64>,
    pub sites: Vec<i64>,
}

impl WalkPath {
    /// Rescaled position `site / sqrt(n)` at time `t` (right-continuous).
    pub fn value_at(&self, t: f64) -> f64 {
        let idx = self.times.partition_point(|&s| s <= t);
        self.config.position(self.sites[idx.saturating_sub(1)])
    }

    pub fn final_position(&self) -> f64 {
        self.config.position(*self.sites.last().expect("paths are never empty"))
    }

    /// Event-grid path of rescaled positions.
    pub fn to_path(&self) -> Path {
        Path {
            times: self.times.clone(),
            values: self.sites.iter().map(|&s| self.config.position(s)).collect(),
        }
    }

    /// Samples onto a given grid.
    pub fn densify(&self, grid: &[f64]) -> Result<Path> {
        Path::new(grid.to_vec(), grid.iter().map(|&t| self.value_at(t)).collect())
    }
}

/// Simulates the rescaled walk `X_n(t) = xi(n t) / sqrt(n)` on `[0, T]`.
pub fn simulate_walk(cfg: &LatticeConfig, horizon: f64, rng: &mut RngStream) -> Result<WalkPath> {
    require_positive("T", horizon)?;
    let mut w = WalkStepper::new(cfg, cfg.x0)?;
    let mut times = vec![0.0];
    let mut sites = vec![cfg.x0];
    loop {
        let (hold, to) = w.propose(rng);
        if w.time() + hold > horizon {
            break;
        }
        w.apply(hold, to);
        if w.time() <= *times.last().expect("non-empty") {
            return Err(Error::Numerical("jump times failed to increase".into()));
        }
        times.push(w.time());
        sites.push(to);
    }
    Ok(WalkPath { config: *cfg, horizon, times, sites })
}
