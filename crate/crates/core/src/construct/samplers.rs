//! Three independent ways to generate the process.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, require_positive, Error, Result};
use crate::kernel::sample_transition;
use crate::line::{check_grid, scale_r, scale_r_inv, Permeability, PrbmParams, Side, SidedReal};
use crate::paths::{ReflectedStepper, RngStream};

/// Path on the doubled line, optionally with its local time at the origin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SidedPath {
    pub times: Vec<f64>,
    pub values: Vec<SidedReal>,
    pub params: PrbmParams,
    pub local_time: Option<Vec<f64>>,
}

impl SidedPath {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> SidedReal {
        *self.values.last().expect("paths are never empty")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampler {
    /// Time change of Brownian motion with the band `[-1/(2 gamma), 1/(2 gamma)]` collapsed.
    SpeedScale,
    /// Reflected Brownian motion whose side flips at exponential local-time levels.
    Flip,
    /// Repeated exact draws from the transition kernel.
    Exact,
}

impl Sampler {
    pub const ALL: [Sampler; 3] = [Sampler::SpeedScale, Sampler::Flip, Sampler::Exact];

    pub fn name(self) -> &'static str {
        match self {
            Sampler::SpeedScale => "speed-scale",
            Sampler::Flip => "flip",
            Sampler::Exact => "exact",
        }
    }
}

impl std::str::FromStr for Sampler {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "speed-scale" | "speed_scale" => Ok(Sampler::SpeedScale),
            "flip" => Ok(Sampler::Flip),
            "exact" => Ok(Sampler::Exact),
            _ => Err(Error::Parse { input: s.to_string() }),
        }
    }
}

fn step_count(dt: f64, horizon: f64) -> Result<usize> {
    require_positive("dt", dt)?;
    require_positive("T", horizon)?;
    let n = (horizon / dt).round();
    if n < 1.0 || (n * dt - horizon).abs() > 1e-9 * horizon {
        return Err(invalid("T", format!("T = {horizon} is not a whole number of steps dt = {dt}")));
    }
    Ok(n as usize)
}

/// Speed-scale construction, one output step at a time.
///
/// The driving motion `B` takes Euler steps of size `dt`; a step counts as
/// elapsed process time only when it lands outside the band `[-a, a]`,
/// `a = 1/(2 gamma)`. Time spent inside the band is invisible to `X`, so once
/// `B` lands inside it is moved straight to the edge it exits through, drawn
/// from the harmonic measure `(b + a) / (2a)`. The local time is the regulator
/// of `|X_0| + ∫ sign(B) 1{|B| > a} dB` read at counted steps.
#[derive(Clone, Debug)]
pub struct SpeedScaleStepper {
    half_band: f64,
    gamma: f64,
    scale: f64,
    b: f64,
    drive: f64,
    regulator: f64,
}

impl SpeedScaleStepper {
    pub fn new(params: &PrbmParams, x0: SidedReal, dt: f64) -> Result<Self> {
        require_positive("dt", dt)?;
        let gamma = params.gamma.interior().ok_or_else(|| {
            Error::Unsupported(format!("speed-scale sampler needs 0 < gamma < inf, got {}", params.gamma))
        })?;
        Ok(SpeedScaleStepper {
            half_band: 0.5 / gamma,
            gamma,
            scale: params.sigma * dt.sqrt(),
            b: scale_r_inv(x0, gamma)?,
            drive: x0.magnitude(),
            regulator: 0.0,
        })
    }

    /// Position of the driving motion in scale coordinates.
    pub fn scale_position(&self) -> f64 {
        self.b
    }

    /// Returns `(X, L)` after one unit of process time `dt`.
    #[inline]
    pub fn step(&mut self, rng: &mut RngStream) -> (SidedReal, f64) {
        let a = self.half_band;
        loop {
            let prev = self.b;
            let db = self.scale * rng.normal();
            self.b += db;
            if prev > a {
                self.drive += db;
            } else if prev < -a {
                self.drive -= db;
            }
            if self.b.abs() > a {
                break;
            }
            let up = rng.uniform() * 2.0 * a < self.b + a;
            self.b = if up { a } else { -a };
        }
        self.regulator = self.regulator.max(-self.drive);
        let x = scale_r(self.b, self.gamma).expect("gamma validated at construction");
        (x, self.regulator)
    }
}

/// Flip construction, one step at a time. `gamma = 0` never flips.
///
/// Uses the bridge-corrected regulator, so values at grid times carry no
/// discretisation bias.
#[derive(Clone, Debug)]
pub struct FlipStepper {
    refl: ReflectedStepper,
    side: Side,
    rate: f64,
    next_level: f64,
}

impl FlipStepper {
    /// Draws the first flip level from `rng`.
    pub fn new(params: &PrbmParams, x0: SidedReal, dt: f64, rng: &mut RngStream) -> Result<Self> {
        let rate = match params.gamma {
            Permeability::Finite(g) => g,
            Permeability::Infinite => {
                return Err(Error::Unsupported("flip sampler needs finite gamma".into()))
            }
        };
        let refl = ReflectedStepper::bridge(x0.magnitude(), params.sigma, dt)?;
        let next_level = if rate > 0.0 { rng.exponential(rate) } else { f64::INFINITY };
        Ok(FlipStepper { refl, side: x0.side(), rate, next_level })
    }

    #[inline]
    pub fn step(&mut self, rng: &mut RngStream) -> (SidedReal, f64) {
        let (w, l) = self.refl.step(rng);
        while l >= self.next_level {
            self.side = self.side.flip();
            self.next_level += rng.exponential(self.rate);
        }
        (SidedReal::raw(w, self.side), l)
    }
}

enum Stepper {
    SpeedScale(SpeedScaleStepper),
    Flip(FlipStepper),
}

impl Stepper {
    fn new(sampler: Sampler, params: &PrbmParams, x0: SidedReal, dt: f64, rng: &mut RngStream) -> Result<Self> {
        match sampler {
            Sampler::SpeedScale => Ok(Stepper::SpeedScale(SpeedScaleStepper::new(params, x0, dt)?)),
            Sampler::Flip => Ok(Stepper::Flip(FlipStepper::new(params, x0, dt, rng)?)),
            Sampler::Exact => Err(Error::Unsupported("exact sampler has no stepper".into())),
        }
    }

    #[inline]
    fn step(&mut self, rng: &mut RngStream) -> (SidedReal, f64) {
        match self {
            Stepper::SpeedScale(s) => s.step(rng),
            Stepper::Flip(s) => s.step(rng),
        }
    }
}

fn run_stepper(
    sampler: Sampler,
    params: &PrbmParams,
    x0: SidedReal,
    dt: f64,
    horizon: f64,
    rng: &mut RngStream,
) -> Result<SidedPath> {
    let n = step_count(dt, horizon)?;
    let mut s = Stepper::new(sampler, params, x0, dt, rng)?;
    let mut times = Vec::with_capacity(n + 1);
    let mut values = Vec::with_capacity(n + 1);
    let mut lt = Vec::with_capacity(n + 1);
    times.push(0.0);
    values.push(x0);
    lt.push(0.0);
    for k in 1..=n {
        let (x, l) = s.step(rng);
        times.push(if k == n { horizon } else { k as f64 * dt });
        values.push(x);
        lt.push(l);
    }
    Ok(SidedPath { times, values, params: *params, local_time: Some(lt) })
}

/// Speed-scale construction on the grid `0, dt, ..., T`. Requires `0 < gamma < inf`.
pub fn simulate_speed_scale(
    params: &PrbmParams,
    x0: SidedReal,
    dt: f64,
    horizon: f64,
    rng: &mut RngStream,
) -> Result<SidedPath> {
    run_stepper(Sampler::SpeedScale, params, x0, dt, horizon, rng)
}

/// Flip construction on the grid `0, dt, ..., T`. Requires finite gamma.
pub fn simulate_flip(
    params: &PrbmParams,
    x0: SidedReal,
    dt: f64,
    horizon: f64,
    rng: &mut RngStream,
) -> Result<SidedPath> {
    run_stepper(Sampler::Flip, params, x0, dt, horizon, rng)
}

/// Exact skeleton at the given times. A leading 0 is added if absent.
pub fn simulate_exact(params: &PrbmParams, x0: SidedReal, times: &[f64], rng: &mut RngStream) -> Result<SidedPath> {
    let mut grid = Vec::with_capacity(times.len() + 1);
    if times.first() != Some(&0.0) {
        grid.push(0.0);
    }
    grid.extend_from_slice(times);
    check_grid(&grid)?;
    let mut values = Vec::with_capacity(grid.len());
    let mut x = x0;
    values.push(x);
    for w in grid.windows(2) {
        x = sample_transition(params, w[1] - w[0], x, rng)?;
        values.push(x);
    }
    Ok(SidedPath { times: grid, values, params: *params, local_time: None })
}

/// Values of one path at the observation times, without storing the path.
/// For the stepping samplers every observation time must be a multiple of `dt`.
pub fn sample_marginals(
    sampler: Sampler,
    params: &PrbmParams,
    x0: SidedReal,
    dt: f64,
    obs: &[f64],
    rng: &mut RngStream,
) -> Result<Vec<SidedReal>> {
    if obs.is_empty() {
        return Ok(Vec::new());
    }
    let mut grid = vec![0.0];
    grid.extend_from_slice(obs);
    check_grid(&grid)?;
    if sampler == Sampler::Exact {
        let p = simulate_exact(params, x0, obs, rng)?;
        return Ok(p.values[1..].to_vec());
    }
    let mut s = Stepper::new(sampler, params, x0, dt, rng)?;
    let mut out = Vec::with_capacity(obs.len());
    let mut done = 0usize;
    let mut x = x0;
    for &t in obs {
        let target = step_count(dt, t)?;
        while done < target {
            x = s.step(rng).0;
            done += 1;
        }
        out.push(x);
    }
    Ok(out)
}

/// Starting point for a process started at the bare origin: `0+` with probability `weight_plus`.
pub fn origin_mixture(weight_plus: f64, rng: &mut RngStream) -> Result<SidedReal> {
    if !(0.0..=1.0).contains(&weight_plus) {
        return Err(invalid("weight_plus", format!("must lie in [0, 1], got {weight_plus}")));
    }
    Ok(if rng.uniform() < weight_plus { SidedReal::ZERO_PLUS } else { SidedReal::ZERO_MINUS })
}
