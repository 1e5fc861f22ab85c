//! Subcommands.

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use prbm_core::construct::{simulate_exact, simulate_flip, simulate_speed_scale, Sampler, SidedPath};
use prbm_core::ensemble;
use prbm_core::kernel::{transition_cdf, transition_density};
use prbm_core::lattice::{decompose, occupation_until, simulate_walk, LatticeConfig};
use prbm_core::pde::{solve_transmission_heat, InitialProfile, PdeGrid, Scheme};
use prbm_core::suite::{criterion_title, run_suite, Suite};
use prbm_core::verify::{ks_statistic, pairwise_sum, MeanSe};
use prbm_core::{Error, Permeability, PrbmParams, Side, SidedReal};

use crate::output::{num, Sink};

type AnyResult<T> = Result<T, Box<dyn std::error::Error>>;

pub enum Outcome {
    Success,
    ChecksFailed,
}

#[derive(Parser, Debug)]
#[command(name = "prbm", version, about = "Partially reflected Brownian motion: kernels, samplers, lattice walks, checks")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Transition density g_t(x, .) on a grid.
    Density(DensityArgs),
    /// Simulate sample paths with one of the three samplers.
    Simulate(SimulateArgs),
    /// Simulate the rescaled lattice walk with a slow barrier.
    Walk(WalkArgs),
    /// Run the acceptance suite and print JSON verdicts.
    Verify(VerifyArgs),
    /// Solve the heat equation with the permeable interface.
    Pde(PdeArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
struct Common {
    /// Random seed; falls back to PRBM_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    threads: Option<usize>,
    /// Directory for output files and manifest.json; standard output otherwise.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

/// `a:b:step`, inclusive of `b` up to rounding.
#[derive(Debug, Clone, Copy, Serialize)]
struct GridSpec {
    start: f64,
    stop: f64,
    step: f64,
}

impl FromStr for GridSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, h] = parts.as_slice() else {
            return Err(format!("expected start:stop:step, got {s:?}"));
        };
        let p = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
        let g = GridSpec { start: p(a)?, stop: p(b)?, step: p(h)? };
        if !(g.start.is_finite() && g.stop.is_finite() && g.step.is_finite()) {
            return Err("grid bounds must be finite".into());
        }
        if g.step <= 0.0 || g.stop < g.start {
            return Err("need step > 0 and stop >= start".into());
        }
        if (g.stop - g.start) / g.step > 1e7 {
            return Err("grid has more than 10^7 points".into());
        }
        Ok(g)
    }
}

impl GridSpec {
    /// Grid points; a point at the origin yields both `0-` and `0+`.
    fn points(&self) -> Vec<SidedReal> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        let mut out = Vec::with_capacity(n + 2);
        for i in 0..=n {
            // rounding keeps 0.1 * 3 from printing as 0.30000000000000004
            let v = ((self.start + i as f64 * self.step) * 1e12).round() / 1e12;
            if v.abs() <= 1e-9 * self.step {
                out.push(SidedReal::ZERO_MINUS);
                out.push(SidedReal::ZERO_PLUS);
            } else {
                out.push(SidedReal::from_real(v).expect("finite"));
            }
        }
        out
    }
}

#[derive(Args, Debug, Serialize)]
#[command(allow_negative_numbers = true)]
struct DensityArgs {
    /// Permeability, a number >= 0 or "inf".
    #[arg(long)]
    gamma: Permeability,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long = "t")]
    t: f64,
    /// Starting point: 0+, 0-, or a nonzero real.
    #[arg(long, allow_hyphen_values = true)]
    x: SidedReal,
    /// Target grid start:stop:step.
    #[arg(long, allow_hyphen_values = true)]
    grid: GridSpec,
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
#[command(allow_negative_numbers = true)]
struct SimulateArgs {
    #[arg(long, value_parser = parse_sampler)]
    sampler: Sampler,
    #[arg(long)]
    gamma: Permeability,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, allow_hyphen_values = true)]
    x0: SidedReal,
    #[arg(long, default_value_t = 1e-4)]
    dt: f64,
    #[arg(long = "T")]
    horizon: f64,
    #[arg(long, default_value_t = 1000)]
    paths: usize,
    /// Record every this many steps.
    #[arg(long, default_value_t = 100)]
    stride: usize,
    /// Emit (t, mean, var, side_fraction) instead of per-path rows.
    #[arg(long)]
    summary: bool,
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
}

fn parse_sampler(s: &str) -> Result<Sampler, String> {
    s.parse::<Sampler>().map_err(|_| format!("unknown sampler {s:?}; use speed-scale, flip or exact"))
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
enum CnArg {
    Auto,
    Value(f64),
}

impl FromStr for CnArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(CnArg::Auto);
        }
        s.parse::<f64>().map(CnArg::Value).map_err(|e| format!("{s:?}: {e}"))
    }
}

#[derive(Args, Debug, Serialize)]
#[command(allow_negative_numbers = true)]
struct WalkArgs {
    /// Number of slow edges.
    #[arg(long = "K")]
    k: u32,
    #[arg(long, default_value_t = 1.0)]
    m: f64,
    /// Attenuation in (0, 1], or "auto" for gamma K / sqrt(n).
    #[arg(long)]
    cn: CnArg,
    /// Target permeability; required with --cn auto.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    n: u64,
    #[arg(long = "T", default_value_t = 1.0)]
    horizon: f64,
    #[arg(long, default_value_t = 1000)]
    paths: usize,
    /// Starting site; defaults to the first site right of the barrier.
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<i64>,
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(long, default_value = "all", value_parser = parse_suite)]
    suite: Suite,
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse::<Suite>().map_err(|_| {
        let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
        format!("unknown suite {s:?}; one of {}", names.join(", "))
    })
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
enum P0Kind {
    Step,
    Gaussian,
    File,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
enum SchemeArg {
    Implicit,
    Explicit,
}

#[derive(Args, Debug, Serialize)]
#[command(allow_negative_numbers = true)]
struct PdeArgs {
    #[arg(long)]
    gamma: Permeability,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 1e-2)]
    dx: f64,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    #[arg(long = "T")]
    horizon: f64,
    /// Half-line length; defaults to 10 sigma sqrt(T).
    #[arg(long)]
    x_max: Option<f64>,
    #[arg(long, value_enum, default_value_t = SchemeArg::Implicit)]
    scheme: SchemeArg,
    #[arg(long, value_enum, default_value_t = P0Kind::Step)]
    p0: P0Kind,
    /// CSV with columns x, side, p; required with --p0 file.
    #[arg(long)]
    p0_file: Option<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
}

fn resolve_seed(c: &Common) -> AnyResult<u64> {
    if let Some(s) = c.seed {
        return Ok(s);
    }
    match std::env::var("PRBM_SEED") {
        Ok(v) => v.trim().parse::<u64>().map_err(|e| format!("PRBM_SEED={v:?}: {e}").into()),
        Err(_) => Ok(0),
    }
}

fn setup_threads(c: &Common) -> AnyResult<()> {
    if let Some(n) = c.threads {
        if n == 0 {
            return Err(Box::new(Error::InvalidParameter { name: "threads", reason: "must be at least 1".into() }));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn positive(name: &'static str, v: f64) -> AnyResult<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Box::new(Error::InvalidParameter { name, reason: format!("must be positive and finite, got {v}") }))
    }
}

fn at_least_one(name: &'static str, v: usize) -> AnyResult<()> {
    if v == 0 {
        return Err(Box::new(Error::InvalidParameter { name, reason: "must be at least 1".into() }));
    }
    Ok(())
}

pub fn run(cli: Cli) -> AnyResult<Outcome> {
    match cli.command {
        Command::Density(a) => density(a),
        Command::Simulate(a) => simulate(a),
        Command::Walk(a) => walk(a),
        Command::Verify(a) => verify(a),
        Command::Pde(a) => pde(a),
    }
}

#[derive(Serialize)]
struct DensityRow {
    t: f64,
    x_value: f64,
    x_side: &'static str,
    y_value: f64,
    y_side: &'static str,
    density: f64,
}

fn density(a: DensityArgs) -> AnyResult<Outcome> {
    let params = PrbmParams::new(a.gamma, a.sigma)?;
    positive("t", a.t)?;
    setup_threads(&a.common)?;
    let rows: Vec<DensityRow> = a
        .grid
        .points()
        .into_iter()
        .map(|y| {
            Ok(DensityRow {
                t: a.t,
                x_value: a.x.projection(),
                x_side: a.x.side().symbol(),
                y_value: y.projection(),
                y_side: y.side().symbol(),
                density: transition_density(&params, a.t, a.x, y)?,
            })
        })
        .collect::<prbm_core::Result<_>>()?;
    let mut sink = Sink::new(a.common.out_dir.clone())?;
    match a.common.format {
        Format::Json => sink.write_json("density.json", &rows)?,
        Format::Csv => {
            let mut w = sink.open("density.csv")?;
            writeln!(w, "t,x_value,x_side,y_value,y_side,density")?;
            for r in &rows {
                writeln!(w, "{},{},{},{},{},{}", num(r.t), num(r.x_value), r.x_side, num(r.y_value), r.y_side, num(r.density))?;
            }
            w.flush()?;
        }
    }
    sink.finish("density", None, a.common.threads, &a)?;
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct SummaryRow {
    t: f64,
    mean: f64,
    var: f64,
    side_fraction: f64,
}

fn simulate(a: SimulateArgs) -> AnyResult<Outcome> {
    let params = PrbmParams::new(a.gamma, a.sigma)?;
    positive("dt", a.dt)?;
    positive("T", a.horizon)?;
    at_least_one("paths", a.paths)?;
    at_least_one("stride", a.stride)?;
    let steps = (a.horizon / a.dt).round();
    if (steps * a.dt - a.horizon).abs() > 1e-9 * a.horizon {
        return Err(Box::new(Error::InvalidParameter { name: "T", reason: "must be a whole number of dt steps".into() }));
    }
    let steps = steps as usize;
    let mut record: Vec<usize> = (0..=steps).step_by(a.stride).collect();
    if *record.last().expect("non-empty") != steps {
        record.push(steps);
    }
    let times: Vec<f64> = record.iter().map(|&k| if k == steps { a.horizon } else { k as f64 * a.dt }).collect();
    match (a.sampler, a.gamma) {
        (Sampler::SpeedScale, g) if g.interior().is_none() => {
            return Err(Box::new(Error::InvalidParameter { name: "gamma", reason: "speed-scale needs 0 < gamma < inf".into() }))
        }
        (Sampler::Flip, Permeability::Infinite) => {
            return Err(Box::new(Error::InvalidParameter { name: "gamma", reason: "flip needs finite gamma".into() }))
        }
        _ => {}
    }
    setup_threads(&a.common)?;
    let seed = resolve_seed(&a.common)?;
    eprintln!("simulating {} paths with the {} sampler", a.paths, a.sampler.name());
    let paths: Vec<Vec<SidedReal>> = ensemble::try_run(seed, a.paths, |_, r| -> prbm_core::Result<Vec<SidedReal>> {
        let p: SidedPath = match a.sampler {
            Sampler::SpeedScale => simulate_speed_scale(&params, a.x0, a.dt, a.horizon, r)?,
            Sampler::Flip => simulate_flip(&params, a.x0, a.dt, a.horizon, r)?,
            Sampler::Exact => {
                let p = simulate_exact(&params, a.x0, &times, r)?;
                return Ok(p.values);
            }
        };
        Ok(record.iter().map(|&k| p.values[k]).collect())
    })?;
    eprintln!("done");

    let mut sink = Sink::new(a.common.out_dir.clone())?;
    if a.summary {
        let rows: Vec<SummaryRow> = times
            .iter()
            .enumerate()
            .map(|(k, &t)| {
                let v: Vec<f64> = paths.iter().map(|p| p[k].projection()).collect();
                let n = v.len() as f64;
                let mean = pairwise_sum(&v) / n;
                let dev: Vec<f64> = v.iter().map(|x| (x - mean) * (x - mean)).collect();
                let var = if v.len() > 1 { pairwise_sum(&dev) / (n - 1.0) } else { 0.0 };
                let plus = paths.iter().filter(|p| p[k].side() == Side::Plus).count() as f64;
                SummaryRow { t, mean, var, side_fraction: plus / n }
            })
            .collect();
        match a.common.format {
            Format::Json => sink.write_json("summary.json", &rows)?,
            Format::Csv => {
                let mut w = sink.open("summary.csv")?;
                writeln!(w, "t,mean,var,side_fraction")?;
                for r in &rows {
                    writeln!(w, "{},{},{},{}", num(r.t), num(r.mean), num(r.var), num(r.side_fraction))?;
                }
                w.flush()?;
            }
        }
    } else {
        match a.common.format {
            Format::Json => {
                #[derive(Serialize)]
                struct PathOut<'a> {
                    path_id: usize,
                    times: &'a [f64],
                    values: &'a [SidedReal],
                }
                let out: Vec<PathOut> =
                    paths.iter().enumerate().map(|(i, v)| PathOut { path_id: i, times: &times, values: v }).collect();
                sink.write_json("paths.json", &out)?;
            }
            Format::Csv => {
                let mut w = sink.open("paths.csv")?;
                writeln!(w, "path_id,t,value,side")?;
                for (i, p) in paths.iter().enumerate() {
                    for (t, x) in times.iter().zip(p) {
                        writeln!(w, "{i},{},{},{}", num(*t), num(x.projection()), x.side().symbol())?;
                    }
                }
                w.flush()?;
            }
        }
    }
    sink.finish("simulate", Some(seed), a.common.threads, &a)?;
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct WalkSummary {
    c_n: f64,
    gamma_limit: f64,
    sigma_limit: f64,
    paths: usize,
    ks_statistic: f64,
    ks_p_value: f64,
    crossings: usize,
    local_time: f64,
    /// Crossings per unit exit-count local time; tends to the limiting permeability.
    crossing_rate: f64,
    occupation_mean: f64,
    occupation_se: f64,
}

#[derive(Serialize)]
struct WalkRow {
    path_id: usize,
    site: i64,
    position: f64,
    crossings: usize,
    local_time: f64,
    occupation: f64,
}

fn walk(a: WalkArgs) -> AnyResult<Outcome> {
    let c = match a.cn {
        CnArg::Auto => {
            let g = a.gamma.ok_or_else(|| Error::InvalidParameter { name: "gamma", reason: "--cn auto needs --gamma".into() })?;
            LatticeConfig::auto_attenuation(a.k, g, a.n)?
        }
        CnArg::Value(v) => v,
    };
    let x0 = a.x0.unwrap_or((a.k as i64 + 1) / 2 + 1);
    let cfg = LatticeConfig::new(a.k, a.m, c, a.n, x0)?;
    if cfg.in_barrier(x0) {
        return Err(Box::new(Error::InvalidParameter {
            name: "x0",
            reason: format!("start site must lie outside the barrier |i| <= {}", cfg.half_width()),
        }));
    }
    positive("T", a.horizon)?;
    at_least_one("paths", a.paths)?;
    setup_threads(&a.common)?;
    let seed = resolve_seed(&a.common)?;
    eprintln!("simulating {} walks", a.paths);
    let rows = ensemble::try_run(seed, a.paths, |i, r| -> prbm_core::Result<WalkRow> {
        let p = simulate_walk(&cfg, a.horizon, r)?;
        let d = decompose(&p, &cfg)?;
        let site = *p.sites.last().expect("non-empty");
        Ok(WalkRow {
            path_id: i,
            site,
            position: cfg.position(site),
            crossings: d.crossings.len(),
            local_time: d.l.last(),
            occupation: occupation_until(&p, a.horizon),
        })
    })?;
    eprintln!("done");

    let gamma_limit = c * (a.n as f64).sqrt() / a.k as f64;
    let sigma = a.m.sqrt();
    let limit = PrbmParams::new(Permeability::new(gamma_limit)?, sigma)?;
    let start = SidedReal::from_real(cfg.position(x0))?;
    let ends: Vec<f64> = rows.iter().map(|r| r.position).collect();
    let (ks_statistic, ks_p_value) = if ends.len() >= 10 {
        let k = ks_statistic(&ends, |y| transition_cdf(&limit, a.horizon, start, y).unwrap_or(f64::NAN))?;
        (k.statistic, k.p_value)
    } else {
        (f64::NAN, f64::NAN)
    };
    let crossings: usize = rows.iter().map(|r| r.crossings).sum();
    let lt: Vec<f64> = rows.iter().map(|r| r.local_time).collect();
    let local_time = pairwise_sum(&lt);
    let occ: Vec<f64> = rows.iter().map(|r| r.occupation).collect();
    let (occupation_mean, occupation_se) = match MeanSe::of(&occ) {
        Ok(m) => (m.mean, m.se),
        Err(_) => (occ[0], f64::NAN),
    };
    let summary = WalkSummary {
        c_n: c,
        gamma_limit,
        sigma_limit: sigma,
        paths: rows.len(),
        ks_statistic,
        ks_p_value,
        crossings,
        local_time,
        crossing_rate: if local_time > 0.0 { crossings as f64 / local_time } else { f64::NAN },
        occupation_mean,
        occupation_se,
    };

    let mut sink = Sink::new(a.common.out_dir.clone())?;
    match a.common.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                summary: &'a WalkSummary,
                paths: &'a [WalkRow],
            }
            sink.write_json("walk.json", &Out { summary: &summary, paths: &rows })?;
        }
        Format::Csv => {
            let mut w = sink.open("walk.csv")?;
            writeln!(w, "path_id,site,position,crossings,local_time,occupation")?;
            for r in &rows {
                writeln!(w, "{},{},{},{},{},{}", r.path_id, r.site, num(r.position), r.crossings, num(r.local_time), num(r.occupation))?;
            }
            w.flush()?;
            drop(w);
            if sink.has_dir() {
                sink.write_json("walk_summary.json", &summary)?;
            } else {
                eprintln!("summary: {}", serde_json::to_string(&summary)?);
            }
        }
    }
    sink.finish("walk", Some(seed), a.common.threads, &a)?;
    Ok(Outcome::Success)
}

fn verify(a: VerifyArgs) -> AnyResult<Outcome> {
    setup_threads(&a.common)?;
    let seed = resolve_seed(&a.common)?;
    let start = std::time::Instant::now();
    let mut last = std::time::Instant::now();
    let mut current: Option<String> = None;
    let report = run_suite(a.suite, seed, &mut |msg| {
        if msg.starts_with("criterion ") {
            if let Some(c) = current.take() {
                eprintln!("{c} finished in {:.1}s", last.elapsed().as_secs_f64());
            }
            current = msg.split(':').next().map(str::to_string);
            last = std::time::Instant::now();
        }
        eprintln!("{msg}");
    })?;
    if let Some(c) = current.take() {
        eprintln!("{c} finished in {:.1}s", last.elapsed().as_secs_f64());
    }
    eprintln!("suite finished in {:.1}s", start.elapsed().as_secs_f64());
    for &c in a.suite.criteria() {
        eprintln!(
            "criterion {c} ({}): {}",
            criterion_title(c),
            if report.criterion_pass(c) { "pass" } else { "FAIL" }
        );
    }
    let mut sink = Sink::new(a.common.out_dir.clone())?;
    sink.write_json("verdicts.json", &report)?;
    sink.finish("verify", Some(seed), a.common.threads, &a)?;
    Ok(if report.pass { Outcome::Success } else { Outcome::ChecksFailed })
}

/// Reads `x, side, p` rows and interpolates them linearly onto the grid, side by side.
fn initial_from_file(path: &PathBuf, grid: &PdeGrid) -> AnyResult<prbm_core::kernel::HalfLineGrid> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let mut plus: Vec<(f64, f64)> = Vec::new();
    let mut minus: Vec<(f64, f64)> = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        if rec.len() < 3 {
            return Err(format!("{}: expected columns x, side, p", path.display()).into());
        }
        let x: f64 = rec[0].parse()?;
        let p: f64 = rec[2].parse()?;
        if !(x.is_finite() && p.is_finite()) {
            return Err(format!("{}: non-finite value", path.display()).into());
        }
        match &rec[1] {
            "+" => plus.push((x.abs(), p)),
            "-" => minus.push((x.abs(), p)),
            s => return Err(format!("{}: side must be + or -, got {s:?}", path.display()).into()),
        }
    }
    if plus.is_empty() || minus.is_empty() {
        return Err(format!("{}: need rows on both sides", path.display()).into());
    }
    for v in [&mut plus, &mut minus] {
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    let interp = |v: &[(f64, f64)], x: f64| -> f64 {
        let k = v.partition_point(|q| q.0 <= x);
        if k == 0 {
            return v[0].1;
        }
        if k == v.len() {
            return v[k - 1].1;
        }
        let (x0, y0) = v[k - 1];
        let (x1, y1) = v[k];
        if x1 == x0 {
            y1
        } else {
            y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        }
    };
    Ok(grid.sample(|x, is_plus| if is_plus { interp(&plus, x.abs()) } else { interp(&minus, x.abs()) })?)
}

fn pde(a: PdeArgs) -> AnyResult<Outcome> {
    positive("T", a.horizon)?;
    positive("sigma", a.sigma)?;
    positive("dx", a.dx)?;
    let scheme = match a.scheme {
        SchemeArg::Implicit => Scheme::Implicit,
        SchemeArg::Explicit => Scheme::Explicit,
    };
    let x_max = a.x_max.unwrap_or(10.0 * a.sigma * a.horizon.sqrt());
    positive("x_max", x_max)?;
    let x_max = (x_max / a.dx).ceil().max(4.0) * a.dx;
    let grid = PdeGrid::new(a.dx, x_max, a.dt, a.gamma, a.sigma, scheme)?;
    let p0 = match a.p0 {
        P0Kind::Step => InitialProfile::Step.on_grid(&grid)?,
        P0Kind::Gaussian => InitialProfile::Gaussian.on_grid(&grid)?,
        P0Kind::File => {
            let path = a.p0_file.as_ref().ok_or_else(|| Error::InvalidParameter {
                name: "p0_file",
                reason: "--p0 file needs --p0-file".into(),
            })?;
            initial_from_file(path, &grid)?
        }
    };
    setup_threads(&a.common)?;
    let sol = solve_transmission_heat(&grid, &p0, a.horizon)?;
    let v = &sol.values;
    let mut rows: Vec<(f64, &'static str, f64)> = Vec::with_capacity(2 * v.plus.len());
    for j in (0..v.minus.len()).rev() {
        rows.push((-(j as f64) * v.dx, "-", v.minus[j]));
    }
    for j in 0..v.plus.len() {
        rows.push((j as f64 * v.dx, "+", v.plus[j]));
    }
    let mut sink = Sink::new(a.common.out_dir.clone())?;
    match a.common.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                x: f64,
                side: &'static str,
                p: f64,
            }
            let out: Vec<Row> = rows.iter().map(|&(x, side, p)| Row { x: if x == 0.0 { 0.0 } else { x }, side, p }).collect();
            sink.write_json("pde.json", &out)?;
        }
        Format::Csv => {
            let mut w = sink.open("pde.csv")?;
            writeln!(w, "x,side,p")?;
            for (x, side, p) in &rows {
                writeln!(w, "{},{side},{}", num(*x), num(*p))?;
            }
            w.flush()?;
        }
    }
    sink.finish("pde", None, a.common.threads, &a)?;
    Ok(Outcome::Success)
}
