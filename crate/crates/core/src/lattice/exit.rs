//! Visits to the barrier: crossing probability and expected duration.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::walk::{LatticeConfig, WalkStepper};
use crate::error::{invalid, Error, Result};
use crate::paths::RngStream;

/// Probability that a visit to the barrier ends on the far side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometricParam {
    pub p: f64,
    /// `false` when only the small-`c_n` asymptotic `c_n / K` is returned.
    pub exact: bool,
}

/// `p_n = c_n / (2 (1 + c_n))` for `K = 2`; `c_n / K` (flagged) otherwise.
pub fn crossing_geometric_param(cfg: &LatticeConfig) -> GeometricParam {
    let c = cfg.c_n;
    if cfg.k == 2 {
        GeometricParam { p: c / (2.0 * (1.0 + c)), exact: true }
    } else {
        GeometricParam { p: c / cfg.k as f64, exact: false }
    }
}

fn rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Numerical(format!("{x} has no rational form")))
}

/// Gaussian elimination over the rationals. `a` is square.
fn solve_exact(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Result<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Numerical("singular barrier system".into()))?;
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            for c in col..n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
            let v = &f * &b[col];
            b[r] -= v;
        }
    }
    Ok((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Barrier sites in increasing order.
fn barrier_sites(cfg: &LatticeConfig) -> Vec<i64> {
    let h = cfg.half_width();
    (-h..=h).filter(|&s| cfg.contains(s)).collect()
}

/// Solves `sum_j q(i,j) (u_j - u_i) = -rhs_i` on barrier sites, with `u` given
/// by `outside` at the two exit sites.
fn barrier_system(
    cfg: &LatticeConfig,
    time_scale: &BigRational,
    rhs: &BigRational,
    outside: impl Fn(i64) -> BigRational,
) -> Result<(Vec<i64>, Vec<BigRational>)> {
    let sites = barrier_sites(cfg);
    let idx = |s: i64| sites.iter().position(|&x| x == s);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let m = rational(cfg.m)?;
    let c = rational(cfg.c_n)?;
    let slow = &c * &m * &half;
    let fast = &m * &half;
    let h = cfg.half_width();
    let n = sites.len();
    let mut a = vec![vec![BigRational::zero(); n]; n];
    let mut b = vec![rhs.clone(); n];
    for (row, &i) in sites.iter().enumerate() {
        for j in [cfg.left(i), cfg.right(i)] {
            let q = if i.abs().max(j.abs()) <= h { slow.clone() } else { fast.clone() } * time_scale;
            a[row][row] += &q;
            match idx(j) {
                Some(col) => a[row][col] -= &q,
                None => b[row] += &q * outside(j),
            }
        }
    }
    Ok((sites, solve_exact(a, b)?))
}

fn barrier_index(cfg: &LatticeConfig, site: i64) -> Result<()> {
    if !cfg.contains(site) || !cfg.in_barrier(site) {
        return Err(invalid(
            "site",
            format!("{site} is not a barrier site (|i| <= {})", cfg.half_width()),
        ));
    }
    Ok(())
}

/// Expected rescaled time to leave the barrier from `site`, solved exactly.
pub fn expected_exit_time(cfg: &LatticeConfig, site: i64) -> Result<f64> {
    barrier_index(cfg, site)?;
    let n = BigRational::from_integer(BigInt::from(cfg.n));
    let (sites, sol) = barrier_system(cfg, &n, &BigRational::one(), |_| BigRational::zero())?;
    let k = sites.iter().position(|&s| s == site).expect("checked above");
    sol[k].to_f64().ok_or_else(|| Error::Numerical("exit time out of range".into()))
}

/// Probability that a walk started at barrier site `site` leaves on the negative side.
pub fn exit_below_probability(cfg: &LatticeConfig, site: i64) -> Result<f64> {
    barrier_index(cfg, site)?;
    let (sites, sol) = barrier_system(cfg, &BigRational::one(), &BigRational::zero(), |j| {
        if j < 0 {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    })?;
    let k = sites.iter().position(|&s| s == site).expect("checked above");
    sol[k].to_f64().ok_or_else(|| Error::Numerical("probability out of range".into()))
}

/// Runs the walk from a barrier site until it leaves; returns `(exit site, rescaled duration)`.
pub fn simulate_exit(cfg: &LatticeConfig, site: i64, rng: &mut RngStream) -> Result<(i64, f64)> {
    barrier_index(cfg, site)?;
    let mut w = WalkStepper::new(cfg, site)?;
    loop {
        let (t, _, to) = w.step(rng);
        if !cfg.in_barrier(to) {
            return Ok((to, t));
        }
    }
}
