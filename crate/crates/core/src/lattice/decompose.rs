//! Excursion decomposition of a rescaled walk path around the barrier.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::walk::{LatticeConfig, WalkPath};
use crate::error::{invalid, Error, Result};
use crate::line::Path;

/// Processes on the event grid of a walk path.
///
/// With `h` the barrier half width and `s = 1/sqrt(n)`: a visit starts when the
/// walk enters `[-h, h]` and ends when it leaves. `m` integrates `d|X|` over
/// jumps made from outside the barrier, `l` counts exits times `s`, `v` is
/// `sup ((h+1) s - m)^+`, `nu` is the time spent inside the barrier.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub m: Path,
    pub l: Path,
    pub v: Path,
    pub nu: Path,
    /// `|X|` outside the barrier, 0 inside.
    pub x_tilde: Path,
    pub in_visit: Vec<bool>,
    /// Event indices at which the path lands on the opposite side beyond the barrier.
    pub crossings: Vec<usize>,
}

impl Decomposition {
    /// Exit-count increments between successive side crossings.
    pub fn local_time_increments(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.crossings
            .iter()
            .map(|&k| {
                let e = self.l.values[k] - prev;
                prev = self.l.values[k];
                e
            })
            .collect()
    }

    /// Exit count accumulated since the last crossing.
    pub fn local_time_tail(&self) -> f64 {
        let last = self.crossings.last().map_or(0.0, |&k| self.l.values[k]);
        self.l.last() - last
    }
}

pub fn decompose(p: &WalkPath, cfg: &LatticeConfig) -> Result<Decomposition> {
    if p.config != *cfg {
        return Err(Error::Mismatch("path was generated with a different configuration".into()));
    }
    let h = cfg.half_width();
    if p.sites[0].abs() <= h {
        return Err(invalid("x0", format!("start site must lie outside the barrier |i| <= {h}")));
    }
    let s = cfg.scale();
    let top = (h + 1) as f64 * s;
    let n = p.times.len();
    let mut m = Vec::with_capacity(n);
    let mut l = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    let mut nu = Vec::with_capacity(n);
    let mut xt = Vec::with_capacity(n);
    let mut inside = Vec::with_capacity(n);
    let mut crossings = Vec::new();

    let (mut mk, mut lk, mut vk, mut nuk) = (p.sites[0].abs() as f64 * s, 0.0, 0.0, 0.0);
    let mut held = p.sites[0].signum();
    for k in 0..n {
        let site = p.sites[k];
        if k > 0 {
            let prev = p.sites[k - 1];
            if prev.abs() > h {
                mk += (site.abs() - prev.abs()) as f64 * s;
            } else {
                nuk += p.times[k] - p.times[k - 1];
                if site.abs() > h {
                    lk += s;
                }
            }
            if site.abs() > h && site.signum() != held {
                held = site.signum();
                crossings.push(k);
            }
        }
        vk = f64::max(vk, top - mk);
        m.push(mk);
        l.push(lk);
        v.push(vk);
        nu.push(nuk);
        inside.push(site.abs() <= h);
        xt.push(if site.abs() > h { site.abs() as f64 * s } else { 0.0 });
    }
    let grid = |values: Vec<f64>| Path { times: p.times.clone(), values };
    Ok(Decomposition {
        m: grid(m),
        l: grid(l),
        v: grid(v),
        nu: grid(nu),
        x_tilde: grid(xt),
        in_visit: inside,
        crossings,
    })
}

/// Occupation time of the barrier up to `horizon`, including the final holding interval.
pub fn occupation_until(p: &WalkPath, horizon: f64) -> f64 {
    let h = p.config.half_width();
    let mut total = 0.0;
    for k in 0..p.times.len() {
        let start = p.times[k];
        if start >= horizon {
            break;
        }
        let end = p.times.get(k + 1).copied().unwrap_or(horizon).min(horizon);
        if p.sites[k].abs() <= h {
            total += end - start;
        }
    }
    total
}

/// `sup_{|s-t| < delta} |f(t) - f(s)|` for a right-continuous step function with
/// values `vals` on `[times[k], times[k+1])`.
pub fn modulus_of_continuity(times: &[f64], vals: &[f64], delta: f64) -> f64 {
    // Pieces i < j can hold points closer than delta iff times[j] - times[i+1] < delta.
    let n = times.len();
    let mut best: f64 = 0.0;
    let mut maxq: VecDeque<usize> = VecDeque::new();
    let mut minq: VecDeque<usize> = VecDeque::new();
    let mut lo = 0usize;
    for j in 0..n {
        while lo < j && lo + 1 < n && times[j] - times[lo + 1] >= delta {
            lo += 1;
        }
        while maxq.back().is_some_and(|&i| vals[i] <= vals[j]) {
            maxq.pop_back();
        }
        maxq.push_back(j);
        while minq.back().is_some_and(|&i| vals[i] >= vals[j]) {
            minq.pop_back();
        }
        minq.push_back(j);
        while maxq.front().is_some_and(|&i| i < lo) {
            maxq.pop_front();
        }
        while minq.front().is_some_and(|&i| i < lo) {
            minq.pop_front();
        }
        let hi = vals[*maxq.front().expect("holds j")];
        let low = vals[*minq.front().expect("holds j")];
        best = best.max(hi - low);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn walk(sites: &[i64]) -> (WalkPath, LatticeConfig) {
        let cfg = LatticeConfig::new(2, 1.0, 0.5, 4, sites[0]).unwrap();
        let times = (0..sites.len()).map(|k| k as f64).collect();
        (WalkPath { config: cfg, horizon: sites.len() as f64, times, sites: sites.to_vec() }, cfg)
    }

    #[test]
    fn one_full_crossing() {
        // 2 -> 1 (enter) -> 0 -> -1 -> -2 (exit on the other side) -> -3
        let (p, cfg) = walk(&[2, 1, 0, -1, -2, -3]);
        let d = decompose(&p, &cfg).unwrap();
        let s = 0.5;
        assert_eq!(d.m.values, vec![2.0 * s, s, s, s, s, 2.0 * s]);
        assert_eq!(d.l.values, vec![0.0, 0.0, 0.0, 0.0, s, s]);
        assert_eq!(d.v.values, vec![0.0, s, s, s, s, s]);
        assert_eq!(d.nu.values, vec![0.0, 0.0, 1.0, 2.0, 3.0, 3.0]);
        assert_eq!(d.crossings, vec![4]);
        assert_eq!(d.local_time_increments(), vec![s]);
    }

    #[test]
    fn start_inside_rejected() {
        let (p, cfg) = walk(&[1, 2]);
        assert!(decompose(&p, &cfg).is_err());
        let (p, _) = walk(&[3, 2]);
        let other = LatticeConfig::new(2, 1.0, 0.25, 4, 3).unwrap();
        assert!(decompose(&p, &other).is_err());
    }

    #[test]
    fn modulus_brute_force() {
        let t = [0.0, 0.3, 0.5, 1.2, 1.4, 2.0];
        let v: [f64; 6] = [0.0, 1.0, -1.0, 2.0, 0.5, 3.0];
        for &delta in &[0.1, 0.25, 0.5, 0.8, 1.0, 3.0] {
            let mut want: f64 = 0.0;
            for i in 0..t.len() {
                for j in i..t.len() {
                    let close = j == i || j == i + 1 || t[j] - t[i + 1] < delta;
                    if close {
                        want = want.max((v[j] - v[i]).abs());
                    }
                }
            }
            assert_eq!(modulus_of_continuity(&t, &v, delta), want, "delta={delta}");
        }
    }

    #[test]
    fn occupation_counts_final_interval() {
        let (p, _) = walk(&[2, 1]);
        assert_eq!(occupation_until(&p, 1.5), 0.5);
    }
}
