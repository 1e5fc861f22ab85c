//! Side changes and the local time spent between them.

use super::samplers::SidedPath;
use crate::error::{Error, Result};

/// Grid indices at which the path lands on the other side from the previous crossing.
pub fn crossing_indices(p: &SidedPath) -> Vec<usize> {
    let mut held = p.values[0].side();
    let mut out = Vec::new();
    for (k, x) in p.values.iter().enumerate().skip(1) {
        if x.side() != held {
            out.push(k);
            held = x.side();
        }
    }
    out
}

/// Times `T_1 < T_2 < ...` at which the path changes side.
pub fn crossing_times(p: &SidedPath) -> Vec<f64> {
    crossing_indices(p).into_iter().map(|k| p.times[k]).collect()
}

fn local_time(p: &SidedPath) -> Result<&[f64]> {
    p.local_time
        .as_deref()
        .ok_or_else(|| Error::Unsupported("path carries no local time".into()))
}

/// Completed increments `L(T_i) - L(T_{i-1})`, with `T_0 = 0`.
///
/// The increment still running at the end of the path is left out; it is
/// available from [`local_time_tail`].
pub fn local_time_increments(p: &SidedPath) -> Result<Vec<f64>> {
    let lt = local_time(p)?;
    let mut prev = lt[0];
    Ok(crossing_indices(p)
        .into_iter()
        .map(|k| {
            let e = lt[k] - prev;
            prev = lt[k];
            e
        })
        .collect())
}

/// Local time accumulated since the last crossing: a right-censored increment.
pub fn local_time_tail(p: &SidedPath) -> Result<f64> {
    let lt = local_time(p)?;
    let last = crossing_indices(p).last().map_or(lt[0], |&k| lt[k]);
    Ok(lt[lt.len() - 1] - last)
}
