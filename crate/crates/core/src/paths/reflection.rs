//! Deterministic reflection maps on sampled paths.

use crate::error::{invalid, Error, Result};
use crate::line::Path;

/// One-sided Skorokhod map at 0: returns `(f + l, l)` with `l_t = sup_{s<=t} (-f_s)^+`.
pub fn skorokhod_map(f: &Path) -> Result<(Path, Path)> {
    let f0 = f.values[0];
    if !(f0 >= 0.0) {
        return Err(invalid("f", format!("must start at f(0) >= 0, got {f0}")));
    }
    let mut reg = Vec::with_capacity(f.len());
    let mut l: f64 = 0.0;
    for &v in &f.values {
        if !v.is_finite() {
            return Err(Error::Numerical("path contains non-finite values".into()));
        }
        l = l.max(-v);
        reg.push(l);
    }
    let x = f.values.iter().zip(&reg).map(|(v, l)| v + l).collect();
    Ok((
        Path { times: f.times.clone(), values: x },
        Path { times: f.times.clone(), values: reg },
    ))
}

/// Reflection into `[a, b]` (`b` may be `+inf`). Returns `(x, l, u)` with
/// `x = f + l - u`, `l` increasing only when `x = a`, `u` only when `x = b`.
///
/// On a grid this is the projected recursion `x_k = clamp(x_{k-1} + Δf_k)`.
pub fn two_sided_regulator(f: &Path, a: f64, b: f64) -> Result<(Path, Path, Path)> {
    if !a.is_finite() || b.is_nan() || !(a < b) {
        return Err(invalid("interval", format!("need finite a < b, got [{a}, {b}]")));
    }
    let f0 = f.values[0];
    if !(a <= f0 && f0 <= b) {
        return Err(invalid("f", format!("f(0) = {f0} outside [{a}, {b}]")));
    }
    let n = f.len();
    let (mut xs, mut ls, mut us) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    let (mut x, mut l, mut u) = (f0, 0.0, 0.0);
    xs.push(x);
    ls.push(0.0);
    us.push(0.0);
    for w in f.values.windows(2) {
        let step = w[1] - w[0];
        if !step.is_finite() {
            return Err(Error::Numerical("path contains non-finite values".into()));
        }
        x += step;
        if x < a {
            l += a - x;
            x = a;
        } else if x > b {
            u += x - b;
            x = b;
        }
        xs.push(x);
        ls.push(l);
        us.push(u);
    }
    let t = &f.times;
    Ok((
        Path { times: t.clone(), values: xs },
        Path { times: t.clone(), values: ls },
        Path { times: t.clone(), values: us },
    ))
}
