//! Transition kernel, its distribution function and exact sampling.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::special::{erfcx, heat_kernel, norm_cdf, norm_sf};
use crate::error::{invalid, require_nonnegative, require_positive, Result};
use crate::line::{Permeability, PrbmParams, Side, SidedReal};

/// `B_t(a) = 2 gamma ∫_0^inf exp(-2 gamma l) G_t(a + l) dl` for `a >= 0`.
///
/// Evaluated as `gamma exp(-a^2/2t) erfcx((a + 2 gamma t)/sqrt(2t))`, which stays
/// finite for every admissible input.
pub fn barrier_integral(a: f64, gamma: f64, t: f64) -> Result<f64> {
    require_nonnegative("a", a)?;
    require_positive("t", t)?;
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(invalid("gamma", format!("must lie in (0, inf), got {gamma}")));
    }
    Ok(barrier(a, gamma, t))
}

#[inline]
pub(crate) fn barrier(a: f64, gamma: f64, t: f64) -> f64 {
    let s = (2.0 * t).sqrt();
    gamma * (-a * a / (2.0 * t)).exp() * erfcx((a + 2.0 * gamma * t) / s)
}

/// `B_t(a) / (2 gamma)`, also defined at `gamma = 0`.
#[inline]
fn half_barrier_over_gamma(a: f64, gamma: f64, t: f64) -> f64 {
    let s = (2.0 * t).sqrt();
    0.5 * (-a * a / (2.0 * t)).exp() * erfcx((a + 2.0 * gamma * t) / s)
}

fn check_time(t: f64) -> Result<f64> {
    require_positive("t", t)
}

/// Transition density `g_t(x, y)` with respect to Lebesgue measure on both half lines.
pub fn transition_density(params: &PrbmParams, t: f64, x: SidedReal, y: SidedReal) -> Result<f64> {
    check_time(t)?;
    let te = params.sigma * params.sigma * t;
    let (u, v) = (x.magnitude(), y.magnitude());
    let same = x.side() == y.side();
    Ok(match params.gamma {
        Permeability::Infinite => heat_kernel(te, x.projection() - y.projection()),
        Permeability::Finite(g) if g == 0.0 => {
            if same {
                heat_kernel(te, u - v) + heat_kernel(te, u + v)
            } else {
                0.0
            }
        }
        Permeability::Finite(g) => {
            let b = barrier(u + v, g, te);
            if same {
                heat_kernel(te, u - v) + heat_kernel(te, u + v) - b
            } else {
                b
            }
        }
    })
}

/// A single density evaluation request.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DensityQuery {
    pub params: PrbmParams,
    pub t: f64,
    pub x: SidedReal,
    pub y: SidedReal,
}

impl DensityQuery {
    pub fn evaluate(&self) -> Result<f64> {
        transition_density(&self.params, self.t, self.x, self.y)
    }
}

/// Upper tails of the law of `X_t` started from magnitude `u`, split by side.
struct Tails {
    te: f64,
    u: f64,
    gamma: f64,
}

impl Tails {
    /// `P(same side, |X_t| >= v)`.
    fn same(&self, v: f64) -> f64 {
        let st = self.te.sqrt();
        norm_sf((v - self.u) / st) + half_barrier_over_gamma(self.u + v, self.gamma, self.te)
    }

    /// `P(opposite side, |X_t| >= v)`.
    fn opposite(&self, v: f64) -> f64 {
        let a = self.u + v;
        let s = (2.0 * self.te).sqrt();
        let d = erfcx(a / s) - erfcx((a + 2.0 * self.gamma * self.te) / s);
        0.5 * (-a * a / (2.0 * self.te)).exp() * d.max(0.0)
    }

    fn ln_opposite(&self, v: f64) -> f64 {
        let a = self.u + v;
        let s = (2.0 * self.te).sqrt();
        let d = erfcx(a / s) - erfcx((a + 2.0 * self.gamma * self.te) / s);
        -a * a / (2.0 * self.te) + (0.5 * d).ln()
    }
}

/// Probability that `X_t` is on the opposite side from its start.
pub fn crossing_probability(params: &PrbmParams, t: f64, x: SidedReal) -> Result<f64> {
    check_time(t)?;
    let te = params.sigma * params.sigma * t;
    Ok(match params.gamma {
        Permeability::Infinite => norm_sf(x.magnitude() / te.sqrt()),
        Permeability::Finite(g) => {
            if g == 0.0 {
                0.0
            } else {
                Tails { te, u: x.magnitude(), gamma: g }.opposite(0.0)
            }
        }
    })
}

/// `P(pi(X_t) <= y | X_0 = x)` for a real threshold `y`.
pub fn transition_cdf(params: &PrbmParams, t: f64, x: SidedReal, y: f64) -> Result<f64> {
    check_time(t)?;
    if y.is_nan() {
        return Err(invalid("y", "NaN"));
    }
    let te = params.sigma * params.sigma * t;
    let g = match params.gamma {
        Permeability::Infinite => return Ok(norm_cdf((y - x.projection()) / te.sqrt())),
        Permeability::Finite(g) => g,
    };
    let tails = Tails { te, u: x.magnitude(), gamma: g };
    let opp = |v: f64| if g == 0.0 { 0.0 } else { tails.opposite(v) };
    // Work in coordinates where the start sits on the plus side.
    let z = x.side().sign() * y;
    let upper = if z >= 0.0 {
        1.0 - tails.same(z)
    } else {
        opp(-z)
    };
    Ok(match x.side() {
        Side::Plus => upper,
        // Mirror: P(pi X <= y) = P(pi X' >= -y) = 1 - P(pi X' < -y).
        Side::Minus => {
            if z > 0.0 {
                tails.same(z)
            } else {
                1.0 - opp(-z)
            }
        }
    }
    .clamp(0.0, 1.0))
}

/// `P_x(X reaches 0- before y)` for `0 < x < y`.
pub fn hitting_prob(x: f64, y: f64, gamma: f64) -> Result<f64> {
    require_positive("x", x)?;
    require_positive("y", y)?;
    if x >= y {
        return Err(invalid("x", format!("need 0 < x < y, got x={x}, y={y}")));
    }
    if gamma.is_nan() || gamma < 0.0 {
        return Err(invalid("gamma", format!("must lie in [0, inf], got {gamma}")));
    }
    if gamma == 0.0 {
        return Ok(0.0);
    }
    Ok((y - x) / (y + 1.0 / gamma))
}

/// Draws `X_t` given `X_0 = x` exactly, by inverting the kernel's distribution function.
pub fn sample_transition<R: Rng + ?Sized>(
    params: &PrbmParams,
    t: f64,
    x: SidedReal,
    rng: &mut R,
) -> Result<SidedReal> {
    check_time(t)?;
    let te = params.sigma * params.sigma * t;
    let st = te.sqrt();
    let u = x.magnitude();
    let g = match params.gamma {
        Permeability::Infinite => {
            let z: f64 = rng.sample(StandardNormal);
            let y = x.projection() + st * z;
            let side = if y < 0.0 { Side::Minus } else { Side::Plus };
            return Ok(SidedReal::raw(y.abs(), side));
        }
        Permeability::Finite(g) if g == 0.0 => {
            let z: f64 = rng.sample(StandardNormal);
            return Ok(SidedReal::raw((u + st * z).abs(), x.side()));
        }
        Permeability::Finite(g) => g,
    };
    let tails = Tails { te, u, gamma: g };
    let p_opp = tails.opposite(0.0);
    let side_draw: f64 = rng.random();
    // In (0, 1].
    let w: f64 = 1.0 - rng.random::<f64>();
    let mut hi = u + 40.0 * st;
    let mut lo = 0.0;
    if side_draw < p_opp {
        let target = w.ln() + p_opp.ln();
        while tails.ln_opposite(hi) > target {
            hi *= 2.0;
        }
        while hi - lo > 1e-10 * (1.0 + hi) {
            let mid = 0.5 * (lo + hi);
            if tails.ln_opposite(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(SidedReal::raw(0.5 * (lo + hi), x.side().flip()))
    } else {
        let target = w * tails.same(0.0);
        while tails.same(hi) > target {
            hi *= 2.0;
        }
        while hi - lo > 1e-10 * (1.0 + hi) {
            let mid = 0.5 * (lo + hi);
            if tails.same(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(SidedReal::raw(0.5 * (lo + hi), x.side()))
    }
}
