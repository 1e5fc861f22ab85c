//! The doubled real line: points, the metric, permeability and sample paths.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, require_finite, require_nonnegative, require_positive, Error, Result};

/// Which copy of the half line a point lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Side::Plus => "+",
            Side::Minus => "-",
        }
    }
}

/// A point of `(-inf, 0-] ∪ [0+, inf)`, stored as magnitude plus side.
///
/// Zero carries its side, so `0+` and `0-` are distinct points at distance 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SidedReal {
    magnitude: f64,
    side: Side,
}

impl SidedReal {
    pub const ZERO_PLUS: SidedReal = SidedReal {
        magnitude: 0.0,
        side: Side::Plus,
    };
    pub const ZERO_MINUS: SidedReal = SidedReal {
        magnitude: 0.0,
        side: Side::Minus,
    };

    pub fn new(magnitude: f64, side: Side) -> Result<Self> {
        require_nonnegative("magnitude", magnitude)?;
        Ok(SidedReal { magnitude, side })
    }

    /// Builds from a nonzero real; zero is ambiguous and maps to `0+`.
    pub fn from_real(x: f64) -> Result<Self> {
        require_finite("x", x)?;
        let side = if x < 0.0 { Side::Minus } else { Side::Plus };
        Ok(SidedReal {
            magnitude: x.abs(),
            side,
        })
    }

    /// Internal constructor for callers that already guarantee `magnitude >= 0`.
    pub(crate) fn raw(magnitude: f64, side: Side) -> Self {
        debug_assert!(magnitude >= 0.0);
        SidedReal { magnitude, side }
    }

    pub fn magnitude(self) -> f64 {
        self.magnitude
    }

    pub fn side(self) -> Side {
        self.side
    }

    /// The image in the ordinary real line.
    pub fn projection(self) -> f64 {
        self.side.sign() * self.magnitude
    }

    pub fn is_zero(self) -> bool {
        self.magnitude == 0.0
    }

    pub fn mirror(self) -> SidedReal {
        SidedReal {
            magnitude: self.magnitude,
            side: self.side.flip(),
        }
    }
}

impl fmt::Display for SidedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.magnitude == 0.0 {
            write!(f, "0{}", self.side.symbol())
        } else {
            write!(f, "{}", self.projection())
        }
    }
}

impl FromStr for SidedReal {
    type Err = Error;

    /// Accepts `0+`, `0-`, and any nonzero real such as `1.5` or `-2`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let err = || Error::Parse { input: s.to_string() };
        if let Some(body) = t.strip_suffix('+').or_else(|| t.strip_suffix('\u{207a}')) {
            let v: f64 = body.parse().map_err(|_| err())?;
            return if v == 0.0 { Ok(Self::ZERO_PLUS) } else { Err(err()) };
        }
        if let Some(body) = t
            .strip_suffix('-')
            .or_else(|| t.strip_suffix('\u{207b}'))
            .or_else(|| t.strip_suffix('\u{2212}'))
        {
            let v: f64 = body.parse().map_err(|_| err())?;
            return if v == 0.0 { Ok(Self::ZERO_MINUS) } else { Err(err()) };
        }
        let v: f64 = t.parse().map_err(|_| err())?;
        if !v.is_finite() || v == 0.0 {
            return Err(err());
        }
        SidedReal::from_real(v)
    }
}

// Serialized as `[projection, "+" | "-"]`.
impl Serialize for SidedReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut tup = serializer.serialize_tuple(2)?;
        tup.serialize_element(&self.projection())?;
        tup.serialize_element(self.side.symbol())?;
        tup.end()
    }
}

impl<'de> Deserialize<'de> for SidedReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = SidedReal;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a [value, side] pair")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<SidedReal, A::Error> {
                let v: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let s: String = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &self))?;
                let side = match s.as_str() {
                    "+" => Side::Plus,
                    "-" | "\u{2212}" => Side::Minus,
                    other => return Err(de::Error::custom(format!("bad side `{other}`"))),
                };
                if v != 0.0 && (v > 0.0) != (side == Side::Plus) {
                    return Err(de::Error::custom("value sign disagrees with side"));
                }
                SidedReal::new(v.abs(), side).map_err(de::Error::custom)
            }
        }
        deserializer.deserialize_tuple(2, V)
    }
}

/// Metric of the doubled line: `|x - y| + 1` when the points sit on different sides.
pub fn dotted_distance(a: SidedReal, b: SidedReal) -> f64 {
    let gap = (a.projection() - b.projection()).abs();
    if a.side == b.side {
        gap
    } else {
        gap + 1.0
    }
}

/// Permeability of the membrane at the origin, `gamma ∈ [0, inf]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Permeability {
    /// `gamma = 0` is total reflection; large values approach free passage.
    Finite(f64),
    /// Free Brownian motion on the projected line.
    Infinite,
}

impl Permeability {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma == f64::INFINITY {
            return Ok(Permeability::Infinite);
        }
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(invalid("gamma", format!("must lie in [0, inf], got {gamma}")));
        }
        Ok(Permeability::Finite(gamma))
    }

    pub fn value(self) -> f64 {
        match self {
            Permeability::Finite(g) => g,
            Permeability::Infinite => f64::INFINITY,
        }
    }

    /// `Some(gamma)` when strictly between 0 and infinity.
    pub fn interior(self) -> Option<f64> {
        match self {
            Permeability::Finite(g) if g > 0.0 => Some(g),
            _ => None,
        }
    }
}

impl fmt::Display for Permeability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Permeability::Finite(g) => write!(f, "{g}"),
            Permeability::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Permeability {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "Inf" | "INF" => Ok(Permeability::Infinite),
            t => {
                let g: f64 = t.parse().map_err(|_| Error::Parse { input: s.to_string() })?;
                Permeability::new(g)
            }
        }
    }
}

impl Serialize for Permeability {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Permeability::Finite(g) => serializer.serialize_f64(*g),
            Permeability::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Permeability {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(g) => Permeability::new(g).map_err(de::Error::custom),
            Raw::Str(s) => s.parse().map_err(de::Error::custom),
        }
    }
}

/// Permeability and diffusion coefficient of the process.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrbmParams {
    pub gamma: Permeability,
    pub sigma: f64,
}

impl PrbmParams {
    pub fn new(gamma: Permeability, sigma: f64) -> Result<Self> {
        require_positive("sigma", sigma)?;
        Ok(PrbmParams { gamma, sigma })
    }

    /// Unit diffusion coefficient.
    pub fn standard(gamma: f64) -> Result<Self> {
        Self::new(Permeability::new(gamma)?, 1.0)
    }
}

fn interior_gamma(gamma: f64) -> Result<f64> {
    if gamma.is_finite() && gamma > 0.0 {
        Ok(gamma)
    } else {
        Err(invalid("gamma", format!("must lie in (0, inf), got {gamma}")))
    }
}

/// Scale map `r`: collapses `[-1/(2 gamma), 1/(2 gamma)]` onto the doubled origin.
pub fn scale_r(x: f64, gamma: f64) -> Result<SidedReal> {
    let g = interior_gamma(gamma)?;
    require_finite("x", x)?;
    let a = 0.5 / g;
    Ok(if x > a {
        SidedReal::raw(x - a, Side::Plus)
    } else if x >= 0.0 {
        SidedReal::ZERO_PLUS
    } else if x >= -a {
        SidedReal::ZERO_MINUS
    } else {
        SidedReal::raw(-x - a, Side::Minus)
    })
}

/// Right inverse of [`scale_r`]: pushes the point away from the origin by `1/(2 gamma)`.
pub fn scale_r_inv(x: SidedReal, gamma: f64) -> Result<f64> {
    let g = interior_gamma(gamma)?;
    Ok(x.side.sign() * (x.magnitude + 0.5 / g))
}

/// A real-valued path on a time grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl Path {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_grid(&times)?;
        if values.len() != times.len() {
            return Err(Error::Mismatch(format!(
                "{} times but {} values",
                times.len(),
                values.len()
            )));
        }
        Ok(Path { times, values })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> f64 {
        *self.values.last().expect("paths are never empty")
    }

    /// Right-continuous step interpolation.
    pub fn value_at(&self, t: f64) -> f64 {
        let idx = self.times.partition_point(|&s| s <= t);
        self.values[idx.saturating_sub(1)]
    }
}

/// Grids must start at 0 and increase strictly.
pub(crate) fn check_grid(times: &[f64]) -> Result<()> {
    match times.first() {
        None => return Err(invalid("times", "empty grid")),
        Some(&t0) if t0 != 0.0 => return Err(invalid("times", "grid must start at 0")),
        _ => {}
    }
    if times.windows(2).any(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
        return Err(invalid("times", "grid must be strictly increasing and finite"));
    }
    Ok(())
}

/// Uniform grid `0, dt, ..., T`, shortening the last step when `T/dt` is not whole.
pub fn uniform_grid(dt: f64, horizon: f64) -> Result<Vec<f64>> {
    require_positive("dt", dt)?;
    require_positive("T", horizon)?;
    let n = (horizon / dt - 1e-9).ceil().max(1.0) as usize;
    let mut times: Vec<f64> = (0..=n).map(|k| k as f64 * dt).collect();
    times[n] = horizon;
    Ok(times)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> SidedReal {
        s.parse().unwrap()
    }

    #[test]
    fn distance_examples() {
        assert_eq!(dotted_distance(p("0+"), p("0-")), 1.0);
        assert_eq!(dotted_distance(p("0+"), p("0+")), 0.0);
        assert_eq!(dotted_distance(p("1"), p("-2")), 4.0);
        assert_eq!(dotted_distance(p("0+"), p("3")), 3.0);
        assert_eq!(dotted_distance(p("0-"), p("3")), 4.0);
    }

    #[test]
    fn scale_map_examples() {
        assert_eq!(scale_r(0.3, 1.0).unwrap(), SidedReal::ZERO_PLUS);
        assert_eq!(scale_r(-0.3, 1.0).unwrap(), SidedReal::ZERO_MINUS);
        assert_eq!(scale_r(1.0, 1.0).unwrap().projection(), 0.5);
        assert_eq!(scale_r(-1.0, 1.0).unwrap().projection(), -0.5);
        assert_eq!(scale_r(0.0, 1.0).unwrap(), SidedReal::ZERO_PLUS);
        assert!(scale_r(1.0, 0.0).is_err());
        assert!(scale_r(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn parse_and_display() {
        for s in ["0+", "0-", "1.5", "-2"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("0\u{2212}"), SidedReal::ZERO_MINUS);
        assert!("abc".parse::<SidedReal>().is_err());
        assert!("1+".parse::<SidedReal>().is_err());
        assert!("0".parse::<SidedReal>().is_err());
        assert!("nan".parse::<SidedReal>().is_err());
    }

    #[test]
    fn serde_pairs() {
        let j = serde_json::to_string(&p("0-")).unwrap();
        assert_eq!(j, "[-0.0,\"-\"]");
        let back: SidedReal = serde_json::from_str(&j).unwrap();
        assert_eq!(back, SidedReal::ZERO_MINUS);
        let back: SidedReal = serde_json::from_str("[1.5,\"+\"]").unwrap();
        assert_eq!(back, p("1.5"));
        assert!(serde_json::from_str::<SidedReal>("[1.5,\"-\"]").is_err());
    }

    #[test]
    fn permeability_parsing() {
        assert_eq!("inf".parse::<Permeability>().unwrap(), Permeability::Infinite);
        assert_eq!(Permeability::new(f64::INFINITY).unwrap(), Permeability::Infinite);
        assert!(Permeability::new(-1.0).is_err());
        assert!(Permeability::new(f64::NAN).is_err());
        assert_eq!(Permeability::Finite(0.0).interior(), None);
    }

    #[test]
    fn grid_shortens_last_step() {
        let g = uniform_grid(0.3, 1.0).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(*g.last().unwrap(), 1.0);
        let g = uniform_grid(0.25, 1.0).unwrap();
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn path_rejects_bad_grids() {
        assert!(Path::new(vec![0.0, 1.0], vec![0.0]).is_err());
        assert!(Path::new(vec![0.1, 1.0], vec![0.0, 1.0]).is_err());
        assert!(Path::new(vec![0.0, 0.0], vec![0.0, 1.0]).is_err());
    }
}
