use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

/// Significant digits kept for real-valued invariants.
pub const REAL_DIGITS: usize = 12;

/// Real values closer to zero than this are reported as exactly zero.
const ZERO_SNAP: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum InvariantValue {
    Bool(bool),
    Integer(BigInt),
    Real(f64),
}

impl InvariantValue {
    pub fn int(v: impl Into<BigInt>) -> Self {
        InvariantValue::Integer(v.into())
    }

    /// Rounds to [`REAL_DIGITS`] significant digits so that the stored,
    /// displayed and compared values coincide.
    pub fn real(x: f64) -> Self {
        InvariantValue::Real(round_significant(x))
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            InvariantValue::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_integer(&self) -> Option<&BigInt> {
        match self {
            InvariantValue::Integer(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.as_integer().and_then(|v| i64::try_from(v).ok())
    }

    /// Numeric view; integers beyond `f64` precision round.
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            InvariantValue::Bool(_) => None,
            InvariantValue::Integer(v) => v.to_string().parse().ok(),
            InvariantValue::Real(x) => Some(*x),
        }
    }
}

fn round_significant(x: f64) -> f64 {
    if !x.is_finite() || x.abs() < ZERO_SNAP {
        return if x.is_finite() { 0.0 } else { x };
    }
    let s = format!("{:.*e}", REAL_DIGITS - 1, x);
    let r: f64 = s.parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

impl fmt::Display for InvariantValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantValue::Bool(b) => write!(f, "{b}"),
            InvariantValue::Integer(v) => write!(f, "{v}"),
            InvariantValue::Real(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {0:?} as an invariant value")]
pub struct ParseValueError(pub String);

impl FromStr for InvariantValue {
    type Err = ParseValueError;

    /// Parses the textual form written by `Display`: `true`/`false`, a
    /// decimal integer, or a decimal real (containing `.`, `e` or `E`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "true" => return Ok(InvariantValue::Bool(true)),
            "false" => return Ok(InvariantValue::Bool(false)),
            _ => {}
        }
        if let Ok(v) = s.parse::<BigInt>() {
            return Ok(InvariantValue::Integer(v));
        }
        s.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(InvariantValue::real)
            .ok_or_else(|| ParseValueError(s.to_string()))
    }
}

impl Serialize for InvariantValue {
    /// Booleans and reals map to JSON scalars; integers become JSON numbers
    /// when they fit in 64 bits and decimal strings otherwise.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            InvariantValue::Bool(b) => serializer.serialize_bool(*b),
            InvariantValue::Integer(v) => match i64::try_from(v) {
                Ok(small) => serializer.serialize_i64(small),
                Err(_) => serializer.serialize_str(&v.to_string()),
            },
            InvariantValue::Real(x) => serializer.serialize_f64(*x),
        }
    }
}
