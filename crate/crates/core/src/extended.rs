use std::fmt;

use serde::{Serialize, Serializer};

/// A nonnegative-infinity-aware real. Infinity is a distinguished variant so
/// certificates and divergences never saturate into a large float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    Infinite,
}

/// Value of a Petz divergence, possibly `+inf` off the domain.
pub type DivergenceValue = ExtReal;

/// Value of Hilbert's projective metric, `+inf` between inequivalent operators.
pub type ProjectiveDistance = ExtReal;

impl ExtReal {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::Infinite => None,
        }
    }

    /// Lossy view as `f64`, mapping the infinite variant to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::Finite(v) => v,
            ExtReal::Infinite => f64::INFINITY,
        }
    }

    /// Panics on `Infinite`; for tests and callers that already checked the domain.
    #[track_caller]
    pub fn unwrap(self) -> f64 {
        self.finite().expect("extended real is infinite")
    }
}

impl From<f64> for ExtReal {
    fn from(v: f64) -> Self {
        if v == f64::INFINITY {
            ExtReal::Infinite
        } else {
            ExtReal::Finite(v)
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.to_f64().partial_cmp(&other.to_f64())
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v:e}"),
            ExtReal::Infinite => f.write_str("inf"),
        }
    }
}

// JSON has no infinity; the infinite variant is written as `null`.
impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(v) => s.serialize_f64(*v),
            ExtReal::Infinite => s.serialize_none(),
        }
    }
}
