//! The five-valued flow semi-ring.
//!
//! Coefficients grade how the value of one variable depends on another:
//! `0` (no dependency), `m` (maximum), `w` (weak polynomial), `p`
//! (polynomial) and `∞` (non-polynomial). Addition is `max`; multiplication
//! is `max` on non-zero arguments, `0` when a finite argument is zero, and
//! `∞` as soon as one argument is `∞`. On the `∞`-free fragment this is the
//! plain mwp semi-ring.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A flow grade. The derived order is the semi-ring order `0 < m < w < p < ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Coeff {
    #[default]
    Zero,
    M,
    W,
    P,
    Inf,
}

impl Coeff {
    /// Every coefficient, in increasing order.
    pub const ALL: [Coeff; 5] = [Coeff::Zero, Coeff::M, Coeff::W, Coeff::P, Coeff::Inf];

    /// The `∞`-free carrier.
    pub const FINITE: [Coeff; 4] = [Coeff::Zero, Coeff::M, Coeff::W, Coeff::P];

    #[inline]
    pub fn add(self, other: Coeff) -> Coeff {
        self.max(other)
    }

    #[inline]
    pub fn mul(self, other: Coeff) -> Coeff {
        if self == Coeff::Inf || other == Coeff::Inf {
            Coeff::Inf
        } else if self == Coeff::Zero || other == Coeff::Zero {
            Coeff::Zero
        } else {
            self.max(other)
        }
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self == Coeff::Zero
    }

    #[inline]
    pub fn is_inf(self) -> bool {
        self == Coeff::Inf
    }

    /// Single-character rendering used by the pretty-printers and JSON.
    pub fn symbol(self) -> &'static str {
        match self {
            Coeff::Zero => "0",
            Coeff::M => "m",
            Coeff::W => "w",
            Coeff::P => "p",
            Coeff::Inf => "i",
        }
    }
}

/// Addition of two coefficients (`max`).
pub fn coeff_add(a: Coeff, b: Coeff) -> Coeff {
    a.add(b)
}

/// Multiplication of two coefficients; `∞` absorbs everything, including `0`.
pub fn coeff_mul(a: Coeff, b: Coeff) -> Coeff {
    a.mul(b)
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown coefficient `{0}` (expected one of 0, m, w, p, i)")]
pub struct ParseCoeffError(pub String);

impl FromStr for Coeff {
    type Err = ParseCoeffError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "0" => Ok(Coeff::Zero),
            "m" => Ok(Coeff::M),
            "w" => Ok(Coeff::W),
            "p" => Ok(Coeff::P),
            "i" | "∞" | "inf" => Ok(Coeff::Inf),
            other => Err(ParseCoeffError(other.to_string())),
        }
    }
}

impl Serialize for Coeff {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.symbol())
    }
}

impl<'de> Deserialize<'de> for Coeff {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
