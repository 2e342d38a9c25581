//! The convex-combination weight `alpha` of the A_alpha matrix.
//!
//! Alpha is carried as a float together with an optional exact rational
//! `p/q`. Equality cases such as `alpha = 1/k` are decided on the rational
//! when one was supplied, and only fall back to a float comparison otherwise.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::AlphaError;

/// Float tolerance used to recognise `alpha == 1/k` when no exact rational
/// is available.
pub const RECIPROCAL_FLOAT_TOL: f64 = 1e-12;

/// A reduced fraction `num/den` with `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Option<Self> {
        if den == 0 {
            return None;
        }
        let g = gcd(num, den);
        Some(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alpha {
    value: f64,
    exact: Option<Ratio>,
}

/// Outcome of asking whether alpha equals `1/k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReciprocalMatch {
    pub matches: bool,
    /// False when the answer came from a float comparison.
    pub exact: bool,
}

impl Alpha {
    pub fn new(value: f64) -> Result<Self, AlphaError> {
        if !(0.0..=1.0).contains(&value) {
            return Err(AlphaError::OutOfRange(value));
        }
        Ok(Self { value, exact: None })
    }

    pub fn rational(num: u64, den: u64) -> Result<Self, AlphaError> {
        let ratio =
            Ratio::new(num, den).ok_or_else(|| AlphaError::Unparsable(format!("{num}/{den}")))?;
        if ratio.num > ratio.den {
            return Err(AlphaError::OutOfRange(ratio.to_f64()));
        }
        Ok(Self {
            value: ratio.to_f64(),
            exact: Some(ratio),
        })
    }

    pub fn zero() -> Self {
        Self {
            value: 0.0,
            exact: Ratio::new(0, 1),
        }
    }

    pub fn one() -> Self {
        Self {
            value: 1.0,
            exact: Ratio::new(1, 1),
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn exact(&self) -> Option<Ratio> {
        self.exact
    }

    pub fn is_zero(&self) -> bool {
        match self.exact {
            Some(r) => r.num == 0,
            None => self.value == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self.exact {
            Some(r) => r.num == r.den,
            None => self.value == 1.0,
        }
    }

    /// Rejects `alpha = 1` for results stated on `[0, 1)`.
    pub fn require_below_one(&self) -> Result<(), AlphaError> {
        if self.is_one() {
            Err(AlphaError::AlphaOne)
        } else {
            Ok(())
        }
    }

    /// `alpha / (1 - alpha)` as a reduced fraction, when alpha is exact and
    /// below one.
    pub fn odds(&self) -> Option<Ratio> {
        let r = self.exact?;
        if r.num >= r.den {
            return None;
        }
        Ratio::new(r.num, r.den - r.num)
    }

    pub fn equals_reciprocal(&self, k: u64) -> ReciprocalMatch {
        if k == 0 {
            return ReciprocalMatch {
                matches: false,
                exact: true,
            };
        }
        match self.exact {
            Some(r) => ReciprocalMatch {
                matches: r.num == 1 && r.den == k,
                exact: true,
            },
            None => ReciprocalMatch {
                matches: (self.value - 1.0 / k as f64).abs() <= RECIPROCAL_FLOAT_TOL,
                exact: false,
            },
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "{}", self.value),
        }
    }
}

impl FromStr for Alpha {
    type Err = AlphaError;

    /// Accepts a decimal (`0.25`) or an exact fraction (`1/4`); the
    /// integers `0` and `1` are exact.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || AlphaError::Unparsable(s.to_string());
        if let Some((p, q)) = s.split_once('/') {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let q: u64 = q.trim().parse().map_err(|_| bad())?;
            return Alpha::rational(p, q);
        }
        if let Ok(k) = s.parse::<u64>() {
            return Alpha::rational(k, 1);
        }
        let value: f64 = s.parse().map_err(|_| bad())?;
        if !value.is_finite() {
            return Err(bad());
        }
        Alpha::new(value)
    }
}

impl Serialize for Alpha {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.value)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}
