//! Exact rational competitive ratios.
//!
//! All per-run competitive ratios are `i64` rationals. The magnitudes in this
//! problem are tiny (costs are bounded by a few thousand dollars), so `i64`
//! numerators and denominators leave enormous headroom, and exact arithmetic
//! is what makes argmin tie-breaking reproducible.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed};
use serde::{Serialize, Serializer};

use crate::error::Error;

pub type Ratio = num_rational::Ratio<i64>;

/// A competitive ratio: either an exact rational or unbounded.
///
/// `Unbounded` covers two situations: the algorithm spends money while the
/// optimum is free (`ALG > 0 = OPT`), and renting forever against a sequence
/// on which the optimum stays bounded. It compares greater than every finite
/// ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompRatio {
    Finite(Ratio),
    Unbounded,
}

impl CompRatio {
    /// Ratio of an algorithm's cost to the optimum cost.
    ///
    /// `ALG = OPT = 0` counts as ratio 1; `ALG > 0 = OPT` is unbounded.
    pub fn of_costs(alg: i64, opt: i64) -> Self {
        debug_assert!(alg >= 0 && opt >= 0);
        if opt > 0 {
            CompRatio::Finite(Ratio::new(alg, opt))
        } else if alg == 0 {
            CompRatio::Finite(Ratio::one())
        } else {
            CompRatio::Unbounded
        }
    }

    pub fn finite(value: Ratio) -> Self {
        CompRatio::Finite(value)
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, CompRatio::Unbounded)
    }

    pub fn as_finite(&self) -> Option<Ratio> {
        match self {
            CompRatio::Finite(r) => Some(*r),
            CompRatio::Unbounded => None,
        }
    }
}

impl PartialOrd for CompRatio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CompRatio {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (CompRatio::Unbounded, CompRatio::Unbounded) => Ordering::Equal,
            (CompRatio::Unbounded, CompRatio::Finite(_)) => Ordering::Greater,
            (CompRatio::Finite(_), CompRatio::Unbounded) => Ordering::Less,
            (CompRatio::Finite(a), CompRatio::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for CompRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompRatio::Finite(r) => write!(f, "{}", r),
            CompRatio::Unbounded => write!(f, "inf"),
        }
    }
}

impl Serialize for CompRatio {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl From<Ratio> for CompRatio {
    fn from(value: Ratio) -> Self {
        CompRatio::Finite(value)
    }
}

/// Parses `"3"`, `"3/4"`, or a plain decimal such as `"0.25"` into an exact
/// rational.
pub fn parse_ratio(text: &str) -> Result<Ratio, Error> {
    let bad = || Error::BadRatio(text.to_string());
    let s = text.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num.trim().parse().map_err(|_| bad())?;
        let d: i64 = den.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int_part.trim_start().starts_with('-');
        let whole: i64 = if int_part.is_empty() || int_part == "-" {
            0
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let digits: i64 = frac_part.parse().map_err(|_| bad())?;
        let scale = 10i64.checked_pow(frac_part.len() as u32).ok_or_else(bad)?;
        let frac = Ratio::new(digits, scale);
        let whole = Ratio::from_integer(whole);
        return Ok(if negative { whole - frac } else { whole + frac });
    }
    let n: i64 = s.parse().map_err(|_| bad())?;
    Ok(Ratio::from_integer(n))
}

/// Serde adapter storing a [`Ratio`] as its `"num/den"` string form.
pub mod ratio_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{parse_ratio, Ratio};

    pub fn serialize<S: Serializer>(value: &Ratio, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(value)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Ratio, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_ratio(&text).map_err(serde::de::Error::custom)
    }
}

/// Ceiling of a rational as an integer.
pub fn ceil_to_int(value: Ratio) -> i64 {
    value.ceil().to_integer()
}

/// Floor of a rational as an integer.
pub fn floor_to_int(value: Ratio) -> i64 {
    value.floor().to_integer()
}

/// Checks that a tradeoff parameter lies in (0, 1].
pub fn validate_lambda(lambda: Ratio) -> Result<(), Error> {
    if lambda.is_positive() && lambda <= Ratio::one() {
        Ok(())
    } else {
        Err(Error::LambdaOutOfRange(lambda.to_string()))
    }
}
