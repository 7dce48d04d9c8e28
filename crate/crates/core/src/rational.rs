//! Exact rational arithmetic used by every quantity in the crate.

use num_rational::Ratio;
use num_traits::{One, Zero};
use std::fmt;
use std::str::FromStr;

pub type Rational = Ratio<i128>;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(v as i128)
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(n as i128, d as i128)
}

pub fn half() -> Rational {
    Rational::new(1, 2)
}

pub fn is_integral(r: &Rational) -> bool {
    r.is_integer()
}

/// Formats a rational as `p/q` (always with a denominator).
pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational {:?}", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

/// Parses `p/q` or a bare integer `p`. Decimals are rejected.
pub fn parse(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = i128::from_str(n.trim()).map_err(|_| err())?;
            let d = i128::from_str(d.trim()).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n = i128::from_str(s).map_err(|_| err())?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// Approximate decimal rendering for human summaries only.
pub fn approx(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn sum<'a, I: IntoIterator<Item = &'a Rational>>(it: I) -> Rational {
    it.into_iter().fold(Rational::zero(), |acc, x| acc + x)
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn zero() -> Rational {
    Rational::zero()
}
