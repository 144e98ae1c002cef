//! Numeric backends shared by every vector computation.
//!
//! Two implementations exist: [`Rational`] (arbitrary precision, canonical
//! for anything that certifies majorization or optimality) and `f64` (bound
//! sweeps and plotting). Comparisons that may flip under rounding take an
//! explicit tolerance, which is zero in exact mode.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Default absolute slack on float prefix sums and normalization.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    const EXACT: bool;

    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn from_usize(n: usize) -> Self {
        Self::from_ratio(n as i64, 1)
    }

    fn abs_val(&self) -> Self;

    fn to_f64(&self) -> f64;

    /// Zero in exact mode, [`FLOAT_TOLERANCE`] in float mode.
    fn default_tolerance() -> Self;

    fn is_finite_value(&self) -> bool;

    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Result<Self>;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn default_tolerance() -> Self {
        Self::zero()
    }

    fn is_finite_value(&self) -> bool {
        true
    }

    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) if n.is_i64() => Ok(BigRational::from_integer(BigInt::from(n.as_i64().unwrap()))),
            other => Err(Error::Parse(format!("expected \"p/q\" string, got {other}"))),
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn default_tolerance() -> Self {
        FLOAT_TOLERANCE
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self).map(Value::Number).unwrap_or(Value::Null)
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}"))),
            Value::String(s) => Ok(rational_to_f64(&parse_rational(s)?)),
            other => Err(Error::Parse(format!("expected number, got {other}"))),
        }
    }
}

/// Parses `"p/q"` or `"p"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let r = BigRational::from_str(s.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    Ok(r)
}

/// Correctly handles numerators and denominators far beyond `f64` range.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Shift both down to ~60 significant bits, keeping track of the exponent.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift_n = (nb - 60).max(0);
    let shift_d = (db - 60).max(0);
    let n = (r.numer() >> shift_n as usize).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift_d as usize).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((shift_n - shift_d) as i32)
}

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::from_ratio(numer, denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huge_rational_converts() {
        let big = num_traits::pow(BigInt::from(10), 400);
        let r = BigRational::new(BigInt::from(3) * &big + 1, BigInt::from(4) * big);
        assert!(r.denom().bits() > 1000);
        assert!((rational_to_f64(&r) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("6/8").unwrap(), rational(3, 4));
        assert_eq!(parse_rational("2").unwrap(), rational(2, 1));
        assert!(parse_rational("x").is_err());
        assert_eq!(rational(3, 4).to_string(), "3/4");
    }
}
