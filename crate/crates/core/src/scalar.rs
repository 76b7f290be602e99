//! Coordinate fields: exact rationals and double precision floats.
//!
//! Every geometric routine in the crate is generic over [`Scalar`]. The
//! rational implementation gives exact predicates; the float implementation
//! pairs with an explicit tolerance carried by the window.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True when arithmetic is exact and predicates ignore tolerances.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// Exact conversion for rationals; `None` for non-finite input.
    fn from_f64(v: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    fn is_zero(&self) -> bool;
    fn is_finite(&self) -> bool;
    fn abs(&self) -> Self;
    fn as_rational(&self) -> Option<&Rational>;
    /// Parses `p/q`, an integer, or a decimal (with optional exponent).
    fn parse(s: &str) -> Result<Self>;
    /// Rationals serialize as `"p/q"` strings, floats as JSON numbers.
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;

    /// Converts from an exact rational (rounding for floats).
    fn from_rational(q: &Rational) -> Self;

    fn frac(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Sign with a dead band of `tol` for floats; exact sign for rationals.
    fn sign_tol(&self, tol: f64) -> i8 {
        if Self::EXACT {
            if self.is_zero() {
                0
            } else if *self > Self::zero() {
                1
            } else {
                -1
            }
        } else {
            let x = self.to_f64();
            if x.abs() <= tol {
                0
            } else if x > 0.0 {
                1
            } else {
                -1
            }
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_f64(v: f64) -> Option<Self> {
        Rational::from_float(v)
    }
    fn to_f64(&self) -> f64 {
        match (self.numer().to_f64(), self.denom().to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => {
                // Scale both parts down before dividing to avoid inf/inf.
                let shift = self
                    .numer()
                    .bits()
                    .max(self.denom().bits())
                    .saturating_sub(900);
                let n = (self.numer() >> shift).to_f64().unwrap_or(0.0);
                let d = (self.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
                n / d
            }
        }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_finite(&self) -> bool {
        true
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn as_rational(&self) -> Option<&Rational> {
        Some(self)
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn parse(s: &str) -> Result<Self> {
        parse_rational(s)
    }
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => parse_rational(&n.to_string()),
            other => Err(Error::Parse(format!("expected rational, found {other}"))),
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn as_rational(&self) -> Option<&Rational> {
        None
    }
    fn from_rational(q: &Rational) -> Self {
        <Rational as Scalar>::to_f64(q)
    }
    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: f64 = n.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
            let d: f64 = d.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
            return Ok(n / d);
        }
        s.parse().map_err(|_| Error::Parse(s.to_string()))
    }
    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("bad number {n}"))),
            Value::String(s) => <f64 as Scalar>::parse(s),
            other => Err(Error::Parse(format!("expected number, found {other}"))),
        }
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let negative = int_part.starts_with('-');
    let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let mut value = Rational::from_integer(BigInt::from_str(&digits).map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if negative { -value } else { value })
}
