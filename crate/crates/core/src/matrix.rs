use serde_json::Value;

use crate::error::{Error, Result};
use crate::point::ZPoint;
use crate::scalar::Scalar;

/// The real 2×2 matrix `[[a, b], [c, d]]` acting on ℂ ≅ ℝ².
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Scalar> Mat2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(
            T::from_i64(a),
            T::from_i64(b),
            T::from_i64(c),
            T::from_i64(d),
        )
    }

    pub fn identity() -> Self {
        Mat2::from_ints(1, 0, 0, 1)
    }

    /// Rotation with the given cosine and sine (caller guarantees c² + s² = 1).
    pub fn rotation(cos: T, sin: T) -> Self {
        Mat2::new(cos.clone(), -sin.clone(), sin, cos)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(u: &ZPoint<T>, v: &ZPoint<T>) -> Self {
        Mat2::new(u.re.clone(), v.re.clone(), u.im.clone(), v.im.clone())
    }

    pub fn det(&self) -> T {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn trace(&self) -> T {
        self.a.clone() + self.d.clone()
    }

    pub fn apply(&self, z: &ZPoint<T>) -> ZPoint<T> {
        ZPoint::new(
            self.a.clone() * z.re.clone() + self.b.clone() * z.im.clone(),
            self.c.clone() * z.re.clone() + self.d.clone() * z.im.clone(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        Mat2::new(
            self.a.clone() * o.a.clone() + self.b.clone() * o.c.clone(),
            self.a.clone() * o.b.clone() + self.b.clone() * o.d.clone(),
            self.c.clone() * o.a.clone() + self.d.clone() * o.c.clone(),
            self.c.clone() * o.b.clone() + self.d.clone() * o.d.clone(),
        )
    }

    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        Some(Mat2::new(
            self.d.clone() / det.clone(),
            -self.b.clone() / det.clone(),
            -self.c.clone() / det.clone(),
            self.a.clone() / det,
        ))
    }

    pub fn entries(&self) -> [&T; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Sum of squared entries, the trace of AᵀA.
    pub fn frobenius2(&self) -> T {
        self.entries()
            .iter()
            .fold(T::zero(), |acc, e| acc + (*e).clone() * (*e).clone())
    }

    /// Largest and smallest singular values in closed form.
    pub fn singular_values(&self) -> (f64, f64) {
        let t = self.frobenius2().to_f64();
        let d = self.det().to_f64().abs();
        let disc = (t * t - 4.0 * d * d).max(0.0).sqrt();
        let smax = ((t + disc) / 2.0).sqrt();
        let smin = if smax > 0.0 { d / smax } else { 0.0 };
        (smax, smin)
    }

    pub fn sigma_max(&self) -> f64 {
        self.singular_values().0
    }

    pub fn max_abs_entry(&self) -> T {
        self.entries()
            .iter()
            .map(|e| e.abs())
            .fold(T::zero(), |acc, e| if e > acc { e } else { acc })
    }

    pub fn entries_within(&self, bound: &T) -> bool {
        self.entries().iter().all(|e| e.abs() <= *bound)
    }

    pub fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        if T::EXACT {
            self == other
        } else {
            self.entries()
                .iter()
                .zip(other.entries())
                .all(|(x, y)| (x.to_f64() - y.to_f64()).abs() <= eps)
        }
    }

    /// True when every entry is an integer (always false for floats unless
    /// each entry rounds to itself).
    pub fn is_integral(&self) -> bool {
        self.entries().iter().all(|e| match e.as_rational() {
            Some(q) => q.is_integer(),
            None => e.to_f64().fract() == 0.0,
        })
    }

    /// Row-major JSON `[[a, b], [c, d]]`.
    pub fn to_json(&self) -> Value {
        Value::Array(vec![
            Value::Array(vec![self.a.to_json(), self.b.to_json()]),
            Value::Array(vec![self.c.to_json(), self.d.to_json()]),
        ])
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Parse(format!("expected [[a,b],[c,d]], found {v}"));
        let rows = v.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
        let row = |i: usize| -> Result<(T, T)> {
            let r = rows[i]
                .as_array()
                .filter(|r| r.len() == 2)
                .ok_or_else(bad)?;
            Ok((T::from_json(&r[0])?, T::from_json(&r[1])?))
        };
        let (a, b) = row(0)?;
        let (c, d) = row(1)?;
        Ok(Mat2::new(a, b, c, d))
    }

    /// Parses `a,b,c,d` (row-major).
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("matrix needs 4 entries: {s:?}")));
        }
        Ok(Mat2::new(
            T::parse(parts[0])?,
            T::parse(parts[1])?,
            T::parse(parts[2])?,
            T::parse(parts[3])?,
        ))
    }
}

pub const CONTRACTION_TOL: f64 = 1e-12;

/// A matrix is contracting when `‖A·z‖ < ‖z‖` for every nonzero `z`,
/// i.e. its largest singular value is below one.
///
/// Decided without square roots: `I − AᵀA` is positive definite iff
/// `tr(AᵀA) < 2` and `1 − tr(AᵀA) + det(A)² > 0`. Exact for rationals;
/// floats compare the closed-form singular value against `1 − CONTRACTION_TOL`
/// so that isometries are never flagged by rounding.
pub fn is_contracting<T: Scalar>(m: &Mat2<T>) -> Result<bool> {
    let det = m.det();
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    if !T::EXACT {
        return Ok(m.sigma_max() < 1.0 - CONTRACTION_TOL);
    }
    let t = m.frobenius2();
    let two = T::from_i64(2);
    Ok(t < two && t < T::one() + det.clone() * det)
}
