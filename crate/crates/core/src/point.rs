use std::cmp::Ordering;
use std::collections::HashMap;
use std::f64::consts::TAU;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;

use crate::scalar::Scalar;

/// A complex number `re + i·im`, the term type of a zero sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ZPoint<T> {
    pub re: T,
    pub im: T,
}

impl<T: Scalar> ZPoint<T> {
    pub fn new(re: T, im: T) -> Self {
        ZPoint { re, im }
    }

    pub fn zero() -> Self {
        ZPoint::new(T::zero(), T::zero())
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        ZPoint::new(T::from_i64(re), T::from_i64(im))
    }

    /// Converts a float point; exact for rationals. `None` on non-finite input.
    pub fn from_f64(re: f64, im: f64) -> Option<Self> {
        Some(ZPoint::new(T::from_f64(re)?, T::from_f64(im)?))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn scale(&self, k: &T) -> Self {
        ZPoint::new(self.re.clone() * k.clone(), self.im.clone() * k.clone())
    }

    /// Complex product.
    pub fn mul(&self, other: &Self) -> Self {
        let (a, b, c, d) = (&self.re, &self.im, &other.re, &other.im);
        ZPoint::new(
            a.clone() * c.clone() - b.clone() * d.clone(),
            a.clone() * d.clone() + b.clone() * c.clone(),
        )
    }

    /// Complex quotient, `None` when dividing by zero.
    pub fn div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        let n = other.norm2();
        let (a, b, c, d) = (&self.re, &self.im, &other.re, &other.im);
        Some(ZPoint::new(
            (a.clone() * c.clone() + b.clone() * d.clone()) / n.clone(),
            (b.clone() * c.clone() - a.clone() * d.clone()) / n,
        ))
    }

    pub fn recip(&self) -> Option<Self> {
        ZPoint::new(T::one(), T::zero()).div(self)
    }

    pub fn conj(&self) -> Self {
        ZPoint::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm2(&self) -> T {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn norm(&self) -> f64 {
        self.to_complex().norm()
    }

    pub fn dot(&self, other: &Self) -> T {
        self.re.clone() * other.re.clone() + self.im.clone() * other.im.clone()
    }

    /// z-component of the planar cross product `self × other`.
    pub fn cross(&self, other: &Self) -> T {
        self.re.clone() * other.im.clone() - self.im.clone() * other.re.clone()
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// Argument in `[0, 2π)`; zero maps to 0.
    pub fn arg(&self) -> f64 {
        let a = self.im.to_f64().atan2(self.re.to_f64());
        if a < 0.0 {
            (a + TAU) % TAU
        } else {
            a
        }
    }

    /// True when the argument lies in `[0, π)`.
    pub fn in_upper_half(&self) -> bool {
        let zero = T::zero();
        self.im > zero || (self.im.is_zero() && self.re > zero)
    }

    /// Representative of `±self` with argument in `[0, π)`.
    pub fn upper_representative(&self) -> Self {
        if self.in_upper_half() {
            self.clone()
        } else {
            -self.clone()
        }
    }

    /// Equality: exact for rationals, within `eps` in Euclidean distance for floats.
    pub fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        if T::EXACT {
            self == other
        } else {
            (self.to_complex() - other.to_complex()).norm() <= eps
        }
    }
}

/// Exact comparison of arguments in `[0, 2π)`. Zero sorts first.
pub fn cmp_arg<T: Scalar>(a: &ZPoint<T>, b: &ZPoint<T>) -> Ordering {
    if T::EXACT {
        match (a.is_zero(), b.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let (ha, hb) = (!a.in_upper_half(), !b.in_upper_half());
        if ha != hb {
            return ha.cmp(&hb);
        }
        let c = a.cross(b);
        if c.is_zero() {
            Ordering::Equal
        } else if c > T::zero() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    } else {
        a.arg().total_cmp(&b.arg())
    }
}

impl<T: Scalar> Add for ZPoint<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        ZPoint::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<T: Scalar> Sub for ZPoint<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        ZPoint::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<T: Scalar> Add for &ZPoint<T> {
    type Output = ZPoint<T>;
    fn add(self, rhs: Self) -> ZPoint<T> {
        ZPoint::new(
            self.re.clone() + rhs.re.clone(),
            self.im.clone() + rhs.im.clone(),
        )
    }
}

impl<T: Scalar> Sub for &ZPoint<T> {
    type Output = ZPoint<T>;
    fn sub(self, rhs: Self) -> ZPoint<T> {
        ZPoint::new(
            self.re.clone() - rhs.re.clone(),
            self.im.clone() - rhs.im.clone(),
        )
    }
}

impl<T: Scalar> Neg for ZPoint<T> {
    type Output = Self;
    fn neg(self) -> Self {
        ZPoint::new(-self.re, -self.im)
    }
}

/// Point set with membership queries that are exact for rationals and
/// eps-tolerant for floats. Buckets by a coarse float grid, then compares
/// candidates with [`ZPoint::approx_eq`].
#[derive(Clone, Debug)]
pub struct PointSet<T> {
    points: Vec<ZPoint<T>>,
    buckets: HashMap<(i64, i64), Vec<usize>>,
    cell: f64,
    eps: f64,
}

impl<T: Scalar> PointSet<T> {
    pub fn new(eps: f64) -> Self {
        PointSet {
            points: Vec::new(),
            buckets: HashMap::new(),
            cell: (4.0 * eps).max(1e-6),
            eps,
        }
    }

    pub fn from_points<'a, I: IntoIterator<Item = &'a ZPoint<T>>>(points: I, eps: f64) -> Self {
        let mut set = PointSet::new(eps);
        for p in points {
            set.insert(p.clone());
        }
        set
    }

    fn key(&self, p: &ZPoint<T>) -> (i64, i64) {
        let c = p.to_complex();
        (
            (c.re / self.cell).floor() as i64,
            (c.im / self.cell).floor() as i64,
        )
    }

    /// Index of a stored point equal to `p`, if any.
    pub fn find(&self, p: &ZPoint<T>) -> Option<usize> {
        let (kx, ky) = self.key(p);
        if T::EXACT {
            return self
                .buckets
                .get(&(kx, ky))
                .and_then(|ids| ids.iter().copied().find(|&i| self.points[i] == *p));
        }
        let mut best: Option<(usize, f64)> = None;
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(ids) = self.buckets.get(&(kx + dx, ky + dy)) else {
                    continue;
                };
                for &i in ids {
                    let d = (self.points[i].to_complex() - p.to_complex()).norm();
                    if d <= self.eps && !matches!(best, Some((_, bd)) if d >= bd) {
                        best = Some((i, d));
                    }
                }
            }
        }
        best.map(|(i, _)| i)
    }

    pub fn contains(&self, p: &ZPoint<T>) -> bool {
        self.find(p).is_some()
    }

    /// Inserts `p` unless an equal point exists. Returns the index and
    /// whether the point was new.
    pub fn insert(&mut self, p: ZPoint<T>) -> (usize, bool) {
        if let Some(i) = self.find(&p) {
            return (i, false);
        }
        let key = self.key(&p);
        let idx = self.points.len();
        self.points.push(p);
        self.buckets.entry(key).or_default().push(idx);
        (idx, true)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ZPoint<T>] {
        &self.points
    }

    pub fn into_points(self) -> Vec<ZPoint<T>> {
        self.points
    }
}
