//! Finite windows of zero sequences.
//!
//! A [`ZeroWindow`] is the truncation of a zero sequence to a closed ball,
//! sorted by norm and then by argument, and translated so that its first term
//! is `0`. The translation is recorded: the ball is centered at the image of
//! the raw origin, so `raw = point - translation`.

use std::cmp::Ordering;
use std::collections::HashSet;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::{is_contracting, Mat2};
use crate::point::{cmp_arg, PointSet, ZPoint};
use crate::scalar::{Rational, Scalar};

/// Default tolerance for float windows.
pub const DEFAULT_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode {
    Exact,
    Float { eps: f64 },
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float { .. } => "float",
        }
    }
}

/// Built-in sequence families plus group orbits and explicit lists.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSpec<T> {
    /// `1, 2, 3, …`
    PositiveIntegers,
    /// All of ℤ.
    AllIntegers,
    /// `4n+1, 4n+3` for `n ≥ 1` (`all_n = false`) or `n ∈ ℤ` (`all_n = true`).
    Odd4n13 {
        all_n: bool,
    },
    /// ℤ + iℤ.
    GaussianLattice,
    /// ℤ ∪ {−i}.
    IntegersPlusMinusI,
    /// The orbit `{A·k : A ∈ G, k ∈ seeds}` where `G` is generated by
    /// `generators`, truncated to words of length at most `max_word_length`.
    Orbit {
        seeds: Vec<ZPoint<T>>,
        generators: Vec<Mat2<T>>,
        max_word_length: usize,
    },
    Explicit(Vec<ZPoint<T>>),
}

impl<T: Scalar> GeneratorSpec<T> {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorSpec::PositiveIntegers => "positive-integers",
            GeneratorSpec::AllIntegers => "all-integers",
            GeneratorSpec::Odd4n13 { .. } => "odd-4n13",
            GeneratorSpec::GaussianLattice => "gaussian-lattice",
            GeneratorSpec::IntegersPlusMinusI => "integers-plus-minus-i",
            GeneratorSpec::Orbit { .. } => "orbit",
            GeneratorSpec::Explicit(_) => "explicit",
        }
    }
}

/// An immutable, canonically ordered truncation of a zero sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroWindow<T> {
    points: Vec<ZPoint<T>>,
    radius: f64,
    eps: f64,
    translation: ZPoint<T>,
    source: Option<GeneratorSpec<T>>,
}

impl<T: Scalar> ZeroWindow<T> {
    /// Sorts `points` canonically without translating them. The ball is
    /// centered at the origin.
    pub fn new(points: Vec<ZPoint<T>>, radius: f64, eps: f64) -> Result<Self> {
        check_radius(radius)?;
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidInput(format!("point {i} is not finite")));
        }
        let points = canonical_order(points, eps)?;
        Ok(ZeroWindow {
            points,
            radius,
            eps: effective_eps::<T>(eps),
            translation: ZPoint::zero(),
            source: None,
        })
    }

    /// Assembles a window exactly as given. Nothing is sorted or checked;
    /// run [`validate`] on the result.
    pub fn from_parts_unchecked(
        points: Vec<ZPoint<T>>,
        radius: f64,
        eps: f64,
        translation: ZPoint<T>,
    ) -> Self {
        ZeroWindow {
            points,
            radius,
            eps: effective_eps::<T>(eps),
            translation,
            source: None,
        }
    }

    pub fn points(&self) -> &[ZPoint<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Tolerance for float predicates; zero in exact mode.
    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn mode(&self) -> Mode {
        if T::EXACT {
            Mode::Exact
        } else {
            Mode::Float { eps: self.eps }
        }
    }

    /// Translation applied to the raw sequence; also the center of the ball.
    pub fn translation(&self) -> &ZPoint<T> {
        &self.translation
    }

    pub fn center(&self) -> &ZPoint<T> {
        &self.translation
    }

    pub fn source(&self) -> Option<&GeneratorSpec<T>> {
        self.source.as_ref()
    }

    pub fn raw_points(&self) -> impl Iterator<Item = ZPoint<T>> + '_ {
        self.points.iter().map(|p| p - &self.translation)
    }

    /// Index of the window point equal to `z` (eps-tolerant in float mode).
    pub fn index_of(&self, z: &ZPoint<T>) -> Option<usize> {
        self.points.iter().position(|p| p.approx_eq(z, self.eps))
    }

    pub fn point_set(&self) -> PointSet<T> {
        PointSet::from_points(&self.points, self.eps)
    }

    /// Indices of points in the closed ball `B(0, r)`.
    pub fn inner_indices(&self, r: f64) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| within(&self.points[i], r, self.eps))
            .collect()
    }

    /// True when `z` lies in the closed window ball.
    pub fn in_ball(&self, z: &ZPoint<T>) -> bool {
        within(&(z - &self.translation), self.radius, self.eps)
    }

    /// Shifts every point (and the ball) by `b`, keeping the stored order.
    pub fn translated(&self, b: &ZPoint<T>) -> Self {
        ZeroWindow {
            points: self.points.iter().map(|p| p + b).collect(),
            translation: &self.translation + b,
            ..self.clone()
        }
    }

    /// Applies a linear map to points and ball center, then re-sorts.
    /// `radius_factor` rescales the ball (use 1 for isometries).
    pub fn transformed(&self, m: &Mat2<T>, radius_factor: f64) -> Result<Self> {
        let points = canonical_order(self.points.iter().map(|p| m.apply(p)).collect(), self.eps)?;
        Ok(ZeroWindow {
            points,
            radius: self.radius * radius_factor,
            eps: self.eps,
            translation: m.apply(&self.translation),
            source: None,
        })
    }

    /// Re-sorts and translates so that the smallest term is `0`.
    ///
    /// The smallest term is taken in raw coordinates, so a window and any
    /// translate of it (points and ball moved together) canonicalize to the
    /// same point list.
    pub fn canonicalize(&self) -> Result<Self> {
        let sorted = canonical_order(self.raw_points().collect(), self.eps)?;
        let Some(first) = sorted.first().cloned() else {
            return Err(Error::EmptyWindow);
        };
        let shifted: Vec<_> = sorted.iter().map(|p| p - &first).collect();
        Ok(ZeroWindow {
            points: canonical_order(shifted, self.eps)?,
            radius: self.radius,
            eps: self.eps,
            translation: -first,
            source: self.source.clone(),
        })
    }

    pub fn is_canonical(&self) -> bool {
        validate(self).is_empty()
    }

    /// Reciprocals `1/z` of the nonzero terms.
    pub fn inverted(&self) -> Vec<ZPoint<T>> {
        self.points.iter().filter_map(|p| p.recip()).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "mode": self.mode().name(),
            "radius": self.radius,
            "translation": point_json(&self.translation),
            "points": self.points.iter().map(point_json).collect::<Vec<_>>(),
        })
    }

    /// Reads the window JSON format. The mode field must match `T`.
    pub fn from_json(v: &Value, eps: f64) -> Result<Self> {
        let mode = v
            .get("mode")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("missing \"mode\"".into()))?;
        let expected = if T::EXACT { "exact" } else { "float" };
        if mode != expected {
            return Err(Error::ModeMismatch);
        }
        let radius = v
            .get("radius")
            .and_then(Value::as_f64)
            .ok_or_else(|| Error::Parse("missing \"radius\"".into()))?;
        let translation = match v.get("translation") {
            Some(t) => point_from_json(t)?,
            None => ZPoint::zero(),
        };
        let points = v
            .get("points")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"points\"".into()))?
            .iter()
            .map(point_from_json)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_parts_unchecked(points, radius, eps, translation))
    }
}

/// A window in either arithmetic mode.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyWindow {
    Exact(ZeroWindow<Rational>),
    Float(ZeroWindow<f64>),
}

impl AnyWindow {
    pub fn from_json(v: &Value, eps: f64) -> Result<Self> {
        match v.get("mode").and_then(Value::as_str) {
            Some("exact") => Ok(AnyWindow::Exact(ZeroWindow::from_json(v, eps)?)),
            Some("float") => Ok(AnyWindow::Float(ZeroWindow::from_json(v, eps)?)),
            Some(other) => Err(Error::Parse(format!("unknown mode {other:?}"))),
            None => Err(Error::Parse("missing \"mode\"".into())),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyWindow::Exact(w) => w.to_json(),
            AnyWindow::Float(w) => w.to_json(),
        }
    }
}

pub fn point_json<T: Scalar>(p: &ZPoint<T>) -> Value {
    Value::Array(vec![p.re.to_json(), p.im.to_json()])
}

pub fn point_from_json<T: Scalar>(v: &Value) -> Result<ZPoint<T>> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok(ZPoint::new(T::from_json(re)?, T::from_json(im)?)),
        _ => Err(Error::Parse(format!("expected [re, im], found {v}"))),
    }
}

/// Parses `re,im` (each part a rational or decimal) or a bare real.
pub fn parse_point<T: Scalar>(s: &str) -> Result<ZPoint<T>> {
    match s.split_once(',') {
        Some((re, im)) => Ok(ZPoint::new(T::parse(re)?, T::parse(im)?)),
        None => Ok(ZPoint::new(T::parse(s)?, T::zero())),
    }
}

/// Parses `x0,y0;x1,y1;…`.
pub fn parse_point_list<T: Scalar>(s: &str) -> Result<Vec<ZPoint<T>>> {
    s.split(';')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(parse_point)
        .collect()
}

fn effective_eps<T: Scalar>(eps: f64) -> f64 {
    if T::EXACT {
        0.0
    } else {
        eps
    }
}

fn check_radius(radius: f64) -> Result<()> {
    if radius.is_finite() && radius > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "radius must be positive, got {radius}"
        )))
    }
}

/// `‖z‖ ≤ r`, exact for rationals.
pub(crate) fn within<T: Scalar>(z: &ZPoint<T>, r: f64, eps: f64) -> bool {
    if T::EXACT {
        match T::from_f64(r) {
            Some(r) => z.norm2() <= r.clone() * r,
            None => false,
        }
    } else {
        z.norm() <= r + eps
    }
}

/// Total order on exact points: norm, then argument.
fn cmp_exact<T: Scalar>(a: &ZPoint<T>, b: &ZPoint<T>) -> Ordering {
    a.norm2()
        .partial_cmp(&b.norm2())
        .unwrap_or(Ordering::Equal)
        .then_with(|| cmp_arg(a, b))
}

/// Sorts by norm ascending, ties broken by argument in `[0, 2π)`.
///
/// Float mode treats norms within `eps` of their neighbours as equal: points
/// are sorted by norm, chained into runs of near-equal norms, and each run is
/// sorted by argument.
pub fn canonical_order<T: Scalar>(points: Vec<ZPoint<T>>, eps: f64) -> Result<Vec<ZPoint<T>>> {
    if T::EXACT {
        let norms: Vec<T> = points.iter().map(ZPoint::norm2).collect();
        let mut idx: Vec<usize> = (0..points.len()).collect();
        idx.sort_by(|&i, &j| {
            norms[i]
                .partial_cmp(&norms[j])
                .unwrap_or(Ordering::Equal)
                .then_with(|| cmp_arg(&points[i], &points[j]))
        });
        if let Some(w) = idx.windows(2).find(|w| points[w[0]] == points[w[1]]) {
            return Err(Error::DuplicatePoint {
                first: w[0].min(w[1]),
                second: w[0].max(w[1]),
            });
        }
        let mut slots: Vec<Option<ZPoint<T>>> = points.into_iter().map(Some).collect();
        return Ok(idx.into_iter().map(|i| slots[i].take().unwrap()).collect());
    }

    let mut seen = PointSet::new(eps);
    for (i, p) in points.iter().enumerate() {
        let (j, fresh) = seen.insert(p.clone());
        if !fresh {
            return Err(Error::DuplicatePoint {
                first: j,
                second: i,
            });
        }
    }
    let mut keyed: Vec<(f64, f64, ZPoint<T>)> =
        points.into_iter().map(|p| (p.norm(), p.arg(), p)).collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut start = 0;
    for i in 1..=keyed.len() {
        if i == keyed.len() || keyed[i].0 - keyed[i - 1].0 > eps {
            keyed[start..i].sort_by(|a, b| a.1.total_cmp(&b.1));
            start = i;
        }
    }
    Ok(keyed.into_iter().map(|(_, _, p)| p).collect())
}

/// Strict successor test used by [`validate`].
fn precedes<T: Scalar>(a: &ZPoint<T>, b: &ZPoint<T>, eps: f64) -> bool {
    if T::EXACT {
        cmp_exact(a, b) == Ordering::Less
    } else {
        let (na, nb) = (a.norm(), b.norm());
        if (na - nb).abs() <= eps {
            a.arg() < b.arg()
        } else {
            na < nb
        }
    }
}

pub fn generate<T: Scalar>(
    spec: &GeneratorSpec<T>,
    radius: f64,
    eps: f64,
) -> Result<ZeroWindow<T>> {
    check_radius(radius)?;
    let eps = effective_eps::<T>(eps);
    let n = radius.floor() as i64;
    let real = |k: i64| ZPoint::<T>::from_ints(k, 0);
    let raw: Vec<ZPoint<T>> = match spec {
        GeneratorSpec::PositiveIntegers => (1..=n).map(real).collect(),
        GeneratorSpec::AllIntegers => (-n..=n).map(real).collect(),
        GeneratorSpec::Odd4n13 { all_n: false } => (5..=n).step_by(2).map(real).collect(),
        GeneratorSpec::Odd4n13 { all_n: true } => (-n..=n)
            .filter(|k| k.rem_euclid(2) == 1)
            .map(real)
            .collect(),
        GeneratorSpec::GaussianLattice => (-n..=n)
            .flat_map(|a| (-n..=n).map(move |b| ZPoint::from_ints(a, b)))
            .filter(|p| within(p, radius, eps))
            .collect(),
        GeneratorSpec::IntegersPlusMinusI => {
            let mut pts: Vec<_> = (-n..=n).map(real).collect();
            pts.push(ZPoint::from_ints(0, -1));
            pts
        }
        GeneratorSpec::Orbit {
            seeds,
            generators,
            max_word_length,
        } => orbit_points(seeds, generators, *max_word_length, radius, eps)?,
        GeneratorSpec::Explicit(list) => list.clone(),
    };
    let raw: Vec<_> = raw.into_iter().filter(|p| within(p, radius, eps)).collect();
    if raw.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let mut window = ZeroWindow::new(raw, radius, eps)?.canonicalize()?;
    window.source = Some(spec.clone());
    Ok(window)
}

/// Group words enumerated breadth-first, then applied to the seeds.
fn orbit_points<T: Scalar>(
    seeds: &[ZPoint<T>],
    generators: &[Mat2<T>],
    max_len: usize,
    radius: f64,
    eps: f64,
) -> Result<Vec<ZPoint<T>>> {
    let mut letters = Vec::with_capacity(2 * generators.len());
    for (index, g) in generators.iter().enumerate() {
        if is_contracting(g)? {
            return Err(Error::ContractingGenerator { index });
        }
        letters.push(g.clone());
        letters.push(g.inverse().ok_or(Error::SingularMatrix)?);
    }

    let mut words = vec![Mat2::<T>::identity()];
    let mut seen_exact: HashSet<Vec<String>> = HashSet::new();
    let key =
        |m: &Mat2<T>| -> Vec<String> { m.entries().iter().map(|e| format!("{e:?}")).collect() };
    if T::EXACT {
        seen_exact.insert(key(&words[0]));
    }
    let mut frontier = words.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in &letters {
                let m = l.mul(w);
                let fresh = if T::EXACT {
                    seen_exact.insert(key(&m))
                } else {
                    !words.iter().chain(&next).any(|x| x.approx_eq(&m, eps))
                };
                if fresh {
                    next.push(m);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }

    let mut set = PointSet::new(eps);
    for w in &words {
        for s in seeds {
            let p = w.apply(s);
            if within(&p, radius, eps) {
                set.insert(p);
            }
        }
    }
    Ok(set.into_points())
}

/// A broken window invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Empty,
    NonFinite { index: usize },
    DuplicatePoint { first: usize, second: usize },
    OrderingViolation { index: usize },
    OutsideRadius { index: usize },
    FirstNotZero,
}

impl Violation {
    pub fn code(&self) -> &'static str {
        match self {
            Violation::Empty => "empty_window",
            Violation::NonFinite { .. } => "non_finite",
            Violation::DuplicatePoint { .. } => "duplicate_point",
            Violation::OrderingViolation { .. } => "ordering_violation",
            Violation::OutsideRadius { .. } => "outside_radius",
            Violation::FirstNotZero => "first_not_zero",
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Violation::NonFinite { index }
            | Violation::OrderingViolation { index }
            | Violation::OutsideRadius { index } => json!({"code": self.code(), "index": index}),
            Violation::DuplicatePoint { first, second } => {
                json!({"code": self.code(), "first": first, "second": second})
            }
            _ => json!({"code": self.code()}),
        }
    }
}

/// Lists every invariant the window breaks; empty means valid and canonical.
pub fn validate<T: Scalar>(w: &ZeroWindow<T>) -> Vec<Violation> {
    let mut out = Vec::new();
    if w.is_empty() {
        out.push(Violation::Empty);
        return out;
    }
    let pts = w.points();
    for (index, p) in pts.iter().enumerate() {
        if !p.is_finite() {
            out.push(Violation::NonFinite { index });
        }
    }
    let mut set = PointSet::new(w.eps());
    for (i, p) in pts.iter().enumerate() {
        let (j, fresh) = set.insert(p.clone());
        if !fresh {
            out.push(Violation::DuplicatePoint {
                first: j,
                second: i,
            });
        }
    }
    for i in 0..pts.len().saturating_sub(1) {
        if !precedes(&pts[i], &pts[i + 1], w.eps()) && !pts[i].approx_eq(&pts[i + 1], w.eps()) {
            out.push(Violation::OrderingViolation { index: i + 1 });
        }
    }
    for (index, p) in pts.iter().enumerate() {
        if !w.in_ball(p) {
            out.push(Violation::OutsideRadius { index });
        }
    }
    if !pts[0].approx_eq(&ZPoint::zero(), w.eps()) {
        out.push(Violation::FirstNotZero);
    }
    out
}

/// Largest norm among the given terms (typically `1/z_k` coordinates).
pub fn sup_norm<T: Scalar>(points: &[ZPoint<T>]) -> Result<f64> {
    points
        .iter()
        .map(ZPoint::norm)
        .reduce(f64::max)
        .ok_or(Error::EmptyWindow)
}
