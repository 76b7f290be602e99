//! Saddle connections and holonomy vectors.
//!
//! A straight segment between two zeros lifts to saddle connections of
//! `S(f, m)` exactly when no other zero lies in its interior, and its
//! holonomy is the difference of the endpoints. Everything here is therefore
//! a visibility problem on the window points.
//!
//! Exact windows whose coordinates fit in machine integers after clearing
//! denominators use a primitive-direction hash: `z_l` is visible from `z_r`
//! iff it is the closest window point in the primitive direction of
//! `z_l − z_r`. Other windows fall back to per-pair blocking tests, with an
//! angular pre-filter in float mode.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::point::{cmp_arg, PointSet, ZPoint};
use crate::scalar::{Rational, Scalar};
use crate::zseq::{point_json, ZeroWindow};

/// A visible segment between two window zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SaddleSegment<T> {
    pub from_idx: usize,
    pub to_idx: usize,
    /// `z_to − z_from`, with argument in `[0, π)`.
    pub holonomy: ZPoint<T>,
    pub length: f64,
    pub direction: f64,
    /// Number of saddle connections of `S(f, m)` over this segment.
    pub multiplicity: u32,
    /// False when an endpoint is close enough to the window boundary that
    /// truncation could matter.
    pub certified: bool,
}

impl<T: Scalar> SaddleSegment<T> {
    pub fn to_json(&self) -> Value {
        json!({
            "from": self.from_idx,
            "to": self.to_idx,
            "holonomy": point_json(&self.holonomy),
            "length": self.length,
            "direction": self.direction,
            "multiplicity": self.multiplicity,
            "certified": self.certified,
        })
    }
}

/// Holonomy vectors of a window, closed under negation.
#[derive(Clone, Debug, PartialEq)]
pub struct HolonomySet<T> {
    vectors: Vec<ZPoint<T>>,
    certified: Vec<bool>,
    window_radius: f64,
    complete_radius: f64,
    eps: f64,
}

impl<T: Scalar> HolonomySet<T> {
    /// Builds a set from arbitrary vectors, all treated as certified. Zero is
    /// dropped and negatives are added.
    pub fn from_vectors(vectors: Vec<ZPoint<T>>, window_radius: f64, eps: f64) -> Self {
        let tagged = vectors.into_iter().map(|v| (v, true)).collect();
        Self::build(tagged, window_radius, eps)
    }

    fn build(tagged: Vec<(ZPoint<T>, bool)>, window_radius: f64, eps: f64) -> Self {
        let mut set = PointSet::new(eps);
        let mut flags: Vec<bool> = Vec::new();
        for (v, cert) in tagged {
            if v.approx_eq(&ZPoint::zero(), eps) {
                continue;
            }
            for w in [v.clone(), -v] {
                let (i, fresh) = set.insert(w);
                if fresh {
                    flags.push(cert);
                } else {
                    flags[i] |= cert;
                }
            }
        }
        let mut pairs: Vec<(ZPoint<T>, bool)> = set.into_points().into_iter().zip(flags).collect();
        sort_canonical(&mut pairs);
        Self::from_sorted(pairs, window_radius, eps)
    }

    /// Assumes `pairs` is unique, negation-closed and canonically sorted.
    fn from_sorted(pairs: Vec<(ZPoint<T>, bool)>, window_radius: f64, eps: f64) -> Self {
        let complete_radius = pairs
            .iter()
            .filter(|(_, c)| !c)
            .map(|(v, _)| v.norm())
            .fold(window_radius, f64::min);
        let (vectors, certified) = pairs.into_iter().unzip();
        HolonomySet {
            vectors,
            certified,
            window_radius,
            complete_radius,
            eps,
        }
    }

    /// Vectors in canonical order (norm, then argument).
    pub fn vectors(&self) -> &[ZPoint<T>] {
        &self.vectors
    }

    pub fn is_certified(&self, i: usize) -> bool {
        self.certified[i]
    }

    pub fn certified_vectors(&self) -> Vec<ZPoint<T>> {
        self.vectors
            .iter()
            .zip(&self.certified)
            .filter(|(_, c)| **c)
            .map(|(v, _)| v.clone())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn window_radius(&self) -> f64 {
        self.window_radius
    }

    /// Every vector of norm strictly below this radius is certified.
    pub fn complete_radius(&self) -> f64 {
        self.complete_radius
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn contains(&self, v: &ZPoint<T>) -> bool {
        self.vectors.iter().any(|w| w.approx_eq(v, self.eps))
    }

    pub fn point_set(&self) -> PointSet<T> {
        PointSet::from_points(&self.vectors, self.eps)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "window_radius": self.window_radius,
            "complete_radius": self.complete_radius,
            "vectors": self.vectors.iter().zip(&self.certified).map(|(v, c)| json!({
                "vector": point_json(v),
                "certified": c,
            })).collect::<Vec<_>>(),
        })
    }
}

fn sort_canonical<T: Scalar>(pairs: &mut Vec<(ZPoint<T>, bool)>) {
    if T::EXACT {
        let mut keyed: Vec<(T, (ZPoint<T>, bool))> =
            pairs.drain(..).map(|p| (p.0.norm2(), p)).collect();
        keyed.sort_by(|(na, (a, _)), (nb, (b, _))| {
            na.partial_cmp(nb)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| cmp_arg(a, b))
        });
        pairs.extend(keyed.into_iter().map(|(_, p)| p));
    } else {
        pairs.sort_by(|(a, _), (b, _)| {
            a.norm()
                .total_cmp(&b.norm())
                .then(a.arg().total_cmp(&b.arg()))
        });
    }
}

/// True when `p` lies in the open segment `(a, b)`.
///
/// Exact mode tests collinearity by the sign of a cross product and
/// betweenness by a dot product. Float mode requires `p` within `eps` of the
/// segment line with segment parameter in `(eps, 1 − eps)`.
pub fn blocks<T: Scalar>(a: &ZPoint<T>, b: &ZPoint<T>, p: &ZPoint<T>, eps: f64) -> bool {
    if T::EXACT {
        let d = b - a;
        let v = p - a;
        if !v.cross(&d).is_zero() {
            return false;
        }
        let t = v.dot(&d);
        t > T::zero() && t < d.norm2()
    } else {
        let (a, b, p) = (a.to_complex(), b.to_complex(), p.to_complex());
        blocks_f64((a.re, a.im), (b.re, b.im), (p.re, p.im), eps)
    }
}

fn blocks_f64(a: (f64, f64), b: (f64, f64), p: (f64, f64), eps: f64) -> bool {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let (vx, vy) = (p.0 - a.0, p.1 - a.1);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return false;
    }
    let t = (vx * dx + vy * dy) / len2;
    let dist = (dx * vy - dy * vx).abs() / len2.sqrt();
    dist <= eps && t > eps && t < 1.0 - eps
}

/// True iff no third window point lies in the open segment `(z_r, z_l)`.
pub fn is_visible<T: Scalar>(w: &ZeroWindow<T>, r: usize, l: usize) -> bool {
    if r == l {
        return false;
    }
    let pts = w.points();
    let (a, b) = (&pts[r], &pts[l]);
    !pts.iter()
        .enumerate()
        .any(|(k, p)| k != r && k != l && blocks(a, b, p, w.eps()))
}

/// Window coordinates scaled to a common integer lattice.
struct IntegerCoords {
    coords: Vec<(i64, i64)>,
    scale: BigInt,
}

const INT_LIMIT: i64 = 1 << 61;

fn integerize<T: Scalar>(pts: &[ZPoint<T>]) -> Option<IntegerCoords> {
    let mut scale = BigInt::one();
    for p in pts {
        for c in [&p.re, &p.im] {
            scale = scale.lcm(c.as_rational()?.denom());
        }
    }
    let to_int = |c: &T| -> Option<i64> {
        let q = c.as_rational()?;
        let v = (q.numer() * (&scale / q.denom())).to_i64()?;
        (v.abs() < INT_LIMIT).then_some(v)
    };
    let coords = pts
        .iter()
        .map(|p| Some((to_int(&p.re)?, to_int(&p.im)?)))
        .collect::<Option<Vec<_>>>()?;
    Some(IntegerCoords { coords, scale })
}

fn primitive(dx: i64, dy: i64) -> ((i64, i64), i64) {
    let g = dx.gcd(&dy);
    ((dx / g, dy / g), g)
}

/// All visible pairs `(i, j)` with `i < j`, sorted.
pub fn visible_pairs<T: Scalar>(w: &ZeroWindow<T>) -> Vec<(usize, usize)> {
    let pts = w.points();
    let mut pairs = if let Some(ints) = integerize(pts) {
        visible_pairs_integer(&ints.coords)
    } else if !T::EXACT {
        let coords: Vec<(f64, f64)> = pts.iter().map(|p| (p.re.to_f64(), p.im.to_f64())).collect();
        visible_pairs_float(&coords, w.eps())
    } else {
        let n = pts.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| is_visible(w, i, j))
            .collect()
    };
    pairs.sort_unstable();
    pairs
}

fn visible_pairs_integer(coords: &[(i64, i64)]) -> Vec<(usize, usize)> {
    let n = coords.len();
    let mut out = Vec::new();
    let mut nearest: HashMap<(i64, i64), (i64, usize)> = HashMap::new();
    for r in 0..n {
        nearest.clear();
        let (xr, yr) = coords[r];
        for (l, &(xl, yl)) in coords.iter().enumerate() {
            if l == r {
                continue;
            }
            let (dir, mult) = primitive(xl - xr, yl - yr);
            nearest
                .entry(dir)
                .and_modify(|e| {
                    if mult < e.0 {
                        *e = (mult, l);
                    }
                })
                .or_insert((mult, l));
        }
        out.extend(
            nearest
                .values()
                .filter(|&&(_, l)| l > r)
                .map(|&(_, l)| (r, l)),
        );
    }
    out
}

fn visible_pairs_float(coords: &[(f64, f64)], eps: f64) -> Vec<(usize, usize)> {
    let n = coords.len();
    let mut dmin = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            let d = (coords[i].0 - coords[j].0).hypot(coords[i].1 - coords[j].1);
            dmin = dmin.min(d);
        }
    }
    // A blocker of (r, l) sits at distance >= dmin from r and within eps of
    // the segment, so its direction from r is within asin(eps / dmin) of l's.
    let ratio = 2.0 * eps / dmin;
    let tau = if ratio >= 1.0 {
        PI
    } else {
        ratio.asin() + 1e-9
    };

    let mut out = Vec::new();
    let mut angles: Vec<(f64, usize)> = Vec::with_capacity(n);
    for r in 0..n {
        let (xr, yr) = coords[r];
        angles.clear();
        angles.extend(
            (0..n)
                .filter(|&l| l != r)
                .map(|l| ((coords[l].1 - yr).atan2(coords[l].0 - xr), l)),
        );
        angles.sort_by(|a, b| a.0.total_cmp(&b.0));
        let keys: Vec<f64> = angles.iter().map(|a| a.0).collect();
        for &(theta, l) in &angles {
            if l < r {
                continue;
            }
            let blocked = angular_range(&keys, theta, tau).any(|k| {
                let b = angles[k].1;
                b != l && blocks_f64(coords[r], coords[l], coords[b], eps)
            });
            if !blocked {
                out.push((r, l));
            }
        }
    }
    out
}

/// Indices of sorted angles within `tau` of `theta`, cyclically.
fn angular_range(keys: &[f64], theta: f64, tau: f64) -> Box<dyn Iterator<Item = usize> + '_> {
    if tau >= PI {
        return Box::new(0..keys.len());
    }
    let span = |lo: f64, hi: f64| {
        let a = keys.partition_point(|&k| k < lo);
        let b = keys.partition_point(|&k| k <= hi);
        a..b.max(a)
    };
    let (lo, hi) = (theta - tau, theta + tau);
    let main = span(lo, hi);
    let wrap_low = if lo < -PI { span(lo + TAU, PI) } else { 0..0 };
    let wrap_high = if hi > PI { span(-PI, hi - TAU) } else { 0..0 };
    Box::new(main.chain(wrap_low).chain(wrap_high))
}

fn certified_pair<T: Scalar>(w: &ZeroWindow<T>, i: usize, j: usize, len: f64) -> bool {
    let c = w.center().to_complex();
    let slack = 1e-12 * w.radius().max(1.0);
    let pts = w.points();
    [i, j]
        .iter()
        .all(|&k| (pts[k].to_complex() - c).norm() + len <= w.radius() + slack)
}

/// One segment per unordered visible pair, oriented so that the holonomy has
/// argument in `[0, π)`.
pub fn saddle_connections<T: Scalar>(w: &ZeroWindow<T>, m: u32) -> Result<Vec<SaddleSegment<T>>> {
    if m < 2 {
        return Err(Error::InvalidDegree(m));
    }
    let pts = w.points();
    Ok(visible_pairs(w)
        .into_iter()
        .map(|(i, j)| {
            let v = &pts[j] - &pts[i];
            let (from_idx, to_idx, holonomy) = if v.in_upper_half() {
                (i, j, v)
            } else {
                (j, i, -v)
            };
            let length = holonomy.norm();
            SaddleSegment {
                from_idx,
                to_idx,
                direction: holonomy.arg(),
                length,
                holonomy,
                multiplicity: m,
                certified: certified_pair(w, i, j, length),
            }
        })
        .collect())
}

/// Norm, then argument in `[0, 2π)`, for nonzero integer vectors.
fn cmp_int_canonical(a: (i64, i64), b: (i64, i64)) -> std::cmp::Ordering {
    let n = |v: (i64, i64)| v.0 as i128 * v.0 as i128 + v.1 as i128 * v.1 as i128;
    let lower = |v: (i64, i64)| v.1 < 0 || (v.1 == 0 && v.0 < 0);
    let cross = a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128;
    n(a).cmp(&n(b))
        .then(lower(a).cmp(&lower(b)))
        .then(0.cmp(&cross))
}

/// Holonomy vectors `±(z_r − z_l)` over all visible pairs.
pub fn holonomy<T: Scalar>(w: &ZeroWindow<T>) -> HolonomySet<T> {
    let pts = w.points();
    let pairs = visible_pairs(w);
    if let Some(ints) = integerize(pts) {
        // Deduplicate on the integer lattice before building rationals.
        let mut unique: HashMap<(i64, i64), bool> = HashMap::new();
        for &(i, j) in &pairs {
            let (a, b) = (ints.coords[i], ints.coords[j]);
            let (mut dx, mut dy) = (b.0 - a.0, b.1 - a.1);
            if dy < 0 || (dy == 0 && dx < 0) {
                (dx, dy) = (-dx, -dy);
            }
            let len = (pts[j].to_complex() - pts[i].to_complex()).norm();
            *unique.entry((dx, dy)).or_insert(false) |= certified_pair(w, i, j, len);
        }
        let mut both: Vec<((i64, i64), bool)> = unique
            .into_iter()
            .flat_map(|((dx, dy), cert)| [((dx, dy), cert), ((-dx, -dy), cert)])
            .collect();
        both.sort_by(|a, b| cmp_int_canonical(a.0, b.0));
        let scale = Rational::from_integer(ints.scale.clone());
        let tagged = both
            .into_iter()
            .map(|((dx, dy), cert)| {
                let re = Rational::from_integer(BigInt::from(dx)) / scale.clone();
                let im = Rational::from_integer(BigInt::from(dy)) / scale.clone();
                (
                    ZPoint::new(T::from_rational(&re), T::from_rational(&im)),
                    cert,
                )
            })
            .collect();
        return HolonomySet::from_sorted(tagged, w.radius(), w.eps());
    }
    let tagged = pairs
        .into_iter()
        .map(|(i, j)| {
            let v = (&pts[j] - &pts[i]).upper_representative();
            let cert = certified_pair(w, i, j, v.norm());
            (v, cert)
        })
        .collect();
    HolonomySet::build(tagged, w.radius(), w.eps())
}

/// Sorted directions of a holonomy set with gap statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionProfile {
    /// Unique directions in `[0, 2π)`, ascending.
    pub directions: Vec<f64>,
    /// `gaps[i]` runs from `directions[i]` to the next direction, cyclically.
    pub gaps: Vec<f64>,
    pub max_gap: f64,
    pub min_gap: f64,
    /// Directions approached by strictly monotone runs with shrinking gaps.
    pub accumulation: Vec<f64>,
}

impl DirectionProfile {
    pub fn to_json(&self) -> Value {
        json!({
            "directions": self.directions,
            "gaps": self.gaps,
            "max_gap": self.max_gap,
            "min_gap": self.min_gap,
            "accumulation": self.accumulation,
        })
    }
}

/// Minimum number of consecutive strictly monotone gaps that counts as
/// evidence of an accumulation point.
pub const MIN_RUN: usize = 5;

const ANGLE_TOL: f64 = 1e-12;

pub fn direction_profile<T: Scalar>(h: &HolonomySet<T>) -> DirectionProfile {
    let mut directions: Vec<f64> = if T::EXACT {
        // Float angles order every pair that is not a near tie; only near ties
        // need the exact comparison.
        let mut vs: Vec<(f64, &ZPoint<T>)> = h.vectors().iter().map(|v| (v.arg(), v)).collect();
        vs.sort_by(|(fa, a), (fb, b)| {
            if (fa - fb).abs() > 1e-9 {
                fa.total_cmp(fb)
            } else {
                cmp_arg(a, b)
            }
        });
        vs.dedup_by(|(fa, a), (fb, b)| (*fa - *fb).abs() <= 1e-9 && cmp_arg(a, b).is_eq());
        vs.iter().map(|(f, _)| *f).collect()
    } else {
        h.vectors().iter().map(ZPoint::arg).collect()
    };
    directions.sort_by(f64::total_cmp);
    directions.dedup_by(|a, b| (*a - *b).abs() <= ANGLE_TOL);
    if directions.len() > 1 && directions[0] + TAU - directions[directions.len() - 1] <= ANGLE_TOL {
        directions.pop();
    }

    let n = directions.len();
    let gaps: Vec<f64> = (0..n)
        .map(|i| {
            if i + 1 < n {
                directions[i + 1] - directions[i]
            } else {
                directions[0] + TAU - directions[i]
            }
        })
        .collect();
    let max_gap = gaps.iter().copied().fold(0.0, f64::max);
    let min_gap = gaps
        .iter()
        .copied()
        .fold(if n > 0 { TAU } else { 0.0 }, f64::min);
    let accumulation = accumulation_candidates(&directions, &gaps);
    DirectionProfile {
        directions,
        gaps,
        max_gap,
        min_gap,
        accumulation,
    }
}

/// For each maximal run of at least [`MIN_RUN`] strictly shrinking gaps, the
/// limit lies in the gap just past the shrinking end. The candidate is the
/// far endpoint of that gap, or its midpoint when runs close in on the same
/// gap from both sides.
fn accumulation_candidates(dirs: &[f64], gaps: &[f64]) -> Vec<f64> {
    let n = gaps.len();
    if n <= MIN_RUN {
        return Vec::new();
    }
    let at = |i: isize| gaps[i.rem_euclid(n as isize) as usize];
    // gap index -> (approached from below, approached from above)
    let mut targets: HashMap<usize, (bool, bool)> = HashMap::new();
    for i in 0..n as isize {
        // Decreasing run starting at i, shrinking toward higher angles.
        if at(i - 1) <= at(i) {
            let mut j = i;
            while j - i < n as isize && at(j) > at(j + 1) {
                j += 1;
            }
            if (j - i + 1) as usize >= MIN_RUN {
                let gap = (j + 1).rem_euclid(n as isize) as usize;
                targets.entry(gap).or_default().0 = true;
            }
        }
        // Increasing run starting at i, shrinking toward lower angles.
        if at(i - 1) >= at(i) {
            let mut j = i;
            while j - i < n as isize && at(j) < at(j + 1) {
                j += 1;
            }
            if (j - i + 1) as usize >= MIN_RUN {
                let gap = (i - 1).rem_euclid(n as isize) as usize;
                targets.entry(gap).or_default().1 = true;
            }
        }
    }
    let mut out: Vec<f64> = targets
        .into_iter()
        .map(|(g, (below, above))| {
            let start = dirs[g];
            let end = dirs[(g + 1) % n];
            match (below, above) {
                (true, true) => (start + gaps[g] / 2.0) % TAU,
                (true, false) => end,
                _ => start,
            }
        })
        .map(|d| if d >= TAU - ANGLE_TOL { 0.0 } else { d })
        .collect();
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() <= 1e-9);
    out
}

fn parallel<T: Scalar>(u: &ZPoint<T>, v: &ZPoint<T>, eps: f64) -> bool {
    if T::EXACT {
        u.cross(v).is_zero()
    } else {
        let (a, b) = (u.to_complex(), v.to_complex());
        (a.re * b.im - a.im * b.re).abs() <= eps * a.norm().max(b.norm()).max(1.0)
    }
}

/// True when every point lies on one line.
pub fn is_collinear<T: Scalar>(points: &[ZPoint<T>], eps: f64) -> bool {
    let Some(base) = points.first() else {
        return true;
    };
    let far = points
        .iter()
        .max_by(|a, b| (*a - base).norm().total_cmp(&(*b - base).norm()))
        .expect("nonempty");
    let dir = far - base;
    if dir.approx_eq(&ZPoint::zero(), eps) {
        return true;
    }
    points.iter().all(|p| {
        if T::EXACT {
            parallel(&(p - base), &dir, eps)
        } else {
            let (d, v) = (dir.to_complex(), (p - base).to_complex());
            (d.re * v.im - d.im * v.re).abs() / d.norm() <= eps
        }
    })
}

/// True when all vectors are pairwise parallel.
pub fn all_parallel<T: Scalar>(vectors: &[ZPoint<T>], eps: f64) -> bool {
    match vectors.first() {
        None => true,
        Some(v0) => vectors.iter().all(|v| parallel(v0, v, eps)),
    }
}

/// Direction of the line through collinear points, in `[0, π)`. `None`
/// when fewer than two distinct points are given.
pub fn line_direction<T: Scalar>(points: &[ZPoint<T>], eps: f64) -> Option<f64> {
    let base = points.first()?;
    let other = points.iter().find(|p| !p.approx_eq(base, eps))?;
    let d = other - base;
    let a = d.upper_representative().arg();
    Some(if a >= PI - ANGLE_TOL { 0.0 } else { a })
}
