//! The m-sheeted cyclic branched cover `(z, w) ↦ z` of the plane.
//!
//! Sheets are labelled `0..m` relative to a chart cut along one vertical
//! downward ray below each zero. Crossing a ray from left to right adds one
//! to the sheet, so a counterclockwise loop around a single zero advances the
//! sheet by one and closes after `m` turns.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::flatgeom::{is_visible, SaddleSegment};
use crate::scalar::Scalar;
use crate::zseq::ZeroWindow;

/// A point of the cover: a base point with a sheet label, or a cone point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoverPoint {
    pub base: Complex64,
    /// Always 0 for cone points.
    pub sheet: u32,
    pub is_cone: bool,
}

impl CoverPoint {
    pub fn regular(base: Complex64, sheet: u32) -> Self {
        CoverPoint {
            base,
            sheet,
            is_cone: false,
        }
    }

    pub fn cone(base: Complex64) -> Self {
        CoverPoint {
            base,
            sheet: 0,
            is_cone: true,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"base": [self.base.re, self.base.im], "sheet": self.sheet, "cone": self.is_cone})
    }
}

fn check_degree(m: u32) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidDegree(m));
    }
    Ok(())
}

fn window_zeros<T: Scalar>(w: &ZeroWindow<T>) -> Vec<Complex64> {
    w.points().iter().map(|p| p.to_complex()).collect()
}

/// One downward ray `{x = x_k, y < y_k}` below every zero.
#[derive(Clone, Debug, PartialEq)]
pub struct CutSystem {
    zeros: Vec<Complex64>,
    m: u32,
    eps: f64,
}

/// A single crossing of a cut by a polyline edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub edge: usize,
    pub zero_idx: usize,
    /// +1 left to right, −1 right to left.
    pub direction: i8,
}

impl Crossing {
    pub fn to_json(&self) -> Value {
        json!({"edge": self.edge, "zero": self.zero_idx, "direction": self.direction})
    }
}

/// End point of a lifted path with its audit trail.
#[derive(Clone, Debug, PartialEq)]
pub struct PathLift {
    pub end: CoverPoint,
    pub crossings: Vec<Crossing>,
    /// Vertices that sat exactly on a cut and were nudged by `+eps` in x.
    pub perturbed: Vec<usize>,
}

impl PathLift {
    pub fn to_json(&self) -> Value {
        json!({
            "end": self.end.to_json(),
            "crossings": self.crossings.iter().map(Crossing::to_json).collect::<Vec<_>>(),
            "perturbed": self.perturbed,
        })
    }
}

impl CutSystem {
    pub fn new<T: Scalar>(w: &ZeroWindow<T>, m: u32) -> Result<Self> {
        let eps = if T::EXACT { 1e-12 } else { w.eps().max(1e-12) };
        Self::from_zeros(window_zeros(w), m, eps)
    }

    pub fn from_zeros(zeros: Vec<Complex64>, m: u32, eps: f64) -> Result<Self> {
        check_degree(m)?;
        if eps <= 0.0 || !eps.is_finite() {
            return Err(Error::InvalidInput(format!(
                "eps must be positive, got {eps}"
            )));
        }
        Ok(CutSystem { zeros, m, eps })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    fn on_cut(&self, z: Complex64) -> bool {
        self.zeros.iter().any(|k| z.re == k.re && z.im < k.im)
    }

    /// Index of a zero within `eps` of the closed segment `[a, b]`.
    fn zero_on_segment(&self, a: Complex64, b: Complex64) -> Option<usize> {
        let d = b - a;
        let len2 = d.norm_sqr();
        self.zeros.iter().position(|&z| {
            let t = if len2 > 0.0 {
                (((z - a) * d.conj()).re / len2).clamp(0.0, 1.0)
            } else {
                0.0
            };
            (a + d * t - z).norm() <= self.eps
        })
    }

    /// Signed cut crossings of the edge `a → b`, ordered along the edge.
    fn edge_crossings(&self, edge: usize, a: Complex64, b: Complex64) -> Vec<Crossing> {
        let mut hits: Vec<(f64, Crossing)> = Vec::new();
        for (k, z) in self.zeros.iter().enumerate() {
            let direction = if a.re < z.re && z.re < b.re {
                1
            } else if b.re < z.re && z.re < a.re {
                -1
            } else {
                continue;
            };
            let t = (z.re - a.re) / (b.re - a.re);
            let y = a.im + t * (b.im - a.im);
            if y < z.im {
                hits.push((
                    t,
                    Crossing {
                        edge,
                        zero_idx: k,
                        direction,
                    },
                ));
            }
        }
        // Ties in x are ordered by zero index.
        hits.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.zero_idx.cmp(&q.1.zero_idx)));
        hits.into_iter().map(|h| h.1).collect()
    }

    /// Lifts a polyline starting at `start`.
    pub fn lift_path(&self, poly: &[Complex64], start: &CoverPoint) -> Result<PathLift> {
        let first = *poly
            .first()
            .ok_or_else(|| Error::InvalidInput("empty path".into()))?;
        if (first - start.base).norm() > self.eps {
            return Err(Error::InvalidInput(
                "start point is not over the first vertex".into(),
            ));
        }
        if start.is_cone || start.sheet >= self.m {
            return Err(Error::InvalidInput(format!(
                "invalid start sheet {}",
                start.sheet
            )));
        }
        let mut vertices = poly.to_vec();
        let mut perturbed = Vec::new();
        for (i, v) in vertices.iter_mut().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!("vertex {i} is not finite")));
            }
            let mut nudged = false;
            while self.on_cut(*v) {
                v.re += self.eps;
                nudged = true;
            }
            if nudged {
                perturbed.push(i);
            }
        }
        let mut crossings = Vec::new();
        for (i, pair) in vertices.windows(2).enumerate() {
            if self.zero_on_segment(pair[0], pair[1]).is_some() {
                return Err(Error::PathThroughBranchPoint { index: i });
            }
            crossings.extend(self.edge_crossings(i, pair[0], pair[1]));
        }
        if vertices.len() == 1 && self.zero_on_segment(first, first).is_some() {
            return Err(Error::PathThroughBranchPoint { index: 0 });
        }
        let shift: i64 = crossings.iter().map(|c| c.direction as i64).sum();
        let sheet = (start.sheet as i64 + shift).rem_euclid(self.m as i64) as u32;
        Ok(PathLift {
            end: CoverPoint::regular(*vertices.last().unwrap(), sheet),
            crossings,
            perturbed,
        })
    }
}

/// Points over `base`: one cone point at a zero, `m` sheets elsewhere.
pub fn fiber<T: Scalar>(
    base: &crate::ZPoint<T>,
    w: &ZeroWindow<T>,
    m: u32,
) -> Result<Vec<CoverPoint>> {
    check_degree(m)?;
    let b = base.to_complex();
    if w.point_set().contains(base) {
        return Ok(vec![CoverPoint::cone(b)]);
    }
    Ok((0..m).map(|s| CoverPoint::regular(b, s)).collect())
}

/// Cone angle recovered from how many turns a small lifted circle needs to
/// close.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConeAngle {
    pub angle: f64,
    pub turns: u32,
    pub radius: f64,
}

impl ConeAngle {
    pub fn to_json(&self) -> Value {
        json!({"angle": self.angle, "turns": self.turns, "radius": self.radius})
    }
}

const CIRCLE_VERTICES: usize = 32;

/// Lifts a circle of `radius` around zero `zero_idx` (default: a quarter of
/// the distance to the nearest other zero) until it closes.
pub fn cone_angle<T: Scalar>(
    zero_idx: usize,
    w: &ZeroWindow<T>,
    m: u32,
    radius: Option<f64>,
) -> Result<ConeAngle> {
    check_degree(m)?;
    if zero_idx >= w.len() {
        return Err(Error::IndexOutOfRange {
            index: zero_idx,
            len: w.len(),
        });
    }
    let zeros = window_zeros(w);
    let z = zeros[zero_idx];
    let gap = zeros
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != zero_idx)
        .map(|(_, q)| (q - z).norm())
        .fold(f64::INFINITY, f64::min);
    let half_gap = gap / 2.0;
    let radius = radius.unwrap_or(if gap.is_finite() { gap / 4.0 } else { 1.0 });
    if radius.is_nan() || radius <= 0.0 || radius > half_gap {
        return Err(Error::RadiusTooLarge { radius, half_gap });
    }
    let cuts = CutSystem::from_zeros(zeros, m, (radius * 1e-9).max(1e-15))?;
    // Offset by half a step so no vertex lands on the cut below the zero.
    let circle: Vec<Complex64> = (0..=CIRCLE_VERTICES)
        .map(|j| {
            let th = (j as f64 + 0.5) * TAU / CIRCLE_VERTICES as f64;
            z + Complex64::from_polar(radius, th)
        })
        .collect();
    let start = CoverPoint::regular(circle[0], 0);
    let mut here = start;
    for turns in 1..=m {
        here = cuts.lift_path(&circle, &here)?.end;
        if here.sheet == start.sheet {
            return Ok(ConeAngle {
                angle: TAU * turns as f64,
                turns,
                radius,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: m as usize,
    })
}

/// One lift of a saddle connection, labelled by the sheet it leaves on.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedSaddle {
    pub from_idx: usize,
    pub to_idx: usize,
    pub start_sheet: u32,
    pub end_sheet: u32,
    pub crossings: Vec<Crossing>,
}

impl LiftedSaddle {
    pub fn to_json(&self) -> Value {
        json!({
            "from": self.from_idx,
            "to": self.to_idx,
            "start_sheet": self.start_sheet,
            "end_sheet": self.end_sheet,
            "crossings": self.crossings.iter().map(Crossing::to_json).collect::<Vec<_>>(),
        })
    }
}

/// The `m` lifts of a visible segment, one leaving on each sheet.
///
/// The segment is trimmed by a small margin at both ends so that the lifted
/// path avoids the cone points themselves.
pub fn lift_saddle<T: Scalar>(
    seg: &SaddleSegment<T>,
    w: &ZeroWindow<T>,
    cuts: &CutSystem,
) -> Result<Vec<LiftedSaddle>> {
    let (i, j) = (seg.from_idx, seg.to_idx);
    for idx in [i, j] {
        if idx >= w.len() {
            return Err(Error::IndexOutOfRange {
                index: idx,
                len: w.len(),
            });
        }
    }
    if i == j || !is_visible(w, i, j) {
        return Err(Error::NotVisible { from: i, to: j });
    }
    let a = w.points()[i].to_complex();
    let b = w.points()[j].to_complex();
    let d = b - a;
    let margin = d * (1e-6f64).min(0.25);
    let path = [a + margin, b - margin];
    (0..cuts.m())
        .map(|s| {
            let lift = cuts.lift_path(&path, &CoverPoint::regular(path[0], s))?;
            Ok(LiftedSaddle {
                from_idx: i,
                to_idx: j,
                start_sheet: s,
                end_sheet: lift.end.sheet,
                crossings: lift.crossings,
            })
        })
        .collect()
}

/// Finite and infinite cone points of `S(f, m)` over a window.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularitySets {
    pub finite_cone_points: Vec<CoverPoint>,
    /// Always empty: the metric completion adds no points.
    pub infinite_cone_points: Vec<CoverPoint>,
}

impl SingularitySets {
    pub fn new<T: Scalar>(w: &ZeroWindow<T>) -> Self {
        SingularitySets {
            finite_cone_points: window_zeros(w).into_iter().map(CoverPoint::cone).collect(),
            infinite_cone_points: Vec::new(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "finite": self.finite_cone_points.iter().map(CoverPoint::to_json).collect::<Vec<_>>(),
            "infinite": self.infinite_cone_points.iter().map(CoverPoint::to_json).collect::<Vec<_>>(),
        })
    }
}
