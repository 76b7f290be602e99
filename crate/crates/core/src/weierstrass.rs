//! Truncated Weierstrass products with prescribed simple zeros.
//!
//! `f(z) = z^e0 · Π (1 − z/z_n) E_n(z)` over the nonzero window terms, where
//! `E_n(z) = exp(Σ_{k=1}^{d(n)} (z/z_n)^k / k)`. The zero-free factor is
//! fixed to 1. Products are accumulated as logarithms so that large factor
//! counts neither overflow nor underflow.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::zseq::ZeroWindow;

/// Convergence exponents `d(n)`, indexed from 1.
#[derive(Clone, Debug, PartialEq)]
pub enum Degrees {
    /// `d(n) = n`, always sufficient.
    Linear,
    Uniform(u32),
    PerFactor(Vec<u32>),
}

impl Degrees {
    pub fn get(&self, n: usize) -> u32 {
        match self {
            Degrees::Linear => n as u32,
            Degrees::Uniform(d) => *d,
            Degrees::PerFactor(v) => v.get(n.saturating_sub(1)).copied().unwrap_or(0),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Degrees::Linear => json!("linear"),
            Degrees::Uniform(d) => json!(d),
            Degrees::PerFactor(v) => json!(v),
        }
    }
}

/// Zeros, exponents and truncation of a product.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductSpec {
    zeros: Vec<Complex64>,
    degrees: Degrees,
    origin_exponent: u32,
    factors: usize,
}

impl ProductSpec {
    /// Uses the first `factors` zeros. The origin exponent is 1 iff one of
    /// them is 0.
    pub fn new(zeros: Vec<Complex64>, degrees: Degrees, factors: usize) -> Result<Self> {
        if factors > zeros.len() {
            return Err(Error::InvalidInput(format!(
                "{factors} factors requested from {} zeros",
                zeros.len()
            )));
        }
        if zeros.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidInput("zeros must be finite".into()));
        }
        let origin_exponent = zeros[..factors]
            .iter()
            .any(|z| *z == Complex64::new(0.0, 0.0)) as u32;
        Ok(ProductSpec {
            zeros,
            degrees,
            origin_exponent,
            factors,
        })
    }

    /// Builds a product from a window, in window coordinates or (with
    /// `raw = true`) in the untranslated coordinates of the sequence.
    pub fn from_window<T: Scalar>(
        w: &ZeroWindow<T>,
        degrees: Degrees,
        factors: Option<usize>,
        raw: bool,
    ) -> Result<Self> {
        let zeros: Vec<Complex64> = if raw {
            w.raw_points().map(|p| p.to_complex()).collect()
        } else {
            w.points().iter().map(|p| p.to_complex()).collect()
        };
        let n = factors.unwrap_or(zeros.len());
        Self::new(zeros, degrees, n)
    }

    /// The zeros the product actually uses.
    pub fn active_zeros(&self) -> &[Complex64] {
        &self.zeros[..self.factors]
    }

    pub fn origin_exponent(&self) -> u32 {
        self.origin_exponent
    }

    pub fn factors(&self) -> usize {
        self.factors
    }

    pub fn degrees(&self) -> &Degrees {
        &self.degrees
    }
}

/// `ln(1 + w)`, accurate for small `w`.
fn ln_1p(w: Complex64) -> Complex64 {
    let re = 0.5 * (2.0 * w.re + w.norm_sqr()).ln_1p();
    let im = w.im.atan2(1.0 + w.re);
    Complex64::new(re, im)
}

/// `Σ_{k=1}^{d} u^k / k`.
fn exponent_sum(u: Complex64, d: u32) -> Complex64 {
    let mut power = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..=d {
        power *= u;
        sum += power / k as f64;
    }
    sum
}

/// Below this `|u|` the factor is summed as a tail series.
const TAIL_RADIUS: f64 = 0.5;

/// `ln((1 − u) E(u))`. For small `|u|` this is `−Σ_{k>d} u^k / k`, which
/// avoids cancellation and costs a few terms instead of `d`.
fn log_factor(u: Complex64, d: u32) -> Complex64 {
    if u.norm() > TAIL_RADIUS {
        return ln_1p(-u) + exponent_sum(u, d);
    }
    let mut power = u.powu(d + 1);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut k = d as f64 + 1.0;
    loop {
        let term = power / k;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() || term.norm() == 0.0 {
            break;
        }
        power *= u;
        k += 1.0;
    }
    -sum
}

/// `E(z) = exp(Σ_{k=1}^{d} (z/z_n)^k / k)`.
pub fn elementary_factor(z: Complex64, zn: Complex64, d: u32) -> Result<Complex64> {
    Ok(log_elementary_factor(z, zn, d)?.exp())
}

/// The exponent of [`elementary_factor`].
pub fn log_elementary_factor(z: Complex64, zn: Complex64, d: u32) -> Result<Complex64> {
    if zn == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroDivisor);
    }
    Ok(exponent_sum(z / zn, d))
}

/// Value of the product with its logarithmic magnitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    /// `log10 |f(z)|`; `-inf` at a zero.
    pub log10_magnitude: f64,
}

impl Evaluation {
    pub fn to_json(&self) -> Value {
        let mag = if self.log10_magnitude.is_finite() {
            json!(self.log10_magnitude)
        } else {
            Value::Null
        };
        json!({"value": [self.value.re, self.value.im], "log10mag": mag})
    }
}

/// `ln f(z)`, or `None` when `z` is one of the active zeros.
fn log_f(spec: &ProductSpec, z: Complex64) -> Option<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let mut acc = zero;
    if spec.origin_exponent == 1 {
        if z == zero {
            return None;
        }
        acc += z.ln();
    }
    for (i, &zn) in spec.active_zeros().iter().enumerate() {
        if zn == zero {
            continue;
        }
        if z == zn {
            return None;
        }
        acc += log_factor(z / zn, spec.degrees.get(i + 1));
        if acc.im.abs() > 64.0 * TAU {
            acc.im %= TAU;
        }
    }
    Some(acc)
}

/// Evaluates `z^e0 · Π (1 − z/z_n) E_n(z)` over the active zeros.
pub fn eval_f(spec: &ProductSpec, z: Complex64) -> Result<Evaluation> {
    if !z.is_finite() {
        return Err(Error::InvalidInput(
            "evaluation point must be finite".into(),
        ));
    }
    let Some(log) = log_f(spec, z) else {
        return Ok(Evaluation {
            value: Complex64::new(0.0, 0.0),
            log10_magnitude: f64::NEG_INFINITY,
        });
    };
    let log10_magnitude = log.re / std::f64::consts::LN_10;
    if log.re == f64::NEG_INFINITY {
        // A factor rounded to exactly zero.
        return Ok(Evaluation {
            value: Complex64::new(0.0, 0.0),
            log10_magnitude,
        });
    }
    let value = log.exp();
    if !value.is_finite() || !log.re.is_finite() {
        return Err(Error::NonFinite {
            log_magnitude: log10_magnitude,
        });
    }
    Ok(Evaluation {
        value,
        log10_magnitude,
    })
}

/// Rule for picking convergence exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeRule {
    /// `d(n) = n`.
    Default,
    /// Smallest uniform `d` for which `Σ |z_n|^{-(d+1)}` appears to converge.
    Auto,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeChoice {
    pub degrees: Degrees,
    /// Estimated exponent of convergence of the window tail, when computed.
    pub exponent_estimate: Option<f64>,
}

/// Picks `d(n)`. The automatic rule regresses `ln n` on `ln |z_n|` over the
/// outer half of the nonzero terms; the slope estimates the exponent of
/// convergence `ρ`. An estimate within 0.15 of an integer `k` is taken as
/// `ρ = k` (and `Σ |z_n|^{-k}` as divergent), giving `d = k`; otherwise
/// `d = ⌊ρ⌋`.
pub fn choose_degrees<T: Scalar>(w: &ZeroWindow<T>, rule: DegreeRule) -> Result<DegreeChoice> {
    if w.is_empty() {
        return Err(Error::EmptyWindow);
    }
    if rule == DegreeRule::Default {
        return Ok(DegreeChoice {
            degrees: Degrees::Linear,
            exponent_estimate: None,
        });
    }
    let mut norms: Vec<f64> = w
        .points()
        .iter()
        .map(|p| p.norm())
        .filter(|&r| r > 0.0)
        .collect();
    norms.sort_by(f64::total_cmp);
    let n = norms.len();
    if n < 8 {
        return Ok(DegreeChoice {
            degrees: Degrees::Linear,
            exponent_estimate: None,
        });
    }
    let tail: Vec<(f64, f64)> = (n / 2..n)
        .map(|i| (norms[i].ln(), ((i + 1) as f64).ln()))
        .collect();
    let m = tail.len() as f64;
    let mx = tail.iter().map(|t| t.0).sum::<f64>() / m;
    let my = tail.iter().map(|t| t.1).sum::<f64>() / m;
    let sxx: f64 = tail.iter().map(|t| (t.0 - mx).powi(2)).sum();
    let sxy: f64 = tail.iter().map(|t| (t.0 - mx) * (t.1 - my)).sum();
    if sxx <= 0.0 {
        return Ok(DegreeChoice {
            degrees: Degrees::Linear,
            exponent_estimate: None,
        });
    }
    let rho = (sxy / sxx).max(0.0);
    let nearest = rho.round();
    let d = if (rho - nearest).abs() < 0.15 {
        nearest
    } else {
        rho.floor()
    };
    Ok(DegreeChoice {
        degrees: Degrees::Uniform(d as u32),
        exponent_estimate: Some(rho),
    })
}

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Rect {
            x0: x0.min(x1),
            y0: y0.min(y1),
            x1: x0.max(x1),
            y1: y0.max(y1),
        }
    }

    pub fn centered(c: Complex64, half: f64) -> Self {
        Rect::new(c.re - half, c.im - half, c.re + half, c.im + half)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re > self.x0 && z.re < self.x1 && z.im > self.y0 && z.im < self.y1
    }

    /// Distance from `z` to the boundary.
    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        let dx = (self.x0 - z.re).max(0.0).max(z.re - self.x1);
        let dy = (self.y0 - z.im).max(0.0).max(z.im - self.y1);
        if dx > 0.0 || dy > 0.0 {
            dx.hypot(dy)
        } else {
            (z.re - self.x0)
                .min(self.x1 - z.re)
                .min(z.im - self.y0)
                .min(self.y1 - z.im)
        }
    }

    /// Counterclockwise boundary point at parameter `t ∈ [0, 1)`.
    fn boundary_point(&self, t: f64) -> Complex64 {
        let (w, h) = (self.x1 - self.x0, self.y1 - self.y0);
        let mut s = t * 2.0 * (w + h);
        if s < w {
            return Complex64::new(self.x0 + s, self.y0);
        }
        s -= w;
        if s < h {
            return Complex64::new(self.x1, self.y0 + s);
        }
        s -= h;
        if s < w {
            return Complex64::new(self.x1 - s, self.y1);
        }
        s -= w;
        Complex64::new(self.x0, self.y1 - s)
    }
}

/// Zeros closer than this to a contour are rejected.
pub const CONTOUR_CLEARANCE: f64 = 1e-9;
const MAX_SAMPLES: usize = 1 << 20;

fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Phase of `f` at `samples` evenly spaced boundary points.
fn phases(
    spec: &ProductSpec,
    rect: &Rect,
    samples: usize,
    offset: usize,
    stride: usize,
) -> Result<Vec<f64>> {
    (0..samples)
        .map(|k| {
            let t = (offset + k * stride) as f64 / (samples * stride) as f64;
            log_f(spec, rect.boundary_point(t))
                .map(|l| l.im)
                .ok_or(Error::ContourThroughZero {
                    index: 0,
                    distance: 0.0,
                })
        })
        .collect()
}

/// Interleaves the midpoints so the sample count doubles.
fn refine_phases(spec: &ProductSpec, rect: &Rect, old: &[f64]) -> Result<Vec<f64>> {
    let mids = phases(spec, rect, old.len(), 1, 2)?;
    Ok(old.iter().zip(&mids).flat_map(|(&a, &b)| [a, b]).collect())
}

/// Total unwrapped phase change around the closed contour, with the largest
/// single-step change.
fn phase_change(ph: &[f64]) -> (f64, f64) {
    let mut total = 0.0;
    let mut max_step: f64 = 0.0;
    for k in 0..ph.len() {
        let step = wrap_angle(ph[(k + 1) % ph.len()] - ph[k]);
        max_step = max_step.max(step.abs());
        total += step;
    }
    (total, max_step)
}

/// Winding number of `f` along the rectangle boundary.
///
/// The sample count doubles until the total phase change moves by less than
/// 0.25 rad between refinements and no single step exceeds π/2.
pub fn count_zeros(spec: &ProductSpec, rect: &Rect, samples: usize) -> Result<i64> {
    if samples < 64 {
        return Err(Error::InvalidInput(format!(
            "need at least 64 samples, got {samples}"
        )));
    }
    let origin = Complex64::new(0.0, 0.0);
    let mut candidates: Vec<Complex64> = spec.active_zeros().to_vec();
    if spec.origin_exponent == 1 {
        candidates.push(origin);
    }
    for (index, z) in candidates.iter().enumerate() {
        let distance = rect.boundary_distance(*z);
        if distance.abs() < CONTOUR_CLEARANCE {
            return Err(Error::ContourThroughZero { index, distance });
        }
    }
    let mut ph = phases(spec, rect, samples, 0, 1)?;
    let (mut total, _) = phase_change(&ph);
    while ph.len() < MAX_SAMPLES {
        ph = refine_phases(spec, rect, &ph)?;
        let (next, max_step) = phase_change(&ph);
        let settled = (next - total).abs() < 0.25 && max_step < PI / 2.0;
        total = next;
        if settled {
            break;
        }
    }
    Ok((total / TAU).round() as i64)
}

/// Result of refining a zero with Newton's method.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroCheck {
    /// Nearest active zero of the product.
    pub zero: Complex64,
    /// Winding number around a small square enclosing only `zero`.
    pub winding: i64,
    pub refined: Complex64,
    /// `|f(refined)|`.
    pub residual: f64,
    pub iterations: usize,
}

impl ZeroCheck {
    pub fn to_json(&self) -> Value {
        json!({
            "zero": [self.zero.re, self.zero.im],
            "refined": [self.refined.re, self.refined.im],
            "residual": self.residual,
            "winding": self.winding,
            "iterations": self.iterations,
        })
    }
}

const NEWTON_MAX_ITER: usize = 100;

/// Relative distance from the nearest zero at which a refined point counts
/// as having found it.
const ZERO_TOL: f64 = 1e-6;

/// Damped Newton iteration on `f` with a central-difference derivative.
///
/// Each step is halved until `|f|` decreases, since the factors vary by
/// orders of magnitude over short distances. The result must land within a
/// relative [`ZERO_TOL`] of an active zero.
pub fn refine_zero(spec: &ProductSpec, guess: Complex64) -> Result<ZeroCheck> {
    let f = |z: Complex64| eval_f(spec, z).map(|e| e.value);
    let mut z = guess;
    let mut fz = f(z)?;
    let mut iterations = 0;
    while fz != Complex64::new(0.0, 0.0) {
        if iterations == NEWTON_MAX_ITER {
            return Err(Error::NoConvergence { iterations });
        }
        let h = 1e-6 * z.norm().max(1.0);
        let df = (f(z + h)? - f(z - h)?) / (2.0 * h);
        if df == Complex64::new(0.0, 0.0) || !df.is_finite() {
            return Err(Error::NoConvergence { iterations });
        }
        let step = fz / df;
        iterations += 1;
        let mut lambda = 1.0;
        let accepted = loop {
            let cand = z - step * lambda;
            if cand.is_finite() {
                let fc = f(cand)?;
                if fc.norm() < fz.norm() {
                    break Some((cand, fc));
                }
            }
            lambda *= 0.5;
            if lambda < 1e-6 {
                break None;
            }
        };
        match accepted {
            Some((cand, fc)) => {
                z = cand;
                fz = fc;
                if (step * lambda).norm() <= 1e-15 * z.norm().max(1.0) {
                    break;
                }
            }
            // No decrease along the Newton direction: rounding noise near a root.
            None if step.norm() <= 1e-9 * z.norm().max(1.0) => break,
            None => return Err(Error::NoConvergence { iterations }),
        }
    }

    let mut zeros: Vec<Complex64> = spec.active_zeros().to_vec();
    if spec.origin_exponent == 1 && !zeros.contains(&Complex64::new(0.0, 0.0)) {
        zeros.push(Complex64::new(0.0, 0.0));
    }
    let nearest = zeros
        .iter()
        .copied()
        .min_by(|a, b| (a - z).norm().total_cmp(&(b - z).norm()))
        .ok_or(Error::EmptyWindow)?;
    let gap = zeros
        .iter()
        .filter(|&&q| q != nearest)
        .map(|q| (q - nearest).norm())
        .fold(f64::INFINITY, f64::min);
    if (nearest - z).norm() > ZERO_TOL * nearest.norm().max(1.0) {
        return Err(Error::NoConvergence { iterations });
    }
    let half = if gap.is_finite() { gap / 4.0 } else { 0.5 };
    let winding = count_zeros(spec, &Rect::centered(nearest, half), 64)?;
    Ok(ZeroCheck {
        zero: nearest,
        winding,
        refined: z,
        residual: fz.norm(),
        iterations,
    })
}
