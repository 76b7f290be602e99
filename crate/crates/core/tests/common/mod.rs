//! Shared generators and brute-force oracles for the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use flatcurve_core::{generate, GeneratorSpec, Rational, Scalar, ZPoint, ZeroWindow};
use num_traits::ToPrimitive;
use rand::Rng;

pub type Q = ZPoint<Rational>;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::frac(n, d)
}

pub fn qp(a: i64, b: i64, d: i64) -> Q {
    ZPoint::new(q(a, d), q(b, d))
}

/// `n` distinct points with coordinates `k/den`, `|k| ≤ span·den`.
pub fn random_points<R: Rng>(rng: &mut R, n: usize, span: i64, den: i64) -> Vec<(i64, i64)> {
    let mut seen = BTreeSet::new();
    let lim = span * den;
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < n && attempts < 50 * n {
        attempts += 1;
        let p = (rng.gen_range(-lim..=lim), rng.gen_range(-lim..=lim));
        if seen.insert(p) {
            out.push(p);
        }
    }
    out
}

/// Radius containing every point of the box `[-span, span]²`.
pub fn covering_radius(span: i64) -> f64 {
    span as f64 * std::f64::consts::SQRT_2 + 1.0
}

pub fn exact_window(points: &[(i64, i64)], den: i64, radius: f64) -> ZeroWindow<Rational> {
    let pts = points.iter().map(|&(a, b)| qp(a, b, den)).collect();
    generate(&GeneratorSpec::Explicit(pts), radius, 0.0).unwrap()
}

pub fn float_window(points: &[(i64, i64)], den: i64, radius: f64, eps: f64) -> ZeroWindow<f64> {
    let pts = points
        .iter()
        .map(|&(a, b)| ZPoint::new(a as f64 / den as f64, b as f64 / den as f64))
        .collect();
    generate(&GeneratorSpec::Explicit(pts), radius, eps).unwrap()
}

/// Exact integer coordinates of a rational point scaled by `scale`.
pub fn scaled(p: &Q, scale: i64) -> (i128, i128) {
    let f = |x: &Rational| {
        let y = x * Rational::from_i64(scale);
        assert!(y.is_integer(), "scale does not clear denominators");
        y.to_integer().to_i128().unwrap()
    };
    (f(&p.re), f(&p.im))
}

pub type Pair = ((i128, i128), (i128, i128));

fn ordered(a: (i128, i128), b: (i128, i128)) -> Pair {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// All unordered pairs with no third point in the open segment, by
/// checking every pair against every potential blocker.
pub fn brute_force_pairs(points: &[(i128, i128)]) -> BTreeSet<Pair> {
    let mut out = BTreeSet::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let (a, b) = (points[i], points[j]);
            let d = (b.0 - a.0, b.1 - a.1);
            let len2 = d.0 * d.0 + d.1 * d.1;
            let blocked = points.iter().enumerate().any(|(k, &c)| {
                if k == i || k == j {
                    return false;
                }
                let v = (c.0 - a.0, c.1 - a.1);
                let cross = d.0 * v.1 - d.1 * v.0;
                let dot = d.0 * v.0 + d.1 * v.1;
                cross == 0 && dot > 0 && dot < len2
            });
            if !blocked {
                out.insert(ordered(a, b));
            }
        }
    }
    out
}

/// Unordered endpoint pairs of the library's saddle connections.
pub fn library_pairs<T: Scalar>(
    w: &ZeroWindow<T>,
    to_int: impl Fn(&ZPoint<T>) -> (i128, i128),
) -> BTreeSet<Pair> {
    let pts = w.points();
    flatcurve_core::saddle_connections(w, 2)
        .unwrap()
        .iter()
        .map(|s| ordered(to_int(&pts[s.from_idx]), to_int(&pts[s.to_idx])))
        .collect()
}

/// Holonomy vectors `±(b − a)` of a brute-force pair set.
pub fn brute_force_holonomy(pairs: &BTreeSet<Pair>) -> BTreeSet<(i128, i128)> {
    let mut out = BTreeSet::new();
    for &(a, b) in pairs {
        out.insert((b.0 - a.0, b.1 - a.1));
        out.insert((a.0 - b.0, a.1 - b.1));
    }
    out
}
