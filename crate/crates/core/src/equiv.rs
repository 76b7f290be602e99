//! Translation equivalence, affine automorphisms and moduli coordinates.
//!
//! Two curves `S(f, m)` and `S(g, m)` are translation equivalent when a
//! translation of the plane carries the zeros of `f` onto the zeros of `g`.
//! Windows can only witness this on the part of the plane both of them
//! cover, so every answer here is window-consistent rather than proven.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::flatgeom::is_collinear;
use crate::matrix::Mat2;
use crate::point::{PointSet, ZPoint};
use crate::scalar::Scalar;
use crate::veech::{linear_search, StabilizerSearchConfig};
use crate::zseq::{point_json, sup_norm, within, AnyWindow, ZeroWindow};

#[derive(Clone, Debug, PartialEq)]
pub struct EquivResult<T> {
    pub equivalent: bool,
    /// `b` with `w1 + b = w2` on the overlap, in raw coordinates.
    pub translation: Option<ZPoint<T>>,
    /// Share of points matched on the overlap for the best candidate.
    pub matched_fraction: f64,
}

impl<T: Scalar> EquivResult<T> {
    pub fn to_json(&self) -> Value {
        json!({
            "equivalent": self.equivalent,
            "translation": self.translation.as_ref().map(point_json),
            "matched_fraction": self.matched_fraction,
        })
    }
}

/// Fraction of matched points between `(a + b) ∩ B(0, rho)` and
/// `c ∩ B(0, rho)`.
fn overlap_match<T: Scalar>(
    a: &[ZPoint<T>],
    b: &ZPoint<T>,
    c: &PointSet<T>,
    rho: f64,
    eps: f64,
) -> f64 {
    let left: Vec<ZPoint<T>> = a
        .iter()
        .map(|z| z + b)
        .filter(|z| within(z, rho, eps))
        .collect();
    let right = c.points().iter().filter(|z| within(z, rho, eps)).count();
    let total = left.len().max(right);
    if total == 0 {
        return 0.0;
    }
    let matched = left.iter().filter(|z| c.contains(z)).count();
    // Unmatched points on either side count against the fraction.
    matched.min(right) as f64 / total as f64
}

/// Searches a translation `b` taking the raw zeros of `w1` onto those of
/// `w2`. Candidates send the first term of `w1` onto a term of `w2` within
/// half of `R₂`, in the canonical order of `w2`; the sets are compared on the
/// ball of radius `min(R₁, R₂) − ‖b‖`.
pub fn translation_equiv<T: Scalar>(
    w1: &ZeroWindow<T>,
    w2: &ZeroWindow<T>,
) -> Result<EquivResult<T>> {
    if w1.is_empty() || w2.is_empty() {
        return Err(Error::EmptyWindow);
    }
    if w1.mode().name() != w2.mode().name() {
        return Err(Error::ModeMismatch);
    }
    let eps = w1.eps().max(w2.eps());
    let raw1: Vec<ZPoint<T>> = w1.raw_points().collect();
    let raw2: Vec<ZPoint<T>> = w2.raw_points().collect();
    let set2 = PointSet::from_points(&raw2, eps);
    let first = raw1
        .iter()
        .zip(w1.points())
        .find(|(_, p)| p.is_zero() || (!T::EXACT && p.approx_eq(&ZPoint::zero(), eps)))
        .map(|(r, _)| r.clone())
        .unwrap_or_else(|| raw1[0].clone());
    let first2 = &raw2[0];
    let mut best = 0.0f64;
    for z in &raw2 {
        // Half-radius ball about the raw origin or about the first point of w2.
        if !within(z, w2.radius() / 2.0, eps) && !within(&(z - first2), w2.radius() / 2.0, eps) {
            continue;
        }
        let b = z - &first;
        let rho = w1.radius().min(w2.radius()) - b.norm();
        if rho <= 0.0 {
            continue;
        }
        let fraction = overlap_match(&raw1, &b, &set2, rho, eps);
        if fraction == 1.0 {
            return Ok(EquivResult {
                equivalent: true,
                translation: Some(b),
                matched_fraction: 1.0,
            });
        }
        best = best.max(fraction);
    }
    Ok(EquivResult {
        equivalent: false,
        translation: None,
        matched_fraction: best,
    })
}

/// [`translation_equiv`] on windows of either mode.
pub fn translation_equiv_any(w1: &AnyWindow, w2: &AnyWindow) -> Result<Value> {
    match (w1, w2) {
        (AnyWindow::Exact(a), AnyWindow::Exact(b)) => Ok(translation_equiv(a, b)?.to_json()),
        (AnyWindow::Float(a), AnyWindow::Float(b)) => Ok(translation_equiv(a, b)?.to_json()),
        _ => Err(Error::ModeMismatch),
    }
}

/// An affine map `z ↦ A z + t` of window coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap<T> {
    pub linear: Mat2<T>,
    pub translation: ZPoint<T>,
}

impl<T: Scalar> AffineMap<T> {
    pub fn apply(&self, z: &ZPoint<T>) -> ZPoint<T> {
        &self.linear.apply(z) + &self.translation
    }

    pub fn is_identity(&self) -> bool {
        self.linear == Mat2::identity() && self.translation.is_zero()
    }

    pub fn to_json(&self) -> Value {
        json!({"linear": self.linear.to_json(), "translation": point_json(&self.translation)})
    }
}

/// `s·P_u + sign(s)·P_⊥` for the orthogonal projections along and across `u`.
fn line_scaling<T: Scalar>(u: &ZPoint<T>, s: &T) -> Mat2<T> {
    let n = u.norm2();
    let (x, y) = (u.re.clone(), u.im.clone());
    let pu = Mat2::new(
        x.clone() * x.clone() / n.clone(),
        x.clone() * y.clone() / n.clone(),
        x.clone() * y.clone() / n.clone(),
        y.clone() * y / n,
    );
    let perp = Mat2::identity();
    let sign = if *s > T::zero() { T::one() } else { -T::one() };
    let diff = |a: &T, b: &T| a.clone() - b.clone();
    // s·P_u + sign·(I − P_u)
    Mat2::new(
        s.clone() * pu.a.clone() + sign.clone() * diff(&perp.a, &pu.a),
        s.clone() * pu.b.clone() + sign.clone() * diff(&perp.b, &pu.b),
        s.clone() * pu.c.clone() + sign.clone() * diff(&perp.c, &pu.c),
        s.clone() * pu.d.clone() + sign * diff(&perp.d, &pu.d),
    )
}

/// Affine maps with `det A > 0` preserving the window: for each image `t`
/// of the origin among the inner points, the linear part is searched as in
/// [`crate::veech::stabilizer_candidates`] against the window shifted by
/// `−t`. On a collinear window the linear part is only determined along
/// the line and is reported as `s` along it and `±1` across it.
pub fn affine_automorphisms<T: Scalar>(
    w: &ZeroWindow<T>,
    cfg: &StabilizerSearchConfig,
) -> Result<Vec<AffineMap<T>>> {
    if w.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            found: w.len(),
        });
    }
    let w = w.canonicalize()?;
    cfg.check(w.radius())?;
    let eps = w.eps();
    let r = cfg.inner_radius;
    let bound = cfg.bound(w.radius());
    let pts = w.points();
    let domain: Vec<ZPoint<T>> = pts.iter().filter(|z| within(z, r, eps)).cloned().collect();
    let collinear = is_collinear(pts, eps);
    let mut found = Vec::new();
    for t in &domain {
        let shifted: Vec<ZPoint<T>> = pts.iter().map(|z| z - t).collect();
        let inv_domain: Vec<ZPoint<T>> = shifted
            .iter()
            .filter(|z| within(z, r, eps))
            .cloned()
            .collect();
        let linear_parts = if collinear {
            collinear_search(&domain, &shifted, &inv_domain, pts, bound, eps)?
        } else {
            linear_search(
                &domain,
                &shifted,
                Some((&inv_domain, pts)),
                bound,
                cfg.require_non_contracting,
                eps,
            )?
            .into_iter()
            .filter(|a| {
                // `linear_search` seeds its result with `Id`; keep it only when
                // it genuinely passes for this translation.
                *a != Mat2::identity() || maps_all(a, &domain, &shifted, &inv_domain, pts, eps)
            })
            .collect()
        };
        found.extend(linear_parts.into_iter().map(|linear| AffineMap {
            linear,
            translation: t.clone(),
        }));
    }
    Ok(found)
}

fn maps_all<T: Scalar>(
    a: &Mat2<T>,
    domain: &[ZPoint<T>],
    target: &[ZPoint<T>],
    inv_domain: &[ZPoint<T>],
    inv_target: &[ZPoint<T>],
    eps: f64,
) -> bool {
    let Some(inv) = a.inverse() else { return false };
    let tset = PointSet::from_points(target, eps);
    let iset = PointSet::from_points(inv_target, eps);
    domain.iter().all(|z| tset.contains(&a.apply(z)))
        && inv_domain.iter().all(|z| iset.contains(&inv.apply(z)))
}

fn collinear_search<T: Scalar>(
    domain: &[ZPoint<T>],
    target: &[ZPoint<T>],
    inv_domain: &[ZPoint<T>],
    inv_target: &[ZPoint<T>],
    bound: f64,
    eps: f64,
) -> Result<Vec<Mat2<T>>> {
    let Some(p) = domain.iter().find(|z| !z.approx_eq(&ZPoint::zero(), eps)) else {
        return Ok(Vec::new());
    };
    let tset = PointSet::from_points(target, eps);
    let iset = PointSet::from_points(inv_target, eps);
    let mut out: Vec<Mat2<T>> = Vec::new();
    for image in target {
        if image.approx_eq(&ZPoint::zero(), eps) {
            continue;
        }
        let s = image.dot(p) / p.norm2();
        if s.to_f64().abs() > bound + eps {
            continue;
        }
        let a = line_scaling(p, &s);
        if out.iter().any(|m| m.approx_eq(&a, eps)) {
            continue;
        }
        let Some(inv) = a.inverse() else { continue };
        if domain.iter().all(|z| tset.contains(&a.apply(z)))
            && inv_domain.iter().all(|z| iset.contains(&inv.apply(z)))
        {
            out.push(a);
        }
    }
    out.sort_by(|a, b| {
        let key = |m: &Mat2<T>| (*m != Mat2::identity(), m.sigma_max());
        let (ka, kb) = (key(a), key(b));
        ka.0.cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
    });
    Ok(out)
}

/// A window in translation-normalized and reciprocal coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuliForm<T> {
    /// Window translated so that its first term is 0.
    pub canonical_points: Vec<ZPoint<T>>,
    /// `1/z` for each nonzero canonical point.
    pub c0_coords: Vec<ZPoint<T>>,
    /// Largest modulus among `c0_coords`; 0 when there are none.
    pub sup_norm: f64,
    pub empty: bool,
}

impl<T: Scalar> ModuliForm<T> {
    pub fn to_json(&self) -> Value {
        json!({
            "canonical_points": self.canonical_points.iter().map(point_json).collect::<Vec<_>>(),
            "c0_coords": self.c0_coords.iter().map(point_json).collect::<Vec<_>>(),
            "sup_norm": self.sup_norm,
            "empty": self.empty,
        })
    }
}

pub fn moduli_canonical<T: Scalar>(w: &ZeroWindow<T>) -> Result<ModuliForm<T>> {
    let w = w.canonicalize()?;
    let c0_coords = w.inverted();
    let empty = c0_coords.is_empty();
    let sup = if empty { 0.0 } else { sup_norm(&c0_coords)? };
    Ok(ModuliForm {
        canonical_points: w.points().to_vec(),
        c0_coords,
        sup_norm: sup,
        empty,
    })
}

/// Termwise `w ↦ w / (1 + b w)`.
pub fn moduli_action<T: Scalar>(c0: &[ZPoint<T>], b: &ZPoint<T>) -> Result<Vec<ZPoint<T>>> {
    let one = ZPoint::new(T::one(), T::zero());
    c0.iter()
        .enumerate()
        .map(|(index, w)| {
            let den = &one + &b.mul(w);
            w.div(&den).ok_or(Error::PoleInAction { index })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::zseq::{generate, GeneratorSpec};

    type Q = ZPoint<Rational>;

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    fn explicit(points: Vec<Q>, r: f64) -> ZeroWindow<Rational> {
        generate(&GeneratorSpec::Explicit(points), r, 0.0).unwrap()
    }

    #[test]
    fn planted_translation() {
        let base: Vec<Q> = [(0, 0), (1, 0), (0, 2), (3, 1), (-2, 1), (1, -3)]
            .iter()
            .map(|&(a, b)| Q::from_ints(a, b))
            .collect();
        let b = Q::from_ints(3, 1);
        let w1 = explicit(base.clone(), 20.0);
        let w2 = explicit(base.iter().map(|z| z + &b).collect(), 20.0);
        let res = translation_equiv(&w1, &w2).unwrap();
        assert!(res.equivalent);
        assert_eq!(res.translation, Some(b.clone()));
        assert_eq!(res.matched_fraction, 1.0);
        let back = translation_equiv(&w2, &w1).unwrap();
        assert_eq!(back.translation, Some(-b));
        assert_eq!(
            translation_equiv(&w1, &w1).unwrap().translation,
            Some(Q::zero())
        );
    }

    #[test]
    fn positive_vs_nonnegative_integers() {
        let pos = generate::<Rational>(&GeneratorSpec::PositiveIntegers, 20.0, 0.0).unwrap();
        let nonneg = explicit((0..=20).map(|k| Q::from_ints(k, 0)).collect(), 20.0);
        let res = translation_equiv(&pos, &nonneg).unwrap();
        assert!(res.equivalent);
        assert_eq!(res.translation, Some(Q::from_ints(-1, 0)));
        let lattice = generate::<Rational>(&GeneratorSpec::GaussianLattice, 20.0, 0.0).unwrap();
        let res = translation_equiv(&pos, &lattice).unwrap();
        assert!(!res.equivalent);
        assert!(res.translation.is_none());
        assert!(res.matched_fraction < 1.0);
    }

    #[test]
    fn mixed_modes_are_rejected() {
        let a = AnyWindow::Exact(generate(&GeneratorSpec::AllIntegers, 5.0, 0.0).unwrap());
        let b = AnyWindow::Float(generate(&GeneratorSpec::AllIntegers, 5.0, 1e-9).unwrap());
        assert_eq!(translation_equiv_any(&a, &b), Err(Error::ModeMismatch));
    }

    #[test]
    fn integer_shift_is_an_automorphism() {
        let w = generate::<Rational>(&GeneratorSpec::AllIntegers, 12.0, 0.0).unwrap();
        let maps = affine_automorphisms(&w, &StabilizerSearchConfig::new(4.0)).unwrap();
        assert!(maps[0].is_identity());
        let shift = AffineMap {
            linear: Mat2::identity(),
            translation: Q::from_ints(1, 0),
        };
        assert!(maps.contains(&shift));
        let flip = AffineMap {
            linear: Mat2::from_ints(-1, 0, 0, -1),
            translation: Q::zero(),
        };
        assert!(maps.contains(&flip));
    }

    #[test]
    fn lattice_rotation_is_an_automorphism() {
        let w = generate::<Rational>(&GeneratorSpec::GaussianLattice, 6.0, 0.0).unwrap();
        let maps = affine_automorphisms(&w, &StabilizerSearchConfig::new(2.0)).unwrap();
        assert!(maps.contains(&AffineMap {
            linear: Mat2::from_ints(0, -1, 1, 0),
            translation: Q::zero(),
        }));
    }

    #[test]
    fn perturbed_lattice_is_rigid() {
        let mut pts: Vec<Q> = (-6..=6)
            .flat_map(|x| (-6..=6).map(move |y| Q::from_ints(x, y)))
            .collect();
        let moved = pts.iter().position(|z| *z == Q::from_ints(1, 1)).unwrap();
        pts[moved] = Q::new(q(4, 3), q(8, 7));
        let w = explicit(pts, 6.0);
        let maps = affine_automorphisms(&w, &StabilizerSearchConfig::new(2.0)).unwrap();
        assert_eq!(maps.len(), 1);
        assert!(maps[0].is_identity());
    }

    #[test]
    fn moduli_forms() {
        let w = explicit((1..=4).map(|k| Q::from_ints(k, 0)).collect(), 4.0);
        let form = moduli_canonical(&w).unwrap();
        assert_eq!(
            form.canonical_points,
            (0..4).map(|k| Q::from_ints(k, 0)).collect::<Vec<_>>()
        );
        assert_eq!(
            form.c0_coords,
            vec![
                Q::from_ints(1, 0),
                Q::new(q(1, 2), q(0, 1)),
                Q::new(q(1, 3), q(0, 1))
            ]
        );
        assert_eq!(form.sup_norm, 1.0);

        let w = explicit(vec![Q::zero(), Q::from_ints(0, 1), Q::from_ints(0, 2)], 2.0);
        let form = moduli_canonical(&w).unwrap();
        assert_eq!(
            form.c0_coords,
            vec![Q::from_ints(0, -1), Q::new(q(0, 1), q(-1, 2))]
        );
        assert_eq!(form.sup_norm, 1.0);

        let single = explicit(vec![Q::from_ints(5, 0)], 5.0);
        let form = moduli_canonical(&single).unwrap();
        assert_eq!(form.canonical_points, vec![Q::zero()]);
        assert!(form.c0_coords.is_empty() && form.empty);
        assert_eq!(form.sup_norm, 0.0);
    }

    #[test]
    fn moduli_action_examples() {
        let c0 = vec![Q::from_ints(1, 0), Q::new(q(1, 2), q(1, 3))];
        assert_eq!(moduli_action(&c0, &Q::zero()).unwrap(), c0);
        assert_eq!(
            moduli_action(&[Q::from_ints(1, 0)], &Q::from_ints(1, 0)).unwrap(),
            vec![Q::new(q(1, 2), q(0, 1))]
        );
        assert_eq!(
            moduli_action(
                &[Q::from_ints(2, 0), Q::from_ints(1, 0)],
                &Q::from_ints(-1, 0)
            ),
            Err(Error::PoleInAction { index: 1 })
        );
        // 1/(1/w + b) = w/(1 + b w): the action translates the reciprocal points.
        let b = Q::new(q(2, 5), q(-1, 3));
        let acted = moduli_action(&c0, &b).unwrap();
        for (w, v) in c0.iter().zip(&acted) {
            assert_eq!(v.recip().unwrap(), &w.recip().unwrap() + &b);
        }
    }
}
