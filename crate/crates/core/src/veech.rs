//! Veech group classification from a zero window.
//!
//! A collinear zero set gives an uncountable Veech group, conjugate to `P`
//! or, when the set has a point symmetry, to `P′`. Otherwise the group is
//! countable and is bracketed by two window-consistent searches: linear
//! maps permuting the zeros (lower bound) and linear maps permuting the
//! holonomy vectors (upper bound).

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::flatgeom::{all_parallel, holonomy, is_collinear, line_direction, HolonomySet};
pub use crate::matrix::{is_contracting, Mat2};
use crate::point::{PointSet, ZPoint};
use crate::scalar::Scalar;
use crate::zseq::{within, ZeroWindow};

/// Parameters of the finite stabilizer search.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerSearchConfig {
    /// Domain radius `r`; candidate maps are tested on `W ∩ B(0, r)`.
    pub inner_radius: f64,
    /// Bound on `|entry|`; `None` means `R / r`.
    pub entry_bound: Option<f64>,
    pub require_non_contracting: bool,
}

impl StabilizerSearchConfig {
    pub fn new(inner_radius: f64) -> Self {
        StabilizerSearchConfig {
            inner_radius,
            entry_bound: None,
            require_non_contracting: true,
        }
    }

    /// `r = R / 3`.
    pub fn for_window<T: Scalar>(w: &ZeroWindow<T>) -> Self {
        Self::new(w.radius() / 3.0)
    }

    pub fn with_entry_bound(mut self, bound: f64) -> Self {
        self.entry_bound = Some(bound);
        self
    }

    pub(crate) fn bound(&self, outer: f64) -> f64 {
        self.entry_bound.unwrap_or(outer / self.inner_radius)
    }

    pub(crate) fn check(&self, outer: f64) -> Result<()> {
        let r = self.inner_radius;
        if !(r > 0.0 && r < outer) {
            return Err(Error::InvalidInput(format!(
                "inner radius {r} must lie in (0, {outer})"
            )));
        }
        if let Some(e) = self.entry_bound {
            if !(e > 0.0 && e.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "entry bound {e} must be positive"
                )));
            }
        }
        Ok(())
    }
}

/// Classification result.
#[derive(Clone, Debug, PartialEq)]
pub enum VeechKind<T> {
    /// Conjugate to `P` by the rotation taking the zero line to the real axis.
    UncountableP { theta: f64 },
    /// Conjugate to `P′`; `center` is the symmetry center found.
    UncountablePPrime { theta: f64, center: ZPoint<T> },
    Countable {
        lower: Vec<Mat2<T>>,
        upper: Vec<Mat2<T>>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct VeechClass<T> {
    pub kind: VeechKind<T>,
    pub window_consistent: bool,
}

impl<T: Scalar> VeechClass<T> {
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            VeechKind::UncountableP { .. } => "P",
            VeechKind::UncountablePPrime { .. } => "Pprime",
            VeechKind::Countable { .. } => "Countable",
        }
    }

    pub fn theta(&self) -> Option<f64> {
        match self.kind {
            VeechKind::UncountableP { theta } | VeechKind::UncountablePPrime { theta, .. } => {
                Some(theta)
            }
            VeechKind::Countable { .. } => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mats = |v: &[Mat2<T>]| v.iter().map(Mat2::to_json).collect::<Vec<_>>();
        match &self.kind {
            VeechKind::UncountableP { theta } => json!({
                "kind": self.kind_name(),
                "theta": theta,
                "window_consistent": self.window_consistent,
            }),
            VeechKind::UncountablePPrime { theta, center } => json!({
                "kind": self.kind_name(),
                "theta": theta,
                "center": crate::zseq::point_json(center),
                "window_consistent": self.window_consistent,
            }),
            VeechKind::Countable { lower, upper } => json!({
                "kind": self.kind_name(),
                "lower": mats(lower),
                "upper": mats(upper),
                "window_consistent": self.window_consistent,
            }),
        }
    }
}

fn norm_within<T: Scalar>(z: &ZPoint<T>, r: f64, eps: f64) -> bool {
    within(z, r, eps)
}

/// Window-consistent linear maps permuting a point set.
///
/// A domain and target pair for the inverse check.
pub(crate) type PointSlices<'a, T> = (&'a [ZPoint<T>], &'a [ZPoint<T>]);

/// Every candidate is fixed by the images of an anchor pair `(p, q)` taken
/// from `domain`; it is kept when it sends each domain point into `target`
/// and its inverse does the same for `inverse_sets` (default: the same
/// domain and target).
pub(crate) fn linear_search<T: Scalar>(
    domain: &[ZPoint<T>],
    target: &[ZPoint<T>],
    inverse_sets: Option<PointSlices<'_, T>>,
    bound: f64,
    require_non_contracting: bool,
    eps: f64,
) -> Result<Vec<Mat2<T>>> {
    let tol = if T::EXACT {
        0.0
    } else {
        eps * (1.0 + 2.0 * bound)
    };
    let p = domain
        .iter()
        .find(|z| !z.approx_eq(&ZPoint::zero(), eps))
        .ok_or(Error::DegenerateWindow)?;
    let q = domain
        .iter()
        .find(|z| {
            let c = p.cross(z);
            if T::EXACT {
                !c.is_zero()
            } else {
                c.to_f64().abs() > eps * p.norm().max(z.norm()).max(1.0)
            }
        })
        .ok_or(Error::DegenerateWindow)?;
    let basis_inv = Mat2::from_columns(p, q)
        .inverse()
        .ok_or(Error::DegenerateWindow)?;
    let target_set = PointSet::from_points(target, tol.max(eps));
    // With |entries| ≤ bound, each coordinate of A z is at most
    // bound·(|x| + |y|) in absolute value.
    let pool = |z: &ZPoint<T>| -> Vec<&ZPoint<T>> {
        let c = z.to_complex();
        let reach = bound * (c.re.abs() + c.im.abs()) + tol + eps;
        target
            .iter()
            .filter(|t| {
                let tc = t.to_complex();
                tc.re.abs() <= reach && tc.im.abs() <= reach
            })
            .collect()
    };
    let (pool_p, pool_q) = (pool(p), pool(q));
    let bound_t = T::from_f64(bound).ok_or_else(|| Error::InvalidInput("entry bound".into()))?;
    let slack = T::from_f64(tol).unwrap_or_else(T::zero);

    let (inv_domain, inv_target) = inverse_sets.unwrap_or((domain, target));
    let inv_target_set = match inverse_sets {
        Some(_) => PointSet::from_points(inv_target, tol.max(eps)),
        None => target_set.clone(),
    };
    let maps_into = |m: &Mat2<T>| domain.iter().all(|z| target_set.contains(&m.apply(z)));
    let inverse_maps_into = |m: &Mat2<T>| {
        inv_domain
            .iter()
            .all(|z| inv_target_set.contains(&m.apply(z)))
    };

    let prefilter = T::EXACT
        .then(|| FloatFilter::new(&basis_inv, domain, target, inv_domain, inv_target, bound));

    let mut found: Vec<Mat2<T>> = vec![Mat2::identity()];
    for pi in &pool_p {
        for qi in &pool_q {
            if let Some(f) = &prefilter {
                if !f.passes(pi.to_complex(), qi.to_complex()) {
                    continue;
                }
            }
            let a = Mat2::from_columns(pi, qi).mul(&basis_inv);
            if !a.entries_within(&(bound_t.clone() + slack.clone())) {
                continue;
            }
            if a.det().sign_tol(eps) <= 0 {
                continue;
            }
            if require_non_contracting && is_contracting(&a)? {
                continue;
            }
            if found.iter().any(|f| f.approx_eq(&a, tol.max(eps))) {
                continue;
            }
            let Some(inv) = a.inverse() else { continue };
            if maps_into(&a) && inverse_maps_into(&inv) {
                found.push(a);
            }
        }
    }
    Ok(found)
}

/// Double precision screen for exact searches. It only rejects maps that
/// are far from passing, so every exact survivor is still checked exactly.
struct FloatFilter {
    basis_inv: [f64; 4],
    domain: Vec<Complex64>,
    target: PointSet<f64>,
    inv_domain: Vec<Complex64>,
    inv_target: PointSet<f64>,
    bound: f64,
}

const FILTER_TOL: f64 = 1e-6;

impl FloatFilter {
    fn new<T: Scalar>(
        basis_inv: &Mat2<T>,
        domain: &[ZPoint<T>],
        target: &[ZPoint<T>],
        inv_domain: &[ZPoint<T>],
        inv_target: &[ZPoint<T>],
        bound: f64,
    ) -> Self {
        let to_f =
            |pts: &[ZPoint<T>]| -> Vec<Complex64> { pts.iter().map(ZPoint::to_complex).collect() };
        let to_set = |pts: &[ZPoint<T>]| {
            let fs: Vec<ZPoint<f64>> = pts
                .iter()
                .map(|z| ZPoint::new(z.re.to_f64(), z.im.to_f64()))
                .collect();
            PointSet::from_points(&fs, FILTER_TOL)
        };
        FloatFilter {
            basis_inv: [
                basis_inv.a.to_f64(),
                basis_inv.b.to_f64(),
                basis_inv.c.to_f64(),
                basis_inv.d.to_f64(),
            ],
            domain: to_f(domain),
            target: to_set(target),
            inv_domain: to_f(inv_domain),
            inv_target: to_set(inv_target),
            bound,
        }
    }

    fn passes(&self, p: Complex64, q: Complex64) -> bool {
        let bi = &self.basis_inv;
        let a = [
            p.re * bi[0] + q.re * bi[2],
            p.re * bi[1] + q.re * bi[3],
            p.im * bi[0] + q.im * bi[2],
            p.im * bi[1] + q.im * bi[3],
        ];
        let limit = self.bound * (1.0 + 1e-9) + FILTER_TOL;
        if a.iter().any(|e| e.abs() > limit) {
            return false;
        }
        let det = a[0] * a[3] - a[1] * a[2];
        if det <= -FILTER_TOL {
            return false;
        }
        let maps = |m: [f64; 4], pts: &[Complex64], set: &PointSet<f64>| {
            pts.iter().all(|z| {
                set.contains(&ZPoint::new(
                    m[0] * z.re + m[1] * z.im,
                    m[2] * z.re + m[3] * z.im,
                ))
            })
        };
        if !maps(a, &self.domain, &self.target) {
            return false;
        }
        if det.abs() < FILTER_TOL {
            // Too close to singular to screen the inverse.
            return true;
        }
        let inv = [a[3] / det, -a[1] / det, -a[2] / det, a[0] / det];
        maps(inv, &self.inv_domain, &self.inv_target)
    }
}

/// Linear maps `A` with `det A > 0` and entries within the bound such that
/// `A` and `A⁻¹` both send `W ∩ B(0, r)` into `W`. Always contains `Id`.
pub fn stabilizer_candidates<T: Scalar>(
    w: &ZeroWindow<T>,
    cfg: &StabilizerSearchConfig,
) -> Result<Vec<Mat2<T>>> {
    cfg.check(w.radius())?;
    let domain: Vec<ZPoint<T>> = w
        .inner_indices(cfg.inner_radius)
        .into_iter()
        .map(|i| w.points()[i].clone())
        .collect();
    linear_search(
        &domain,
        w.points(),
        None,
        cfg.bound(w.radius()),
        cfg.require_non_contracting,
        w.eps(),
    )
}

/// The same search over holonomy vectors: certified vectors of norm at most
/// `r` form the domain, the whole set is the target.
pub fn hol_stabilizer<T: Scalar>(
    h: &HolonomySet<T>,
    cfg: &StabilizerSearchConfig,
) -> Result<Vec<Mat2<T>>> {
    cfg.check(h.window_radius())?;
    if all_parallel(h.vectors(), h.eps()) {
        return Err(Error::DegenerateWindow);
    }
    let domain: Vec<ZPoint<T>> = h
        .certified_vectors()
        .into_iter()
        .filter(|v| norm_within(v, cfg.inner_radius, h.eps()))
        .collect();
    linear_search(
        &domain,
        h.vectors(),
        None,
        cfg.bound(h.window_radius()),
        cfg.require_non_contracting,
        h.eps(),
    )
}

/// Both bounds of the sandwich and whether the lower one sits in the upper.
#[derive(Clone, Debug, PartialEq)]
pub struct SandwichReport<T> {
    pub lower: Vec<Mat2<T>>,
    pub upper: Vec<Mat2<T>>,
    pub containment_ok: bool,
    /// Lower candidates that fail to preserve the holonomy window.
    pub outside_upper: Vec<usize>,
}

impl<T: Scalar> SandwichReport<T> {
    pub fn to_json(&self) -> Value {
        json!({
            "lower": self.lower.iter().map(Mat2::to_json).collect::<Vec<_>>(),
            "upper": self.upper.iter().map(Mat2::to_json).collect::<Vec<_>>(),
            "containment_ok": self.containment_ok,
            "outside_upper": self.outside_upper,
        })
    }
}

/// Lower and upper stabilizer bounds of a non-collinear window.
pub fn sandwich_report<T: Scalar>(
    w: &ZeroWindow<T>,
    cfg: &StabilizerSearchConfig,
) -> Result<SandwichReport<T>> {
    let w = w.canonicalize()?;
    if w.len() < 3 || is_collinear(w.points(), w.eps()) {
        return Err(Error::DegenerateWindow);
    }
    let lower = stabilizer_candidates(&w, cfg)?;
    let hol = holonomy(&w);
    let upper = hol_stabilizer(&hol, cfg)?;
    let tol = w.eps().max(if T::EXACT { 0.0 } else { 1e-9 });
    let hol_set = hol.point_set();
    let domain: Vec<ZPoint<T>> = hol
        .certified_vectors()
        .into_iter()
        .filter(|v| norm_within(v, cfg.inner_radius, hol.eps()))
        .collect();
    let preserves = |a: &Mat2<T>| {
        let inv = a.inverse();
        domain.iter().all(|v| {
            hol_set.contains(&a.apply(v))
                && inv.as_ref().is_some_and(|i| hol_set.contains(&i.apply(v)))
        })
    };
    let outside_upper: Vec<usize> = lower
        .iter()
        .enumerate()
        .filter(|(_, a)| !upper.iter().any(|u| u.approx_eq(a, tol)) && !preserves(a))
        .map(|(i, _)| i)
        .collect();
    Ok(SandwichReport {
        containment_ok: outside_upper.is_empty(),
        lower,
        upper,
        outside_upper,
    })
}

/// Products that should have been candidates but were not.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosureReport {
    /// Number of products inside the testable range.
    pub checked: usize,
    /// Index pairs `(i, j)` whose product `cands[i]·cands[j]` is missing.
    pub violations: Vec<(usize, usize)>,
}

impl ClosureReport {
    pub fn is_closed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({"checked": self.checked, "violations": self.violations, "closed": self.is_closed()})
    }
}

/// Checks that products of candidates are candidates whenever the product
/// is testable: entries within the bound and both it and its inverse keep
/// the inner ball inside the window ball.
pub fn group_closure_check<T: Scalar>(
    cands: &[Mat2<T>],
    w: &ZeroWindow<T>,
    cfg: &StabilizerSearchConfig,
) -> Result<ClosureReport> {
    if cands.is_empty() {
        return Err(Error::InvalidInput("no candidates to check".into()));
    }
    cfg.check(w.radius())?;
    let bound = cfg.bound(w.radius());
    let bound_t = T::from_f64(bound).ok_or_else(|| Error::InvalidInput("entry bound".into()))?;
    let (r, big_r) = (cfg.inner_radius, w.radius());
    let tol = if T::EXACT {
        0.0
    } else {
        w.eps() * (1.0 + 2.0 * bound)
    };
    let mut report = ClosureReport {
        checked: 0,
        violations: Vec::new(),
    };
    for (i, a) in cands.iter().enumerate() {
        for (j, b) in cands.iter().enumerate() {
            let ab = a.mul(b);
            let Some(inv) = ab.inverse() else { continue };
            let testable = ab.entries_within(&bound_t)
                && ab.sigma_max() * r <= big_r
                && inv.sigma_max() * r <= big_r
                && !(cfg.require_non_contracting && is_contracting(&ab)?);
            if !testable {
                continue;
            }
            report.checked += 1;
            if !cands.iter().any(|c| c.approx_eq(&ab, tol.max(w.eps()))) {
                report.violations.push((i, j));
            }
        }
    }
    Ok(report)
}

/// Center `c` of a point reflection `z ↦ 2c − z` preserving a collinear
/// window, searched among points and pair midpoints within the inner radius
/// of the ball center. The reflection is tested on every window point whose
/// image stays in the window ball. Returns the candidate nearest the center.
pub fn pprime_symmetry<T: Scalar>(w: &ZeroWindow<T>, inner_radius: f64) -> Option<ZPoint<T>> {
    let center = w.center().clone();
    let near = |z: &ZPoint<T>| within(&(z - &center), inner_radius, w.eps());
    let pts = w.points();
    let set = w.point_set();
    let two = T::from_i64(2);
    let half = T::frac(1, 2);

    let mut candidates: Vec<ZPoint<T>> = Vec::new();
    let mut seen = PointSet::new(w.eps());
    for i in 0..pts.len() {
        for j in i..pts.len() {
            let c = (&pts[i] + &pts[j]).scale(&half);
            if near(&c) && seen.insert(c.clone()).1 {
                candidates.push(c);
            }
        }
    }
    candidates.sort_by(|a, b| {
        (a - &center)
            .norm()
            .total_cmp(&(b - &center).norm())
            .then_with(|| crate::point::cmp_arg(&(a - &center), &(b - &center)))
    });
    candidates.into_iter().find(|c| {
        let twice = c.scale(&two);
        pts.iter().all(|z| {
            let image = &twice - z;
            !w.in_ball(&image) || set.contains(&image)
        })
    })
}

/// Classifies the Veech group of `S(f, m)` from a window of the zeros of `f`.
pub fn classify<T: Scalar>(
    w: &ZeroWindow<T>,
    cfg: &StabilizerSearchConfig,
) -> Result<VeechClass<T>> {
    if w.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            found: w.len(),
        });
    }
    let w = w.canonicalize()?;
    if is_collinear(w.points(), w.eps()) {
        let theta = line_direction(w.points(), w.eps()).ok_or(Error::DegenerateWindow)?;
        let kind = match pprime_symmetry(&w, cfg.inner_radius) {
            Some(center) => VeechKind::UncountablePPrime { theta, center },
            None => VeechKind::UncountableP { theta },
        };
        return Ok(VeechClass {
            kind,
            window_consistent: true,
        });
    }
    let report = sandwich_report(&w, cfg)?;
    Ok(VeechClass {
        window_consistent: report.containment_ok,
        kind: VeechKind::Countable {
            lower: report.lower,
            upper: report.upper,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flatgeom::HolonomySet;
    use crate::scalar::Rational;
    use crate::zseq::{generate, GeneratorSpec};

    type M = Mat2<Rational>;

    fn win(spec: GeneratorSpec<Rational>, r: f64) -> ZeroWindow<Rational> {
        generate(&spec, r, 0.0).unwrap()
    }

    fn kind(spec: GeneratorSpec<Rational>) -> VeechClass<Rational> {
        let w = win(spec, 30.0);
        classify(&w, &StabilizerSearchConfig::new(10.0)).unwrap()
    }

    #[test]
    fn collinear_families() {
        let p = kind(GeneratorSpec::PositiveIntegers);
        assert_eq!(p.kind, VeechKind::UncountableP { theta: 0.0 });
        let pp = kind(GeneratorSpec::AllIntegers);
        assert_eq!(pp.kind_name(), "Pprime");
        assert_eq!(pp.theta(), Some(0.0));
        assert_eq!(
            kind(GeneratorSpec::Odd4n13 { all_n: false }).kind_name(),
            "P"
        );
        assert_eq!(
            kind(GeneratorSpec::Odd4n13 { all_n: true }).kind_name(),
            "Pprime"
        );
    }

    #[test]
    fn symmetry_centers() {
        let ints = win(GeneratorSpec::AllIntegers, 30.0);
        assert_eq!(pprime_symmetry(&ints, 10.0), Some(ZPoint::zero()));
        let pos = win(GeneratorSpec::PositiveIntegers, 30.0);
        assert_eq!(pprime_symmetry(&pos, 10.0), None);
    }

    #[test]
    fn lattice_candidates() {
        let w = win(GeneratorSpec::GaussianLattice, 6.0);
        let cands = stabilizer_candidates(&w, &StabilizerSearchConfig::new(2.0)).unwrap();
        assert!(cands.contains(&M::identity()));
        assert!(cands.contains(&M::from_ints(1, 1, 0, 1)));
        assert!(cands.contains(&M::from_ints(0, -1, 1, 0)));
        for a in &cands {
            assert!(a.is_integral());
            assert_eq!(a.det(), Rational::frac(1, 1));
        }
    }

    #[test]
    fn toy_holonomy_stabilizer() {
        let vs: Vec<ZPoint<Rational>> = [(1, 0), (0, 1)]
            .iter()
            .map(|&(a, b)| ZPoint::from_ints(a, b))
            .collect();
        let h = HolonomySet::from_vectors(vs, 3.0, 0.0);
        let found = hol_stabilizer(&h, &StabilizerSearchConfig::new(1.0)).unwrap();
        let mut expected = vec![
            M::identity(),
            M::from_ints(0, -1, 1, 0),
            M::from_ints(-1, 0, 0, -1),
            M::from_ints(0, 1, -1, 0),
        ];
        let mut got = found.clone();
        let key = |m: &M| format!("{m:?}");
        got.sort_by_key(key);
        expected.sort_by_key(key);
        assert_eq!(got, expected);

        let tiny = StabilizerSearchConfig::new(1.0).with_entry_bound(0.5);
        assert_eq!(hol_stabilizer(&h, &tiny).unwrap(), vec![M::identity()]);

        let line = HolonomySet::<Rational>::from_vectors(vec![ZPoint::from_ints(1, 0)], 3.0, 0.0);
        assert_eq!(
            hol_stabilizer(&line, &StabilizerSearchConfig::new(1.0)),
            Err(Error::DegenerateWindow)
        );
    }

    #[test]
    fn lattice_sandwich() {
        let w = win(GeneratorSpec::GaussianLattice, 8.0);
        let report = sandwich_report(&w, &StabilizerSearchConfig::new(3.0)).unwrap();
        assert!(report.lower.contains(&M::from_ints(1, 1, 0, 1)));
        assert!(report.upper.contains(&M::from_ints(1, 1, 0, 1)));
        assert!(report.containment_ok);
        let line = win(GeneratorSpec::PositiveIntegers, 8.0);
        assert_eq!(
            sandwich_report(&line, &StabilizerSearchConfig::new(3.0)),
            Err(Error::DegenerateWindow)
        );
    }

    #[test]
    fn shear_orbit_is_stabilized() {
        let shear = M::from_ints(1, 1, 0, 1);
        let spec = GeneratorSpec::Orbit {
            seeds: vec![
                ZPoint::zero(),
                ZPoint::from_ints(1, 0),
                ZPoint::from_ints(0, 1),
            ],
            generators: vec![shear.clone()],
            max_word_length: 12,
        };
        let w = win(spec, 6.0);
        let report = sandwich_report(&w, &StabilizerSearchConfig::new(2.0)).unwrap();
        assert!(report.lower.contains(&shear));
    }

    #[test]
    fn closure_on_the_lattice() {
        let w = win(GeneratorSpec::GaussianLattice, 10.0);
        let cfg = StabilizerSearchConfig::new(2.0).with_entry_bound(3.0);
        let cands = stabilizer_candidates(&w, &cfg).unwrap();
        let report = group_closure_check(&cands, &w, &cfg).unwrap();
        assert!(report.checked > cands.len());
        assert!(report.is_closed(), "{:?}", report.violations);
        let id = group_closure_check(&[M::identity()], &w, &cfg).unwrap();
        assert!(id.is_closed());
    }

    #[test]
    fn float_closure_with_loose_eps_is_reported() {
        let w = generate::<f64>(&GeneratorSpec::GaussianLattice, 10.0, 0.4).unwrap();
        let cfg = StabilizerSearchConfig::new(2.0).with_entry_bound(3.0);
        let cands = stabilizer_candidates(&w, &cfg).unwrap();
        assert!(group_closure_check(&cands, &w, &cfg).is_ok());
    }

    #[test]
    fn too_few_points() {
        let w = win(GeneratorSpec::Explicit(vec![ZPoint::from_ints(5, 0)]), 10.0);
        assert_eq!(
            classify(&w, &StabilizerSearchConfig::new(3.0)),
            Err(Error::TooFewPoints {
                needed: 2,
                found: 1
            })
        );
    }
}
