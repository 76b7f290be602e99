//! Flat geometry of infinite hyperelliptic curves `S(f, m) = {w^m = f(z)}`.
//!
//! The translation structure of `S(f, m)` is pulled back from the plane by
//! the projection `(z, w) ↦ z`, so every analysis here works on a finite
//! window of the zero sequence of `f`:
//!
//! - [`zseq`]: canonical windows, generators and validation.
//! - [`weierstrass`]: truncated Weierstrass products and zero checks.
//! - [`flatgeom`]: saddle connections, holonomy vectors and their directions.
//! - [`cover`]: the cyclic branched cover, path lifting and cone angles.
//! - [`veech`]: Veech group classification and stabilizer bounds.
//! - [`equiv`]: translation equivalence, affine automorphisms and moduli
//!   coordinates.

pub mod cover;
pub mod equiv;
pub mod error;
pub mod flatgeom;
pub mod matrix;
pub mod point;
pub mod scalar;
pub mod veech;
pub mod weierstrass;
pub mod zseq;

pub use error::{Error, Result};
pub use matrix::{is_contracting, Mat2};
pub use point::{PointSet, ZPoint};
pub use scalar::{Rational, Scalar};
pub use zseq::{generate, AnyWindow, GeneratorSpec, Mode, ZeroWindow};

pub use cover::{cone_angle, fiber, lift_saddle, CoverPoint, CutSystem, SingularitySets};
pub use equiv::{
    affine_automorphisms, moduli_action, moduli_canonical, translation_equiv, AffineMap,
    EquivResult, ModuliForm,
};
pub use flatgeom::{
    direction_profile, holonomy, is_visible, saddle_connections, DirectionProfile, HolonomySet,
    SaddleSegment,
};
pub use veech::{
    classify, group_closure_check, hol_stabilizer, pprime_symmetry, sandwich_report,
    stabilizer_candidates, StabilizerSearchConfig, VeechClass, VeechKind,
};
pub use weierstrass::{
    choose_degrees, count_zeros, elementary_factor, eval_f, refine_zero, Degrees, ProductSpec,
    Rect, ZeroCheck,
};
