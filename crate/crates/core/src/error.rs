use thiserror::Error;

/// Errors raised by the analyses in this crate.
///
/// Every variant has a stable machine-readable [`code`](Error::code) that the
/// command line tool emits in its JSON error objects.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("points {first} and {second} coincide")]
    DuplicatePoint { first: usize, second: usize },
    #[error("window contains no points")]
    EmptyWindow,
    #[error("generator {index} is contracting")]
    ContractingGenerator { index: usize },
    #[error("elementary factor with a zero divisor")]
    ZeroDivisor,
    #[error("product is not finite (log magnitude {log_magnitude})")]
    NonFinite { log_magnitude: f64 },
    #[error("contour passes within {distance} of zero {index}")]
    ContourThroughZero { index: usize, distance: f64 },
    #[error("newton iteration did not converge after {iterations} steps")]
    NoConvergence { iterations: usize },
    #[error("path passes through branch point {index}")]
    PathThroughBranchPoint { index: usize },
    #[error("circle radius {radius} exceeds half the minimal gap {half_gap}")]
    RadiusTooLarge { radius: f64, half_gap: f64 },
    #[error("curve degree must be at least 2, got {0}")]
    InvalidDegree(u32),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("window needs at least {needed} points, has {found}")]
    TooFewPoints { needed: usize, found: usize },
    #[error("window has no pair of linearly independent points in the inner ball")]
    DegenerateWindow,
    #[error("windows use different arithmetic modes")]
    ModeMismatch,
    #[error("pole in the translation action at index {index}")]
    PoleInAction { index: usize },
    #[error("segment {from}-{to} is not a saddle connection")]
    NotVisible { from: usize, to: usize },
    #[error("index {index} out of range for window of {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable snake-case identifier used in serialized error objects.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DuplicatePoint { .. } => "duplicate_point",
            Error::EmptyWindow => "empty_window",
            Error::ContractingGenerator { .. } => "contracting_generator",
            Error::ZeroDivisor => "zero_divisor",
            Error::NonFinite { .. } => "non_finite",
            Error::ContourThroughZero { .. } => "contour_through_zero",
            Error::NoConvergence { .. } => "no_convergence",
            Error::PathThroughBranchPoint { .. } => "path_through_branch_point",
            Error::RadiusTooLarge { .. } => "radius_too_large",
            Error::InvalidDegree(_) => "invalid_degree",
            Error::SingularMatrix => "singular_matrix",
            Error::TooFewPoints { .. } => "too_few_points",
            Error::DegenerateWindow => "degenerate_window",
            Error::ModeMismatch => "mode_mismatch",
            Error::PoleInAction { .. } => "pole_in_action",
            Error::NotVisible { .. } => "not_visible",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::InvalidInput(_) => "invalid_input",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
