//! # entrovol
//!
//! A desk-scale (dimension n <= 6) numerical toolkit for convex bodies and
//! kappa-concave probability measures: Minkowski sums, exact and Monte Carlo
//! volumes, differential entropy estimators, essential supports, isotropic
//! and M-positions, and a harness that checks the entropy-volume inequalities
//! relating all of these.
//!
//! Everything random is driven by [`rng::SeededStream`]: a root seed plus a
//! label path fully determines every sample, so suite reports are
//! bit-reproducible for any worker count.
//!
//! Entropies are in nats throughout; the entropy power of an n-dimensional
//! random vector is `exp(2 h / n)`.

pub mod bodies;
pub mod checks;
pub mod entropy;
pub mod linalg;
pub mod lp;
pub mod measures;
pub mod positions;
pub mod rng;
pub mod special;
pub mod support;

use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("dimension {0} exceeds the Monte Carlo cap of {MAX_MC_DIM}")]
    DimensionCap(usize),

    #[error("matrix is not symmetric positive definite")]
    NotSpd,

    #[error("matrix is singular")]
    Singular,

    #[error("exact volume unavailable for this body variant")]
    ExactVolumeUnavailable,

    #[error("membership oracle unavailable: {0}")]
    OracleUnavailable(&'static str),

    #[error("body is unbounded or degenerate: {0}")]
    BadBody(&'static str),

    #[error("rejection cap exceeded and hit-and-run unavailable")]
    SamplingFailed,

    #[error("density family is not directly evaluable")]
    NotEvaluable,

    #[error("no closed-form entropy for this family")]
    NoClosedForm,

    #[error("no closed-form level set for this family")]
    NoClosedFormLevelSet,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Hit-or-miss volume estimation degrades exponentially with dimension;
/// all MC paths refuse to run above this.
pub const MAX_MC_DIM: usize = 6;

/// Feasibility tolerance for linear-programming membership oracles.
pub const TOL_LP: f64 = 1e-9;

/// Tolerance on |det - 1| for volume-preserving maps.
pub const TOL_DET: f64 = 1e-10;
