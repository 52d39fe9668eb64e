//! Exact and numeric toolkit for cubic surfaces in Sylvester form.
//!
//! A cubic surface in Sylvester form is cut out on the hyperplane
//! `z0 + z1 + z2 + z3 + z4 = 0` in P^4 by `a0*z0^3 + ... + a4*z4^3 = 0`.
//! This crate computes the classical Salmon invariants of such forms,
//! verifies the 30-component decomposition of the singular locus of the
//! degree-100 invariant hypersurface, classifies the distinguished
//! coefficient families and their Eckardt configurations exactly, and
//! cross-checks the Eckardt counts with a numerical 27-lines solver
//! based on homotopy continuation.
//!
//! All symbolic computation is exact over the rationals; floating point
//! enters only in the [`lines`] module.

pub mod arith;
pub mod invariants;
pub mod lines;
pub mod pentahedron;
pub mod singular;

pub use arith::{FactoredPoly, FactoredSum, MultiPoly, Rat};
pub use invariants::{ModuliPoint, SylvesterPoint};
pub use lines::{ComplexLine, CrossReport, EckardtCluster, TrackerConfig};
pub use pentahedron::{CubicForm3, FamilyTag, PentVertex, PermSubgroup};
pub use singular::{ComponentKind, LinearComponent, MultiplicityReport};

/// Errors reported by the exact and numeric operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("elementary symmetric index {0} out of range 1..=5")]
    ElemSymIndex(usize),
    #[error("point has wrong length: expected {expected}, got {got}")]
    PointLength { expected: usize, got: usize },
    #[error("projective point must have a nonzero coordinate")]
    ZeroPoint,
    #[error("all five invariants vanish: base-locus point, not a moduli point")]
    BaseLocusPoint,
    #[error("inverse undefined at Q: the birational inverse has base locus at Q = (1:0:0:0:0)")]
    InverseUndefinedAtQ,
    #[error("degenerate Sylvester form (some a_i = 0): use the numeric line detector")]
    DegenerateForm,
    #[error("line endpoints are coincident as projective points")]
    CoincidentPoints,
    #[error("collinearity needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("point does not lie on the Eckardt hypersurface (I100 != 0)")]
    NotOnEckardt,
    #[error(
        "tracking failure: {found} distinct lines after deduplication (expected 27); {summary}"
    )]
    TrackingFailure { found: usize, summary: String },
    #[error("surface may be singular: {0}")]
    SurfaceMaySingular(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
