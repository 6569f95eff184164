//! The hyperbolic-geometry half of the crate: elements of the isometry
//! group of the upper half-plane, their classification, lifts to the
//! universal covering group with level (winding) arithmetic, closed-form
//! level-jump rules cross-checked by numerical path tracking, sequential
//! sets of isometries, and random sampling of test configurations.

pub mod lifting;
pub mod moebius;
pub mod sampling;
pub mod sequential;

use thiserror::Error;

/// Errors produced by the geometric half of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    /// A constructor received parameters outside its domain.
    #[error("degenerate construction parameters: {0}")]
    DegenerateParameters(String),
    /// The trace is inside the ambiguity band around the parabolic value 2,
    /// so the class cannot be decided reliably.
    #[error("trace {trace} is too close to the parabolic threshold to classify")]
    Degenerate { trace: f64 },
    /// Path lifting rebuilds a canonical path to the right factor, which is
    /// only defined for hyperbolic, parabolic, and identity elements.
    #[error("elliptic right factor is not supported by path lifting")]
    EllipticUnsupported,
    /// The lifted argument is too close to a chart boundary to assign a
    /// level.
    #[error("lifted argument {arg} lies within {tol} of a chart boundary")]
    ChartBoundary { arg: f64, tol: f64 },
    /// Adaptive path tracking hit its subdivision depth limit.
    #[error("path tracking exceeded subdivision depth near a degeneracy")]
    PathThroughDegeneracy,
    /// The configuration is outside the cases the closed-form rules cover.
    #[error("configuration not covered by the closed-form jump rules")]
    NotCovered,
    /// Two elements share a fixed point on the boundary circle.
    #[error("elements share a fixed point")]
    SharedFixedPoint,
    /// An element is of the wrong class (or too close to degenerate) for
    /// the requested computation.
    #[error("element class is degenerate or unsupported for this computation")]
    DegenerateElement,
    /// Construction parameters lie outside the region where the recipe
    /// produces a valid configuration.
    #[error("parameters outside the validity region of the construction: {0}")]
    OutOfValidityRegion(String),
    /// No orientation assignment of the generators produced a sequential
    /// set.
    #[error("no orientation assignment produced a sequential set")]
    OrientationSearchFailed,
    /// The surface-group relator did not evaluate to the identity.
    #[error("relator product differs from the identity by {defect}")]
    RelatorNotIdentity { defect: f64 },
    /// The total winding of the lifted relator was not close to an integer.
    #[error("total winding {winding} is not integral within {tol}")]
    WindingNotIntegral { winding: f64, tol: f64 },
    /// The level vector length does not match the generator count.
    #[error("expected {expected} levels, got {got}")]
    LevelCountMismatch { expected: usize, got: usize },
}

pub use lifting::{
    check_lift_relation, level_mod, level_of, lift, lifted_product, product_jump_closed_form,
    LiftedElement,
};
pub use moebius::{
    axes_intersect, compose, element_info, inverse, make_elliptic, make_hyperbolic, make_parabolic,
    principal_argument, BoundaryPoint, ElementInfo, MoebiusElement,
};
pub use sampling::{sample_element, sample_pair, JumpRegime};
pub use sequential::{build_sequential_set, fg1_threshold, fg2_threshold, is_sequential_set};
