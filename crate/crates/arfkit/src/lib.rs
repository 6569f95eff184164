//! Toolkit for m-Arf functions and m-spin structures on hyperbolic surfaces.
//!
//! The crate has two halves that verify each other:
//!
//! * A **combinatorial half** ([`core_types`], [`arf_calculus`], [`invariants`],
//!   [`orbits`]): value tuples of an m-Arf function on a standard basis of the
//!   fundamental group, the induced mapping-class-group (Dehn twist) action on
//!   those tuples, the orbit invariants (the type and the delta invariant), a
//!   normalization algorithm producing explicit twist-word witnesses, and an
//!   exhaustive BFS census that checks the orbit/type classification.
//! * A **geometric half** ([`hyperbolic`]): a PSL(2,R) matrix calculus with
//!   element classification, sequential sets of Möbius transformations
//!   (generators of Fuchsian surface groups), level arithmetic in the m-fold
//!   covering groups via a numerical argument-lifting oracle, closed-form
//!   level-jump rules for products, and a relator-winding checker which ties
//!   the lift condition back to the combinatorial boundary-sum constraint.

pub mod arf_calculus;
pub mod core_types;
pub mod hyperbolic;
pub mod invariants;
pub mod orbits;

pub use core_types::{
    arf_count, boundary_sum_target, teich_dimension, validate_signature, ArfBasisValues, ArfType,
    CoreError, LinearFunctional, Modulus, SurfaceSignature,
};
