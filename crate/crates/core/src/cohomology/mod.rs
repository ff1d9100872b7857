//! Lie algebra cohomology with its weight grading, and the Holder exponent
//! bounds it produces.
//!
//! The differential of a left-invariant form is again left-invariant, so
//! the de Rham complex of the group restricts to the finite-dimensional
//! exterior algebra of the dual Lie algebra. Dilations act on that complex
//! with a weight for every basis monomial, the differential preserves the
//! weight, and every weight-`w` class in degree `k` caps the Holder
//! exponent of surjective-enough maps at `k / w`; the heaviest class per
//! degree gives the strongest cap.

pub mod ce;
pub mod table;

pub use ce::{ce_differential, Cochain};
pub use table::{
    cohomology_table, generic_distribution_bound, hausdorff_dimension, holder_bound,
    CohomologyTable, HolderBound,
};
