//! Graded nilpotent Lie algebras and the groups they exponentiate to.
//!
//! An algebra is described by rational structure constants on a basis
//! ordered by layer; the group is handled in coordinates. Two charts exist:
//! exponential coordinates of the first kind (every algebra) and the
//! unipotent matrix-entry chart of the rank-one Heisenberg group, in which
//! the contact form takes the textbook shape `dz - x dy`.

mod algebra;
pub mod catalog;
mod group;

pub use algebra::{BracketEntry, GradedLieAlgebra};
pub use catalog::{abelian, builtin_catalog, free_two_step, heisenberg, lookup, quaternionic_heisenberg};
pub use group::{Chart, GroupPoint};
