//! Computational machinery for graded nilpotent (Carnot) groups:
//!
//! * graded Lie algebras with exact rational structure constants, group
//!   operations in exponential or matrix coordinates, homogeneous metrics
//!   ([`lie`]);
//! * straight simplices, signed chains, cube triangulations and the
//!   refinement telescope that compares two dyadic piecewise-linear
//!   interpolations of a map ([`chains`]);
//! * left-invariant coframes, weight-graded differential forms, exact and
//!   quadrature integration over simplices and chains ([`forms`]);
//! * limits of form integrals along Holder maps, with certified tail bounds,
//!   Stokes and vanishing diagnostics, and two-parameter dyadic sums
//!   ([`holder`]);
//! * weight-graded Lie algebra cohomology and the resulting Holder exponent
//!   bounds ([`cohomology`]);
//! * the rank-one Heisenberg group: its intrinsic complex on low weights and
//!   exactly horizontal piecewise-linear interpolation ([`heisenberg`]).
//!
//! Everything algebraic runs over either exact big rationals or `f64`,
//! selected per call site through the [`scalar::Scalar`] trait. Identities
//! (Jacobi, associativity, telescopes, Stokes) hold bit-exactly on the
//! rational path; the float path exists for large sweeps.
//!
//! The crate is `no_std` compatible (`alloc` required): disable the default
//! `std` feature to use it in that mode.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod chains;
pub mod cohomology;
pub mod error;
pub mod forms;
pub mod heisenberg;
pub mod holder;
pub mod lie;
pub mod linalg;
pub mod poly;
pub mod scalar;

pub use error::Error;
pub use scalar::{Rational, Scalar};
