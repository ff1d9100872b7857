//! First Heisenberg group specifics: the contact complex and exactly
//! horizontal piecewise linear geometry.
//!
//! Everything here works in the matrix chart of the Heisenberg group on
//! three coordinates, where the group law is
//! `(x1, y1, z1) * (x2, y2, z2) = (x1 + x2, y1 + y2, z1 + z2 + x1 y2)`
//! and the contact form is `theta = dz - x dy`. The [`rumin`] module
//! implements the weight-filtered replacement for the de Rham complex whose
//! middle differential is second order; the [`arc`] module builds
//! piecewise linear arcs and simplices that annihilate `theta` exactly in
//! rational arithmetic, so horizontality is never a tolerance question.

pub mod arc;
pub mod rumin;

pub use arc::{
    chain_of_arcs, horizontal_arc, horizontal_interpolate, horizontal_simplex,
    horizontal_telescope, HorizontalPLArc, HorizontalSimplex, HorizontalTelescope,
};
pub use rumin::{rumin_d, rumin_d0, rumin_d1, rumin_d2, RuminForm};

use crate::error::{Error, Result};
use crate::lie::{Chart, GradedLieAlgebra, GroupPoint};
use crate::scalar::Rational;

/// Checks that the algebra is the first Heisenberg algebra and the point is
/// a three coordinate matrix-chart point.
fn require_heisenberg_matrix(algebra: &GradedLieAlgebra, p: &GroupPoint<Rational>) -> Result<()> {
    if !algebra.is_heisenberg1() {
        return Err(Error::Invalid(alloc::string::String::from(
            "horizontal arcs are specific to the first Heisenberg group",
        )));
    }
    if p.chart != Chart::HeisenbergMatrix {
        return Err(Error::ChartMismatch {
            expected: Chart::HeisenbergMatrix.name(),
            found: p.chart.name(),
        });
    }
    if p.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: p.dim() });
    }
    Ok(())
}
