//! Chains of straight simplices in a Carnot group: construction of
//! simplices as iterated affine cones, canonical chain algebra with
//! boundary, Kuhn triangulations, dyadic interpolation of sampled maps, and
//! the telescope identity connecting consecutive interpolation levels.

mod chain;
mod domain;
mod interpolate;
mod simplex;
mod telescope;
mod triangulate;

pub use chain::Chain;
pub use domain::{multi_indices, BoxDomain, CubeChart, CubeComplex, MultiIndices};
pub use interpolate::{
    interpolant_value, interpolate_box, interpolate_complex, FnMap, PointMap,
};
pub use simplex::SimplexMap;
pub use telescope::{telescope_box, telescope_complex, Telescope};
pub use triangulate::{kuhn_simplices, KuhnSimplex};
