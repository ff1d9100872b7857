//! Holder maps into Carnot groups and integration of weighted forms along
//! them.
//!
//! The central quantity is the limit of pullback integrals over dyadic
//! piecewise-linear interpolants of a Holder map. Whether that limit exists
//! is governed by the declared exponent against the weights of the form and
//! its differential; the estimators here refuse inadmissible combinations
//! rather than returning numbers without meaning.

pub mod integral;
pub mod map;
pub mod takagi;
pub mod variation;

pub use integral::{
    closed_cycle_J, estimate_J, stokes_check, vanishing_check, JParams, JResult, LevelRecord,
    StokesReport, VanishingReport,
};
pub use map::{FloatView, HolderCheck, SampledHolderMap};
pub use takagi::{triangle_wave, triangle_wave_f64, NoisyCurve, TriangleSeries};
pub use variation::{
    dyadic_pp_variation, towghi_sum, weight2_towghi_decomposition, PpVariation, SamplePoint,
    TowghiReport, VariationFunction,
};
