//! Differential forms in polynomial coordinates: exterior algebra,
//! left-invariant coframes with weight decompositions, integration over
//! simplicial chains (exact and quadrature), and a small text grammar.

mod coframe;
mod exterior;
mod integrate;
mod text;

pub use coframe::{dilation_pullback, left_translation_pullback, Coframe};
pub use exterior::{CoframeForm, Form};
pub use integrate::{
    integrate_chain_exact, integrate_chain_quadrature, integrate_simplex_exact,
    integrate_simplex_quadrature, monomial_simplex_integral, Quadrature,
};
pub use text::{coordinate_names, parse_form, render_form};
