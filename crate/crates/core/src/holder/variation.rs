//! Rectangle functions, Towghi sums, and dyadic (p,p)-variation.
//!
//! For a map of the unit square and a 2-form, the rectangle function
//! `g(s,t)` is the interpolant integral over the sub-rectangle
//! `[0,s] x [0,t]`. Such functions drive two-parameter Stieltjes sums: the
//! Towghi sum against a pointwise integrand is the rectangle-increment
//! analogue of a Riemann sum, and its convergence is controlled by the
//! dyadic (p,p)-variation of `g` rather than by any smoothness.
//!
//! Everything here works at a fixed working level: `g` is stored as corner
//! values of the level grid, computed once as prefix sums of per-cell
//! integrals, so every rectangle increment afterwards costs four lookups
//! and increments are additive across splits by construction.

use alloc::string::ToString;
use alloc::vec::Vec;

use num_traits::Float;

use crate::chains::{kuhn_simplices, BoxDomain, SimplexMap};
use crate::error::{Error, Result};
use crate::forms::{
    integrate_simplex_exact, integrate_simplex_quadrature, Form, Quadrature,
};
use crate::lie::{Chart, GroupPoint};
use crate::poly::Poly;
use crate::scalar::{dyadic, CompensatedSum, Rational, Scalar};

use super::integral::JParams;
use super::map::SampledHolderMap;

/// Where the integrand of a Towghi sum is sampled within each cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplePoint {
    /// The lower-left corner `(s_{i-1}, t_{j-1})`.
    LowerLeft,
    /// The cell midpoint.
    Center,
}

/// A rectangle function on the unit square, stored as corner values on a
/// dyadic grid.
#[derive(Debug, Clone)]
pub struct VariationFunction {
    level: u32,
    /// `(n+1) x (n+1)` corner values, row-major with the s-index slowest.
    corner: Vec<f64>,
    /// Exact twin when the cells were integrated rationally.
    corner_exact: Option<Vec<Rational>>,
}

impl VariationFunction {
    /// Rectangle function `g(s,t) = J_level(F restricted to [0,s] x [0,t])`:
    /// per-cell interpolant integrals of `form` along `map`, prefix-summed.
    pub fn from_map(
        map: &SampledHolderMap,
        form: &Form<Rational>,
        level: u32,
        params: &JParams,
    ) -> Result<Self> {
        if map.dim_in() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: map.dim_in() });
        }
        if form.degree() != 2 {
            return Err(Error::DegreeOutOfRange { degree: form.degree(), max: 2 });
        }
        if form.chart() != map.chart() {
            return Err(Error::ChartMismatch {
                expected: map.chart().name(),
                found: form.chart().name(),
            });
        }
        let n = 1usize << level;
        let unit = BoxDomain::unit(2);
        let kuhn = kuhn_simplices(2);
        let quad = Quadrature::gauss_legendre(params.quad_points)?;
        let form_f64 = form.map_scalar(Scalar::to_f64);
        let algebra = map.algebra();
        let chart = map.chart();

        let idx = |i: usize, j: usize| i * (n + 1) + j;
        let mut corner = alloc::vec![0.0_f64; (n + 1) * (n + 1)];
        let mut corner_exact = params
            .exact
            .then(|| alloc::vec![Rational::zero(); (n + 1) * (n + 1)]);

        for i in 0..n {
            for j in 0..n {
                let cell = [i as u64, j as u64];
                let mut pts_exact: Vec<GroupPoint<Rational>> = Vec::with_capacity(4);
                let mut pts_f64: Vec<GroupPoint<f64>> = Vec::with_capacity(4);
                for bits in 0..4usize {
                    let gp = [cell[0] + (bits & 1) as u64, cell[1] + ((bits >> 1) & 1) as u64];
                    let t = unit.grid_point(level, &gp);
                    if params.exact {
                        pts_exact.push(GroupPoint::new(chart, map.eval_exact(&t)?));
                    } else {
                        pts_f64.push(GroupPoint::new(chart, map.eval_f64(&t)?));
                    }
                }
                let mut cell_f = 0.0_f64;
                let mut cell_q = Rational::zero();
                for ks in &kuhn {
                    let sign = ks.sign;
                    if params.exact {
                        let pts: Vec<GroupPoint<Rational>> = ks
                            .vertices
                            .iter()
                            .map(|bits| {
                                let mask = (bits[0] as usize) | ((bits[1] as usize) << 1);
                                pts_exact[mask].clone()
                            })
                            .collect();
                        let s = SimplexMap::straight(&pts)?;
                        if s.is_degenerate() {
                            continue;
                        }
                        let v = integrate_simplex_exact(algebra, form, &s)?;
                        cell_q = cell_q + v * Rational::from_ratio(sign, 1);
                    } else {
                        let pts: Vec<GroupPoint<f64>> = ks
                            .vertices
                            .iter()
                            .map(|bits| {
                                let mask = (bits[0] as usize) | ((bits[1] as usize) << 1);
                                pts_f64[mask].clone()
                            })
                            .collect();
                        let s = SimplexMap::straight(&pts)?;
                        if s.is_degenerate() {
                            continue;
                        }
                        cell_f += sign as f64
                            * integrate_simplex_quadrature(algebra, &form_f64, &s, &quad)?;
                    }
                }
                // Prefix recurrence: g(i+1, j+1) from the three known corners
                // and the cell value.
                if let Some(exact) = corner_exact.as_mut() {
                    let v = &exact[idx(i, j + 1)] + &exact[idx(i + 1, j)] - &exact[idx(i, j)]
                        + cell_q;
                    exact[idx(i + 1, j + 1)] = v;
                } else {
                    corner[idx(i + 1, j + 1)] =
                        corner[idx(i, j + 1)] + corner[idx(i + 1, j)] - corner[idx(i, j)]
                            + cell_f;
                }
            }
        }
        if let Some(exact) = &corner_exact {
            for (c, e) in corner.iter_mut().zip(exact.iter()) {
                *c = e.to_f64();
            }
        }
        Ok(VariationFunction { level, corner, corner_exact })
    }

    /// Rectangle function from explicit corner values `f(s, t)` on the
    /// level grid (for analytic examples like `g(s,t) = st`).
    pub fn from_corner_fn(
        level: u32,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Self {
        let n = 1usize << level;
        let mut corner = Vec::with_capacity((n + 1) * (n + 1));
        let mut corner_exact = Vec::with_capacity((n + 1) * (n + 1));
        for i in 0..=n {
            let s = dyadic(i as i64, level);
            for j in 0..=n {
                let t = dyadic(j as i64, level);
                let v = f(&s, &t);
                corner.push(v.to_f64());
                corner_exact.push(v);
            }
        }
        VariationFunction { level, corner, corner_exact: Some(corner_exact) }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    fn idx(&self, i: u64, j: u64) -> usize {
        let n = (1u64 << self.level) + 1;
        (i * n + j) as usize
    }

    /// Corner value at grid node `(i, j)`, i.e. `g(i / 2^level, j / 2^level)`.
    pub fn value(&self, i: u64, j: u64) -> f64 {
        self.corner[self.idx(i, j)]
    }

    /// Exact corner value when available.
    pub fn value_exact(&self, i: u64, j: u64) -> Option<&Rational> {
        self.corner_exact.as_ref().map(|c| &c[self.idx(i, j)])
    }

    /// `g(s1,t1) - g(s0,t1) - g(s1,t0) + g(s0,t0)` by grid indices.
    pub fn rect_increment(&self, i0: u64, j0: u64, i1: u64, j1: u64) -> f64 {
        self.value(i1, j1) - self.value(i0, j1) - self.value(i1, j0) + self.value(i0, j0)
    }

    /// Exact rectangle increment when the exact twin is present.
    pub fn rect_increment_exact(&self, i0: u64, j0: u64, i1: u64, j1: u64) -> Option<Rational> {
        let c = self.corner_exact.as_ref()?;
        Some(
            &c[self.idx(i1, j1)] - &c[self.idx(i0, j1)] - &c[self.idx(i1, j0)]
                + &c[self.idx(i0, j0)],
        )
    }
}

/// Two-parameter Stieltjes sum over the level-`level` dyadic subdivision:
/// `sum_{i,j} f(eta_i, nu_j) * (rectangle increment of g)`.
pub fn towghi_sum(
    f: &dyn Fn(&Rational, &Rational) -> f64,
    g: &VariationFunction,
    level: u32,
    sample: SamplePoint,
) -> Result<f64> {
    if level > g.level() {
        return Err(Error::Invalid(
            "Towghi subdivision is finer than the rectangle function grid".to_string(),
        ));
    }
    let cells = 1u64 << level;
    let stride = 1u64 << (g.level() - level);
    let mut sum = CompensatedSum::new();
    for a in 0..cells {
        for b in 0..cells {
            let (s, t) = match sample {
                SamplePoint::LowerLeft => (dyadic(a as i64, level), dyadic(b as i64, level)),
                SamplePoint::Center => (
                    dyadic(2 * a as i64 + 1, level + 1),
                    dyadic(2 * b as i64 + 1, level + 1),
                ),
            };
            let inc = g.rect_increment(a * stride, b * stride, (a + 1) * stride, (b + 1) * stride);
            sum.add(f(&s, &t) * inc);
        }
    }
    Ok(sum.total())
}

/// Dyadic (p,p)-variation diagnostics of a rectangle function.
#[derive(Debug, Clone)]
pub struct PpVariation {
    /// Max of the level sums: the dyadic (p,p)-variation up to `j_max`.
    pub value: f64,
    /// `sum_cells |rectangle increment|^p` per level.
    pub level_sums: Vec<f64>,
}

/// Power sums of rectangle increments over dyadic subdivisions, maximized
/// over levels `0..=min(j_max, grid level)`.
pub fn dyadic_pp_variation(g: &VariationFunction, p: f64, j_max: u32) -> Result<PpVariation> {
    if !(p > 0.0) {
        return Err(Error::Invalid("variation exponent must be positive".to_string()));
    }
    let top = j_max.min(g.level());
    let mut level_sums = Vec::with_capacity(top as usize + 1);
    for j in 0..=top {
        let cells = 1u64 << j;
        let stride = 1u64 << (g.level() - j);
        let mut sum = CompensatedSum::new();
        for a in 0..cells {
            for b in 0..cells {
                let inc =
                    g.rect_increment(a * stride, b * stride, (a + 1) * stride, (b + 1) * stride);
                sum.add(Float::powf(inc.abs(), p));
            }
        }
        level_sums.push(sum.total());
    }
    let value = level_sums.iter().fold(0.0_f64, |m, &v| m.max(v));
    Ok(PpVariation { value, level_sums })
}

/// Weight-2 area forms against the horizontal derivatives of a coefficient.
#[derive(Debug, Clone)]
pub struct TowghiReport {
    /// `int (Xa o F) dh`, `h` the rectangle function of `x dx^dy`.
    pub towghi_x: f64,
    /// `int (Ya o F) dk`, `k` the rectangle function of `y dx^dy`.
    pub towghi_y: f64,
    /// `towghi_x + towghi_y`.
    pub sum: f64,
    /// `int ((a - x Xa - y Ya) o F) dg`, `g` from `dx^dy`: the affine rest.
    pub gradient_term: f64,
    /// Direct level integral of `a dx^dy`.
    pub direct: f64,
    /// `|direct - sum|`: how far the two-term decomposition alone is.
    pub comparison_residual: f64,
    /// `|direct - (sum + gradient_term)|`: the full identity; exact up to
    /// roundoff for affine coefficients.
    pub decomposition_residual: f64,
}

/// Horizontal derivatives `Xa`, `Ya` of a coefficient polynomial in the
/// first Heisenberg group, per chart.
fn horizontal_derivatives(chart: Chart, a: &Poly<Rational>) -> Result<(Poly<Rational>, Poly<Rational>)> {
    if a.nvars() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: a.nvars() });
    }
    let ax = a.partial(0);
    let ay = a.partial(1);
    let az = a.partial(2);
    let x = Poly::var(3, 0);
    let y = Poly::var(3, 1);
    let half = Rational::from_ratio(1, 2);
    match chart {
        // theta = dz - (x dy - y dx)/2: X = d/dx - (y/2) d/dz, Y = d/dy + (x/2) d/dz.
        Chart::Exponential => {
            let xa = ax.sub(&y.mul(&az).scale(&half));
            let ya = ay.add(&x.mul(&az).scale(&half));
            Ok((xa, ya))
        }
        // theta = dz - x dy: X = d/dx, Y = d/dy + x d/dz.
        Chart::HeisenbergMatrix => {
            let ya = ay.add(&x.mul(&az));
            Ok((ax, ya))
        }
    }
}

/// Decompose the integral of `a dx^dy` along a square map into Towghi
/// integrals of the horizontal derivatives of `a` against the rectangle
/// functions of `x dx^dy` and `y dx^dy`, plus the affine rest against the
/// rectangle function of `dx^dy`. All terms are computed at the same
/// working level, so for affine `a` the three-term identity holds up to
/// roundoff; the two-term sum alone differs from the direct integral by
/// the constant part of `a` times the area integral.
pub fn weight2_towghi_decomposition(
    map: &SampledHolderMap,
    a: &Poly<Rational>,
    level: u32,
    sample: SamplePoint,
    params: &JParams,
) -> Result<TowghiReport> {
    if !map.algebra().is_heisenberg1() {
        return Err(Error::InvalidAlgebra(
            "the weight-2 decomposition is specific to the first Heisenberg group".to_string(),
        ));
    }
    let chart = map.chart();
    let area = area_form(chart)?;
    let x_area = area.scale_poly(&Poly::var(3, 0))?;
    let y_area = area.scale_poly(&Poly::var(3, 1))?;
    let a_area = area.scale_poly(a)?;

    let g = VariationFunction::from_map(map, &area, level, params)?;
    let h = VariationFunction::from_map(map, &x_area, level, params)?;
    let k = VariationFunction::from_map(map, &y_area, level, params)?;
    let direct = VariationFunction::from_map(map, &a_area, level, params)?
        .value(1u64 << level, 1u64 << level);

    let (xa, ya) = horizontal_derivatives(chart, a)?;
    let rest = a.sub(&Poly::var(3, 0).mul(&xa)).sub(&Poly::var(3, 1).mul(&ya));

    let through_map = |p: &Poly<Rational>| {
        let p = p.clone();
        move |s: &Rational, t: &Rational| -> f64 {
            let v = map
                .eval_f64(&[s.clone(), t.clone()])
                .expect("map evaluable on its own grid");
            p.map_scalar(Scalar::to_f64).eval(&v)
        }
    };
    let towghi_x = towghi_sum(&through_map(&xa), &h, level, sample)?;
    let towghi_y = towghi_sum(&through_map(&ya), &k, level, sample)?;
    let gradient_term = towghi_sum(&through_map(&rest), &g, level, sample)?;
    let sum = towghi_x + towghi_y;
    Ok(TowghiReport {
        towghi_x,
        towghi_y,
        sum,
        gradient_term,
        direct,
        comparison_residual: (direct - sum).abs(),
        decomposition_residual: (direct - (sum + gradient_term)).abs(),
    })
}

fn area_form(chart: Chart) -> Result<Form<Rational>> {
    Form::term(chart, 3, &[0, 1], Poly::constant(3, Rational::one()))
}
