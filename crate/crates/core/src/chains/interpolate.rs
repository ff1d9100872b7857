//! Piecewise-straight interpolation of a sampled map on dyadic grids.
//!
//! The level-j interpolant samples the map at the dyadic grid points of the
//! source, triangulates each cell the Kuhn way, and replaces the map on each
//! simplex by the straight simplex through the sampled values. Implementors
//! of `PointMap` must be pure functions of the input point: the machinery
//! relies on resampling a shared grid point giving bit-identical values.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::lie::{Chart, GradedLieAlgebra, GroupPoint};
use crate::scalar::{Rational, Scalar};

use super::chain::Chain;
use super::domain::{BoxDomain, CubeComplex};
use super::simplex::SimplexMap;
use super::triangulate::kuhn_simplices;

/// A map from rational source points to group coordinates in a fixed chart.
pub trait PointMap<S: Scalar> {
    /// Chart the output coordinates live in.
    fn chart(&self) -> Chart;
    /// Source dimension the map expects.
    fn dim_in(&self) -> usize;
    /// Evaluate at an exact source point. Must be deterministic.
    fn eval(&self, x: &[Rational]) -> Result<Vec<S>>;
}

/// Adapter turning a closure into a `PointMap`.
pub struct FnMap<S, F>
where
    F: Fn(&[Rational]) -> Result<Vec<S>>,
{
    chart: Chart,
    dim_in: usize,
    f: F,
}

impl<S, F> FnMap<S, F>
where
    F: Fn(&[Rational]) -> Result<Vec<S>>,
{
    pub fn new(chart: Chart, dim_in: usize, f: F) -> Self {
        FnMap { chart, dim_in, f }
    }
}

impl<S: Scalar, F> PointMap<S> for FnMap<S, F>
where
    F: Fn(&[Rational]) -> Result<Vec<S>>,
{
    fn chart(&self) -> Chart {
        self.chart
    }

    fn dim_in(&self) -> usize {
        self.dim_in
    }

    fn eval(&self, x: &[Rational]) -> Result<Vec<S>> {
        (self.f)(x)
    }
}

pub(crate) type SampleCache<S> = BTreeMap<Vec<Rational>, Vec<S>>;

pub(crate) fn sample<'c, S: Scalar>(
    cache: &'c mut SampleCache<S>,
    map: &impl PointMap<S>,
    x: Vec<Rational>,
) -> Result<&'c Vec<S>> {
    if !cache.contains_key(&x) {
        let v = map.eval(&x)?;
        cache.insert(x.clone(), v);
    }
    Ok(cache.get(&x).expect("just inserted"))
}

fn check_map<S: Scalar>(map: &impl PointMap<S>, ambient: usize) -> Result<()> {
    if map.dim_in() != ambient {
        return Err(Error::DimensionMismatch { expected: ambient, found: map.dim_in() });
    }
    Ok(())
}

pub(crate) fn interpolate_complex_cached<S: Scalar>(
    map: &impl PointMap<S>,
    complex: &CubeComplex,
    level: u32,
    cache: &mut SampleCache<S>,
) -> Result<Chain<S>> {
    check_map(map, complex.ambient_dim())?;
    let k = complex.dim();
    let unit = BoxDomain::unit(k);
    let kuhn = kuhn_simplices(k);
    let chart = map.chart();
    let mut out = Chain::zero();
    for (cube, cube_sign) in complex.cubes() {
        for cell in unit.cells(level) {
            for ks in &kuhn {
                let mut pts = Vec::with_capacity(k + 1);
                for bits in &ks.vertices {
                    let idx: Vec<u64> =
                        cell.iter().zip(bits).map(|(c, b)| c + *b as u64).collect();
                    let t = unit.grid_point(level, &idx);
                    let x = cube.eval(&t)?;
                    let v = sample(cache, map, x)?;
                    pts.push(GroupPoint::new(chart, v.clone()));
                }
                out.push(SimplexMap::straight(&pts)?, ks.sign * cube_sign);
            }
        }
    }
    Ok(out)
}

/// Level-j interpolant of `map` over a cube complex, as a chain.
pub fn interpolate_complex<S: Scalar>(
    map: &impl PointMap<S>,
    complex: &CubeComplex,
    level: u32,
) -> Result<Chain<S>> {
    let mut cache = SampleCache::new();
    interpolate_complex_cached(map, complex, level, &mut cache)
}

/// Level-j interpolant of `map` over a box, as a chain.
pub fn interpolate_box<S: Scalar>(
    map: &impl PointMap<S>,
    domain: &BoxDomain,
    level: u32,
) -> Result<Chain<S>> {
    interpolate_complex(map, &CubeComplex::from_box(domain)?, level)
}

/// Evaluate the level-j interpolant at an arbitrary point of a box domain:
/// locate the dyadic cell, pick the Kuhn simplex by sorting fractional
/// parts, and evaluate the straight simplex there. Diagnostic path; the
/// chain constructions never call this.
pub fn interpolant_value<S: Scalar>(
    algebra: &GradedLieAlgebra,
    map: &impl PointMap<S>,
    domain: &BoxDomain,
    level: u32,
    x: &[Rational],
) -> Result<GroupPoint<S>> {
    check_map(map, domain.dim())?;
    if x.len() != domain.dim() {
        return Err(Error::DimensionMismatch { expected: domain.dim(), found: x.len() });
    }
    let k = domain.dim();
    let cells_per_axis = 1u64 << level;
    let scale = Rational::from_ratio(cells_per_axis as i64, 1);
    let mut cell = Vec::with_capacity(k);
    let mut frac = Vec::with_capacity(k);
    for i in 0..k {
        let u = (&x[i] - &domain.lo()[i]) / (&domain.hi()[i] - &domain.lo()[i]) * &scale;
        let mut c = u.floor().to_integer().to_u64().ok_or_else(|| {
            Error::Invalid("interpolation point outside the domain".to_string())
        })?;
        if c >= cells_per_axis {
            // The far endpoint belongs to the last cell.
            c = cells_per_axis - 1;
        }
        frac.push(&u - Rational::from_ratio(c as i64, 1));
        cell.push(c);
    }
    if frac.iter().any(|f| f < &Rational::zero() || f > &Rational::from_ratio(1, 1)) {
        return Err(Error::Invalid("interpolation point outside the domain".to_string()));
    }
    // Kuhn cell location: axes sorted by decreasing fractional part.
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| frac[b].cmp(&frac[a]).then(a.cmp(&b)));
    let mut bary = Vec::with_capacity(k + 1);
    bary.push(Rational::from_ratio(1, 1) - &frac[order[0]]);
    for w in order.windows(2) {
        bary.push(&frac[w[0]] - &frac[w[1]]);
    }
    bary.push(frac[order[k - 1]].clone());
    let mut idx = cell;
    let mut pts = Vec::with_capacity(k + 1);
    let chart = map.chart();
    pts.push(GroupPoint::new(chart, map.eval(&domain.grid_point(level, &idx))?));
    for &axis in &order {
        idx[axis] += 1;
        pts.push(GroupPoint::new(chart, map.eval(&domain.grid_point(level, &idx))?));
    }
    let simplex = SimplexMap::straight(&pts)?;
    let bary_s: Vec<S> = bary.iter().map(|b| S::from_rational(b)).collect();
    simplex.eval(algebra, &bary_s)
}

use alloc::string::ToString;
