//! The telescope: a filler between consecutive interpolation levels.
//!
//! For each level-j cell the construction produces a chain K' with
//!
//! ```text
//! E' - F' = H' + boundary(K')
//! ```
//!
//! where E' is the next-level interpolant on the cell, F' the current one,
//! and H' a correction supported on the cell's faces. In dimension 1 the
//! filler is the single straight triangle through the three samples. In
//! higher dimension H' collects the face fillers (built by the same
//! construction one dimension down) and K' is the cone from the cell's
//! center sample over the cycle E' - F' - H'.
//!
//! Because face fillers depend only on the face's sample grid, the H'
//! contributions of two cells sharing a face cancel in canonical form, so
//! the summed H' is supported on the outer boundary of the source; for a
//! closed source it vanishes identically.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::lie::{Chart, GroupPoint};
use crate::scalar::{Rational, Scalar};

use super::chain::Chain;
use super::domain::{multi_indices, BoxDomain, CubeComplex};
use super::interpolate::{interpolate_complex_cached, sample, PointMap, SampleCache};
use super::simplex::SimplexMap;
use super::triangulate::kuhn_simplices;

/// Result of one telescope level: the two interpolants, the boundary
/// correction, the filler, and the number of outer faces that survived
/// cancellation (0 for closed sources; 2k * 2^(level*(k-1)) for a box).
#[derive(Debug, Clone)]
pub struct Telescope<S: Scalar> {
    pub finer: Chain<S>,
    pub coarser: Chain<S>,
    pub outer: Chain<S>,
    pub filler: Chain<S>,
    pub outer_face_count: usize,
}

impl<S: Scalar> Telescope<S> {
    /// The defect finer - coarser - outer - boundary(filler); zero when the
    /// construction is consistent (exact over rationals).
    pub fn defect(&self) -> Chain<S> {
        self.finer
            .sub(&self.coarser)
            .sub(&self.outer)
            .sub(&self.filler.boundary())
    }
}

/// Samples of a map on a {0,1,2}^k grid: the refinement grid of one cell.
struct Grid3<S: Scalar> {
    k: usize,
    chart: Chart,
    /// Source points in index order (axis 0 most significant), exact.
    domain_pts: Vec<Vec<Rational>>,
    /// Map values at the corresponding source points.
    values: Vec<Vec<S>>,
}

impl<S: Scalar> Grid3<S> {
    fn offset(&self, d: &[u8]) -> usize {
        d.iter().fold(0usize, |acc, &di| acc * 3 + di as usize)
    }

    fn point(&self, d: &[u8]) -> GroupPoint<S> {
        GroupPoint::new(self.chart, self.values[self.offset(d)].clone())
    }

    /// Restriction to the face fixing `axis` at side 0 or 2, parameterized
    /// by the remaining axes in increasing order.
    fn face(&self, axis: usize, side: u8) -> Grid3<S> {
        let fixed = 2 * side;
        let mut domain_pts = Vec::with_capacity(self.domain_pts.len() / 3);
        let mut values = Vec::with_capacity(self.values.len() / 3);
        for d in multi_indices(self.k - 1, 3) {
            let mut full = Vec::with_capacity(self.k);
            let mut it = d.iter();
            for a in 0..self.k {
                if a == axis {
                    full.push(fixed);
                } else {
                    full.push(*it.next().expect("face index arity") as u8);
                }
            }
            let off = self.offset(&full);
            domain_pts.push(self.domain_pts[off].clone());
            values.push(self.values[off].clone());
        }
        Grid3 { k: self.k - 1, chart: self.chart, domain_pts, values }
    }
}

/// Face identity for cancellation bookkeeping: the ordered source points of
/// the face grid. Depends only on the source geometry, not on the sampled
/// values, so shared faces of adjacent cells produce equal keys.
type FaceKey = Vec<Vec<Rational>>;

fn face_sign(axis: usize, side: u8) -> i64 {
    (if axis % 2 == 0 { 1 } else { -1 }) * (2 * side as i64 - 1)
}

/// Telescope of a single cell grid. Returns (H', K', face keys with signs).
fn telescope_grid<S: Scalar>(
    grid: &Grid3<S>,
) -> Result<(Chain<S>, Chain<S>, Vec<(FaceKey, i64)>)> {
    let k = grid.k;
    if k == 1 {
        let filler = Chain::from_simplex(SimplexMap::straight(&[
            grid.point(&[0]),
            grid.point(&[1]),
            grid.point(&[2]),
        ])?);
        // No face fillers in dimension 1 (the cone handles the whole cell),
        // but the endpoints still participate in outer-face bookkeeping.
        let faces = vec![
            (vec![grid.domain_pts[0].clone()], face_sign(0, 0)),
            (vec![grid.domain_pts[2].clone()], face_sign(0, 1)),
        ];
        return Ok((Chain::zero(), filler, faces));
    }
    let kuhn = kuhn_simplices(k);
    // E': next-level interpolant on the cell, one Kuhn set per subcell.
    let mut finer = Chain::zero();
    for delta in multi_indices(k, 2) {
        for ks in &kuhn {
            let pts: Vec<GroupPoint<S>> = ks
                .vertices
                .iter()
                .map(|bits| {
                    let d: Vec<u8> =
                        delta.iter().zip(bits).map(|(a, b)| *a as u8 + b).collect();
                    grid.point(&d)
                })
                .collect();
            finer.push(SimplexMap::straight(&pts)?, ks.sign);
        }
    }
    // F': current-level interpolant, Kuhn on the {0,2}^k corners.
    let mut coarser = Chain::zero();
    for ks in &kuhn {
        let pts: Vec<GroupPoint<S>> = ks
            .vertices
            .iter()
            .map(|bits| {
                let d: Vec<u8> = bits.iter().map(|b| 2 * b).collect();
                grid.point(&d)
            })
            .collect();
        coarser.push(SimplexMap::straight(&pts)?, ks.sign);
    }
    // H': signed face fillers, one dimension down.
    let mut outer = Chain::zero();
    let mut faces = Vec::with_capacity(2 * k);
    for axis in 0..k {
        for side in [0u8, 1u8] {
            let fg = grid.face(axis, side);
            let (_, face_filler, _) = telescope_grid(&fg)?;
            let eps = face_sign(axis, side);
            outer.add_scaled(&face_filler, eps);
            faces.push((fg.domain_pts, eps));
        }
    }
    // The remainder is a cycle; cone it from the center sample.
    let cycle = finer.sub(&coarser).sub(&outer);
    debug_assert!(cycle.boundary().is_zero(), "telescope remainder must be a cycle");
    let filler = cycle.cone(&grid.point(&vec![1u8; k]))?;
    Ok((outer, filler, faces))
}

/// Telescope between levels `level` and `level + 1` over a cube complex.
pub fn telescope_complex<S: Scalar>(
    map: &impl PointMap<S>,
    complex: &CubeComplex,
    level: u32,
) -> Result<Telescope<S>> {
    let k = complex.dim();
    let unit = BoxDomain::unit(k);
    let mut cache: SampleCache<S> = SampleCache::new();
    let finer = interpolate_complex_cached(map, complex, level + 1, &mut cache)?;
    let coarser = interpolate_complex_cached(map, complex, level, &mut cache)?;
    let mut outer = Chain::zero();
    let mut filler = Chain::zero();
    let mut face_map: BTreeMap<FaceKey, i64> = BTreeMap::new();
    for (cube, cube_sign) in complex.cubes() {
        for cell in unit.cells(level) {
            // Sample the refinement grid of this cell.
            let mut domain_pts = Vec::with_capacity(3usize.pow(k as u32));
            let mut values = Vec::with_capacity(3usize.pow(k as u32));
            for d in multi_indices(k, 3) {
                let idx: Vec<u64> = cell.iter().zip(&d).map(|(c, di)| 2 * c + di).collect();
                let t = unit.grid_point(level + 1, &idx);
                let x = cube.eval(&t)?;
                let v = sample(&mut cache, map, x.clone())?.clone();
                domain_pts.push(x);
                values.push(v);
            }
            let grid = Grid3 { k, chart: map.chart(), domain_pts, values };
            let (h, kk, faces) = telescope_grid(&grid)?;
            outer.add_scaled(&h, *cube_sign);
            filler.add_scaled(&kk, *cube_sign);
            for (key, eps) in faces {
                *face_map.entry(key).or_insert(0) += eps * cube_sign;
            }
        }
    }
    let outer_face_count = face_map.values().filter(|&&v| v != 0).count();
    Ok(Telescope { finer, coarser, outer, filler, outer_face_count })
}

/// Telescope between levels `level` and `level + 1` over a box.
pub fn telescope_box<S: Scalar>(
    map: &impl PointMap<S>,
    domain: &BoxDomain,
    level: u32,
) -> Result<Telescope<S>> {
    telescope_complex(map, &CubeComplex::from_box(domain)?, level)
}
