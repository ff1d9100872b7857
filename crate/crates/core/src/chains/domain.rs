//! Source domains: rational boxes, dyadic grids, and cube complexes.
//!
//! A cube complex is a list of multilinear charts [0,1]^k -> R^N with
//! orientation signs. Besides plain boxes this covers the boundary of a
//! cube (a closed complex) and the cubulation of a simplex by barycenters,
//! which is how simplicial sources enter the dyadic machinery.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{dyadic, Rational, Scalar};

/// Iterate over {0, .., base-1}^k in lexicographic order (axis 0 most
/// significant). Yields nothing when base = 0; yields the empty index once
/// when k = 0.
pub fn multi_indices(k: usize, base: u64) -> MultiIndices {
    MultiIndices { k, base, next: Some(vec![0; k]) }
}

pub struct MultiIndices {
    k: usize,
    base: u64,
    next: Option<Vec<u64>>,
}

impl Iterator for MultiIndices {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.base == 0 {
            return None;
        }
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut axis = self.k;
        loop {
            if axis == 0 {
                break;
            }
            axis -= 1;
            succ[axis] += 1;
            if succ[axis] < self.base {
                self.next = Some(succ);
                break;
            }
            succ[axis] = 0;
        }
        Some(current)
    }
}

/// An axis-aligned box with rational corners, the basic source domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxDomain {
    lo: Vec<Rational>,
    hi: Vec<Rational>,
}

impl BoxDomain {
    pub fn new(lo: Vec<Rational>, hi: Vec<Rational>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), found: hi.len() });
        }
        if lo.is_empty() {
            return Err(Error::Invalid("box domain needs at least one axis".to_string()));
        }
        for (a, b) in lo.iter().zip(&hi) {
            if a >= b {
                return Err(Error::Invalid("box domain needs lo < hi on every axis".to_string()));
            }
        }
        Ok(BoxDomain { lo, hi })
    }

    pub fn unit(k: usize) -> Self {
        BoxDomain {
            lo: vec![Rational::zero(); k],
            hi: vec![Rational::one(); k],
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[Rational] {
        &self.lo
    }

    pub fn hi(&self) -> &[Rational] {
        &self.hi
    }

    /// Largest side length, as f64.
    pub fn diameter_sup(&self) -> f64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| crate::scalar::Scalar::to_f64(&(b - a)))
            .fold(0.0, f64::max)
    }

    /// Grid point `lo + (hi - lo) * idx / 2^level`, exact.
    pub fn grid_point(&self, level: u32, idx: &[u64]) -> Vec<Rational> {
        self.lo
            .iter()
            .zip(&self.hi)
            .zip(idx)
            .map(|((a, b), &i)| a + (b - a) * dyadic(i as i64, level))
            .collect()
    }

    /// Multi-indices of the 2^(level * dim) dyadic cells at `level`.
    pub fn cells(&self, level: u32) -> MultiIndices {
        multi_indices(self.dim(), 1u64 << level)
    }

    /// Map a point of [0,1]^k into the box, exact.
    pub fn embed(&self, t: &[Rational]) -> Vec<Rational> {
        self.lo
            .iter()
            .zip(&self.hi)
            .zip(t)
            .map(|((a, b), ti)| a + (b - a) * ti)
            .collect()
    }
}

/// Multilinear chart [0,1]^k -> R^N given by its 2^k corner images. Corner
/// `b` (a bitmask, bit i = axis i) is the image of the cube vertex with
/// coordinate pattern b.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeChart {
    k: usize,
    corners: Vec<Vec<Rational>>,
}

impl CubeChart {
    pub fn new(k: usize, corners: Vec<Vec<Rational>>) -> Result<Self> {
        if corners.len() != 1 << k {
            return Err(Error::DimensionMismatch { expected: 1 << k, found: corners.len() });
        }
        let n = corners[0].len();
        if corners.iter().any(|c| c.len() != n) {
            return Err(Error::Invalid("cube chart corners must share a dimension".to_string()));
        }
        Ok(CubeChart { k, corners })
    }

    pub fn dim_in(&self) -> usize {
        self.k
    }

    pub fn dim_out(&self) -> usize {
        self.corners[0].len()
    }

    pub fn corner(&self, bits: usize) -> &[Rational] {
        &self.corners[bits]
    }

    /// Multilinear interpolation of the corners, exact.
    pub fn eval(&self, t: &[Rational]) -> Result<Vec<Rational>> {
        if t.len() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, found: t.len() });
        }
        let n = self.dim_out();
        let mut out = vec![Rational::zero(); n];
        for (bits, corner) in self.corners.iter().enumerate() {
            let mut weight = Rational::one();
            for (i, ti) in t.iter().enumerate() {
                if bits >> i & 1 == 1 {
                    weight *= ti;
                } else {
                    weight *= &(Rational::one() - ti);
                }
            }
            if weight.is_zero() {
                continue;
            }
            for (o, c) in out.iter_mut().zip(corner) {
                *o += &weight * c;
            }
        }
        Ok(out)
    }

    /// Sign of the Jacobian determinant at the center. Exact; requires an
    /// equidimensional chart. Errors on a degenerate (singular) chart.
    pub fn orientation_sign(&self) -> Result<i64> {
        if self.dim_in() != self.dim_out() {
            return Err(Error::DimensionMismatch { expected: self.dim_in(), found: self.dim_out() });
        }
        let half = Rational::from_ratio(1, 2);
        let center = vec![half; self.k];
        // Multilinear in each variable, so the partial derivative at the
        // center is an exact difference of two opposite-face midpoints.
        let mut jac: Vec<Vec<Rational>> = Vec::with_capacity(self.k);
        for axis in 0..self.k {
            let mut hi = center.clone();
            hi[axis] = Rational::one();
            let mut lo = center.clone();
            lo[axis] = Rational::zero();
            let d: Vec<Rational> = self
                .eval(&hi)?
                .iter()
                .zip(&self.eval(&lo)?)
                .map(|(a, b)| a - b)
                .collect();
            jac.push(d);
        }
        // Rows are d(chart)/d(axis); determinant sign is transpose-invariant.
        let d = linalg::det(&jac);
        if d.is_zero() {
            return Err(Error::Invalid("cube chart is degenerate at its center".to_string()));
        }
        Ok(if d > Rational::zero() { 1 } else { -1 })
    }
}

/// A signed collection of cube charts with a common source dimension.
#[derive(Debug, Clone)]
pub struct CubeComplex {
    k: usize,
    ambient: usize,
    cubes: Vec<(CubeChart, i64)>,
}

impl CubeComplex {
    pub fn new(cubes: Vec<(CubeChart, i64)>) -> Result<Self> {
        let first = cubes.first().ok_or_else(|| {
            Error::Invalid("cube complex needs at least one cube".to_string())
        })?;
        let k = first.0.dim_in();
        let ambient = first.0.dim_out();
        for (c, sign) in &cubes {
            if c.dim_in() != k {
                return Err(Error::DimensionMismatch { expected: k, found: c.dim_in() });
            }
            if c.dim_out() != ambient {
                return Err(Error::DimensionMismatch { expected: ambient, found: c.dim_out() });
            }
            if *sign != 1 && *sign != -1 {
                return Err(Error::Invalid("cube orientation signs must be +1 or -1".to_string()));
            }
        }
        Ok(CubeComplex { k, ambient, cubes })
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn cubes(&self) -> &[(CubeChart, i64)] {
        &self.cubes
    }

    /// A box as a one-cube complex.
    pub fn from_box(b: &BoxDomain) -> Result<Self> {
        let k = b.dim();
        let corners: Vec<Vec<Rational>> = (0..1usize << k)
            .map(|mask| {
                (0..k)
                    .map(|axis| {
                        if mask >> axis & 1 == 1 {
                            b.hi()[axis].clone()
                        } else {
                            b.lo()[axis].clone()
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(CubeComplex {
            k,
            ambient: k,
            cubes: vec![(CubeChart::new(k, corners)?, 1)],
        })
    }

    /// The boundary of [0,1]^k as a closed complex of 2k cubes of dimension
    /// k-1. The face fixing axis i at value x carries sign (-1)^i (2x - 1)
    /// and is parameterized by the remaining axes in increasing order.
    pub fn cube_boundary(k: usize) -> Result<Self> {
        Self::box_boundary(&BoxDomain::unit(k))
    }

    /// The boundary of a box, with the same face conventions as
    /// [`CubeComplex::cube_boundary`].
    pub fn box_boundary(b: &BoxDomain) -> Result<Self> {
        let k = b.dim();
        if k < 1 {
            return Err(Error::Invalid("cube boundary needs dimension >= 1".to_string()));
        }
        let bound = |axis: usize, bit: u64| -> Rational {
            if bit == 1 {
                b.hi()[axis].clone()
            } else {
                b.lo()[axis].clone()
            }
        };
        let mut cubes = Vec::with_capacity(2 * k);
        for axis in 0..k {
            for side in [0u64, 1u64] {
                let mut corners = Vec::with_capacity(1 << (k - 1));
                for mask in 0..(1usize << (k - 1)) {
                    let mut pt = Vec::with_capacity(k);
                    let mut free = 0;
                    for a in 0..k {
                        if a == axis {
                            pt.push(bound(a, side));
                        } else {
                            let bit = (mask >> free & 1) as u64;
                            pt.push(bound(a, bit));
                            free += 1;
                        }
                    }
                    corners.push(pt);
                }
                let sign = if axis % 2 == 0 { 1 } else { -1 } * (2 * side as i64 - 1);
                cubes.push((CubeChart::new(k - 1, corners)?, sign));
            }
        }
        CubeComplex::new(cubes)
    }

    /// Cubulation of the standard simplex (vertices 0, e_1, .., e_k in R^k)
    /// by barycenters: one cube per simplex vertex, whose corner at bitmask
    /// S is the barycenter of the face spanned by that vertex and S.
    /// Orientation signs come from the exact Jacobian at the cube centers.
    pub fn simplex_cubes(k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::Invalid("simplex cubulation needs dimension >= 1".to_string()));
        }
        // Simplex vertex m as a point of R^k (vertex 0 is the origin).
        let vertex = |m: usize| -> Vec<Rational> {
            (0..k)
                .map(|i| {
                    if m >= 1 && i == m - 1 {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        };
        let mut cubes = Vec::with_capacity(k + 1);
        for m in 0..=k {
            let others: Vec<usize> = (0..=k).filter(|&v| v != m).collect();
            let mut corners = Vec::with_capacity(1 << k);
            for mask in 0..(1usize << k) {
                // Barycenter of {v_m} union {others[i] : bit i set}.
                let mut members = vec![m];
                for (i, &other) in others.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        members.push(other);
                    }
                }
                let count = Rational::from_ratio(members.len() as i64, 1);
                let mut pt = vec![Rational::zero(); k];
                for v in members {
                    for (p, c) in pt.iter_mut().zip(vertex(v)) {
                        *p += c;
                    }
                }
                for p in pt.iter_mut() {
                    *p /= &count;
                }
                corners.push(pt);
            }
            let chart = CubeChart::new(k, corners)?;
            let sign = chart.orientation_sign()?;
            cubes.push((chart, sign));
        }
        CubeComplex::new(cubes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn odometer_covers_lexicographically() {
        let all: Vec<_> = multi_indices(2, 3).collect();
        assert_eq!(all.len(), 9);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[3], vec![1, 0]);
        assert_eq!(all[8], vec![2, 2]);
        assert_eq!(multi_indices(0, 5).count(), 1);
    }

    #[test]
    fn grid_points_are_exact_dyadics() {
        let b = BoxDomain::new(vec![q(0, 1), q(-1, 1)], vec![q(1, 1), q(1, 1)]).unwrap();
        let p = b.grid_point(2, &[1, 3]);
        assert_eq!(p[0], q(1, 4));
        assert_eq!(p[1], q(1, 2));
        assert_eq!(b.cells(3).count(), 64);
    }

    #[test]
    fn box_chart_reproduces_corners_and_center() {
        let b = BoxDomain::new(vec![q(0, 1), q(0, 1)], vec![q(2, 1), q(4, 1)]).unwrap();
        let complex = CubeComplex::from_box(&b).unwrap();
        let chart = &complex.cubes()[0].0;
        assert_eq!(chart.eval(&[q(0, 1), q(0, 1)]).unwrap(), vec![q(0, 1), q(0, 1)]);
        assert_eq!(chart.eval(&[q(1, 1), q(1, 1)]).unwrap(), vec![q(2, 1), q(4, 1)]);
        assert_eq!(chart.eval(&[q(1, 2), q(1, 2)]).unwrap(), vec![q(1, 1), q(2, 1)]);
        assert_eq!(chart.eval(&[q(1, 1), q(0, 1)]).unwrap(), vec![q(2, 1), q(0, 1)]);
        assert_eq!(chart.orientation_sign().unwrap(), 1);
    }

    #[test]
    fn boundary_complex_shape() {
        let c = CubeComplex::cube_boundary(2).unwrap();
        assert_eq!(c.dim(), 1);
        assert_eq!(c.ambient_dim(), 2);
        assert_eq!(c.cubes().len(), 4);
        let signs: i64 = c.cubes().iter().map(|(_, s)| s).sum();
        assert_eq!(signs, 0);
    }

    #[test]
    fn simplex_cubes_cover_with_coherent_signs() {
        for k in 1..=3usize {
            let c = CubeComplex::simplex_cubes(k).unwrap();
            assert_eq!(c.cubes().len(), k + 1);
            // Every chart is nondegenerate and signed by its Jacobian.
            for (chart, sign) in c.cubes() {
                assert_eq!(chart.orientation_sign().unwrap(), *sign);
            }
        }
        // k = 1 sanity: [0,1] splits at 1/2 with opposite orientations.
        let c = CubeComplex::simplex_cubes(1).unwrap();
        let (c0, s0) = &c.cubes()[0];
        let (c1, s1) = &c.cubes()[1];
        assert_eq!(c0.eval(&[q(1, 1)]).unwrap(), vec![q(1, 2)]);
        assert_eq!(c1.eval(&[q(1, 1)]).unwrap(), vec![q(1, 2)]);
        assert_eq!(*s0, 1);
        assert_eq!(*s1, -1);
    }

    #[test]
    fn degenerate_box_rejected() {
        assert!(BoxDomain::new(vec![q(0, 1)], vec![q(0, 1)]).is_err());
        assert!(BoxDomain::new(vec![q(1, 1)], vec![q(0, 1)]).is_err());
    }
}
