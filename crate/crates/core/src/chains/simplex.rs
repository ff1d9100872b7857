//! Straight simplices: iterated affine cones through a vertex list.
//!
//! The cone construction runs in the chart the vertices are given in. In a
//! chart where left translations are affine (exponential coordinates of a
//! step <= 2 algebra, or the Heisenberg matrix chart), the simplex collapses
//! to the closed form
//!
//! ```text
//! sigma(l0..lk) = p0 * (sum_i l_i * coords(p0^{-1} p_i))
//! ```
//!
//! which is affine in barycentric coordinates. For step-3 algebras in
//! exponential coordinates the construction stays well defined but is no
//! longer polynomial; evaluation falls back to the recursive cone formula
//! and the symbolic path refuses.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::lie::{Chart, GradedLieAlgebra, GroupPoint};
use crate::poly::Poly;
use crate::scalar::Scalar;

/// A straight simplex: chart plus ordered vertex coordinates. Equality and
/// ordering are structural (chart, then vertex list), which is what makes
/// chains canonical.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexMap<S: Scalar> {
    chart: Chart,
    vertices: Vec<Vec<S>>,
}

impl<S: Scalar> SimplexMap<S> {
    /// Build from vertices that must share a chart and a dimension.
    pub fn straight(points: &[GroupPoint<S>]) -> Result<Self> {
        let first = points.first().ok_or_else(|| {
            Error::Invalid("a simplex needs at least one vertex".to_string())
        })?;
        let chart = first.chart;
        let dim = first.coords.len();
        let mut vertices = Vec::with_capacity(points.len());
        for p in points {
            if p.chart != chart {
                return Err(Error::ChartMismatch { expected: chart.name(), found: p.chart.name() });
            }
            if p.coords.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.coords.len() });
            }
            vertices.push(p.coords.clone());
        }
        Ok(SimplexMap { chart, vertices })
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    /// Simplex dimension `k` (one less than the vertex count).
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertex(&self, i: usize) -> GroupPoint<S> {
        GroupPoint::new(self.chart, self.vertices[i].clone())
    }

    pub fn vertices(&self) -> impl Iterator<Item = GroupPoint<S>> + '_ {
        (0..self.vertices.len()).map(|i| self.vertex(i))
    }

    pub fn vertex_coords(&self) -> &[Vec<S>] {
        &self.vertices
    }

    /// Face opposite position `i`: the straight simplex on the sublist.
    pub fn face(&self, i: usize) -> SimplexMap<S> {
        let mut vertices = self.vertices.clone();
        vertices.remove(i);
        SimplexMap { chart: self.chart, vertices }
    }

    /// True when two vertices coincide; such simplices are kept in chains.
    pub fn is_degenerate(&self) -> bool {
        for a in 0..self.vertices.len() {
            for b in (a + 1)..self.vertices.len() {
                if self.vertices[a] == self.vertices[b] {
                    return true;
                }
            }
        }
        false
    }

    /// Max pairwise homogeneous distance of the vertex set.
    pub fn vertex_diameter(&self, algebra: &GradedLieAlgebra) -> Result<f64> {
        let mut best = 0.0_f64;
        for a in 0..self.vertices.len() {
            for b in (a + 1)..self.vertices.len() {
                let d = algebra.hom_dist(&self.vertex(a), &self.vertex(b))?;
                best = best.max(d);
            }
        }
        Ok(best)
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> Result<SimplexMap<T>> {
        let pts: Vec<GroupPoint<T>> = self.vertices().map(|p| p.map_scalar(f)).collect();
        SimplexMap::straight(&pts)
    }

    /// True when left translations are affine in this chart, so the simplex
    /// is an affine map of barycentric coordinates.
    pub fn is_chart_affine(&self, algebra: &GradedLieAlgebra) -> bool {
        match self.chart {
            Chart::Exponential => algebra.step() <= 2,
            Chart::HeisenbergMatrix => true,
        }
    }

    /// Evaluate at barycentric coordinates `(l_0, .., l_k)`.
    pub fn eval(&self, algebra: &GradedLieAlgebra, bary: &[S]) -> Result<GroupPoint<S>> {
        if bary.len() != self.vertices.len() {
            return Err(Error::DimensionMismatch { expected: self.vertices.len(), found: bary.len() });
        }
        if self.is_chart_affine(algebra) {
            let p0 = self.vertex(0);
            let mut u = vec![S::zero(); algebra.dim()];
            for (i, l) in bary.iter().enumerate().skip(1) {
                let v = algebra.displacement(&p0, &self.vertex(i))?;
                for (um, vm) in u.iter_mut().zip(v.coords.iter()) {
                    *um = um.clone() + l.clone() * vm.clone();
                }
            }
            algebra.group_mul(&p0, &GroupPoint::new(self.chart, u))
        } else {
            self.eval_cone(algebra, &self.vertices, bary)
        }
    }

    /// Recursive cone evaluation for non-affine charts (step-3 exponential
    /// coordinates): cone with vertex `p0` over the coordinate image of
    /// `p0^{-1} sigma'`, radially scaled by `1 - l_0`.
    fn eval_cone(&self, algebra: &GradedLieAlgebra, points: &[Vec<S>], bary: &[S]) -> Result<GroupPoint<S>> {
        let p0 = GroupPoint::new(self.chart, points[0].clone());
        if points.len() == 1 {
            return Ok(p0);
        }
        let t = S::one() - bary[0].clone();
        if t.is_zero() {
            return Ok(p0);
        }
        let inner: Vec<S> = bary[1..].iter().map(|l| l.clone() / t.clone()).collect();
        let q = self.eval_cone(algebra, &points[1..], &inner)?;
        let v = algebra.displacement(&p0, &q)?;
        let scaled: Vec<S> = v.coords.iter().map(|c| t.clone() * c.clone()).collect();
        algebra.group_mul(&p0, &GroupPoint::new(self.chart, scaled))
    }

    /// Coordinates of the simplex as polynomials in the interior barycentric
    /// variables `t_1..t_k` (with `l_0 = 1 - sum t_i`). Affine charts only;
    /// the result is cached by callers that integrate repeatedly.
    pub fn barycentric_polys(&self, algebra: &GradedLieAlgebra) -> Result<Vec<Poly<S>>> {
        if !self.is_chart_affine(algebra) {
            return Err(Error::ExactUnsupported(
                "straight simplices are not polynomial in barycentric coordinates beyond step 2"
                    .to_string(),
            ));
        }
        let k = self.dim();
        let n = algebra.dim();
        let p0 = self.vertex(0);
        // u(t) = sum_i t_i * v_i, affine in t with zero constant term.
        let mut u: Vec<Poly<S>> = vec![Poly::zero(k); n];
        for i in 1..=k {
            let v = algebra.displacement(&p0, &self.vertex(i))?;
            for (m, um) in u.iter_mut().enumerate() {
                *um = um.add(&Poly::var(k, i - 1).scale(&v.coords[m]));
            }
        }
        // Left translation by the constant p0 in an affine chart.
        match self.chart {
            Chart::HeisenbergMatrix => {
                let p = &p0.coords;
                Ok(vec![
                    u[0].add(&Poly::constant(k, p[0].clone())),
                    u[1].add(&Poly::constant(k, p[1].clone())),
                    u[2].add(&Poly::constant(k, p[2].clone()))
                        .add(&u[1].scale(&p[0])),
                ])
            }
            Chart::Exponential => {
                // p0 * u = p0 + u + [p0, u]/2 (step <= 2).
                let bracket = bracket_affine(algebra, &p0.coords, &u);
                let half = S::from_ratio(1, 2);
                Ok((0..n)
                    .map(|m| {
                        u[m].add(&Poly::constant(k, p0.coords[m].clone()))
                            .add(&bracket[m].scale(&half))
                    })
                    .collect())
            }
        }
    }
}

/// Bracket of a constant vector against a vector of polynomials.
fn bracket_affine<S: Scalar>(
    algebra: &GradedLieAlgebra,
    x: &[S],
    y: &[Poly<S>],
) -> Vec<Poly<S>> {
    let nvars = y[0].nvars();
    let mut out = vec![Poly::zero(nvars); algebra.dim()];
    for e in algebra.bracket_entries() {
        // [x, y] += c * (x_i y_j - x_j y_i) e_k
        let term = y[e.j]
            .scale(&x[e.i])
            .sub(&y[e.i].scale(&x[e.j]))
            .scale(&S::from_rational(&e.coeff));
        out[e.k] = out[e.k].add(&term);
    }
    out
}

impl<S: Scalar> Eq for SimplexMap<S> {}

impl<S: Scalar> Ord for SimplexMap<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.chart, self.vertices.len())
            .cmp(&(other.chart, other.vertices.len()))
            .then_with(|| {
                for (a, b) in self.vertices.iter().zip(&other.vertices) {
                    match a.len().cmp(&b.len()) {
                        Ordering::Equal => {}
                        ord => return ord,
                    }
                    for (x, y) in a.iter().zip(b) {
                        match x.cmp_key(y) {
                            Ordering::Equal => {}
                            ord => return ord,
                        }
                    }
                }
                Ordering::Equal
            })
    }
}

impl<S: Scalar> PartialOrd for SimplexMap<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::catalog;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn pt(chart: Chart, c: &[(i64, i64)]) -> GroupPoint<Rational> {
        GroupPoint::new(chart, c.iter().map(|&(n, d)| q(n, d)).collect())
    }

    #[test]
    fn vertices_are_reproduced_exactly() {
        let h = catalog::heisenberg(1);
        for chart in [Chart::Exponential, Chart::HeisenbergMatrix] {
            let p0 = pt(chart, &[(0, 1), (0, 1), (0, 1)]);
            let p1 = pt(chart, &[(1, 1), (0, 1), (2, 1)]);
            let p2 = pt(chart, &[(0, 1), (1, 3), (-1, 1)]);
            let s = SimplexMap::straight(&[p0.clone(), p1.clone(), p2.clone()]).unwrap();
            let e0 = s.eval(&h, &[q(1, 1), q(0, 1), q(0, 1)]).unwrap();
            let e1 = s.eval(&h, &[q(0, 1), q(1, 1), q(0, 1)]).unwrap();
            let e2 = s.eval(&h, &[q(0, 1), q(0, 1), q(1, 1)]).unwrap();
            assert_eq!(e0, p0);
            assert_eq!(e1, p1);
            assert_eq!(e2, p2);
        }
    }

    #[test]
    fn polynomials_match_pointwise_evaluation() {
        let h = catalog::heisenberg(1);
        let s = SimplexMap::straight(&[
            pt(Chart::Exponential, &[(1, 2), (1, 3), (1, 5)]),
            pt(Chart::Exponential, &[(1, 1), (0, 1), (0, 1)]),
            pt(Chart::Exponential, &[(0, 1), (1, 1), (1, 2)]),
        ])
        .unwrap();
        let polys = s.barycentric_polys(&h).unwrap();
        let t = [q(1, 3), q(1, 6)];
        let bary = [q(1, 1) - q(1, 3) - q(1, 6), q(1, 3), q(1, 6)];
        let via_eval = s.eval(&h, &bary).unwrap();
        for (m, p) in polys.iter().enumerate() {
            assert_eq!(p.eval(&t), via_eval.coords[m], "coordinate {m}");
        }
        // Step-2 exponential chart: affine in t.
        assert!(polys.iter().all(|p| p.is_affine()));
    }

    #[test]
    fn matrix_chart_simplices_are_affine_in_matrix_coordinates() {
        let h = catalog::heisenberg(1);
        let s = SimplexMap::straight(&[
            pt(Chart::HeisenbergMatrix, &[(0, 1), (0, 1), (0, 1)]),
            pt(Chart::HeisenbergMatrix, &[(1, 1), (0, 1), (0, 1)]),
            pt(Chart::HeisenbergMatrix, &[(0, 1), (1, 1), (0, 1)]),
        ])
        .unwrap();
        let polys = s.barycentric_polys(&h).unwrap();
        assert!(polys.iter().all(|p| p.is_affine()));
        // The planar triangle stays in the plane z = 0 in the matrix chart.
        assert!(polys[2].is_zero());
    }

    #[test]
    fn step3_recursive_cone_evaluates_and_refuses_polynomials() {
        let a = catalog::lookup("filiform-4").unwrap();
        let mk = |c: [i64; 4]| {
            GroupPoint::exponential(c.iter().map(|&v| q(v, 1)).collect::<Vec<_>>())
        };
        let s = SimplexMap::straight(&[mk([0, 0, 0, 0]), mk([1, 0, 0, 0]), mk([0, 1, 0, 0])]).unwrap();
        assert!(s.barycentric_polys(&a).is_err());
        // Vertices still reproduce exactly through the recursive cone.
        let e1 = s.eval(&a, &[q(0, 1), q(1, 1), q(0, 1)]).unwrap();
        assert_eq!(e1.coords[0], q(1, 1));
        // Interior point evaluates without division blowups.
        let mid = s.eval(&a, &[q(1, 3), q(1, 3), q(1, 3)]).unwrap();
        assert_eq!(mid.coords.len(), 4);
    }

    #[test]
    fn faces_are_vertex_sublists() {
        let h = catalog::heisenberg(1);
        let p0 = pt(Chart::Exponential, &[(0, 1), (0, 1), (0, 1)]);
        let p1 = pt(Chart::Exponential, &[(1, 1), (0, 1), (0, 1)]);
        let p2 = pt(Chart::Exponential, &[(0, 1), (1, 1), (0, 1)]);
        let s = SimplexMap::straight(&[p0.clone(), p1.clone(), p2.clone()]).unwrap();
        let f1 = s.face(1);
        assert_eq!(f1.vertex(0), p0);
        assert_eq!(f1.vertex(1), p2);
        let _ = h;
    }

    #[test]
    fn degenerate_simplices_detected_but_usable() {
        let p = pt(Chart::Exponential, &[(1, 1), (2, 1), (3, 1)]);
        let s = SimplexMap::straight(&[p.clone(), p.clone()]).unwrap();
        assert!(s.is_degenerate());
    }
}
