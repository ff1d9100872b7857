//! Group operations in coordinates: truncated BCH multiplication,
//! inversion, dilations, homogeneous norm and distance, chart changes.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{scalar_pow, Rational, Scalar};

use super::algebra::GradedLieAlgebra;

/// Highest nilpotency step the truncated group law supports.
pub const MAX_BCH_STEP: usize = 3;

/// Coordinate chart a point is expressed in. The tag travels with every
/// point and is never coerced implicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Chart {
    /// Exponential coordinates of the first kind (any algebra).
    Exponential,
    /// Upper unipotent matrix entries (x, y, z) of the rank-one Heisenberg
    /// group; the group law is `(x1+x2, y1+y2, z1+z2+x1*y2)`.
    HeisenbergMatrix,
}

impl Chart {
    pub fn name(self) -> &'static str {
        match self {
            Chart::Exponential => "exponential",
            Chart::HeisenbergMatrix => "heisenberg-matrix",
        }
    }
}

/// A group element: coordinates plus the chart they live in.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupPoint<S: Scalar> {
    pub chart: Chart,
    pub coords: Vec<S>,
}

impl<S: Scalar> GroupPoint<S> {
    pub fn new(chart: Chart, coords: Vec<S>) -> Self {
        GroupPoint { chart, coords }
    }

    pub fn exponential(coords: Vec<S>) -> Self {
        GroupPoint { chart: Chart::Exponential, coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> GroupPoint<T> {
        GroupPoint { chart: self.chart, coords: self.coords.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> GroupPoint<f64> {
        self.map_scalar(|c| c.to_f64())
    }
}

impl GradedLieAlgebra {
    fn check_point<S: Scalar>(&self, p: &GroupPoint<S>) -> Result<()> {
        if p.coords.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: p.coords.len() });
        }
        if p.chart == Chart::HeisenbergMatrix && !self.is_heisenberg1() {
            return Err(Error::ChartMismatch {
                expected: Chart::Exponential.name(),
                found: Chart::HeisenbergMatrix.name(),
            });
        }
        Ok(())
    }

    /// Identity element in the given chart (all coordinates zero in both
    /// supported charts).
    pub fn identity<S: Scalar>(&self, chart: Chart) -> GroupPoint<S> {
        GroupPoint::new(chart, vec![S::zero(); self.dim()])
    }

    /// Truncated Baker-Campbell-Hausdorff sum of two algebra vectors:
    /// `x + y + [x,y]/2 + [x,[x,y]]/12 - [y,[x,y]]/12`. Exact for step <= 3;
    /// steps beyond that are refused at the group level.
    pub fn bch<S: Scalar>(&self, x: &[S], y: &[S]) -> Vec<S> {
        let half = S::from_ratio(1, 2);
        let twelfth = S::from_ratio(1, 12);
        let xy = self.bracket(x, y);
        let xxy = self.bracket(x, &xy);
        let yxy = self.bracket(y, &xy);
        (0..self.dim())
            .map(|m| {
                x[m].clone()
                    + y[m].clone()
                    + half.clone() * xy[m].clone()
                    + twelfth.clone() * (xxy[m].clone() - yxy[m].clone())
            })
            .collect()
    }

    /// Group multiplication in the point's chart.
    pub fn group_mul<S: Scalar>(&self, p: &GroupPoint<S>, q: &GroupPoint<S>) -> Result<GroupPoint<S>> {
        self.check_point(p)?;
        self.check_point(q)?;
        if p.chart != q.chart {
            return Err(Error::ChartMismatch { expected: p.chart.name(), found: q.chart.name() });
        }
        match p.chart {
            Chart::Exponential => {
                if self.step() > MAX_BCH_STEP {
                    return Err(Error::UnsupportedStep { step: self.step(), max: MAX_BCH_STEP });
                }
                Ok(GroupPoint::exponential(self.bch(&p.coords, &q.coords)))
            }
            Chart::HeisenbergMatrix => {
                let (x1, y1, z1) = (&p.coords[0], &p.coords[1], &p.coords[2]);
                let (x2, y2, z2) = (&q.coords[0], &q.coords[1], &q.coords[2]);
                Ok(GroupPoint::new(
                    Chart::HeisenbergMatrix,
                    vec![
                        x1.clone() + x2.clone(),
                        y1.clone() + y2.clone(),
                        z1.clone() + z2.clone() + x1.clone() * y2.clone(),
                    ],
                ))
            }
        }
    }

    /// Group inverse in the point's chart.
    pub fn group_inv<S: Scalar>(&self, p: &GroupPoint<S>) -> Result<GroupPoint<S>> {
        self.check_point(p)?;
        match p.chart {
            Chart::Exponential => {
                Ok(GroupPoint::exponential(p.coords.iter().map(|c| -c.clone()).collect()))
            }
            Chart::HeisenbergMatrix => {
                let (x, y, z) = (&p.coords[0], &p.coords[1], &p.coords[2]);
                Ok(GroupPoint::new(
                    Chart::HeisenbergMatrix,
                    vec![-x.clone(), -y.clone(), x.clone() * y.clone() - z.clone()],
                ))
            }
        }
    }

    /// `p^{-1} q`, the displacement from `p` to `q`.
    pub fn displacement<S: Scalar>(&self, p: &GroupPoint<S>, q: &GroupPoint<S>) -> Result<GroupPoint<S>> {
        let inv = self.group_inv(p)?;
        self.group_mul(&inv, q)
    }

    /// Dilation `delta_t`: scales layer-`l` coordinates by `t^l`. Requires
    /// `t > 0`. Valid verbatim in both charts (the matrix chart's group law
    /// is weighted homogeneous).
    pub fn dilation<S: Scalar>(&self, t: &S, p: &GroupPoint<S>) -> Result<GroupPoint<S>> {
        self.check_point(p)?;
        if !t.is_positive() {
            return Err(Error::NonPositiveDilation);
        }
        let coords = p
            .coords
            .iter()
            .enumerate()
            .map(|(i, c)| scalar_pow(t, self.weight(i)) * c.clone())
            .collect();
        Ok(GroupPoint::new(p.chart, coords))
    }

    /// Homogeneous norm: `max_l (sup-norm of layer l)^(1/l)`. Uses exact
    /// integer roots where available (`sqrt` for layer 2), so powers of two
    /// scale exactly.
    pub fn hom_norm<S: Scalar>(&self, p: &GroupPoint<S>) -> Result<f64> {
        self.check_point(p)?;
        let mut best = 0.0_f64;
        for layer in 1..=self.step() {
            let mut sup = 0.0_f64;
            for i in self.layer_range(layer) {
                sup = sup.max(p.coords[i].abs().to_f64());
            }
            let rooted = match layer {
                1 => sup,
                2 => Float::sqrt(sup),
                3 => Float::cbrt(sup),
                _ => Float::powf(sup, 1.0 / layer as f64),
            };
            best = best.max(rooted);
        }
        Ok(best)
    }

    /// Left-invariant homogeneous distance `hom_norm(p^{-1} q)`.
    pub fn hom_dist<S: Scalar>(&self, p: &GroupPoint<S>, q: &GroupPoint<S>) -> Result<f64> {
        let d = self.displacement(p, q)?;
        self.hom_norm(&d)
    }

    /// Convert a point to the requested chart. Exponential <-> matrix on
    /// the rank-one Heisenberg group: `z_exp = z_mat - x*y/2`.
    pub fn chart_convert<S: Scalar>(&self, p: &GroupPoint<S>, to: Chart) -> Result<GroupPoint<S>> {
        self.check_point(p)?;
        if p.chart == to {
            return Ok(p.clone());
        }
        if !self.is_heisenberg1() {
            return Err(Error::ChartMismatch { expected: p.chart.name(), found: to.name() });
        }
        let half = S::from_ratio(1, 2);
        let (x, y, z) = (p.coords[0].clone(), p.coords[1].clone(), p.coords[2].clone());
        let xy_half = half * x.clone() * y.clone();
        let z_new = match to {
            Chart::Exponential => z - xy_half,
            Chart::HeisenbergMatrix => z + xy_half,
        };
        Ok(GroupPoint::new(to, vec![x, y, z_new]))
    }

    /// The chart-change map as polynomials (inputs and outputs indexed by
    /// coordinates of the source chart).
    pub fn chart_convert_polys(&self, from: Chart, to: Chart) -> Result<Vec<Poly<Rational>>> {
        let n = self.dim();
        if from == to {
            return Ok((0..n).map(|i| Poly::var(n, i)).collect());
        }
        if !self.is_heisenberg1() {
            return Err(Error::ChartMismatch { expected: from.name(), found: to.name() });
        }
        let x = Poly::<Rational>::var(3, 0);
        let y = Poly::<Rational>::var(3, 1);
        let z = Poly::<Rational>::var(3, 2);
        let half = Rational::from_ratio(1, 2);
        let shift = x.mul(&y).scale(&half);
        let z_new = match to {
            Chart::Exponential => z.sub(&shift),
            Chart::HeisenbergMatrix => z.add(&shift),
        };
        Ok(vec![x, y, z_new])
    }

    /// The group law as a polynomial map in `2n` variables: the first `n`
    /// are the left factor's coordinates, the last `n` the right factor's.
    pub fn group_law_polys(&self, chart: Chart) -> Result<Vec<Poly<Rational>>> {
        let n = self.dim();
        match chart {
            Chart::Exponential => {
                if self.step() > MAX_BCH_STEP {
                    return Err(Error::UnsupportedStep { step: self.step(), max: MAX_BCH_STEP });
                }
                let p: Vec<Poly<Rational>> = (0..n).map(|i| Poly::var(2 * n, i)).collect();
                let q: Vec<Poly<Rational>> = (0..n).map(|i| Poly::var(2 * n, n + i)).collect();
                let half = Rational::from_ratio(1, 2);
                let twelfth = Rational::from_ratio(1, 12);
                let pq = self.bracket_poly(&p, &q);
                let ppq = self.bracket_poly(&p, &pq);
                let qpq = self.bracket_poly(&q, &pq);
                Ok((0..n)
                    .map(|m| {
                        p[m].add(&q[m])
                            .add(&pq[m].scale(&half))
                            .add(&ppq[m].sub(&qpq[m]).scale(&twelfth))
                    })
                    .collect())
            }
            Chart::HeisenbergMatrix => {
                if !self.is_heisenberg1() {
                    return Err(Error::InvalidAlgebra(
                        "matrix chart requires the rank-one Heisenberg algebra".to_string(),
                    ));
                }
                let v = |i| Poly::<Rational>::var(6, i);
                Ok(vec![
                    v(0).add(&v(3)),
                    v(1).add(&v(4)),
                    v(2).add(&v(5)).add(&v(0).mul(&v(4))),
                ])
            }
        }
    }

    /// The group inverse as a polynomial map in `n` variables.
    pub fn inverse_polys(&self, chart: Chart) -> Result<Vec<Poly<Rational>>> {
        let n = self.dim();
        match chart {
            Chart::Exponential => Ok((0..n).map(|i| Poly::var(n, i).neg()).collect()),
            Chart::HeisenbergMatrix => {
                if !self.is_heisenberg1() {
                    return Err(Error::InvalidAlgebra(
                        "matrix chart requires the rank-one Heisenberg algebra".to_string(),
                    ));
                }
                let x = Poly::<Rational>::var(3, 0);
                let y = Poly::<Rational>::var(3, 1);
                let z = Poly::<Rational>::var(3, 2);
                Ok(vec![x.neg(), y.neg(), x.mul(&y).sub(&z)])
            }
        }
    }
}
