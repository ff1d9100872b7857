//! The left-invariant coframe of a Carnot group in a chart.
//!
//! The frame is read off the group law: the i-th left-invariant field at p
//! is the y_i-derivative of p * y at y = 0, so its coordinate matrix J(p)
//! is unipotent with polynomial entries. The coframe matrix is the inverse,
//! computed by the terminating Neumann series, and theta_i = sum_j
//! (J^{-1})_{ij} dp_j. Coframe element i carries the weight of the layer
//! basis vector e_i; a form's weight spectrum is read off its coframe
//! presentation.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lie::{Chart, GradedLieAlgebra};
use crate::poly::Poly;
use crate::scalar::{Rational, Scalar};

use super::exterior::{CoframeForm, Form};

/// Left-invariant coframe data in a fixed chart: the coframe matrix A with
/// theta = A dx, and its inverse J with dx = J theta, both polynomial.
#[derive(Debug, Clone)]
pub struct Coframe {
    chart: Chart,
    weights: Vec<usize>,
    /// A[m][i]: coefficient of dx_i in theta_m.
    theta_matrix: Vec<Vec<Poly<Rational>>>,
    /// J[i][m]: coefficient of theta_m in dx_i (the frame matrix).
    frame_matrix: Vec<Vec<Poly<Rational>>>,
}

impl Coframe {
    pub fn new(algebra: &GradedLieAlgebra, chart: Chart) -> Result<Self> {
        let n = algebra.dim();
        let law = algebra.group_law_polys(chart)?;
        // Frame matrix J(p): d/dy_i of the group law at y = 0, as a
        // polynomial in p. Variables 0..n are p, variables n..2n are y.
        let p_vars: Vec<Poly<Rational>> = (0..n).map(|i| Poly::var(n, i)).collect();
        let zero_subs: Vec<Poly<Rational>> = p_vars
            .iter()
            .cloned()
            .chain((0..n).map(|_| Poly::zero(n)))
            .collect();
        let mut frame = vec![vec![Poly::zero(n); n]; n];
        for (m, law_m) in law.iter().enumerate() {
            for i in 0..n {
                frame[m][i] = law_m.partial(n + i).compose(&zero_subs);
            }
        }
        // frame[m][i] is the m-th coordinate of the field X_i; J is unipotent
        // because X_i only adds higher-weight corrections to d/dx_i.
        for (m, row) in frame.iter().enumerate() {
            for (i, entry) in row.iter().enumerate() {
                let ok = if m == i {
                    entry
                        .clone()
                        .sub(&Poly::one(n))
                        .is_zero()
                } else if algebra.weight(m) > algebra.weight(i) {
                    true
                } else {
                    entry.is_zero()
                };
                if !ok {
                    return Err(Error::InvalidAlgebra(alloc::format!(
                        "frame matrix is not weight-unipotent at ({m}, {i})"
                    )));
                }
            }
        }
        // Neumann series for the inverse: N = J - I is nilpotent.
        let is_identity =
            |m: &Vec<Vec<Poly<Rational>>>| -> bool {
                m.iter().enumerate().all(|(r, row)| {
                    row.iter().enumerate().all(|(c, e)| {
                        if r == c {
                            e.clone().sub(&Poly::one(n)).is_zero()
                        } else {
                            e.is_zero()
                        }
                    })
                })
            };
        let mat_mul = |a: &Vec<Vec<Poly<Rational>>>, b: &Vec<Vec<Poly<Rational>>>| {
            let mut out = vec![vec![Poly::zero(n); n]; n];
            for r in 0..n {
                for c in 0..n {
                    let mut acc = Poly::zero(n);
                    for s in 0..n {
                        acc = acc.add(&a[r][s].mul(&b[s][c]));
                    }
                    out[r][c] = acc;
                }
            }
            out
        };
        let mut nilpotent = frame.clone();
        for (r, row) in nilpotent.iter_mut().enumerate() {
            row[r] = row[r].sub(&Poly::one(n));
        }
        let mut inverse = vec![vec![Poly::zero(n); n]; n];
        for (r, row) in inverse.iter_mut().enumerate() {
            row[r] = Poly::one(n);
        }
        let mut power = nilpotent.clone();
        let mut sign = -1i64;
        for _ in 0..algebra.step() {
            for r in 0..n {
                for c in 0..n {
                    let term = if sign < 0 { power[r][c].neg() } else { power[r][c].clone() };
                    inverse[r][c] = inverse[r][c].add(&term);
                }
            }
            power = mat_mul(&power, &nilpotent);
            sign = -sign;
        }
        let check = mat_mul(&frame, &inverse);
        if !is_identity(&check) {
            return Err(Error::InvalidAlgebra(
                "coframe inversion did not terminate".into(),
            ));
        }
        Ok(Coframe {
            chart,
            weights: algebra.weights().to_vec(),
            theta_matrix: inverse,
            frame_matrix: frame,
        })
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// The coframe element theta_m as a coordinate 1-form.
    pub fn theta(&self, m: usize) -> Result<Form<Rational>> {
        let n = self.dim();
        if m >= n {
            return Err(Error::DegreeOutOfRange { degree: m, max: n - 1 });
        }
        let mut out = Form::zero(self.chart, n, 1);
        for (i, coeff) in self.theta_matrix[m].iter().enumerate() {
            out = out.add(&Form::term(self.chart, n, &[i as u8], coeff.clone())?)?;
        }
        Ok(out)
    }

    /// Rewrite a coframe form against the coordinate differentials.
    pub fn to_coordinates(&self, cf: &CoframeForm<Rational>) -> Result<Form<Rational>> {
        self.convert(cf, true)
    }

    /// Rewrite a coordinate form against the coframe.
    pub fn to_coframe(&self, f: &Form<Rational>) -> Result<CoframeForm<Rational>> {
        self.convert(f, false)
    }

    fn convert<A, B>(&self, src: &A, to_coords: bool) -> Result<B>
    where
        A: GradedTermsView<Rational>,
        B: GradedTermsView<Rational>,
    {
        if src.chart() != self.chart {
            return Err(Error::ChartMismatch {
                expected: self.chart.name(),
                found: src.chart().name(),
            });
        }
        let n = self.dim();
        if src.nvars() != n {
            return Err(Error::DimensionMismatch { expected: n, found: src.nvars() });
        }
        let matrix = if to_coords { &self.theta_matrix } else { &self.frame_matrix };
        let mut out = B::zero_like(self.chart, n, src.degree());
        for (idx, p) in src.terms_view() {
            // Substitute each basis 1-form by its expansion and wedge out.
            let mut expanded = B::zero_like(self.chart, n, 0);
            expanded.add_term_view(Vec::new(), p);
            for i in idx {
                let one_form = {
                    let mut acc = B::zero_like(self.chart, n, 1);
                    for (j, coeff) in matrix[i as usize].iter().enumerate() {
                        if !coeff.is_zero() {
                            acc.add_term_view(vec![j as u8], coeff);
                        }
                    }
                    acc
                };
                expanded = expanded.wedge_view(&one_form)?;
            }
            for (i, q) in expanded.terms_view() {
                out.add_term_view(i.to_vec(), q);
            }
        }
        Ok(out)
    }

    /// Weights present in a coordinate form, with the coframe component of
    /// each weight converted back to coordinates.
    pub fn weight_parts(&self, f: &Form<Rational>) -> Result<BTreeMap<usize, Form<Rational>>> {
        let cf = self.to_coframe(f)?;
        let mut by_weight: BTreeMap<usize, CoframeForm<Rational>> = BTreeMap::new();
        for (idx, p) in cf.terms() {
            let w: usize = idx.iter().map(|&i| self.weights[i as usize]).sum();
            let entry = by_weight
                .entry(w)
                .or_insert_with(|| CoframeForm::zero(self.chart, self.dim(), cf.degree()));
            *entry = entry.add(&CoframeForm::term(self.chart, self.dim(), idx, p.clone())?)?;
        }
        let mut out = BTreeMap::new();
        for (w, part) in by_weight {
            out.insert(w, self.to_coordinates(&part)?);
        }
        Ok(out)
    }

    /// Smallest coframe weight appearing in the form; None for the zero form.
    pub fn min_weight(&self, f: &Form<Rational>) -> Result<Option<usize>> {
        let cf = self.to_coframe(f)?;
        Ok(cf
            .terms()
            .map(|(idx, _)| idx.iter().map(|&i| self.weights[i as usize]).sum())
            .min())
    }

    /// Coframe coefficient sup norm over a sampled box: the max over grid
    /// points and coframe indices of |g_I(x)|, with the form presented as
    /// sum g_I theta_I.
    pub fn sup_norm(
        &self,
        f: &Form<Rational>,
        lo: &[f64],
        hi: &[f64],
        samples_per_axis: usize,
    ) -> Result<f64> {
        let cf = self.to_coframe(f)?;
        let n = self.dim();
        if lo.len() != n || hi.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: lo.len() });
        }
        let coeffs: Vec<Poly<f64>> = cf
            .terms()
            .map(|(_, p)| p.map_scalar(|r| Scalar::to_f64(r)))
            .collect();
        if coeffs.is_empty() {
            return Ok(0.0);
        }
        let steps = samples_per_axis.max(2);
        let mut best = 0.0_f64;
        let mut idx = vec![0usize; n];
        loop {
            let x: Vec<f64> = (0..n)
                .map(|i| lo[i] + (hi[i] - lo[i]) * idx[i] as f64 / (steps - 1) as f64)
                .collect();
            for c in &coeffs {
                let v = c.eval(&x).abs();
                if v > best {
                    best = v;
                }
            }
            // Odometer.
            let mut axis = n;
            loop {
                if axis == 0 {
                    return Ok(best);
                }
                axis -= 1;
                idx[axis] += 1;
                if idx[axis] < steps {
                    break;
                }
                idx[axis] = 0;
            }
        }
    }
}

/// Internal view trait so coordinate and coframe forms share the conversion
/// machinery without exposing their term maps.
trait GradedTermsView<S: Scalar>: Sized {
    fn zero_like(chart: Chart, nvars: usize, degree: usize) -> Self;
    fn chart(&self) -> Chart;
    fn nvars(&self) -> usize;
    fn degree(&self) -> usize;
    fn terms_view(&self) -> Vec<(Vec<u8>, &Poly<S>)>;
    fn add_term_view(&mut self, idx: Vec<u8>, coeff: &Poly<S>);
    fn wedge_view(&self, other: &Self) -> Result<Self>;
}

macro_rules! impl_view {
    ($t:ident) => {
        impl GradedTermsView<Rational> for $t<Rational> {
            fn zero_like(chart: Chart, nvars: usize, degree: usize) -> Self {
                $t::zero(chart, nvars, degree)
            }
            fn chart(&self) -> Chart {
                $t::chart(self)
            }
            fn nvars(&self) -> usize {
                $t::nvars(self)
            }
            fn degree(&self) -> usize {
                $t::degree(self)
            }
            fn terms_view(&self) -> Vec<(Vec<u8>, &Poly<Rational>)> {
                self.terms().map(|(i, p)| (i.to_vec(), p)).collect()
            }
            fn add_term_view(&mut self, idx: Vec<u8>, coeff: &Poly<Rational>) {
                self.add_term(idx, coeff);
            }
            fn wedge_view(&self, other: &Self) -> Result<Self> {
                self.wedge(other)
            }
        }
    };
}

impl_view!(Form);
impl_view!(CoframeForm);

/// Pull a form back under the dilation by a rational factor t: coordinates
/// scale by t^(w_i), and so do the coordinate differentials.
pub fn dilation_pullback(
    algebra: &GradedLieAlgebra,
    f: &Form<Rational>,
    t: &Rational,
) -> Form<Rational> {
    let n = algebra.dim();
    let coords: Vec<Poly<Rational>> = (0..n)
        .map(|i| Poly::var(n, i).scale(&crate::scalar::scalar_pow(t, algebra.weight(i))))
        .collect();
    f.pullback(&coords).expect("dilation pullback is total")
}

/// Pull a form back under left translation by a fixed rational point g:
/// substitute x -> g * x using the polynomial group law.
pub fn left_translation_pullback(
    algebra: &GradedLieAlgebra,
    f: &Form<Rational>,
    g: &[Rational],
) -> Result<Form<Rational>> {
    let n = algebra.dim();
    if g.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: g.len() });
    }
    let law = algebra.group_law_polys(f.chart())?;
    // Substitute the left factor by the constant g, keep x as variables.
    let subs: Vec<Poly<Rational>> = g
        .iter()
        .map(|c| Poly::constant(n, c.clone()))
        .chain((0..n).map(|i| Poly::var(n, i)))
        .collect();
    let coords: Vec<Poly<Rational>> = law.iter().map(|p| p.compose(&subs)).collect();
    f.pullback(&coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::catalog;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn heisenberg_exponential_contact_form() {
        let h = catalog::heisenberg(1);
        let cf = Coframe::new(&h, Chart::Exponential).unwrap();
        // theta_0 = dx, theta_1 = dy, theta_2 = dz - (x dy - y dx)/2.
        let names = ["x", "y", "z"];
        assert_eq!(cf.theta(0).unwrap().render(&names), "dx");
        assert_eq!(cf.theta(1).unwrap().render(&names), "dy");
        let theta = cf.theta(2).unwrap();
        assert_eq!(theta.coefficient(&[2]).unwrap(), &Poly::one(3));
        assert_eq!(theta.coefficient(&[1]).unwrap(), &Poly::var(3, 0).scale(&q(-1, 2)));
        assert_eq!(theta.coefficient(&[0]).unwrap(), &Poly::var(3, 1).scale(&q(1, 2)));
    }

    #[test]
    fn heisenberg_matrix_contact_form() {
        let h = catalog::heisenberg(1);
        let cf = Coframe::new(&h, Chart::HeisenbergMatrix).unwrap();
        // theta_2 = dz - x dy in the matrix chart.
        let theta = cf.theta(2).unwrap();
        assert_eq!(theta.coefficient(&[2]).unwrap(), &Poly::one(3));
        assert_eq!(theta.coefficient(&[1]).unwrap(), &Poly::var(3, 0).neg());
        assert!(theta.coefficient(&[0]).is_none());
    }

    #[test]
    fn maurer_cartan_equations_hold() {
        // d theta_m = -sum_{i<j} c^m_{ij} theta_i ^ theta_j, checked for
        // every catalog algebra in exponential coordinates.
        for name in ["heisenberg-1", "heisenberg-2", "free-2-step-3", "filiform-4", "quaternionic-heisenberg-1"] {
            let a = catalog::lookup(name).unwrap();
            let cf = Coframe::new(&a, Chart::Exponential).unwrap();
            for m in 0..a.dim() {
                let lhs = cf.theta(m).unwrap().exterior_d();
                let mut rhs = Form::zero(Chart::Exponential, a.dim(), 2);
                for e in a.bracket_entries() {
                    if e.k == m {
                        let wedge = cf.theta(e.i).unwrap().wedge(&cf.theta(e.j).unwrap()).unwrap();
                        rhs = rhs.add(&wedge.scale(&-e.coeff.clone())).unwrap();
                    }
                }
                assert_eq!(lhs, rhs, "{name}, theta_{m}");
            }
        }
    }

    #[test]
    fn coframe_round_trip_is_identity() {
        let h = catalog::heisenberg(2);
        let cf = Coframe::new(&h, Chart::Exponential).unwrap();
        let n = h.dim();
        // omega = x1 dx2^dx5 + dx3^dx4.
        let f = Form::term(Chart::Exponential, n, &[1, 4], Poly::var(n, 0))
            .unwrap()
            .add(&Form::term(Chart::Exponential, n, &[2, 3], Poly::one(n)).unwrap())
            .unwrap();
        let back = cf.to_coordinates(&cf.to_coframe(&f).unwrap()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn weights_of_contact_pair() {
        let h = catalog::heisenberg(1);
        let cf = Coframe::new(&h, Chart::Exponential).unwrap();
        let theta = cf.theta(2).unwrap();
        assert_eq!(cf.min_weight(&theta).unwrap(), Some(2));
        let dx = Form::dx(Chart::Exponential, 3, 0).unwrap();
        assert_eq!(cf.min_weight(&dx).unwrap(), Some(1));
        // dz = theta + (x dy - y dx)/2 mixes weights 1 and 2.
        let dz = Form::dx(Chart::Exponential, 3, 2).unwrap();
        let parts = cf.weight_parts(&dz).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(cf.min_weight(&dz).unwrap(), Some(1));
        let total = parts
            .values()
            .fold(Form::zero(Chart::Exponential, 3, 1), |acc, p| acc.add(p).unwrap());
        assert_eq!(total, dz);
    }

    #[test]
    fn dilation_scales_by_weight() {
        let h = catalog::heisenberg(1);
        let cf = Coframe::new(&h, Chart::Exponential).unwrap();
        let theta = cf.theta(2).unwrap();
        let t = q(3, 2);
        let pulled = dilation_pullback(&h, &theta, &t);
        assert_eq!(pulled, theta.scale(&(&t * &t)));
        let dx = Form::dx(Chart::Exponential, 3, 0).unwrap();
        assert_eq!(dilation_pullback(&h, &dx, &t), dx.scale(&t));
        // dtheta = -dx^dy has weight 2 as well.
        let dtheta = theta.exterior_d();
        assert_eq!(dilation_pullback(&h, &dtheta, &t), dtheta.scale(&(&t * &t)));
    }

    #[test]
    fn coframe_is_left_invariant_and_dx_is_not() {
        let h = catalog::heisenberg(1);
        for chart in [Chart::Exponential, Chart::HeisenbergMatrix] {
            let cf = Coframe::new(&h, chart).unwrap();
            let g = [q(2, 3), q(-1, 2), q(5, 7)];
            for m in 0..3 {
                let theta = cf.theta(m).unwrap();
                let pulled = left_translation_pullback(&h, &theta, &g).unwrap();
                assert_eq!(pulled, theta, "chart {chart:?}, theta_{m}");
            }
            // dz is not left-invariant: the pullback picks up dx/dy terms.
            let dz = Form::dx(chart, 3, 2).unwrap();
            let pulled = left_translation_pullback(&h, &dz, &g).unwrap();
            assert_ne!(pulled, dz);
        }
    }

    #[test]
    fn sup_norm_of_contact_form_on_unit_box() {
        let h = catalog::heisenberg(1);
        let cf = Coframe::new(&h, Chart::Exponential).unwrap();
        let theta = cf.theta(2).unwrap();
        // In coframe presentation theta has constant coefficient 1.
        let norm = cf.sup_norm(&theta, &[-1.0; 3], &[1.0; 3], 5).unwrap();
        assert!((norm - 1.0).abs() < 1e-12);
        // x dx has sup 1 on the box via its coframe coefficient x.
        let xdx = Form::term(Chart::Exponential, 3, &[0], Poly::var(3, 0)).unwrap();
        let norm = cf.sup_norm(&xdx, &[-1.0; 3], &[1.0; 3], 5).unwrap();
        assert!((norm - 1.0).abs() < 1e-12);
    }
}
