//! Integration of forms over chains of straight simplices.
//!
//! Two paths with the same contract. The exact path pulls the form back
//! through the barycentric polynomials of the simplex and integrates
//! monomials over the standard simplex by the factorial formula. The
//! floating-point path exploits that straight simplices in affine charts
//! are affine maps: the differential is the constant matrix of vertex
//! differences, so only the coefficient functions need quadrature, done by
//! a Duffy transform of a tensor Gauss-Legendre rule.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Float;

use crate::chains::{Chain, SimplexMap};
use crate::error::{Error, Result};
use crate::lie::GradedLieAlgebra;
use crate::scalar::{CompensatedSum, Rational, Scalar};

use super::exterior::Form;

/// Integral of a monomial t^e over the standard simplex in k variables:
/// (prod e_i!) / (k + sum e_i)!.
pub fn monomial_simplex_integral(exponents: &[u16]) -> Rational {
    let k = exponents.len();
    let mut numer = BigInt::from(1);
    let mut total = k;
    for &e in exponents {
        for f in 2..=e as usize {
            numer *= BigInt::from(f);
        }
        total += e as usize;
    }
    let mut denom = BigInt::from(1);
    for f in 2..=total {
        denom *= BigInt::from(f);
    }
    Rational::new(numer, denom)
}

fn check_degree<S: Scalar>(form: &Form<S>, simplex: &SimplexMap<S>) -> Result<()> {
    if form.degree() != simplex.dim() {
        return Err(Error::DegreeOutOfRange { degree: form.degree(), max: simplex.dim() });
    }
    if form.chart() != simplex.chart() {
        return Err(Error::ChartMismatch {
            expected: simplex.chart().name(),
            found: form.chart().name(),
        });
    }
    Ok(())
}

/// Exact integral of a rational form over a straight simplex.
pub fn integrate_simplex_exact(
    algebra: &GradedLieAlgebra,
    form: &Form<Rational>,
    simplex: &SimplexMap<Rational>,
) -> Result<Rational> {
    check_degree(form, simplex)?;
    if simplex.dim() == 0 {
        let x = simplex.vertex(0).coords;
        let mut out = Rational::zero();
        for (_, v) in form.eval_coefficients(&x)? {
            out = out + v;
        }
        return Ok(out);
    }
    let polys = simplex.barycentric_polys(algebra)?;
    let pulled = form.pullback(&polys)?;
    let k = simplex.dim();
    let top: Vec<u8> = (0..k as u8).collect();
    let Some(g) = pulled.coefficient(&top) else {
        return Ok(Rational::zero());
    };
    let mut out = Rational::zero();
    for (exps, c) in g.terms() {
        let m = monomial_simplex_integral(exps);
        out = out + c * &m;
    }
    Ok(out)
}

/// Exact integral of a rational form over a chain.
pub fn integrate_chain_exact(
    algebra: &GradedLieAlgebra,
    form: &Form<Rational>,
    chain: &Chain<Rational>,
) -> Result<Rational> {
    let mut out = Rational::zero();
    for (s, c) in chain.iter() {
        let v = integrate_simplex_exact(algebra, form, s)?;
        out = out + v * Rational::from_ratio(c, 1);
    }
    Ok(out)
}

/// Nodes and weights of a quadrature rule on [0,1].
#[derive(Debug, Clone)]
pub struct Quadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Quadrature {
    /// Gauss-Legendre rule with `m` points, exact for polynomials of degree
    /// 2m - 1. Nodes are found by Newton iteration on the Legendre
    /// recurrence, then mapped from [-1,1] to [0,1].
    pub fn gauss_legendre(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Invalid("quadrature needs at least one node".to_string()));
        }
        let mut nodes = vec![0.0; m];
        let mut weights = vec![0.0; m];
        for i in 0..m {
            let mut x =
                Float::cos(core::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5));
            let mut dp = 0.0;
            for _ in 0..64 {
                let (p, d) = legendre_with_derivative(m, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if Float::abs(dx) < 1e-16 {
                    break;
                }
            }
            nodes[i] = 0.5 * (1.0 - x);
            weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
        }
        nodes.reverse();
        weights.reverse();
        Ok(Quadrature { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for j in 2..=m {
        let next = ((2 * j - 1) as f64 * x * p - (j - 1) as f64 * p_prev) / j as f64;
        p_prev = p;
        p = next;
    }
    let dp = m as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

fn det_f64(m: &[Vec<f64>]) -> f64 {
    match m.len() {
        0 => 1.0,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        n => {
            let mut out = 0.0;
            for c in 0..n {
                if m[0][c] == 0.0 {
                    continue;
                }
                let minor: Vec<Vec<f64>> = (1..n)
                    .map(|r| (0..n).filter(|&cc| cc != c).map(|cc| m[r][cc]).collect())
                    .collect();
                let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
                out += sign * m[0][c] * det_f64(&minor);
            }
            out
        }
    }
}

/// Quadrature integral of a float form over a straight simplex in an
/// affine chart. Exact for the rule's polynomial degree since the simplex
/// differential is constant.
pub fn integrate_simplex_quadrature(
    algebra: &GradedLieAlgebra,
    form: &Form<f64>,
    simplex: &SimplexMap<f64>,
    rule: &Quadrature,
) -> Result<f64> {
    check_degree(form, simplex)?;
    if !simplex.is_chart_affine(algebra) {
        return Err(Error::ExactUnsupported(
            "numerical quadrature needs an affine chart (step <= 2 or the matrix chart)"
                .to_string(),
        ));
    }
    let k = simplex.dim();
    let p0 = simplex.vertex(0).coords;
    if k == 0 {
        let mut out = 0.0;
        for (_, v) in form.eval_coefficients(&p0)? {
            out += v;
        }
        return Ok(out);
    }
    // Constant differential: columns of vertex differences.
    let columns: Vec<Vec<f64>> = (1..=k)
        .map(|a| {
            simplex
                .vertex(a)
                .coords
                .iter()
                .zip(&p0)
                .map(|(v, o)| v - o)
                .collect()
        })
        .collect();
    // Constant minor per term index set.
    let minors: Vec<(Vec<u8>, f64)> = form
        .terms()
        .map(|(idx, _)| {
            let m: Vec<Vec<f64>> = idx
                .iter()
                .map(|&i| columns.iter().map(|col| col[i as usize]).collect())
                .collect();
            (idx.to_vec(), det_f64(&m))
        })
        .collect();
    // Duffy transform of the tensor rule: t_a = u_a * prod_{b<a} (1 - u_b),
    // with Jacobian prod_b (1 - u_b)^(k - 1 - b).
    let mut total = CompensatedSum::new();
    let mut counter = vec![0usize; k];
    loop {
        let mut weight = 1.0;
        let mut t = vec![0.0; k];
        let mut shrink = 1.0;
        for a in 0..k {
            let u = rule.nodes[counter[a]];
            weight *= rule.weights[counter[a]];
            t[a] = u * shrink;
            let remaining = (k - 1 - a) as i32;
            weight *= shrink_pow(1.0 - u, remaining);
            shrink *= 1.0 - u;
        }
        let point: Vec<f64> = p0
            .iter()
            .enumerate()
            .map(|(m, o)| {
                let mut v = *o;
                for (a, col) in columns.iter().enumerate() {
                    v += t[a] * col[m];
                }
                v
            })
            .collect();
        let mut integrand = 0.0;
        for (idx, minor) in &minors {
            if *minor == 0.0 {
                continue;
            }
            let f = form.coefficient(idx).expect("term exists").eval(&point);
            integrand += f * minor;
        }
        total.add(weight * integrand);
        // Odometer over the tensor grid.
        let mut axis = k;
        loop {
            if axis == 0 {
                return Ok(total.total());
            }
            axis -= 1;
            counter[axis] += 1;
            if counter[axis] < rule.len() {
                break;
            }
            counter[axis] = 0;
        }
    }
}

fn shrink_pow(base: f64, exp: i32) -> f64 {
    let mut out = 1.0;
    for _ in 0..exp {
        out *= base;
    }
    out
}

/// Quadrature integral over a chain, summed in canonical term order with
/// compensated accumulation.
pub fn integrate_chain_quadrature(
    algebra: &GradedLieAlgebra,
    form: &Form<f64>,
    chain: &Chain<f64>,
    rule: &Quadrature,
) -> Result<f64> {
    let mut total = CompensatedSum::new();
    for (s, c) in chain.iter() {
        let v = integrate_simplex_quadrature(algebra, form, s, rule)?;
        total.add(v * c as f64);
    }
    Ok(total.total())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::Coframe;
    use crate::lie::{catalog, Chart, GroupPoint};
    use crate::poly::Poly;
    use rand::{Rng, SeedableRng};

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn pt(chart: Chart, c: [(i64, i64); 3]) -> GroupPoint<Rational> {
        GroupPoint::new(chart, c.iter().map(|&(n, d)| q(n, d)).collect())
    }

    #[test]
    fn monomial_formula_matches_hand_values() {
        // Volume of the standard triangle and ∫ t1^2 t2 over it.
        assert_eq!(monomial_simplex_integral(&[0, 0]), q(1, 2));
        assert_eq!(monomial_simplex_integral(&[2, 1]), q(1, 60));
        assert_eq!(monomial_simplex_integral(&[1]), q(1, 2));
        assert_eq!(monomial_simplex_integral(&[0, 0, 0]), q(1, 6));
    }

    #[test]
    fn gauss_legendre_integrates_high_degree_exactly() {
        let rule = Quadrature::gauss_legendre(8).unwrap();
        // ∫_0^1 x^15 dx = 1/16, within roundoff.
        let v: f64 = rule
            .nodes()
            .iter()
            .zip(rule.weights())
            .map(|(x, w)| w * x.powi(15))
            .sum();
        assert!((v - 1.0 / 16.0).abs() < 1e-14, "got {v}");
        let total: f64 = rule.weights().iter().sum();
        assert!((total - 1.0).abs() < 1e-14);
    }

    /// The worked example that pins the cone chart: the straight triangle
    /// on (0,0,0), (1,0,0), (0,1,0) in the matrix chart integrates
    /// dx wedge theta to -1/6; the same vertices coned in exponential
    /// coordinates give -1/12.
    #[test]
    fn contact_area_of_unit_triangle_depends_on_chart() {
        let h = catalog::heisenberg(1);
        for (chart, expected) in [
            (Chart::HeisenbergMatrix, q(-1, 6)),
            (Chart::Exponential, q(-1, 12)),
        ] {
            let cf = Coframe::new(&h, chart).unwrap();
            let omega = Form::dx(chart, 3, 0).unwrap().wedge(&cf.theta(2).unwrap()).unwrap();
            let s = SimplexMap::straight(&[
                pt(chart, [(0, 1), (0, 1), (0, 1)]),
                pt(chart, [(1, 1), (0, 1), (0, 1)]),
                pt(chart, [(0, 1), (1, 1), (0, 1)]),
            ])
            .unwrap();
            let v = integrate_simplex_exact(&h, &omega, &s).unwrap();
            assert_eq!(v, expected, "chart {chart:?}");
        }
    }

    #[test]
    fn stokes_on_straight_simplices_is_exact() {
        let h = catalog::heisenberg(1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let rand_q = |rng: &mut rand_chacha::ChaCha8Rng| {
            q(rng.gen_range(-6..=6), rng.gen_range(1..=4))
        };
        for chart in [Chart::Exponential, Chart::HeisenbergMatrix] {
            for _ in 0..10 {
                // Random polynomial 1-form and random 2-simplex.
                let mut omega = Form::zero(chart, 3, 1);
                for i in 0..3u8 {
                    let coeff = Poly::from_terms(
                        3,
                        [
                            (vec![0, 0, 0], rand_q(&mut rng)),
                            (vec![1, 1, 0], rand_q(&mut rng)),
                            (vec![0, 0, 2], rand_q(&mut rng)),
                        ],
                    );
                    omega = omega.add(&Form::term(chart, 3, &[i], coeff).unwrap()).unwrap();
                }
                let verts: Vec<GroupPoint<Rational>> = (0..3)
                    .map(|_| {
                        GroupPoint::new(
                            chart,
                            (0..3).map(|_| rand_q(&mut rng)).collect::<Vec<_>>(),
                        )
                    })
                    .collect();
                let s = SimplexMap::straight(&verts).unwrap();
                let lhs = integrate_simplex_exact(&h, &omega.exterior_d(), &s).unwrap();
                let rhs = integrate_chain_exact(
                    &h,
                    &omega,
                    &Chain::from_simplex(s).boundary(),
                )
                .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn quadrature_matches_exact_on_polynomial_data() {
        let h = catalog::heisenberg(1);
        let cf = Coframe::new(&h, Chart::Exponential).unwrap();
        // omega = x dx^theta, a genuinely mixed-weight 2-form.
        let omega = Form::term(Chart::Exponential, 3, &[0], Poly::var(3, 0))
            .unwrap()
            .wedge(&cf.theta(2).unwrap())
            .unwrap();
        let s = SimplexMap::straight(&[
            pt(Chart::Exponential, [(1, 3), (0, 1), (1, 2)]),
            pt(Chart::Exponential, [(1, 1), (1, 4), (0, 1)]),
            pt(Chart::Exponential, [(0, 1), (1, 1), (2, 3)]),
        ])
        .unwrap();
        let exact = integrate_simplex_exact(&h, &omega, &s).unwrap();
        let rule = Quadrature::gauss_legendre(8).unwrap();
        let f_omega = omega.map_scalar(|r| Scalar::to_f64(r));
        let f_s = s.map_scalar(|r| Scalar::to_f64(r)).unwrap();
        let approx = integrate_simplex_quadrature(&h, &f_omega, &f_s, &rule).unwrap();
        assert!((approx - Scalar::to_f64(&exact)).abs() < 1e-13);
    }

    #[test]
    fn degenerate_simplices_integrate_to_zero() {
        let h = catalog::heisenberg(1);
        let cf = Coframe::new(&h, Chart::Exponential).unwrap();
        let omega = Form::dx(Chart::Exponential, 3, 0)
            .unwrap()
            .wedge(&cf.theta(2).unwrap())
            .unwrap();
        let p = pt(Chart::Exponential, [(1, 2), (1, 3), (1, 5)]);
        let r = pt(Chart::Exponential, [(2, 1), (0, 1), (1, 1)]);
        let s = SimplexMap::straight(&[p.clone(), p, r]).unwrap();
        assert_eq!(integrate_simplex_exact(&h, &omega, &s).unwrap(), q(0, 1));
    }

    #[test]
    fn step3_simplices_are_refused_by_both_paths() {
        let a = catalog::lookup("filiform-4").unwrap();
        let omega = Form::dx(Chart::Exponential, 4, 0).unwrap();
        let s = SimplexMap::straight(&[
            GroupPoint::exponential(vec![q(0, 1); 4]),
            GroupPoint::exponential(vec![q(1, 1), q(0, 1), q(0, 1), q(0, 1)]),
        ])
        .unwrap();
        assert!(integrate_simplex_exact(&a, &omega, &s).is_err());
        let rule = Quadrature::gauss_legendre(4).unwrap();
        let f_omega = omega.map_scalar(|r| Scalar::to_f64(r));
        let f_s = s.map_scalar(|r| Scalar::to_f64(r)).unwrap();
        assert!(integrate_simplex_quadrature(&a, &f_omega, &f_s, &rule).is_err());
    }
}
