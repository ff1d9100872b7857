//! The contact complex of the first Heisenberg group in the matrix chart.
//!
//! Invariant forms on the group sort by weight, and in each degree exactly
//! one weight survives in cohomology: 0, 1, 3, 4. The complex keeps only
//! those parts. Degree zero is a function, degree one keeps `a dx + b dy`
//! (no `theta` component), degree two keeps `c dx^theta + e dy^theta` (no
//! `dx^dy` component), degree three is a multiple of the volume
//! `dx^dy^theta`. The differential on the middle degrees is second order:
//! it crosses the missing weight-2 level by solving for the unique `theta`
//! correction whose differential cancels the `dx^dy` term.
//!
//! All coefficients are polynomials in the matrix chart coordinates, where
//! `theta = dz - x dy` and the horizontal frame is `X = d/dx`,
//! `Y = d/dy + x d/dz`, with vertical `Z = d/dz = [X, Y]`.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::forms::Form;
use crate::lie::Chart;
use crate::poly::Poly;
use crate::scalar::{Rational, Scalar};

/// A form in the contact complex, with polynomial coefficients.
///
/// Components by degree: `[f]`, `[a, b]` for `a dx + b dy`, `[c, e]` for
/// `c dx^theta + e dy^theta`, `[f]` for `f dx^dy^theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct RuminForm {
    degree: usize,
    comps: Vec<Poly<Rational>>,
}

fn check_nvars(p: &Poly<Rational>) -> Result<()> {
    if p.nvars() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: p.nvars() });
    }
    Ok(())
}

impl RuminForm {
    pub fn function(f: Poly<Rational>) -> Result<Self> {
        check_nvars(&f)?;
        Ok(RuminForm { degree: 0, comps: alloc::vec![f] })
    }

    /// `a dx + b dy`.
    pub fn one_form(a: Poly<Rational>, b: Poly<Rational>) -> Result<Self> {
        check_nvars(&a)?;
        check_nvars(&b)?;
        Ok(RuminForm { degree: 1, comps: alloc::vec![a, b] })
    }

    /// `c dx^theta + e dy^theta`.
    pub fn two_form(c: Poly<Rational>, e: Poly<Rational>) -> Result<Self> {
        check_nvars(&c)?;
        check_nvars(&e)?;
        Ok(RuminForm { degree: 2, comps: alloc::vec![c, e] })
    }

    /// `f dx^dy^theta`.
    pub fn three_form(f: Poly<Rational>) -> Result<Self> {
        check_nvars(&f)?;
        Ok(RuminForm { degree: 3, comps: alloc::vec![f] })
    }

    pub fn zero(degree: usize) -> Result<Self> {
        let comps = match degree {
            0 | 3 => 1,
            1 | 2 => 2,
            _ => return Err(Error::DegreeOutOfRange { degree, max: 3 }),
        };
        Ok(RuminForm { degree, comps: alloc::vec![Poly::zero(3); comps] })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> &[Poly<Rational>] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    /// The underlying exterior form in coordinate differentials, for
    /// integration along chains.
    pub fn to_form(&self) -> Result<Form<Rational>> {
        let chart = Chart::HeisenbergMatrix;
        let x = Poly::var(3, 0);
        match self.degree {
            0 => Err(Error::DegreeOutOfRange { degree: 0, max: 3 }),
            1 => {
                let dx = Form::term(chart, 3, &[0], self.comps[0].clone())?;
                let dy = Form::term(chart, 3, &[1], self.comps[1].clone())?;
                Ok(dx.add(&dy)?)
            }
            2 => {
                // dx^theta = dx^dz - x dx^dy, dy^theta = dy^dz.
                let c = &self.comps[0];
                let e = &self.comps[1];
                let f = Form::term(chart, 3, &[0, 2], c.clone())?
                    .add(&Form::term(chart, 3, &[0, 1], x.mul(c).scale(&-Rational::one()))?)?
                    .add(&Form::term(chart, 3, &[1, 2], e.clone())?)?;
                Ok(f)
            }
            3 => Form::term(chart, 3, &[0, 1, 2], self.comps[0].clone()),
            _ => Err(Error::DegreeOutOfRange { degree: self.degree, max: 3 }),
        }
    }
}

/// Horizontal derivative `Xp = dp/dx`.
fn x_deriv(p: &Poly<Rational>) -> Poly<Rational> {
    p.partial(0)
}

/// Horizontal derivative `Yp = dp/dy + x dp/dz`.
fn y_deriv(p: &Poly<Rational>) -> Poly<Rational> {
    p.partial(1).add(&Poly::var(3, 0).mul(&p.partial(2)))
}

/// Vertical derivative `Zp = dp/dz`.
fn z_deriv(p: &Poly<Rational>) -> Poly<Rational> {
    p.partial(2)
}

fn expect_degree(form: &RuminForm, degree: usize) -> Result<()> {
    if form.degree() != degree {
        return Err(Error::DegreeOutOfRange { degree: form.degree(), max: degree });
    }
    Ok(())
}

/// Differential on functions: the horizontal part `(Xf) dx + (Yf) dy` of
/// `df` (the remaining `(Zf) theta` has weight 2 and is dropped).
pub fn rumin_d0(f: &RuminForm) -> Result<RuminForm> {
    expect_degree(f, 0)?;
    let f = &f.components()[0];
    RuminForm::one_form(x_deriv(f), y_deriv(f))
}

/// Differential on horizontal one-forms: `d(omega + f theta)` for the
/// unique `f` killing the `dx^dy` component. Writing `omega = a dx + b dy`,
/// the expansion of `d` in the frame gives `f = Xb - Ya` (the coefficient
/// of `f` is `-1` because `d theta = -dx^dy`), and the surviving weight-3
/// components are second order in `a, b`.
pub fn rumin_d1(omega: &RuminForm) -> Result<RuminForm> {
    expect_degree(omega, 1)?;
    let a = &omega.components()[0];
    let b = &omega.components()[1];
    let f = x_deriv(b).sub(&y_deriv(a));
    let c = x_deriv(&f).sub(&z_deriv(a));
    let e = y_deriv(&f).sub(&z_deriv(b));
    // d(omega + f theta) = c dx^theta + e dy^theta with a zero dx^dy
    // component by the choice of f; cross-check against the coordinate
    // exterior differential.
    let total = RuminForm::two_form(c.clone(), e.clone())?;
    let witness = omega
        .to_form()?
        .add(&Form::term(Chart::HeisenbergMatrix, 3, &[2], f.clone())?)?
        .add(&Form::term(Chart::HeisenbergMatrix, 3, &[1], Poly::var(3, 0).mul(&f).scale(&-Rational::one()))?)?;
    if witness.exterior_d() != total.to_form()? {
        return Err(Error::Invalid(
            "weight-3 projection disagrees with the exterior differential".to_string(),
        ));
    }
    Ok(total)
}

/// Differential on weight-3 two-forms: the ordinary exterior differential,
/// `(Xe - Yc) dx^dy^theta`.
pub fn rumin_d2(omega: &RuminForm) -> Result<RuminForm> {
    expect_degree(omega, 2)?;
    let c = &omega.components()[0];
    let e = &omega.components()[1];
    RuminForm::three_form(x_deriv(e).sub(&y_deriv(c)))
}

/// The differential in any degree.
pub fn rumin_d(form: &RuminForm) -> Result<RuminForm> {
    match form.degree() {
        0 => rumin_d0(form),
        1 => rumin_d1(form),
        2 => rumin_d2(form),
        3 => RuminForm::zero(3),
        d => Err(Error::DegreeOutOfRange { degree: d, max: 3 }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn random_poly(rng: &mut ChaCha8Rng) -> Poly<Rational> {
        let mut p = Poly::constant(3, q(rng.gen_range(-3..=3), 1));
        for _ in 0..rng.gen_range(1..=4) {
            let mut mono = Poly::constant(3, q(rng.gen_range(-4..=4), rng.gen_range(1..=3)));
            for v in 0..3 {
                for _ in 0..rng.gen_range(0..=2) {
                    mono = mono.mul(&Poly::var(3, v));
                }
            }
            p = p.add(&mono);
        }
        p
    }

    #[test]
    fn differential_of_coordinates() {
        let x = RuminForm::function(Poly::var(3, 0)).unwrap();
        let dx = rumin_d0(&x).unwrap();
        assert_eq!(dx.components()[0], Poly::constant(3, q(1, 1)));
        assert!(dx.components()[1].is_zero());
        // dz = theta + x dy, so the horizontal part of d(z) is x dy.
        let z = RuminForm::function(Poly::var(3, 2)).unwrap();
        let dz = rumin_d0(&z).unwrap();
        assert!(dz.components()[0].is_zero());
        assert_eq!(dz.components()[1], Poly::var(3, 0));
        let c = RuminForm::function(Poly::constant(3, q(7, 2))).unwrap();
        assert!(rumin_d0(&c).unwrap().is_zero());
    }

    #[test]
    fn closed_one_forms_from_the_worked_examples() {
        // omega = dx: f = 0 and the differential vanishes.
        let dx = RuminForm::one_form(Poly::constant(3, q(1, 1)), Poly::zero(3)).unwrap();
        assert!(rumin_d1(&dx).unwrap().is_zero());
        // omega = x dy: f = 1 and omega + theta = dz is closed.
        let xdy = RuminForm::one_form(Poly::zero(3), Poly::var(3, 0)).unwrap();
        assert!(rumin_d1(&xdy).unwrap().is_zero());
    }

    #[test]
    fn two_form_differentials() {
        let dxtheta = RuminForm::two_form(Poly::constant(3, q(1, 1)), Poly::zero(3)).unwrap();
        assert!(rumin_d2(&dxtheta).unwrap().is_zero());
        let x_dytheta = RuminForm::two_form(Poly::zero(3), Poly::var(3, 0)).unwrap();
        let d = rumin_d2(&x_dytheta).unwrap();
        assert_eq!(d.components()[0], Poly::constant(3, q(1, 1)));
    }

    #[test]
    fn complex_property_on_random_polynomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let f = RuminForm::function(random_poly(&mut rng)).unwrap();
            assert!(rumin_d1(&rumin_d0(&f).unwrap()).unwrap().is_zero());
            let omega =
                RuminForm::one_form(random_poly(&mut rng), random_poly(&mut rng)).unwrap();
            assert!(rumin_d2(&rumin_d1(&omega).unwrap()).unwrap().is_zero());
            let two = RuminForm::two_form(random_poly(&mut rng), random_poly(&mut rng)).unwrap();
            assert!(rumin_d(&rumin_d(&two).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn degree_two_underlying_form_has_no_weight_two_part() {
        // The dx^dy coefficient of the coordinate expansion is forced to
        // -x c by theta = dz - x dy; the coframe expansion has none.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let omega = RuminForm::one_form(random_poly(&mut rng), random_poly(&mut rng)).unwrap();
        let d = rumin_d1(&omega).unwrap();
        let form = d.to_form().unwrap();
        let x = Poly::var(3, 0);
        let c = form.coefficient(&[0, 2]).cloned().unwrap_or_else(|| Poly::zero(3));
        let xy = form.coefficient(&[0, 1]).cloned().unwrap_or_else(|| Poly::zero(3));
        assert_eq!(xy, x.mul(&c).scale(&q(-1, 1)));
    }
}
