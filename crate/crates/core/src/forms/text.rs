//! A small text grammar for forms: `x dx^theta`, `dz - x dy`, `3/4 dy^dz`.
//!
//! Values are forms; multiplication (star or juxtaposition) is the wedge,
//! which on 0-forms is just the product. The caret doubles as polynomial
//! power (0-form base, integer exponent) and wedge (form operands), binding
//! tighter than multiplication, so `x^2 dx` and `dx^theta` both read as
//! expected. Coordinates are named x, y, z for dimension up to three and
//! x1..xn otherwise; `d` + coordinate is the coordinate differential;
//! `theta1..thetan` name the left-invariant coframe, with plain `theta`
//! accepted when the top weight appears exactly once.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lie::{Chart, GradedLieAlgebra};
use crate::poly::Poly;
use crate::scalar::{Rational, Scalar};

use super::coframe::Coframe;
use super::exterior::Form;

/// Coordinate names used by the text grammar.
pub fn coordinate_names(dim: usize) -> Vec<String> {
    if dim <= 3 {
        ["x", "y", "z"][..dim].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=dim).map(|i| format!("x{i}")).collect()
    }
}

/// Render a coordinate form using the grammar's names.
pub fn render_form(algebra: &GradedLieAlgebra, form: &Form<Rational>) -> String {
    let names = coordinate_names(algebra.dim());
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    form.render(&refs)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                chars.next();
            }
            '+' => {
                chars.next();
                out.push(Tok::Plus);
            }
            '-' => {
                chars.next();
                out.push(Tok::Minus);
            }
            '*' => {
                chars.next();
                out.push(Tok::Star);
            }
            '/' => {
                chars.next();
                out.push(Tok::Slash);
            }
            '^' => {
                chars.next();
                out.push(Tok::Caret);
            }
            '(' => {
                chars.next();
                out.push(Tok::LParen);
            }
            ')' => {
                chars.next();
                out.push(Tok::RParen);
            }
            '0'..='9' => {
                let mut n: i64 = 0;
                while let Some(&d) = chars.peek() {
                    if let Some(v) = d.to_digit(10) {
                        n = n
                            .checked_mul(10)
                            .and_then(|n| n.checked_add(v as i64))
                            .ok_or_else(|| Error::Parse("integer literal overflows".to_string()))?;
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Num(n));
            }
            c if c.is_ascii_alphabetic() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Ident(s));
            }
            other => {
                return Err(Error::Parse(format!("unexpected character '{other}'")));
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    chart: Chart,
    dim: usize,
    names: Vec<String>,
    coframe: &'a Coframe,
    top_weight_index: Option<usize>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn constant(&self, n: i64) -> Form<Rational> {
        Form::from_poly(self.chart, Poly::constant(self.dim, Rational::from_ratio(n, 1)))
    }

    fn resolve_ident(&self, name: &str) -> Result<Form<Rational>> {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return Ok(Form::from_poly(self.chart, Poly::var(self.dim, i)));
        }
        if let Some(coord) = name.strip_prefix('d') {
            if let Some(i) = self.names.iter().position(|n| n == coord) {
                return Form::dx(self.chart, self.dim, i);
            }
        }
        if name == "theta" {
            let Some(i) = self.top_weight_index else {
                return Err(Error::Parse(
                    "plain 'theta' is ambiguous here; use thetaK".to_string(),
                ));
            };
            return self.coframe.theta(i);
        }
        if let Some(k) = name.strip_prefix("theta") {
            if let Ok(i) = k.parse::<usize>() {
                if i >= 1 && i <= self.dim {
                    return self.coframe.theta(i - 1);
                }
            }
        }
        Err(Error::UnknownName(name.to_string()))
    }

    /// expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<Form<Rational>> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                Some(Tok::Minus) => {
                    self.next();
                    let t = self.term()?;
                    acc = acc.sub(&t)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    /// term := unary (('*' | '/' | juxtaposition) unary)*
    fn term(&mut self) -> Result<Form<Rational>> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    let rhs = self.unary()?;
                    acc = acc.wedge(&rhs)?;
                }
                Some(Tok::Slash) => {
                    self.next();
                    let rhs = self.unary()?;
                    acc = divide(&acc, &rhs)?;
                }
                // Juxtaposition: a factor follows with no operator.
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    let rhs = self.unary()?;
                    acc = acc.wedge(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Form<Rational>> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.next();
            let f = self.unary()?;
            return Ok(f.neg());
        }
        self.power()
    }

    /// power := atom ('^' atom)*, resolving to polynomial power when the
    /// exponent is a constant 0-form and to the wedge otherwise.
    fn power(&mut self) -> Result<Form<Rational>> {
        let mut acc = self.atom()?;
        while matches!(self.peek(), Some(Tok::Caret)) {
            self.next();
            let rhs = self.atom()?;
            acc = caret(&acc, &rhs)?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Form<Rational>> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(self.constant(n)),
            Some(Tok::Ident(name)) => self.resolve_ident(&name),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(Error::Parse("missing closing parenthesis".to_string())),
                }
            }
            other => Err(Error::Parse(format!("expected a factor, found {other:?}"))),
        }
    }
}

fn constant_value(f: &Form<Rational>) -> Option<Rational> {
    if f.degree() != 0 {
        return None;
    }
    if f.is_zero() {
        return Some(Rational::from_ratio(0, 1));
    }
    let p = f.coefficient(&[])?;
    if p.total_degree() == 0 {
        Some(p.constant_term())
    } else {
        None
    }
}

fn divide(lhs: &Form<Rational>, rhs: &Form<Rational>) -> Result<Form<Rational>> {
    let Some(c) = constant_value(rhs) else {
        return Err(Error::Parse("division is only by nonzero constants".to_string()));
    };
    if c == Rational::from_ratio(0, 1) {
        return Err(Error::Parse("division by zero".to_string()));
    }
    Ok(lhs.scale(&c.recip()))
}

fn caret(lhs: &Form<Rational>, rhs: &Form<Rational>) -> Result<Form<Rational>> {
    // Constant integer exponent on a 0-form: polynomial power.
    if lhs.degree() == 0 {
        if let Some(c) = constant_value(rhs) {
            if c.is_integer() {
                let n = c.to_integer();
                use num_traits::ToPrimitive;
                let Some(e) = n.to_i64().filter(|&e| e >= 0) else {
                    return Err(Error::Parse("polynomial exponent must be a small nonnegative integer".to_string()));
                };
                let base = lhs
                    .coefficient(&[])
                    .cloned()
                    .unwrap_or_else(|| Poly::zero(lhs.nvars()));
                return Ok(Form::from_poly(lhs.chart(), base.pow(e as usize)));
            }
        }
    }
    lhs.wedge(rhs)
}

/// Parse a form in the grammar against an algebra and chart.
pub fn parse_form(
    algebra: &GradedLieAlgebra,
    chart: Chart,
    input: &str,
) -> Result<Form<Rational>> {
    let coframe = Coframe::new(algebra, chart)?;
    let top = algebra.step();
    let top_indices: Vec<usize> = (0..algebra.dim())
        .filter(|&i| algebra.weight(i) == top)
        .collect();
    let mut parser = Parser {
        toks: tokenize(input)?,
        pos: 0,
        chart,
        dim: algebra.dim(),
        names: coordinate_names(algebra.dim()),
        coframe: &coframe,
        top_weight_index: if top_indices.len() == 1 { Some(top_indices[0]) } else { None },
    };
    if parser.toks.is_empty() {
        return Err(Error::Parse("empty form expression".to_string()));
    }
    let form = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return Err(Error::Parse(format!(
            "trailing input after position {}",
            parser.pos
        )));
    }
    Ok(form)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::catalog;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn contact_form_by_name_and_by_expression() {
        let h = catalog::heisenberg(1);
        // Matrix chart: theta = dz - x dy.
        let via_name = parse_form(&h, Chart::HeisenbergMatrix, "theta").unwrap();
        let via_expr = parse_form(&h, Chart::HeisenbergMatrix, "dz - x dy").unwrap();
        assert_eq!(via_name, via_expr);
        // Exponential chart: theta = dz - (x dy - y dx)/2.
        let via_name = parse_form(&h, Chart::Exponential, "theta").unwrap();
        let via_expr =
            parse_form(&h, Chart::Exponential, "dz - 1/2 x dy + 1/2 y dx").unwrap();
        assert_eq!(via_name, via_expr);
    }

    #[test]
    fn caret_is_power_on_scalars_and_wedge_on_forms() {
        let h = catalog::heisenberg(1);
        let f = parse_form(&h, Chart::Exponential, "x^2 dy").unwrap();
        let expected = Form::term(
            Chart::Exponential,
            3,
            &[1],
            Poly::var(3, 0).mul(&Poly::var(3, 0)),
        )
        .unwrap();
        assert_eq!(f, expected);
        let w = parse_form(&h, Chart::Exponential, "dx^dy").unwrap();
        assert_eq!(
            w,
            Form::dx(Chart::Exponential, 3, 0)
                .unwrap()
                .wedge(&Form::dx(Chart::Exponential, 3, 1).unwrap())
                .unwrap()
        );
        assert!(parse_form(&h, Chart::Exponential, "dx^dx").unwrap().is_zero());
    }

    #[test]
    fn mixed_weight_example_parses() {
        let h = catalog::heisenberg(1);
        let f = parse_form(&h, Chart::HeisenbergMatrix, "x dx^theta").unwrap();
        // x dx^(dz - x dy) = x dx^dz - x^2 dx^dy.
        assert_eq!(f.coefficient(&[0, 2]).unwrap(), &Poly::var(3, 0));
        assert_eq!(
            f.coefficient(&[0, 1]).unwrap(),
            &Poly::var(3, 0).mul(&Poly::var(3, 0)).neg()
        );
    }

    #[test]
    fn numbered_names_in_higher_dimension() {
        let h2 = catalog::heisenberg(2);
        let f = parse_form(&h2, Chart::Exponential, "x1 dx2^theta5 + 3/4 dx3^dx4").unwrap();
        assert_eq!(f.degree(), 2);
        assert!(!f.is_zero());
        // theta is ambiguous-free here: the top weight appears once.
        assert!(parse_form(&h2, Chart::Exponential, "dx1^theta").is_ok());
    }

    #[test]
    fn render_then_parse_round_trips() {
        let h = catalog::heisenberg(1);
        for chart in [Chart::Exponential, Chart::HeisenbergMatrix] {
            for text in ["x dx^theta", "dz - x dy", "y^2 z dx + 2 dy - 5/7 dz", "x y dz^dx"] {
                let f = parse_form(&h, chart, text).unwrap();
                let rendered = render_form(&h, &f);
                let back = parse_form(&h, chart, &rendered).unwrap();
                assert_eq!(back, f, "chart {chart:?}, text {text:?}");
            }
        }
    }

    #[test]
    fn errors_are_reported() {
        let h = catalog::heisenberg(1);
        assert!(matches!(
            parse_form(&h, Chart::Exponential, "dw"),
            Err(Error::UnknownName(_))
        ));
        assert!(parse_form(&h, Chart::Exponential, "x +").is_err());
        assert!(parse_form(&h, Chart::Exponential, "(x dy").is_err());
        assert!(parse_form(&h, Chart::Exponential, "dx / x").is_err());
        assert!(parse_form(&h, Chart::Exponential, "").is_err());
        // Mixed degrees cannot be added.
        assert!(parse_form(&h, Chart::Exponential, "dx + dx^dy").is_err());
        let q2 = catalog::quaternionic_heisenberg();
        // Four coframe elements share the top weight there.
        assert!(parse_form(&q2, Chart::Exponential, "theta").is_err());
        assert!(parse_form(&q2, Chart::Exponential, "theta5").is_ok());
        let _ = q(1, 1);
    }
}
