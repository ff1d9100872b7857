//! Sparse multivariate polynomials over a [`Scalar`].
//!
//! Used for group laws, simplex parameterizations, invariant coframes and
//! form coefficients. Exponents are kept in a dense vector per monomial;
//! the variable count is fixed per polynomial and checked when combining.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::scalar::{scalar_pow, Scalar};

/// Exponent vector; `exps[i]` is the power of variable `i`.
pub type Monomial = Vec<u16>;

/// Sparse polynomial in `nvars` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<S: Scalar> {
    nvars: usize,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Poly<S> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, value: S) -> Self {
        let mut p = Poly::zero(nvars);
        if !value.is_zero() {
            p.terms.insert(vec![0; nvars], value);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, S::one())
    }

    /// The variable `x_index`.
    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index out of range");
        let mut exps = vec![0u16; nvars];
        exps[index] = 1;
        let mut p = Poly::zero(nvars);
        p.terms.insert(exps, S::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, S)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Constant term (zero if absent).
    pub fn constant_term(&self) -> S {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(S::zero)
    }

    /// True if the polynomial has total degree <= 1.
    pub fn is_affine(&self) -> bool {
        self.total_degree() <= 1
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&e| e as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn add_term(&mut self, mono: Monomial, coeff: S) {
        assert_eq!(mono.len(), self.nvars, "monomial arity mismatch");
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono);
        match entry {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in self.terms.iter() {
            out.terms.insert(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, t: &S) -> Self {
        let mut out = Poly::zero(self.nvars);
        if t.is_zero() {
            return out;
        }
        for (m, c) in self.terms.iter() {
            let v = c.clone() * t.clone();
            if !v.is_zero() {
                out.terms.insert(m.clone(), v);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in self.terms.iter() {
            for (mb, cb) in other.terms.iter() {
                let mono: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(mono, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, exp: usize) -> Self {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative with respect to variable `index`.
    pub fn partial(&self, index: usize) -> Self {
        assert!(index < self.nvars);
        let mut out = Poly::zero(self.nvars);
        for (m, c) in self.terms.iter() {
            let e = m[index];
            if e == 0 {
                continue;
            }
            let mut mono = m.clone();
            mono[index] = e - 1;
            out.add_term(mono, c.clone() * S::from_ratio(e as i64, 1));
        }
        out
    }

    pub fn eval(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.nvars, "evaluation arity mismatch");
        let mut acc = S::zero();
        for (m, c) in self.terms.iter() {
            let mut term = c.clone();
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    term = term * scalar_pow(&point[i], e as usize);
                }
            }
            acc = acc + term;
        }
        acc
    }

    /// Substitute `subs[i]` for variable `i`. All substituted polynomials
    /// must share a variable count, which becomes the output's.
    pub fn compose(&self, subs: &[Poly<S>]) -> Poly<S> {
        assert_eq!(subs.len(), self.nvars, "substitution arity mismatch");
        let out_vars = subs.first().map(|p| p.nvars).unwrap_or(0);
        for s in subs {
            assert_eq!(s.nvars, out_vars, "substitution variable count mismatch");
        }
        let mut out = Poly::zero(out_vars);
        for (m, c) in self.terms.iter() {
            let mut term = Poly::constant(out_vars, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&subs[i].pow(e as usize));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Convert coefficients with `f`, dropping terms that map to zero.
    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in self.terms.iter() {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Render with the given variable names (used by the form printer).
    pub fn render(&self, names: &[&str]) -> String {
        use core::fmt::Write;
        if self.is_zero() {
            return String::from("0");
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                s.push_str(" + ");
            }
            let mut vars = String::new();
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !vars.is_empty() {
                    vars.push('*');
                }
                let _ = write!(vars, "{}", names.get(i).copied().unwrap_or("?"));
                if e > 1 {
                    let _ = write!(vars, "^{e}");
                }
            }
            if vars.is_empty() {
                let _ = write!(s, "{c}");
            } else if *c == S::one() {
                s.push_str(&vars);
            } else if *c == -S::one() {
                s.push('-');
                s.push_str(&vars);
            } else {
                let _ = write!(s, "{c}*");
                s.push_str(&vars);
            }
        }
        s
    }
}

impl<S: Scalar> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| alloc::format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", self.render(&refs))
    }
}
