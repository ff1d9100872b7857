//! Differential forms with polynomial coefficients, in two presentations:
//! against the coordinate differentials dx_i, or against a left-invariant
//! coframe. Both store a sorted index -> coefficient map; the wedge sign
//! bookkeeping is shared.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lie::Chart;
use crate::poly::Poly;
use crate::scalar::Scalar;

/// Merge two strictly increasing index lists; returns the permutation sign
/// and the merged list, or None when an index repeats (wedge vanishes).
pub(crate) fn merge_indices(a: &[u8], b: &[u8]) -> Option<(i64, Vec<u8>)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    out.extend_from_slice(a);
    out.extend_from_slice(b);
    // Insertion sort, counting transpositions.
    let mut sign = 1i64;
    for i in 1..out.len() {
        let mut j = i;
        while j > 0 && out[j - 1] > out[j] {
            out.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if out.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, out))
}

macro_rules! graded_terms_impl {
    ($name:ident, $doc:expr) => {
        #[doc = $doc]
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name<S: Scalar> {
            chart: Chart,
            nvars: usize,
            degree: usize,
            terms: BTreeMap<Vec<u8>, Poly<S>>,
        }

        impl<S: Scalar> $name<S> {
            pub fn zero(chart: Chart, nvars: usize, degree: usize) -> Self {
                $name { chart, nvars, degree, terms: BTreeMap::new() }
            }

            /// A single term `coeff * basis_I`. Indices are 0-based and must
            /// be strictly increasing.
            pub fn term(chart: Chart, nvars: usize, indices: &[u8], coeff: Poly<S>) -> Result<Self> {
                if coeff.nvars() != nvars {
                    return Err(Error::DimensionMismatch { expected: nvars, found: coeff.nvars() });
                }
                if indices.windows(2).any(|w| w[0] >= w[1])
                    || indices.iter().any(|&i| i as usize >= nvars)
                {
                    return Err(Error::Invalid(
                        "form indices must be strictly increasing and in range".to_string(),
                    ));
                }
                let mut terms = BTreeMap::new();
                if !coeff.is_zero() {
                    terms.insert(indices.to_vec(), coeff);
                }
                Ok($name { chart, nvars, degree: indices.len(), terms })
            }

            pub fn chart(&self) -> Chart {
                self.chart
            }

            pub fn nvars(&self) -> usize {
                self.nvars
            }

            pub fn degree(&self) -> usize {
                self.degree
            }

            pub fn is_zero(&self) -> bool {
                self.terms.is_empty()
            }

            pub fn terms(&self) -> impl Iterator<Item = (&[u8], &Poly<S>)> {
                self.terms.iter().map(|(i, p)| (i.as_slice(), p))
            }

            pub fn coefficient(&self, indices: &[u8]) -> Option<&Poly<S>> {
                self.terms.get(indices)
            }

            fn check_compatible(&self, other: &Self) -> Result<()> {
                if self.chart != other.chart {
                    return Err(Error::ChartMismatch {
                        expected: self.chart.name(),
                        found: other.chart.name(),
                    });
                }
                if self.nvars != other.nvars {
                    return Err(Error::DimensionMismatch {
                        expected: self.nvars,
                        found: other.nvars,
                    });
                }
                if self.degree != other.degree {
                    return Err(Error::DegreeOutOfRange {
                        degree: other.degree,
                        max: self.degree,
                    });
                }
                Ok(())
            }

            pub(crate) fn add_term(&mut self, indices: Vec<u8>, coeff: &Poly<S>) {
                if coeff.is_zero() {
                    return;
                }
                match self.terms.entry(indices) {
                    alloc::collections::btree_map::Entry::Occupied(mut e) => {
                        let sum = e.get().add(coeff);
                        if sum.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = sum;
                        }
                    }
                    alloc::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(coeff.clone());
                    }
                }
            }

            pub fn add(&self, other: &Self) -> Result<Self> {
                self.check_compatible(other)?;
                let mut out = self.clone();
                for (i, p) in &other.terms {
                    out.add_term(i.clone(), p);
                }
                Ok(out)
            }

            pub fn sub(&self, other: &Self) -> Result<Self> {
                self.add(&other.neg())
            }

            pub fn neg(&self) -> Self {
                let mut out = Self::zero(self.chart, self.nvars, self.degree);
                for (i, p) in &self.terms {
                    out.terms.insert(i.clone(), p.neg());
                }
                out
            }

            pub fn scale(&self, s: &S) -> Self {
                let mut out = Self::zero(self.chart, self.nvars, self.degree);
                for (i, p) in &self.terms {
                    let q = p.scale(s);
                    if !q.is_zero() {
                        out.terms.insert(i.clone(), q);
                    }
                }
                out
            }

            /// Multiply every coefficient by a polynomial (0-form times form).
            pub fn scale_poly(&self, f: &Poly<S>) -> Result<Self> {
                if f.nvars() != self.nvars {
                    return Err(Error::DimensionMismatch {
                        expected: self.nvars,
                        found: f.nvars(),
                    });
                }
                let mut out = Self::zero(self.chart, self.nvars, self.degree);
                for (i, p) in &self.terms {
                    let q = p.mul(f);
                    if !q.is_zero() {
                        out.terms.insert(i.clone(), q);
                    }
                }
                Ok(out)
            }

            pub fn wedge(&self, other: &Self) -> Result<Self> {
                if self.chart != other.chart || self.nvars != other.nvars {
                    return Err(Error::ChartMismatch {
                        expected: self.chart.name(),
                        found: other.chart.name(),
                    });
                }
                let mut out = Self::zero(self.chart, self.nvars, self.degree + other.degree);
                for (ia, pa) in &self.terms {
                    for (ib, pb) in &other.terms {
                        if let Some((sign, idx)) = merge_indices(ia, ib) {
                            let mut prod = pa.mul(pb);
                            if sign < 0 {
                                prod = prod.neg();
                            }
                            out.add_term(idx, &prod);
                        }
                    }
                }
                Ok(out)
            }

            pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> $name<T> {
                let mut terms = BTreeMap::new();
                for (i, p) in &self.terms {
                    terms.insert(i.clone(), p.map_scalar(f));
                }
                $name { chart: self.chart, nvars: self.nvars, degree: self.degree, terms }
            }
        }
    };
}

graded_terms_impl!(
    Form,
    "A differential form written against the coordinate differentials: \
     a sum of polynomial coefficients times wedge monomials dx_I."
);
graded_terms_impl!(
    CoframeForm,
    "A differential form written against a left-invariant coframe: \
     a sum of polynomial coefficients times wedge monomials theta_I."
);

impl<S: Scalar> Form<S> {
    /// The coordinate 1-form dx_i.
    pub fn dx(chart: Chart, nvars: usize, i: usize) -> Result<Self> {
        Form::term(chart, nvars, &[i as u8], Poly::one(nvars))
    }

    /// Promote a polynomial to a 0-form.
    pub fn from_poly(chart: Chart, f: Poly<S>) -> Self {
        let nvars = f.nvars();
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(Vec::new(), f);
        }
        Form { chart, nvars, degree: 0, terms }
    }

    /// Exterior derivative, coordinate by coordinate.
    pub fn exterior_d(&self) -> Self {
        let mut out = Form::zero(self.chart, self.nvars, self.degree + 1);
        for (idx, p) in &self.terms {
            for var in 0..self.nvars {
                let dp = p.partial(var);
                if dp.is_zero() {
                    continue;
                }
                if let Some((sign, merged)) = merge_indices(&[var as u8], idx) {
                    let coeff = if sign < 0 { dp.neg() } else { dp };
                    out.add_term(merged, &coeff);
                }
            }
        }
        out
    }

    /// Evaluate the coefficient vector at a point, in index order.
    pub fn eval_coefficients(&self, x: &[S]) -> Result<Vec<(Vec<u8>, S)>> {
        if x.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: x.len() });
        }
        Ok(self
            .terms
            .iter()
            .map(|(i, p)| (i.clone(), p.eval(x)))
            .collect())
    }

    /// Pull back along a polynomial map given by its coordinate functions
    /// in `t`-variables: substitute into coefficients and push dx_i to the
    /// differential of the i-th coordinate function.
    pub fn pullback(&self, coords: &[Poly<S>]) -> Result<Form<S>> {
        if coords.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: coords.len() });
        }
        let tvars = coords
            .first()
            .map(|p| p.nvars())
            .ok_or_else(|| Error::Invalid("pullback needs at least one coordinate".to_string()))?;
        // Differentials of the coordinate functions.
        let d_coords: Vec<Vec<Poly<S>>> = coords
            .iter()
            .map(|c| (0..tvars).map(|a| c.partial(a)).collect())
            .collect();
        let mut out = Form::zero(self.chart, tvars, self.degree);
        for (idx, p) in &self.terms {
            let composed = p.compose(coords);
            if composed.is_zero() {
                continue;
            }
            // Wedge of the pulled-back differentials d(coords[idx_0]) ^ ...
            let mut pulled = Form::from_poly(self.chart, composed);
            for &i in idx {
                let mut one_form = Form::zero(self.chart, tvars, 1);
                for (a, dp) in d_coords[i as usize].iter().enumerate() {
                    if !dp.is_zero() {
                        one_form.add_term(alloc::vec![a as u8], dp);
                    }
                }
                pulled = pulled.wedge(&one_form)?;
                if pulled.is_zero() {
                    break;
                }
            }
            for (i, q) in &pulled.terms {
                out.add_term(i.clone(), q);
            }
        }
        Ok(out)
    }

    /// Render with coordinate names, e.g. `y dx^dz - 1/2 dy`.
    pub fn render(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut pieces: Vec<String> = Vec::with_capacity(self.terms.len());
        for (idx, p) in &self.terms {
            let coeff = p.render(names);
            let wedge = idx
                .iter()
                .map(|&i| {
                    let mut s = String::from("d");
                    s.push_str(names[i as usize]);
                    s
                })
                .collect::<Vec<_>>()
                .join("^");
            let piece = if idx.is_empty() {
                coeff
            } else if coeff == "1" {
                wedge
            } else if coeff == "-1" {
                let mut s = String::from("-");
                s.push_str(&wedge);
                s
            } else if p.num_terms() > 1 {
                let mut s = String::from("(");
                s.push_str(&coeff);
                s.push_str(") ");
                s.push_str(&wedge);
                s
            } else {
                let mut s = coeff;
                s.push(' ');
                s.push_str(&wedge);
                s
            };
            pieces.push(piece);
        }
        let mut out = String::new();
        for (i, piece) in pieces.iter().enumerate() {
            if i == 0 {
                out.push_str(piece);
            } else if let Some(rest) = piece.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(piece);
            }
        }
        out
    }
}
