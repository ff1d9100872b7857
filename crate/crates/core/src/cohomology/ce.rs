//! Constant-coefficient cochains on a graded Lie algebra and their
//! Chevalley-Eilenberg differential.
//!
//! A cochain lives in the exterior algebra of the dual space: a sum of dual
//! basis monomials `e_{i1}* ^ ... ^ e_{ik}*` with rational coefficients.
//! The differential is determined on degree one by the bracket,
//! `d e_m* = -sum_{i<j} c^m_{ij} e_i* ^ e_j*`, and extends as an
//! antiderivation. Because the bracket respects the grading, `d` preserves
//! the weight of a monomial (the sum of the layer weights of its indices),
//! so the whole complex splits into finite weight blocks.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lie::GradedLieAlgebra;
use crate::scalar::{Rational, Scalar};

/// A constant-coefficient alternating form on a graded Lie algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain {
    degree: usize,
    /// Strictly increasing index tuples mapped to nonzero coefficients.
    terms: BTreeMap<Vec<u8>, Rational>,
}

impl Cochain {
    pub fn zero(degree: usize) -> Self {
        Cochain { degree, terms: BTreeMap::new() }
    }

    /// Dual basis monomial for the given indices, in any order; repeated
    /// indices are rejected.
    pub fn basis(indices: &[u8]) -> Result<Self> {
        let (sorted, sign) = sort_with_sign(indices.to_vec()).ok_or_else(|| {
            Error::Invalid("repeated index in an alternating monomial".to_string())
        })?;
        let mut terms = BTreeMap::new();
        terms.insert(sorted, Rational::from_ratio(sign, 1));
        Ok(Cochain { degree: indices.len(), terms })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8], &Rational)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn coefficient(&self, indices: &[u8]) -> Rational {
        match sort_with_sign(indices.to_vec()) {
            Some((sorted, sign)) => self
                .terms
                .get(&sorted)
                .map(|c| c * Rational::from_ratio(sign, 1))
                .unwrap_or_else(Rational::zero),
            None => Rational::zero(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::DegreeOutOfRange { degree: other.degree, max: self.degree });
        }
        let mut out = self.clone();
        for (key, c) in &other.terms {
            out.accumulate(key.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Cochain::zero(self.degree);
        }
        let terms = self.terms.iter().map(|(k, c)| (k.clone(), c * factor)).collect();
        Cochain { degree: self.degree, terms }
    }

    /// The common weight of all monomials, when the cochain is homogeneous.
    pub fn homogeneous_weight(&self, algebra: &GradedLieAlgebra) -> Option<usize> {
        let mut weight = None;
        for key in self.terms.keys() {
            let w: usize = key.iter().map(|&i| algebra.weight(i as usize)).sum();
            match weight {
                None => weight = Some(w),
                Some(prev) if prev != w => return None,
                _ => {}
            }
        }
        weight
    }

    fn accumulate(&mut self, key: Vec<u8>, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }
}

/// Sort indices, counting transpositions; `None` on a repeated index.
fn sort_with_sign(mut idx: Vec<u8>) -> Option<(Vec<u8>, i64)> {
    let mut sign = 1i64;
    for a in 1..idx.len() {
        let mut b = a;
        while b > 0 && idx[b - 1] >= idx[b] {
            if idx[b - 1] == idx[b] {
                return None;
            }
            idx.swap(b - 1, b);
            sign = -sign;
            b -= 1;
        }
    }
    Some((idx, sign))
}

/// Sparse differentials of the dual basis vectors: for each index `m`, the
/// list of `(i, j, -c^m_{ij})` making up `d e_m*`.
fn dual_differentials(algebra: &GradedLieAlgebra) -> Vec<Vec<(u8, u8, Rational)>> {
    let mut out = alloc::vec![Vec::new(); algebra.dim()];
    for e in algebra.bracket_entries() {
        out[e.k].push((e.i as u8, e.j as u8, -e.coeff));
    }
    out
}

/// Chevalley-Eilenberg differential of a cochain.
pub fn ce_differential(algebra: &GradedLieAlgebra, cochain: &Cochain) -> Result<Cochain> {
    let duals = dual_differentials(algebra);
    let mut out = Cochain::zero(cochain.degree + 1);
    for (key, coeff) in &cochain.terms {
        if let Some(&top) = key.iter().max() {
            if top as usize >= algebra.dim() {
                return Err(Error::DimensionMismatch {
                    expected: algebra.dim(),
                    found: top as usize + 1,
                });
            }
        }
        for (pos, &m) in key.iter().enumerate() {
            // d(e_{i1} ^ ... ^ e_{ik}) picks up (-1)^pos moving d past the
            // leading one-forms.
            let pos_sign = if pos % 2 == 0 { 1 } else { -1 };
            for (i, j, c) in &duals[m as usize] {
                let mut idx: Vec<u8> = Vec::with_capacity(key.len() + 1);
                idx.push(*i);
                idx.push(*j);
                idx.extend(key.iter().enumerate().filter(|(a, _)| *a != pos).map(|(_, &b)| b));
                if let Some((sorted, sign)) = sort_with_sign(idx) {
                    let total = coeff * c * Rational::from_ratio(pos_sign * sign, 1);
                    out.accumulate(sorted, total);
                }
            }
        }
    }
    Ok(out)
}

/// All strictly increasing `k`-tuples from `0..n`, lexicographic.
pub(crate) fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<u8>> {
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (0..k as u8).collect();
    loop {
        out.push(cur.clone());
        // Advance the rightmost index that can still move.
        let mut a = k;
        loop {
            if a == 0 {
                return out;
            }
            a -= 1;
            if (cur[a] as usize) < n - (k - a) {
                cur[a] += 1;
                for b in a + 1..k {
                    cur[b] = cur[b - 1] + 1;
                }
                break;
            }
        }
        if k == 0 {
            return out;
        }
    }
}

/// Basis monomials of degree `k` and weight `w`, lexicographic.
pub(crate) fn weight_block_basis(
    algebra: &GradedLieAlgebra,
    k: usize,
    w: usize,
) -> Vec<Vec<u8>> {
    increasing_tuples(algebra.dim(), k)
        .into_iter()
        .filter(|t| t.iter().map(|&i| algebra.weight(i as usize)).sum::<usize>() == w)
        .collect()
}

/// Matrix of the differential restricted to one weight block, one row per
/// domain monomial, columns indexed by the degree-`k+1` block of the same
/// weight.
pub(crate) fn block_matrix(
    algebra: &GradedLieAlgebra,
    k: usize,
    w: usize,
) -> Result<Vec<Vec<Rational>>> {
    let domain = weight_block_basis(algebra, k, w);
    let codomain = weight_block_basis(algebra, k + 1, w);
    let col: BTreeMap<&[u8], usize> =
        codomain.iter().enumerate().map(|(c, t)| (t.as_slice(), c)).collect();
    let mut rows = Vec::with_capacity(domain.len());
    for mono in &domain {
        let image = ce_differential(algebra, &Cochain::basis(mono)?)?;
        let mut row = alloc::vec![Rational::zero(); codomain.len()];
        for (key, coeff) in image.terms() {
            let c = col
                .get(key)
                .copied()
                .ok_or_else(|| Error::Invalid("differential left its weight block".to_string()))?;
            row[c] = coeff.clone();
        }
        rows.push(row);
    }
    Ok(rows)
}
