//! Structure constants, grading and the invariants checked on construction.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::Poly;
use crate::scalar::{Rational, Scalar};

/// One sparse bracket coefficient: `[e_i, e_j] += coeff * e_k` with `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub coeff: Rational,
}

/// A stratified nilpotent Lie algebra with rational structure constants.
///
/// Basis vectors are indexed `0..dim` and ordered by layer: indices
/// `0..layer_dims[0]` span the first layer, and so on. The weight of a
/// coordinate is its (1-based) layer number. Construction validates
/// antisymmetry (implied by the sparse `i < j` storage), the Jacobi
/// identity, grading consistency `[g_a, g_b] <= g_{a+b}`, and that every
/// layer past the first is spanned by brackets with the first layer.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedLieAlgebra {
    name: String,
    layer_dims: Vec<usize>,
    weights: Vec<usize>,
    /// Sparse brackets keyed by (i, j) with i < j.
    table: BTreeMap<(usize, usize), Vec<(usize, Rational)>>,
}

impl GradedLieAlgebra {
    /// Build and validate an algebra from sparse structure constants.
    pub fn from_structure(
        name: &str,
        layer_dims: &[usize],
        entries: &[BracketEntry],
    ) -> Result<Self> {
        if layer_dims.is_empty() || layer_dims.iter().any(|&d| d == 0) {
            return Err(Error::InvalidAlgebra("layer dimensions must be positive".to_string()));
        }
        let dim: usize = layer_dims.iter().sum();
        let mut weights = Vec::with_capacity(dim);
        for (layer, &d) in layer_dims.iter().enumerate() {
            for _ in 0..d {
                weights.push(layer + 1);
            }
        }
        let mut table: BTreeMap<(usize, usize), Vec<(usize, Rational)>> = BTreeMap::new();
        for e in entries {
            if e.i >= dim || e.j >= dim || e.k >= dim {
                return Err(Error::InvalidAlgebra(format!(
                    "bracket entry ({}, {}, {}) out of range for dimension {dim}",
                    e.i, e.j, e.k
                )));
            }
            if e.i >= e.j {
                return Err(Error::InvalidAlgebra(format!(
                    "bracket entries must have i < j, got ({}, {})",
                    e.i, e.j
                )));
            }
            if e.coeff.is_zero() {
                continue;
            }
            let row = table.entry((e.i, e.j)).or_default();
            if let Some(slot) = row.iter_mut().find(|(k, _)| *k == e.k) {
                slot.1 = &slot.1 + &e.coeff;
            } else {
                row.push((e.k, e.coeff.clone()));
            }
        }
        for row in table.values_mut() {
            row.retain(|(_, c)| !c.is_zero());
            row.sort_by_key(|(k, _)| *k);
        }
        table.retain(|_, row| !row.is_empty());

        let algebra = GradedLieAlgebra { name: name.to_string(), layer_dims: layer_dims.to_vec(), weights, table };
        algebra.check_grading()?;
        algebra.check_jacobi()?;
        algebra.check_generation()?;
        Ok(algebra)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn step(&self) -> usize {
        self.layer_dims.len()
    }

    pub fn layer_dims(&self) -> &[usize] {
        &self.layer_dims
    }

    /// Weight (1-based layer) of each coordinate.
    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn weight(&self, index: usize) -> usize {
        self.weights[index]
    }

    /// Homogeneous dimension `Q = sum_l l * dim g_l`.
    pub fn homogeneous_dimension(&self) -> usize {
        self.layer_dims.iter().enumerate().map(|(l, d)| (l + 1) * d).sum()
    }

    /// Coordinate range of one 1-based layer.
    pub fn layer_range(&self, layer: usize) -> core::ops::Range<usize> {
        let start: usize = self.layer_dims[..layer - 1].iter().sum();
        start..start + self.layer_dims[layer - 1]
    }

    /// Sparse structure constants, `i < j` only.
    pub fn bracket_entries(&self) -> Vec<BracketEntry> {
        let mut out = Vec::new();
        for (&(i, j), row) in &self.table {
            for (k, coeff) in row {
                out.push(BracketEntry { i, j, k: *k, coeff: coeff.clone() });
            }
        }
        out
    }

    /// `[e_i, e_j]` as a dense coefficient vector, any index order.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vec<Rational> {
        let mut out = vec![<Rational as Scalar>::zero(); self.dim()];
        if i == j {
            return out;
        }
        let (a, b, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
        if let Some(row) = self.table.get(&(a, b)) {
            for (k, c) in row {
                out[*k] = if sign > 0 { c.clone() } else { -c.clone() };
            }
        }
        out
    }

    /// Bracket of two coefficient vectors over any scalar.
    pub fn bracket<S: Scalar>(&self, x: &[S], y: &[S]) -> Vec<S> {
        debug_assert_eq!(x.len(), self.dim());
        debug_assert_eq!(y.len(), self.dim());
        let mut out = vec![S::zero(); self.dim()];
        for (&(i, j), row) in &self.table {
            // [x, y] = sum_{i<j} (x_i y_j - x_j y_i) [e_i, e_j]
            let factor = x[i].clone() * y[j].clone() - x[j].clone() * y[i].clone();
            if factor.is_zero() {
                continue;
            }
            for (k, c) in row {
                let add = factor.clone() * S::from_rational(c);
                out[*k] = out[*k].clone() + add;
            }
        }
        out
    }

    /// Bracket of two vectors of polynomial coordinates (same formula as
    /// [`Self::bracket`], over the polynomial ring).
    pub fn bracket_poly(&self, x: &[Poly<Rational>], y: &[Poly<Rational>]) -> Vec<Poly<Rational>> {
        debug_assert_eq!(x.len(), self.dim());
        let nvars = x[0].nvars();
        let mut out = vec![Poly::zero(nvars); self.dim()];
        for (&(i, j), row) in &self.table {
            let factor = x[i].mul(&y[j]).sub(&x[j].mul(&y[i]));
            if factor.is_zero() {
                continue;
            }
            for (k, c) in row {
                out[*k] = out[*k].add(&factor.scale(c));
            }
        }
        out
    }

    fn check_grading(&self) -> Result<()> {
        let step = self.step();
        for (&(i, j), row) in &self.table {
            let w = self.weights[i] + self.weights[j];
            for (k, _) in row {
                if w > step {
                    return Err(Error::InvalidAlgebra(format!(
                        "bracket [e{i}, e{j}] lands beyond step {step}"
                    )));
                }
                if self.weights[*k] != w {
                    return Err(Error::InvalidAlgebra(format!(
                        "bracket [e{i}, e{j}] -> e{k} violates grading: weight {} vs {}",
                        self.weights[*k], w
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_jacobi(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in (i + 1)..n {
                let bij = self.basis_bracket(i, j);
                for k in (j + 1)..n {
                    let bjk = self.basis_bracket(j, k);
                    let bki = self.basis_bracket(k, i);
                    let mut ek = vec![<Rational as Scalar>::zero(); n];
                    ek[k] = <Rational as Scalar>::one();
                    let mut ei = vec![<Rational as Scalar>::zero(); n];
                    ei[i] = <Rational as Scalar>::one();
                    let mut ej = vec![<Rational as Scalar>::zero(); n];
                    ej[j] = <Rational as Scalar>::one();
                    let t1 = self.bracket(&bij, &ek);
                    let t2 = self.bracket(&bjk, &ei);
                    let t3 = self.bracket(&bki, &ej);
                    for m in 0..n {
                        let sum = &(&t1[m] + &t2[m]) + &t3[m];
                        if !sum.is_zero() {
                            return Err(Error::InvalidAlgebra(format!(
                                "Jacobi identity fails on (e{i}, e{j}, e{k})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Layers past the first must be spanned by brackets against layer one.
    fn check_generation(&self) -> Result<()> {
        for layer in 2..=self.step() {
            let range = self.layer_range(layer);
            let lower = self.layer_range(layer - 1);
            let first = self.layer_range(1);
            let mut rows: Vec<Vec<Rational>> = Vec::new();
            for i in first.clone() {
                for j in lower.clone() {
                    let b = self.basis_bracket(i, j);
                    rows.push(b[range.clone()].to_vec());
                }
            }
            if linalg::rank(&rows) != range.len() {
                return Err(Error::InvalidAlgebra(format!(
                    "layer {layer} is not generated by brackets with the first layer"
                )));
            }
        }
        Ok(())
    }

    /// True when this is the rank-one Heisenberg algebra in its normalized
    /// basis `[e0, e1] = e2`; the matrix chart is only valid in this case.
    pub fn is_heisenberg1(&self) -> bool {
        if self.layer_dims != [2, 1] {
            return false;
        }
        let b = self.basis_bracket(0, 1);
        b[0].is_zero() && b[1].is_zero() && b[2] == <Rational as Scalar>::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn heis() -> GradedLieAlgebra {
        GradedLieAlgebra::from_structure(
            "heisenberg-1",
            &[2, 1],
            &[BracketEntry { i: 0, j: 1, k: 2, coeff: q(1, 1) }],
        )
        .unwrap()
    }

    #[test]
    fn heisenberg_basics() {
        let h = heis();
        assert_eq!(h.dim(), 3);
        assert_eq!(h.step(), 2);
        assert_eq!(h.weights(), &[1, 1, 2]);
        assert_eq!(h.homogeneous_dimension(), 4);
        assert!(h.is_heisenberg1());
    }

    #[test]
    fn bracket_is_antisymmetric() {
        let h = heis();
        let x = vec![q(1, 1), q(2, 1), q(0, 1)];
        let y = vec![q(3, 1), q(5, 1), q(7, 1)];
        let xy = h.bracket(&x, &y);
        let yx = h.bracket(&y, &x);
        for m in 0..3 {
            assert_eq!(xy[m], -yx[m].clone());
        }
        // [x, y] = (1*5 - 2*3) e2 = -e2
        assert_eq!(xy[2], q(-1, 1));
    }

    #[test]
    fn grading_violation_rejected() {
        // [e0, e1] = e0 has weight 1 != 2.
        let err = GradedLieAlgebra::from_structure(
            "bad",
            &[2, 1],
            &[BracketEntry { i: 0, j: 1, k: 0, coeff: q(1, 1) }],
        );
        assert!(err.is_err());
    }

    #[test]
    fn jacobi_violation_rejected() {
        // Step 3 on layers [3, 2, 1]: [e0,e1]=e3, [e0,e2]=e4, [e0,e3]=e5,
        // [e1,e4]=e5. Jacobi on (e0, e1, e2) leaves a stray e5 term.
        let err = GradedLieAlgebra::from_structure(
            "broken",
            &[3, 2, 1],
            &[
                BracketEntry { i: 0, j: 1, k: 3, coeff: q(1, 1) },
                BracketEntry { i: 0, j: 2, k: 4, coeff: q(1, 1) },
                BracketEntry { i: 0, j: 3, k: 5, coeff: q(1, 1) },
                BracketEntry { i: 1, j: 4, k: 5, coeff: q(1, 1) },
            ],
        );
        match err {
            Err(Error::InvalidAlgebra(msg)) => assert!(msg.contains("Jacobi")),
            other => panic!("expected Jacobi rejection, got {other:?}"),
        }
    }

    #[test]
    fn ungenerated_layer_rejected() {
        // Layers [2, 1, 1] where nothing reaches layer 3.
        let err = GradedLieAlgebra::from_structure(
            "ungenerated",
            &[2, 1, 1],
            &[BracketEntry { i: 0, j: 1, k: 2, coeff: q(1, 1) }],
        );
        assert!(err.is_err());
    }

    #[test]
    fn step3_filiform_is_valid() {
        // Filiform: [e0, e1] = e2, [e0, e2] = e3.
        let a = GradedLieAlgebra::from_structure(
            "filiform-4",
            &[2, 1, 1],
            &[
                BracketEntry { i: 0, j: 1, k: 2, coeff: q(1, 1) },
                BracketEntry { i: 0, j: 2, k: 3, coeff: q(1, 1) },
            ],
        )
        .unwrap();
        assert_eq!(a.step(), 3);
        assert_eq!(a.homogeneous_dimension(), 2 + 2 + 3);
    }
}
