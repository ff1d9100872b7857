//! Weight-graded cohomology tables and the Holder exponent bounds they
//! yield.
//!
//! Every rank is computed twice: once per weight block and once on the
//! unblocked differential. The table constructor cross-checks the block
//! sums against the unblocked Betti numbers and enforces the classical
//! identities (Euler characteristic zero, Poincare duality with its
//! weight refinement, one-dimensional ends), so a returned table has
//! survived all of them.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lie::GradedLieAlgebra;
use crate::linalg::rank;
use crate::scalar::{Rational, Scalar};

use super::ce::{block_matrix, ce_differential, increasing_tuples, Cochain};

/// Exact weight-graded cohomology of a graded Lie algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct CohomologyTable {
    /// Catalog name of the algebra.
    pub algebra: String,
    /// Dimension `n` of the algebra.
    pub dim: usize,
    /// Homogeneous dimension `Q`.
    pub homogeneous_dimension: usize,
    /// `dim H^k` for `k = 0..=n`.
    pub betti: Vec<usize>,
    /// Per degree, the nonzero `dim H^{k,w}` keyed by weight.
    pub weight_betti: Vec<BTreeMap<usize, usize>>,
    /// Least weight carrying cohomology in each degree.
    pub min_weight: Vec<Option<usize>>,
    /// Greatest weight carrying cohomology in each degree.
    pub max_weight: Vec<Option<usize>>,
    /// `min_{1<=k<=n-1} k / max_weight(k)`, when intermediate degrees
    /// exist. Each nonzero class of weight `w` in degree `k` caps the
    /// exponent at `k / w`, so the heaviest class per degree bites hardest.
    pub bound: Option<Rational>,
    /// Degree attaining the bound (smallest on ties).
    pub bound_witness: Option<usize>,
}

/// The Holder exponent bound read off a cohomology table.
#[derive(Debug, Clone, PartialEq)]
pub struct HolderBound {
    pub value: Rational,
    /// Degree whose heaviest cohomology weight attains the bound.
    pub witness: usize,
}

/// Compute the full weight-graded cohomology table of an algebra.
pub fn cohomology_table(algebra: &GradedLieAlgebra) -> Result<CohomologyTable> {
    let n = algebra.dim();
    let q_hom = algebra.homogeneous_dimension();

    // Ranks of the blocked differential, keyed by (degree, weight).
    let mut block_rank: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut block_dim: Vec<BTreeMap<usize, usize>> = Vec::with_capacity(n + 2);
    for k in 0..=n {
        let mut dims = BTreeMap::new();
        for t in increasing_tuples(n, k) {
            let w: usize = t.iter().map(|&i| algebra.weight(i as usize)).sum();
            *dims.entry(w).or_insert(0) += 1;
        }
        for &w in dims.keys() {
            let m = block_matrix(algebra, k, w)?;
            block_rank.insert((k, w), rank(&m));
        }
        block_dim.push(dims);
    }

    let mut weight_betti: Vec<BTreeMap<usize, usize>> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut row = BTreeMap::new();
        for (&w, &d) in &block_dim[k] {
            let out_rank = block_rank.get(&(k, w)).copied().unwrap_or(0);
            let in_rank = if k > 0 { block_rank.get(&(k - 1, w)).copied().unwrap_or(0) } else { 0 };
            let h = d - out_rank - in_rank;
            if h > 0 {
                row.insert(w, h);
            }
        }
        weight_betti.push(row);
    }
    let betti: Vec<usize> = weight_betti.iter().map(|row| row.values().sum()).collect();

    // Cross-check against the unblocked complex.
    let mut full_rank = Vec::with_capacity(n + 1);
    for k in 0..=n {
        full_rank.push(rank(&full_matrix(algebra, k)?));
    }
    for k in 0..=n {
        let dim_k = increasing_tuples(n, k).len();
        let unblocked = dim_k - full_rank[k] - if k > 0 { full_rank[k - 1] } else { 0 };
        if unblocked != betti[k] {
            return Err(Error::Invalid(format_invariant(
                algebra,
                "weight-block Betti sum disagrees with the unblocked rank",
            )));
        }
    }

    // Classical identities: any failure is an internal error.
    if betti[0] != 1 || betti[n] != 1 {
        return Err(Error::Invalid(format_invariant(algebra, "H^0 or H^n is not a line")));
    }
    let euler: i64 =
        betti.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
    if n >= 1 && euler != 0 {
        return Err(Error::Invalid(format_invariant(algebra, "Euler characteristic is nonzero")));
    }
    for k in 0..=n {
        if betti[k] != betti[n - k] {
            return Err(Error::Invalid(format_invariant(algebra, "Poincare duality fails")));
        }
        for (&w, &d) in &weight_betti[k] {
            if weight_betti[n - k].get(&(q_hom - w)).copied().unwrap_or(0) != d {
                return Err(Error::Invalid(format_invariant(
                    algebra,
                    "weight-refined Poincare duality fails",
                )));
            }
        }
    }

    let min_weight: Vec<Option<usize>> =
        weight_betti.iter().map(|row| row.keys().next().copied()).collect();
    let max_weight: Vec<Option<usize>> =
        weight_betti.iter().map(|row| row.keys().next_back().copied()).collect();

    let mut bound: Option<Rational> = None;
    let mut bound_witness = None;
    for k in 1..n {
        if let Some(w) = max_weight[k] {
            let ratio = Rational::from_ratio(k as i64, w as i64);
            if bound.as_ref().map_or(true, |b| &ratio < b) {
                bound = Some(ratio);
                bound_witness = Some(k);
            }
        }
    }

    Ok(CohomologyTable {
        algebra: algebra.name().to_string(),
        dim: n,
        homogeneous_dimension: q_hom,
        betti,
        weight_betti,
        min_weight,
        max_weight,
        bound,
        bound_witness,
    })
}

fn format_invariant(algebra: &GradedLieAlgebra, what: &str) -> String {
    let mut s = String::from("cohomology of ");
    s.push_str(algebra.name());
    s.push_str(": ");
    s.push_str(what);
    s
}

/// Unblocked matrix of `d` on all of degree `k`.
fn full_matrix(algebra: &GradedLieAlgebra, k: usize) -> Result<Vec<Vec<Rational>>> {
    let n = algebra.dim();
    let codomain = increasing_tuples(n, k + 1);
    let col: BTreeMap<&[u8], usize> =
        codomain.iter().enumerate().map(|(c, t)| (t.as_slice(), c)).collect();
    let mut rows = Vec::new();
    for mono in increasing_tuples(n, k) {
        let image = ce_differential(algebra, &Cochain::basis(&mono)?)?;
        let mut row = alloc::vec![Rational::zero(); codomain.len()];
        for (key, coeff) in image.terms() {
            row[*col.get(key).expect("image within degree k+1")] = coeff.clone();
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Homogeneous dimension of the algebra: the Hausdorff dimension of the
/// associated group under its dilation metric.
pub fn hausdorff_dimension(algebra: &GradedLieAlgebra) -> usize {
    algebra.homogeneous_dimension()
}

/// Best Holder exponent bound from the weight-graded table: the minimum of
/// `k / w(k)` over intermediate degrees, with the witnessing degree.
pub fn holder_bound(algebra: &GradedLieAlgebra) -> Result<HolderBound> {
    let table = cohomology_table(algebra)?;
    match (table.bound, table.bound_witness) {
        (Some(value), Some(witness)) => Ok(HolderBound { value, witness }),
        _ => Err(Error::Invalid(
            "the algebra has no intermediate degrees to bound with".to_string(),
        )),
    }
}

/// Exponent bound for a generic corank-`h` distribution on an
/// `n`-dimensional space, witnessed against `k`-dimensional cycles:
/// `(n - k) / (Q - k)` with `Q = n + h`. The genericity condition
/// `h - k >= (n - h) k` is required; outside it the bound is not justified
/// and the call refuses.
pub fn generic_distribution_bound(n: usize, h: usize, k: usize) -> Result<Rational> {
    if k == 0 {
        return Err(Error::Invalid("cycle dimension must be positive".to_string()));
    }
    if h == 0 || h >= n {
        return Err(Error::Invalid("corank must satisfy 0 < h < n".to_string()));
    }
    if h < k || h - k < (n - h) * k {
        return Err(Error::Invalid(
            "not generic at this cycle dimension: need h - k >= (n - h) k".to_string(),
        ));
    }
    Ok(Rational::from_ratio((n - k) as i64, (n + h - k) as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::catalog;
    use crate::lie::GradedLieAlgebra;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn weights(table: &CohomologyTable, k: usize) -> Vec<(usize, usize)> {
        table.weight_betti[k].iter().map(|(&w, &d)| (w, d)).collect()
    }

    #[test]
    fn first_heisenberg_table_is_the_known_one() {
        let table = cohomology_table(&catalog::heisenberg(1)).unwrap();
        assert_eq!(table.betti, alloc::vec![1, 2, 2, 1]);
        assert_eq!(weights(&table, 1), alloc::vec![(1, 2)]);
        assert_eq!(weights(&table, 2), alloc::vec![(3, 2)]);
        assert_eq!(weights(&table, 3), alloc::vec![(4, 1)]);
        assert_eq!(table.min_weight[2], Some(3));
        assert_eq!(table.homogeneous_dimension, 4);
        assert_eq!(table.bound, Some(q(2, 3)));
        assert_eq!(table.bound_witness, Some(2));
    }

    #[test]
    fn abelian_cohomology_is_the_full_exterior_algebra() {
        for n in 1..=4usize {
            let table = cohomology_table(&catalog::abelian(n)).unwrap();
            for k in 0..=n {
                let binom = increasing_tuples(n, k).len();
                assert_eq!(table.betti[k], binom);
                if k > 0 {
                    assert_eq!(weights(&table, k), alloc::vec![(k, binom)]);
                }
            }
            if n >= 2 {
                assert_eq!(table.bound, Some(q(1, 1)));
                assert_eq!(table.bound_witness, Some(1));
            } else {
                assert_eq!(table.bound, None);
            }
        }
    }

    #[test]
    fn heisenberg_family_bound_is_m_plus_one_over_m_plus_two() {
        for m in 1..=3usize {
            let b = holder_bound(&catalog::heisenberg(m)).unwrap();
            assert_eq!(b.value, q(m as i64 + 1, m as i64 + 2), "m = {m}");
            assert_eq!(b.witness, m + 1, "m = {m}");
        }
    }

    #[test]
    fn quaternionic_bound_is_five_eighths() {
        let algebra = catalog::quaternionic_heisenberg();
        let table = cohomology_table(&algebra).unwrap();
        assert_eq!(table.dim, 7);
        assert_eq!(table.homogeneous_dimension, 10);
        assert_eq!(table.betti[1], 4);
        assert_eq!(weights(&table, 1), alloc::vec![(1, 4)]);
        // Hand count in degree 2: the three symplectic forms are exact in
        // Lambda^2 of the first layer (6 - 3 survive at weight 2), and the
        // twelve mixed monomials lose a rank-4 image inside Lambda^3 of the
        // first layer (12 - 4 at weight 3). Degree 5 follows by duality.
        assert_eq!(weights(&table, 2), alloc::vec![(2, 3), (3, 8)]);
        assert_eq!(weights(&table, 5), alloc::vec![(7, 8), (8, 3)]);
        assert_eq!(table.max_weight[5], Some(8));
        assert_eq!(table.bound, Some(q(5, 8)));
        assert_eq!(table.bound_witness, Some(5));
    }

    #[test]
    fn every_catalog_table_passes_its_internal_identities() {
        // The constructor enforces Euler characteristic, Poincare duality
        // with weights, and the blocked/unblocked cross-check; surviving
        // construction is the assertion.
        for algebra in catalog::builtin_catalog() {
            let table = cohomology_table(&algebra).unwrap();
            assert_eq!(table.max_weight[table.dim], Some(table.homogeneous_dimension));
            // First cohomology is the dual of the first layer.
            assert_eq!(table.betti[1], algebra.layer_dims()[0]);
        }
    }

    #[test]
    fn bound_never_beats_the_top_degree_ratio() {
        for algebra in catalog::builtin_catalog() {
            let n = algebra.dim();
            if n < 2 {
                continue;
            }
            let b = holder_bound(&algebra).unwrap();
            let top = q(n as i64 - 1, algebra.homogeneous_dimension() as i64 - 1);
            assert!(b.value <= top, "{}", algebra.name());
        }
    }

    #[test]
    fn tables_are_invariant_under_basis_relabeling() {
        // Heisenberg rank 2 with generators interleaved (x1, y1, x2, y2)
        // instead of (x1, x2, y1, y2).
        let entries = [
            crate::lie::BracketEntry { i: 0, j: 1, k: 4, coeff: q(1, 1) },
            crate::lie::BracketEntry { i: 2, j: 3, k: 4, coeff: q(1, 1) },
        ];
        let relabeled =
            GradedLieAlgebra::from_structure("heisenberg-2-interleaved", &[4, 1], &entries)
                .unwrap();
        let a = cohomology_table(&catalog::heisenberg(2)).unwrap();
        let b = cohomology_table(&relabeled).unwrap();
        assert_eq!(a.betti, b.betti);
        assert_eq!(a.weight_betti, b.weight_betti);
        assert_eq!(a.bound, b.bound);
        assert_eq!(a.bound_witness, b.bound_witness);
    }

    #[test]
    fn free_two_step_on_two_generators_is_heisenberg() {
        let a = cohomology_table(&catalog::heisenberg(1)).unwrap();
        let b = cohomology_table(&catalog::free_two_step(2)).unwrap();
        assert_eq!(a.betti, b.betti);
        assert_eq!(a.weight_betti, b.weight_betti);
    }

    #[test]
    fn hausdorff_dimensions_of_the_model_families() {
        for m in 1..=3usize {
            assert_eq!(hausdorff_dimension(&catalog::heisenberg(m)), 2 * m + 2);
        }
        assert_eq!(hausdorff_dimension(&catalog::quaternionic_heisenberg()), 10);
        assert_eq!(hausdorff_dimension(&catalog::abelian(4)), 4);
        assert_eq!(hausdorff_dimension(&catalog::filiform(4)), 7);
    }

    #[test]
    fn generic_distribution_bound_examples() {
        assert_eq!(generic_distribution_bound(6, 4, 1).unwrap(), q(5, 9));
        assert!(generic_distribution_bound(6, 4, 0).is_err());
        assert!(generic_distribution_bound(6, 4, 2).is_err());
        // Contact structures are not generic in this sense.
        assert!(generic_distribution_bound(3, 1, 1).is_err());
        assert!(generic_distribution_bound(6, 0, 1).is_err());
        assert!(generic_distribution_bound(6, 6, 1).is_err());
    }
}
