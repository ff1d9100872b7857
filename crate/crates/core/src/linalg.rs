//! Exact rational linear algebra: rank and reduced row echelon form.
//!
//! All cohomology dimensions and span checks in this crate go through these
//! two functions; no floating point pivoting is ever involved.

use alloc::vec::Vec;

use crate::scalar::{Rational, Scalar};

/// Reduce `rows` in place to reduced row echelon form; returns the rank.
pub fn rref(rows: &mut Vec<Vec<Rational>>) -> usize {
    let nrows = rows.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    let mut pivot_row = 0;
    for col in 0..ncols {
        let Some(src) = (pivot_row..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, src);
        let inv = rows[pivot_row][col].recip();
        for c in col..ncols {
            let v = &rows[pivot_row][c] * &inv;
            rows[pivot_row][c] = v;
        }
        for r in 0..nrows {
            if r != pivot_row && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..ncols {
                    let v = &rows[r][c] - &(&factor * &rows[pivot_row][c]);
                    rows[r][c] = v;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == nrows {
            break;
        }
    }
    pivot_row
}

/// Rank of a rational matrix given as rows.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut copy: Vec<Vec<Rational>> = rows.to_vec();
    rref(&mut copy)
}

/// Exact determinant of a square rational matrix by Gaussian elimination.
pub fn det(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut result = Rational::from_ratio(1, 1);
    for col in 0..n {
        let Some(src) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::from_ratio(0, 1);
        };
        if src != col {
            m.swap(col, src);
            result = -result;
        }
        let pivot = m[col][col].clone();
        result = &result * &pivot;
        for r in (col + 1)..n {
            if !m[r][col].is_zero() {
                let factor = &m[r][col] / &pivot;
                for c in col..n {
                    let v = &m[r][c] - &(&factor * &m[col][c]);
                    m[r][c] = v;
                }
            }
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn q(n: i64) -> Rational {
        Rational::from_ratio(n, 1)
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = alloc::vec![
            alloc::vec![q(1), q(2), q(3)],
            alloc::vec![q(2), q(4), q(6)],
            alloc::vec![q(0), q(1), q(1)],
        ];
        assert_eq!(rank(&rows), 2);
    }

    #[test]
    fn rank_of_identity() {
        let rows: Vec<Vec<Rational>> = (0..4)
            .map(|i| (0..4).map(|j| if i == j { q(1) } else { q(0) }).collect())
            .collect();
        assert_eq!(rank(&rows), 4);
    }

    #[test]
    fn determinant_with_row_swaps_and_fractions() {
        // det [[0, 2], [3, 5]] = -6, needs a swap.
        let rows = alloc::vec![alloc::vec![q(0), q(2)], alloc::vec![q(3), q(5)]];
        assert_eq!(det(&rows), q(-6));
        // det [[1/2, 1/3], [1/4, 1/5]] = 1/10 - 1/12 = 1/60.
        let rows = alloc::vec![
            alloc::vec![Rational::from_ratio(1, 2), Rational::from_ratio(1, 3)],
            alloc::vec![Rational::from_ratio(1, 4), Rational::from_ratio(1, 5)],
        ];
        assert_eq!(det(&rows), Rational::from_ratio(1, 60));
        // Singular matrix.
        let rows = alloc::vec![alloc::vec![q(1), q(2)], alloc::vec![q(2), q(4)]];
        assert_eq!(det(&rows), q(0));
    }
}
