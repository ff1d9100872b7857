//! Built-in algebra catalog.
//!
//! Construction goes through [`GradedLieAlgebra::from_structure`], so every
//! entry passes the antisymmetry / Jacobi / grading / generation checks at
//! build time. The quaternionic Heisenberg bracket is `Im(conj(u) v)` on
//! `H + Im H` written out in structure constants.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

use super::algebra::{BracketEntry, GradedLieAlgebra};

fn one() -> Rational {
    <Rational as Scalar>::one()
}

fn entry(i: usize, j: usize, k: usize, num: i64) -> BracketEntry {
    BracketEntry { i, j, k, coeff: Rational::from_ratio(num, 1) }
}

/// Abelian algebra of rank `n` (single layer, zero bracket).
pub fn abelian(n: usize) -> GradedLieAlgebra {
    GradedLieAlgebra::from_structure(&format!("abelian-{n}"), &[n], &[]).expect("valid abelian")
}

/// Heisenberg algebra of rank `m`: basis `x_1..x_m, y_1..y_m, z` with
/// `[x_i, y_i] = z`.
pub fn heisenberg(m: usize) -> GradedLieAlgebra {
    assert!(m >= 1);
    let entries: Vec<BracketEntry> = (0..m).map(|i| entry(i, m + i, 2 * m, 1)).collect();
    GradedLieAlgebra::from_structure(&format!("heisenberg-{m}"), &[2 * m, 1], &entries)
        .expect("valid heisenberg")
}

/// Rank-one quaternionic Heisenberg algebra: first layer the quaternions
/// (basis 1, i, j, k), second layer the imaginary quaternions, bracket
/// `[u, v] = Im(conj(u) v)`.
pub fn quaternionic_heisenberg() -> GradedLieAlgebra {
    let entries = vec![
        entry(0, 1, 4, 1),  // [1, i] = i
        entry(0, 2, 5, 1),  // [1, j] = j
        entry(0, 3, 6, 1),  // [1, k] = k
        entry(1, 2, 6, -1), // [i, j] = -k
        entry(1, 3, 5, 1),  // [i, k] = j
        entry(2, 3, 4, -1), // [j, k] = -i
    ];
    GradedLieAlgebra::from_structure("quaternionic-heisenberg-1", &[4, 3], &entries)
        .expect("valid quaternionic heisenberg")
}

/// Free 2-step algebra on `h` generators; the second layer has a basis
/// vector for every generator pair `i < j`.
pub fn free_two_step(h: usize) -> GradedLieAlgebra {
    assert!(h >= 2);
    let mut entries = Vec::new();
    let mut pos = 0;
    for i in 0..h {
        for j in (i + 1)..h {
            entries.push(BracketEntry { i, j, k: h + pos, coeff: one() });
            pos += 1;
        }
    }
    GradedLieAlgebra::from_structure(&format!("free-2-step-{h}"), &[h, h * (h - 1) / 2], &entries)
        .expect("valid free 2-step")
}

/// Filiform algebra of dimension `n` (maximal step `n - 1`):
/// `[e0, e_i] = e_{i+1}` for `1 <= i <= n-2`. Steps beyond 3 construct
/// fine but the truncated group law refuses to multiply in them.
pub fn filiform(n: usize) -> GradedLieAlgebra {
    assert!(n >= 3);
    let mut layer_dims = vec![2usize];
    layer_dims.extend(core::iter::repeat(1).take(n - 2));
    let entries: Vec<BracketEntry> = (1..n - 1).map(|i| entry(0, i, i + 1, 1)).collect();
    GradedLieAlgebra::from_structure(&format!("filiform-{n}"), &layer_dims, &entries)
        .expect("valid filiform")
}

/// Every algebra the crate ships with.
pub fn builtin_catalog() -> Vec<GradedLieAlgebra> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push(abelian(n));
    }
    for m in 1..=3 {
        out.push(heisenberg(m));
    }
    out.push(quaternionic_heisenberg());
    for h in 2..=4 {
        out.push(free_two_step(h));
    }
    out.push(filiform(4));
    out.push(filiform(5));
    out
}

/// Look an algebra up by its catalog name.
pub fn lookup(name: &str) -> Result<GradedLieAlgebra> {
    builtin_catalog()
        .into_iter()
        .find(|a| a.name() == name)
        .ok_or_else(|| Error::UnknownName(String::from(name)))
}
