//! Kuhn triangulation of the unit cube.
//!
//! The simplices are the saturated increasing chains in the vertex lattice
//! {0,1}^k: starting at the origin, flip one coordinate at a time following
//! a permutation of the axes. The sign of a simplex is the parity of that
//! permutation, which orients all k! simplices coherently. The triangulation
//! restricts to the Kuhn triangulation on every face, which is the property
//! the interpolation and telescope constructions rely on.

use alloc::vec;
use alloc::vec::Vec;

/// One Kuhn simplex: the axis order in which coordinates are switched on,
/// the resulting vertex list (k+1 corners of {0,1}^k, increasing), and the
/// orientation sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KuhnSimplex {
    pub axis_order: Vec<usize>,
    pub vertices: Vec<Vec<u8>>,
    pub sign: i64,
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(k - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, k - 1);
            out.push(p);
        }
    }
    out
}

fn parity(perm: &[usize]) -> i64 {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in (i + 1)..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All k! Kuhn simplices of the standard cube [0,1]^k.
pub fn kuhn_simplices(k: usize) -> Vec<KuhnSimplex> {
    permutations(k)
        .into_iter()
        .map(|axis_order| {
            let mut vertices = Vec::with_capacity(k + 1);
            let mut v = vec![0u8; k];
            vertices.push(v.clone());
            for &a in &axis_order {
                v[a] = 1;
                vertices.push(v.clone());
            }
            let sign = parity(&axis_order);
            KuhnSimplex { axis_order, vertices, sign }
        })
        .collect()
}
