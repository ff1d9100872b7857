//! Integer-coefficient chains of straight simplices in canonical form.
//!
//! Terms are kept in a map keyed by the simplex itself (chart plus ordered
//! vertex list), so equal simplices arising from different constructions
//! merge and cancel automatically. That cancellation is what makes the
//! telescope's interior faces drop out without any bookkeeping.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::Result;
use crate::lie::GroupPoint;
use crate::scalar::Scalar;

use super::simplex::SimplexMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain<S: Scalar> {
    terms: BTreeMap<SimplexMap<S>, i64>,
}

impl<S: Scalar> Default for Chain<S> {
    fn default() -> Self {
        Chain::zero()
    }
}

impl<S: Scalar> Chain<S> {
    pub fn zero() -> Self {
        Chain { terms: BTreeMap::new() }
    }

    pub fn from_simplex(s: SimplexMap<S>) -> Self {
        let mut c = Chain::zero();
        c.push(s, 1);
        c
    }

    /// Add `coeff * s`, merging with any existing term and dropping zeros.
    pub fn push(&mut self, s: SimplexMap<S>, coeff: i64) {
        if coeff == 0 {
            return;
        }
        match self.terms.entry(s) {
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if *e.get() == 0 {
                    e.remove();
                }
            }
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Chain<S>, coeff: i64) {
        for (s, c) in &other.terms {
            self.push(s.clone(), c * coeff);
        }
    }

    pub fn add(&self, other: &Chain<S>) -> Chain<S> {
        let mut out = self.clone();
        out.add_scaled(other, 1);
        out
    }

    pub fn sub(&self, other: &Chain<S>) -> Chain<S> {
        let mut out = self.clone();
        out.add_scaled(other, -1);
        out
    }

    pub fn neg(&self) -> Chain<S> {
        let mut out = Chain::zero();
        out.add_scaled(self, -1);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of distinct simplices.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SimplexMap<S>, i64)> {
        self.terms.iter().map(|(s, &c)| (s, c))
    }

    /// Simplicial boundary: alternating sum of vertex-deletion faces of
    /// every term. Purely combinatorial, no group structure involved.
    pub fn boundary(&self) -> Chain<S> {
        let mut out = Chain::zero();
        for (s, c) in &self.terms {
            if s.dim() == 0 {
                continue;
            }
            for i in 0..=s.dim() {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                out.push(s.face(i), c * sign);
            }
        }
        out
    }

    /// Cone from `apex`: prepend the apex to every term, same coefficients.
    /// Satisfies boundary(cone(c)) = c - cone(boundary(c)).
    pub fn cone(&self, apex: &GroupPoint<S>) -> Result<Chain<S>> {
        let mut out = Chain::zero();
        for (s, c) in &self.terms {
            let mut pts = Vec::with_capacity(s.dim() + 2);
            pts.push(apex.clone());
            pts.extend(s.vertices());
            out.push(SimplexMap::straight(&pts)?, *c);
        }
        Ok(out)
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> Result<Chain<T>> {
        let mut out = Chain::zero();
        for (s, c) in &self.terms {
            let pts: Vec<GroupPoint<T>> =
                s.vertices().map(|p| p.map_scalar(f)).collect();
            out.push(SimplexMap::straight(&pts)?, *c);
        }
        Ok(out)
    }
}
