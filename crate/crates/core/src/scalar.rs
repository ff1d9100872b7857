//! Dual arithmetic: exact big rationals for identities, `f64` for sweeps.
//!
//! All geometric and algebraic routines in this crate are generic over
//! [`Scalar`]. Instantiated at [`Rational`] they produce bit-exact results
//! (telescope identities, Stokes, cohomology); instantiated at `f64` they
//! run fast enough for dyadic refinement sweeps. `cmp_key` supplies the
//! total order used to put chains into canonical form; for `f64` it is the
//! IEEE total order, which is only used as a sorting key, never as a
//! numerical comparison.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

/// Exact rational scalar used on every identity-critical path.
pub type Rational = num_rational::BigRational;

/// Field scalar with the handful of conversions the geometry needs.
pub trait Scalar:
    Clone
    + PartialEq
    + core::fmt::Debug
    + core::fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    fn is_zero(&self) -> bool;
    fn abs(&self) -> Self;
    fn is_positive(&self) -> bool;
    /// Total order used only for canonical sorting of chain keys.
    fn cmp_key(&self, other: &Self) -> Ordering;
    /// True on the exact path; lets callers assert exactness claims.
    fn is_exact() -> bool;
}

impl Scalar for Rational {
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn one() -> Self {
        <Rational as One>::one()
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn cmp_key(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn is_exact() -> bool {
        true
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }
    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn abs(&self) -> Self {
        Float::abs(*self)
    }
    fn is_positive(&self) -> bool {
        *self > 0.0
    }
    fn cmp_key(&self, other: &Self) -> Ordering {
        self.total_cmp(other)
    }
    fn is_exact() -> bool {
        false
    }
}

/// Exact conversion of a finite `f64` into a rational (every finite float
/// is a dyadic rational).
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Dyadic rational `num / 2^level`.
pub fn dyadic(num: i64, level: u32) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(1u8) << level)
}

/// Integer power with exact semantics for any scalar.
pub fn scalar_pow<S: Scalar>(base: &S, exp: usize) -> S {
    let mut acc = S::one();
    for _ in 0..exp {
        acc = acc * base.clone();
    }
    acc
}

/// Neumaier compensated accumulator; summation order is fixed by the
/// caller, so float reductions are deterministic.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if Float::abs(self.sum) >= Float::abs(value) {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Componentwise vector sum.
pub fn vec_add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

/// Componentwise vector scale.
pub fn vec_scale<S: Scalar>(t: &S, a: &[S]) -> Vec<S> {
    a.iter().map(|x| t.clone() * x.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_roundtrip_through_f64() {
        let r = dyadic(5, 3); // 5/8
        assert_eq!(Scalar::to_f64(&r), 0.625);
        assert_eq!(rational_from_f64(0.625).unwrap(), r);
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let mut s = CompensatedSum::new();
        s.add(1.0);
        s.add(1e-16);
        s.add(-1.0);
        assert_eq!(s.total(), 1e-16);
    }

    #[test]
    fn scalar_pow_matches_repeated_multiplication() {
        let r = Rational::from_ratio(3, 2);
        assert_eq!(scalar_pow(&r, 4), Rational::from_ratio(81, 16));
        assert_eq!(scalar_pow(&2.0_f64, 10), 1024.0);
    }
}
