//! Triangle-wave series and exactly horizontal noisy curves.
//!
//! `triangle_wave` is the distance to the nearest integer. Summing scaled
//! copies `phi(2^m t)` with amplitudes close to `2^(-m beta)` produces
//! functions that are Holder of exponent beta and no better. The rough test
//! maps are built from these: smooth members of the map families have
//! identically vanishing telescoping corrections, so the convergence-rate
//! and vanishing experiments only show their predicted exponents on
//! genuinely rough representatives.
//!
//! Amplitudes are rounded to dyadic rationals. That keeps every grid sample
//! a small dyadic number on the exact path, and it makes interpolation
//! collapse cleanly: at the level-j dyadic points all terms with m >= j
//! vanish, so the level-j interpolant of the series is exactly the partial
//! sum over m < j.

use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::scalar::{dyadic, Rational, Scalar};

use alloc::string::ToString;

/// Distance from `t` to the nearest integer, exactly.
pub fn triangle_wave(t: &Rational) -> Rational {
    let frac = t - t.floor();
    let other = Rational::one() - &frac;
    if frac <= other {
        frac
    } else {
        other
    }
}

/// Float twin of [`triangle_wave`].
pub fn triangle_wave_f64(t: f64) -> f64 {
    let frac = t - Float::floor(t);
    frac.min(1.0 - frac)
}

/// A finite sum `sum_m amps[m] * phi(2^m t + shift)` with exact rational
/// amplitudes and a float twin evaluated the same way.
#[derive(Debug, Clone)]
pub struct TriangleSeries {
    amps: Vec<Rational>,
    amps_f64: Vec<f64>,
    shift: Rational,
    shift_f64: f64,
}

impl TriangleSeries {
    pub fn new(amps: Vec<Rational>) -> Self {
        Self::with_shift(amps, Rational::zero())
    }

    /// Same series with every argument advanced by a fixed phase.
    pub fn with_shift(amps: Vec<Rational>, shift: Rational) -> Self {
        let amps_f64 = amps.iter().map(Scalar::to_f64).collect();
        let shift_f64 = shift.to_f64();
        TriangleSeries { amps, amps_f64, shift, shift_f64 }
    }

    /// Amplitudes `2^(-m beta)` rounded to multiples of `2^(-m-16)`. The
    /// relative rounding error is below `2^(-15)`, far inside the rate-fit
    /// tolerances, and the exact path stays dyadic.
    pub fn holder_amplitudes(beta: f64, count: usize) -> Vec<Rational> {
        const GUARD: u32 = 16;
        (0..count)
            .map(|m| {
                let target = Float::powf(2.0, -(m as f64) * beta);
                let scale = Float::powi(2.0, m as i32 + GUARD as i32);
                let num = Float::round(target * scale) as i64;
                dyadic(num, m as u32 + GUARD)
            })
            .collect()
    }

    /// Number of terms.
    pub fn depth(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitude(&self, m: usize) -> &Rational {
        &self.amps[m]
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        let mut freq = Rational::one();
        for a in &self.amps {
            let arg = t * &freq + &self.shift;
            acc = acc + a * triangle_wave(&arg);
            freq = freq * Rational::from_ratio(2, 1);
        }
        acc
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        let mut freq = 1.0;
        for a in &self.amps_f64 {
            acc += a * triangle_wave_f64(t * freq + self.shift_f64);
            freq *= 2.0;
        }
        acc
    }
}

/// An exactly horizontal curve in the first Heisenberg group (exponential
/// coordinates) whose planar shadow is a rough perturbation of the segment
/// `(t, 0)`:
///
/// ```text
/// a(t) = t + kappa * sum_{m<depth} alpha_m phi(2^m t)
/// b(t) =     kappa * sum_{m<depth} alpha_m (phi(2^m t + 1/4) - 1/4)
/// z(t) = (1/2) int_0^t (a db - b da)
/// ```
///
/// The `- 1/4` recenters each shifted wave at its value for t = 0, so the
/// curve starts exactly at the identity; this is a left translation of the
/// uncentered curve and leaves every holonomy computation unchanged.
///
/// The quarter-period phase makes `(phi(u), phi(u + 1/4))` wind once around
/// a diamond per period, always clockwise, so the chord defects of the
/// dyadic sub-arcs reinforce instead of cancelling; that coherence is what
/// the vanishing-rate sweep measures. With `alpha_m ~ 2^(-m beta)` the
/// shadow is Holder of exponent beta, and because z is the exact horizontal
/// lift the curve has the same exponent in the homogeneous metric (a flat
/// z would cut it to beta/2).
///
/// The shadow is piecewise linear with kinks on the level-(depth+1) grid,
/// and `a db - b da` is constant on every linear piece, so one trapezoid
/// sweep over the leaves computes the lift exactly; between leaf nodes the
/// lift follows the chord formula below.
#[derive(Debug, Clone)]
pub struct NoisyCurve {
    series_a: TriangleSeries,
    series_b: TriangleSeries,
    b_base: Rational,
    b_base_f64: f64,
    kappa: Rational,
    kappa_f64: f64,
    leaf_level: u32,
    z_table: Vec<Rational>,
    z_table_f64: Vec<f64>,
}

impl NoisyCurve {
    /// Curve with `depth` triangle-wave terms of exponent `beta`, scaled by
    /// `kappa`. The lift table has `2^(depth+1) + 1` entries, which caps the
    /// practical depth well below the argument limit enforced here.
    pub fn new(beta: f64, kappa: Rational, depth: usize) -> Result<Self> {
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::Invalid("noisy curve needs beta in (0, 1]".to_string()));
        }
        if depth == 0 || depth > 20 {
            return Err(Error::Invalid("noisy curve depth must be in 1..=20".to_string()));
        }
        let amps = TriangleSeries::holder_amplitudes(beta, depth);
        let series_a = TriangleSeries::new(amps.clone());
        let series_b = TriangleSeries::with_shift(amps, Rational::from_ratio(1, 4));
        let b_base = series_b.eval(&Rational::zero());
        let b_base_f64 = series_b.eval_f64(0.0);
        let kappa_f64 = kappa.to_f64();
        // Kinks of phi(2^m t) sit on the level-(m+1) grid, kinks of the
        // quarter-shifted wave on the level-(m+2) grid; m goes up to depth-1.
        let leaf_level = depth as u32 + 1;
        let mut curve = NoisyCurve {
            series_a,
            series_b,
            b_base,
            b_base_f64,
            kappa,
            kappa_f64,
            leaf_level,
            z_table: Vec::new(),
            z_table_f64: Vec::new(),
        };
        curve.build_lift();
        Ok(curve)
    }

    fn shadow(&self, t: &Rational) -> (Rational, Rational) {
        let a = t + &self.kappa * self.series_a.eval(t);
        let b = &self.kappa * (self.series_b.eval(t) - &self.b_base);
        (a, b)
    }

    fn shadow_f64(&self, t: f64) -> (f64, f64) {
        let a = t + self.kappa_f64 * self.series_a.eval_f64(t);
        let b = self.kappa_f64 * (self.series_b.eval_f64(t) - self.b_base_f64);
        (a, b)
    }

    /// One exact trapezoid sweep over the leaves. On each leaf the shadow is
    /// linear, so `a db - b da` is constant there and the trapezoid step is
    /// the exact integral.
    fn build_lift(&mut self) {
        let n = 1u64 << self.leaf_level;
        let half = Rational::from_ratio(1, 2);
        let mut table = Vec::with_capacity(n as usize + 1);
        let mut z = Rational::zero();
        table.push(z.clone());
        let (mut a_prev, mut b_prev) = self.shadow(&Rational::zero());
        for i in 1..=n {
            let t = dyadic(i as i64, self.leaf_level);
            let (a, b) = self.shadow(&t);
            let da = &a - &a_prev;
            let db = &b - &b_prev;
            z = z + (&a_prev * db - &b_prev * da) * &half;
            table.push(z.clone());
            a_prev = a;
            b_prev = b;
        }
        self.z_table_f64 = table.iter().map(Scalar::to_f64).collect();
        self.z_table = table;
    }

    fn leaf_index(&self, t: &Rational) -> Result<usize> {
        if t < &Rational::zero() || t > &Rational::one() {
            return Err(Error::Invalid("noisy curve parameter outside [0, 1]".to_string()));
        }
        let n = 1u64 << self.leaf_level;
        let scaled = t * Rational::from_ratio(n as i64, 1);
        let mut i = num_traits::ToPrimitive::to_u64(&scaled.floor().to_integer())
            .expect("parameter in range");
        if i >= n {
            i = n - 1;
        }
        Ok(i as usize)
    }

    /// Exact point of the curve: `(a, b, z)` in exponential coordinates.
    /// Within a leaf the integrand of the lift is constant, which gives the
    /// chord form `z = z_i + (a_i (b - b_i) - b_i (a - a_i)) / 2`.
    pub fn eval(&self, t: &Rational) -> Result<Vec<Rational>> {
        let i = self.leaf_index(t)?;
        let t_i = dyadic(i as i64, self.leaf_level);
        let (a, b) = self.shadow(t);
        let (a_i, b_i) = self.shadow(&t_i);
        let half = Rational::from_ratio(1, 2);
        let z = &self.z_table[i] + (&a_i * (&b - &b_i) - &b_i * (&a - &a_i)) * half;
        Ok(alloc::vec![a, b, z])
    }

    /// Float twin of [`NoisyCurve::eval`]; the leaf is still located exactly.
    pub fn eval_f64(&self, t: &Rational) -> Result<Vec<f64>> {
        let i = self.leaf_index(t)?;
        let t_i = i as f64 / (1u64 << self.leaf_level) as f64;
        let tf = t.to_f64();
        let (a, b) = self.shadow_f64(tf);
        let (a_i, b_i) = self.shadow_f64(t_i);
        let z = self.z_table_f64[i] + 0.5 * (a_i * (b - b_i) - b_i * (a - a_i));
        Ok(alloc::vec![a, b, z])
    }

    /// Grid level on which the shadow is piecewise linear.
    pub fn leaf_level(&self) -> u32 {
        self.leaf_level
    }

    /// Exact lift at t = 1; the enclosed-area oracle for loop tests.
    pub fn z_end(&self) -> &Rational {
        self.z_table.last().expect("table is never empty")
    }
}
