//! Sampled Holder maps: evaluators into a Carnot group with a declared
//! exponent and a grid-checked Holder constant.
//!
//! Exponents and constants are always measured in the homogeneous metric of
//! the target, never the Euclidean one: a smooth surface transverse to the
//! horizontal distribution is only 1/2-Holder in that metric, which is why
//! the smooth square families declare alpha = 1/2.
//!
//! The family constructors here form the test-map library used by the
//! integral estimators and the command-line experiments:
//!
//! * planar and vertical coordinate squares (polynomial, alpha = 1/2);
//! * the rippled vertical square, a genuinely rough member of the vertical
//!   family whose telescoping increments realize the predicted rate;
//! * rank-1 maps through a horizontal line (alpha = 1, degenerate image);
//! * noisy horizontal curves with tunable exponent, exactly lifted;
//! * closed boundary loops, retraced (rough but closed) or with a radial
//!   return;
//! * dilations and tabulations of any of the above.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;


use crate::chains::PointMap;
use crate::error::{Error, Result};
use crate::lie::{Chart, GradedLieAlgebra, GroupPoint};
use crate::poly::Poly;
use crate::scalar::{scalar_pow, Rational, Scalar};

use super::takagi::{NoisyCurve, TriangleSeries};

/// How a map produces values; every variant carries enough structure to
/// evaluate both exactly and in floats.
enum MapKind {
    Polynomial { comps: Vec<Poly<Rational>>, comps_f64: Vec<Poly<f64>> },
    Tabulated { level: u32, values: Vec<Vec<Rational>>, values_f64: Vec<Vec<f64>> },
    RippledVerticalSquare { series: TriangleSeries, kappa: Rational, kappa_f64: f64 },
    NoisyHorizontalCurve { curve: NoisyCurve },
    BoundaryLoop { curve: NoisyCurve, retrace: bool },
    Dilated { inner: Box<MapKind>, lambda: Rational, lambda_f64: f64 },
}

/// A map from a dyadic cube into a Carnot group, with declared Holder data.
///
/// The declared exponent is a promise used by the integral estimators when
/// they decide admissibility and build tail envelopes; [`Self::check_holder`]
/// measures the constant on dyadic grids and raises it (with a flag) when
/// the promise is violated. The exponent itself is never "proven", only
/// grid-checked; that is recorded in the check result rather than silently
/// trusted.
pub struct SampledHolderMap {
    algebra: GradedLieAlgebra,
    chart: Chart,
    dim_in: usize,
    alpha: f64,
    constant: f64,
    constant_raised: bool,
    label: String,
    kind: MapKind,
}

/// Result of a grid Holder check.
#[derive(Debug, Clone)]
pub struct HolderCheck {
    /// Constant before the check.
    pub declared_constant: f64,
    /// Max over checked pairs of `hom_dist / |u - v|_inf^alpha`.
    pub measured_constant: f64,
    /// True when the declared constant had to be raised.
    pub raised: bool,
    /// Number of pairs that evaluated on both ends.
    pub pairs_checked: usize,
}

fn require_heisenberg1(algebra: &GradedLieAlgebra) -> Result<()> {
    if !algebra.is_heisenberg1() {
        return Err(Error::InvalidAlgebra(
            "this map family is specific to the first Heisenberg group".to_string(),
        ));
    }
    Ok(())
}

impl SampledHolderMap {
    /// Map with polynomial components in the source coordinates.
    pub fn polynomial(
        algebra: &GradedLieAlgebra,
        chart: Chart,
        comps: Vec<Poly<Rational>>,
        alpha: f64,
        label: &str,
    ) -> Result<Self> {
        if comps.len() != algebra.dim() {
            return Err(Error::DimensionMismatch { expected: algebra.dim(), found: comps.len() });
        }
        let dim_in = comps.first().map(|p| p.nvars()).unwrap_or(0);
        if dim_in == 0 || comps.iter().any(|p| p.nvars() != dim_in) {
            return Err(Error::Invalid("polynomial components must share a variable count".to_string()));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Invalid("Holder exponent must lie in (0, 1]".to_string()));
        }
        let comps_f64 = comps.iter().map(|p| p.map_scalar(Scalar::to_f64)).collect();
        Ok(SampledHolderMap {
            algebra: algebra.clone(),
            chart,
            dim_in,
            alpha,
            constant: 1.0,
            constant_raised: false,
            label: label.to_string(),
            kind: MapKind::Polynomial { comps, comps_f64 },
        })
    }

    /// `(s, t) -> (s, t, 0)`: a coordinate square in the horizontal plane.
    pub fn planar_square(algebra: &GradedLieAlgebra) -> Result<Self> {
        require_heisenberg1(algebra)?;
        let comps = vec![Poly::var(2, 0), Poly::var(2, 1), Poly::zero(2)];
        let mut m = Self::polynomial(algebra, Chart::Exponential, comps, 0.5, "planar-square")?;
        m.constant = 2.0;
        Ok(m)
    }

    /// `(s, t) -> (0, s, t)`: the vertical coordinate square.
    pub fn vertical_square(algebra: &GradedLieAlgebra) -> Result<Self> {
        require_heisenberg1(algebra)?;
        let comps = vec![Poly::zero(2), Poly::var(2, 0), Poly::var(2, 1)];
        let mut m = Self::polynomial(algebra, Chart::Exponential, comps, 0.5, "vertical-square")?;
        m.constant = 2.0;
        Ok(m)
    }

    /// `(s, t) -> (0, s (1 + kappa T(t)), t)` with T a triangle-wave series
    /// of exponent 1/2: the rough member of the vertical-square family. The
    /// image stays in the plane x = 0, so the map is honestly 1/2-Holder in
    /// the homogeneous metric, while the level-j interpolant integral of
    /// dy wedge theta is the trapezoid sum of `s -> 1 + kappa T(s)`. Its
    /// telescoping increments are therefore exactly `kappa a_j / 4` for
    /// j < depth: a coherent sequence realizing the predicted rate
    /// `2^(j ((k-1) - w alpha)) = 2^(-j/2)`.
    pub fn rippled_vertical_square(
        algebra: &GradedLieAlgebra,
        kappa: Rational,
        depth: usize,
    ) -> Result<Self> {
        require_heisenberg1(algebra)?;
        if depth == 0 || depth > 20 {
            return Err(Error::Invalid("ripple depth must be in 1..=20".to_string()));
        }
        let series = TriangleSeries::new(TriangleSeries::holder_amplitudes(0.5, depth));
        let kappa_f64 = kappa.to_f64();
        Ok(SampledHolderMap {
            algebra: algebra.clone(),
            chart: Chart::Exponential,
            dim_in: 2,
            alpha: 0.5,
            constant: 2.0 + 4.0 * kappa_f64.abs(),
            constant_raised: false,
            label: format!("rippled-vertical-square(depth={depth})"),
            kind: MapKind::RippledVerticalSquare { series, kappa, kappa_f64 },
        })
    }

    /// Rank-1 map `(s, t) -> gamma(s)` through the horizontal line
    /// `(s, y0, -y0 s / 2)`, the left translate of the x-axis by `(0, y0, 0)`.
    /// Horizontal lines are isometric images of Euclidean segments, so the
    /// declared exponent is 1.
    pub fn horizontal_line(algebra: &GradedLieAlgebra, y0: Rational) -> Result<Self> {
        require_heisenberg1(algebra)?;
        let s = Poly::var(2, 0);
        let comps = vec![
            s.clone(),
            Poly::constant(2, y0.clone()),
            s.scale(&(-&y0 * Rational::from_ratio(1, 2))),
        ];
        let mut m = Self::polynomial(algebra, Chart::Exponential, comps, 1.0, "horizontal-line")?;
        m.constant = 1.0 + y0.to_f64().abs();
        Ok(m)
    }

    /// Exactly lifted noisy horizontal curve of exponent `beta` on [0, 1].
    pub fn noisy_horizontal_curve(
        algebra: &GradedLieAlgebra,
        beta: f64,
        kappa: Rational,
        depth: usize,
    ) -> Result<Self> {
        require_heisenberg1(algebra)?;
        let kappa_f64 = kappa.to_f64();
        let curve = NoisyCurve::new(beta, kappa, depth)?;
        Ok(SampledHolderMap {
            algebra: algebra.clone(),
            chart: Chart::Exponential,
            dim_in: 1,
            alpha: beta,
            constant: 2.0 + 6.0 * kappa_f64.abs(),
            constant_raised: false,
            label: format!("noisy-horizontal-curve(beta={beta}, depth={depth})"),
            kind: MapKind::NoisyHorizontalCurve { curve },
        })
    }

    /// Closed loop on the boundary of the unit square, built from a noisy
    /// curve. With `retrace` the curve is walked forward and then backward,
    /// which keeps the declared exponent of the curve; otherwise the loop
    /// closes along the straight radial segment back to the identity, which
    /// cuts the exponent to 1/2 (the return crosses vertical distance at
    /// unit speed). Points off the boundary are rejected.
    pub fn noisy_boundary_loop(
        algebra: &GradedLieAlgebra,
        beta: f64,
        kappa: Rational,
        depth: usize,
        retrace: bool,
    ) -> Result<Self> {
        require_heisenberg1(algebra)?;
        let kappa_f64 = kappa.to_f64();
        let curve = NoisyCurve::new(beta, kappa, depth)?;
        let alpha = if retrace { beta } else { beta.min(0.5) };
        Ok(SampledHolderMap {
            algebra: algebra.clone(),
            chart: Chart::Exponential,
            dim_in: 2,
            alpha,
            constant: 4.0 * (1.0 + kappa_f64.abs()),
            constant_raised: false,
            label: format!("noisy-boundary-loop(beta={beta}, retrace={retrace})"),
            kind: MapKind::BoundaryLoop { curve, retrace },
        })
    }

    /// Tabulation of another map on the full level-`level` grid. The result
    /// only answers at dyadic points of that level or coarser, which is all
    /// the interpolation machinery asks for up to that level.
    pub fn tabulated(source: &SampledHolderMap, level: u32) -> Result<Self> {
        let k = source.dim_in;
        let n = (1u64 << level) + 1;
        let total = n.pow(k as u32) as usize;
        if total > 1 << 22 {
            return Err(Error::Invalid("tabulation grid too large".to_string()));
        }
        let mut values = Vec::with_capacity(total);
        let mut values_f64 = Vec::with_capacity(total);
        let mut idx = vec![0u64; k];
        loop {
            let x: Vec<Rational> =
                idx.iter().map(|&i| crate::scalar::dyadic(i as i64, level)).collect();
            let v = source.eval_exact(&x)?;
            values_f64.push(v.iter().map(Scalar::to_f64).collect());
            values.push(v);
            let mut axis = k;
            loop {
                if axis == 0 {
                    return Ok(SampledHolderMap {
                        algebra: source.algebra.clone(),
                        chart: source.chart,
                        dim_in: k,
                        alpha: source.alpha,
                        constant: source.constant,
                        constant_raised: source.constant_raised,
                        label: format!("tabulated({}, level={level})", source.label),
                        kind: MapKind::Tabulated { level, values, values_f64 },
                    });
                }
                axis -= 1;
                idx[axis] += 1;
                if idx[axis] < n {
                    break;
                }
                idx[axis] = 0;
            }
        }
    }

    /// Raw tabulated map from explicit grid values (row-major, first axis
    /// slowest), for maps that exist only as data.
    pub fn from_grid(
        algebra: &GradedLieAlgebra,
        chart: Chart,
        dim_in: usize,
        level: u32,
        values: Vec<Vec<Rational>>,
        alpha: f64,
        label: &str,
    ) -> Result<Self> {
        let n = (1u64 << level) + 1;
        let expected = n.pow(dim_in as u32) as usize;
        if values.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: values.len() });
        }
        if values.iter().any(|v| v.len() != algebra.dim()) {
            return Err(Error::DimensionMismatch { expected: algebra.dim(), found: 0 });
        }
        let values_f64 = values
            .iter()
            .map(|v| v.iter().map(Scalar::to_f64).collect())
            .collect();
        Ok(SampledHolderMap {
            algebra: algebra.clone(),
            chart,
            dim_in,
            alpha,
            constant: 1.0,
            constant_raised: false,
            label: label.to_string(),
            kind: MapKind::Tabulated { level, values, values_f64 },
        })
    }

    /// Post-compose with the dilation of factor `lambda`.
    pub fn dilated(self, lambda: Rational) -> Result<Self> {
        if !lambda.is_positive() {
            return Err(Error::NonPositiveDilation);
        }
        let lambda_f64 = lambda.to_f64();
        let constant = self.constant * lambda_f64.max(lambda_f64.powf(1.0 / self.alpha));
        Ok(SampledHolderMap {
            algebra: self.algebra,
            chart: self.chart,
            dim_in: self.dim_in,
            alpha: self.alpha,
            constant,
            constant_raised: self.constant_raised,
            label: format!("dilated({}, {lambda})", self.label),
            kind: MapKind::Dilated { inner: Box::new(self.kind), lambda, lambda_f64 },
        })
    }

    /// Override the declared exponent, keeping the evaluator. Lowering the
    /// exponent below the true one is how the refusal and envelope paths are
    /// exercised.
    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Invalid("Holder exponent must lie in (0, 1]".to_string()));
        }
        self.alpha = alpha;
        Ok(self)
    }

    /// Override the declared Holder constant.
    pub fn with_constant(mut self, constant: f64) -> Self {
        self.constant = constant;
        self
    }

    pub fn algebra(&self) -> &GradedLieAlgebra {
        &self.algebra
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn holder_constant(&self) -> f64 {
        self.constant
    }

    pub fn constant_raised(&self) -> bool {
        self.constant_raised
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    fn check_input(&self, x: &[Rational]) -> Result<()> {
        if x.len() != self.dim_in {
            return Err(Error::DimensionMismatch { expected: self.dim_in, found: x.len() });
        }
        Ok(())
    }

    /// Exact evaluation at a rational source point.
    pub fn eval_exact(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        self.check_input(x)?;
        eval_kind_exact(&self.kind, &self.algebra, x)
    }

    /// Float evaluation; the source point stays exact so that grid lookups
    /// and leaf locations are never subject to rounding.
    pub fn eval_f64(&self, x: &[Rational]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        eval_kind_f64(&self.kind, &self.algebra, x)
    }

    /// Check the Holder bound on all axis-adjacent dyadic pairs at every
    /// level up to `level`, raising the constant when violated. Pairs where
    /// the map is undefined (boundary-only maps) are skipped.
    pub fn check_holder(&mut self, level: u32) -> Result<HolderCheck> {
        let declared = self.constant;
        let mut measured = 0.0_f64;
        let mut pairs = 0usize;
        for l in 0..=level {
            let n = 1u64 << l;
            let h = 1.0 / n as f64;
            let step_alpha = h.powf(self.alpha);
            let mut idx = vec![0u64; self.dim_in];
            'grid: loop {
                let x: Vec<Rational> =
                    idx.iter().map(|&i| crate::scalar::dyadic(i as i64, l)).collect();
                if let Ok(p) = self.eval_exact(&x) {
                    let p = GroupPoint::new(self.chart, p);
                    for axis in 0..self.dim_in {
                        if idx[axis] == n {
                            continue;
                        }
                        let mut y = x.clone();
                        y[axis] = crate::scalar::dyadic(idx[axis] as i64 + 1, l);
                        if let Ok(q) = self.eval_exact(&y) {
                            let q = GroupPoint::new(self.chart, q);
                            let d = self.algebra.hom_dist(&p, &q)?;
                            measured = measured.max(d / step_alpha);
                            pairs += 1;
                        }
                    }
                }
                let mut axis = self.dim_in;
                loop {
                    if axis == 0 {
                        break 'grid;
                    }
                    axis -= 1;
                    idx[axis] += 1;
                    if idx[axis] <= n {
                        break;
                    }
                    idx[axis] = 0;
                }
            }
        }
        let raised = measured > declared;
        if raised {
            self.constant = measured;
            self.constant_raised = true;
        }
        Ok(HolderCheck {
            declared_constant: declared,
            measured_constant: measured,
            raised,
            pairs_checked: pairs,
        })
    }
}

fn eval_kind_exact(
    kind: &MapKind,
    algebra: &GradedLieAlgebra,
    x: &[Rational],
) -> Result<Vec<Rational>> {
    match kind {
        MapKind::Polynomial { comps, .. } => Ok(comps.iter().map(|p| p.eval(x)).collect()),
        MapKind::Tabulated { level, values, .. } => {
            let flat = grid_offset(*level, x)?;
            Ok(values[flat].clone())
        }
        MapKind::RippledVerticalSquare { series, kappa, .. } => {
            let w = Rational::one() + kappa * series.eval(&x[1]);
            Ok(vec![Rational::zero(), &x[0] * w, x[1].clone()])
        }
        MapKind::NoisyHorizontalCurve { curve } => curve.eval(&x[0]),
        MapKind::BoundaryLoop { curve, retrace } => {
            let lambda = boundary_parameter(x)?;
            loop_point_exact(curve, *retrace, &lambda)
        }
        MapKind::Dilated { inner, lambda, .. } => {
            let v = eval_kind_exact(inner, algebra, x)?;
            Ok(v
                .iter()
                .enumerate()
                .map(|(i, c)| scalar_pow(lambda, algebra.weight(i)) * c)
                .collect())
        }
    }
}

fn eval_kind_f64(kind: &MapKind, algebra: &GradedLieAlgebra, x: &[Rational]) -> Result<Vec<f64>> {
    match kind {
        MapKind::Polynomial { comps_f64, .. } => {
            let xf: Vec<f64> = x.iter().map(Scalar::to_f64).collect();
            Ok(comps_f64.iter().map(|p| p.eval(&xf)).collect())
        }
        MapKind::Tabulated { level, values_f64, .. } => {
            let flat = grid_offset(*level, x)?;
            Ok(values_f64[flat].clone())
        }
        MapKind::RippledVerticalSquare { series, kappa_f64, .. } => {
            let w = 1.0 + kappa_f64 * series.eval_f64(x[1].to_f64());
            Ok(vec![0.0, x[0].to_f64() * w, x[1].to_f64()])
        }
        MapKind::NoisyHorizontalCurve { curve } => curve.eval_f64(&x[0]),
        MapKind::BoundaryLoop { curve, retrace } => {
            let lambda = boundary_parameter(x)?;
            loop_point_f64(curve, *retrace, &lambda)
        }
        MapKind::Dilated { inner, lambda_f64, .. } => {
            let v = eval_kind_f64(inner, algebra, x)?;
            Ok(v
                .iter()
                .enumerate()
                .map(|(i, c)| lambda_f64.powi(algebra.weight(i) as i32) * c)
                .collect())
        }
    }
}

/// Row-major offset of an exact grid point, first axis slowest. Fails when
/// a coordinate does not lie on the level grid.
fn grid_offset(level: u32, x: &[Rational]) -> Result<usize> {
    let n = 1u64 << level;
    let scale = Rational::from_ratio(n as i64, 1);
    let mut flat = 0usize;
    for c in x {
        let scaled = c * &scale;
        let floor = scaled.floor();
        if floor != scaled {
            return Err(Error::Invalid("tabulated map sampled off its grid".to_string()));
        }
        let i = num_traits::ToPrimitive::to_u64(&floor.to_integer())
            .filter(|&i| i <= n)
            .ok_or_else(|| Error::Invalid("tabulated map sampled outside its cube".to_string()))?;
        flat = flat * (n as usize + 1) + i as usize;
    }
    Ok(flat)
}

/// Loop parameter of a point on the boundary of the unit square, walking
/// counterclockwise from the origin: bottom, right, top, left. Corners are
/// consistent because the loop is closed.
fn boundary_parameter(x: &[Rational]) -> Result<Rational> {
    if x.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: x.len() });
    }
    let zero = Rational::zero();
    let one = Rational::one();
    let quarter = Rational::from_ratio(1, 4);
    if x[0] < zero || x[0] > one || x[1] < zero || x[1] > one {
        return Err(Error::Invalid("boundary loop sampled outside the square".to_string()));
    }
    if x[1] == zero {
        return Ok(&quarter * &x[0]);
    }
    if x[0] == one {
        return Ok(&quarter + &quarter * &x[1]);
    }
    if x[1] == one {
        return Ok(Rational::from_ratio(3, 4) - &quarter * &x[0]);
    }
    if x[0] == zero {
        return Ok(&one - &quarter * &x[1]);
    }
    Err(Error::Invalid("boundary loop sampled in the interior".to_string()))
}

fn loop_point_exact(curve: &NoisyCurve, retrace: bool, lambda: &Rational) -> Result<Vec<Rational>> {
    let half = Rational::from_ratio(1, 2);
    let two = Rational::from_ratio(2, 1);
    if lambda <= &half {
        return curve.eval(&(lambda * &two));
    }
    if retrace {
        return curve.eval(&(Rational::from_ratio(2, 1) - lambda * &two));
    }
    // Radial straight return to the identity.
    let tau = lambda * &two - Rational::one();
    let end = curve.eval(&Rational::one())?;
    let r = Rational::one() - tau;
    Ok(end.iter().map(|c| &r * c).collect())
}

fn loop_point_f64(curve: &NoisyCurve, retrace: bool, lambda: &Rational) -> Result<Vec<f64>> {
    let half = Rational::from_ratio(1, 2);
    let two = Rational::from_ratio(2, 1);
    if lambda <= &half {
        return curve.eval_f64(&(lambda * &two));
    }
    if retrace {
        return curve.eval_f64(&(Rational::from_ratio(2, 1) - lambda * &two));
    }
    let tau = lambda * &two - Rational::one();
    let end = curve.eval_f64(&Rational::one())?;
    let r = 1.0 - tau.to_f64();
    Ok(end.iter().map(|c| r * c).collect())
}

impl PointMap<Rational> for SampledHolderMap {
    fn chart(&self) -> Chart {
        self.chart
    }

    fn dim_in(&self) -> usize {
        self.dim_in
    }

    fn eval(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        self.eval_exact(x)
    }
}

/// Float view of a sampled map, for the quadrature integration path.
pub struct FloatView<'a>(pub &'a SampledHolderMap);

impl PointMap<f64> for FloatView<'_> {
    fn chart(&self) -> Chart {
        self.0.chart
    }

    fn dim_in(&self) -> usize {
        self.0.dim_in
    }

    fn eval(&self, x: &[Rational]) -> Result<Vec<f64>> {
        self.0.eval_f64(x)
    }
}
