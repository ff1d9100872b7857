//! Exactly horizontal piecewise linear arcs, simplices, and interpolants
//! in the first Heisenberg group.
//!
//! Every arc is a short list of axis moves in the matrix chart: either the
//! x coordinate changes with y and z frozen, or y changes at frozen x with
//! z tracking `dz = x dy` linearly. Both kinds kill `theta = dz - x dy`
//! identically, so horizontality is a property of the rational vertex data
//! and survives left translation and dilation exactly.
//!
//! Arcs are built at the origin from the displacement `p^{-1} q` and moved
//! into place by left translation, which makes the family translation
//! equivariant by construction; the one free height in the lift is a power
//! of two, which makes it dilation equivariant for dyadic factors. The
//! construction is orientation canonical: the arc from `q` to `p` is the
//! exact reversal of the arc from `p` to `q`, so arc chains negate under
//! reversal and cone boundaries cancel exactly.

use alloc::vec::Vec;

use crate::chains::{Chain, SimplexMap};
use crate::error::{Error, Result};
use crate::lie::{Chart, GradedLieAlgebra, GroupPoint};
use crate::scalar::{Rational, Scalar};

use super::require_heisenberg_matrix;
use crate::holder::SampledHolderMap;

/// A horizontal piecewise linear arc: matrix-chart vertices joined by
/// horizontal axis moves.
#[derive(Debug, Clone, PartialEq)]
pub struct HorizontalPLArc {
    vertices: Vec<GroupPoint<Rational>>,
}

impl HorizontalPLArc {
    pub fn start(&self) -> &GroupPoint<Rational> {
        self.vertices.first().expect("arc has at least one vertex")
    }

    pub fn end(&self) -> &GroupPoint<Rational> {
        self.vertices.last().expect("arc has at least one vertex")
    }

    pub fn vertices(&self) -> &[GroupPoint<Rational>] {
        &self.vertices
    }

    pub fn segment_count(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Structural horizontality: every segment is an x move (y, z frozen)
    /// or a lifted y move (x frozen, `dz = x dy`).
    pub fn is_horizontal(&self) -> bool {
        self.vertices.windows(2).all(|w| {
            let (s, t) = (&w[0].coords, &w[1].coords);
            let x_move = s[1] == t[1] && s[2] == t[2];
            let y_move = s[0] == t[0] && &t[2] - &s[2] == &s[0] * (&t[1] - &s[1]);
            x_move || y_move
        })
    }

    /// The arc as a 1-chain of straight segments, each stored with a
    /// canonical vertex order so reversed arcs give negated chains.
    pub fn to_chain(&self) -> Result<Chain<Rational>> {
        let mut chain = Chain::zero();
        for w in self.vertices.windows(2) {
            let (s, t) = (&w[0], &w[1]);
            if s.coords <= t.coords {
                chain.push(SimplexMap::straight(&[s.clone(), t.clone()])?, 1);
            } else {
                chain.push(SimplexMap::straight(&[t.clone(), s.clone()])?, -1);
            }
        }
        Ok(chain)
    }

    /// Total Euclidean length of the segments in chart coordinates.
    pub fn euclidean_length(&self) -> f64 {
        self.vertices
            .windows(2)
            .map(|w| {
                let d: f64 = w[0]
                    .coords
                    .iter()
                    .zip(&w[1].coords)
                    .map(|(a, b)| {
                        let d = (b - a).to_f64();
                        d * d
                    })
                    .sum();
                num_traits::Float::sqrt(d)
            })
            .sum()
    }

    fn reversed(mut self) -> Self {
        self.vertices.reverse();
        self
    }
}

/// Smallest power of two `h` with `h^2 >= |w|` and `h >= 2 |v|`.
fn lift_height(v: &Rational, w: &Rational) -> Rational {
    let two = Rational::from_ratio(2, 1);
    let half = Rational::from_ratio(1, 2);
    let v2 = (v + v).abs();
    let w_abs = w.abs();
    let satisfied = |h: &Rational| &(h * h) >= &w_abs && h >= &v2;
    let mut h = Rational::one();
    if satisfied(&h) {
        loop {
            let down = &h * &half;
            if satisfied(&down) {
                h = down;
            } else {
                return h;
            }
        }
    }
    loop {
        h = &h * &two;
        if satisfied(&h) {
            return h;
        }
    }
}

/// Vertex list of the normalized arc from the identity to `(u, v, w)`.
fn normalized_vertices(u: &Rational, v: &Rational, w: &Rational) -> Vec<Vec<Rational>> {
    let zero = Rational::zero;
    let mut out = alloc::vec![alloc::vec![zero(), zero(), zero()]];
    if w.is_zero() {
        // At x = 0 the y move is free, then slide in x.
        if !v.is_zero() {
            out.push(alloc::vec![zero(), v.clone(), zero()]);
        }
        if !u.is_zero() {
            out.push(alloc::vec![u.clone(), v.clone(), zero()]);
        }
        return out;
    }
    // Overshoot y by a dyadic height h and pick the x excursion a making
    // the lifted area land exactly on w: a (v + h) - u h = w.
    let h = lift_height(v, w);
    let vh = v + &h;
    let a = (w + &(u * &h)) / &vh;
    let top = &a * &vh;
    if !a.is_zero() {
        out.push(alloc::vec![a.clone(), zero(), zero()]);
    }
    out.push(alloc::vec![a.clone(), vh.clone(), top.clone()]);
    if &a != u {
        out.push(alloc::vec![u.clone(), vh, top.clone()]);
    }
    out.push(alloc::vec![u.clone(), v.clone(), top - u * &h]);
    out
}

/// Horizontal arc from `p` to `q`, at most four segments, exact endpoints,
/// translation equivariant for all rational translations and dilation
/// equivariant for dyadic factors.
pub fn horizontal_arc(
    algebra: &GradedLieAlgebra,
    p: &GroupPoint<Rational>,
    q: &GroupPoint<Rational>,
) -> Result<HorizontalPLArc> {
    require_heisenberg_matrix(algebra, p)?;
    require_heisenberg_matrix(algebra, q)?;
    let n = algebra.displacement(p, q)?;
    let n_inv = algebra.group_inv(&n)?;
    // Canonical orientation on the unordered pair: build from whichever
    // end sees the lexicographically larger displacement, reverse if that
    // was q. The rule only reads the displacement, so it is translation
    // invariant, and positive dilations preserve it.
    if n.coords < n_inv.coords {
        return Ok(horizontal_arc(algebra, q, p)?.reversed());
    }
    let vertices = normalized_vertices(&n.coords[0], &n.coords[1], &n.coords[2])
        .into_iter()
        .map(|coords| algebra.group_mul(p, &GroupPoint::new(Chart::HeisenbergMatrix, coords)))
        .collect::<Result<Vec<_>>>()?;
    let arc = HorizontalPLArc { vertices };
    debug_assert!(arc.is_horizontal());
    debug_assert!(arc.segment_count() <= 5);
    Ok(arc)
}

/// A PL simplex with horizontal edge arcs: the cone from the exponential
/// center of gravity over the edge loop (and, for tetrahedra, over the
/// face cones).
#[derive(Debug, Clone)]
pub struct HorizontalSimplex {
    vertices: Vec<GroupPoint<Rational>>,
    /// Directed edge arcs `i -> j` for `i < j`, in lexicographic order.
    edges: Vec<HorizontalPLArc>,
    chain: Chain<Rational>,
}

impl HorizontalSimplex {
    pub fn vertices(&self) -> &[GroupPoint<Rational>] {
        &self.vertices
    }

    pub fn edges(&self) -> &[HorizontalPLArc] {
        &self.edges
    }

    /// The simplex as a chain of straight matrix-chart simplices.
    pub fn chain(&self) -> &Chain<Rational> {
        &self.chain
    }
}

/// Exponential center of gravity of matrix-chart points.
fn exp_centroid(
    algebra: &GradedLieAlgebra,
    points: &[&GroupPoint<Rational>],
) -> Result<GroupPoint<Rational>> {
    let n = Rational::from_ratio(points.len() as i64, 1);
    let mut sum = alloc::vec![Rational::zero(); 3];
    for p in points {
        let e = algebra.chart_convert(p, Chart::Exponential)?;
        for (s, c) in sum.iter_mut().zip(&e.coords) {
            *s = &*s + c;
        }
    }
    let avg: Vec<Rational> = sum.into_iter().map(|s| s / &n).collect();
    algebra.chart_convert(&GroupPoint::exponential(avg), Chart::HeisenbergMatrix)
}

/// Cone a 1-chain loop from an apex into 2-simplices, one per segment of
/// the given arcs traversed with the given signs.
fn cone_loop(
    apex: &GroupPoint<Rational>,
    arcs: &[(&HorizontalPLArc, i64)],
) -> Result<Chain<Rational>> {
    let mut chain = Chain::zero();
    for (arc, sign) in arcs {
        for w in arc.vertices.windows(2) {
            let (s, t) = if *sign > 0 { (&w[0], &w[1]) } else { (&w[1], &w[0]) };
            // Canonical vertex order for the two moving points keeps the
            // chains of opposite traversals exact negatives.
            if s.coords <= t.coords {
                chain.push(SimplexMap::straight(&[apex.clone(), s.clone(), t.clone()])?, 1);
            } else {
                chain.push(SimplexMap::straight(&[apex.clone(), t.clone(), s.clone()])?, -1);
            }
        }
    }
    Ok(chain)
}

/// Horizontal 2- or 3-simplex on three or four matrix-chart points.
pub fn horizontal_simplex(
    algebra: &GradedLieAlgebra,
    points: &[GroupPoint<Rational>],
) -> Result<HorizontalSimplex> {
    for p in points {
        require_heisenberg_matrix(algebra, p)?;
    }
    let edge_arcs = |idx: &[(usize, usize)]| -> Result<Vec<HorizontalPLArc>> {
        idx.iter().map(|&(i, j)| horizontal_arc(algebra, &points[i], &points[j])).collect()
    };
    match points.len() {
        3 => {
            let edges = edge_arcs(&[(0, 1), (0, 2), (1, 2)])?;
            let g = exp_centroid(algebra, &[&points[0], &points[1], &points[2]])?;
            let chain =
                cone_loop(&g, &[(&edges[0], 1), (&edges[2], 1), (&edges[1], -1)])?;
            Ok(HorizontalSimplex { vertices: points.to_vec(), edges, chain })
        }
        4 => {
            let edges = edge_arcs(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])?;
            let edge = |i: usize, j: usize| -> &HorizontalPLArc {
                match (i, j) {
                    (0, 1) => &edges[0],
                    (0, 2) => &edges[1],
                    (0, 3) => &edges[2],
                    (1, 2) => &edges[3],
                    (1, 3) => &edges[4],
                    _ => &edges[5],
                }
            };
            let g = exp_centroid(algebra, &[&points[0], &points[1], &points[2], &points[3]])?;
            let mut chain = Chain::zero();
            // Boundary faces of (0123) with the alternating signs; each
            // face is itself the centroid cone over its edge loop.
            let faces: [([usize; 3], i64); 4] =
                [([1, 2, 3], 1), ([0, 2, 3], -1), ([0, 1, 3], 1), ([0, 1, 2], -1)];
            for ([a, b, c], face_sign) in faces {
                let gf = exp_centroid(algebra, &[&points[a], &points[b], &points[c]])?;
                let face = cone_loop(
                    &gf,
                    &[(edge(a, b), 1), (edge(b, c), 1), (edge(a, c), -1)],
                )?;
                for (sigma, coeff) in face.iter() {
                    let mut pts = alloc::vec![g.clone()];
                    pts.extend(sigma.vertices());
                    chain.push(SimplexMap::straight(&pts)?, coeff * face_sign);
                }
            }
            Ok(HorizontalSimplex { vertices: points.to_vec(), edges, chain })
        }
        n => Err(Error::Invalid(alloc::format!(
            "horizontal simplices take 3 or 4 points, got {n}"
        ))),
    }
}

/// Level-`level` horizontal interpolant of a curve: one arc per dyadic
/// segment of `[0, 1]`.
pub fn horizontal_interpolate(
    map: &SampledHolderMap,
    level: u32,
) -> Result<Vec<HorizontalPLArc>> {
    if map.dim_in() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: map.dim_in() });
    }
    if map.chart() != Chart::HeisenbergMatrix {
        return Err(Error::ChartMismatch {
            expected: Chart::HeisenbergMatrix.name(),
            found: map.chart().name(),
        });
    }
    let algebra = map.algebra();
    let n = 1u64 << level;
    let mut points = Vec::with_capacity(n as usize + 1);
    for i in 0..=n {
        let t = crate::scalar::dyadic(i as i64, level);
        points.push(GroupPoint::new(Chart::HeisenbergMatrix, map.eval_exact(&[t])?));
    }
    points
        .windows(2)
        .map(|w| horizontal_arc(algebra, &w[0], &w[1]))
        .collect()
}

/// Concatenate arc chains.
pub fn chain_of_arcs(arcs: &[HorizontalPLArc]) -> Result<Chain<Rational>> {
    let mut chain = Chain::zero();
    for arc in arcs {
        chain.add_scaled(&arc.to_chain()?, 1);
    }
    Ok(chain)
}

/// One step of the horizontal telescope of a curve: the finer interpolant
/// differs from the coarser by the boundary of a chain of horizontal
/// simplex fillers, exactly.
#[derive(Debug, Clone)]
pub struct HorizontalTelescope {
    pub coarse: Chain<Rational>,
    pub fine: Chain<Rational>,
    pub filler: Chain<Rational>,
    /// `fine - coarse - boundary(filler)`; zero by construction, kept so
    /// callers can assert it.
    pub residual: Chain<Rational>,
}

/// Build the telescope step between levels `level` and `level + 1`.
pub fn horizontal_telescope(
    map: &SampledHolderMap,
    level: u32,
) -> Result<HorizontalTelescope> {
    let coarse_arcs = horizontal_interpolate(map, level)?;
    let fine_arcs = horizontal_interpolate(map, level + 1)?;
    let algebra = map.algebra();
    let mut filler = Chain::zero();
    for (cell, coarse_arc) in coarse_arcs.iter().enumerate() {
        let p = coarse_arc.start().clone();
        let q = coarse_arc.end().clone();
        let m = fine_arcs[2 * cell].end().clone();
        let simplex = horizontal_simplex(algebra, &[p, m, q])?;
        // boundary(cone) = arc(p,m) + arc(m,q) - arc(p,q), which is fine
        // minus coarse on this cell.
        filler.add_scaled(simplex.chain(), 1);
    }
    let coarse = chain_of_arcs(&coarse_arcs)?;
    let fine = chain_of_arcs(&fine_arcs)?;
    let residual = fine.sub(&coarse).sub(&filler.boundary());
    Ok(HorizontalTelescope { coarse, fine, filler, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{integrate_chain_exact, Coframe, Form};
    use crate::lie::heisenberg;
    use crate::poly::Poly;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn pt(x: Rational, y: Rational, z: Rational) -> GroupPoint<Rational> {
        GroupPoint::new(Chart::HeisenbergMatrix, vec![x, y, z])
    }

    fn ipt(x: i64, y: i64, z: i64) -> GroupPoint<Rational> {
        pt(q(x, 1), q(y, 1), q(z, 1))
    }

    fn rand_pt(rng: &mut ChaCha8Rng) -> GroupPoint<Rational> {
        let c = |rng: &mut ChaCha8Rng| q(rng.gen_range(-8..=8), 1 << rng.gen_range(0..3));
        pt(c(rng), c(rng), c(rng))
    }

    fn theta() -> Form<Rational> {
        Coframe::new(&heisenberg(1), Chart::HeisenbergMatrix).unwrap().theta(2).unwrap()
    }

    /// The pullback of `form` to every segment of `chain` is the zero
    /// polynomial, not merely zero after integration.
    fn pulls_back_to_zero(
        algebra: &GradedLieAlgebra,
        form: &Form<Rational>,
        chain: &Chain<Rational>,
    ) -> bool {
        chain.iter().all(|(s, _)| {
            let polys = s.barycentric_polys(algebra).unwrap();
            let pulled = form.pullback(&polys).unwrap();
            pulled.coefficient(&[0]).map_or(true, Poly::is_zero)
        })
    }

    #[test]
    fn equal_endpoints_give_a_point_arc() {
        let alg = heisenberg(1);
        let p = pt(q(3, 2), q(-1, 4), q(5, 8));
        let arc = horizontal_arc(&alg, &p, &p).unwrap();
        assert_eq!(arc.segment_count(), 0);
        assert_eq!(arc.start(), &p);
        assert_eq!(arc.end(), &p);
        assert!(arc.is_horizontal());
        assert!(arc.to_chain().unwrap().is_zero());
    }

    #[test]
    fn axis_displacements_take_one_or_two_segments() {
        let alg = heisenberg(1);
        let e = alg.identity::<Rational>(Chart::HeisenbergMatrix);
        let x = horizontal_arc(&alg, &e, &ipt(5, 0, 0)).unwrap();
        assert_eq!(x.segment_count(), 1);
        let y = horizontal_arc(&alg, &e, &ipt(0, -3, 0)).unwrap();
        assert_eq!(y.segment_count(), 1);
        let xy = horizontal_arc(&alg, &e, &ipt(2, 7, 0)).unwrap();
        assert_eq!(xy.segment_count(), 2);
        for arc in [&x, &y, &xy] {
            assert!(arc.is_horizontal());
            assert_eq!(arc.start(), &e);
        }
    }

    #[test]
    fn unit_vertical_displacement_is_the_unit_square_loop() {
        // The canonical example: reaching straight up by one costs a full
        // square of horizontal travel.
        let alg = heisenberg(1);
        let e = alg.identity::<Rational>(Chart::HeisenbergMatrix);
        let arc = horizontal_arc(&alg, &e, &ipt(0, 0, 1)).unwrap();
        let want =
            [ipt(0, 0, 0), ipt(1, 0, 0), ipt(1, 1, 1), ipt(0, 1, 1), ipt(0, 0, 1)];
        assert_eq!(arc.vertices(), &want);
    }

    #[test]
    fn lift_height_is_the_minimal_dyadic_height() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let v = q(rng.gen_range(-40..=40), 1 << rng.gen_range(0..4));
            let w = q(rng.gen_range(-90..=90), 1 << rng.gen_range(0..4));
            let h = lift_height(&v, &w);
            let ok = |h: &Rational| &(h * h) >= &w.abs() && h >= &(&v + &v).abs();
            assert!(ok(&h), "constraints fail at v={v:?} w={w:?}");
            assert!(!ok(&(&h * &q(1, 2))), "height not minimal at v={v:?} w={w:?}");
            // Dyadic: the numerator or denominator is a power of two and
            // the other is one.
            let h2 = &h * &h;
            let doubled = lift_height(&(&v + &v), &(&h2 * &q(4, 1)));
            assert_eq!(doubled, &h * &q(2, 1), "doubling the data doubles the height");
        }
    }

    #[test]
    fn random_arcs_are_horizontal_with_exact_endpoints() {
        let alg = heisenberg(1);
        let th = theta();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..150 {
            let p = rand_pt(&mut rng);
            let r = rand_pt(&mut rng);
            let arc = horizontal_arc(&alg, &p, &r).unwrap();
            assert_eq!(arc.start(), &p);
            assert_eq!(arc.end(), &r);
            assert!(arc.is_horizontal());
            assert!(arc.segment_count() <= 5);
            assert!(pulls_back_to_zero(&alg, &th, &arc.to_chain().unwrap()));
        }
    }

    #[test]
    fn arcs_are_translation_equivariant() {
        let alg = heisenberg(1);
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..60 {
            let (r, p, s) = (rand_pt(&mut rng), rand_pt(&mut rng), rand_pt(&mut rng));
            let base = horizontal_arc(&alg, &p, &s).unwrap();
            let moved =
                horizontal_arc(&alg, &alg.group_mul(&r, &p).unwrap(), &alg.group_mul(&r, &s).unwrap())
                    .unwrap();
            let translated: Vec<_> = base
                .vertices()
                .iter()
                .map(|v| alg.group_mul(&r, v).unwrap())
                .collect();
            assert_eq!(moved.vertices(), &translated[..]);
        }
    }

    #[test]
    fn arcs_are_equivariant_under_dyadic_dilations() {
        let alg = heisenberg(1);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..40 {
            let (p, s) = (rand_pt(&mut rng), rand_pt(&mut rng));
            let base = horizontal_arc(&alg, &p, &s).unwrap();
            for j in -2i64..=3 {
                let lam = if j >= 0 { q(1 << j, 1) } else { q(1, 1 << (-j)) };
                let scaled = horizontal_arc(
                    &alg,
                    &alg.dilation(&lam, &p).unwrap(),
                    &alg.dilation(&lam, &s).unwrap(),
                )
                .unwrap();
                let dilated: Vec<_> = base
                    .vertices()
                    .iter()
                    .map(|v| alg.dilation(&lam, v).unwrap())
                    .collect();
                assert_eq!(scaled.vertices(), &dilated[..]);
            }
        }
    }

    #[test]
    fn reversing_the_endpoints_reverses_the_arc_and_negates_the_chain() {
        let alg = heisenberg(1);
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..60 {
            let (p, s) = (rand_pt(&mut rng), rand_pt(&mut rng));
            let fwd = horizontal_arc(&alg, &p, &s).unwrap();
            let bwd = horizontal_arc(&alg, &s, &p).unwrap();
            let mut rev = fwd.vertices().to_vec();
            rev.reverse();
            assert_eq!(bwd.vertices(), &rev[..]);
            assert_eq!(bwd.to_chain().unwrap(), fwd.to_chain().unwrap().neg());
        }
    }

    #[test]
    fn arc_length_is_controlled_by_the_homogeneous_distance() {
        // Euclidean length <= 64 (1 + |p_x|) (r + r^2) at homogeneous
        // distance r: the r term pays for the horizontal travel, the r^2
        // term for the vertical coordinate, and the x factor for the shear
        // that left translation applies to z.
        let alg = heisenberg(1);
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..150 {
            let (p, s) = (rand_pt(&mut rng), rand_pt(&mut rng));
            let arc = horizontal_arc(&alg, &p, &s).unwrap();
            let r = alg.hom_dist(&p, &s).unwrap();
            let px = p.coords[0].to_f64().abs();
            let sx = s.coords[0].to_f64().abs();
            let shear = 1.0 + px.max(sx);
            assert!(
                arc.euclidean_length() <= 64.0 * shear * (r + r * r) + 1e-9,
                "length {} exceeds bound at r={r}",
                arc.euclidean_length()
            );
        }
    }

    #[test]
    fn triangle_chain_boundary_is_the_signed_edge_loop() {
        let alg = heisenberg(1);
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..40 {
            let pts = [rand_pt(&mut rng), rand_pt(&mut rng), rand_pt(&mut rng)];
            let simplex = horizontal_simplex(&alg, &pts).unwrap();
            let [a01, a02, a12] = [&simplex.edges()[0], &simplex.edges()[1], &simplex.edges()[2]];
            let loop_chain = a01
                .to_chain()
                .unwrap()
                .add(&a12.to_chain().unwrap())
                .sub(&a02.to_chain().unwrap());
            assert_eq!(simplex.chain().boundary(), loop_chain);
        }
    }

    #[test]
    fn degenerate_triangles_stay_degenerate() {
        let alg = heisenberg(1);
        // Collinear points on the x axis: every piece of the filler keeps
        // y = z = 0.
        let pts = [ipt(0, 0, 0), ipt(1, 0, 0), ipt(3, 0, 0)];
        let simplex = horizontal_simplex(&alg, &pts).unwrap();
        for (s, _) in simplex.chain().iter() {
            for v in s.vertices() {
                assert!(v.coords[1].is_zero() && v.coords[2].is_zero());
            }
        }
        // Fully collapsed: no chain at all.
        let p = pt(q(1, 2), q(3, 4), q(-5, 8));
        let collapsed = horizontal_simplex(&alg, &[p.clone(), p.clone(), p]).unwrap();
        assert!(collapsed.chain().is_zero());
    }

    #[test]
    fn tetrahedron_boundary_matches_the_signed_face_chains() {
        let alg = heisenberg(1);
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..15 {
            let pts = [
                rand_pt(&mut rng),
                rand_pt(&mut rng),
                rand_pt(&mut rng),
                rand_pt(&mut rng),
            ];
            let tetra = horizontal_simplex(&alg, &pts).unwrap();
            let face = |a: usize, b: usize, c: usize| {
                horizontal_simplex(&alg, &[pts[a].clone(), pts[b].clone(), pts[c].clone()])
                    .unwrap()
                    .chain()
                    .clone()
            };
            let signed_faces = face(1, 2, 3)
                .sub(&face(0, 2, 3))
                .add(&face(0, 1, 3))
                .sub(&face(0, 1, 2));
            assert_eq!(tetra.chain().boundary(), signed_faces);
        }
    }

    #[test]
    fn triangle_edges_annihilate_the_contact_form() {
        let alg = heisenberg(1);
        let th = theta();
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for _ in 0..20 {
            let pts = [rand_pt(&mut rng), rand_pt(&mut rng), rand_pt(&mut rng)];
            let simplex = horizontal_simplex(&alg, &pts).unwrap();
            let boundary = simplex.chain().boundary();
            assert!(pulls_back_to_zero(&alg, &th, &boundary));
        }
    }

    #[test]
    fn interpolants_kill_the_contact_form_exactly() {
        let alg = heisenberg(1);
        let t = Poly::<Rational>::var(1, 0);
        let curve = SampledHolderMap::polynomial(
            &alg,
            Chart::HeisenbergMatrix,
            vec![t.clone(), t.mul(&t), t.mul(&t).mul(&t).sub(&t)],
            1.0,
            "cubic test curve",
        )
        .unwrap();
        let arcs = horizontal_interpolate(&curve, 3).unwrap();
        assert_eq!(arcs.len(), 8);
        for (i, arc) in arcs.iter().enumerate() {
            let t0 = crate::scalar::dyadic(i as i64, 3);
            assert_eq!(arc.start().coords, curve.eval_exact(&[t0]).unwrap());
        }
        let th = theta();
        // A polynomial multiple of theta also dies segment by segment.
        let lam = Poly::<Rational>::var(3, 0).add(&Poly::constant(3, q(2, 1)));
        let weighted = th.scale_poly(&lam).unwrap();
        let chain = chain_of_arcs(&arcs).unwrap();
        assert!(pulls_back_to_zero(&alg, &weighted, &chain));
        assert!(integrate_chain_exact(&alg, &weighted, &chain).unwrap().is_zero());
    }

    #[test]
    fn telescope_residual_is_exactly_zero() {
        let alg = heisenberg(1);
        let t = Poly::<Rational>::var(1, 0);
        let two_t = t.scale(&q(2, 1));
        let curve = SampledHolderMap::polynomial(
            &alg,
            Chart::HeisenbergMatrix,
            vec![two_t.sub(&t.mul(&t)), t.mul(&t).mul(&t), t.clone()],
            1.0,
            "telescope test curve",
        )
        .unwrap();
        for level in 0..4 {
            let step = horizontal_telescope(&curve, level).unwrap();
            assert!(step.residual.is_zero(), "residual nonzero at level {level}");
            assert_eq!(
                step.fine.sub(&step.coarse),
                step.filler.boundary(),
                "telescope identity fails at level {level}"
            );
        }
    }

    #[test]
    fn closed_polygons_have_zero_boundary() {
        let alg = heisenberg(1);
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..30 {
            let pts = [rand_pt(&mut rng), rand_pt(&mut rng), rand_pt(&mut rng)];
            let arcs = [
                horizontal_arc(&alg, &pts[0], &pts[1]).unwrap(),
                horizontal_arc(&alg, &pts[1], &pts[2]).unwrap(),
                horizontal_arc(&alg, &pts[2], &pts[0]).unwrap(),
            ];
            let chain = chain_of_arcs(&arcs).unwrap();
            assert!(chain.boundary().is_zero());
        }
    }

    #[test]
    fn wrong_inputs_are_refused() {
        let alg = heisenberg(1);
        let e = alg.identity::<Rational>(Chart::HeisenbergMatrix);
        let exp = alg.identity::<Rational>(Chart::Exponential);
        assert!(matches!(
            horizontal_arc(&alg, &exp, &exp),
            Err(Error::ChartMismatch { .. })
        ));
        let flat = crate::lie::abelian(3);
        let fe = flat.identity::<Rational>(Chart::Exponential);
        assert!(matches!(horizontal_arc(&flat, &fe, &fe), Err(Error::Invalid(_))));
        assert!(matches!(
            horizontal_simplex(&alg, &[e.clone(), e.clone()]),
            Err(Error::Invalid(_))
        ));
        assert!(horizontal_simplex(&alg, core::array::from_ref(&e)).is_err());
    }
}
