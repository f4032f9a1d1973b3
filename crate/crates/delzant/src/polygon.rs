//! Moment polygons: construction, validation, lattice structure, unimodular
//! maps, generators for the standard toric surfaces, and corner blow-up.
//!
//! A moment polygon is an ordered, strictly convex polygon with rational
//! vertices listed counterclockwise. Each edge carries its primitive integer
//! direction and its lattice length (the rational factor relating the edge
//! displacement to that primitive direction). A polygon is Delzant when the
//! two primitive directions leaving any corner span the integer lattice,
//! i.e. have determinant +-1.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::rational::Rational;

/// Point (or displacement vector) with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Self { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Self::new(Rational::from_int(x), Rational::from_int(y))
    }

    pub fn zero() -> Self {
        Self::ints(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn add(&self, rhs: &Point) -> Point {
        Point::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }

    pub fn sub(&self, rhs: &Point) -> Point {
        Point::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }

    pub fn scaled(&self, c: &Rational) -> Point {
        Point::new(&self.x * c, &self.y * c)
    }

    pub fn midpoint(&self, rhs: &Point) -> Point {
        self.add(rhs).scaled(&Rational::new(1, 2).expect("2 != 0"))
    }

    pub fn dot(&self, rhs: &Point) -> Rational {
        &self.x * &rhs.x + &self.y * &rhs.y
    }

    pub fn cross(&self, rhs: &Point) -> Rational {
        &self.x * &rhs.y - &self.y * &rhs.x
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Integer lattice vector; edge directions are always primitive ones.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeVector {
    pub a: BigInt,
    pub b: BigInt,
}

impl LatticeVector {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Self { a: a.into(), b: b.into() }
    }

    pub fn is_primitive(&self) -> bool {
        !(self.a.is_zero() && self.b.is_zero()) && self.a.gcd(&self.b).is_one()
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.a, -&self.b)
    }

    pub fn det(&self, rhs: &LatticeVector) -> BigInt {
        &self.a * &rhs.b - &self.b * &rhs.a
    }

    pub fn to_point(&self) -> Point {
        Point::new(Rational::from_bigint(self.a.clone()), Rational::from_bigint(self.b.clone()))
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Writes a nonzero rational vector as `lambda * direction` with `direction`
/// a primitive lattice vector and `lambda > 0`.
pub fn primitive_decompose(w: &Point) -> Result<(LatticeVector, Rational), Error> {
    if w.is_zero() {
        return Err(Error::ZeroVector);
    }
    // Clear denominators, then divide out the content.
    let scale = w.x.denom().lcm(w.y.denom());
    let ax = w.x.numer() * (&scale / w.x.denom());
    let ay = w.y.numer() * (&scale / w.y.denom());
    let g = ax.gcd(&ay);
    let dir = LatticeVector::new(&ax / &g, &ay / &g);
    let lambda = Rational::from_big(g, scale)?;
    debug_assert!(dir.is_primitive());
    debug_assert!(lambda.is_positive());
    Ok((dir, lambda))
}

/// Affine lattice map `x -> Mx + t` with integer `M`, `det M = +-1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnimodularMap {
    m: [[i64; 2]; 2],
    t: Point,
}

impl UnimodularMap {
    pub fn new(m: [[i64; 2]; 2], t: Point) -> Result<Self, Error> {
        let det = (m[0][0] as i128 * m[1][1] as i128) - (m[0][1] as i128 * m[1][0] as i128);
        if det != 1 && det != -1 {
            return Err(Error::NotUnimodular(det.clamp(i64::MIN as i128, i64::MAX as i128) as i64));
        }
        Ok(Self { m, t })
    }

    pub fn identity() -> Self {
        Self { m: [[1, 0], [0, 1]], t: Point::zero() }
    }

    pub fn translation(t: Point) -> Self {
        Self { m: [[1, 0], [0, 1]], t }
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.m
    }

    pub fn translation_part(&self) -> &Point {
        &self.t
    }

    pub fn det(&self) -> i64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn apply_point(&self, p: &Point) -> Point {
        let x = &p.x * &Rational::from_int(self.m[0][0])
            + &p.y * &Rational::from_int(self.m[0][1])
            + self.t.x.clone();
        let y = &p.x * &Rational::from_int(self.m[1][0])
            + &p.y * &Rational::from_int(self.m[1][1])
            + self.t.y.clone();
        Point::new(x, y)
    }

    /// Linear part applied to a vector (no translation).
    pub fn apply_vector(&self, v: &Point) -> Point {
        let x = &v.x * &Rational::from_int(self.m[0][0]) + &v.y * &Rational::from_int(self.m[0][1]);
        let y = &v.x * &Rational::from_int(self.m[1][0]) + &v.y * &Rational::from_int(self.m[1][1]);
        Point::new(x, y)
    }
}

/// Polygon edge with its primitive direction and lattice length.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Edge {
    pub start: Point,
    pub end: Point,
    pub direction: LatticeVector,
    pub lambda_length: Rational,
}

impl Edge {
    fn between(start: Point, end: Point) -> Result<Self, Error> {
        let (direction, lambda_length) = primitive_decompose(&end.sub(&start))?;
        Ok(Self { start, end, direction, lambda_length })
    }

    pub fn midpoint(&self) -> Point {
        self.start.midpoint(&self.end)
    }
}

/// A corner where the Delzant condition fails.
#[derive(Clone, Debug)]
pub struct DelzantViolation {
    pub index: usize,
    pub vertex: Point,
    /// Determinant of (direction to previous vertex, direction to next vertex).
    pub det: BigInt,
}

/// Strictly convex rational polygon, counterclockwise, with derived edges.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MomentPolygon {
    vertices: Vec<Point>,
    edges: Vec<Edge>,
}

impl MomentPolygon {
    /// Validates and builds a polygon. Clockwise input is reversed (keeping
    /// the first vertex first); duplicate consecutive points, collinear
    /// triples and non-convex chains are rejected.
    pub fn new(vertices: Vec<Point>) -> Result<Self, Error> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::TooFewVertices(n));
        }
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(Error::DuplicateVertex(i));
            }
        }

        let mut vertices = vertices;
        let doubled_area: Rational = (0..n)
            .map(|i| vertices[i].cross(&vertices[(i + 1) % n]))
            .sum();
        if doubled_area.is_negative() {
            vertices[1..].reverse();
        }

        for i in 0..n {
            let a = &vertices[i];
            let b = &vertices[(i + 1) % n];
            let c = &vertices[(i + 2) % n];
            let turn = b.sub(a).cross(&c.sub(b));
            if turn.is_zero() {
                return Err(Error::CollinearVertices((i + 1) % n));
            }
            if turn.is_negative() {
                return Err(Error::NonConvex);
            }
        }

        // All strict left turns can still wind around more than once; a
        // convex simple polygon's edge directions sweep one full turn.
        let winding = {
            let upper = |v: &Point| v.y.is_positive() || (v.y.is_zero() && v.x.is_positive());
            let dirs: Vec<Point> =
                (0..n).map(|i| vertices[(i + 1) % n].sub(&vertices[i])).collect();
            (0..n)
                .filter(|&i| !upper(&dirs[i]) && upper(&dirs[(i + 1) % n]))
                .count()
        };
        if winding != 1 {
            return Err(Error::NonConvex);
        }

        let edges = (0..n)
            .map(|i| Edge::between(vertices[i].clone(), vertices[(i + 1) % n].clone()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { vertices, edges })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Outgoing primitive directions (to previous vertex, to next vertex).
    fn corner_directions(&self, i: usize) -> (LatticeVector, LatticeVector) {
        let n = self.vertices.len();
        let to_prev = self.edges[(i + n - 1) % n].direction.neg();
        let to_next = self.edges[i].direction.clone();
        (to_prev, to_next)
    }

    /// Corners violating the Delzant condition, in vertex order.
    pub fn delzant_violations(&self) -> Vec<DelzantViolation> {
        (0..self.vertices.len())
            .filter_map(|i| {
                let (to_prev, to_next) = self.corner_directions(i);
                let det = to_prev.det(&to_next);
                if det.abs().is_one() {
                    None
                } else {
                    Some(DelzantViolation { index: i, vertex: self.vertices[i].clone(), det })
                }
            })
            .collect()
    }

    pub fn is_delzant(&self) -> bool {
        self.delzant_violations().is_empty()
    }

    fn require_delzant(&self) -> Result<(), Error> {
        match self.delzant_violations().into_iter().next() {
            None => Ok(()),
            Some(v) => Err(Error::NotDelzant {
                index: v.index,
                vertex: v.vertex.to_string(),
                det: v.det.to_string(),
            }),
        }
    }

    /// Vertex-wise affine lattice map; the result is revalidated (a
    /// reflection flips orientation and the vertex order is restored).
    pub fn apply_map(&self, map: &UnimodularMap) -> Result<MomentPolygon, Error> {
        MomentPolygon::new(self.vertices.iter().map(|v| map.apply_point(v)).collect())
    }

    /// Vertex-wise dilation by `c > 0`; rescales the polarization.
    pub fn scale(&self, c: &Rational) -> Result<MomentPolygon, Error> {
        if !c.is_positive() {
            return Err(Error::InvalidParameter(format!(
                "scale factor must be positive, got {c}"
            )));
        }
        MomentPolygon::new(self.vertices.iter().map(|v| v.scaled(c)).collect())
    }

    /// Chops the corner at `vertex_index`, replacing it by an edge of lattice
    /// length `eps`. Requires a Delzant polygon and `eps` strictly smaller
    /// than both adjacent edge lengths; the result is again Delzant, with one
    /// more vertex and area smaller by `eps^2/2`.
    pub fn blow_up(&self, vertex_index: usize, eps: &Rational) -> Result<MomentPolygon, Error> {
        let n = self.vertices.len();
        if vertex_index >= n {
            return Err(Error::VertexIndexOutOfRange { index: vertex_index, len: n });
        }
        if !eps.is_positive() {
            return Err(Error::InvalidParameter(format!(
                "blow-up size must be positive, got {eps}"
            )));
        }
        self.require_delzant()?;

        let prev_edge = &self.edges[(vertex_index + n - 1) % n];
        let next_edge = &self.edges[vertex_index];
        let limit = prev_edge.lambda_length.clone().min(next_edge.lambda_length.clone());
        if *eps >= limit {
            return Err(Error::BlowUpTooLarge { eps: eps.to_string(), limit: limit.to_string() });
        }

        let v = &self.vertices[vertex_index];
        let (to_prev, to_next) = self.corner_directions(vertex_index);
        let a = v.add(&to_prev.to_point().scaled(eps));
        let b = v.add(&to_next.to_point().scaled(eps));

        let mut vertices = Vec::with_capacity(n + 1);
        vertices.extend_from_slice(&self.vertices[..vertex_index]);
        vertices.push(a);
        vertices.push(b);
        vertices.extend_from_slice(&self.vertices[vertex_index + 1..]);
        let out = MomentPolygon::new(vertices)?;
        debug_assert!(out.is_delzant());
        Ok(out)
    }
}

fn positive(name: &str, value: &Rational) -> Result<(), Error> {
    if value.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("nonpositive parameter {name} = {value}")))
    }
}

/// Triangle `(0,0), (a,0), (0,a)`: the projective plane with line class
/// scaled by `a`.
pub fn gen_cp2(a: &Rational) -> Result<MomentPolygon, Error> {
    positive("a", a)?;
    MomentPolygon::new(vec![
        Point::zero(),
        Point::new(a.clone(), Rational::zero()),
        Point::new(Rational::zero(), a.clone()),
    ])
}

/// Rectangle `[0,a] x [0,b]`: a product of two projective lines.
pub fn gen_p1xp1(a: &Rational, b: &Rational) -> Result<MomentPolygon, Error> {
    positive("a", a)?;
    positive("b", b)?;
    MomentPolygon::new(vec![
        Point::zero(),
        Point::new(a.clone(), Rational::zero()),
        Point::new(a.clone(), b.clone()),
        Point::new(Rational::zero(), b.clone()),
    ])
}

/// Trapezoid `(0,0), (alpha+k, 0), (alpha, 1), (0, 1)`: the k-th Hirzebruch
/// surface with fiber area normalized to 1 (a rectangle when k = 0).
pub fn gen_hirzebruch(k: u32, alpha: &Rational) -> Result<MomentPolygon, Error> {
    positive("alpha", alpha)?;
    let k_rat = Rational::from_int(k as i64);
    MomentPolygon::new(vec![
        Point::zero(),
        Point::new(alpha + &k_rat, Rational::zero()),
        Point::new(alpha.clone(), Rational::one()),
        Point::new(Rational::zero(), Rational::one()),
    ])
}

/// Pentagon `(1,0), (1+alpha,0), (1+alpha,1+beta), (0,1+beta), (0,1)`: the
/// two-point blow-up of the projective plane, normalized so the corner cut
/// between `(0,1)` and `(1,0)` has lattice length 1.
pub fn gen_two_point_blowup(alpha: &Rational, beta: &Rational) -> Result<MomentPolygon, Error> {
    positive("alpha", alpha)?;
    positive("beta", beta)?;
    let one = Rational::one();
    MomentPolygon::new(vec![
        Point::new(one.clone(), Rational::zero()),
        Point::new(&one + alpha, Rational::zero()),
        Point::new(&one + alpha, &one + beta),
        Point::new(Rational::zero(), &one + beta),
        Point::new(Rational::zero(), one),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn unit_triangle() -> MomentPolygon {
        gen_cp2(&Rational::one()).unwrap()
    }

    fn unit_square() -> MomentPolygon {
        gen_p1xp1(&Rational::one(), &Rational::one()).unwrap()
    }

    #[test]
    fn primitive_decompose_examples() {
        let (d, l) = primitive_decompose(&Point::ints(4, 6)).unwrap();
        assert_eq!(d, LatticeVector::new(2, 3));
        assert_eq!(l, rat(2, 1));

        let (d, l) = primitive_decompose(&Point::ints(0, 5)).unwrap();
        assert_eq!(d, LatticeVector::new(0, 1));
        assert_eq!(l, rat(5, 1));

        let (d, l) = primitive_decompose(&Point::new(rat(1, 2), rat(-1, 2))).unwrap();
        assert_eq!(d, LatticeVector::new(1, -1));
        assert_eq!(l, rat(1, 2));

        assert!(matches!(primitive_decompose(&Point::zero()), Err(Error::ZeroVector)));
    }

    #[test]
    fn build_unit_triangle() {
        let p = unit_triangle();
        assert_eq!(p.vertex_count(), 3);
        for e in p.edges() {
            assert_eq!(e.lambda_length, Rational::one());
        }
    }

    #[test]
    fn clockwise_input_is_reversed() {
        let cw = MomentPolygon::new(vec![Point::ints(0, 0), Point::ints(0, 1), Point::ints(1, 0)])
            .unwrap();
        assert_eq!(cw, unit_triangle());
        assert_eq!(cw.vertices()[0], Point::ints(0, 0));
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(matches!(
            MomentPolygon::new(vec![Point::ints(0, 0), Point::ints(1, 0)]),
            Err(Error::TooFewVertices(2))
        ));
        assert!(matches!(
            MomentPolygon::new(vec![
                Point::ints(0, 0),
                Point::ints(1, 0),
                Point::ints(2, 0),
                Point::ints(0, 1),
            ]),
            Err(Error::CollinearVertices(1))
        ));
        assert!(matches!(
            MomentPolygon::new(vec![
                Point::ints(0, 0),
                Point::ints(0, 0),
                Point::ints(1, 0),
                Point::ints(0, 1),
            ]),
            Err(Error::DuplicateVertex(0))
        ));
        // Bow-tie: left turns fail somewhere or winding is wrong.
        assert!(MomentPolygon::new(vec![
            Point::ints(0, 0),
            Point::ints(1, 1),
            Point::ints(1, 0),
            Point::ints(0, 1),
        ])
        .is_err());
    }

    #[test]
    fn delzant_examples() {
        let p = gen_cp2(&rat(2, 1)).unwrap();
        assert!(p.is_delzant());

        let bad = MomentPolygon::new(vec![Point::ints(0, 0), Point::ints(1, 0), Point::ints(0, 2)])
            .unwrap();
        let violations = bad.delzant_violations();
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].vertex, Point::ints(1, 0));
        assert_eq!(violations[0].det, BigInt::from(-2));

        assert!(unit_square().is_delzant());
    }

    #[test]
    fn apply_map_examples() {
        let shear = UnimodularMap::new([[1, 1], [0, 1]], Point::zero()).unwrap();
        let sheared = unit_triangle().apply_map(&shear).unwrap();
        assert_eq!(
            sheared.vertices(),
            &[Point::ints(0, 0), Point::ints(1, 0), Point::ints(1, 1)]
        );
        assert!(sheared.is_delzant());

        let translated = unit_triangle()
            .apply_map(&UnimodularMap::translation(Point::ints(5, -3)))
            .unwrap();
        assert_eq!(translated.vertices()[0], Point::ints(5, -3));
        assert_eq!(translated.edges()[0].lambda_length, Rational::one());

        assert!(UnimodularMap::new([[2, 0], [0, 1]], Point::zero()).is_err());
    }

    #[test]
    fn reflection_keeps_polygon_valid() {
        let swap = UnimodularMap::new([[0, 1], [1, 0]], Point::zero()).unwrap();
        assert_eq!(swap.det(), -1);
        let p = gen_hirzebruch(2, &rat(1, 1)).unwrap();
        let q = p.apply_map(&swap).unwrap();
        assert_eq!(q.vertex_count(), 4);
        assert!(q.is_delzant());
    }

    #[test]
    fn scale_examples() {
        let p = unit_triangle().scale(&rat(2, 1)).unwrap();
        assert_eq!(p, gen_cp2(&rat(2, 1)).unwrap());
        assert_eq!(unit_triangle().scale(&Rational::one()).unwrap(), unit_triangle());
        assert!(unit_triangle().scale(&rat(-1, 2)).is_err());

        let perim = |p: &MomentPolygon| -> Rational {
            p.edges().iter().map(|e| e.lambda_length.clone()).sum()
        };
        let p = gen_two_point_blowup(&rat(1, 3), &rat(5, 2)).unwrap();
        let c = rat(7, 4);
        assert_eq!(perim(&p.scale(&c).unwrap()), perim(&p) * c);
    }

    #[test]
    fn generator_examples() {
        let t = gen_cp2(&rat(1, 3)).unwrap();
        for e in t.edges() {
            assert_eq!(e.lambda_length, rat(1, 3));
        }

        let h = gen_hirzebruch(1, &Rational::one()).unwrap();
        assert_eq!(
            h.vertices(),
            &[Point::ints(0, 0), Point::ints(2, 0), Point::ints(1, 1), Point::ints(0, 1)]
        );

        let r = gen_hirzebruch(0, &rat(3, 1)).unwrap();
        assert_eq!(r, gen_p1xp1(&rat(3, 1), &Rational::one()).unwrap());

        assert!(gen_hirzebruch(2, &Rational::one()).unwrap().is_delzant());
        assert!(gen_two_point_blowup(&rat(2, 1), &rat(1, 2)).unwrap().is_delzant());
        assert!(gen_cp2(&Rational::zero()).is_err());
    }

    #[test]
    fn blow_up_examples() {
        let p = gen_cp2(&rat(2, 1)).unwrap();
        let q = p.blow_up(0, &Rational::one()).unwrap();
        assert_eq!(
            q.vertices(),
            &[Point::ints(0, 1), Point::ints(1, 0), Point::ints(2, 0), Point::ints(0, 2)]
        );
        assert!(q.is_delzant());

        assert!(matches!(
            p.blow_up(0, &rat(2, 1)),
            Err(Error::BlowUpTooLarge { .. })
        ));
        assert!(matches!(
            p.blow_up(7, &rat(1, 2)),
            Err(Error::VertexIndexOutOfRange { .. })
        ));

        let bad = MomentPolygon::new(vec![Point::ints(0, 0), Point::ints(1, 0), Point::ints(0, 2)])
            .unwrap();
        assert!(matches!(bad.blow_up(0, &rat(1, 4)), Err(Error::NotDelzant { .. })));

        // Chopping any square corner by 1/2 leaves a Delzant pentagon of area 7/8.
        for idx in 0..4 {
            let chopped = unit_square().blow_up(idx, &rat(1, 2)).unwrap();
            assert_eq!(chopped.vertex_count(), 5);
            assert!(chopped.is_delzant());
            assert_eq!(crate::measures::area(&chopped), rat(7, 8));
        }
    }

    #[test]
    fn edge_decomposition_round_trips() {
        let p = gen_two_point_blowup(&rat(3, 2), &rat(1, 3)).unwrap();
        for e in p.edges() {
            let rebuilt = e.direction.to_point().scaled(&e.lambda_length);
            assert_eq!(e.end.sub(&e.start), rebuilt);
            assert!(e.direction.is_primitive());
            assert!(e.lambda_length.is_positive());
        }
    }

    #[test]
    fn rebuild_from_vertices_is_identity() {
        let p = gen_hirzebruch(3, &rat(7, 5)).unwrap();
        let q = MomentPolygon::new(p.vertices().to_vec()).unwrap();
        assert_eq!(p, q);
    }

    proptest! {
        #[test]
        fn blow_up_bookkeeping(seed in 0u64..500) {
            let base = crate::sampling::random_delzant_polygon(seed, 3);
            let eps_num = 1 + (seed % 3) as i64;
            let idx = (seed % base.vertex_count() as u64) as usize;
            let n = base.vertex_count();
            let prev = &base.edges()[(idx + n - 1) % n].lambda_length;
            let next = &base.edges()[idx].lambda_length;
            let eps = prev.clone().min(next.clone()) * rat(eps_num, 4);
            let blown = base.blow_up(idx, &eps).unwrap();
            prop_assert_eq!(blown.vertex_count(), base.vertex_count() + 1);
            let area = |p: &MomentPolygon| crate::measures::area(p);
            prop_assert_eq!(area(&blown), area(&base) - eps.pow(2) * rat(1, 2));
            prop_assert!(blown.is_delzant());
        }
    }
}
