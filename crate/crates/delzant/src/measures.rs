//! Measure-theoretic data of a moment polygon: area, lattice perimeter,
//! interior and boundary barycenters, their displacement, and the
//! moment-of-inertia matrix of the interior.
//!
//! Interior integrals go through one exact kernel: a triangle fan from the
//! first vertex and closed-form integrals of `1, x, y, x^2, xy, y^2` over a
//! triangle. Boundary integrals use the midpoint identity, exact for linear
//! integrands. A Monte-Carlo oracle (feature `oracle`) provides an
//! independent statistical cross-check and never feeds the exact paths.

use std::fmt;

use crate::error::Error;
use crate::polygon::{MomentPolygon, Point};
use crate::rational::{rat, Rational};

/// Symmetric 2x2 rational matrix; positive definite for every valid polygon.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymmetricMatrix {
    pub xx: Rational,
    pub xy: Rational,
    pub yy: Rational,
}

impl SymmetricMatrix {
    pub fn det(&self) -> Rational {
        &self.xx * &self.yy - &self.xy * &self.xy
    }

    pub fn trace(&self) -> Rational {
        &self.xx + &self.yy
    }

    /// `v^T M^{-1} v`, with the inverse taken via adjugate over determinant.
    pub fn inv_quadratic_form(&self, v: &Point) -> Result<Rational, Error> {
        let adjugate = &self.yy * &v.x * &v.x - rat(2, 1) * &self.xy * &v.x * &v.y
            + &self.xx * &v.y * &v.y;
        adjugate.checked_div(&self.det())
    }

    /// Congruence transform `M Pi M^T` for an integer matrix `m`.
    pub fn congruence(&self, m: [[i64; 2]; 2]) -> SymmetricMatrix {
        let [[a, b], [c, d]] = m;
        let (a, b, c, d) = (
            Rational::from_int(a),
            Rational::from_int(b),
            Rational::from_int(c),
            Rational::from_int(d),
        );
        SymmetricMatrix {
            xx: &a * &a * &self.xx + rat(2, 1) * &a * &b * &self.xy + &b * &b * &self.yy,
            xy: &a * &c * &self.xx + (&a * &d + &b * &c) * &self.xy + &b * &d * &self.yy,
            yy: &c * &c * &self.xx + rat(2, 1) * &c * &d * &self.xy + &d * &d * &self.yy,
        }
    }

    pub fn scaled(&self, c: &Rational) -> SymmetricMatrix {
        SymmetricMatrix { xx: &self.xx * c, xy: &self.xy * c, yy: &self.yy * c }
    }
}

impl fmt::Display for SymmetricMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.xx, self.xy, self.xy, self.yy)
    }
}

/// Exact integral of `x^i y^j` over a triangle `(a, b, c)` listed
/// counterclockwise, for `i + j <= 2`.
fn triangle_moment(a: &Point, b: &Point, c: &Point, i: u32, j: u32) -> Rational {
    let jac = b.sub(a).cross(&c.sub(a));
    let sixth = rat(1, 6);
    match (i, j) {
        (0, 0) => jac * rat(1, 2),
        (1, 0) => jac * sixth * (&a.x + &b.x + &c.x),
        (0, 1) => jac * sixth * (&a.y + &b.y + &c.y),
        (2, 0) => {
            jac * rat(1, 12)
                * (&a.x * &a.x + &b.x * &b.x + &c.x * &c.x + &a.x * &b.x + &a.x * &c.x
                    + &b.x * &c.x)
        }
        (0, 2) => {
            jac * rat(1, 12)
                * (&a.y * &a.y + &b.y * &b.y + &c.y * &c.y + &a.y * &b.y + &a.y * &c.y
                    + &b.y * &c.y)
        }
        (1, 1) => {
            let sum_x = &a.x + &b.x + &c.x;
            let sum_y = &a.y + &b.y + &c.y;
            let mixed = &a.x * &a.y + &b.x * &b.y + &c.x * &c.y;
            jac * rat(1, 24) * (sum_x * sum_y + mixed)
        }
        _ => unreachable!("only moments of total degree <= 2 are defined"),
    }
}

/// Exact integral of `x^i y^j` over the polygon interior, `i + j <= 2`.
pub fn monomial_moment(p: &MomentPolygon, i: u32, j: u32) -> Rational {
    assert!(i + j <= 2, "monomial_moment is defined for total degree <= 2");
    let vs = p.vertices();
    (1..vs.len() - 1)
        .map(|k| triangle_moment(&vs[0], &vs[k], &vs[k + 1], i, j))
        .sum()
}

/// Euclidean area of the interior.
pub fn area(p: &MomentPolygon) -> Rational {
    monomial_moment(p, 0, 0)
}

/// Total lattice length of the boundary (sum of edge lattice lengths).
pub fn lambda_perimeter(p: &MomentPolygon) -> Rational {
    p.edges().iter().map(|e| e.lambda_length.clone()).sum()
}

/// Area centroid of the interior.
pub fn interior_barycenter(p: &MomentPolygon) -> Point {
    let a = area(p);
    Point::new(
        monomial_moment(p, 1, 0).checked_div(&a).expect("valid polygon has positive area"),
        monomial_moment(p, 0, 1).checked_div(&a).expect("valid polygon has positive area"),
    )
}

/// Barycenter of the boundary in the lattice length measure; each edge
/// contributes its midpoint weighted by its lattice length.
pub fn boundary_barycenter(p: &MomentPolygon) -> Point {
    let perimeter = lambda_perimeter(p);
    let weighted = p
        .edges()
        .iter()
        .map(|e| e.midpoint().scaled(&e.lambda_length))
        .fold(Point::zero(), |acc, m| acc.add(&m));
    weighted.scaled(&perimeter.recip().expect("perimeter is positive"))
}

/// Boundary barycenter minus interior barycenter.
pub fn displacement(p: &MomentPolygon) -> Point {
    boundary_barycenter(p).sub(&interior_barycenter(p))
}

/// Second central moments of the interior.
pub fn inertia_matrix(p: &MomentPolygon) -> SymmetricMatrix {
    let a = area(p);
    let bc = interior_barycenter(p);
    SymmetricMatrix {
        xx: monomial_moment(p, 2, 0) - &a * &bc.x * &bc.x,
        xy: monomial_moment(p, 1, 1) - &a * &bc.x * &bc.y,
        yy: monomial_moment(p, 0, 2) - &a * &bc.y * &bc.y,
    }
}

/// Cached bundle of all measures of one polygon.
#[derive(Clone, Debug)]
pub struct PolygonMeasures {
    pub area: Rational,
    pub lambda_perimeter: Rational,
    pub interior_barycenter: Point,
    pub boundary_barycenter: Point,
    pub displacement: Point,
    pub inertia: SymmetricMatrix,
}

impl PolygonMeasures {
    pub fn compute(p: &MomentPolygon) -> Self {
        let interior = interior_barycenter(p);
        let boundary = boundary_barycenter(p);
        let displacement = boundary.sub(&interior);
        Self {
            area: area(p),
            lambda_perimeter: lambda_perimeter(p),
            interior_barycenter: interior,
            boundary_barycenter: boundary,
            displacement,
            inertia: inertia_matrix(p),
        }
    }

    /// `D^T Pi^{-1} D`, the quadratic form entering the Futaki norm.
    pub fn quad_form(&self) -> Rational {
        self.inertia
            .inv_quadratic_form(&self.displacement)
            .expect("inertia matrix of a valid polygon is invertible")
    }

    /// CSV header matching [`PolygonMeasures::csv_row`].
    pub fn csv_header() -> &'static str {
        "area,perimeter,xbar1,xbar2,bx1,bx2,d1,d2,pi11,pi12,pi22"
    }

    /// One CSV row, every field an exact `p/q`.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.area,
            self.lambda_perimeter,
            self.interior_barycenter.x,
            self.interior_barycenter.y,
            self.boundary_barycenter.x,
            self.boundary_barycenter.y,
            self.displacement.x,
            self.displacement.y,
            self.inertia.xx,
            self.inertia.xy,
            self.inertia.yy,
        )
    }
}

/// Monte-Carlo estimate of a monomial moment: verification only.
#[cfg(any(test, feature = "oracle"))]
pub mod oracle {
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use crate::polygon::MomentPolygon;

    /// Rejection-sampled estimate of the integral of `x^i y^j` over the
    /// polygon, with its standard error. Deterministic for a fixed seed.
    pub fn mc_moment(
        p: &MomentPolygon,
        i: u32,
        j: u32,
        samples: u64,
        seed: u64,
    ) -> (f64, f64) {
        let [est] = mc_moments(p, &[(i, j)], samples, seed).try_into().unwrap();
        est
    }

    /// Same as [`mc_moment`] for several monomials sharing one sample stream.
    pub fn mc_moments(
        p: &MomentPolygon,
        monomials: &[(u32, u32)],
        samples: u64,
        seed: u64,
    ) -> Vec<(f64, f64)> {
        assert!(samples >= 1000, "need at least 1000 samples");
        let vs: Vec<(f64, f64)> =
            p.vertices().iter().map(|v| (v.x.to_f64(), v.y.to_f64())).collect();
        let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (vs[0].0, vs[0].0, vs[0].1, vs[0].1);
        for &(x, y) in &vs[1..] {
            lo_x = lo_x.min(x);
            hi_x = hi_x.max(x);
            lo_y = lo_y.min(y);
            hi_y = hi_y.max(y);
        }
        let box_area = (hi_x - lo_x) * (hi_y - lo_y);

        let inside = |x: f64, y: f64| {
            (0..vs.len()).all(|k| {
                let (ax, ay) = vs[k];
                let (bx, by) = vs[(k + 1) % vs.len()];
                (bx - ax) * (y - ay) - (by - ay) * (x - ax) >= 0.0
            })
        };

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sum = vec![0.0f64; monomials.len()];
        let mut sum_sq = vec![0.0f64; monomials.len()];
        for _ in 0..samples {
            let x = rng.gen_range(lo_x..hi_x);
            let y = rng.gen_range(lo_y..hi_y);
            if inside(x, y) {
                for (m, &(i, j)) in monomials.iter().enumerate() {
                    let v = x.powi(i as i32) * y.powi(j as i32);
                    sum[m] += v;
                    sum_sq[m] += v * v;
                }
            }
        }

        let n = samples as f64;
        monomials
            .iter()
            .enumerate()
            .map(|(m, _)| {
                let mean = sum[m] / n;
                let var = (sum_sq[m] / n - mean * mean).max(0.0);
                (box_area * mean, box_area * (var / n).sqrt())
            })
            .collect()
    }
}
