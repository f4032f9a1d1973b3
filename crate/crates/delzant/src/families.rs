//! Parametrized families of moment polygons inside the Kahler cone, their
//! closed-form action profiles, grid scans, and derivative-free minimization
//! of the virtual action to locate critical (Bach-flat candidate) classes.
//!
//! The built-in families are the Hirzebruch trapezoids (fiber area 1, one
//! parameter), the two-point blow-up pentagons (exceptional area 1, two
//! parameters) and their symmetric diagonal, plus generic corner-chop
//! families over any Delzant base polygon. Exact evaluation always goes
//! through the polygon pipeline; the closed forms are kept as independent
//! algebraic routes and the two are required to agree identically.

use std::fmt;

use crate::error::Error;
use crate::invariants::virtual_action;
use crate::polygon::{gen_hirzebruch, gen_two_point_blowup, MomentPolygon};
use crate::rational::{rat, Rational};

// ---------------------------------------------------------------------------
// Exact polynomials (internal helpers for the closed forms).
// ---------------------------------------------------------------------------

/// Dense univariate polynomial with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Poly {
    coeffs: Vec<Rational>, // coeffs[i] multiplies x^i
}

impl Poly {
    fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Rational::zero());
        }
        Self { coeffs }
    }

    fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_int(c)).collect())
    }

    fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.clone();
        }
        acc
    }

    fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(Rational::to_f64).collect()
    }

    fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::new(vec![Rational::zero()]);
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Rational::from_int(i as i64) * c.clone())
                .collect(),
        )
    }

    fn mul(&self, rhs: &Poly) -> Poly {
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    fn sub(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |p: &Poly, i: usize| p.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
        Poly::new((0..n).map(|i| get(self, i) - get(rhs, i)).collect())
    }

    /// Numerator of the derivative of `self/den`, i.e. `self' den - self den'`.
    fn quotient_derivative_numerator(&self, den: &Poly) -> Poly {
        self.derivative().mul(den).sub(&self.mul(&den.derivative()))
    }
}

/// `(1 + x)^n`.
fn binomial_power(n: u32) -> Poly {
    let mut p = Poly::from_ints(&[1]);
    for _ in 0..n {
        p = p.mul(&Poly::from_ints(&[1, 1]));
    }
    p
}

/// Sparse bivariate polynomial in `(alpha, beta)`.
#[derive(Clone, Debug)]
struct Poly2 {
    terms: Vec<(u32, u32, Rational)>,
}

impl Poly2 {
    /// Sum of `scalar * alpha^pow * q(beta)` groups.
    fn from_alpha_groups(groups: Vec<(u32, i64, Poly)>) -> Self {
        let mut terms = Vec::new();
        for (alpha_pow, scalar, q) in groups {
            let s = Rational::from_int(scalar);
            for (beta_pow, c) in q.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    terms.push((alpha_pow, beta_pow as u32, &s * c));
                }
            }
        }
        Self { terms }
    }

    fn scaled(&self, c: &Rational) -> Poly2 {
        Poly2 { terms: self.terms.iter().map(|(i, j, a)| (*i, *j, a * c)).collect() }
    }

    fn eval(&self, alpha: &Rational, beta: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|(i, j, c)| c * &alpha.pow(*i) * beta.pow(*j))
            .sum()
    }

    fn terms_f64(&self) -> Vec<(i32, i32, f64)> {
        self.terms.iter().map(|(i, j, c)| (*i as i32, *j as i32, c.to_f64())).collect()
    }

    fn partial_alpha(&self) -> Poly2 {
        Poly2 {
            terms: self
                .terms
                .iter()
                .filter(|(i, _, _)| *i > 0)
                .map(|(i, j, c)| (i - 1, *j, Rational::from_int(*i as i64) * c.clone()))
                .collect(),
        }
    }

    fn partial_beta(&self) -> Poly2 {
        Poly2 {
            terms: self
                .terms
                .iter()
                .filter(|(_, j, _)| *j > 0)
                .map(|(i, j, c)| (*i, j - 1, Rational::from_int(*j as i64) * c.clone()))
                .collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Closed forms.
// ---------------------------------------------------------------------------

/// Numerator and denominator of the Hirzebruch action profile in `alpha`:
/// `(2a^3 + (4+3k)a^2 + 2(1+k)^2 a + k(k^2+2)/2) / (a^2 + k a + k^2/6)`.
fn hirzebruch_polys(k: u32) -> (Poly, Poly) {
    let k = Rational::from_int(k as i64);
    let num = Poly::new(vec![
        &k * (&k * &k + rat(2, 1)) * rat(1, 2),
        rat(2, 1) * (Rational::one() + &k).pow(2),
        rat(4, 1) + rat(3, 1) * &k,
        rat(2, 1),
    ]);
    let den = Poly::new(vec![&k * &k * rat(1, 6), k, Rational::one()]);
    (num, den)
}

/// Closed-form virtual action of the k-th Hirzebruch family at `alpha > 0`.
pub fn hirzebruch_closed_form(k: u32, alpha: &Rational) -> Result<Rational, Error> {
    if !alpha.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "nonpositive parameter alpha = {alpha}"
        )));
    }
    let (num, den) = hirzebruch_polys(k);
    num.eval(alpha).checked_div(&den.eval(alpha))
}

fn two_point_polys() -> (Poly2, Poly2) {
    let num = Poly2::from_alpha_groups(vec![
        (0, 1, Poly::from_ints(&[3, 28, 96, 168, 164, 80, 16])),
        (6, 16, binomial_power(4)),
        (5, 16, Poly::from_ints(&[5, 24, 43, 37, 15, 2])),
        (4, 4, Poly::from_ints(&[41, 228, 478, 496, 263, 60, 4])),
        (3, 8, Poly::from_ints(&[21, 135, 326, 392, 248, 74, 8])),
        (1, 4, Poly::from_ints(&[7, 58, 176, 270, 228, 96, 16])),
        (2, 4, Poly::from_ints(&[24, 176, 479, 652, 478, 172, 24])),
    ])
    .scaled(&rat(3, 1));
    let den = Poly2::from_alpha_groups(vec![
        (0, 1, Poly::from_ints(&[1, 10, 36, 64, 60, 24])),
        (5, 24, binomial_power(5)),
        (4, 12, binomial_power(2).mul(&Poly::from_ints(&[5, 20, 23, 10]))),
        (3, 16, Poly::from_ints(&[4, 28, 72, 90, 57, 15])),
        (2, 12, Poly::from_ints(&[3, 24, 69, 96, 68, 20])),
        (1, 2, Poly::from_ints(&[5, 45, 144, 224, 180, 60])),
    ]);
    (num, den)
}

/// Closed-form virtual action of the two-point blow-up family. Defined for
/// `alpha, beta >= 0`; the boundary values are the blow-down limits.
pub fn two_point_closed_form(alpha: &Rational, beta: &Rational) -> Result<Rational, Error> {
    if alpha.is_negative() || beta.is_negative() {
        return Err(Error::InvalidParameter(format!(
            "negative parameter ({alpha}, {beta})"
        )));
    }
    let (num, den) = two_point_polys();
    num.eval(alpha, beta).checked_div(&den.eval(alpha, beta))
}

fn symmetric_two_point_polys() -> (Poly, Poly) {
    (
        Poly::from_ints(&[9, 96, 396, 840, 954, 528, 96]),
        Poly::from_ints(&[1, 12, 54, 120, 138, 72, 12]),
    )
}

/// Closed-form virtual action on the symmetric diagonal `alpha = beta > 0`
/// of the two-point family.
pub fn symmetric_two_point_closed_form(alpha: &Rational) -> Result<Rational, Error> {
    if !alpha.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "nonpositive parameter alpha = {alpha}"
        )));
    }
    let (num, den) = symmetric_two_point_polys();
    num.eval(alpha).checked_div(&den.eval(alpha))
}

// ---------------------------------------------------------------------------
// Family specifications.
// ---------------------------------------------------------------------------

/// Open interval `(lo, hi)` with `hi = None` meaning unbounded above.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Option<Rational>,
}

impl Interval {
    fn positive_ray() -> Self {
        Self { lo: Rational::zero(), hi: None }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        x > &self.lo && self.hi.as_ref().is_none_or(|hi| x < hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.hi {
            Some(hi) => write!(f, "({}, {})", self.lo, hi),
            None => write!(f, "({}, inf)", self.lo),
        }
    }
}

#[derive(Clone, Debug)]
enum FamilyKind {
    Hirzebruch { k: u32 },
    TwoPoint,
    SymmetricTwoPoint,
    /// Corner chops of a Delzant base: each entry assigns a chop at a base
    /// vertex to one of the family parameters.
    Chop { base: MomentPolygon, chops: Vec<(usize, usize)> },
}

/// A parametrized curve or surface of Delzant polygons.
#[derive(Clone, Debug)]
pub struct FamilySpec {
    kind: FamilyKind,
    domain: Vec<Interval>,
}

impl FamilySpec {
    pub fn hirzebruch(k: u32) -> Self {
        Self { kind: FamilyKind::Hirzebruch { k }, domain: vec![Interval::positive_ray()] }
    }

    pub fn two_point() -> Self {
        Self {
            kind: FamilyKind::TwoPoint,
            domain: vec![Interval::positive_ray(), Interval::positive_ray()],
        }
    }

    pub fn symmetric_two_point() -> Self {
        Self { kind: FamilyKind::SymmetricTwoPoint, domain: vec![Interval::positive_ray()] }
    }

    /// Corner-chop family over `base`. `chops` assigns `(vertex index,
    /// parameter index)`; vertex indices must be distinct, parameter indices
    /// must cover `0..dimension` with dimension 1 or 2. Each parameter's
    /// domain is bounded by half the smallest adjacent edge length over its
    /// vertices, which keeps every chop strictly admissible even when chopped
    /// corners share an edge.
    pub fn chop(base: MomentPolygon, chops: Vec<(usize, usize)>) -> Result<Self, Error> {
        if chops.is_empty() {
            return Err(Error::InvalidParameter("chop family needs at least one chop".into()));
        }
        if !base.is_delzant() {
            return Err(Error::InvalidParameter("chop family base must be Delzant".into()));
        }
        let dimension = 1 + chops.iter().map(|&(_, p)| p).max().unwrap_or(0);
        if dimension > 2 {
            return Err(Error::InvalidParameter("family dimension is 1 or 2".into()));
        }
        let n = base.vertex_count();
        for (i, &(v, _)) in chops.iter().enumerate() {
            if v >= n {
                return Err(Error::VertexIndexOutOfRange { index: v, len: n });
            }
            if chops[..i].iter().any(|&(w, _)| w == v) {
                return Err(Error::InvalidParameter(format!("vertex {v} chopped twice")));
            }
        }
        for p in 0..dimension {
            if !chops.iter().any(|&(_, q)| q == p) {
                return Err(Error::InvalidParameter(format!("parameter {p} is unused")));
            }
        }

        let mut domain = Vec::with_capacity(dimension);
        for p in 0..dimension {
            let mut bound: Option<Rational> = None;
            for &(v, q) in &chops {
                if q != p {
                    continue;
                }
                let prev = &base.edges()[(v + n - 1) % n].lambda_length;
                let next = &base.edges()[v].lambda_length;
                let half = prev.clone().min(next.clone()) * rat(1, 2);
                bound = Some(match bound {
                    None => half,
                    Some(b) => b.min(half),
                });
            }
            domain.push(Interval { lo: Rational::zero(), hi: bound });
        }
        Ok(Self { kind: FamilyKind::Chop { base, chops }, domain })
    }

    pub fn dimension(&self) -> usize {
        self.domain.len()
    }

    pub fn domain(&self) -> &[Interval] {
        &self.domain
    }

    pub fn param_names(&self) -> Vec<String> {
        match &self.kind {
            FamilyKind::Hirzebruch { .. } | FamilyKind::SymmetricTwoPoint => vec!["alpha".into()],
            FamilyKind::TwoPoint => vec!["alpha".into(), "beta".into()],
            FamilyKind::Chop { .. } => {
                (0..self.dimension()).map(|i| format!("eps{i}")).collect()
            }
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            FamilyKind::Hirzebruch { k } => format!("hirzebruch {k}"),
            FamilyKind::TwoPoint => "twopoint".into(),
            FamilyKind::SymmetricTwoPoint => "symtwopoint".into(),
            FamilyKind::Chop { base, chops } => format!(
                "chop of {}-gon at vertices {:?}",
                base.vertex_count(),
                chops.iter().map(|&(v, _)| v).collect::<Vec<_>>()
            ),
        }
    }

    fn check_params(&self, params: &[Rational]) -> Result<(), Error> {
        if params.len() != self.dimension() {
            return Err(Error::InvalidParameter(format!(
                "family has {} parameter(s), got {}",
                self.dimension(),
                params.len()
            )));
        }
        let names = self.param_names();
        for ((value, interval), name) in params.iter().zip(&self.domain).zip(names) {
            if !interval.contains(value) {
                return Err(Error::ParameterOutsideDomain {
                    name,
                    value: value.to_string(),
                    domain: interval.to_string(),
                });
            }
        }
        Ok(())
    }

    /// The polygon at a parameter point inside the domain.
    pub fn polygon_at(&self, params: &[Rational]) -> Result<MomentPolygon, Error> {
        self.check_params(params)?;
        match &self.kind {
            FamilyKind::Hirzebruch { k } => gen_hirzebruch(*k, &params[0]),
            FamilyKind::TwoPoint => gen_two_point_blowup(&params[0], &params[1]),
            FamilyKind::SymmetricTwoPoint => gen_two_point_blowup(&params[0], &params[0]),
            FamilyKind::Chop { base, chops } => {
                let mut ordered = chops.clone();
                ordered.sort_by_key(|&(vertex, _)| std::cmp::Reverse(vertex));
                let mut polygon = base.clone();
                for (vertex, param) in ordered {
                    polygon = polygon.blow_up(vertex, &params[param])?;
                }
                Ok(polygon)
            }
        }
    }

    /// Exact virtual action through the polygon pipeline.
    pub fn eval_exact(&self, params: &[Rational]) -> Result<Rational, Error> {
        Ok(virtual_action(&self.polygon_at(params)?))
    }

    /// Exact closed-form action where one exists (built-in families).
    pub fn closed_form(&self, params: &[Rational]) -> Option<Result<Rational, Error>> {
        match &self.kind {
            FamilyKind::Hirzebruch { k } => Some(hirzebruch_closed_form(*k, &params[0])),
            FamilyKind::TwoPoint => Some(two_point_closed_form(&params[0], &params[1])),
            FamilyKind::SymmetricTwoPoint => {
                Some(symmetric_two_point_closed_form(&params[0]))
            }
            FamilyKind::Chop { .. } => None,
        }
    }

    /// Exact gradient of the closed form, where one exists.
    pub fn exact_derivative(&self, params: &[Rational]) -> Option<Vec<Rational>> {
        match &self.kind {
            FamilyKind::Hirzebruch { k } => {
                let (num, den) = hirzebruch_polys(*k);
                Some(vec![quotient_derivative(&num, &den, &params[0])])
            }
            FamilyKind::SymmetricTwoPoint => {
                let (num, den) = symmetric_two_point_polys();
                Some(vec![quotient_derivative(&num, &den, &params[0])])
            }
            FamilyKind::TwoPoint => {
                let (num, den) = two_point_polys();
                let (a, b) = (&params[0], &params[1]);
                let n = num.eval(a, b);
                let d = den.eval(a, b);
                let dd = &d * &d;
                let by_alpha = (num.partial_alpha().eval(a, b) * &d
                    - &n * den.partial_alpha().eval(a, b))
                    .checked_div(&dd)
                    .expect("denominator positive on the domain");
                let by_beta = (num.partial_beta().eval(a, b) * &d
                    - n * den.partial_beta().eval(a, b))
                    .checked_div(&dd)
                    .expect("denominator positive on the domain");
                Some(vec![by_alpha, by_beta])
            }
            FamilyKind::Chop { .. } => None,
        }
    }

    /// Float objective for the optimizer: Horner evaluation of the closed
    /// forms for the built-in families; for chop families, the parameters are
    /// snapped to nearby rationals (denominator <= 10^6) and run through the
    /// exact pipeline. Out-of-domain points evaluate to infinity.
    pub fn objective(&self) -> impl Fn(&[f64]) -> f64 + '_ {
        enum Table {
            Ratio1(Vec<f64>, Vec<f64>),
            Ratio2(Vec<(i32, i32, f64)>, Vec<(i32, i32, f64)>),
            Pipeline,
        }
        let table = match &self.kind {
            FamilyKind::Hirzebruch { k } => {
                let (num, den) = hirzebruch_polys(*k);
                Table::Ratio1(num.coeffs_f64(), den.coeffs_f64())
            }
            FamilyKind::SymmetricTwoPoint => {
                let (num, den) = symmetric_two_point_polys();
                Table::Ratio1(num.coeffs_f64(), den.coeffs_f64())
            }
            FamilyKind::TwoPoint => {
                let (num, den) = two_point_polys();
                Table::Ratio2(num.terms_f64(), den.terms_f64())
            }
            FamilyKind::Chop { .. } => Table::Pipeline,
        };
        move |params: &[f64]| -> f64 {
            let horner = |coeffs: &[f64], x: f64| {
                coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
            };
            match &table {
                Table::Ratio1(num, den) => {
                    if params[0] <= 0.0 {
                        return f64::INFINITY;
                    }
                    horner(num, params[0]) / horner(den, params[0])
                }
                Table::Ratio2(num, den) => {
                    if params[0] <= 0.0 || params[1] <= 0.0 {
                        return f64::INFINITY;
                    }
                    let eval = |terms: &[(i32, i32, f64)]| {
                        terms
                            .iter()
                            .map(|&(i, j, c)| c * params[0].powi(i) * params[1].powi(j))
                            .sum::<f64>()
                    };
                    eval(num) / eval(den)
                }
                Table::Pipeline => {
                    let rationalized: Result<Vec<Rational>, Error> = params
                        .iter()
                        .map(|&x| Rational::approx_f64(x, WITNESS_MAX_DENOM))
                        .collect();
                    match rationalized.and_then(|ps| self.eval_exact(&ps)) {
                        Ok(a) => a.to_f64(),
                        Err(_) => f64::INFINITY,
                    }
                }
            }
        }
    }
}

fn quotient_derivative(num: &Poly, den: &Poly, x: &Rational) -> Rational {
    let d = den.eval(x);
    num.quotient_derivative_numerator(den)
        .eval(x)
        .checked_div(&(&d * &d))
        .expect("denominator positive on the domain")
}

// ---------------------------------------------------------------------------
// Grid scans.
// ---------------------------------------------------------------------------

/// Inclusive linear grid on one parameter.
#[derive(Clone, Debug)]
pub struct GridAxis {
    pub lo: Rational,
    pub hi: Rational,
    pub steps: usize,
}

impl GridAxis {
    pub fn points(&self) -> Vec<Rational> {
        if self.steps <= 1 {
            return vec![self.lo.clone()];
        }
        let h = (&self.hi - &self.lo)
            * Rational::new(1, self.steps as i64 - 1).expect("steps > 1");
        (0..self.steps)
            .map(|i| &self.lo + &(Rational::from_int(i as i64) * &h))
            .collect()
    }
}

/// One scan result: parameter point and its exact action.
#[derive(Clone, Debug)]
pub struct ScanRow {
    pub params: Vec<Rational>,
    pub action: Rational,
}

/// Exact action on a rational grid, row-major in the parameter axes;
/// evaluations run in parallel, results are returned in deterministic order.
pub fn scan(family: &FamilySpec, grid: &[GridAxis]) -> Result<Vec<ScanRow>, Error> {
    use rayon::prelude::*;

    if grid.len() != family.dimension() {
        return Err(Error::InvalidParameter(format!(
            "family has {} parameter(s), grid has {}",
            family.dimension(),
            grid.len()
        )));
    }
    if grid.iter().any(|axis| axis.steps == 0) {
        return Err(Error::EmptyGrid);
    }
    let axes: Vec<Vec<Rational>> = grid.iter().map(GridAxis::points).collect();
    let total: usize = axes.iter().map(Vec::len).product();

    let rows: Result<Vec<ScanRow>, Error> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut rest = flat;
            let mut params = Vec::with_capacity(axes.len());
            for axis in axes.iter().rev() {
                params.push(axis[rest % axis.len()].clone());
                rest /= axis.len();
            }
            params.reverse();
            let action = family.eval_exact(&params)?;
            Ok(ScanRow { params, action })
        })
        .collect();
    rows
}

// ---------------------------------------------------------------------------
// Minimization.
// ---------------------------------------------------------------------------

const WITNESS_MAX_DENOM: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    InteriorMin,
    Boundary,
    SaddleSuspect,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Classification::InteriorMin => "interior_min",
            Classification::Boundary => "boundary",
            Classification::SaddleSuspect => "saddle_suspect",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct MinimizeOptions {
    /// Parameter tolerance of the golden-section search.
    pub param_tol: f64,
    /// Gradient-norm threshold below which a point counts as critical.
    pub grad_tol: f64,
    /// Step for the central-difference criticality check.
    pub fd_step: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self { param_tol: 1e-10, grad_tol: 1e-8, fd_step: 1e-5 }
    }
}

/// Outcome of a virtual-action minimization over a family.
#[derive(Clone, Debug)]
pub struct CriticalPoint {
    pub params: Vec<f64>,
    pub action_value: f64,
    /// Nearby rational parameter point (denominators <= 10^6).
    pub witness: Vec<Rational>,
    /// Exact pipeline action at the rational witness.
    pub action_at_witness: Rational,
    pub gradient_norm: f64,
    pub classification: Classification,
}

fn golden_section(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, xtol: f64) -> f64 {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INVPHI * (b - a);
    let mut x2 = a + INVPHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iters = 0;
    while (b - a) > xtol && iters < 400 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INVPHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INVPHI * (b - a);
            f2 = f(x2);
        }
        iters += 1;
    }
    0.5 * (a + b)
}

/// Golden-section search stalls once function differences fall below float
/// resolution, about `sqrt(eps)` from the minimizer. This refines the point
/// by bisecting the sign of the central-difference slope, which stays
/// resolvable down to a distance of order `eps / fd_step`. Falls back to the
/// input when no slope sign change brackets it (monotone profiles).
fn slope_bisect(f: &impl Fn(f64) -> f64, x0: f64, lo: f64, hi: f64, h: f64) -> f64 {
    let g = |x: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    let delta = 1e-6_f64.min(0.5 * (x0 - lo)).min(0.5 * (hi - x0));
    if !delta.is_finite() || delta <= 0.0 || x0 - delta - h <= lo || x0 + delta + h >= hi {
        return x0;
    }
    let (mut a, mut b) = (x0 - delta, x0 + delta);
    if !(g(a) < 0.0 && g(b) > 0.0) {
        return x0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (a + b);
        if g(mid) < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
        if b - a < 1e-13 {
            break;
        }
    }
    0.5 * (a + b)
}

/// Minimizes the action over the family inside per-parameter brackets:
/// golden-section search in one dimension, coordinate descent of
/// golden-section sweeps in two. A monotone profile converges to a bracket
/// endpoint and is reported as `boundary`, never as an error.
pub fn minimize(
    family: &FamilySpec,
    brackets: &[(f64, f64)],
    opts: MinimizeOptions,
) -> Result<CriticalPoint, Error> {
    if brackets.len() != family.dimension() {
        return Err(Error::InvalidParameter(format!(
            "family has {} parameter(s), got {} bracket(s)",
            family.dimension(),
            brackets.len()
        )));
    }
    for (i, &(lo, hi)) in brackets.iter().enumerate() {
        let interval = &family.domain()[i];
        let inside = lo > interval.lo.to_f64()
            && interval.hi.as_ref().is_none_or(|h| hi < h.to_f64());
        if !(lo < hi && inside) {
            return Err(Error::InvalidParameter(format!(
                "bracket ({lo}, {hi}) is not inside the domain {interval}"
            )));
        }
    }

    let f = family.objective();
    let mut x: Vec<f64> = brackets.iter().map(|&(lo, hi)| 0.5 * (lo + hi)).collect();
    if family.dimension() == 1 {
        x[0] = golden_section(&|t| f(&[t]), brackets[0].0, brackets[0].1, opts.param_tol);
    } else {
        for _ in 0..200 {
            let mut largest_move = 0.0f64;
            for axis in 0..x.len() {
                let (lo, hi) = brackets[axis];
                let best = golden_section(
                    &|t| {
                        let mut probe = x.clone();
                        probe[axis] = t;
                        f(&probe)
                    },
                    lo,
                    hi,
                    opts.param_tol,
                );
                largest_move = largest_move.max((best - x[axis]).abs());
                x[axis] = best;
            }
            if largest_move < opts.param_tol * 10.0 {
                break;
            }
        }
    }
    // Axis-wise slope polish; repeated rounds shed the cross-axis coupling
    // that one pass leaves behind in higher dimensions.
    for _ in 0..(3 * x.len().max(1) - 2) {
        for axis in 0..x.len() {
            let (lo, hi) = brackets[axis];
            let along = |t: f64| {
                let mut probe = x.clone();
                probe[axis] = t;
                f(&probe)
            };
            x[axis] = slope_bisect(&along, x[axis], lo, hi, opts.fd_step);
        }
    }

    let mut grad_sq = 0.0;
    let mut min_second_diff = f64::INFINITY;
    let fx = f(&x);
    for axis in 0..x.len() {
        let mut plus = x.clone();
        let mut minus = x.clone();
        plus[axis] += opts.fd_step;
        minus[axis] -= opts.fd_step;
        let (fp, fm) = (f(&plus), f(&minus));
        let g = (fp - fm) / (2.0 * opts.fd_step);
        grad_sq += g * g;
        min_second_diff = min_second_diff.min(fp - 2.0 * fx + fm);
    }
    let gradient_norm = grad_sq.sqrt();

    let near_edge = x.iter().zip(brackets).any(|(&xi, &(lo, hi))| {
        let margin = (opts.param_tol * 100.0).max(1e-9);
        xi - lo < margin || hi - xi < margin
    });
    let classification = if near_edge {
        Classification::Boundary
    } else if gradient_norm < opts.grad_tol {
        if min_second_diff > 0.0 {
            Classification::InteriorMin
        } else {
            Classification::SaddleSuspect
        }
    } else {
        Classification::SaddleSuspect
    };

    let witness: Vec<Rational> = x
        .iter()
        .map(|&xi| Rational::approx_f64(xi, WITNESS_MAX_DENOM))
        .collect::<Result<_, _>>()?;
    let action_at_witness = family.eval_exact(&witness)?;
    debug_assert!(
        (fx - action_at_witness.to_f64()).abs() <= 1e-6 * fx.abs().max(1.0),
        "witness action drifted from the float objective"
    );

    Ok(CriticalPoint {
        action_value: fx,
        params: x,
        witness,
        action_at_witness,
        gradient_norm,
        classification,
    })
}

// ---------------------------------------------------------------------------
// Finite-difference vs exact derivative.
// ---------------------------------------------------------------------------

/// Central finite difference of the exact pipeline action against the exact
/// derivative of the closed form, where one exists. The finite difference is
/// itself computed in exact rational arithmetic.
#[derive(Clone, Debug)]
pub struct DerivativeCheck {
    pub fd_gradient: Vec<Rational>,
    pub exact_gradient: Option<Vec<Rational>>,
    /// `fd - exact`, componentwise, when the exact gradient exists.
    pub discrepancy: Option<Vec<Rational>>,
}

pub fn derivative_check(
    family: &FamilySpec,
    params: &[Rational],
    h: &Rational,
) -> Result<DerivativeCheck, Error> {
    if !h.is_positive() {
        return Err(Error::InvalidParameter(format!("step h = {h} must be positive")));
    }
    family.check_params(params)?;
    let two_h = rat(2, 1) * h;
    let mut fd = Vec::with_capacity(params.len());
    for axis in 0..params.len() {
        let mut plus = params.to_vec();
        let mut minus = params.to_vec();
        plus[axis] = &plus[axis] + h;
        minus[axis] = &minus[axis] - h;
        let delta = family.eval_exact(&plus)? - family.eval_exact(&minus)?;
        fd.push(delta.checked_div(&two_h)?);
    }
    let exact = family.exact_derivative(params);
    let discrepancy = exact
        .as_ref()
        .map(|g| fd.iter().zip(g).map(|(a, b)| a - b).collect());
    Ok(DerivativeCheck { fd_gradient: fd, exact_gradient: exact, discrepancy })
}
