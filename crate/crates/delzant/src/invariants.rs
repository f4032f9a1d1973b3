//! Invariants of the polarized toric surface attached to a moment polygon:
//! the Futaki vector (closed form and per-edge sum), its norm, the virtual
//! action, the Calabi-energy lower bound, intersection pairings, topology,
//! and the Weyl/Riemann/Ricci energy bounds.
//!
//! Pi is kept symbolic: every pi-bearing quantity is a [`PiScaled`], an exact
//! rational coefficient times an integer power of pi. Only rendering ever
//! touches a floating-point value of pi.

use std::cmp::Ordering;
use std::fmt;

use crate::error::Error;
use crate::measures::{self, PolygonMeasures};
use crate::polygon::MomentPolygon;
use crate::rational::{rat, Rational};

/// Exact scalar of the form `coefficient * pi^pi_power`.
///
/// Zero is canonical with `pi_power = 0`. Sums and comparisons require equal
/// pi powers (zero compares with anything); products add powers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PiScaled {
    coefficient: Rational,
    pi_power: u32,
}

impl PiScaled {
    pub fn new(coefficient: Rational, pi_power: u32) -> Self {
        if coefficient.is_zero() {
            Self { coefficient, pi_power: 0 }
        } else {
            Self { coefficient, pi_power }
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::new(r, 0)
    }

    pub fn zero() -> Self {
        Self::new(Rational::zero(), 0)
    }

    pub fn coefficient(&self) -> &Rational {
        &self.coefficient
    }

    pub fn pi_power(&self) -> u32 {
        self.pi_power
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient.is_zero()
    }

    pub fn checked_add(&self, rhs: &PiScaled) -> Result<PiScaled, Error> {
        if self.is_zero() {
            return Ok(rhs.clone());
        }
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        if self.pi_power != rhs.pi_power {
            return Err(Error::PiPowerMismatch(self.pi_power, rhs.pi_power));
        }
        Ok(PiScaled::new(&self.coefficient + &rhs.coefficient, self.pi_power))
    }

    pub fn checked_sub(&self, rhs: &PiScaled) -> Result<PiScaled, Error> {
        self.checked_add(&rhs.neg())
    }

    pub fn neg(&self) -> PiScaled {
        PiScaled::new(-&self.coefficient, self.pi_power)
    }

    pub fn mul(&self, rhs: &PiScaled) -> PiScaled {
        PiScaled::new(&self.coefficient * &rhs.coefficient, self.pi_power + rhs.pi_power)
    }

    pub fn mul_rational(&self, c: &Rational) -> PiScaled {
        PiScaled::new(&self.coefficient * c, self.pi_power)
    }

    /// Division; the divisor's pi power must not exceed this value's unless
    /// this value is zero.
    pub fn checked_div(&self, rhs: &PiScaled) -> Result<PiScaled, Error> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(PiScaled::zero());
        }
        if rhs.pi_power > self.pi_power {
            return Err(Error::PiPowerMismatch(self.pi_power, rhs.pi_power));
        }
        Ok(PiScaled::new(
            self.coefficient.checked_div(&rhs.coefficient)?,
            self.pi_power - rhs.pi_power,
        ))
    }

    /// Ordering; `None` when both are nonzero with different pi powers.
    pub fn partial_cmp(&self, rhs: &PiScaled) -> Option<Ordering> {
        if self.is_zero() || rhs.is_zero() || self.pi_power == rhs.pi_power {
            Some(self.coefficient.cmp(&rhs.coefficient))
        } else {
            None
        }
    }

    /// Decimal rendering with the 64-bit value of pi.
    pub fn to_f64(&self) -> f64 {
        self.coefficient.to_f64() * std::f64::consts::PI.powi(self.pi_power as i32)
    }
}

impl fmt::Display for PiScaled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_power {
            _ if self.coefficient.is_zero() => write!(f, "0"),
            0 => write!(f, "{}", self.coefficient),
            1 => write!(f, "{} pi", self.coefficient),
            p => write!(f, "{} pi^{}", self.coefficient, p),
        }
    }
}

/// Euler characteristic, signature and second Betti number of the toric
/// surface; all read off the vertex count of a Delzant polygon.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SurfaceTopology {
    pub euler: i64,
    pub signature: i64,
    pub b2: i64,
}

impl SurfaceTopology {
    /// `c_1^2 = 2 chi + 3 tau`.
    pub fn c1_squared(&self) -> i64 {
        2 * self.euler + 3 * self.signature
    }
}

/// Vertices are the torus fixed points, so the Euler characteristic is the
/// vertex count; simple connectivity with vanishing odd homology then gives
/// `b2 = chi - 2` and, with `b+ = 1`, the signature `tau = 4 - chi`.
pub fn topology(p: &MomentPolygon) -> Result<SurfaceTopology, Error> {
    match p.delzant_violations().into_iter().next() {
        None => {}
        Some(v) => {
            return Err(Error::NotDelzant {
                index: v.index,
                vertex: v.vertex.to_string(),
                det: v.det.to_string(),
            })
        }
    }
    let euler = p.vertex_count() as i64;
    Ok(SurfaceTopology { euler, signature: 4 - euler, b2: euler - 2 })
}

/// `(c_1 . Omega, Omega^2) = (|dP|, 2|P|)`.
pub fn chern_and_volume(p: &MomentPolygon) -> (Rational, Rational) {
    (measures::lambda_perimeter(p), rat(2, 1) * measures::area(p))
}

/// Futaki vector `F = -4 pi |dP| D`.
pub fn futaki_vector(p: &MomentPolygon) -> (PiScaled, PiScaled) {
    let perimeter = measures::lambda_perimeter(p);
    let d = measures::displacement(p);
    let scale = rat(-4, 1) * perimeter;
    (PiScaled::new(&scale * &d.x, 1), PiScaled::new(scale * d.y, 1))
}

/// Futaki vector as the per-edge sum
/// `F_k = -4 pi sum_i (mid_i,k - xbar_k) A_i`; agrees exactly with
/// [`futaki_vector`].
pub fn futaki_vector_per_edge(p: &MomentPolygon) -> (PiScaled, PiScaled) {
    let xbar = measures::interior_barycenter(p);
    let mut sum_x = Rational::zero();
    let mut sum_y = Rational::zero();
    for e in p.edges() {
        let mid = e.midpoint();
        sum_x += (&mid.x - &xbar.x) * &e.lambda_length;
        sum_y += (&mid.y - &xbar.y) * &e.lambda_length;
    }
    let minus_4 = rat(-4, 1);
    (PiScaled::new(&minus_4 * &sum_x, 1), PiScaled::new(minus_4 * sum_y, 1))
}

/// `|F|^2 = 16 pi^2 |dP|^2 D^T Pi^{-1} D`.
pub fn futaki_norm_sq(p: &MomentPolygon) -> PiScaled {
    let m = PolygonMeasures::compute(p);
    futaki_norm_sq_from(&m)
}

fn futaki_norm_sq_from(m: &PolygonMeasures) -> PiScaled {
    let coeff = rat(16, 1) * m.lambda_perimeter.pow(2) * m.quad_form();
    PiScaled::new(coeff, 2)
}

/// Virtual action `A = (|dP|^2 / 2) (1/|P| + D^T Pi^{-1} D)`; a plain
/// rational, invariant under lattice maps, translations and rescaling.
pub fn virtual_action(p: &MomentPolygon) -> Rational {
    let m = PolygonMeasures::compute(p);
    virtual_action_from(&m)
}

fn virtual_action_from(m: &PolygonMeasures) -> Rational {
    let perimeter_sq = m.lambda_perimeter.pow(2);
    let inv_area = m.area.recip().expect("valid polygon has positive area");
    rat(1, 2) * perimeter_sq * (inv_area + m.quad_form())
}

/// The two summands of the virtual action: `(c_1 . Omega)^2 / Omega^2` and
/// the Futaki contribution `|F|^2 / 32 pi^2`.
pub fn virtual_action_parts(p: &MomentPolygon) -> (Rational, Rational) {
    let m = PolygonMeasures::compute(p);
    let (chern, volume) = (m.lambda_perimeter.clone(), rat(2, 1) * m.area.clone());
    let base = chern.pow(2).checked_div(&volume).expect("positive volume");
    let futaki_part = futaki_norm_sq_from(&m)
        .checked_div(&PiScaled::new(rat(32, 1), 2))
        .expect("powers match")
        .coefficient()
        .clone();
    (base, futaki_part)
}

/// Sharp lower bound `32 pi^2 A` for the Calabi energy of the class,
/// attained exactly by an extremal metric when one exists.
pub fn calabi_lower_bound(p: &MomentPolygon) -> PiScaled {
    PiScaled::new(rat(32, 1) * virtual_action(p), 2)
}

/// Weyl energy of the class at an extremal metric:
/// `-12 pi^2 tau + (1/12) * 32 pi^2 A = pi^2 (-12 tau + (8/3) A)`.
pub fn weyl_lower_bound(p: &MomentPolygon) -> Result<PiScaled, Error> {
    let topo = topology(p)?;
    let coeff = Rational::from_int(-12 * topo.signature) + rat(8, 3) * virtual_action(p);
    Ok(PiScaled::new(coeff, 2))
}

/// Riemann-tensor energy bound `-8 pi^2 (chi + 3 tau) + (1/4) * 32 pi^2 A`.
pub fn riemann_lower_bound(p: &MomentPolygon) -> Result<PiScaled, Error> {
    let topo = topology(p)?;
    let coeff = Rational::from_int(-8 * (topo.euler + 3 * topo.signature))
        + rat(8, 1) * virtual_action(p);
    Ok(PiScaled::new(coeff, 2))
}

/// Ricci-tensor energy bound `-8 pi^2 (2 chi + 3 tau) + (1/2) * 32 pi^2 A`.
pub fn ricci_lower_bound(p: &MomentPolygon) -> Result<PiScaled, Error> {
    let topo = topology(p)?;
    let coeff = Rational::from_int(-8 * (2 * topo.euler + 3 * topo.signature))
        + rat(16, 1) * virtual_action(p);
    Ok(PiScaled::new(coeff, 2))
}

/// Everything the `action` report exposes, computed once.
///
/// The polygon-arithmetic fields exist for any convex rational polygon; the
/// topological ones require the Delzant property and are `None` otherwise.
#[derive(Clone, Debug)]
pub struct ActionReport {
    pub measures: PolygonMeasures,
    pub chern_pairing: Rational,
    pub volume_pairing: Rational,
    pub futaki: (PiScaled, PiScaled),
    pub futaki_norm_sq: PiScaled,
    pub quad_form: Rational,
    pub virtual_action: Rational,
    pub calabi_bound: PiScaled,
    pub topology: Option<SurfaceTopology>,
    pub weyl_bound: Option<PiScaled>,
    pub riemann_bound: Option<PiScaled>,
    pub ricci_bound: Option<PiScaled>,
}

impl ActionReport {
    pub fn compute(p: &MomentPolygon) -> Self {
        let m = PolygonMeasures::compute(p);
        let action = virtual_action_from(&m);
        let topo = topology(p).ok();
        let (weyl, riem, ricci) = match topo {
            Some(t) => (
                Some(PiScaled::new(
                    Rational::from_int(-12 * t.signature) + rat(8, 3) * action.clone(),
                    2,
                )),
                Some(PiScaled::new(
                    Rational::from_int(-8 * (t.euler + 3 * t.signature))
                        + rat(8, 1) * action.clone(),
                    2,
                )),
                Some(PiScaled::new(
                    Rational::from_int(-8 * (2 * t.euler + 3 * t.signature))
                        + rat(16, 1) * action.clone(),
                    2,
                )),
            ),
            None => (None, None, None),
        };
        let report = Self {
            chern_pairing: m.lambda_perimeter.clone(),
            volume_pairing: rat(2, 1) * m.area.clone(),
            futaki: futaki_vector(p),
            futaki_norm_sq: futaki_norm_sq_from(&m),
            quad_form: m.quad_form(),
            calabi_bound: PiScaled::new(rat(32, 1) * action.clone(), 2),
            virtual_action: action,
            topology: topo,
            weyl_bound: weyl,
            riemann_bound: riem,
            ricci_bound: ricci,
            measures: m,
        };
        debug_assert!(report.decomposition_holds());
        report
    }

    /// `A = (c_1 . Omega)^2 / Omega^2 + |F|^2 / 32 pi^2`, exactly.
    pub fn decomposition_holds(&self) -> bool {
        let base = self
            .chern_pairing
            .pow(2)
            .checked_div(&self.volume_pairing)
            .expect("positive volume");
        let futaki_part = self
            .futaki_norm_sq
            .checked_div(&PiScaled::new(rat(32, 1), 2))
            .expect("powers match");
        PiScaled::from_rational(self.virtual_action.clone())
            == PiScaled::from_rational(base)
                .checked_add(&futaki_part)
                .expect("powers match")
    }

    pub fn csv_header(float: bool) -> String {
        let mut h = "perimeter,area,d1,d2,quad_form,action,futaki1_coeff,futaki2_coeff,\
                     calabi_coeff,euler,signature,weyl_coeff,riem_coeff,ricci_coeff"
            .to_string();
        if float {
            h.push_str(",action_float,futaki1_float,futaki2_float,calabi_float,weyl_float");
        }
        h
    }

    /// One CSV row; topology-dependent columns stay empty for non-Delzant
    /// polygons.
    pub fn csv_row(&self, float: bool) -> String {
        let opt = |v: &Option<PiScaled>| match v {
            Some(p) => p.coefficient().to_string(),
            None => String::new(),
        };
        let mut row = format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.measures.lambda_perimeter,
            self.measures.area,
            self.measures.displacement.x,
            self.measures.displacement.y,
            self.quad_form,
            self.virtual_action,
            self.futaki.0.coefficient(),
            self.futaki.1.coefficient(),
            self.calabi_bound.coefficient(),
            self.topology.map(|t| t.euler.to_string()).unwrap_or_default(),
            self.topology.map(|t| t.signature.to_string()).unwrap_or_default(),
            opt(&self.weyl_bound),
            opt(&self.riemann_bound),
            opt(&self.ricci_bound),
        );
        if float {
            row.push_str(&format!(
                ",{},{},{},{},{}",
                self.virtual_action.to_f64(),
                self.futaki.0.to_f64(),
                self.futaki.1.to_f64(),
                self.calabi_bound.to_f64(),
                self.weyl_bound.as_ref().map(|w| w.to_f64().to_string()).unwrap_or_default(),
            ));
        }
        row
    }
}
