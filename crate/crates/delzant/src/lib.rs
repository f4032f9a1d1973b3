//! Exact geometry of Delzant moment polygons and the curvature invariants of
//! the toric surfaces they polarize.
//!
//! The crate computes, in exact rational arithmetic throughout:
//!
//! - polygon measures: area, lattice perimeter, interior and boundary
//!   barycenters, their displacement, and the moment-of-inertia matrix;
//! - the Futaki vector `F = -4 pi |dP| D` and its norm
//!   `|F|^2 = 16 pi^2 |dP|^2 D . Pi^{-1} D`;
//! - the virtual action `A = (|dP|^2/2)(1/|P| + D . Pi^{-1} D)`, the sharp
//!   lower bound `32 pi^2 A` for the Calabi energy of the Kahler class, and
//!   the induced Weyl/Riemann/Ricci energy bounds;
//! - closed-form action profiles along the Hirzebruch and two-point blow-up
//!   families, grid scans, and derivative-free minimization that locates
//!   critical (Bach-flat candidate) classes.
//!
//! Factors of pi stay symbolic ([`PiScaled`]); floats appear only in
//! rendering and in the optimizer, whose results are always re-certified at
//! a nearby rational parameter point.

pub mod cli;
pub mod error;
pub mod families;
pub mod invariants;
pub mod io;
pub mod measures;
pub mod polygon;
pub mod rational;
pub mod sampling;

pub use error::Error;
pub use families::{
    derivative_check, hirzebruch_closed_form, minimize, scan, symmetric_two_point_closed_form,
    two_point_closed_form, Classification, CriticalPoint, FamilySpec, GridAxis, MinimizeOptions,
};
pub use invariants::{
    calabi_lower_bound, chern_and_volume, futaki_norm_sq, futaki_vector, futaki_vector_per_edge,
    topology, virtual_action, weyl_lower_bound, ActionReport, PiScaled, SurfaceTopology,
};
pub use measures::{
    area, boundary_barycenter, displacement, inertia_matrix, interior_barycenter,
    lambda_perimeter, monomial_moment, PolygonMeasures,
};
pub use polygon::{
    gen_cp2, gen_hirzebruch, gen_p1xp1, gen_two_point_blowup, primitive_decompose, Edge,
    LatticeVector, MomentPolygon, Point, UnimodularMap,
};
pub use rational::Rational;
