//! Deterministic random generators for fuzzing: Delzant polygons built by
//! iterated corner blow-ups, unimodular maps, and small rationals. Everything
//! is seeded, so test suites that use these are reproducible run to run.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::polygon::{gen_cp2, gen_hirzebruch, gen_p1xp1, MomentPolygon, Point, UnimodularMap};
use crate::rational::Rational;

fn random_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64, max_denom: i64) -> Rational {
    let den = rng.gen_range(1..=max_denom);
    let num = rng.gen_range(lo * den..=hi * den);
    Rational::new(num, den).expect("positive denominator")
}

/// Delzant polygon obtained from a random seed surface by `blowups` random
/// corner chops. Deterministic in `seed`.
pub fn random_delzant_polygon(seed: u64, blowups: usize) -> MomentPolygon {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1));
    let base = match rng.gen_range(0..3) {
        0 => gen_cp2(&random_rational(&mut rng, 1, 4, 3)),
        1 => gen_hirzebruch(rng.gen_range(0..4), &random_rational(&mut rng, 1, 3, 3)),
        _ => gen_p1xp1(
            &random_rational(&mut rng, 1, 3, 2),
            &random_rational(&mut rng, 1, 3, 2),
        ),
    }
    .expect("positive parameters");

    let mut p = base;
    for _ in 0..blowups {
        let n = p.vertex_count();
        let idx = rng.gen_range(0..n);
        let prev = &p.edges()[(idx + n - 1) % n].lambda_length;
        let next = &p.edges()[idx].lambda_length;
        let limit = prev.clone().min(next.clone());
        // eps = limit * m/8 with m in 1..=6 keeps the chop strictly admissible.
        let eps = limit * Rational::new(rng.gen_range(1..=6), 8).unwrap();
        p = p.blow_up(idx, &eps).expect("chop stays strictly admissible");
    }
    p
}

/// Random product of lattice shears and axis swaps with a small rational
/// translation; determinant is +1 or -1. Deterministic in `seed`.
pub fn random_unimodular_map(seed: u64) -> UnimodularMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x2545f4914f6cdd1d).wrapping_add(3));
    let mut m = [[1i64, 0], [0, 1]];
    let mul = |a: [[i64; 2]; 2], b: [[i64; 2]; 2]| {
        [
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ]
    };
    for _ in 0..rng.gen_range(1..=6) {
        let factor = match rng.gen_range(0..4) {
            0 => [[1, 1], [0, 1]],
            1 => [[1, -1], [0, 1]],
            2 => [[1, 0], [1, 1]],
            _ => [[0, 1], [1, 0]],
        };
        m = mul(m, factor);
    }
    let t = Point::new(random_rational(&mut rng, -3, 3, 4), random_rational(&mut rng, -3, 3, 4));
    UnimodularMap::new(m, t).expect("products of unimodular factors are unimodular")
}

/// Random positive rational in `[1/max_denom, hi]`. Deterministic in `seed`.
pub fn random_positive_rational(seed: u64, hi: i64, max_denom: i64) -> Rational {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0xd1342543de82ef95).wrapping_add(7));
    let den = rng.gen_range(1..=max_denom);
    let num = rng.gen_range(1..=hi * den);
    Rational::new(num, den).expect("positive denominator")
}
