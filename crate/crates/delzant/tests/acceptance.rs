//! Acceptance suite: one test per criterion, exact tolerances pinned in
//! code. Each test prints a `ACCEPTANCE <n> ...: PASS|FAIL` line (visible
//! with `cargo test --test acceptance -- --nocapture`, and always on
//! failure) before asserting.
//!
//! Statistical criterion 9 uses fixed seeds and a documented rerun-once
//! policy: a polygon whose first sample stream lands outside three standard
//! errors is redrawn once with the next seed; two misses fail the test.

use delzant::families::{self, Classification, FamilySpec, MinimizeOptions};
use delzant::invariants::{self, PiScaled};
use delzant::measures::{self, PolygonMeasures};
use delzant::polygon::{gen_cp2, gen_hirzebruch, gen_p1xp1, gen_two_point_blowup, Point};
use delzant::rational::{rat, Rational};
use delzant::sampling::{random_delzant_polygon, random_positive_rational, random_unimodular_map};
use delzant::{hirzebruch_closed_form, symmetric_two_point_closed_form, two_point_closed_form};

fn report(n: u32, name: &str, failures: &[String]) {
    println!(
        "ACCEPTANCE {n} ({name}): {}",
        if failures.is_empty() { "PASS".to_string() } else { format!("FAIL ({})", failures.len()) }
    );
    assert!(failures.is_empty(), "criterion {n} ({name}):\n{}", failures.join("\n"));
}

fn alpha_grid() -> Vec<Rational> {
    vec![rat(1, 3), rat(1, 2), rat(1, 1), rat(2, 1), rat(7, 2)]
}

#[test]
fn acceptance_1_hirzebruch_identity() {
    let mut failures = Vec::new();
    for k in 0..=6u32 {
        let family = FamilySpec::hirzebruch(k);
        for alpha in alpha_grid() {
            let pipeline = family.eval_exact(std::slice::from_ref(&alpha)).unwrap();
            let formula = hirzebruch_closed_form(k, &alpha).unwrap();
            if pipeline != formula {
                failures.push(format!("k={k} alpha={alpha}: pipeline {pipeline} != closed form {formula}"));
            }
        }
    }
    let mut spot = |k: u32, want: Rational| {
        let got = hirzebruch_closed_form(k, &Rational::one()).unwrap();
        if got != want {
            failures.push(format!("spot value k={k}: {got} != {want}"));
        }
    };
    spot(1, rat(111, 13));
    spot(2, rat(108, 11));
    report(1, "Hirzebruch identity", &failures);
}

#[test]
fn acceptance_2_two_point_identity() {
    let mut failures = Vec::new();
    let family = FamilySpec::two_point();
    for alpha in alpha_grid() {
        for beta in alpha_grid() {
            let pipeline = family.eval_exact(&[alpha.clone(), beta.clone()]).unwrap();
            let formula = two_point_closed_form(&alpha, &beta).unwrap();
            if pipeline != formula {
                failures.push(format!(
                    "({alpha}, {beta}): pipeline {pipeline} != closed form {formula}"
                ));
            }
        }
        let diagonal = two_point_closed_form(&alpha, &alpha).unwrap();
        let sextic = symmetric_two_point_closed_form(&alpha).unwrap();
        if diagonal != sextic {
            failures.push(format!("diagonal {alpha}: {diagonal} != sextic {sextic}"));
        }
    }
    if two_point_closed_form(&Rational::one(), &Rational::one()).unwrap() != rat(2919, 409) {
        failures.push("(1, 1) != 2919/409".into());
    }
    if two_point_closed_form(&Rational::one(), &Rational::zero()).unwrap() != rat(111, 13) {
        failures.push("blow-down limit (1, 0) != 111/13".into());
    }
    report(2, "two-point identity", &failures);
}

#[test]
fn acceptance_3_futaki_consistency() {
    let mut failures = Vec::new();
    for seed in 0..200u64 {
        let p = random_delzant_polygon(seed, 1 + (seed % 4) as usize);
        let closed = invariants::futaki_vector(&p);
        let per_edge = invariants::futaki_vector_per_edge(&p);
        if closed != per_edge {
            failures.push(format!(
                "seed {seed}: futaki {:?} != per-edge {:?}",
                closed, per_edge
            ));
        }
        // |F|^2 = 16 pi^2 |dP|^2 D.Pi^{-1}D as an identity of PiScaled values.
        let m = PolygonMeasures::compute(&p);
        let expected = PiScaled::new(rat(16, 1), 2)
            .mul_rational(&m.lambda_perimeter.pow(2))
            .mul_rational(&m.quad_form());
        if invariants::futaki_norm_sq(&p) != expected {
            failures.push(format!("seed {seed}: |F|^2 mismatch"));
        }
    }
    report(3, "Futaki consistency on 200 random blow-ups", &failures);
}

#[test]
fn acceptance_4_kahler_einstein_benchmarks() {
    let mut failures = Vec::new();
    let zero = (PiScaled::zero(), PiScaled::zero());

    for a in [rat(1, 1), rat(2, 1), rat(5, 3)] {
        let p = gen_cp2(&a).unwrap();
        let action = invariants::virtual_action(&p);
        let c1sq = invariants::topology(&p).unwrap().c1_squared();
        if action != rat(9, 1) || c1sq != 9 {
            failures.push(format!("cp2({a}): action {action}, c1^2 {c1sq}, want 9"));
        }
        if invariants::futaki_vector(&p) != zero {
            failures.push(format!("cp2({a}): nonzero Futaki vector"));
        }
    }

    let square = gen_p1xp1(&Rational::one(), &Rational::one()).unwrap();
    let action = invariants::virtual_action(&square);
    let c1sq = invariants::topology(&square).unwrap().c1_squared();
    if action != rat(8, 1) || c1sq != 8 {
        failures.push(format!("square: action {action}, c1^2 {c1sq}, want 8"));
    }
    if invariants::futaki_vector(&square) != zero {
        failures.push("square: nonzero Futaki vector".into());
    }
    report(4, "Kahler-Einstein benchmarks", &failures);
}

#[test]
fn acceptance_5_derivative_at_the_wall() {
    let mut failures = Vec::new();
    let alpha = rat(1, 10_000);
    let h = rat(1, 1_000_000);
    for k in 1..=5u32 {
        let family = FamilySpec::hirzebruch(k);
        let fd = families::derivative_check(&family, std::slice::from_ref(&alpha), &h)
            .unwrap()
            .fd_gradient[0]
            .clone();
        let target = rat(-6 * ((k as i64) - 2).pow(2), k as i64);
        let ok = if k == 2 {
            fd.abs() <= rat(1, 1000)
        } else {
            (&fd - &target).abs() * rat(1000, 1) <= target.abs()
        };
        if !ok {
            let wall_slope = rat(-6 * ((k as i64) - 2).pow(2), (k as i64).pow(2));
            failures.push(format!(
                "k={k}: fd = {} (~{:.6}) is not within 1e-3 relative of -6(k-2)^2/k = {target}; \
                 the measured slope instead matches -6(k-2)^2/k^2 = {wall_slope}, the exact \
                 derivative at alpha=0 of the same profile that criterion 1 pins exactly",
                fd,
                fd.to_f64()
            ));
        }
    }
    report(5, "derivative at the wall", &failures);
}

#[test]
fn acceptance_6_bounds() {
    let mut failures = Vec::new();
    let samples =
        vec![rat(1, 3), rat(1, 2), rat(1, 1), rat(2, 1), rat(5, 1), rat(10, 1), rat(100, 1)];
    for k in 1..=6u32 {
        for alpha in &samples {
            let action = hirzebruch_closed_form(k, alpha).unwrap();
            // A - 3k/4 > 0, exact sign test.
            if !(action.clone() - rat(3 * k as i64, 4)).is_positive() {
                failures.push(format!("k={k} alpha={alpha}: A - 3k/4 not positive"));
            }
            // Weyl bound beats 2 pi^2 k, exact coefficient comparison.
            let weyl = invariants::weyl_lower_bound(&gen_hirzebruch(k, alpha).unwrap()).unwrap();
            let floor = PiScaled::new(rat(2 * k as i64, 1), 2);
            if weyl.partial_cmp(&floor) != Some(std::cmp::Ordering::Greater) {
                failures.push(format!("k={k} alpha={alpha}: weyl {weyl} not above {floor}"));
            }
        }
        // Linear growth window at alpha = 100.
        let ratio = hirzebruch_closed_form(k, &rat(100, 1))
            .unwrap()
            .checked_div(&rat(200, 1))
            .unwrap();
        if !(ratio > rat(9, 10) && ratio < rat(11, 10)) {
            failures.push(format!("k={k}: A(100)/200 = {ratio} outside (0.9, 1.1)"));
        }
    }
    report(6, "positivity, Weyl floor, linear growth", &failures);
}

#[test]
fn acceptance_7_critical_points() {
    let mut failures = Vec::new();
    let offset = Rational::new(1, 1_000_000_000).unwrap(); // 10 x param_tol

    for k in [1u32, 3, 4] {
        let family = FamilySpec::hirzebruch(k);
        let out =
            families::minimize(&family, &[(1e-3, 20.0)], MinimizeOptions::default()).unwrap();
        if out.classification != Classification::InteriorMin {
            failures.push(format!("k={k}: classification {}", out.classification));
            continue;
        }
        if out.gradient_norm >= 1e-8 {
            failures.push(format!("k={k}: |fd| = {} >= 1e-8", out.gradient_norm));
        }
        let left = &out.witness[0] - &offset;
        let right = &out.witness[0] + &offset;
        let sign_left = family.exact_derivative(&[left]).unwrap()[0].signum();
        let sign_right = family.exact_derivative(&[right]).unwrap()[0].signum();
        if (sign_left, sign_right) != (-1, 1) {
            failures.push(format!(
                "k={k}: exact derivative does not change sign across alpha* = {}",
                out.params[0]
            ));
        }
        if k == 1 && out.action_at_witness >= rat(111, 13) {
            failures.push(format!("k=1: A(alpha*) = {} not below 111/13", out.action_at_witness));
        }
        if k == 3 && out.action_at_witness <= rat(9, 4) {
            failures.push(format!("k=3: A(alpha*) = {} not above 9/4", out.action_at_witness));
        }
    }

    let family = FamilySpec::symmetric_two_point();
    let out = families::minimize(&family, &[(1e-3, 20.0)], MinimizeOptions::default()).unwrap();
    if out.classification != Classification::InteriorMin || out.gradient_norm >= 1e-8 {
        failures.push(format!(
            "symmetric two-point: classification {}, |fd| = {}",
            out.classification, out.gradient_norm
        ));
    } else {
        let sign_left =
            family.exact_derivative(&[&out.witness[0] - &offset]).unwrap()[0].signum();
        let sign_right =
            family.exact_derivative(&[&out.witness[0] + &offset]).unwrap()[0].signum();
        if (sign_left, sign_right) != (-1, 1) {
            failures.push("symmetric two-point: no exact sign change".into());
        }
    }
    report(7, "critical classes located", &failures);
}

#[test]
fn acceptance_8_invariance_suite() {
    let mut failures = Vec::new();
    for seed in 0..100u64 {
        let p = random_delzant_polygon(seed, (seed % 4) as usize);
        let map = random_unimodular_map(seed + 1000);
        let c = random_positive_rational(seed + 2000, 3, 4);

        let mapped = p.apply_map(&map).unwrap();
        let scaled = p.scale(&c).unwrap();
        if !mapped.is_delzant() {
            failures.push(format!("seed {seed}: lattice map broke the Delzant property"));
        }

        let m0 = PolygonMeasures::compute(&p);
        let m1 = PolygonMeasures::compute(&mapped);
        let m2 = PolygonMeasures::compute(&scaled);

        let action = invariants::virtual_action(&p);
        if invariants::virtual_action(&mapped) != action
            || invariants::virtual_action(&scaled) != action
        {
            failures.push(format!("seed {seed}: action not invariant"));
        }
        if m1.area != m0.area || m1.lambda_perimeter != m0.lambda_perimeter {
            failures.push(format!("seed {seed}: area/perimeter not lattice invariants"));
        }
        let linear = map.apply_vector(&m0.displacement);
        if m1.displacement != linear {
            failures.push(format!("seed {seed}: displacement not equivariant"));
        }
        if m1.inertia != m0.inertia.congruence(map.matrix()) {
            failures.push(format!("seed {seed}: inertia not congruent"));
        }
        if m1.quad_form() != m0.quad_form() {
            failures.push(format!("seed {seed}: quad form not map-invariant"));
        }
        if m2.quad_form() != m0.quad_form().checked_div(&c.pow(2)).unwrap() {
            failures.push(format!("seed {seed}: quad form scaling is not c^-2"));
        }
        if m2.area != &m0.area * &c.pow(2)
            || m2.lambda_perimeter != &m0.lambda_perimeter * &c
            || m2.displacement != m0.displacement.scaled(&c)
            || m2.inertia != m0.inertia.scaled(&c.pow(4))
        {
            failures.push(format!("seed {seed}: scaling weights wrong"));
        }
        for m in [&m0, &m1, &m2] {
            if !m.inertia.det().is_positive() {
                failures.push(format!("seed {seed}: inertia determinant not positive"));
            }
        }
    }
    report(8, "invariance and equivariance", &failures);
}

#[test]
fn acceptance_9_oracle_agreement() {
    let monomials = [(0u32, 0u32), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];
    let samples = 1_000_000;
    let within_3_sigma = |p: &delzant::MomentPolygon, seed: u64| -> Vec<String> {
        let estimates = measures::oracle::mc_moments(p, &monomials, samples, seed);
        monomials
            .iter()
            .zip(estimates)
            .filter_map(|(&(i, j), (est, stderr))| {
                let exact = measures::monomial_moment(p, i, j).to_f64();
                let gap = (est - exact).abs();
                (gap > 3.0 * stderr).then(|| {
                    format!("moment ({i},{j}): |{est} - {exact}| = {gap} > 3 x {stderr}")
                })
            })
            .collect()
    };

    let mut failures = Vec::new();
    for n in 0..20u64 {
        let p = random_delzant_polygon(n, 1 + (n % 3) as usize);
        let first = within_3_sigma(&p, 9000 + n);
        if first.is_empty() {
            continue;
        }
        // Rerun-once policy: redraw the sample stream with the next seed.
        let second = within_3_sigma(&p, 9000 + n + 1);
        if !second.is_empty() {
            failures.push(format!(
                "polygon {n}: outside 3 sigma twice\n  first: {}\n  second: {}",
                first.join("; "),
                second.join("; ")
            ));
        }
    }
    report(9, "Monte-Carlo oracle agreement", &failures);
}

// Shared fixture sanity: the displacement example quoted throughout.
#[test]
fn fixture_sanity() {
    let p = gen_hirzebruch(1, &Rational::one()).unwrap();
    assert_eq!(measures::displacement(&p), Point::new(rat(1, 45), rat(-2, 45)));
    assert_eq!(
        invariants::virtual_action(&gen_two_point_blowup(&Rational::one(), &Rational::one()).unwrap()),
        rat(2919, 409)
    );
}
