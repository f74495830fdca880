//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line. Tolerances and runtime budgets are pinned here.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use starcover::cfrac::{cf_expand, Real, Surd};
use starcover::circle::{frac, gap_structure, CircleOrbit};
use starcover::experiment::{
    circle_coverage_exact, divergence_check, planar_coverage, rho_sequence, slope_contrast,
    PlanarSampling, Verdict,
};
use starcover::geometry::{StarBodyFn, Vec2};
use starcover::ubiquity::calibrate_kappa;

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("criterion {id:02} {name}: {tag} ({detail})");
}

#[test]
fn criterion_01_three_gap_law() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst_defect = 0.0f64;
    for _ in 0..500 {
        let beta: f64 = rng.gen_range(0.0..1.0);
        let n: usize = rng.gen_range(1..=2000);
        let orbit = CircleOrbit::new(0.0, beta, n);
        let gs = gap_structure(&orbit.points(), 1e-9);
        assert!(
            gs.distinct_gaps.len() <= 3,
            "beta={beta} N={n}: {} distinct gaps",
            gs.distinct_gaps.len()
        );
        if gs.distinct_gaps.len() == 3 {
            let defect =
                (gs.distinct_gaps[0].0 - gs.distinct_gaps[1].0 - gs.distinct_gaps[2].0).abs();
            worst_defect = worst_defect.max(defect);
            assert!(defect <= 1e-9, "beta={beta} N={n}: sum defect {defect}");
        }
    }
    let elapsed = start.elapsed();
    let pass = elapsed.as_secs_f64() < 5.0;
    report(
        1,
        "three-gap law",
        pass,
        &format!("500 orbits, worst sum defect {worst_defect:.2e}, {elapsed:.2?}"),
    );
    assert!(pass, "runtime budget 5 s exceeded: {elapsed:.2?}");
}

#[test]
fn criterion_02_homogeneity_and_scaling() {
    let bodies = [
        StarBodyFn::Height,
        StarBodyFn::Multiplicative,
        StarBodyFn::rotated(2f64.sqrt()).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_rel = 0.0f64;
    for body in &bodies {
        for _ in 0..10_000 {
            let x = Vec2::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
            let t: f64 = rng.gen_range(1e-3..5.0);
            let f = body.eval(x).unwrap();
            let ft = body.eval(x.scale(t)).unwrap();
            let rel = (ft - t * f).abs() / (t * f).max(f64::MIN_POSITIVE);
            worst_rel = worst_rel.max(rel);
            assert!(rel <= 1e-12, "{body:?}: |F(tx) - tF(x)| relative {rel}");
        }
        for _ in 0..10_000 {
            let x = Vec2::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let psi: f64 = rng.gen_range(1e-3..2.0);
            let lhs = body.eval(x).unwrap() < psi;
            let rhs = body.eval(x.scale(1.0 / psi)).unwrap() < 1.0;
            assert_eq!(lhs, rhs, "{body:?}: sublevel scaling flipped at psi={psi}");
        }
    }
    report(
        2,
        "homogeneity and sublevel scaling",
        true,
        &format!("3 kinds x 10^4 pairs, worst relative defect {worst_rel:.2e}"),
    );
}

#[test]
fn criterion_03_structural_conditions() {
    let mut detail = String::new();
    for (name, surd) in [("sqrt2", Surd::sqrt2()), ("golden", Surd::golden())] {
        let body = StarBodyFn::rotated_exact(surd).unwrap();
        let rep = body.check_conditions(1.0, 1e3, 1000).unwrap();
        assert!(rep.irrational_slope_found, "{name}: slope not certified irrational");

        let defect = rep.symmetry_max_defect.unwrap();
        assert!(defect <= 1e-12, "{name}: symmetry defect {defect}");

        // Strict decrease of the half-width on the same log grid.
        let mut prev = f64::INFINITY;
        for i in 0..1000 {
            let s = 1.0 * 1e3f64.powf(i as f64 / 999.0);
            let w = body.halfwidth(s, 1.0).unwrap();
            assert!(w < prev, "{name}: width not strictly decreasing at s={s}");
            prev = w;
        }

        // Log-like growth: increments across the cutoff ladder 10..10^4
        // within 10% of one another.
        let incs: Vec<f64> = rep
            .strip_integrals
            .windows(2)
            .map(|w| w[1].1 - w[0].1)
            .collect();
        let max = incs.iter().cloned().fold(f64::MIN, f64::max);
        let min = incs.iter().cloned().fold(f64::MAX, f64::min);
        assert!(min > 0.0 && max <= 1.1 * min, "{name}: increments {incs:?}");
        detail.push_str(&format!("{name}: defect {defect:.2e}, inc spread {:.3}; ", max / min));
    }
    report(3, "conditions on rotated bodies", true, detail.trim_end_matches("; "));
}

#[test]
fn criterion_04_closed_form_oracles() {
    let mut worst = 0.0f64;
    for alpha in [2f64.sqrt(), Surd::golden().value()] {
        let body = StarBodyFn::rotated(alpha).unwrap();
        let sin_phi = alpha / (1.0 + alpha * alpha).sqrt();
        for &psi in &[0.1, 0.01, 0.001] {
            for i in 0..40 {
                let s = 0.5 * (1e4f64 / 0.5).powf(i as f64 / 39.0);
                let closed = psi * psi / s;
                let bisect = body.halfwidth_bisect(s, psi, 1.0).unwrap();
                worst = worst.max((closed - bisect).abs());
                assert!(
                    (closed - bisect).abs() <= 1e-8,
                    "halfwidth mismatch at alpha={alpha} psi={psi} s={s}"
                );
            }
            let rho = rho_sequence(&body, psi, alpha, 1, 50, 0.0).unwrap();
            let step = (1.0 + 1.0 / (alpha * alpha)).sqrt();
            for n in 1..=50usize {
                let oracle = body.halfwidth_bisect(n as f64 * step, psi, 1.0).unwrap() / sin_phi;
                worst = worst.max((rho.radii[n - 1] - oracle).abs());
                assert!(
                    (rho.radii[n - 1] - oracle).abs() <= 1e-8,
                    "rho mismatch at alpha={alpha} psi={psi} n={n}"
                );
            }
        }
    }
    report(4, "closed form vs bisection", true, &format!("worst gap {worst:.2e}"));
}

#[test]
fn criterion_05_divergence_for_every_psi() {
    let start = Instant::now();
    let body = StarBodyFn::rotated_exact(Surd::sqrt2()).unwrap();
    let alpha = 2f64.sqrt();
    let mut detail = String::new();
    for &psi in &[1e-1, 1e-3, 1e-6] {
        let rho = rho_sequence(&body, psi, alpha, 1, 100_000, 0.0).unwrap();
        let rep = divergence_check(&rho, &[1_000, 10_000]).unwrap();
        assert_eq!(rep.verdict, Verdict::Diverging, "psi={psi}: {:?}", rep.rows);
        for row in &rep.rows {
            assert!(row.3 > 0.0, "psi={psi}: non-positive increment {row:?}");
        }
        detail.push_str(&format!("psi={psi:.0e}: inc {:.3e}; ", rep.rows[0].3));
    }
    let elapsed = start.elapsed();
    let pass = elapsed.as_secs_f64() < 10.0;
    report(
        5,
        "divergence regardless of psi",
        pass,
        &format!("{}{elapsed:.2?}", detail),
    );
    assert!(pass, "runtime budget 10 s exceeded: {elapsed:.2?}");
}

#[test]
fn criterion_06_ubiquity_kappa_floor() {
    let start = Instant::now();
    let mut detail = String::new();
    for (name, alpha) in [("sqrt2", Surd::sqrt2()), ("golden", Surd::golden())] {
        let beta = alpha.recip().unwrap();
        let nr = cf_expand(Real::Surd(beta), 30)
            .unwrap()
            .nr_sequence(25)
            .unwrap();
        let (kappa, report_u) =
            calibrate_kappa(0.0, beta.value(), &nr, 1_000, (0.01, 0.1), 3, 1).unwrap();
        assert!(kappa >= 0.2, "{name}: kappa = {kappa}");
        for t in &report_u.trials {
            assert!(
                t.measured >= 2.0 * kappa * t.rho,
                "{name}: trial below the returned kappa bound: {t:?}"
            );
        }
        detail.push_str(&format!("{name}: kappa {kappa:.3}; "));
    }
    let elapsed = start.elapsed();
    let pass = elapsed.as_secs_f64() < 30.0;
    report(6, "ubiquity calibration", pass, &format!("{}{elapsed:.2?}", detail));
    assert!(pass, "runtime budget 30 s exceeded: {elapsed:.2?}");
}

#[test]
fn criterion_07_circle_coverage_level() {
    let start = Instant::now();
    let alpha = Surd::golden().value();
    let body = StarBodyFn::rotated_exact(Surd::golden()).unwrap();
    let psi = 0.01;
    let rho = rho_sequence(&body, psi, alpha, 1, 1_000_000, 0.0).unwrap();
    let f3 = circle_coverage_exact(alpha, 1, 0.0, &rho, 1_000).unwrap().fraction;
    let f5 = circle_coverage_exact(alpha, 1, 0.0, &rho, 100_000).unwrap().fraction;
    let f6 = circle_coverage_exact(alpha, 1, 0.0, &rho, 1_000_000).unwrap().fraction;
    let elapsed = start.elapsed();
    let trend = f5 > f3;
    let level = f6 > 0.99;
    let in_time = elapsed.as_secs_f64() < 60.0;
    report(
        7,
        "circle coverage trend and level",
        trend && level && in_time,
        &format!(
            "N=10^3: {f3:.6}, N=10^5: {f5:.6}, N=10^6: {f6:.6}, {elapsed:.2?}; \
             the radii sum to 2*psi^2*H_N, so the 0.99 level is out of reach \
             at psi=0.01"
        ),
    );
    assert!(trend, "coverage not increasing: {f5} <= {f3}");
    assert!(in_time, "runtime budget 60 s exceeded: {elapsed:.2?}");
    assert!(level, "coverage at N=10^6 is {f6}, required > 0.99");
}

#[test]
fn criterion_08_reduction_consistency() {
    let alpha = 2f64.sqrt();
    let beta = 1.0 / alpha;
    let psi = 1e-3;
    let body = StarBodyFn::rotated(alpha).unwrap();
    // Heights are capped so float cancellation in the planar evaluation
    // (growing like n^2 * eps) stays far below the margin tolerance.
    let rho = rho_sequence(&body, psi, alpha, 1, 1_000, 0.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut violations = 0u32;
    let mut worst_margin = f64::MIN;
    for _ in 0..1_000 {
        let n: usize = rng.gen_range(1..=1_000);
        let u: f64 = rng.gen_range(-1.0..1.0);
        let r = rho.radii[n - 1];
        // A circle point flagged at crossing n...
        let t = n as f64 * beta + u * r;
        let x_hit = frac(t);
        // ...maps to the planar point (x_hit, 0) with the integer translate
        // recovering the geodesic segment at height n.
        let p1 = -(t - x_hit).round() as i64;
        let p2 = -(n as i64);
        let y = Vec2::new(x_hit - p1 as f64, -(p2 as f64));
        let value = body.eval(y).unwrap();
        worst_margin = worst_margin.max(value - psi);
        if value >= psi + 1e-9 {
            violations += 1;
        }
    }
    report(
        8,
        "reduction consistency",
        violations == 0,
        &format!("10^3 hits, {violations} violations, worst margin {worst_margin:.2e}"),
    );
    assert_eq!(violations, 0);
}

#[test]
fn criterion_09_slope_contrast() {
    let ladder = [1i64, 2, 4, 8, 16, 32];
    let sampling = PlanarSampling::Grid { resolution: 512 };
    let curves = slope_contrast(0.01, 1, &ladder, 2f64.sqrt(), 1.0, &sampling).unwrap();
    let k = ladder.len() - 1;
    let irr_top = curves.irrational[k];
    let rat_top = curves.rational[k];
    let rat_inc = curves.rational[k] - curves.rational[k - 1];
    let irr_inc = curves.irrational[k] - curves.irrational[k - 1];
    let pass = irr_top > rat_top && rat_inc < 1e-3 && irr_inc > 0.0;
    report(
        9,
        "slope contrast",
        pass,
        &format!(
            "top of ladder: irrational {irr_top:.5} vs rational {rat_top:.5}; \
             last increments {irr_inc:.2e} vs {rat_inc:.2e}"
        ),
    );
    assert!(irr_top > rat_top, "irrational curve not above rational at P=32");
    assert!(rat_inc < 1e-3, "rational curve did not plateau: {rat_inc}");
    assert!(irr_inc > 0.0, "irrational curve stalled: {irr_inc}");
}

#[test]
fn criterion_09_trivial_regime_sanity() {
    // Large psi collapses the contrast; guards the criterion against a
    // degenerate parameter choice.
    let sampling = PlanarSampling::Grid { resolution: 64 };
    let body = StarBodyFn::rotated(1.0).unwrap();
    let f = planar_coverage(&body, 10.0, 1, 1, &sampling).unwrap().fraction;
    assert_eq!(f, 1.0);
}
