//! Cross-module invariants that need more machinery than a unit test:
//! Monte Carlo validation of the exact union measure, stability of the
//! coverage trend across q, and the line-integral identity between planar
//! and per-line coverage.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use starcover::circle::IntervalUnion;
use starcover::experiment::{
    circle_coverage_exact, horizontal_slice_coverage, planar_coverage, rho_sequence,
    PlanarSampling,
};
use starcover::geometry::StarBodyFn;

#[test]
fn union_measure_matches_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let n_arcs = rng.gen_range(1..=50);
        let arcs: Vec<(f64, f64)> = (0..n_arcs)
            .map(|_| (rng.gen_range(0.0..1.0), rng.gen_range(0.0..0.05)))
            .collect();
        let union = IntervalUnion::from_arcs(&arcs);
        let exact = union.measure();
        let mut hits = 0u64;
        let samples = 1_000_000;
        for _ in 0..samples {
            let x: f64 = rng.gen_range(0.0..1.0);
            if union.segments().iter().any(|&(lo, hi)| lo <= x && x < hi) {
                hits += 1;
            }
        }
        let estimate = hits as f64 / samples as f64;
        assert!(
            (exact - estimate).abs() < 3e-3,
            "{n_arcs} arcs: exact {exact} vs Monte Carlo {estimate}"
        );
    }
}

#[test]
fn circle_coverage_shape_is_stable_in_q() {
    // Matched crossing counts across q: the fractions at the top of the
    // ladder stay within 0.05 of each other and every curve is monotone.
    let alpha = 2f64.sqrt();
    let body = StarBodyFn::rotated(alpha).unwrap();
    let psi = 0.01;
    let ladder = [100usize, 1_000, 10_000];
    let mut tops = Vec::new();
    for q in [1u32, 2, 3] {
        let rho = rho_sequence(&body, psi, alpha, q, 10_000, 0.0).unwrap();
        let mut prev = 0.0;
        for &n in &ladder {
            let f = circle_coverage_exact(alpha, q, 0.0, &rho, n).unwrap().fraction;
            assert!(f >= prev, "q={q}: coverage dropped at N={n}");
            prev = f;
        }
        tops.push(prev);
    }
    let max = tops.iter().cloned().fold(f64::MIN, f64::max);
    let min = tops.iter().cloned().fold(f64::MAX, f64::min);
    assert!(max - min < 0.05, "top-of-ladder fractions spread too far: {tops:?}");
}

#[test]
fn planar_fraction_integrates_line_coverage() {
    // The area fraction equals the average over horizontal lines of the
    // exact per-line chord measure.
    let body = StarBodyFn::rotated(2f64.sqrt()).unwrap();
    let psi = 0.05;
    let p = 3i64;
    let planar = planar_coverage(&body, psi, 1, p, &PlanarSampling::Grid { resolution: 512 })
        .unwrap()
        .fraction;
    let lines = 100usize;
    let mut acc = 0.0;
    for k in 0..lines {
        let y = (k as f64 + 0.5) / lines as f64;
        acc += horizontal_slice_coverage(&body, psi, 1, p, y).unwrap();
    }
    let averaged = acc / lines as f64;
    assert!(
        (planar - averaged).abs() < 0.02,
        "area {planar} vs line average {averaged}"
    );
}

#[test]
fn monte_carlo_and_grid_agree_on_planar_coverage() {
    let body = StarBodyFn::rotated(2f64.sqrt()).unwrap();
    let psi = 0.1;
    let grid = planar_coverage(&body, psi, 1, 2, &PlanarSampling::Grid { resolution: 512 })
        .unwrap()
        .fraction;
    let mc = planar_coverage(
        &body,
        psi,
        1,
        2,
        &PlanarSampling::MonteCarlo { samples: 1_000_000, seed: 5 },
    )
    .unwrap()
    .fraction;
    assert!((grid - mc).abs() < 3e-3, "grid {grid} vs Monte Carlo {mc}");
}
