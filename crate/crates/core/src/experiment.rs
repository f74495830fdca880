//! Coverage experiments: geodesic crossings of a horizontal circle, the
//! induced shrinking arc radii, divergence of their series, circle-level and
//! planar coverage, and the rational/irrational slope contrast.
//!
//! Fixed parametrization: consecutive crossings of the horizontal circle
//! advance the height by 1/q, so the n-th crossing sits at arclength
//! s_n = n * sqrt(1 + alpha^-2) / q from the generating apex. Any other
//! constant multiple would only rescale the divergence constant.

use crate::circle::{frac, IntervalUnion};
use crate::error::{Error, Result};
use crate::geometry::{StarBodyFn, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// One crossing of the horizontal circle: orbit index, circle coordinate,
/// and arclength from the generating apex.
#[derive(Clone, Copy, Debug)]
pub struct CrossingEntry {
    pub n: usize,
    pub x: f64,
    pub s: f64,
}

/// The first N crossings of the chosen geodesic with the horizontal circle.
#[derive(Clone, Debug)]
pub struct CrossingSequence {
    pub alpha: f64,
    pub q: u32,
    pub y0: f64,
    pub entries: Vec<CrossingEntry>,
}

/// Crossings x_n = frac(y0 + n/alpha) with s_n = n * sqrt(1 + alpha^-2) / q.
/// Slopes below 1/2 must be normalized by the caller (swap the axes).
pub fn crossings(alpha: f64, q: u32, y0: f64, count: usize) -> Result<CrossingSequence> {
    if !(alpha >= 0.5) {
        return Err(Error::SlopeBelowHalf { alpha });
    }
    if q == 0 {
        return Err(Error::InvalidParam("q must be >= 1".into()));
    }
    if count == 0 {
        return Err(Error::InvalidParam("need at least one crossing".into()));
    }
    let beta = 1.0 / alpha;
    let step = (1.0 + beta * beta).sqrt() / q as f64;
    let entries = (0..count)
        .map(|n| CrossingEntry {
            n,
            x: frac(y0 + n as f64 * beta),
            s: n as f64 * step,
        })
        .collect();
    Ok(CrossingSequence { alpha, q, y0, entries })
}

/// Arc radii rho_n on the circle and their partial sums.
#[derive(Clone, Debug)]
pub struct RhoSequence {
    pub psi_q: f64,
    /// rho_n for n = 1..=N (index 0 holds rho_1).
    pub radii: Vec<f64>,
    /// S_N = sum of rho_1..rho_N.
    pub partial_sums: Vec<f64>,
    /// How many leading entries had s_n below the monotonicity threshold and
    /// were conservatively assigned the threshold width.
    pub clamped_entries: usize,
}

impl RhoSequence {
    /// Wrap raw radii (used for contrived series in divergence checks).
    pub fn from_radii(psi_q: f64, radii: Vec<f64>) -> Self {
        let mut partial_sums = Vec::with_capacity(radii.len());
        let mut acc = 0.0;
        for &r in &radii {
            acc += r;
            partial_sums.push(acc);
        }
        RhoSequence {
            psi_q,
            radii,
            partial_sums,
            clamped_entries: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }
}

/// rho_n = halfwidth(F, s_n, psi) / sin(arctan alpha): the half-length of the
/// horizontal chord of the psi-scaled translated body at the n-th crossing.
///
/// Entries with s_n below `s_threshold` use the width at the threshold
/// (conservative under-cover) and are counted in `clamped_entries`.
pub fn rho_sequence(
    body: &StarBodyFn,
    psi_q: f64,
    alpha: f64,
    q: u32,
    count: usize,
    s_threshold: f64,
) -> Result<RhoSequence> {
    if !(psi_q > 0.0) {
        return Err(Error::InvalidParam("psi_q must be > 0".into()));
    }
    if !(alpha >= 0.5) {
        return Err(Error::SlopeBelowHalf { alpha });
    }
    if q == 0 {
        return Err(Error::InvalidParam("q must be >= 1".into()));
    }
    let beta = 1.0 / alpha;
    let step = (1.0 + beta * beta).sqrt() / q as f64;
    let sin_phi = alpha / (1.0 + alpha * alpha).sqrt();

    let mut radii = Vec::with_capacity(count);
    let mut clamped = 0;
    for n in 1..=count {
        let s_raw = n as f64 * step;
        let s = if s_raw < s_threshold {
            clamped += 1;
            s_threshold
        } else {
            s_raw
        };
        let w = body.halfwidth(s, psi_q)?;
        radii.push(w / sin_phi);
    }
    let mut seq = RhoSequence::from_radii(psi_q, radii);
    seq.clamped_entries = clamped;
    Ok(seq)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Diverging,
    Converging,
}

/// Partial sums along a ladder of N and the decade increments S_10N - S_N.
#[derive(Clone, Debug)]
pub struct DivergenceReport {
    /// (N, S_N, S_10N, S_10N - S_N) per ladder entry.
    pub rows: Vec<(usize, f64, f64, f64)>,
    pub verdict: Verdict,
}

/// A series whose decade increments stay positive and stable (within 5%
/// of each other across the ladder) is reported as diverging; this is the
/// finitary rendering of an infinite harmonic-like sum.
pub fn divergence_check(rho: &RhoSequence, ladder: &[usize]) -> Result<DivergenceReport> {
    if ladder.is_empty() || !ladder.windows(2).all(|w| w[1] > w[0]) {
        return Err(Error::InvalidParam("ladder must be non-empty and increasing".into()));
    }
    let need = ladder.iter().map(|&n| n * 10).max().unwrap();
    if rho.len() < need {
        return Err(Error::InvalidParam(format!(
            "need {need} radii for the ladder, have {}",
            rho.len()
        )));
    }
    let mut rows = Vec::with_capacity(ladder.len());
    for &n in ladder {
        let s_n = rho.partial_sums[n - 1];
        let s_10n = rho.partial_sums[10 * n - 1];
        rows.push((n, s_n, s_10n, s_10n - s_n));
    }
    let incs: Vec<f64> = rows.iter().map(|r| r.3).collect();
    let max = incs.iter().cloned().fold(f64::MIN, f64::max);
    let min = incs.iter().cloned().fold(f64::MAX, f64::min);
    let verdict = if min > 0.0 && max <= min * 1.05 {
        Verdict::Diverging
    } else {
        Verdict::Converging
    };
    Ok(DivergenceReport { rows, verdict })
}

/// A coverage fraction at one window parameter (N crossings or P translates).
#[derive(Clone, Debug)]
pub struct CoverageResult {
    pub parameter: u64,
    pub fraction: f64,
    pub sample_count: u64,
    pub method: String,
}

/// Union of the crossing arcs (x_n - rho_n, x_n + rho_n) for n = 1..=count.
fn crossing_arc_union(alpha: f64, q: u32, y0: f64, rho: &RhoSequence, count: usize) -> Result<IntervalUnion> {
    if count > rho.len() {
        return Err(Error::InvalidParam(format!(
            "need {count} radii, have {}",
            rho.len()
        )));
    }
    if !(alpha >= 0.5) {
        return Err(Error::SlopeBelowHalf { alpha });
    }
    let _ = q;
    let beta = 1.0 / alpha;
    let arcs: Vec<(f64, f64)> = (1..=count)
        .map(|n| (frac(y0 + n as f64 * beta), rho.radii[n - 1]))
        .collect();
    Ok(IntervalUnion::from_arcs(&arcs))
}

/// Exact fraction of the circle within rho_n of some crossing x_n, n <= N.
pub fn circle_coverage_exact(
    alpha: f64,
    q: u32,
    y0: f64,
    rho: &RhoSequence,
    count: usize,
) -> Result<CoverageResult> {
    let union = crossing_arc_union(alpha, q, y0, rho, count)?;
    Ok(CoverageResult {
        parameter: count as u64,
        fraction: union.measure(),
        sample_count: 0,
        method: "exact-union".into(),
    })
}

/// Grid rendering of the same coverage fraction.
pub fn circle_coverage_grid(
    alpha: f64,
    q: u32,
    y0: f64,
    rho: &RhoSequence,
    count: usize,
    resolution: usize,
) -> Result<CoverageResult> {
    if resolution < 1000 {
        return Err(Error::InvalidParam("resolution must be >= 1000".into()));
    }
    let union = crossing_arc_union(alpha, q, y0, rho, count)?;
    let res = resolution as f64;
    let mut covered = 0u64;
    for &(lo, hi) in union.segments() {
        // Grid points i/res inside [lo, hi).
        let start = (lo * res).ceil() as i64;
        let mut end = (hi * res).floor() as i64;
        if end as f64 / res >= hi {
            end -= 1;
        }
        if end >= start {
            covered += (end - start + 1) as u64;
        }
    }
    Ok(CoverageResult {
        parameter: count as u64,
        fraction: covered as f64 / resolution as f64,
        sample_count: resolution as u64,
        method: "grid".into(),
    })
}

/// Sampling strategy for planar coverage.
#[derive(Clone, Debug)]
pub enum PlanarSampling {
    Grid { resolution: usize },
    MonteCarlo { samples: usize, seed: u64 },
}

/// Is some translate within the window a hit: exists p with |p|_inf <= P and
/// F(x - p/q) < psi?
fn point_covered(
    body: &StarBodyFn,
    psi: f64,
    q: u32,
    p_window: i64,
    x1: f64,
    x2: f64,
    prune: bool,
) -> bool {
    let qf = q as f64;
    if prune {
        if let StarBodyFn::RotatedMultiplicative { slope: alpha, .. } = body {
            let alpha = *alpha;
            let psi2 = psi * psi;
            let w2 = 1.0 + alpha * alpha;
            // Near the apex column the two root neighborhoods merge; fall
            // back to the full column scan there.
            let near_apex = 4.0 * psi * alpha.max(1.0);
            for p1 in -p_window..=p_window {
                let y1 = x1 - p1 as f64 / qf;
                if y1.abs() < near_apex {
                    for p2 in -p_window..=p_window {
                        let y2 = x2 - p2 as f64 / qf;
                        if (y1 + alpha * y2) * (y2 - alpha * y1) < psi2 * w2
                            && (y1 + alpha * y2) * (y2 - alpha * y1) > -psi2 * w2
                        {
                            return true;
                        }
                    }
                    continue;
                }
                // Candidate y2 lie near the roots alpha*y1 (arm along L) and
                // -y1/alpha (the orthogonal arm); h is a safe over-estimate
                // of the neighborhood width.
                let h = 4.0 * w2 * psi2 / y1.abs();
                for root in [alpha * y1, -y1 / alpha] {
                    let p2_lo = ((x2 - root - h) * qf).ceil() as i64;
                    let p2_hi = ((x2 - root + h) * qf).floor() as i64;
                    for p2 in p2_lo.max(-p_window)..=p2_hi.min(p_window) {
                        let y2 = x2 - p2 as f64 / qf;
                        let prod = (y1 + alpha * y2) * (y2 - alpha * y1);
                        if prod.abs() < psi2 * w2 {
                            return true;
                        }
                    }
                }
            }
            return false;
        }
    }
    for p1 in -p_window..=p_window {
        for p2 in -p_window..=p_window {
            let y = Vec2::new(x1 - p1 as f64 / qf, x2 - p2 as f64 / qf);
            if body.eval(y).unwrap_or(f64::INFINITY) < psi {
                return true;
            }
        }
    }
    false
}

/// Fraction of sampled x in the unit square admitting a translate p within
/// the window with F(x - p/q) < psi(q).
pub fn planar_coverage(
    body: &StarBodyFn,
    psi_q: f64,
    q: u32,
    p_window: i64,
    sampling: &PlanarSampling,
) -> Result<CoverageResult> {
    planar_coverage_impl(body, psi_q, q, p_window, sampling, true)
}

/// Brute-force variant evaluating every translate; used to validate that
/// pruning never changes the fraction.
pub fn planar_coverage_brute(
    body: &StarBodyFn,
    psi_q: f64,
    q: u32,
    p_window: i64,
    sampling: &PlanarSampling,
) -> Result<CoverageResult> {
    planar_coverage_impl(body, psi_q, q, p_window, sampling, false)
}

fn planar_coverage_impl(
    body: &StarBodyFn,
    psi_q: f64,
    q: u32,
    p_window: i64,
    sampling: &PlanarSampling,
    prune: bool,
) -> Result<CoverageResult> {
    if !(psi_q > 0.0) {
        return Err(Error::InvalidParam("psi_q must be > 0".into()));
    }
    if q == 0 {
        return Err(Error::InvalidParam("q must be >= 1".into()));
    }
    if p_window < 0 {
        return Err(Error::InvalidParam("P must be >= 0".into()));
    }
    match sampling {
        PlanarSampling::Grid { resolution } => {
            let res = *resolution;
            if res == 0 {
                return Err(Error::InvalidParam("resolution must be >= 1".into()));
            }
            let covered: u64 = (0..res)
                .into_par_iter()
                .map(|i| {
                    let x1 = i as f64 / res as f64;
                    let mut row = 0u64;
                    for j in 0..res {
                        let x2 = j as f64 / res as f64;
                        if point_covered(body, psi_q, q, p_window, x1, x2, prune) {
                            row += 1;
                        }
                    }
                    row
                })
                .sum();
            let total = (res * res) as u64;
            Ok(CoverageResult {
                parameter: p_window as u64,
                fraction: covered as f64 / total as f64,
                sample_count: total,
                method: format!("grid-{res}x{res}"),
            })
        }
        PlanarSampling::MonteCarlo { samples, seed } => {
            if *samples == 0 {
                return Err(Error::InvalidParam("need at least one sample".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let pts: Vec<(f64, f64)> = (0..*samples)
                .map(|_| (rng.gen::<f64>(), rng.gen::<f64>()))
                .collect();
            let covered: u64 = pts
                .par_iter()
                .map(|&(x1, x2)| point_covered(body, psi_q, q, p_window, x1, x2, prune) as u64)
                .sum();
            Ok(CoverageResult {
                parameter: p_window as u64,
                fraction: covered as f64 / *samples as f64,
                sample_count: *samples as u64,
                method: format!("mc-{samples}-seed{seed}"),
            })
        }
    }
}

/// Exact measure of the covered part of the horizontal line x2 = y_line:
/// the union over translates of the line's chords through the psi-scaled
/// bodies, computed by closed-form quadratic solves. Rotated bodies only.
pub fn horizontal_slice_coverage(
    body: &StarBodyFn,
    psi_q: f64,
    q: u32,
    p_window: i64,
    y_line: f64,
) -> Result<f64> {
    let alpha = match body {
        StarBodyFn::RotatedMultiplicative { slope, .. } => *slope,
        _ => return Err(Error::NoHalfLine),
    };
    let qf = q as f64;
    let c = psi_q * psi_q * (1.0 + alpha * alpha);
    let mut segments: Vec<(f64, f64)> = Vec::new();
    for p1 in -p_window..=p_window {
        for p2 in -p_window..=p_window {
            let a1 = p1 as f64 / qf;
            let b = y_line - p2 as f64 / qf;
            // In tau = x - a1 the membership condition reads
            // |g(tau)| < c with g = -alpha tau^2 + b(1-alpha^2) tau + alpha b^2.
            let bb = b * (1.0 - alpha * alpha);
            let cc = alpha * b * b;
            // g > -c between the roots of the downward parabola.
            let disc_lo = bb * bb + 4.0 * alpha * (cc + c);
            let root = disc_lo.sqrt();
            let t_lo = (bb - root) / (2.0 * alpha);
            let t_hi = (bb + root) / (2.0 * alpha);
            // g > c on (t1, t2) when that parabola still reaches c.
            let disc_hi = bb * bb + 4.0 * alpha * (cc - c);
            if disc_hi <= 0.0 {
                push_clipped(&mut segments, t_lo + a1, t_hi + a1);
            } else {
                let root2 = disc_hi.sqrt();
                let t1 = (bb - root2) / (2.0 * alpha);
                let t2 = (bb + root2) / (2.0 * alpha);
                push_clipped(&mut segments, t_lo + a1, t1 + a1);
                push_clipped(&mut segments, t2 + a1, t_hi + a1);
            }
        }
    }
    Ok(IntervalUnion::from_segments(segments).measure())
}

fn push_clipped(segments: &mut Vec<(f64, f64)>, lo: f64, hi: f64) {
    let lo = lo.max(0.0);
    let hi = hi.min(1.0);
    if hi > lo {
        segments.push((lo, hi));
    }
}

/// Paired coverage curves for an irrational and a rational slope.
#[derive(Clone, Debug)]
pub struct ContrastCurves {
    pub p_ladder: Vec<i64>,
    pub irrational: Vec<f64>,
    pub rational: Vec<f64>,
}

/// Run planar coverage for rotated bodies at both slopes over the same
/// P ladder with identical sampling.
pub fn slope_contrast(
    psi_q: f64,
    q: u32,
    p_ladder: &[i64],
    alpha_irrational: f64,
    alpha_rational: f64,
    sampling: &PlanarSampling,
) -> Result<ContrastCurves> {
    if !(alpha_irrational >= 0.5) {
        return Err(Error::SlopeBelowHalf { alpha: alpha_irrational });
    }
    if !(alpha_rational >= 0.5) {
        return Err(Error::SlopeBelowHalf { alpha: alpha_rational });
    }
    let body_irr = StarBodyFn::rotated(alpha_irrational)?;
    let body_rat = StarBodyFn::rotated(alpha_rational)?;
    let mut irrational = Vec::with_capacity(p_ladder.len());
    let mut rational = Vec::with_capacity(p_ladder.len());
    for &p in p_ladder {
        irrational.push(planar_coverage(&body_irr, psi_q, q, p, sampling)?.fraction);
        rational.push(planar_coverage(&body_rat, psi_q, q, p, sampling)?.fraction);
    }
    Ok(ContrastCurves {
        p_ladder: p_ladder.to_vec(),
        irrational,
        rational,
    })
}
