//! Local ubiquity of rotation orbits: for windows N_r <= n < N_{r+1} of the
//! orbit {y0 + n*beta}, the balls of radius lambda(N) = 3/(1+N_r) around the
//! window points must fill at least a fixed fraction 2*kappa*rho of every
//! small interval. kappa is always measured, never asserted a priori.

use crate::circle::{circle_dist, frac, IntervalUnion};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Rule producing the smallest admissible window index r0(I) for an interval
/// of half-length rho.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum R0Policy {
    /// Smallest r with lambda(N_r) < rho / 3, so balls are small relative to
    /// the interval and boundary effects cannot dominate.
    LambdaUnderThirdRho,
    /// No lower bound on r (r0 = 0). Useful for exploring coarse windows.
    Permissive,
}

impl R0Policy {
    pub fn name(&self) -> &'static str {
        match self {
            R0Policy::LambdaUnderThirdRho => "lambda(N_r) < rho/3",
            R0Policy::Permissive => "permissive",
        }
    }
}

/// Parameters of a ubiquity verification run.
#[derive(Clone, Debug)]
pub struct UbiquityConfig {
    /// Strictly increasing window bounds (N_r).
    pub nr: Vec<u64>,
    /// The constant to test against (bound is 2 * kappa * rho).
    pub kappa: f64,
    /// Smallest interval half-length considered "sufficiently small".
    pub rho_min: f64,
    pub r0_policy: R0Policy,
}

impl UbiquityConfig {
    pub fn new(nr: Vec<u64>, kappa: f64, rho_min: f64) -> Result<Self> {
        if nr.len() < 2 {
            return Err(Error::InvalidParam("nr needs at least two entries".into()));
        }
        if !nr.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::InvalidParam("nr must be strictly increasing".into()));
        }
        if !(kappa > 0.0) {
            return Err(Error::InvalidParam("kappa must be > 0".into()));
        }
        Ok(UbiquityConfig {
            nr,
            kappa,
            rho_min,
            r0_policy: R0Policy::LambdaUnderThirdRho,
        })
    }

    /// Smallest admissible r for an interval of half-length rho.
    pub fn r0(&self, rho: f64) -> Result<usize> {
        match self.r0_policy {
            R0Policy::Permissive => Ok(0),
            R0Policy::LambdaUnderThirdRho => {
                let need = rho / 3.0;
                self.nr
                    .iter()
                    .position(|&n| 3.0 / (1.0 + n as f64) < need)
                    .ok_or_else(|| {
                        Error::InvalidParam(format!(
                            "nr too short: no window with lambda(N_r) < {need}"
                        ))
                    })
            }
        }
    }
}

/// lambda(N) = 3 / (1 + N_r) for N in [N_r, N_{r+1}); past the last bound the
/// final window applies.
pub fn lambda_value(n: u64, nr: &[u64]) -> Result<f64> {
    if nr.is_empty() || n < nr[0] {
        return Err(Error::BelowFirstWindow {
            n,
            first: nr.first().copied().unwrap_or(0),
        });
    }
    let r = match nr.binary_search(&n) {
        Ok(idx) => idx,
        Err(idx) => idx - 1,
    };
    Ok(3.0 / (1.0 + nr[r] as f64))
}

/// One verified interval/window pair.
#[derive(Clone, Copy, Debug)]
pub struct TrialRecord {
    pub center: f64,
    pub rho: f64,
    pub r: usize,
    pub lambda: f64,
    /// Measure of I intersected with the window's lambda-balls.
    pub measured: f64,
    /// The required bound 2 * kappa * rho.
    pub bound: f64,
    pub pass: bool,
}

impl TrialRecord {
    pub fn ratio(&self) -> f64 {
        self.measured / (2.0 * self.rho)
    }
}

/// Collected trials and the infimum of measured/(2*rho) over them.
#[derive(Clone, Debug)]
pub struct UbiquityReport {
    pub trials: Vec<TrialRecord>,
    pub min_ratio: f64,
    /// First trial with zero measure, when one occurred.
    pub failed_trial: Option<TrialRecord>,
}

/// Measure of I = (center-rho, center+rho) intersected with the union of
/// lambda(N_r)-balls around the orbit points indexed by [N_r, N_{r+1}).
pub fn window_coverage(
    y0: f64,
    beta: f64,
    nr: &[u64],
    r: usize,
    center: f64,
    rho: f64,
) -> Result<f64> {
    if r + 1 >= nr.len() {
        return Err(Error::WindowOutOfRange { r, len: nr.len() });
    }
    let lambda = 3.0 / (1.0 + nr[r] as f64);
    let mut arcs = Vec::new();
    for n in nr[r]..nr[r + 1] {
        let z = frac(y0 + n as f64 * beta);
        // Only arcs that can reach I contribute to the intersection.
        if circle_dist(z, center) <= rho + lambda {
            arcs.push((z, lambda));
        }
    }
    let union = IntervalUnion::from_arcs(&arcs);
    Ok(union.intersect_arc(center, rho).measure())
}

/// Check the ubiquity bound for one interval and one window index.
pub fn check_ubiquity(
    y0: f64,
    beta: f64,
    config: &UbiquityConfig,
    center: f64,
    rho: f64,
    r: usize,
) -> Result<TrialRecord> {
    if rho < config.rho_min {
        return Err(Error::InvalidParam(format!(
            "rho = {rho} below the configured rho_min = {}",
            config.rho_min
        )));
    }
    let r0 = config.r0(rho)?;
    if r < r0 {
        return Err(Error::RBelowR0 {
            r,
            r0,
            policy: config.r0_policy.name(),
        });
    }
    let measured = window_coverage(y0, beta, &config.nr, r, center, rho)?;
    let bound = 2.0 * config.kappa * rho;
    Ok(TrialRecord {
        center,
        rho,
        r,
        lambda: 3.0 / (1.0 + config.nr[r] as f64),
        measured,
        bound,
        pass: measured >= bound,
    })
}

/// Run seeded random trials and return the infimum of measured/(2*rho),
/// i.e. the largest kappa the orbit supports on the tested intervals,
/// together with the per-trial records. Deterministic in the seed.
pub fn calibrate_kappa(
    y0: f64,
    beta: f64,
    nr: &[u64],
    trials: usize,
    rho_range: (f64, f64),
    r_extra: usize,
    seed: u64,
) -> Result<(f64, UbiquityReport)> {
    if trials == 0 {
        return Err(Error::InvalidParam("need at least one trial".into()));
    }
    let (rho_lo, rho_hi) = rho_range;
    if !(0.0 < rho_lo && rho_lo <= rho_hi && rho_hi <= 0.5) {
        return Err(Error::InvalidParam("need 0 < rho_lo <= rho_hi <= 1/2".into()));
    }
    let config = UbiquityConfig::new(nr.to_vec(), 1.0, rho_lo)?;

    // Draw all trial parameters up front so the result is seed-deterministic
    // regardless of how the evaluation is scheduled.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut params = Vec::with_capacity(trials);
    for _ in 0..trials {
        let rho = if rho_lo < rho_hi {
            rng.gen_range(rho_lo..rho_hi)
        } else {
            rho_lo
        };
        let center: f64 = rng.gen_range(0.0..1.0);
        let r0 = config.r0(rho)?;
        let r_max = nr.len() - 2;
        if r0 > r_max {
            return Err(Error::WindowOutOfRange { r: r0, len: nr.len() });
        }
        let r = (r0 + rng.gen_range(0..=r_extra)).min(r_max);
        params.push((center, rho, r));
    }

    let trials_out: Vec<TrialRecord> = params
        .par_iter()
        .map(|&(center, rho, r)| {
            let measured = window_coverage(y0, beta, nr, r, center, rho)?;
            Ok(TrialRecord {
                center,
                rho,
                r,
                lambda: 3.0 / (1.0 + nr[r] as f64),
                measured,
                bound: 0.0,
                pass: measured > 0.0,
            })
        })
        .collect::<Result<_>>()?;

    let min_ratio = trials_out
        .iter()
        .map(TrialRecord::ratio)
        .fold(f64::INFINITY, f64::min);
    let failed_trial = trials_out.iter().copied().find(|t| t.measured == 0.0);
    let kappa = if failed_trial.is_some() { 0.0 } else { min_ratio };
    Ok((
        kappa,
        UbiquityReport {
            trials: trials_out,
            min_ratio,
            failed_trial,
        },
    ))
}
