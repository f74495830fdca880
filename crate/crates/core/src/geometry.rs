//! Distance functions, star-body level geometry and strip widths along the
//! distinguished half-line.
//!
//! The canonical family here is the multiplicative distance function rotated
//! so that its zero lines have slopes `alpha` and `-1/alpha`. Every quantity
//! of interest has a closed form for it, which the generic bisection paths
//! are tested against.

use crate::cfrac::Surd;
use crate::error::{Error, Result};

/// A point in the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vec2 {
    pub x1: f64,
    pub x2: f64,
}

impl Vec2 {
    pub fn new(x1: f64, x2: f64) -> Self {
        Vec2 { x1, x2 }
    }

    pub fn dot(&self, other: Vec2) -> f64 {
        self.x1 * other.x1 + self.x2 * other.x2
    }

    pub fn scale(&self, t: f64) -> Vec2 {
        Vec2::new(self.x1 * t, self.x2 * t)
    }

    pub fn add(&self, other: Vec2) -> Vec2 {
        Vec2::new(self.x1 + other.x1, self.x2 + other.x2)
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite()
    }
}

/// A distance function together with the geometry of its zero set.
#[derive(Clone, Debug)]
pub enum StarBodyFn {
    /// max(|x1|, |x2|); the zero set is the origin alone.
    Height,
    /// sqrt(|x1 * x2|); zero set = the coordinate axes.
    Multiplicative,
    /// sqrt(|u.x| * |v.x|) with u the unit vector of slope `slope` and v its
    /// positive orthogonal; zero set = the lines of slope `slope` and
    /// `-1/slope` through the origin.
    RotatedMultiplicative {
        slope: f64,
        /// Exact representation of the slope, when one is available. Float
        /// slopes are irrational by declaration only.
        slope_surd: Option<Surd>,
    },
}

/// Absolute tolerance on the bisection root-find for strip half-widths.
pub const BISECT_TOL: f64 = 1e-13;
/// Search bracket for half-width root finding; beyond it the width is
/// reported unbounded.
pub const BISECT_BRACKET: f64 = 1e6;
/// Strip radius used when rendering the infinite-measure condition as a
/// ladder of truncated integrals.
pub const STRIP_RADIUS: f64 = 1.0;
/// Geometric ladder of integral cutoffs for the truncated strip measure.
pub const STRIP_CUTOFFS: [f64; 4] = [1e1, 1e2, 1e3, 1e4];

impl StarBodyFn {
    pub fn rotated(slope: f64) -> Result<Self> {
        if !(slope > 0.0) || !slope.is_finite() {
            return Err(Error::InvalidParam("slope must be a positive finite real".into()));
        }
        Ok(StarBodyFn::RotatedMultiplicative { slope, slope_surd: None })
    }

    pub fn rotated_exact(surd: Surd) -> Result<Self> {
        let slope = surd.value();
        if !(slope > 0.0) || !slope.is_finite() {
            return Err(Error::InvalidParam("slope must be a positive finite real".into()));
        }
        Ok(StarBodyFn::RotatedMultiplicative { slope, slope_surd: Some(surd) })
    }

    pub fn slope(&self) -> Option<f64> {
        match self {
            StarBodyFn::RotatedMultiplicative { slope, .. } => Some(*slope),
            _ => None,
        }
    }

    /// Unit vector along the distinguished half-line L and its positive
    /// orthogonal, when L exists. The axes-aligned multiplicative body uses
    /// the positive x1-axis as L.
    pub fn axes(&self) -> Option<(Vec2, Vec2)> {
        match self {
            StarBodyFn::Height => None,
            StarBodyFn::Multiplicative => Some((Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0))),
            StarBodyFn::RotatedMultiplicative { slope, .. } => {
                let norm = (1.0 + slope * slope).sqrt();
                Some((
                    Vec2::new(1.0 / norm, slope / norm),
                    Vec2::new(-slope / norm, 1.0 / norm),
                ))
            }
        }
    }

    /// Evaluate the distance function.
    pub fn eval(&self, x: Vec2) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::NonFinite("eval_distance input"));
        }
        Ok(match self {
            StarBodyFn::Height => x.x1.abs().max(x.x2.abs()),
            StarBodyFn::Multiplicative => (x.x1 * x.x2).abs().sqrt(),
            StarBodyFn::RotatedMultiplicative { .. } => {
                let (u, v) = self.axes().unwrap();
                (u.dot(x) * v.dot(x)).abs().sqrt()
            }
        })
    }

    /// Distance from the point at arclength `s` along L to the nearest
    /// intersection of the orthogonal line with the level curve F = `level`.
    ///
    /// Multiplicative kinds have the closed form level^2 / s; the generic
    /// bisection path is kept alongside as an oracle.
    pub fn halfwidth(&self, s: f64, level: f64) -> Result<f64> {
        check_positive(s, "s")?;
        check_positive(level, "level")?;
        match self {
            StarBodyFn::Height => Err(Error::NoHalfLine),
            StarBodyFn::Multiplicative | StarBodyFn::RotatedMultiplicative { .. } => {
                Ok(level * level / s)
            }
        }
    }

    /// Bisection root-find for the half-width on the side `side` (+1 above L,
    /// -1 below). Independent of the closed form used by [`Self::halfwidth`].
    pub fn halfwidth_bisect(&self, s: f64, level: f64, side: f64) -> Result<f64> {
        check_positive(s, "s")?;
        check_positive(level, "level")?;
        let (u, v) = self.axes().ok_or(Error::NoHalfLine)?;
        let g = |r: f64| -> f64 {
            let x = u.scale(s).add(v.scale(side * r));
            self.eval(x).unwrap() - level
        };
        // Expand the bracket geometrically; g(0) = -level < 0.
        let mut lo = 0.0;
        let mut hi = 1e-12;
        loop {
            if g(hi) >= 0.0 {
                break;
            }
            lo = hi;
            hi *= 2.0;
            if hi > BISECT_BRACKET {
                return Err(Error::UnboundedWidth { s });
            }
        }
        while hi - lo > BISECT_TOL {
            let mid = 0.5 * (lo + hi);
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Numerical verification of the four structural conditions: irrational
    /// slope, infinite strip measure (rendered as a geometric ladder of
    /// truncated integrals), symmetry about L, and decreasing width.
    pub fn check_conditions(&self, s_min: f64, s_max: f64, n_samples: usize) -> Result<ConditionReport> {
        if !(0.0 < s_min && s_min < s_max) {
            return Err(Error::InvalidParam("need 0 < s_min < s_max".into()));
        }
        if n_samples < 2 {
            return Err(Error::InvalidParam("need n_samples >= 2".into()));
        }

        let (irrational_slope_found, slope_note) = match self {
            StarBodyFn::Height => (false, "zero set is the origin only; no half-lines".to_string()),
            StarBodyFn::Multiplicative => (
                false,
                "all four zero half-lines lie on the coordinate axes (slopes 0 and infinity)".to_string(),
            ),
            StarBodyFn::RotatedMultiplicative { slope_surd: Some(surd), .. } => {
                if surd.is_rational() {
                    (false, "declared slope surd is rational".to_string())
                } else {
                    (true, "slope certified irrational from its exact surd form".to_string())
                }
            }
            StarBodyFn::RotatedMultiplicative { slope_surd: None, slope } => (
                true,
                format!("float slope {slope} treated as irrational by declaration"),
            ),
        };

        if matches!(self, StarBodyFn::Height) {
            return Ok(ConditionReport {
                irrational_slope_found,
                slope_note,
                strip_integrals: Vec::new(),
                strip_measure_diverges: false,
                symmetry_max_defect: None,
                width_monotone_from: None,
            });
        }

        let strip_integrals = self.truncated_strip_measures(&STRIP_CUTOFFS)?;
        let increments: Vec<f64> = strip_integrals
            .windows(2)
            .map(|w| w[1].1 - w[0].1)
            .collect();
        let strip_measure_diverges = !increments.is_empty()
            && increments.iter().all(|&d| d > 0.0)
            && *increments.last().unwrap() > 0.1 * increments[0];

        // Log-spaced sample grid over [s_min, s_max].
        let grid: Vec<f64> = (0..n_samples)
            .map(|i| {
                let t = i as f64 / (n_samples - 1) as f64;
                s_min * (s_max / s_min).powf(t)
            })
            .collect();

        let mut max_defect = 0.0f64;
        for &s in &grid {
            let up = self.halfwidth_bisect(s, 1.0, 1.0)?;
            let down = self.halfwidth_bisect(s, 1.0, -1.0)?;
            max_defect = max_defect.max((up - down).abs());
        }

        let widths: Vec<f64> = grid
            .iter()
            .map(|&s| self.halfwidth(s, 1.0))
            .collect::<Result<_>>()?;
        let mut monotone_from = None;
        for start in 0..widths.len() {
            if widths[start..].windows(2).all(|w| w[1] <= w[0]) {
                monotone_from = Some(grid[start]);
                break;
            }
        }

        Ok(ConditionReport {
            irrational_slope_found,
            slope_note,
            strip_integrals,
            strip_measure_diverges,
            symmetry_max_defect: Some(max_defect),
            width_monotone_from: monotone_from,
        })
    }

    /// Truncated strip measures: the integral of 2 * min(halfwidth(s), M)
    /// from 0 to each cutoff, M = [`STRIP_RADIUS`]. The condition "the strip
    /// has infinite measure" is unbounded growth along the cutoff ladder.
    pub fn truncated_strip_measures(&self, cutoffs: &[f64]) -> Result<Vec<(f64, f64)>> {
        let m = STRIP_RADIUS;
        let s_start = 1e-3;
        let integrand = |s: f64| -> Result<f64> { Ok(2.0 * self.halfwidth(s, 1.0)?.min(m)) };
        let mut out = Vec::with_capacity(cutoffs.len());
        for &cutoff in cutoffs {
            if cutoff <= s_start {
                return Err(Error::InvalidParam("cutoff too small".into()));
            }
            // Trapezoid on a log grid, plus the near-apex chunk where the
            // integrand is clipped at 2M.
            let decades = (cutoff / s_start).log10();
            let steps = (decades * 400.0).ceil() as usize;
            let mut total = integrand(s_start)? * s_start;
            let mut prev_s = s_start;
            let mut prev_g = integrand(s_start)?;
            for i in 1..=steps {
                let s = s_start * (cutoff / s_start).powf(i as f64 / steps as f64);
                let gi = integrand(s)?;
                total += 0.5 * (gi + prev_g) * (s - prev_s);
                prev_s = s;
                prev_g = gi;
            }
            out.push((cutoff, total));
        }
        Ok(out)
    }
}

/// Outcome of the condition checks on a distance function.
#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub irrational_slope_found: bool,
    pub slope_note: String,
    /// (cutoff S, integral of twice the clipped half-width up to S).
    pub strip_integrals: Vec<(f64, f64)>,
    pub strip_measure_diverges: bool,
    /// Max over sampled s of |d_plus - d_minus|; None when no half-line exists.
    pub symmetry_max_defect: Option<f64>,
    /// Smallest sampled s from which the half-width is non-increasing.
    pub width_monotone_from: Option<f64>,
}

fn check_positive(v: f64, name: &str) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::InvalidParam(format!("{name} must be a positive finite real")));
    }
    Ok(())
}
