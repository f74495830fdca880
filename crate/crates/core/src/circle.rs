//! Arithmetic on the unit circle R/Z: rotation orbits, the three-distance
//! gap structure, and exact measures of unions of arcs.

/// Fractional part in [0, 1).
pub fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    // x slightly below an integer can round up to exactly 1.0.
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Distance to the nearest representative on the circle, in [0, 1/2].
pub fn circle_dist(x: f64, y: f64) -> f64 {
    let d = frac(x - y);
    d.min(1.0 - d)
}

/// The orbit {y0 + n*beta}, n = 0..count-1, on the unit circle.
#[derive(Clone, Copy, Debug)]
pub struct CircleOrbit {
    pub y0: f64,
    pub beta: f64,
    pub count: usize,
}

impl CircleOrbit {
    pub fn new(y0: f64, beta: f64, count: usize) -> Self {
        CircleOrbit { y0, beta, count }
    }

    /// Orbit points in orbit order. Each point is computed directly from n
    /// rather than by repeated addition, so there is no accumulated drift.
    pub fn points(&self) -> Vec<f64> {
        (0..self.count)
            .map(|n| frac(self.y0 + n as f64 * self.beta))
            .collect()
    }
}

/// Gap lengths between circularly consecutive points, clustered up to a
/// resolution epsilon. The three-distance theorem says a rotation orbit
/// yields at most three distinct lengths, the largest the sum of the others.
#[derive(Clone, Debug)]
pub struct GapStructure {
    /// (length, multiplicity), sorted by length descending.
    pub distinct_gaps: Vec<(f64, usize)>,
    pub clustering_epsilon: f64,
    /// Set when a gap class collapsed to zero length beyond the epsilon
    /// resolution (duplicate points).
    pub has_zero_gap: bool,
}

impl GapStructure {
    pub fn total(&self) -> f64 {
        self.distinct_gaps
            .iter()
            .map(|&(len, mult)| len * mult as f64)
            .sum()
    }
}

/// Consecutive-gap structure of a point set on the circle, including the
/// wraparound gap. Lengths within `epsilon` of each other are clustered into
/// one class represented by their mean.
pub fn gap_structure(points: &[f64], epsilon: f64) -> GapStructure {
    assert!(!points.is_empty(), "gap_structure needs at least one point");
    assert!(epsilon >= 0.0);
    let mut sorted: Vec<f64> = points.iter().map(|&p| frac(p)).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut gaps: Vec<f64> = sorted.windows(2).map(|w| w[1] - w[0]).collect();
    gaps.push(1.0 - sorted[sorted.len() - 1] + sorted[0]);
    gaps.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // Single-linkage clustering on the sorted lengths.
    let mut classes: Vec<(f64, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=gaps.len() {
        if i == gaps.len() || gaps[i] - gaps[i - 1] > epsilon {
            let class = &gaps[start..i];
            let mean = class.iter().sum::<f64>() / class.len() as f64;
            classes.push((mean, class.len()));
            start = i;
        }
    }
    classes.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let has_zero_gap = classes.iter().any(|&(len, _)| len <= epsilon);
    GapStructure {
        distinct_gaps: classes,
        clustering_epsilon: epsilon,
        has_zero_gap,
    }
}

/// A finite union of arcs on the unit circle, stored as disjoint sorted
/// segments of [0, 1] after cutting at 0 and splitting wraparound arcs.
#[derive(Clone, Debug, Default)]
pub struct IntervalUnion {
    segments: Vec<(f64, f64)>,
}

impl IntervalUnion {
    pub fn new() -> Self {
        IntervalUnion::default()
    }

    /// Build from arcs given as (center, half_length). Half-lengths of 1/2 or
    /// more denote the whole circle.
    pub fn from_arcs(arcs: &[(f64, f64)]) -> Self {
        let mut raw: Vec<(f64, f64)> = Vec::with_capacity(arcs.len() + 4);
        for &(center, half) in arcs {
            debug_assert!(half >= 0.0, "arc half-length must be nonnegative");
            if half <= 0.0 {
                continue;
            }
            if half >= 0.5 {
                raw.push((0.0, 1.0));
                continue;
            }
            let lo = frac(center - half);
            let len = 2.0 * half;
            if lo + len <= 1.0 {
                raw.push((lo, lo + len));
            } else {
                raw.push((lo, 1.0));
                raw.push((0.0, lo + len - 1.0));
            }
        }
        Self::from_segments(raw)
    }

    /// Build from raw segments of [0, 1] (already cut at 0). Segments are
    /// clipped, sorted and merged.
    pub fn from_segments(mut segments: Vec<(f64, f64)>) -> Self {
        segments.retain(|&(lo, hi)| hi > lo);
        for seg in segments.iter_mut() {
            seg.0 = seg.0.clamp(0.0, 1.0);
            seg.1 = seg.1.clamp(0.0, 1.0);
        }
        segments.retain(|&(lo, hi)| hi > lo);
        segments.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(segments.len());
        for (lo, hi) in segments {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        IntervalUnion { segments: merged }
    }

    pub fn segments(&self) -> &[(f64, f64)] {
        &self.segments
    }

    /// Exact total arc length, clipped at 1.
    pub fn measure(&self) -> f64 {
        let total: f64 = self.segments.iter().map(|&(lo, hi)| hi - lo).sum();
        total.min(1.0)
    }

    /// Restriction of the union to the arc `(center - half, center + half)`.
    pub fn intersect_arc(&self, center: f64, half: f64) -> IntervalUnion {
        let window = IntervalUnion::from_arcs(&[(center, half)]);
        self.intersect(&window)
    }

    /// Intersection with another union.
    pub fn intersect(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.segments.len() && j < other.segments.len() {
            let (a_lo, a_hi) = self.segments[i];
            let (b_lo, b_hi) = other.segments[j];
            let lo = a_lo.max(b_lo);
            let hi = a_hi.min(b_hi);
            if hi > lo {
                out.push((lo, hi));
            }
            if a_hi < b_hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalUnion { segments: out }
    }
}
