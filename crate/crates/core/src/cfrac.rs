//! Continued fractions of slopes and their reciprocals.
//!
//! Quadratic irrationals are expanded with an exact integer recurrence, so
//! expansions can run to arbitrary depth and irrationality can be certified.
//! Plain floats are expanded with the usual Euclidean iteration behind a
//! precision guard: once a partial quotient reaches 1e8 the remaining digits
//! reflect rounding rather than the number, and the expansion aborts.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// Exact quadratic surd `(a + b*sqrt(d)) / c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Surd {
    pub a: i64,
    pub b: i64,
    pub d: i64,
    pub c: i64,
}

impl Surd {
    pub fn new(a: i64, b: i64, d: i64, c: i64) -> Result<Self> {
        if c == 0 {
            return Err(Error::InvalidParam("surd denominator c must be nonzero".into()));
        }
        if d < 0 {
            return Err(Error::InvalidParam("surd radicand d must be nonnegative".into()));
        }
        // Keep the denominator positive; flip all signs if needed.
        let (a, b, c) = if c < 0 { (-a, -b, -c) } else { (a, b, c) };
        Ok(Surd { a, b, d, c })
    }

    /// sqrt(2) = (0 + 1*sqrt(2)) / 1
    pub fn sqrt2() -> Self {
        Surd { a: 0, b: 1, d: 2, c: 1 }
    }

    /// The golden ratio (1 + sqrt(5)) / 2.
    pub fn golden() -> Self {
        Surd { a: 1, b: 1, d: 5, c: 2 }
    }

    pub fn sqrt(d: i64) -> Result<Self> {
        Surd::new(0, 1, d, 1)
    }

    pub fn value(&self) -> f64 {
        (self.a as f64 + self.b as f64 * (self.d as f64).sqrt()) / self.c as f64
    }

    /// True when the surd denotes a rational number (b = 0 or d a perfect square).
    pub fn is_rational(&self) -> bool {
        if self.b == 0 {
            return true;
        }
        let s = isqrt_u128(self.d as u128) as i64;
        s * s == self.d
    }

    /// Reciprocal 1/x, again as an exact surd. Errors when x = 0.
    pub fn recip(&self) -> Result<Self> {
        // 1 / ((a + b√d)/c) = c(a - b√d) / (a² - b²d)
        let a = self.a as i128;
        let b = self.b as i128;
        let c = self.c as i128;
        let d = self.d as i128;
        let den = a * a - b * b * d;
        if den == 0 {
            return Err(Error::InvalidParam("cannot take reciprocal of zero".into()));
        }
        let na = c * a;
        let nb = -c * b;
        let to64 = |v: i128| -> Result<i64> {
            i64::try_from(v).map_err(|_| Error::CfOverflow(0))
        };
        Surd::new(to64(na)?, to64(nb)?, self.d, to64(den)?)
    }
}

/// A real number given either exactly (quadratic surd) or as a float.
///
/// Floats are treated as "irrational by declaration": no finite prefix of a
/// float distinguishes a rational from an irrational number.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Real {
    Float(f64),
    Surd(Surd),
}

impl Real {
    pub fn value(&self) -> f64 {
        match self {
            Real::Float(x) => *x,
            Real::Surd(s) => s.value(),
        }
    }

    pub fn surd(&self) -> Option<Surd> {
        match self {
            Real::Float(_) => None,
            Real::Surd(s) => Some(*s),
        }
    }

    /// Reciprocal, staying exact when the input is exact.
    pub fn recip(&self) -> Result<Real> {
        match self {
            Real::Float(x) => Ok(Real::Float(1.0 / x)),
            Real::Surd(s) => Ok(Real::Surd(s.recip()?)),
        }
    }
}

/// Partial quotients and convergents of a real number.
#[derive(Clone, Debug)]
pub struct CFExpansion {
    /// Partial quotients a_0, a_1, ... (a_0 may be 0, the rest are >= 1).
    pub partial_quotients: Vec<i128>,
    /// Convergents (p_k, q_k), coprime, one per partial quotient.
    pub convergents: Vec<(BigInt, BigInt)>,
    /// The expanded value, as a float.
    pub value: f64,
    /// Whether the expansion came from the exact surd recurrence.
    pub exact: bool,
    /// True when the expansion terminated (rational input).
    pub terminated: bool,
    /// For exact expansions: index at which the (P, Q) state first repeated,
    /// if a repetition was seen within the requested depth.
    pub period_start: Option<usize>,
}

impl CFExpansion {
    pub fn denominators(&self) -> Vec<BigInt> {
        self.convergents.iter().map(|(_, q)| q.clone()).collect()
    }

    /// The strictly increasing sequence q_1 < q_2 < ... of convergent
    /// denominators, skipping q_0.
    pub fn nr_sequence(&self, count: usize) -> Result<Vec<u64>> {
        let tail: Vec<u64> = self
            .convergents
            .iter()
            .skip(1)
            .map(|(_, q)| q.to_u64().ok_or(Error::CfOverflow(0)))
            .collect::<Result<_>>()?;
        if tail.len() < count {
            return Err(Error::NotEnoughConvergents {
                requested: count,
                available: tail.len(),
            });
        }
        Ok(tail[..count].to_vec())
    }
}

/// Expand a real to the given depth (so up to depth+1 partial quotients).
pub fn cf_expand(x: Real, depth: usize) -> Result<CFExpansion> {
    match x {
        Real::Float(v) => cf_expand_f64(v, depth),
        Real::Surd(s) => cf_expand_surd(s, depth),
    }
}

const FLOAT_QUOTIENT_GUARD: f64 = 1e8;

/// Euclidean expansion of a float. Trustworthy only while the partial
/// quotients stay below the 1e8 guard.
pub fn cf_expand_f64(x: f64, depth: usize) -> Result<CFExpansion> {
    if !x.is_finite() {
        return Err(Error::NonFinite("cf_expand"));
    }
    if x <= 0.0 {
        return Err(Error::InvalidParam("cf_expand requires x > 0".into()));
    }
    let mut quotients: Vec<i128> = Vec::new();
    let mut v = x;
    let mut terminated = false;
    for k in 0..=depth {
        let a = v.floor();
        if k > 0 && a >= FLOAT_QUOTIENT_GUARD {
            return Err(Error::CfPrecision { depth: k, quotient: a });
        }
        quotients.push(a as i128);
        let f = v - a;
        if f < 1e-12 * v.abs().max(1.0) {
            terminated = true;
            break;
        }
        v = 1.0 / f;
    }
    let convergents = convergents_of(&quotients)?;
    Ok(CFExpansion {
        partial_quotients: quotients,
        convergents,
        value: x,
        exact: false,
        terminated,
        period_start: None,
    })
}

/// Exact expansion of a quadratic surd via the integer (P, Q) recurrence on
/// x_k = (P_k + sqrt(D)) / Q_k. Rational surds fall back to plain Euclid.
pub fn cf_expand_surd(s: Surd, depth: usize) -> Result<CFExpansion> {
    let value = s.value();
    if value <= 0.0 {
        return Err(Error::InvalidParam("cf_expand requires x > 0".into()));
    }
    if s.is_rational() {
        let root = isqrt_u128(s.d as u128) as i128;
        let num = s.a as i128 + s.b as i128 * root;
        let den = s.c as i128;
        return cf_expand_rational(num, den, depth, value);
    }

    // Bring (a + b√d)/c to the canonical (P + √D)/Q with Q | D - P².
    let (mut p, mut q, mut dd): (i128, i128, i128) = if s.b >= 0 {
        (s.a as i128, s.c as i128, (s.b as i128).pow(2) * s.d as i128)
    } else {
        (-(s.a as i128), -(s.c as i128), (s.b as i128).pow(2) * s.d as i128)
    };
    if (dd - p * p).rem_euclid(q) != 0 {
        let f = q.abs();
        p = p.checked_mul(f).ok_or(Error::CfOverflow(0))?;
        dd = dd.checked_mul(f * f).ok_or(Error::CfOverflow(0))?;
        q = q.checked_mul(f).ok_or(Error::CfOverflow(0))?;
    }
    let sqrt_dd = isqrt_u128(dd as u128) as i128;

    let mut quotients: Vec<i128> = Vec::new();
    let mut states: Vec<(i128, i128)> = Vec::new();
    let mut period_start = None;
    for k in 0..=depth {
        if period_start.is_none() {
            if let Some(idx) = states.iter().position(|&st| st == (p, q)) {
                period_start = Some(idx);
            } else {
                states.push((p, q));
            }
        }
        let a = floor_quadratic(p, sqrt_dd, q);
        if k > 0 && a < 1 {
            return Err(Error::InvalidParam(format!(
                "surd expansion produced a non-positive partial quotient at depth {k}"
            )));
        }
        quotients.push(a);
        p = a.checked_mul(q).ok_or(Error::CfOverflow(k))? - p;
        q = (dd - p * p) / q;
        if q == 0 {
            return Err(Error::CfOverflow(k));
        }
    }
    let convergents = convergents_of(&quotients)?;
    Ok(CFExpansion {
        partial_quotients: quotients,
        convergents,
        value,
        exact: true,
        terminated: false,
        period_start,
    })
}

fn cf_expand_rational(mut num: i128, mut den: i128, depth: usize, value: f64) -> Result<CFExpansion> {
    if den < 0 {
        num = -num;
        den = -den;
    }
    let mut quotients = Vec::new();
    let mut terminated = false;
    for _ in 0..=depth {
        let a = num.div_euclid(den);
        quotients.push(a);
        let rem = num - a * den;
        if rem == 0 {
            terminated = true;
            break;
        }
        num = den;
        den = rem;
    }
    let convergents = convergents_of(&quotients)?;
    Ok(CFExpansion {
        partial_quotients: quotients,
        convergents,
        value,
        exact: true,
        terminated,
        period_start: None,
    })
}

/// floor((p + sqrt_d_floor-ish) / q) for irrational sqrt(D) with
/// sqrt_d = floor(sqrt(D)). Valid for either sign of q.
fn floor_quadratic(p: i128, sqrt_d: i128, q: i128) -> i128 {
    if q > 0 {
        (p + sqrt_d).div_euclid(q)
    } else {
        // floor(x / q) = -ceil(x / |q|); x = p + sqrt(D) is never an integer
        // multiple boundary since sqrt(D) is irrational here.
        -((p + sqrt_d).div_euclid(-q) + 1)
    }
}

fn convergents_of(quotients: &[i128]) -> Result<Vec<(BigInt, BigInt)>> {
    let mut out = Vec::with_capacity(quotients.len());
    let (mut p_prev, mut q_prev) = (BigInt::from(0), BigInt::from(1));
    let (mut p_cur, mut q_cur) = (BigInt::from(1), BigInt::from(0));
    for &a in quotients.iter() {
        let p = a * &p_cur + &p_prev;
        let q = a * &q_cur + &q_prev;
        out.push((p.clone(), q.clone()));
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p;
        q_cur = q;
    }
    Ok(out)
}

fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    // Two Newton steps fix up the float estimate.
    for _ in 0..4 {
        let next = (x + n / x) / 2;
        if next >= x {
            break;
        }
        x = next;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    while x * x > n {
        x -= 1;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    // a + b sqrt(d) < c, decided exactly over the integers.
    fn surd_lt(a: &BigInt, b: &BigInt, d: i64, c: &BigInt) -> bool {
        let zero = BigInt::from(0);
        let rhs = c - a;
        if *b >= zero {
            rhs > zero && b * b * d < &rhs * &rhs
        } else {
            rhs >= zero || b * b * d > &rhs * &rhs
        }
    }

    // |a + b sqrt(d)| < c, decided exactly over the integers.
    fn surd_abs_lt(a: &BigInt, b: &BigInt, d: i64, c: &BigInt) -> bool {
        surd_lt(a, b, d, c) && surd_lt(&-a, &-b, d, c)
    }

    #[test]
    fn golden_ratio_expansion() {
        let cf = cf_expand_surd(Surd::golden(), 6).unwrap();
        assert_eq!(cf.partial_quotients, vec![1, 1, 1, 1, 1, 1, 1]);
        let dens: Vec<BigInt> = [1, 1, 2, 3, 5, 8, 13].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(cf.denominators(), dens);
    }

    #[test]
    fn sqrt2_expansion() {
        let cf = cf_expand_surd(Surd::sqrt2(), 4).unwrap();
        assert_eq!(cf.partial_quotients, vec![1, 2, 2, 2, 2]);
        let expect: Vec<(BigInt, BigInt)> = [(1, 1), (3, 2), (7, 5), (17, 12), (41, 29)]
            .iter()
            .map(|&(p, q)| (BigInt::from(p), BigInt::from(q)))
            .collect();
        assert_eq!(cf.convergents, expect);
    }

    #[test]
    fn rational_terminates() {
        let cf = cf_expand_f64(2.5, 10).unwrap();
        assert_eq!(cf.partial_quotients, vec![2, 2]);
        assert_eq!(cf.convergents[1], (BigInt::from(5), BigInt::from(2)));
        assert!(cf.terminated);

        let cf = cf_expand_surd(Surd::new(5, 0, 0, 2).unwrap(), 10).unwrap();
        assert_eq!(cf.partial_quotients, vec![2, 2]);
        assert!(cf.terminated);
    }

    #[test]
    fn nr_sequences() {
        let cf = cf_expand_surd(Surd::golden(), 7).unwrap();
        assert_eq!(cf.nr_sequence(6).unwrap(), vec![1, 2, 3, 5, 8, 13]);

        let cf = cf_expand_surd(Surd::sqrt2(), 4).unwrap();
        assert_eq!(cf.nr_sequence(4).unwrap(), vec![2, 5, 12, 29]);

        let cf = cf_expand_f64(2.5, 10).unwrap();
        assert!(matches!(
            cf.nr_sequence(4),
            Err(Error::NotEnoughConvergents { .. })
        ));
    }

    #[test]
    fn float_guard_trips() {
        // A number engineered to have a giant second quotient.
        let x = 1.0 + 1e-10;
        match cf_expand_f64(x, 8) {
            Err(Error::CfPrecision { .. }) => {}
            other => panic!("expected precision error, got {other:?}"),
        }
    }

    #[test]
    fn reciprocal_surds() {
        let inv_phi = Surd::golden().recip().unwrap();
        assert!((inv_phi.value() - 0.618033988749895).abs() < 1e-12);
        let inv_sqrt2 = Surd::sqrt2().recip().unwrap();
        assert!((inv_sqrt2.value() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn quadratic_expansions_are_eventually_periodic() {
        for d in 2..=50 {
            let s = Surd::sqrt(d).unwrap();
            if s.is_rational() {
                continue;
            }
            let cf = cf_expand_surd(s, 64).unwrap();
            assert!(
                cf.period_start.is_some(),
                "sqrt({d}) showed no repeated state within depth 64"
            );
        }
    }

    #[test]
    fn determinant_identity_and_approximation_bound() {
        // 100 random-ish surds via a small LCG over coefficient space.
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 33) as i64
        };
        let mut tested = 0;
        while tested < 100 {
            let a = next() % 20;
            let b = 1 + next().rem_euclid(9);
            let d = 2 + next().rem_euclid(60);
            let c = 1 + next().rem_euclid(9);
            let s = match Surd::new(a, b, d, c) {
                Ok(s) => s,
                Err(_) => continue,
            };
            if s.is_rational() || s.value() <= 0.0 {
                continue;
            }
            let cf = cf_expand_surd(s, 20).unwrap();
            for k in 1..cf.convergents.len() {
                let (p, q) = &cf.convergents[k];
                let (pp, qp) = &cf.convergents[k - 1];
                let det = p * qp - pp * q;
                let expect = BigInt::from(if k % 2 == 1 { 1 } else { -1 });
                assert_eq!(det, expect, "determinant identity failed for {s:?} at k={k}");
            }
            // Exact check of |x - p/q| < 1/(q q') as |(qa - pc)q' + qbq' sqrt(d)| < c.
            for k in 0..cf.convergents.len() - 1 {
                let (p, q) = &cf.convergents[k];
                let (_, q_next) = &cf.convergents[k + 1];
                let a2 = (q * s.a - p * s.c) * q_next;
                let b2 = q * s.b * q_next;
                let cbig = BigInt::from(s.c);
                assert!(
                    surd_abs_lt(&a2, &b2, s.d, &cbig),
                    "best-approximation bound failed for {s:?} at k={k}"
                );
            }
            tested += 1;
        }
    }

    #[test]
    fn denominators_strictly_increase() {
        let cf = cf_expand_surd(Surd::new(3, 2, 7, 5).unwrap(), 30).unwrap();
        let dens = cf.denominators();
        for k in 2..dens.len() {
            assert!(dens[k] > dens[k - 1]);
        }
    }
}
