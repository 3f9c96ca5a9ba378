//! Outward-rounded interval arithmetic over `f64`.
//!
//! Every operation returns an interval that contains the exact image of
//! every point of its arguments. Arithmetic uses emulated directed
//! rounding (see [`round`]); `exp` and `ln` call the platform libm and
//! then widen by a fixed number of ulps, [`transcendental_slack_ulps`],
//! which covers faithfully rounded implementations.
//!
//! Results that would overflow are reported as [`IntervalError::NonFiniteResult`]
//! rather than carried as infinite endpoints.

mod round;

use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub(crate) use round::{add_down, add_up, div_down, div_up, mul_down, mul_up, sub_down, sub_up};
use round::{down_ulps, up_ulps};

/// Default outward slack applied to `exp` and `ln` results.
pub const DEFAULT_TRANSCENDENTAL_SLACK_ULPS: u32 = 2;

static TRANSCENDENTAL_SLACK: AtomicU32 = AtomicU32::new(DEFAULT_TRANSCENDENTAL_SLACK_ULPS);

/// Current ulp slack applied to every `exp`/`ln` endpoint.
pub fn transcendental_slack_ulps() -> u32 {
    TRANSCENDENTAL_SLACK.load(Ordering::Relaxed)
}

/// Sets the process-wide transcendental slack. Certificates record the
/// value that was active when they were produced.
pub fn set_transcendental_slack_ulps(k: u32) {
    TRANSCENDENTAL_SLACK.store(k, Ordering::Relaxed);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("division by an interval containing zero")]
    DivisionByZeroInterval,
    #[error("interval endpoint overflowed or became NaN")]
    NonFiniteResult,
    #[error("logarithm of an interval that is not strictly positive")]
    LogNonPositive,
    #[error("zero base raised to a non-positive exponent")]
    ZeroToNonpositive,
    #[error("power with a negative base")]
    NegativeBase,
    #[error("invalid endpoints: lower bound exceeds upper bound or is not finite")]
    InvalidBounds,
}

pub type Result<T> = std::result::Result<T, IntervalError>;

/// Sign classification of an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SignClass {
    Positive,
    Negative,
    ContainsZero,
}

/// A closed interval `[lo, hi]` with finite endpoints and `lo <= hi`.
///
/// The empty set is not an `Interval`; operations that can produce it
/// (such as [`Interval::intersect`]) return `Option<Interval>`.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_finite() && hi.is_finite() && lo <= hi {
            // normalize -0.0 so that bit-level comparisons stay meaningful
            Ok(Interval { lo: lo + 0.0, hi: hi + 0.0 })
        } else {
            Err(IntervalError::InvalidBounds)
        }
    }

    /// Degenerate interval `[x, x]`.
    ///
    /// Panics if `x` is not finite.
    pub fn point(x: f64) -> Self {
        assert!(x.is_finite(), "Interval::point requires a finite value, got {x}");
        Interval { lo: x + 0.0, hi: x + 0.0 }
    }

    /// Checked constructor used on computed endpoints.
    fn checked(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || !lo.is_finite() || !hi.is_finite() {
            return Err(IntervalError::NonFiniteResult);
        }
        debug_assert!(lo <= hi, "computed interval [{lo}, {hi}] is inverted");
        Ok(Interval { lo: lo + 0.0, hi: hi + 0.0 })
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn sign(&self) -> SignClass {
        if self.lo > 0.0 {
            SignClass::Positive
        } else if self.hi < 0.0 {
            SignClass::Negative
        } else {
            SignClass::ContainsZero
        }
    }

    /// Width `hi - lo`, rounded up.
    pub fn width(&self) -> f64 {
        sub_up(self.hi, self.lo)
    }

    /// A float inside the interval, equal to the exact midpoint when it is
    /// representable.
    pub fn midpoint(&self) -> f64 {
        if self.lo == self.hi {
            return self.lo;
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    /// Splits at the midpoint. The halves share exactly the midpoint.
    pub fn bisect(&self) -> (Interval, Interval) {
        let m = self.midpoint();
        (Interval { lo: self.lo, hi: m }, Interval { lo: m, hi: self.hi })
    }

    /// Largest absolute value of any member.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }

    pub fn add(&self, other: &Interval) -> Result<Interval> {
        Self::checked(add_down(self.lo, other.lo), add_up(self.hi, other.hi))
    }

    pub fn sub(&self, other: &Interval) -> Result<Interval> {
        Self::checked(sub_down(self.lo, other.hi), sub_up(self.hi, other.lo))
    }

    pub fn mul(&self, other: &Interval) -> Result<Interval> {
        let (a, b, c, d) = (self.lo, self.hi, other.lo, other.hi);
        let lo = mul_down(a, c).min(mul_down(a, d)).min(mul_down(b, c)).min(mul_down(b, d));
        let hi = mul_up(a, c).max(mul_up(a, d)).max(mul_up(b, c)).max(mul_up(b, d));
        Self::checked(lo, hi)
    }

    pub fn div(&self, other: &Interval) -> Result<Interval> {
        if other.contains_zero() {
            return Err(IntervalError::DivisionByZeroInterval);
        }
        let (a, b, c, d) = (self.lo, self.hi, other.lo, other.hi);
        let lo = div_down(a, c).min(div_down(a, d)).min(div_down(b, c)).min(div_down(b, d));
        let hi = div_up(a, c).max(div_up(a, d)).max(div_up(b, c)).max(div_up(b, d));
        Self::checked(lo, hi)
    }

    pub fn recip(&self) -> Result<Interval> {
        Interval::ONE.div(self)
    }

    /// `x²`, tighter than `x * x` when the interval straddles zero.
    pub fn sqr(&self) -> Result<Interval> {
        let a = self.lo.abs().min(self.hi.abs());
        let b = self.mag();
        if self.contains_zero() {
            Self::checked(0.0, mul_up(b, b))
        } else {
            Self::checked(mul_down(a, a), mul_up(b, b))
        }
    }

    pub fn add_f64(&self, x: f64) -> Result<Interval> {
        self.add(&Interval::point(x))
    }

    pub fn mul_f64(&self, x: f64) -> Result<Interval> {
        self.mul(&Interval::point(x))
    }

    pub fn exp(&self) -> Result<Interval> {
        let k = transcendental_slack_ulps();
        let lo = down_ulps(self.lo.exp(), k).max(0.0);
        let hi = up_ulps(self.hi.exp(), k);
        Self::checked(lo, hi)
    }

    pub fn ln(&self) -> Result<Interval> {
        if self.lo <= 0.0 {
            return Err(IntervalError::LogNonPositive);
        }
        let k = transcendental_slack_ulps();
        Self::checked(down_ulps(self.lo.ln(), k), up_ulps(self.hi.ln(), k))
    }

    /// `x^q` for a non-negative base, evaluated as `exp(q ln x)`.
    ///
    /// A base touching zero is allowed when every exponent is positive:
    /// the lower endpoint is then exactly 0 and the upper endpoint comes
    /// from `x.hi` alone, since `x ↦ x^q` is increasing.
    pub fn pow(&self, q: &Interval) -> Result<Interval> {
        if self.lo < 0.0 {
            return Err(IntervalError::NegativeBase);
        }
        if self.lo > 0.0 {
            return q.mul(&self.ln()?)?.exp();
        }
        if q.lo <= 0.0 {
            return Err(IntervalError::ZeroToNonpositive);
        }
        if self.hi == 0.0 {
            return Ok(Interval::ZERO);
        }
        let top = q.mul(&Interval::point(self.hi).ln()?)?.exp()?;
        Self::checked(0.0, top.hi)
    }

    /// Endpoint-wise minimum; encloses `{min(a, b)}`.
    pub fn min_i(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.min(other.hi) }
    }

    pub fn max_i(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.max(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    /// Intersection, or `None` when the intervals are disjoint.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Raises the lower endpoint to at least `floor`. Callers must know
    /// that every true value is `>= floor`.
    pub(crate) fn clamp_lo(&self, floor: f64) -> Interval {
        let lo = self.lo.max(floor);
        Interval { lo: lo.min(self.hi), hi: self.hi.max(lo) }
    }

    /// Lowers the upper endpoint to at most `ceil`, under the same
    /// contract as [`Interval::clamp_lo`].
    pub(crate) fn clamp_hi(&self, ceil: f64) -> Interval {
        let hi = self.hi.min(ceil);
        Interval { lo: self.lo.min(hi), hi: hi.max(self.lo) }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

/// Shortest round-trip decimal, in scientific notation for very small or
/// very large magnitudes.
pub fn shortest(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", shortest(self.lo), shortest(self.hi))
    }
}

impl Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.lo, self.hi].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [lo, hi] = <[f64; 2]>::deserialize(d)?;
        Interval::new(lo, hi).map_err(serde::de::Error::custom)
    }
}
