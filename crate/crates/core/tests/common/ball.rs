//! Fixed-point ball arithmetic on big integers, used as an independent
//! oracle for the interval kernel.
//!
//! A ball is `(m ± r)·2^-PREC` with integer `m` and `r ≥ 0`. Every
//! operation returns a ball containing all exact results for arguments in
//! the input balls.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub const PREC: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    m: BigInt,
    r: BigInt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Inside,
    Outside,
    Unknown,
}

fn ceil_shr(x: &BigInt, k: usize) -> BigInt {
    debug_assert!(!x.is_negative());
    (x + ((BigInt::one() << k) - 1)) >> k
}

fn ceil_div(n: &BigInt, d: &BigInt) -> BigInt {
    (n + d - 1) / d
}

impl Ball {
    fn new(m: BigInt, r: BigInt) -> Ball {
        Ball { m, r }
    }

    pub fn int(k: i64) -> Ball {
        Ball::new(BigInt::from(k) << PREC, BigInt::zero())
    }

    /// The exact value of `x` (radius one unit if `x` has more than
    /// `PREC` fractional bits).
    pub fn from_f64(x: f64) -> Ball {
        assert!(x.is_finite());
        if x == 0.0 {
            return Ball::int(0);
        }
        let bits = x.to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
        let mant = if x < 0.0 { -BigInt::from(mant) } else { BigInt::from(mant) };
        let shift = e + PREC as i64;
        if shift >= 0 {
            Ball::new(mant << shift as usize, BigInt::zero())
        } else {
            Ball::new(mant >> (-shift) as usize, BigInt::one())
        }
    }

    pub fn lo(&self) -> BigInt {
        &self.m - &self.r
    }

    pub fn hi(&self) -> BigInt {
        &self.m + &self.r
    }

    fn from_bounds(lo: BigInt, hi: BigInt) -> Ball {
        // floor of the midpoint, so m + r = hi and m − r ≤ lo
        let m: BigInt = (&lo + &hi) >> 1;
        let r = &hi - &m;
        Ball::new(m, r)
    }

    pub fn is_exact_zero(&self) -> bool {
        self.m.is_zero() && self.r.is_zero()
    }

    pub fn neg(&self) -> Ball {
        Ball::new(-&self.m, self.r.clone())
    }

    pub fn add(&self, o: &Ball) -> Ball {
        Ball::new(&self.m + &o.m, &self.r + &o.r)
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        let p = &self.m * &o.m;
        let q = &p >> PREC;
        let round = if (&q << PREC) == p { 0 } else { 1 };
        let spread = self.m.abs() * &o.r + o.m.abs() * &self.r + &self.r * &o.r;
        Ball::new(q, ceil_shr(&spread, PREC) + round)
    }

    /// `None` when the divisor ball contains zero.
    pub fn div(&self, o: &Ball) -> Option<Ball> {
        let d = o.m.abs();
        if d <= o.r {
            return None;
        }
        let n = &self.m << PREC;
        let q = &n / &o.m;
        let round = if (&q * &o.m) == n { 0 } else { 1 };
        let num = (self.m.abs() * &o.r + &d * &self.r) << PREC;
        let den = &d * (&d - &o.r);
        Some(Ball::new(q, ceil_div(&num, &den) + round))
    }

    pub fn sqr(&self) -> Ball {
        self.mul(self)
    }

    pub fn min(&self, o: &Ball) -> Ball {
        if self.hi() <= o.lo() {
            self.clone()
        } else if o.hi() <= self.lo() {
            o.clone()
        } else {
            Ball::from_bounds(self.lo().min(o.lo()), self.hi().min(o.hi()))
        }
    }

    pub fn max(&self, o: &Ball) -> Ball {
        self.neg().min(&o.neg()).neg()
    }

    fn mag_at_most(&self, num: i64, den: i64) -> bool {
        (self.m.abs() + &self.r) * den <= BigInt::from(num) << PREC
    }

    /// `None` when `|x|` may exceed 700.
    pub fn exp(&self) -> Option<Ball> {
        if !self.mag_at_most(700, 1) {
            return None;
        }
        let mut j = 0usize;
        let mut y = self.clone();
        while !y.mag_at_most(1, 2) {
            y = Ball::new(&y.m >> 1usize, (&y.r >> 1usize) + 1);
            j += 1;
        }
        // Taylor series for |y| ≤ 1/2; the tail after 50 terms is far
        // below one unit
        let mut sum = Ball::int(1);
        let mut term = Ball::int(1);
        for k in 1..=50 {
            term = term.mul(&y).div(&Ball::int(k)).expect("nonzero");
            sum = sum.add(&term);
        }
        sum.r += 1;
        for _ in 0..j {
            sum = sum.sqr();
        }
        Some(sum)
    }

    /// `2 atanh(z) = ln((1 + z)/(1 − z))` for `|z| ≤ 0.34`.
    fn two_atanh(z: &Ball) -> Ball {
        assert!(z.mag_at_most(34, 100));
        let z2 = z.sqr();
        let mut pow = z.clone();
        let mut sum = z.clone();
        for k in 1..=90 {
            pow = pow.mul(&z2);
            sum = sum.add(&pow.div(&Ball::int(2 * k + 1)).expect("nonzero"));
        }
        // tail ≤ 0.34^183 / (1 − 0.34²), below one unit
        sum.r += 1;
        sum.add(&sum)
    }

    fn ln2() -> &'static Ball {
        static LN2: OnceLock<Ball> = OnceLock::new();
        LN2.get_or_init(|| Ball::two_atanh(&Ball::int(1).div(&Ball::int(3)).expect("nonzero")))
    }

    /// `None` unless the ball is strictly positive.
    pub fn ln(&self) -> Option<Ball> {
        if self.lo() <= BigInt::zero() {
            return None;
        }
        // x = xr · 2^e with xr in [1/2, 1)
        let e = self.m.bits() as i64 - PREC as i64;
        let xr = if e >= 0 {
            Ball::new(&self.m >> e as usize, (&self.r >> e as usize) + 1)
        } else {
            Ball::new(&self.m << (-e) as usize, &self.r << (-e) as usize)
        };
        if xr.lo() <= BigInt::zero() {
            return None;
        }
        let one = Ball::int(1);
        let z = xr.sub(&one).div(&xr.add(&one))?;
        if !z.mag_at_most(34, 100) {
            return None;
        }
        Some(Ball::int(e).mul(Ball::ln2()).add(&Ball::two_atanh(&z)))
    }

    /// `x^q = exp(q ln x)` for `x > 0`, and `0` for an exact zero base.
    pub fn pow(&self, q: &Ball) -> Option<Ball> {
        if self.is_exact_zero() {
            return (q.lo() > BigInt::zero()).then(|| Ball::int(0));
        }
        q.mul(&self.ln()?).exp()
    }

    /// Position of the ball relative to `[lo, hi]`.
    pub fn within(&self, lo: f64, hi: f64) -> Verdict {
        let (l, h) = (Ball::from_f64(lo), Ball::from_f64(hi));
        if self.lo() >= l.hi() && self.hi() <= h.lo() {
            Verdict::Inside
        } else if self.hi() < l.lo() || self.lo() > h.hi() {
            Verdict::Outside
        } else {
            Verdict::Unknown
        }
    }
}
