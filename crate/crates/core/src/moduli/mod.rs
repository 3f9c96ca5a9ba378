//! Interval enclosures of the moduli-space quantities.
//!
//! For an exponent `p > 1` the fiber is `1 ≤ σ ≤ σ_p = (2^p − 1)^{1/p}`.
//! With
//!
//! ```text
//! u = (1 + σ^p)^{-1/p},   v = (1 + τ^p)^{-1/p},
//! A = v − u,              B = σu + τv,
//! ```
//!
//! the value `τ(p, σ) ∈ [0, τ_p]` is the root of `F(τ) = A^p + B^p − 1`,
//! where `τ_p ∈ [0, 1)` solves `2(1 − τ)^p = 1 + τ^p`, and
//!
//! ```text
//! Δ(p, σ) = (τ + σ) · v · u.
//! ```
//!
//! Two closed forms follow by substitution and are used as independent
//! cross-checks of the generic path:
//!
//! * at `σ = σ_p`, `u = 1/2` and `τ = 0`, so `Δ(p, σ_p) = σ_p / 2`;
//! * at `σ = 1`, `τ = τ_p` and `v = u / (1 − τ_p)`, so
//!   `Δ(p, 1) = (1 + τ_p) 2^{-2/p} / (1 − τ_p)`.
//!
//! Bracketing `τ` relies on two sign facts that hold for every point of
//! the fiber. Writing `w = σu` (so `u^p + w^p = 1`), `F(0) = (1 − u)^p − u^p`,
//! which is `≤ 0` exactly when `u ≥ 1/2`, i.e. when `σ ≤ σ_p`. At `τ = τ_p`
//! both `A` and `B` are non-decreasing in `σ` and `F(τ_p) = 0` at `σ = 1`,
//! so `F(τ_p) ≥ 0` whenever `σ ≥ 1`. With the root unique on `[0, τ_p]`,
//! any verified `F(a) ≤ 0` or `F(b) ≥ 0` moves the corresponding end of the
//! bracket.

pub mod jets;

use thiserror::Error;

use crate::interval::{Interval, IntervalError, SignClass};
use crate::jet::Jet;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModuliError {
    #[error("outside the moduli domain: {0}")]
    Domain(&'static str),
    #[error("no verified bracket for the implicit root over this box")]
    BracketFailure,
    #[error(transparent)]
    Kernel(#[from] IntervalError),
}

pub type Result<T> = std::result::Result<T, ModuliError>;

/// Iteration cap for the bracket searches; 200 halvings exhaust any f64 range.
const MAX_BISECTIONS: usize = 200;

fn require_p(p: &Interval) -> Result<()> {
    if p.lo() > 1.0 {
        Ok(())
    } else {
        Err(ModuliError::Domain("p must exceed 1"))
    }
}

fn ln2() -> Interval {
    Interval::point(2.0).ln().expect("ln 2")
}

/// `(2^p − 1)^{1/p}` at a single exponent interval, without monotonicity.
fn sigma_p_direct(p: &Interval) -> Result<Interval> {
    let two_p = p.mul(&ln2())?.exp()?;
    let base = two_p.sub(&Interval::ONE)?;
    Ok(base.ln()?.div(p)?.exp()?)
}

/// Enclosure of `σ_p = (2^p − 1)^{1/p}` over `p ∈ P`.
///
/// `ln σ_p = ln 2 + ln(1 − 2^{-p}) / p` is increasing in `p`, so the
/// endpoints of `P` bound the range.
pub fn sigma_p(p: &Interval) -> Result<Interval> {
    require_p(p)?;
    let lo = sigma_p_direct(&Interval::point(p.lo()))?.lo();
    let hi = sigma_p_direct(&Interval::point(p.hi()))?.hi();
    // σ_p ∈ [1, 2) for every p > 1
    Ok(Interval::new(lo.max(1.0), hi.max(1.0))?.clamp_hi(2.0))
}

/// Largest verified point in `[lo, hi]`, starting from `lo` which the caller
/// has already established.
fn refine_lower(mut lo: f64, mut hi: f64, tol: f64, ok: impl Fn(f64) -> bool) -> f64 {
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= tol {
            break;
        }
        let m = Interval::new(lo, hi).map(|iv| iv.midpoint()).unwrap_or(lo);
        if m <= lo || m >= hi {
            break;
        }
        if ok(m) {
            lo = m;
        } else {
            hi = m;
        }
    }
    lo
}

/// Smallest verified point in `[lo, hi]`, starting from `hi`.
fn refine_upper(mut lo: f64, mut hi: f64, tol: f64, ok: impl Fn(f64) -> bool) -> f64 {
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= tol {
            break;
        }
        let m = Interval::new(lo, hi).map(|iv| iv.midpoint()).unwrap_or(hi);
        if m <= lo || m >= hi {
            break;
        }
        if ok(m) {
            hi = m;
        } else {
            lo = m;
        }
    }
    hi
}

/// `H(τ) = 2(1 − τ)^p − (1 + τ^p)`, strictly decreasing on `[0, 1]`.
pub fn tau_p_residual(p: &Interval, t: &Interval) -> Result<Interval> {
    let one_minus = Interval::ONE.sub(t)?.clamp_lo(0.0);
    let lhs = one_minus.pow(p)?.mul_f64(2.0)?;
    let rhs = Interval::ONE.add(&t.pow(p)?)?;
    Ok(lhs.sub(&rhs)?)
}

/// Enclosure of `τ_p` for every `p ∈ P`, verified by the sign of
/// `H` at both bracket ends (`H > 0` below, `H < 0` above).
pub fn tau_p(p: &Interval, tol: f64) -> Result<Interval> {
    require_p(p)?;
    if !(tol > 0.0) {
        return Err(ModuliError::Domain("tolerance must be positive"));
    }
    let h = |t: f64| tau_p_residual(p, &Interval::point(t));
    let positive = |t: f64| matches!(h(t), Ok(r) if r.sign() == SignClass::Positive);
    let negative = |t: f64| matches!(h(t), Ok(r) if r.sign() == SignClass::Negative);
    if !positive(0.0) || !negative(1.0) {
        return Err(ModuliError::BracketFailure);
    }
    let half = tol / 2.0;
    let lo = refine_lower(0.0, 1.0, half, positive);
    let hi = refine_upper(0.0, 1.0, half, negative);
    Ok(Interval::new(lo, hi)?)
}

/// `(1 + x^p)^{-1/p}`.
fn norm_factor(p: &Interval, x: &Interval) -> Result<Interval> {
    let inner = Interval::ONE.add(&x.pow(p)?)?;
    let neg_inv_p = p.recip()?.neg();
    Ok(inner.pow(&neg_inv_p)?)
}

/// Enclosures of `A` and `B`.
///
/// `A ≥ 0` holds whenever `τ ≤ σ`; when the boxes guarantee that, the
/// lower end of `A` is clamped at 0 so that rounding cannot push it
/// negative.
pub fn ab(p: &Interval, sigma: &Interval, t: &Interval) -> Result<(Interval, Interval)> {
    require_p(p)?;
    if sigma.lo() < 1.0 || t.lo() < 0.0 {
        return Err(ModuliError::Domain("need σ ≥ 1 and τ ≥ 0"));
    }
    let u = norm_factor(p, sigma)?;
    let v = norm_factor(p, t)?;
    let mut a = v.sub(&u)?;
    if t.hi() <= sigma.lo() {
        a = a.clamp_lo(0.0);
    }
    let b = sigma.mul(&u)?.add(&t.mul(&v)?)?;
    Ok((a, b))
}

/// Enclosure of `A^p + B^p − 1`.
pub fn residual(p: &Interval, sigma: &Interval, t: &Interval) -> Result<Interval> {
    let (a, b) = ab(p, sigma, t)?;
    Ok(a.pow(p)?.add(&b.pow(p)?)?.sub(&Interval::ONE)?)
}

/// Encloses `τ(p, σ)` for every `(p, σ)` of the fiber inside `P × Sigma`.
///
/// Each end of the returned bracket is either an a priori bound (`0` or
/// `τ_p`, see the module docs) or a point where the residual has a
/// verified sign over the whole box.
pub fn tau_enclose(p: &Interval, sigma: &Interval, tol: f64) -> Result<Interval> {
    require_p(p)?;
    if sigma.lo() < 1.0 {
        return Err(ModuliError::Domain("σ must be at least 1"));
    }
    if !(tol > 0.0) {
        return Err(ModuliError::Domain("tolerance must be positive"));
    }
    let sp = sigma_p(p)?;
    if sigma.lo() > sp.hi() {
        return Err(ModuliError::BracketFailure);
    }
    let tp = tau_p(p, tol.min(1e-12))?;
    let r = |t: f64| residual(p, sigma, &Interval::point(t));
    // Both searches run on the fixed window [0, 1] so that the probed
    // points form the same dyadic grid for every box.
    let below = |t: f64| t <= tp.lo() && matches!(r(t), Ok(v) if v.hi() <= 0.0);
    let above = |t: f64| t >= tp.hi() || matches!(r(t), Ok(v) if v.lo() >= 0.0);
    let half = tol / 2.0;
    let lo = refine_lower(0.0, 1.0, half, below);
    let hi = refine_upper(0.0, 1.0, half, above).min(tp.hi());
    if lo > hi {
        // contradicts uniqueness of the root; never trust such a box
        return Err(ModuliError::BracketFailure);
    }
    Ok(Interval::new(lo, hi)?)
}

/// Mean-value enclosure of `F(p, σ(p,s), t)` over `P × S` at a fixed
/// `t`, expanded around the box center.
fn residual_mean_value(p: &Interval, s: &Interval, t: f64) -> Result<Interval> {
    let (pc, sc) = (Interval::point(p.midpoint()), Interval::point(s.midpoint()));
    let at_center = residual(&pc, &sigma_from_s(&pc, &sc)?, &Interval::point(t))?;
    let pj = Jet::<2>::var(*p, 0);
    let sj = Jet::<2>::var(*s, 1);
    let f = jets::residual(&pj, &jets::sigma_from_s(&pj, &sj)?, &Jet::constant(Interval::point(t)))?;
    let dp = f.grad[0].mul(&p.sub(&pc)?)?;
    let ds = f.grad[1].mul(&s.sub(&sc)?)?;
    Ok(at_center.add(&dp)?.add(&ds)?)
}

/// Encloses `τ(p, σ(p, s))` over the normalized box `P × S`.
///
/// Same bracketing as [`tau_enclose`], but a sign is also accepted when
/// the mean-value form of the residual over the box verifies it. Over
/// small boxes this removes most of the dependency between `p`, `σ` and
/// `u` in the natural extension, whose overestimate is amplified by the
/// small slope `∂F/∂τ` when `p` is close to 1.
pub fn tau_enclose_ps(p: &Interval, s: &Interval, tol: f64) -> Result<Interval> {
    require_p(p)?;
    if !(tol > 0.0) {
        return Err(ModuliError::Domain("tolerance must be positive"));
    }
    let sigma = sigma_from_s(p, s)?;
    let tp = tau_p(p, tol.min(1e-12))?;
    let natural = |t: f64| residual(p, &sigma, &Interval::point(t));
    let degenerate = p.is_degenerate() && s.is_degenerate();
    let mv = |t: f64| if degenerate { Err(ModuliError::BracketFailure) } else { residual_mean_value(p, s, t) };
    let below = |t: f64| {
        t <= tp.lo()
            && (matches!(natural(t), Ok(v) if v.hi() <= 0.0) || matches!(mv(t), Ok(v) if v.hi() <= 0.0))
    };
    let above = |t: f64| {
        t >= tp.hi() || matches!(natural(t), Ok(v) if v.lo() >= 0.0) || matches!(mv(t), Ok(v) if v.lo() >= 0.0)
    };
    let half = tol / 2.0;
    let lo = refine_lower(0.0, 1.0, half, below);
    let hi = refine_upper(0.0, 1.0, half, above).min(tp.hi());
    if lo > hi {
        return Err(ModuliError::BracketFailure);
    }
    Ok(Interval::new(lo, hi)?)
}

/// Enclosure of `Δ = (τ + σ) v u` over the given boxes.
pub fn delta(p: &Interval, sigma: &Interval, t: &Interval) -> Result<Interval> {
    require_p(p)?;
    let u = norm_factor(p, sigma)?;
    let v = norm_factor(p, t)?;
    Ok(t.add(sigma)?.mul(&v)?.mul(&u)?)
}

/// `Δ(p, 1) = (1 + τ_p) 2^{-2/p} / (1 − τ_p)`.
pub fn delta_at_sigma1(p: &Interval, tol: f64) -> Result<Interval> {
    let tp = tau_p(p, tol)?;
    // (1 + t)/(1 − t) is increasing on [0, 1)
    let ratio = |t: f64| -> Result<Interval> {
        let t = Interval::point(t);
        Ok(Interval::ONE.add(&t)?.div(&Interval::ONE.sub(&t)?)?)
    };
    let r = ratio(tp.lo())?.hull(&ratio(tp.hi())?);
    let scale = ln2().mul_f64(-2.0)?.div(p)?.exp()?;
    Ok(r.mul(&scale)?)
}

/// `Δ(p, σ_p) = σ_p / 2`.
pub fn delta_at_sigmap(p: &Interval) -> Result<Interval> {
    Ok(sigma_p(p)?.mul_f64(0.5)?)
}

/// Both fiber endpoint values and their interval minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointValues {
    pub delta_at_1: Interval,
    pub delta_at_sp: Interval,
    pub endpoint_min: Interval,
}

impl EndpointValues {
    pub fn new(p: &Interval, tol: f64) -> Result<Self> {
        let delta_at_1 = delta_at_sigma1(p, tol)?;
        let delta_at_sp = delta_at_sigmap(p)?;
        Ok(EndpointValues { delta_at_1, delta_at_sp, endpoint_min: delta_at_1.min_i(&delta_at_sp) })
    }
}

/// `σ = 1 + s (σ_p(p) − 1)` over `P × S`, clamped to `[1, σ_p(P).hi]`.
pub fn sigma_from_s(p: &Interval, s: &Interval) -> Result<Interval> {
    if s.lo() < 0.0 || s.hi() > 1.0 {
        return Err(ModuliError::Domain("normalized coordinate s must lie in [0, 1]"));
    }
    let sp = sigma_p(p)?;
    let sigma = Interval::ONE.add(&s.mul(&sp.sub(&Interval::ONE)?)?)?;
    Ok(sigma.clamp_lo(1.0).clamp_hi(sp.hi()))
}

/// A rectangle of the normalized `(p, s)` plane together with the fiber
/// quantities reconstructed over it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModuliBox {
    pub p: Interval,
    pub s: Interval,
    pub sigma: Interval,
    pub tau: Option<Interval>,
    pub depth: u32,
}

impl ModuliBox {
    pub fn new(p: Interval, s: Interval, depth: u32) -> Result<Self> {
        require_p(&p)?;
        let sigma = sigma_from_s(&p, &s)?;
        Ok(ModuliBox { p, s, sigma, tau: None, depth })
    }

    /// Computes and stores the τ enclosure.
    pub fn with_tau(mut self, tol: f64) -> Result<Self> {
        self.tau = Some(tau_enclose_ps(&self.p, &self.s, tol)?);
        Ok(self)
    }

    /// The two halves along `p` (axis 0) or `s` (axis 1).
    pub fn split(&self, axis: usize) -> Result<(ModuliBox, ModuliBox)> {
        let d = self.depth + 1;
        if axis == 0 {
            let (a, b) = self.p.bisect();
            Ok((ModuliBox::new(a, self.s, d)?, ModuliBox::new(b, self.s, d)?))
        } else {
            let (a, b) = self.s.bisect();
            Ok((ModuliBox::new(self.p, a, d)?, ModuliBox::new(self.p, b, d)?))
        }
    }
}
