//! Jet versions of the moduli formulas, used for derivative-based
//! enclosures of `g = Δ − min(Δ(p,1), Δ(p,σ_p))` over `(p, s)` boxes.
//!
//! The implicit functions `τ(p, s)` and `τ_p(p)` get their derivatives
//! from the implicit function theorem: for `Φ(x, t) = 0`,
//!
//! ```text
//! t_i  = −Φ_i / Φ_t
//! t_ij = −(Φ_ij + Φ_it t_j + Φ_jt t_i + Φ_tt t_i t_j) / Φ_t
//! ```

use crate::interval::{Interval, Result};
use crate::jet::Jet;

fn ln2() -> Interval {
    Interval::point(2.0).ln().expect("ln 2")
}

/// `(2^p − 1)^{1/p}`.
pub fn sigma_p<const N: usize>(p: &Jet<N>) -> Result<Jet<N>> {
    let two_p = p.scale(&ln2())?.exp()?;
    two_p.add_scalar(-1.0)?.ln()?.div(p)?.exp()
}

/// `1 + s (σ_p(p) − 1)`.
pub fn sigma_from_s<const N: usize>(p: &Jet<N>, s: &Jet<N>) -> Result<Jet<N>> {
    let mut out = s.mul(&sigma_p(p)?.add_scalar(-1.0)?)?.add_scalar(1.0)?;
    out.value = out.value.clamp_lo(1.0);
    Ok(out)
}

/// `(1 + x^p)^{-1/p}` for `x > 0`.
fn norm_factor<const N: usize>(p: &Jet<N>, x: &Jet<N>) -> Result<Jet<N>> {
    let inner = x.pow(p)?.add_scalar(1.0)?;
    inner.ln()?.div(p)?.neg().exp()
}

/// `A^p + B^p − 1` with `τ` as its own jet variable.
pub fn residual<const N: usize>(p: &Jet<N>, sigma: &Jet<N>, t: &Jet<N>) -> Result<Jet<N>> {
    let u = norm_factor(p, sigma)?;
    let v = norm_factor(p, t)?;
    let a = v.sub(&u)?;
    let b = sigma.mul(&u)?.add(&t.mul(&v)?)?;
    a.pow(p)?.add(&b.pow(p)?)?.add_scalar(-1.0)
}

/// `(τ + σ) v u`.
pub fn delta<const N: usize>(p: &Jet<N>, sigma: &Jet<N>, t: &Jet<N>) -> Result<Jet<N>> {
    let u = norm_factor(p, sigma)?;
    let v = norm_factor(p, t)?;
    t.add(sigma)?.mul(&v)?.mul(&u)
}

/// Jet of `τ(p, s)` in the variables `(p, s)`, given an enclosure `tau` of
/// its values over the box.
pub fn tau_of_ps(p: &Interval, s: &Interval, tau: &Interval) -> Result<Jet<2>> {
    let p3 = Jet::<3>::var(*p, 0);
    let s3 = Jet::<3>::var(*s, 1);
    let t3 = Jet::<3>::var(*tau, 2);
    let sigma3 = sigma_from_s(&p3, &s3)?;
    let f = residual(&p3, &sigma3, &t3)?;
    implicit::<2, 3>(*tau, &f)
}

/// Jet of `τ_p(p)` in the variables `(p, s)` (constant in `s`).
pub fn tau_p_of_ps(p: &Interval, tau_p: &Interval) -> Result<Jet<2>> {
    let pj = Jet::<2>::var(*p, 0);
    let tj = Jet::<2>::var(*tau_p, 1);
    let one_minus = tj.neg().add_scalar(1.0)?;
    let h = one_minus.pow(&pj)?.scale(&Interval::point(2.0))?.sub(&tj.pow(&pj)?.add_scalar(1.0)?)?;
    let t1 = implicit::<1, 2>(*tau_p, &h)?;
    let mut out = Jet::<2>::constant(t1.value);
    out.grad[0] = t1.grad[0];
    out.hess[0][0] = t1.hess[0][0];
    Ok(out)
}

/// Solves for the derivatives of `t(x)` defined by `phi(x, t(x)) = 0`,
/// where `phi` is a jet in `M = N + 1` variables with `t` last.
fn implicit<const N: usize, const M: usize>(value: Interval, phi: &Jet<M>) -> Result<Jet<N>> {
    debug_assert_eq!(M, N + 1);
    let ti = N;
    let phi_t = phi.grad[ti];
    let mut out = Jet::<N>::constant(value);
    for i in 0..N {
        out.grad[i] = phi.grad[i].div(&phi_t)?.neg();
    }
    for i in 0..N {
        for k in i..N {
            let num = phi.hess[i][k]
                .add(&phi.hess[i][ti].mul(&out.grad[k])?)?
                .add(&phi.hess[k][ti].mul(&out.grad[i])?)?
                .add(&phi.hess[ti][ti].mul(&out.grad[i].mul(&out.grad[k])?)?)?;
            let h = num.div(&phi_t)?.neg();
            out.hess[i][k] = h;
            out.hess[k][i] = h;
        }
    }
    Ok(out)
}

/// Jet of `Δ(p, σ(p, s))` in `(p, s)`.
pub fn delta_of_ps(p: &Interval, s: &Interval, tau: &Interval) -> Result<Jet<2>> {
    let pj = Jet::<2>::var(*p, 0);
    let sj = Jet::<2>::var(*s, 1);
    let sigma = sigma_from_s(&pj, &sj)?;
    let tj = tau_of_ps(p, s, tau)?;
    delta(&pj, &sigma, &tj)
}

/// Jets of `Δ − Δ(p,1)` and `Δ − Δ(p,σ_p)` in `(p, s)`.
///
/// `g = max` of the two, so each branch gives a lower bound on `g` and
/// the pair gives an enclosure.
pub fn g_branches(p: &Interval, s: &Interval, tau: &Interval, tau_p: &Interval) -> Result<[Jet<2>; 2]> {
    let pj = Jet::<2>::var(*p, 0);
    let d = delta_of_ps(p, s, tau)?;

    let tpj = tau_p_of_ps(p, tau_p)?;
    let ratio = tpj.add_scalar(1.0)?.div(&tpj.neg().add_scalar(1.0)?)?;
    let scale = pj.recip()?.scale(&ln2().mul_f64(-2.0)?)?.exp()?;
    let d1 = ratio.mul(&scale)?;
    let d2 = sigma_p(&pj)?.scale(&Interval::point(0.5))?;
    Ok([d.sub(&d1)?, d.sub(&d2)?])
}
