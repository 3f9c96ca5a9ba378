//! Enclosures of `g(p, s) = Δ(p, σ(p,s)) − min(Δ(p,1), Δ(p,σ_p))` and of
//! `Δ(p, σ(p,s))` over `(p, s)` boxes.
//!
//! Three enclosures are intersected:
//!
//! * the natural interval extension of the formula;
//! * the mean-value form around the box center;
//! * the second-order Taylor form around the box center.
//!
//! Near `σ = 1` the fiber derivative of `Δ` vanishes, so `g` grows only
//! quadratically in `s`, and every derivative of `g` is a difference of
//! nearly equal terms. The derivative bounds over a box are therefore
//! loose. When the first attempt does not decide the sign, the gradient
//! and Hessian bounds are recomputed as the hull of jets over a grid of
//! `k × k` sub-boxes (each with its own `τ` enclosure), while the
//! expansion itself stays centered on the whole box.
//!
//! The derivative forms are built per branch of `g = max(Δ − Δ(p,1),
//! Δ − Δ(p,σ_p))`, which keeps both branches smooth.

use crate::interval::Interval;
use crate::jet::{Jet, TaylorForm};
use crate::moduli::{self, jets, EndpointValues, ModuliBox, ModuliError};

/// Sub-box grid sizes tried in turn by [`g_bound`].
pub const HESSIAN_GRIDS: [usize; 3] = [1, 2, 4];

fn box_tau(b: &ModuliBox, tau_tol: f64) -> Result<Interval, ModuliError> {
    match b.tau {
        Some(t) => Ok(t),
        None => moduli::tau_enclose_ps(&b.p, &b.s, tau_tol),
    }
}

/// Natural interval extension of `g`.
pub fn natural(b: &ModuliBox, tau_tol: f64) -> Result<Interval, ModuliError> {
    let d = moduli::delta(&b.p, &b.sigma, &box_tau(b, tau_tol)?)?;
    let ends = EndpointValues::new(&b.p, tau_tol)?;
    Ok(d.sub(&ends.endpoint_min)?)
}

/// `k` consecutive pieces of `x`; neighbours share bit-identical ends.
fn pieces(x: &Interval, k: usize) -> Vec<Interval> {
    let (lo, w) = (x.lo(), x.hi() - x.lo());
    let cut = |i: usize| if i == 0 { lo } else if i == k { x.hi() } else { (lo + w * i as f64 / k as f64).clamp(lo, x.hi()) };
    (0..k).map(|i| Interval::new(cut(i), cut(i + 1)).expect("ordered cuts")).collect()
}

type JetFn<'a, const K: usize> = dyn Fn(&Interval, &Interval, &Interval) -> Result<[Jet<2>; K], ModuliError> + 'a;

/// Jets over the box, as the hull over a `k × k` grid of sub-boxes.
fn jets_over<const K: usize>(b: &ModuliBox, tau_tol: f64, k: usize, f: &JetFn<K>) -> Result<[Jet<2>; K], ModuliError> {
    if k <= 1 {
        return f(&b.p, &b.s, &box_tau(b, tau_tol)?);
    }
    let mut out: Option<[Jet<2>; K]> = None;
    for p in pieces(&b.p, k) {
        for s in pieces(&b.s, k) {
            let t = moduli::tau_enclose_ps(&p, &s, tau_tol)?;
            let j = f(&p, &s, &t)?;
            out = Some(match out {
                None => j,
                Some(prev) => std::array::from_fn(|i| prev[i].hull(&j[i])),
            });
        }
    }
    out.ok_or(ModuliError::BracketFailure)
}

/// Evaluates `f` at the center point and over the box and returns the
/// value enclosure intersected with both derivative forms.
fn refine<const K: usize>(b: &ModuliBox, tau_tol: f64, k: usize, f: &JetFn<K>) -> Result<[Interval; K], ModuliError> {
    let (pc, sc) = (b.p.midpoint(), b.s.midpoint());
    let (pcx, scx) = (Interval::point(pc), Interval::point(sc));
    let tc = moduli::tau_enclose_ps(&pcx, &scx, tau_tol)?;
    let center = f(&pcx, &scx, &tc)?;
    let over_box = jets_over(b, tau_tol, k, f)?;
    let form = TaylorForm::new(&[b.p, b.s], &[pc, sc])?;
    let mut out = [Interval::ZERO; K];
    for (k, (c, x)) in center.iter().zip(over_box.iter()).enumerate() {
        let mut e = x.value;
        for candidate in [form.mean_value(c, x), form.second_order(c, x)] {
            if let Ok(f) = candidate {
                e = e.intersect(&f).unwrap_or(e);
            }
        }
        out[k] = e;
    }
    Ok(out)
}

/// Both branches of `g` refined by the derivative forms with a `k × k`
/// Hessian grid, combined with `max`.
pub fn derivative_forms(b: &ModuliBox, tau_tol: f64, k: usize) -> Result<Interval, ModuliError> {
    let tp_tol = tau_tol.min(1e-12);
    let f = |p: &Interval, s: &Interval, t: &Interval| Ok(jets::g_branches(p, s, t, &moduli::tau_p(p, tp_tol)?)?);
    let [d1, d2] = refine(b, tau_tol, k, &f)?;
    Ok(d1.max_i(&d2))
}

fn meet(a: Option<Interval>, b: Option<Interval>) -> Option<Interval> {
    match (a, b) {
        // disjoint enclosures cannot both be valid; fall back to the hull
        (Some(a), Some(b)) => Some(a.intersect(&b).unwrap_or_else(|| a.hull(&b))),
        (a, b) => a.or(b),
    }
}

fn decided(g: &Option<Interval>) -> bool {
    matches!(g, Some(g) if g.lo() > 0.0 || g.hi() <= 0.0)
}

/// Best available enclosure of `g` over the box, or `None` when nothing
/// finite could be computed (the whole real line).
pub fn g_bound(b: &ModuliBox, tau_tol: f64) -> Option<Interval> {
    g_bound_with(b, tau_tol, &HESSIAN_GRIDS)
}

/// [`g_bound`] trying only the given Hessian grid sizes.
pub fn g_bound_with(b: &ModuliBox, tau_tol: f64, grids: &[usize]) -> Option<Interval> {
    let mut g = natural(b, tau_tol).ok();
    for &k in grids {
        if decided(&g) {
            break;
        }
        g = meet(g, derivative_forms(b, tau_tol, k).ok());
    }
    g
}

/// Best available enclosure of `Δ(p, σ(p,s))` over the box, using a
/// single Hessian grid cell.
pub fn delta_bound(b: &ModuliBox, tau_tol: f64) -> Option<Interval> {
    let natural = box_tau(b, tau_tol).and_then(|t| Ok(moduli::delta(&b.p, &b.sigma, &t)?)).ok();
    let f = |p: &Interval, s: &Interval, t: &Interval| Ok([jets::delta_of_ps(p, s, t)?]);
    let derived = refine(b, tau_tol, 1, &f).ok().map(|[d]| d);
    meet(natural, derived)
}
