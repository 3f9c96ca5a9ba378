//! Enclosures of every moduli quantity at a single `(p, σ)`.

use serde::Serialize;

use crate::interval::Interval;
use crate::moduli::{self, EndpointValues, ModuliError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaSpec {
    Value(f64),
    /// The fiber end `σ_p`, taken as its enclosure.
    SigmaP,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointReport {
    pub p: f64,
    pub sigma: Interval,
    pub sigma_p: Interval,
    pub tau_p: Interval,
    pub tau: Interval,
    pub delta: Interval,
    pub delta_at_1: Interval,
    pub delta_at_sigma_p: Interval,
    pub g: Interval,
}

pub fn point_report(p: f64, sigma: SigmaSpec, tau_tol: f64) -> Result<PointReport, ModuliError> {
    if !(p.is_finite() && p > 1.0) {
        return Err(ModuliError::Domain("p must be a finite number greater than 1"));
    }
    let pi = Interval::point(p);
    let sigma_p = moduli::sigma_p(&pi)?;
    let sigma = match sigma {
        SigmaSpec::SigmaP => sigma_p,
        SigmaSpec::Value(s) => {
            if !(s.is_finite() && s >= 1.0 && s <= sigma_p.hi()) {
                return Err(ModuliError::Domain("sigma must satisfy 1 <= sigma <= sigma_p"));
            }
            Interval::point(s)
        }
    };
    let tau = moduli::tau_enclose(&pi, &sigma, tau_tol)?;
    let delta = moduli::delta(&pi, &sigma, &tau)?;
    let ends = EndpointValues::new(&pi, tau_tol)?;
    Ok(PointReport {
        p,
        sigma,
        sigma_p,
        tau_p: moduli::tau_p(&pi, tau_tol)?,
        tau,
        delta,
        delta_at_1: ends.delta_at_1,
        delta_at_sigma_p: ends.delta_at_sp,
        g: delta.sub(&ends.endpoint_min)?,
    })
}
