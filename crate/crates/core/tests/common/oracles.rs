//! Reference values and plain-f64 models, independent of the crate.

use std::cmp::Ordering;

use critdet::Interval;

// 50-digit values computed with mpmath at 60 digits.
pub const HALF_SQRT3: &str = "0.86602540378443864676372317075293618347140262690519";
pub const HALF_CBRT7: &str = "0.95646559138619455059955841977438014143121952517294";
pub const HALF_SIGMA_P15: &str = "0.7476329633391928498088237125878872487488793152652";
pub const DELTA1_P3: &str = "0.95296984006826371026223081099198837978273711912753";

/// Compares a finite `x` with a non-negative decimal `d` without rounding.
pub fn cmp_decimal(x: f64, d: &str) -> Ordering {
    assert!(!d.starts_with('-'));
    if x < 0.0 {
        return Ordering::Less;
    }
    let exact = format!("{x:.1100}");
    let split = |s: &str| -> (String, String) {
        let (i, f) = s.split_once('.').unwrap_or((s, ""));
        (i.trim_start_matches('0').to_string(), f.trim_end_matches('0').to_string())
    };
    let (xi, xf) = split(&exact);
    let (di, df) = split(d);
    xi.len().cmp(&di.len()).then_with(|| xi.cmp(&di)).then_with(|| {
        let n = xf.len().max(df.len());
        format!("{xf:0<n$}").cmp(&format!("{df:0<n$}"))
    })
}

pub fn encloses_decimal(x: &Interval, d: &str) -> bool {
    cmp_decimal(x.lo(), d) != Ordering::Greater && cmp_decimal(x.hi(), d) != Ordering::Less
}

fn norm(p: f64, x: f64) -> f64 {
    (1.0 + x.powf(p)).powf(-1.0 / p)
}

pub fn sigma_p(p: f64) -> f64 {
    (2f64.powf(p) - 1.0).powf(1.0 / p)
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) <= 0.0) == (f_lo <= 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn tau_p(p: f64) -> f64 {
    bisect(0.0, 1.0, |t| 2.0 * (1.0 - t).powf(p) - 1.0 - t.powf(p))
}

pub fn tau(p: f64, sigma: f64) -> f64 {
    let u = norm(p, sigma);
    let f = |t: f64| {
        let v = norm(p, t);
        (v - u).abs().powf(p) + (sigma * u + t * v).powf(p) - 1.0
    };
    bisect(0.0, tau_p(p), f)
}

pub fn delta(p: f64, sigma: f64) -> f64 {
    let t = tau(p, sigma);
    (t + sigma) * norm(p, t) * norm(p, sigma)
}

pub fn g(p: f64, sigma: f64) -> f64 {
    delta(p, sigma) - delta(p, 1.0).min(0.5 * sigma_p(p))
}

/// `τ(2, σ) = (√3 − σ)/(1 + √3 σ)`.
pub fn tau2(sigma: f64) -> f64 {
    let r3 = 3f64.sqrt();
    (r3 - sigma) / (1.0 + r3 * sigma)
}
