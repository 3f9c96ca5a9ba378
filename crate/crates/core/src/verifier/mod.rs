//! Adaptive verification of `Δ(p,σ) > min(Δ(p,1), Δ(p,σ_p))` over
//! rectangles of the normalized `(p, s)` plane.
//!
//! A [`Campaign`] is bisected depth-first. Each box is classified as
//! proven (the enclosure of `g` is strictly positive), excluded (it meets
//! a configured exclusion region) or indeterminate. Indeterminate boxes
//! and excluded boxes that are not wholly inside an exclusion are split
//! until `max_depth`. The leaves, sorted by their bounds, form the
//! [`Certificate`].

mod certificate;
pub mod enclosure;
mod envelope;
mod point;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::covering::ICell;
use crate::interval::Interval;
use crate::moduli::ModuliBox;

pub use certificate::{csv_records, CellRecord, Certificate, CertificateFile, Format, Header, Summary, CSV_COLUMNS};
pub use enclosure::g_bound;
pub use envelope::{envelope_min, Envelope, EnvelopeOptions};
pub use point::{point_report, PointReport, SigmaSpec};

/// `d` in the Theorem's exclusion box `2 ≤ p ≤ 2.000003`, `d ≤ σ ≤ σ_p`.
pub const THEOREM_D: f64 = 1.7320503;
/// Upper `p` of the Theorem's exclusion box.
pub const THEOREM_P_HI: f64 = 2.000003;
pub const DEFAULT_S_MARGIN: f64 = 0.05;
pub const DEFAULT_P2_MARGIN: f64 = 0.01;
pub const DEFAULT_TAU_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_DEPTH: u32 = 14;
/// Deepest subdivision accepted by [`Campaign::validate`].
pub const DEPTH_LIMIT: u32 = 60;

/// Description of the subdivision strategy, echoed in certificates.
pub const STRATEGY: &str = "depth-first bisection of indeterminate boxes along the widest extent \
normalized by the campaign widths (ties to p); excluded boxes not contained in an exclusion are \
also bisected; g enclosed by intersecting natural, mean-value and second-order Taylor forms";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    ProvenPositive,
    Indeterminate,
    Excluded,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::ProvenPositive => "PROVEN_POSITIVE",
            Status::Indeterminate => "INDETERMINATE",
            Status::Excluded => "EXCLUDED",
        }
    }
}

/// A rectangle `p × σ` of the original moduli coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exclusion {
    pub p: Interval,
    pub sigma: Interval,
}

impl Exclusion {
    /// `2 ≤ p ≤ 2.000003`, `σ ≥ d`. The σ range is capped at 2, which is
    /// above `σ_p` for every `p` in range.
    pub fn theorem(d: f64) -> Self {
        Exclusion {
            p: Interval::new(2.0, THEOREM_P_HI).expect("ordered"),
            sigma: Interval::new(d, 2.0).expect("d ≤ 2"),
        }
    }

    /// The whole fiber over `|p − 2| ≤ half_width`.
    pub fn p2_band(half_width: f64) -> Self {
        Exclusion {
            p: Interval::new(2.0 - half_width, 2.0 + half_width).expect("ordered"),
            sigma: Interval::new(1.0, 2.0).expect("ordered"),
        }
    }

    pub fn meets(&self, b: &ModuliBox) -> bool {
        self.p.overlaps(&b.p) && self.sigma.overlaps(&b.sigma)
    }

    pub fn contains(&self, b: &ModuliBox) -> bool {
        b.p.is_subset_of(&self.p) && b.sigma.is_subset_of(&self.sigma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Margins {
    pub s_lo: f64,
    pub s_hi: f64,
    pub p2: f64,
}

impl Default for Margins {
    fn default() -> Self {
        Margins { s_lo: DEFAULT_S_MARGIN, s_hi: DEFAULT_S_MARGIN, p2: DEFAULT_P2_MARGIN }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CampaignError {
    #[error("p range must satisfy 1 < p_min <= p_max < inf, got {0}")]
    PRange(Interval),
    #[error("s range {s} must lie inside [{lo}, {hi}] allowed by the margins")]
    SRange { s: Interval, lo: f64, hi: f64 },
    #[error("margins must be positive and leave a nonempty s range")]
    Margins,
    #[error("tau_tol must be positive and finite, got {0}")]
    TauTol(f64),
    #[error("max_depth must be at most {DEPTH_LIMIT}, got {0}")]
    Depth(u32),
}

/// A verification job over `p_range × s_range`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Campaign {
    pub p_range: Interval,
    pub s_range: Interval,
    pub max_depth: u32,
    pub tau_tol: f64,
    pub exclusions: Vec<Exclusion>,
    pub margins: Margins,
}

impl Campaign {
    /// A campaign with default depth, tolerance, margins and the default
    /// exclusions (the Theorem's box and the band around `p = 2`).
    pub fn new(p_range: Interval, s_range: Interval) -> Self {
        let margins = Margins::default();
        Campaign {
            p_range,
            s_range,
            max_depth: DEFAULT_MAX_DEPTH,
            tau_tol: DEFAULT_TAU_TOL,
            exclusions: vec![Exclusion::theorem(THEOREM_D), Exclusion::p2_band(margins.p2)],
            margins,
        }
    }

    pub fn max_depth(mut self, depth: u32) -> Self {
        self.max_depth = depth;
        self
    }

    pub fn tau_tol(mut self, tol: f64) -> Self {
        self.tau_tol = tol;
        self
    }

    pub fn exclusions(mut self, exclusions: Vec<Exclusion>) -> Self {
        self.exclusions = exclusions;
        self
    }

    pub fn margins(mut self, margins: Margins) -> Self {
        self.margins = margins;
        self
    }

    pub fn validate(&self) -> Result<(), CampaignError> {
        let p = self.p_range;
        if !(p.lo() > 1.0 && p.hi().is_finite()) {
            return Err(CampaignError::PRange(p));
        }
        let m = self.margins;
        if !(m.s_lo > 0.0 && m.s_hi > 0.0 && m.p2 > 0.0 && m.s_lo + m.s_hi < 1.0) {
            return Err(CampaignError::Margins);
        }
        let (lo, hi) = (m.s_lo, 1.0 - m.s_hi);
        if self.s_range.lo() < lo || self.s_range.hi() > hi {
            return Err(CampaignError::SRange { s: self.s_range, lo, hi });
        }
        if !(self.tau_tol > 0.0 && self.tau_tol.is_finite()) {
            return Err(CampaignError::TauTol(self.tau_tol));
        }
        if self.max_depth > DEPTH_LIMIT {
            return Err(CampaignError::Depth(self.max_depth));
        }
        Ok(())
    }

    fn inside_exclusion(&self, b: &ModuliBox) -> bool {
        self.exclusions.iter().any(|e| e.contains(b))
    }

    /// Axis to bisect: the wider extent after scaling by the campaign
    /// widths, `p` on ties; `None` when neither extent can be split.
    fn split_axis(&self, b: &ModuliBox) -> Option<usize> {
        let norm = |x: &Interval, r: &Interval| if r.width() > 0.0 { x.width() / r.width() } else { 0.0 };
        let wp = norm(&b.p, &self.p_range);
        let ws = norm(&b.s, &self.s_range);
        let splittable = |x: &Interval| {
            let m = x.midpoint();
            m > x.lo() && m < x.hi()
        };
        let order = if wp >= ws { [(0, wp, b.p), (1, ws, b.s)] } else { [(1, ws, b.s), (0, wp, b.p)] };
        order.into_iter().find(|(_, w, x)| *w > 0.0 && splittable(x)).map(|(axis, _, _)| axis)
    }
}

/// A classified box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerdictCell {
    pub bx: ModuliBox,
    pub status: Status,
    pub g_enclosure: Option<Interval>,
    pub depth: u32,
}

impl VerdictCell {
    pub fn cell(&self) -> ICell {
        ICell::new(vec![self.bx.p, self.bx.s])
    }

    fn key_cmp(&self, other: &Self) -> Ordering {
        let k = |c: &VerdictCell| [c.bx.p.lo(), c.bx.p.hi(), c.bx.s.lo(), c.bx.s.hi()];
        let (a, b) = (k(self), k(other));
        a.iter().zip(b.iter()).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
    }
}

/// Classifies one box against the exclusions and the sign of `g`.
pub fn classify(b: &ModuliBox, exclusions: &[Exclusion], tau_tol: f64) -> VerdictCell {
    classify_with(b, exclusions, tau_tol, &enclosure::HESSIAN_GRIDS)
}

fn classify_with(b: &ModuliBox, exclusions: &[Exclusion], tau_tol: f64, grids: &[usize]) -> VerdictCell {
    if exclusions.iter().any(|e| e.meets(b)) {
        return VerdictCell { bx: *b, status: Status::Excluded, g_enclosure: None, depth: b.depth };
    }
    let g = enclosure::g_bound_with(b, tau_tol, grids);
    let status = match g {
        Some(g) if g.lo() > 0.0 => Status::ProvenPositive,
        _ => Status::Indeterminate,
    };
    VerdictCell { bx: *b, status, g_enclosure: g, depth: b.depth }
}

fn indeterminate(b: ModuliBox) -> VerdictCell {
    VerdictCell { bx: b, status: Status::Indeterminate, g_enclosure: None, depth: b.depth }
}

fn explore(c: &Campaign, b: ModuliBox) -> Vec<VerdictCell> {
    let grids: &[usize] = if b.depth >= c.max_depth { &enclosure::HESSIAN_GRIDS } else { &enclosure::HESSIAN_GRIDS[..1] };
    let cell = classify_with(&b, &c.exclusions, c.tau_tol, grids);
    let refine = match cell.status {
        Status::ProvenPositive => false,
        Status::Indeterminate => true,
        Status::Excluded => !c.inside_exclusion(&b),
    };
    if !refine || b.depth >= c.max_depth {
        return vec![cell];
    }
    let Some(axis) = c.split_axis(&b) else {
        return vec![cell];
    };
    let (lo, hi) = match b.split(axis) {
        Ok(halves) => halves,
        Err(_) => return vec![cell],
    };
    let (mut left, right) = rayon::join(|| explore(c, lo), || explore(c, hi));
    left.extend(right);
    left
}

/// Runs a campaign. The caller is expected to have validated it; an
/// invalid root box yields a single indeterminate leaf.
pub fn verify(c: &Campaign) -> Certificate {
    let root = ModuliBox::new(c.p_range, c.s_range, 0);
    let mut leaves = match root {
        Ok(b) => explore(c, b),
        Err(_) => {
            let sigma = Interval::new(1.0, 2.0).expect("ordered");
            vec![indeterminate(ModuliBox { p: c.p_range, s: c.s_range, sigma, tau: None, depth: 0 })]
        }
    };
    leaves.sort_by(|a, b| a.key_cmp(b));
    Certificate::new(c.clone(), leaves)
}

#[cfg(test)]
mod tests;
