//! The lower envelope `z_min(p) = min_{1 ≤ σ ≤ σ_p} Δ(p, σ)`.
//!
//! Branch and bound over `s ∈ [0, 1]`: boxes are kept in a heap ordered by
//! their lower bound, the best upper bound comes from midpoint and
//! endpoint evaluations, and boxes whose lower bound exceeds it are
//! dropped.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::enclosure::delta_bound;
use crate::interval::Interval;
use crate::moduli::{self, EndpointValues, ModuliBox, ModuliError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeOptions {
    /// Target width of the returned enclosure.
    pub tol: f64,
    pub tau_tol: f64,
    /// Maximum number of boxes evaluated.
    pub max_boxes: usize,
}

impl Default for EnvelopeOptions {
    fn default() -> Self {
        EnvelopeOptions { tol: 1e-9, tau_tol: 1e-12, max_boxes: 200_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    /// Encloses `z_min(p)` for every `p` in the input.
    pub enclosure: Interval,
    /// Whether the width target was met within the budget.
    pub converged: bool,
    pub boxes: usize,
}

struct Entry {
    lb: f64,
    b: ModuliBox,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // min-heap on the lower bound, then on the s position
    fn cmp(&self, other: &Self) -> Ordering {
        other.lb.total_cmp(&self.lb).then_with(|| other.b.s.lo().total_cmp(&self.b.s.lo()))
    }
}

/// Encloses `z_min` over `p` with the given options.
pub fn envelope_min(p: &Interval, opts: &EnvelopeOptions) -> Result<Envelope, ModuliError> {
    let ends = EndpointValues::new(p, opts.tau_tol)?;
    let mut upper = ends.endpoint_min.hi();
    let mut heap = BinaryHeap::new();
    let mut boxes = 0usize;

    let push = |b: ModuliBox, heap: &mut BinaryHeap<Entry>, upper: &mut f64, boxes: &mut usize| {
        *boxes += 1;
        let lb = delta_bound(&b, opts.tau_tol).map_or(f64::NEG_INFINITY, |d| d.lo());
        let mid = Interval::point(b.s.midpoint());
        if let Ok(d) = moduli::sigma_from_s(p, &mid)
            .and_then(|sigma| moduli::tau_enclose(p, &sigma, opts.tau_tol).and_then(|t| moduli::delta(p, &sigma, &t)))
        {
            *upper = upper.min(d.hi());
        }
        if lb <= *upper {
            heap.push(Entry { lb, b });
        }
    };

    push(ModuliBox::new(*p, Interval::new(0.0, 1.0).expect("ordered"), 0)?, &mut heap, &mut upper, &mut boxes);
    let mut lower = upper;
    let mut converged = false;
    while let Some(Entry { lb, b }) = heap.pop() {
        lower = lb;
        if upper - lb <= opts.tol {
            converged = true;
            break;
        }
        if boxes >= opts.max_boxes {
            break;
        }
        let (x, y) = b.s.bisect();
        if x.hi() <= x.lo() || y.hi() <= y.lo() {
            // the box cannot be split further; keep its bound
            heap.push(Entry { lb, b });
            break;
        }
        for half in [x, y] {
            push(ModuliBox::new(*p, half, b.depth + 1)?, &mut heap, &mut upper, &mut boxes);
        }
        lower = heap.peek().map_or(lb, |e| e.lb);
    }
    if heap.is_empty() {
        converged = upper - lower <= opts.tol;
    }
    let lower = lower.min(upper);
    Ok(Envelope { enclosure: Interval::new(lower, upper).expect("ordered"), converged, boxes })
}
