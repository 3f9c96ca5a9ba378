//! Interval cells, coverings, and constant-sign continuation.
//!
//! An [`ICell`] is a product of closed intervals, some of which may be
//! degenerate; its dimension is the number of non-degenerate extents. A
//! [`Covering`] is a finite set of full-dimensional cells over a domain
//! cell. Two cells are adjacent when they touch along a piece of an
//! `(n−1)`-face: one coordinate has a bit-identical shared endpoint and
//! every other coordinate overlaps with positive length. Bisection only
//! ever creates bit-identical shared endpoints, so exact comparison is
//! enough for coverings built that way.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::{Interval, SignClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoveringError {
    #[error("cell {index} has ambient dimension {got}, expected {expected}")]
    AmbientMismatch { index: usize, got: usize, expected: usize },
    #[error("cell {0} is not full-dimensional")]
    Degenerate(usize),
    #[error("seed cell {0} does not exist")]
    SeedOutOfRange(usize),
    #[error("the enclosure on the seed cell contains zero")]
    SeedIndeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ICell {
    extents: Vec<Interval>,
}

impl ICell {
    pub fn new(extents: Vec<Interval>) -> Self {
        ICell { extents }
    }

    /// A cell from `(lo, hi)` pairs.
    pub fn from_bounds(bounds: &[(f64, f64)]) -> Result<Self, crate::IntervalError> {
        let extents = bounds.iter().map(|&(lo, hi)| Interval::new(lo, hi)).collect::<Result<_, _>>()?;
        Ok(ICell { extents })
    }

    pub fn extents(&self) -> &[Interval] {
        &self.extents
    }

    pub fn ambient_dim(&self) -> usize {
        self.extents.len()
    }

    pub fn dimension(&self) -> usize {
        self.extents.iter().filter(|x| !x.is_degenerate()).count()
    }

    /// The `2m` faces obtained by pinning one non-degenerate extent to one
    /// of its endpoints, low end first.
    pub fn faces(&self) -> Vec<ICell> {
        let mut out = Vec::with_capacity(2 * self.dimension());
        for (i, x) in self.extents.iter().enumerate() {
            if x.is_degenerate() {
                continue;
            }
            for end in [x.lo(), x.hi()] {
                let mut f = self.clone();
                f.extents[i] = Interval::point(end);
                out.push(f);
            }
        }
        out
    }

    /// Product of the widths.
    pub fn measure(&self) -> f64 {
        self.extents.iter().map(|x| x.hi() - x.lo()).product()
    }

    pub fn is_subset_of(&self, other: &ICell) -> bool {
        self.ambient_dim() == other.ambient_dim()
            && self.extents.iter().zip(&other.extents).all(|(a, b)| a.is_subset_of(b))
    }

    /// Intersection, if nonempty.
    pub fn intersect(&self, other: &ICell) -> Option<ICell> {
        let extents = self.extents.iter().zip(&other.extents).map(|(a, b)| a.intersect(b)).collect::<Option<_>>()?;
        Some(ICell { extents })
    }

    /// True when the interiors meet, i.e. every coordinate overlaps with
    /// positive length.
    pub fn interiors_meet(&self, other: &ICell) -> bool {
        self.extents.iter().zip(&other.extents).all(|(a, b)| a.lo() < b.hi() && b.lo() < a.hi())
    }

    /// True when the cells share a piece of an `(n−1)`-face.
    pub fn is_adjacent(&self, other: &ICell) -> bool {
        if self.ambient_dim() != other.ambient_dim() {
            return false;
        }
        let mut touching = 0;
        for (a, b) in self.extents.iter().zip(&other.extents) {
            if a.lo() < b.hi() && b.lo() < a.hi() {
                continue;
            }
            if a.hi() == b.lo() || b.hi() == a.lo() {
                touching += 1;
            } else {
                return false;
            }
        }
        touching == 1
    }

    /// Index of the widest non-degenerate extent, lowest index on ties.
    pub fn widest_axis(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, x) in self.extents.iter().enumerate() {
            let w = x.hi() - x.lo();
            if w > 0.0 && best.map_or(true, |(_, bw)| w > bw) {
                best = Some((i, w));
            }
        }
        best.map(|(i, _)| i)
    }

    /// The two halves along `axis`.
    pub fn bisect(&self, axis: usize) -> (ICell, ICell) {
        let (lo, hi) = self.extents[axis].bisect();
        let (mut a, mut b) = (self.clone(), self.clone());
        a.extents[axis] = lo;
        b.extents[axis] = hi;
        (a, b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Covering {
    cells: Vec<ICell>,
    domain: ICell,
}

impl Covering {
    pub fn new(cells: Vec<ICell>, domain: ICell) -> Result<Self, CoveringError> {
        let n = domain.ambient_dim();
        for (index, c) in cells.iter().enumerate() {
            if c.ambient_dim() != n {
                return Err(CoveringError::AmbientMismatch { index, got: c.ambient_dim(), expected: n });
            }
            if c.dimension() != n {
                return Err(CoveringError::Degenerate(index));
            }
        }
        Ok(Covering { cells, domain })
    }

    /// The one-cell covering of a full-dimensional domain.
    pub fn trivial(domain: ICell) -> Result<Self, CoveringError> {
        Covering::new(vec![domain.clone()], domain)
    }

    pub fn cells(&self) -> &[ICell] {
        &self.cells
    }

    pub fn domain(&self) -> &ICell {
        &self.domain
    }

    /// Sum of the cell measures.
    pub fn total_measure(&self) -> f64 {
        self.cells.iter().map(ICell::measure).sum()
    }

    pub fn validate(&self) -> CoveringReport {
        validate_covering(self)
    }

    /// Bisects every cell selected by `rule` along its widest extent.
    /// Halves replace their parent in place, low half first.
    pub fn subdivide(&self, rule: impl Fn(&ICell) -> bool) -> Covering {
        let mut cells = Vec::with_capacity(self.cells.len());
        for c in &self.cells {
            match c.widest_axis().filter(|_| rule(c)) {
                Some(axis) => {
                    let (a, b) = c.bisect(axis);
                    cells.push(a);
                    cells.push(b);
                }
                None => cells.push(c.clone()),
            }
        }
        Covering { cells, domain: self.domain.clone() }
    }
}

/// Outcome of [`validate_covering`].
#[derive(Debug, Clone, PartialEq)]
pub struct CoveringReport {
    pub domain_measure: f64,
    /// Sum over cells of the measure of their intersection with the domain.
    pub covered_measure: f64,
    /// Uncovered measure, when larger than the rounding allowance.
    pub deficit: Option<f64>,
    /// Pairs of cells whose interiors meet, each with the lower index first.
    pub overlaps: Vec<(usize, usize)>,
}

impl CoveringReport {
    pub fn is_valid(&self) -> bool {
        self.deficit.is_none() && self.overlaps.is_empty()
    }
}

/// Pairs `(i, j)`, `i < j`, that pass the closed-overlap test on the first
/// coordinate and satisfy `pred`. Sort-and-sweep on the first coordinate.
fn sweep_pairs(cells: &[ICell], pred: impl Fn(&ICell, &ICell) -> bool) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..cells.len()).collect();
    if cells.first().map_or(true, |c| c.ambient_dim() == 0) {
        return Vec::new();
    }
    let lo = |i: usize| cells[i].extents[0].lo();
    let hi = |i: usize| cells[i].extents[0].hi();
    order.sort_by(|&a, &b| lo(a).total_cmp(&lo(b)).then(a.cmp(&b)));
    let mut out = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if lo(j) > hi(i) {
                break;
            }
            if pred(&cells[i], &cells[j]) {
                out.push((i.min(j), i.max(j)));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Checks that the cells cover the domain (by measure) and that no two
/// interiors meet.
pub fn validate_covering(cov: &Covering) -> CoveringReport {
    let domain_measure = cov.domain.measure();
    let covered_measure: f64 =
        cov.cells.iter().filter_map(|c| c.intersect(&cov.domain)).map(|c| c.measure()).sum();
    let allowance = 4.0 * f64::EPSILON * domain_measure * (cov.cells.len().max(1) as f64);
    let deficit = domain_measure - covered_measure;
    CoveringReport {
        domain_measure,
        covered_measure,
        deficit: (deficit > allowance).then_some(deficit),
        overlaps: sweep_pairs(&cov.cells, ICell::interiors_meet),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyGraph {
    neighbors: Vec<Vec<usize>>,
}

impl AdjacencyGraph {
    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    /// Unordered edges as `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> =
            self.neighbors.iter().enumerate().flat_map(|(i, ns)| ns.iter().filter(move |&&j| i < j).map(move |&j| (i, j))).collect();
        out.sort_unstable();
        out
    }

    /// Subgraph induced by `nodes`, renumbered in the given order.
    pub fn induced(&self, nodes: &[usize]) -> AdjacencyGraph {
        let mut index = vec![usize::MAX; self.len()];
        for (k, &i) in nodes.iter().enumerate() {
            index[i] = k;
        }
        let neighbors = nodes
            .iter()
            .map(|&i| self.neighbors[i].iter().filter(|&&j| index[j] != usize::MAX).map(|&j| index[j]).collect())
            .collect();
        AdjacencyGraph { neighbors }
    }
}

pub fn adjacency_graph(cells: &[ICell]) -> AdjacencyGraph {
    let mut neighbors = vec![Vec::new(); cells.len()];
    for (i, j) in sweep_pairs(cells, ICell::is_adjacent) {
        neighbors[i].push(j);
        neighbors[j].push(i);
    }
    for ns in &mut neighbors {
        ns.sort_unstable();
    }
    AdjacencyGraph { neighbors }
}

/// Nodes reachable from `start` through nodes accepted by `allow`,
/// in breadth-first order.
fn reach(g: &AdjacencyGraph, start: usize, allow: impl Fn(usize) -> bool, seen: &mut [bool]) -> Vec<usize> {
    let mut out = vec![start];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(i) = queue.pop_front() {
        for &j in g.neighbors(i) {
            if !seen[j] && allow(j) {
                seen[j] = true;
                out.push(j);
                queue.push_back(j);
            }
        }
    }
    out
}

/// Connected components, each sorted, ordered by smallest member.
pub fn components(g: &AdjacencyGraph) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.len()];
    let mut out = Vec::new();
    for i in 0..g.len() {
        if !seen[i] {
            let mut c = reach(g, i, |_| true, &mut seen);
            c.sort_unstable();
            out.push(c);
        }
    }
    out
}

/// The empty graph counts as connected.
pub fn is_connected(g: &AdjacencyGraph) -> bool {
    components(g).len() <= 1
}

/// A cell with an enclosure of some function's range over it.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalElement {
    pub cell: ICell,
    pub enclosure: Interval,
    pub sign: SignClass,
}

impl FunctionalElement {
    pub fn new(cell: ICell, enclosure: Interval) -> Self {
        let sign = enclosure.sign();
        FunctionalElement { cell, enclosure, sign }
    }

    /// A correct element: the enclosure has a definite sign.
    pub fn is_correct(&self) -> bool {
        self.sign != SignClass::ContainsZero
    }
}

/// The maximal connected set of cells containing `seed` on which the
/// enclosure of `f` keeps the seed's sign.
#[derive(Debug, Clone, PartialEq)]
pub struct Continuation {
    /// Member indices into the input cells, sorted.
    pub members: Vec<usize>,
    /// The corresponding elements, in the same order.
    pub elements: Vec<FunctionalElement>,
    pub sign: SignClass,
}

/// Grows the constant-sign continuation of `f` from `seed`. Enclosures
/// are computed for all cells in parallel, then the component is found by
/// a breadth-first traversal.
pub fn constant_sign_continuation(
    cells: &[ICell],
    f: impl Fn(&ICell) -> Interval + Sync,
    seed: usize,
) -> Result<Continuation, CoveringError> {
    if seed >= cells.len() {
        return Err(CoveringError::SeedOutOfRange(seed));
    }
    let enclosures: Vec<Interval> = cells.par_iter().map(&f).collect();
    let sign = enclosures[seed].sign();
    if sign == SignClass::ContainsZero {
        return Err(CoveringError::SeedIndeterminate);
    }
    let g = adjacency_graph(cells);
    let mut seen = vec![false; cells.len()];
    let mut members = reach(&g, seed, |j| enclosures[j].sign() == sign, &mut seen);
    members.sort_unstable();
    let elements = members.iter().map(|&i| FunctionalElement::new(cells[i].clone(), enclosures[i])).collect();
    Ok(Continuation { members, elements, sign })
}
