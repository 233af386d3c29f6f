//! Gap lemma tests for `K ∩ (K' + t)` and translation sweeps.

use super::{thickness, Node, RegularCantorSet, ThicknessEstimate};
use crate::error::{Error, Result};
use crate::interval::{self, Interval};
use crate::surd::QuadraticSurd;
use serde::Serialize;
use std::cmp::Ordering;

/// Thickness depth used when none is supplied.
pub const DEFAULT_THICKNESS_DEPTH: usize = 6;
const LINK_DEPTH: usize = 40;
const LINK_NODES: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapLemmaStatus {
    CertifiedNonempty,
    Inconclusive,
    DisjointHulls,
}

impl GapLemmaStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            GapLemmaStatus::CertifiedNonempty => "certified-nonempty",
            GapLemmaStatus::Inconclusive => "inconclusive",
            GapLemmaStatus::DisjointHulls => "disjoint-hulls",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GapLemmaOutcome {
    pub t: f64,
    pub status: GapLemmaStatus,
    /// Lower bound on `τ(K) τ(K')`.
    pub thickness_product: f64,
    /// Each set has a point inside the hull of the other.
    pub linked: bool,
}

fn shift(x: Interval, t: Interval) -> Interval {
    x + t
}

/// Looks for a point of `set + t` (a cylinder endpoint) certified to lie in
/// the closed interval `target`.
fn has_point_inside(set: &RegularCantorSet, t: Interval, target: Interval) -> bool {
    let mut stack = vec![set.root_node()];
    let mut seen = 0usize;
    while let Some(n) = stack.pop() {
        seen += 1;
        if seen > LINK_NODES {
            return false;
        }
        for e in [n.lo, n.hi] {
            if target.contains_interval(&shift(e, t)) {
                return true;
            }
        }
        if n.depth() >= LINK_DEPTH || !shift(n.outer(), t).overlaps(&target) {
            continue;
        }
        stack.extend(set.children(&n));
    }
    false
}

fn product_exceeds_one(a: &ThicknessEstimate, b: &ThicknessEstimate) -> (bool, f64) {
    let approx = interval::mul_down(a.lower_bound, b.lower_bound);
    if let (Some(x), Some(y)) = (&a.exact, &b.exact) {
        if let Some(p) = x.checked_mul(y) {
            return (p.cmp(&QuadraticSurd::one()) == Ordering::Greater, approx);
        }
    }
    if a.lower_bound.is_infinite() || b.lower_bound.is_infinite() {
        let other = if a.lower_bound.is_infinite() { b } else { a };
        return (other.lower_bound > 0.0, approx);
    }
    (approx > 1.0, approx)
}

/// Gap lemma test with precomputed thickness bounds.
pub fn gap_lemma_test_with(
    k1: &RegularCantorSet,
    k2: &RegularCantorSet,
    t: f64,
    tau1: &ThicknessEstimate,
    tau2: &ThicknessEstimate,
) -> GapLemmaOutcome {
    let ti = Interval::point(t);
    let h1 = k1.hull_enclosure();
    let h2 = shift(k2.hull_enclosure(), ti);
    let (exceeds, product) = product_exceeds_one(tau1, tau2);
    if h1.hi() < h2.lo() || h2.hi() < h1.lo() {
        return GapLemmaOutcome {
            t,
            status: GapLemmaStatus::DisjointHulls,
            thickness_product: product,
            linked: false,
        };
    }
    let inner = |lo: Interval, hi: Interval| (lo.hi() <= hi.lo()).then(|| Interval::new(lo.hi(), hi.lo()));
    let (l1, u1) = k1.hull_endpoints();
    let (l2, u2) = k2.hull_endpoints();
    let linked = match (inner(l1, u1), inner(shift(l2, ti), shift(u2, ti))) {
        (Some(i1), Some(i2)) => {
            has_point_inside(k1, Interval::point(0.0), i2) && has_point_inside(k2, ti, i1)
        }
        _ => false,
    };
    let status = if linked && exceeds {
        GapLemmaStatus::CertifiedNonempty
    } else {
        GapLemmaStatus::Inconclusive
    };
    GapLemmaOutcome {
        t,
        status,
        thickness_product: product,
        linked,
    }
}

/// Decides `K ∩ (K' + t) ≠ ∅` by the gap lemma when it can.
pub fn gap_lemma_test(k1: &RegularCantorSet, k2: &RegularCantorSet, t: f64) -> Result<GapLemmaOutcome> {
    let tau1 = thickness(k1, DEFAULT_THICKNESS_DEPTH)?;
    let tau2 = thickness(k2, DEFAULT_THICKNESS_DEPTH)?;
    Ok(gap_lemma_test_with(k1, k2, t, &tau1, &tau2))
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepEntry {
    pub t: f64,
    pub status: GapLemmaStatus,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub t_range: (f64, f64),
    pub entries: Vec<SweepEntry>,
    /// Maximal runs of consecutive certified grid points.
    pub certified_ranges: Vec<(f64, f64)>,
    pub thickness: (f64, f64),
}

impl SweepReport {
    pub fn certified(&self) -> impl Iterator<Item = &SweepEntry> {
        self.entries
            .iter()
            .filter(|e| e.status == GapLemmaStatus::CertifiedNonempty)
    }
}

/// Runs the gap lemma on `steps` evenly spaced translations covering
/// `t_range` (both ends included).
pub fn stable_intersection_sweep(
    k1: &RegularCantorSet,
    k2: &RegularCantorSet,
    t_range: (f64, f64),
    steps: usize,
) -> Result<SweepReport> {
    let (a, b) = t_range;
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(Error::InvalidArgument(format!("bad translation range [{a}, {b}]")));
    }
    if steps == 0 {
        return Err(Error::InvalidArgument("sweep needs at least one step".into()));
    }
    let tau1 = thickness(k1, DEFAULT_THICKNESS_DEPTH)?;
    let tau2 = thickness(k2, DEFAULT_THICKNESS_DEPTH)?;
    let grid: Vec<f64> = if steps == 1 {
        vec![a]
    } else {
        (0..steps).map(|i| a + (b - a) * i as f64 / (steps - 1) as f64).collect()
    };
    let entries: Vec<SweepEntry> = {
        use rayon::prelude::*;
        grid.par_iter()
            .map(|&t| SweepEntry {
                t,
                status: gap_lemma_test_with(k1, k2, t, &tau1, &tau2).status,
            })
            .collect()
    };
    let mut certified_ranges = Vec::new();
    let mut run: Option<(f64, f64)> = None;
    for e in &entries {
        if e.status == GapLemmaStatus::CertifiedNonempty {
            run = Some(run.map_or((e.t, e.t), |(s, _)| (s, e.t)));
        } else if let Some(r) = run.take() {
            certified_ranges.push(r);
        }
    }
    certified_ranges.extend(run);
    Ok(SweepReport {
        t_range,
        entries,
        certified_ranges,
        thickness: (tau1.lower_bound, tau2.lower_bound),
    })
}

fn pairs_meet(k1: &RegularCantorSet, k2: &RegularCantorSet, t: Interval, a: &Node, b: &Node, depth: usize) -> bool {
    if !a.outer().overlaps(&shift(b.outer(), t)) {
        return false;
    }
    if a.depth() >= depth {
        return true;
    }
    let kids_b = k2.children(b);
    k1.children(a)
        .iter()
        .any(|x| kids_b.iter().any(|y| pairs_meet(k1, k2, t, x, y, depth)))
}

/// Necessary condition for `K ∩ (K' + t) ≠ ∅`: some pair of depth
/// `depth` cylinders overlaps.
pub fn cover_intersection_nonempty(k1: &RegularCantorSet, k2: &RegularCantorSet, t: f64, depth: usize) -> bool {
    pairs_meet(k1, k2, Interval::point(t), &k1.root_node(), &k2.root_node(), depth)
}
