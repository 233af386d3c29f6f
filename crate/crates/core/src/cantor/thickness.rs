//! Newhouse thickness of a regular Cantor set.
//!
//! Gaps are ordered level by level (the gaps among the children of one
//! cylinder come after those of its ancestors, and inside a cylinder by
//! decreasing length), which is a valid ordered presentation, so the
//! minimal bridge/gap ratio is a lower bound for the thickness. Levels
//! below `depth - 1` are computed exactly. Every deeper configuration is
//! the image of a level `depth - 1` configuration under a branch
//! composition, whose distortion on a cylinder `I_u` is at most
//! `exp(L |I_u| / (1 - c_max))` with `L` the Lipschitz constant of `log|ψ'|`.

use super::{ExactCylinder, RegularCantorSet};
use crate::error::{Error, Result};
use crate::interval;
use crate::surd::QuadraticSurd;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct ThicknessLevel {
    pub level: usize,
    pub gaps: usize,
    /// Smallest bridge/gap ratio among gaps of this level.
    pub min_ratio: f64,
    #[serde(serialize_with = "ser_surd")]
    pub exact: Option<QuadraticSurd>,
    /// Lower bound after the distortion slack (equal to `min_ratio` on
    /// directly computed levels).
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThicknessEstimate {
    pub depth: usize,
    pub lower_bound: f64,
    #[serde(serialize_with = "ser_surd")]
    pub exact: Option<QuadraticSurd>,
    pub levels: Vec<ThicknessLevel>,
    /// Worst distortion factor applied to the deepest level.
    pub slack: f64,
    pub degenerate: bool,
    pub gapless: bool,
}

fn ser_surd<S: serde::Serializer>(v: &Option<QuadraticSurd>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(q) => s.serialize_some(&q.to_ascii()),
        None => s.serialize_none(),
    }
}

impl ThicknessEstimate {
    pub fn is_infinite(&self) -> bool {
        self.lower_bound.is_infinite()
    }
}

/// Smallest bridge/gap ratio and gap count among the children of one
/// cylinder.
fn parent_ratio(parent: &ExactCylinder, kids: &mut [ExactCylinder]) -> Result<(Option<QuadraticSurd>, usize)> {
    kids.sort_by(|a, b| a.lo.cmp(&b.lo));
    let (lo, hi) = (&parent.lo, &parent.hi);
    // gap i sits between kids[i] and kids[i + 1]
    let mut gaps: Vec<(usize, QuadraticSurd)> = kids
        .windows(2)
        .enumerate()
        .map(|(i, w)| (i, &w[1].lo - &w[0].hi))
        .filter(|(_, g)| g.is_positive())
        .collect();
    let count = gaps.len();
    gaps.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut best: Option<QuadraticSurd> = None;
    let mut placed: Vec<usize> = Vec::new();
    for (i, g) in &gaps {
        let left_end = placed
            .iter()
            .filter(|&&j| j < *i)
            .max()
            .map_or(lo, |&j| &kids[j + 1].lo);
        let right_end = placed
            .iter()
            .filter(|&&j| j > *i)
            .min()
            .map_or(hi, |&j| &kids[j].hi);
        let left = &kids[*i].hi - left_end;
        let right = right_end - &kids[*i + 1].lo;
        let ratio = left
            .min(right)
            .checked_div(g)
            .ok_or_else(|| Error::InvalidCantorSet("cylinder endpoints leave the field".into()))?;
        if best.as_ref().is_none_or(|b| ratio < *b) {
            best = Some(ratio);
        }
        placed.push(*i);
    }
    Ok((best, count))
}

/// Thickness lower bound from the exact geometry of cylinders up to length
/// `depth` (at least 2).
pub fn thickness(set: &RegularCantorSet, depth: usize) -> Result<ThicknessEstimate> {
    let n = depth.max(2);
    if set.is_degenerate() {
        return Ok(ThicknessEstimate {
            depth: n,
            lower_bound: 0.0,
            exact: Some(QuadraticSurd::zero()),
            levels: Vec::new(),
            slack: 1.0,
            degenerate: true,
            gapless: false,
        });
    }
    let lip = set.log_lipschitz();
    let contraction = interval::sub_down(1.0, set.c_max());
    let mut levels = Vec::with_capacity(n);
    let mut parents = vec![set.exact_root()];
    let mut worst_slack = 1.0f64;
    for level in 0..n {
        let distorted = level + 1 == n && lip > 0.0;
        let mut next = Vec::new();
        let mut exact: Option<QuadraticSurd> = None;
        let mut bound = f64::INFINITY;
        let mut gaps = 0usize;
        for p in &parents {
            let mut kids = set.exact_children(p)?;
            let (ratio, count) = parent_ratio(p, &mut kids)?;
            gaps += count;
            if let Some(r) = ratio {
                let lo = r.enclose().lo();
                let value = if distorted {
                    let len = p.length().enclose().hi();
                    let s = interval::div_up(interval::mul_up(lip, len), contraction);
                    let slack = (-s).exp() * (1.0 - 4.0 * f64::EPSILON);
                    worst_slack = worst_slack.min(slack);
                    interval::mul_down(lo, slack)
                } else {
                    lo
                };
                bound = bound.min(value);
                if exact.as_ref().is_none_or(|b| r < *b) {
                    exact = Some(r);
                }
            }
            if level + 1 < n {
                next.extend(kids);
            }
        }
        levels.push(ThicknessLevel {
            level,
            gaps,
            min_ratio: exact.as_ref().map_or(f64::INFINITY, |r| r.enclose().lo()),
            exact,
            bound,
        });
        parents = next;
    }
    let lower_bound = levels.iter().map(|l| l.bound).fold(f64::INFINITY, f64::min);
    let gapless = lower_bound.is_infinite();
    let exact = if gapless || lip > 0.0 {
        None
    } else {
        levels.iter().filter_map(|l| l.exact.clone()).min()
    };
    Ok(ThicknessEstimate {
        depth: n,
        lower_bound,
        exact,
        levels,
        slack: worst_slack,
        degenerate: false,
        gapless,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_examples() {
        let mid = thickness(&RegularCantorSet::middle_third(), 6).unwrap();
        assert_eq!(mid.exact, Some(QuadraticSurd::one()));
        assert!(mid.lower_bound <= 1.0 && mid.lower_bound > 1.0 - 1e-15);
        let k = RegularCantorSet::affine_pair("k", QuadraticSurd::from_ratio(2, 5)).unwrap();
        let t = thickness(&k, 4).unwrap();
        assert_eq!(t.exact, Some(QuadraticSurd::from_integer(2)));
        assert_eq!(t.levels[0].gaps, 1);
        assert_eq!(t.levels[2].gaps, 4);
    }

    #[test]
    fn gapless_and_degenerate() {
        let unit = thickness(&RegularCantorSet::unit_interval(), 3).unwrap();
        assert!(unit.gapless && unit.is_infinite());
        let point = thickness(&RegularCantorSet::gauss(1).unwrap(), 3).unwrap();
        assert!(point.degenerate);
        assert_eq!(point.lower_bound, 0.0);
    }

    #[test]
    fn gauss_four_is_thick() {
        let t = thickness(&RegularCantorSet::gauss(4).unwrap(), 6).unwrap();
        assert!(t.lower_bound > 1.0, "{t:?}");
        assert!((t.levels[0].min_ratio - 1.30094).abs() < 1e-5);
        assert!(t.slack < 1.0 && t.slack > 0.9);
        let t2 = thickness(&RegularCantorSet::gauss(2).unwrap(), 6).unwrap();
        assert!(t2.lower_bound < 0.37 && t2.lower_bound > 0.3, "{}", t2.lower_bound);
    }

    #[test]
    fn deeper_bounds_do_not_lose_much() {
        let c4 = RegularCantorSet::gauss(4).unwrap();
        let a = thickness(&c4, 4).unwrap().lower_bound;
        let b = thickness(&c4, 6).unwrap().lower_bound;
        assert!(b >= a - 1e-9, "{a} {b}");
    }
}
