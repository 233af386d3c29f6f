//! Certificates for `K + K' ⊇ T`.
//!
//! A pair of cylinders `(I_w, I'_v)` closes when `τ(K) τ(K') ≥ 1`,
//! `|I_w| ≥ maxgap(K'_v)` and `|I'_v| ≥ maxgap(K_w)`; then
//! `K_w + K'_v = I_w + I'_v`. Sub-cylinder sets are at least as thick as the
//! whole set, and a gap inside a child `J` has both bridges inside `J`, so
//! `maxgap(K_w) ≤ max(largest gap between children, max |J| / (1 + 2τ))`.
//! The target is covered greedily by closing pairs; uncovered pieces are
//! handed to the children of the pairs whose sums still meet them.

use super::{thickness, Node, RegularCantorSet, ThicknessEstimate};
use crate::error::{Error, Result};
use crate::interval::{add_down, add_up, div_up, mul_down, sub_up};
use crate::surd::QuadraticSurd;
use serde::Serialize;

const PAIR_CAP: usize = 1 << 22;
const THICKNESS_DEPTH: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateStatus {
    Certified,
    Failed,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProofNode {
    pub t_interval: (f64, f64),
    /// Words of the two cylinders; absent on refinement nodes.
    pub cylinder_pair: Option<(Vec<usize>, Vec<usize>)>,
    pub rule: &'static str,
    pub children: Vec<ProofNode>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntervalCertificate {
    pub target: (f64, f64),
    pub status: CertificateStatus,
    /// A point of the target left uncovered when the search stopped.
    pub witness: Option<f64>,
    pub max_depth_used: usize,
    pub pairs_examined: usize,
    pub nodes: Vec<ProofNode>,
}

impl IntervalCertificate {
    pub fn is_certified(&self) -> bool {
        self.status == CertificateStatus::Certified
    }

    pub fn node_count(&self) -> usize {
        fn count(n: &ProofNode) -> usize {
            1 + n.children.iter().map(count).sum::<usize>()
        }
        self.nodes.iter().map(count).sum()
    }
}

struct Ctx<'a> {
    k1: &'a RegularCantorSet,
    k2: &'a RegularCantorSet,
    thick_enough: bool,
    tau1: f64,
    tau2: f64,
    depth_cap: usize,
    pairs: usize,
    max_depth: usize,
}

#[derive(Clone, Copy, Debug)]
struct Piece {
    lo: f64,
    hi: f64,
    lo_done: bool,
    hi_done: bool,
}

impl Piece {
    fn meets(&self, l: f64, h: f64) -> bool {
        l <= self.hi && self.lo <= h
    }
}

enum Stop {
    Witness(f64),
    Cap(usize),
}

fn product_at_least_one(a: &ThicknessEstimate, b: &ThicknessEstimate) -> bool {
    if let (Some(x), Some(y)) = (&a.exact, &b.exact) {
        if let Some(p) = x.checked_mul(y) {
            return p >= QuadraticSurd::one();
        }
    }
    if a.degenerate || b.degenerate {
        return false;
    }
    if a.gapless || b.gapless {
        return true;
    }
    mul_down(a.lower_bound, b.lower_bound) >= 1.0
}

/// Upper bound on the largest gap of `K ∩ I_node`.
fn max_gap(set: &RegularCantorSet, node: &Node, tau: f64) -> f64 {
    let mut kids = set.children(node);
    kids.sort_by(|a, b| a.lo.mid().total_cmp(&b.lo.mid()));
    let between = kids
        .windows(2)
        .map(|w| sub_up(w[1].lo.hi(), w[0].hi.lo()).max(0.0))
        .fold(0.0, f64::max);
    let inside = if tau.is_infinite() {
        0.0
    } else {
        let longest = kids.iter().map(Node::length_upper).fold(0.0, f64::max);
        div_up(longest, add_down(1.0, mul_down(2.0, tau)))
    };
    between.max(inside)
}

impl Ctx<'_> {
    fn closes(&self, a: &Node, b: &Node) -> bool {
        self.thick_enough
            && a.length_lower() >= max_gap(self.k2, b, self.tau2)
            && b.length_lower() >= max_gap(self.k1, a, self.tau1)
    }

    fn certify(&mut self, piece: Piece, pairs: Vec<(Node, Node)>) -> std::result::Result<Vec<ProofNode>, Stop> {
        let depth = pairs.first().map_or(0, |p| p.0.depth());
        self.max_depth = self.max_depth.max(depth);
        self.pairs += pairs.len();
        if self.pairs > PAIR_CAP {
            return Err(Stop::Cap(self.pairs));
        }
        let mut closing = Vec::new();
        let mut open = Vec::new();
        for (a, b) in pairs {
            if self.closes(&a, &b) {
                let lo = add_up(a.lo.hi(), b.lo.hi());
                let hi = add_down(a.hi.lo(), b.hi.lo());
                if lo <= hi && piece.meets(lo, hi) {
                    closing.push((lo, hi, a, b));
                }
            } else {
                open.push((a, b));
            }
        }
        closing.sort_by(|x, y| x.0.total_cmp(&y.0));

        let mut nodes = Vec::new();
        let mut gaps = Vec::new();
        let (mut cur, mut cur_done) = (piece.lo, piece.lo_done);
        for (lo, hi, a, b) in &closing {
            if *hi < cur || (*hi == cur && cur_done) {
                continue;
            }
            if *lo > cur {
                gaps.push(Piece {
                    lo: cur,
                    hi: *lo,
                    lo_done: cur_done,
                    hi_done: true,
                });
            }
            nodes.push(ProofNode {
                t_interval: (lo.max(piece.lo), hi.min(piece.hi)),
                cylinder_pair: Some((a.word.clone(), b.word.clone())),
                rule: "newhouse",
                children: Vec::new(),
            });
            cur = *hi;
            cur_done = true;
            if cur >= piece.hi {
                break;
            }
        }
        if cur < piece.hi || (cur == piece.hi && !cur_done && !piece.hi_done) {
            gaps.push(Piece {
                lo: cur,
                hi: piece.hi,
                lo_done: cur_done,
                hi_done: piece.hi_done,
            });
        }

        for g in gaps {
            let mut next = Vec::new();
            for (a, b) in &open {
                let (l, h) = (add_down(a.lo.lo(), b.lo.lo()), add_up(a.hi.hi(), b.hi.hi()));
                if !g.meets(l, h) {
                    continue;
                }
                let kb = self.k2.children(b);
                for x in self.k1.children(a) {
                    for y in &kb {
                        let (l, h) = (add_down(x.lo.lo(), y.lo.lo()), add_up(x.hi.hi(), y.hi.hi()));
                        if g.meets(l, h) {
                            next.push((x.clone(), y.clone()));
                        }
                    }
                }
            }
            let witness = 0.5 * (g.lo + g.hi);
            if next.is_empty() || depth + 1 > self.depth_cap {
                return Err(Stop::Witness(witness));
            }
            let children = self.certify(g, next)?;
            nodes.push(ProofNode {
                t_interval: (g.lo, g.hi),
                cylinder_pair: None,
                rule: "refine",
                children,
            });
        }
        nodes.sort_by(|x, y| x.t_interval.0.total_cmp(&y.t_interval.0));
        Ok(nodes)
    }
}

/// Tries to certify `K + K' ⊇ [target.0, target.1]` refining cylinder pairs
/// up to length `depth_cap`.
pub fn sumset_contains_interval(
    k1: &RegularCantorSet,
    k2: &RegularCantorSet,
    target: (f64, f64),
    depth_cap: usize,
) -> Result<IntervalCertificate> {
    let (a, b) = target;
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(Error::InvalidArgument(format!("bad target interval [{a}, {b}]")));
    }
    let t1 = thickness(k1, THICKNESS_DEPTH)?;
    let t2 = thickness(k2, THICKNESS_DEPTH)?;
    let mut ctx = Ctx {
        k1,
        k2,
        thick_enough: product_at_least_one(&t1, &t2),
        tau1: t1.lower_bound,
        tau2: t2.lower_bound,
        depth_cap,
        pairs: 0,
        max_depth: 0,
    };
    let piece = Piece {
        lo: a,
        hi: b,
        lo_done: false,
        hi_done: false,
    };
    let root = vec![(k1.root_node(), k2.root_node())];
    let outcome = ctx.certify(piece, root);
    let (status, witness, nodes) = match outcome {
        Ok(nodes) => (CertificateStatus::Certified, None, nodes),
        Err(Stop::Witness(w)) => (CertificateStatus::Failed, Some(w), Vec::new()),
        Err(Stop::Cap(count)) => {
            return Err(Error::ResourceCap {
                what: "cylinder pairs",
                count,
                cap: PAIR_CAP,
            })
        }
    };
    Ok(IntervalCertificate {
        target,
        status,
        witness,
        max_depth_used: ctx.max_depth,
        pairs_examined: ctx.pairs,
        nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Every point of the target lies in some `newhouse` leaf.
    fn leaves(nodes: &[ProofNode], out: &mut Vec<(f64, f64)>) {
        for n in nodes {
            if n.rule == "newhouse" {
                out.push(n.t_interval);
            }
            leaves(&n.children, out);
        }
    }

    fn covers(cert: &IntervalCertificate) -> bool {
        let mut l = Vec::new();
        leaves(&cert.nodes, &mut l);
        l.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut cur = cert.target.0;
        for (a, b) in l {
            if a > cur {
                return false;
            }
            cur = cur.max(b);
        }
        cur >= cert.target.1
    }

    #[test]
    fn interval_and_middle_third() {
        let u = RegularCantorSet::unit_interval();
        let c = sumset_contains_interval(&u, &u, (0.5, 1.5), 4).unwrap();
        assert!(c.is_certified() && covers(&c));
        let m = RegularCantorSet::middle_third();
        let c = sumset_contains_interval(&m, &m, (0.25, 1.75), 10).unwrap();
        assert!(c.is_certified() && covers(&c));
    }

    #[test]
    fn thin_sets_fail_with_witness() {
        let q = RegularCantorSet::affine_pair("q", QuadraticSurd::from_ratio(1, 4)).unwrap();
        let c = sumset_contains_interval(&q, &q, (0.3, 0.6), 8).unwrap();
        assert_eq!(c.status, CertificateStatus::Failed);
        let w = c.witness.unwrap();
        assert!((0.3..=0.6).contains(&w));
    }

    #[test]
    fn gauss_four() {
        let c4 = RegularCantorSet::gauss(4).unwrap();
        let c = sumset_contains_interval(&c4, &c4, (0.9, 1.1), 14).unwrap();
        assert!(c.is_certified() && covers(&c), "{c:?}");
        let json = serde_json::to_value(&c).unwrap();
        assert!(json["nodes"][0]["t_interval"].is_array());
    }

    #[test]
    fn outside_the_hull_fails() {
        let m = RegularCantorSet::middle_third();
        let c = sumset_contains_interval(&m, &m, (1.9, 2.5), 6).unwrap();
        assert_eq!(c.status, CertificateStatus::Failed);
    }
}
