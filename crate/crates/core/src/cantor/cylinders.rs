use super::{Mobius, MobiusI, RegularCantorSet};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::surd::QuadraticSurd;
use serde::Serialize;

/// Largest cylinder count materialized by [`RegularCantorSet::cylinders`].
pub const CYLINDER_CAP: usize = 1 << 22;

/// A cylinder with certified endpoint enclosures.
#[derive(Clone, Debug, Serialize)]
pub struct Cylinder {
    pub word: Vec<usize>,
    pub lo: Interval,
    pub hi: Interval,
    /// Enclosure of `|Ψ_w'|` over the hull, `Ψ_w = ψ_{w_0} ∘ … ∘ ψ_{w_{n-1}}`.
    pub derivative: Interval,
}

impl Cylinder {
    /// Upper bound on the length.
    pub fn length_upper(&self) -> f64 {
        crate::interval::sub_up(self.hi.hi(), self.lo.lo())
    }

    /// Lower bound on the length.
    pub fn length_lower(&self) -> f64 {
        crate::interval::sub_down(self.hi.lo(), self.lo.hi()).max(0.0)
    }

    pub fn outer(&self) -> Interval {
        Interval::new(self.lo.lo(), self.hi.hi())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CylinderCover {
    pub depth: usize,
    pub cylinders: Vec<Cylinder>,
    /// Upper bound on `sup|Ψ_w'| / inf|Ψ_w'|` over all words of this depth.
    pub distortion: f64,
}

impl CylinderCover {
    pub fn total_length_upper(&self) -> f64 {
        self.cylinders.iter().map(Cylinder::length_upper).sum()
    }

    pub fn total_length_lower(&self) -> f64 {
        self.cylinders.iter().map(Cylinder::length_lower).sum()
    }
}

/// A cylinder with exact endpoints.
#[derive(Clone, Debug)]
pub struct ExactCylinder {
    pub word: Vec<usize>,
    pub lo: QuadraticSurd,
    pub hi: QuadraticSurd,
    pub(crate) map: Mobius,
}

impl ExactCylinder {
    pub fn length(&self) -> QuadraticSurd {
        &self.hi - &self.lo
    }
}

/// Working cylinder for recursive algorithms: certified endpoints plus the
/// composed branch map needed to produce children.
#[derive(Clone, Debug)]
pub(crate) struct Node {
    pub word: Vec<usize>,
    pub lo: Interval,
    pub hi: Interval,
    pub map: MobiusI,
    pub increasing: bool,
}

impl Node {
    pub fn outer(&self) -> Interval {
        Interval::new(self.lo.lo(), self.hi.hi().max(self.lo.lo()))
    }

    pub fn length_upper(&self) -> f64 {
        crate::interval::sub_up(self.hi.hi(), self.lo.lo())
    }

    pub fn length_lower(&self) -> f64 {
        crate::interval::sub_down(self.hi.lo(), self.lo.hi()).max(0.0)
    }

    pub fn depth(&self) -> usize {
        self.word.len()
    }
}

impl RegularCantorSet {
    pub(crate) fn root_node(&self) -> Node {
        let (lo, hi) = self.hull_endpoints();
        Node {
            word: Vec::new(),
            lo,
            hi,
            map: MobiusI::identity(),
            increasing: true,
        }
    }

    pub(crate) fn children(&self, node: &Node) -> Vec<Node> {
        let next: Vec<usize> = match node.word.last() {
            Some(&a) => self.subshift().successors(a).to_vec(),
            None => (0..self.symbol_count()).collect(),
        };
        next.into_iter()
            .map(|c| {
                let (l, h) = self.interval_enclosure(c);
                let (p, q) = (node.map.apply(l), node.map.apply(h));
                let (lo, hi) = if node.increasing { (p, q) } else { (q, p) };
                let mut word = node.word.clone();
                word.push(c);
                Node {
                    word,
                    lo,
                    hi,
                    map: node.map.compose(self.branch_enclosure(c)),
                    increasing: node.increasing == self.branch_increasing(c),
                }
            })
            .collect()
    }

    pub(crate) fn nodes(&self, depth: usize) -> Result<Vec<Node>> {
        let mut level = vec![self.root_node()];
        for _ in 0..depth {
            let count: usize = level
                .iter()
                .map(|n| match n.word.last() {
                    Some(&a) => self.subshift().successors(a).len(),
                    None => self.symbol_count(),
                })
                .sum();
            if count > CYLINDER_CAP {
                return Err(Error::ResourceCap {
                    what: "cylinders",
                    count,
                    cap: CYLINDER_CAP,
                });
            }
            level = level.iter().flat_map(|n| self.children(n)).collect();
        }
        Ok(level)
    }

    /// All cylinders of the given depth with certified endpoints, in
    /// lexicographic word order.
    pub fn cylinders(&self, depth: usize) -> Result<CylinderCover> {
        let hull = self.hull_enclosure();
        let nodes = self.nodes(depth)?;
        let mut distortion = 1.0f64;
        let cylinders = nodes
            .into_iter()
            .map(|n| {
                let derivative = n.map.derivative_abs(hull);
                let ratio = crate::interval::div_up(derivative.hi(), derivative.lo());
                distortion = distortion.max(ratio);
                Cylinder {
                    word: n.word,
                    lo: n.lo,
                    hi: n.hi,
                    derivative,
                }
            })
            .collect();
        Ok(CylinderCover {
            depth,
            cylinders,
            distortion,
        })
    }

    pub(crate) fn exact_root(&self) -> ExactCylinder {
        let (lo, hi) = self.hull().clone();
        ExactCylinder {
            word: Vec::new(),
            lo,
            hi,
            map: Mobius::identity(),
        }
    }

    pub(crate) fn exact_children(&self, parent: &ExactCylinder) -> Result<Vec<ExactCylinder>> {
        let next: Vec<usize> = match parent.word.last() {
            Some(&a) => self.subshift().successors(a).to_vec(),
            None => (0..self.symbol_count()).collect(),
        };
        next.into_iter()
            .map(|c| {
                let (l, h) = self.base_interval(c);
                let (p, q) = (parent.map.apply(l)?, parent.map.apply(h)?);
                let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
                let mut word = parent.word.clone();
                word.push(c);
                Ok(ExactCylinder {
                    word,
                    lo,
                    hi,
                    map: parent.map.compose(self.branch(c))?,
                })
            })
            .collect()
    }

    /// Cylinders of the given depth with exact endpoints.
    pub fn cylinders_exact(&self, depth: usize) -> Result<Vec<ExactCylinder>> {
        let mut level = vec![self.exact_root()];
        for _ in 0..depth {
            let mut next = Vec::new();
            for p in &level {
                next.extend(self.exact_children(p)?);
            }
            if next.len() > CYLINDER_CAP {
                return Err(Error::ResourceCap {
                    what: "cylinders",
                    count: next.len(),
                    cap: CYLINDER_CAP,
                });
            }
            level = next;
        }
        Ok(level)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn middle_third_cylinders() {
        let k = RegularCantorSet::middle_third();
        let d1 = k.cylinders_exact(1).unwrap();
        let third = QuadraticSurd::from_ratio(1, 3);
        assert_eq!(d1.len(), 2);
        assert_eq!((d1[0].lo.clone(), d1[0].hi.clone()), (QuadraticSurd::zero(), third.clone()));
        assert_eq!(d1[1].lo, QuadraticSurd::from_ratio(2, 3));
        let d2 = k.cylinders_exact(2).unwrap();
        assert_eq!(d2.len(), 4);
        assert!(d2.iter().all(|c| c.length() == QuadraticSurd::from_ratio(1, 9)));
        let cover = k.cylinders(2).unwrap();
        for (c, e) in cover.cylinders.iter().zip(&d2) {
            assert!(c.lo.contains(e.lo.to_f64()) && c.hi.contains(e.hi.to_f64()));
        }
    }

    #[test]
    fn gauss_cylinders_shrink() {
        let c2 = RegularCantorSet::gauss(2).unwrap();
        assert_eq!(c2.cylinders(3).unwrap().cylinders.len(), 8);
        let totals: Vec<f64> = (0..8).map(|d| c2.cylinders(d).unwrap().total_length_upper()).collect();
        assert!(totals.windows(2).all(|w| w[1] < w[0]), "{totals:?}");
    }

    #[test]
    fn certified_endpoints_contain_exact_ones() {
        let c3 = RegularCantorSet::gauss(3).unwrap();
        let exact = c3.cylinders_exact(4).unwrap();
        let cover = c3.cylinders(4).unwrap();
        assert_eq!(exact.len(), cover.cylinders.len());
        for (e, c) in exact.iter().zip(&cover.cylinders) {
            assert_eq!(e.word, c.word);
            let (lo, hi) = (e.lo.enclose(), e.hi.enclose());
            assert!(c.lo.overlaps(&lo) && c.hi.overlaps(&hi));
            assert!(c.lo.width() < 1e-13 && c.hi.width() < 1e-13);
        }
    }

    fn arb_set() -> impl Strategy<Value = RegularCantorSet> {
        prop_oneof![
            (2u64..=4).prop_map(|n| RegularCantorSet::gauss(n).unwrap()),
            (2i64..=5).prop_map(|k| RegularCantorSet::affine_pair("a", QuadraticSurd::from_ratio(1, k)).unwrap()),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn cylinders_nest_with_length_bounds(k in arb_set(), depth in 1usize..6) {
            let parents = k.cylinders(depth).unwrap();
            let kids = k.cylinders(depth + 1).unwrap();
            for c in &kids.cylinders {
                let hosts: Vec<&Cylinder> = parents
                    .cylinders
                    .iter()
                    .filter(|p| p.lo.lo() <= c.lo.hi() && c.hi.lo() <= p.hi.hi())
                    .collect();
                prop_assert_eq!(hosts.len(), 1);
                prop_assert_eq!(&hosts[0].word[..], &c.word[..depth]);
            }
            for c in &parents.cylinders {
                let base = k.interval_enclosure(c.word[depth - 1]);
                let base_len = base.1.hi() - base.0.lo();
                let steps = (depth - 1) as i32;
                prop_assert!(c.length_upper() <= k.c_max().powi(steps) * base_len * (1.0 + 1e-12));
                let base_lo = (base.1.lo() - base.0.hi()).max(0.0);
                prop_assert!(c.length_lower() >= k.c_min().powi(steps) * base_lo * (1.0 - 1e-12));
            }
        }
    }
}
