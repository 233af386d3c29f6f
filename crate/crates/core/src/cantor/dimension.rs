//! Hausdorff dimension enclosures and box-counting estimates.
//!
//! At level `k` the set is a graph-directed system over admissible words of
//! length `k`: `K_v = ψ_{v_0}(∪ K_{v'})` over `v' = v_1 … v_{k-1} c`. The
//! contraction of `ψ_{v_0}` on `I_{v'}` is enclosed, and the zero of the
//! pressure of the upper (lower) weights bounds the dimension from above
//! (below). Bounds from several levels are intersected.

use super::RegularCantorSet;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::perron::{perron_versus, Edge};
use serde::Serialize;
use std::collections::HashMap;

#[derive(Clone, Copy, Debug)]
pub struct DimensionOptions {
    /// Target enclosure width.
    pub tol: f64,
    /// Largest number of graph states (words) per level.
    pub max_states: usize,
    pub max_level: usize,
}

impl Default for DimensionOptions {
    fn default() -> Self {
        DimensionOptions {
            tol: 1e-6,
            max_states: 1 << 15,
            max_level: 40,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionEnclosure {
    pub lo: f64,
    pub hi: f64,
    /// Deepest word length used.
    pub depth: usize,
    pub states: usize,
    /// Whether `tol` was reached before the state cap.
    pub converged: bool,
    /// `(level, lo, hi)` after each level, already intersected.
    pub history: Vec<(usize, f64, f64)>,
}

impl DimensionEnclosure {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.lo, self.hi)
    }
}

const BISECTIONS: usize = 60;
const PERRON_ITER: usize = 20_000;

struct Graph {
    states: usize,
    // (from, to, contraction enclosure)
    edges: Vec<(usize, usize, Interval)>,
}

fn graph(set: &RegularCantorSet, k: usize) -> Result<Graph> {
    let nodes = set.nodes(k)?;
    let index: HashMap<&[usize], usize> = nodes.iter().enumerate().map(|(i, n)| (&n.word[..], i)).collect();
    let mut edges = Vec::new();
    for (i, v) in nodes.iter().enumerate() {
        let last = v.word[k - 1];
        let psi = set.branch_enclosure(v.word[0]);
        for &c in set.subshift().successors(last) {
            let mut w = v.word[1..].to_vec();
            w.push(c);
            let j = index[&w[..]];
            let dom = nodes[j].outer();
            edges.push((i, j, psi.derivative_abs(dom)));
        }
    }
    Ok(Graph {
        states: nodes.len(),
        edges,
    })
}

fn weighted(g: &Graph, s: f64, upper: bool) -> Vec<Edge> {
    g.edges
        .iter()
        .map(|&(from, to, w)| {
            let p = w.powf(s);
            let x = if upper { p.hi() } else { p.lo() };
            Edge {
                from,
                to,
                weight: Interval::point(x),
            }
        })
        .collect()
}

/// Certified `[lo, hi]` for the level-`k` system, starting from `[lo, hi]`.
fn level_bounds(g: &Graph, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    // upper bound: largest s with ρ(upper^s) < 1 certified
    let (mut a, mut b) = (lo, hi);
    for _ in 0..BISECTIONS {
        if b - a <= tol * 0.25 {
            break;
        }
        let m = 0.5 * (a + b);
        let enc = perron_versus(g.states, &weighted(g, m, true), 1.0, PERRON_ITER);
        if enc.bounds.hi() < 1.0 {
            b = m;
        } else {
            a = m;
        }
    }
    hi = hi.min(b);
    let (mut a, mut b) = (lo, hi);
    for _ in 0..BISECTIONS {
        if b - a <= tol * 0.25 {
            break;
        }
        let m = 0.5 * (a + b);
        let enc = perron_versus(g.states, &weighted(g, m, false), 1.0, PERRON_ITER);
        if enc.bounds.lo() > 1.0 {
            a = m;
        } else {
            b = m;
        }
    }
    lo = lo.max(a);
    (lo, hi)
}

/// Rigorous enclosure of the Hausdorff dimension.
pub fn hausdorff_dim(set: &RegularCantorSet, opts: DimensionOptions) -> Result<DimensionEnclosure> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument("dimension tolerance must be positive".into()));
    }
    let mut out = DimensionEnclosure {
        lo: 0.0,
        hi: 1.0,
        depth: 0,
        states: 1,
        converged: false,
        history: Vec::new(),
    };
    if set.is_degenerate() {
        out.hi = 0.0;
        out.converged = true;
        return Ok(out);
    }
    for k in 1..=opts.max_level {
        let count = set.subshift().blocks(k).map(|b| b.len()).unwrap_or(usize::MAX);
        if count > opts.max_states {
            break;
        }
        let g = graph(set, k)?;
        let (lo, hi) = level_bounds(&g, out.lo, out.hi, opts.tol);
        out.lo = out.lo.max(lo);
        out.hi = out.hi.min(hi).max(out.lo);
        out.depth = k;
        out.states = g.states;
        out.history.push((k, out.lo, out.hi));
        if out.width() <= opts.tol {
            out.converged = true;
            break;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct BoxPoint {
    pub depth: usize,
    pub epsilon: f64,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoxDimension {
    pub slope: f64,
    pub intercept: f64,
    pub points: Vec<BoxPoint>,
}

/// Box-counting estimate: at each depth the box size is the longest
/// cylinder, and boxes meeting the interior of some cylinder are counted.
/// Endpoints come from exact cylinders, correctly rounded, so box
/// boundaries that coincide with cylinder endpoints are recognized.
/// The slope of `log N` against `-log ε` is fitted by least squares.
/// Heuristic: no error bound.
pub fn box_dim_estimate(set: &RegularCantorSet, depths: &[usize]) -> Result<BoxDimension> {
    if depths.len() < 3 {
        return Err(Error::InvalidArgument("box counting needs at least 3 depths".into()));
    }
    if set.is_degenerate() {
        return Err(Error::InvalidArgument("box counting needs a nondegenerate set".into()));
    }
    const DELTA: f64 = 1e-9;
    let mut points = Vec::with_capacity(depths.len());
    for &d in depths {
        let cyls = set.cylinders_exact(d)?;
        let eps = cyls.iter().map(|c| c.length()).max().expect("nonempty").to_f64();
        let mut spans: Vec<(f64, f64)> = cyls.iter().map(|c| (c.lo.to_f64(), c.hi.to_f64())).collect();
        spans.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut count = 0usize;
        let mut last: Option<i64> = None;
        for (l, h) in spans {
            let a = (l / eps + DELTA).floor() as i64;
            let b = ((h / eps - DELTA).floor() as i64).max(a);
            let start = last.map_or(a, |x| a.max(x + 1));
            if b >= start {
                count += (b - start + 1) as usize;
                last = Some(b);
            }
        }
        points.push(BoxPoint {
            depth: d,
            epsilon: eps,
            count,
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| -p.epsilon.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| (p.count as f64).ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("box counting needs distinct scales".into()));
    }
    let slope = sxy / sxx;
    Ok(BoxDimension {
        slope,
        intercept: my - slope * mx,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surd::QuadraticSurd;

    const DIM_C2: f64 = 0.5312805062772051;

    #[test]
    fn affine_dimensions() {
        let log23 = 2f64.ln() / 3f64.ln();
        let d = hausdorff_dim(&RegularCantorSet::middle_third(), DimensionOptions::default()).unwrap();
        assert!(d.contains(log23) && d.width() < 1e-6, "{d:?}");
        let q = RegularCantorSet::affine_pair("q", QuadraticSurd::from_ratio(1, 4)).unwrap();
        let d = hausdorff_dim(&q, DimensionOptions::default()).unwrap();
        assert!(d.contains(0.5) && d.converged);
        let u = hausdorff_dim(&RegularCantorSet::unit_interval(), DimensionOptions::default()).unwrap();
        assert!(u.contains(1.0) && u.lo > 1.0 - 1e-6);
    }

    #[test]
    fn gauss_two_dimension() {
        let opts = DimensionOptions {
            tol: 1e-5,
            ..Default::default()
        };
        let d = hausdorff_dim(&RegularCantorSet::gauss(2).unwrap(), opts).unwrap();
        assert!(d.contains(DIM_C2), "{d:?}");
        assert!(d.width() < 1e-4, "{d:?}");
        assert!(d.history.windows(2).all(|w| w[1].1 >= w[0].1 && w[1].2 <= w[0].2));
        let p = hausdorff_dim(&RegularCantorSet::gauss(1).unwrap(), opts).unwrap();
        assert_eq!((p.lo, p.hi), (0.0, 0.0));
    }

    #[test]
    fn box_counts() {
        let log23 = 2f64.ln() / 3f64.ln();
        let depths: Vec<usize> = (4..=12).collect();
        let b = box_dim_estimate(&RegularCantorSet::middle_third(), &depths).unwrap();
        assert!((b.slope - log23).abs() < 1e-3, "{}", b.slope);
        assert_eq!(b.points[0].count, 16);
        let q = RegularCantorSet::affine_pair("q", QuadraticSurd::from_ratio(1, 4)).unwrap();
        assert!((box_dim_estimate(&q, &depths).unwrap().slope - 0.5).abs() < 1e-3);
        let c2 = box_dim_estimate(&RegularCantorSet::gauss(2).unwrap(), &depths).unwrap();
        assert!((c2.slope - DIM_C2).abs() < 1e-2, "{}", c2.slope);
        assert!(box_dim_estimate(&q, &[4, 5]).is_err());
    }
}
