//! Perron roots of sparse nonnegative matrices with Collatz–Wielandt bounds.
//!
//! For any nonnegative `A` and positive `x`,
//! `min_i (Ax)_i / x_i <= ρ(A) <= max_i (Ax)_i / x_i`, so every iterate of
//! the power method yields a valid enclosure. Iteration runs on `A + I`
//! (same Perron vector, primitive on each irreducible block) separately for
//! every strongly connected component; `ρ(A)` is the largest block root.

use crate::error::{Error, Result};
use crate::interval::{self, Interval};
use petgraph::algo::kosaraju_scc;
use petgraph::graph::DiGraph;

/// Weighted edge `from -> to`; weights are outward-rounded enclosures.
#[derive(Clone, Copy, Debug)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub weight: Interval,
}

#[derive(Clone, Copy, Debug)]
pub struct PerronOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PerronOptions {
    fn default() -> Self {
        PerronOptions {
            tol: 1e-12,
            max_iter: 200_000,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PerronEnclosure {
    pub bounds: Interval,
    pub iterations: usize,
    pub converged: bool,
}

struct Block {
    // local index -> (local successor, weight)
    rows: Vec<Vec<(usize, Interval)>>,
}

fn blocks(n: usize, edges: &[Edge]) -> Vec<Block> {
    let mut g = DiGraph::<(), ()>::with_capacity(n, edges.len());
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for e in edges {
        g.add_edge(nodes[e.from], nodes[e.to], ());
    }
    let mut comp = vec![usize::MAX; n];
    let mut local = vec![0usize; n];
    let sccs = kosaraju_scc(&g);
    for (c, scc) in sccs.iter().enumerate() {
        let mut members: Vec<usize> = scc.iter().map(|v| v.index()).collect();
        members.sort_unstable();
        for (i, v) in members.iter().enumerate() {
            comp[*v] = c;
            local[*v] = i;
        }
    }
    let mut out: Vec<Block> = sccs
        .iter()
        .map(|scc| Block {
            rows: vec![Vec::new(); scc.len()],
        })
        .collect();
    for e in edges {
        let c = comp[e.from];
        if c == comp[e.to] {
            out[c].rows[local[e.from]].push((local[e.to], e.weight));
        }
    }
    // blocks without internal edges carry no recurrent dynamics
    out.retain(|b| b.rows.iter().any(|r| !r.is_empty()));
    out
}

/// Collatz–Wielandt bounds of `B + I` at a positive vector `x`.
fn cw_bounds(block: &Block, x: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (i, row) in block.rows.iter().enumerate() {
        let mut s_lo = x[i];
        let mut s_hi = x[i];
        for &(j, w) in row {
            s_lo = interval::add_down(s_lo, interval::mul_down(w.lo(), x[j]));
            s_hi = interval::add_up(s_hi, interval::mul_up(w.hi(), x[j]));
        }
        lo = lo.min(interval::div_down(s_lo, x[i]));
        hi = hi.max(interval::div_up(s_hi, x[i]));
    }
    (lo, hi)
}

fn step(block: &Block, x: &[f64]) -> Vec<f64> {
    let mut y: Vec<f64> = block
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| x[i] + row.iter().map(|&(j, w)| w.mid() * x[j]).sum::<f64>())
        .collect();
    let m = y.iter().cloned().fold(0.0, f64::max);
    for v in &mut y {
        // keep the vector strictly positive so the bounds stay valid
        *v = (*v / m).max(1e-300);
    }
    y
}

/// What the caller wants to learn about `ρ(A)`.
#[derive(Clone, Copy, Debug)]
enum Goal {
    Width(f64),
    /// stop as soon as the enclosure lies entirely on one side of the value
    Separate(f64),
}

fn run_block(block: &Block, goal: Goal, max_iter: usize) -> (f64, f64, usize, bool) {
    let n = block.rows.len();
    let mut x = vec![1.0; n];
    let (mut best_lo, mut best_hi) = (f64::NEG_INFINITY, f64::INFINITY);
    let mut stall = 0usize;
    for it in 0..max_iter {
        let (lo, hi) = cw_bounds(block, &x);
        let (lo, hi) = (interval::sub_down(lo, 1.0), interval::sub_up(hi, 1.0));
        let improved = lo > best_lo || hi < best_hi;
        best_lo = best_lo.max(lo);
        best_hi = best_hi.min(hi);
        let done = match goal {
            Goal::Width(tol) => best_hi - best_lo <= tol,
            Goal::Separate(v) => best_lo > v || best_hi < v,
        };
        if done {
            return (best_lo, best_hi, it + 1, true);
        }
        // weights with finite width cannot be resolved below their spread
        stall = if improved { 0 } else { stall + 1 };
        if stall > 64 {
            return (best_lo, best_hi, it + 1, false);
        }
        x = step(block, &x);
    }
    (best_lo, best_hi, max_iter, false)
}

fn combine(n: usize, edges: &[Edge], goal: Goal, max_iter: usize) -> PerronEnclosure {
    let bs = blocks(n, edges);
    if bs.is_empty() {
        return PerronEnclosure {
            bounds: Interval::point(0.0),
            iterations: 0,
            converged: true,
        };
    }
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut iterations = 0;
    let mut converged = true;
    for b in &bs {
        let (l, h, it, ok) = run_block(b, goal, max_iter);
        lo = lo.max(l);
        hi = hi.max(h);
        iterations += it;
        converged &= ok;
    }
    PerronEnclosure {
        bounds: Interval::new(lo.max(0.0), hi.max(lo.max(0.0))),
        iterations,
        converged,
    }
}

/// Enclosure of the Perron root of the `n × n` matrix given by `edges`.
pub fn perron_root(n: usize, edges: &[Edge], opts: PerronOptions) -> Result<PerronEnclosure> {
    let enc = combine(n, edges, Goal::Width(opts.tol), opts.max_iter);
    if !enc.converged {
        return Err(Error::NonConvergence {
            iterations: enc.iterations,
            width: enc.bounds.width(),
        });
    }
    Ok(enc)
}

/// Best-effort enclosure, tight enough to decide on which side of `value`
/// the Perron root lies when possible.
pub fn perron_versus(n: usize, edges: &[Edge], value: f64, max_iter: usize) -> PerronEnclosure {
    combine(n, edges, Goal::Separate(value), max_iter)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(from: usize, to: usize) -> Edge {
        Edge {
            from,
            to,
            weight: Interval::point(1.0),
        }
    }

    #[test]
    fn golden_mean_root_is_enclosed() {
        let edges = [unit(0, 0), unit(0, 1), unit(1, 0)];
        let enc = perron_root(2, &edges, PerronOptions::default()).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(enc.bounds.lo() <= phi && phi <= enc.bounds.hi());
        assert!(enc.bounds.width() <= 1e-12);
    }

    #[test]
    fn periodic_cycle_converges_through_shift() {
        // a 3-cycle is irreducible but not primitive; its root is 1
        let edges = [unit(0, 1), unit(1, 2), unit(2, 0)];
        let enc = perron_root(3, &edges, PerronOptions::default()).unwrap();
        assert!(enc.bounds.contains(1.0));
    }

    #[test]
    fn reducible_matrix_takes_largest_block() {
        // block {0,1} full 2-shift (ρ = 2), block {2} a loop (ρ = 1), edge 2 -> 0
        let edges = [unit(0, 0), unit(0, 1), unit(1, 0), unit(1, 1), unit(2, 2), unit(2, 0)];
        let enc = perron_root(3, &edges, PerronOptions::default()).unwrap();
        assert!(enc.bounds.contains(2.0));
        assert!(enc.bounds.width() <= 1e-12);
    }

    #[test]
    fn acyclic_graph_has_zero_root() {
        let edges = [unit(0, 1), unit(1, 2)];
        let enc = perron_root(3, &edges, PerronOptions::default()).unwrap();
        assert_eq!(enc.bounds, Interval::point(0.0));
    }
}
