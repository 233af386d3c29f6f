//! Limit geometries.
//!
//! For a backward itinerary `θ = (θ_0, θ_1, …)` (so `θ_{k+1} → θ_k` is
//! allowed), `f_n = ψ_{θ_n} ∘ … ∘ ψ_{θ_1}` maps `I(θ_0)` onto the cylinder
//! `I(θ_n … θ_0)`. The renormalized map `k_n^θ` is `f_n` read in affine
//! coordinates where both `I(θ_0)` and its image are `[0, 1]`. For a Möbius
//! `f_n = (ax+b)/(cx+d)` and `x = a_0 + u (a_1 - a_0)` this is
//! `u (c a_1 + d) / (c x + d)`, the identity when `c = 0`.

use super::RegularCantorSet;
use crate::error::{Error, Result};
use serde::Serialize;

pub const GRID_POINTS: usize = 65;

#[derive(Clone, Debug, Serialize)]
pub struct LimitGeometry {
    pub theta: Vec<usize>,
    pub n: usize,
    /// Normalized coordinates on `I(θ_0)`.
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub log_derivative: Vec<f64>,
    /// `|I(θ_n … θ_0)|`
    pub cylinder_length: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitConvergence {
    pub theta: Vec<usize>,
    /// `(n, sup |k_n - k_{n+1}|, |I(θ_n … θ_0)|)`
    pub steps: Vec<(usize, f64, f64)>,
    /// Per-step decay of the distances from a log-linear fit; `None` when
    /// every distance vanishes.
    pub fitted_ratio: Option<f64>,
    /// Smallest `C` with `distance ≤ C |I(θ^n)|` over the fitted range.
    pub constant: f64,
}

fn symbol(theta: &[usize], k: usize) -> usize {
    theta[k % theta.len()]
}

/// `f_n` coefficients in floating point, normalized after each step.
fn compose(set: &RegularCantorSet, theta: &[usize], n: usize) -> [f64; 4] {
    let mut m = [1.0, 0.0, 0.0, 1.0];
    for k in 1..=n {
        let [a, b, c, d] = set.branch_enclosure(symbol(theta, k)).mid();
        // m ← ψ_{θ_k} ∘ m
        let next = [
            a * m[0] + b * m[2],
            a * m[1] + b * m[3],
            c * m[0] + d * m[2],
            c * m[1] + d * m[3],
        ];
        let s = next.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        m = next.map(|v| v / s);
    }
    m
}

fn check(set: &RegularCantorSet, theta: &[usize], n: usize) -> Result<()> {
    if theta.is_empty() {
        return Err(Error::InvalidArgument("limit geometry needs a nonempty itinerary".into()));
    }
    if let Some(&s) = theta.iter().find(|&&s| s >= set.symbol_count()) {
        return Err(Error::InvalidWord(format!("symbol index {s} outside the alphabet")));
    }
    for k in 0..n {
        let (prev, next) = (symbol(theta, k + 1), symbol(theta, k));
        if !set.subshift().allows(prev, next) {
            return Err(Error::InvalidWord(format!(
                "backward itinerary needs {} -> {}",
                set.subshift().alphabet()[prev],
                set.subshift().alphabet()[next]
            )));
        }
    }
    Ok(())
}

/// Samples `k_n^θ` on an even grid of `I(θ_0)`. The itinerary is repeated
/// periodically when shorter than `n + 1`.
pub fn limit_geometry(set: &RegularCantorSet, theta: &[usize], n: usize) -> Result<LimitGeometry> {
    check(set, theta, n)?;
    let (lo, hi) = set.interval_enclosure(theta[0]);
    let (a0, a1) = (lo.mid(), hi.mid());
    let [a, b, c, d] = compose(set, theta, n);
    let f = |x: f64| (a * x + b) / (c * x + d);
    let (e0, e1) = (c * a0 + d, c * a1 + d);
    let grid: Vec<f64> = (0..GRID_POINTS).map(|i| i as f64 / (GRID_POINTS - 1) as f64).collect();
    let mut values = Vec::with_capacity(GRID_POINTS);
    let mut log_derivative = Vec::with_capacity(GRID_POINTS);
    for &u in &grid {
        let x = a0 + u * (a1 - a0);
        let e = c * x + d;
        values.push(u * e1 / e);
        log_derivative.push((e1 * e0 / (e * e)).ln());
    }
    Ok(LimitGeometry {
        theta: theta.to_vec(),
        n,
        grid,
        values,
        log_derivative,
        cylinder_length: (f(a1) - f(a0)).abs(),
    })
}

/// Distances between consecutive renormalizations for `n` in `range`.
pub fn limit_geometry_convergence(
    set: &RegularCantorSet,
    theta: &[usize],
    range: std::ops::RangeInclusive<usize>,
) -> Result<LimitConvergence> {
    if range.is_empty() {
        return Err(Error::InvalidArgument("empty range of renormalization depths".into()));
    }
    let mut steps = Vec::new();
    let mut prev = limit_geometry(set, theta, *range.start())?;
    for n in range {
        let next = limit_geometry(set, theta, n + 1)?;
        let dist = prev
            .values
            .iter()
            .zip(&next.values)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        steps.push((n, dist, prev.cylinder_length));
        prev = next;
    }
    let constant = steps
        .iter()
        .map(|&(_, d, l)| if l > 0.0 { d / l } else { 0.0 })
        .fold(0.0, f64::max);
    let pts: Vec<(f64, f64)> = steps
        .iter()
        .filter(|s| s.1 > 0.0)
        .map(|&(n, d, _)| (n as f64, d.ln()))
        .collect();
    let fitted_ratio = if pts.len() >= 2 {
        let m = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        Some((sxy / sxx).exp())
    } else {
        None
    };
    Ok(LimitConvergence {
        theta: theta.to_vec(),
        steps,
        fitted_ratio,
        constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_and_trivial_renormalizations_are_the_identity() {
        let mid = RegularCantorSet::middle_third();
        let g = limit_geometry(&mid, &[0, 1, 1], 7).unwrap();
        assert!(g.values.iter().zip(&g.grid).all(|(v, u)| v == u));
        assert!(g.log_derivative.iter().all(|&x| x == 0.0));
        let c2 = RegularCantorSet::gauss(2).unwrap();
        let g = limit_geometry(&c2, &[0, 1], 0).unwrap();
        assert!(g.values.iter().zip(&g.grid).all(|(v, u)| (v - u).abs() < 1e-15));
        assert_eq!(g.values[0], 0.0);
        assert!((g.values[GRID_POINTS - 1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gauss_two_converges_geometrically() {
        let c2 = RegularCantorSet::gauss(2).unwrap();
        let conv = limit_geometry_convergence(&c2, &[0, 1], 2..=10).unwrap();
        let r = conv.fitted_ratio.unwrap();
        assert!(r >= c2.c_min() && r <= c2.c_max(), "{r}");
        for &(_, d, l) in &conv.steps {
            assert!(d <= conv.constant * l * (1.0 + 1e-12));
        }
        assert!(conv.steps.last().unwrap().1 < 1e-4);
    }

    #[test]
    fn itineraries_are_checked() {
        let c2 = RegularCantorSet::gauss(2).unwrap();
        assert!(limit_geometry(&c2, &[], 3).is_err());
        assert!(limit_geometry(&c2, &[5], 3).is_err());
    }
}
