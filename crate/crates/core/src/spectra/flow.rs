//! Suspension flows over a discrete system and the reduction of flow
//! spectra to the cross-section via `maxF(x) = max F(φ^t x)` over the flow
//! segment between the previous and the next return through `x`.

use super::{markov_value, sample_spectrum, DiscreteSystem, Observable, Smoothness, SpectrumSample};
use crate::error::{Error, Result};
use serde::Serialize;

/// Time samples per return segment.
pub const FLOW_GRID: usize = 64;
const GOLDEN_STEPS: usize = 48;
const MAX_RETURNS: usize = 10_000_000;

/// `(x, s)` with `0 ≤ s < roof(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowPoint<P> {
    pub base: P,
    pub s: f64,
}

pub struct SuspensionFlow<S: DiscreteSystem> {
    base: S,
    roof: Box<dyn Fn(&S::Point) -> f64 + Send + Sync>,
    roof_label: String,
}

impl<S: DiscreteSystem> SuspensionFlow<S> {
    /// No checks; see `models::suspend` for the validated constructor.
    pub fn new(base: S, roof_label: &str, roof: impl Fn(&S::Point) -> f64 + Send + Sync + 'static) -> Self {
        SuspensionFlow {
            base,
            roof: Box::new(roof),
            roof_label: roof_label.to_string(),
        }
    }

    pub fn base(&self) -> &S {
        &self.base
    }

    pub fn roof_label(&self) -> &str {
        &self.roof_label
    }

    pub fn roof(&self, x: &S::Point) -> f64 {
        (self.roof)(x)
    }

    /// `φ^t(x, s)`, applying `(x, roof(x)) ∼ (T x, 0)`.
    pub fn flow(&self, p: &FlowPoint<S::Point>, t: f64) -> Result<FlowPoint<S::Point>> {
        if !t.is_finite() {
            return Err(Error::InvalidArgument("flow time must be finite".into()));
        }
        let mut x = p.base.clone();
        let mut s = p.s + t;
        let mut returns = 0usize;
        loop {
            let r = self.roof(&x);
            if !(r > 0.0) {
                return Err(Error::InvalidSystem(format!("roof {r} is not positive")));
            }
            if s >= r {
                s -= r;
                x = self.base.iterate(&x);
            } else if s < 0.0 {
                x = self.base.inverse_iterate(&x);
                s += self.roof(&x);
            } else {
                return Ok(FlowPoint { base: x, s });
            }
            returns += 1;
            if returns > MAX_RETURNS {
                return Err(Error::ResourceCap {
                    what: "section returns",
                    count: returns,
                    cap: MAX_RETURNS,
                });
            }
        }
    }

    /// Period of the closed orbit through `(x, 0)` for a base point of
    /// period `p`: the sum of the roof over the base orbit.
    pub fn flow_period(&self, x: &S::Point, p: usize) -> f64 {
        let mut y = x.clone();
        let mut total = 0.0;
        for _ in 0..p {
            total += self.roof(&y);
            y = self.base.iterate(&y);
        }
        total
    }
}

/// A function on the suspension space, `F(x, s)`.
pub trait FlowObservable<P>: Sync {
    fn evaluate(&self, x: &P, s: f64) -> f64;

    fn label(&self) -> String;

    /// Lipschitz constant of `s ↦ F(x, s)`, if known.
    fn time_lipschitz(&self) -> Option<f64> {
        None
    }
}

pub struct FnFlowObservable<P> {
    f: Box<dyn Fn(&P, f64) -> f64 + Send + Sync>,
    label: String,
    lipschitz: Option<f64>,
}

impl<P> FnFlowObservable<P> {
    pub fn new(label: &str, lipschitz: Option<f64>, f: impl Fn(&P, f64) -> f64 + Send + Sync + 'static) -> Self {
        FnFlowObservable {
            f: Box::new(f),
            label: label.to_string(),
            lipschitz,
        }
    }
}

impl<P> FlowObservable<P> for FnFlowObservable<P> {
    fn evaluate(&self, x: &P, s: f64) -> f64 {
        (self.f)(x, s)
    }

    fn label(&self) -> String {
        self.label.clone()
    }

    fn time_lipschitz(&self) -> Option<f64> {
        self.lipschitz
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowMax {
    pub value: f64,
    /// 0 for the segment over `x`, -1 for the one over `T^{-1} x`.
    pub segment: i32,
    pub s: f64,
    /// Largest time step of the sampling grid.
    pub step: f64,
    /// `Lipschitz · step / 2` when a Lipschitz constant is known.
    pub error_bound: Option<f64>,
    pub certified: bool,
}

fn golden_max(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv * (b - a);
    let mut d = a + inv * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..GOLDEN_STEPS {
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv * (b - a);
            gd = g(d);
        }
    }
    if gc >= gd {
        (c, gc)
    } else {
        (d, gd)
    }
}

/// `maxF` with `grid` samples per segment.
pub fn max_f_flow_with<S, F>(susp: &SuspensionFlow<S>, f: &F, x: &S::Point, grid: usize) -> Result<FlowMax>
where
    S: DiscreteSystem,
    F: FlowObservable<S::Point> + ?Sized,
{
    if grid < 2 {
        return Err(Error::InvalidArgument("time grid needs at least 2 samples".into()));
    }
    let prev = susp.base.inverse_iterate(x);
    let mut best: Option<FlowMax> = None;
    let mut step = 0.0f64;
    for (segment, y) in [(-1, &prev), (0, x)] {
        let r = susp.roof(y);
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidSystem(format!("roof {r} is not positive")));
        }
        let h = r / (grid - 1) as f64;
        step = step.max(h);
        let (mut bi, mut bv) = (0usize, f64::NEG_INFINITY);
        for i in 0..grid {
            let v = f.evaluate(y, i as f64 * h);
            if v > bv {
                (bi, bv) = (i, v);
            }
        }
        let lo = bi.saturating_sub(1) as f64 * h;
        let hi = ((bi + 1).min(grid - 1) as f64 * h).min(r);
        let (rs, rv) = golden_max(|s| f.evaluate(y, s), lo, hi);
        let (s, value) = if rv > bv { (rs, rv) } else { (bi as f64 * h, bv) };
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(FlowMax {
                value,
                segment,
                s,
                step: 0.0,
                error_bound: None,
                certified: false,
            });
        }
    }
    let mut out = best.expect("two segments");
    out.step = step;
    out.error_bound = f.time_lipschitz().map(|l| l * step / 2.0);
    out.certified = out.error_bound.is_some();
    Ok(out)
}

/// `maxF(x)` with the default grid of [`FLOW_GRID`] samples.
pub fn max_f_flow<S, F>(susp: &SuspensionFlow<S>, f: &F, x: &S::Point) -> Result<FlowMax>
where
    S: DiscreteSystem,
    F: FlowObservable<S::Point> + ?Sized,
{
    max_f_flow_with(susp, f, x, FLOW_GRID)
}

struct MaxF<'a, S: DiscreteSystem, F: ?Sized> {
    susp: &'a SuspensionFlow<S>,
    f: &'a F,
}

impl<S, F> Observable<S::Point> for MaxF<'_, S, F>
where
    S: DiscreteSystem,
    F: FlowObservable<S::Point> + ?Sized,
{
    type Value = f64;

    fn evaluate(&self, p: &S::Point) -> Result<f64> {
        Ok(max_f_flow(self.susp, self.f, p)?.value)
    }

    fn label(&self) -> String {
        format!("max {}", self.f.label())
    }

    fn smoothness(&self) -> Smoothness {
        self.f.time_lipschitz().map_or(Smoothness::Exact, Smoothness::Lipschitz)
    }
}

/// Sampled Markov spectrum of `maxF` on the section.
pub fn section_spectrum<S, F>(susp: &SuspensionFlow<S>, f: &F, max_period: usize) -> Result<Vec<SpectrumSample<f64>>>
where
    S: DiscreteSystem,
    F: FlowObservable<S::Point> + ?Sized,
{
    sample_spectrum(&susp.base, &MaxF { susp, f }, max_period)
}

#[derive(Clone, Debug, Serialize)]
pub struct InclusionViolation {
    pub witness: String,
    pub period: usize,
    pub section_value: f64,
    pub flow_value: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct InclusionReport {
    pub orbits: usize,
    pub max_discrepancy: f64,
    pub violations: Vec<InclusionViolation>,
    pub certified: bool,
}

/// Checks, on every base orbit of period at most `max_period`, that the
/// Markov value of `maxF` on the section equals the maximum of `F` over the
/// closed flow orbit, sampled on a grid ten times finer.
pub fn flow_section_inclusion<S, F>(susp: &SuspensionFlow<S>, f: &F, max_period: usize) -> Result<InclusionReport>
where
    S: DiscreteSystem,
    F: FlowObservable<S::Point> + ?Sized,
{
    use rayon::prelude::*;
    let orbits = susp.base.periodic_orbits(max_period)?;
    let section = MaxF { susp, f };
    let fine = 10 * (FLOW_GRID - 1) + 1;
    let rows = orbits
        .par_iter()
        .map(|o| {
            let m = markov_value(&susp.base, &section, &o.point, o.period)?;
            let mut y = o.point.clone();
            let mut flow_value = f64::NEG_INFINITY;
            let mut tol = 0.0f64;
            let mut lip_tol = 0.0f64;
            for _ in 0..o.period {
                let r = susp.roof(&y);
                let h = r / (fine - 1) as f64;
                let mut prev: Option<f64> = None;
                for i in 0..fine {
                    let v = f.evaluate(&y, i as f64 * h);
                    flow_value = flow_value.max(v);
                    if let Some(p) = prev {
                        // empirical variation over one coarse step
                        tol = tol.max((v - p).abs() * 10.0);
                    }
                    prev = Some(v);
                }
                if let Some(l) = f.time_lipschitz() {
                    lip_tol = lip_tol.max(l * r / (FLOW_GRID - 1) as f64);
                }
                y = susp.base.iterate(&y);
            }
            if f.time_lipschitz().is_some() {
                tol = lip_tol;
            }
            Ok((o.witness.clone(), o.period, m.value, flow_value, tol))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut violations = Vec::new();
    let mut max_discrepancy = 0.0f64;
    for (witness, period, section_value, flow_value, tolerance) in rows {
        let d = (section_value - flow_value).abs();
        max_discrepancy = max_discrepancy.max(d);
        if d > tolerance {
            violations.push(InclusionViolation {
                witness,
                period,
                section_value,
                flow_value,
                tolerance,
            });
        }
    }
    Ok(InclusionReport {
        orbits: orbits.len(),
        max_discrepancy,
        violations,
        certified: f.time_lipschitz().is_some(),
    })
}
