//! Lagrange and Markov spectra of discrete systems sampled on periodic
//! orbits, and the flow reduction through a cross-section.
//!
//! For a point `x`, the Markov value is `sup_{n∈ℤ} f(T^n x)` and the
//! Lagrange value is `limsup_{n→∞} f(T^n x)`. Both are computed exactly on
//! periodic orbits; for eventually periodic points the Lagrange value is
//! the Markov value of the forward tail orbit.

mod cf_shift;
mod flow;

pub use cf_shift::{CfShift, HeightFunction};
pub use flow::{
    flow_section_inclusion, max_f_flow, max_f_flow_with, section_spectrum, FlowMax, FlowObservable, FlowPoint, FnFlowObservable,
    InclusionReport, InclusionViolation, SuspensionFlow, FLOW_GRID,
};

use crate::cf::HeightValue;
use crate::error::{Error, Result};
use crate::surd::QuadraticSurd;
use rayon::prelude::*;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Debug;

/// Relative tolerance for deduplicating floating spectrum values.
pub const FLOAT_DEDUP_TOL: f64 = 1e-12;

/// Values an observable may take.
pub trait SpectralValue: Clone + Debug + Send + Sync {
    fn compare(&self, other: &Self) -> Ordering;

    /// Equality used for deduplication: exact for exact values, within
    /// [`FLOAT_DEDUP_TOL`] for floats.
    fn same_value(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Equal
    }

    fn to_f64(&self) -> f64;

    /// Exact rendering, if the value is exact.
    fn exact_repr(&self) -> Option<String> {
        None
    }
}

impl SpectralValue for f64 {
    fn compare(&self, other: &Self) -> Ordering {
        self.total_cmp(other)
    }

    fn same_value(&self, other: &Self) -> bool {
        (self - other).abs() <= FLOAT_DEDUP_TOL * self.abs().max(other.abs()).max(1.0)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl SpectralValue for QuadraticSurd {
    fn compare(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }

    fn to_f64(&self) -> f64 {
        QuadraticSurd::to_f64(self)
    }

    fn exact_repr(&self) -> Option<String> {
        Some(self.to_ascii())
    }
}

impl SpectralValue for HeightValue {
    fn compare(&self, other: &Self) -> Ordering {
        HeightValue::compare(self, other)
    }

    fn to_f64(&self) -> f64 {
        HeightValue::to_f64(self)
    }

    fn exact_repr(&self) -> Option<String> {
        Some(self.to_ascii())
    }
}

/// A periodic orbit given by one of its points.
#[derive(Clone, Debug)]
pub struct Orbit<P> {
    pub point: P,
    pub period: usize,
    /// Canonical, representative-independent label.
    pub witness: String,
}

/// An invertible discrete dynamical system.
pub trait DiscreteSystem: Sync {
    type Point: Clone + Debug + Send + Sync;

    fn name(&self) -> String;

    fn iterate(&self, p: &Self::Point) -> Self::Point;

    fn inverse_iterate(&self, p: &Self::Point) -> Self::Point;

    fn same_point(&self, a: &Self::Point, b: &Self::Point) -> bool;

    /// Canonical label of the orbit of a periodic point.
    fn witness(&self, p: &Self::Point, period: usize) -> String;

    /// One representative of every periodic orbit with minimal period at
    /// most `max_period`.
    fn periodic_orbits(&self, max_period: usize) -> Result<Vec<Orbit<Self::Point>>>;

    /// A periodic point `y` of minimal period `q` whose orbit the forward
    /// orbit of `p` accumulates on, if declared.
    fn periodic_tail(&self, _p: &Self::Point) -> Option<(Self::Point, usize)> {
        None
    }

    /// The same for the backward orbit.
    fn backward_tail(&self, _p: &Self::Point) -> Option<(Self::Point, usize)> {
        None
    }

    /// Number of iterates on each side of `p` after which its orbit has
    /// entered the tails.
    fn transient(&self, _p: &Self::Point) -> usize {
        0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "constant")]
pub enum Smoothness {
    Exact,
    Lipschitz(f64),
}

pub trait Observable<P>: Sync {
    type Value: SpectralValue;

    fn evaluate(&self, p: &P) -> Result<Self::Value>;

    fn label(&self) -> String;

    fn smoothness(&self) -> Smoothness {
        Smoothness::Exact
    }
}

/// `f64` observable from a closure.
pub struct FnObservable<P> {
    f: Box<dyn Fn(&P) -> f64 + Send + Sync>,
    label: String,
    smoothness: Smoothness,
}

impl<P> FnObservable<P> {
    pub fn new(label: &str, smoothness: Smoothness, f: impl Fn(&P) -> f64 + Send + Sync + 'static) -> Self {
        FnObservable {
            f: Box::new(f),
            label: label.to_string(),
            smoothness,
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(&format!("{c}"), Smoothness::Lipschitz(0.0), move |_| c)
    }
}

impl<P> Observable<P> for FnObservable<P> {
    type Value = f64;

    fn evaluate(&self, p: &P) -> Result<f64> {
        let v = (self.f)(p);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::InvalidArgument(format!("observable {} is not finite here", self.label)))
        }
    }

    fn label(&self) -> String {
        self.label.clone()
    }

    fn smoothness(&self) -> Smoothness {
        self.smoothness
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    Markov,
    Lagrange,
}

#[derive(Clone, Debug)]
pub struct SpectrumSample<V> {
    pub value: V,
    pub witness: String,
    pub period: usize,
    pub kind: SpectrumKind,
    /// Iterates inspected on each side beyond the periodic tails; 0 for
    /// values computed on a single period.
    pub horizon: usize,
    /// Offset of the first maximizing iterate from the point passed in.
    pub argmax: i64,
}

impl<V: SpectralValue> SpectrumSample<V> {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

fn max_over<S, F>(sys: &S, f: &F, start: &S::Point, steps: usize, backward: bool) -> Result<(F::Value, i64)>
where
    S: DiscreteSystem + ?Sized,
    F: Observable<S::Point> + ?Sized,
{
    let mut p = start.clone();
    let mut best = f.evaluate(&p)?;
    let mut arg = 0i64;
    for k in 1..steps {
        p = if backward { sys.inverse_iterate(&p) } else { sys.iterate(&p) };
        let v = f.evaluate(&p)?;
        if v.compare(&best) == Ordering::Greater {
            best = v;
            arg = if backward { -(k as i64) } else { k as i64 };
        }
    }
    Ok((best, arg))
}

/// Exact maximum of `f` over the orbit of a periodic point.
pub fn markov_value<S, F>(sys: &S, f: &F, point: &S::Point, period: usize) -> Result<SpectrumSample<F::Value>>
where
    S: DiscreteSystem + ?Sized,
    F: Observable<S::Point> + ?Sized,
{
    if period == 0 {
        return Err(Error::InvalidArgument("period must be at least 1".into()));
    }
    let mut q = point.clone();
    for _ in 0..period {
        q = sys.iterate(&q);
    }
    if !sys.same_point(&q, point) {
        return Err(Error::NotPeriodic(period));
    }
    let (value, argmax) = max_over(sys, f, point, period, false)?;
    Ok(SpectrumSample {
        value,
        witness: sys.witness(point, period),
        period,
        kind: SpectrumKind::Markov,
        horizon: 0,
        argmax,
    })
}

/// Limsup of `f` along the forward orbit of an eventually periodic point.
pub fn lagrange_value<S, F>(sys: &S, f: &F, point: &S::Point) -> Result<SpectrumSample<F::Value>>
where
    S: DiscreteSystem + ?Sized,
    F: Observable<S::Point> + ?Sized,
{
    let (tail, q) = sys.periodic_tail(point).ok_or(Error::NoPeriodicTail)?;
    let mut s = markov_value(sys, f, &tail, q)?;
    s.kind = SpectrumKind::Lagrange;
    Ok(s)
}

/// `sup_{n∈ℤ} f(T^n x)` for a point with declared forward and backward
/// tails: the exact maximum over `transient + horizon` iterates on each
/// side, combined with the maxima over both tail orbits (the limits of the
/// far iterates). Values beyond the window that exceed both tail maxima
/// are missed; `horizon` bounds how far out they are searched.
pub fn markov_value_point<S, F>(sys: &S, f: &F, point: &S::Point, horizon: usize) -> Result<SpectrumSample<F::Value>>
where
    S: DiscreteSystem + ?Sized,
    F: Observable<S::Point> + ?Sized,
{
    let (ftail, fq) = sys.periodic_tail(point).ok_or(Error::NoPeriodicTail)?;
    let (btail, bq) = sys.backward_tail(point).ok_or(Error::NoPeriodicTail)?;
    let reach = sys.transient(point) + horizon + 1;
    let (fwd, fa) = max_over(sys, f, point, reach, false)?;
    let (bwd, ba) = max_over(sys, f, point, reach, true)?;
    let ft = markov_value(sys, f, &ftail, fq)?;
    let bt = markov_value(sys, f, &btail, bq)?;
    let mut best = (fwd, fa);
    if bwd.compare(&best.0) == Ordering::Greater {
        best = (bwd, ba);
    }
    let mut witness = sys.witness(point, 0);
    for (t, dir) in [(ft, 1i64), (bt, -1)] {
        if t.value.compare(&best.0) == Ordering::Greater {
            best = (t.value, dir * reach as i64);
            witness = t.witness;
        }
    }
    Ok(SpectrumSample {
        value: best.0,
        witness,
        period: 0,
        kind: SpectrumKind::Markov,
        horizon,
        argmax: best.1,
    })
}

/// Markov values of every periodic orbit of period at most `max_period`,
/// sorted ascending and deduplicated by value.
pub fn sample_spectrum<S, F>(sys: &S, f: &F, max_period: usize) -> Result<Vec<SpectrumSample<F::Value>>>
where
    S: DiscreteSystem + ?Sized,
    F: Observable<S::Point> + ?Sized,
{
    if max_period == 0 {
        return Err(Error::InvalidArgument("max_period must be at least 1".into()));
    }
    let orbits = sys.periodic_orbits(max_period)?;
    let mut samples = orbits
        .par_iter()
        .map(|o| markov_value(sys, f, &o.point, o.period))
        .collect::<Result<Vec<_>>>()?;
    samples.sort_by(|a, b| {
        a.value
            .compare(&b.value)
            .then(a.period.cmp(&b.period))
            .then_with(|| a.witness.cmp(&b.witness))
    });
    let mut out: Vec<SpectrumSample<F::Value>> = Vec::with_capacity(samples.len());
    for s in samples {
        if out.last().is_some_and(|l| l.value.same_value(&s.value)) {
            continue;
        }
        out.push(s);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Gap {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

/// Heuristic coverage summary of sampled spectrum values.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub count: usize,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub resolution: f64,
    /// Consecutive samples further apart than `resolution`.
    pub gaps: Vec<Gap>,
    /// Window of width `resolution` holding the most samples.
    pub densest_window: Option<Bin>,
    pub histogram: Vec<Bin>,
    pub warning: Option<String>,
    pub nonrigorous: bool,
}

pub fn spectrum_report(values: &[f64], resolution: f64) -> Result<SpectrumReport> {
    if !(resolution > 0.0 && resolution.is_finite()) {
        return Err(Error::InvalidArgument("resolution must be positive".into()));
    }
    let mut v: Vec<f64> = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mut report = SpectrumReport {
        count: v.len(),
        min: v.first().copied(),
        max: v.last().copied(),
        resolution,
        gaps: Vec::new(),
        densest_window: None,
        histogram: Vec::new(),
        warning: None,
        nonrigorous: true,
    };
    if v.is_empty() {
        report.warning = Some("no samples".into());
        return Ok(report);
    }
    report.gaps = v
        .windows(2)
        .filter(|w| w[1] - w[0] > resolution)
        .map(|w| Gap { lo: w[0], hi: w[1] })
        .collect();
    let mut best = Bin {
        lo: v[0],
        hi: v[0] + resolution,
        count: 0,
    };
    let mut j = 0;
    for i in 0..v.len() {
        while j < v.len() && v[j] <= v[i] + resolution {
            j += 1;
        }
        if j - i > best.count {
            best = Bin {
                lo: v[i],
                hi: v[i] + resolution,
                count: j - i,
            };
        }
    }
    report.densest_window = Some(best);
    let lo = v[0];
    let bins = (((v[v.len() - 1] - lo) / resolution).floor() as usize + 1).min(1 << 20);
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &x in &v {
        let k = (((x - lo) / resolution).floor() as usize).min(bins - 1);
        *counts.entry(k).or_default() += 1;
    }
    report.histogram = (0..bins)
        .map(|k| Bin {
            lo: lo + k as f64 * resolution,
            hi: lo + (k + 1) as f64 * resolution,
            count: counts.get(&k).copied().unwrap_or(0),
        })
        .collect();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_examples() {
        let r = spectrum_report(&[1.0, 2.0, 3.0], 0.5).unwrap();
        assert_eq!(r.gaps, vec![Gap { lo: 1.0, hi: 2.0 }, Gap { lo: 2.0, hi: 3.0 }]);
        assert!(r.nonrigorous);
        assert_eq!(r.histogram.len(), 5);
        assert_eq!(r.histogram.iter().map(|b| b.count).sum::<usize>(), 3);
        let e = spectrum_report(&[], 0.5).unwrap();
        assert!(e.warning.is_some() && e.gaps.is_empty() && e.histogram.is_empty());
        assert!(spectrum_report(&[1.0], 0.0).is_err());
    }

    #[test]
    fn densest_window() {
        let r = spectrum_report(&[0.0, 5.0, 5.1, 5.2, 9.0], 0.5).unwrap();
        let w = r.densest_window.unwrap();
        assert_eq!((w.lo, w.count), (5.0, 3));
    }

    #[test]
    fn float_dedup_is_relative() {
        assert!(1.0f64.same_value(&(1.0 + 1e-13)));
        assert!(!1.0f64.same_value(&(1.0 + 1e-11)));
        assert!(1e6f64.same_value(&(1e6 + 1e-7)));
    }
}
