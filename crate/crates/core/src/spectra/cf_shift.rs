use super::{DiscreteSystem, Observable, Orbit, Smoothness};
use crate::cf::{CfSequence, HeightValue};
use crate::error::{Error, Result};
use crate::symbolic::{PeriodicWord, SubshiftSft};
use std::collections::BTreeSet;

/// The two-sided shift on sequences of partial quotients in `1..=bound`.
#[derive(Clone, Debug)]
pub struct CfShift {
    bound: u64,
    subshift: SubshiftSft,
}

impl CfShift {
    pub fn new(bound: u64) -> Result<Self> {
        if bound == 0 || bound > 64 {
            return Err(Error::InvalidArgument(format!("digit bound {bound} not in 1..=64")));
        }
        Ok(CfShift {
            bound,
            subshift: SubshiftSft::digit_shift(bound as usize),
        })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn subshift(&self) -> &SubshiftSft {
        &self.subshift
    }

    fn word(&self, p: &CfSequence, period: usize) -> Option<PeriodicWord> {
        let digits: Vec<usize> = (0..period as i64).map(|i| p.digit(i) as usize - 1).collect();
        PeriodicWord::new(digits).ok()
    }
}

fn render(w: &PeriodicWord) -> String {
    let d: Vec<String> = w.symbols().iter().map(|s| (s + 1).to_string()).collect();
    format!("({})", d.join(","))
}

impl DiscreteSystem for CfShift {
    type Point = CfSequence;

    fn name(&self) -> String {
        format!("cf(digits<={})", self.bound)
    }

    fn iterate(&self, p: &CfSequence) -> CfSequence {
        p.shift(1)
    }

    fn inverse_iterate(&self, p: &CfSequence) -> CfSequence {
        p.shift(-1)
    }

    fn same_point(&self, a: &CfSequence, b: &CfSequence) -> bool {
        a.same_sequence(b)
    }

    fn witness(&self, p: &CfSequence, period: usize) -> String {
        if period == 0 {
            return p.to_string();
        }
        self.word(p, period).map_or_else(|| p.to_string(), |w| render(&w))
    }

    fn periodic_orbits(&self, max_period: usize) -> Result<Vec<Orbit<CfSequence>>> {
        let mut words = BTreeSet::new();
        for p in 1..=max_period {
            words.extend(self.subshift.enumerate_periodic(p)?);
        }
        let mut words: Vec<PeriodicWord> = words.into_iter().collect();
        words.sort_by(|a, b| a.period().cmp(&b.period()).then_with(|| a.cmp(b)));
        words
            .into_iter()
            .map(|w| {
                let digits = w.symbols().iter().map(|&s| s as u64 + 1).collect();
                Ok(Orbit {
                    point: CfSequence::periodic(digits)?,
                    period: w.period(),
                    witness: render(&w),
                })
            })
            .collect()
    }

    fn periodic_tail(&self, p: &CfSequence) -> Option<(CfSequence, usize)> {
        let (tail, _) = p.forward_tail();
        let q = tail.minimal_period()?;
        Some((tail, q))
    }

    fn backward_tail(&self, p: &CfSequence) -> Option<(CfSequence, usize)> {
        let (tail, _) = p.backward_tail();
        let q = tail.minimal_period()?;
        Some((tail, q))
    }

    fn transient(&self, p: &CfSequence) -> usize {
        p.forward_tail().1.max(p.backward_tail().1)
    }
}

/// `λ(x) = [a_0; a_1, …] + [0; a_{-1}, a_{-2}, …]`.
#[derive(Clone, Copy, Debug, Default)]
pub struct HeightFunction;

impl Observable<CfSequence> for HeightFunction {
    type Value = HeightValue;

    fn evaluate(&self, p: &CfSequence) -> Result<HeightValue> {
        p.height(0)
    }

    fn label(&self) -> String {
        "height".into()
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness::Exact
    }
}
