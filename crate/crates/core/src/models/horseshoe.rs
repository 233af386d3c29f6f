//! Affine horseshoes on the unit square.
//!
//! The strips `S_a = [0,1] × I^u(a)` with `I^u(0) = [0, λu]`,
//! `I^u(1) = [1 − λu, 1]` are mapped affinely onto the vertical strips
//! `I^s(a) × [0,1]`, contracting `x` by `λs` and expanding `y` by `1/λu`.
//! The invariant set is `K^s × K^u`; a point with itinerary `(a_n)` has
//! `y` coded by `a_0 a_1 …` in `K^u` and `x` coded by `a_{-1} a_{-2} …` in
//! `K^s`.

use crate::cantor::{hausdorff_dim, DimensionOptions, RegularCantorSet};
use crate::cf::CfSequence;
use crate::error::{Error, Result};
use crate::spectra::{CfShift, DiscreteSystem, Observable, Orbit, Smoothness};
use crate::surd::QuadraticSurd;
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct AffineHorseshoe {
    ratio_s: QuadraticSurd,
    ratio_u: QuadraticSurd,
    stable: RegularCantorSet,
    unstable: RegularCantorSet,
}

/// Closed-form and certified dimensions of a horseshoe.
#[derive(Clone, Debug, Serialize)]
pub struct HorseshoeDimension {
    pub exact: f64,
    pub stable: (f64, f64),
    pub unstable: (f64, f64),
    /// Sum of the factor enclosures.
    pub lo: f64,
    pub hi: f64,
}

/// The simplest rational within one ulp of `r`, so `1.0 / 3.0` reads as
/// `1/3`.
pub fn simplest_rational(r: f64) -> Option<QuadraticSurd> {
    if !r.is_finite() {
        return None;
    }
    let tol = f64::EPSILON * r.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut x = r.abs();
    for _ in 0..40 {
        let a = x.floor();
        if a > 1e12 {
            break;
        }
        let a = a as i64;
        let (p2, q2) = (a.checked_mul(p1)?.checked_add(p0)?, a.checked_mul(q1)?.checked_add(q0)?);
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        if (p1 as f64 / q1 as f64 - r.abs()).abs() <= tol {
            let sign = if r < 0.0 { -1 } else { 1 };
            return Some(QuadraticSurd::from_ratio(sign * p1, q1));
        }
        let frac = x - a as f64;
        if frac == 0.0 {
            break;
        }
        x = 1.0 / frac;
    }
    QuadraticSurd::from_f64(r)
}

/// `affine_horseshoe` from floating ratios, each read as
/// [`simplest_rational`].
pub fn affine_horseshoe(ratio_s: f64, ratio_u: f64) -> Result<AffineHorseshoe> {
    let exact = |r: f64| simplest_rational(r).ok_or_else(|| Error::InvalidArgument(format!("ratio {r} is not finite")));
    AffineHorseshoe::new(exact(ratio_s)?, exact(ratio_u)?)
}

impl AffineHorseshoe {
    /// Both ratios must lie in `(0, 1/2)`; at `1/2` the strips touch.
    pub fn new(ratio_s: QuadraticSurd, ratio_u: QuadraticSurd) -> Result<Self> {
        let half = QuadraticSurd::from_ratio(1, 2);
        for (name, r) in [("stable", &ratio_s), ("unstable", &ratio_u)] {
            if !r.is_positive() || *r >= half {
                return Err(Error::InvalidSystem(format!(
                    "{name} ratio {r} not in (0, 1/2): the rectangles would overlap"
                )));
            }
        }
        Ok(AffineHorseshoe {
            stable: RegularCantorSet::affine_pair("K^s", ratio_s.clone())?,
            unstable: RegularCantorSet::affine_pair("K^u", ratio_u.clone())?,
            ratio_s,
            ratio_u,
        })
    }

    pub fn ratio_s(&self) -> &QuadraticSurd {
        &self.ratio_s
    }

    pub fn ratio_u(&self) -> &QuadraticSurd {
        &self.ratio_u
    }

    pub fn stable_set(&self) -> &RegularCantorSet {
        &self.stable
    }

    pub fn unstable_set(&self) -> &RegularCantorSet {
        &self.unstable
    }

    /// The horizontal strips `S_0, S_1` as `((x0, x1), (y0, y1))`.
    pub fn rectangles(&self) -> [((f64, f64), (f64, f64)); 2] {
        let u = self.ratio_u.to_f64();
        [((0.0, 1.0), (0.0, u)), ((0.0, 1.0), (1.0 - u, 1.0))]
    }

    /// The map on a point of `S_0 ∪ S_1`.
    pub fn apply(&self, (x, y): (f64, f64)) -> Option<(f64, f64)> {
        let (s, u) = (self.ratio_s.to_f64(), self.ratio_u.to_f64());
        if (0.0..=u).contains(&y) {
            Some((s * x, y / u))
        } else if (1.0 - u..=1.0).contains(&y) {
            Some((s * x + 1.0 - s, (y - 1.0 + u) / u))
        } else {
            None
        }
    }

    /// `log 2 / log(1/λs) + log 2 / log(1/λu)`.
    pub fn dimension_exact(&self) -> f64 {
        let f = |r: &QuadraticSurd| 2f64.ln() / -r.to_f64().ln();
        f(&self.ratio_s) + f(&self.ratio_u)
    }

    /// Sum of certified enclosures of the two factor dimensions.
    pub fn dimension(&self, opts: DimensionOptions) -> Result<HorseshoeDimension> {
        let s = hausdorff_dim(&self.stable, opts)?;
        let u = hausdorff_dim(&self.unstable, opts)?;
        let sum = s.interval() + u.interval();
        Ok(HorseshoeDimension {
            exact: self.dimension_exact(),
            stable: (s.lo, s.hi),
            unstable: (u.lo, u.hi),
            lo: sum.lo(),
            hi: sum.hi(),
        })
    }

    /// Exact `(x, y)` of an eventually periodic itinerary over `{1, 2}`.
    pub fn coordinates(&self, p: &CfSequence) -> Result<(QuadraticSurd, QuadraticSurd)> {
        let symbols = |v: &[u64]| -> Result<Vec<usize>> {
            v.iter()
                .map(|&d| match d {
                    1 | 2 => Ok(d as usize - 1),
                    _ => Err(Error::InvalidWord(format!("horseshoe symbol {d} not in {{1,2}}"))),
                })
                .collect()
        };
        let fwd = p.forward_expansion(0);
        let back = p.backward_expansion(0);
        let y = self.unstable.point(&symbols(&fwd.prefix)?, &symbols(&fwd.period)?)?;
        let x = self.stable.point(&symbols(&back.prefix)?, &symbols(&back.period)?)?;
        Ok((x, y))
    }
}

/// The horseshoe as a discrete system on itineraries over `{1, 2}`.
#[derive(Clone, Debug)]
pub struct HorseshoeSystem {
    horseshoe: AffineHorseshoe,
    shift: CfShift,
}

impl HorseshoeSystem {
    pub fn new(horseshoe: AffineHorseshoe) -> Self {
        HorseshoeSystem {
            horseshoe,
            shift: CfShift::new(2).expect("bound 2"),
        }
    }

    pub fn horseshoe(&self) -> &AffineHorseshoe {
        &self.horseshoe
    }
}

impl DiscreteSystem for HorseshoeSystem {
    type Point = CfSequence;

    fn name(&self) -> String {
        format!("horseshoe({},{})", self.horseshoe.ratio_s, self.horseshoe.ratio_u)
    }

    fn iterate(&self, p: &CfSequence) -> CfSequence {
        self.shift.iterate(p)
    }

    fn inverse_iterate(&self, p: &CfSequence) -> CfSequence {
        self.shift.inverse_iterate(p)
    }

    fn same_point(&self, a: &CfSequence, b: &CfSequence) -> bool {
        self.shift.same_point(a, b)
    }

    fn witness(&self, p: &CfSequence, period: usize) -> String {
        self.shift.witness(p, period)
    }

    fn periodic_orbits(&self, max_period: usize) -> Result<Vec<Orbit<CfSequence>>> {
        self.shift.periodic_orbits(max_period)
    }

    fn periodic_tail(&self, p: &CfSequence) -> Option<(CfSequence, usize)> {
        self.shift.periodic_tail(p)
    }

    fn backward_tail(&self, p: &CfSequence) -> Option<(CfSequence, usize)> {
        self.shift.backward_tail(p)
    }

    fn transient(&self, p: &CfSequence) -> usize {
        self.shift.transient(p)
    }
}

/// `a·x + b·y` on the horseshoe, exactly.
#[derive(Clone, Debug)]
pub struct LinearObservable {
    horseshoe: AffineHorseshoe,
    a: QuadraticSurd,
    b: QuadraticSurd,
}

impl LinearObservable {
    pub fn new(horseshoe: &AffineHorseshoe, a: QuadraticSurd, b: QuadraticSurd) -> Self {
        LinearObservable {
            horseshoe: horseshoe.clone(),
            a,
            b,
        }
    }

    /// `x + y`.
    pub fn sum(horseshoe: &AffineHorseshoe) -> Self {
        Self::new(horseshoe, QuadraticSurd::one(), QuadraticSurd::one())
    }
}

impl Observable<CfSequence> for LinearObservable {
    type Value = QuadraticSurd;

    fn evaluate(&self, p: &CfSequence) -> Result<QuadraticSurd> {
        let (x, y) = self.horseshoe.coordinates(p)?;
        Ok(&(&self.a * &x) + &(&self.b * &y))
    }

    fn label(&self) -> String {
        format!("{}*x+{}*y", self.a.to_ascii(), self.b.to_ascii())
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness::Exact
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{markov_value, sample_spectrum};

    #[test]
    fn dimensions() {
        let log23 = 2f64.ln() / 3f64.ln();
        let h = AffineHorseshoe::new(QuadraticSurd::from_ratio(1, 3), QuadraticSurd::from_ratio(1, 3)).unwrap();
        assert!((h.dimension_exact() - 2.0 * log23).abs() < 1e-15);
        let d = h.dimension(DimensionOptions::default()).unwrap();
        assert!(d.lo <= 2.0 * log23 && 2.0 * log23 <= d.hi && d.hi - d.lo < 4e-6, "{d:?}");
        let h = AffineHorseshoe::new(QuadraticSurd::from_ratio(1, 4), QuadraticSurd::from_ratio(1, 3)).unwrap();
        assert!((h.dimension_exact() - (0.5 + log23)).abs() < 1e-15);
    }

    #[test]
    fn ratios_are_read_simply() {
        assert_eq!(simplest_rational(1.0 / 3.0).unwrap(), QuadraticSurd::from_ratio(1, 3));
        assert_eq!(simplest_rational(0.25).unwrap(), QuadraticSurd::from_ratio(1, 4));
        assert_eq!(simplest_rational(2.0 / 7.0).unwrap(), QuadraticSurd::from_ratio(2, 7));
        assert_eq!(simplest_rational(-0.4).unwrap(), QuadraticSurd::from_ratio(-2, 5));
        let pi = simplest_rational(std::f64::consts::PI).unwrap();
        assert!((pi.to_f64() - std::f64::consts::PI).abs() <= 4.0 * f64::EPSILON);
        assert!(simplest_rational(f64::NAN).is_none());
        let h = affine_horseshoe(1.0 / 3.0, 0.25).unwrap();
        assert_eq!(*h.ratio_s(), QuadraticSurd::from_ratio(1, 3));
    }

    #[test]
    fn ratio_boundary() {
        assert!(affine_horseshoe(0.49, 0.3).is_ok());
        assert!(affine_horseshoe(0.5, 0.3).is_err());
        assert!(affine_horseshoe(0.3, 0.5).is_err());
        assert!(affine_horseshoe(0.0, 0.3).is_err());
    }

    #[test]
    fn coordinates_follow_the_map() {
        let h = AffineHorseshoe::new(QuadraticSurd::from_ratio(1, 3), QuadraticSurd::from_ratio(1, 4)).unwrap();
        let p = CfSequence::periodic(vec![1, 2, 2]).unwrap();
        let (x, y) = h.coordinates(&p).unwrap();
        let (x1, y1) = h.coordinates(&p.shift(1)).unwrap();
        let (fx, fy) = h.apply((x.to_f64(), y.to_f64())).unwrap();
        assert!((fx - x1.to_f64()).abs() < 1e-14 && (fy - y1.to_f64()).abs() < 1e-14);
        let zero = CfSequence::periodic(vec![1]).unwrap();
        assert_eq!(h.coordinates(&zero).unwrap(), (QuadraticSurd::zero(), QuadraticSurd::zero()));
        assert!(h.coordinates(&CfSequence::periodic(vec![3]).unwrap()).is_err());
    }

    #[test]
    fn horseshoe_spectrum() {
        let h = AffineHorseshoe::new(QuadraticSurd::from_ratio(1, 3), QuadraticSurd::from_ratio(1, 3)).unwrap();
        let sys = HorseshoeSystem::new(h.clone());
        let f = LinearObservable::sum(&h);
        let s = sample_spectrum(&sys, &f, 3).unwrap();
        assert_eq!(s[0].value, QuadraticSurd::zero());
        assert_eq!(s.last().unwrap().value, QuadraticSurd::from_integer(2));
        let p = CfSequence::periodic(vec![1, 2]).unwrap();
        let m = markov_value(&sys, &f, &p, 2).unwrap();
        // (1/4, 3/4) and (3/4, 1/4) on the orbit
        assert_eq!(m.value, QuadraticSurd::one());
    }
}
