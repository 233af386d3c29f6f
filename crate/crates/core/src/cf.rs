//! Continued fractions: exact values of eventually periodic expansions and
//! the height function `f(θ) = [a_0; a_1, …] + [0; a_{-1}, a_{-2}, …]` on
//! bi-infinite digit sequences.

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::surd::QuadraticSurd;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// Largest digit accepted anywhere.
pub const MAX_DIGIT: u64 = 1_000_000;

/// Longest prefix plus period accepted by [`cf_value`].
pub const MAX_DIGITS: usize = 100_000;

/// Bits used to compare values that do not share a quadratic field
/// (about 80 decimal digits).
const MIXED_BITS: u32 = 280;
const MIXED_BITS_MAX: u32 = 2048;

/// A one-sided eventually periodic expansion `[prefix; period, period, …]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuedFraction {
    pub prefix: Vec<u64>,
    pub period: Vec<u64>,
}

type Mat = [[BigInt; 2]; 2];

fn identity() -> Mat {
    [
        [BigInt::one(), BigInt::zero()],
        [BigInt::zero(), BigInt::one()],
    ]
}

/// `m · [[a, 1], [1, 0]]`
fn push_digit(m: &Mat, a: u64) -> Mat {
    let a = BigInt::from(a);
    [
        [&m[0][0] * &a + &m[0][1], m[0][0].clone()],
        [&m[1][0] * &a + &m[1][1], m[1][0].clone()],
    ]
}

fn check_digits(prefix: &[u64], period: &[u64]) -> Result<()> {
    if prefix.len() + period.len() > MAX_DIGITS {
        return Err(Error::ResourceCap {
            what: "continued fraction digits",
            count: prefix.len() + period.len(),
            cap: MAX_DIGITS,
        });
    }
    if prefix.is_empty() && period.is_empty() {
        return Err(Error::InvalidArgument("empty continued fraction".into()));
    }
    let tail = prefix.iter().skip(1).chain(period);
    if let Some(d) = tail.clone().find(|&&d| d == 0) {
        return Err(Error::InvalidArgument(format!("partial quotient {d} must be at least 1")));
    }
    if let Some(d) = prefix.iter().chain(period).find(|&&d| d > MAX_DIGIT) {
        return Err(Error::InvalidArgument(format!("digit {d} exceeds {MAX_DIGIT}")));
    }
    Ok(())
}

/// The positive fixed point of the purely periodic expansion `[p_0; p_1, …, p_{k-1}, p_0, …]`.
fn purely_periodic(period: &[u64]) -> QuadraticSurd {
    let m = period.iter().fold(identity(), |m, &a| push_digit(&m, a));
    let [[a, b], [c, d]] = m;
    // x = (a x + b) / (c x + d)  ⇒  c x² + (d - a) x - b = 0
    let amd = &a - &d;
    let disc = &amd * &amd + BigInt::from(4) * &b * &c;
    QuadraticSurd::new(amd, BigInt::one(), BigInt::from(2) * c, disc)
}

/// Exact value of `[prefix; period, period, …]`. An empty period gives the
/// finite (rational) expansion.
pub fn cf_value(prefix: &[u64], period: &[u64]) -> Result<QuadraticSurd> {
    check_digits(prefix, period)?;
    let m = prefix.iter().fold(identity(), |m, &a| push_digit(&m, a));
    if period.is_empty() {
        let [[p, _], [q, _]] = m;
        return Ok(QuadraticSurd::from_ratio(p, q));
    }
    let x = purely_periodic(period);
    if prefix.is_empty() {
        return Ok(x);
    }
    let [[a, b], [c, d]] = m;
    let num = &(&x * &QuadraticSurd::from_integer(a)) + &QuadraticSurd::from_integer(b);
    let den = &(&x * &QuadraticSurd::from_integer(c)) + &QuadraticSurd::from_integer(d);
    Ok(&num / &den)
}

impl ContinuedFraction {
    pub fn new(prefix: Vec<u64>, period: Vec<u64>) -> Result<Self> {
        check_digits(&prefix, &period)?;
        Ok(ContinuedFraction { prefix, period })
    }

    pub fn value(&self) -> Result<QuadraticSurd> {
        cf_value(&self.prefix, &self.period)
    }

    /// The `k`-th partial quotient.
    pub fn digit(&self, k: usize) -> Option<u64> {
        if k < self.prefix.len() {
            Some(self.prefix[k])
        } else if self.period.is_empty() {
            None
        } else {
            Some(self.period[(k - self.prefix.len()) % self.period.len()])
        }
    }

    /// The first `n` convergents `p_k / q_k`.
    pub fn convergents(&self, n: usize) -> Vec<(BigInt, BigInt)> {
        let mut out = Vec::with_capacity(n);
        let mut m = identity();
        for k in 0..n {
            let Some(a) = self.digit(k) else { break };
            m = push_digit(&m, a);
            out.push((m[0][0].clone(), m[1][0].clone()));
        }
        out
    }

    /// Parses `a0;a1,a2,(p1,p2,…)` where the parenthesised part repeats.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse continued fraction {text:?}"));
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let t = t.trim_start_matches('[').trim_end_matches(']');
        let (head, period) = match t.find('(') {
            Some(i) => {
                let inner = t[i + 1..].strip_suffix(')').ok_or_else(bad)?;
                (&t[..i], inner)
            }
            None => (t, ""),
        };
        let nums = |s: &str| -> Result<Vec<u64>> {
            s.split([',', ';'])
                .filter(|p| !p.is_empty())
                .map(|p| p.parse::<u64>().map_err(|_| bad()))
                .collect()
        };
        Self::new(nums(head)?, nums(period)?)
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "[")?;
        match self.prefix.split_first() {
            Some((a0, rest)) => {
                write!(f, "{a0};{}", join(rest))?;
                if !self.period.is_empty() {
                    if !rest.is_empty() {
                        write!(f, ",")?;
                    }
                    write!(f, "({})", join(&self.period))?;
                }
            }
            None => write!(f, "({})", join(&self.period))?,
        }
        write!(f, "]")
    }
}

/// A bi-infinite sequence of positive integers of the form
/// `… L L L C R R R …`, with position 0 at `center[origin]` (or, for an
/// empty center, at the first digit of the right tail).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CfSequence {
    pub left_period: Vec<u64>,
    pub center: Vec<u64>,
    pub right_period: Vec<u64>,
    #[serde(default)]
    pub origin: i64,
}

impl CfSequence {
    pub fn new(left_period: Vec<u64>, center: Vec<u64>, right_period: Vec<u64>, origin: i64) -> Result<Self> {
        if left_period.is_empty() || right_period.is_empty() {
            return Err(Error::InvalidArgument("tails need a nonempty period".into()));
        }
        let all = left_period.iter().chain(&center).chain(&right_period);
        if let Some(&d) = all.clone().find(|&&d| d == 0 || d > MAX_DIGIT) {
            return Err(Error::InvalidArgument(format!("digit {d} outside 1..={MAX_DIGIT}")));
        }
        Ok(CfSequence {
            left_period,
            center,
            right_period,
            origin,
        })
    }

    /// The periodic sequence repeating `period` in both directions, with
    /// position 0 at `period[0]`.
    pub fn periodic(period: Vec<u64>) -> Result<Self> {
        Self::new(period.clone(), Vec::new(), period, 0)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: CfSequence = serde_json::from_str(text)?;
        Self::new(raw.left_period, raw.center, raw.right_period, raw.origin)
    }

    /// Digit at position `i` relative to position 0.
    pub fn digit(&self, i: i64) -> u64 {
        self.digit_abs(i + self.origin)
    }

    // index into the center coordinates (center[0] at 0)
    fn digit_abs(&self, j: i64) -> u64 {
        let n = self.center.len() as i64;
        if j < 0 {
            let l = self.left_period.len() as i64;
            self.left_period[j.rem_euclid(l) as usize]
        } else if j < n {
            self.center[j as usize]
        } else {
            let r = self.right_period.len() as i64;
            self.right_period[(j - n).rem_euclid(r) as usize]
        }
    }

    /// The sequence shifted `k` steps to the left (σ^k).
    pub fn shift(&self, k: i64) -> Self {
        CfSequence {
            origin: self.origin + k,
            ..self.clone()
        }
    }

    /// `[a_i; a_{i+1}, …]`
    pub fn forward_expansion(&self, i: i64) -> ContinuedFraction {
        let j = i + self.origin;
        let n = self.center.len() as i64;
        let stop = j.max(n);
        let prefix = (j..stop).map(|k| self.digit_abs(k)).collect();
        let r = self.right_period.len() as i64;
        let off = (stop - n).rem_euclid(r);
        let period = (0..r).map(|t| self.right_period[((off + t) % r) as usize]).collect();
        ContinuedFraction { prefix, period }
    }

    /// `[a_{i-1}; a_{i-2}, …]`
    pub fn backward_expansion(&self, i: i64) -> ContinuedFraction {
        let j = i + self.origin;
        let start = j - 1;
        let prefix: Vec<u64> = (0..=start.max(-1)).rev().filter(|&k| k >= 0).map(|k| self.digit_abs(k)).collect();
        let first_left = start.min(-1);
        let l = self.left_period.len() as i64;
        let period = (0..l).map(|t| self.digit_abs(first_left - t)).collect();
        ContinuedFraction { prefix, period }
    }

    /// `[a_i; a_{i+1}, …] + [0; a_{i-1}, a_{i-2}, …]`.
    pub fn height(&self, i: i64) -> Result<HeightValue> {
        let alpha = self.forward_expansion(i).value()?;
        let back = self.backward_expansion(i);
        let mut prefix = vec![0];
        prefix.extend(back.prefix);
        let beta = cf_value(&prefix, &back.period)?;
        Ok(HeightValue::from_parts(alpha, beta))
    }

    /// The minimal period if the whole sequence is periodic.
    pub fn minimal_period(&self) -> Option<usize> {
        let r = &self.right_period;
        let p = (1..=r.len())
            .find(|&d| r.len().is_multiple_of(d) && (d..r.len()).all(|i| r[i] == r[i - d]))
            .unwrap_or(r.len()) as i64;
        let l = self.left_period.len() as i64;
        let lo = -(l * p) - p;
        let hi = self.center.len() as i64 + p;
        (lo..hi)
            .all(|j| self.digit_abs(j) == self.digit_abs(j + p))
            .then_some(p as usize)
    }

    /// True when both sequences have the same digits at every position.
    pub fn same_sequence(&self, other: &Self) -> bool {
        let span = |s: &Self| s.center.len() as i64 + s.origin.abs();
        let l = (self.left_period.len() * other.left_period.len()) as i64;
        let r = (self.right_period.len() * other.right_period.len()) as i64;
        let m = span(self).max(span(other)) + l.max(r) + 1;
        (-m..=m).all(|i| self.digit(i) == other.digit(i))
    }

    /// The periodic sequence carried by the right tail, together with the
    /// number of shifts `m` after which `σ^m(self)` agrees with it at every
    /// nonnegative position.
    pub fn forward_tail(&self) -> (CfSequence, usize) {
        let n = self.center.len() as i64;
        let r = self.right_period.len() as i64;
        let m = (n - self.origin).max(0);
        let off = (self.origin + m - n).rem_euclid(r);
        let period: Vec<u64> = (0..r).map(|t| self.right_period[((off + t) % r) as usize]).collect();
        (CfSequence::periodic(period).expect("digits already validated"), m as usize)
    }

    /// The periodic sequence carried by the left tail, together with the
    /// number of shifts `m` after which `σ^{-m}(self)` agrees with it at
    /// every nonpositive position.
    pub fn backward_tail(&self) -> (CfSequence, usize) {
        let l = self.left_period.len() as i64;
        let m = (self.origin + 1).max(0);
        let base = self.origin - m;
        let period: Vec<u64> = (0..l).map(|t| self.left_period[(base + t).rem_euclid(l) as usize]).collect();
        (CfSequence::periodic(period).expect("digits already validated"), m as usize)
    }
}

impl fmt::Display for CfSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        write!(
            f,
            "…({})[{}]({})… @{}",
            join(&self.left_period),
            join(&self.center),
            join(&self.right_period),
            self.origin
        )
    }
}

/// A value of the height function. Sums of two surds from the same field
/// are exact; otherwise the value lies in a biquadratic field and is kept
/// as its two summands, compared by high-precision enclosures.
#[derive(Clone, Debug)]
pub enum HeightValue {
    Exact(QuadraticSurd),
    Biquadratic { alpha: QuadraticSurd, beta: QuadraticSurd },
}

impl HeightValue {
    pub fn from_parts(alpha: QuadraticSurd, beta: QuadraticSurd) -> Self {
        match alpha.checked_add(&beta) {
            Some(s) => HeightValue::Exact(s),
            None => HeightValue::Biquadratic { alpha, beta },
        }
    }

    pub fn exact(&self) -> Option<&QuadraticSurd> {
        match self {
            HeightValue::Exact(s) => Some(s),
            HeightValue::Biquadratic { .. } => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, HeightValue::Exact(_))
    }

    /// `scale · self + shift` for rational `scale > 0` and `shift`.
    pub fn affine(&self, scale: &QuadraticSurd, shift: &QuadraticSurd) -> Result<HeightValue> {
        let rational = |s: &QuadraticSurd| {
            if s.is_rational() {
                Ok(())
            } else {
                Err(Error::InvalidArgument("affine coefficients must be rational".into()))
            }
        };
        rational(scale)?;
        rational(shift)?;
        Ok(match self {
            HeightValue::Exact(s) => HeightValue::Exact(&(s * scale) + shift),
            HeightValue::Biquadratic { alpha, beta } => HeightValue::from_parts(&(alpha * scale) + shift, beta * scale),
        })
    }

    fn bounds(&self, bits: u32) -> (BigInt, BigInt) {
        match self {
            HeightValue::Exact(s) => s.bounds_scaled(bits),
            HeightValue::Biquadratic { alpha, beta } => {
                let (a0, a1) = alpha.bounds_scaled(bits);
                let (b0, b1) = beta.bounds_scaled(bits);
                (a0 + b0, a1 + b1)
            }
        }
    }

    /// Outward-rounded `f64` enclosure.
    pub fn enclose(&self) -> Interval {
        match self {
            HeightValue::Exact(s) => s.enclose(),
            HeightValue::Biquadratic { alpha, beta } => alpha.enclose() + beta.enclose(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.bounds(96);
        let scale = 2f64.powi(-96);
        let mid: BigInt = (lo + hi).div_floor(&BigInt::from(2));
        mid.to_f64().unwrap_or(f64::NAN) * scale
    }

    /// Exact comparison when both values are exact; otherwise by
    /// enclosures of increasing precision. Values that stay unresolved at
    /// the maximal precision compare equal.
    pub fn compare(&self, other: &Self) -> Ordering {
        if let (HeightValue::Exact(a), HeightValue::Exact(b)) = (self, other) {
            return a.cmp_exact(b);
        }
        let mut bits = MIXED_BITS;
        loop {
            let (a0, a1) = self.bounds(bits);
            let (b0, b1) = other.bounds(bits);
            if a1 < b0 {
                return Ordering::Less;
            }
            if b1 < a0 {
                return Ordering::Greater;
            }
            if bits >= MIXED_BITS_MAX {
                return Ordering::Equal;
            }
            bits *= 2;
        }
    }

    /// ASCII rendering: the exact surd, or `alpha + beta` for mixed fields.
    pub fn to_ascii(&self) -> String {
        match self {
            HeightValue::Exact(s) => s.to_ascii(),
            HeightValue::Biquadratic { alpha, beta } => format!("{} + {}", alpha.to_ascii(), beta.to_ascii()),
        }
    }
}

impl PartialEq for HeightValue {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Equal
    }
}

impl fmt::Display for HeightValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeightValue::Exact(s) => write!(f, "{s}"),
            HeightValue::Biquadratic { alpha, beta } => write!(f, "{alpha} + {beta}"),
        }
    }
}

/// The Gauss–Cantor set `C(N)` of numbers in `(0, 1)` with all partial
/// quotients at most `N`.
pub fn gauss_cantor_set(n: u64) -> Result<crate::cantor::RegularCantorSet> {
    crate::cantor::RegularCantorSet::gauss(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn surd(p: i64, q: i64, r: i64, d: i64) -> QuadraticSurd {
        QuadraticSurd::new(p.into(), q.into(), r.into(), d.into())
    }

    #[test]
    fn periodic_values() {
        assert_eq!(cf_value(&[], &[1]).unwrap(), surd(1, 1, 2, 5));
        assert_eq!(cf_value(&[], &[2]).unwrap(), surd(1, 1, 1, 2));
        assert_eq!(cf_value(&[0], &[4]).unwrap(), surd(-2, 1, 1, 5));
        assert_eq!(cf_value(&[1, 2, 2], &[]).unwrap(), QuadraticSurd::from_ratio(7, 5));
        assert_eq!(cf_value(&[3], &[7, 15]).unwrap(), ContinuedFraction::parse("[3;(7,15)]").unwrap().value().unwrap());
        assert!(cf_value(&[1, 0], &[1]).is_err());
        assert!(cf_value(&[], &[]).is_err());
    }

    #[test]
    fn parse_and_display_round_trip() {
        let c = ContinuedFraction::parse("[0;4,(1,2)]").unwrap();
        assert_eq!(c.prefix, vec![0, 4]);
        assert_eq!(c.period, vec![1, 2]);
        assert_eq!(ContinuedFraction::parse(&c.to_string()).unwrap(), c);
        let p = ContinuedFraction::parse("(1)").unwrap();
        assert!(p.prefix.is_empty());
    }

    #[test]
    fn height_examples() {
        let ones = CfSequence::periodic(vec![1]).unwrap();
        assert_eq!(ones.height(0).unwrap().exact().unwrap(), &QuadraticSurd::sqrt_of(5));
        assert_eq!(ones.height(17).unwrap().exact().unwrap(), &QuadraticSurd::sqrt_of(5));
        let twos = CfSequence::periodic(vec![2]).unwrap();
        assert_eq!(twos.height(-3).unwrap().exact().unwrap(), &QuadraticSurd::sqrt_of(8));
        let two_one = CfSequence::periodic(vec![2, 1]).unwrap();
        assert_eq!(two_one.height(0).unwrap().exact().unwrap(), &QuadraticSurd::sqrt_of(12));
        assert!(two_one.height(1).unwrap().compare(&two_one.height(0).unwrap()) == Ordering::Less);
    }

    #[test]
    fn transient_center() {
        let s = CfSequence::new(vec![1], vec![5], vec![1], 0).unwrap();
        let h = s.height(0).unwrap();
        assert!(h.is_exact());
        assert!(h.to_f64() > 5.0);
        let (tail, _) = s.forward_tail();
        assert!(tail.same_sequence(&CfSequence::periodic(vec![1]).unwrap()));
        assert_eq!(s.minimal_period(), None);
        assert_eq!(CfSequence::periodic(vec![1, 2, 1, 2]).unwrap().minimal_period(), Some(2));
    }

    #[test]
    fn mixed_tails_are_biquadratic() {
        let s = CfSequence::new(vec![2], vec![], vec![1], 0).unwrap();
        let h = s.height(0).unwrap();
        assert!(!h.is_exact());
        // φ + [0;2,2,…] = φ + √2 - 1
        let expect = (1.0 + 5f64.sqrt()) / 2.0 + 2f64.sqrt() - 1.0;
        assert!((h.to_f64() - expect).abs() < 1e-14);
        assert!(h.enclose().contains(expect) || (h.enclose().mid() - expect).abs() < 1e-14);
        let bigger = HeightValue::Exact(QuadraticSurd::from_integer(3));
        assert_eq!(h.compare(&bigger), Ordering::Less);
    }

    #[test]
    fn json_round_trip() {
        let s = CfSequence::new(vec![1, 2], vec![3, 4], vec![2], 1).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(CfSequence::from_json(&text).unwrap(), s);
        let no_origin = CfSequence::from_json(r#"{"left_period":[1],"center":[],"right_period":[2]}"#).unwrap();
        assert_eq!(no_origin.origin, 0);
        assert!(CfSequence::from_json(r#"{"left_period":[],"center":[],"right_period":[2]}"#).is_err());
    }

    #[test]
    fn tails_follow_the_shift() {
        let s = CfSequence::new(vec![3, 1], vec![5, 6, 7], vec![1, 2, 2], 1).unwrap();
        let (fwd, m) = s.forward_tail();
        assert_eq!(m, 2);
        for k in [0i64, 3, 30] {
            let far = s.shift(m as i64 + k);
            assert!((0..10).all(|i| far.digit(i) == fwd.digit(i)));
        }
        let (bwd, m) = s.backward_tail();
        assert_eq!(m, 2);
        for k in [0i64, 2, 40] {
            let back = s.shift(-(m as i64) - k);
            assert!((-10..=0).all(|i| back.digit(i) == bwd.digit(i)));
        }
    }

    fn arb_seq() -> impl Strategy<Value = CfSequence> {
        let digits = |lo, hi| prop::collection::vec(1u64..=3, lo..hi);
        (digits(1, 4), digits(0, 4), digits(1, 4), -3i64..6)
            .prop_map(|(l, c, r, o)| CfSequence::new(l, c, r, o).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn height_is_shift_covariant(s in arb_seq(), k in -6i64..6) {
            let a = s.height(k).unwrap();
            let b = s.shift(k).height(0).unwrap();
            prop_assert_eq!(a.compare(&b), Ordering::Equal);
            if let (Some(x), Some(y)) = (a.exact(), b.exact()) {
                prop_assert_eq!(x, y);
            }
        }

        #[test]
        fn periodic_max_is_rotation_invariant(period in prop::collection::vec(1u64..=4, 1..6), rot in 0usize..6) {
            let max_over = |p: &[u64]| {
                let s = CfSequence::periodic(p.to_vec()).unwrap();
                (0..p.len() as i64)
                    .map(|i| s.height(i).unwrap())
                    .max_by(|a, b| a.compare(b))
                    .unwrap()
            };
            let r = rot % period.len();
            let rotated: Vec<u64> = period[r..].iter().chain(&period[..r]).copied().collect();
            let a = max_over(&period);
            let b = max_over(&rotated);
            prop_assert!(a.is_exact() && b.is_exact());
            prop_assert_eq!(a.exact().unwrap(), b.exact().unwrap());
        }

        #[test]
        fn convergents_bracket_alternately(prefix in prop::collection::vec(1u64..=5, 0..3), period in prop::collection::vec(1u64..=5, 1..4)) {
            let c = ContinuedFraction::new(prefix, period).unwrap();
            let x = c.value().unwrap();
            let conv = c.convergents(14);
            for (k, (p, q)) in conv.iter().enumerate() {
                let ck = QuadraticSurd::from_ratio(p.clone(), q.clone());
                let side = ck.cmp_exact(&x);
                let expect = if k % 2 == 0 { Ordering::Less } else { Ordering::Greater };
                prop_assert_eq!(side, expect);
                if let Some((_, q1)) = conv.get(k + 1) {
                    let err = (ck.to_f64() - x.to_f64()).abs();
                    let bound = 1.0 / (q.to_f64().unwrap() * q1.to_f64().unwrap());
                    prop_assert!(err < bound * (1.0 + 1e-9) + 1e-15);
                }
            }
        }
    }
}
