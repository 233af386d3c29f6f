//! Outward-rounded interval arithmetic on `f64`.
//!
//! Sums, products, quotients and square roots are rounded in the right
//! direction using error-free transformations (`two_sum`, `fma` residuals),
//! so enclosures are tight to one ulp. Transcendental functions are not
//! correctly rounded by the platform libm and are widened by a fixed number
//! of ulps instead.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Extra ulps added on each side of `exp`/`ln`/`powf` results.
const LIBM_SLACK_ULPS: u32 = 4;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

pub fn add_down(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if !s.is_finite() {
        return s;
    }
    if e < 0.0 {
        s.next_down()
    } else {
        s
    }
}

pub fn add_up(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if !s.is_finite() {
        return s;
    }
    if e > 0.0 {
        s.next_up()
    } else {
        s
    }
}

pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

pub fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if !p.is_finite() || p == 0.0 && (a == 0.0 || b == 0.0) {
        return p;
    }
    let e = a.mul_add(b, -p);
    if e < 0.0 || (p == 0.0 && (a < 0.0) != (b < 0.0)) {
        p.next_down()
    } else {
        p
    }
}

pub fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if !p.is_finite() || p == 0.0 && (a == 0.0 || b == 0.0) {
        return p;
    }
    let e = a.mul_add(b, -p);
    if e > 0.0 || (p == 0.0 && (a < 0.0) == (b < 0.0)) {
        p.next_up()
    } else {
        p
    }
}

pub fn div_down(a: f64, b: f64) -> f64 {
    let q = a / b;
    if !q.is_finite() {
        return q;
    }
    // a - q*b carries the sign of the true quotient error times sign(b)
    let r = (-q).mul_add(b, a);
    let err_sign = r * b.signum();
    if err_sign < 0.0 || (q == 0.0 && a != 0.0 && (a < 0.0) != (b < 0.0)) {
        q.next_down()
    } else {
        q
    }
}

pub fn div_up(a: f64, b: f64) -> f64 {
    let q = a / b;
    if !q.is_finite() {
        return q;
    }
    let r = (-q).mul_add(b, a);
    let err_sign = r * b.signum();
    if err_sign > 0.0 || (q == 0.0 && a != 0.0 && (a < 0.0) == (b < 0.0)) {
        q.next_up()
    } else {
        q
    }
}

pub fn sqrt_down(a: f64) -> f64 {
    let s = a.sqrt();
    if !s.is_finite() || s == 0.0 {
        return s;
    }
    if s.mul_add(s, -a) > 0.0 {
        s.next_down()
    } else {
        s
    }
}

pub fn sqrt_up(a: f64) -> f64 {
    let s = a.sqrt();
    if !s.is_finite() {
        return s;
    }
    if s.mul_add(s, -a) < 0.0 {
        s.next_up()
    } else {
        s
    }
}

fn widen_down(mut x: f64, ulps: u32) -> f64 {
    for _ in 0..ulps {
        x = x.next_down();
    }
    x
}

fn widen_up(mut x: f64, ulps: u32) -> f64 {
    for _ in 0..ulps {
        x = x.next_up();
    }
    x
}

/// A closed interval `[lo, hi]` of reals with `f64` endpoints.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    /// # Panics
    /// If `lo > hi` or either endpoint is NaN.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "invalid interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub const fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Upper bound on the width.
    pub fn width(&self) -> f64 {
        sub_up(self.hi, self.lo)
    }

    pub fn mid(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            -*self
        } else {
            Interval::new(0.0, (-self.lo).max(self.hi))
        }
    }

    /// Quotient; `None` when the divisor contains zero.
    pub fn checked_div(&self, rhs: &Interval) -> Option<Interval> {
        if rhs.contains(0.0) {
            return None;
        }
        let c = [
            (self.lo, rhs.lo),
            (self.lo, rhs.hi),
            (self.hi, rhs.lo),
            (self.hi, rhs.hi),
        ];
        let lo = c.iter().map(|&(a, b)| div_down(a, b)).fold(f64::INFINITY, f64::min);
        let hi = c.iter().map(|&(a, b)| div_up(a, b)).fold(f64::NEG_INFINITY, f64::max);
        Some(Interval { lo, hi })
    }

    pub fn sqrt(&self) -> Interval {
        assert!(self.lo >= 0.0, "sqrt of interval with negative part");
        Interval {
            lo: sqrt_down(self.lo),
            hi: sqrt_up(self.hi),
        }
    }

    pub fn ln(&self) -> Interval {
        assert!(self.lo > 0.0, "ln of nonpositive interval");
        Interval {
            lo: widen_down(self.lo.ln(), LIBM_SLACK_ULPS),
            hi: widen_up(self.hi.ln(), LIBM_SLACK_ULPS),
        }
    }

    pub fn exp(&self) -> Interval {
        Interval {
            lo: widen_down(self.lo.exp(), LIBM_SLACK_ULPS).max(0.0),
            hi: widen_up(self.hi.exp(), LIBM_SLACK_ULPS),
        }
    }

    /// `self^s` for a positive base and a real exponent `s >= 0`.
    pub fn powf(&self, s: f64) -> Interval {
        assert!(self.lo > 0.0 && s >= 0.0);
        if s == 0.0 {
            return Interval::point(1.0);
        }
        Interval {
            lo: widen_down(self.lo.powf(s), LIBM_SLACK_ULPS).max(0.0),
            hi: widen_up(self.hi.powf(s), LIBM_SLACK_ULPS),
        }
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: add_down(self.lo, rhs.lo),
            hi: add_up(self.hi, rhs.hi),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: sub_down(self.lo, rhs.hi),
            hi: sub_up(self.hi, rhs.lo),
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let c = [
            (self.lo, rhs.lo),
            (self.lo, rhs.hi),
            (self.hi, rhs.lo),
            (self.hi, rhs.hi),
        ];
        let lo = c.iter().map(|&(a, b)| mul_down(a, b)).fold(f64::INFINITY, f64::min);
        let hi = c.iter().map(|&(a, b)| mul_up(a, b)).fold(f64::NEG_INFINITY, f64::max);
        Interval { lo, hi }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
