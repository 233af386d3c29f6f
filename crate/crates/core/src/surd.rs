//! Exact arithmetic in real quadratic fields.
//!
//! A [`QuadraticSurd`] is `(p + q·√d) / r` with big-integer coefficients.
//! Values that share a field are closed under `+ - * /`; values from
//! different fields can still be compared exactly (sign analysis by
//! squaring), which is what spectrum ordering and certificate checks need.

use crate::interval::Interval;
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Trial-division bound used when stripping square factors from a radicand.
const SQUARE_FACTOR_LIMIT: u64 = 2_000_000;

/// Fixed-point bits used by [`QuadraticSurd::enclose`].
const ENCLOSE_BITS: u32 = 96;

#[derive(Clone)]
pub struct QuadraticSurd {
    p: BigInt,
    q: BigInt,
    r: BigInt,
    // 0 for rationals, otherwise a non-square radicand >= 2
    d: BigInt,
}

/// Sign of `p + q·√d` for `d >= 0`.
fn sign_pq(p: &BigInt, q: &BigInt, d: &BigInt) -> Ordering {
    if q.is_zero() || d.is_zero() {
        return p.sign_cmp();
    }
    let sp = p.sign_cmp();
    let sq = q.sign_cmp();
    match (sp, sq) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (a, b) if a == b => a,
        _ => {
            // opposite signs: the larger magnitude wins
            let lhs = p * p;
            let rhs = q * q * d;
            match lhs.cmp(&rhs) {
                Ordering::Greater => sp,
                Ordering::Less => sq,
                Ordering::Equal => Ordering::Equal,
            }
        }
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        match self.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

/// Splits `d` into `(k, m)` with `d = k²·m`, removing square factors of
/// primes up to [`SQUARE_FACTOR_LIMIT`] and a square cofactor.
fn split_square(d: &BigInt) -> (BigInt, BigInt) {
    let mut k = BigInt::one();
    let mut m = d.clone();
    if m.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    if let Some(mut small) = m.to_u128() {
        let mut f: u128 = 2;
        while f * f <= small && f <= SQUARE_FACTOR_LIMIT as u128 {
            while small % (f * f) == 0 {
                small /= f * f;
                k *= f;
            }
            f += if f == 2 { 1 } else { 2 };
        }
        m = BigInt::from(small);
    } else {
        let mut f: u64 = 2;
        while f <= SQUARE_FACTOR_LIMIT {
            let ff = BigInt::from(f) * f;
            if ff > m {
                break;
            }
            while (&m % &ff).is_zero() {
                m /= &ff;
                k *= f;
            }
            f += if f == 2 { 1 } else { 2 };
        }
    }
    let root = m.sqrt();
    if &root * &root == m {
        k *= root;
        m = BigInt::one();
    }
    (k, m)
}

impl QuadraticSurd {
    /// `(p + q·√d) / r`.
    ///
    /// # Panics
    /// If `r == 0` or `d < 0`.
    pub fn new(p: BigInt, q: BigInt, r: BigInt, d: BigInt) -> Self {
        assert!(!r.is_zero(), "zero denominator");
        assert!(!d.is_negative(), "negative radicand");
        let (k, m) = split_square(&d);
        let (p, q, d) = if m.is_one() || m.is_zero() {
            (p + q * k, BigInt::zero(), BigInt::zero())
        } else {
            (p, q * k, m)
        };
        Self::normalized(p, q, r, d)
    }

    fn normalized(mut p: BigInt, mut q: BigInt, mut r: BigInt, mut d: BigInt) -> Self {
        if q.is_zero() || d.is_zero() {
            q = BigInt::zero();
            d = BigInt::zero();
        }
        let g = p.gcd(&q).gcd(&r);
        if !g.is_one() && !g.is_zero() {
            p /= &g;
            q /= &g;
            r /= &g;
        }
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        QuadraticSurd { p, q, r, d }
    }

    pub fn from_integer<T: Into<BigInt>>(n: T) -> Self {
        QuadraticSurd {
            p: n.into(),
            q: BigInt::zero(),
            r: BigInt::one(),
            d: BigInt::zero(),
        }
    }

    pub fn from_ratio<T: Into<BigInt>>(num: T, den: T) -> Self {
        Self::normalized(num.into(), BigInt::zero(), den.into(), BigInt::zero())
    }

    /// Exact value of a finite `f64`.
    pub fn from_f64(x: f64) -> Option<Self> {
        let r = BigRational::from_float(x)?;
        let (n, d) = r.into_raw();
        Some(Self::normalized(n, BigInt::zero(), d, BigInt::zero()))
    }

    /// `√n`.
    pub fn sqrt_of<T: Into<BigInt>>(n: T) -> Self {
        Self::new(BigInt::zero(), BigInt::one(), BigInt::one(), n.into())
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn r(&self) -> &BigInt {
        &self.r
    }

    /// Radicand of the field, 0 for rationals.
    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        sign_pq(&self.p, &self.q, &self.d)
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Galois conjugate `(p - q·√d) / r`.
    pub fn conjugate(&self) -> Self {
        QuadraticSurd {
            p: self.p.clone(),
            q: -&self.q,
            r: self.r.clone(),
            d: self.d.clone(),
        }
    }

    /// Rewrites both operands over a common radicand, if they live in the
    /// same field.
    fn align(&self, other: &Self) -> Option<(Self, Self)> {
        if self.d == other.d || other.is_rational() || self.is_rational() {
            return Some((self.clone(), other.clone()));
        }
        // same field iff d1·d2 is a square
        let prod = &self.d * &other.d;
        let k = prod.sqrt();
        if &k * &k != prod {
            return None;
        }
        // √d2 = (k / d1)·√d1
        let conv = QuadraticSurd::normalized(
            &other.p * &self.d,
            &other.q * &k,
            &other.r * &self.d,
            self.d.clone(),
        );
        Some((self.clone(), conv))
    }

    pub fn same_field(&self, other: &Self) -> bool {
        self.align(other).is_some()
    }

    fn field_of(a: &Self, b: &Self) -> BigInt {
        if a.d.is_zero() {
            b.d.clone()
        } else {
            a.d.clone()
        }
    }

    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        let (a, b) = self.align(other)?;
        let d = Self::field_of(&a, &b);
        Some(Self::normalized(
            &a.p * &b.r + &b.p * &a.r,
            &a.q * &b.r + &b.q * &a.r,
            &a.r * &b.r,
            d,
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.checked_add(&-other.clone())
    }

    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        let (a, b) = self.align(other)?;
        let d = Self::field_of(&a, &b);
        Some(Self::normalized(
            &a.p * &b.p + &a.q * &b.q * &d,
            &a.p * &b.q + &a.q * &b.p,
            &a.r * &b.r,
            d,
        ))
    }

    /// `None` for division by zero or across fields.
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        let (a, b) = self.align(other)?;
        let d = Self::field_of(&a, &b);
        let norm = &b.p * &b.p - &b.q * &b.q * &d;
        // a / b = r_b (p_a + q_a√d)(p_b - q_b√d) / (r_a · norm)
        let p = &b.r * (&a.p * &b.p - &a.q * &b.q * &d);
        let q = &b.r * (&a.q * &b.p - &a.p * &b.q);
        Some(Self::normalized(p, q, &a.r * norm, d))
    }

    pub fn recip(&self) -> Option<Self> {
        Self::one().checked_div(self)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact comparison, also across different quadratic fields.
    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        if let Some(diff) = self.checked_sub(other) {
            return diff.signum();
        }
        // sign of P + Q√d1 - R√d2 after clearing the (positive) denominators
        let pp = &other.r * &self.p - &self.r * &other.p;
        let qq = &other.r * &self.q;
        let rr = &self.r * &other.q;
        let su = sign_pq(&pp, &qq, &self.d);
        let sv = rr.sign_cmp();
        if su != sv {
            return match (su, sv) {
                (Ordering::Greater, _) | (_, Ordering::Less) => Ordering::Greater,
                _ => Ordering::Less,
            };
        }
        if su == Ordering::Equal {
            return Ordering::Equal;
        }
        // same nonzero sign: compare squares u² = P² + Q²d1 + 2PQ√d1 and v² = R²d2
        let rat = &pp * &pp + &qq * &qq * &self.d - &rr * &rr * &other.d;
        let irr = BigInt::from(2) * &pp * &qq;
        let s = sign_pq(&rat, &irr, &self.d);
        if su == Ordering::Greater {
            s
        } else {
            s.reverse()
        }
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        let (lo, _) = self.bounds_scaled(8);
        let mut k: BigInt = lo >> 8u32;
        while Self::from_integer(k.clone() + 1).cmp_exact(self) != Ordering::Greater {
            k += 1;
        }
        while Self::from_integer(k.clone()).cmp_exact(self) == Ordering::Greater {
            k -= 1;
        }
        k
    }

    /// Integers `(lo, hi)` with `lo <= value·2^bits <= hi` and `hi - lo <= 2`.
    pub fn bounds_scaled(&self, bits: u32) -> (BigInt, BigInt) {
        let scale = BigInt::one() << bits;
        let (s_lo, s_hi) = if self.q.is_zero() {
            (BigInt::zero(), BigInt::zero())
        } else {
            let root = (&self.d << (2 * bits)).sqrt();
            let exact = &root * &root == (&self.d << (2 * bits));
            let hi = if exact { root.clone() } else { &root + 1 };
            (root, hi)
        };
        let base = &self.p * &scale;
        let (n_lo, n_hi) = if self.q.is_negative() {
            (&base + &self.q * &s_hi, &base + &self.q * &s_lo)
        } else {
            (&base + &self.q * &s_lo, &base + &self.q * &s_hi)
        };
        (n_lo.div_floor(&self.r), n_hi.div_ceil(&self.r))
    }

    /// Outward-rounded `f64` enclosure.
    pub fn enclose(&self) -> Interval {
        if self.q.is_zero() {
            if let (Some(p), Some(r)) = (self.p.to_f64(), self.r.to_f64()) {
                if p.abs() < 9.0e15 && r < 9.0e15 {
                    let lo = crate::interval::div_down(p, r);
                    let hi = crate::interval::div_up(p, r);
                    return Interval::new(lo, hi);
                }
            }
        }
        let (lo, hi) = self.bounds_scaled(ENCLOSE_BITS);
        let scale = 2f64.powi(-(ENCLOSE_BITS as i32));
        let to = |n: &BigInt| n.to_f64().unwrap_or(f64::NAN) * scale;
        let l = to(&lo).next_down().next_down();
        let h = to(&hi).next_up().next_up();
        Interval::new(l, h)
    }

    pub fn to_f64(&self) -> f64 {
        self.enclose().mid()
    }

    /// ASCII form, e.g. `(1+1*sqrt(5))/2`.
    pub fn to_ascii(&self) -> String {
        self.render("sqrt(", ")", "*")
    }

    fn render(&self, open: &str, close: &str, times: &str) -> String {
        if self.q.is_zero() {
            return if self.r.is_one() {
                self.p.to_string()
            } else {
                format!("{}/{}", self.p, self.r)
            };
        }
        let root = format!("{open}{}{close}", self.d);
        let surd = if self.q.is_one() {
            root
        } else if self.q == -BigInt::one() {
            format!("-{root}")
        } else {
            format!("{}{times}{root}", self.q)
        };
        let num = if self.p.is_zero() {
            surd
        } else if self.q.is_negative() {
            format!("{}{}", self.p, surd)
        } else {
            format!("{}+{}", self.p, surd)
        };
        if self.r.is_one() {
            num
        } else if self.p.is_zero() {
            format!("{num}/{}", self.r)
        } else {
            format!("({num})/{}", self.r)
        }
    }
}

impl PartialEq for QuadraticSurd {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_exact(other) == Ordering::Equal
    }
}

impl Eq for QuadraticSurd {}

impl PartialOrd for QuadraticSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticSurd {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("√", "", ""))
    }
}

impl fmt::Debug for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (≈{})", self, self.to_f64())
    }
}

impl Neg for QuadraticSurd {
    type Output = QuadraticSurd;
    fn neg(self) -> QuadraticSurd {
        QuadraticSurd {
            p: -self.p,
            q: -self.q,
            r: self.r,
            d: self.d,
        }
    }
}

impl std::str::FromStr for QuadraticSurd {
    type Err = String;

    /// Accepts integers, fractions `a/b` and finite decimals `1.25`, all
    /// parsed exactly.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || format!("cannot parse {s:?} as an exact rational");
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            return Ok(Self::from_ratio(n, d));
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let neg = int.starts_with('-');
            let int = if int.is_empty() || int == "-" || int == "+" { "0" } else { int };
            let whole: BigInt = int.parse().map_err(|_| bad())?;
            let scale = BigInt::from(10).pow(frac.len() as u32);
            let f: BigInt = frac.parse().map_err(|_| bad())?;
            let num = whole.abs() * &scale + f;
            return Ok(Self::from_ratio(if neg { -num } else { num }, scale));
        }
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Self::from_integer(n))
    }
}

macro_rules! field_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a QuadraticSurd> for &'a QuadraticSurd {
            type Output = QuadraticSurd;
            fn $method(self, rhs: &'a QuadraticSurd) -> QuadraticSurd {
                self.$checked(rhs).unwrap_or_else(|| {
                    panic!(
                        "{} of {} and {} is outside a single quadratic field (or divides by zero)",
                        stringify!($method),
                        self,
                        rhs
                    )
                })
            }
        }

        impl $trait for QuadraticSurd {
            type Output = QuadraticSurd;
            fn $method(self, rhs: QuadraticSurd) -> QuadraticSurd {
                (&self).$method(&rhs)
            }
        }
    };
}

field_op!(Add, add, checked_add);
field_op!(Sub, sub, checked_sub);
field_op!(Mul, mul, checked_mul);
field_op!(Div, div, checked_div);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn golden() -> QuadraticSurd {
        (QuadraticSurd::one() + QuadraticSurd::sqrt_of(5)) / QuadraticSurd::from_integer(2)
    }

    #[test]
    fn canonical_forms() {
        let s = QuadraticSurd::sqrt_of(8);
        assert_eq!(s.q(), &BigInt::from(2));
        assert_eq!(s.radicand(), &BigInt::from(2));
        assert!(QuadraticSurd::sqrt_of(9).is_rational());
        assert_eq!(QuadraticSurd::sqrt_of(9), QuadraticSurd::from_integer(3));
        let x = QuadraticSurd::new(2.into(), 4.into(), (-6).into(), 5.into());
        assert_eq!(x.r(), &BigInt::from(3));
        assert_eq!(x.p(), &BigInt::from(-1));
        assert_eq!(x.to_string(), "(-1-2√5)/3");
        assert_eq!(golden().to_ascii(), "(1+sqrt(5))/2");
    }

    #[test]
    fn golden_ratio_identities() {
        let phi = golden();
        assert_eq!(&phi * &phi, &phi + &QuadraticSurd::one());
        assert_eq!(phi.recip().unwrap(), &phi - &QuadraticSurd::one());
        assert_eq!(&phi + &(&phi - &QuadraticSurd::one()), QuadraticSurd::sqrt_of(5));
    }

    #[test]
    fn cross_field_ordering() {
        let r5 = QuadraticSurd::sqrt_of(5);
        let r8 = QuadraticSurd::sqrt_of(8);
        assert!(r5 < r8);
        assert!(!r5.same_field(&r8));
        // 2√3 ≈ 3.4641 vs 1+√6 ≈ 3.4495
        let a = QuadraticSurd::from_integer(2) * QuadraticSurd::sqrt_of(3);
        let b = QuadraticSurd::one() + QuadraticSurd::sqrt_of(6);
        assert!(a > b);
        assert!(-a.clone() < -b.clone());
        // same value through a non-squarefree radicand
        assert_eq!(QuadraticSurd::sqrt_of(12), a);
    }

    #[test]
    fn parses_exact_rationals() {
        assert_eq!("1/3".parse::<QuadraticSurd>().unwrap(), QuadraticSurd::from_ratio(1, 3));
        assert_eq!("0.4".parse::<QuadraticSurd>().unwrap(), QuadraticSurd::from_ratio(2, 5));
        assert_eq!("-1.25".parse::<QuadraticSurd>().unwrap(), QuadraticSurd::from_ratio(-5, 4));
        assert_eq!("7".parse::<QuadraticSurd>().unwrap(), QuadraticSurd::from_integer(7));
        assert!("1/0".parse::<QuadraticSurd>().is_err());
        assert!("x".parse::<QuadraticSurd>().is_err());
    }

    #[test]
    fn floor_and_enclosure() {
        assert_eq!(golden().floor(), BigInt::from(1));
        assert_eq!((-golden()).floor(), BigInt::from(-2));
        assert_eq!(QuadraticSurd::from_integer(7).floor(), BigInt::from(7));
        let e = QuadraticSurd::sqrt_of(2).enclose();
        assert!(e.contains(std::f64::consts::SQRT_2));
        assert!(e.width() < 1e-14);
    }

    /// `floor(value · 10^100)` computed only with integer square roots.
    fn decimal_100(x: &QuadraticSurd) -> BigInt {
        let ten100 = BigInt::from(10).pow(100u32);
        let root = (x.radicand() * &ten100 * &ten100).sqrt();
        let num = x.p() * &ten100 + x.q() * root;
        num.div_floor(x.r())
    }

    fn arb_pair() -> impl Strategy<Value = (QuadraticSurd, QuadraticSurd)> {
        let coef = (-50i64..50, -50i64..50, 1i64..30);
        (prop::sample::select(vec![2u32, 3, 5, 6, 7, 13, 462]), coef.clone(), coef).prop_map(
            |(d, (p1, q1, r1), (p2, q2, r2))| {
                (
                    QuadraticSurd::new(p1.into(), q1.into(), r1.into(), d.into()),
                    QuadraticSurd::new(p2.into(), q2.into(), r2.into(), d.into()),
                )
            },
        )
    }

    proptest! {
        #[test]
        fn field_arithmetic_round_trips((x, y) in arb_pair()) {
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            if !y.is_zero() {
                prop_assert_eq!(&(&x * &y) / &y, x.clone());
            }
        }

        #[test]
        fn ordering_agrees_with_100_digit_evaluation(p1 in -40i64..40, q1 in -40i64..40, r1 in 1i64..20,
                                                     p2 in -40i64..40, q2 in -40i64..40, r2 in 1i64..20,
                                                     d1 in prop::sample::select(vec![2u32, 3, 5, 6, 11]),
                                                     d2 in prop::sample::select(vec![2u32, 3, 5, 6, 11])) {
            let x = QuadraticSurd::new(p1.into(), q1.into(), r1.into(), d1.into());
            let y = QuadraticSurd::new(p2.into(), q2.into(), r2.into(), d2.into());
            let (dx, dy) = (decimal_100(&x), decimal_100(&y));
            let exact = x.cmp_exact(&y);
            // truncated decimals can tie only if the values agree to 100 digits
            if dx != dy {
                prop_assert_eq!(exact, dx.cmp(&dy));
            } else {
                prop_assert_eq!(exact, Ordering::Equal);
            }
        }
    }
}
