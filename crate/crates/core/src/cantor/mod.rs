//! Regular Cantor sets given by contracting Möbius inverse branches over a
//! subshift of finite type.
//!
//! Symbol `a` owns a base interval `I(a)` and an inverse branch `ψ_a`
//! (defined on the convex hull of the set) with `ψ_a(I(b)) ⊆ I(a)` whenever
//! `a → b` is allowed. The cylinder of an admissible word `w_0 … w_{n-1}` is
//! `ψ_{w_0} ∘ … ∘ ψ_{w_{n-2}} (I(w_{n-1}))`; depth 0 is the hull.

mod cylinders;
mod dimension;
mod intersection;
mod limit;
mod sumset;
mod thickness;

pub use cylinders::{Cylinder, CylinderCover, ExactCylinder};
pub use dimension::{box_dim_estimate, hausdorff_dim, BoxDimension, DimensionEnclosure, DimensionOptions};
pub use intersection::{
    cover_intersection_nonempty, gap_lemma_test, gap_lemma_test_with, stable_intersection_sweep, GapLemmaOutcome,
    GapLemmaStatus, SweepEntry, SweepReport,
};
pub use limit::{limit_geometry, limit_geometry_convergence, LimitConvergence, LimitGeometry};
pub use sumset::{sumset_contains_interval, CertificateStatus, IntervalCertificate, ProofNode};
pub use thickness::{thickness, ThicknessEstimate, ThicknessLevel};

pub(crate) use cylinders::Node;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::surd::QuadraticSurd;
use crate::symbolic::SubshiftSft;
use std::cmp::Ordering;
use std::fmt;

/// `x ↦ (a x + b) / (c x + d)` with exact coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Mobius {
    pub a: QuadraticSurd,
    pub b: QuadraticSurd,
    pub c: QuadraticSurd,
    pub d: QuadraticSurd,
}

fn field_err(what: &str) -> Error {
    Error::InvalidCantorSet(format!("{what}: coefficients and points must share one quadratic field"))
}

impl Mobius {
    pub fn new(a: QuadraticSurd, b: QuadraticSurd, c: QuadraticSurd, d: QuadraticSurd) -> Self {
        Mobius { a, b, c, d }
    }

    /// `x ↦ r x + t`
    pub fn affine(r: QuadraticSurd, t: QuadraticSurd) -> Self {
        Mobius::new(r, t, QuadraticSurd::zero(), QuadraticSurd::one())
    }

    /// `x ↦ 1 / (k + x)`
    pub fn gauss(k: u64) -> Self {
        Mobius::new(
            QuadraticSurd::zero(),
            QuadraticSurd::one(),
            QuadraticSurd::one(),
            QuadraticSurd::from_integer(k),
        )
    }

    pub fn identity() -> Self {
        Mobius::affine(QuadraticSurd::one(), QuadraticSurd::zero())
    }

    pub fn is_affine(&self) -> bool {
        self.c.is_zero()
    }

    pub fn det(&self) -> Result<QuadraticSurd> {
        let ad = self.a.checked_mul(&self.d).ok_or_else(|| field_err("determinant"))?;
        let bc = self.b.checked_mul(&self.c).ok_or_else(|| field_err("determinant"))?;
        ad.checked_sub(&bc).ok_or_else(|| field_err("determinant"))
    }

    /// Denominator `c x + d`.
    pub fn denominator(&self, x: &QuadraticSurd) -> Result<QuadraticSurd> {
        self.c
            .checked_mul(x)
            .and_then(|cx| cx.checked_add(&self.d))
            .ok_or_else(|| field_err("branch evaluation"))
    }

    pub fn apply(&self, x: &QuadraticSurd) -> Result<QuadraticSurd> {
        let num = self
            .a
            .checked_mul(x)
            .and_then(|ax| ax.checked_add(&self.b))
            .ok_or_else(|| field_err("branch evaluation"))?;
        let den = self.denominator(x)?;
        num.checked_div(&den)
            .ok_or_else(|| Error::InvalidCantorSet("branch evaluated at its pole".into()))
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Mobius) -> Result<Mobius> {
        let m = |x: &QuadraticSurd, y: &QuadraticSurd, z: &QuadraticSurd, w: &QuadraticSurd| {
            x.checked_mul(y)
                .zip(z.checked_mul(w))
                .and_then(|(p, q)| p.checked_add(&q))
                .ok_or_else(|| field_err("composition"))
        };
        Ok(Mobius {
            a: m(&self.a, &other.a, &self.b, &other.c)?,
            b: m(&self.a, &other.b, &self.b, &other.d)?,
            c: m(&self.c, &other.a, &self.d, &other.c)?,
            d: m(&self.c, &other.b, &self.d, &other.d)?,
        })
    }

    pub fn enclose(&self) -> MobiusI {
        MobiusI {
            a: self.a.enclose(),
            b: self.b.enclose(),
            c: self.c.enclose(),
            d: self.d.enclose(),
        }
    }
}

/// A Möbius map with enclosed coefficients, evaluated in interval
/// arithmetic.
#[derive(Clone, Copy, Debug)]
pub struct MobiusI {
    pub a: Interval,
    pub b: Interval,
    pub c: Interval,
    pub d: Interval,
}

impl MobiusI {
    pub fn identity() -> Self {
        MobiusI {
            a: Interval::point(1.0),
            b: Interval::point(0.0),
            c: Interval::point(0.0),
            d: Interval::point(1.0),
        }
    }

    pub fn compose(&self, o: &MobiusI) -> MobiusI {
        MobiusI {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn apply(&self, x: Interval) -> Interval {
        let num = self.a * x + self.b;
        let den = self.c * x + self.d;
        num.checked_div(&den).expect("pole excluded by validation")
    }

    /// Enclosure of `|ψ'|` over `x`.
    pub fn derivative_abs(&self, x: Interval) -> Interval {
        let det = (self.a * self.d - self.b * self.c).abs();
        let den = self.c * x + self.d;
        let den2 = den * den;
        det.checked_div(&den2).expect("pole excluded by validation")
    }

    /// Enclosure of `|d/dx log|ψ'||` over `x`.
    pub fn log_derivative_slope(&self, x: Interval) -> Interval {
        let two_c = self.c * Interval::point(2.0);
        let den = self.c * x + self.d;
        two_c.checked_div(&den).expect("pole excluded by validation").abs()
    }

    /// Midpoint coefficients, for non-certified sampling.
    pub fn mid(&self) -> [f64; 4] {
        [self.a.mid(), self.b.mid(), self.c.mid(), self.d.mid()]
    }
}

/// A regular Cantor set with exact base intervals and exact branches.
#[derive(Clone)]
pub struct RegularCantorSet {
    label: String,
    subshift: SubshiftSft,
    intervals: Vec<(QuadraticSurd, QuadraticSurd)>,
    branches: Vec<Mobius>,
    hull: (QuadraticSurd, QuadraticSurd),
    interval_enc: Vec<(Interval, Interval)>,
    hull_enc: (Interval, Interval),
    branch_enc: Vec<MobiusI>,
    increasing: Vec<bool>,
    c_min: f64,
    c_max: f64,
    log_lipschitz: f64,
}

impl RegularCantorSet {
    /// Validates and builds a set. Requirements: every symbol is recurrent,
    /// `ψ_a(I(b)) ⊆ I(a)` for allowed `a → b`, images inside one `I(a)`
    /// overlap at most in endpoints, `I(a)` is exactly the hull of those
    /// images, no branch has its pole on the hull, and the branch
    /// derivatives satisfy `0 < c_min ≤ |ψ'| ≤ c_max < 1`.
    pub fn new(
        label: &str,
        subshift: SubshiftSft,
        intervals: Vec<(QuadraticSurd, QuadraticSurd)>,
        branches: Vec<Mobius>,
    ) -> Result<Self> {
        let n = subshift.len();
        let bad = |m: String| Err(Error::InvalidCantorSet(m));
        if n == 0 {
            return bad("empty alphabet".into());
        }
        if intervals.len() != n || branches.len() != n {
            return bad(format!(
                "{} symbols but {} intervals and {} branches",
                n,
                intervals.len(),
                branches.len()
            ));
        }
        if !subshift.is_essential() {
            return bad("every symbol needs an allowed successor and predecessor".into());
        }
        for (a, (lo, hi)) in intervals.iter().enumerate() {
            if lo > hi {
                return bad(format!("I({}) has reversed endpoints", subshift.alphabet()[a]));
            }
        }
        let hull_lo = intervals.iter().map(|i| i.0.clone()).min().expect("nonempty");
        let hull_hi = intervals.iter().map(|i| i.1.clone()).max().expect("nonempty");

        let mut increasing = Vec::with_capacity(n);
        for (a, psi) in branches.iter().enumerate() {
            let name = &subshift.alphabet()[a];
            let det = psi.det()?;
            if det.is_zero() {
                return bad(format!("branch {name} is constant"));
            }
            increasing.push(det.is_positive());
            let s0 = psi.denominator(&hull_lo)?.signum();
            let s1 = psi.denominator(&hull_hi)?.signum();
            if s0 == Ordering::Equal || s0 != s1 {
                return bad(format!("branch {name} has a pole on the hull"));
            }
            let mut images = Vec::new();
            for &b in subshift.successors(a) {
                let (lo, hi) = &intervals[b];
                let (u, v) = (psi.apply(lo)?, psi.apply(hi)?);
                let (u, v) = if u <= v { (u, v) } else { (v, u) };
                if u < intervals[a].0 || v > intervals[a].1 {
                    return bad(format!(
                        "image of I({}) under branch {name} leaves I({name})",
                        subshift.alphabet()[b]
                    ));
                }
                images.push((u, v));
            }
            images.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.cmp(&y.1)));
            if images.windows(2).any(|w| w[0].1 > w[1].0) {
                return bad(format!("images inside I({name}) overlap"));
            }
            let lo = images.iter().map(|i| &i.0).min().expect("essential");
            let hi = images.iter().map(|i| &i.1).max().expect("essential");
            if *lo != intervals[a].0 || *hi != intervals[a].1 {
                return bad(format!("I({name}) is not the hull of its sub-cylinders"));
            }
        }

        let interval_enc: Vec<(Interval, Interval)> =
            intervals.iter().map(|(l, h)| (l.enclose(), h.enclose())).collect();
        let hull_enc = (hull_lo.enclose(), hull_hi.enclose());
        let hull_iv = Interval::new(hull_enc.0.lo(), hull_enc.1.hi());
        let branch_enc: Vec<MobiusI> = branches.iter().map(Mobius::enclose).collect();
        let mut c_min = f64::INFINITY;
        let mut c_max = 0.0f64;
        let mut log_lipschitz = 0.0f64;
        for (a, m) in branch_enc.iter().enumerate() {
            for &b in subshift.successors(a) {
                let (lo, hi) = interval_enc[b];
                let d0 = m.derivative_abs(lo);
                let d1 = m.derivative_abs(hi);
                // |ψ'| is monotone on intervals avoiding the pole
                c_min = c_min.min(d0.lo().min(d1.lo()));
                c_max = c_max.max(d0.hi().max(d1.hi()));
            }
            log_lipschitz = log_lipschitz.max(m.log_derivative_slope(hull_iv).hi());
        }
        if !(c_min > 0.0) || !(c_max < 1.0) {
            return bad(format!("derivative bounds [{c_min}, {c_max}] are not inside (0, 1)"));
        }
        Ok(RegularCantorSet {
            label: label.to_string(),
            subshift,
            intervals,
            branches,
            hull: (hull_lo, hull_hi),
            interval_enc,
            hull_enc,
            branch_enc,
            increasing,
            c_min,
            c_max,
            log_lipschitz,
        })
    }

    /// Two affine branches of ratio `r ≤ 1/2` on `[0, 1]`:
    /// `I(0) = [0, r]`, `I(1) = [1-r, 1]`.
    pub fn affine_pair(label: &str, r: QuadraticSurd) -> Result<Self> {
        if !r.is_positive() || r > QuadraticSurd::from_ratio(1, 2) {
            return Err(Error::InvalidCantorSet(format!("ratio {r} not in (0, 1/2]")));
        }
        let one = QuadraticSurd::one();
        let shift = &one - &r;
        Self::new(
            label,
            SubshiftSft::full_shift(2),
            vec![(QuadraticSurd::zero(), r.clone()), (shift.clone(), one)],
            vec![
                Mobius::affine(r.clone(), QuadraticSurd::zero()),
                Mobius::affine(r, shift),
            ],
        )
    }

    /// The middle-third Cantor set.
    pub fn middle_third() -> Self {
        Self::affine_pair("middle third", QuadraticSurd::from_ratio(1, 3)).expect("valid")
    }

    /// `[0, 1]` as a (gapless) regular Cantor set with two touching halves.
    pub fn unit_interval() -> Self {
        Self::affine_pair("unit interval", QuadraticSurd::from_ratio(1, 2)).expect("valid")
    }

    /// Gauss–Cantor set `C(N)`: branches `x ↦ 1/(a + x)` for `a = 1..=N`.
    pub fn gauss(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("C(N) needs N >= 1".into()));
        }
        let lo = crate::cf::cf_value(&[0], &[n, 1])?;
        let hi = crate::cf::cf_value(&[0], &[1, n])?;
        let mut intervals = Vec::new();
        let mut branches = Vec::new();
        for a in 1..=n {
            let m = Mobius::gauss(a);
            intervals.push((m.apply(&hi)?, m.apply(&lo)?));
            branches.push(m);
        }
        Self::new(
            &format!("C({n})"),
            SubshiftSft::digit_shift(n as usize),
            intervals,
            branches,
        )
    }

    /// Parses a set name: `midthird`, `unit`, `affine:<r>`, `gauss:<N>` or
    /// `C(<N>)`.
    pub fn from_name(name: &str) -> Result<Self> {
        let n = name.trim();
        let lower = n.to_ascii_lowercase();
        if matches!(lower.as_str(), "midthird" | "middle-third" | "middle_third") {
            return Ok(Self::middle_third());
        }
        if matches!(lower.as_str(), "unit" | "interval") {
            return Ok(Self::unit_interval());
        }
        if let Some(r) = lower.strip_prefix("affine:") {
            let r: QuadraticSurd = r.parse().map_err(Error::InvalidArgument)?;
            return Self::affine_pair(&format!("affine {r}"), r);
        }
        let digits = lower
            .strip_prefix("gauss:")
            .or_else(|| lower.strip_prefix("c(").and_then(|s| s.strip_suffix(')')));
        if let Some(d) = digits {
            let k: u64 = d
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad digit bound in {name:?}")))?;
            return Self::gauss(k);
        }
        Err(Error::InvalidArgument(format!(
            "unknown Cantor set {name:?} (expected midthird, unit, affine:<r>, gauss:<N>)"
        )))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn subshift(&self) -> &SubshiftSft {
        &self.subshift
    }

    pub fn symbol_count(&self) -> usize {
        self.subshift.len()
    }

    pub fn base_interval(&self, a: usize) -> &(QuadraticSurd, QuadraticSurd) {
        &self.intervals[a]
    }

    pub fn branch(&self, a: usize) -> &Mobius {
        &self.branches[a]
    }

    pub fn hull(&self) -> &(QuadraticSurd, QuadraticSurd) {
        &self.hull
    }

    /// Outer enclosure of the convex hull.
    pub fn hull_enclosure(&self) -> Interval {
        Interval::new(self.hull_enc.0.lo(), self.hull_enc.1.hi())
    }

    pub(crate) fn hull_endpoints(&self) -> (Interval, Interval) {
        self.hull_enc
    }

    pub(crate) fn interval_enclosure(&self, a: usize) -> (Interval, Interval) {
        self.interval_enc[a]
    }

    pub(crate) fn branch_enclosure(&self, a: usize) -> &MobiusI {
        &self.branch_enc[a]
    }

    pub(crate) fn branch_increasing(&self, a: usize) -> bool {
        self.increasing[a]
    }

    /// Lower bound on `|ψ'|` over the relevant base intervals.
    pub fn c_min(&self) -> f64 {
        self.c_min
    }

    /// Upper bound on `|ψ'|` over the relevant base intervals.
    pub fn c_max(&self) -> f64 {
        self.c_max
    }

    /// Upper bound for the Lipschitz constant of `log|ψ'|` on the hull.
    pub fn log_lipschitz(&self) -> f64 {
        self.log_lipschitz
    }

    pub fn is_affine(&self) -> bool {
        self.branches.iter().all(Mobius::is_affine)
    }

    /// True when the set is a single point.
    pub fn is_degenerate(&self) -> bool {
        self.hull.0 == self.hull.1
    }

    /// The point with forward itinerary `prefix` followed by `period`
    /// repeated, exactly, for sets with rational branch coefficients.
    pub fn point(&self, prefix: &[usize], period: &[usize]) -> Result<QuadraticSurd> {
        if period.is_empty() {
            return Err(Error::InvalidArgument("itinerary needs a nonempty period".into()));
        }
        let compose = |word: &[usize]| -> Result<Mobius> {
            word.iter()
                .try_fold(Mobius::identity(), |acc, &s| acc.compose(&self.branches[s]))
        };
        let m = compose(period)?;
        let rational = [&m.a, &m.b, &m.c, &m.d].iter().all(|x| x.is_rational());
        if !rational {
            return Err(Error::InvalidArgument("periodic points need rational branch coefficients".into()));
        }
        // attracting fixed point of m on the hull: c x² + (d - a) x - b = 0
        let x = if m.c.is_zero() {
            let one_minus = &QuadraticSurd::one() - &(&m.a / &m.d);
            &(&m.b / &m.d) / &one_minus
        } else {
            let fixed = quadratic_roots(&m.c, &(&m.d - &m.a), &(-m.b.clone()))?;
            let (lo, hi) = &self.hull;
            fixed
                .into_iter()
                .find(|r| r >= lo && r <= hi)
                .ok_or_else(|| Error::InvalidArgument("no fixed point on the hull".into()))?
        };
        let pre = compose(prefix)?;
        pre.apply(&x)
    }
}

/// Real roots of `a x² + b x + c` for rational `a ≠ 0, b, c`.
fn quadratic_roots(a: &QuadraticSurd, b: &QuadraticSurd, c: &QuadraticSurd) -> Result<Vec<QuadraticSurd>> {
    let disc = &(b * b) - &(&(a * c) * &QuadraticSurd::from_integer(4));
    if disc.is_negative() {
        return Ok(Vec::new());
    }
    // disc = p / r with r > 0, so √disc = √(p r) / r
    let root = QuadraticSurd::new(
        num_bigint::BigInt::from(0),
        num_bigint::BigInt::from(1),
        disc.r().clone(),
        disc.p() * disc.r(),
    );
    let two_a = a * &QuadraticSurd::from_integer(2);
    let minus_b = -b.clone();
    Ok(vec![
        &(&minus_b - &root) / &two_a,
        &(&minus_b + &root) / &two_a,
    ])
}

impl fmt::Debug for RegularCantorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RegularCantorSet")
            .field("label", &self.label)
            .field("symbols", &self.subshift.len())
            .field("hull", &self.hull_enclosure())
            .field("c_min", &self.c_min)
            .field("c_max", &self.c_max)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_hulls_are_exact() {
        let c2 = RegularCantorSet::gauss(2).unwrap();
        let root3_minus_1 = QuadraticSurd::sqrt_of(3) - QuadraticSurd::one();
        let (lo, hi) = c2.hull();
        assert_eq!(lo, &(&root3_minus_1 / &QuadraticSurd::from_integer(2)));
        assert_eq!(hi, &root3_minus_1);
        assert!(c2.c_max() < 1.0 && c2.c_min() > 0.0);
    }

    #[test]
    fn degenerate_gauss_set() {
        let c1 = RegularCantorSet::gauss(1).unwrap();
        assert!(c1.is_degenerate());
        let phi_inv = &(QuadraticSurd::sqrt_of(5) - QuadraticSurd::one()) / &QuadraticSurd::from_integer(2);
        assert_eq!(c1.hull().0, phi_inv);
    }

    #[test]
    fn invalid_sets_are_rejected() {
        assert!(RegularCantorSet::affine_pair("x", QuadraticSurd::from_ratio(3, 5)).is_err());
        let s = SubshiftSft::full_shift(2);
        // branches that do not map into their base intervals
        let bad = RegularCantorSet::new(
            "bad",
            s.clone(),
            vec![
                (QuadraticSurd::zero(), QuadraticSurd::from_ratio(1, 3)),
                (QuadraticSurd::from_ratio(2, 3), QuadraticSurd::one()),
            ],
            vec![Mobius::affine(QuadraticSurd::from_ratio(1, 3), QuadraticSurd::from_ratio(1, 3)), Mobius::identity()],
        );
        assert!(bad.is_err());
        // hull not tight: I(0) larger than its images
        let loose = RegularCantorSet::new(
            "loose",
            s,
            vec![
                (QuadraticSurd::zero(), QuadraticSurd::from_ratio(1, 2)),
                (QuadraticSurd::from_ratio(2, 3), QuadraticSurd::one()),
            ],
            vec![
                Mobius::affine(QuadraticSurd::from_ratio(1, 3), QuadraticSurd::zero()),
                Mobius::affine(QuadraticSurd::from_ratio(1, 3), QuadraticSurd::from_ratio(2, 3)),
            ],
        );
        assert!(loose.is_err());
    }

    #[test]
    fn named_sets() {
        assert_eq!(RegularCantorSet::from_name("midthird").unwrap().label(), "middle third");
        assert_eq!(RegularCantorSet::from_name("C(4)").unwrap().symbol_count(), 4);
        assert_eq!(RegularCantorSet::from_name("affine:2/5").unwrap().c_max(), 0.4);
        assert!(RegularCantorSet::from_name("nope").is_err());
    }

    #[test]
    fn periodic_points_are_exact() {
        let k = RegularCantorSet::middle_third();
        // 0.(02) in base 3 = 2/8 = 1/4
        assert_eq!(k.point(&[], &[0, 1]).unwrap(), QuadraticSurd::from_ratio(1, 4));
        assert_eq!(k.point(&[1], &[0]).unwrap(), QuadraticSurd::from_ratio(2, 3));
        let c2 = RegularCantorSet::gauss(2).unwrap();
        let x = c2.point(&[], &[1, 0]).unwrap();
        assert_eq!(x, crate::cf::cf_value(&[0], &[2, 1]).unwrap());
    }
}
