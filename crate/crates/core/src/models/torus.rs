use crate::error::{Error, Result};
use crate::spectra::{DiscreteSystem, Orbit};
use crate::surd::QuadraticSurd;
use num_integer::Integer;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

/// Largest number of fixed points of `T^p` that will be listed.
pub const PERIODIC_POINT_CAP: usize = 1 << 22;

/// A rational point of the torus `ℝ²/ℤ²`, `(x_num/den, y_num/den)` with
/// both coordinates in `[0, 1)` and the fraction reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TorusPoint {
    xn: i64,
    yn: i64,
    den: i64,
}

impl TorusPoint {
    pub fn new(xn: i64, yn: i64, den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(Error::InvalidArgument(format!("denominator {den} must be positive")));
        }
        let (xn, yn) = (xn.rem_euclid(den), yn.rem_euclid(den));
        let g = xn.gcd(&yn).gcd(&den);
        Ok(TorusPoint {
            xn: xn / g,
            yn: yn / g,
            den: den / g,
        })
    }

    pub fn origin() -> Self {
        TorusPoint { xn: 0, yn: 0, den: 1 }
    }

    pub fn common_denominator(&self) -> i64 {
        self.den
    }

    /// `x` as a reduced fraction.
    pub fn x(&self) -> (i64, i64) {
        let g = self.xn.gcd(&self.den);
        (self.xn / g, self.den / g)
    }

    pub fn y(&self) -> (i64, i64) {
        let g = self.yn.gcd(&self.den);
        (self.yn / g, self.den / g)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.xn as f64 / self.den as f64, self.yn as f64 / self.den as f64)
    }

    pub fn x_exact(&self) -> QuadraticSurd {
        QuadraticSurd::from_ratio(self.xn, self.den)
    }

    pub fn y_exact(&self) -> QuadraticSurd {
        QuadraticSurd::from_ratio(self.yn, self.den)
    }
}

impl Ord for TorusPoint {
    fn cmp(&self, o: &Self) -> Ordering {
        let (a, b) = (self.den as i128, o.den as i128);
        (self.xn as i128 * b)
            .cmp(&(o.xn as i128 * a))
            .then_with(|| (self.yn as i128 * b).cmp(&(o.yn as i128 * a)))
    }
}

impl PartialOrd for TorusPoint {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let frac = |(n, d): (i64, i64)| if d == 1 { n.to_string() } else { format!("{n}/{d}") };
        write!(f, "({},{})", frac(self.x()), frac(self.y()))
    }
}

/// A hyperbolic automorphism of the 2-torus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToralAutomorphism {
    matrix: [[i64; 2]; 2],
}

type Mat = [[i64; 2]; 2];

fn mul(a: &Mat, b: &Mat) -> Option<Mat> {
    let e = |i: usize, j: usize| a[i][0].checked_mul(b[0][j])?.checked_add(a[i][1].checked_mul(b[1][j])?);
    Some([[e(0, 0)?, e(0, 1)?], [e(1, 0)?, e(1, 1)?]])
}

impl ToralAutomorphism {
    pub fn new(matrix: [[i64; 2]; 2]) -> Result<Self> {
        let [[a, b], [c, d]] = matrix;
        let det = a * d - b * c;
        if det.abs() != 1 {
            return Err(Error::InvalidSystem(format!("determinant {det} is not ±1")));
        }
        if (a + d).abs() <= 2 {
            return Err(Error::InvalidSystem(format!("trace {} gives no hyperbolicity", a + d)));
        }
        Ok(ToralAutomorphism { matrix })
    }

    /// `[[2,1],[1,1]]`.
    pub fn cat_map() -> Self {
        ToralAutomorphism {
            matrix: [[2, 1], [1, 1]],
        }
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.matrix
    }

    pub fn det(&self) -> i64 {
        let [[a, b], [c, d]] = self.matrix;
        a * d - b * c
    }

    pub fn trace(&self) -> i64 {
        self.matrix[0][0] + self.matrix[1][1]
    }

    /// The eigenvalue of modulus greater than one.
    pub fn eigenvalue(&self) -> QuadraticSurd {
        let t = self.trace();
        let root = QuadraticSurd::sqrt_of(t * t - 4 * self.det());
        let root = if t < 0 { -root } else { root };
        &(&QuadraticSurd::from_integer(t) + &root) / &QuadraticSurd::from_integer(2)
    }

    /// The other eigenvalue, `det / λ`.
    pub fn stable_eigenvalue(&self) -> QuadraticSurd {
        &QuadraticSurd::from_integer(self.det()) / &self.eigenvalue()
    }

    /// `|λ|` as a float.
    pub fn expansion(&self) -> f64 {
        self.eigenvalue().to_f64().abs()
    }

    /// Eigenvectors `(unstable, stable)`.
    pub fn eigendirections(&self) -> ([QuadraticSurd; 2], [QuadraticSurd; 2]) {
        let [[a, b], [c, _]] = self.matrix;
        let v = |mu: QuadraticSurd| {
            if b != 0 {
                [QuadraticSurd::from_integer(b), &mu - &QuadraticSurd::from_integer(a)]
            } else {
                [&mu - &QuadraticSurd::from_integer(self.matrix[1][1]), QuadraticSurd::from_integer(c)]
            }
        };
        (v(self.eigenvalue()), v(self.stable_eigenvalue()))
    }

    pub fn inverse_matrix(&self) -> [[i64; 2]; 2] {
        let [[a, b], [c, d]] = self.matrix;
        let det = self.det();
        [[d * det, -b * det], [-c * det, a * det]]
    }

    fn apply_matrix(m: &Mat, p: &TorusPoint) -> TorusPoint {
        let den = p.den as i128;
        let (x, y) = (p.xn as i128, p.yn as i128);
        let nx = (m[0][0] as i128 * x + m[0][1] as i128 * y).rem_euclid(den);
        let ny = (m[1][0] as i128 * x + m[1][1] as i128 * y).rem_euclid(den);
        TorusPoint::new(nx as i64, ny as i64, p.den).expect("positive denominator")
    }

    pub fn apply(&self, p: &TorusPoint) -> TorusPoint {
        Self::apply_matrix(&self.matrix, p)
    }

    pub fn apply_inverse(&self, p: &TorusPoint) -> TorusPoint {
        Self::apply_matrix(&self.inverse_matrix(), p)
    }

    /// The map on floating coordinates, reduced mod 1.
    pub fn apply_f64(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let m = self.matrix;
        let nx = m[0][0] as f64 * x + m[0][1] as f64 * y;
        let ny = m[1][0] as f64 * x + m[1][1] as f64 * y;
        (nx.rem_euclid(1.0), ny.rem_euclid(1.0))
    }

    pub fn apply_inverse_f64(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let m = self.inverse_matrix();
        let nx = m[0][0] as f64 * x + m[0][1] as f64 * y;
        let ny = m[1][0] as f64 * x + m[1][1] as f64 * y;
        (nx.rem_euclid(1.0), ny.rem_euclid(1.0))
    }

    pub fn power(&self, p: usize) -> Result<[[i64; 2]; 2]> {
        let mut acc = [[1, 0], [0, 1]];
        for _ in 0..p {
            acc = mul(&acc, &self.matrix).ok_or(Error::ResourceCap {
                what: "matrix power bits",
                count: p,
                cap: 63,
            })?;
        }
        Ok(acc)
    }

    /// `|det(A^p - I)|`, the number of points fixed by `T^p`.
    pub fn fixed_point_count(&self, p: usize) -> Result<u64> {
        if p == 0 {
            return Err(Error::InvalidArgument("period must be at least 1".into()));
        }
        let [[a, b], [c, d]] = self.power(p)?;
        let det = (a as i128 - 1) * (d as i128 - 1) - b as i128 * c as i128;
        Ok(det.unsigned_abs() as u64)
    }
}

/// All fixed points of `T^p`, sorted. They are `adj(B) n / det B` for
/// `B = A^p - I` and `n ∈ ℤ²`, generated as a subgroup of the torus.
pub fn periodic_points(t: &ToralAutomorphism, p: usize) -> Result<Vec<TorusPoint>> {
    let count = t.fixed_point_count(p)? as usize;
    if count > PERIODIC_POINT_CAP {
        return Err(Error::ResourceCap {
            what: "periodic points",
            count,
            cap: PERIODIC_POINT_CAP,
        });
    }
    let [[a, b], [c, d]] = t.power(p)?;
    let (a, d) = (a - 1, d - 1);
    let det = a * d - b * c;
    let den = det.abs();
    let s = det.signum();
    let gens = [(s * d, -s * c), (-s * b, s * a)];
    let mut seen: HashSet<(i64, i64)> = HashSet::new();
    let mut stack = vec![(0i64, 0i64)];
    seen.insert((0, 0));
    while let Some((u, v)) = stack.pop() {
        for (gu, gv) in gens {
            let next = ((u + gu).rem_euclid(den), (v + gv).rem_euclid(den));
            if seen.insert(next) {
                stack.push(next);
            }
        }
    }
    if seen.len() != count {
        return Err(Error::InvalidSystem(format!(
            "found {} fixed points of T^{p}, expected {count}",
            seen.len()
        )));
    }
    let mut pts: Vec<TorusPoint> = seen
        .into_iter()
        .map(|(u, v)| TorusPoint::new(u, v, den))
        .collect::<Result<_>>()?;
    pts.sort();
    Ok(pts)
}

impl ToralAutomorphism {
    fn orbit_min(&self, p: &TorusPoint, period: usize) -> TorusPoint {
        let mut best = *p;
        let mut q = *p;
        for _ in 1..period {
            q = self.apply(&q);
            best = best.min(q);
        }
        best
    }

    fn minimal_period(&self, p: &TorusPoint, bound: usize) -> Option<usize> {
        let mut q = *p;
        for k in 1..=bound {
            q = self.apply(&q);
            if q == *p {
                return Some(k);
            }
        }
        None
    }
}

impl DiscreteSystem for ToralAutomorphism {
    type Point = TorusPoint;

    fn name(&self) -> String {
        let [[a, b], [c, d]] = self.matrix;
        format!("torus[[{a},{b}],[{c},{d}]]")
    }

    fn iterate(&self, p: &TorusPoint) -> TorusPoint {
        self.apply(p)
    }

    fn inverse_iterate(&self, p: &TorusPoint) -> TorusPoint {
        self.apply_inverse(p)
    }

    fn same_point(&self, a: &TorusPoint, b: &TorusPoint) -> bool {
        a == b
    }

    fn witness(&self, p: &TorusPoint, period: usize) -> String {
        self.orbit_min(p, period.max(1)).to_string()
    }

    fn periodic_orbits(&self, max_period: usize) -> Result<Vec<Orbit<TorusPoint>>> {
        if max_period == 0 {
            return Err(Error::InvalidArgument("period must be at least 1".into()));
        }
        let mut out = Vec::new();
        for p in 1..=max_period {
            for pt in periodic_points(self, p)? {
                if self.minimal_period(&pt, p) == Some(p) && self.orbit_min(&pt, p) == pt {
                    out.push(Orbit {
                        point: pt,
                        period: p,
                        witness: pt.to_string(),
                    });
                }
            }
        }
        Ok(out)
    }
}
