//! An eigendirection-aligned Markov partition of the cat map.
//!
//! Coordinates `ξ = φx + y` (unstable, scaled by `φ²`) and `η = x − φy`
//! (stable, scaled by `φ⁻²`) turn cells into axis-parallel rectangles and
//! the lattice `ℤ²` into `{(mφ + n, m − nφ)}`. Two rectangles
//! `B = [0, φ) × [0, φ)` and `S = [φ, φ+1) × [0, 1)` tile a fundamental
//! domain; cutting `B` at `ξ = 1/φ` and `ξ = 1`, and `S` at `ξ = 2`, makes
//! the partition Markov with a 0-1 transition matrix.

use super::torus::{ToralAutomorphism, TorusPoint};
use crate::cantor::{Mobius, RegularCantorSet};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::perron::{perron_root, Edge, PerronOptions};
use crate::surd::QuadraticSurd;
use crate::symbolic::{FiniteWord, SubshiftSft};
use num_bigint::BigInt;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Half-open rectangle `[ξ0, ξ1) × [η0, η1)` in eigencoordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rect {
    pub xi: (QuadraticSurd, QuadraticSurd),
    pub eta: (QuadraticSurd, QuadraticSurd),
}

impl Rect {
    fn shifted(&self, v: &(QuadraticSurd, QuadraticSurd)) -> Rect {
        Rect {
            xi: (&self.xi.0 + &v.0, &self.xi.1 + &v.0),
            eta: (&self.eta.0 + &v.1, &self.eta.1 + &v.1),
        }
    }

    /// Intersection with positive area.
    fn meet(&self, o: &Rect) -> Option<Rect> {
        let xi = (self.xi.0.clone().max(o.xi.0.clone()), self.xi.1.clone().min(o.xi.1.clone()));
        let eta = (self.eta.0.clone().max(o.eta.0.clone()), self.eta.1.clone().min(o.eta.1.clone()));
        (xi.0 < xi.1 && eta.0 < eta.1).then_some(Rect { xi, eta })
    }

    pub fn area(&self) -> QuadraticSurd {
        &(&self.xi.1 - &self.xi.0) * &(&self.eta.1 - &self.eta.0)
    }

    fn contains(&self, p: &(QuadraticSurd, QuadraticSurd)) -> bool {
        self.xi.0 <= p.0 && p.0 < self.xi.1 && self.eta.0 <= p.1 && p.1 < self.eta.1
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
struct RectF {
    xi: (f64, f64),
    eta: (f64, f64),
}

#[derive(Clone, Debug, Serialize)]
pub struct Cell {
    pub label: String,
    /// `[ξ0, ξ1]` as decimals.
    pub xi: (f64, f64),
    pub eta: (f64, f64),
    /// Lebesgue measure on the torus.
    pub area: f64,
}

/// A transition `i → j`: `A(cell i)` meets `cell j + v` for the lattice
/// vector `v = (mφ + n, m − nφ)`.
#[derive(Clone, Debug, Serialize)]
pub struct Piece {
    pub from: usize,
    pub to: usize,
    pub shift: (i64, i64),
}

pub struct MarkovPartition {
    map: ToralAutomorphism,
    rects: Vec<Rect>,
    rects_f: Vec<RectF>,
    cells: Vec<Cell>,
    pieces: Vec<Piece>,
    subshift: SubshiftSft,
    // index by (from, to)
    piece_index: Vec<Vec<Option<usize>>>,
}

fn phi() -> QuadraticSurd {
    QuadraticSurd::new(BigInt::from(1), BigInt::from(1), BigInt::from(2), BigInt::from(5))
}

fn int(n: i64) -> QuadraticSurd {
    QuadraticSurd::from_integer(n)
}

fn lattice(m: i64, n: i64) -> (QuadraticSurd, QuadraticSurd) {
    let f = phi();
    (&(&int(m) * &f) + &int(n), &int(m) - &(&int(n) * &f))
}

fn eigen_coords(x: &QuadraticSurd, y: &QuadraticSurd) -> (QuadraticSurd, QuadraticSurd) {
    let f = phi();
    (&(&f * x) + y, x - &(&f * y))
}

const DISJOINT_RANGE: i64 = 4;
const TRANSITION_RANGE: i64 = 8;
const LOCATE_RANGE: i64 = 2;

/// Builds the five-cell partition and verifies it: the cells tile a
/// fundamental domain (total area one, no overlaps modulo the lattice)
/// and every image/cell intersection crosses the cell fully in the
/// unstable direction and stays inside it in the stable one.
pub fn markov_partition_cat() -> Result<MarkovPartition> {
    let map = ToralAutomorphism::cat_map();
    let f = phi();
    let finv = f.recip().expect("nonzero");
    let one = int(1);
    let rect = |x0: &QuadraticSurd, x1: &QuadraticSurd, e1: &QuadraticSurd| Rect {
        xi: (x0.clone(), x1.clone()),
        eta: (int(0), e1.clone()),
    };
    let f1 = &f + &one;
    let rects = vec![
        rect(&int(0), &finv, &f),
        rect(&one, &f, &f),
        rect(&finv, &one, &f),
        rect(&int(2), &f1, &one),
        rect(&f, &int(2), &one),
    ];
    let n = rects.len();
    let bad = |m: String| Err(Error::InvalidSystem(format!("Markov partition check failed: {m}")));

    let covolume = &(&f * &f) + &one;
    let total = rects.iter().fold(int(0), |acc, r| &acc + &r.area());
    if total != covolume {
        return bad(format!("cell areas sum to {total}, lattice covolume is {covolume}"));
    }
    for i in 0..n {
        for j in i..n {
            for m in -DISJOINT_RANGE..=DISJOINT_RANGE {
                for k in -DISJOINT_RANGE..=DISJOINT_RANGE {
                    if i == j && m == 0 && k == 0 {
                        continue;
                    }
                    if rects[i].meet(&rects[j].shifted(&lattice(m, k))).is_some() {
                        return bad(format!("cells {i} and {j} overlap modulo the lattice"));
                    }
                }
            }
        }
    }

    let lam = &f * &f;
    let lam_inv = lam.recip().expect("nonzero");
    let image = |r: &Rect| Rect {
        xi: (&r.xi.0 * &lam, &r.xi.1 * &lam),
        eta: (&r.eta.0 * &lam_inv, &r.eta.1 * &lam_inv),
    };
    let mut pieces = Vec::new();
    let mut piece_index = vec![vec![None; n]; n];
    for i in 0..n {
        let img = image(&rects[i]);
        for j in 0..n {
            for m in -TRANSITION_RANGE..=TRANSITION_RANGE {
                for k in -TRANSITION_RANGE..=TRANSITION_RANGE {
                    let target = rects[j].shifted(&lattice(m, k));
                    let Some(p) = img.meet(&target) else { continue };
                    if p.xi != target.xi || p.eta != img.eta {
                        return bad(format!("image of cell {i} does not cross cell {j} properly"));
                    }
                    if piece_index[i][j].is_some() {
                        return bad(format!("image of cell {i} crosses cell {j} twice"));
                    }
                    piece_index[i][j] = Some(pieces.len());
                    pieces.push(Piece {
                        from: i,
                        to: j,
                        shift: (m, k),
                    });
                }
            }
        }
    }
    let alphabet: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
    let allowed: Vec<(String, String)> = pieces
        .iter()
        .map(|p| (alphabet[p.from].clone(), alphabet[p.to].clone()))
        .collect();
    let subshift = SubshiftSft::new("cat map partition", &alphabet, &allowed)?;

    let rects_f: Vec<RectF> = rects
        .iter()
        .map(|r| RectF {
            xi: (r.xi.0.to_f64(), r.xi.1.to_f64()),
            eta: (r.eta.0.to_f64(), r.eta.1.to_f64()),
        })
        .collect();
    let cells = rects
        .iter()
        .zip(&rects_f)
        .enumerate()
        .map(|(i, (r, rf))| Cell {
            label: alphabet[i].clone(),
            xi: rf.xi,
            eta: rf.eta,
            area: (&r.area() / &covolume).to_f64(),
        })
        .collect();
    Ok(MarkovPartition {
        map,
        rects,
        rects_f,
        cells,
        pieces,
        subshift,
        piece_index,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CodingCheck {
    pub samples: usize,
    pub depth: usize,
    pub seed: u64,
    /// Points whose itinerary was not admissible or whose position left
    /// the cylinder of their itinerary.
    pub failures: usize,
    /// Points too close to a cell boundary to be located in floating point.
    pub skipped: usize,
}

impl MarkovPartition {
    pub fn map(&self) -> &ToralAutomorphism {
        &self.map
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn rects(&self) -> &[Rect] {
        &self.rects
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn subshift(&self) -> &SubshiftSft {
        &self.subshift
    }

    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    /// Exact area of each cell, normalized by the torus area.
    pub fn cell_areas(&self) -> Vec<QuadraticSurd> {
        let f = phi();
        let covolume = &(&f * &f) + &int(1);
        self.rects.iter().map(|r| &r.area() / &covolume).collect()
    }

    /// Enclosure of the Perron root of the transition matrix.
    pub fn spectral_radius(&self, tol: f64) -> Result<Interval> {
        let edges: Vec<Edge> = self
            .pieces
            .iter()
            .map(|p| Edge {
                from: p.from,
                to: p.to,
                weight: Interval::point(1.0),
            })
            .collect();
        let opts = PerronOptions {
            tol,
            ..PerronOptions::default()
        };
        Ok(perron_root(self.len(), &edges, opts)?.bounds)
    }

    /// The cell containing a rational point, exactly.
    pub fn locate(&self, p: &TorusPoint) -> Result<usize> {
        let (xi, eta) = eigen_coords(&p.x_exact(), &p.y_exact());
        for m in -LOCATE_RANGE..=LOCATE_RANGE {
            for k in -LOCATE_RANGE..=LOCATE_RANGE {
                let v = lattice(m, k);
                let q = (&xi - &v.0, &eta - &v.1);
                if let Some(i) = self.rects.iter().position(|r| r.contains(&q)) {
                    return Ok(i);
                }
            }
        }
        Err(Error::InvalidSystem(format!("point {p} lies in no cell")))
    }

    /// The cell of a floating point and its position `(ξ, η)` inside the
    /// cell's representative rectangle; `None` within `margin` of a cell
    /// boundary.
    pub fn locate_f64(&self, (x, y): (f64, f64), margin: f64) -> Option<(usize, f64, f64)> {
        let fv = (1.0 + 5f64.sqrt()) / 2.0;
        let (xi, eta) = (fv * x + y, x - fv * y);
        for m in -LOCATE_RANGE..=LOCATE_RANGE {
            for k in -LOCATE_RANGE..=LOCATE_RANGE {
                let (a, b) = (xi - (m as f64 * fv + k as f64), eta - (m as f64 - k as f64 * fv));
                for (i, r) in self.rects_f.iter().enumerate() {
                    let inside = |v: f64, (lo, hi): (f64, f64), tol: f64| lo + tol <= v && v < hi - tol;
                    if inside(a, r.xi, -margin) && inside(b, r.eta, -margin) {
                        if inside(a, r.xi, margin) && inside(b, r.eta, margin) {
                            return Some((i, a, b));
                        }
                        return None;
                    }
                }
            }
        }
        None
    }

    /// Forward itinerary `(cell(T^k p))_{k<depth}` of a rational point.
    pub fn code(&self, p: &TorusPoint, depth: usize) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(depth);
        let mut q = *p;
        for _ in 0..depth {
            out.push(self.locate(&q)?);
            q = self.map.apply(&q);
        }
        Ok(out)
    }

    /// The forward cylinder `{x ∈ cell w_0 : T^k x ∈ cell w_k}` as a
    /// rectangle in the representative of cell `w_0`.
    pub fn cylinder(&self, word: &[usize]) -> Result<Rect> {
        let Some(&last) = word.last() else {
            return Err(Error::InvalidWord("empty cylinder word".into()));
        };
        if word.iter().any(|&s| s >= self.len()) {
            return Err(Error::InvalidWord("cell index out of range".into()));
        }
        let f = phi();
        let lam_inv = (&f * &f).recip().expect("nonzero");
        let mut xi = self.rects[last].xi.clone();
        for k in (0..word.len() - 1).rev() {
            let Some(pi) = self.piece_index[word[k]][word[k + 1]] else {
                return Err(Error::InvalidWord(format!(
                    "transition c{} -> c{} is not allowed",
                    word[k],
                    word[k + 1]
                )));
            };
            let (m, n) = self.pieces[pi].shift;
            let v = lattice(m, n);
            let own = &self.rects[word[k]].xi;
            let lo = &(&xi.0 + &v.0) * &lam_inv;
            let hi = &(&xi.1 + &v.0) * &lam_inv;
            xi = (lo.max(own.0.clone()), hi.min(own.1.clone()));
        }
        Ok(Rect {
            xi,
            eta: self.rects[word[0]].eta.clone(),
        })
    }

    /// The unstable factor: cells' `ξ`-ranges with the inverse branches
    /// `ξ ↦ (ξ + s_a)/λ`, where `s_a` is the lattice shift of every
    /// transition out of `a`. The stable factor is its image under the
    /// quarter turn conjugating `A` to `A⁻¹`, so has the same dimension.
    pub fn unstable_factor(&self) -> Result<RegularCantorSet> {
        let f = phi();
        let lam_inv = (&f * &f).recip().expect("nonzero");
        let mut branches = Vec::with_capacity(self.len());
        for a in 0..self.len() {
            let mut shifts = self.pieces.iter().filter(|p| p.from == a).map(|p| p.shift);
            let first = shifts.next().ok_or_else(|| Error::InvalidSystem(format!("cell c{a} has no successor")))?;
            if shifts.any(|s| s != first) {
                return Err(Error::InvalidSystem(format!("transitions out of c{a} use different shifts")));
            }
            let s = lattice(first.0, first.1).0;
            branches.push(Mobius::affine(lam_inv.clone(), &s * &lam_inv));
        }
        let intervals = self.rects.iter().map(|r| r.xi.clone()).collect();
        RegularCantorSet::new("cat map unstable factor", self.subshift.clone(), intervals, branches)
    }

    /// Codes `samples` random points to `depth` and checks that each
    /// itinerary is admissible and that the point lies in the cylinder of
    /// its itinerary.
    pub fn check_coding(&self, samples: usize, depth: usize, seed: u64) -> Result<CodingCheck> {
        if depth == 0 {
            return Err(Error::InvalidArgument("coding depth must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let margin = 1e-9;
        let mut out = CodingCheck {
            samples,
            depth,
            seed,
            failures: 0,
            skipped: 0,
        };
        'points: for _ in 0..samples {
            let p0 = (rng.random::<f64>(), rng.random::<f64>());
            let mut p = p0;
            let mut word = Vec::with_capacity(depth);
            let mut start = None;
            for _ in 0..depth {
                let Some((c, a, b)) = self.locate_f64(p, margin) else {
                    out.skipped += 1;
                    continue 'points;
                };
                if start.is_none() {
                    start = Some((a, b));
                }
                word.push(c);
                p = self.map.apply_f64(p);
            }
            let ok = word.windows(2).all(|w| self.subshift.allows(w[0], w[1]))
                && match self.cylinder(&word) {
                    Ok(cyl) => {
                        let (a, _) = start.expect("depth > 0");
                        let (lo, hi) = (cyl.xi.0.to_f64(), cyl.xi.1.to_f64());
                        lo - margin <= a && a <= hi + margin
                    }
                    Err(_) => false,
                };
            if !ok {
                out.failures += 1;
            }
        }
        Ok(out)
    }
}

/// What to remove from the partition coding.
#[derive(Clone, Debug)]
pub enum Forbidden {
    Cells(Vec<usize>),
    /// A refined cell: the forward cylinder of a word.
    Word(FiniteWord),
}

#[derive(Clone, Debug, Serialize)]
pub struct Avoidance {
    #[serde(serialize_with = "ser_subshift")]
    pub subshift: SubshiftSft,
    pub forbidden: String,
    /// Length of the forbidden words, the refinement depth.
    pub depth: usize,
    pub empty: bool,
}

fn ser_subshift<S: serde::Serializer>(s: &SubshiftSft, ser: S) -> std::result::Result<S::Ok, S::Error> {
    s.to_json_value().serialize(ser)
}

/// The subsystem of the partition coding that never visits the forbidden
/// cells (or never follows the forbidden word), pruned.
pub fn avoidance_subsystem(m: &MarkovPartition, forbidden: &Forbidden) -> Result<Avoidance> {
    let base = m.subshift();
    let (subshift, label, depth) = match forbidden {
        Forbidden::Cells(cells) => {
            if let Some(&c) = cells.iter().find(|&&c| c >= base.len()) {
                return Err(Error::InvalidWord(format!("no cell c{c}")));
            }
            let keep: Vec<bool> = (0..base.len()).map(|a| !cells.contains(&a)).collect();
            let label = cells.iter().map(|c| format!("c{c}")).collect::<Vec<_>>().join(",");
            let s = if cells.is_empty() {
                base.clone()
            } else {
                base.restrict(&keep).pruned()
            };
            (s, label, 1)
        }
        Forbidden::Word(w) => {
            base.check_word(w)?;
            (base.avoid_word(w)?, base.format_symbols(w.symbols()), w.len())
        }
    };
    Ok(Avoidance {
        empty: subshift.is_empty(),
        subshift,
        forbidden: label,
        depth,
    })
}

/// `2 log ρ(s) / log λ`: stable and unstable rates are both `λ`, so each
/// factor contributes `log ρ / log λ`. Zero for the empty subsystem.
pub fn invariant_set_dimension(t: &ToralAutomorphism, s: &SubshiftSft) -> Result<f64> {
    Ok(invariant_set_dimension_enclosure(t, s)?.mid())
}

pub fn invariant_set_dimension_enclosure(t: &ToralAutomorphism, s: &SubshiftSft) -> Result<Interval> {
    if s.is_empty() {
        return Ok(Interval::point(0.0));
    }
    let h = s.entropy(1e-13)?;
    let log_lambda = t.eigenvalue().abs().enclose().ln();
    let two = Interval::point(2.0);
    (two * h)
        .checked_div(&log_lambda)
        .ok_or_else(|| Error::InvalidSystem("log λ encloses zero".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::torus::periodic_points;

    const LAMBDA: f64 = 2.618033988749895;
    const AVOID_DIMS: [f64; 5] = [1.83157, 1.94269, 1.97927, 1.99228, 1.99709];

    #[test]
    fn partition_structure() {
        let m = markov_partition_cat().unwrap();
        let rows: Vec<Vec<u8>> = m.subshift().matrix();
        assert_eq!(
            rows,
            vec![
                vec![1, 1, 1, 0, 0],
                vec![1, 1, 1, 0, 0],
                vec![0, 0, 0, 1, 1],
                vec![1, 1, 1, 0, 0],
                vec![0, 0, 0, 1, 1],
            ]
        );
        let total = m.cell_areas().iter().fold(int(0), |a, b| &a + b);
        assert_eq!(total, int(1));
        let rho = m.spectral_radius(1e-12).unwrap();
        assert!((rho.mid() - LAMBDA).abs() < 1e-9, "{rho}");
        assert!(rho.contains(LAMBDA));
    }

    #[test]
    fn fixed_point_codes_constantly() {
        let m = markov_partition_cat().unwrap();
        let code = m.code(&TorusPoint::origin(), 8).unwrap();
        assert!(code.iter().all(|&c| c == code[0]));
        for p in [2, 3, 4] {
            for q in periodic_points(m.map(), p).unwrap() {
                let c = m.code(&q, 3 * p).unwrap();
                assert!(c.windows(2).all(|w| m.subshift().allows(w[0], w[1])));
                assert_eq!(c[..p], c[p..2 * p]);
            }
        }
    }

    #[test]
    fn coding_is_faithful() {
        let m = markov_partition_cat().unwrap();
        let check = m.check_coding(1000, 12, 7).unwrap();
        assert_eq!(check.failures, 0);
        assert!(check.skipped < 5, "{check:?}");
        assert!(m.cylinder(&[0, 3]).is_err());
        let cyl = m.cylinder(&[0, 1, 2]).unwrap();
        let width = &cyl.xi.1 - &cyl.xi.0;
        let f = phi();
        let expect = &(&m.rects()[2].xi.1 - &m.rects()[2].xi.0) / &(&f * &f).pow(2);
        assert_eq!(width, expect);
    }

    #[test]
    fn factor_dimensions_add_up() {
        let m = markov_partition_cat().unwrap();
        let k = m.unstable_factor().unwrap();
        let d = crate::cantor::hausdorff_dim(&k, crate::cantor::DimensionOptions::default()).unwrap();
        let full = invariant_set_dimension_enclosure(m.map(), m.subshift()).unwrap();
        assert!((full.mid() - 2.0).abs() < 1e-9);
        assert!((2.0 * d.mid() - full.mid()).abs() <= 2.0 * d.width() + full.width(), "{d:?}");
    }

    #[test]
    fn avoidance() {
        let m = markov_partition_cat().unwrap();
        let t = m.map().clone();
        let none = avoidance_subsystem(&m, &Forbidden::Cells(vec![])).unwrap();
        assert_eq!(none.subshift.matrix(), m.subshift().matrix());
        let full = invariant_set_dimension(&t, &none.subshift).unwrap();
        assert!((full - 2.0).abs() < 1e-9);
        let all = avoidance_subsystem(&m, &Forbidden::Cells((0..5).collect())).unwrap();
        assert!(all.empty);
        assert_eq!(invariant_set_dimension(&t, &all.subshift).unwrap(), 0.0);
        let w = FiniteWord::new(vec![0, 1, 2]);
        let a = avoidance_subsystem(&m, &Forbidden::Word(w)).unwrap();
        assert!(!a.empty && a.depth == 3);
        assert!(a.subshift.spectral_radius(1e-12).unwrap().hi() < LAMBDA);
        let mut prev = 0.0;
        for (k, &oracle) in (2..=6).zip(&AVOID_DIMS) {
            let a = avoidance_subsystem(&m, &Forbidden::Word(FiniteWord::new(vec![0; k]))).unwrap();
            let d = invariant_set_dimension(&t, &a.subshift).unwrap();
            assert!((d - oracle).abs() < 1e-5, "k={k}: {d}");
            assert!(d > prev);
            prev = d;
        }
        assert!(avoidance_subsystem(&m, &Forbidden::Word(FiniteWord::new(vec![0, 3]))).is_err());
    }
}
