//! Subshifts of finite type: periodic orbits, word avoidance, entropy and
//! the dimension of the associated self-similar Cantor model.

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::perron::{self, Edge, PerronOptions};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use std::fmt;

/// Default cap on the number of orbit classes returned by
/// [`SubshiftSft::enumerate_periodic`].
pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;

/// Cap on the number of higher-block states built by [`SubshiftSft::avoid_word`].
pub const BLOCK_STATE_CAP: usize = 1 << 21;

/// A subshift of finite type on a labelled alphabet. Symbols are addressed
/// by their index in the alphabet; the alphabet order is the lexicographic
/// order used for canonical rotations.
#[derive(Clone, PartialEq, Eq)]
pub struct SubshiftSft {
    label: String,
    alphabet: Vec<String>,
    succ: Vec<Vec<usize>>,
}

/// A bi-infinite periodic sequence, stored as its primitive period in
/// lexicographically minimal rotation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PeriodicWord(Vec<usize>);

/// A finite admissible block of symbol indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FiniteWord(Vec<usize>);

fn minimal_rotation_start(w: &[usize]) -> usize {
    let n = w.len();
    (0..n)
        .min_by(|&a, &b| {
            (0..n)
                .map(|k| w[(a + k) % n])
                .cmp((0..n).map(|k| w[(b + k) % n]))
        })
        .unwrap_or(0)
}

fn primitive_root_len(w: &[usize]) -> usize {
    let n = w.len();
    (1..=n)
        .find(|&d| n.is_multiple_of(d) && (d..n).all(|i| w[i] == w[i - d]))
        .unwrap_or(n)
}

impl PeriodicWord {
    /// Canonicalizes any nonempty period: primitive root, minimal rotation.
    pub fn new(symbols: Vec<usize>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidWord("empty period".into()));
        }
        let d = primitive_root_len(&symbols);
        let root = &symbols[..d];
        let s = minimal_rotation_start(root);
        Ok(PeriodicWord((0..d).map(|k| root[(s + k) % d]).collect()))
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn period(&self) -> usize {
        self.0.len()
    }

    /// Symbol at integer position `i` of the bi-infinite sequence whose
    /// position 0 is the first symbol of the stored rotation.
    pub fn at(&self, i: i64) -> usize {
        self.0[i.rem_euclid(self.0.len() as i64) as usize]
    }
}

impl FiniteWord {
    pub fn new(symbols: Vec<usize>) -> Self {
        FiniteWord(symbols)
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A symbol as it appears in JSON: either a string or a number.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum SymbolLabel {
    Text(String),
    Int(i64),
}

impl SymbolLabel {
    fn into_string(self) -> String {
        match self {
            SymbolLabel::Text(s) => s,
            SymbolLabel::Int(i) => i.to_string(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubshiftJson {
    alphabet: Vec<SymbolLabel>,
    allowed: Vec<[SymbolLabel; 2]>,
    #[serde(default)]
    label: String,
}

impl SubshiftSft {
    /// Builds a subshift from labels and allowed pairs. Labels must be
    /// unique and pairs must reference them; recurrence is not required
    /// (see [`SubshiftSft::pruned`]).
    pub fn new<S: AsRef<str>>(label: &str, alphabet: &[S], allowed: &[(S, S)]) -> Result<Self> {
        let alphabet: Vec<String> = alphabet.iter().map(|s| s.as_ref().to_string()).collect();
        let index: HashMap<&str, usize> = alphabet
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        if index.len() != alphabet.len() {
            return Err(Error::InvalidSubshift("duplicate symbol".into()));
        }
        let mut succ = vec![BTreeSet::new(); alphabet.len()];
        for (a, b) in allowed {
            let ia = *index
                .get(a.as_ref())
                .ok_or_else(|| Error::InvalidSubshift(format!("unknown symbol {:?}", a.as_ref())))?;
            let ib = *index
                .get(b.as_ref())
                .ok_or_else(|| Error::InvalidSubshift(format!("unknown symbol {:?}", b.as_ref())))?;
            succ[ia].insert(ib);
        }
        Ok(SubshiftSft {
            label: label.to_string(),
            alphabet,
            succ: succ.into_iter().map(|s| s.into_iter().collect()).collect(),
        })
    }

    /// Builds a subshift from a 0/1 transition matrix with symbols `0..n`.
    pub fn from_matrix(label: &str, matrix: &[Vec<u8>]) -> Result<Self> {
        let n = matrix.len();
        if matrix.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidSubshift("matrix is not square".into()));
        }
        let succ = matrix
            .iter()
            .map(|row| (0..n).filter(|&j| row[j] != 0).collect())
            .collect();
        Ok(SubshiftSft {
            label: label.to_string(),
            alphabet: (0..n).map(|i| i.to_string()).collect(),
            succ,
        })
    }

    /// The full shift on `k` symbols labelled `0..k`.
    pub fn full_shift(k: usize) -> Self {
        SubshiftSft {
            label: format!("full {k}-shift"),
            alphabet: (0..k).map(|i| i.to_string()).collect(),
            succ: (0..k).map(|_| (0..k).collect()).collect(),
        }
    }

    /// The full shift on the digits `1..=n` (bounded continued-fraction digits).
    pub fn digit_shift(n: usize) -> Self {
        SubshiftSft {
            label: format!("digits 1..={n}"),
            alphabet: (1..=n).map(|i| i.to_string()).collect(),
            succ: (0..n).map(|_| (0..n).collect()).collect(),
        }
    }

    /// Binary shift forbidding the block `11`.
    pub fn golden_mean() -> Self {
        SubshiftSft {
            label: "golden mean".into(),
            alphabet: vec!["0".into(), "1".into()],
            succ: vec![vec![0, 1], vec![0]],
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SubshiftJson = serde_json::from_str(text)?;
        let alphabet: Vec<String> = raw.alphabet.into_iter().map(SymbolLabel::into_string).collect();
        let allowed: Vec<(String, String)> = raw
            .allowed
            .into_iter()
            .map(|[a, b]| (a.into_string(), b.into_string()))
            .collect();
        Self::new(&raw.label, &alphabet, &allowed)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let allowed: Vec<[&str; 2]> = self
            .succ
            .iter()
            .enumerate()
            .flat_map(|(a, s)| s.iter().map(move |&b| (a, b)))
            .map(|(a, b)| [self.alphabet[a].as_str(), self.alphabet[b].as_str()])
            .collect();
        serde_json::json!({
            "alphabet": self.alphabet,
            "allowed": allowed,
            "label": self.label,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("subshift serializes")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.alphabet.len()
    }

    /// True when the subshift has no symbols (e.g. everything was avoided).
    pub fn is_empty(&self) -> bool {
        self.alphabet.is_empty()
    }

    pub fn successors(&self, a: usize) -> &[usize] {
        &self.succ[a]
    }

    pub fn allows(&self, a: usize, b: usize) -> bool {
        self.succ[a].binary_search(&b).is_ok()
    }

    pub fn symbol_index(&self, label: &str) -> Option<usize> {
        self.alphabet.iter().position(|s| s == label)
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// Dense 0/1 transition matrix.
    pub fn matrix(&self) -> Vec<Vec<u8>> {
        let n = self.len();
        let mut m = vec![vec![0u8; n]; n];
        for (a, s) in self.succ.iter().enumerate() {
            for &b in s {
                m[a][b] = 1;
            }
        }
        m
    }

    /// Every symbol has an allowed successor and predecessor.
    pub fn is_essential(&self) -> bool {
        let mut has_pred = vec![false; self.len()];
        for s in &self.succ {
            for &b in s {
                has_pred[b] = true;
            }
        }
        self.succ.iter().all(|s| !s.is_empty()) && has_pred.iter().all(|&p| p)
    }

    /// Removes symbols without successors or predecessors until none remain.
    pub fn pruned(&self) -> SubshiftSft {
        let n = self.len();
        let mut alive = vec![true; n];
        loop {
            let mut has_pred = vec![false; n];
            let mut has_succ = vec![false; n];
            for a in (0..n).filter(|&a| alive[a]) {
                for &b in self.succ[a].iter().filter(|&&b| alive[b]) {
                    has_succ[a] = true;
                    has_pred[b] = true;
                }
            }
            let mut changed = false;
            for a in 0..n {
                if alive[a] && !(has_pred[a] && has_succ[a]) {
                    alive[a] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        self.restrict(&alive)
    }

    /// Keeps only the symbols flagged in `keep`, preserving their order.
    pub fn restrict(&self, keep: &[bool]) -> SubshiftSft {
        let mut remap = vec![usize::MAX; self.len()];
        let mut alphabet = Vec::new();
        for (a, &k) in keep.iter().enumerate() {
            if k {
                remap[a] = alphabet.len();
                alphabet.push(self.alphabet[a].clone());
            }
        }
        let succ = (0..self.len())
            .filter(|&a| keep[a])
            .map(|a| {
                self.succ[a]
                    .iter()
                    .filter(|&&b| keep[b])
                    .map(|&b| remap[b])
                    .collect()
            })
            .collect();
        SubshiftSft {
            label: self.label.clone(),
            alphabet,
            succ,
        }
    }

    /// Parses a word given as comma/space separated labels, or as a string
    /// of single-character labels.
    pub fn parse_word(&self, text: &str) -> Result<FiniteWord> {
        let parts: Vec<&str> = if text.contains(',') || text.contains(' ') {
            text.split([',', ' ']).filter(|s| !s.is_empty()).collect()
        } else if self.alphabet.iter().all(|s| s.chars().count() == 1) {
            text.char_indices()
                .map(|(i, c)| &text[i..i + c.len_utf8()])
                .collect()
        } else {
            vec![text]
        };
        let symbols = parts
            .iter()
            .map(|p| {
                self.symbol_index(p)
                    .ok_or_else(|| Error::InvalidWord(format!("unknown symbol {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let w = FiniteWord(symbols);
        self.check_word(&w)?;
        Ok(w)
    }

    pub fn check_word(&self, w: &FiniteWord) -> Result<()> {
        if w.0.iter().any(|&s| s >= self.len()) {
            return Err(Error::InvalidWord("symbol index out of range".into()));
        }
        if let Some(i) = w.0.windows(2).position(|p| !self.allows(p[0], p[1])) {
            return Err(Error::InvalidWord(format!(
                "transition {}→{} at position {i} is not allowed",
                self.alphabet[w.0[i]],
                self.alphabet[w.0[i + 1]]
            )));
        }
        Ok(())
    }

    pub fn is_admissible_cycle(&self, w: &[usize]) -> bool {
        !w.is_empty() && (0..w.len()).all(|i| self.allows(w[i], w[(i + 1) % w.len()]))
    }

    pub fn format_symbols(&self, w: &[usize]) -> String {
        let labels: Vec<&str> = w.iter().map(|&s| self.alphabet[s].as_str()).collect();
        if labels.iter().all(|l| l.chars().count() == 1) {
            labels.concat()
        } else {
            labels.join(",")
        }
    }

    /// True iff the transition matrix is primitive: the graph is strongly
    /// connected and the gcd of its cycle lengths is 1.
    pub fn is_topologically_mixing(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return false;
        }
        // BFS levels from symbol 0, forward and backward reachability
        let mut level = vec![usize::MAX; n];
        level[0] = 0;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for &b in &self.succ[a] {
                if level[b] == usize::MAX {
                    level[b] = level[a] + 1;
                    queue.push_back(b);
                }
            }
        }
        if level.contains(&usize::MAX) {
            return false;
        }
        let mut pred = vec![Vec::new(); n];
        for (a, s) in self.succ.iter().enumerate() {
            for &b in s {
                pred[b].push(a);
            }
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(a) = stack.pop() {
            for &b in &pred[a] {
                if !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        if !seen.iter().all(|&s| s) {
            return false;
        }
        let mut g = 0usize;
        for (a, s) in self.succ.iter().enumerate() {
            for &b in s {
                let diff = (level[a] + 1).abs_diff(level[b]);
                g = num_integer::gcd(g, diff);
            }
        }
        g == 1
    }

    /// Trace of the `p`-th power of the transition matrix, i.e. the number
    /// of points fixed by `σ^p`.
    pub fn fixed_point_count(&self, p: usize) -> u128 {
        let n = self.len();
        let m = self.matrix();
        let mut acc: Vec<Vec<u128>> = (0..n)
            .map(|i| (0..n).map(|j| u128::from(i == j)).collect())
            .collect();
        for _ in 0..p {
            let mut next = vec![vec![0u128; n]; n];
            for i in 0..n {
                for k in 0..n {
                    if acc[i][k] == 0 {
                        continue;
                    }
                    for j in 0..n {
                        if m[k][j] != 0 {
                            next[i][j] += acc[i][k];
                        }
                    }
                }
            }
            acc = next;
        }
        (0..n).map(|i| acc[i][i]).sum()
    }

    /// Orbit classes of `σ` whose minimal period divides `p`, each as a
    /// canonical [`PeriodicWord`], sorted by period then lexicographically.
    pub fn enumerate_periodic(&self, p: usize) -> Result<Vec<PeriodicWord>> {
        self.enumerate_periodic_capped(p, DEFAULT_ORBIT_CAP)
    }

    pub fn enumerate_periodic_capped(&self, p: usize, cap: usize) -> Result<Vec<PeriodicWord>> {
        if p == 0 {
            return Err(Error::InvalidArgument("period must be at least 1".into()));
        }
        let per_start: Vec<Result<Vec<PeriodicWord>>> = (0..self.len())
            .into_par_iter()
            .map(|start| {
                let mut out = Vec::new();
                let mut word = vec![start];
                self.necklace_dfs(&mut word, p, cap, &mut out)?;
                Ok(out)
            })
            .collect();
        let mut all = Vec::new();
        for r in per_start {
            all.extend(r?);
            if all.len() > cap {
                return Err(Error::ResourceCap {
                    what: "periodic orbit classes",
                    count: all.len(),
                    cap,
                });
            }
        }
        all.sort_by(|a, b| a.period().cmp(&b.period()).then_with(|| a.cmp(b)));
        Ok(all)
    }

    fn necklace_dfs(
        &self,
        word: &mut Vec<usize>,
        p: usize,
        cap: usize,
        out: &mut Vec<PeriodicWord>,
    ) -> Result<()> {
        if word.len() == p {
            if self.allows(word[p - 1], word[0]) && minimal_rotation_start(word) == 0 {
                let d = primitive_root_len(word);
                // each class appears once: as root^(p/d) with a minimal root
                out.push(PeriodicWord(word[..d].to_vec()));
                if out.len() > cap {
                    return Err(Error::ResourceCap {
                        what: "periodic orbit classes",
                        count: out.len(),
                        cap,
                    });
                }
            }
            return Ok(());
        }
        let first = word[0];
        let last = *word.last().expect("nonempty");
        for &b in &self.succ[last] {
            // a minimal rotation never contains a symbol below its first one
            if b < first {
                continue;
            }
            word.push(b);
            self.necklace_dfs(word, p, cap, out)?;
            word.pop();
        }
        Ok(())
    }

    /// All admissible blocks of length `k`.
    pub fn blocks(&self, k: usize) -> Result<Vec<Vec<usize>>> {
        let mut out: Vec<Vec<usize>> = if k == 0 {
            vec![vec![]]
        } else {
            (0..self.len()).map(|a| vec![a]).collect()
        };
        for _ in 1..k {
            let mut next = Vec::new();
            for w in &out {
                for &b in &self.succ[*w.last().expect("nonempty")] {
                    let mut v = w.clone();
                    v.push(b);
                    next.push(v);
                }
            }
            if next.len() > BLOCK_STATE_CAP {
                return Err(Error::ResourceCap {
                    what: "admissible blocks",
                    count: next.len(),
                    cap: BLOCK_STATE_CAP,
                });
            }
            out = next;
        }
        Ok(out)
    }

    /// The subshift of sequences of `self` that never contain `w`, recoded
    /// on `(|w|-1)`-blocks (the original alphabet when `|w| <= 2`) and
    /// pruned of non-recurrent states. May be empty.
    pub fn avoid_word(&self, w: &FiniteWord) -> Result<SubshiftSft> {
        if w.is_empty() {
            return Err(Error::InvalidWord("cannot avoid the empty word".into()));
        }
        if w.0.iter().any(|&s| s >= self.len()) {
            return Err(Error::InvalidWord("symbol index out of range".into()));
        }
        let label = format!("{} avoiding {}", self.label, self.format_symbols(&w.0));
        let k = w.len();
        if k == 1 {
            let keep: Vec<bool> = (0..self.len()).map(|a| a != w.0[0]).collect();
            return Ok(self.restrict(&keep).pruned().with_label(label));
        }
        if k == 2 {
            let mut out = self.clone();
            out.succ[w.0[0]].retain(|&b| b != w.0[1]);
            return Ok(out.pruned().with_label(label));
        }
        let states = self.blocks(k - 1)?;
        let index: HashMap<&[usize], usize> = states
            .iter()
            .enumerate()
            .map(|(i, b)| (b.as_slice(), i))
            .collect();
        let succ: Vec<Vec<usize>> = states
            .iter()
            .map(|b| {
                let last = *b.last().expect("k >= 3");
                let mut next: Vec<usize> = self.succ[last]
                    .iter()
                    .filter(|&&c| !(b[..] == w.0[..k - 1] && c == w.0[k - 1]))
                    .map(|&c| {
                        let mut nb = b[1..].to_vec();
                        nb.push(c);
                        index[nb.as_slice()]
                    })
                    .collect();
                next.sort_unstable();
                next
            })
            .collect();
        let alphabet = states
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&s| self.alphabet[s].as_str())
                    .collect::<Vec<_>>()
                    .join(".")
            })
            .collect();
        Ok(SubshiftSft {
            label,
            alphabet,
            succ,
        }
        .pruned())
    }

    fn unit_edges(&self) -> Vec<Edge> {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(a, s)| {
                s.iter().map(move |&b| Edge {
                    from: a,
                    to: b,
                    weight: Interval::point(1.0),
                })
            })
            .collect()
    }

    /// Enclosure of the Perron root of the transition matrix with width at
    /// most `tol`.
    pub fn spectral_radius(&self, tol: f64) -> Result<Interval> {
        if self.is_empty() {
            return Err(Error::InvalidSubshift("empty subshift".into()));
        }
        let opts = PerronOptions {
            tol,
            ..PerronOptions::default()
        };
        Ok(perron::perron_root(self.len(), &self.unit_edges(), opts)?.bounds)
    }

    /// Topological entropy `log ρ` as an enclosure.
    pub fn entropy(&self, tol: f64) -> Result<Interval> {
        let rho = self.spectral_radius(tol)?;
        Ok(Interval::new(rho.lo().max(1.0), rho.hi().max(1.0)).ln())
    }

    /// Hausdorff dimension of the Cantor model in which every symbol acts
    /// as a similarity of the given ratio: `log ρ / log(1/ratio)`.
    pub fn symbolic_dimension_enclosure(&self, ratio: f64) -> Result<Interval> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidArgument(format!("ratio {ratio} not in (0,1)")));
        }
        let h = self.entropy(1e-13)?;
        let denom = -Interval::point(ratio).ln();
        Ok(h.checked_div(&denom).expect("log(1/ratio) > 0"))
    }

    pub fn symbolic_dimension(&self, ratio: f64) -> Result<f64> {
        Ok(self.symbolic_dimension_enclosure(ratio)?.mid())
    }
}

impl fmt::Debug for SubshiftSft {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SubshiftSft({:?}, {} symbols, {} transitions)",
            self.label,
            self.len(),
            self.edge_count()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const PHI: f64 = 1.618_033_988_749_895;

    #[test]
    fn mixing_examples() {
        assert!(SubshiftSft::full_shift(2).is_topologically_mixing());
        let lazy = SubshiftSft::new("loop", &["0", "1"], &[("0", "0")]).unwrap();
        assert!(!lazy.is_topologically_mixing());
        assert!(SubshiftSft::golden_mean().is_topologically_mixing());
        let swap = SubshiftSft::new("swap", &["0", "1"], &[("0", "1"), ("1", "0")]).unwrap();
        assert!(!swap.is_topologically_mixing());
    }

    /// Brute force: some boolean power up to (n-1)^2+1 is strictly positive.
    fn primitive_by_powers(m: &[Vec<u8>]) -> bool {
        let n = m.len();
        let mut p: Vec<Vec<bool>> = m.iter().map(|r| r.iter().map(|&x| x != 0).collect()).collect();
        for _ in 0..((n - 1) * (n - 1) + 1) {
            if p.iter().all(|r| r.iter().all(|&x| x)) {
                return true;
            }
            let mut q = vec![vec![false; n]; n];
            for i in 0..n {
                for k in 0..n {
                    if p[i][k] {
                        for j in 0..n {
                            q[i][j] |= m[k][j] != 0;
                        }
                    }
                }
            }
            p = q;
        }
        p.iter().all(|r| r.iter().all(|&x| x))
    }

    #[test]
    fn enumerate_examples() {
        let full = SubshiftSft::full_shift(2);
        let p2 = full.enumerate_periodic(2).unwrap();
        let words: Vec<&[usize]> = p2.iter().map(|w| w.symbols()).collect();
        assert_eq!(words, vec![&[0][..], &[1], &[0, 1]]);
        assert_eq!(p2.iter().map(PeriodicWord::period).sum::<usize>(), 4);
        assert_eq!(full.enumerate_periodic(1).unwrap().len(), 2);
        let gm = SubshiftSft::golden_mean();
        let p3 = gm.enumerate_periodic(3).unwrap();
        assert_eq!(p3.iter().map(PeriodicWord::period).sum::<usize>(), 4);
        assert!(full.enumerate_periodic(0).is_err());
    }

    #[test]
    fn orbit_cap_is_enforced() {
        let err = SubshiftSft::full_shift(3).enumerate_periodic_capped(6, 10).unwrap_err();
        assert!(matches!(err, Error::ResourceCap { .. }));
    }

    #[test]
    fn avoid_examples() {
        let full = SubshiftSft::full_shift(2);
        let only_ones = full.avoid_word(&full.parse_word("0").unwrap()).unwrap();
        assert_eq!(only_ones.len(), 1);
        assert_eq!(only_ones.edge_count(), 1);
        let gm = full.avoid_word(&full.parse_word("11").unwrap()).unwrap();
        let rho = gm.spectral_radius(1e-12).unwrap();
        assert!(rho.contains(PHI) || (rho.mid() - PHI).abs() < 1e-12);
        let a010 = full.avoid_word(&full.parse_word("010").unwrap()).unwrap();
        assert_eq!(a010.len(), 4);
        let rho = a010.spectral_radius(1e-12).unwrap();
        // real root of x^3 - 2x^2 + x - 1, the growth rate of 010-free strings
        assert!((rho.mid() - 1.754_877_666_246_693).abs() < 1e-10);
    }

    /// Number of binary strings of length L avoiding `w`, by dynamic
    /// programming over suffix states.
    fn avoiding_count(w: &[usize], len: usize) -> u128 {
        let mut counts: HashMap<Vec<usize>, u128> = HashMap::from([(vec![], 1)]);
        for _ in 0..len {
            let mut next: HashMap<Vec<usize>, u128> = HashMap::new();
            for (suffix, c) in &counts {
                for b in 0..2 {
                    let mut s = suffix.clone();
                    s.push(b);
                    if s.ends_with(w) {
                        continue;
                    }
                    if s.len() >= w.len() {
                        s.remove(0);
                    }
                    *next.entry(s).or_default() += c;
                }
            }
            counts = next;
        }
        counts.values().sum()
    }

    #[test]
    fn avoid_010_growth_matches_string_counting() {
        let full = SubshiftSft::full_shift(2);
        let rho = full
            .avoid_word(&FiniteWord::new(vec![0, 1, 0]))
            .unwrap()
            .spectral_radius(1e-12)
            .unwrap()
            .mid();
        let ratio = avoiding_count(&[0, 1, 0], 60) as f64 / avoiding_count(&[0, 1, 0], 59) as f64;
        assert!((ratio - rho).abs() < 1e-9);
    }

    #[test]
    fn avoid_everything_is_flagged_empty() {
        let full = SubshiftSft::full_shift(1);
        let empty = full.avoid_word(&FiniteWord::new(vec![0])).unwrap();
        assert!(empty.is_empty());
        assert!(empty.spectral_radius(1e-9).is_err());
    }

    #[test]
    fn spectral_radius_examples() {
        for k in 1..=5 {
            let r = SubshiftSft::full_shift(k).spectral_radius(1e-12).unwrap();
            assert!(r.contains(k as f64), "{k}: {r:?}");
        }
        let r = SubshiftSft::golden_mean().spectral_radius(1e-12).unwrap();
        assert!(r.lo() <= r.hi() && r.width() <= 1e-12);
        assert!((r.mid() - PHI).abs() <= 1e-12);
        let single = SubshiftSft::new("loop", &["a"], &[("a", "a")]).unwrap();
        assert!(single.spectral_radius(1e-12).unwrap().contains(1.0));
    }

    #[test]
    fn symbolic_dimension_examples() {
        let full = SubshiftSft::full_shift(2);
        let d = full.symbolic_dimension_enclosure(1.0 / 3.0).unwrap();
        assert!(d.contains(2f64.ln() / 3f64.ln()));
        let gm = SubshiftSft::golden_mean().symbolic_dimension(1.0 / 3.0).unwrap();
        assert!((gm - PHI.ln() / 3f64.ln()).abs() < 1e-10);
        assert!((gm - 0.4380).abs() < 1e-4);
        let half = full.symbolic_dimension_enclosure(0.5).unwrap();
        assert!(half.contains(1.0));
        assert!(full.symbolic_dimension(1.0).is_err());
    }

    #[test]
    fn urbanski_monotone_limit() {
        let full = SubshiftSft::full_shift(2);
        let target = full.symbolic_dimension(1.0 / 3.0).unwrap();
        let mut prev = 0.0;
        for n in 1..=12 {
            let w = FiniteWord::new(vec![1; n]);
            let sub = full.avoid_word(&w).unwrap();
            let d = if sub.is_empty() { 0.0 } else { sub.symbolic_dimension(1.0 / 3.0).unwrap() };
            assert!(d >= prev - 1e-12, "n={n}: {d} < {prev}");
            prev = d;
        }
        assert!(target - prev < 0.01);
        assert!(target - prev > 0.0);
    }

    #[test]
    fn json_round_trip_preserves_structure() {
        let s = SubshiftSft::golden_mean();
        let back = SubshiftSft::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        let numeric = SubshiftSft::from_json(r#"{"alphabet":[1,2],"allowed":[[1,2],[2,1],[2,2]],"label":"x"}"#).unwrap();
        assert_eq!(numeric.alphabet(), &["1".to_string(), "2".to_string()]);
        assert!(SubshiftSft::from_json(r#"{"alphabet":["a"],"allowed":[["a","b"]]}"#).is_err());
        assert!(SubshiftSft::from_json(r#"{"alphabet":["a"],"allowed":[],"extra":1}"#).is_err());
    }

    fn arb_subshift() -> impl Strategy<Value = SubshiftSft> {
        (1usize..=5).prop_flat_map(|n| {
            prop::collection::vec(prop::collection::vec(prop::bool::weighted(0.55), n), n).prop_map(
                move |rows| {
                    let m: Vec<Vec<u8>> = rows
                        .into_iter()
                        .map(|r| r.into_iter().map(u8::from).collect())
                        .collect();
                    SubshiftSft::from_matrix("random", &m).unwrap()
                },
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn fixed_points_match_trace(s in arb_subshift()) {
            for p in 1..=8 {
                let orbits = s.enumerate_periodic(p).unwrap();
                let fixed: u128 = orbits.iter().map(|w| w.period() as u128).sum();
                prop_assert_eq!(fixed, s.fixed_point_count(p));
                for w in &orbits {
                    prop_assert!(s.is_admissible_cycle(w.symbols()));
                    prop_assert_eq!(PeriodicWord::new(w.symbols().to_vec()).unwrap(), w.clone());
                }
            }
        }

        #[test]
        fn mixing_matches_boolean_powers(s in arb_subshift()) {
            prop_assert_eq!(s.is_topologically_mixing(), primitive_by_powers(&s.matrix()));
        }

        #[test]
        fn avoided_word_never_appears(s in arb_subshift(), raw in prop::collection::vec(0usize..5, 1..4)) {
            let w: Vec<usize> = raw.into_iter().map(|x| x % s.len()).collect();
            let sub = s.avoid_word(&FiniteWord::new(w.clone())).unwrap();
            prop_assert!(sub.is_empty() || sub.is_essential());
            // decode block states back to original symbols and scan all blocks
            let decode = |state: usize| -> Vec<usize> {
                sub.alphabet()[state]
                    .split('.')
                    .map(|l| s.symbol_index(l).unwrap())
                    .collect()
            };
            for len in 1..=3 * w.len() {
                for block in sub.blocks(len).unwrap() {
                    let mut seq = decode(block[0]);
                    for &st in &block[1..] {
                        seq.push(*decode(st).last().unwrap());
                    }
                    prop_assert!(!seq.windows(w.len()).any(|win| win == &w[..]));
                }
            }
        }
    }
}
