use crate::error::{Error, Result};
use crate::surd::QuadraticSurd;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const COMMANDS: [&str; 10] = [
    "spectrum", "cf", "dimension", "thickness", "sumset", "sweep", "avoid", "catmap", "limitgeom", "report",
];

pub const MAX_PERIOD_LIMIT: usize = 40;
pub const DEPTH_LIMIT: usize = 40;
pub const STEPS_LIMIT: usize = 1_000_000;
pub const SAMPLES_LIMIT: usize = 10_000_000;

/// One experiment. Every key is optional in the file; flags override it.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observable: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digits: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_period: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_range: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Cantor set name.
    #[serde(default, rename = "K", skip_serializing_if = "Option::is_none")]
    pub set: Option<String>,
    #[serde(default, rename = "K2", skip_serializing_if = "Option::is_none")]
    pub set2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<[ExactNumber; 2]>,
    /// Backward itinerary for `limitgeom`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cells: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    /// Path of a subshift JSON file for `avoid`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subshift: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio_s: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio_u: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roof: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expansion: Option<String>,
    /// Inline CF sequence JSON for `cf`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Plot-data CSV destination.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot: Option<String>,
    /// Report to read for `report`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
}

/// A number kept in its decimal spelling, so `0.9` means `9/10`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExactNumber {
    Number(serde_json::Number),
    Text(String),
}

impl ExactNumber {
    pub fn to_surd(&self) -> Result<QuadraticSurd> {
        let text = match self {
            ExactNumber::Number(n) => n.to_string(),
            ExactNumber::Text(t) => t.clone(),
        };
        text.parse().map_err(Error::InvalidArgument)
    }
}

impl std::str::FromStr for ExactNumber {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        s.parse::<QuadraticSurd>()?;
        Ok(ExactNumber::Text(s.to_string()))
    }
}

macro_rules! overlay {
    ($dst:ident, $src:ident, $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("config: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// `self` with every key set in `o` replaced.
    pub fn overridden_by(mut self, o: &ExperimentConfig) -> Self {
        overlay!(
            self, o, command, system, observable, digits, max_period, depth, tol, t_range, steps, output, seed, set,
            set2, target, theta, cells, word, subshift, ratio, ratio_s, ratio_u, roof, expansion, sequence,
            resolution, samples, csv, plot, input
        );
        self
    }

    /// All violations, each prefixed by its key.
    pub fn validate(&self) -> Vec<String> {
        let mut errs = Vec::new();
        match self.command.as_deref() {
            None => errs.push("command: missing".to_string()),
            Some(c) if !COMMANDS.contains(&c) => errs.push(format!("command: unknown command {c:?}")),
            _ => {}
        }
        if let Some(p) = self.max_period {
            if !(1..=MAX_PERIOD_LIMIT).contains(&p) {
                errs.push(format!("max_period: {p} not in 1..={MAX_PERIOD_LIMIT}"));
            }
        }
        if let Some(d) = self.digits {
            if !(1..=64).contains(&d) {
                errs.push(format!("digits: {d} not in 1..=64"));
            }
        }
        if let Some(d) = self.depth {
            if !(1..=DEPTH_LIMIT).contains(&d) {
                errs.push(format!("depth: {d} not in 1..={DEPTH_LIMIT}"));
            }
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t < 1.0) {
                errs.push(format!("tol: {t} not in (0, 1)"));
            }
        }
        if let Some([a, b]) = self.t_range {
            if !(a.is_finite() && b.is_finite() && a <= b) {
                errs.push(format!("t_range: [{a}, {b}] is not a finite ordered pair"));
            }
        }
        if let Some(s) = self.steps {
            if !(1..=STEPS_LIMIT).contains(&s) {
                errs.push(format!("steps: {s} not in 1..={STEPS_LIMIT}"));
            }
        }
        if let Some(s) = self.samples {
            if !(1..=SAMPLES_LIMIT).contains(&s) {
                errs.push(format!("samples: {s} not in 1..={SAMPLES_LIMIT}"));
            }
        }
        if let Some(r) = self.ratio {
            if !(r > 0.0 && r < 1.0) {
                errs.push(format!("ratio: {r} not in (0, 1)"));
            }
        }
        if let Some(r) = self.resolution {
            if !(r > 0.0 && r.is_finite()) {
                errs.push(format!("resolution: {r} must be positive"));
            }
        }
        if let Some(target) = &self.target {
            match (target[0].to_surd(), target[1].to_surd()) {
                (Ok(a), Ok(b)) if a <= b => {}
                (Ok(_), Ok(_)) => errs.push("target: endpoints are reversed".to_string()),
                (Err(e), _) | (_, Err(e)) => errs.push(format!("target: {e}")),
            }
        }
        if let Some(t) = &self.theta {
            if t.is_empty() {
                errs.push("theta: empty itinerary".to_string());
            }
        }
        if let Some(p) = &self.plot {
            if !["spectrum-rug", "dimension-vs-depth", "sweep", "periodic-points"].contains(&p.as_str()) {
                errs.push(format!("plot: unknown kind {p:?}"));
            }
        }
        if let Some(s) = &self.system {
            if !["cf", "catmap", "horseshoe", "suspension", "shift"].contains(&s.as_str()) {
                errs.push(format!("system: unknown system {s:?}"));
            }
        }
        errs
    }
}
