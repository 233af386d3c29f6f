//! The `spectra-lab` command line: configuration, dispatch and reports.

mod commands;
mod config;
mod expr;
mod report;

pub use commands::{dispatch, missing_keys, Outcome};
pub use config::{ExactNumber, ExperimentConfig, COMMANDS};
pub use expr::Expression;
pub use report::{emit_plot_data, sig15, write_atomic, Provenance, Rigor, RunReport};

use crate::error::{Error, Result};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::time::Instant;

pub const THREADS_ENV: &str = "SPECTRA_LAB_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_CERTIFICATE_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "spectra-lab", version, about = "Dynamical Lagrange and Markov spectra, Cantor set geometry")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a Markov spectrum on periodic orbits
    Spectrum(Flags),
    /// Evaluate a continued fraction or a bi-infinite sequence
    Cf(Flags),
    /// Certified Hausdorff dimension plus a box-counting estimate
    Dimension(Flags),
    /// Lower bound for the thickness of a Cantor set
    Thickness(Flags),
    /// Certify that K + K2 contains an interval
    Sumset(Flags),
    /// Gap lemma sweep over translations
    Sweep(Flags),
    /// Avoidance subsystems and their dimensions
    Avoid(Flags),
    /// Cat map periodic points and Markov partition
    Catmap(Flags),
    /// Convergence of limit geometries
    Limitgeom(Flags),
    /// Plot data from a saved report
    Report(Flags),
}

#[derive(Debug, Args, Default)]
struct Flags {
    /// JSON configuration file; flags override its keys
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    system: Option<String>,
    /// Named observable or expression
    #[arg(long, allow_hyphen_values = true)]
    observable: Option<String>,
    #[arg(long)]
    digits: Option<u64>,
    #[arg(long)]
    max_period: Option<usize>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// `lo,hi`
    #[arg(long, allow_hyphen_values = true)]
    t_range: Option<Pair<f64>>,
    #[arg(long)]
    steps: Option<usize>,
    /// Report destination; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Cantor set: midthird, unit, affine:<r>, gauss:<N>, C(<N>)
    #[arg(long = "set", short = 'K')]
    set: Option<String>,
    #[arg(long = "set2")]
    set2: Option<String>,
    /// `lo,hi`, exact decimals or fractions
    #[arg(long, allow_hyphen_values = true)]
    target: Option<Pair<ExactNumber>>,
    #[arg(long, value_delimiter = ',')]
    theta: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    cells: Option<Vec<String>>,
    #[arg(long)]
    word: Option<String>,
    /// Subshift JSON file
    #[arg(long)]
    subshift: Option<PathBuf>,
    #[arg(long)]
    ratio: Option<f64>,
    #[arg(long)]
    ratio_s: Option<String>,
    #[arg(long)]
    ratio_u: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    roof: Option<String>,
    /// Continued fraction such as `[1;2,(3,4)]`
    #[arg(long)]
    expansion: Option<String>,
    /// CF sequence JSON
    #[arg(long)]
    sequence: Option<String>,
    #[arg(long)]
    resolution: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Plot-data CSV destination
    #[arg(long)]
    csv: Option<PathBuf>,
    /// spectrum-rug, dimension-vs-depth, sweep or periodic-points
    #[arg(long)]
    plot: Option<String>,
    /// Report to read (report command)
    #[arg(long)]
    input: Option<PathBuf>,
}

/// `lo,hi` on the command line.
#[derive(Clone, Debug)]
struct Pair<T>(T, T);

impl<T: std::str::FromStr<Err: std::fmt::Display>> std::str::FromStr for Pair<T> {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s.split_once(',').ok_or_else(|| format!("expected lo,hi, got {s:?}"))?;
        let one = |t: &str| t.trim().parse::<T>().map_err(|e| format!("{t:?}: {e}"));
        Ok(Pair(one(a)?, one(b)?))
    }
}

impl Command {
    fn split(self) -> (&'static str, Flags) {
        match self {
            Command::Spectrum(f) => ("spectrum", f),
            Command::Cf(f) => ("cf", f),
            Command::Dimension(f) => ("dimension", f),
            Command::Thickness(f) => ("thickness", f),
            Command::Sumset(f) => ("sumset", f),
            Command::Sweep(f) => ("sweep", f),
            Command::Avoid(f) => ("avoid", f),
            Command::Catmap(f) => ("catmap", f),
            Command::Limitgeom(f) => ("limitgeom", f),
            Command::Report(f) => ("report", f),
        }
    }
}

impl Flags {
    fn to_config(&self, command: &str) -> ExperimentConfig {
        ExperimentConfig {
            command: Some(command.to_string()),
            system: self.system.clone(),
            observable: self.observable.clone(),
            digits: self.digits,
            max_period: self.max_period,
            depth: self.depth,
            tol: self.tol,
            t_range: self.t_range.as_ref().map(|p| [p.0, p.1]),
            steps: self.steps,
            output: self.out.clone(),
            seed: self.seed,
            set: self.set.clone(),
            set2: self.set2.clone(),
            target: self.target.as_ref().map(|p| [p.0.clone(), p.1.clone()]),
            theta: self.theta.clone(),
            cells: self.cells.clone(),
            word: self.word.clone(),
            subshift: self.subshift.clone(),
            ratio: self.ratio,
            ratio_s: self.ratio_s.clone(),
            ratio_u: self.ratio_u.clone(),
            roof: self.roof.clone(),
            expansion: self.expansion.clone(),
            sequence: self.sequence.clone(),
            resolution: self.resolution,
            samples: self.samples,
            csv: self.csv.clone(),
            plot: self.plot.clone(),
            input: self.input.clone(),
        }
    }
}

/// A failed run: the exit code and the lines to print.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub messages: Vec<String>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: EXIT_ERROR,
            messages: vec![e.to_string()],
        }
    }
}

/// Validation messages for a configuration, empty when it can run.
pub fn validate(config: &ExperimentConfig) -> Vec<String> {
    let mut errs = config.validate();
    if errs.is_empty() {
        errs.extend(missing_keys(config));
    }
    errs
}

fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::InvalidArgument(format!("{THREADS_ENV}: expected a positive integer, got {v:?}"))),
        },
    }
}

/// Caps the global worker pool at `SPECTRA_LAB_THREADS` if set. The pool
/// can be configured once per process; later calls keep the first setting.
pub fn init_threads() -> Result<()> {
    if let Some(n) = threads_from_env()? {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Runs a validated configuration and assembles its report. Nothing is
/// written.
pub fn run(config: &ExperimentConfig) -> std::result::Result<RunReport, Failure> {
    let errs = validate(config);
    if !errs.is_empty() {
        return Err(Failure {
            code: EXIT_ERROR,
            messages: errs,
        });
    }
    let start = Instant::now();
    let outcome = if config.command.as_deref() == Some("report") {
        report_command(config)?
    } else {
        dispatch(config)?
    };
    Ok(RunReport {
        config: config.clone(),
        results: outcome.results,
        rigor: outcome.rigor,
        certificate_ok: outcome.certificate_ok,
        provenance: Provenance {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
            wall_time_s: start.elapsed().as_secs_f64(),
            threads: rayon::current_num_threads(),
        },
    })
}

fn report_command(config: &ExperimentConfig) -> Result<Outcome> {
    let path = config.input.as_ref().expect("validated");
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read report {}: {e}", path.display())))?;
    let source = RunReport::from_json(&text)?;
    let kind = config.plot.as_deref().expect("validated");
    let csv = emit_plot_data(&source, kind)?;
    let results = serde_json::json!({
        "input": path,
        "plot": kind,
        "source_command": source.config.command,
        "rows": csv.lines().count().saturating_sub(1),
        "csv": csv,
    });
    Ok(Outcome {
        results,
        rigor: source.rigor,
        certificate_ok: true,
    })
}

/// Runs `config` and writes its outputs: the report to `output` (stdout
/// when absent) and plot data to `csv`. Returns the exit code.
pub fn execute(config: &ExperimentConfig) -> std::result::Result<i32, Failure> {
    let report = run(config)?;
    let is_report = config.command.as_deref() == Some("report");
    let csv = match (&config.plot, is_report) {
        (_, true) => Some(report.results["csv"].as_str().unwrap_or_default().to_string()),
        (Some(kind), false) => Some(emit_plot_data(&report, kind)?),
        (None, false) => None,
    };
    let json = report.to_json_pretty();
    match (&config.csv, &csv) {
        (Some(path), Some(data)) => write_atomic(path, data.as_bytes())?,
        (None, Some(data)) if is_report => print!("{data}"),
        _ => {}
    }
    match &config.output {
        Some(path) => write_atomic(path, json.as_bytes())?,
        None if is_report => {}
        None => print!("{json}"),
    }
    Ok(if report.certificate_ok {
        EXIT_OK
    } else {
        EXIT_CERTIFICATE_FAILED
    })
}

fn parse_and_execute<I, T>(args: I) -> std::result::Result<i32, Failure>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return Ok(code);
        }
    };
    init_threads()?;
    let (command, flags) = cli.command.split();
    let base = match &flags.config {
        Some(p) => ExperimentConfig::from_file(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(c) = base.command.as_deref() {
        if c != command {
            return Err(Failure {
                code: EXIT_ERROR,
                messages: vec![format!("command: config names {c:?} but the subcommand is {command:?}")],
            });
        }
    }
    execute(&base.overridden_by(&flags.to_config(command)))
}

/// Entry point of the binary: runs the arguments, prints diagnostics to
/// stderr and returns the process exit code.
pub fn main_entry<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match parse_and_execute(args) {
        Ok(code) => code,
        Err(f) => {
            for m in &f.messages {
                eprintln!("error: {m}");
            }
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("c.json");
        let out = dir.path().join("r.json");
        std::fs::write(&cfg, r#"{"command":"spectrum","system":"cf","digits":2,"max_period":3}"#).unwrap();
        let code = main_entry([
            "spectra-lab",
            "spectrum",
            "--config",
            cfg.to_str().unwrap(),
            "--max-period",
            "1",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let r = RunReport::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(r.config.max_period, Some(1));
        assert_eq!(r.results["samples"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn invalid_config_writes_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("r.json");
        let code = main_entry(["spectra-lab", "spectrum", "--max-period", "0", "--out", out.to_str().unwrap()]);
        assert_eq!(code, 1);
        assert!(!out.exists());
        let f = run(&ExperimentConfig {
            command: Some("spectrum".into()),
            max_period: Some(0),
            ..Default::default()
        })
        .unwrap_err();
        assert_eq!(f.code, 1);
        assert!(f.messages[0].starts_with("max_period:"));
    }

    #[test]
    fn mismatched_command() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("c.json");
        std::fs::write(&cfg, r#"{"command":"cf"}"#).unwrap();
        assert_eq!(main_entry(["spectra-lab", "spectrum", "--config", cfg.to_str().unwrap()]), 1);
    }
}
