use super::config::ExperimentConfig;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::io::Write;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rigor {
    Certified,
    Heuristic,
}

impl Rigor {
    /// Certified only when both are.
    pub fn and(self, o: Rigor) -> Rigor {
        if self == Rigor::Certified && o == Rigor::Certified {
            Rigor::Certified
        } else {
            Rigor::Heuristic
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub timestamp: String,
    pub wall_time_s: f64,
    pub threads: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ExperimentConfig,
    pub results: Value,
    pub rigor: Rigor,
    /// False when a certificate was attempted and failed.
    pub certificate_ok: bool,
    pub provenance: Provenance,
}

impl RunReport {
    /// Everything except the provenance block, as compact JSON. Identical
    /// configurations give identical payloads.
    pub fn payload(&self) -> String {
        let v = serde_json::json!({
            "config": self.config,
            "results": self.results,
            "rigor": self.rigor,
            "certificate_ok": self.certificate_ok,
        });
        serde_json::to_string(&v).expect("serializable")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Writes `bytes` to a temporary file next to `path`, then renames it.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| Error::Io(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.flush().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// `x` with 15 significant digits.
pub fn sig15(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{:.14e}", x);
    let (mantissa, exp) = s.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..16).contains(&exp) {
        let v: f64 = s.parse().expect("formatted float");
        format!("{v}")
    } else {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{m}e{exp}")
    }
}

fn field<'a>(v: &'a Value, key: &str, kind: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::InvalidArgument(format!("plot {kind}: report has no {key:?}")))
}

fn num(v: &Value, key: &str, kind: &str) -> Result<String> {
    let x = field(v, key, kind)?
        .as_f64()
        .ok_or_else(|| Error::InvalidArgument(format!("plot {kind}: {key:?} is not a number")))?;
    Ok(sig15(x))
}

fn text(v: &Value, key: &str, kind: &str) -> Result<String> {
    let f = field(v, key, kind)?;
    Ok(f.as_str().map_or_else(|| f.to_string(), str::to_string))
}

/// CSV plot data of the given kind from a report.
pub fn emit_plot_data(report: &RunReport, kind: &str) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let r = &report.results;
    let rows = |key: &str| -> Result<&Vec<Value>> {
        field(r, key, kind)?
            .as_array()
            .ok_or_else(|| Error::InvalidArgument(format!("plot {kind}: {key:?} is not a list")))
    };
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    match kind {
        "spectrum-rug" => {
            w.write_record(["value", "period", "witness"]).map_err(csv_err)?;
            for s in rows("samples")? {
                w.write_record([num(s, "value", kind)?, text(s, "period", kind)?, text(s, "witness", kind)?])
                    .map_err(csv_err)?;
            }
        }
        "dimension-vs-depth" => {
            w.write_record(["depth", "epsilon", "count"]).map_err(csv_err)?;
            let b = field(r, "box", kind)?;
            for p in field(b, "points", kind)?.as_array().into_iter().flatten() {
                w.write_record([text(p, "depth", kind)?, num(p, "epsilon", kind)?, text(p, "count", kind)?])
                    .map_err(csv_err)?;
            }
        }
        "sweep" => {
            w.write_record(["t", "status"]).map_err(csv_err)?;
            for e in rows("entries")? {
                w.write_record([num(e, "t", kind)?, text(e, "status", kind)?]).map_err(csv_err)?;
            }
        }
        "periodic-points" => {
            w.write_record(["p", "x_num", "x_den", "y_num", "y_den"]).map_err(csv_err)?;
            for e in rows("periodic_points")? {
                let cols = ["p", "x_num", "x_den", "y_num", "y_den"]
                    .iter()
                    .map(|k| text(e, k, kind))
                    .collect::<Result<Vec<_>>>()?;
                w.write_record(cols).map_err(csv_err)?;
            }
        }
        _ => return Err(Error::InvalidArgument(format!("unknown plot kind {kind:?}"))),
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn report(results: Value) -> RunReport {
        RunReport {
            config: ExperimentConfig::default(),
            results,
            rigor: Rigor::Heuristic,
            certificate_ok: true,
            provenance: Provenance {
                tool: "t".into(),
                version: "0".into(),
                timestamp: "now".into(),
                wall_time_s: 0.0,
                threads: 1,
            },
        }
    }

    #[test]
    fn significant_digits() {
        assert_eq!(sig15(std::f64::consts::PI), "3.14159265358979");
        assert_eq!(sig15(5f64.sqrt()), "2.23606797749979");
        assert_eq!(sig15(0.25), "0.25");
        assert_eq!(sig15(1e-20 / 3.0), "3.33333333333333e-21");
    }

    #[test]
    fn plots() {
        let r = report(json!({"samples": [{"value": 5f64.sqrt(), "period": 1, "witness": "(1)"}]}));
        assert_eq!(emit_plot_data(&r, "spectrum-rug").unwrap(), "value,period,witness\n2.23606797749979,1,(1)\n");
        assert!(emit_plot_data(&r, "sweep").is_err());
        let s = report(json!({"entries": [{"t": 0.5, "status": "certified-nonempty"}]}));
        assert_eq!(emit_plot_data(&s, "sweep").unwrap(), "t,status\n0.5,certified-nonempty\n");
        assert!(emit_plot_data(&s, "pie").is_err());
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.json");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn rigor_propagates() {
        assert_eq!(Rigor::Certified.and(Rigor::Heuristic), Rigor::Heuristic);
        assert_eq!(Rigor::Certified.and(Rigor::Certified), Rigor::Certified);
    }
}
