use super::config::ExperimentConfig;
use super::expr::Expression;
use super::report::Rigor;
use crate::cantor::{
    box_dim_estimate, cover_intersection_nonempty, hausdorff_dim, limit_geometry_convergence,
    stable_intersection_sweep, sumset_contains_interval, thickness, DimensionOptions, RegularCantorSet,
};
use crate::cf::{CfSequence, ContinuedFraction};
use crate::error::{Error, Result};
use crate::models::{
    avoidance_subsystem, invariant_set_dimension_enclosure, markov_partition_cat, periodic_points, suspend,
    AffineHorseshoe, Forbidden, HorseshoeSystem, LinearObservable, ToralAutomorphism, TorusPoint,
};
use crate::spectra::{
    flow_section_inclusion, lagrange_value, markov_value, sample_spectrum, section_spectrum, spectrum_report, CfShift,
    DiscreteSystem, FnFlowObservable, FnObservable, HeightFunction, Observable, SpectralValue, SpectrumSample,
    Smoothness,
};
use crate::surd::QuadraticSurd;
use crate::symbolic::SubshiftSft;
use serde_json::{json, Value};
use std::path::Path;

/// What a command produced.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub results: Value,
    pub rigor: Rigor,
    /// False when a certificate was attempted and failed.
    pub certificate_ok: bool,
}

impl Outcome {
    fn new(results: Value, rigor: Rigor) -> Self {
        Outcome {
            results,
            rigor,
            certificate_ok: true,
        }
    }
}

const DEFAULT_MAX_PERIOD: usize = 6;
const DEFAULT_RESOLUTION: f64 = 1e-2;
const DEFAULT_BOX_DEPTH: usize = 12;
const BOX_CYLINDER_BUDGET: f64 = (1u64 << 22) as f64;
const DEFAULT_SUMSET_DEPTH: usize = 14;
const DEFAULT_SWEEP_STEPS: usize = 101;
const DEFAULT_CROSS_CHECK_DEPTH: usize = 12;
const DEFAULT_THICKNESS_DEPTH: usize = 10;
const DEFAULT_CATMAP_PERIOD: usize = 6;
const DEFAULT_CODING_DEPTH: usize = 12;
const DEFAULT_LIMIT_DEPTH: usize = 10;

/// Keys a command cannot run without, as `key: message` lines.
pub fn missing_keys(c: &ExperimentConfig) -> Vec<String> {
    let mut errs = Vec::new();
    let cmd = c.command.as_deref().unwrap_or("");
    let system = c.system.as_deref();
    let need = |errs: &mut Vec<String>, ok: bool, key: &str| {
        if !ok {
            errs.push(format!("{key}: required for {cmd}"));
        }
    };
    match cmd {
        "spectrum" => {
            if system == Some("shift") {
                errs.push("system: spectrum supports cf, catmap, horseshoe, suspension".into());
            }
        }
        "cf" => {
            if c.sequence.is_some() == c.expansion.is_some() {
                errs.push("sequence: give exactly one of sequence or expansion".into());
            }
        }
        "dimension" | "thickness" | "limitgeom" => need(&mut errs, c.set.is_some(), "K"),
        "sumset" => {
            need(&mut errs, c.set.is_some(), "K");
            need(&mut errs, c.target.is_some(), "target");
        }
        "sweep" => need(&mut errs, c.set.is_some(), "K"),
        "avoid" => match system.unwrap_or("catmap") {
            "catmap" => {
                if c.cells.is_some() == c.word.is_some() {
                    errs.push("cells: give exactly one of cells or word".into());
                }
            }
            "shift" => need(&mut errs, c.word.is_some(), "word"),
            s => errs.push(format!("system: avoid supports catmap and shift, not {s:?}")),
        },
        "report" => {
            need(&mut errs, c.input.is_some(), "input");
            need(&mut errs, c.plot.is_some(), "plot");
        }
        _ => {}
    }
    if cmd != "report" && c.plot.is_some() && c.csv.is_none() {
        errs.push("csv: required with plot".into());
    }
    errs
}

pub fn dispatch(c: &ExperimentConfig) -> Result<Outcome> {
    match c.command.as_deref().unwrap_or("") {
        "spectrum" => spectrum(c),
        "cf" => cf(c),
        "dimension" => dimension(c),
        "thickness" => thickness_cmd(c),
        "sumset" => sumset(c),
        "sweep" => sweep(c),
        "avoid" => avoid(c),
        "catmap" => catmap(c),
        "limitgeom" => limitgeom(c),
        "report" => Err(Error::InvalidArgument("report is handled by the front end".into())),
        other => Err(Error::InvalidArgument(format!("unknown command {other:?}"))),
    }
}

fn set_named(name: &str) -> Result<RegularCantorSet> {
    RegularCantorSet::from_name(name)
}

fn surd_named(key: &str, text: &str) -> Result<QuadraticSurd> {
    text.parse()
        .map_err(|e: String| Error::InvalidArgument(format!("{key}: {e}")))
}

fn sample_json<V: SpectralValue>(s: &SpectrumSample<V>) -> Value {
    let mut row = json!({
        "value": s.to_f64(),
        "witness": s.witness,
        "period": s.period,
        "kind": s.kind,
    });
    if let Some(e) = s.value.exact_repr() {
        row["value_exact"] = json!(e);
    }
    row
}

fn spectrum_json<V: SpectralValue>(
    system: &str,
    observable: &str,
    max_period: usize,
    samples: &[SpectrumSample<V>],
    resolution: f64,
) -> Result<Value> {
    let values: Vec<f64> = samples.iter().map(SpectrumSample::to_f64).collect();
    let summary = spectrum_report(&values, resolution)?;
    Ok(json!({
        "system": system,
        "observable": observable,
        "max_period": max_period,
        "samples": samples.iter().map(sample_json).collect::<Vec<_>>(),
        "gaps": summary.gaps,
        "densest_window": summary.densest_window,
        "resolution": resolution,
        "nonrigorous": true,
    }))
}

fn torus_observable(text: &str) -> Result<FnObservable<TorusPoint>> {
    let e = Expression::parse(text, &["x", "y"])?;
    e.eval(&[0.0, 0.0])?;
    Ok(FnObservable::new(text, Smoothness::Lipschitz(f64::INFINITY), move |p: &TorusPoint| {
        let (x, y) = p.to_f64();
        e.eval(&[x, y]).unwrap_or(f64::NAN)
    }))
}

fn spectrum(c: &ExperimentConfig) -> Result<Outcome> {
    let system = c.system.as_deref().unwrap_or("cf");
    let max_period = c.max_period.unwrap_or(DEFAULT_MAX_PERIOD);
    let resolution = c.resolution.unwrap_or(DEFAULT_RESOLUTION);
    let results = match system {
        "cf" => {
            let digits = c.digits.unwrap_or(2);
            let shift = CfShift::new(digits)?;
            match c.observable.as_deref().unwrap_or("height") {
                "height" | "lambda" => {
                    let s = sample_spectrum(&shift, &HeightFunction, max_period)?;
                    spectrum_json(&format!("cf(digits<={digits})"), "height", max_period, &s, resolution)?
                }
                text => {
                    let e = Expression::parse(text, &["alpha", "beta"])?;
                    let f = FnObservable::new(text, Smoothness::Lipschitz(f64::INFINITY), move |p: &CfSequence| {
                        let parts = p
                            .forward_expansion(0)
                            .value()
                            .and_then(|a| Ok((a, p.backward_expansion(0).value()?)));
                        match parts {
                            Ok((a, b)) => e.eval(&[a.to_f64(), 1.0 / b.to_f64()]).unwrap_or(f64::NAN),
                            Err(_) => f64::NAN,
                        }
                    });
                    let s = sample_spectrum(&shift, &f, max_period)?;
                    spectrum_json(&format!("cf(digits<={digits})"), text, max_period, &s, resolution)?
                }
            }
        }
        "catmap" => {
            let text = c.observable.as_deref().unwrap_or("cos(2*pi*x) + cos(2*pi*y)");
            let f = torus_observable(text)?;
            let s = sample_spectrum(&ToralAutomorphism::cat_map(), &f, max_period)?;
            spectrum_json("catmap", text, max_period, &s, resolution)?
        }
        "horseshoe" => {
            let rs = surd_named("ratio_s", c.ratio_s.as_deref().unwrap_or("1/3"))?;
            let ru = surd_named("ratio_u", c.ratio_u.as_deref().unwrap_or("1/3"))?;
            let h = AffineHorseshoe::new(rs, ru)?;
            let sys = HorseshoeSystem::new(h.clone());
            let name = sys.name();
            match c.observable.as_deref().unwrap_or("sum") {
                "sum" | "x+y" => {
                    let f = LinearObservable::sum(&h);
                    let s = sample_spectrum(&sys, &f, max_period)?;
                    spectrum_json(&name, &f.label(), max_period, &s, resolution)?
                }
                text => {
                    let e = Expression::parse(text, &["x", "y"])?;
                    let hh = h.clone();
                    let f = FnObservable::new(text, Smoothness::Lipschitz(f64::INFINITY), move |p: &CfSequence| {
                        match hh.coordinates(p) {
                            Ok((x, y)) => e.eval(&[x.to_f64(), y.to_f64()]).unwrap_or(f64::NAN),
                            Err(_) => f64::NAN,
                        }
                    });
                    let s = sample_spectrum(&sys, &f, max_period)?;
                    spectrum_json(&name, text, max_period, &s, resolution)?
                }
            }
        }
        "suspension" => {
            let roof_text = c.roof.as_deref().unwrap_or("1");
            let text = c.observable.as_deref().unwrap_or("cos(2*pi*x) + s");
            let roof = torus_observable(roof_text)?;
            let susp = suspend(ToralAutomorphism::cat_map(), roof)?;
            let e = Expression::parse(text, &["x", "y", "s"])?;
            let f = FnFlowObservable::new(text, None, move |p: &TorusPoint, s: f64| {
                let (x, y) = p.to_f64();
                e.eval(&[x, y, s]).unwrap_or(f64::NAN)
            });
            let s = section_spectrum(&susp, &f, max_period)?;
            let mut v = spectrum_json(&format!("suspension(catmap, roof={roof_text})"), text, max_period, &s, resolution)?;
            v["inclusion"] = serde_json::to_value(flow_section_inclusion(&susp, &f, max_period)?)?;
            v
        }
        other => return Err(Error::InvalidArgument(format!("system: spectrum does not support {other:?}"))),
    };
    Ok(Outcome::new(results, Rigor::Heuristic))
}

fn cf(c: &ExperimentConfig) -> Result<Outcome> {
    if let Some(text) = &c.expansion {
        let e = ContinuedFraction::parse(text)?;
        let v = e.value()?;
        let results = json!({
            "expansion": e.to_string(),
            "value_exact": v.to_ascii(),
            "value": v.to_f64(),
            "convergents": e.convergents(8).iter().map(|(p, q)| format!("{p}/{q}")).collect::<Vec<_>>(),
        });
        return Ok(Outcome::new(results, Rigor::Certified));
    }
    let text = c.sequence.as_deref().unwrap_or("");
    let seq = CfSequence::from_json(text)?;
    let h = seq.height(0)?;
    let shift = CfShift::new(*seq.left_period.iter().chain(&seq.center).chain(&seq.right_period).max().unwrap_or(&1))?;
    let lagrange = lagrange_value(&shift, &HeightFunction, &seq)?;
    let mut results = json!({
        "sequence": seq.to_string(),
        "height_exact": h.to_ascii(),
        "height": h.to_f64(),
        "forward": seq.forward_expansion(0).to_string(),
        "backward": seq.backward_expansion(0).to_string(),
        "lagrange": sample_json(&lagrange),
    });
    if let Some(p) = seq.minimal_period() {
        results["markov"] = sample_json(&markov_value(&shift, &HeightFunction, &seq, p)?);
    }
    Ok(Outcome::new(results, Rigor::Certified))
}

/// Depths `4..=cap` for box counting, the cap lowered until the deepest
/// level stays within budget.
fn box_depths(set: &RegularCantorSet, requested: Option<usize>) -> Vec<usize> {
    let mut cap = requested.unwrap_or(DEFAULT_BOX_DEPTH);
    if requested.is_none() {
        let k = set.symbol_count().max(2) as f64;
        while cap > 6 && k.powi(cap as i32) > BOX_CYLINDER_BUDGET {
            cap -= 1;
        }
    }
    (4..=cap).collect()
}

fn dimension(c: &ExperimentConfig) -> Result<Outcome> {
    let name = c.set.as_deref().unwrap_or("");
    let set = set_named(name)?;
    let opts = DimensionOptions {
        tol: c.tol.unwrap_or(DimensionOptions::default().tol),
        ..Default::default()
    };
    let enc = hausdorff_dim(&set, opts)?;
    let mut results = json!({
        "set": set.label(),
        "enclosure": enc,
        "mid": enc.mid(),
        "width": enc.width(),
    });
    let mut rigor = Rigor::Certified;
    if !set.is_degenerate() {
        let depths = box_depths(&set, c.depth);
        if depths.len() < 3 {
            return Err(Error::InvalidArgument("depth: box counting needs depth at least 6".into()));
        }
        let b = box_dim_estimate(&set, &depths)?;
        results["box_agreement"] = json!((b.slope - enc.mid()).abs());
        results["box"] = serde_json::to_value(&b)?;
        rigor = rigor.and(Rigor::Heuristic);
    }
    Ok(Outcome::new(results, rigor))
}

fn thickness_cmd(c: &ExperimentConfig) -> Result<Outcome> {
    let set = set_named(c.set.as_deref().unwrap_or(""))?;
    let t = thickness(&set, c.depth.unwrap_or(DEFAULT_THICKNESS_DEPTH))?;
    let results = json!({
        "set": set.label(),
        "infinite": t.is_infinite(),
        "thickness": t,
    });
    Ok(Outcome::new(results, Rigor::Certified))
}

fn two_sets(c: &ExperimentConfig) -> Result<(RegularCantorSet, RegularCantorSet)> {
    let k1 = set_named(c.set.as_deref().unwrap_or(""))?;
    let k2 = match &c.set2 {
        Some(n) => set_named(n)?,
        None => k1.clone(),
    };
    Ok((k1, k2))
}

fn sumset(c: &ExperimentConfig) -> Result<Outcome> {
    let (k1, k2) = two_sets(c)?;
    let t = c.target.as_ref().expect("validated");
    let (a, b) = (t[0].to_surd()?, t[1].to_surd()?);
    let cert = sumset_contains_interval(&k1, &k2, (a.to_f64(), b.to_f64()), c.depth.unwrap_or(DEFAULT_SUMSET_DEPTH))?;
    let ok = cert.is_certified();
    let results = json!({
        "K": k1.label(),
        "K2": k2.label(),
        "target_exact": [a.to_ascii(), b.to_ascii()],
        "node_count": cert.node_count(),
        "certificate": cert,
    });
    Ok(Outcome {
        results,
        rigor: Rigor::Certified,
        certificate_ok: ok,
    })
}

fn sweep(c: &ExperimentConfig) -> Result<Outcome> {
    let (k1, k2) = two_sets(c)?;
    let [a, b] = c.t_range.unwrap_or([-0.5, 0.5]);
    let r = stable_intersection_sweep(&k1, &k2, (a, b), c.steps.unwrap_or(DEFAULT_SWEEP_STEPS))?;
    let depth = c.depth.unwrap_or(DEFAULT_CROSS_CHECK_DEPTH);
    let certified: Vec<f64> = r.certified().map(|e| e.t).collect();
    let false_positives: Vec<f64> = {
        use rayon::prelude::*;
        certified
            .par_iter()
            .copied()
            .filter(|&t| !cover_intersection_nonempty(&k1, &k2, t, depth))
            .collect()
    };
    let ok = false_positives.is_empty();
    let results = json!({
        "K": k1.label(),
        "K2": k2.label(),
        "t_range": r.t_range,
        "thickness": r.thickness,
        "certified_ranges": r.certified_ranges,
        "certified_count": certified.len(),
        "cross_check": {"depth": depth, "checked": certified.len(), "false_positives": false_positives},
        "entries": r.entries,
    });
    Ok(Outcome {
        results,
        rigor: Rigor::Certified,
        certificate_ok: ok,
    })
}

fn read_subshift(path: &Path) -> Result<SubshiftSft> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read subshift {}: {e}", path.display())))?;
    SubshiftSft::from_json(&text)
}

fn interval_json(i: crate::interval::Interval) -> Value {
    json!({"lo": i.lo(), "hi": i.hi(), "mid": i.mid()})
}

fn avoid(c: &ExperimentConfig) -> Result<Outcome> {
    match c.system.as_deref().unwrap_or("catmap") {
        "shift" => {
            let base = match &c.subshift {
                Some(p) => read_subshift(p)?,
                None => SubshiftSft::full_shift(2),
            };
            let ratio = c.ratio.unwrap_or(1.0 / 3.0);
            let w = base.parse_word(c.word.as_deref().unwrap_or(""))?;
            let sub = base.avoid_word(&w)?;
            let full = base.symbolic_dimension_enclosure(ratio)?;
            let dim = if sub.is_empty() {
                crate::interval::Interval::point(0.0)
            } else {
                sub.symbolic_dimension_enclosure(ratio)?
            };
            let results = json!({
                "system": "shift",
                "base": base.to_json_value(),
                "forbidden": base.format_symbols(w.symbols()),
                "ratio": ratio,
                "subshift": sub.to_json_value(),
                "empty": sub.is_empty(),
                "dimension": interval_json(dim),
                "full_dimension": interval_json(full),
                "gap": full.mid() - dim.mid(),
            });
            Ok(Outcome::new(results, Rigor::Certified))
        }
        _ => {
            let m = markov_partition_cat()?;
            let forbidden = match (&c.cells, &c.word) {
                (Some(cells), _) => Forbidden::Cells(
                    cells
                        .iter()
                        .map(|l| {
                            m.subshift()
                                .symbol_index(l)
                                .ok_or_else(|| Error::InvalidWord(format!("cells: no cell {l:?}")))
                        })
                        .collect::<Result<_>>()?,
                ),
                (None, Some(w)) => Forbidden::Word(m.subshift().parse_word(w)?),
                (None, None) => Forbidden::Cells(Vec::new()),
            };
            let a = avoidance_subsystem(&m, &forbidden)?;
            let dim = invariant_set_dimension_enclosure(m.map(), &a.subshift)?;
            let full = invariant_set_dimension_enclosure(m.map(), m.subshift())?;
            let results = json!({
                "system": "catmap",
                "partition": m.subshift().to_json_value(),
                "avoidance": a,
                "cell_depth": a.depth,
                "dimension": interval_json(dim),
                "full_dimension": interval_json(full),
            });
            Ok(Outcome::new(results, Rigor::Certified))
        }
    }
}

fn catmap(c: &ExperimentConfig) -> Result<Outcome> {
    let m = markov_partition_cat()?;
    let t = m.map();
    let max_period = c.max_period.unwrap_or(DEFAULT_CATMAP_PERIOD);
    let mut counts = Vec::new();
    let mut rows = Vec::new();
    for p in 1..=max_period {
        let pts = periodic_points(t, p)?;
        let lucas = t.fixed_point_count(p)?;
        counts.push(json!({"p": p, "count": pts.len(), "trace_formula": lucas}));
        for pt in pts {
            let ((xn, xd), (yn, yd)) = (pt.x(), pt.y());
            rows.push(json!({"p": p, "x_num": xn, "x_den": xd, "y_num": yn, "y_den": yd}));
        }
    }
    let counts_ok = counts.iter().all(|r| r["count"] == r["trace_formula"]);
    let rho = m.spectral_radius(1e-12)?;
    let mut results = json!({
        "matrix": t.matrix(),
        "eigenvalue_exact": t.eigenvalue().to_ascii(),
        "eigenvalue": t.expansion(),
        "partition": {
            "cells": m.cells(),
            "pieces": m.pieces(),
            "subshift": m.subshift().to_json_value(),
            "spectral_radius": interval_json(rho),
        },
        "counts": counts,
        "counts_match": counts_ok,
        "periodic_points": rows,
    });
    let mut rigor = Rigor::Certified;
    let mut ok = counts_ok;
    if let Some(n) = c.samples {
        let check = m.check_coding(n, c.depth.unwrap_or(DEFAULT_CODING_DEPTH), c.seed.unwrap_or(0))?;
        ok &= check.failures == 0;
        results["coding_check"] = serde_json::to_value(&check)?;
        rigor = rigor.and(Rigor::Heuristic);
    }
    Ok(Outcome {
        results,
        rigor,
        certificate_ok: ok,
    })
}

fn limitgeom(c: &ExperimentConfig) -> Result<Outcome> {
    let set = set_named(c.set.as_deref().unwrap_or(""))?;
    let theta = c.theta.clone().unwrap_or_else(|| vec![0, 1]);
    let top = c.depth.unwrap_or(DEFAULT_LIMIT_DEPTH).max(2);
    let conv = limit_geometry_convergence(&set, &theta, 2..=top)?;
    let (lo, hi) = (set.c_min(), set.c_max());
    let within = conv.fitted_ratio.map(|r| lo <= r && r <= hi);
    let results = json!({
        "set": set.label(),
        "affine": set.is_affine(),
        "c_min": lo,
        "c_max": hi,
        "ratio_within_bounds": within,
        "convergence": conv,
    });
    Ok(Outcome::new(results, Rigor::Heuristic))
}
