use proptest::prelude::*;
use spectra_lab::cantor::{
    cover_intersection_nonempty, gap_lemma_test, hausdorff_dim, DimensionOptions, GapLemmaStatus, RegularCantorSet,
};
use spectra_lab::cli::{dispatch, emit_plot_data, run, ExperimentConfig, Rigor};
use spectra_lab::models::{affine_horseshoe, HorseshoeSystem, LinearObservable};
use spectra_lab::spectra::{sample_spectrum, CfShift, HeightFunction};
use spectra_lab::{FiniteWord, QuadraticSurd, SubshiftSft};

fn affine(num: i64, den: i64) -> RegularCantorSet {
    RegularCantorSet::affine_pair("affine", QuadraticSurd::from_ratio(num, den)).unwrap()
}

fn arb_ratio() -> impl Strategy<Value = (i64, i64)> {
    (2i64..12).prop_flat_map(|den| (1i64..=den / 2, Just(den)))
}

fn arb_subshift() -> impl Strategy<Value = SubshiftSft> {
    (2usize..=4)
        .prop_flat_map(|k| prop::collection::vec(prop::collection::vec(0u8..=1, k), k))
        .prop_filter_map("empty after pruning", |m| {
            let s = SubshiftSft::from_matrix("random", &m).ok()?.pruned();
            (!s.is_empty()).then_some(s)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn gap_lemma_has_no_false_positives((a, b) in arb_ratio(), (c, d) in arb_ratio(), t in -1.2f64..1.2) {
        let (k1, k2) = (affine(a, b), affine(c, d));
        let o = gap_lemma_test(&k1, &k2, t).unwrap();
        if o.status == GapLemmaStatus::CertifiedNonempty {
            prop_assert!(cover_intersection_nonempty(&k1, &k2, t, 12));
        }
        if o.status == GapLemmaStatus::DisjointHulls {
            prop_assert!(!cover_intersection_nonempty(&k1, &k2, t, 1));
        }
    }

    #[test]
    fn affine_dimension_is_enclosed((a, b) in arb_ratio()) {
        let r = a as f64 / b as f64;
        let exact = 2f64.ln() / -r.ln();
        let coarse = hausdorff_dim(&affine(a, b), DimensionOptions { tol: 1e-3, ..Default::default() }).unwrap();
        let fine = hausdorff_dim(&affine(a, b), DimensionOptions::default()).unwrap();
        prop_assert!(coarse.contains(exact) && fine.contains(exact));
        prop_assert!(fine.width() <= 1e-6);
    }

    #[test]
    fn horseshoe_dimension_adds_up((a, b) in arb_ratio(), (c, d) in arb_ratio()) {
        prop_assume!(2 * a < b && 2 * c < d);
        let h = affine_horseshoe(a as f64 / b as f64, c as f64 / d as f64).unwrap();
        let dim = h.dimension(DimensionOptions::default()).unwrap();
        prop_assert!(dim.lo <= h.dimension_exact() && h.dimension_exact() <= dim.hi);
        let sys = HorseshoeSystem::new(h.clone());
        let s = sample_spectrum(&sys, &LinearObservable::sum(&h), 3).unwrap();
        prop_assert_eq!(s[0].value.clone(), QuadraticSurd::zero());
        prop_assert_eq!(s.last().unwrap().value.clone(), QuadraticSurd::from_integer(2));
    }

    #[test]
    fn avoiding_a_word_never_raises_entropy(s in arb_subshift(), w in prop::collection::vec(0usize..4, 1..4)) {
        prop_assume!(w.iter().all(|&a| a < s.len()));
        let word = FiniteWord::new(w);
        prop_assume!(s.check_word(&word).is_ok());
        let sub = s.avoid_word(&word).unwrap();
        let round = SubshiftSft::from_json(&sub.to_json()).unwrap();
        prop_assert_eq!(round.matrix(), sub.matrix());
        if !sub.is_empty() {
            let h = sub.entropy(1e-12).unwrap();
            let h0 = s.entropy(1e-12).unwrap();
            prop_assert!(h.lo() <= h0.hi() + 1e-12);
        }
    }

    #[test]
    fn reports_are_deterministic(digits in 1u64..=3, period in 1usize..=4) {
        let cfg = ExperimentConfig {
            command: Some("spectrum".into()),
            system: Some("cf".into()),
            digits: Some(digits),
            max_period: Some(period),
            ..Default::default()
        };
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        prop_assert_eq!(a.payload(), b.payload());
        let csv = emit_plot_data(&a, "spectrum-rug").unwrap();
        let samples = a.results["samples"].as_array().unwrap();
        prop_assert_eq!(csv.lines().count(), samples.len() + 1);
        for (line, s) in csv.lines().skip(1).zip(samples) {
            let v: f64 = line.split(',').next().unwrap().parse().unwrap();
            let x = s["value"].as_f64().unwrap();
            prop_assert!((v - x).abs() <= 1e-14 * x.abs());
        }
        let direct = sample_spectrum(&CfShift::new(digits).unwrap(), &HeightFunction, period).unwrap();
        prop_assert_eq!(direct.len(), samples.len());
    }

    #[test]
    fn config_round_trips(max_period in 1usize..40, tol in 1e-9f64..0.5, seed in any::<u64>(), name in "[a-z]{1,8}") {
        let cfg = ExperimentConfig {
            command: Some("dimension".into()),
            max_period: Some(max_period),
            tol: Some(tol),
            seed: Some(seed),
            set: Some(name),
            ..Default::default()
        };
        let text = serde_json::to_string(&cfg).unwrap();
        prop_assert_eq!(ExperimentConfig::from_json(&text).unwrap(), cfg.clone());
        prop_assert!(cfg.validate().is_empty());
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        v["unexpected"] = serde_json::json!(1);
        prop_assert!(ExperimentConfig::from_json(&v.to_string()).is_err());
    }
}

#[test]
fn heuristic_parts_make_reports_heuristic() {
    let run = |json: &str| dispatch(&ExperimentConfig::from_json(json).unwrap()).unwrap().rigor;
    assert_eq!(run(r#"{"command":"dimension","K":"midthird"}"#), Rigor::Heuristic);
    assert_eq!(run(r#"{"command":"thickness","K":"midthird"}"#), Rigor::Certified);
    assert_eq!(run(r#"{"command":"catmap","max_period":2}"#), Rigor::Certified);
    assert_eq!(run(r#"{"command":"catmap","max_period":2,"samples":20}"#), Rigor::Heuristic);
    assert_eq!(run(r#"{"command":"spectrum","max_period":2}"#), Rigor::Heuristic);
}
