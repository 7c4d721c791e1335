use std::path::PathBuf;

use cantor_capacity::experiments::{
    evaluate, example1_gauge_test, example2_experiment, example3_experiment, log_model_fit,
    main_lemma_experiment, sharpness_experiment, verify_teocap_a, ExperimentReport,
    RealizationSetup, Rule, EXAMPLE1_SCALES,
};

fn cols(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

/// Compares against a stored file; `UPDATE_GOLDEN=1` rewrites it.
fn check_golden(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap();
    assert_eq!(actual, expected, "{name} differs from its golden copy");
}

#[test]
fn ratio_stable_rule() {
    let c = cols(&["ratio"]);
    let rows = vec![vec![1.0], vec![0.5], vec![0.2]];
    let rule = |rho| Rule::RatioStable {
        column: "ratio".into(),
        rho,
    };
    let v = evaluate(&c, &rows, &[rule(0.2)]).unwrap();
    assert!(v.pass);
    assert!((v.outcomes[0].statistic - 0.2).abs() < 1e-15);
    assert!(!evaluate(&c, &rows, &[rule(0.21)]).unwrap().pass);
    let with_zero = vec![vec![1.0], vec![0.0]];
    assert!(!evaluate(&c, &with_zero, &[rule(0.0)]).unwrap().pass);
}

#[test]
fn log_model_fit_recovers_exact_coefficients() {
    let xs: Vec<f64> = (2..40).map(f64::from).collect();
    let ys: Vec<f64> = xs.iter().map(|x| 1.5 * x.ln() - 0.25 + 0.75 / x).collect();
    let (c, b, r2, e) = log_model_fit(&xs, &ys);
    assert!((c - 1.5).abs() < 1e-9);
    assert!((b + 0.25).abs() < 1e-9);
    assert!((e - 0.75).abs() < 1e-9);
    assert!(r2 > 1.0 - 1e-12);
}

#[test]
fn log_growth_and_power_law_rules() {
    let c = cols(&["x", "y", "z"]);
    let rows: Vec<Vec<f64>> = (2..30)
        .map(|i| {
            let x = i as f64;
            vec![x, 0.8 * x.ln() + 2.0, 3.0 * x.powf(-2.0)]
        })
        .collect();
    let growth = Rule::LogGrowth {
        x: "x".into(),
        y: "y".into(),
        slope_min: 0.5,
        slope_max: 1.0,
        r2_min: 0.99,
    };
    let power = |expected| Rule::PowerLaw {
        x: "x".into(),
        y: "z".into(),
        expected,
        rel_tol: 0.01,
    };
    let v = evaluate(&c, &rows, &[growth, power(-2.0)]).unwrap();
    assert!(v.pass);
    assert!((v.outcomes[1].statistic + 2.0).abs() < 1e-12);
    assert!(!evaluate(&c, &rows, &[power(-1.9)]).unwrap().pass);
}

#[test]
fn tail_fraction_max_abs_and_decreasing_rules() {
    let c = cols(&["n", "sum", "err"]);
    let rows = vec![
        vec![1.0, 0.5, 1e-13],
        vec![5.0, 0.9, -2e-13],
        vec![20.0, 1.0, 0.0],
    ];
    let tail = |max_fraction| Rule::TailFraction {
        x: "n".into(),
        y: "sum".into(),
        after: 10.0,
        max_fraction,
    };
    let v = evaluate(&c, &rows, &[tail(0.11)]).unwrap();
    assert!(v.pass);
    assert!((v.outcomes[0].statistic - 0.1).abs() < 1e-12);
    assert!(!evaluate(&c, &rows, &[tail(0.09)]).unwrap().pass);

    let max_abs = |max| Rule::MaxAbs {
        column: "err".into(),
        max,
    };
    assert!(evaluate(&c, &rows, &[max_abs(2e-13)]).unwrap().pass);
    assert!(!evaluate(&c, &rows, &[max_abs(1e-13)]).unwrap().pass);

    let dec = |column: &str| Rule::Decreasing {
        column: column.into(),
    };
    assert!(!evaluate(&c, &rows, &[dec("sum")]).unwrap().pass);
    let falling = vec![vec![3.0, 0.0, 0.0], vec![2.0, 0.0, 0.0]];
    assert!(evaluate(&c, &falling, &[dec("n")]).unwrap().pass);
}

#[test]
fn unknown_columns_and_ragged_rows_are_errors() {
    let c = cols(&["a"]);
    let rule = Rule::MaxAbs {
        column: "b".into(),
        max: 1.0,
    };
    assert!(evaluate(&c, &[vec![1.0]], &[rule]).is_err());
    let ragged = ExperimentReport::new("x", Default::default(), c, vec![vec![1.0, 2.0]], vec![]);
    assert!(ragged.is_err());
}

#[test]
fn example1_classifies_both_sides_of_the_boundary() {
    let k = 2.0;
    let boundary = k / (k + 1.0);
    for i in 1..=10 {
        let delta = 0.01 * i as f64;
        for (beta, divergent) in [(boundary - delta, true), (boundary + delta, false)] {
            let r = example1_gauge_test(k, beta).unwrap();
            assert!(r.passed(), "{}", r.summary());
            let s = beta * (1.0 + 1.0 / k);
            let ratio = r.verdict.outcomes[0].statistic;
            assert!((ratio - 2f64.powf(1.0 - s)).abs() < 1e-9);
            assert_eq!(ratio >= 1.0 - 1e-9, divergent);
        }
    }
    let at = example1_gauge_test(k, boundary).unwrap();
    assert!(at.passed());
    let last = at.rows.last().unwrap();
    assert_eq!(last[0], EXAMPLE1_SCALES as f64);
    let harmonic = (1..=EXAMPLE1_SCALES).map(|j| 1.0 / j as f64).sum::<f64>();
    assert!((last[2] - harmonic).abs() < 1e-9 * harmonic);
}

#[test]
fn example1_rejects_bad_arguments() {
    assert!(example1_gauge_test(0.5, 0.3).is_err());
    assert!(example1_gauge_test(2.0, -0.1).is_err());
}

#[test]
fn sharpness_report_passes_with_logarithmic_growth() {
    let r = sharpness_experiment(2.0, 3.0, 8..=64).unwrap();
    assert!(r.passed(), "{}", r.summary());
    let terms = r.column("source_term").unwrap();
    let depths = r.column("depth").unwrap();
    for (n, t) in depths.iter().zip(&terms) {
        assert!((t * (n + 1.0) - 1.0).abs() < 1e-9, "depth {n}: {t}");
    }
}

#[test]
fn example2_report_matches_closed_forms() {
    let setup = RealizationSetup::default();
    let r = example2_experiment(2.0, 1..=4, 1.0, &setup).unwrap();
    assert!(r.passed(), "{}", r.summary());
    let growth = r.column("unit_closed_form").unwrap();
    for (i, g) in growth.iter().enumerate() {
        let expected = ((i + 2) as f64).powf(4.0 / 3.0);
        assert!((g - expected).abs() < 1e-12 * expected);
    }
    let thin = r.column("thin_sum").unwrap();
    assert!(thin.last().unwrap() < &thin[0]);
}

#[test]
fn example3_report_tracks_its_radius_law() {
    let setup = RealizationSetup::default();
    let r = example3_experiment(2.0, 1..=8, &setup).unwrap();
    assert!(r.passed(), "{}", r.summary());
    let log_s = r.column("log_s").unwrap();
    for (i, v) in log_s.iter().enumerate().skip(1) {
        let n = (i + 1) as f64;
        assert!((v + n.exp()).abs() < 1e-9 * n.exp(), "depth {n}: {v}");
    }
}

#[test]
fn main_lemma_ratio_is_stable() {
    let setup = RealizationSetup::default();
    let r = main_lemma_experiment(2.0, 2..=4, 0.1, &setup).unwrap();
    assert!(r.passed(), "{}", r.summary());
    for ratio in r.column("ratio").unwrap() {
        assert!(ratio > 0.0 && ratio.is_finite());
    }
}

#[test]
fn stored_verdicts_match_recomputation() {
    let setup = RealizationSetup::default();
    let reports = [
        example1_gauge_test(2.0, 0.5).unwrap(),
        example2_experiment(2.0, 1..=3, 1.0, &setup).unwrap(),
        verify_teocap_a(2.0, 2.0, 2..=3, &setup).unwrap(),
    ];
    for r in &reports {
        assert_eq!(r.recompute_verdict().unwrap(), r.verdict);
        let parsed: ExperimentReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(parsed.recompute_verdict().unwrap(), r.verdict);
    }
}

#[test]
fn tampered_rows_change_the_verdict() {
    let setup = RealizationSetup::default();
    let mut r = example2_experiment(2.0, 1..=3, 1.0, &setup).unwrap();
    assert!(r.passed());
    let j = r.columns.iter().position(|c| c == "unit_rel_err").unwrap();
    r.rows[1][j] = 1e-6;
    assert!(!r.recompute_verdict().unwrap().pass);
}

#[test]
fn reports_are_deterministic() {
    let setup = RealizationSetup::default();
    let a = verify_teocap_a(2.0, 2.0, 2..=3, &setup).unwrap();
    let b = verify_teocap_a(2.0, 2.0, 2..=3, &setup).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.to_csv(), b.to_csv());
}

#[test]
fn csv_layout() {
    let r = example1_gauge_test(2.0, 0.5).unwrap();
    let csv = r.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("scale,term,partial_sum"));
    assert!(lines.next().unwrap().starts_with("1,"));
    assert_eq!(csv.lines().count(), r.rows.len() + 1);
}

#[test]
fn golden_reports() {
    let setup = RealizationSetup::default();
    check_golden(
        "ex1_K2_beta0.5.csv",
        &example1_gauge_test(2.0, 0.5).unwrap().to_csv(),
    );
    let ex2 = example2_experiment(2.0, 1..=4, 1.0, &setup).unwrap();
    check_golden("ex2_K2_depths1-4.csv", &ex2.to_csv());
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(golden("ex2_K2_depths1-4.json"), ex2.to_json()).unwrap();
    }
    let stored: ExperimentReport =
        serde_json::from_str(&std::fs::read_to_string(golden("ex2_K2_depths1-4.json")).unwrap())
            .unwrap();
    assert_eq!(stored.recompute_verdict().unwrap(), stored.verdict);
    assert_eq!(stored.rows.len(), ex2.rows.len());
    for (a, b) in stored.rows.iter().zip(&ex2.rows) {
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= 1e-12 * y.abs().max(1e-300), "{x} vs {y}");
        }
    }
}
