use std::ops::RangeInclusive;

use super::report::{log_model_fit, ExperimentReport, Rule};
use super::setup::{check_depths, Params, RealizationSetup, EXACT_BRANCHING};
use crate::cantor::{
    example2_multiplier, example3_log_bound, schedule_example2, schedule_example3,
    schedule_sharpness, sharpness_exponent, shrink_source_radii, CantorTree, LevelSchedule, Side,
    Smallness,
};
use crate::capacity::{
    sharpness_indices, theorem1_indices, wolff_capacity_lower, CapacityIndices, WolffSource,
};
use crate::error::{Error, Result};
use crate::gauges::{Ball, ConstantGauge, Gauge, RadialGauge};
use crate::potentials::{wolff_tree, wolff_tree_area_normalized};

fn columns(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn analytic_indices() -> CapacityIndices {
    CapacityIndices::new(2.0 / 3.0, 1.5).expect("(2/3, 3/2) are valid indices")
}

/// Children per node so that `R = M^{-1/2}` keeps `σ_1 = R d_1` within the
/// strict smallness bound.
fn exact_branching(d1: f64) -> usize {
    let needed = (100.0 * d1).powi(2).ceil();
    EXACT_BRANCHING.max(needed as usize)
}

/// Sharpness pair on an abstract tree with `eps = 0`: per depth, the source
/// Wolff partial sum at `(β, q)` (logarithmic growth expected), the target
/// partial sum at `(2/3, 3/2)` (convergent), the source sum at the distortion
/// indices (convergent), and the Wolff capacity at `(β, q)`, whose log-log
/// slope against the fitted `c ln N + b + e/N` model should be
/// `−1/(q'−1)`.
pub fn sharpness_experiment(
    k: f64,
    q: f64,
    depths: RangeInclusive<usize>,
) -> Result<ExperimentReport> {
    check_depths(&depths)?;
    if *depths.start() < 2 {
        return Err(Error::Argument("sharpness fits need depths ≥ 2".into()));
    }
    let idx = sharpness_indices(k, q)?;
    let e = sharpness_exponent(k, q)?;
    let m = exact_branching(example2_multiplier(1).powf(e));
    let max = *depths.end();
    let levels = schedule_sharpness(k, q, max, m, 0.0, Smallness::Strict)?;
    let tree = CantorTree::build(k, &levels, max, Smallness::Strict)?;
    let source = wolff_tree(&tree, Side::Source, &idx, max)?;
    let target = wolff_tree(&tree, Side::Target, &analytic_indices(), max)?;
    let thm1 = wolff_tree(&tree, Side::Source, &theorem1_indices(k)?, max)?;
    let (src_run, tgt_run, thm1_run) = (
        source.running_totals(),
        target.running_totals(),
        thm1.running_totals(),
    );

    let mut rows = Vec::new();
    for n in depths.clone() {
        let cap = wolff_capacity_lower(
            WolffSource::Tree {
                tree: &tree,
                side: Side::Source,
                depth: n,
            },
            &idx,
        )?;
        rows.push(vec![
            n as f64,
            src_run[n - 1],
            source.entries[n - 1].contribution,
            tgt_run[n - 1],
            thm1_run[n - 1],
            cap.value,
        ]);
    }
    let xs: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    let (c, b, _, e_fit) = log_model_fit(&xs, &ys);
    for row in &mut rows {
        let x = row[0];
        row.push(c * x.ln() + b + e_fit / x);
    }
    let tail_rule = |y: &str| Rule::TailFraction {
        x: "depth".into(),
        y: y.into(),
        after: 10.0,
        max_fraction: 0.05,
    };
    ExperimentReport::new(
        "sharpness",
        Params::default()
            .with("K", k)
            .with("q", q)
            .with("beta", idx.alpha)
            .with("d_exponent", e)
            .with("branching", m)
            .with("target_exponent", (k + 1.0) / (k * idx.wolff_exponent()))
            .depths(&depths)
            .into_map(),
        columns(&[
            "depth",
            "source_sum",
            "source_term",
            "target_sum",
            "thm1_source_sum",
            "source_capacity",
            "source_log_model",
        ]),
        rows,
        vec![
            Rule::LogGrowth {
                x: "depth".into(),
                y: "source_sum".into(),
                slope_min: 0.5,
                slope_max: 2.0,
                r2_min: 0.99,
            },
            tail_rule("target_sum"),
            tail_rule("thm1_source_sum"),
            Rule::PowerLaw {
                x: "source_log_model".into(),
                y: "source_capacity".into(),
                expected: -1.0 / idx.wolff_exponent(),
                rel_tol: 0.1,
            },
        ],
    )
}

/// Number of dyadic scales summed by [`example1_gauge_test`].
pub const EXAMPLE1_SCALES: u32 = 1 << 20;

/// Dyadic criterion sum `Σ_{k≥1} (h(2^{−k}) / 2^{−2k/(K+1)})^{1+1/K} ln 2` for
/// `h(r) = r^{2/(K+1)} / log(1/r)^β`, i.e. terms `ln 2 · (k ln 2)^{−s}` with
/// `s = β(1 + 1/K)`, evaluated in log space. Rows sample `k = 2^j`; the
/// condensation ratio `2^{1−s}` read off the term decay classifies the sum.
pub fn example1_gauge_test(k: f64, beta: f64) -> Result<ExperimentReport> {
    if !(k >= 1.0 && k.is_finite()) {
        return Err(Error::Argument(format!("K = {k} must be ≥ 1")));
    }
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::Argument(format!("β = {beta} must be ≥ 0")));
    }
    let s = beta * (1.0 + 1.0 / k);
    let ln2 = std::f64::consts::LN_2;
    let term = |scale: u32| ln2 * (scale as f64 * ln2).powf(-s);
    let mut rows = Vec::new();
    let mut partial = 0.0;
    let mut next = 1u32;
    for scale in 1..=EXAMPLE1_SCALES {
        partial += term(scale);
        if scale == next {
            rows.push(vec![scale as f64, term(scale), partial]);
            next = next.saturating_mul(2);
        }
    }
    ExperimentReport::new(
        "ex1",
        Params::default()
            .with("K", k)
            .with("beta", beta)
            .with("s", s)
            .with("boundary_beta", k / (k + 1.0))
            .with("scales", EXAMPLE1_SCALES)
            .into_map(),
        columns(&["scale", "term", "partial_sum"]),
        rows,
        vec![Rule::Condensation {
            x: "scale".into(),
            y: "term".into(),
            expect_divergent: s <= 1.0,
        }],
    )
}

/// Sum of `h` over the source generating disks of generation `n`, divided by
/// `Π_{m≤n} (1 − eps_m)` (the generation's total area mass), by enumeration.
fn normalized_generation_sum(tree: &CantorTree, n: usize, gauge: &dyn Gauge) -> Result<f64> {
    let mut sum = 0.0;
    for path in tree.paths_at(n)? {
        sum += gauge.h(&Ball::node(tree, Side::Source, &path)?)?;
    }
    let log_area: f64 = tree.levels()[..n]
        .iter()
        .map(|l| l.log_one_minus_eps())
        .sum();
    Ok(sum / log_area.exp())
}

fn relative_error(value: f64, exact: f64) -> f64 {
    if exact == 0.0 {
        value.abs()
    } else {
        (value - exact).abs() / exact.abs()
    }
}

/// Shrinking bound of [`example2_experiment`]: `ln s_N ≤ −(N+1)³`.
pub fn example2_log_bound(n: usize) -> f64 {
    -((n + 1) as f64).powi(3)
}

/// Generation Hausdorff sums on the example-2 source tree: the closed form
/// `ε(s_N) (N+1)^{2K/(K+1)}` for `ε ≡ 1` and `ε(r) = 1/log(1/r)^{power}`,
/// then the same sums after shrinking `R_N` to `ln s_N ≤ −(N+1)³`, with the
/// area-normalized target Wolff capacity at `(2/3, 3/2)` as the `γ` proxy.
pub fn example2_experiment(
    k: f64,
    depths: RangeInclusive<usize>,
    power: f64,
    setup: &RealizationSetup,
) -> Result<ExperimentReport> {
    check_depths(&depths)?;
    if power.is_nan() || power <= 0.0 {
        return Err(Error::Argument(format!(
            "gauge power {power} must be positive"
        )));
    }
    let gamma = 2.0 / (k + 1.0);
    let unit = ConstantGauge { value: 1.0, gamma };
    let eps = RadialGauge::inverse_log_power(power, gamma);
    let max = *depths.end();
    let levels = schedule_example2(k, max, setup.branching, setup.eps, Smallness::Geometric)?;
    let shrunk = shrink_source_radii(k, &levels, example2_log_bound);
    let idx = analytic_indices();
    let rows = depths
        .clone()
        .map(|n| {
            let tree = CantorTree::build(k, &levels, n, Smallness::Geometric)?;
            let thin = CantorTree::build(k, &shrunk, n, Smallness::Geometric)?;
            let growth = ((n + 1) as f64).powf(2.0 * k / (k + 1.0));
            let log_s = tree.log_gen_radius(Side::Source, n);
            let unit_sum = normalized_generation_sum(&tree, n, &unit)?;
            let eps_sum = normalized_generation_sum(&tree, n, &eps)?;
            let eps_closed = eps.eval(log_s.exp()) * growth;
            let thin_sum = normalized_generation_sum(&thin, n, &eps)?;
            let thin_bound = growth * ((n + 1) as f64).powf(-3.0 * power);
            let s = wolff_tree_area_normalized(&thin, Side::Target, &idx, n)?.total();
            let gamma_proxy = s.powf(-1.0 / idx.wolff_exponent()) / 2.0;
            Ok(vec![
                n as f64,
                log_s,
                unit_sum,
                growth,
                relative_error(unit_sum, growth),
                eps_sum,
                eps_closed,
                relative_error(eps_sum, eps_closed),
                thin.log_gen_radius(Side::Source, n),
                thin_sum,
                thin_bound,
                (thin_sum / thin_bound - 1.0).max(0.0),
                gamma_proxy,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    ExperimentReport::new(
        "ex2",
        Params::default()
            .with("K", k)
            .with("gauge", eps.description())
            .with("shrink_bound", "ln s_N <= -(N+1)^3")
            .with("setup", setup)
            .depths(&depths)
            .into_map(),
        columns(&[
            "depth",
            "log_s",
            "unit_sum",
            "unit_closed_form",
            "unit_rel_err",
            "eps_sum",
            "eps_closed_form",
            "eps_rel_err",
            "thin_log_s",
            "thin_sum",
            "thin_bound",
            "thin_excess",
            "target_gamma_proxy",
        ]),
        rows,
        vec![
            Rule::MaxAbs {
                column: "unit_rel_err".into(),
                max: 1e-12,
            },
            Rule::MaxAbs {
                column: "eps_rel_err".into(),
                max: 1e-12,
            },
            Rule::MaxAbs {
                column: "thin_excess".into(),
                max: 1e-12,
            },
            Rule::Decreasing {
                column: "thin_sum".into(),
            },
            Rule::RatioStable {
                column: "target_gamma_proxy".into(),
                rho: 0.1,
            },
        ],
    )
}

/// `ln ε(s)` for `ε(s) = 1 / log(1/s)^{2/a}`, from `ln s`.
fn log_test_gauge(log_s: f64, a: f64) -> f64 {
    if log_s >= 0.0 {
        0.0
    } else {
        -(2.0 / a) * (-log_s).ln()
    }
}

/// Test exponents `a` of the family `ε(s) = 1/log(1/s)^{2/a}`, each with
/// `∫₀¹ ε(s)^a ds/s < ∞`.
pub const EXAMPLE3_GAUGE_EXPONENTS: [f64; 3] = [0.5, 1.0, 2.0];

/// Example-3 schedule (`ln s_N = −e^N` wherever that is binding), all in log
/// space: per depth, the normalized generation sums `ε(s_N)(N+1)^{2K/(K+1)}`
/// for the test gauges (computed as `count · h(s_N) / Π(1−eps)` in logs), the
/// unit-gauge sum, and the last area-normalized target Wolff term at
/// `(2/3, 3/2)`, compared with the example-2 schedule.
pub fn example3_experiment(
    k: f64,
    depths: RangeInclusive<usize>,
    setup: &RealizationSetup,
) -> Result<ExperimentReport> {
    check_depths(&depths)?;
    let max = *depths.end();
    let levels3 = schedule_example3(k, max, setup.branching, setup.eps, Smallness::Geometric)?;
    let levels2 = schedule_example2(k, max, setup.branching, setup.eps, Smallness::Geometric)?;
    let tree3 = CantorTree::build(k, &levels3, max, Smallness::Geometric)?;
    let tree2 = CantorTree::build(k, &levels2, max, Smallness::Geometric)?;
    let idx = analytic_indices();
    let gamma = 2.0 / (k + 1.0);
    let log_area = |levels: &[LevelSchedule], n: usize| -> f64 {
        levels[..n].iter().map(|l| l.log_one_minus_eps()).sum()
    };
    let target_term = |tree: &CantorTree, n: usize| -> Result<f64> {
        let prof = wolff_tree_area_normalized(tree, Side::Target, &idx, n)?;
        Ok(prof.entries.last().map_or(0.0, |e| e.contribution))
    };
    let mut rows = Vec::new();
    for n in depths.clone() {
        let g = tree3.generation(n);
        let log_s = g.log_s;
        let log_growth = (2.0 * k / (k + 1.0)) * ((n + 1) as f64).ln();
        let log_unit = g.log_count + gamma * log_s - log_area(&levels3, n);
        let mut row = vec![
            n as f64,
            log_s,
            log_s - example3_log_bound(n),
            log_unit,
            log_unit - log_growth,
        ];
        for &a in &EXAMPLE3_GAUGE_EXPONENTS {
            let log_sum = log_unit + log_test_gauge(log_s, a);
            row.push(log_sum);
        }
        let t3 = target_term(&tree3, n)?;
        let t2 = target_term(&tree2, n)?;
        row.push(t3);
        row.push(relative_error(t3, t2));
        rows.push(row);
    }
    let mut names = vec![
        "depth",
        "log_s",
        "log_s_minus_bound",
        "log_unit_sum",
        "log_unit_err",
    ];
    let gauge_cols: Vec<String> = EXAMPLE3_GAUGE_EXPONENTS
        .iter()
        .map(|a| format!("log_sum_a{a}"))
        .collect();
    names.extend(gauge_cols.iter().map(String::as_str));
    names.extend(["target_term", "target_rel_diff"]);
    let mut rules = vec![
        Rule::MaxAbs {
            column: "log_unit_err".into(),
            max: 1e-9,
        },
        Rule::MaxAbs {
            column: "target_rel_diff".into(),
            max: 1e-9,
        },
    ];
    rules.extend(
        gauge_cols
            .iter()
            .map(|c| Rule::Decreasing { column: c.clone() }),
    );
    ExperimentReport::new(
        "ex3",
        Params::default()
            .with("K", k)
            .with("gauge_exponents", EXAMPLE3_GAUGE_EXPONENTS)
            .with("setup", setup)
            .depths(&depths)
            .into_map(),
        columns(&names),
        rows,
        rules,
    )
}
