use rayon::prelude::*;
use std::ops::RangeInclusive;

use super::report::{ExperimentReport, Rule};
use super::setup::{check_depths, Params, RealizationSetup};
use crate::cantor::{realize_measure, schedule_example2, CantorTree, Side, Smallness};
use crate::capacity::{
    melnikov_gamma_lower, teocap2_indices, theorem1_indices, wolff_capacity_lower, CapacityIndices,
    WolffSource,
};
use crate::error::Result;
use crate::gauges::{content_mh_tree, distorted_gauge, DensityGauge};
use crate::potentials::{linear_growth_constant, menger_curvature};

/// Ratio-stability threshold: `min r_N ≥ RATIO_RHO · max r_N`.
pub const RATIO_RHO: f64 = 0.1;

fn realized_example2(k: f64, depth: usize, setup: &RealizationSetup) -> Result<CantorTree> {
    let levels = schedule_example2(k, depth, setup.branching, setup.eps, Smallness::Geometric)?;
    CantorTree::build(k, &levels, depth, Smallness::Geometric)?.realize_centers(setup.seed)
}

fn diameter(tree: &CantorTree, side: Side) -> f64 {
    2.0 * tree.log_gen_radius(side, 0).exp()
}

fn ratio_rule() -> Vec<Rule> {
    vec![Rule::RatioStable {
        column: "ratio".into(),
        rho: RATIO_RHO,
    }]
}

/// Per depth `N`: the source Wolff capacity at the distortion indices over
/// `diam^{2/(K+1)}`, against the Melnikov proxy for `γ` of a target
/// realization over its diameter; `r_N = lhs / rhs^{2K/(K+1)}`.
pub fn verify_theorem1(
    k: f64,
    depths: RangeInclusive<usize>,
    a: f64,
    setup: &RealizationSetup,
) -> Result<ExperimentReport> {
    check_depths(&depths)?;
    let idx = theorem1_indices(k)?;
    let rows = depths
        .clone()
        .into_par_iter()
        .map(|n| {
            let tree = realized_example2(k, n, setup)?;
            let lhs_est = wolff_capacity_lower(
                WolffSource::Tree {
                    tree: &tree,
                    side: Side::Source,
                    depth: n,
                },
                &idx,
            )?;
            let lhs = lhs_est.value / diameter(&tree, Side::Source).powf(idx.homogeneity());
            let leaves = tree.node_count(n).round() as usize;
            let spl = setup.samples_per_leaf(leaves);
            let mu = realize_measure(&tree, Side::Target, spl, setup.seed)?;
            let fine = tree.log_gen_radius(Side::Target, n).exp() / (spl as f64).sqrt();
            let growth = linear_growth_constant(&mu, fine.log2().floor() as i32, 1, &[]);
            let curvature = menger_curvature(&mu, setup.triples, setup.seed)?;
            let gamma_est = melnikov_gamma_lower(&mu, &curvature, growth)?;
            let rhs = gamma_est.value / diameter(&tree, Side::Target);
            let ratio = lhs / rhs.powf(2.0 * k / (k + 1.0));
            Ok(vec![
                n as f64,
                lhs,
                lhs_est.normalization.sup,
                rhs,
                growth,
                curvature.sup_pointwise,
                mu.len() as f64,
                ratio,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    ExperimentReport::new(
        "thm1",
        Params::default()
            .with("K", k)
            .with("a", a)
            .with("alpha", idx.alpha)
            .with("p", idx.p)
            .with("setup", setup)
            .depths(&depths)
            .into_map(),
        [
            "depth",
            "source_capacity",
            "source_wolff_sup",
            "target_gamma_proxy",
            "target_growth",
            "target_sup_curvature",
            "target_atoms",
            "ratio",
        ]
        .map(String::from)
        .to_vec(),
        rows,
        ratio_rule(),
    )
}

/// Per depth `N`: source Wolff capacity at the distorted indices of
/// `(1/p, p)` over `diam^{t'}` against the target Wolff capacity at
/// `(1/p, p)` over `diam`; `r_N = lhs / rhs^{2K/(K+1)}`. Tree formulas only.
pub fn verify_teocap_a(
    k: f64,
    p: f64,
    depths: RangeInclusive<usize>,
    setup: &RealizationSetup,
) -> Result<ExperimentReport> {
    check_depths(&depths)?;
    let target_idx = CapacityIndices::new(1.0 / p, p)?.with_k(k);
    let distorted = teocap2_indices(1.0 / p, p, k)?;
    let source_idx = distorted.source;
    let levels = schedule_example2(
        k,
        *depths.end(),
        setup.branching,
        setup.eps,
        Smallness::Geometric,
    )?;
    let rows = depths
        .clone()
        .map(|n| {
            let tree = CantorTree::build(k, &levels, n, Smallness::Geometric)?;
            let est = |side: Side, idx: &CapacityIndices| {
                wolff_capacity_lower(
                    WolffSource::Tree {
                        tree: &tree,
                        side,
                        depth: n,
                    },
                    idx,
                )
            };
            let lhs = est(Side::Source, &source_idx)?.value
                / diameter(&tree, Side::Source).powf(source_idx.homogeneity());
            let rhs = est(Side::Target, &target_idx)?.value
                / diameter(&tree, Side::Target).powf(target_idx.homogeneity());
            Ok(vec![n as f64, lhs, rhs, lhs / rhs.powf(distorted.power)])
        })
        .collect::<Result<Vec<_>>>()?;
    ExperimentReport::new(
        "teocap",
        Params::default()
            .with("K", k)
            .with("p", p)
            .with("beta", source_idx.alpha)
            .with("q", source_idx.p)
            .with("t_prime", distorted.t_prime)
            .with("setup", setup)
            .depths(&depths)
            .into_map(),
        ["depth", "source_capacity", "target_capacity", "ratio"]
            .map(String::from)
            .to_vec(),
        rows,
        ratio_rule(),
    )
}

/// Per depth `N`: `M^{h₀}(E)` for `h₀ = r ε_{ν,a}` on source node balls
/// against `M^h(φE)` for the pulled-back gauge on target node balls, with
/// `ν` the source realization (one atom per leaf);
/// `r_N = M^{h₀}(E) / M^h(φE)^{(K+1)/(2K)}`.
pub fn main_lemma_experiment(
    k: f64,
    depths: RangeInclusive<usize>,
    a: f64,
    setup: &RealizationSetup,
) -> Result<ExperimentReport> {
    check_depths(&depths)?;
    let rows = depths
        .clone()
        .into_par_iter()
        .map(|n| {
            let tree = realized_example2(k, n, setup)?;
            let nu = realize_measure(&tree, Side::Source, 1, setup.seed)?;
            let h0 = DensityGauge {
                measure: nu.clone(),
                a,
            };
            let source = content_mh_tree(&tree, Side::Source, &h0)?.value;
            let gauge = distorted_gauge(&tree, nu, a, k)?;
            let target = content_mh_tree(&tree, Side::Target, &gauge)?.value;
            let ratio = source / target.powf((k + 1.0) / (2.0 * k));
            Ok(vec![n as f64, source, target, ratio])
        })
        .collect::<Result<Vec<_>>>()?;
    ExperimentReport::new(
        "mainlemma",
        Params::default()
            .with("K", k)
            .with("a", a)
            .with("setup", setup)
            .depths(&depths)
            .into_map(),
        ["depth", "source_content", "target_content", "ratio"]
            .map(String::from)
            .to_vec(),
        rows,
        ratio_rule(),
    )
}
