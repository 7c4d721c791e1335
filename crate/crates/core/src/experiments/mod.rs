//! Depth sweeps that assemble trees, potentials, estimators and gauges into
//! reports whose verdicts are pure functions of their rows.

mod report;
mod series;
mod setup;
mod theorem;

pub use report::{
    evaluate, log_model_fit, ExperimentReport, Rule, RuleOutcome, Verdict, CONDENSATION_DIVERGENCE,
};
pub use series::{
    example1_gauge_test, example2_experiment, example2_log_bound, example3_experiment,
    sharpness_experiment, EXAMPLE1_SCALES, EXAMPLE3_GAUGE_EXPONENTS,
};
pub use setup::{RealizationSetup, EXACT_BRANCHING};
pub use theorem::{main_lemma_experiment, verify_teocap_a, verify_theorem1, RATIO_RHO};
