//! Smoothed densities, gauge functions, regularity checks, and tree
//! contents with their Frostman measures.

mod content;
mod doubling;
mod gauge;
mod kernel;

pub use content::{content_mh_tree, frostman_tree, ContentResult, FrostmanMeasure};
pub use doubling::{check_g1, check_g2, sample_g1_pairs, DoublingReport};
pub use gauge::{
    distorted_gauge, Ball, ConstantGauge, DensityGauge, DistortedGauge, Gauge, MassGauge, NodeTag,
    RadialGauge, TableGauge,
};
pub use kernel::{eps_integral_check, eps_mu_a, lemtec1_check, psi_a, EpsIntegralCheck};
