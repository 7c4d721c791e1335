use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use crate::error::{Error, Result};

/// Planar realization parameters shared by the pipeline experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealizationSetup {
    /// Children per node, `M`.
    pub branching: usize,
    /// Area defect per level, `M R² = 1 − eps`.
    pub eps: f64,
    pub seed: u64,
    /// Shallow trees get `ceil(min_atoms / leaves)` uniform atoms per leaf.
    pub min_atoms: usize,
    /// Monte Carlo triples for Menger curvature.
    pub triples: usize,
}

impl Default for RealizationSetup {
    fn default() -> Self {
        Self {
            branching: 4,
            eps: 0.36,
            seed: 1,
            min_atoms: 64,
            triples: 200_000,
        }
    }
}

impl RealizationSetup {
    pub fn samples_per_leaf(&self, leaves: usize) -> usize {
        self.min_atoms.div_ceil(leaves.max(1)).max(1)
    }
}

/// Children per node of the abstract (never enumerated) trees used for the
/// exact series: `R = 10^{-3}` with no area defect.
pub const EXACT_BRANCHING: usize = 1_000_000;

pub(crate) fn check_depths(depths: &RangeInclusive<usize>) -> Result<()> {
    if depths.is_empty() {
        return Err(Error::Argument(format!(
            "empty depth range {}..{}",
            depths.start(),
            depths.end()
        )));
    }
    Ok(())
}

#[derive(Default)]
pub(crate) struct Params(BTreeMap<String, Value>);

impl Params {
    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.0.insert(
            key.to_string(),
            serde_json::to_value(value).expect("parameter serializes"),
        );
        self
    }

    pub fn depths(self, depths: &RangeInclusive<usize>) -> Self {
        self.with("depth_min", depths.start())
            .with("depth_max", depths.end())
    }

    pub fn into_map(self) -> BTreeMap<String, Value> {
        self.0
    }
}
