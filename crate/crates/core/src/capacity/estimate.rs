use serde::{Deserialize, Serialize};

use super::CapacityIndices;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    LowerBound,
    ComparabilityProxy,
}

/// Which supremum an estimate approximates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// `sup μ(F)` over measures with `Ẇ^μ ≤ 1` on `F`.
    Wolff,
    /// `sup μ(F)^p` over measures with `‖I_α μ‖_{p'} ≤ 1`.
    Definitional,
    /// `sup μ(F)` over measures with linear growth ≤ 1 and `c²_μ ≤ 1`.
    Curvature,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    /// The quantity the measure was normalized by (potential sup, `L^{p'}`
    /// norm, or binding constraint).
    pub sup: f64,
    pub query_set: String,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityEstimate {
    pub value: f64,
    pub direction: Direction,
    pub alpha: Option<f64>,
    pub p: Option<f64>,
    pub homogeneity: Option<f64>,
    pub convention: Convention,
    pub normalization: Normalization,
    /// Fitted log-slope when the potential diverged (value is then 0).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub divergence_rate: Option<f64>,
}

impl CapacityEstimate {
    pub(crate) fn with_indices(
        value: f64,
        direction: Direction,
        idx: &CapacityIndices,
        convention: Convention,
        normalization: Normalization,
    ) -> Self {
        Self {
            value,
            direction,
            alpha: Some(idx.alpha),
            p: Some(idx.p),
            homogeneity: Some(idx.homogeneity()),
            convention,
            normalization,
            divergence_rate: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("capacity estimate serializes")
    }
}
