use super::estimate::{CapacityEstimate, Convention, Direction, Normalization};
use crate::error::{Error, Result};
use crate::measure::PlanarMeasure;
use crate::potentials::CurvatureEstimate;

/// Lower proxy for analytic capacity: rescale `μ` by
/// `c = min(1/growth, (sup c²_μ)^{−1/2})` so that it has linear growth at most
/// one and pointwise curvature at most one, and return `c · μ(F)`.
pub fn melnikov_gamma_lower(
    measure: &PlanarMeasure,
    curvature: &CurvatureEstimate,
    growth: f64,
) -> Result<CapacityEstimate> {
    if !(growth.is_finite() && growth > 0.0) {
        return Err(Error::Argument(format!(
            "linear growth constant {growth} must be finite and positive; realize the measure with more samples per leaf"
        )));
    }
    let sup = curvature.sup_pointwise;
    if !(sup.is_finite() && sup >= 0.0) {
        return Err(Error::Argument(format!(
            "pointwise curvature {sup} must be finite"
        )));
    }
    let by_growth = 1.0 / growth;
    let by_curvature = if sup > 0.0 {
        sup.sqrt().recip()
    } else {
        f64::INFINITY
    };
    let c = by_growth.min(by_curvature);
    Ok(CapacityEstimate {
        value: c * measure.total_mass(),
        direction: Direction::ComparabilityProxy,
        alpha: None,
        p: None,
        homogeneity: Some(1.0),
        convention: Convention::Curvature,
        normalization: Normalization {
            sup: 1.0 / c,
            query_set: if by_growth <= by_curvature {
                "linear-growth".into()
            } else {
                "pointwise-curvature".into()
            },
            seed: Some(curvature.seed),
        },
        divergence_rate: None,
    })
}
