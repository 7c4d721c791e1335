use super::estimate::{CapacityEstimate, Convention, Direction, Normalization};
use super::CapacityIndices;
use crate::cantor::{CantorTree, Side};
use crate::error::{Error, Result};
use crate::measure::PlanarMeasure;
use crate::potentials::{wolff_dyadic_many, wolff_tree, QuerySet};

/// What the Wolff potential is evaluated on.
#[derive(Debug, Clone, Copy)]
pub enum WolffSource<'a> {
    /// The per-generation tree formula (path independent, so the sup over
    /// leaves is the single tree value).
    Tree {
        tree: &'a CantorTree,
        side: Side,
        depth: usize,
    },
    /// Dyadic sums of a discrete measure at every query point.
    Measure {
        measure: &'a PlanarMeasure,
        query: &'a QuerySet,
        k_min: i32,
        k_max: i32,
        seed: Option<u64>,
    },
}

/// `μ(F) · S^{−1/(p'−1)}` with `S = sup_query Ẇ^μ_{α,p}`: the measure rescaled
/// so that its Wolff potential is at most one on the query set. Mass scaling
/// cancels exactly. A divergent potential yields 0 with its rate attached.
pub fn wolff_capacity_lower(
    source: WolffSource<'_>,
    idx: &CapacityIndices,
) -> Result<CapacityEstimate> {
    let (mass, sup, rate, query_set, seed) = match source {
        WolffSource::Tree { tree, side, depth } => {
            let prof = wolff_tree(tree, side, idx, depth)?;
            let rate = prof.divergence.map(|d| d.log_slope);
            (
                tree.total_mass(),
                prof.total(),
                rate,
                format!("tree-formula/{}/depth{depth}", side.as_str()),
                tree.seed(),
            )
        }
        WolffSource::Measure {
            measure,
            query,
            k_min,
            k_max,
            seed,
        } => {
            if query.points.is_empty() {
                return Err(Error::Argument("empty query set".into()));
            }
            let profiles = wolff_dyadic_many(measure, &query.points, idx, k_min, k_max)?;
            let sup = profiles.iter().map(|p| p.total()).fold(0.0, f64::max);
            let rate = profiles
                .iter()
                .filter_map(|p| p.divergence.map(|d| d.log_slope))
                .reduce(f64::max);
            (measure.total_mass(), sup, rate, query.id.clone(), seed)
        }
    };
    let normalization = Normalization {
        sup,
        query_set,
        seed,
    };
    if !sup.is_finite() {
        let mut est = CapacityEstimate::with_indices(
            0.0,
            Direction::LowerBound,
            idx,
            Convention::Wolff,
            normalization,
        );
        est.divergence_rate = rate;
        return Ok(est);
    }
    if sup <= 0.0 {
        return Err(Error::Argument(
            "Wolff potential vanishes on the query set; widen the scale range".into(),
        ));
    }
    let value = mass * sup.powf(-1.0 / idx.wolff_exponent());
    Ok(CapacityEstimate::with_indices(
        value,
        Direction::LowerBound,
        idx,
        Convention::Wolff,
        normalization,
    ))
}

/// Best [`wolff_capacity_lower`] over a family of trial measures supported on
/// the set. Enlarging the family (for a larger set) can only raise it.
pub fn wolff_capacity_lower_best(
    trials: &[PlanarMeasure],
    query: &QuerySet,
    idx: &CapacityIndices,
    k_min: i32,
    k_max: i32,
) -> Result<CapacityEstimate> {
    let mut best: Option<CapacityEstimate> = None;
    for measure in trials {
        let est = wolff_capacity_lower(
            WolffSource::Measure {
                measure,
                query,
                k_min,
                k_max,
                seed: None,
            },
            idx,
        )?;
        if best.as_ref().is_none_or(|b| est.value > b.value) {
            best = Some(est);
        }
    }
    best.ok_or_else(|| Error::Argument("no trial measures".into()))
}
