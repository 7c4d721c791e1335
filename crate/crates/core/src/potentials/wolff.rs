use rayon::prelude::*;

use super::profile::{PotentialProfile, ScaleEntry};
use crate::cantor::{CantorTree, Side};
use crate::capacity::CapacityIndices;
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::measure::{BallProfile, PlanarMeasure};

/// `((mass / r^{2−αp}))^{p'−1}` evaluated in log space.
fn wolff_term(idx: &CapacityIndices, log_mass: f64, log_radius: f64) -> f64 {
    (idx.wolff_exponent() * (log_mass - idx.homogeneity() * log_radius)).exp()
}

/// Tree form of the Wolff potential: one term per generation,
/// `(m_N / r_N^{2−αp})^{p'−1}` with `r_N = s_N` (source) or `t_N` (target).
///
/// Generations `1..=depth` are listed; a bare root (`depth = 0`) contributes
/// its own generation-0 term. Level-uniform schedules make the value the same
/// along every root-to-leaf path.
pub fn wolff_tree(
    tree: &CantorTree,
    side: Side,
    idx: &CapacityIndices,
    depth: usize,
) -> Result<PotentialProfile> {
    if depth > tree.depth() {
        return Err(Error::Depth {
            requested: depth,
            available: tree.depth(),
        });
    }
    let first = usize::from(depth > 0);
    let entries = (first..=depth)
        .map(|n| {
            let g = tree.generation(n);
            ScaleEntry {
                scale: n as i64,
                contribution: wolff_term(idx, g.log_mass, tree.log_gen_radius(side, n)),
            }
        })
        .collect();
    Ok(PotentialProfile::new(
        idx.alpha,
        idx.p,
        format!("tree/{}", side.as_str()),
        entries,
    ))
}

/// [`wolff_tree`] with node masses `(R_1⋯R_n)²` from
/// [`CantorTree::log_area_mass`] in place of the tail-inclusive masses.
pub fn wolff_tree_area_normalized(
    tree: &CantorTree,
    side: Side,
    idx: &CapacityIndices,
    depth: usize,
) -> Result<PotentialProfile> {
    if depth > tree.depth() {
        return Err(Error::Depth {
            requested: depth,
            available: tree.depth(),
        });
    }
    let first = usize::from(depth > 0);
    let entries = (first..=depth)
        .map(|n| ScaleEntry {
            scale: n as i64,
            contribution: wolff_term(idx, tree.log_area_mass(n), tree.log_gen_radius(side, n)),
        })
        .collect();
    Ok(PotentialProfile::new(
        idx.alpha,
        idx.p,
        format!("tree-area/{}", side.as_str()),
        entries,
    ))
}

/// The tree sum recomputed from the explicit ancestors of the leaf at
/// `path`, without using the per-generation tables.
pub fn wolff_tree_along_path(
    tree: &CantorTree,
    side: Side,
    idx: &CapacityIndices,
    path: &[u32],
) -> Result<f64> {
    let first = usize::from(!path.is_empty());
    (first..=path.len())
        .map(|n| {
            let node = tree.node(&path[..n])?;
            Ok(wolff_term(idx, node.log_mass, node.log_radius(side)))
        })
        .sum()
}

/// Dyadic Wolff sum `Σ_{k=k_min}^{k_max} (μ(B(x,2^k)) / 2^{k(2−αp)})^{p'−1}`
/// over closed balls, listed from `k_max` down to `k_min`, plus a sub-scale
/// tail that spreads `μ(B(x, 2^{k_min}))` uniformly over that ball:
/// `∫₀^ρ (m r²/ρ² · r^{−(2−αp)})^{p'−1} dr/r = (m/ρ^{2−αp})^{p'−1} / (αp (p'−1))`.
pub fn wolff_dyadic(
    measure: &PlanarMeasure,
    x: Point,
    idx: &CapacityIndices,
    k_min: i32,
    k_max: i32,
) -> Result<PotentialProfile> {
    if measure.is_empty() {
        return Err(Error::Measure("Wolff potential of an empty measure".into()));
    }
    if k_min > k_max {
        return Err(Error::Argument(format!(
            "k_min = {k_min} exceeds k_max = {k_max}"
        )));
    }
    Ok(wolff_dyadic_profile(
        &measure.ball_profile(x),
        idx,
        k_min,
        k_max,
    ))
}

pub(crate) fn wolff_dyadic_profile(
    balls: &BallProfile,
    idx: &CapacityIndices,
    k_min: i32,
    k_max: i32,
) -> PotentialProfile {
    let e = idx.wolff_exponent();
    let h = idx.homogeneity();
    let entries = (k_min..=k_max)
        .rev()
        .map(|k| {
            let r = 2f64.powi(k);
            let m = balls.mass_within(r);
            ScaleEntry {
                scale: k as i64,
                contribution: if m > 0.0 {
                    (m / r.powf(h)).powf(e)
                } else {
                    0.0
                },
            }
        })
        .collect();
    let rho = 2f64.powi(k_min);
    let m0 = balls.mass_within(rho);
    let tail = if m0 > 0.0 {
        (m0 / rho.powf(h)).powf(e) / ((2.0 - h) * e)
    } else {
        0.0
    };
    PotentialProfile::new(idx.alpha, idx.p, "dyadic", entries).with_tail(tail)
}

/// [`wolff_dyadic`] at many points, evaluated in parallel; output order
/// follows `points`.
pub fn wolff_dyadic_many(
    measure: &PlanarMeasure,
    points: &[Point],
    idx: &CapacityIndices,
    k_min: i32,
    k_max: i32,
) -> Result<Vec<PotentialProfile>> {
    if measure.is_empty() {
        return Err(Error::Measure("Wolff potential of an empty measure".into()));
    }
    if k_min > k_max {
        return Err(Error::Argument(format!(
            "k_min = {k_min} exceeds k_max = {k_max}"
        )));
    }
    Ok(points
        .par_iter()
        .map(|&x| wolff_dyadic_profile(&measure.ball_profile(x), idx, k_min, k_max))
        .collect())
}
