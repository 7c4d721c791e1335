use rayon::prelude::*;

use crate::geom::Point;
use crate::measure::PlanarMeasure;

/// `sup μ(B(x, 2^k)) / 2^k` over `points × [k_min, k_max]`; the atom
/// locations are used when `points` is empty.
pub fn linear_growth_constant(
    measure: &PlanarMeasure,
    k_min: i32,
    k_max: i32,
    points: &[Point],
) -> f64 {
    let owned: Vec<Point>;
    let points = if points.is_empty() {
        owned = measure.atoms().iter().map(|a| a.point).collect();
        &owned
    } else {
        points
    };
    points
        .par_iter()
        .map(|&x| {
            let balls = measure.ball_profile(x);
            (k_min..=k_max)
                .map(|k| {
                    let r = 2f64.powi(k);
                    balls.mass_within(r) / r
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

/// `Σ_k θ_μ(x, 2^k)²` with `θ_μ(x, r) = μ(B(x, r)) / r`.
pub fn dyadic_curvature_proxy(measure: &PlanarMeasure, x: Point, k_min: i32, k_max: i32) -> f64 {
    let balls = measure.ball_profile(x);
    (k_min..=k_max)
        .map(|k| {
            let r = 2f64.powi(k);
            (balls.mass_within(r) / r).powi(2)
        })
        .sum()
}
