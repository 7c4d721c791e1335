use crate::error::{Error, Result};
use crate::geom::Point;
use crate::measure::PlanarMeasure;

/// `I_α μ(x) = Σ wᵢ / |x − yᵢ|^{2−α}`; `+∞` when `x` carries an atom.
pub fn riesz_potential(measure: &PlanarMeasure, x: Point, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::Indices(format!("α = {alpha} must lie in (0, 2)")));
    }
    let exponent = 2.0 - alpha;
    let mut sum = 0.0;
    for a in measure.atoms() {
        if a.weight == 0.0 {
            continue;
        }
        let d = a.point.dist(x);
        if d == 0.0 {
            return Ok(f64::INFINITY);
        }
        sum += a.weight / d.powf(exponent);
    }
    Ok(sum)
}
