use serde::{Deserialize, Serialize};

use crate::capacity::CapacityIndices;
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::measure::PlanarMeasure;
use crate::potentials::{wolff_dyadic, PotentialProfile, ScaleEntry};

/// `ψ_a(x) = 1 / (|x|^{1+a} + 1)`.
pub fn psi_a(x: Point, a: f64) -> f64 {
    1.0 / (x.norm().powf(1.0 + a) + 1.0)
}

/// Smoothed density `ε_{μ,a}(x,t) = (1/t) Σ_y w_y ψ_a((y − x)/t)`.
pub fn eps_mu_a(measure: &PlanarMeasure, x: Point, t: f64, a: f64) -> f64 {
    let s: f64 = measure
        .atoms()
        .iter()
        .map(|atom| atom.weight / ((atom.point.dist(x) / t).powf(1.0 + a) + 1.0))
        .sum();
    s / t
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsIntegralCheck {
    /// `Σ_k ε_{μ,a}(x, 2^k)^{p'−1}` over the dyadic range.
    pub lhs: f64,
    /// Dyadic `Ẇ^μ_{1/p,p}(x)` over the same range, sub-scale tail included.
    pub wolff: f64,
    /// `lhs / wolff` (1 when both vanish).
    pub ratio: f64,
    pub lhs_divergent: bool,
    pub wolff_divergent: bool,
}

/// Compares the dyadic sum of `ε_{μ,a}(x,·)^{p'−1}` with the Wolff potential
/// `Ẇ^μ_{1/p,p}(x)` over scales `2^{k_min} ..= 2^{k_max}`.
pub fn eps_integral_check(
    measure: &PlanarMeasure,
    x: Point,
    a: f64,
    p: f64,
    k_min: i32,
    k_max: i32,
) -> Result<EpsIntegralCheck> {
    if a.is_nan() || a <= 0.0 {
        return Err(Error::Argument(format!("a = {a} must be positive")));
    }
    if k_min > k_max {
        return Err(Error::Argument(format!(
            "k_min = {k_min} exceeds k_max = {k_max}"
        )));
    }
    let idx = CapacityIndices::new(1.0 / p, p)?;
    if measure.is_empty() || measure.total_mass() == 0.0 {
        return Ok(EpsIntegralCheck {
            lhs: 0.0,
            wolff: 0.0,
            ratio: 1.0,
            lhs_divergent: false,
            wolff_divergent: false,
        });
    }
    let e = idx.wolff_exponent();
    let entries = (k_min..=k_max)
        .rev()
        .map(|k| ScaleEntry {
            scale: k as i64,
            contribution: eps_mu_a(measure, x, 2f64.powi(k), a).powf(e),
        })
        .collect();
    let lhs_profile = PotentialProfile::new(idx.alpha, idx.p, "eps-integral", entries);
    let wolff_profile = wolff_dyadic(measure, x, &idx, k_min, k_max)?;
    let lhs = lhs_profile.total();
    let wolff = wolff_profile.total();
    let ratio = if lhs == 0.0 && wolff == 0.0 {
        1.0
    } else {
        lhs / wolff
    };
    Ok(EpsIntegralCheck {
        lhs,
        wolff,
        ratio,
        lhs_divergent: lhs_profile.is_divergent(),
        wolff_divergent: wolff_profile.is_divergent(),
    })
}

/// `sup_z (|z|^m + 1) Σ_{k≥0} 2^{−bk} / ((2^{−k}|z|)^a + 1)` over the given
/// radii, `m = min(a, b)`: the empirical constant of the two-exponent
/// summation bound.
pub fn lemtec1_check(a: f64, b: f64, radii: &[f64]) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Argument(format!(
            "a = {a}, b = {b} must be positive"
        )));
    }
    if a == b {
        return Err(Error::Argument("the bound requires a ≠ b".into()));
    }
    let m = a.min(b);
    let mut sup: f64 = 0.0;
    for &z in radii {
        if !(z >= 0.0 && z.is_finite()) {
            return Err(Error::Argument(format!(
                "|z| = {z} must be finite and nonnegative"
            )));
        }
        let mut sum = 0.0;
        let mut k = 0i32;
        loop {
            let term = 2f64.powf(-b * k as f64) / ((2f64.powi(-k) * z).powf(a) + 1.0);
            sum += term;
            if term <= 1e-17 * sum && 2f64.powi(-k) * z < 1.0 {
                break;
            }
            k += 1;
        }
        sup = sup.max(sum * (z.powf(m) + 1.0));
    }
    Ok(sup)
}
