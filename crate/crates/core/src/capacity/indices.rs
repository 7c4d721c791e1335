use serde::{Deserialize, Serialize};

use crate::cantor::sharpness_exponent;
use crate::error::{Error, Result};

/// Indices `(α, p)` of a Riesz capacity `Ċ_{α,p}` / Wolff potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityIndices {
    pub alpha: f64,
    pub p: f64,
    /// Distortion constant the indices were derived for, if any.
    #[serde(rename = "K", skip_serializing_if = "Option::is_none", default)]
    pub k: Option<f64>,
}

impl CapacityIndices {
    pub fn new(alpha: f64, p: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::Indices(format!("α = {alpha} must be positive")));
        }
        if !(p.is_finite() && p > 1.0) {
            return Err(Error::Indices(format!("p = {p} must exceed 1")));
        }
        let ap = alpha * p;
        if ap >= 2.0 {
            return Err(Error::Indices(format!(
                "α·p = {ap} must be < 2 (capacity of degree 2 − αp > 0)"
            )));
        }
        Ok(Self { alpha, p, k: None })
    }

    pub fn with_k(self, k: f64) -> Self {
        Self { k: Some(k), ..self }
    }

    /// `p' = p / (p − 1)`.
    pub fn p_prime(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    /// `p' − 1 = 1 / (p − 1)`, the outer exponent of the Wolff integrand.
    pub fn wolff_exponent(&self) -> f64 {
        1.0 / (self.p - 1.0)
    }

    /// Degree of homogeneity `2 − αp`.
    pub fn homogeneity(&self) -> f64 {
        2.0 - self.alpha * self.p
    }
}

/// `(α, p) = (2K/(2K+1), (2K+1)/(K+1))`, the indices for which the source
/// capacity controls analytic capacity of the image.
pub fn theorem1_indices(k: f64) -> Result<CapacityIndices> {
    if !(k.is_finite() && k >= 1.0) {
        return Err(Error::Indices(format!("K = {k} must be ≥ 1")));
    }
    Ok(CapacityIndices::new(2.0 * k / (2.0 * k + 1.0), (2.0 * k + 1.0) / (k + 1.0))?.with_k(k))
}

/// Source indices `(β, q)` paired with target indices `(α, p)` under a
/// `K`-quasiconformal map, together with the two homogeneity degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistortedIndices {
    pub target: CapacityIndices,
    pub source: CapacityIndices,
    /// `t = 2 − αp`.
    pub t: f64,
    /// `t' = 2t / (2K − Kt + t)`.
    pub t_prime: f64,
    /// Power on the target side, `2K / (2K − Kt + t)`.
    pub power: f64,
}

pub fn teocap2_indices(alpha: f64, p: f64, k: f64) -> Result<DistortedIndices> {
    let target = CapacityIndices::new(alpha, p)?;
    if !(k.is_finite() && k >= 1.0) {
        return Err(Error::Indices(format!("K = {k} must be ≥ 1")));
    }
    let t = target.homogeneity();
    let denom = 2.0 * k - k * t + t;
    let mid = 2.0 * k * p * t - 3.0 * k * t + 2.0 * k + t;
    let beta = (4.0 * k - 2.0 * k * t) / mid;
    let q = mid / denom;
    let source = CapacityIndices::new(beta, q)?.with_k(k);
    Ok(DistortedIndices {
        target: target.with_k(k),
        source,
        t,
        t_prime: 2.0 * t / denom,
        power: 2.0 * k / denom,
    })
}

/// `(β, q)` with `βq = 2K/(K+1)` and `q > (2K+1)/(K+1)`.
pub fn sharpness_indices(k: f64, q: f64) -> Result<CapacityIndices> {
    sharpness_exponent(k, q)?;
    let beta = 2.0 * k / ((k + 1.0) * q);
    Ok(CapacityIndices::new(beta, q)?.with_k(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theorem1_small_cases() {
        let i = theorem1_indices(1.0).unwrap();
        assert!((i.alpha - 2.0 / 3.0).abs() < 1e-15);
        assert!((i.p - 1.5).abs() < 1e-15);
        assert!((i.homogeneity() - 1.0).abs() < 1e-15);
        let i = theorem1_indices(2.0).unwrap();
        assert!((i.alpha - 0.8).abs() < 1e-15);
        assert!((i.p - 5.0 / 3.0).abs() < 1e-15);
        assert!((i.homogeneity() - 2.0 / 3.0).abs() < 1e-15);
        assert!(theorem1_indices(0.5).is_err());
    }

    #[test]
    fn wolff_exponent_is_one_plus_one_over_k() {
        for k in [1.0, 1.5, 2.0, 7.0] {
            let i = theorem1_indices(k).unwrap();
            assert!((i.wolff_exponent() - (k + 1.0) / k).abs() < 1e-14);
        }
    }

    #[test]
    fn index_domain_errors() {
        assert!(CapacityIndices::new(1.0, 2.0).is_err());
        assert!(CapacityIndices::new(0.5, 1.0).is_err());
        assert!(teocap2_indices(0.5, 2.0, 0.9).is_err());
    }

    #[test]
    fn conformal_case_keeps_homogeneity() {
        // With K = 1, t' = t and βq = αp; (β, q) = (α, p) only when αp = 1.
        let d = teocap2_indices(0.4, 3.0, 1.0).unwrap();
        assert!((d.t_prime - d.t).abs() < 1e-14);
        assert!((d.source.alpha * d.source.p - 1.2).abs() < 1e-14);
        assert!((d.source.p - 3.0).abs() > 0.1);
        let d = teocap2_indices(0.5, 2.0, 1.0).unwrap();
        assert!((d.source.alpha - 0.5).abs() < 1e-14);
        assert!((d.source.p - 2.0).abs() < 1e-14);
    }
}
