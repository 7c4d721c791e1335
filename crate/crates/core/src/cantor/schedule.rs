//! Per-level parameters of the Cantor construction and the schedules used
//! by the distortion examples.
//!
//! Radii are kept in log space: the thinned schedules drive generating radii
//! down to `exp(-e^N)` and below, far outside the range of `f64`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on `σ` and `R` under [`Smallness::Strict`].
pub const STRICT_SMALLNESS: f64 = 0.01;

const REL_TOL: f64 = 1e-12;

/// Admissible size regime for a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Smallness {
    /// `σ_N ≤ 1/100` and `R_N ≤ 1/100`.
    #[default]
    Strict,
    /// `σ_N < 1` and the `M_N` protecting disks of radius `R_N` must pack
    /// into the unit disk. This is the regime used for planar realizations.
    Geometric,
}

/// Parameters of generation `N`: `M_N` children per parent, each with a
/// protecting disk of relative radius `R_N` and a generating disk of relative
/// radius `σ_N = R_N d_N` (target) or `σ_N^K` (source).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelSchedule {
    pub branching: usize,
    log_radius: f64,
    pub d: f64,
}

impl LevelSchedule {
    /// Level with `M R² = 1 − eps`.
    pub fn from_eps(branching: usize, eps: f64, d: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&eps) {
            return Err(Error::Argument(format!("eps = {eps} must lie in [0, 1)")));
        }
        if branching == 0 {
            return Err(Error::Argument("branching must be positive".into()));
        }
        let log_radius = 0.5 * ((1.0 - eps).ln() - (branching as f64).ln());
        Ok(Self {
            branching,
            log_radius,
            d,
        })
    }

    pub fn from_log_radius(branching: usize, log_radius: f64, d: f64) -> Self {
        Self {
            branching,
            log_radius,
            d,
        }
    }

    pub fn log_radius(&self) -> f64 {
        self.log_radius
    }

    pub fn radius(&self) -> f64 {
        self.log_radius.exp()
    }

    pub fn log_sigma(&self) -> f64 {
        self.log_radius + self.d.ln()
    }

    pub fn sigma(&self) -> f64 {
        self.log_sigma().exp()
    }

    /// `ln(1 − eps) = ln M + 2 ln R`.
    pub fn log_one_minus_eps(&self) -> f64 {
        (self.branching as f64).ln() + 2.0 * self.log_radius
    }

    pub fn eps(&self) -> f64 {
        -self.log_one_minus_eps().exp_m1()
    }

    pub fn with_log_radius(self, log_radius: f64) -> Self {
        Self { log_radius, ..self }
    }

    /// Checks the level invariants; `level` is 1-based and only used for
    /// error reporting.
    pub fn validate(&self, level: usize, smallness: Smallness) -> Result<()> {
        let fail = |reason: String| Err(Error::Schedule { level, reason });
        if self.branching == 0 {
            return fail("branching M must be positive".into());
        }
        if !self.log_radius.is_finite() {
            return fail(format!("log R = {} is not finite", self.log_radius));
        }
        if !(self.d.is_finite() && self.d >= 1.0) {
            return fail(format!("d = {} must be finite and ≥ 1", self.d));
        }
        if self.log_one_minus_eps() > REL_TOL {
            return fail(format!(
                "M·R² = {} exceeds 1 (eps would be negative)",
                self.log_one_minus_eps().exp()
            ));
        }
        match smallness {
            Smallness::Strict => {
                let bound = STRICT_SMALLNESS.ln() + REL_TOL;
                if self.log_radius > bound {
                    return fail(format!(
                        "R = {} exceeds the smallness bound 1/100",
                        self.radius()
                    ));
                }
                if self.log_sigma() > bound {
                    return fail(format!(
                        "σ = R·d = {} exceeds the smallness bound 1/100",
                        self.sigma()
                    ));
                }
            }
            Smallness::Geometric => {
                if self.log_sigma() >= 0.0 {
                    return fail(format!(
                        "σ = R·d = {} must be < 1 for the generating disk to fit",
                        self.sigma()
                    ));
                }
            }
        }
        Ok(())
    }
}

/// `d_j = (j+1)/j`, the schedule that makes the target potential at
/// `(2/3, 3/2)` summable as `Σ 1/(n+1)²`.
pub fn example2_multiplier(j: usize) -> f64 {
    (j as f64 + 1.0) / j as f64
}

pub fn schedule_example2(
    k: f64,
    depth: usize,
    branching: usize,
    eps: f64,
    smallness: Smallness,
) -> Result<Vec<LevelSchedule>> {
    check_k(k)?;
    (1..=depth)
        .map(|j| {
            let level = LevelSchedule::from_eps(branching, eps, example2_multiplier(j))?;
            level.validate(j, smallness)?;
            Ok(level)
        })
        .collect()
}

/// Exponent `e` in `d_j = ((j+1)/j)^e` with `d_j^{2(q'−1)K/(K+1)} = (j+1)/j`.
pub fn sharpness_exponent(k: f64, q: f64) -> Result<f64> {
    check_k(k)?;
    let threshold = (2.0 * k + 1.0) / (k + 1.0);
    if !(q.is_finite() && q > threshold) {
        return Err(Error::Sharpness(format!(
            "q = {q} must exceed (2K+1)/(K+1) = {threshold}"
        )));
    }
    let q_prime_minus_one = 1.0 / (q - 1.0);
    Ok((k + 1.0) / (2.0 * k * q_prime_minus_one))
}

pub fn schedule_sharpness(
    k: f64,
    q: f64,
    depth: usize,
    branching: usize,
    eps: f64,
    smallness: Smallness,
) -> Result<Vec<LevelSchedule>> {
    let e = sharpness_exponent(k, q)?;
    (1..=depth)
        .map(|j| {
            let d = example2_multiplier(j).powf(e);
            let level = LevelSchedule::from_eps(branching, eps, d)?;
            level.validate(j, smallness)?;
            Ok(level)
        })
        .collect()
}

/// `ln s_N` for each generation `N = 0..=levels.len()`.
pub fn log_source_radii(k: f64, levels: &[LevelSchedule]) -> Vec<f64> {
    let mut out = Vec::with_capacity(levels.len() + 1);
    let mut acc = 0.0;
    out.push(acc);
    for l in levels {
        acc += k * l.log_sigma() + l.log_radius();
        out.push(acc);
    }
    out
}

/// Lowers `R_N` level by level until `ln s_N ≤ bound(N)`. Levels already
/// below the bound are left alone; binding levels end up with equality.
pub fn shrink_source_radii(
    k: f64,
    levels: &[LevelSchedule],
    bound: impl Fn(usize) -> f64,
) -> Vec<LevelSchedule> {
    let mut out = Vec::with_capacity(levels.len());
    let mut log_s = 0.0;
    for (i, level) in levels.iter().enumerate() {
        let n = i + 1;
        let target = bound(n);
        let step = k * level.log_sigma() + level.log_radius();
        let adjusted = if log_s + step > target {
            // ln s_N = ln s_{N-1} + (K+1) ln R + K ln d
            let log_r = (target - log_s - k * level.d.ln()) / (k + 1.0);
            level.with_log_radius(log_r)
        } else {
            *level
        };
        log_s += k * adjusted.log_sigma() + adjusted.log_radius();
        out.push(adjusted);
    }
    out
}

/// Example-2 schedule thinned so that the largest source generating radius of
/// generation `N` is at most `exp(−e^N)`, with equality wherever the bound is
/// tighter than the unthinned level.
pub fn schedule_example3(
    k: f64,
    depth: usize,
    branching: usize,
    eps: f64,
    smallness: Smallness,
) -> Result<Vec<LevelSchedule>> {
    let base = schedule_example2(k, depth, branching, eps, smallness)?;
    let levels = shrink_source_radii(k, &base, example3_log_bound);
    for (i, l) in levels.iter().enumerate() {
        l.validate(i + 1, smallness)?;
    }
    Ok(levels)
}

/// `ln S^N_max ≤ −e^N`.
pub fn example3_log_bound(n: usize) -> f64 {
    -(n as f64).exp()
}

pub(crate) fn check_k(k: f64) -> Result<()> {
    if !(k.is_finite() && k >= 1.0) {
        return Err(Error::Argument(format!("K = {k} must be ≥ 1")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example2_multipliers() {
        assert_eq!(example2_multiplier(1), 2.0);
        assert!((example2_multiplier(5) - 1.2).abs() < 1e-15);
        let prod: f64 = (1..=10).map(example2_multiplier).product();
        assert!((prod - 11.0).abs() < 1e-12);
    }

    #[test]
    fn eps_round_trip() {
        let l = LevelSchedule::from_eps(4, 0.9996, 1.0).unwrap();
        assert!((l.radius() - 0.01).abs() < 1e-15);
        assert!((l.eps() - 0.9996).abs() < 1e-12);
    }

    #[test]
    fn strict_smallness_rejects_wide_levels() {
        let l = LevelSchedule::from_eps(7, 0.25, 1.0).unwrap();
        assert!(matches!(
            l.validate(3, Smallness::Strict),
            Err(Error::Schedule { level: 3, .. })
        ));
        assert!(l.validate(3, Smallness::Geometric).is_ok());
    }

    #[test]
    fn example2_needs_room_for_d1() {
        // R = 1/100 with d_1 = 2 gives σ_1 = 1/50.
        assert!(schedule_example2(1.0, 3, 4, 0.9996, Smallness::Strict).is_err());
        assert!(schedule_example2(1.0, 3, 40_000, 0.0, Smallness::Strict).is_ok());
    }

    #[test]
    fn sharpness_boundary_excluded() {
        let k = 2.0;
        let q = (2.0 * k + 1.0) / (k + 1.0);
        assert!(matches!(sharpness_exponent(k, q), Err(Error::Sharpness(_))));
        assert!(sharpness_exponent(k, q + 1e-9).is_ok());
    }

    #[test]
    fn example3_log_radii() {
        let levels = schedule_example3(2.0, 6, 4, 0.36, Smallness::Geometric).unwrap();
        let s = log_source_radii(2.0, &levels);
        for (n, &ls) in s.iter().enumerate().skip(1) {
            assert!((ls + (n as f64).exp()).abs() < 1e-12, "n = {n}: {ls}");
        }
        // N = 1: e^{-e} ≈ 0.0659
        assert!((s[1].exp() - 0.065_988_035_845_312_54).abs() < 1e-15);

        // Strict levels are already thinner than the bound at small N.
        let strict = schedule_example3(2.0, 6, 40_000, 0.0, Smallness::Strict).unwrap();
        let s = log_source_radii(2.0, &strict);
        for (n, &ls) in s.iter().enumerate().skip(1) {
            assert!(ls <= -(n as f64).exp() + 1e-12);
        }
    }
}
