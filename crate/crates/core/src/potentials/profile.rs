use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Fraction of the running total a term must exceed to count toward
/// divergence.
pub const DIVERGENCE_FRACTION: f64 = 0.1;
/// Number of consecutive finest scales that must all exceed the fraction.
pub const DIVERGENCE_RUN: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleEntry {
    /// Generation `N` for tree profiles, dyadic exponent `k` otherwise.
    pub scale: i64,
    pub contribution: f64,
}

/// A fitted growth rate attached to a divergent profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Divergence {
    /// Least-squares slope of `ln(term)` per scale step over the finest run.
    pub log_slope: f64,
}

/// Per-scale contributions to a potential, in summation order (coarse to
/// fine).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialProfile {
    pub alpha: f64,
    pub p: f64,
    pub label: String,
    pub entries: Vec<ScaleEntry>,
    /// Closed-form contribution of the scales below the finest entry.
    pub sub_scale_tail: f64,
    pub divergence: Option<Divergence>,
}

impl PotentialProfile {
    pub fn new(alpha: f64, p: f64, label: impl Into<String>, entries: Vec<ScaleEntry>) -> Self {
        let contributions: Vec<f64> = entries.iter().map(|e| e.contribution).collect();
        let divergence = detect_divergence(&contributions);
        Self {
            alpha,
            p,
            label: label.into(),
            entries,
            sub_scale_tail: 0.0,
            divergence,
        }
    }

    pub fn with_tail(mut self, tail: f64) -> Self {
        self.sub_scale_tail = tail;
        self
    }

    /// Sum of all listed contributions plus the sub-scale tail.
    pub fn partial_sum(&self) -> f64 {
        self.entries.iter().map(|e| e.contribution).sum::<f64>() + self.sub_scale_tail
    }

    /// `+∞` for divergent profiles, the partial sum otherwise.
    pub fn total(&self) -> f64 {
        if self.divergence.is_some() {
            f64::INFINITY
        } else {
            self.partial_sum()
        }
    }

    pub fn is_divergent(&self) -> bool {
        self.divergence.is_some()
    }

    pub fn running_totals(&self) -> Vec<f64> {
        self.entries
            .iter()
            .scan(0.0, |acc, e| {
                *acc += e.contribution;
                Some(*acc)
            })
            .collect()
    }

    /// `scale_label,contribution,running_total` with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("scale_label,contribution,running_total\n");
        for (e, run) in self.entries.iter().zip(self.running_totals()) {
            let _ = writeln!(out, "{},{:.16e},{:.16e}", e.scale, e.contribution, run);
        }
        if self.sub_scale_tail > 0.0 {
            let _ = writeln!(
                out,
                "tail,{:.16e},{:.16e}",
                self.sub_scale_tail,
                self.partial_sum()
            );
        }
        out
    }
}

/// Flags a sequence whose last [`DIVERGENCE_RUN`] terms each exceed
/// [`DIVERGENCE_FRACTION`] of the running total at their scale.
pub fn detect_divergence(contributions: &[f64]) -> Option<Divergence> {
    let n = contributions.len();
    if n < DIVERGENCE_RUN {
        return None;
    }
    let mut running = 0.0;
    let mut flags = Vec::with_capacity(n);
    for &c in contributions {
        running += c;
        flags.push(c > 0.0 && c > DIVERGENCE_FRACTION * running);
    }
    if !flags[n - DIVERGENCE_RUN..].iter().all(|&f| f) {
        return None;
    }
    let tail = &contributions[n - DIVERGENCE_RUN..];
    let xs: Vec<f64> = (0..tail.len()).map(|i| i as f64).collect();
    let ys: Vec<f64> = tail.iter().map(|c| c.ln()).collect();
    Some(Divergence {
        log_slope: least_squares(&xs, &ys).0,
    })
}

/// Ordinary least squares `y ≈ a x + b`; returns `(a, b, R²)`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let a = sxy / sxx;
    let b = my - a * mx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy) / (sxx * syy)
    };
    (a, b, r2)
}
