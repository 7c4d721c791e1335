use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::gauge::{Ball, Gauge};
use crate::error::{Error, Result};
use crate::geom::Point;

/// Empirical constants of the two regularity classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct DoublingReport {
    pub gauge: String,
    /// `max ε(y,s)/ε(x,r)` over sampled comparable pairs (both orders).
    pub c0: Option<f64>,
    /// `max Σ_k 2^{−k} ε(x, 2^k r) / ε(x, r)` over sampled balls.
    pub c0_prime: Option<f64>,
    pub pairs: usize,
    pub balls: usize,
    /// Largest `k` summed explicitly before the frozen tail was added.
    pub truncated_at: Option<u32>,
    pub threshold: f64,
    pub pass: bool,
}

/// `n` seeded ball pairs `(B(x,r), B(y,s))` with `|x−y| ≤ 2r` and
/// `r/2 ≤ s ≤ 2r`; `x` uniform in `B(center, spread)`, `log₂ r` uniform in
/// `[log_r_min, log_r_max]`.
pub fn sample_g1_pairs(
    center: Point,
    spread: f64,
    log_r_min: f64,
    log_r_max: f64,
    n: usize,
    seed: u64,
) -> Vec<(Ball, Ball)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let x = center + polar(&mut rng, spread);
            let r = 2f64.powf(rng.gen_range(log_r_min..=log_r_max));
            let y = x + polar(&mut rng, 2.0 * r);
            let s = r * 2f64.powf(rng.gen_range(-1.0..=1.0));
            (Ball::new(x, r), Ball::new(y, s))
        })
        .collect()
}

fn polar(rng: &mut ChaCha8Rng, radius: f64) -> Point {
    let rho = radius * rng.gen::<f64>().sqrt();
    let theta = 2.0 * PI * rng.gen::<f64>();
    Point::new(rho * theta.cos(), rho * theta.sin())
}

/// Largest two-sided ratio `ε(y,s)/ε(x,r)` over comparable ball pairs.
pub fn check_g1(
    gauge: &dyn Gauge,
    pairs: &[(Ball, Ball)],
    threshold: f64,
) -> Result<DoublingReport> {
    let mut c0: f64 = 1.0;
    for (b1, b2) in pairs {
        let (x, y) = (b1.center_or_err()?, b2.center_or_err()?);
        let (r, s) = (b1.radius, b2.radius);
        let slack = 1e-12 * r;
        if x.dist(y) > 2.0 * r + slack || s < r / 2.0 - slack || s > 2.0 * r + slack {
            return Err(Error::Argument(format!(
                "ball pair violates |x−y| ≤ 2r, r/2 ≤ s ≤ 2r: r = {r}, s = {s}, |x−y| = {}",
                x.dist(y)
            )));
        }
        let (e1, e2) = (gauge.eps(b1)?, gauge.eps(b2)?);
        if e1 == 0.0 && e2 == 0.0 {
            continue;
        }
        c0 = c0.max((e2 / e1).max(e1 / e2));
    }
    Ok(DoublingReport {
        gauge: gauge.description(),
        c0: (!pairs.is_empty()).then_some(c0),
        pairs: pairs.len(),
        threshold,
        pass: c0 <= threshold,
        ..Default::default()
    })
}

/// `Σ_{k≥0} 2^{−k} ε(x, 2^k r) / ε(x, r)` per ball. Terms are summed
/// explicitly while `2^k r ≤ swallow` (the scale at which the ball contains
/// the support) and for at most `max_k` steps; the remainder is bounded by
/// freezing `ε` at its last value, which adds `2^{−k*} ε(x, 2^{k*} r)`.
pub fn check_g2(
    gauge: &dyn Gauge,
    balls: &[Ball],
    swallow: f64,
    max_k: u32,
    threshold: f64,
) -> Result<DoublingReport> {
    let mut c0p: f64 = 1.0;
    let mut truncated: u32 = 0;
    for ball in balls {
        let base = gauge.eps(ball)?;
        if base == 0.0 {
            continue;
        }
        let mut sum = 0.0;
        let mut k = 0u32;
        let last = loop {
            let r = ball.radius * 2f64.powi(k as i32);
            let e = gauge.eps(&Ball {
                radius: r,
                ..ball.clone()
            })?;
            sum += 2f64.powi(-(k as i32)) * e;
            if r > swallow || k >= max_k {
                break 2f64.powi(-(k as i32)) * e;
            }
            k += 1;
        };
        sum += last;
        truncated = truncated.max(k);
        c0p = c0p.max(sum / base);
    }
    Ok(DoublingReport {
        gauge: gauge.description(),
        c0_prime: (!balls.is_empty()).then_some(c0p),
        balls: balls.len(),
        truncated_at: (!balls.is_empty()).then_some(truncated),
        threshold,
        pass: c0p <= threshold,
        ..Default::default()
    })
}
