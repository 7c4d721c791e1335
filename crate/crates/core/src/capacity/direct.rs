use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::estimate::{CapacityEstimate, Convention, Direction, Normalization};
use super::CapacityIndices;
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::measure::PlanarMeasure;

/// Planar quadrature for `‖I_α μ‖_{p'}`. All lengths are relative to the
/// diameter `D` of the support's bounding box, so the rule is exactly
/// homogeneous under dilations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Cells per side of the base grid over the square of half-side
    /// `far_factor · D`.
    pub base_cells: usize,
    /// Cells are refined near atoms until their side is at most
    /// `min_cell_fraction · D`.
    pub min_cell_fraction: f64,
    /// Outside the square the potential is replaced by its closed-form bound.
    pub far_factor: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            base_cells: 32,
            min_cell_fraction: 1.0 / 256.0,
            far_factor: 4.0,
        }
    }
}

impl QuadratureSpec {
    pub fn id(&self) -> String {
        format!(
            "quadrature/base{}/min{:e}/far{}",
            self.base_cells, self.min_cell_fraction, self.far_factor
        )
    }

    fn validate(&self) -> Result<()> {
        if self.base_cells == 0 {
            return Err(Error::Argument(
                "quadrature needs at least one base cell".into(),
            ));
        }
        if !(self.min_cell_fraction > 0.0 && self.min_cell_fraction.is_finite()) {
            return Err(Error::Argument("min_cell_fraction must be positive".into()));
        }
        if !(self.far_factor >= 1.0 && self.far_factor.is_finite()) {
            return Err(Error::Argument("far_factor must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    center: Point,
    side: f64,
}

fn near(cell_center: Point, side: f64, y: Point) -> bool {
    (cell_center.x - y.x).abs() <= side && (cell_center.y - y.y).abs() <= side
}

/// Splits `cell` while some atom lies in it or in a neighbouring cell of the
/// same size and the side is above `min_side`.
fn refine(cell: Cell, candidates: &[Point], min_side: f64, out: &mut Vec<Cell>) {
    let close: Vec<Point> = candidates
        .iter()
        .copied()
        .filter(|&y| near(cell.center, cell.side, y))
        .collect();
    if close.is_empty() || cell.side <= min_side {
        out.push(cell);
        return;
    }
    let h = cell.side / 2.0;
    for (dx, dy) in [(-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)] {
        let child = Cell {
            center: Point::new(cell.center.x + dx * h / 2.0, cell.center.y + dy * h / 2.0),
            side: h,
        };
        refine(child, &close, min_side, out);
    }
}

/// `I_α μ(x)`, with atoms closer than the equal-area radius `a` of the cell
/// replaced by the disk average `2 a^{α−2} / α` of the kernel.
fn cell_potential(measure: &PlanarMeasure, cell: &Cell, alpha: f64) -> f64 {
    let beta = 2.0 - alpha;
    let a = cell.side / PI.sqrt();
    let averaged = 2.0 * a.powf(-beta) / (2.0 - beta);
    measure
        .atoms()
        .iter()
        .map(|atom| {
            let r = cell.center.dist(atom.point);
            let k = if r < a { averaged } else { r.powf(-beta) };
            atom.weight * k
        })
        .sum()
}

/// `∫_{|x−c| > L} (|x−c| − δ)^{−b} dx` in closed form, `b = (2−α)p' > 2`.
/// Multiplied by `mass^{p'}` it bounds the far-field part of `‖I_α μ‖^{p'}`.
fn far_field_tail(half_side: f64, delta: f64, b: f64) -> f64 {
    let u0 = half_side - delta;
    2.0 * PI * (u0.powf(2.0 - b) / (b - 2.0) + delta * u0.powf(1.0 - b) / (b - 1.0))
}

/// `‖I_α μ‖_{p'}` by cell quadrature on an adaptive grid plus the far-field
/// tail. Returns the norm and the number of cells used.
pub fn riesz_norm(
    measure: &PlanarMeasure,
    idx: &CapacityIndices,
    spec: &QuadratureSpec,
) -> Result<(f64, usize)> {
    spec.validate()?;
    let mass = measure.total_mass();
    let Some((center, diam)) = measure.support_extent() else {
        return Ok((0.0, 0));
    };
    if mass == 0.0 {
        return Ok((0.0, 0));
    }
    if diam == 0.0 {
        return Ok((f64::INFINITY, 0));
    }
    let pp = idx.p_prime();
    let half = spec.far_factor * diam;
    let h0 = 2.0 * half / spec.base_cells as f64;
    let min_side = spec.min_cell_fraction * diam;
    let points: Vec<Point> = measure.atoms().iter().map(|a| a.point).collect();
    let n = spec.base_cells;
    let cells: Vec<Cell> = (0..n * n)
        .into_par_iter()
        .flat_map_iter(|ij| {
            let (i, j) = (ij % n, ij / n);
            let cell = Cell {
                center: Point::new(
                    center.x - half + (i as f64 + 0.5) * h0,
                    center.y - half + (j as f64 + 0.5) * h0,
                ),
                side: h0,
            };
            let mut out = Vec::new();
            refine(cell, &points, min_side, &mut out);
            out
        })
        .collect();
    let integrals: Vec<f64> = cells
        .par_iter()
        .map(|cell| cell_potential(measure, cell, idx.alpha).powf(pp) * cell.side * cell.side)
        .collect();
    let near: f64 = integrals.iter().sum();
    let b = (2.0 - idx.alpha) * pp;
    let tail = mass.powf(pp) * far_field_tail(half, diam / 2.0, b);
    Ok(((near + tail).powf(1.0 / pp), cells.len()))
}

/// `(μ(F) / ‖I_α μ‖_{p'})^p`: the trial measure normalized to be admissible
/// in the definition of `Ċ_{α,p}`.
pub fn direct_capacity_lower(
    measure: &PlanarMeasure,
    idx: &CapacityIndices,
    spec: &QuadratureSpec,
) -> Result<CapacityEstimate> {
    let (norm, _) = riesz_norm(measure, idx, spec)?;
    let mass = measure.total_mass();
    let value = if mass == 0.0 || norm.is_infinite() {
        0.0
    } else {
        (mass / norm).powf(idx.p)
    };
    Ok(CapacityEstimate::with_indices(
        value,
        Direction::LowerBound,
        idx,
        Convention::Definitional,
        Normalization {
            sup: norm,
            query_set: spec.id(),
            seed: None,
        },
    ))
}
