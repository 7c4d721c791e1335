//! Finite weighted atom clouds in the plane.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Point;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub point: Point,
    pub weight: f64,
}

/// A finite positive measure `Σ wᵢ δ_{yᵢ}`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PlanarMeasure {
    atoms: Vec<Atom>,
}

impl PlanarMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        for (i, a) in atoms.iter().enumerate() {
            if !(a.weight.is_finite() && a.weight >= 0.0) {
                return Err(Error::Measure(format!(
                    "atom {i} has weight {} (must be finite and nonnegative)",
                    a.weight
                )));
            }
            if !(a.point.x.is_finite() && a.point.y.is_finite()) {
                return Err(Error::Measure(format!(
                    "atom {i} has a non-finite position"
                )));
            }
        }
        Ok(Self { atoms })
    }

    pub fn from_points(points: &[Point], weight: f64) -> Result<Self> {
        Self::new(points.iter().map(|&point| Atom { point, weight }).collect())
    }

    pub fn empty() -> Self {
        Self { atoms: Vec::new() }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// Closed-ball mass `μ(B̄(x, r))`.
    pub fn ball_mass(&self, x: Point, r: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| a.point.dist(x) <= r)
            .map(|a| a.weight)
            .sum()
    }

    pub fn scale_mass(&self, c: f64) -> Self {
        Self {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    point: a.point,
                    weight: a.weight * c,
                })
                .collect(),
        }
    }

    /// Dilation `y ↦ λ y` about the origin; weights unchanged.
    pub fn scale_geometry(&self, lambda: f64) -> Self {
        self.map_points(|p| p * lambda)
    }

    pub fn translate(&self, v: Point) -> Self {
        self.map_points(|p| p + v)
    }

    pub fn rotate(&self, angle: f64) -> Self {
        self.map_points(|p| p.rotate(angle))
    }

    pub fn map_points(&self, f: impl Fn(Point) -> Point) -> Self {
        Self {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    point: f(a.point),
                    weight: a.weight,
                })
                .collect(),
        }
    }

    /// Union of two atom clouds (weights add, atoms are not merged).
    pub fn union(&self, other: &PlanarMeasure) -> Self {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        Self { atoms }
    }

    /// Axis-aligned bounding box `(min, max)`; `None` when empty.
    pub fn bounding_box(&self) -> Option<(Point, Point)> {
        let first = self.atoms.first()?.point;
        let (mut lo, mut hi) = (first, first);
        for a in &self.atoms {
            lo.x = lo.x.min(a.point.x);
            lo.y = lo.y.min(a.point.y);
            hi.x = hi.x.max(a.point.x);
            hi.y = hi.y.max(a.point.y);
        }
        Some((lo, hi))
    }

    /// Center of the bounding box and the bounding-box diagonal, an upper
    /// bound for the support diameter.
    pub fn support_extent(&self) -> Option<(Point, f64)> {
        let (lo, hi) = self.bounding_box()?;
        Some(((lo + hi) * 0.5, lo.dist(hi)))
    }

    /// Sorted distance table for repeated ball queries about `x`.
    pub fn ball_profile(&self, x: Point) -> BallProfile {
        let mut pairs: Vec<(f64, f64)> = self
            .atoms
            .iter()
            .map(|a| (a.point.dist(x), a.weight))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut cumulative = Vec::with_capacity(pairs.len());
        let mut acc = 0.0;
        for &(_, w) in &pairs {
            acc += w;
            cumulative.push(acc);
        }
        BallProfile {
            distances: pairs.into_iter().map(|p| p.0).collect(),
            cumulative,
        }
    }
}

/// Distances from a fixed center, sorted, with running mass.
#[derive(Debug, Clone)]
pub struct BallProfile {
    distances: Vec<f64>,
    cumulative: Vec<f64>,
}

impl BallProfile {
    /// Closed-ball mass `μ(B̄(x, r))`.
    pub fn mass_within(&self, r: f64) -> f64 {
        let n = self.distances.partition_point(|&d| d <= r);
        if n == 0 {
            0.0
        } else {
            self.cumulative[n - 1]
        }
    }

    pub fn nearest(&self) -> Option<f64> {
        self.distances.first().copied()
    }

    pub fn farthest(&self) -> Option<f64> {
        self.distances.last().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_negative_weights() {
        let err = PlanarMeasure::new(vec![Atom {
            point: Point::ORIGIN,
            weight: -1.0,
        }]);
        assert!(err.is_err());
    }

    #[test]
    fn ball_profile_matches_direct_count() {
        let m = PlanarMeasure::from_points(
            &[
                Point::new(0.0, 0.0),
                Point::new(1.0, 0.0),
                Point::new(0.0, 2.0),
            ],
            0.5,
        )
        .unwrap();
        let x = Point::new(0.0, 0.0);
        let prof = m.ball_profile(x);
        for r in [0.0, 0.5, 1.0, 1.5, 2.0, 3.0] {
            assert_eq!(prof.mass_within(r), m.ball_mass(x, r));
        }
        // closed balls
        assert_eq!(prof.mass_within(1.0), 1.0);
    }
}
