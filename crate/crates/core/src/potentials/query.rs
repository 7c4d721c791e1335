use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::cantor::{CantorTree, Side};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::measure::PlanarMeasure;

/// The points at which sup-type quantities are evaluated, with an id that
/// records how they were produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuerySet {
    pub id: String,
    pub points: Vec<Point>,
}

impl QuerySet {
    pub fn new(id: impl Into<String>, points: Vec<Point>) -> Self {
        Self {
            id: id.into(),
            points,
        }
    }

    /// Leaf centers of `side`, followed by `extra` seeded points drawn
    /// uniformly from uniformly chosen leaf generating disks.
    pub fn for_tree(tree: &CantorTree, side: Side, extra: usize, seed: u64) -> Result<Self> {
        let leaves = tree.leaves()?;
        let mut points = leaves
            .iter()
            .map(|l| l.center(side).ok_or(Error::Unrealized))
            .collect::<Result<Vec<_>>>()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..extra {
            let leaf = &leaves[rng.gen_range(0..leaves.len())];
            let r = leaf.radius(side) * rng.gen::<f64>().sqrt();
            let theta = 2.0 * PI * rng.gen::<f64>();
            points.push(
                points_center(leaf.center(side))? + Point::new(r * theta.cos(), r * theta.sin()),
            );
        }
        Ok(Self::new(
            format!("tree-{}:leaves+{extra}@{seed}", side.as_str()),
            points,
        ))
    }

    /// Every `stride`-th atom (at most `evenly` of them) plus `random` atoms
    /// drawn by weight.
    pub fn for_measure(
        measure: &PlanarMeasure,
        evenly: usize,
        random: usize,
        seed: u64,
    ) -> Result<Self> {
        let atoms = measure.atoms();
        if atoms.is_empty() {
            return Err(Error::Measure("query set of an empty measure".into()));
        }
        let stride = atoms.len().div_ceil(evenly.max(1)).max(1);
        let mut points: Vec<Point> = atoms.iter().step_by(stride).map(|a| a.point).collect();
        if random > 0 {
            let dist = WeightedIndex::new(atoms.iter().map(|a| a.weight))
                .map_err(|e| Error::Measure(e.to_string()))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            points.extend((0..random).map(|_| atoms[dist.sample(&mut rng)].point));
        }
        Ok(Self::new(format!("atoms:{evenly}+{random}@{seed}"), points))
    }

    /// Adds the vertices of the dyadic grid of mesh `2^k` lying within one
    /// mesh of some atom.
    pub fn with_grid_near_support(mut self, measure: &PlanarMeasure, k: i32) -> Self {
        let h = 2f64.powi(k);
        let mut grid: Vec<(i64, i64)> = Vec::new();
        for a in measure.atoms() {
            let (i0, j0) = (
                (a.point.x / h).floor() as i64,
                (a.point.y / h).floor() as i64,
            );
            for di in -1..=2 {
                for dj in -1..=2 {
                    let v = Point::new((i0 + di) as f64 * h, (j0 + dj) as f64 * h);
                    if v.dist(a.point) <= h {
                        grid.push((i0 + di, j0 + dj));
                    }
                }
            }
        }
        grid.sort_unstable();
        grid.dedup();
        self.points.extend(
            grid.into_iter()
                .map(|(i, j)| Point::new(i as f64 * h, j as f64 * h)),
        );
        self.id = format!("{}+grid{k}", self.id);
        self
    }

    pub fn union(&self, other: &QuerySet) -> QuerySet {
        let mut points = self.points.clone();
        points.extend_from_slice(&other.points);
        QuerySet::new(format!("{}|{}", self.id, other.id), points)
    }
}

fn points_center(c: Option<Point>) -> Result<Point> {
    c.ok_or(Error::Unrealized)
}
