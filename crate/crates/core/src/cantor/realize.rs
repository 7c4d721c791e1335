use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use super::tree::{CantorTree, Side};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::measure::{Atom, PlanarMeasure};

/// Discretizes the area-splitting measure (`ν` on the source, `μ` on the
/// target): every leaf generating disk receives `samples_per_leaf` uniform
/// atoms of equal weight summing to the leaf mass. With one sample per leaf
/// the atom sits at the leaf center.
pub fn realize_measure(
    tree: &CantorTree,
    side: Side,
    samples_per_leaf: usize,
    seed: u64,
) -> Result<PlanarMeasure> {
    if !tree.is_realized() {
        return Err(Error::Unrealized);
    }
    if samples_per_leaf == 0 {
        return Err(Error::Argument("samples_per_leaf must be positive".into()));
    }
    let leaves = tree.leaves()?;
    let mut atoms = Vec::with_capacity(leaves.len() * samples_per_leaf);
    for (i, leaf) in leaves.iter().enumerate() {
        let center = leaf.center(side).ok_or(Error::Unrealized)?;
        let weight = leaf.mass() / samples_per_leaf as f64;
        if samples_per_leaf == 1 {
            atoms.push(Atom {
                point: center,
                weight,
            });
            continue;
        }
        let radius = leaf.radius(side);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        for _ in 0..samples_per_leaf {
            let r = radius * rng.gen::<f64>().sqrt();
            let theta = 2.0 * PI * rng.gen::<f64>();
            atoms.push(Atom {
                point: center + Point::new(r * theta.cos(), r * theta.sin()),
                weight,
            });
        }
    }
    PlanarMeasure::new(atoms)
}
