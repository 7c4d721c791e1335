use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::measure::PlanarMeasure;

/// Relative area below which three points count as collinear.
const COLLINEAR_TOL: f64 = 1e-13;
/// Atom counts up to this size are summed exactly over all ordered triples.
const EXACT_TRIPLES_MAX_ATOMS: usize = 48;
/// Atom counts up to this size get exact pointwise pair sums.
const EXACT_PAIRS_MAX_ATOMS: usize = 400;
const POINTWISE_SAMPLES: usize = 32;
const CHUNK: usize = 1 << 15;

/// Twice the signed area and the three squared side lengths.
fn triangle(x: Point, y: Point, z: Point) -> (f64, f64, f64, f64) {
    let cross = (y - x).cross(z - x);
    let a2 = (x.x - y.x).powi(2) + (x.y - y.y).powi(2);
    let b2 = (y.x - z.x).powi(2) + (y.y - z.y).powi(2);
    let c2 = (z.x - x.x).powi(2) + (z.y - x.y).powi(2);
    (cross, a2, b2, c2)
}

fn is_degenerate(cross: f64, a2: f64, b2: f64, c2: f64) -> bool {
    let longest = a2.max(b2).max(c2);
    longest == 0.0 || cross.abs() <= COLLINEAR_TOL * longest
}

/// Radius of the circle through `x, y, z`; `+∞` for collinear or repeated
/// points.
pub fn circumradius(x: Point, y: Point, z: Point) -> f64 {
    let (cross, a2, b2, c2) = triangle(x, y, z);
    if is_degenerate(cross, a2, b2, c2) {
        return f64::INFINITY;
    }
    (a2 * b2 * c2).sqrt() / (2.0 * cross.abs())
}

/// `R(x,y,z)^{-2} = 4·cross² / (a² b² c²)`, zero when degenerate.
pub fn inverse_circumradius_sq(x: Point, y: Point, z: Point) -> f64 {
    let (cross, a2, b2, c2) = triangle(x, y, z);
    if is_degenerate(cross, a2, b2, c2) {
        return 0.0;
    }
    4.0 * cross * cross / (a2 * b2 * c2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureEstimate {
    /// `c²(μ) = ∭ R(x,y,z)^{-2} dμ(x)dμ(y)dμ(z)`.
    pub value: f64,
    pub stderr: f64,
    /// Largest sampled pointwise curvature `c²_μ(x)`.
    #[serde(rename = "sup_pointwise")]
    pub sup_pointwise: f64,
    pub triples: usize,
    pub seed: u64,
}

/// Menger curvature of `measure`. Small measures are summed exactly over
/// ordered triples of distinct atoms; larger ones are sampled with `triples`
/// weighted draws (repeated-atom triples rejected by scoring zero). Chunks use
/// independent ChaCha streams and are reduced in order.
pub fn menger_curvature(
    measure: &PlanarMeasure,
    triples: usize,
    seed: u64,
) -> Result<CurvatureEstimate> {
    let atoms = measure.atoms();
    let n = atoms.len();
    if n < 3 {
        return Err(Error::Measure(format!(
            "Menger curvature needs at least 3 atoms, got {n}"
        )));
    }
    let (value, stderr) = if n <= EXACT_TRIPLES_MAX_ATOMS {
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                if j == i {
                    continue;
                }
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    let w = atoms[i].weight * atoms[j].weight * atoms[k].weight;
                    sum +=
                        w * inverse_circumradius_sq(atoms[i].point, atoms[j].point, atoms[k].point);
                }
            }
        }
        (sum, 0.0)
    } else {
        if triples == 0 {
            return Err(Error::Argument("triples must be positive".into()));
        }
        let mass = measure.total_mass();
        let dist = weighted_index(measure)?;
        let chunks = triples.div_ceil(CHUNK);
        let partial: Vec<(f64, f64)> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let count = CHUNK.min(triples - c * CHUNK);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(c as u64);
                let (mut s, mut s2) = (0.0, 0.0);
                for _ in 0..count {
                    let (i, j, k) = (
                        dist.sample(&mut rng),
                        dist.sample(&mut rng),
                        dist.sample(&mut rng),
                    );
                    if i == j || j == k || i == k {
                        continue;
                    }
                    let f = inverse_circumradius_sq(atoms[i].point, atoms[j].point, atoms[k].point);
                    s += f;
                    s2 += f * f;
                }
                (s, s2)
            })
            .collect();
        let (s, s2) = partial
            .iter()
            .fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        let nt = triples as f64;
        let mean = s / nt;
        let var = (s2 / nt - mean * mean).max(0.0);
        let scale = mass.powi(3);
        (scale * mean, scale * (var / nt).sqrt())
    };

    let sup_pointwise = pointwise_sup(measure, triples, seed)?;
    Ok(CurvatureEstimate {
        value,
        stderr,
        sup_pointwise,
        triples,
        seed,
    })
}

fn weighted_index(measure: &PlanarMeasure) -> Result<WeightedIndex<f64>> {
    WeightedIndex::new(measure.atoms().iter().map(|a| a.weight))
        .map_err(|e| Error::Measure(format!("cannot sample atoms: {e}")))
}

/// Pointwise curvature `c²_μ(x) = ∬ R(x,y,z)^{-2} dμ(y)dμ(z)`; exact pair
/// sum for small measures, `pairs` weighted draws otherwise.
pub fn pointwise_curvature(
    measure: &PlanarMeasure,
    x: Point,
    pairs: usize,
    seed: u64,
) -> Result<f64> {
    let atoms = measure.atoms();
    let n = atoms.len();
    if n <= EXACT_PAIRS_MAX_ATOMS {
        let mut sum = 0.0;
        for j in 0..n {
            for k in 0..n {
                if j != k {
                    sum += atoms[j].weight
                        * atoms[k].weight
                        * inverse_circumradius_sq(x, atoms[j].point, atoms[k].point);
                }
            }
        }
        return Ok(sum);
    }
    let dist = weighted_index(measure)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = 0.0;
    for _ in 0..pairs {
        let (j, k) = (dist.sample(&mut rng), dist.sample(&mut rng));
        if j != k {
            s += inverse_circumradius_sq(x, atoms[j].point, atoms[k].point);
        }
    }
    Ok(measure.total_mass().powi(2) * s / pairs.max(1) as f64)
}

/// Max of [`pointwise_curvature`] over a seeded weighted sample of atoms.
fn pointwise_sup(measure: &PlanarMeasure, triples: usize, seed: u64) -> Result<f64> {
    let atoms = measure.atoms();
    let points: Vec<Point> = if atoms.len() <= POINTWISE_SAMPLES {
        atoms.iter().map(|a| a.point).collect()
    } else {
        let dist = weighted_index(measure)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
        (0..POINTWISE_SAMPLES)
            .map(|_| atoms[dist.sample(&mut rng)].point)
            .collect()
    };
    let pairs = (triples / POINTWISE_SAMPLES).max(10_000);
    let values = points
        .par_iter()
        .enumerate()
        .map(|(i, &x)| pointwise_curvature(measure, x, pairs, seed.wrapping_add(i as u64 + 1)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    #[test]
    fn circumradius_examples() {
        let o = Point::ORIGIN;
        let r = circumradius(o, Point::new(1.0, 0.0), Point::new(0.0, 1.0));
        assert!((r - SQRT_2 / 2.0).abs() < 1e-15);
        let r = circumradius(o, Point::new(1.0, 0.0), Point::new(0.5, 3f64.sqrt() / 2.0));
        assert!((r - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!(circumradius(o, Point::new(1.0, 0.0), Point::new(2.0, 0.0)).is_infinite());
        assert!(circumradius(o, o, Point::new(2.0, 0.0)).is_infinite());
    }

    #[test]
    fn three_atom_right_triangle() {
        let m = PlanarMeasure::from_points(
            &[Point::ORIGIN, Point::new(1.0, 0.0), Point::new(0.0, 1.0)],
            1.0,
        )
        .unwrap();
        let c = menger_curvature(&m, 1000, 0).unwrap();
        assert_eq!(c.value, 12.0);
        assert_eq!(c.stderr, 0.0);
    }

    #[test]
    fn too_few_atoms() {
        let m = PlanarMeasure::from_points(&[Point::ORIGIN, Point::new(1.0, 0.0)], 1.0).unwrap();
        assert!(menger_curvature(&m, 10, 0).is_err());
    }

    #[test]
    fn line_measure_has_zero_curvature() {
        let pts: Vec<Point> = (0..500).map(|i| Point::new(i as f64 * 0.01, 0.0)).collect();
        let m = PlanarMeasure::from_points(&pts, 0.002).unwrap();
        let c = menger_curvature(&m, 100_000, 3).unwrap();
        assert_eq!(c.value, 0.0);
        assert_eq!(c.sup_pointwise, 0.0);
    }
}
