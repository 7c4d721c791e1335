//! Finite disjoint packings of equal disks in the unit disk.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geom::Point;

const TOL: f64 = 1e-12;
const HEX_OFFSETS: usize = 64;
/// Smallest radius laid out explicitly by [`pack_level`].
pub(crate) const MIN_LAYOUT_RADIUS: f64 = 1e-100;

/// Centers of `m` pairwise disjoint disks of radius `rho` inside the closed
/// unit disk. Tries seeded hexagonal lattices first, then ring layouts.
pub fn pack_disks(m: usize, rho: f64, seed: u64) -> Result<Vec<Point>> {
    if m == 0 {
        return Err(Error::Packing("at least one disk is required".into()));
    }
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::Packing(format!("radius {rho} must lie in (0, 1]")));
    }
    let area = m as f64 * rho * rho;
    if area > 1.0 + TOL {
        return Err(Error::Packing(format!(
            "area bound violated: M·ρ² = {area} > 1 (M = {m}, ρ = {rho})"
        )));
    }
    if m == 1 {
        return Ok(vec![Point::ORIGIN]);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..HEX_OFFSETS {
        let (offset, angle) = if attempt == 0 {
            (Point::ORIGIN, 0.0)
        } else {
            (
                Point::new(rng.gen::<f64>() * 2.0 * rho, rng.gen::<f64>() * 2.0 * rho),
                rng.gen::<f64>() * PI / 3.0,
            )
        };
        if let Some(c) = hex_layout(m, rho, offset, angle) {
            if is_valid_packing(&c, rho) {
                return Ok(c);
            }
        }
    }
    for layout in [
        ring_layout(m, rho, false),
        ring_layout(m, rho, true),
        concentric_rings(m, rho),
    ]
    .into_iter()
    .flatten()
    {
        if is_valid_packing(&layout, rho) {
            return Ok(layout);
        }
    }
    Err(Error::Packing(format!(
        "no hexagonal or ring layout fits M = {m} disks of radius ρ = {rho} \
         (M·ρ² = {area}; hexagonal density bound is π/(2√3) ≈ 0.9069)"
    )))
}

/// [`pack_disks`] for a level whose relative radius is `exp(log_rho)`, which
/// may underflow. Radii below [`MIN_LAYOUT_RADIUS`] reuse the layout for that
/// radius: a packing of larger disks stays a packing for smaller ones.
pub(crate) fn pack_level(m: usize, log_rho: f64, seed: u64) -> Result<Vec<Point>> {
    pack_disks(m, log_rho.exp().max(MIN_LAYOUT_RADIUS), seed)
}

/// Disks lie in the closed unit disk and have disjoint interiors.
pub fn is_valid_packing(centers: &[Point], rho: f64) -> bool {
    let inside = centers.iter().all(|c| c.norm() + rho <= 1.0 + TOL);
    let disjoint = centers.iter().enumerate().all(|(i, a)| {
        centers[i + 1..]
            .iter()
            .all(|b| a.dist(*b) >= 2.0 * rho * (1.0 - TOL))
    });
    inside && disjoint
}

fn hex_layout(m: usize, rho: f64, offset: Point, angle: f64) -> Option<Vec<Point>> {
    let spacing = 2.0 * rho;
    let reach = 1.0 - rho + TOL;
    let e1 = Point::new(spacing, 0.0).rotate(angle);
    let e2 = Point::new(spacing * 0.5, spacing * 3f64.sqrt() * 0.5).rotate(angle);
    // The window only needs to contain the `m` lattice points nearest to the
    // origin, which lie within about `sqrt(m)` spacings.
    let span = ((1.0 / rho).ceil() + 2.0).min((m as f64).sqrt().ceil() + 4.0) as i64;
    let mut pts = Vec::new();
    for i in -span..=span {
        for j in -span..=span {
            let p = offset + e1 * i as f64 + e2 * j as f64;
            if p.norm() <= reach {
                pts.push(p);
            }
        }
    }
    if pts.len() < m {
        return None;
    }
    pts.sort_by(|a, b| {
        a.norm()
            .total_cmp(&b.norm())
            .then(a.x.total_cmp(&b.x))
            .then(a.y.total_cmp(&b.y))
    });
    pts.truncate(m);
    Some(pts)
}

fn ring_layout(m: usize, rho: f64, with_center: bool) -> Option<Vec<Point>> {
    let on_ring = if with_center { m - 1 } else { m };
    if on_ring == 0 {
        return None;
    }
    let c = 1.0 - rho;
    let mut pts: Vec<Point> = (0..on_ring)
        .map(|i| Point::new(c, 0.0).rotate(2.0 * PI * i as f64 / on_ring as f64))
        .collect();
    if with_center {
        pts.push(Point::ORIGIN);
    }
    Some(pts)
}

fn concentric_rings(m: usize, rho: f64) -> Option<Vec<Point>> {
    let mut pts = Vec::with_capacity(m);
    let mut c = 1.0 - rho;
    while pts.len() < m {
        if c < rho * (1.0 - TOL) {
            // room for a single central disk only if the last ring left it
            if c >= -rho * TOL {
                pts.push(Point::ORIGIN);
            }
            break;
        }
        let n = if c <= rho {
            1
        } else {
            ((PI / (rho / c).asin()) * (1.0 + TOL)).floor() as usize
        };
        let take = n.min(m - pts.len());
        for i in 0..take {
            pts.push(Point::new(c, 0.0).rotate(2.0 * PI * i as f64 / n as f64));
        }
        c -= 2.0 * rho;
    }
    (pts.len() == m).then_some(pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_disk_at_origin() {
        assert_eq!(pack_disks(1, 0.5, 3).unwrap(), vec![Point::ORIGIN]);
    }

    #[test]
    fn seven_disk_hexagon() {
        let c = pack_disks(7, 1.0 / 3.0, 0).unwrap();
        assert_eq!(c.len(), 7);
        assert!(is_valid_packing(&c, 1.0 / 3.0));
        assert!(c.iter().any(|p| p.norm() < 1e-12));
    }

    #[test]
    fn area_bound_error() {
        let e = pack_disks(4, 0.9, 0).unwrap_err();
        assert!(e.to_string().contains("area bound"));
    }

    #[test]
    fn four_disks_need_a_ring() {
        let c = pack_disks(4, 0.4, 11).unwrap();
        assert!(is_valid_packing(&c, 0.4));
        assert!(pack_disks(4, 0.42, 11).is_err());
    }

    #[test]
    fn deterministic_for_seed() {
        assert_eq!(
            pack_disks(12, 0.2, 5).unwrap(),
            pack_disks(12, 0.2, 5).unwrap()
        );
    }

    #[test]
    fn many_small_disks() {
        for (m, rho) in [(20, 0.19), (50, 0.12), (400, 0.04)] {
            let c = pack_disks(m, rho, 1).unwrap();
            assert_eq!(c.len(), m);
            assert!(is_valid_packing(&c, rho));
        }
    }
}
