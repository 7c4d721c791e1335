use proptest::prelude::*;

use cantor_capacity::capacity::CapacityIndices;
use cantor_capacity::cli::parse_depths;
use cantor_capacity::gauges::{eps_mu_a, psi_a};
use cantor_capacity::potentials::{circumradius, inverse_circumradius_sq, wolff_dyadic};
use cantor_capacity::{Atom, PlanarMeasure, Point};

fn point() -> impl Strategy<Value = Point> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(x, y)| Point::new(x, y))
}

fn measure() -> impl Strategy<Value = PlanarMeasure> {
    prop::collection::vec((point(), 0.01..2.0f64), 1..40).prop_map(|atoms| {
        PlanarMeasure::new(
            atoms
                .into_iter()
                .map(|(point, weight)| Atom { point, weight })
                .collect(),
        )
        .unwrap()
    })
}

fn triangle() -> impl Strategy<Value = (Point, Point, Point)> {
    (point(), point(), point()).prop_filter("well separated, non-degenerate", |(x, y, z)| {
        let area = (*y - *x).cross(*z - *x).abs();
        x.dist(*y).min(y.dist(*z)).min(x.dist(*z)) > 1e-2 && area > 1e-2
    })
}

proptest! {
    #[test]
    fn circumradius_is_symmetric_and_rigid(
        (x, y, z) in triangle(),
        angle in 0.0..std::f64::consts::TAU,
        shift in point(),
        lambda in 0.1..10.0f64,
    ) {
        let r = circumradius(x, y, z);
        for perm in [circumradius(y, x, z), circumradius(z, y, x), circumradius(y, z, x)] {
            prop_assert!((perm - r).abs() <= 1e-9 * r);
        }
        let moved = circumradius(x.rotate(angle) + shift, y.rotate(angle) + shift, z.rotate(angle) + shift);
        prop_assert!((moved - r).abs() <= 1e-8 * r);
        let scaled = circumradius(x * lambda, y * lambda, z * lambda);
        prop_assert!((scaled - lambda * r).abs() <= 1e-9 * lambda * r);
        let inv = inverse_circumradius_sq(x, y, z);
        prop_assert!((inv * r * r - 1.0).abs() < 1e-9);
    }

    #[test]
    fn collinear_points_have_zero_curvature(x in point(), dir in point(), s in -5.0..5.0f64, t in -5.0..5.0f64) {
        prop_assume!(dir.norm() > 1e-3);
        let (y, z) = (x + dir * s, x + dir * t);
        prop_assert_eq!(inverse_circumradius_sq(x, y, z), 0.0);
    }

    #[test]
    fn psi_halving_costs_at_most_two_to_the_one_plus_a(v in point(), a in 0.01..3.0f64) {
        let half = psi_a(v * 0.5, a);
        let full = psi_a(v, a);
        prop_assert!(full > 0.0 && full <= 1.0);
        prop_assert!(half >= full);
        prop_assert!(half <= 2f64.powf(1.0 + a) * full * (1.0 + 1e-12));
    }

    #[test]
    fn smoothed_density_doubling(mu in measure(), x in point(), log_t in -8.0..4.0f64, a in 0.05..2.0f64) {
        let t = log_t.exp();
        let e1 = eps_mu_a(&mu, x, t, a);
        let e2 = eps_mu_a(&mu, x, 2.0 * t, a);
        prop_assert!(e2 <= 2f64.powf(a) * e1 * (1.0 + 1e-12));
        prop_assert!(e1 >= mu.ball_mass(x, t) / (2.0 * t) * (1.0 - 1e-12));
        prop_assert!(e1 <= mu.total_mass() / t * (1.0 + 1e-12));
    }

    #[test]
    fn ball_mass_is_monotone(mu in measure(), x in point(), r1 in 0.0..20.0f64, r2 in 0.0..20.0f64) {
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        prop_assert!(mu.ball_mass(x, lo) <= mu.ball_mass(x, hi));
        prop_assert!(mu.ball_mass(x, hi) <= mu.total_mass() * (1.0 + 1e-12));
    }

    #[test]
    fn dyadic_wolff_scales_with_mass(mu in measure(), x in point(), c in 0.01..100.0f64, k_min in -12..-2i32) {
        let idx = CapacityIndices::new(2.0 / 3.0, 1.5).unwrap();
        let base = wolff_dyadic(&mu, x, &idx, k_min, 5).unwrap();
        let scaled = wolff_dyadic(&mu.scale_mass(c), x, &idx, k_min, 5).unwrap();
        let factor = c.powf(idx.wolff_exponent());
        for (a, b) in base.entries.iter().zip(&scaled.entries) {
            prop_assert!((b.contribution - factor * a.contribution).abs() <= 1e-12 * factor * a.contribution.max(1e-300));
        }
    }

    #[test]
    fn dyadic_wolff_grows_with_the_measure(mu in measure(), extra in measure(), x in point()) {
        let idx = CapacityIndices::new(0.5, 2.0).unwrap();
        let small = wolff_dyadic(&mu, x, &idx, -10, 5).unwrap();
        let big = wolff_dyadic(&mu.union(&extra), x, &idx, -10, 5).unwrap();
        for (a, b) in small.entries.iter().zip(&big.entries) {
            prop_assert!(b.contribution >= a.contribution * (1.0 - 1e-12));
        }
        prop_assert!(big.total() >= small.total() * (1.0 - 1e-12));
    }

    #[test]
    fn depth_ranges_round_trip(a in 0usize..1000, len in 0usize..1000) {
        let b = a + len;
        prop_assert_eq!(parse_depths(&format!("{a}..{b}")), Ok(a..=b));
        prop_assert_eq!(parse_depths(&format!("{a}..={b}")), Ok(a..=b));
        if len > 0 {
            let reversed = format!("{}..{}", b, a);
            prop_assert!(parse_depths(&reversed).is_err());
        }
    }
}
