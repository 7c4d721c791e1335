use std::f64::consts::PI;

use cantor_capacity::cantor::{realize_measure, schedule_example2, CantorTree, Side, Smallness};
use cantor_capacity::capacity::{
    direct_capacity_lower, melnikov_gamma_lower, riesz_norm, teocap2_indices, theorem1_indices,
    wolff_capacity_lower, wolff_capacity_lower_best, CapacityIndices, Convention, Direction,
    QuadratureSpec, WolffSource,
};
use cantor_capacity::potentials::{
    linear_growth_constant, menger_curvature, CurvatureEstimate, QuerySet,
};
use cantor_capacity::{PlanarMeasure, Point};

fn analytic() -> CapacityIndices {
    CapacityIndices::new(2.0 / 3.0, 1.5).unwrap()
}

fn realized_example2(k: f64, depth: usize) -> CantorTree {
    let levels = schedule_example2(k, depth, 4, 0.36, Smallness::Geometric).unwrap();
    CantorTree::build(k, &levels, depth, Smallness::Geometric)
        .unwrap()
        .realize_centers(1)
        .unwrap()
}

fn measure_source<'a>(measure: &'a PlanarMeasure, query: &'a QuerySet) -> WolffSource<'a> {
    WolffSource::Measure {
        measure,
        query,
        k_min: -8,
        k_max: 2,
        seed: Some(0),
    }
}

fn segment(n: usize) -> PlanarMeasure {
    let pts: Vec<Point> = (0..n)
        .map(|i| Point::new((i as f64 + 0.5) / n as f64, 0.0))
        .collect();
    PlanarMeasure::from_points(&pts, 1.0 / n as f64).unwrap()
}

#[test]
fn normalized_measure_returns_its_mass() {
    let tree = realized_example2(2.0, 2);
    let nu = realize_measure(&tree, Side::Source, 4, 3).unwrap();
    let query = QuerySet::for_measure(&nu, 64, 0, 0).unwrap();
    let idx = theorem1_indices(2.0).unwrap();
    let first = wolff_capacity_lower(measure_source(&nu, &query), &idx).unwrap();
    assert!(first.value > 0.0, "{first:?}");
    let c = first.normalization.sup.powf(-1.0 / idx.wolff_exponent());
    let normalized = nu.scale_mass(c);
    let again = wolff_capacity_lower(measure_source(&normalized, &query), &idx).unwrap();
    assert!((again.normalization.sup - 1.0).abs() < 1e-12);
    assert!((again.value - normalized.total_mass()).abs() < 1e-12 * again.value);
}

#[test]
fn wolff_estimate_ignores_mass_scaling() {
    let tree = realized_example2(2.0, 3);
    let nu = realize_measure(&tree, Side::Source, 1, 0).unwrap();
    let query = QuerySet::for_measure(&nu, 64, 16, 2).unwrap();
    let idx = theorem1_indices(2.0).unwrap();
    let base = wolff_capacity_lower(measure_source(&nu, &query), &idx)
        .unwrap()
        .value;
    for c in [1e-3, 0.5, 7.0] {
        let v = wolff_capacity_lower(measure_source(&nu.scale_mass(c), &query), &idx)
            .unwrap()
            .value;
        assert!((v - base).abs() < 1e-12 * base, "c = {c}");
    }
}

#[test]
fn example2_target_capacity_tends_to_the_series_value() {
    let depth = 200;
    let levels = schedule_example2(2.0, depth, 40_000, 0.0, Smallness::Strict).unwrap();
    let tree = CantorTree::build(2.0, &levels, depth, Smallness::Strict).unwrap();
    let est = wolff_capacity_lower(
        WolffSource::Tree {
            tree: &tree,
            side: Side::Target,
            depth,
        },
        &analytic(),
    )
    .unwrap();
    let limit = PI * PI / 6.0 - 1.0;
    let partial: f64 = (1..=depth).map(|n| 1.0 / ((n + 1) as f64).powi(2)).sum();
    assert!((est.normalization.sup - partial).abs() < 1e-12);
    assert!((est.normalization.sup - limit).abs() < 1.0 / depth as f64);
    let expected = partial.powf(-0.5);
    assert!((est.value - expected).abs() < 1e-12 * expected);
    assert_eq!(est.direction, Direction::LowerBound);
    assert_eq!(est.convention, Convention::Wolff);
    assert_eq!(est.normalization.query_set, "tree-formula/target/depth200");
}

#[test]
fn divergent_potential_gives_zero_with_rate() {
    let atom = PlanarMeasure::from_points(&[Point::ORIGIN], 2.0).unwrap();
    let query = QuerySet::new("origin", vec![Point::ORIGIN]);
    let est = wolff_capacity_lower(
        WolffSource::Measure {
            measure: &atom,
            query: &query,
            k_min: -40,
            k_max: 0,
            seed: None,
        },
        &analytic(),
    )
    .unwrap();
    assert_eq!(est.value, 0.0);
    assert!(est.divergence_rate.unwrap() > 0.0);
    assert!(est.to_json().contains("divergence_rate"));
}

#[test]
fn vanishing_potential_is_an_error() {
    let m = segment(10);
    let far = QuerySet::new("far", vec![Point::new(1e6, 0.0)]);
    assert!(wolff_capacity_lower(measure_source(&m, &far), &analytic()).is_err());
    let empty = QuerySet::new("empty", vec![]);
    assert!(wolff_capacity_lower(measure_source(&m, &empty), &analytic()).is_err());
}

#[test]
fn tree_estimate_is_exactly_homogeneous() {
    let tree = realized_example2(2.0, 4);
    let idx = theorem1_indices(2.0).unwrap();
    let value = |t: &CantorTree| {
        wolff_capacity_lower(
            WolffSource::Tree {
                tree: t,
                side: Side::Source,
                depth: 4,
            },
            &idx,
        )
        .unwrap()
        .value
    };
    let base = value(&tree);
    for lambda in [0.25f64, 0.5, 2.0] {
        let expected = base * lambda.powf(idx.homogeneity());
        let got = value(&tree.scaled(lambda));
        assert!((got - expected).abs() < 1e-12 * expected, "λ = {lambda}");
    }
}

#[test]
fn best_estimate_never_drops_when_the_set_grows() {
    let tree = realized_example2(2.0, 3);
    let nu = realize_measure(&tree, Side::Source, 1, 0).unwrap();
    let (left, right): (Vec<_>, Vec<_>) = nu.atoms().iter().partition(|a| a.point.x < 0.0);
    let small = PlanarMeasure::new(left).unwrap();
    let extra = PlanarMeasure::new(right).unwrap();
    let big = small.union(&extra);
    let query = QuerySet::for_measure(&big, 64, 0, 0).unwrap();
    let idx = theorem1_indices(2.0).unwrap();
    let before =
        wolff_capacity_lower_best(std::slice::from_ref(&small), &query, &idx, -14, 2).unwrap();
    let after = wolff_capacity_lower_best(&[small, big], &query, &idx, -14, 2).unwrap();
    assert!(after.value >= before.value);
}

#[test]
fn quadrature_of_an_empty_measure_is_zero() {
    let spec = QuadratureSpec::default();
    let est = direct_capacity_lower(&PlanarMeasure::empty(), &analytic(), &spec).unwrap();
    assert_eq!(est.value, 0.0);
    let zero = segment(5).scale_mass(0.0);
    assert_eq!(
        direct_capacity_lower(&zero, &analytic(), &spec)
            .unwrap()
            .value,
        0.0
    );
}

#[test]
fn quadrature_estimate_is_homogeneous() {
    let tree = realized_example2(2.0, 2);
    let nu = realize_measure(&tree, Side::Source, 4, 0).unwrap();
    let idx = theorem1_indices(2.0).unwrap();
    let spec = QuadratureSpec::default();
    let base = direct_capacity_lower(&nu, &idx, &spec).unwrap();
    assert_eq!(base.convention, Convention::Definitional);
    for lambda in [0.25f64, 0.5, 2.0] {
        let got = direct_capacity_lower(&nu.scale_geometry(lambda), &idx, &spec)
            .unwrap()
            .value;
        let expected = base.value * lambda.powf(idx.homogeneity());
        assert!(
            (got / expected - 1.0).abs() <= 0.01,
            "λ = {lambda}: {got} vs {expected}"
        );
    }
}

#[test]
fn quadrature_norm_is_linear_in_mass() {
    let m = segment(30);
    let idx = CapacityIndices::new(0.5, 2.0).unwrap();
    let spec = QuadratureSpec::default();
    let (n1, cells) = riesz_norm(&m, &idx, &spec).unwrap();
    let (n3, _) = riesz_norm(&m.scale_mass(3.0), &idx, &spec).unwrap();
    assert!(cells >= spec.base_cells * spec.base_cells);
    assert!((n3 - 3.0 * n1).abs() < 1e-12 * n3);
}

#[test]
fn quadrature_and_wolff_estimates_stay_comparable() {
    let idx = teocap2_indices(0.5, 2.0, 2.0).unwrap().source;
    let spec = QuadratureSpec::default();
    let mut ratios = Vec::new();
    for depth in 2..=4 {
        let tree = realized_example2(2.0, depth);
        let spl = 64usize.div_ceil(4usize.pow(depth as u32)).max(1);
        let nu = realize_measure(&tree, Side::Source, spl, 0).unwrap();
        let direct = direct_capacity_lower(&nu, &idx, &spec)
            .unwrap()
            .value
            .powf(1.0 / idx.p);
        let query = QuerySet::for_measure(&nu, 128, 0, 0).unwrap();
        let k_min = tree.generation(depth).log_s.log2().floor() as i32 - 2;
        let wolff = wolff_capacity_lower(
            WolffSource::Measure {
                measure: &nu,
                query: &query,
                k_min,
                k_max: 1,
                seed: None,
            },
            &idx,
        )
        .unwrap()
        .value;
        ratios.push(direct / wolff);
    }
    for r in &ratios {
        assert!(*r <= 50.0 && *r >= 1.0 / 50.0, "ratios {ratios:?}");
    }
}

#[test]
fn melnikov_admissible_measure_keeps_its_mass() {
    let m = segment(20).scale_mass(0.3);
    let curvature = CurvatureEstimate {
        value: 0.0,
        stderr: 0.0,
        sup_pointwise: 0.5,
        triples: 0,
        seed: 0,
    };
    let est = melnikov_gamma_lower(&m, &curvature, 1.0).unwrap();
    assert!((est.value - 0.3).abs() < 1e-15);
    assert_eq!(est.direction, Direction::ComparabilityProxy);
    assert_eq!(est.convention, Convention::Curvature);
}

#[test]
fn melnikov_value_ignores_mass_when_growth_binds() {
    let tree = realized_example2(2.0, 2);
    let mu = realize_measure(&tree, Side::Target, 8, 1).unwrap();
    let estimate = |m: &PlanarMeasure| {
        let c = menger_curvature(m, 100_000, 4).unwrap();
        let g = linear_growth_constant(m, -8, 1, &[]);
        melnikov_gamma_lower(m, &c, g).unwrap()
    };
    let one = estimate(&mu);
    let two = estimate(&mu.scale_mass(2.0));
    assert_eq!(one.normalization.query_set, "linear-growth");
    assert!((one.value - two.value).abs() < 1e-12 * one.value);
}

#[test]
fn segment_proxy_does_not_vanish() {
    let m = segment(400);
    let curvature = menger_curvature(&m, 100_000, 0).unwrap();
    assert_eq!(curvature.value, 0.0);
    assert_eq!(curvature.sup_pointwise, 0.0);
    let est = melnikov_gamma_lower(&m, &curvature, 1.0).unwrap();
    assert!((est.value - 1.0).abs() < 1e-9);
    // Closed balls of radius r about interior points hold mass 2r, so the
    // measured dyadic growth constant is 2.
    let g = linear_growth_constant(&m, -6, 1, &[]);
    assert!((g - 2.0).abs() < 0.1, "growth {g}");
}

#[test]
fn melnikov_rejects_unbounded_growth() {
    let m = segment(3);
    let c = menger_curvature(&m, 10, 0).unwrap();
    assert!(melnikov_gamma_lower(&m, &c, f64::INFINITY).is_err());
    assert!(melnikov_gamma_lower(&m, &c, 0.0).is_err());
}

#[test]
fn estimate_json_has_the_documented_fields() {
    let tree = realized_example2(1.0, 2);
    let est = wolff_capacity_lower(
        WolffSource::Tree {
            tree: &tree,
            side: Side::Target,
            depth: 2,
        },
        &analytic(),
    )
    .unwrap();
    let v: serde_json::Value = serde_json::from_str(&est.to_json()).unwrap();
    for key in [
        "value",
        "direction",
        "alpha",
        "p",
        "homogeneity",
        "convention",
        "normalization",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["direction"], "lower_bound");
    assert_eq!(v["normalization"]["seed"], 1);
    assert!(v.get("divergence_rate").is_none());
}
