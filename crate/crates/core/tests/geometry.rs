mod common;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use graded_fem::geometry::{make_grading, GeometryError, Point, PolygonDomain};
use proptest::prelude::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn named_domain_angles() {
    let sq = PolygonDomain::named("square").unwrap();
    assert!(sq.interior_angles().iter().all(|&a| close(a, PI / 2.0, 1e-15)));

    let l = PolygonDomain::named("lshape").unwrap();
    let angles = l.interior_angles();
    assert_eq!(angles.iter().filter(|&&a| close(a, PI / 2.0, 1e-15)).count(), 5);
    assert!(close(angles[3], 1.5 * PI, 1e-15));
    assert_eq!(l.singular_vertices(), vec![3]);
    assert!(close(l.regularity_index().0, 2.0 / 3.0, 1e-15));

    let tri = PolygonDomain::named("triangle").unwrap();
    let t = tri.interior_angles();
    assert!(close(t[0], PI / 2.0, 1e-15) && close(t[1], PI / 4.0, 1e-15) && close(t[2], PI / 4.0, 1e-15));

    let oct = PolygonDomain::named("octagon").unwrap();
    assert!(oct.interior_angles().iter().all(|&a| close(a, 0.75 * PI, 1e-14)));
    assert_eq!(oct.regularity_index().0, 1.0);
    assert!(oct.is_convex());

    let plus = PolygonDomain::named("plus").unwrap();
    assert_eq!(plus.singular_vertices(), vec![2, 5, 8, 11]);
}

#[test]
fn grading_examples() {
    let l = PolygonDomain::named("lshape").unwrap();
    let at3 = |a: f64| BTreeMap::from([(3, a)]);
    assert_eq!(make_grading(&l, 0.5, &at3(0.5)).unwrap().kappa_at(3), 0.5);
    assert_eq!(make_grading(&l, 1.0, &at3(0.5)).unwrap().kappa_at(3), 0.25);
    let k = make_grading(&l, 1.0, &at3(0.3010299957)).unwrap().kappa_at(3);
    assert!(close(k, 0.1, 1e-10), "{k}");
    // a must stay below π/α = 2/3
    assert!(matches!(
        make_grading(&l, 1.0, &at3(0.7)),
        Err(GeometryError::Grading { vertex: 3, .. })
    ));
}

#[test]
fn clockwise_and_self_intersecting_rejected() {
    let cw: Vec<Point> = [[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]]
        .into_iter()
        .map(Point::from)
        .collect();
    assert!(PolygonDomain::new(cw).is_err());
    let bowtie: Vec<Point> = [[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]]
        .into_iter()
        .map(Point::from)
        .collect();
    assert!(PolygonDomain::new(bowtie).is_err());
}

fn transform(p: &PolygonDomain, angle: f64, scale: f64, shift: Point) -> PolygonDomain {
    let (s, c) = angle.sin_cos();
    let pts = p
        .vertices()
        .iter()
        .map(|v| Point::new(scale * (c * v.x - s * v.y), scale * (s * v.x + c * v.y)) + shift)
        .collect();
    PolygonDomain::new(pts).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn exterior_angles_sum_to_two_pi(seed in any::<u64>(), n in 3usize..14) {
        let p = common::star_polygon(&mut common::rng(seed), n);
        let sum: f64 = p.interior_angles().iter().map(|a| PI - a).sum();
        prop_assert!((sum - 2.0 * PI).abs() <= 1e-10, "sum {}", sum);
    }

    #[test]
    fn regularity_invariant_under_similarity(
        seed in any::<u64>(),
        n in 3usize..12,
        angle in -PI..PI,
        log_scale in -3.0f64..3.0,
        dx in -5.0f64..5.0,
        dy in -5.0f64..5.0,
    ) {
        let p = common::star_polygon(&mut common::rng(seed), n);
        let q = transform(&p, angle, log_scale.exp(), Point::new(dx, dy));
        let (b0, per0) = p.regularity_index();
        let (b1, per1) = q.regularity_index();
        prop_assert!((b0 - b1).abs() <= 1e-12);
        for (x, y) in per0.iter().zip(&per1) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
        prop_assert_eq!(p.singular_vertices(), q.singular_vertices());
    }

    #[test]
    fn grading_monotone_in_a(theta in 0.7f64..=1.0, a1 in 0.05f64..0.66, a2 in 0.05f64..0.66) {
        let l = PolygonDomain::named("lshape").unwrap();
        let (lo, hi) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
        prop_assume!(hi <= theta);
        let k_lo = make_grading(&l, theta, &BTreeMap::from([(3, lo)])).unwrap().kappa_at(3);
        let k_hi = make_grading(&l, theta, &BTreeMap::from([(3, hi)])).unwrap().kappa_at(3);
        prop_assert!(k_lo <= k_hi);
        if lo < hi {
            prop_assert!(k_lo < k_hi);
        }
    }
}
