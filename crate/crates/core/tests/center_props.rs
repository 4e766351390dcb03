use std::sync::LazyLock;

use nalgebra::{Matrix2, Matrix3, Rotation2, Vector2};
use proptest::prelude::*;

use projmetric::{
    conjugate_center, construct_point_reflection, is_projective_center, kronecker_orbit, max_gap, pencil_orbit,
    sample_ball_pairs, translate, ConvexBody64, MetricSpace64, OrbitLimits, Point64, Projectivity64, Translation,
};

fn p(x: f64, y: f64) -> Point64 {
    Point64::new(x, y)
}

/// Spaces in which every interior point is a center.
static SYMMETRIC: LazyLock<Vec<MetricSpace64>> = LazyLock::new(|| {
    let r = Rotation2::new(-0.4).into_inner();
    let ellipse = ConvexBody64::ellipse(p(0.2, 0.3), r * Matrix2::new(0.25, 0.0, 0.0, 1.0) * r.transpose()).unwrap();
    let map = Projectivity64::new(Matrix3::new(1.0, 0.1, 0.0, -0.2, 1.0, 0.1, 0.2, 0.15, 1.0)).unwrap();
    vec![
        MetricSpace64::hilbert(ConvexBody64::unit_disk()),
        MetricSpace64::hilbert(ellipse.clone()),
        MetricSpace64::hilbert(ConvexBody64::projective_image(ellipse, map).unwrap()),
        MetricSpace64::minkowski(ConvexBody64::unit_pnorm_ball(4.0).unwrap()).unwrap(),
    ]
});

fn inside(space: &MetricSpace64, (s, angle): (f64, f64)) -> Point64 {
    let body = space.body();
    let c = body.center();
    let dir = Vector2::new(angle.cos(), angle.sin());
    c + dir * (s * body.chord_through(&c, &dir).unwrap().t_d)
}

fn polar(max: f64) -> impl Strategy<Value = (f64, f64)> {
    (0.0..max, 0.0..std::f64::consts::TAU)
}

/// Strictly between `a` and `b` (collinear input).
fn strictly_between(x: &Point64, a: &Point64, b: &Point64) -> bool {
    let ab = b - a;
    let t = (x - a).dot(&ab) / ab.norm_squared();
    t > 1e-9 && t < 1.0 - 1e-9
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reflection_bundle(k in 0..4usize, o in polar(0.8), seed in any::<u64>()) {
        let space = &SYMMETRIC[k];
        let o = inside(space, o);
        let refl = construct_point_reflection(space, &o).unwrap();
        prop_assert!(refl.involution_error() <= 1e-9);
        prop_assert!((refl.apply(&o).unwrap() - o).norm() <= 1e-10);
        if space.is_hilbert() {
            for i in 0..20 {
                let a = std::f64::consts::PI * i as f64 / 20.0;
                let chord = space.body().chord_through(&o, &Vector2::new(a.cos(), a.sin())).unwrap();
                let (rc, rd) = (refl.apply(&chord.c).unwrap(), refl.apply(&chord.d).unwrap());
                prop_assert!((rc - chord.d).norm() <= 1e-8 && (rd - chord.c).norm() <= 1e-8);
            }
        }
        let pairs = sample_ball_pairs(space, &o, 1.5, 100, seed).unwrap();
        prop_assert!(refl.isometry_error(space, &pairs).unwrap() <= 1e-7);
    }

    #[test]
    fn segments_order_and_displacement(
        k in 0..4usize,
        base in polar(0.3),
        angle in 0.0..std::f64::consts::PI,
        ts in prop::array::uniform3(-0.25..0.25f64),
    ) {
        let space = &SYMMETRIC[k];
        let base = inside(space, base);
        let dir = Vector2::new(angle.cos(), angle.sin());
        let reach = space.body().chord_through(&base, &dir).unwrap();
        let scale = reach.t_d.min(-reach.t_c);
        let at = |t: f64| base + dir * (t * scale);
        prop_assume!((0..3).all(|i| (0..i).all(|j| (ts[i] - ts[j]).abs() > 0.02)));
        let (pp, qq, o) = (at(ts[0]), at(ts[1]), at(ts[2]));
        let rho_p = construct_point_reflection(space, &pp).unwrap();
        let rho_q = construct_point_reflection(space, &qq).unwrap();
        let (po, qo) = (rho_p.apply(&o).unwrap(), rho_q.apply(&o).unwrap());
        prop_assert_eq!(strictly_between(&o, &pp, &qq), strictly_between(&o, &po, &qo));

        let tau = Translation::new(rho_p, rho_q);
        if let Ok(moved) = translate(space, &tau, &o) {
            let expected = 2.0 * space.distance(&pp, &qq).unwrap();
            prop_assert!((space.distance(&moved, &o).unwrap() - expected).abs() <= 1e-7);
        }
    }

    #[test]
    fn conjugation_agrees_with_direct_construction(k in 0..4usize, o in polar(0.5), q in polar(0.5), x in polar(0.7)) {
        let space = &SYMMETRIC[k];
        let (o, q, x) = (inside(space, o), inside(space, q), inside(space, x));
        let rho_o = construct_point_reflection(space, &o).unwrap();
        let rho_q = construct_point_reflection(space, &q).unwrap();
        let image = conjugate_center(space, &rho_o, &q).unwrap();
        let direct = construct_point_reflection(space, &image).unwrap();
        let conjugated = rho_o.conjugate(&rho_q).unwrap();
        prop_assert!((direct.apply(&x).unwrap() - conjugated.apply(&x).unwrap()).norm() <= 1e-7);
    }

    #[test]
    fn kronecker_gaps_shrink_with_budget(q in 1.1..3.0f64) {
        let irrational = q + 1e-3 * std::f64::consts::E;
        let coarse = kronecker_orbit(1.0, irrational, 0.0, 10.0, 50).unwrap();
        let fine = kronecker_orbit(1.0, irrational, 0.0, 10.0, 400).unwrap();
        prop_assert!(coarse.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(coarse.iter().all(|v| fine.iter().any(|u| (u - v).abs() < 1e-9)));
        prop_assert!(max_gap(&fine, 0.0, 10.0) <= max_gap(&coarse, 0.0, 10.0));
    }
}

#[test]
fn limits_of_centers_are_centers() {
    let body = ConvexBody64::unit_disk();
    for i in 0..10 {
        let angle = 0.6 * i as f64;
        let limit = p(0.9 * angle.cos(), 0.9 * angle.sin()) * (0.2 + 0.08 * i as f64);
        let mut residual = 0.0f64;
        for n in 1..=12 {
            let wobble = Vector2::new((n as f64).sin(), (n as f64).cos()) * 0.3 / (n * n) as f64;
            let x = limit + wobble;
            if !body.contains(&x) {
                continue;
            }
            let report = is_projective_center(&body, &x, 64, 1e-6).unwrap();
            assert!(report.is_projective_center);
            residual = residual.max(report.fit_residual);
        }
        let at_limit = is_projective_center(&body, &limit, 64, 1e-6).unwrap();
        assert!(at_limit.is_projective_center, "limit {limit:?}");
        assert!(residual < 1e-8);
    }
}

#[test]
fn hilbert_pencil_orbit_consists_of_centers() {
    let space = &SYMMETRIC[1];
    let tip = space.body().center();
    let pencil = [(tip + Vector2::new(0.3, 0.0), tip + Vector2::new(0.3 * 2f64.sqrt(), 0.0))];
    let orbit =
        pencil_orbit(space, &tip, &pencil, 3, &OrbitLimits { window: Some(2.0), ..OrbitLimits::default() }).unwrap();
    assert!(orbit.len() > 3);
    for x in &orbit {
        assert!(space.body().contains(x));
        assert!(space.distance(&tip, x).unwrap() <= 2.0 + 1e-9);
        assert!(is_projective_center(space.body(), x, 64, 1e-6).unwrap().is_projective_center);
    }
}

#[test]
fn pencil_seeds_must_be_centers() {
    let space = MetricSpace64::hilbert(ConvexBody64::unit_pnorm_ball(4.0).unwrap());
    let err = pencil_orbit(&space, &p(0., 0.), &[(p(0.3, 0.1), p(0.6, 0.2))], 1, &OrbitLimits::default());
    assert!(matches!(err, Err(projmetric::GeometryError::NotACenter { .. })));
}
