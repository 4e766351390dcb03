use projmetric::{construct_point_reflection, is_projective_center, ConvexBody32, MetricSpace32, Point32};

#[test]
fn single_precision_geometry() {
    let disk = MetricSpace32::hilbert(ConvexBody32::unit_disk());
    let d = disk.distance(&Point32::new(0.0, 0.0), &Point32::new(0.5, 0.0)).unwrap();
    assert!((d - 0.5 * 3f32.ln()).abs() < 1e-5);

    let o = Point32::new(0.3, -0.2);
    let report = is_projective_center(disk.body(), &o, 32, 1e-3).unwrap();
    assert!(report.is_projective_center);
    let refl = construct_point_reflection(&disk, &o).unwrap();
    let x = Point32::new(-0.1, 0.4);
    let back = refl.apply(&refl.apply(&x).unwrap()).unwrap();
    assert!((back - x).norm() < 1e-4);

    let ball = ConvexBody32::unit_pnorm_ball(4.0).unwrap();
    let mink = MetricSpace32::minkowski(ball.clone()).unwrap();
    let m = mink.metric_midpoint(&Point32::new(-1.0, 0.0), &Point32::new(1.0, 2.0)).unwrap();
    assert!((m - Point32::new(0.0, 1.0)).norm() < 1e-6);
    let off = is_projective_center(&ball, &Point32::new(0.4, 0.3), 32, 1e-4).unwrap();
    assert!(!off.is_projective_center);
}
