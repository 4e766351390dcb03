use nalgebra::{Matrix3, Vector2};
use proptest::prelude::*;

use projmetric::projective::are_collinear;
use projmetric::{
    affine_point_reflection, cross_ratio, harmonic_conjugate, projectivity_from_correspondence, HomogeneousPoint64,
    Point64, Projectivity64,
};

fn coord() -> impl Strategy<Value = f64> {
    -5.0..5.0f64
}

fn point() -> impl Strategy<Value = Point64> {
    (coord(), coord()).prop_map(|(x, y)| Point64::new(x, y))
}

fn well_conditioned_map() -> impl Strategy<Value = Projectivity64> {
    prop::array::uniform9(-1.0..1.0f64)
        .prop_map(|e| Matrix3::from_row_slice(&e) + Matrix3::identity() * 2.0)
        .prop_filter("well conditioned", |m| {
            let s = m.singular_values();
            s.min() > 0.2 * s.max()
        })
        .prop_map(|m| Projectivity64::new(m).unwrap())
}

/// Four distinct collinear points `base + t_i·dir`, parameters separated.
fn collinear_four() -> impl Strategy<Value = [Point64; 4]> {
    (point(), 0.0..std::f64::consts::PI, prop::array::uniform4(-3.0..3.0f64))
        .prop_filter("separated parameters", |(_, _, t)| (0..4).all(|i| (0..i).all(|j| (t[i] - t[j]).abs() > 0.1)))
        .prop_map(|(base, angle, t)| {
            let dir = Vector2::new(angle.cos(), angle.sin());
            t.map(|ti| base + dir * ti)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cross_ratio_is_projectively_invariant(pts in collinear_four(), map in well_conditioned_map()) {
        let before = cross_ratio(pts[0], pts[1], pts[2], pts[3]).unwrap();
        let img = pts.map(|p| map.apply(&HomogeneousPoint64::from(p)));
        let after = cross_ratio(img[0], img[1], img[2], img[3]).unwrap();
        prop_assert!((before - after).abs() <= 1e-9 * before.abs().max(1.0), "{} vs {}", before, after);
    }

    #[test]
    fn harmonic_conjugate_is_an_involution(pts in collinear_four()) {
        let [a, b, o, _] = pts;
        let p = harmonic_conjugate(a, b, o).unwrap();
        prop_assume!(!p.is_ideal(1e-9));
        let back = harmonic_conjugate(HomogeneousPoint64::from(a), HomogeneousPoint64::from(b), p).unwrap();
        prop_assert!(back.approx_eq(&HomogeneousPoint64::from(o), 1e-9));
        let cr = cross_ratio(HomogeneousPoint64::from(a), HomogeneousPoint64::from(b), HomogeneousPoint64::from(o), p).unwrap();
        prop_assert!((cr + 1.0).abs() < 1e-9);
    }

    #[test]
    fn affine_reflection_is_an_involution(o in point(), xs in prop::collection::vec(point(), 100)) {
        let r = affine_point_reflection(&o);
        for x in &xs {
            let back = r.apply_affine(&r.apply_affine(x).unwrap()).unwrap();
            prop_assert!((back - x).norm() <= 1e-12 * x.coords.norm().max(1.0));
            let image = r.apply_affine(x).unwrap();
            prop_assert!((nalgebra::center(x, &image) - o).norm() < 1e-12);
        }
    }

    #[test]
    fn correspondence_maps_frames_and_inverts(src in prop::array::uniform4(point()), dst in prop::array::uniform4(point())) {
        let general = |q: &[Point64; 4]| {
            (0..4).all(|i| (0..i).all(|j| (0..j).all(|k| {
                let (a, b, c) = (q[i], q[j], q[k]);
                ((b - a).perp(&(c - a))).abs() > 0.5
            })))
        };
        prop_assume!(general(&src) && general(&dst));
        let (s, d) = (src.map(HomogeneousPoint64::from), dst.map(HomogeneousPoint64::from));
        let map = projectivity_from_correspondence(&s, &d).unwrap();
        let inv = projectivity_from_correspondence(&d, &s).unwrap();
        for i in 0..4 {
            prop_assert!(map.apply(&s[i]).approx_eq(&d[i], 1e-7));
        }
        prop_assert!(map.compose(&inv).distance_mod_scale(&Projectivity64::identity()) < 1e-7);
        prop_assert!(inv.distance_mod_scale(&map.inverse()) < 1e-7);
    }

    #[test]
    fn projectivities_keep_collinearity(pts in collinear_four(), map in well_conditioned_map()) {
        let img: Vec<Point64> = pts.iter().filter_map(|p| map.apply_affine(p).ok()).collect();
        prop_assume!(img.len() == 4 && img.iter().all(|p| p.coords.norm() < 1e4));
        prop_assert!(are_collinear(&img[0], &img[1], &img[2]));
        prop_assert!(are_collinear(&img[1], &img[2], &img[3]));
    }
}
