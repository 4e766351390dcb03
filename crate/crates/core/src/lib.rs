//! Planar projective-metric geometry.
//!
//! Hilbert metrics on bounded convex domains, Minkowski metrics given by a
//! symmetric indicatrix, projective centers of a domain, metric point
//! reflections and the center orbits they generate.
//!
//! Everything is generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`); the `*64` aliases below fix it to `f64`.
//!
//! ```
//! use projmetric::{ConvexBody64, MetricSpace64, Point64};
//!
//! let disk = MetricSpace64::hilbert(ConvexBody64::unit_disk());
//! let d = disk.distance(&Point64::new(0.0, 0.0), &Point64::new(0.5, 0.0)).unwrap();
//! assert!((d - 0.5 * 3f64.ln()).abs() < 1e-12);
//! ```

// `!(x > 0)` deliberately treats NaN as failing
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod body;
pub mod centers;
pub mod classify;
pub mod error;
pub mod metric;
pub mod projective;
pub mod scalar;
pub mod spec;

pub use body::{Chord, ConvexBody, Shape};
pub use centers::{
    center_projectivity, conjugate_center, construct_point_reflection, is_projective_center, kronecker_orbit, max_gap,
    ostar_locus, pencil_orbit, sample_ball_pairs, translate, CenterReport, CenterTest, OStarSample, OrbitLimits,
    PointReflection, Translation,
};
pub use classify::{
    center_grid, classify, classify_with, fit_conic, scan_centers, scan_centers_with, ConicFit, ScanConfig,
    SymmetryKind, SymmetryVerdict,
};
pub use error::{GeometryError, Result};
pub use metric::MetricSpace;
pub use projective::{
    affine_point_reflection, affine_ratio, cross_ratio, harmonic_conjugate, line_to_infinity,
    projectivity_from_correspondence, AffinePoint, HomogeneousPoint, LineCoeffs, Projectivity,
};
pub use scalar::Real;
pub use spec::BodySpec;

pub type Point64 = AffinePoint<f64>;
pub type HomogeneousPoint64 = HomogeneousPoint<f64>;
pub type Projectivity64 = Projectivity<f64>;
pub type LineCoeffs64 = LineCoeffs<f64>;
pub type ConvexBody64 = ConvexBody<f64>;
pub type MetricSpace64 = MetricSpace<f64>;
pub type PointReflection64 = PointReflection<f64>;
pub type CenterReport64 = CenterReport<f64>;

pub type Point32 = AffinePoint<f32>;
pub type ConvexBody32 = ConvexBody<f32>;
pub type MetricSpace32 = MetricSpace<f32>;
