//! Deciding symmetry of a space from a scan of its centers.
//!
//! A Minkowski space is symmetric: every point is a center. A Hilbert
//! geometry has an open set of centers only when its domain is an ellipse,
//! so the verdict combines a grid scan of the projective-center test with a
//! conic fit to boundary samples.

use nalgebra::{DMatrix, Matrix3, Vector2};
use rayon::prelude::*;
use serde::Serialize;

use crate::body::ConvexBody;
use crate::centers::{
    construct_point_reflection_with, is_projective_center, sample_ball_pairs, CenterReport, CenterTest,
    DEFAULT_DIRECTIONS, DEFAULT_FIT_TOL,
};
use crate::error::{GeometryError, Result};
use crate::metric::MetricSpace;
use crate::projective::{AffinePoint, LineCoeffs};
use crate::scalar::Real;

pub const DEFAULT_GRID: usize = 7;
/// Grid corners keep this fraction of the body diameter away from the boundary.
pub const DEFAULT_CLEARANCE: f64 = 0.05;
pub const DEFAULT_CONIC_TOL: f64 = 1e-6;
pub const CONIC_SAMPLES: usize = 32;

/// Least-squares conic `a x² + b xy + c y² + d x + e y + f = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicFit<T: Real> {
    /// Coefficients `(a, b, c, d, e, f)` in the input coordinates, unit norm.
    pub coeffs: [T; 6],
    /// Largest algebraic residual of the normalized samples.
    pub residual: T,
    pub is_ellipse: bool,
}

/// Fits a conic through `points` (at least six, not on two lines).
///
/// The points are shifted to zero mean and scaled to unit RMS spread before
/// taking the smallest right singular vector of the design matrix; the
/// ellipse discriminant `4ac − b²` is evaluated in those coordinates.
pub fn fit_conic<T: Real>(points: &[AffinePoint<T>], tol: T) -> Result<ConicFit<T>> {
    if points.len() < 6 {
        return Err(GeometryError::DegenerateInput("conic fit needs at least 6 points"));
    }
    let n = T::from_count(points.len());
    let mean = points.iter().fold(Vector2::zeros(), |acc, p| acc + p.coords) / n;
    let spread =
        (points.iter().map(|p| (p.coords - mean).norm_squared()).fold(T::zero(), |a, b| a + b) / n / T::lit(2.0))
            .sqrt();
    if !(spread > T::zero()) {
        return Err(GeometryError::DegenerateInput("all points coincide"));
    }
    let rows = DMatrix::from_fn(points.len(), 6, |i, j| {
        let q = (points[i].coords - mean) / spread;
        match j {
            0 => q.x * q.x,
            1 => q.x * q.y,
            2 => q.y * q.y,
            3 => q.x,
            4 => q.y,
            _ => T::one(),
        }
    });
    let svd = rows.clone().svd(false, true);
    let v_t = svd.v_t.ok_or(GeometryError::SingularSystem)?;
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].partial_cmp(&svd.singular_values[j]).expect("finite"));
    let (k, runner_up) = (order[0], order[1]);
    let largest = svd.singular_values.max();
    if svd.singular_values[runner_up] <= T::tol(1e-10) * largest {
        return Err(GeometryError::DegenerateInput("points do not determine a unique conic"));
    }
    let q: Vec<T> = (0..6).map(|j| v_t[(k, j)]).collect();
    let residual = (0..points.len())
        .map(|i| (0..6).map(|j| rows[(i, j)] * q[j]).fold(T::zero(), |a, b| a + b).abs())
        .fold(T::zero(), |a, b| a.max(b));

    let half = T::lit(0.5);
    let conic =
        Matrix3::new(q[0], q[1] * half, q[3] * half, q[1] * half, q[2], q[4] * half, q[3] * half, q[4] * half, q[5]);
    if residual <= tol && conic.determinant().abs() <= T::tol(1e-10) {
        return Err(GeometryError::DegenerateInput("points lie on two lines"));
    }
    let discriminant = T::lit(4.0) * q[0] * q[2] - q[1] * q[1];
    let is_ellipse = residual <= tol && discriminant > T::zero();

    // back to input coordinates: q = (p − mean) / spread
    let (mx, my, s) = (mean.x, mean.y, spread);
    let s2 = s * s;
    let two = T::lit(2.0);
    let a = q[0] / s2;
    let b = q[1] / s2;
    let c = q[2] / s2;
    let d = (-two * q[0] * mx - q[1] * my) / s2 + q[3] / s;
    let e = (-two * q[2] * my - q[1] * mx) / s2 + q[4] / s;
    let f = (q[0] * mx * mx + q[1] * mx * my + q[2] * my * my) / s2 - (q[3] * mx + q[4] * my) / s + q[5];
    let norm = [a, b, c, d, e, f].iter().map(|v| *v * *v).fold(T::zero(), |x, y| x + y).sqrt();
    let coeffs = [a / norm, b / norm, c / norm, d / norm, e / norm, f / norm];
    Ok(ConicFit { coeffs, residual, is_ellipse })
}

/// Settings of a center scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig<T: Real> {
    pub grid: usize,
    pub fit_tol: T,
    pub conic_tol: T,
    pub n_directions: usize,
    pub clearance: T,
    /// Random pairs used to measure the isometry error of each reflection.
    pub isometry_pairs: usize,
    /// Pairs are drawn from the metric ball of this radius around the center.
    pub isometry_radius: T,
    pub seed: u64,
}

impl<T: Real> Default for ScanConfig<T> {
    fn default() -> Self {
        Self {
            grid: DEFAULT_GRID,
            fit_tol: T::lit(DEFAULT_FIT_TOL),
            conic_tol: T::lit(DEFAULT_CONIC_TOL),
            n_directions: DEFAULT_DIRECTIONS,
            clearance: T::lit(DEFAULT_CLEARANCE),
            isometry_pairs: 100,
            isometry_radius: T::lit(1.5),
            seed: 0,
        }
    }
}

/// A `grid × grid` lattice centered at the body's center, spanning the
/// largest box with the bounding box's aspect ratio whose corners keep
/// `clearance · diameter` from the boundary. Row-major, `y` outer.
pub fn center_grid<T: Real>(body: &ConvexBody<T>, grid: usize, clearance: T) -> Result<Vec<AffinePoint<T>>> {
    if grid < 2 {
        return Err(GeometryError::GridTooSmall(grid));
    }
    let c = body.center();
    let (lo, hi) = body.bounding_box();
    let half = Vector2::new((c.x - lo.x).max(hi.x - c.x), (c.y - lo.y).max(hi.y - c.y));
    let reach = half.norm();
    let margin = clearance * body.diameter();
    let mut sigma = T::one() / T::default_epsilon();
    for (sx, sy) in [(1., 1.), (-1., 1.), (-1., -1.), (1., -1.)] {
        let dir = Vector2::new(half.x * T::lit(sx), half.y * T::lit(sy));
        let chord = body.chord_through(&c, &dir)?;
        sigma = sigma.min((chord.t_d - margin) / reach);
    }
    if !(sigma > T::zero()) {
        return Err(GeometryError::InvalidBody("clearance leaves no room for a grid".into()));
    }
    let step = |i: usize| -T::one() + T::lit(2.0) * T::from_count(i) / T::from_count(grid - 1);
    let mut pts = Vec::with_capacity(grid * grid);
    for j in 0..grid {
        for i in 0..grid {
            pts.push(AffinePoint::new(c.x + step(i) * sigma * half.x, c.y + step(j) * sigma * half.y));
        }
    }
    Ok(pts)
}

/// Projective-center test over [`center_grid`]; each center also gets the
/// isometry error of its reflection.
pub fn scan_centers<T: Real>(space: &MetricSpace<T>, grid: usize, tol: T) -> Result<Vec<CenterReport<T>>> {
    scan_centers_with(space, &ScanConfig { grid, fit_tol: tol, ..ScanConfig::default() })
}

pub fn scan_centers_with<T: Real>(space: &MetricSpace<T>, config: &ScanConfig<T>) -> Result<Vec<CenterReport<T>>> {
    let points = center_grid(space.body(), config.grid, config.clearance)?;
    let test = CenterTest { n_directions: config.n_directions, fit_tol: config.fit_tol };
    points
        .par_iter()
        .enumerate()
        .map(|(idx, o)| {
            let mut report = match space {
                MetricSpace::Minkowski { .. } => CenterReport {
                    point: *o,
                    line: Some(LineCoeffs::ideal()),
                    fit_residual: T::zero(),
                    line_misses_body: true,
                    is_projective_center: true,
                    reflection_isometry_error: None,
                },
                MetricSpace::Hilbert { body } => is_projective_center(body, o, config.n_directions, config.fit_tol)?,
            };
            if report.is_projective_center {
                let reflection = construct_point_reflection_with(space, o, &test)?;
                let seed = config.seed.wrapping_add(idx as u64);
                let pairs = sample_ball_pairs(space, o, config.isometry_radius, config.isometry_pairs, seed)?;
                report.reflection_isometry_error = Some(reflection.isometry_error(space, &pairs)?);
            }
            Ok(report)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryKind {
    SymmetricMinkowski,
    SymmetricHyperbolic,
    NotSymmetric,
}

impl SymmetryKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::SymmetricMinkowski => "symmetric-minkowski",
            Self::SymmetricHyperbolic => "symmetric-hyperbolic",
            Self::NotSymmetric => "not-symmetric",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryVerdict<T: Real> {
    pub kind: SymmetryKind,
    pub grid: usize,
    /// Fraction of scanned grid points that are centers.
    pub center_fraction: T,
    /// Residual of the conic fit to boundary samples of the body.
    pub conic_residual: T,
    pub conic_is_ellipse: bool,
    /// First grid point that failed the center test, if any.
    pub failing_point: Option<AffinePoint<T>>,
}

pub fn classify<T: Real>(space: &MetricSpace<T>, grid: usize, tol: T) -> Result<SymmetryVerdict<T>> {
    classify_with(space, &ScanConfig { grid, fit_tol: tol, ..ScanConfig::default() })
}

/// Minkowski spaces are always symmetric. A Hilbert geometry is symmetric
/// (hyperbolic) iff every scanned point is a center and the boundary fits an
/// ellipse.
pub fn classify_with<T: Real>(space: &MetricSpace<T>, config: &ScanConfig<T>) -> Result<SymmetryVerdict<T>> {
    let reports = scan_centers_with(space, config)?;
    let centers = reports.iter().filter(|r| r.is_projective_center).count();
    let center_fraction = T::from_count(centers) / T::from_count(reports.len());
    let failing_point = reports.iter().find(|r| !r.is_projective_center).map(|r| r.point);
    let conic = fit_conic(&space.body().boundary_points(CONIC_SAMPLES), config.conic_tol)?;
    let kind = match space {
        MetricSpace::Minkowski { .. } => SymmetryKind::SymmetricMinkowski,
        MetricSpace::Hilbert { .. } if failing_point.is_none() && conic.is_ellipse => SymmetryKind::SymmetricHyperbolic,
        MetricSpace::Hilbert { .. } => SymmetryKind::NotSymmetric,
    };
    Ok(SymmetryVerdict {
        kind,
        grid: config.grid,
        center_fraction,
        conic_residual: conic.residual,
        conic_is_ellipse: conic.is_ellipse,
        failing_point,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn p(x: f64, y: f64) -> AffinePoint<f64> {
        AffinePoint::new(x, y)
    }

    fn circle(n: usize, f: impl Fn(f64) -> AffinePoint<f64>) -> Vec<AffinePoint<f64>> {
        (0..n).map(|k| f(2.0 * PI * k as f64 / n as f64)).collect()
    }

    #[test]
    fn conic_fit_of_circle() {
        let pts = circle(8, |t| p(t.cos(), t.sin()));
        let fit = fit_conic(&pts, 1e-6).unwrap();
        assert!(fit.is_ellipse);
        assert!(fit.residual < 1e-10);
        let s = fit.coeffs[0];
        let expected = [1.0, 0.0, 1.0, 0.0, 0.0, -1.0];
        for (c, e) in fit.coeffs.iter().zip(expected) {
            assert!((c / s - e).abs() < 1e-10);
        }
    }

    #[test]
    fn conic_fit_recovers_shifted_ellipse() {
        let pts = circle(12, |t| p(3.0 + 2.0 * t.cos(), -1.0 + t.sin()));
        let fit = fit_conic(&pts, 1e-6).unwrap();
        assert!(fit.is_ellipse);
        let [a, b, c, d, e, f] = fit.coeffs;
        for q in &pts {
            let v = a * q.x * q.x + b * q.x * q.y + c * q.y * q.y + d * q.x + e * q.y + f;
            assert!(v.abs() < 1e-10);
        }
    }

    #[test]
    fn conic_fit_rejects_quartic() {
        let pts = ConvexBody::unit_pnorm_ball(4.0).unwrap().boundary_points(16);
        let fit = fit_conic(&pts, 1e-6).unwrap();
        assert!(!fit.is_ellipse);
        assert!(fit.residual > 1e-3);
    }

    #[test]
    fn conic_fit_hyperbola_is_not_an_ellipse() {
        // x²/4 − y² = 1 via (2 cosh u, sinh u), both branches
        let pts: Vec<_> = [-1.5, -0.5, 0.4, 1.2]
            .iter()
            .flat_map(|&u: &f64| [p(2.0 * u.cosh(), u.sinh()), p(-2.0 * u.cosh(), u.sinh())])
            .collect();
        let fit = fit_conic(&pts, 1e-6).unwrap();
        assert!(fit.residual < 1e-10);
        assert!(!fit.is_ellipse);
    }

    #[test]
    fn conic_fit_degenerate_inputs() {
        let few = circle(5, |t| p(t.cos(), t.sin()));
        assert!(matches!(fit_conic(&few, 1e-6), Err(GeometryError::DegenerateInput(_))));
        let lines: Vec<_> = (0..4).flat_map(|i| [p(i as f64, 0.0), p(0.0, 1.0 + i as f64)]).collect();
        assert!(matches!(fit_conic(&lines, 1e-6), Err(GeometryError::DegenerateInput(_))));
    }

    #[test]
    fn grid_is_admissible_and_symmetric() {
        let body = ConvexBody::axis_ellipse(p(1., 1.), 2.0, 1.0).unwrap();
        let pts = center_grid(&body, 7, 0.05).unwrap();
        assert_eq!(pts.len(), 49);
        assert!(pts.iter().all(|x| body.contains(x)));
        assert!((pts[24] - p(1., 1.)).norm() < 1e-15);
        assert_eq!(center_grid(&body, 1, 0.05), Err(GeometryError::GridTooSmall(1)));
    }

    #[test]
    fn refined_grid_contains_coarse_grid() {
        let body = ConvexBody::unit_pnorm_ball(4.0).unwrap();
        let coarse = center_grid(&body, 7, 0.05).unwrap();
        let fine = center_grid(&body, 13, 0.05).unwrap();
        for x in &coarse {
            assert!(fine.iter().any(|y| (x - y).norm() < 1e-14));
        }
    }

    #[test]
    fn minkowski_scan_is_all_centers() {
        let space = MetricSpace::minkowski(ConvexBody::unit_pnorm_ball(4.0).unwrap()).unwrap();
        let reports = scan_centers(&space, 3, 1e-6).unwrap();
        assert_eq!(reports.len(), 9);
        for r in reports {
            assert!(r.is_projective_center);
            assert!(r.reflection_isometry_error.unwrap() < 1e-12);
        }
    }

    #[test]
    fn classify_examples() {
        let disk = MetricSpace::hilbert(ConvexBody::unit_disk());
        assert_eq!(classify(&disk, 5, 1e-6).unwrap().kind, SymmetryKind::SymmetricHyperbolic);
        let ball = MetricSpace::hilbert(ConvexBody::unit_pnorm_ball(4.0).unwrap());
        let v = classify(&ball, 5, 1e-6).unwrap();
        assert_eq!(v.kind, SymmetryKind::NotSymmetric);
        assert!(v.failing_point.is_some());
        let mink = MetricSpace::minkowski(ConvexBody::unit_pnorm_ball(4.0).unwrap()).unwrap();
        assert_eq!(classify(&mink, 5, 1e-6).unwrap().kind, SymmetryKind::SymmetricMinkowski);
    }
}
