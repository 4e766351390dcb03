//! The two model metrics: Minkowski on the whole plane and Hilbert on the
//! interior of a convex body.

use nalgebra::Vector2;

use crate::body::{Chord, ConvexBody};
use crate::error::{GeometryError, Result};
use crate::projective::AffinePoint;
use crate::scalar::Real;

/// Points closer than this fraction of the body diameter to the boundary
/// (measured along the chord) are rejected by the Hilbert distance.
pub const NEAR_BOUNDARY_TOL: f64 = 1e-9;

/// A straight projective-metric space of parabolic or hyperbolic type.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricSpace<T: Real> {
    /// `d(A, B) = gauge(B − A)` on the whole plane.
    Minkowski { indicatrix: ConvexBody<T> },
    /// `d(A, B) = ½|ln (A,B;C,D)|` on the interior of the body, where `CD`
    /// is the chord through `A` and `B`.
    Hilbert { body: ConvexBody<T> },
}

fn point_error<T: Real>(p: &AffinePoint<T>, near: bool) -> GeometryError {
    let (x, y) = (p.x.as_f64(), p.y.as_f64());
    if near {
        GeometryError::NearBoundary { x, y }
    } else {
        GeometryError::PointOutside { x, y }
    }
}

/// `x` on the chord through the origin (parameters `t_c < 0 < t_d`) with
/// signed Hilbert distance `s` from the chord anchor.
fn hilbert_param<T: Real>(t_c: T, t_d: T, s: T) -> T {
    let two = T::lit(2.0);
    if s > T::zero() {
        let e = (-two * s).exp();
        -(-two * s).exp_m1() / (T::one() / t_d - e / t_c)
    } else {
        let e = (two * s).exp();
        (two * s).exp_m1() / (e / t_d - T::one() / t_c)
    }
}

impl<T: Real> MetricSpace<T> {
    /// Minkowski geometry with the given indicatrix, which must be centrally
    /// symmetric about its declared center.
    pub fn minkowski(indicatrix: ConvexBody<T>) -> Result<Self> {
        if !indicatrix.is_symmetric() {
            return Err(GeometryError::NotSymmetric);
        }
        Ok(Self::Minkowski { indicatrix })
    }

    /// Hilbert geometry on the interior of `body`.
    pub fn hilbert(body: ConvexBody<T>) -> Self {
        Self::Hilbert { body }
    }

    /// The Hilbert domain or the Minkowski indicatrix.
    pub fn body(&self) -> &ConvexBody<T> {
        match self {
            Self::Minkowski { indicatrix } => indicatrix,
            Self::Hilbert { body } => body,
        }
    }

    pub fn is_hilbert(&self) -> bool {
        matches!(self, Self::Hilbert { .. })
    }

    /// Whether `x` belongs to the point set of the space.
    pub fn is_admissible(&self, x: &AffinePoint<T>) -> bool {
        match self {
            Self::Minkowski { .. } => x.x.is_finite() && x.y.is_finite(),
            Self::Hilbert { body } => body.contains(x),
        }
    }

    fn check_admissible(&self, x: &AffinePoint<T>) -> Result<()> {
        if self.is_admissible(x) {
            Ok(())
        } else {
            Err(point_error(x, false))
        }
    }

    fn hilbert_chord(body: &ConvexBody<T>, a: &AffinePoint<T>, b: &AffinePoint<T>) -> Result<(Chord<T>, T)> {
        if !body.contains(b) {
            return Err(point_error(b, false));
        }
        let v = b - a;
        let s = v.norm();
        let chord = body.chord_through(a, &v)?;
        Ok((chord, s))
    }

    pub fn distance(&self, a: &AffinePoint<T>, b: &AffinePoint<T>) -> Result<T> {
        match self {
            Self::Minkowski { indicatrix } => {
                self.check_admissible(a)?;
                self.check_admissible(b)?;
                indicatrix.gauge(&(b - a))
            }
            Self::Hilbert { body } => {
                self.check_admissible(a)?;
                self.check_admissible(b)?;
                if a == b {
                    return Ok(T::zero());
                }
                let (chord, s) = Self::hilbert_chord(body, a, b)?;
                let guard = T::lit(NEAR_BOUNDARY_TOL) * body.diameter();
                if -chord.t_c <= guard || chord.t_d <= guard {
                    return Err(point_error(a, true));
                }
                if chord.t_d - s <= guard {
                    return Err(point_error(b, true));
                }
                // ln (A,B;C,D) = ln(1 − s/t_d) − ln(1 − s/t_c)
                let log_cr = (-s / chord.t_d).ln_1p() - (-s / chord.t_c).ln_1p();
                Ok(T::lit(0.5) * log_cr.abs())
            }
        }
    }

    /// The point `P` on line `AB` with `d(A, P) = |s|`, on `B`'s side of `A`
    /// iff `s > 0`.
    pub fn geodesic_point(&self, a: &AffinePoint<T>, b: &AffinePoint<T>, s: T) -> Result<AffinePoint<T>> {
        if !s.is_finite() {
            return Err(GeometryError::ParameterOutOfRange("geodesic parameter must be finite"));
        }
        self.check_admissible(a)?;
        self.check_admissible(b)?;
        if a == b {
            return Err(GeometryError::DegenerateInput("geodesic through coincident points"));
        }
        match self {
            Self::Minkowski { indicatrix } => {
                let v = b - a;
                let speed = indicatrix.gauge(&v)?;
                Ok(a + v * (s / speed))
            }
            Self::Hilbert { body } => {
                let (chord, _) = Self::hilbert_chord(body, a, b)?;
                Ok(chord.point_at(hilbert_param(chord.t_c, chord.t_d, s)))
            }
        }
    }

    /// The point `M` of the open segment `AB` with `d(A, M) = d(M, B)`.
    ///
    /// In a Minkowski space this is the affine midpoint.
    pub fn metric_midpoint(&self, a: &AffinePoint<T>, b: &AffinePoint<T>) -> Result<AffinePoint<T>> {
        self.check_admissible(a)?;
        self.check_admissible(b)?;
        if a == b {
            return Err(GeometryError::DegenerateInput("midpoint of coincident points"));
        }
        match self {
            Self::Minkowski { .. } => Ok(nalgebra::center(a, b)),
            Self::Hilbert { .. } => {
                let d = self.distance(a, b)?;
                self.geodesic_point(a, b, d * T::lit(0.5))
            }
        }
    }

    /// Unit-speed parametrization of the geodesic through `a` in direction `dir`.
    pub fn geodesic_from(&self, a: &AffinePoint<T>, dir: &Vector2<T>, s: T) -> Result<AffinePoint<T>> {
        let n = dir.norm();
        if n == T::zero() {
            return Err(GeometryError::DegenerateInput("zero direction"));
        }
        let b = match self {
            Self::Minkowski { .. } => a + dir,
            Self::Hilbert { body } => {
                let chord = body.chord_through(a, dir)?;
                chord.point_at(chord.t_d * T::lit(0.5))
            }
        };
        self.geodesic_point(a, &b, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(x: f64, y: f64) -> AffinePoint<f64> {
        AffinePoint::new(x, y)
    }

    fn disk() -> MetricSpace<f64> {
        MetricSpace::hilbert(ConvexBody::unit_disk())
    }

    fn euclid() -> MetricSpace<f64> {
        MetricSpace::minkowski(ConvexBody::unit_disk()).unwrap()
    }

    #[test]
    fn hilbert_disk_radial_distance() {
        let d = disk().distance(&p(0., 0.), &p(0.5, 0.)).unwrap();
        assert_relative_eq!(d, 0.5 * 3f64.ln(), epsilon = 1e-15);
        assert_relative_eq!(d, 0.549306144334, epsilon = 1e-12);
    }

    #[test]
    fn distance_zero_and_euclidean() {
        assert_eq!(disk().distance(&p(0.2, 0.3), &p(0.2, 0.3)).unwrap(), 0.0);
        assert_eq!(euclid().distance(&p(1., 1.), &p(1., 1.)).unwrap(), 0.0);
        assert_relative_eq!(euclid().distance(&p(0., 0.), &p(3., 4.)).unwrap(), 5.0);
    }

    #[test]
    fn hilbert_rejects_outside_and_near_boundary() {
        assert!(matches!(disk().distance(&p(2., 0.), &p(0., 0.)), Err(GeometryError::PointOutside { .. })));
        assert!(matches!(disk().distance(&p(0., 0.), &p(1.0 - 1e-12, 0.)), Err(GeometryError::NearBoundary { .. })));
    }

    #[test]
    fn minkowski_needs_symmetric_indicatrix() {
        let tri = ConvexBody::polygon(vec![p(0., 0.), p(1., 0.), p(0., 1.)]).unwrap();
        assert_eq!(MetricSpace::minkowski(tri), Err(GeometryError::NotSymmetric));
    }

    #[test]
    fn geodesic_point_examples() {
        let a = p(0.1, -0.2);
        assert_eq!(disk().geodesic_point(&a, &p(0.3, 0.4), 0.0).unwrap(), a);
        let q = euclid().geodesic_point(&p(0., 0.), &p(1., 0.), 2.5).unwrap();
        assert_relative_eq!(q, p(2.5, 0.), epsilon = 1e-15);
        let q = disk().geodesic_point(&p(0., 0.), &p(0.9, 0.), 0.5 * 3f64.ln()).unwrap();
        assert_relative_eq!(q, p(0.5, 0.), epsilon = 1e-15);
        let q = disk().geodesic_point(&p(0., 0.), &p(0.9, 0.), -0.5 * 3f64.ln()).unwrap();
        assert_relative_eq!(q, p(-0.5, 0.), epsilon = 1e-15);
        assert!(matches!(
            disk().geodesic_point(&p(0., 0.), &p(0.9, 0.), f64::NAN),
            Err(GeometryError::ParameterOutOfRange(_))
        ));
    }

    #[test]
    fn geodesic_is_unit_speed() {
        let space = MetricSpace::hilbert(ConvexBody::unit_pnorm_ball(4.0).unwrap());
        let (a, b) = (p(-0.2, 0.1), p(0.4, 0.3));
        let params = [-2.0, -0.7, 0.0, 0.3, 1.1, 2.5];
        for &s in &params {
            for &t in &params {
                let x = space.geodesic_point(&a, &b, s).unwrap();
                let y = space.geodesic_point(&a, &b, t).unwrap();
                let d = space.distance(&x, &y).unwrap();
                assert!((d - (s - t).abs()).abs() < 1e-9, "s={s} t={t} d={d}");
            }
        }
    }

    /// Bisection on `X ↦ d(A,X) − d(X,B)` along the segment.
    fn bisection_midpoint(space: &MetricSpace<f64>, a: &AffinePoint<f64>, b: &AffinePoint<f64>) -> AffinePoint<f64> {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let x = a + (b - a) * mid;
            let g = space.distance(a, &x).unwrap() - space.distance(&x, b).unwrap();
            if g < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        a + (b - a) * (0.5 * (lo + hi))
    }

    #[test]
    fn midpoint_examples() {
        let m = euclid().metric_midpoint(&p(0., 0.), &p(2., 4.)).unwrap();
        assert_eq!(m, p(1., 2.));
        let m = disk().metric_midpoint(&p(-0.5, 0.), &p(0.5, 0.)).unwrap();
        assert_relative_eq!(m, p(0., 0.), epsilon = 1e-15);

        let (a, b) = (p(0., 0.), p(0.8, 0.));
        let m = disk().metric_midpoint(&a, &b).unwrap();
        let oracle = bisection_midpoint(&disk(), &a, &b);
        assert_relative_eq!(oracle, p(0.5, 0.), epsilon = 1e-12);
        assert_relative_eq!(m, oracle, epsilon = 1e-12);
    }

    #[test]
    fn midpoint_balances_distances_on_pnorm_ball() {
        let space = MetricSpace::hilbert(ConvexBody::unit_pnorm_ball(4.0).unwrap());
        let (a, b) = (p(-0.6, 0.3), p(0.7, -0.2));
        let m = space.metric_midpoint(&a, &b).unwrap();
        let d = space.distance(&a, &b).unwrap();
        let gap = (space.distance(&a, &m).unwrap() - space.distance(&m, &b).unwrap()).abs();
        assert!(gap <= 1e-10 * d);
        assert_relative_eq!(m, bisection_midpoint(&space, &a, &b), epsilon = 1e-10);
    }

    #[test]
    fn hilbert_distance_blows_up_towards_boundary() {
        let space = disk();
        let a = p(0.1, 0.1);
        let mut last = 0.0;
        for k in 1..8 {
            let r = 1.0 - 10f64.powi(-k);
            let b = p(r * 0.6, r * 0.8);
            let d = space.distance(&a, &b).unwrap();
            assert!(d > last);
            last = d;
        }
        assert!(last > 8.0);
    }
}
