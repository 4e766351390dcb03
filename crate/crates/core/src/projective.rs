//! Projective arithmetic in the real projective plane.
//!
//! Affine points live in the chart `w = 1`; [`HomogeneousPoint`] also admits
//! ideal points (`w = 0`). Ratios follow the convention
//! `(A,B;C)·(C − B) = C − A` and `(A,B;C,D) = (A,B;C) / (A,B;D)`.

use nalgebra::{Matrix3, Point2, Vector2, Vector3};

use crate::error::{GeometryError, Result};
use crate::scalar::Real;

/// A point of the affine plane.
pub type AffinePoint<T> = Point2<T>;

/// Relative collinearity tolerance on the cross product of a triple.
pub const COLLINEARITY_TOL: f64 = 1e-9;
/// Relative tolerance below which a projectivity counts as singular.
pub const SINGULARITY_TOL: f64 = 1e-12;

/// A point of the projective plane, stored normalized so that its largest
/// coordinate (in absolute value) equals `1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogeneousPoint<T: Real>(Vector3<T>);

impl<T: Real> HomogeneousPoint<T> {
    pub fn new(x: T, y: T, w: T) -> Result<Self> {
        Self::from_vector(Vector3::new(x, y, w))
    }

    pub fn from_vector(v: Vector3<T>) -> Result<Self> {
        if !(v.x.is_finite() && v.y.is_finite() && v.z.is_finite()) {
            return Err(GeometryError::DegenerateInput("non-finite homogeneous coordinates"));
        }
        let idx = v.iamax();
        let pivot = v[idx];
        if pivot == T::zero() {
            return Err(GeometryError::DegenerateInput("all homogeneous coordinates are zero"));
        }
        Ok(Self(v / pivot))
    }

    pub fn from_affine(p: &AffinePoint<T>) -> Self {
        // (x, y, 1) is never zero, normalization cannot fail
        Self::from_vector(Vector3::new(p.x, p.y, T::one())).unwrap()
    }

    /// The ideal point in direction `dir`.
    pub fn ideal(dir: Vector2<T>) -> Result<Self> {
        Self::new(dir.x, dir.y, T::zero())
    }

    pub fn coords(&self) -> &Vector3<T> {
        &self.0
    }

    /// Representative with unit Euclidean norm.
    pub fn unit(&self) -> Vector3<T> {
        self.0.normalize()
    }

    pub fn is_ideal(&self, tol: T) -> bool {
        self.0.z.abs() <= tol
    }

    /// The affine point, or `None` for an (exactly) ideal point.
    pub fn to_affine(&self) -> Option<AffinePoint<T>> {
        if self.0.z == T::zero() {
            None
        } else {
            Some(AffinePoint::new(self.0.x / self.0.z, self.0.y / self.0.z))
        }
    }

    /// Equality modulo scale: the unit representatives are parallel.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.unit().cross(&other.unit()).norm() <= tol
    }
}

impl<T: Real> From<AffinePoint<T>> for HomogeneousPoint<T> {
    fn from(p: AffinePoint<T>) -> Self {
        Self::from_affine(&p)
    }
}

impl<T: Real> From<&AffinePoint<T>> for HomogeneousPoint<T> {
    fn from(p: &AffinePoint<T>) -> Self {
        Self::from_affine(p)
    }
}

/// A line `a·x + b·y + c = 0`, coefficients modulo scale.
///
/// The ideal line is `(0, 0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineCoeffs<T: Real>(Vector3<T>);

impl<T: Real> LineCoeffs<T> {
    pub fn new(a: T, b: T, c: T) -> Result<Self> {
        Self::from_vector(Vector3::new(a, b, c))
    }

    pub fn from_vector(v: Vector3<T>) -> Result<Self> {
        let n = v.norm();
        if !n.is_finite() || n == T::zero() {
            return Err(GeometryError::InvalidLine);
        }
        Ok(Self(v / n))
    }

    pub fn ideal() -> Self {
        Self(Vector3::new(T::zero(), T::zero(), T::one()))
    }

    /// The line joining two distinct projective points.
    pub fn through(p: &HomogeneousPoint<T>, q: &HomogeneousPoint<T>) -> Result<Self> {
        let l = p.unit().cross(&q.unit());
        if l.norm() <= T::tol(1e-14) {
            return Err(GeometryError::DegenerateConfiguration("line through coincident points"));
        }
        Self::from_vector(l)
    }

    pub fn a(&self) -> T {
        self.0.x
    }
    pub fn b(&self) -> T {
        self.0.y
    }
    pub fn c(&self) -> T {
        self.0.z
    }

    /// Unit-norm coefficient vector.
    pub fn coeffs(&self) -> &Vector3<T> {
        &self.0
    }

    pub fn is_ideal(&self, tol: T) -> bool {
        self.0.x.hypot(self.0.y) <= tol
    }

    /// `a·x + b·y + c` at an affine point.
    pub fn eval(&self, p: &AffinePoint<T>) -> T {
        self.0.x * p.x + self.0.y * p.y + self.0.z
    }

    /// Same line with the sign chosen so that `eval(p) >= 0`.
    pub fn oriented_towards(&self, p: &AffinePoint<T>) -> Self {
        if self.eval(p) < T::zero() {
            Self(-self.0)
        } else {
            *self
        }
    }
}

/// An invertible 3×3 matrix acting on homogeneous coordinates, modulo scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projectivity<T: Real> {
    m: Matrix3<T>,
}

impl<T: Real> Projectivity<T> {
    pub fn new(m: Matrix3<T>) -> Result<Self> {
        let scale = m.amax();
        if !scale.is_finite() || scale == T::zero() {
            return Err(GeometryError::SingularSystem);
        }
        let m = m / scale;
        if m.determinant().abs() <= T::tol(SINGULARITY_TOL) {
            return Err(GeometryError::SingularSystem);
        }
        Ok(Self { m })
    }

    pub fn identity() -> Self {
        Self { m: Matrix3::identity() }
    }

    /// `X ↦ X + v`.
    pub fn translation(v: Vector2<T>) -> Self {
        let mut m = Matrix3::identity();
        m[(0, 2)] = v.x;
        m[(1, 2)] = v.y;
        Self::new(m).expect("translations are invertible")
    }

    pub fn matrix(&self) -> &Matrix3<T> {
        &self.m
    }

    pub fn apply(&self, p: &HomogeneousPoint<T>) -> HomogeneousPoint<T> {
        HomogeneousPoint::from_vector(self.m * p.coords())
            .expect("nonsingular map sends nonzero vectors to nonzero vectors")
    }

    /// Applies the map to an affine point; errors if the image is ideal.
    pub fn apply_affine(&self, p: &AffinePoint<T>) -> Result<AffinePoint<T>> {
        let v = self.m * Vector3::new(p.x, p.y, T::one());
        // w at rounding level relative to the point means the image is ideal
        let noise = T::default_epsilon() * T::lit(4.0) * v.amax();
        if v.z.abs() <= noise || !(v.x / v.z).is_finite() || !(v.y / v.z).is_finite() {
            return Err(GeometryError::IdealPoint);
        }
        Ok(AffinePoint::new(v.x / v.z, v.y / v.z))
    }

    /// Image of a line: `l' = M^{-T} l`.
    pub fn apply_line(&self, l: &LineCoeffs<T>) -> LineCoeffs<T> {
        let inv = self.inverse();
        LineCoeffs::from_vector(inv.m.transpose() * l.coeffs()).expect("nonsingular map sends lines to lines")
    }

    /// `self ∘ other`: apply `other` first.
    ///
    /// Only rescaled: long chains of hyperbolic isometries are badly
    /// conditioned but still invertible.
    pub fn compose(&self, other: &Self) -> Self {
        let m = self.m * other.m;
        Self { m: m / m.amax() }
    }

    pub fn inverse(&self) -> Self {
        let inv = self.m.try_inverse().expect("projectivity is nonsingular");
        Self { m: inv / inv.amax() }
    }

    /// Matrix equality modulo a (possibly negative) scale, with both sides
    /// normalized to unit Frobenius norm.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.distance_mod_scale(other) <= tol
    }

    /// Frobenius distance between unit-norm representatives, minimized over sign.
    pub fn distance_mod_scale(&self, other: &Self) -> T {
        let a = self.m.normalize();
        let b = other.m.normalize();
        let plus = (a - b).norm();
        let minus = (a + b).norm();
        if plus < minus {
            plus
        } else {
            minus
        }
    }
}

fn cross2<T: Real>(u: &Vector2<T>, v: &Vector2<T>) -> T {
    u.x * v.y - u.y * v.x
}

/// Collinearity of an affine triple: `|cross| ≤ tol · scale²` where `scale`
/// is the largest pairwise distance.
pub fn are_collinear<T: Real>(a: &AffinePoint<T>, b: &AffinePoint<T>, c: &AffinePoint<T>) -> bool {
    let ab = b - a;
    let ac = c - a;
    let bc = c - b;
    let scale = ab.norm().max(ac.norm()).max(bc.norm());
    if scale == T::zero() {
        return true;
    }
    cross2(&ab, &ac).abs() <= T::tol(COLLINEARITY_TOL) * scale * scale
}

/// The affine ratio `(A,B;C)`: the scalar `r` with `r·(C − B) = C − A`.
///
/// Evaluated on the coordinate axis where `|C − B|` is largest.
pub fn affine_ratio<T: Real>(a: &AffinePoint<T>, b: &AffinePoint<T>, c: &AffinePoint<T>) -> Result<T> {
    let cb = c - b;
    if cb.x == T::zero() && cb.y == T::zero() {
        return Err(GeometryError::DegenerateRatio);
    }
    if !are_collinear(a, b, c) {
        return Err(GeometryError::NotCollinear);
    }
    let ca = c - a;
    let k = cb.iamax();
    Ok(ca[k] / cb[k])
}

/// The cross ratio `(A,B;C,D) = (A,B;C) / (A,B;D)` of four collinear points.
///
/// Any one of the points may be ideal; with `D` ideal the value is `(A,B;C)`.
/// Computed from brackets `[P,Q] = det(P, Q, ℓ)` with `ℓ` the common line,
/// which makes the value independent of homogeneous scaling.
pub fn cross_ratio<T: Real, P: Into<HomogeneousPoint<T>>>(a: P, b: P, c: P, d: P) -> Result<T> {
    let pts = [a.into(), b.into(), c.into(), d.into()];
    let ideal_tol = T::zero();
    if pts.iter().filter(|p| p.is_ideal(ideal_tol)).count() > 1 {
        return Err(GeometryError::DegenerateConfiguration("more than one ideal point"));
    }
    let units: Vec<Vector3<T>> = pts.iter().map(|p| p.unit()).collect();
    let line = common_line(&units)?;
    let bracket = |p: &Vector3<T>, q: &Vector3<T>| Matrix3::from_columns(&[*p, *q, line]).determinant();
    let [ua, ub, uc, ud] = [units[0], units[1], units[2], units[3]];
    let den = bracket(&uc, &ub) * bracket(&ud, &ua);
    let tiny = T::tol(1e-14);
    if bracket(&uc, &ub).abs() <= tiny {
        return Err(GeometryError::DegenerateConfiguration("C coincides with B"));
    }
    if bracket(&ud, &ua).abs() <= tiny {
        return Err(GeometryError::DegenerateConfiguration("D coincides with A"));
    }
    Ok(bracket(&uc, &ua) * bracket(&ud, &ub) / den)
}

/// Unit normal of the line carrying all `units` (unit homogeneous vectors),
/// or `NotCollinear`.
fn common_line<T: Real>(units: &[Vector3<T>]) -> Result<Vector3<T>> {
    let mut best = Vector3::zeros();
    let mut best_norm = T::zero();
    for i in 0..units.len() {
        for j in (i + 1)..units.len() {
            let l = units[i].cross(&units[j]);
            let n = l.norm();
            if n > best_norm {
                best_norm = n;
                best = l;
            }
        }
    }
    if best_norm <= T::tol(1e-14) {
        return Err(GeometryError::DegenerateConfiguration("all points coincide"));
    }
    let line = best / best_norm;
    let tol = T::tol(COLLINEARITY_TOL);
    if units.iter().any(|u| line.dot(u).abs() > tol) {
        return Err(GeometryError::NotCollinear);
    }
    Ok(line)
}

/// The harmonic conjugate `P` of `O` with respect to `A` and `B`,
/// i.e. `(A,B;O,P) = −1`.
///
/// Writing `O = λA + μB` in homogeneous coordinates, `P = λA − μB`. The
/// conjugate of the midpoint of `AB` is the ideal point of the line.
pub fn harmonic_conjugate<T: Real, P: Into<HomogeneousPoint<T>>>(a: P, b: P, o: P) -> Result<HomogeneousPoint<T>> {
    let (a, b, o) = (a.into(), b.into(), o.into());
    let (ua, ub, uo) = (a.unit(), b.unit(), o.unit());
    let ab = ua.cross(&ub);
    let ab2 = ab.norm_squared();
    if ab.norm() <= T::tol(1e-14) {
        return Err(GeometryError::DegenerateConfiguration("A coincides with B"));
    }
    if ab.dot(&uo).abs() > T::tol(COLLINEARITY_TOL) * ab.norm() {
        return Err(GeometryError::NotCollinear);
    }
    let lambda = uo.cross(&ub).dot(&ab) / ab2;
    let mu = ua.cross(&uo).dot(&ab) / ab2;
    let tiny = T::tol(1e-14);
    if mu.abs() <= tiny {
        return Err(GeometryError::DegenerateConfiguration("O coincides with A"));
    }
    if lambda.abs() <= tiny {
        return Err(GeometryError::DegenerateConfiguration("O coincides with B"));
    }
    HomogeneousPoint::from_vector(ua * lambda - ub * mu)
}

/// The affine point reflection at `o`: `X ↦ 2O − X`.
pub fn affine_point_reflection<T: Real>(o: &AffinePoint<T>) -> Projectivity<T> {
    let two = T::lit(2.0);
    let m =
        Matrix3::new(-T::one(), T::zero(), two * o.x, T::zero(), -T::one(), two * o.y, T::zero(), T::zero(), T::one());
    Projectivity::new(m).expect("point reflections are invertible")
}

/// Matrix whose columns are scaled `p1, p2, p3` with `p4` the image of `(1:1:1)`.
fn frame_matrix<T: Real>(pts: &[HomogeneousPoint<T>; 4]) -> Result<Matrix3<T>> {
    let u: Vec<Vector3<T>> = pts.iter().map(|p| p.unit()).collect();
    let tol = T::tol(COLLINEARITY_TOL);
    for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
        if Matrix3::from_columns(&[u[i], u[j], u[k]]).determinant().abs() <= tol {
            return Err(GeometryError::DegeneratePosition);
        }
    }
    let basis = Matrix3::from_columns(&[u[0], u[1], u[2]]);
    let weights = basis.lu().solve(&u[3]).ok_or(GeometryError::SingularSystem)?;
    Ok(Matrix3::from_columns(&[u[0] * weights.x, u[1] * weights.y, u[2] * weights.z]))
}

/// The unique projectivity sending `src[i]` to `dst[i]` for `i = 0..4`.
pub fn projectivity_from_correspondence<T: Real>(
    src: &[HomogeneousPoint<T>; 4],
    dst: &[HomogeneousPoint<T>; 4],
) -> Result<Projectivity<T>> {
    let from = frame_matrix(src)?;
    let to = frame_matrix(dst)?;
    let from_inv = from.try_inverse().ok_or(GeometryError::SingularSystem)?;
    Projectivity::new(to * from_inv)
}

/// A projectivity sending the line `l` to the ideal line.
///
/// The third matrix row is `(a, b, c)`; the other two rows are the standard
/// basis rows that skip the dominant coefficient, so the determinant is
/// `±max|coefficient|`.
pub fn line_to_infinity<T: Real>(l: &LineCoeffs<T>) -> Result<Projectivity<T>> {
    let c = l.coeffs();
    let k = c.iamax();
    let mut rows = (0..3).filter(|&i| i != k).map(|i| {
        let mut r = Vector3::zeros();
        r[i] = T::one();
        r
    });
    let r0 = rows.next().ok_or(GeometryError::InvalidLine)?;
    let r1 = rows.next().ok_or(GeometryError::InvalidLine)?;
    let m = Matrix3::from_rows(&[r0.transpose(), r1.transpose(), c.transpose()]);
    Projectivity::new(m)
}
