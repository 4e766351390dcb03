//! Bounded convex open domains in the plane.
//!
//! A [`ConvexBody`] serves both as the domain of a Hilbert geometry and as
//! the indicatrix (unit ball) of a Minkowski geometry. All variants are open:
//! boundary points are not contained.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2, Vector3};

use crate::error::{GeometryError, Result};
use crate::projective::{AffinePoint, HomogeneousPoint, Projectivity};
use crate::scalar::Real;

/// Bisection steps for boundary root finding on bodies without a closed form.
pub const BISECTION_STEPS: usize = 60;
/// Relative tolerance used when deciding central symmetry at construction.
pub const SYMMETRY_TOL: f64 = 1e-9;

const BOUNDARY_SAMPLES: usize = 512;

/// The concrete description of a body.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape<T: Real> {
    /// `{x : (x − c)ᵀ S (x − c) < 1}` with `S` symmetric positive definite.
    Ellipse { center: AffinePoint<T>, shape: Matrix2<T> },
    /// `{center + scale·u : ‖u‖_p < 1}` with `p > 1`.
    PNormBall { p: T, scale: Matrix2<T>, center: AffinePoint<T> },
    /// Strictly convex polygon, vertices counterclockwise.
    Polygon { vertices: Vec<AffinePoint<T>> },
    /// `map(base)`, required to stay bounded in the affine chart.
    ProjectiveImage { base: Box<ConvexBody<T>>, map: Projectivity<T> },
}

/// A bounded, convex, open domain of the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexBody<T: Real> {
    shape: Shape<T>,
    center: AffinePoint<T>,
    bbox: (AffinePoint<T>, AffinePoint<T>),
    diameter: T,
    symmetric: bool,
    cache: Cache<T>,
}

#[derive(Debug, Clone, PartialEq)]
enum Cache<T: Real> {
    None,
    ScaleInverse(Matrix2<T>),
    /// Outward unit normals `n` and offsets `h`: the interior is `n·x < h`.
    Edges(Vec<(Vector2<T>, T)>),
    Inverse(Projectivity<T>),
}

/// The intersection of a line with a body: open segment `CD`.
///
/// `c = anchor + t_c·direction` and `d = anchor + t_d·direction` with
/// `t_c < 0 < t_d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chord<T: Real> {
    pub anchor: AffinePoint<T>,
    pub direction: Vector2<T>,
    pub c: AffinePoint<T>,
    pub d: AffinePoint<T>,
    pub t_c: T,
    pub t_d: T,
}

impl<T: Real> Chord<T> {
    pub fn point_at(&self, t: T) -> AffinePoint<T> {
        self.anchor + self.direction * t
    }

    pub fn length(&self) -> T {
        self.t_d - self.t_c
    }
}

fn unit_direction<T: Real>(dir: &Vector2<T>) -> Result<Vector2<T>> {
    let n = dir.norm();
    if !n.is_finite() || n == T::zero() {
        return Err(GeometryError::DegenerateInput("zero direction"));
    }
    Ok(dir / n)
}

fn pnorm_sum<T: Real>(u: &Vector2<T>, p: T) -> T {
    u.x.abs().powf(p) + u.y.abs().powf(p)
}

fn pnorm<T: Real>(u: &Vector2<T>, p: T) -> T {
    let m = u.x.abs().max(u.y.abs());
    if m == T::zero() {
        return T::zero();
    }
    m * pnorm_sum(&(u / m), p).powf(T::one() / p)
}

/// Root of `‖q + t·w‖_p = 1` for `t > 0`, given `‖q‖_p < 1`. The norm is
/// convex along the ray, so Newton started to the right of the root
/// decreases monotonically onto it.
fn pnorm_exit<T: Real>(q: &Vector2<T>, w: &Vector2<T>, p: T) -> T {
    let mut t = (T::one() + pnorm(q, p)) / pnorm(w, p);
    for _ in 0..100 {
        let u = q + w * t;
        let m = u.x.abs().max(u.y.abs());
        let r = u / m;
        let sum = pnorm_sum(&r, p);
        let value = m * sum.powf(T::one() / p) - T::one();
        let pm1 = p - T::one();
        let signed = |v: T| v.abs().powf(pm1) * v.signum();
        let slope = (signed(r.x) * w.x + signed(r.y) * w.y) / sum.powf(pm1 / p);
        if !(value > T::zero() && slope > T::zero()) {
            break;
        }
        let step = value / slope;
        t -= step;
        if step <= T::default_epsilon() * t {
            break;
        }
    }
    t
}

fn max_spread<T: Real>(pts: &[AffinePoint<T>]) -> T {
    let mut best = T::zero();
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            best = best.max((b - a).norm());
        }
    }
    best
}

fn outside<T: Real>(p: &AffinePoint<T>) -> GeometryError {
    GeometryError::PointOutside { x: p.x.as_f64(), y: p.y.as_f64() }
}

impl<T: Real> ConvexBody<T> {
    /// Ellipse `(x − c)ᵀ S (x − c) < 1`.
    pub fn ellipse(center: AffinePoint<T>, shape: Matrix2<T>) -> Result<Self> {
        let s = shape.amax();
        let asym = (shape[(0, 1)] - shape[(1, 0)]).abs();
        if !s.is_finite() || asym > T::tol(1e-12) * s {
            return Err(GeometryError::InvalidBody("ellipse shape matrix is not symmetric".into()));
        }
        if !(shape[(0, 0)] > T::zero() && shape.determinant() > T::zero()) {
            return Err(GeometryError::InvalidBody("ellipse shape matrix is not positive definite".into()));
        }
        let inv = shape.try_inverse().ok_or(GeometryError::SingularSystem)?;
        let (hx, hy) = (inv[(0, 0)].sqrt(), inv[(1, 1)].sqrt());
        let bbox = (AffinePoint::new(center.x - hx, center.y - hy), AffinePoint::new(center.x + hx, center.y + hy));
        let diameter = T::lit(2.0) / shape.symmetric_eigenvalues().min().sqrt();
        Ok(Self {
            shape: Shape::Ellipse { center, shape },
            center,
            bbox,
            diameter,
            symmetric: true,
            cache: Cache::None,
        })
    }

    /// Axis-aligned ellipse with semi-axes `a` (along x) and `b` (along y).
    pub fn axis_ellipse(center: AffinePoint<T>, a: T, b: T) -> Result<Self> {
        if !(a > T::zero() && b > T::zero()) {
            return Err(GeometryError::InvalidBody("semi-axes must be positive".into()));
        }
        Self::ellipse(center, Matrix2::new(T::one() / (a * a), T::zero(), T::zero(), T::one() / (b * b)))
    }

    /// Open disk of the given radius.
    pub fn disk(center: AffinePoint<T>, radius: T) -> Result<Self> {
        Self::axis_ellipse(center, radius, radius)
    }

    /// The open unit disk.
    pub fn unit_disk() -> Self {
        Self::disk(AffinePoint::origin(), T::one()).expect("unit disk is valid")
    }

    /// `{center + scale·u : ‖u‖_p < 1}`.
    pub fn pnorm_ball(p: T, scale: Matrix2<T>, center: AffinePoint<T>) -> Result<Self> {
        if !(p.is_finite() && p > T::one()) {
            return Err(GeometryError::InvalidBody("p-norm ball needs finite p > 1".into()));
        }
        let inv = scale
            .try_inverse()
            .filter(|m| m.iter().all(|v| v.is_finite()))
            .ok_or_else(|| GeometryError::InvalidBody("p-norm ball scale matrix is singular".into()))?;
        let mut body = Self {
            shape: Shape::PNormBall { p, scale, center },
            center,
            bbox: (center, center),
            diameter: T::zero(),
            symmetric: true,
            cache: Cache::ScaleInverse(inv),
        };
        body.bbox = body.sampled_bbox();
        body.diameter = max_spread(&body.boundary_points(BOUNDARY_SAMPLES / 2));
        Ok(body)
    }

    /// Unit ball of the p-norm centered at the origin.
    pub fn unit_pnorm_ball(p: T) -> Result<Self> {
        Self::pnorm_ball(p, Matrix2::identity(), AffinePoint::origin())
    }

    /// Strictly convex polygon from counterclockwise vertices.
    pub fn polygon(vertices: Vec<AffinePoint<T>>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::InvalidBody("polygon needs at least 3 vertices".into()));
        }
        if vertices.iter().any(|v| !(v.x.is_finite() && v.y.is_finite())) {
            return Err(GeometryError::InvalidBody("polygon vertex is not finite".into()));
        }
        let mut turning = T::zero();
        let mut edges = Vec::with_capacity(n);
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            let e1 = b - a;
            let e2 = c - b;
            let cross = e1.x * e2.y - e1.y * e2.x;
            let scale = e1.norm() * e2.norm();
            if !(cross > T::tol(1e-12) * scale) {
                return Err(GeometryError::InvalidBody(
                    "polygon vertices must be strictly convex and counterclockwise".into(),
                ));
            }
            turning += cross.atan2(e1.dot(&e2));
            let normal = Vector2::new(e1.y, -e1.x) / e1.norm();
            edges.push((normal, normal.dot(&a.coords)));
        }
        if (turning - T::two_pi()).abs() > T::lit(1e-6) {
            return Err(GeometryError::InvalidBody("polygon winds more than once".into()));
        }
        let sum = vertices.iter().fold(Vector2::zeros(), |acc, v| acc + v.coords);
        let center = AffinePoint::from(sum / T::from_count(n));
        let (mut lo, mut hi) = (vertices[0], vertices[0]);
        for v in &vertices {
            lo = AffinePoint::new(lo.x.min(v.x), lo.y.min(v.y));
            hi = AffinePoint::new(hi.x.max(v.x), hi.y.max(v.y));
        }
        let diameter = max_spread(&vertices);
        let mut body = Self {
            shape: Shape::Polygon { vertices },
            center,
            bbox: (lo, hi),
            diameter,
            symmetric: false,
            cache: Cache::Edges(edges),
        };
        body.symmetric = body.is_centrally_symmetric(T::tol(SYMMETRY_TOL));
        Ok(body)
    }

    /// Image of `base` under `map`; rejected when the image is unbounded.
    pub fn projective_image(base: ConvexBody<T>, map: Projectivity<T>) -> Result<Self> {
        let row = map.matrix().row(2).transpose();
        let w_at = |p: &AffinePoint<T>| row.x * p.x + row.y * p.y + row.z;
        let w_center = w_at(&base.center);
        let samples = base.boundary_points(4 * BOUNDARY_SAMPLES);
        let mut w_min = w_center.abs();
        let mut w_max = w_center.abs();
        for p in &samples {
            let w = w_at(p);
            if w * w_center <= T::zero() {
                return Err(GeometryError::UnboundedImage);
            }
            w_min = w_min.min(w.abs());
            w_max = w_max.max(w.abs());
        }
        if w_min <= T::tol(1e-6) * w_max {
            return Err(GeometryError::UnboundedImage);
        }
        let center = map.apply_affine(&base.center)?;
        let inverse = map.inverse();
        let mut body = Self {
            shape: Shape::ProjectiveImage { base: Box::new(base), map },
            center,
            bbox: (center, center),
            diameter: T::zero(),
            symmetric: false,
            cache: Cache::Inverse(inverse),
        };
        body.bbox = body.sampled_bbox();
        body.diameter = max_spread(&body.boundary_points(BOUNDARY_SAMPLES / 2));
        body.symmetric = body.is_centrally_symmetric(T::tol(SYMMETRY_TOL));
        Ok(body)
    }

    pub fn shape(&self) -> &Shape<T> {
        &self.shape
    }

    /// The declared center: the center of symmetry for ellipses and p-norm
    /// balls, the vertex centroid for polygons and the image of the base
    /// center for projective images.
    pub fn center(&self) -> AffinePoint<T> {
        self.center
    }

    /// Axis-aligned bounding box `(min, max)`; sampled for p-norm balls and
    /// projective images.
    pub fn bounding_box(&self) -> (AffinePoint<T>, AffinePoint<T>) {
        self.bbox
    }

    /// Euclidean diameter; exact for ellipses and polygons, sampled otherwise.
    pub fn diameter(&self) -> T {
        self.diameter
    }

    /// Polygons have flat boundary pieces; everything else here is strictly convex.
    pub fn is_strictly_convex(&self) -> bool {
        match &self.shape {
            Shape::Polygon { .. } => false,
            Shape::ProjectiveImage { base, .. } => base.is_strictly_convex(),
            _ => true,
        }
    }

    /// Whether the body is symmetric about its declared center.
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Membership in the open domain.
    pub fn contains(&self, x: &AffinePoint<T>) -> bool {
        if !(x.x.is_finite() && x.y.is_finite()) {
            return false;
        }
        match (&self.shape, &self.cache) {
            (Shape::Ellipse { center, shape }, _) => {
                let q = x - center;
                q.dot(&(shape * q)) < T::one()
            }
            (Shape::PNormBall { p, center, .. }, Cache::ScaleInverse(inv)) => {
                pnorm_sum(&(inv * (x - center)), *p) < T::one()
            }
            (Shape::Polygon { .. }, Cache::Edges(edges)) => edges.iter().all(|(n, h)| n.dot(&x.coords) < *h),
            (Shape::ProjectiveImage { base, .. }, Cache::Inverse(inv)) => {
                match inv.apply(&HomogeneousPoint::from_affine(x)).to_affine() {
                    Some(pre) => base.contains(&pre),
                    None => false,
                }
            }
            _ => unreachable!("cache always matches the shape"),
        }
    }

    /// Parameter `t > 0` at which the ray `p + t·dir` leaves the body.
    /// `p` must be inside and `dir` a unit vector.
    fn exit_param(&self, p: &AffinePoint<T>, dir: &Vector2<T>) -> T {
        match (&self.shape, &self.cache) {
            (Shape::Ellipse { center, shape }, _) => {
                let q = p - center;
                let sd = shape * dir;
                let a = dir.dot(&sd);
                let b = T::lit(2.0) * q.dot(&sd);
                let c = q.dot(&(shape * q)) - T::one();
                let root = (b * b - T::lit(4.0) * a * c).max(T::zero()).sqrt();
                if b >= T::zero() {
                    -T::lit(2.0) * c / (b + root)
                } else {
                    (root - b) / (T::lit(2.0) * a)
                }
            }
            (Shape::Polygon { .. }, Cache::Edges(edges)) => edges
                .iter()
                .filter_map(|(n, h)| {
                    let nd = n.dot(dir);
                    (nd > T::zero()).then(|| ((*h - n.dot(&p.coords)) / nd).max(T::zero()))
                })
                .fold(T::max_value().unwrap_or(T::one()), |acc, t| acc.min(t)),
            (Shape::PNormBall { p: exponent, center, .. }, Cache::ScaleInverse(inv)) => {
                pnorm_exit(&(inv * (p - center)), &(inv * dir), *exponent)
            }
            (Shape::ProjectiveImage { base, .. }, Cache::Inverse(inv)) => {
                self.pulled_back_exit(base, inv, p, dir).unwrap_or_else(|| self.bisect_exit(p, dir))
            }
            _ => self.bisect_exit(p, dir),
        }
    }

    /// The ray `p + t·dir` pulls back to the ray `a' + s·u` in the base body
    /// with `s = t / (a_w (a_w + t b_w))`, so the base exit converts exactly.
    fn pulled_back_exit(
        &self,
        base: &ConvexBody<T>,
        inv: &Projectivity<T>,
        p: &AffinePoint<T>,
        dir: &Vector2<T>,
    ) -> Option<T> {
        let m = inv.matrix();
        let mut a = m * Vector3::new(p.x, p.y, T::one());
        let mut b = m * Vector3::new(dir.x, dir.y, T::zero());
        if a.z < T::zero() {
            a = -a;
            b = -b;
        }
        if !(a.z > T::zero()) {
            return None;
        }
        let start = AffinePoint::new(a.x / a.z, a.y / a.z);
        let u = Vector2::new(b.x * a.z - a.x * b.z, b.y * a.z - a.y * b.z);
        if !(u.norm() > T::zero()) {
            return None;
        }
        let s = base.exit_param(&start, &u);
        let denom = T::one() - s * a.z * b.z;
        (denom > T::zero() && s.is_finite()).then(|| s * a.z * a.z / denom)
    }

    fn bisect_exit(&self, p: &AffinePoint<T>, dir: &Vector2<T>) -> T {
        let mut lo = T::zero();
        let mut hi = (self.bbox.1 - self.bbox.0).norm().max(T::tol(1e-12)) + (p - self.center).norm();
        let mut guard = 0;
        while self.contains(&(p + dir * hi)) && guard < 200 {
            lo = hi;
            hi *= T::lit(2.0);
            guard += 1;
        }
        for _ in 0..BISECTION_STEPS {
            let mid = (lo + hi) * T::lit(0.5);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.contains(&(p + dir * mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo + hi) * T::lit(0.5)
    }

    /// The chord of the full line `p + t·direction`.
    pub fn chord_through(&self, p: &AffinePoint<T>, direction: &Vector2<T>) -> Result<Chord<T>> {
        if !self.contains(p) {
            return Err(outside(p));
        }
        let dir = unit_direction(direction)?;
        let t_d = self.exit_param(p, &dir);
        let t_c = -self.exit_param(p, &(-dir));
        Ok(Chord { anchor: *p, direction: dir, c: p + dir * t_c, d: p + dir * t_d, t_c, t_d })
    }

    /// `count` boundary points at uniform angular spacing around the center.
    pub fn boundary_points(&self, count: usize) -> Vec<AffinePoint<T>> {
        (0..count)
            .map(|k| {
                let angle = T::lit(2.0 * PI * k as f64 / count as f64);
                let dir = Vector2::new(angle.cos(), angle.sin());
                self.center + dir * self.exit_param(&self.center, &dir)
            })
            .collect()
    }

    fn sampled_bbox(&self) -> (AffinePoint<T>, AffinePoint<T>) {
        let pts = self.boundary_points(BOUNDARY_SAMPLES);
        let (mut lo, mut hi) = (self.center, self.center);
        for v in &pts {
            lo = AffinePoint::new(lo.x.min(v.x), lo.y.min(v.y));
            hi = AffinePoint::new(hi.x.max(v.x), hi.y.max(v.y));
        }
        (lo, hi)
    }

    /// True iff boundary samples reflected through the center land on the
    /// boundary, within `tol` relative to their distance from the center.
    pub fn is_centrally_symmetric(&self, tol: T) -> bool {
        let n = 64;
        // offset the angles so samples do not sit on vertices
        let offset = 0.1234;
        (0..n).all(|k| {
            let angle = T::lit(2.0 * PI * (k as f64 + offset) / n as f64);
            let dir = Vector2::new(angle.cos(), angle.sin());
            let forward = self.exit_param(&self.center, &dir);
            let backward = self.exit_param(&self.center, &(-dir));
            (forward - backward).abs() <= tol * forward.max(backward)
        })
    }

    /// The gauge (Minkowski functional) `inf{λ > 0 : v/λ ∈ body − center}`.
    pub fn gauge(&self, v: &Vector2<T>) -> Result<T> {
        if !self.symmetric {
            return Err(GeometryError::NotSymmetric);
        }
        if v.x == T::zero() && v.y == T::zero() {
            return Ok(T::zero());
        }
        match (&self.shape, &self.cache) {
            (Shape::Ellipse { shape, .. }, _) => Ok(v.dot(&(shape * v)).sqrt()),
            (Shape::PNormBall { p, .. }, Cache::ScaleInverse(inv)) => Ok(pnorm(&(inv * v), *p)),
            (Shape::Polygon { .. }, Cache::Edges(edges)) => Ok(edges
                .iter()
                .map(|(n, h)| n.dot(v) / (*h - n.dot(&self.center.coords)))
                .fold(T::zero(), |acc, g| acc.max(g))),
            _ => {
                let len = v.norm();
                Ok(len / self.exit_param(&self.center, &(v / len)))
            }
        }
    }
}
