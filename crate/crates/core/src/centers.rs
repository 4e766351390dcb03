//! Projective centers, metric point reflections and the orbits they generate.
//!
//! For a point `O` of a convex body, `O*` is the locus of harmonic
//! conjugates of `O` with respect to the endpoints of the chords through
//! `O`. `O` is a projective center exactly when `O*` is a line missing the
//! body. Sending that line to infinity turns `O` into the affine center of
//! the image, and conjugating the affine point reflection there back gives
//! the metric point reflection of the Hilbert geometry.

use std::collections::HashSet;
use std::f64::consts::PI;

use nalgebra::{DMatrix, Vector2, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::body::{Chord, ConvexBody};
use crate::error::{GeometryError, Result};
use crate::metric::MetricSpace;
use crate::projective::{
    affine_point_reflection, are_collinear, line_to_infinity, AffinePoint, HomogeneousPoint, LineCoeffs, Projectivity,
};
use crate::scalar::Real;

pub const DEFAULT_DIRECTIONS: usize = 64;
pub const MIN_DIRECTIONS: usize = 8;
/// Default bound on the normalized incidence residual of the `O*` line fit.
pub const DEFAULT_FIT_TOL: f64 = 1e-6;
/// Samples along the `O*` line when checking that it misses the body.
pub const LINE_SAMPLES: usize = 1024;

/// One chord through `O` and the harmonic conjugate of `O` on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OStarSample<T: Real> {
    pub direction: Vector2<T>,
    pub chord: Chord<T>,
    pub conjugate: HomogeneousPoint<T>,
}

/// Outcome of the projective-center test at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterReport<T: Real> {
    pub point: AffinePoint<T>,
    /// The fitted `O*` line; absent when the samples do not fit a line.
    pub line: Option<LineCoeffs<T>>,
    pub fit_residual: T,
    pub line_misses_body: bool,
    pub is_projective_center: bool,
    pub reflection_isometry_error: Option<T>,
}

/// Parameters of the projective-center test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterTest<T: Real> {
    pub n_directions: usize,
    pub fit_tol: T,
}

impl<T: Real> Default for CenterTest<T> {
    fn default() -> Self {
        Self { n_directions: DEFAULT_DIRECTIONS, fit_tol: T::lit(DEFAULT_FIT_TOL) }
    }
}

/// Harmonic conjugate of the chord anchor with respect to the chord
/// endpoints, from the chord parameters: `(t_d·C + t_c·D : t_c + t_d)`.
fn anchor_conjugate<T: Real>(chord: &Chord<T>) -> Result<HomogeneousPoint<T>> {
    let xy = chord.c.coords * chord.t_d + chord.d.coords * chord.t_c;
    HomogeneousPoint::from_vector(Vector3::new(xy.x, xy.y, chord.t_c + chord.t_d))
}

/// Samples of `O*` over `n_directions` chords through `o`, with directions
/// spread uniformly over a half turn.
pub fn ostar_locus<T: Real>(
    body: &ConvexBody<T>,
    o: &AffinePoint<T>,
    n_directions: usize,
) -> Result<Vec<OStarSample<T>>> {
    if n_directions < MIN_DIRECTIONS {
        return Err(GeometryError::ParameterOutOfRange("at least 8 directions are needed"));
    }
    if !body.contains(o) {
        return Err(GeometryError::PointOutside { x: o.x.as_f64(), y: o.y.as_f64() });
    }
    (0..n_directions)
        .map(|k| {
            let angle = T::lit(PI * k as f64 / n_directions as f64);
            let direction = Vector2::new(angle.cos(), angle.sin());
            let chord = body.chord_through(o, &direction)?;
            let conjugate = anchor_conjugate(&chord)?;
            Ok(OStarSample { direction, chord, conjugate })
        })
        .collect()
}

/// Total least squares line through homogeneous samples: the right singular
/// vector of the smallest singular value. Returns the line and the largest
/// incidence residual `|ℓ·x|` over the unit-norm samples.
fn fit_homogeneous_line<T: Real>(samples: &[Vector3<T>]) -> Result<(LineCoeffs<T>, T)> {
    let rows = DMatrix::from_fn(samples.len(), 3, |i, j| samples[i][j]);
    let svd = rows.svd(false, true);
    let v_t = svd.v_t.ok_or(GeometryError::SingularSystem)?;
    let k = svd.singular_values.imin();
    let line = Vector3::new(v_t[(k, 0)], v_t[(k, 1)], v_t[(k, 2)]);
    let line = LineCoeffs::from_vector(line)?;
    let residual = samples.iter().map(|x| line.coeffs().dot(x).abs()).fold(T::zero(), |a, b| a.max(b));
    Ok((line, residual))
}

/// Whether the line avoids the body: the line is clipped to the bounding box
/// enlarged twice about its center and sampled densely.
pub fn line_misses_body<T: Real>(body: &ConvexBody<T>, line: &LineCoeffs<T>) -> bool {
    if line.is_ideal(T::tol(1e-14)) {
        return true;
    }
    let (lo, hi) = body.bounding_box();
    let mid = nalgebra::center(&lo, &hi);
    let half = (hi - lo) + Vector2::repeat(T::tol(1e-9));
    let (lo, hi) = (mid - half, mid + half);

    let n = Vector2::new(line.a(), line.b());
    let n2 = n.norm_squared();
    let base = AffinePoint::from(n * (-line.c() / n2));
    let dir = Vector2::new(-n.y, n.x);
    let (mut t0, mut t1) = (-T::max_value().unwrap_or(T::lit(1e300)), T::max_value().unwrap_or(T::lit(1e300)));
    for axis in 0..2 {
        if dir[axis] == T::zero() {
            if base[axis] < lo[axis] || base[axis] > hi[axis] {
                return true;
            }
            continue;
        }
        let a = (lo[axis] - base[axis]) / dir[axis];
        let b = (hi[axis] - base[axis]) / dir[axis];
        t0 = t0.max(a.min(b));
        t1 = t1.min(a.max(b));
    }
    if t0 > t1 {
        return true;
    }
    (0..=LINE_SAMPLES).all(|i| {
        let t = t0 + (t1 - t0) * T::from_count(i) / T::from_count(LINE_SAMPLES);
        !body.contains(&(base + dir * t))
    })
}

/// The projective-center test: fit a line to the `O*` samples and check
/// that it misses the body.
pub fn is_projective_center<T: Real>(
    body: &ConvexBody<T>,
    o: &AffinePoint<T>,
    n_directions: usize,
    tol: T,
) -> Result<CenterReport<T>> {
    let samples = ostar_locus(body, o, n_directions)?;
    let units: Vec<Vector3<T>> = samples.iter().map(|s| s.conjugate.unit()).collect();
    let (line, residual) = fit_homogeneous_line(&units)?;
    let fits = residual <= tol;
    let misses = line_misses_body(body, &line);
    Ok(CenterReport {
        point: *o,
        line: fits.then_some(line),
        fit_residual: residual,
        line_misses_body: misses,
        is_projective_center: fits && misses,
        reflection_isometry_error: None,
    })
}

fn not_a_center<T: Real>(report: &CenterReport<T>) -> GeometryError {
    GeometryError::NotAProjectiveCenter {
        x: report.point.x.as_f64(),
        y: report.point.y.as_f64(),
        residual: report.fit_residual.as_f64(),
    }
}

/// A projectivity taking `o` to the affine center (the origin) of the image
/// of the body: the fitted `O*` line goes to infinity, then `o` is
/// translated to the origin.
pub fn center_projectivity<T: Real>(body: &ConvexBody<T>, o: &AffinePoint<T>) -> Result<Projectivity<T>> {
    center_projectivity_with(body, o, &CenterTest::default())
}

pub fn center_projectivity_with<T: Real>(
    body: &ConvexBody<T>,
    o: &AffinePoint<T>,
    test: &CenterTest<T>,
) -> Result<Projectivity<T>> {
    let report = is_projective_center(body, o, test.n_directions, test.fit_tol)?;
    let line = match (&report.line, report.is_projective_center) {
        (Some(line), true) => *line,
        _ => return Err(not_a_center(&report)),
    };
    let to_infinity = if line.is_ideal(T::tol(1e-14)) {
        Projectivity::identity()
    } else {
        line_to_infinity(&line.oriented_towards(o))?
    };
    let image = to_infinity.apply_affine(o)?;
    Ok(Projectivity::translation(-image.coords).compose(&to_infinity))
}

/// A metric point reflection: an involutive isometry fixing `center` and
/// keeping every geodesic through it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointReflection<T: Real> {
    pub center: AffinePoint<T>,
    pub map: Projectivity<T>,
}

impl<T: Real> PointReflection<T> {
    pub fn apply(&self, x: &AffinePoint<T>) -> Result<AffinePoint<T>> {
        self.map.apply_affine(x)
    }

    /// `self ∘ other ∘ self`: the reflection at `self(other.center)`.
    pub fn conjugate(&self, other: &Self) -> Result<Self> {
        let center = self.apply(&other.center)?;
        let map = self.map.compose(&other.map).compose(&self.map);
        Ok(Self { center, map })
    }

    /// Largest `|d(X,Y) − d(ρX,ρY)|` over the given pairs.
    pub fn isometry_error(&self, space: &MetricSpace<T>, pairs: &[(AffinePoint<T>, AffinePoint<T>)]) -> Result<T> {
        let mut worst = T::zero();
        for (x, y) in pairs {
            let before = space.distance(x, y)?;
            let after = space.distance(&self.apply(x)?, &self.apply(y)?)?;
            worst = worst.max((before - after).abs());
        }
        Ok(worst)
    }

    /// Distance of `map ∘ map` from the identity, modulo scale.
    pub fn involution_error(&self) -> T {
        self.map.compose(&self.map).distance_mod_scale(&Projectivity::identity())
    }
}

/// The metric point reflection at `o`.
///
/// Minkowski: the affine point reflection. Hilbert: `ϖ⁻¹ ∘ ρ̄ ∘ ϖ` with `ϖ`
/// from [`center_projectivity`] and `ρ̄` the affine reflection at `ϖ(o)`.
/// Fails with `NotAProjectiveCenter` where no reflection exists.
pub fn construct_point_reflection<T: Real>(space: &MetricSpace<T>, o: &AffinePoint<T>) -> Result<PointReflection<T>> {
    construct_point_reflection_with(space, o, &CenterTest::default())
}

pub fn construct_point_reflection_with<T: Real>(
    space: &MetricSpace<T>,
    o: &AffinePoint<T>,
    test: &CenterTest<T>,
) -> Result<PointReflection<T>> {
    match space {
        MetricSpace::Minkowski { .. } => Ok(PointReflection { center: *o, map: affine_point_reflection(o) }),
        MetricSpace::Hilbert { body } => {
            let to_center = center_projectivity_with(body, o, test)?;
            let image = to_center.apply_affine(o)?;
            let map = to_center.inverse().compose(&affine_point_reflection(&image)).compose(&to_center);
            Ok(PointReflection { center: *o, map })
        }
    }
}

/// `τ = first ∘ second`, a translation along the geodesic through both centers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Translation<T: Real> {
    pub first: PointReflection<T>,
    pub second: PointReflection<T>,
}

impl<T: Real> Translation<T> {
    /// `τ_PQ = ρ_P ∘ ρ_Q`.
    pub fn new(first: PointReflection<T>, second: PointReflection<T>) -> Self {
        Self { first, second }
    }

    pub fn map(&self) -> Projectivity<T> {
        self.first.map.compose(&self.second.map)
    }

    pub fn apply(&self, x: &AffinePoint<T>) -> Result<AffinePoint<T>> {
        self.first.apply(&self.second.apply(x)?)
    }
}

/// Applies the translation to an admissible point; the image must stay admissible.
pub fn translate<T: Real>(space: &MetricSpace<T>, t: &Translation<T>, x: &AffinePoint<T>) -> Result<AffinePoint<T>> {
    let outside = |p: &AffinePoint<T>| GeometryError::PointOutside { x: p.x.as_f64(), y: p.y.as_f64() };
    if !space.is_admissible(x) {
        return Err(outside(x));
    }
    let image = t.apply(x)?;
    if !space.is_admissible(&image) {
        return Err(outside(&image));
    }
    Ok(image)
}

fn check_center<T: Real>(space: &MetricSpace<T>, q: &AffinePoint<T>, test: &CenterTest<T>) -> Result<()> {
    let not_center = GeometryError::NotACenter { x: q.x.as_f64(), y: q.y.as_f64() };
    match space {
        MetricSpace::Minkowski { .. } => Ok(()),
        MetricSpace::Hilbert { body } => {
            if !body.contains(q) {
                return Err(not_center);
            }
            let report = is_projective_center(body, q, test.n_directions, test.fit_tol)?;
            if report.is_projective_center {
                Ok(())
            } else {
                Err(not_center)
            }
        }
    }
}

/// `ρ_O(Q)` for a center `Q`; the image is checked to be a center again.
pub fn conjugate_center<T: Real>(
    space: &MetricSpace<T>,
    reflection: &PointReflection<T>,
    q: &AffinePoint<T>,
) -> Result<AffinePoint<T>> {
    let test = CenterTest::default();
    check_center(space, q, &test)?;
    let image = reflection.apply(q)?;
    check_center(space, &image, &test)?;
    Ok(image)
}

/// Orbit values `2ip − 2jq` with `|i| + |j| ≤ max_iter` inside
/// `[lo, hi]`, sorted and de-duplicated.
pub fn kronecker_orbit<T: Real>(p: T, q: T, lo: T, hi: T, max_iter: usize) -> Result<Vec<T>> {
    if !(p > T::zero() && q > T::zero() && p.is_finite() && q.is_finite()) {
        return Err(GeometryError::ParameterOutOfRange("p and q must be positive"));
    }
    if !(lo <= hi && lo.is_finite() && hi.is_finite()) {
        return Err(GeometryError::ParameterOutOfRange("empty range"));
    }
    let n = max_iter as i64;
    let two = T::lit(2.0);
    let int = |k: i64| T::from_i64(k).expect("index representable");
    let mut values = Vec::new();
    for j in -n..=n {
        let shift = two * int(j) * q;
        let room = n - j.abs();
        let i_min = ((lo + shift) / (two * p)).ceil().to_i64().unwrap_or(i64::MIN).max(-room);
        let i_max = ((hi + shift) / (two * p)).floor().to_i64().unwrap_or(i64::MAX).min(room);
        for i in i_min..=i_max {
            let v = two * int(i) * p - shift;
            if v >= lo && v <= hi {
                values.push(v);
            }
        }
    }
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite orbit values"));
    let eps = T::tol(1e-12);
    values.dedup_by(|a, b| (*a - *b).abs() <= eps * b.abs().max(T::one()));
    Ok(values)
}

/// Largest gap of the sorted `values` inside `[lo, hi]`, counting the gaps
/// to both ends of the range.
pub fn max_gap<T: Real>(values: &[T], lo: T, hi: T) -> T {
    let mut prev = lo;
    let mut gap = T::zero();
    for &v in values {
        gap = gap.max(v - prev);
        prev = v;
    }
    gap.max(hi - prev)
}

/// Limits on [`pencil_orbit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitLimits<T: Real> {
    pub max_points: usize,
    /// Keep only centers within this distance of the tip.
    pub window: Option<T>,
    /// Cell size of the spatial hash used for de-duplication.
    pub resolution: T,
}

impl<T: Real> Default for OrbitLimits<T> {
    fn default() -> Self {
        Self { max_points: 20_000, window: None, resolution: T::lit(1e-6) }
    }
}

/// Closes the pencil's centers under `(C, X) ↦ ρ_C(X)` for `generations`
/// rounds.
///
/// Reflections at generated centers are obtained by conjugation,
/// `ρ_{ρ_C X} = ρ_C ∘ ρ_X ∘ ρ_C`, so only the input centers go through the
/// projective-center test.
pub fn pencil_orbit<T: Real>(
    space: &MetricSpace<T>,
    tip: &AffinePoint<T>,
    pencil: &[(AffinePoint<T>, AffinePoint<T>)],
    generations: usize,
    limits: &OrbitLimits<T>,
) -> Result<Vec<AffinePoint<T>>> {
    for (p, q) in pencil {
        if !are_collinear(tip, p, q) {
            return Err(GeometryError::NotCollinear);
        }
    }
    let key = |x: &AffinePoint<T>| {
        let cell = |v: T| (v / limits.resolution).round().to_i64().unwrap_or(i64::MAX);
        (cell(x.x), cell(x.y))
    };
    let mut seen = HashSet::new();
    let mut reflections: Vec<PointReflection<T>> = Vec::new();
    let seeds = std::iter::once(*tip).chain(pencil.iter().flat_map(|(p, q)| [*p, *q]));
    for x in seeds {
        if !space.is_admissible(&x) {
            return Err(GeometryError::NotACenter { x: x.x.as_f64(), y: x.y.as_f64() });
        }
        if seen.insert(key(&x)) {
            let refl = construct_point_reflection(space, &x).map_err(|e| match e {
                GeometryError::NotAProjectiveCenter { x, y, .. } => GeometryError::NotACenter { x, y },
                other => other,
            })?;
            reflections.push(refl);
        }
    }

    let in_window = |x: &AffinePoint<T>| -> bool {
        if !space.is_admissible(x) {
            return false;
        }
        match limits.window {
            None => true,
            Some(r) => space.distance(tip, x).map(|d| d <= r).unwrap_or(false),
        }
    };

    let mut done = 0;
    'generations: for _ in 0..generations {
        let n = reflections.len();
        if n == done {
            break;
        }
        for c in 0..n {
            for x in 0..n {
                if c < done && x < done {
                    continue;
                }
                if reflections.len() >= limits.max_points {
                    break 'generations;
                }
                let (rc, rx) = (&reflections[c], &reflections[x]);
                let Ok(image) = rc.apply(&rx.center) else { continue };
                if !in_window(&image) || seen.contains(&key(&image)) {
                    continue;
                }
                let Ok(refl) = rc.conjugate(rx) else { continue };
                seen.insert(key(&image));
                reflections.push(refl);
            }
        }
        done = n;
    }
    Ok(reflections.into_iter().map(|r| r.center).collect())
}

/// `count` random pairs of points inside the metric ball of radius `radius`
/// around `center`, reproducible from `seed`.
pub fn sample_ball_pairs<T: Real>(
    space: &MetricSpace<T>,
    center: &AffinePoint<T>,
    radius: T,
    count: usize,
    seed: u64,
) -> Result<Vec<(AffinePoint<T>, AffinePoint<T>)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let point = |rng: &mut ChaCha8Rng| -> Result<AffinePoint<T>> {
        let angle: f64 = rng.gen_range(0.0..2.0 * PI);
        let s: f64 = rng.gen_range(0.0..1.0);
        let dir = Vector2::new(T::lit(angle.cos()), T::lit(angle.sin()));
        space.geodesic_from(center, &dir, radius * T::lit(s))
    };
    (0..count).map(|_| Ok((point(&mut rng)?, point(&mut rng)?))).collect()
}
