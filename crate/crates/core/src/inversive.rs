//! Inversion in circles and spheres, reflections of R⁴, Steiner and
//! Apollonius families, and symmetry spheres along a line.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::stereographic::{
    inverse_s3, preimage_hyperplane, project_s3_unchecked, CircleOrLine, Hyperplane, Sphere, SphereOrPlane,
};

/// Points closer than this to an inversion center are rejected.
pub const CENTER_TOL: f64 = 1e-12;

/// Tolerance on the normalised offset of a great-sphere hyperplane.
pub const GREAT_SPHERE_TOL: f64 = 1e-9;

/// Tolerance for "point lies on the line".
pub const ON_LINE_TOL: f64 = 1e-9;

/// Center `a` and radius `ρ` of an inversion.
pub type InversionSphere<const N: usize> = Sphere<N>;

/// `ψ_S(p) = ρ² (p - a) / |p - a|² + a`.
pub fn invert<const N: usize>(p: &Vector<N>, s: &InversionSphere<N>) -> Result<Vector<N>> {
    let d = *p - s.center;
    let d2 = d.norm_squared();
    if d2.sqrt() <= CENTER_TOL {
        return Err(Error::CenterInversion);
    }
    Ok(d * (s.radius * s.radius / d2) + s.center)
}

/// `Ψ(x) = x - 2 (x·n)/|n|² n`.
pub fn reflect_hyperplane<const N: usize>(x: &Vector<N>, n: &Vector<N>) -> Result<Vector<N>> {
    let n2 = n.norm_squared();
    if n2 == 0.0 || !n2.is_finite() {
        return Err(Error::ZeroNormal);
    }
    Ok(*x - *n * (2.0 * x.dot(n) / n2))
}

/// Mirror image of `p` in an affine hyperplane `{n·x = e}`.
pub fn reflect_affine<const N: usize>(p: &Vector<N>, h: &Hyperplane<N>) -> Vector<N> {
    let n = h.normal;
    *p - n * (2.0 * (n.dot(p) - h.offset) / n.norm_squared())
}

/// Reflection in a sphere or plane of R³ computed as `π ∘ Ψ ∘ π⁻¹`, where
/// `Ψ` reflects R⁴ in the hyperplane through the origin whose intersection
/// with S³ is `π⁻¹(s)`.
pub fn conjugate_reflection(s: &SphereOrPlane<3>, p: &Vector<3>) -> Result<Vector<3>> {
    let h = preimage_hyperplane(s).normalized();
    if h.offset.abs() > GREAT_SPHERE_TOL {
        return Err(Error::NotGreatSphere { offset: h.offset });
    }
    if let SphereOrPlane::Sphere(sp) = s {
        if p.distance(&sp.center) <= CENTER_TOL {
            return Err(Error::CenterInversion);
        }
    }
    let y = reflect_hyperplane(&inverse_s3(p), &h.normal)?;
    project_s3_unchecked(&y).map_err(|_| Error::CenterInversion)
}

/// Reflection in a sphere (inversion) or a plane (mirror).
pub fn reflect_in<const N: usize>(p: &Vector<N>, s: &SphereOrPlane<N>) -> Result<Vector<N>> {
    match s {
        SphereOrPlane::Sphere(sp) => invert(p, sp),
        SphereOrPlane::Plane(h) => Ok(reflect_affine(p, h)),
    }
}

/// A line with base point `m₀` and reference distance `ρ₀`; the sphere at
/// `a` on the line has radius `√(|a - m₀|² + ρ₀²)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetryLine {
    pub base: Vector<3>,
    pub direction: Vector<3>,
    pub rho0: f64,
}

impl SymmetryLine {
    /// Normalises `direction`.
    pub fn new(base: Vector<3>, direction: Vector<3>, rho0: f64) -> Result<Self> {
        let direction = direction.normalized().ok_or(Error::ZeroVector)?;
        if !(rho0.is_finite() && rho0 > 0.0) {
            return Err(Error::BadRadius(rho0));
        }
        Ok(Self { base, direction, rho0 })
    }

    /// The line of Steiner-circle centers of a planar pair, embedded in `z = 0`.
    pub fn from_steiner_pair(pair: &SteinerPair) -> Self {
        let m = pair.midpoint();
        let u = pair.perpendicular();
        Self {
            base: Vector::new([m[0], m[1], 0.0]),
            direction: Vector::new([u[0], u[1], 0.0]),
            rho0: pair.rho0(),
        }
    }

    pub fn point_at(&self, t: f64) -> Vector<3> {
        self.base + self.direction * t
    }

    /// Distance of `p` from the line.
    pub fn distance(&self, p: &Vector<3>) -> f64 {
        let d = *p - self.base;
        (d - self.direction * d.dot(&self.direction)).norm()
    }

    /// Symmetry sphere centered at `base + t · direction`.
    pub fn sphere_at_parameter(&self, t: f64) -> InversionSphere<3> {
        Sphere {
            center: self.point_at(t),
            radius: (t * t + self.rho0 * self.rho0).sqrt(),
        }
    }

    /// Image of the line under a linear map given as a closure (e.g. a rotation).
    pub fn transformed(&self, f: impl Fn(&Vector<3>) -> Vector<3>) -> Self {
        Self {
            base: f(&self.base),
            direction: f(&self.direction),
            rho0: self.rho0,
        }
    }
}

/// The symmetry sphere centered at `a`, which must lie on the line.
pub fn symmetry_sphere_at(line: &SymmetryLine, a: &Vector<3>) -> Result<InversionSphere<3>> {
    let distance = line.distance(a);
    if distance > ON_LINE_TOL {
        return Err(Error::PointOffLine { distance });
    }
    let d = a.distance(&line.base);
    Ok(Sphere {
        center: *a,
        radius: (d * d + line.rho0 * line.rho0).sqrt(),
    })
}

/// Two distinct points of the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SteinerPair {
    a1: Vector<2>,
    a2: Vector<2>,
}

impl SteinerPair {
    pub fn new(a1: Vector<2>, a2: Vector<2>) -> Result<Self> {
        if a1.distance(&a2) <= CENTER_TOL {
            return Err(Error::CoincidentPoints);
        }
        Ok(Self { a1, a2 })
    }

    pub fn a1(&self) -> Vector<2> {
        self.a1
    }

    pub fn a2(&self) -> Vector<2> {
        self.a2
    }

    pub fn midpoint(&self) -> Vector<2> {
        (self.a1 + self.a2) * 0.5
    }

    /// Half the distance between the points.
    pub fn rho0(&self) -> f64 {
        self.a1.distance(&self.a2) * 0.5
    }

    /// Unit vector from `a1` to `a2`.
    pub fn axis(&self) -> Vector<2> {
        (self.a2 - self.a1) * (1.0 / self.a1.distance(&self.a2))
    }

    /// Unit normal of the axis: direction of the line of Steiner centers.
    pub fn perpendicular(&self) -> Vector<2> {
        let u = self.axis();
        Vector::new([-u[1], u[0]])
    }

    /// The line through both points.
    pub fn line(&self) -> Hyperplane<2> {
        let n = self.perpendicular();
        Hyperplane {
            normal: n,
            offset: n.dot(&self.a1),
        }
    }
}

/// Grid step of the Steiner and Apollonius families.
pub const FAMILY_STEP: f64 = 0.5;

/// `count` circles through both points, centered at `m₀ + ρ₀ sinh(k h) · u`
/// for `k` symmetric about zero, followed by the line through the pair.
pub fn steiner_circles(pair: &SteinerPair, count: usize) -> Result<Vec<CircleOrLine>> {
    if count == 0 {
        return Err(Error::InvalidConfig("steiner count must be at least 1".into()));
    }
    let (m, u, rho0) = (pair.midpoint(), pair.perpendicular(), pair.rho0());
    let mid = (count as f64 - 1.0) / 2.0;
    let mut out: Vec<CircleOrLine> = (0..count)
        .map(|i| {
            let s = rho0 * ((i as f64 - mid) * FAMILY_STEP).sinh();
            let center = m + u * s;
            SphereOrPlane::Sphere(Sphere {
                center,
                radius: center.distance(&pair.a1),
            })
        })
        .collect();
    out.push(SphereOrPlane::Plane(pair.line()));
    Ok(out)
}

/// Circle of Apollonius centered at `center` on the axis, outside the segment.
pub fn apollonius_circle(pair: &SteinerPair, center: &Vector<2>) -> Result<Sphere<2>> {
    let line = pair.line();
    let distance = line.distance(center);
    if distance > ON_LINE_TOL {
        return Err(Error::PointOffLine { distance });
    }
    let rho0 = pair.rho0();
    let d = center.distance(&pair.midpoint());
    if d <= rho0 {
        return Err(Error::CenterInForbiddenSegment { distance: d, rho0 });
    }
    Ok(Sphere {
        center: *center,
        radius: ((d - rho0) * (d + rho0)).sqrt(),
    })
}

/// `count` Apollonius circles with `d = ρ₀ cosh(k h)`, alternating sides.
pub fn apollonius_family(pair: &SteinerPair, count: usize) -> Vec<Sphere<2>> {
    let (m, u, rho0) = (pair.midpoint(), pair.axis(), pair.rho0());
    (0..count)
        .map(|i| {
            let k = (i / 2 + 1) as f64;
            let side = if i % 2 == 0 { 1.0 } else { -1.0 };
            let center = m + u * (side * rho0 * (k * FAMILY_STEP).cosh());
            apollonius_circle(pair, &center).expect("center outside the segment")
        })
        .collect()
}

/// Intersection points of two circles or lines (empty when disjoint or tangent).
pub fn intersections(a: &CircleOrLine, b: &CircleOrLine) -> Vec<Vector<2>> {
    match (a, b) {
        (SphereOrPlane::Sphere(c1), SphereOrPlane::Sphere(c2)) => circle_circle(c1, c2),
        (SphereOrPlane::Sphere(c), SphereOrPlane::Plane(l)) | (SphereOrPlane::Plane(l), SphereOrPlane::Sphere(c)) => {
            circle_line(c, l)
        }
        (SphereOrPlane::Plane(l1), SphereOrPlane::Plane(l2)) => {
            let (n1, n2) = (l1.normal, l2.normal);
            let det = n1[0] * n2[1] - n1[1] * n2[0];
            if det.abs() < 1e-15 {
                return Vec::new();
            }
            vec![Vector::new([
                (l1.offset * n2[1] - l2.offset * n1[1]) / det,
                (n1[0] * l2.offset - n2[0] * l1.offset) / det,
            ])]
        }
    }
}

fn circle_circle(c1: &Sphere<2>, c2: &Sphere<2>) -> Vec<Vector<2>> {
    let d = c1.center.distance(&c2.center);
    if d == 0.0 || d >= c1.radius + c2.radius || d <= (c1.radius - c2.radius).abs() {
        return Vec::new();
    }
    let u = (c2.center - c1.center) * (1.0 / d);
    let along = (d * d + c1.radius * c1.radius - c2.radius * c2.radius) / (2.0 * d);
    let h = (c1.radius * c1.radius - along * along).max(0.0).sqrt();
    let foot = c1.center + u * along;
    let perp = Vector::new([-u[1], u[0]]);
    vec![foot + perp * h, foot - perp * h]
}

fn circle_line(c: &Sphere<2>, l: &Hyperplane<2>) -> Vec<Vector<2>> {
    let l = l.normalized();
    let signed = l.normal.dot(&c.center) - l.offset;
    if signed.abs() >= c.radius {
        return Vec::new();
    }
    let foot = c.center - l.normal * signed;
    let h = ((c.radius - signed) * (c.radius + signed)).sqrt();
    let dir = Vector::new([-l.normal[1], l.normal[0]]);
    vec![foot + dir * h, foot - dir * h]
}

/// Normal direction of a circle or line at a point on it.
fn normal_at(s: &CircleOrLine, p: &Vector<2>) -> Vector<2> {
    match s {
        SphereOrPlane::Sphere(c) => *p - c.center,
        SphereOrPlane::Plane(l) => l.normal,
    }
}

/// Crossing angle in `[0, π/2]` of two curves at a common point.
pub fn crossing_angle(a: &CircleOrLine, b: &CircleOrLine, p: &Vector<2>) -> Result<f64> {
    let (na, nb) = (normal_at(a, p), normal_at(b, p));
    let angle = crate::stereographic::angle_between_tangents(&na, &nb)?;
    Ok(if angle > FRAC_PI_2 { PI - angle } else { angle })
}

/// True if reflection in each of `n_lines` lines through `center` (at angles
/// `kπ/n_lines`) maps the point set into itself up to Hausdorff distance `tol`.
pub fn euclidean_symmetry_check(points: &[Vector<2>], center: &Vector<2>, n_lines: usize, tol: f64) -> bool {
    (0..n_lines).all(|k| {
        let theta = k as f64 * PI / n_lines as f64;
        let normal = Vector::new([-theta.sin(), theta.cos()]);
        let mirror = Hyperplane {
            normal,
            offset: normal.dot(center),
        };
        points.iter().all(|p| {
            let q = reflect_affine(p, &mirror);
            points.iter().any(|r| r.distance(&q) <= tol)
        })
    })
}
