//! Stereographic projection from the north pole of S² and S³.
//!
//! `π(x) = (x_1, ..., x_{n-1}) / (1 - x_n)` and
//! `π⁻¹(a) = (2a, |a|² - 1) / (|a|² + 1)`.
//!
//! Hyperplanes `{n·x = e}` of R⁴ correspond to spheres and planes of R³: a
//! hyperplane avoiding the pole meets S³ in a 2-sphere whose image is a
//! round sphere, one through the pole yields a plane.

use crate::error::{Error, Result};
use crate::linalg::{extend_orthonormal, Vector};

/// Inputs with `1 - x_n` below this are rejected as the projection pole.
pub const POLE_TOL: f64 = 1e-12;

/// Tolerance on `|p| = 1` for points handed to the sphere projections.
pub const ON_SPHERE_TOL: f64 = 1e-9;

/// A round sphere (a circle when `N = 2`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sphere<const N: usize> {
    pub center: Vector<N>,
    pub radius: f64,
}

impl<const N: usize> Sphere<N> {
    pub fn new(center: Vector<N>, radius: f64) -> Result<Self> {
        if radius.is_finite() && radius > 0.0 {
            Ok(Self { center, radius })
        } else {
            Err(Error::BadRadius(radius))
        }
    }

    /// Signed distance-like residual `|p - c| - r`.
    pub fn residual(&self, p: &Vector<N>) -> f64 {
        p.distance(&self.center) - self.radius
    }
}

pub type Circle = Sphere<2>;

/// `{x : normal · x = offset}`. The normal is stored as given, not normalised.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hyperplane<const N: usize> {
    pub normal: Vector<N>,
    pub offset: f64,
}

impl<const N: usize> Hyperplane<N> {
    pub fn new(normal: Vector<N>, offset: f64) -> Result<Self> {
        if normal.norm() > 0.0 && normal.is_finite() {
            Ok(Self { normal, offset })
        } else {
            Err(Error::ZeroNormal)
        }
    }

    /// Euclidean distance of `p` from the hyperplane.
    pub fn distance(&self, p: &Vector<N>) -> f64 {
        (self.normal.dot(p) - self.offset).abs() / self.normal.norm()
    }

    /// Same hyperplane rescaled to a unit normal.
    pub fn normalized(&self) -> Self {
        let s = 1.0 / self.normal.norm();
        Self {
            normal: self.normal * s,
            offset: self.offset * s,
        }
    }

    /// Equality up to a positive scalar multiple of `(normal, offset)`.
    pub fn equivalent(&self, other: &Self, tol: f64) -> bool {
        let (a, b) = (self.normalized(), other.normalized());
        a.normal.max_abs_diff(&b.normal) <= tol && (a.offset - b.offset).abs() <= tol
    }

    /// The intersection with the unit sphere, if it is a sphere of positive radius.
    pub fn unit_sphere_section(&self) -> Option<SphereSection<N>> {
        let h = self.normalized();
        let dist = h.offset;
        if dist.abs() >= 1.0 {
            return None;
        }
        let std: Vec<Vector<N>> = (0..N).map(Vector::basis).collect();
        let frame = extend_orthonormal(vec![h.normal], &std, N);
        Some(SphereSection {
            center: h.normal * dist,
            radius: (1.0 - dist * dist).sqrt(),
            frame: frame[1..].to_vec(),
        })
    }
}

/// A lower-dimensional sphere: `center + radius · Σ u_i frame_i` for unit `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereSection<const N: usize> {
    pub center: Vector<N>,
    pub radius: f64,
    /// Orthonormal basis of the hyperplane direction.
    pub frame: Vec<Vector<N>>,
}

impl<const N: usize> SphereSection<N> {
    /// Point with in-plane direction `coords` (normalised here).
    pub fn point(&self, coords: &[f64]) -> Vector<N> {
        let n = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        let mut p = self.center;
        for (c, f) in coords.iter().zip(&self.frame) {
            p += *f * (self.radius * c / n);
        }
        p
    }
}

/// A sphere or a plane (a circle or a line when `N = 2`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SphereOrPlane<const N: usize> {
    Sphere(Sphere<N>),
    Plane(Hyperplane<N>),
}

impl<const N: usize> SphereOrPlane<N> {
    /// Distance of `p` from the sphere or plane.
    pub fn residual(&self, p: &Vector<N>) -> f64 {
        match self {
            SphereOrPlane::Sphere(s) => s.residual(p).abs(),
            SphereOrPlane::Plane(h) => h.distance(p),
        }
    }

    pub fn as_sphere(&self) -> Option<&Sphere<N>> {
        match self {
            SphereOrPlane::Sphere(s) => Some(s),
            SphereOrPlane::Plane(_) => None,
        }
    }

    pub fn as_plane(&self) -> Option<&Hyperplane<N>> {
        match self {
            SphereOrPlane::Plane(h) => Some(h),
            SphereOrPlane::Sphere(_) => None,
        }
    }
}

pub type CircleOrLine = SphereOrPlane<2>;

fn check_on_sphere<const N: usize>(p: &Vector<N>) -> Result<()> {
    let norm = p.norm();
    if (norm - 1.0).abs() > ON_SPHERE_TOL || !norm.is_finite() {
        return Err(Error::NotOnSphere { norm });
    }
    Ok(())
}

fn pole_denominator(last: f64) -> Result<f64> {
    let d = 1.0 - last;
    if d.abs() < POLE_TOL || !d.is_finite() {
        return Err(Error::PoleProjection);
    }
    Ok(d)
}

/// `π : S² \ {(0,0,1)} → R²`.
pub fn project_s2(p: &Vector<3>) -> Result<Vector<2>> {
    check_on_sphere(p)?;
    extended_project(p)
}

/// The same formula on R³ minus the plane `z = 1`: the intersection of
/// the line through `(0,0,1)` and `p` with `z = 0`.
pub fn extended_project(p: &Vector<3>) -> Result<Vector<2>> {
    let d = pole_denominator(p[2])?;
    Ok(Vector::new([p[0] / d, p[1] / d]))
}

pub fn inverse_s2(a: &Vector<2>) -> Vector<3> {
    let n2 = a.norm_squared();
    let s = 1.0 / (n2 + 1.0);
    Vector::new([2.0 * a[0] * s, 2.0 * a[1] * s, (n2 - 1.0) * s])
}

/// `π : S³ \ {(0,0,0,1)} → R³`.
pub fn project_s3(p: &Vector<4>) -> Result<Vector<3>> {
    check_on_sphere(p)?;
    project_s3_unchecked(p)
}

/// [`project_s3`] without the on-sphere check (still rejects the pole).
pub fn project_s3_unchecked(p: &Vector<4>) -> Result<Vector<3>> {
    let d = pole_denominator(p[3])?;
    Ok(Vector::new([p[0] / d, p[1] / d, p[2] / d]))
}

pub fn inverse_s3(a: &Vector<3>) -> Vector<4> {
    let n2 = a.norm_squared();
    let s = 1.0 / (n2 + 1.0);
    Vector::new([2.0 * a[0] * s, 2.0 * a[1] * s, 2.0 * a[2] * s, (n2 - 1.0) * s])
}

/// Image under π of the equator rotated by `R^z_psi · R^y_phi`.
///
/// A circle with center `(cos psi tan phi, sin psi tan phi)` and radius
/// `|sec phi|`; when `cos phi = 0` the rotated equator passes through the pole
/// and the image is the line through the origin with direction `(-sin psi, cos psi)`.
pub fn rotated_equator_image(phi: f64, psi: f64) -> CircleOrLine {
    let (sp, cp) = psi.sin_cos();
    let (sf, cf) = phi.sin_cos();
    if cf.abs() <= 1e-12 {
        return SphereOrPlane::Plane(Hyperplane {
            normal: Vector::new([cp, sp]),
            offset: 0.0,
        });
    }
    let t = sf / cf;
    SphereOrPlane::Sphere(Sphere {
        center: Vector::new([cp * t, sp * t]),
        radius: 1.0 / cf.abs(),
    })
}

/// Shared image formula for `{n·x = e}` in R^{M+1}, where `bar` holds the
/// first M normal components and `last` the final one.
fn hyperplane_image<const M: usize>(bar: Vector<M>, last: f64, e: f64, scale: f64) -> Result<SphereOrPlane<M>> {
    let denom = last - e;
    if denom.abs() <= 1e-12 * scale {
        return Ok(SphereOrPlane::Plane(Hyperplane::new(bar, last)?));
    }
    let radius_sq = (last + e) / denom + bar.norm_squared() / (denom * denom);
    if radius_sq <= 1e-12 {
        return Err(Error::DegenerateIntersection { radius_sq });
    }
    Ok(SphereOrPlane::Sphere(Sphere {
        center: bar * (-1.0 / denom),
        radius: radius_sq.sqrt(),
    }))
}

/// `π(Π ∩ S³)` for a hyperplane `Π = {n·x = e}` of R⁴.
///
/// If the pole is not on `Π` the image is the sphere
/// `|a + n̄/(n4 - e)|² = (n4 + e)/(n4 - e) + |n̄|²/(n4 - e)²`, otherwise the
/// plane `n̄·a = n4`.
pub fn plane4_to_image(h: &Hyperplane<4>) -> Result<SphereOrPlane<3>> {
    let n = h.normal;
    let bar = Vector::new([n[0], n[1], n[2]]);
    hyperplane_image(bar, n[3], h.offset, n.norm())
}

/// Two-dimensional analogue: `π(P ∩ S²)` for a plane `P` of R³.
pub fn plane3_to_image(p: &Hyperplane<3>) -> Result<CircleOrLine> {
    let n = p.normal;
    hyperplane_image(Vector::new([n[0], n[1]]), n[2], p.offset, n.norm())
}

/// The hyperplane `Π` with `π⁻¹(S) = Π ∩ S³`:
/// `(-2a₀, ρ² - |a₀|² + 1) · x = ρ² - |a₀|² - 1`.
pub fn sphere_to_plane4(s: &Sphere<3>) -> Hyperplane<4> {
    let a = s.center;
    let k = s.radius * s.radius - a.norm_squared();
    Hyperplane {
        normal: Vector::new([-2.0 * a[0], -2.0 * a[1], -2.0 * a[2], k + 1.0]),
        offset: k - 1.0,
    }
}

/// The hyperplane `Π` with `π⁻¹(P) ∪ {pole} = Π ∩ S³`: `(n, e) · x = e`.
pub fn plane3_to_plane4(p: &Hyperplane<3>) -> Hyperplane<4> {
    let n = p.normal;
    Hyperplane {
        normal: Vector::new([n[0], n[1], n[2], p.offset]),
        offset: p.offset,
    }
}

/// Preimage hyperplane of a sphere or plane of R³.
pub fn preimage_hyperplane(s: &SphereOrPlane<3>) -> Hyperplane<4> {
    match s {
        SphereOrPlane::Sphere(s) => sphere_to_plane4(s),
        SphereOrPlane::Plane(p) => plane3_to_plane4(p),
    }
}

/// Apex of the cone tangent to S² along the small circle `P ∩ S²`.
///
/// For a unit normal and offset `0 < |e| < 1` this is `n / e`; its extended
/// projection is the center of the projected circle.
pub fn cone_point(p: &Hyperplane<3>) -> Result<Vector<3>> {
    let h = p.normalized();
    if h.offset.abs() <= 1e-12 {
        return Err(Error::GreatCircle);
    }
    if h.offset.abs() >= 1.0 {
        return Err(Error::NoIntersection { offset: h.offset });
    }
    Ok(h.normal * (1.0 / h.offset))
}

/// Angle in `[0, π]` between two tangent vectors.
pub fn angle_between_tangents<const N: usize>(t1: &Vector<N>, t2: &Vector<N>) -> Result<f64> {
    let (n1, n2) = (t1.norm(), t2.norm());
    if n1 == 0.0 || n2 == 0.0 {
        return Err(Error::ZeroTangent);
    }
    Ok((t1.dot(t2) / (n1 * n2)).clamp(-1.0, 1.0).acos())
}

/// Default step for finite-difference pushforwards.
pub const FD_STEP: f64 = 1e-6;

/// Central-difference pushforward of the unit tangent `t` at `p ∈ S^{N-1}`
/// along the great circle `s ↦ cos s · p + sin s · t`.
fn pushforward<const N: usize, const M: usize>(
    p: &Vector<N>,
    t: &Vector<N>,
    h: f64,
    project: impl Fn(&Vector<N>) -> Result<Vector<M>>,
) -> Result<Vector<M>> {
    let t = t.normalized().ok_or(Error::ZeroTangent)?;
    let curve = |s: f64| *p * s.cos() + t * s.sin();
    let forward = project(&curve(h))?;
    let backward = project(&curve(-h))?;
    Ok((forward - backward) * (0.5 / h))
}

pub fn pushforward_s2(p: &Vector<3>, t: &Vector<3>, h: f64) -> Result<Vector<2>> {
    pushforward(p, t, h, project_s2)
}

pub fn pushforward_s3(p: &Vector<4>, t: &Vector<4>, h: f64) -> Result<Vector<3>> {
    pushforward(p, t, h, project_s3)
}

/// `|angle(dπ t1, dπ t2) - angle(t1, t2)|` at `p ∈ S²`.
pub fn conformality_defect_s2(p: &Vector<3>, t1: &Vector<3>, t2: &Vector<3>, h: f64) -> Result<f64> {
    let before = angle_between_tangents(t1, t2)?;
    let after = angle_between_tangents(&pushforward_s2(p, t1, h)?, &pushforward_s2(p, t2, h)?)?;
    Ok((after - before).abs())
}

/// `|angle(dπ t1, dπ t2) - angle(t1, t2)|` at `p ∈ S³`.
pub fn conformality_defect_s3(p: &Vector<4>, t1: &Vector<4>, t2: &Vector<4>, h: f64) -> Result<f64> {
    let before = angle_between_tangents(t1, t2)?;
    let after = angle_between_tangents(&pushforward_s3(p, t1, h)?, &pushforward_s3(p, t2, h)?)?;
    Ok((after - before).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, SQRT_2};

    #[test]
    fn project_s2_examples() {
        assert_eq!(
            project_s2(&Vector::new([0.0, 0.0, -1.0])).unwrap(),
            Vector::new([0.0, 0.0])
        );
        let eq = Vector::new([0.6, 0.8, 0.0]);
        assert!(project_s2(&eq).unwrap().max_abs_diff(&Vector::new([0.6, 0.8])) < 1e-15);
        let p = project_s2(&Vector::new([0.6, 0.0, 0.8])).unwrap();
        assert!(p.max_abs_diff(&Vector::new([3.0, 0.0])) < 1e-14);
        // Line through the pole and (0.6, 0, 0.8) hits z = 0 at s = 1/(1 - 0.8).
        let pole = Vector::new([0.0, 0.0, 1.0]);
        let s = 1.0 / (1.0 - 0.8);
        let hit = pole + (Vector::new([0.6, 0.0, 0.8]) - pole) * s;
        assert!((hit[0] - p[0]).abs() < 1e-14 && hit[2].abs() < 1e-14);
    }

    #[test]
    fn project_s2_errors() {
        assert_eq!(project_s2(&Vector::new([0.0, 0.0, 1.0])), Err(Error::PoleProjection));
        assert!(matches!(
            project_s2(&Vector::new([0.0, 0.0, 0.5])),
            Err(Error::NotOnSphere { .. })
        ));
    }

    #[test]
    fn extended_projection_matches_line_intersection() {
        assert_eq!(
            extended_project(&Vector::new([0.0, 0.0, 0.0])).unwrap(),
            Vector::new([0.0, 0.0])
        );
        assert!(
            extended_project(&Vector::new([2.0, 0.0, -1.0]))
                .unwrap()
                .max_abs_diff(&Vector::new([1.0, 0.0]))
                < 1e-15
        );
        assert_eq!(
            extended_project(&Vector::new([3.0, 1.0, 1.0])),
            Err(Error::PoleProjection)
        );
    }

    #[test]
    fn inverse_s2_examples() {
        assert_eq!(inverse_s2(&Vector::new([0.0, 0.0])), Vector::new([0.0, 0.0, -1.0]));
        assert!(inverse_s2(&Vector::new([1.0, 0.0])).max_abs_diff(&Vector::new([1.0, 0.0, 0.0])) < 1e-15);
        assert!(inverse_s2(&Vector::new([3.0, 0.0])).max_abs_diff(&Vector::new([0.6, 0.0, 0.8])) < 1e-15);
    }

    #[test]
    fn s3_examples() {
        assert_eq!(project_s3(&Vector::new([0.0, 0.0, 0.0, -1.0])).unwrap(), Vector::zero());
        let p = Vector::new([FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0]);
        assert!(
            project_s3(&p)
                .unwrap()
                .max_abs_diff(&Vector::new([FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2]))
                < 1e-15
        );
    }

    #[test]
    fn rotated_equator_cases() {
        match rotated_equator_image(0.0, 1.3) {
            SphereOrPlane::Sphere(c) => {
                assert!(c.center.norm() < 1e-15);
                assert!((c.radius - 1.0).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
        match rotated_equator_image(FRAC_PI_4, 0.0) {
            SphereOrPlane::Sphere(c) => {
                assert!(c.center.max_abs_diff(&Vector::new([1.0, 0.0])) < 1e-15);
                assert!((c.radius - SQRT_2).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
        match rotated_equator_image(FRAC_PI_2, 0.0) {
            SphereOrPlane::Plane(l) => {
                assert!(l.distance(&Vector::new([0.0, 5.0])) < 1e-15);
                assert!((l.distance(&Vector::new([1.0, 0.0])) - 1.0).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn plane4_examples() {
        let eq = Hyperplane::new(Vector::new([0.0, 0.0, 0.0, 1.0]), 0.0).unwrap();
        let s = *plane4_to_image(&eq).unwrap().as_sphere().unwrap();
        assert!(s.center.norm() < 1e-15 && (s.radius - 1.0).abs() < 1e-15);

        let through_pole = Hyperplane::new(Vector::new([1.0, 0.0, 0.0, 1.0]), 1.0).unwrap();
        let p = *plane4_to_image(&through_pole).unwrap().as_plane().unwrap();
        let expected = Hyperplane::new(Vector::new([1.0, 0.0, 0.0]), 1.0).unwrap();
        assert!(p.equivalent(&expected, 1e-15));

        let tangent = Hyperplane::new(Vector::new([0.0, 0.0, 0.0, 1.0]), -1.0).unwrap();
        assert!(matches!(
            plane4_to_image(&tangent),
            Err(Error::DegenerateIntersection { .. })
        ));
    }

    #[test]
    fn sphere_to_plane4_examples() {
        let unit = Sphere::new(Vector::zero(), 1.0).unwrap();
        let h = sphere_to_plane4(&unit);
        assert!(h.equivalent(&Hyperplane::new(Vector::new([0.0, 0.0, 0.0, 1.0]), 0.0).unwrap(), 1e-15));

        // Symmetry spheres of the canonical projected torus come from great spheres.
        let c = 1.7;
        let s = Sphere::new(Vector::new([0.0, 0.0, c]), (1.0 + c * c).sqrt()).unwrap();
        let h = sphere_to_plane4(&s);
        assert!(h.offset.abs() < 1e-14);
        let expected = Hyperplane::new(Vector::new([0.0, 0.0, c, -1.0]), 0.0).unwrap();
        let flipped = Hyperplane::new(-h.normal, -h.offset).unwrap();
        assert!(flipped.equivalent(&expected, 1e-14));

        let plane = Hyperplane::new(Vector::new([0.0, 0.0, 1.0]), 0.0).unwrap();
        assert_eq!(plane3_to_plane4(&plane).normal, Vector::new([0.0, 0.0, 1.0, 0.0]));
        assert_eq!(plane3_to_plane4(&plane).offset, 0.0);
    }

    #[test]
    fn cone_point_examples() {
        let p = Hyperplane::new(Vector::new([0.0, 0.0, 1.0]), 0.5).unwrap();
        let c = cone_point(&p).unwrap();
        assert!(c.max_abs_diff(&Vector::new([0.0, 0.0, 2.0])) < 1e-15);
        // Tangency: segment from c to a circle point is orthogonal to the radius there.
        let q = Vector::new([(0.75f64).sqrt(), 0.0, 0.5]);
        assert!((c - q).dot(&q).abs() < 1e-15);
        let great = Hyperplane::new(Vector::new([0.0, 0.0, 1.0]), 1e-14).unwrap();
        assert_eq!(cone_point(&great), Err(Error::GreatCircle));
    }

    #[test]
    fn angles() {
        let a = Vector::new([1.0, 2.0]);
        assert!(angle_between_tangents(&a, &a).unwrap().abs() < 1e-7);
        let b = Vector::new([-2.0, 1.0]);
        assert!((angle_between_tangents(&a, &b).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(angle_between_tangents(&a, &Vector::zero()), Err(Error::ZeroTangent));
    }
}
