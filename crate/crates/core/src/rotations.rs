//! Constructive decompositions of rotations.
//!
//! - [`decompose_so3`]: `R = R^z_psi · R^y_phi · R^z_theta`.
//! - [`decompose_so4`]: `R = R0 · R^{xw}_psi · R^{zw}_phi · R^{xy}_theta` with
//!   `R0` fixing `e4`.
//! - [`reduce_to_axis`] / [`elementary_factorization`]: products of
//!   single-plane rotations.
//! - [`plane_block_form`] / [`rotation_path`]: invariant planes and the
//!   one-parameter subgroup through a rotation.
//!
//! Coordinate names follow `x, y, z, w = e1, e2, e3, e4`; `R^y` is the
//! elementary rotation of the `(1, 3)` plane, so `R^y_phi(e3) = (-sin phi, 0, cos phi)`.

use crate::error::{Error, Result};
use crate::linalg::{extend_orthonormal, Matrix, Rotation, Vector};

/// Below this sine an angle is treated as undetermined and gauge-fixed to zero.
///
/// Any nonzero `sin` above this is resolved with `atan2`, which stays
/// accurate for tiny arguments; fixing the gauge costs at most this much in
/// reconstruction accuracy.
pub const GAUGE_TOL: f64 = 1e-14;

/// Tolerance on the `r0` block-form defect before it is snapped to exact form.
const BLOCK_FORM_TOL: f64 = 1e-10;

/// Blocks whose rotation angle is below this are reported as fixed planes.
const FIXED_ANGLE_TOL: f64 = 1e-13;

/// Clusters of the invariant-plane eigenproblem closer than this are merged.
const CLUSTER_TOL: f64 = 1e-9;

fn rz(a: f64) -> Rotation<3> {
    Rotation::elementary(1, 2, a).expect("valid plane")
}

fn ry(a: f64) -> Rotation<3> {
    Rotation::elementary(1, 3, a).expect("valid plane")
}

/// Z-Y-Z angles with `R = R^z_psi · R^y_phi · R^z_theta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerZyz {
    pub theta: f64,
    pub phi: f64,
    pub psi: f64,
}

impl EulerZyz {
    pub fn reconstruct(&self) -> Rotation<3> {
        rz(self.psi) * ry(self.phi) * rz(self.theta)
    }
}

/// Z-Y-Z decomposition.
///
/// `phi ∈ [0, π]` is the angle between `e3` and `R e3`. When `sin phi` vanishes
/// the gauge `psi = 0` is used and the whole rotation about `z` goes to `theta`.
pub fn decompose_so3(r: &Rotation<3>) -> EulerZyz {
    let u = r.matrix().column(2);
    let sin_phi = u[0].hypot(u[1]);
    let phi = sin_phi.atan2(u[2]);
    let psi = if sin_phi > GAUGE_TOL { (-u[1]).atan2(-u[0]) } else { 0.0 };
    // S^{-1} R fixes e3 and acts on the x,y-plane as R_theta.
    let rest = (rz(psi) * ry(phi)).inverse() * *r;
    let m = rest.matrix();
    let theta = m[(1, 0)].atan2(m[(0, 0)]);
    EulerZyz { theta, phi, psi }
}

/// `R = R0 · R^{xw}_psi · R^{zw}_phi · R^{xy}_theta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct So4Decomposition {
    /// Fixes `e4`; acts on `span{e1, e2, e3}` as [`So4Decomposition::r0_block`].
    pub r0: Rotation<4>,
    pub psi: f64,
    pub phi: f64,
    pub theta: f64,
}

impl So4Decomposition {
    /// `R^{xw}_psi · R^{zw}_phi · R^{xy}_theta`.
    pub fn tail(&self) -> Rotation<4> {
        so4_tail(self.psi, self.phi, self.theta)
    }

    pub fn reconstruct(&self) -> Rotation<4> {
        self.r0 * self.tail()
    }

    /// The rotation of R³ induced by `r0`.
    pub fn r0_block(&self) -> Rotation<3> {
        self.r0.block3()
    }

    /// Last row of the tail factor, `N^T e4`.
    pub fn last_row(&self) -> Vector<4> {
        let (sp, cp) = self.psi.sin_cos();
        let (sf, cf) = self.phi.sin_cos();
        let (st, ct) = self.theta.sin_cos();
        Vector::new([sp * ct, -sp * st, cp * sf, cp * cf])
    }
}

fn so4_tail(psi: f64, phi: f64, theta: f64) -> Rotation<4> {
    let xw = Rotation::<4>::elementary(1, 4, psi).expect("valid plane");
    let zw = Rotation::<4>::elementary(3, 4, phi).expect("valid plane");
    let xy = Rotation::<4>::elementary(1, 2, theta).expect("valid plane");
    xw * zw * xy
}

/// Four-factor decomposition of a rotation of R⁴.
///
/// The last row `(m41, m42, m43, m44)` of `R` is matched against
/// `(sin psi cos theta, -sin psi sin theta, cos psi sin phi, cos psi cos phi)`
/// with `psi ∈ [0, π/2]`; then `r0 = R · N^{-1}`.
pub fn decompose_so4(r: &Rotation<4>) -> Result<So4Decomposition> {
    let m = r.matrix();
    let (m41, m42, m43, m44) = (m[(3, 0)], m[(3, 1)], m[(3, 2)], m[(3, 3)]);
    let sin_psi = m41.hypot(m42);
    let cos_psi = m43.hypot(m44);
    let psi = sin_psi.atan2(cos_psi);
    let theta = if sin_psi > GAUGE_TOL { (-m42).atan2(m41) } else { 0.0 };
    let phi = if cos_psi > GAUGE_TOL { m43.atan2(m44) } else { 0.0 };
    let tail = so4_tail(psi, phi, theta);
    let raw = *r * tail.inverse();
    let deviation = raw.block_form_defect();
    if deviation > BLOCK_FORM_TOL {
        return Err(Error::BlockFormViolation { deviation });
    }
    let mut block = raw.into_matrix();
    for i in 0..3 {
        block[(3, i)] = 0.0;
        block[(i, 3)] = 0.0;
    }
    block[(3, 3)] = 1.0;
    Ok(So4Decomposition {
        r0: Rotation::from_matrix_unchecked(block),
        psi,
        phi,
        theta,
    })
}

/// One elementary factor `R^{kj}_angle` (1-based plane indices).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElementaryFactor {
    pub k: usize,
    pub j: usize,
    pub angle: f64,
}

impl ElementaryFactor {
    pub fn inverse(self) -> Self {
        Self {
            angle: -self.angle,
            ..self
        }
    }

    pub fn rotation<const N: usize>(&self) -> Rotation<N> {
        Rotation::elementary(self.k, self.j, self.angle).expect("factor planes are valid by construction")
    }
}

/// An ordered product `F1 · F2 · ... · Fm` of elementary rotations.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ElementaryFactorization<const N: usize> {
    pub factors: Vec<ElementaryFactor>,
}

impl<const N: usize> ElementaryFactorization<N> {
    pub fn compose(&self) -> Rotation<N> {
        self.factors
            .iter()
            .fold(Rotation::identity(), |acc, f| acc * f.rotation::<N>())
    }

    pub fn inverse(&self) -> Self {
        Self {
            factors: self.factors.iter().rev().map(|f| f.inverse()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

/// Givens chain `[G_1, ..., G_{N-1}]` (application order) on planes `(i, N)`
/// taking `v` to `|v| e_N`.
fn chain_to_last_axis<const N: usize>(v: &Vector<N>, last: usize) -> Vec<ElementaryFactor> {
    let mut x = *v;
    let mut chain = Vec::with_capacity(last.saturating_sub(1));
    for i in 1..last {
        let (xi, xm) = (x[i - 1], x[last - 1]);
        let angle = xi.atan2(xm);
        if angle.abs() < 1e-15 {
            continue;
        }
        let r = xi.hypot(xm);
        x[i - 1] = 0.0;
        x[last - 1] = r;
        chain.push(ElementaryFactor { k: i, j: last, angle });
    }
    chain
}

/// Elementary factors of a rotation `Q` with `Q v = w`, for `|v| = |w| > 0`.
///
/// Both vectors are rotated onto the last axis by coordinate-plane rotations
/// and the two chains are combined, `Q = G(w)^{-1} · G(v)`.
pub fn reduce_to_axis<const N: usize>(v: &Vector<N>, w: &Vector<N>) -> Result<ElementaryFactorization<N>> {
    let (nv, nw) = (v.norm(), w.norm());
    if nv <= 1e-12 || nw <= 1e-12 {
        return Err(Error::ZeroVector);
    }
    if (nv - nw).abs() > 1e-9 * nv.max(1.0) {
        return Err(Error::NormMismatch { left: nv, right: nw });
    }
    if v.max_abs_diff(w) <= 1e-15 * nv {
        return Ok(ElementaryFactorization::default());
    }
    let gv = chain_to_last_axis(v, N);
    let gw = chain_to_last_axis(w, N);
    // Matrix order: G(w)_1^{-1} ... G(w)_{n-1}^{-1} · G(v)_{n-1} ... G(v)_1.
    let factors = gw.iter().map(|f| f.inverse()).chain(gv.iter().rev().copied()).collect();
    Ok(ElementaryFactorization { factors })
}

/// Factors a rotation into at most `N(N-1)/2` elementary rotations.
///
/// `R e_n` is reduced to `e_n`, leaving a rotation of the leading
/// `(n-1)`-block, which is factored recursively.
pub fn elementary_factorization<const N: usize>(r: &Rotation<N>) -> ElementaryFactorization<N> {
    let mut work = *r.matrix();
    let mut factors = Vec::new();
    for last in (3..=N).rev() {
        let v = work.column(last - 1);
        let chain = chain_to_last_axis(&v, last);
        for g in &chain {
            work = *g.rotation::<N>().matrix() * work;
        }
        factors.extend(chain.iter().map(|g| g.inverse()));
    }
    if N >= 2 {
        let angle = work[(1, 0)].atan2(work[(0, 0)]);
        if angle.abs() >= 1e-15 {
            factors.push(ElementaryFactor { k: 1, j: 2, angle });
        }
    }
    ElementaryFactorization { factors }
}

/// Invariant-plane normal form: `basis^T · M · basis = blockdiag(I_k, R_θ1, ...)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneBlockForm<const N: usize> {
    /// Columns: `k` fixed vectors, then one `(u, v)` pair per block.
    pub basis: Rotation<N>,
    pub fixed_dim: usize,
    /// One angle per 2×2 block. In `(0, π]`, except that the last angle may
    /// be negative when `fixed_dim = 0` and orientation forces it.
    pub angles: Vec<f64>,
}

impl<const N: usize> PlaneBlockForm<N> {
    /// `blockdiag(I_k, R_{t θ1}, ...)` in the adapted basis.
    pub fn block_matrix(&self, t: f64) -> Matrix<N> {
        let mut b = Matrix::identity();
        for (i, &angle) in self.angles.iter().enumerate() {
            let p = self.fixed_dim + 2 * i;
            let (s, c) = (t * angle).sin_cos();
            b[(p, p)] = c;
            b[(p + 1, p + 1)] = c;
            b[(p, p + 1)] = -s;
            b[(p + 1, p)] = s;
        }
        b
    }

    /// The rotation `basis · blockdiag(I_k, R_{t θi}) · basis^T`.
    pub fn at(&self, t: f64) -> Rotation<N> {
        let b = self.basis.matrix();
        Rotation::from_matrix_unchecked(*b * self.block_matrix(t) * b.transpose())
    }

    pub fn reconstruct(&self) -> Rotation<N> {
        self.at(1.0)
    }
}

struct Planes<const N: usize> {
    fixed: Vec<Vector<N>>,
    blocks: Vec<(Vector<N>, Vector<N>)>,
}

fn plane_angle<const N: usize>(m: &Matrix<N>, u: &Vector<N>, v: &Vector<N>) -> f64 {
    let mu = m.mul_vec(u);
    v.dot(&mu).atan2(u.dot(&mu))
}

fn standard_basis<const N: usize>() -> Vec<Vector<N>> {
    (0..N).map(Vector::basis).collect()
}

fn columns<const N: usize>(m: &Matrix<N>) -> Vec<Vector<N>> {
    (0..N).map(|c| m.column(c)).collect()
}

fn planes_dim2(m: &Matrix<2>) -> Planes<2> {
    Planes {
        fixed: vec![],
        blocks: vec![(Vector::basis(0), Vector::basis(1))],
    }
    .with_matrix(m)
}

fn planes_dim3(m: &Matrix<3>) -> Planes<3> {
    if m.max_abs_diff(&Matrix::identity()) <= 1e-14 {
        return Planes {
            fixed: standard_basis(),
            blocks: vec![],
        };
    }
    // Axis spans the kernel of M - I: the largest cross product of two rows.
    let d = *m - Matrix::identity();
    let rows = [d.row(0), d.row(1), d.row(2)];
    let axis = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(a, b)| rows[a].cross(&rows[b]))
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .and_then(|c| c.normalized())
        .unwrap_or(Vector::basis(2));
    let basis = extend_orthonormal(vec![axis], &standard_basis(), 2);
    let u = basis[1];
    let v = axis.cross(&u);
    Planes {
        fixed: vec![axis],
        blocks: vec![(u, v)],
    }
    .with_matrix(m)
}

/// Symmetric operator whose eigenspaces are the invariant planes, and its two
/// (doubly repeated) eigenvalues from the closed-form characteristic polynomial.
fn plane_operators(m: &Matrix<4>) -> [(Matrix<4>, f64, f64, f64); 2] {
    // cos route: S = (M + M^T)/2 has eigenvalues cos α, cos β.
    let s = (*m + m.transpose()).scale(0.5);
    let tr = m.trace();
    let e2 = 0.5 * (tr * tr - (*m * *m).trace());
    let sum = 0.5 * tr;
    let prod = 0.25 * (e2 - 2.0);
    let disc = (sum * sum - 4.0 * prod).max(0.0).sqrt();
    let (c1, c2) = (0.5 * (sum + disc), 0.5 * (sum - disc));
    // sin² route: K = A^T A with A = (M - M^T)/2 has eigenvalues sin² α, sin² β.
    let a = (*m - m.transpose()).scale(0.5);
    let k = a.transpose() * a;
    let ksum = 0.5 * k.trace();
    let ksq = 0.5 * (k * k).trace();
    let kprod = 0.5 * (ksum * ksum - ksq);
    let kdisc = (ksum * ksum - 4.0 * kprod).max(0.0).sqrt();
    let (k1, k2) = (0.5 * (ksum + kdisc), 0.5 * (ksum - kdisc));
    // Relative conditioning of each route: gap over the entry error scale.
    let cos_quality = c1 - c2;
    let sin_quality = (k1 - k2) / k1.max(1e-300).sqrt();
    [(s, c1, c2, cos_quality), (k, k1, k2, sin_quality)]
}

fn planes_dim4(m: &Matrix<4>) -> Planes<4> {
    if m.max_abs_diff(&Matrix::identity()) <= 1e-14 {
        return Planes {
            fixed: standard_basis(),
            blocks: vec![],
        };
    }
    let [cos_route, sin_route] = plane_operators(m);
    let (op, _first, second, quality) = if cos_route.3 >= sin_route.3 {
        cos_route
    } else {
        sin_route
    };
    let (u1, v1, u2, v2);
    if quality > CLUSTER_TOL {
        let projector = op - Matrix::identity().scale(second);
        let first_plane = extend_orthonormal(vec![], &columns(&projector), 2);
        let full = extend_orthonormal(first_plane, &standard_basis(), 4);
        (u1, v1, u2, v2) = (full[0], full[1], full[2], full[3]);
    } else {
        // Isoclinic: M = cos·I + sin·J with J² = -I, so span{u, Mu} is invariant for every u.
        let std = standard_basis::<4>();
        let u = std
            .iter()
            .copied()
            .max_by(|a, b| m.mul_vec(a).distance(a).total_cmp(&m.mul_vec(b).distance(b)))
            .expect("nonempty");
        let first = companion(m, vec![u]);
        let second_start = extend_orthonormal(first.clone(), &std, 3);
        let full = companion(m, second_start);
        (u1, v1, u2, v2) = (full[0], full[1], full[2], full[3]);
    }
    Planes {
        fixed: vec![],
        blocks: vec![(u1, v1), (u2, v2)],
    }
    .with_matrix(m)
}

/// Appends to `basis` the normalised component of `M · last` orthogonal to it,
/// or any orthonormal completion vector when that component vanishes.
fn companion(m: &Matrix<4>, basis: Vec<Vector<4>>) -> Vec<Vector<4>> {
    let target = basis.len() + 1;
    let mut r = m.mul_vec(basis.last().expect("nonempty"));
    for _ in 0..2 {
        for b in &basis {
            r -= *b * b.dot(&r);
        }
    }
    if r.norm() > 1e-12 {
        let mut out = basis;
        out.push(r * (1.0 / r.norm()));
        out
    } else {
        extend_orthonormal(basis, &standard_basis(), target)
    }
}

impl<const N: usize> Planes<N> {
    /// Moves blocks with (numerically) zero angle into the fixed space.
    fn with_matrix(mut self, m: &Matrix<N>) -> Self {
        let mut blocks = Vec::new();
        for (u, v) in self.blocks.drain(..) {
            if plane_angle(m, &u, &v).abs() < FIXED_ANGLE_TOL {
                self.fixed.push(u);
                self.fixed.push(v);
            } else {
                blocks.push((u, v));
            }
        }
        self.blocks = blocks;
        self
    }

    fn into_form(self, m: &Matrix<N>) -> PlaneBlockForm<N> {
        let Planes { mut fixed, mut blocks } = self;
        let mut angles: Vec<f64> = Vec::with_capacity(blocks.len());
        for (u, v) in blocks.iter_mut() {
            let mut angle = plane_angle(m, u, v);
            if angle < 0.0 {
                *v = -*v;
                angle = -angle;
            }
            angles.push(angle);
        }
        let assemble = |fixed: &[Vector<N>], blocks: &[(Vector<N>, Vector<N>)]| {
            let mut cols = [Vector::zero(); N];
            let mut i = 0;
            for f in fixed {
                cols[i] = *f;
                i += 1;
            }
            for (u, v) in blocks {
                cols[i] = *u;
                cols[i + 1] = *v;
                i += 2;
            }
            Matrix::from_columns(cols)
        };
        if assemble(&fixed, &blocks).determinant() < 0.0 {
            // Restore orientation: flip a fixed vector, else a half-turn block, else the last block.
            if let Some(f) = fixed.first_mut() {
                *f = -*f;
            } else if let Some(i) = angles.iter().position(|&a| (a - std::f64::consts::PI).abs() < 1e-12) {
                blocks[i].1 = -blocks[i].1;
            } else if let Some((last, angle)) = blocks.last_mut().zip(angles.last_mut()) {
                last.1 = -last.1;
                *angle = -*angle;
            }
        }
        let basis = assemble(&fixed, &blocks);
        PlaneBlockForm {
            basis: Rotation::from_matrix_unchecked(basis),
            fixed_dim: fixed.len(),
            angles,
        }
    }
}

fn convert<const A: usize, const B: usize>(m: &Matrix<A>) -> Matrix<B> {
    assert_eq!(A, B);
    let mut out = Matrix::<B>::zero();
    for r in 0..A {
        for c in 0..A {
            out[(r, c)] = m[(r, c)];
        }
    }
    out
}

fn convert_form<const A: usize, const B: usize>(f: PlaneBlockForm<A>) -> PlaneBlockForm<B> {
    PlaneBlockForm {
        basis: Rotation::from_matrix_unchecked(convert::<A, B>(f.basis.matrix())),
        fixed_dim: f.fixed_dim,
        angles: f.angles,
    }
}

/// Invariant-plane block form for dimensions 2, 3 and 4.
///
/// In dimension 3 the fixed vector is the rotation axis. In dimension 4 the
/// cosines of the two block angles are the roots of a quadratic obtained from
/// the characteristic polynomial, and each plane is the range of the
/// complementary spectral factor.
pub fn plane_block_form<const N: usize>(r: &Rotation<N>) -> Result<PlaneBlockForm<N>> {
    match N {
        2 => {
            let m = convert::<N, 2>(r.matrix());
            Ok(convert_form(planes_dim2(&m).into_form(&m)))
        }
        3 => {
            let m = convert::<N, 3>(r.matrix());
            Ok(convert_form(planes_dim3(&m).into_form(&m)))
        }
        4 => {
            let m = convert::<N, 4>(r.matrix());
            Ok(convert_form(planes_dim4(&m).into_form(&m)))
        }
        n => Err(Error::UnsupportedDimension(n)),
    }
}

/// The one-parameter subgroup `t ↦ R0(t)` with `R0(1) = r`.
pub fn rotation_path<const N: usize>(r: &Rotation<N>, t: f64) -> Result<Rotation<N>> {
    Ok(plane_block_form(r)?.at(t))
}
