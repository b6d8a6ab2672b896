//! Fixed-dimension vectors and matrices, and validated rotation matrices.
//!
//! Coordinate planes of elementary rotations are named with 1-based indices
//! `(k, j)`, `k < j`, so that `Rotation::<3>::elementary(1, 3, phi)` is the
//! rotation written `R^{13}_phi` (the rotation "about the y-axis").

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// A vector in R^N.
#[derive(Clone, Copy, PartialEq)]
pub struct Vector<const N: usize>(pub [f64; N]);

impl<const N: usize> Vector<N> {
    pub const fn new(components: [f64; N]) -> Self {
        Self(components)
    }

    pub const fn zero() -> Self {
        Self([0.0; N])
    }

    /// The `i`-th standard basis vector (0-based).
    pub fn basis(i: usize) -> Self {
        let mut v = Self::zero();
        v.0[i] = 1.0;
        v
    }

    pub fn components(&self) -> &[f64; N] {
        &self.0
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| *self * (1.0 / n))
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (*self - *other).norm()
    }

    /// Largest absolute component difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl Vector<3> {
    pub fn cross(&self, other: &Self) -> Self {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = other.0;
        Self([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }
}

impl<const N: usize> Default for Vector<N> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<const N: usize> fmt::Debug for Vector<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl<const N: usize> From<[f64; N]> for Vector<N> {
    fn from(a: [f64; N]) -> Self {
        Self(a)
    }
}

impl<const N: usize> Index<usize> for Vector<N> {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl<const N: usize> IndexMut<usize> for Vector<N> {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl<const N: usize> Add for Vector<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<const N: usize> AddAssign for Vector<N> {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

impl<const N: usize> Sub for Vector<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl<const N: usize> SubAssign for Vector<N> {
    fn sub_assign(&mut self, rhs: Self) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a -= b;
        }
    }
}

impl<const N: usize> Mul<f64> for Vector<N> {
    type Output = Self;
    fn mul(mut self, s: f64) -> Self {
        for a in self.0.iter_mut() {
            *a *= s;
        }
        self
    }
}

impl<const N: usize> Mul<Vector<N>> for f64 {
    type Output = Vector<N>;
    fn mul(self, v: Vector<N>) -> Vector<N> {
        v * self
    }
}

impl<const N: usize> Neg for Vector<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

/// A square N×N matrix, stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct Matrix<const N: usize>(pub [[f64; N]; N]);

impl<const N: usize> Matrix<N> {
    pub const fn from_rows(rows: [[f64; N]; N]) -> Self {
        Self(rows)
    }

    pub const fn zero() -> Self {
        Self([[0.0; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            m.0[i][i] = 1.0;
        }
        m
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(cols: [Vector<N>; N]) -> Self {
        let mut m = Self::zero();
        for (c, col) in cols.iter().enumerate() {
            for r in 0..N {
                m.0[r][c] = col[r];
            }
        }
        m
    }

    /// Parses `N*N` entries given in row-major order.
    pub fn from_row_major(entries: &[f64]) -> Option<Self> {
        if entries.len() != N * N {
            return None;
        }
        let mut m = Self::zero();
        for (i, &x) in entries.iter().enumerate() {
            m.0[i / N][i % N] = x;
        }
        Some(m)
    }

    pub fn rows(&self) -> &[[f64; N]; N] {
        &self.0
    }

    pub fn row(&self, r: usize) -> Vector<N> {
        Vector(self.0[r])
    }

    pub fn column(&self, c: usize) -> Vector<N> {
        let mut v = Vector::zero();
        for r in 0..N {
            v[r] = self.0[r][c];
        }
        v
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero();
        for r in 0..N {
            for c in 0..N {
                t.0[c][r] = self.0[r][c];
            }
        }
        t
    }

    pub fn trace(&self) -> f64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn mul_vec(&self, v: &Vector<N>) -> Vector<N> {
        let mut out = Vector::zero();
        for r in 0..N {
            out[r] = self.0[r].iter().zip(v.0.iter()).map(|(a, b)| a * b).sum();
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for x in row.iter_mut() {
                *x *= s;
            }
        }
        m
    }

    /// Largest absolute entrywise difference (the entrywise sup-norm of `self - other`).
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for r in 0..N {
            for c in 0..N {
                d = d.max((self.0[r][c] - other.0[r][c]).abs());
            }
        }
        d
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> f64 {
        let mut a = self.0;
        let mut det = 1.0;
        for col in 0..N {
            let pivot = (col..N)
                .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
                .unwrap_or(col);
            if a[pivot][col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            det *= a[col][col];
            let pivot_row = a[col];
            for row in a.iter_mut().skip(col + 1) {
                let f = row[col] / pivot_row[col];
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= f * p;
                }
            }
        }
        det
    }

    /// `max |M^T M - I|` over all entries.
    pub fn orthogonality_defect(&self) -> f64 {
        (self.transpose() * *self).max_abs_diff(&Self::identity())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }
}

impl<const N: usize> Default for Matrix<N> {
    fn default() -> Self {
        Self::identity()
    }
}

impl<const N: usize> fmt::Debug for Matrix<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl<const N: usize> Index<(usize, usize)> for Matrix<N> {
    type Output = f64;
    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.0[r][c]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for Matrix<N> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        &mut self.0[r][c]
    }
}

impl<const N: usize> Mul for Matrix<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for r in 0..N {
            for c in 0..N {
                out.0[r][c] = (0..N).map(|k| self.0[r][k] * rhs.0[k][c]).sum();
            }
        }
        out
    }
}

impl<const N: usize> Mul<Vector<N>> for Matrix<N> {
    type Output = Vector<N>;
    fn mul(self, v: Vector<N>) -> Vector<N> {
        self.mul_vec(&v)
    }
}

impl<const N: usize> Add for Matrix<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for r in 0..N {
            for c in 0..N {
                self.0[r][c] += rhs.0[r][c];
            }
        }
        self
    }
}

impl<const N: usize> Sub for Matrix<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for r in 0..N {
            for c in 0..N {
                self.0[r][c] -= rhs.0[r][c];
            }
        }
        self
    }
}

/// An orthogonal matrix with determinant +1.
///
/// Values are only produced by validation or by constructions that stay in
/// SO(N) by design (elementary rotations, products, transposes, extensions).
#[derive(Clone, Copy, PartialEq)]
pub struct Rotation<const N: usize>(Matrix<N>);

impl<const N: usize> Rotation<N> {
    pub fn identity() -> Self {
        Self(Matrix::identity())
    }

    /// Accepts `m` iff `max|M^T M - I| <= tol` and `|det M - 1| <= tol`.
    pub fn validate(m: Matrix<N>, tol: f64) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NotOrthogonal {
                deviation: f64::INFINITY,
            });
        }
        let deviation = m.orthogonality_defect();
        if deviation > tol {
            return Err(Error::NotOrthogonal { deviation });
        }
        let det = m.determinant();
        if (det - 1.0).abs() > tol {
            if (det + 1.0).abs() <= tol.max(1e-6) {
                return Err(Error::DeterminantMinusOne { det });
            }
            return Err(Error::BadDeterminant { det });
        }
        Ok(Self(m))
    }

    /// The elementary rotation `R^{kj}_psi` of the coordinate plane spanned by
    /// `e_k` and `e_j` (1-based, `k < j`): `cos psi` at `(k,k)` and `(j,j)`,
    /// `-sin psi` at `(k,j)` and `sin psi` at `(j,k)`.
    pub fn elementary(k: usize, j: usize, psi: f64) -> Result<Self> {
        if k == 0 || k >= j || j > N {
            return Err(Error::InvalidPlane { k, j, dim: N });
        }
        let (s, c) = psi.sin_cos();
        let mut m = Matrix::identity();
        m[(k - 1, k - 1)] = c;
        m[(j - 1, j - 1)] = c;
        m[(k - 1, j - 1)] = -s;
        m[(j - 1, k - 1)] = s;
        Ok(Self(m))
    }

    /// Embeds a rotation of R^K into R^N acting on the coordinates listed in
    /// `indices` (1-based, strictly increasing) and fixing all others.
    pub fn trivial_extension<const K: usize>(r: &Rotation<K>, indices: &[usize]) -> Result<Self> {
        if indices.len() != K {
            return Err(Error::InvalidIndexSubset(format!(
                "expected {K} indices, got {}",
                indices.len()
            )));
        }
        if K > N {
            return Err(Error::InvalidIndexSubset(format!(
                "cannot extend dimension {K} into {N}"
            )));
        }
        if indices.iter().any(|&i| i == 0 || i > N) {
            return Err(Error::InvalidIndexSubset(format!(
                "indices {indices:?} out of range 1..={N}"
            )));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidIndexSubset(format!(
                "indices {indices:?} must be strictly increasing"
            )));
        }
        let mut m = Matrix::identity();
        for (l, &jl) in indices.iter().enumerate() {
            for (mi, &jm) in indices.iter().enumerate() {
                m[(jm - 1, jl - 1)] = r.0[(mi, l)];
            }
        }
        Ok(Self(m))
    }

    /// Trusted constructor for matrices known to lie in SO(N) up to rounding.
    pub(crate) fn from_matrix_unchecked(m: Matrix<N>) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &Matrix<N> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<N> {
        self.0
    }

    pub fn apply(&self, v: &Vector<N>) -> Vector<N> {
        self.0.mul_vec(v)
    }

    /// The inverse rotation (the transpose).
    pub fn inverse(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self(self.0 * other.0)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.max_abs_diff(&other.0)
    }
}

impl Rotation<4> {
    /// Deviation of the last row and column from `e_4`.
    pub fn block_form_defect(&self) -> f64 {
        let m = &self.0;
        let mut d = (m[(3, 3)] - 1.0).abs();
        for i in 0..3 {
            d = d.max(m[(3, i)].abs()).max(m[(i, 3)].abs());
        }
        d
    }

    /// The upper-left 3×3 block. Meaningful when `self` fixes `e_4`.
    pub fn block3(&self) -> Rotation<3> {
        let mut b = Matrix::<3>::zero();
        for r in 0..3 {
            for c in 0..3 {
                b[(r, c)] = self.0[(r, c)];
            }
        }
        Rotation(b)
    }
}

impl<const N: usize> Default for Rotation<N> {
    fn default() -> Self {
        Self::identity()
    }
}

impl<const N: usize> fmt::Debug for Rotation<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Rotation").field(&self.0).finish()
    }
}

impl<const N: usize> Mul for Rotation<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.compose(&rhs)
    }
}

impl<const N: usize> Mul<Vector<N>> for Rotation<N> {
    type Output = Vector<N>;
    fn mul(self, v: Vector<N>) -> Vector<N> {
        self.apply(&v)
    }
}

/// Checks `|f(x) - f(y)| = |x - y|` within `tol` for every sampled pair.
pub fn is_rigid_motion_sample_test<const N: usize, F>(
    f: F,
    samples: &[(Vector<N>, Vector<N>)],
    tol: f64,
) -> Result<bool>
where
    F: Fn(&Vector<N>) -> Vector<N>,
{
    if samples.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: samples.len(),
        });
    }
    Ok(samples
        .iter()
        .all(|(x, y)| (f(x).distance(&f(y)) - x.distance(y)).abs() <= tol))
}

/// Orthonormalises `candidates` against `basis` (modified Gram–Schmidt),
/// always taking next the candidate with the largest remaining component.
/// Returns the extended basis once it reaches `target` vectors.
pub(crate) fn extend_orthonormal<const N: usize>(
    mut basis: Vec<Vector<N>>,
    candidates: &[Vector<N>],
    target: usize,
) -> Vec<Vector<N>> {
    let mut pool: Vec<Vector<N>> = candidates.to_vec();
    while basis.len() < target {
        let residuals: Vec<Vector<N>> = pool
            .iter()
            .map(|c| {
                let mut r = *c;
                for b in &basis {
                    r -= *b * b.dot(&r);
                }
                for b in &basis {
                    r -= *b * b.dot(&r);
                }
                r
            })
            .collect();
        let best = residuals
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()));
        match best {
            Some((i, r)) if r.norm() > 0.0 => {
                basis.push(*r * (1.0 / r.norm()));
                pool.swap_remove(i);
            }
            _ => break,
        }
    }
    basis
}
