//! Random test inputs: rotations, unit vectors, tangent vectors.

use rand::Rng;

use crate::linalg::{Rotation, Vector};

/// Product of `factors` elementary rotations with uniformly random coordinate
/// planes and angles uniform in `[0, 2π)`. Stays in SO(N) by construction.
pub fn random_rotation_with<const N: usize, R: Rng + ?Sized>(rng: &mut R, factors: usize) -> Rotation<N> {
    let mut r = Rotation::<N>::identity();
    if N < 2 {
        return r;
    }
    for _ in 0..factors {
        let k = rng.gen_range(1..N);
        let j = rng.gen_range(k + 1..=N);
        let angle = rng.gen_range(0.0..std::f64::consts::TAU);
        r = r * Rotation::elementary(k, j, angle).expect("valid plane");
    }
    r
}

/// A random rotation built from 10 elementary factors.
pub fn random_rotation<const N: usize, R: Rng + ?Sized>(rng: &mut R) -> Rotation<N> {
    random_rotation_with(rng, 10)
}

/// Vector with independent components uniform in `[-scale, scale)`.
pub fn random_vector<const N: usize, R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Vector<N> {
    let mut v = Vector::zero();
    for i in 0..N {
        v[i] = rng.gen_range(-scale..scale);
    }
    v
}

/// Uniformly distributed point of the unit sphere in R^N (rejection sampling).
pub fn random_unit_vector<const N: usize, R: Rng + ?Sized>(rng: &mut R) -> Vector<N> {
    loop {
        let v: Vector<N> = random_vector(rng, 1.0);
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v * (1.0 / n);
        }
    }
}

/// Random unit vector orthogonal to the unit vector `p`.
pub fn random_tangent<const N: usize, R: Rng + ?Sized>(rng: &mut R, p: &Vector<N>) -> Vector<N> {
    loop {
        let v: Vector<N> = random_unit_vector(rng);
        let t = v - *p * p.dot(&v);
        if let Some(t) = t.normalized().filter(|_| t.norm() > 1e-3) {
            return t;
        }
    }
}
