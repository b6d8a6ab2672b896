#![forbid(unsafe_code)]

//! Numerical inversive geometry on the two- and three-sphere.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: fixed-size vectors, matrices and validated rotation matrices,
//!   elementary (single coordinate-plane) rotations and trivial extensions.
//! - [`rotations`]: constructive decompositions of rotations: Z-Y-Z Euler
//!   angles in SO(3), the four-factor SO(4) decomposition that isolates an
//!   `x,w`-plane rotation, elementary factorisations, invariant-plane block
//!   form and one-parameter rotation paths.
//! - [`stereographic`]: projection from the north pole of S² and S³, its
//!   inverse, and the correspondence between hyperplanes of R⁴ and
//!   spheres/planes of R³.
//! - [`inversive`]: reflection in circles and spheres, hyperplane reflection
//!   in R⁴, Steiner and Apollonius families, symmetry lines.
//! - [`clifford`]: the Clifford torus, its stereographic images under
//!   arbitrary rotations of S³, and numerical symmetry certificates.
//! - [`exec`]: sequential / data-parallel execution of batch workloads.
//!
//! All angles are in radians and matrices act on column vectors from the left.

pub mod clifford;
mod error;
pub mod exec;
pub mod inversive;
pub mod linalg;
pub mod rotations;
pub mod sampling;
pub mod stereographic;

pub use error::{Error, Result};
pub use exec::Execution;
pub use linalg::{Matrix, Rotation, Vector};

/// Tolerance used when validating user-supplied rotation matrices.
pub const DEFAULT_ROTATION_TOL: f64 = 1e-9;
