//! Textual rotation specifications.
//!
//! - `identity`
//! - `xw:<angle>`
//! - `decomp:<psi>,<phi>,<theta>[,<a>,<b>,<c>]`: `R0 · R^{xw}_psi · R^{zw}_phi · R^{xy}_theta`
//!   with `R0` the extension of the Z-Y-Z rotation `R^z_a R^y_b R^z_c`
//! - `matrix:<entries>` or bare entries: 4, 9 or 16 numbers, row-major,
//!   separated by commas and/or whitespace
//!
//! Angles are radians unless prefixed with `deg:`.

use anyhow::{anyhow, bail, Context, Result};
use inversive_core::rotations::EulerZyz;
use inversive_core::{Error, Matrix, Rotation};

/// Tolerance for hand-typed matrices.
pub const INPUT_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub enum RotationInput {
    Dim2(Rotation<2>),
    Dim3(Rotation<3>),
    Dim4(Rotation<4>),
}

impl RotationInput {
    pub fn dim(&self) -> usize {
        match self {
            RotationInput::Dim2(_) => 2,
            RotationInput::Dim3(_) => 3,
            RotationInput::Dim4(_) => 4,
        }
    }

    pub fn into_dim4(self) -> Result<Rotation<4>> {
        match self {
            RotationInput::Dim4(r) => Ok(r),
            other => bail!("a 4x4 rotation is required, got dimension {}", other.dim()),
        }
    }
}

pub fn parse_angle(s: &str) -> Result<f64> {
    let s = s.trim();
    let (deg, body) = match s.strip_prefix("deg:") {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let v: f64 = body.trim().parse().with_context(|| format!("bad angle {s:?}"))?;
    if !v.is_finite() {
        bail!("angle {s:?} is not finite");
    }
    Ok(if deg { v.to_radians() } else { v })
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
}

fn validated<const N: usize>(entries: &[f64]) -> Result<Rotation<N>> {
    let m = Matrix::<N>::from_row_major(entries).expect("entry count checked");
    Rotation::validate(m, INPUT_TOL).map_err(|e: Error| anyhow!("{}: {e}", e.code()))
}

/// Parses a rotation spec; `dim` selects the dimension of `identity`.
pub fn parse_rotation(spec: &str, dim: usize) -> Result<RotationInput> {
    let spec = spec.trim();
    if spec == "identity" {
        return Ok(match dim {
            2 => RotationInput::Dim2(Rotation::identity()),
            3 => RotationInput::Dim3(Rotation::identity()),
            4 => RotationInput::Dim4(Rotation::identity()),
            d => bail!("unsupported dimension {d}"),
        });
    }
    if let Some(rest) = spec.strip_prefix("xw:") {
        return Ok(RotationInput::Dim4(Rotation::elementary(1, 4, parse_angle(rest)?)?));
    }
    if let Some(rest) = spec.strip_prefix("decomp:") {
        let angles: Vec<f64> = split_list(rest).map(parse_angle).collect::<Result<_>>()?;
        let (psi, phi, theta) = match angles[..] {
            [psi, phi, theta] | [psi, phi, theta, _, _, _] => (psi, phi, theta),
            _ => bail!("decomp: expects 3 or 6 angles, got {}", angles.len()),
        };
        let r0 = if angles.len() == 6 {
            let e = EulerZyz {
                psi: angles[3],
                phi: angles[4],
                theta: angles[5],
            };
            Rotation::trivial_extension(&e.reconstruct(), &[1, 2, 3])?
        } else {
            Rotation::identity()
        };
        let r = r0
            * Rotation::elementary(1, 4, psi)?
            * Rotation::elementary(3, 4, phi)?
            * Rotation::elementary(1, 2, theta)?;
        return Ok(RotationInput::Dim4(r));
    }
    let body = spec.strip_prefix("matrix:").unwrap_or(spec);
    let entries: Vec<f64> = split_list(body)
        .map(|t| t.parse::<f64>().with_context(|| format!("bad matrix entry {t:?}")))
        .collect::<Result<_>>()
        .with_context(|| format!("unrecognised rotation spec {spec:?}"))?;
    Ok(match entries.len() {
        4 => RotationInput::Dim2(validated(&entries)?),
        9 => RotationInput::Dim3(validated(&entries)?),
        16 => RotationInput::Dim4(validated(&entries)?),
        n => bail!("a matrix needs 4, 9 or 16 entries, got {n}"),
    })
}
