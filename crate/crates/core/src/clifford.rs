//! The Clifford torus `{x² + y² = 1/2 = z² + w²} ⊂ S³`, its rotated
//! stereographic projections, their lines of symmetry, and a numerical
//! certificate that each symmetry sphere maps the projected surface to itself.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, SQRT_2, TAU};

use crate::error::{Error, Result};
use crate::exec::{fold_max, Execution};
use crate::inversive::{invert, symmetry_sphere_at, InversionSphere, SymmetryLine};
use crate::linalg::{Rotation, Vector};
use crate::rotations::decompose_so4;
use crate::stereographic::{inverse_s3, project_s3, project_s3_unchecked};

/// Projected samples with `1 - w` below this are excluded.
pub const POLE_GUARD: f64 = 1e-6;

/// Samples closer than this to a symmetry sphere center are skipped.
pub const CENTER_GUARD: f64 = 1e-6;

/// `|sin ψ|` or `|cos ψ|` below this selects a degenerate case of the lines.
pub const PSI_TOL: f64 = 1e-12;

/// A point `(cos α, sin α, cos β, sin β)/√2` of the torus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusPoint4 {
    pub point: Vector<4>,
    pub alpha: f64,
    pub beta: f64,
}

impl TorusPoint4 {
    pub fn new(alpha: f64, beta: f64) -> Self {
        let (sa, ca) = alpha.sin_cos();
        let (sb, cb) = beta.sin_cos();
        let s = FRAC_1_SQRT_2;
        Self {
            point: Vector::new([ca * s, sa * s, cb * s, sb * s]),
            alpha,
            beta,
        }
    }
}

/// `max(|x² + y² - 1/2|, |z² + w² - 1/2|)`.
pub fn torus_residual(q: &Vector<4>) -> f64 {
    let a = (q[0] * q[0] + q[1] * q[1] - 0.5).abs();
    let b = (q[2] * q[2] + q[3] * q[3] - 0.5).abs();
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

fn check_grid(n_alpha: usize, n_beta: usize, needed: usize) -> Result<()> {
    let got = n_alpha.min(n_beta);
    if got < needed {
        return Err(Error::TooFewSamples { needed, got });
    }
    Ok(())
}

/// Uniform `n_alpha × n_beta` grid, `α` major: index `i * n_beta + j`.
pub fn sample_torus(n_alpha: usize, n_beta: usize) -> Result<Vec<TorusPoint4>> {
    check_grid(n_alpha, n_beta, 3)?;
    Ok(grid_points(n_alpha, n_beta))
}

fn grid_points(n_alpha: usize, n_beta: usize) -> Vec<TorusPoint4> {
    let mut out = Vec::with_capacity(n_alpha * n_beta);
    for i in 0..n_alpha {
        for j in 0..n_beta {
            out.push(TorusPoint4::new(
                TAU * i as f64 / n_alpha as f64,
                TAU * j as f64 / n_beta as f64,
            ));
        }
    }
    out
}

/// `π ∘ R` applied to a torus grid; pole-adjacent samples are `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectedTorus {
    pub rotation: Rotation<4>,
    pub n_alpha: usize,
    pub n_beta: usize,
    pub grid: Vec<Option<Vector<3>>>,
    pub excluded: usize,
}

impl ProjectedTorus {
    pub fn new(rotation: &Rotation<4>, n_alpha: usize, n_beta: usize, execution: Execution) -> Result<Self> {
        check_grid(n_alpha, n_beta, 3)?;
        let points = grid_points(n_alpha, n_beta);
        let grid = execution.map(&points, |t| {
            let x = rotation.apply(&t.point);
            if 1.0 - x[3] < POLE_GUARD {
                None
            } else {
                project_s3_unchecked(&x).ok()
            }
        });
        let excluded = grid.iter().filter(|p| p.is_none()).count();
        Ok(Self {
            rotation: *rotation,
            n_alpha,
            n_beta,
            grid,
            excluded,
        })
    }

    pub fn get(&self, i: usize, j: usize) -> Option<Vector<3>> {
        self.grid[i * self.n_beta + j]
    }

    /// Retained samples in grid order.
    pub fn samples(&self) -> Vec<Vector<3>> {
        self.grid.iter().flatten().copied().collect()
    }
}

/// Distance-like membership residual of `p` in `π ∘ R(𝒞)`: pull back by
/// `R⁻¹ ∘ π⁻¹` and evaluate the torus equations.
pub fn projected_residual(p: &Vector<3>, r: &Rotation<4>) -> f64 {
    let q = r.inverse().apply(&inverse_s3(p));
    torus_residual(&q)
}

/// `(√(x² + y²) - √2)² + z² - 1`, whose zero set is `π(𝒞)`.
pub fn canonical_projection_implicit(p: &Vector<3>) -> Result<f64> {
    let rho = p[0].hypot(p[1]);
    if rho <= 1e-12 {
        return Err(Error::OnAxis);
    }
    let d = rho - SQRT_2;
    Ok(d * d + p[2] * p[2] - 1.0)
}

/// Reduces `ψ` modulo `π` into `(-π/2, π/2]`.
pub fn reduce_psi(psi: f64) -> f64 {
    let mut r = psi.rem_euclid(PI);
    if r > FRAC_PI_2 {
        r -= PI;
    }
    r
}

/// Symmetry lines of `π ∘ R^{xw}_ψ(𝒞)`.
pub fn canonical_lines(psi: f64) -> Vec<SymmetryLine> {
    let psi = reduce_psi(psi);
    let (s, c) = psi.sin_cos();
    let e1 = Vector::new([1.0, 0.0, 0.0]);
    let e2 = Vector::new([0.0, 1.0, 0.0]);
    let e3 = Vector::new([0.0, 0.0, 1.0]);
    if s.abs() <= PSI_TOL {
        return vec![SymmetryLine {
            base: Vector::zero(),
            direction: e3,
            rho0: 1.0,
        }];
    }
    if c.abs() <= PSI_TOL {
        return vec![SymmetryLine {
            base: Vector::zero(),
            direction: e2,
            rho0: 1.0,
        }];
    }
    let horizontal = SymmetryLine {
        base: e1 * (-c / s),
        direction: e2,
        rho0: 1.0 / s.abs(),
    };
    let vertical = SymmetryLine {
        base: e1 * (s / c),
        direction: e3,
        rho0: 1.0 / c.abs(),
    };
    vec![vertical, horizontal]
}

/// Symmetry lines of `π ∘ R(𝒞)`: canonical lines for the decomposition's `ψ`
/// moved by the 3×3 block of `R₀`.
pub fn symmetry_lines(r: &Rotation<4>) -> Result<Vec<SymmetryLine>> {
    let d = decompose_so4(r)?;
    let block = d.r0_block();
    Ok(canonical_lines(d.psi)
        .iter()
        .map(|l| l.transformed(|v| block.apply(v)))
        .collect())
}

/// Symmetry spheres centered at `base + t · direction` for each `t`.
pub fn symmetry_sphere_family(line: &SymmetryLine, centers: &[f64]) -> Vec<InversionSphere<3>> {
    centers
        .iter()
        .map(|&t| symmetry_sphere_at(line, &line.point_at(t)).unwrap_or_else(|_| line.sphere_at_parameter(t)))
        .collect()
}

/// Sampling and tolerance parameters of [`verify_symmetry`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyConfig {
    pub n_alpha: usize,
    pub n_beta: usize,
    pub n_centers: usize,
    pub center_span: f64,
    pub tol: f64,
    pub execution: Execution,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            n_alpha: 64,
            n_beta: 64,
            n_centers: 11,
            center_span: 3.0,
            tol: 1e-9,
            execution: Execution::default(),
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_alpha < 8 || self.n_beta < 8 {
            return Err(Error::InvalidConfig(format!(
                "grid must be at least 8x8, got {}x{}",
                self.n_alpha, self.n_beta
            )));
        }
        if self.n_centers == 0 {
            return Err(Error::InvalidConfig("n_centers must be positive".into()));
        }
        if !(self.center_span.is_finite() && self.center_span >= 0.0) {
            return Err(Error::InvalidConfig(format!("bad center span {}", self.center_span)));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::InvalidConfig(format!("bad tolerance {}", self.tol)));
        }
        Ok(())
    }

    /// `n_centers` parameters evenly spread over `[-span, span]`.
    pub fn parameters(&self) -> Vec<f64> {
        if self.n_centers == 1 {
            return vec![0.0];
        }
        let step = 2.0 * self.center_span / (self.n_centers - 1) as f64;
        (0..self.n_centers)
            .map(|i| -self.center_span + step * i as f64)
            .collect()
    }
}

/// Result for one symmetry sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertificateRow {
    pub line: usize,
    pub parameter: f64,
    pub center: Vector<3>,
    pub radius: f64,
    pub max_residual: f64,
    /// Samples skipped for lying within [`CENTER_GUARD`] of the center.
    pub near_center: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryCertificate {
    pub lines: Vec<SymmetryLine>,
    pub rows: Vec<CertificateRow>,
    pub tolerance: f64,
    pub verdict: Verdict,
    /// Grid size `n_alpha · n_beta`.
    pub samples: usize,
    /// Samples dropped by the pole guard.
    pub excluded: usize,
}

impl SymmetryCertificate {
    /// Largest residual over all rows (NaN if any row is NaN).
    pub fn max_residual(&self) -> f64 {
        fold_max(self.rows.iter().map(|r| r.max_residual))
    }
}

/// Certifies the symmetry lines computed by [`symmetry_lines`].
pub fn verify_symmetry(r: &Rotation<4>, config: &VerifyConfig) -> Result<SymmetryCertificate> {
    let lines = symmetry_lines(r)?;
    verify_lines(r, &lines, config)
}

/// Certifies arbitrary candidate lines; wrong lines must fail.
pub fn verify_lines(r: &Rotation<4>, lines: &[SymmetryLine], config: &VerifyConfig) -> Result<SymmetryCertificate> {
    config.validate()?;
    let torus = ProjectedTorus::new(r, config.n_alpha, config.n_beta, config.execution)?;
    let samples = torus.samples();
    let parameters = config.parameters();
    let jobs: Vec<(usize, f64)> = (0..lines.len())
        .flat_map(|l| parameters.iter().map(move |&t| (l, t)))
        .collect();
    let inverse = r.inverse();
    let rows = config.execution.map(&jobs, |&(l, t)| {
        let sphere = lines[l].sphere_at_parameter(t);
        let mut near_center = 0;
        let mut worst: f64 = 0.0;
        for p in &samples {
            if p.distance(&sphere.center) < CENTER_GUARD {
                near_center += 1;
                continue;
            }
            let residual = match invert(p, &sphere) {
                Ok(image) => torus_residual(&inverse.apply(&inverse_s3(&image))),
                Err(_) => f64::NAN,
            };
            worst = if worst.is_nan() || residual.is_nan() {
                f64::NAN
            } else {
                worst.max(residual)
            };
        }
        CertificateRow {
            line: l,
            parameter: t,
            center: sphere.center,
            radius: sphere.radius,
            max_residual: worst,
            near_center,
        }
    });
    let pass = rows.iter().all(|row| row.max_residual <= config.tol);
    Ok(SymmetryCertificate {
        lines: lines.to_vec(),
        rows,
        tolerance: config.tol,
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        samples: config.n_alpha * config.n_beta,
        excluded: torus.excluded,
    })
}

/// True if `r` maps a 32×32 torus sample into the torus within `1e-10`.
pub fn torus_invariance_check(r: &Rotation<4>) -> bool {
    grid_points(32, 32)
        .iter()
        .all(|t| torus_residual(&r.apply(&t.point)) <= 1e-10)
}

/// `max |π(R₀ x) - R₀ π(x)|` for a rotation fixing `e₄`, with `R₀` acting
/// on R³ through its upper 3×3 block on the right-hand side.
pub fn commute_projection_check(r0: &Rotation<4>, points: &[Vector<4>]) -> Result<f64> {
    let deviation = r0.block_form_defect();
    if deviation > 1e-12 {
        return Err(Error::NotBlockForm { deviation });
    }
    let block = r0.block3();
    let mut worst: f64 = 0.0;
    for x in points {
        let lhs = project_s3(&r0.apply(x))?;
        let rhs = block.apply(&project_s3(x)?);
        worst = worst.max(lhs.distance(&rhs));
    }
    Ok(worst)
}

/// Residual maxima for the quarter- and half-period relations of `Q(ψ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodResiduals {
    /// `Q(ψ + π/2) = R_x(π/2) Q(ψ)`.
    pub quarter: f64,
    /// `Q(ψ + π) = Q(ψ)`.
    pub half: f64,
}

pub fn quarter_period_check(psi: f64) -> Result<PeriodResiduals> {
    let base = Rotation::elementary(1, 4, psi)?;
    let quarter = Rotation::elementary(1, 4, psi + FRAC_PI_2)?;
    let half = Rotation::elementary(1, 4, psi + PI)?;
    let rx = Rotation::<3>::elementary(2, 3, FRAC_PI_2)?;
    let samples = ProjectedTorus::new(&base, 48, 48, Execution::Sequential)?.samples();
    Ok(PeriodResiduals {
        quarter: fold_max(samples.iter().map(|q| projected_residual(&rx.apply(q), &quarter))),
        half: fold_max(samples.iter().map(|q| projected_residual(q, &half))),
    })
}
