//! Command-line front end: rotation decompositions, projected-torus meshes,
//! symmetry certificates and Steiner/Apollonius figures.

pub mod config;
pub mod formats;
pub mod rotation_spec;

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use inversive_core::clifford::{symmetry_lines, verify_lines, ProjectedTorus, Verdict, VerifyConfig};
use inversive_core::inversive::{apollonius_family, steiner_circles, SteinerPair, SymmetryLine};
use inversive_core::rotations::{decompose_so3, decompose_so4, elementary_factorization, plane_block_form};
use inversive_core::{Execution, Matrix, Rotation, Vector};

use config::Settings;
use rotation_spec::{parse_rotation, RotationInput};

pub const SCHEMA: u32 = 1;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "inversive",
    version,
    about = "Rotations, stereographic projection and Clifford torus symmetry"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decompose a rotation into elementary factors and invariant planes.
    Decompose(DecomposeArgs),
    /// Write a mesh of a rotated, projected Clifford torus.
    TorusMesh(MeshArgs),
    /// Certify the generalized symmetry of a projected torus (JSON).
    SymmetryReport(ReportArgs),
    /// Draw Steiner circles and circles of Apollonius (SVG and CSV).
    SteinerFigure(SteinerArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Flat `key = value` file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output path (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, allow_hyphen_values = true)]
    pub rotation: Option<String>,
    /// Dimension of `identity`.
    #[arg(long)]
    pub dim: Option<usize>,
    /// `json` or `text`.
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Args)]
pub struct MeshArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, allow_hyphen_values = true)]
    pub rotation: Option<String>,
    #[arg(long)]
    pub n_alpha: Option<usize>,
    #[arg(long)]
    pub n_beta: Option<usize>,
    /// Append the symmetry lines as `l` records.
    #[arg(long)]
    pub lines: bool,
    /// Half-length of the emitted line segments.
    #[arg(long)]
    pub center_span: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, allow_hyphen_values = true)]
    pub rotation: Option<String>,
    #[arg(long)]
    pub n_alpha: Option<usize>,
    #[arg(long)]
    pub n_beta: Option<usize>,
    #[arg(long)]
    pub n_centers: Option<usize>,
    #[arg(long)]
    pub center_span: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// `parallel` or `sequential`; does not change the output.
    #[arg(long)]
    pub execution: Option<String>,
    /// Debug: add this to every reference distance (negative control).
    #[arg(long, allow_hyphen_values = true)]
    pub perturb_rho0: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SteinerArgs {
    #[command(flatten)]
    pub common: Common,
    /// First point, `x,y`.
    #[arg(long, allow_hyphen_values = true)]
    pub a1: Option<String>,
    /// Second point, `x,y`.
    #[arg(long, allow_hyphen_values = true)]
    pub a2: Option<String>,
    #[arg(long)]
    pub steiner_count: Option<usize>,
    #[arg(long)]
    pub apollonius_count: Option<usize>,
    /// CSV path (defaults to the SVG path with a `.csv` extension).
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

/// Process exit status of a successful run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// A certificate was written but its verdict is `fail`.
    CertificateFailed,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::CertificateFailed => 1,
        }
    }
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Decompose(a) => cmd_decompose(a),
        Command::TorusMesh(a) => cmd_torus_mesh(a),
        Command::SymmetryReport(a) => cmd_symmetry_report(a),
        Command::SteinerFigure(a) => cmd_steiner_figure(a),
    }
}

fn emit(out: Option<&Path>, contents: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, contents).with_context(|| format!("writing {}", p.display())),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(contents.as_bytes())
                .context("writing stdout")
        }
    }
}

fn out_path(common: &Common, settings: &Settings) -> Option<PathBuf> {
    common.out.clone().or_else(|| settings.raw("out").map(PathBuf::from))
}

fn rows<const N: usize>(m: &Matrix<N>) -> Vec<Vec<f64>> {
    m.rows().iter().map(|r| r.to_vec()).collect()
}

fn core_err(e: inversive_core::Error) -> anyhow::Error {
    anyhow!("{}: {e}", e.code())
}

// ---------------------------------------------------------------- decompose

#[derive(Debug, Serialize)]
pub struct EulerReport {
    pub theta: f64,
    pub phi: f64,
    pub psi: f64,
    pub reconstruction_residual: f64,
}

#[derive(Debug, Serialize)]
pub struct So4Report {
    pub psi: f64,
    pub phi: f64,
    pub theta: f64,
    pub r0: Vec<Vec<f64>>,
    pub r0_block_form_defect: f64,
    pub reconstruction_residual: f64,
}

#[derive(Debug, Serialize)]
pub struct FactorReport {
    pub k: usize,
    pub j: usize,
    pub angle: f64,
}

#[derive(Debug, Serialize)]
pub struct BlockFormReport {
    pub fixed_dim: usize,
    pub angles: Vec<f64>,
    pub basis: Vec<Vec<f64>>,
    pub reconstruction_residual: f64,
}

#[derive(Debug, Serialize)]
pub struct DecomposeReport {
    pub schema: u32,
    pub command: &'static str,
    pub version: &'static str,
    pub dim: usize,
    pub rotation: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub euler_zyz: Option<EulerReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub so4: Option<So4Report>,
    pub elementary_factors: Vec<FactorReport>,
    pub factorization_residual: f64,
    pub block_form: BlockFormReport,
}

fn common_parts<const N: usize>(r: &Rotation<N>) -> Result<(Vec<FactorReport>, f64, BlockFormReport)> {
    let f = elementary_factorization(r);
    let factors = f
        .factors
        .iter()
        .map(|e| FactorReport {
            k: e.k,
            j: e.j,
            angle: e.angle,
        })
        .collect();
    let b = plane_block_form(r).map_err(core_err)?;
    let block = BlockFormReport {
        fixed_dim: b.fixed_dim,
        angles: b.angles.clone(),
        basis: rows(b.basis.matrix()),
        reconstruction_residual: b.reconstruct().max_abs_diff(r),
    };
    Ok((factors, f.compose().max_abs_diff(r), block))
}

pub fn decompose_report(input: &RotationInput) -> Result<DecomposeReport> {
    let report = match input {
        RotationInput::Dim2(r) => {
            let (f, res, b) = common_parts(r)?;
            DecomposeReport::new(2, rows(r.matrix()), f, res, b)
        }
        RotationInput::Dim3(r) => {
            let (f, res, b) = common_parts(r)?;
            let mut rep = DecomposeReport::new(3, rows(r.matrix()), f, res, b);
            let e = decompose_so3(r);
            rep.euler_zyz = Some(EulerReport {
                theta: e.theta,
                phi: e.phi,
                psi: e.psi,
                reconstruction_residual: e.reconstruct().max_abs_diff(r),
            });
            rep
        }
        RotationInput::Dim4(r) => {
            let (f, res, b) = common_parts(r)?;
            let mut rep = DecomposeReport::new(4, rows(r.matrix()), f, res, b);
            let d = decompose_so4(r).map_err(core_err)?;
            rep.so4 = Some(So4Report {
                psi: d.psi,
                phi: d.phi,
                theta: d.theta,
                r0: rows(d.r0.matrix()),
                r0_block_form_defect: d.r0.block_form_defect(),
                reconstruction_residual: d.reconstruct().max_abs_diff(r),
            });
            rep
        }
    };
    Ok(report)
}

impl DecomposeReport {
    fn new(dim: usize, rotation: Vec<Vec<f64>>, f: Vec<FactorReport>, res: f64, b: BlockFormReport) -> Self {
        Self {
            schema: SCHEMA,
            command: "decompose",
            version: VERSION,
            dim,
            rotation,
            euler_zyz: None,
            so4: None,
            elementary_factors: f,
            factorization_residual: res,
            block_form: b,
        }
    }

    pub fn to_text(&self) -> String {
        use formats::num;
        let mut out = format!("dim {}\n", self.dim);
        let row = |r: &Vec<f64>| r.iter().map(|x| num(*x)).collect::<Vec<_>>().join(" ");
        for r in &self.rotation {
            out += &format!("rotation {}\n", row(r));
        }
        if let Some(e) = &self.euler_zyz {
            out += &format!(
                "euler_zyz theta {} phi {} psi {}\neuler_zyz residual {}\n",
                num(e.theta),
                num(e.phi),
                num(e.psi),
                num(e.reconstruction_residual)
            );
        }
        if let Some(s) = &self.so4 {
            out += &format!("so4 psi {} phi {} theta {}\n", num(s.psi), num(s.phi), num(s.theta));
            for r in &s.r0 {
                out += &format!("so4 r0 {}\n", row(r));
            }
            out += &format!(
                "so4 r0_block_form_defect {}\nso4 residual {}\n",
                num(s.r0_block_form_defect),
                num(s.reconstruction_residual)
            );
        }
        for f in &self.elementary_factors {
            out += &format!("factor {} {} {}\n", f.k, f.j, num(f.angle));
        }
        out += &format!("factorization residual {}\n", num(self.factorization_residual));
        out += &format!("block_form fixed_dim {}\n", self.block_form.fixed_dim);
        for a in &self.block_form.angles {
            out += &format!("block_form angle {}\n", num(*a));
        }
        out += &format!("block_form residual {}\n", num(self.block_form.reconstruction_residual));
        out
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

pub fn cmd_decompose(a: DecomposeArgs) -> Result<Outcome> {
    let settings = Settings::load(a.common.config.as_deref())?;
    settings.check_keys(&["rotation", "dim", "format", "out"])?;
    let spec: String = settings.pick(a.rotation, "rotation", "identity".to_string())?;
    let dim: usize = settings.pick(a.dim, "dim", 4)?;
    let format: String = settings.pick(a.format, "format", "json".to_string())?;
    let input = parse_rotation(&spec, dim)?;
    let report = decompose_report(&input)?;
    let text = match format.as_str() {
        "json" => to_json(&report)?,
        "text" => report.to_text(),
        other => bail!("unknown format {other:?} (json or text)"),
    };
    emit(out_path(&a.common, &settings).as_deref(), &text)?;
    Ok(Outcome::Success)
}

// ---------------------------------------------------------------- torus-mesh

pub fn cmd_torus_mesh(a: MeshArgs) -> Result<Outcome> {
    let settings = Settings::load(a.common.config.as_deref())?;
    settings.check_keys(&["rotation", "n_alpha", "n_beta", "lines", "center_span", "out"])?;
    let spec: String = settings.pick(a.rotation, "rotation", "identity".to_string())?;
    let n_alpha: usize = settings.pick(a.n_alpha, "n_alpha", 64)?;
    let n_beta: usize = settings.pick(a.n_beta, "n_beta", 64)?;
    let with_lines = a.lines || settings.pick(None, "lines", false)?;
    let span: f64 = settings.pick(a.center_span, "center_span", 3.0)?;
    let r = parse_rotation(&spec, 4)?.into_dim4()?;
    let torus = ProjectedTorus::new(&r, n_alpha, n_beta, Execution::default()).map_err(core_err)?;
    let lines = if with_lines {
        symmetry_lines(&r).map_err(core_err)?
    } else {
        Vec::new()
    };
    let header = vec![
        format!("inversive torus-mesh {VERSION}"),
        format!("rotation {spec}"),
        format!("n_alpha {n_alpha} n_beta {n_beta} excluded {}", torus.excluded),
    ];
    emit(
        out_path(&a.common, &settings).as_deref(),
        &formats::torus_mesh(&torus, &header, &lines, span),
    )?;
    Ok(Outcome::Success)
}

// ---------------------------------------------------------------- symmetry-report

#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub rotation: String,
    pub n_alpha: usize,
    pub n_beta: usize,
    pub n_centers: usize,
    pub center_span: f64,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perturb_rho0: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct LineDoc {
    pub base: [f64; 3],
    pub direction: [f64; 3],
    pub rho0: f64,
}

#[derive(Debug, Serialize)]
pub struct RowDoc {
    pub line: usize,
    pub parameter: f64,
    pub center: [f64; 3],
    pub radius: f64,
    pub max_residual: f64,
    pub near_center: usize,
}

#[derive(Debug, Serialize)]
pub struct DecompositionDoc {
    pub psi: f64,
    pub phi: f64,
    pub theta: f64,
}

#[derive(Debug, Serialize)]
pub struct CertificateDocument {
    pub schema: u32,
    pub command: &'static str,
    pub version: &'static str,
    pub config: ConfigEcho,
    pub rotation: Vec<Vec<f64>>,
    pub decomposition: DecompositionDoc,
    pub lines: Vec<LineDoc>,
    pub rows: Vec<RowDoc>,
    pub samples: usize,
    pub excluded: usize,
    pub tolerance: f64,
    pub max_residual: f64,
    pub verdict: &'static str,
}

fn arr(v: &Vector<3>) -> [f64; 3] {
    *v.components()
}

pub fn cmd_symmetry_report(a: ReportArgs) -> Result<Outcome> {
    let settings = Settings::load(a.common.config.as_deref())?;
    settings.check_keys(&[
        "rotation",
        "n_alpha",
        "n_beta",
        "n_centers",
        "center_span",
        "tol",
        "execution",
        "perturb_rho0",
        "out",
    ])?;
    let defaults = VerifyConfig::default();
    let spec: String = settings.pick(a.rotation, "rotation", "identity".to_string())?;
    let execution = match settings
        .pick(a.execution, "execution", "parallel".to_string())?
        .as_str()
    {
        "parallel" => Execution::Parallel,
        "sequential" => Execution::Sequential,
        other => bail!("unknown execution mode {other:?}"),
    };
    let config = VerifyConfig {
        n_alpha: settings.pick(a.n_alpha, "n_alpha", defaults.n_alpha)?,
        n_beta: settings.pick(a.n_beta, "n_beta", defaults.n_beta)?,
        n_centers: settings.pick(a.n_centers, "n_centers", defaults.n_centers)?,
        center_span: settings.pick(a.center_span, "center_span", defaults.center_span)?,
        tol: settings.pick(a.tol, "tol", defaults.tol)?,
        execution,
    };
    let perturb: Option<f64> = settings.pick_opt(a.perturb_rho0, "perturb_rho0")?;
    let r = parse_rotation(&spec, 4)?.into_dim4()?;
    let d = decompose_so4(&r).map_err(core_err)?;
    let mut lines = symmetry_lines(&r).map_err(core_err)?;
    if let Some(delta) = perturb {
        lines = lines
            .iter()
            .map(|l| SymmetryLine {
                rho0: l.rho0 + delta,
                ..*l
            })
            .collect();
    }
    let cert = verify_lines(&r, &lines, &config).map_err(core_err)?;
    let doc = CertificateDocument {
        schema: SCHEMA,
        command: "symmetry-report",
        version: VERSION,
        config: ConfigEcho {
            rotation: spec,
            n_alpha: config.n_alpha,
            n_beta: config.n_beta,
            n_centers: config.n_centers,
            center_span: config.center_span,
            tol: config.tol,
            perturb_rho0: perturb,
        },
        rotation: rows(r.matrix()),
        decomposition: DecompositionDoc {
            psi: d.psi,
            phi: d.phi,
            theta: d.theta,
        },
        lines: cert
            .lines
            .iter()
            .map(|l| LineDoc {
                base: arr(&l.base),
                direction: arr(&l.direction),
                rho0: l.rho0,
            })
            .collect(),
        rows: cert
            .rows
            .iter()
            .map(|row| RowDoc {
                line: row.line,
                parameter: row.parameter,
                center: arr(&row.center),
                radius: row.radius,
                max_residual: row.max_residual,
                near_center: row.near_center,
            })
            .collect(),
        samples: cert.samples,
        excluded: cert.excluded,
        tolerance: cert.tolerance,
        max_residual: cert.max_residual(),
        verdict: cert.verdict.as_str(),
    };
    emit(out_path(&a.common, &settings).as_deref(), &to_json(&doc)?)?;
    Ok(match cert.verdict {
        Verdict::Pass => Outcome::Success,
        Verdict::Fail => {
            eprintln!(
                "symmetry certificate failed: max residual {:e} > tol {:e}",
                cert.max_residual(),
                cert.tolerance
            );
            Outcome::CertificateFailed
        }
    })
}

// ---------------------------------------------------------------- steiner-figure

pub fn parse_point(s: &str) -> Result<Vector<2>> {
    let parts: Vec<f64> = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().with_context(|| format!("bad coordinate {t:?}")))
        .collect::<Result<_>>()?;
    match parts[..] {
        [x, y] if x.is_finite() && y.is_finite() => Ok(Vector::new([x, y])),
        _ => bail!("expected a point `x,y`, got {s:?}"),
    }
}

pub fn cmd_steiner_figure(a: SteinerArgs) -> Result<Outcome> {
    let settings = Settings::load(a.common.config.as_deref())?;
    settings.check_keys(&["a1", "a2", "steiner_count", "apollonius_count", "out", "csv"])?;
    let a1 = parse_point(&settings.pick(a.a1, "a1", "-1,0".to_string())?)?;
    let a2 = parse_point(&settings.pick(a.a2, "a2", "1,0".to_string())?)?;
    let n_steiner: usize = settings.pick(a.steiner_count, "steiner_count", 9)?;
    let n_apollonius: usize = settings.pick(a.apollonius_count, "apollonius_count", 8)?;
    let pair = SteinerPair::new(a1, a2).map_err(core_err)?;
    let steiner = steiner_circles(&pair, n_steiner).map_err(core_err)?;
    let apollonius = apollonius_family(&pair, n_apollonius);
    let svg_path = out_path(&a.common, &settings);
    let csv_path = a
        .csv
        .or_else(|| settings.raw("csv").map(PathBuf::from))
        .or_else(|| svg_path.as_ref().map(|p| p.with_extension("csv")));
    emit(svg_path.as_deref(), &formats::steiner_svg(&pair, &steiner, &apollonius))?;
    if let Some(p) = csv_path {
        emit(Some(&p), &formats::steiner_csv(&pair, &steiner, &apollonius))?;
    }
    Ok(Outcome::Success)
}
