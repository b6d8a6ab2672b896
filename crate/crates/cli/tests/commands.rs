use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use inversive_core::clifford::{canonical_projection_implicit, projected_residual};
use inversive_core::inversive::{crossing_angle, intersections};
use inversive_core::stereographic::{Hyperplane, Sphere, SphereOrPlane};
use inversive_core::{Rotation, Vector};

fn inversive(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_inversive"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn decompose_identity_dim3() {
    let doc = stdout_json(&inversive(&["decompose", "--rotation", "identity", "--dim", "3"]));
    assert_eq!(doc["schema"], 1);
    let e = &doc["euler_zyz"];
    for k in ["theta", "phi", "psi", "reconstruction_residual"] {
        assert_eq!(f(&e[k]), 0.0, "{k}");
    }
    assert_eq!(doc["block_form"]["fixed_dim"], 3);
}

#[test]
fn decompose_explicit_xw() {
    let r = Rotation::<4>::elementary(1, 4, PI / 5.0).unwrap();
    let entries: Vec<String> = r.matrix().rows().iter().flatten().map(|x| format!("{x:e}")).collect();
    let spec = format!("matrix:{}", entries.join(","));
    let doc = stdout_json(&inversive(&["decompose", "--rotation", &spec]));
    assert!((f(&doc["so4"]["psi"]) - PI / 5.0).abs() < 1e-12);
    assert!(f(&doc["so4"]["reconstruction_residual"]) < 1e-10);
    assert!(f(&doc["factorization_residual"]) < 1e-10);
}

#[test]
fn decompose_text_format() {
    let out = inversive(&["decompose", "--rotation", "xw:deg:36", "--format", "text"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().find(|l| l.starts_with("so4 psi")).unwrap();
    let psi: f64 = line.split_whitespace().nth(2).unwrap().parse().unwrap();
    assert!((psi - PI / 5.0).abs() < 1e-12);
}

#[test]
fn decompose_rejects_reflections() {
    let out = inversive(&["decompose", "--rotation", "1,0,0,0,1,0,0,0,-1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("DeterminantMinusOne"));
    let out = inversive(&["decompose", "--rotation", "1,0,0,0,1.1,0,0,0,1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("NotOrthogonal"));
}

struct Mesh {
    vertices: Vec<Vector<3>>,
    faces: Vec<[usize; 4]>,
    lines: Vec<[usize; 2]>,
    excluded: usize,
}

fn read_mesh(path: &Path) -> Mesh {
    let text = std::fs::read_to_string(path).unwrap();
    let mut m = Mesh {
        vertices: vec![],
        faces: vec![],
        lines: vec![],
        excluded: 0,
    };
    for line in text.lines() {
        let mut it = line.split_whitespace();
        match it.next() {
            Some("v") => {
                let c: Vec<f64> = it.map(|t| t.parse().unwrap()).collect();
                m.vertices.push(Vector::new([c[0], c[1], c[2]]));
            }
            Some("f") => {
                let c: Vec<usize> = it.map(|t| t.parse().unwrap()).collect();
                m.faces.push([c[0], c[1], c[2], c[3]]);
            }
            Some("l") => {
                let c: Vec<usize> = it.map(|t| t.parse().unwrap()).collect();
                m.lines.push([c[0], c[1]]);
            }
            Some("#") if line.contains("excluded") => {
                m.excluded = line.rsplit(' ').next().unwrap().parse().unwrap();
            }
            _ => {}
        }
    }
    m
}

#[test]
fn mesh_of_canonical_torus() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("q0.obj");
    let status = inversive(&[
        "torus-mesh",
        "--rotation",
        "xw:0",
        "--n-alpha",
        "32",
        "--n-beta",
        "24",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    let mesh = read_mesh(&out);
    assert_eq!(mesh.excluded, 0);
    assert_eq!(mesh.vertices.len(), 32 * 24);
    assert_eq!(mesh.faces.len(), 32 * 24);
    for v in &mesh.vertices {
        assert!(canonical_projection_implicit(v).unwrap().abs() < 1e-8);
    }
}

#[test]
fn meshes_of_rotated_tori() {
    let dir = tempfile::tempdir().unwrap();
    for (spec, psi) in [("xw:0.39269908169872414", PI / 8.0), ("xw:deg:45", PI / 4.0)] {
        let out = dir.path().join("q.obj");
        let status = inversive(&[
            "torus-mesh",
            "--rotation",
            spec,
            "--lines",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(status.status.success());
        let mesh = read_mesh(&out);
        let r = Rotation::elementary(1, 4, psi).unwrap();
        let torus_vertices = 64 * 64 - mesh.excluded;
        assert_eq!(mesh.vertices.len(), torus_vertices + 2 * mesh.lines.len());
        assert_eq!(mesh.lines.len(), 2);
        for v in &mesh.vertices[..torus_vertices] {
            assert!(projected_residual(v, &r) < 1e-8);
        }
        for face in &mesh.faces {
            assert!(face.iter().all(|&k| k >= 1 && k <= torus_vertices));
        }
    }
}

#[test]
fn mesh_drops_pole_faces() {
    // At ψ = π/4 the grid sample α = 0, β = π/2 maps onto the pole.
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("q.obj");
    assert!(inversive(&[
        "torus-mesh",
        "--rotation",
        "xw:deg:45",
        "--n-alpha",
        "16",
        "--n-beta",
        "16",
        "--out",
        out.to_str().unwrap()
    ])
    .status
    .success());
    let mesh = read_mesh(&out);
    assert!(mesh.excluded >= 1);
    assert_eq!(mesh.vertices.len(), 256 - mesh.excluded);
    assert_eq!(mesh.faces.len(), 256 - 4 * mesh.excluded);
}

fn verdict_from_rows(doc: &Value) -> &'static str {
    let tol = f(&doc["tolerance"]);
    let ok = doc["rows"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["max_residual"].as_f64().is_some_and(|x| x <= tol));
    if ok {
        "pass"
    } else {
        "fail"
    }
}

#[test]
fn report_identity_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("id.json");
    let run = inversive(&[
        "symmetry-report",
        "--rotation",
        "identity",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(run.status.success());
    let doc = read_json(&out);
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["verdict"], "pass");
    assert_eq!(verdict_from_rows(&doc), "pass");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 11);
    for row in doc["rows"].as_array().unwrap() {
        assert!(f(&row["max_residual"]) < 1e-9);
    }
    assert_eq!(doc["config"]["n_alpha"], 64);
}

#[test]
fn report_pi_over_8_has_two_lines() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    assert!(inversive(&[
        "symmetry-report",
        "--rotation",
        "xw:0.3927",
        "--out",
        out.to_str().unwrap()
    ])
    .status
    .success());
    let doc = read_json(&out);
    assert_eq!(doc["verdict"], "pass");
    assert_eq!(doc["lines"].as_array().unwrap().len(), 2);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 22);
}

#[test]
fn report_negative_control_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bad.json");
    let run = inversive(&[
        "symmetry-report",
        "--rotation",
        "xw:0.3927",
        "--perturb-rho0",
        "0.1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(1));
    let doc = read_json(&out);
    assert_eq!(doc["verdict"], "fail");
    assert_eq!(verdict_from_rows(&doc), "fail");
    assert!(f(&doc["max_residual"]) > 1e-3);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.cfg");
    std::fs::write(
        &cfg,
        "# report\nrotation = xw:deg:30\nn-alpha = 16\nn_beta = 16\nn_centers = 3\n",
    )
    .unwrap();
    let out = dir.path().join("r.json");
    let run = inversive(&[
        "symmetry-report",
        "--config",
        cfg.to_str().unwrap(),
        "--n-centers",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(run.status.success());
    let doc = read_json(&out);
    assert_eq!(doc["config"]["rotation"], "xw:deg:30");
    assert_eq!(doc["config"]["n_alpha"], 16);
    assert_eq!(doc["config"]["n_centers"], 5);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 10);

    std::fs::write(&cfg, "bogus = 1\n").unwrap();
    let run = inversive(&["symmetry-report", "--config", cfg.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(2));
}

fn read_csv(path: &Path) -> Vec<(String, f64, f64, f64)> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("family,center_x,center_y,radius"));
    lines
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            (
                c[0].to_string(),
                c[1].parse().unwrap(),
                c[2].parse().unwrap(),
                c[3].parse().unwrap(),
            )
        })
        .collect()
}

#[test]
fn steiner_figure_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("fig.svg");
    let run = inversive(&[
        "steiner-figure",
        "--a1=-1,0",
        "--a2=1,0",
        "--steiner-count",
        "7",
        "--apollonius-count",
        "6",
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert!(svg_text.contains("viewBox=\"-5 -5 10 10\""));
    assert!(svg_text.contains("clip-path"));

    let rows = read_csv(&dir.path().join("fig.csv"));
    assert_eq!(rows.len(), 7 + 6 + 1);
    assert_eq!(rows.iter().filter(|r| r.0 == "line").count(), 1);
    let mut circles = Vec::new();
    let mut apollonius = Vec::new();
    for (family, x, y, r) in &rows {
        match family.as_str() {
            "apollonius" => {
                let d2 = x * x + y * y;
                assert!((r * r - (d2 - 1.0)).abs() < 1e-12);
                apollonius.push(SphereOrPlane::Sphere(Sphere {
                    center: Vector::new([*x, *y]),
                    radius: *r,
                }));
            }
            "steiner" => circles.push(SphereOrPlane::Sphere(Sphere {
                center: Vector::new([*x, *y]),
                radius: *r,
            })),
            "line" => circles.push(SphereOrPlane::Plane(Hyperplane {
                normal: Vector::new([0.0, 1.0]),
                offset: 0.0,
            })),
            other => panic!("unexpected family {other}"),
        }
    }
    for a in &apollonius {
        for s in &circles {
            for p in intersections(a, s) {
                assert!((crossing_angle(a, s, &p).unwrap() - PI / 2.0).abs() < 1e-9);
            }
        }
    }

    let run = inversive(&["steiner-figure", "--a1", "1,1", "--a2", "1,1"]);
    assert!(!run.status.success());
    assert!(String::from_utf8_lossy(&run.stderr).contains("CoincidentPoints"));
}
