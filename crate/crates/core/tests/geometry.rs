use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI, SQRT_2, TAU};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use inversive_core::clifford::{
    canonical_lines, canonical_projection_implicit, commute_projection_check, projected_residual, sample_torus,
    symmetry_lines, verify_lines, verify_symmetry, ProjectedTorus, Verdict, VerifyConfig,
};
use inversive_core::inversive::{invert, reflect_in, SymmetryLine};
use inversive_core::rotations::{decompose_so4, rotation_path};
use inversive_core::sampling::{random_rotation, random_unit_vector, random_vector};
use inversive_core::stereographic::{
    inverse_s3, plane3_to_image, plane4_to_image, project_s3, Hyperplane, Sphere, SphereOrPlane,
};
use inversive_core::{Execution, Rotation, Vector};

fn rng() -> StdRng {
    StdRng::seed_from_u64(0x51ab)
}

fn block_rotation(rng: &mut StdRng) -> Rotation<4> {
    let r3: Rotation<3> = random_rotation(rng);
    Rotation::trivial_extension(&r3, &[1, 2, 3]).unwrap()
}

/// Least-squares sphere fit through samples: solves `|p|² = 2 c·p + k`.
fn fit_sphere(points: &[Vector<3>]) -> (Vector<3>, f64) {
    let mut ata = [[0.0; 4]; 4];
    let mut atb = [0.0; 4];
    for p in points {
        let row = [2.0 * p[0], 2.0 * p[1], 2.0 * p[2], 1.0];
        for i in 0..4 {
            for j in 0..4 {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i] * p.norm_squared();
        }
    }
    // Gaussian elimination with partial pivoting.
    for col in 0..4 {
        let piv = (col..4)
            .max_by(|&a, &b| ata[a][col].abs().total_cmp(&ata[b][col].abs()))
            .unwrap();
        ata.swap(col, piv);
        atb.swap(col, piv);
        let (pivot_row, pivot_rhs) = (ata[col], atb[col]);
        for r in col + 1..4 {
            let f = ata[r][col] / pivot_row[col];
            for (x, p) in ata[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * p;
            }
            atb[r] -= f * pivot_rhs;
        }
    }
    let mut x = [0.0; 4];
    for r in (0..4).rev() {
        let s: f64 = (r + 1..4).map(|c| ata[r][c] * x[c]).sum();
        x[r] = (atb[r] - s) / ata[r][r];
    }
    let c = Vector::new([x[0], x[1], x[2]]);
    (c, (x[3] + c.norm_squared()).sqrt())
}

fn sphere_samples(s: &Sphere<3>, rng: &mut StdRng, n: usize) -> Vec<Vector<3>> {
    (0..n)
        .map(|_| s.center + random_unit_vector::<3, _>(rng) * s.radius)
        .collect()
}

#[test]
fn inversion_maps_spheres_to_spheres() {
    let mut rng = rng();
    for _ in 0..50 {
        let inv = Sphere::new(random_vector(&mut rng, 2.0), rng.gen_range(0.5..2.0)).unwrap();
        let s = Sphere::new(random_vector(&mut rng, 3.0), rng.gen_range(0.2..1.5)).unwrap();
        if s.residual(&inv.center).abs() < 0.2 {
            continue;
        }
        let images: Vec<_> = sphere_samples(&s, &mut rng, 64)
            .iter()
            .map(|p| invert(p, &inv).unwrap())
            .collect();
        let (c, r) = fit_sphere(&images);
        for q in &images {
            assert!((q.distance(&c) - r).abs() < 1e-8);
        }
    }
}

#[test]
fn orthogonal_spheres_are_preserved() {
    let mut rng = rng();
    for _ in 0..100 {
        let s = Sphere::new(random_vector(&mut rng, 2.0), rng.gen_range(0.5..2.0)).unwrap();
        // A sphere centered at distance d > ρ with radius √(d² - ρ²) is orthogonal to s.
        let d = s.radius * rng.gen_range(1.05..4.0);
        let c = s.center + random_unit_vector::<3, _>(&mut rng) * d;
        let other = Sphere::new(c, (d * d - s.radius * s.radius).sqrt()).unwrap();
        for p in sphere_samples(&other, &mut rng, 32) {
            let q = invert(&p, &s).unwrap();
            assert!(other.residual(&q).abs() < 1e-9);
        }
    }
}

#[test]
fn projected_hyperplane_sections_lie_on_image() {
    let mut rng = rng();
    for _ in 0..100 {
        let n: Vector<4> = random_unit_vector(&mut rng);
        let h = Hyperplane::new(n, rng.gen_range(-0.9..0.9)).unwrap();
        let section = h.unit_sphere_section().unwrap();
        let image = plane4_to_image(&h).unwrap();
        for _ in 0..50 {
            let u: Vector<3> = random_unit_vector(&mut rng);
            let x = section.point(u.components());
            assert!((x.norm() - 1.0).abs() < 1e-12 && h.distance(&x) < 1e-12);
            if let Ok(p) = project_s3(&x) {
                if p.norm() < 1e4 {
                    assert!(image.residual(&p) < 1e-10 * (1.0 + p.norm()));
                }
            }
        }
    }
}

#[test]
fn plane_image_center_is_projected_cone_point() {
    let mut rng = rng();
    for _ in 0..100 {
        let n: Vector<3> = random_unit_vector(&mut rng);
        let e = rng.gen_range(0.05..0.95) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let plane = Hyperplane::new(n, e).unwrap();
        let Ok(SphereOrPlane::Sphere(c)) = plane3_to_image(&plane) else {
            continue;
        };
        let cone = inversive_core::stereographic::cone_point(&plane).unwrap();
        if (1.0 - cone[2]).abs() < 1e-6 {
            continue;
        }
        let center = inversive_core::stereographic::extended_project(&cone).unwrap();
        assert!(center.distance(&c.center) < 1e-9 * (1.0 + center.norm()));
    }
}

#[test]
fn canonical_surface_is_rotationally_symmetric() {
    let mut rng = rng();
    let cloud = ProjectedTorus::new(&Rotation::identity(), 40, 40, Execution::Sequential)
        .unwrap()
        .samples();
    for _ in 0..10 {
        let rz = Rotation::<3>::elementary(1, 2, rng.gen_range(0.0..TAU)).unwrap();
        for p in &cloud {
            assert!(canonical_projection_implicit(&rz.apply(p)).unwrap().abs() < 1e-10);
        }
    }
}

#[test]
fn xz_slice_is_two_circles() {
    let cloud = ProjectedTorus::new(&Rotation::identity(), 64, 64, Execution::Sequential)
        .unwrap()
        .samples();
    let mut seen = 0;
    for p in cloud.iter().filter(|p| p[1].abs() < 1e-12) {
        let (x, z) = (p[0], p[2]);
        let r = ((x - SQRT_2).powi(2) + z * z - 1.0)
            .abs()
            .min(((x + SQRT_2).powi(2) + z * z - 1.0).abs());
        assert!(r < 1e-8);
        seen += 1;
    }
    assert!(seen > 0);
}

#[test]
fn projection_commutes_with_block_rotations() {
    let mut rng = rng();
    let points: Vec<Vector<4>> = (0..500).map(|_| random_unit_vector(&mut rng)).collect();
    for _ in 0..10 {
        let r0 = block_rotation(&mut rng);
        assert!(commute_projection_check(&r0, &points).unwrap() < 1e-12 * 1e3);
    }
    let tame: Vec<Vector<4>> = points.into_iter().filter(|p| p[3] < 0.9).collect();
    let r0 = block_rotation(&mut rng);
    assert!(commute_projection_check(&r0, &tame).unwrap() < 1e-12);
}

#[test]
fn lines_follow_block_rotation() {
    let mut rng = rng();
    for _ in 0..20 {
        let r0 = block_rotation(&mut rng);
        let psi = rng.gen_range(0.05..1.5);
        let r = r0 * Rotation::elementary(1, 4, psi).unwrap();
        let block = r0.block3();
        let direct: Vec<SymmetryLine> = canonical_lines(psi)
            .iter()
            .map(|l| l.transformed(|v| block.apply(v)))
            .collect();
        let computed = symmetry_lines(&r).unwrap();
        assert_eq!(direct.len(), computed.len());
        for (a, b) in direct.iter().zip(&computed) {
            // Same line, same base point, same reference distance; direction up to sign.
            assert!(a.base.distance(&b.base) < 1e-10);
            assert!((a.rho0 - b.rho0).abs() < 1e-10);
            assert!((a.direction.dot(&b.direction).abs() - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn pi_over_8_certificate_matches_implicit_oracle() {
    let r = Rotation::elementary(1, 4, FRAC_PI_8).unwrap();
    let cert = verify_symmetry(&r, &VerifyConfig::default()).unwrap();
    assert_eq!(cert.verdict, Verdict::Pass);
    assert_eq!(cert.lines.len(), 2);
    assert_eq!(cert.rows.len(), 22);

    // Undo the xw rotation by hand: pull back to S³, rotate back, project, and
    // test the closed form of the canonical surface.
    let cloud = ProjectedTorus::new(&r, 48, 48, Execution::Sequential)
        .unwrap()
        .samples();
    let back = Rotation::elementary(1, 4, -FRAC_PI_8).unwrap();
    for line in &cert.lines {
        for t in [-2.0, 0.5, 3.0] {
            let s = line.sphere_at_parameter(t);
            for p in &cloud {
                if p.distance(&s.center) < 1e-3 {
                    continue;
                }
                let image = invert(p, &s).unwrap();
                let Ok(q) = project_s3(&back.apply(&inverse_s3(&image))) else {
                    continue;
                };
                if q[0].hypot(q[1]) < 1e-6 || q.norm() > 1e3 {
                    continue;
                }
                assert!(canonical_projection_implicit(&q).unwrap().abs() < 1e-8 * (1.0 + q.norm_squared()));
            }
        }
    }
}

#[test]
fn negative_controls_fail() {
    let r = Rotation::elementary(1, 4, FRAC_PI_8).unwrap();
    let config = VerifyConfig::default();
    let lines = symmetry_lines(&r).unwrap();
    let widened: Vec<_> = lines
        .iter()
        .map(|l| SymmetryLine {
            rho0: l.rho0 + 0.1,
            ..*l
        })
        .collect();
    let cert = verify_lines(&r, &widened, &config).unwrap();
    assert_eq!(cert.verdict, Verdict::Fail);
    assert!(cert.max_residual() > 1e-3);

    let shifted: Vec<_> = lines
        .iter()
        .map(|l| {
            let off = if l.direction[1].abs() < 0.5 {
                Vector::new([0.0, 0.1, 0.0])
            } else {
                Vector::new([0.0, 0.0, 0.1])
            };
            SymmetryLine {
                base: l.base + off,
                ..*l
            }
        })
        .collect();
    let cert = verify_lines(&r, &shifted, &config).unwrap();
    assert_eq!(cert.verdict, Verdict::Fail);
    assert!(cert.max_residual() > 1e-3);
}

#[test]
fn preset_angles_certify() {
    for psi in [0.0, FRAC_PI_8, FRAC_PI_4, 3.0 * FRAC_PI_8, FRAC_PI_2, -0.7, 2.5] {
        let r = Rotation::elementary(1, 4, psi).unwrap();
        let cert = verify_symmetry(&r, &VerifyConfig::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass, "psi {psi}: {}", cert.max_residual());
    }
}

#[test]
fn canonical_lines_certify_for_negative_angles() {
    // Lines taken directly from canonical_lines for ψ outside [0, π/2].
    for psi in [-1.2, -0.3, 2.0, 4.0] {
        let r = Rotation::elementary(1, 4, psi).unwrap();
        let config = VerifyConfig {
            n_alpha: 32,
            n_beta: 32,
            ..VerifyConfig::default()
        };
        let cert = verify_lines(&r, &canonical_lines(psi), &config).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass, "psi {psi}: {}", cert.max_residual());
    }
}

#[test]
fn certificate_independent_of_execution() {
    let mut rng = rng();
    let r: Rotation<4> = random_rotation(&mut rng);
    let seq = VerifyConfig {
        execution: Execution::Sequential,
        ..VerifyConfig::default()
    };
    let par = VerifyConfig {
        execution: Execution::Parallel,
        ..VerifyConfig::default()
    };
    assert_eq!(verify_symmetry(&r, &seq).unwrap(), verify_symmetry(&r, &par).unwrap());
}

#[test]
fn decomposition_psi_drives_residual_pullback() {
    let mut rng = rng();
    for _ in 0..20 {
        let r: Rotation<4> = random_rotation(&mut rng);
        let d = decompose_so4(&r).unwrap();
        // Torus samples mapped by R land on π ∘ R(𝒞) and also on R0 ∘ π ∘ R^{xw}_ψ(𝒞).
        let canon = Rotation::elementary(1, 4, d.psi).unwrap();
        let block = d.r0_block();
        for t in sample_torus(16, 16).unwrap() {
            let Ok(p) = project_s3(&r.apply(&t.point)) else {
                continue;
            };
            assert!(projected_residual(&p, &r) < 1e-10 * (1.0 + p.norm_squared()));
            let unrotated = block.inverse().apply(&p);
            assert!(projected_residual(&unrotated, &canon) < 1e-9 * (1.0 + p.norm_squared()));
        }
    }
}

#[test]
fn steiner_two_point_form_matches_line_form() {
    use inversive_core::inversive::{steiner_circles, SteinerPair};
    let pair = SteinerPair::new(Vector::new([-1.0, 0.5]), Vector::new([2.0, 1.5])).unwrap();
    let line = SymmetryLine::from_steiner_pair(&pair);
    let family = steiner_circles(&pair, 9).unwrap();
    for circle in family.iter().filter_map(|c| c.as_sphere()) {
        let c3 = Vector::new([circle.center[0], circle.center[1], 0.0]);
        let from_line = inversive_core::inversive::symmetry_sphere_at(&line, &c3).unwrap();
        assert!((from_line.radius - circle.radius).abs() < 1e-12);
    }
    // Reflection in the line member of the family is the mirror in that line.
    let mirror = family.last().unwrap();
    let p = Vector::new([0.3, -2.0]);
    let q = reflect_in(&p, mirror).unwrap();
    assert!((mirror.residual(&p) - mirror.residual(&q)).abs() < 1e-12);
    assert!(reflect_in(&q, mirror).unwrap().distance(&p) < 1e-12);
}

#[test]
fn rotation_paths_compose_to_roots() {
    let mut rng = rng();
    for _ in 0..50 {
        let r: Rotation<4> = random_rotation(&mut rng);
        for m in [2usize, 3, 7] {
            let step = rotation_path(&r, 1.0 / m as f64).unwrap();
            let mut acc = Rotation::identity();
            for _ in 0..m {
                acc = acc * step;
            }
            assert!(acc.max_abs_diff(&r) < 1e-9);
        }
        assert!(rotation_path(&r, 0.0).unwrap().max_abs_diff(&Rotation::identity()) < 1e-12);
    }
    let half_turn = Rotation::<3>::elementary(1, 2, PI).unwrap();
    let q = rotation_path(&half_turn, 0.5).unwrap();
    assert!((q * q).max_abs_diff(&half_turn) < 1e-12);
}
