//! Text output formats: polygon mesh, SVG figure, CSV table.
//!
//! Floats are written with `{:.16e}` (17 significant digits) so identical
//! inputs give byte-identical files.

use std::fmt::Write as _;

use inversive_core::clifford::ProjectedTorus;
use inversive_core::inversive::{SteinerPair, SymmetryLine};
use inversive_core::stereographic::{CircleOrLine, Sphere, SphereOrPlane};
use inversive_core::Vector;

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// `v`/`f` mesh of the projected torus grid.
///
/// Quads join `(i, j)`, `(i+1, j)`, `(i+1, j+1)`, `(i, j+1)` with wrap-around;
/// quads touching an excluded vertex are dropped and indices are compacted.
/// Each line in `lines` adds two `v` records at `t = ±span` and an `l` record.
pub fn torus_mesh(torus: &ProjectedTorus, header: &[String], lines: &[SymmetryLine], span: f64) -> String {
    let mut out = String::new();
    for h in header {
        let _ = writeln!(out, "# {h}");
    }
    let mut index = vec![0usize; torus.grid.len()];
    let mut next = 1;
    for (slot, p) in index.iter_mut().zip(&torus.grid) {
        if let Some(p) = p {
            let _ = writeln!(out, "v {} {} {}", num(p[0]), num(p[1]), num(p[2]));
            *slot = next;
            next += 1;
        }
    }
    let (na, nb) = (torus.n_alpha, torus.n_beta);
    for i in 0..na {
        for j in 0..nb {
            let corners = [
                (i, j),
                ((i + 1) % na, j),
                ((i + 1) % na, (j + 1) % nb),
                (i, (j + 1) % nb),
            ];
            let ids: Vec<usize> = corners.iter().map(|&(a, b)| index[a * nb + b]).collect();
            if ids.iter().all(|&k| k > 0) {
                let _ = writeln!(out, "f {} {} {} {}", ids[0], ids[1], ids[2], ids[3]);
            }
        }
    }
    for line in lines {
        for t in [-span, span] {
            let p = line.point_at(t);
            let _ = writeln!(out, "v {} {} {}", num(p[0]), num(p[1]), num(p[2]));
        }
        let _ = writeln!(out, "l {} {}", next, next + 1);
        next += 2;
    }
    out
}

/// Half-width of the SVG viewBox.
pub const VIEW: f64 = 5.0;

/// Far-away extent used when drawing straight lines before clipping.
const LINE_EXTENT: f64 = 100.0;

fn svg_segment(out: &mut String, p: Vector<2>, d: Vector<2>, class: &str) {
    let (a, b) = (p - d * LINE_EXTENT, p + d * LINE_EXTENT);
    let _ = writeln!(
        out,
        "    <line class=\"{class}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
        num(a[0]),
        num(a[1]),
        num(b[0]),
        num(b[1])
    );
}

fn svg_circle(out: &mut String, c: &Sphere<2>, class: &str) {
    let _ = writeln!(
        out,
        "    <circle class=\"{class}\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
        num(c.center[0]),
        num(c.center[1]),
        num(c.radius)
    );
}

/// SVG 1.1 figure of both families, the line of centers and the two points.
pub fn steiner_svg(pair: &SteinerPair, steiner: &[CircleOrLine], apollonius: &[Sphere<2>]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"600\" height=\"600\" viewBox=\"{} {} {} {}\">",
        -VIEW,
        -VIEW,
        2.0 * VIEW,
        2.0 * VIEW
    );
    let _ = writeln!(
        out,
        "  <defs><clipPath id=\"view\"><rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/></clipPath></defs>",
        -VIEW,
        -VIEW,
        2.0 * VIEW,
        2.0 * VIEW
    );
    let _ = writeln!(
        out,
        "  <style>.steiner{{fill:none;stroke:#1f5fbf;stroke-width:0.02}} .apollonius{{fill:none;stroke:#bf3f1f;stroke-width:0.02}} .centers{{stroke:#444;stroke-width:0.015;stroke-dasharray:0.1 0.08}} .point{{fill:#000}}</style>"
    );
    let _ = writeln!(out, "  <g clip-path=\"url(#view)\" transform=\"scale(1,-1)\">");
    for s in steiner {
        match s {
            SphereOrPlane::Sphere(c) => svg_circle(&mut out, c, "steiner"),
            SphereOrPlane::Plane(_) => svg_segment(&mut out, pair.midpoint(), pair.axis(), "steiner"),
        }
    }
    for c in apollonius {
        svg_circle(&mut out, c, "apollonius");
    }
    svg_segment(&mut out, pair.midpoint(), pair.perpendicular(), "centers");
    for p in [pair.a1(), pair.a2()] {
        let _ = writeln!(
            out,
            "    <circle class=\"point\" cx=\"{}\" cy=\"{}\" r=\"0.05\"/>",
            num(p[0]),
            num(p[1])
        );
    }
    let _ = writeln!(out, "  </g>");
    let _ = writeln!(out, "</svg>");
    out
}

/// `family,center_x,center_y,radius`. The line through the pair is written
/// last with its midpoint as center and radius `inf`.
pub fn steiner_csv(pair: &SteinerPair, steiner: &[CircleOrLine], apollonius: &[Sphere<2>]) -> String {
    let mut out = String::from("family,center_x,center_y,radius\n");
    let mut line_rows = Vec::new();
    for s in steiner {
        match s {
            SphereOrPlane::Sphere(c) => {
                let _ = writeln!(
                    out,
                    "steiner,{},{},{}",
                    num(c.center[0]),
                    num(c.center[1]),
                    num(c.radius)
                );
            }
            SphereOrPlane::Plane(_) => {
                let m = pair.midpoint();
                line_rows.push(format!("line,{},{},inf", num(m[0]), num(m[1])));
            }
        }
    }
    for c in apollonius {
        let _ = writeln!(
            out,
            "apollonius,{},{},{}",
            num(c.center[0]),
            num(c.center[1]),
            num(c.radius)
        );
    }
    for row in line_rows {
        let _ = writeln!(out, "{row}");
    }
    out
}
