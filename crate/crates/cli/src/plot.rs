//! Geometry-only SVG and CSV for the boundary curves of Ω(α).

use std::fmt::Write;

use num_complex::Complex64;

use crate::output::{num, Table};

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
const SIZE: f64 = 600.0;

pub struct Curves {
    pub alpha: f64,
    pub polylines: Vec<Vec<Complex64>>,
}

pub fn svg(curves: &[Curves]) -> String {
    let extent = curves
        .iter()
        .flat_map(|c| c.polylines.iter().flatten())
        .fold(0.0f64, |m, w| m.max(w.re.abs()).max(w.im.abs()))
        .max(1e-9)
        * 1.1;
    let scale = SIZE / (2.0 * extent);
    let map = |w: &Complex64| ((w.re + extent) * scale, (extent - w.im) * scale);

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    let mid = SIZE / 2.0;
    writeln!(
        out,
        r##"<g stroke="#999999" stroke-width="0.5"><line x1="0" y1="{mid}" x2="{SIZE}" y2="{mid}"/><line x1="{mid}" y1="0" x2="{mid}" y2="{SIZE}"/></g>"##
    )
    .unwrap();
    for (i, c) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        writeln!(out, r#"<g fill="none" stroke="{color}" stroke-width="1.5" data-alpha="{}">"#, c.alpha).unwrap();
        for line in &c.polylines {
            let pts: Vec<String> = line
                .iter()
                .map(|w| {
                    let (x, y) = map(w);
                    format!("{x:.3},{y:.3}")
                })
                .collect();
            writeln!(out, r#"<polyline points="{}"/>"#, pts.join(" ")).unwrap();
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

/// Columns: alpha, curve, index, x, y.
pub fn csv(curves: &[Curves]) -> String {
    let mut t = Table::new(&["alpha", "curve", "index", "x", "y"]);
    for c in curves {
        for (j, line) in c.polylines.iter().enumerate() {
            for (k, w) in line.iter().enumerate() {
                t.row(&[num(c.alpha), j.to_string(), k.to_string(), num(w.re), num(w.im)]);
            }
        }
    }
    t.finish()
}
