//! Deterministic SVG rendering of an embedding.
//!
//! Output is a pure function of its inputs: nodes and edges are written in
//! lattice order with fixed-precision coordinates, so identical inputs give
//! byte-identical documents.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::embed::Embedding;
use crate::lattice::SonLattice;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SvgStyle {
    pub width: u32,
    pub margin: f64,
    pub node_radius: f64,
    pub draw_edges: bool,
    pub node_color: String,
    pub edge_color: String,
    pub highlight_color: String,
    pub background: String,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle {
            width: 800,
            margin: 24.0,
            node_radius: 3.0,
            draw_edges: true,
            node_color: "#1f3552".to_string(),
            edge_color: "#b9c4d4".to_string(),
            highlight_color: "#c0392b".to_string(),
            background: "#ffffff".to_string(),
        }
    }
}

/// Renders the embedding. `highlight` holds node indices drawn in the
/// highlight color (a verified sub-development, typically).
pub fn render_svg(
    lattice: &SonLattice,
    embedding: &Embedding,
    style: &SvgStyle,
    highlight: &[u32],
) -> String {
    let (min, max) = bounds(&embedding.positions);
    let span_x = (max[0] - min[0]).max(1e-9);
    let span_y = (max[1] - min[1]).max(1e-9);
    let inner = style.width as f64 - 2.0 * style.margin;
    let scale = inner / span_x.max(span_y);
    let height = span_y * scale + 2.0 * style.margin;

    let project = |p: &[f64; 2]| -> (f64, f64) {
        let x = style.margin + (p[0] - min[0]) * scale;
        // SVG y grows downward
        let y = style.margin + (max[1] - p[1]) * scale;
        (x, y)
    };

    let highlighted: HashSet<u32> = highlight.iter().copied().collect();

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{:.2}" viewBox="0 0 {} {:.2}" data-schema-version="{}" data-seed="{}">"#,
        style.width,
        height,
        style.width,
        height,
        crate::SCHEMA_VERSION,
        embedding.seed,
    );
    let _ = writeln!(
        out,
        r#"<rect width="100%" height="100%" fill="{}"/>"#,
        style.background
    );

    if style.draw_edges {
        let _ = writeln!(
            out,
            r#"<g stroke="{}" stroke-width="0.75" fill="none">"#,
            style.edge_color
        );
        for &(u, v) in lattice.edges() {
            let (x1, y1) = project(&embedding.positions[u as usize]);
            let (x2, y2) = project(&embedding.positions[v as usize]);
            let _ = writeln!(
                out,
                r#"<line x1="{x1:.4}" y1="{y1:.4}" x2="{x2:.4}" y2="{y2:.4}"/>"#
            );
        }
        let _ = writeln!(out, "</g>");
    }

    let _ = writeln!(out, r#"<g stroke="none">"#);
    for (idx, p) in embedding.positions.iter().enumerate() {
        let (cx, cy) = project(p);
        let fill = if highlighted.contains(&(idx as u32)) {
            &style.highlight_color
        } else {
            &style.node_color
        };
        let _ = writeln!(
            out,
            r#"<circle cx="{cx:.4}" cy="{cy:.4}" r="{:.2}" fill="{fill}"/>"#,
            style.node_radius
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    out
}

fn bounds(points: &[[f64; 2]]) -> ([f64; 2], [f64; 2]) {
    let mut min = [f64::INFINITY, f64::INFINITY];
    let mut max = [f64::NEG_INFINITY, f64::NEG_INFINITY];
    for p in points {
        min[0] = min[0].min(p[0]);
        min[1] = min[1].min(p[1]);
        max[0] = max[0].max(p[0]);
        max[1] = max[1].max(p[1]);
    }
    if points.is_empty() {
        return ([0.0, 0.0], [1.0, 1.0]);
    }
    (min, max)
}
