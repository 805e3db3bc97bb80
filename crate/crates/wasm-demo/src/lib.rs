//! Browser front end: analyze a named graph, draw its inclusion diagram and
//! run the identity checks. The `*_impl` functions hold the logic so they
//! can be tested natively; the exported wrappers only convert errors.

use std::fmt::Write as _;

use bmlattice::report::analyze_scheme;
use bmlattice::verify::{self, GroupFilter};
use bmlattice::{AnalyzeOptions, LatticeReport, NamedGraph, Scheme, Tolerances};
use wasm_bindgen::prelude::*;

/// Demo graphs are dense matrices in the browser, keep them small.
const DEMO_VERTEX_CAP: usize = 128;

fn scheme(graph: &str) -> Result<(Scheme, String), String> {
    let named: NamedGraph = graph.trim().parse().map_err(|e: bmlattice::Error| e.to_string())?;
    let g = named.build().map_err(|e| e.to_string())?;
    if g.n() > DEMO_VERTEX_CAP {
        return Err(format!("{} has {} vertices; the demo stops at {DEMO_VERTEX_CAP}", named, g.n()));
    }
    let s = Scheme::new(g, Tolerances::default()).map_err(|e| e.to_string())?;
    Ok((s, named.to_string()))
}

fn report(graph: &str, vertex: usize, probe: bool) -> Result<LatticeReport, String> {
    let (s, name) = scheme(graph)?;
    let opts = AnalyzeOptions { vertex, probe, ..AnalyzeOptions::default() };
    analyze_scheme(&s, &name, &opts).map_err(|e| e.to_string())
}

pub fn analyze_impl(graph: &str, vertex: usize, probe: bool) -> Result<String, String> {
    report(graph, vertex, probe).map(|r| r.to_json())
}

pub fn lattice_svg_impl(graph: &str, vertex: usize, probe: bool) -> Result<String, String> {
    report(graph, vertex, probe).map(|r| render_svg(&r))
}

pub fn verify_impl(graph: &str, vertex: usize, groups: &str) -> Result<String, String> {
    let filter: GroupFilter = groups.trim().parse()?;
    let (s, name) = scheme(graph)?;
    let da = s.dual(vertex).map_err(|e| e.to_string())?;
    let mut out = format!("# {name}, base vertex {vertex}, groups {filter}\n");
    for v in verify::run(&s, &da, &filter, &Tolerances::default()) {
        let _ = writeln!(out, "{v}");
    }
    Ok(out)
}

/// Full report as JSON.
#[wasm_bindgen]
pub fn analyze(graph: &str, vertex: usize, probe: bool) -> Result<String, JsValue> {
    analyze_impl(graph, vertex, probe).map_err(|e| JsValue::from_str(&e))
}

/// Inclusion diagram as an SVG document.
#[wasm_bindgen]
pub fn lattice_svg(graph: &str, vertex: usize, probe: bool) -> Result<String, JsValue> {
    lattice_svg_impl(graph, vertex, probe).map_err(|e| JsValue::from_str(&e))
}

/// One line per identity group, PASS/FAIL with the worst residual.
#[wasm_bindgen]
pub fn verify_identities(graph: &str, vertex: usize, groups: &str) -> Result<String, JsValue> {
    verify_impl(graph, vertex, groups).map_err(|e| JsValue::from_str(&e))
}

// column (0 = left, 1 = centre, 2 = right) and row from the bottom
fn position(name: &str) -> Option<(u32, u32)> {
    Some(match name {
        "ℂI" => (1, 0),
        "M∩M*" => (1, 1),
        "M" => (0, 2),
        "M*" => (2, 2),
        "M+M*" => (1, 3),
        "MM*∩M*M" => (1, 4),
        "MM*" => (0, 5),
        "M*M" => (2, 5),
        "MM*+M*M" => (1, 6),
        "MM*M∩M*MM*" => (1, 7),
        "MM*M" => (0, 8),
        "M*MM*" => (2, 8),
        "MM*M+M*MM*" => (1, 9),
        "T" => (1, 10),
        _ => return None,
    })
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render_svg(r: &LatticeReport) -> String {
    let mut nodes: Vec<(String, usize)> = vec![("ℂI".into(), 1)];
    nodes.extend(r.nodes.iter().map(|n| (n.name.clone(), n.dim)));
    let mut edges: Vec<(String, String, usize, bool)> = vec![("ℂI".into(), "M∩M*".into(), 0, false)];
    edges.extend(r.edges.iter().map(|e| (e.lower.clone(), e.upper.clone(), e.complement_dim, false)));
    if let Some(p) = &r.probe {
        let top = r.nodes.last().map_or(0, |n| n.dim);
        nodes.extend([
            ("MM*M∩M*MM*".to_string(), p.cap),
            ("MM*M".to_string(), p.m_mstar_m),
            ("M*MM*".to_string(), p.mstar_m_mstar),
            ("MM*M+M*MM*".to_string(), p.sum),
            ("T".to_string(), p.t_dim),
        ]);
        let d = |a: usize, b: usize| a.saturating_sub(b);
        edges.extend([
            ("MM*+M*M".into(), "MM*M∩M*MM*".into(), d(p.cap, top), true),
            ("MM*M∩M*MM*".into(), "MM*M".into(), d(p.m_mstar_m, p.cap), true),
            ("MM*M∩M*MM*".into(), "M*MM*".into(), d(p.mstar_m_mstar, p.cap), true),
            ("MM*M".into(), "MM*M+M*MM*".into(), d(p.sum, p.m_mstar_m), true),
            ("M*MM*".into(), "MM*M+M*MM*".into(), d(p.sum, p.mstar_m_mstar), true),
            ("MM*M+M*MM*".into(), "T".into(), d(p.t_dim, p.sum), true),
        ]);
    }
    let rows = nodes.iter().filter_map(|(n, _)| position(n)).map(|p| p.1).max().unwrap_or(0) + 1;
    let (w, dy) = (420.0, 64.0);
    let h = dy * rows as f64 + 20.0;
    let xy = |name: &str| {
        position(name).map(|(c, row)| (70.0 + 140.0 * c as f64, h - 30.0 - dy * row as f64))
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    for (lo, hi, dim, probe) in &edges {
        if let (Some((x1, y1)), Some((x2, y2))) = (xy(lo), xy(hi)) {
            let dash = if *probe { r#" stroke-dasharray="4 3""# } else { "" };
            let _ = writeln!(out, r##"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#888"{dash}/>"##);
            let (mx, my) = ((x1 + x2) / 2.0, (y1 + y2) / 2.0);
            let _ = writeln!(out, r##"<text x="{}" y="{my}" fill="#a33" font-size="10">⊥{dim}</text>"##, mx + 4.0);
        }
    }
    for (name, dim) in &nodes {
        if let Some((x, y)) = xy(name) {
            let _ = writeln!(
                out,
                r#"<g><rect x="{}" y="{}" width="104" height="30" rx="4" fill="white" stroke="black"/><text x="{x}" y="{}" text-anchor="middle">{} · {dim}</text></g>"#,
                x - 52.0,
                y - 15.0,
                y + 4.0,
                escape(name)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
