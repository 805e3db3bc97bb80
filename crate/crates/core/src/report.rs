//! One-call analysis and its text, JSON and DOT renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lattice::{
    self, build_lattice, check_primitivity, classify_pairs, edge_descriptor, NodeId, PairClass, ProbeResult,
    DEFAULT_PROBE_DEPTH,
};
use crate::scheme::Scheme;
use crate::tol::Tolerances;
use crate::verdict::Verdict;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub vertex: usize,
    /// Tolerances applied to the reported verdicts. Construction of the
    /// algebras always uses the defaults (or this, if looser).
    pub tol: Tolerances,
    pub probe: bool,
    pub probe_depth: usize,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { vertex: 0, tol: Tolerances::default(), probe: false, probe_depth: DEFAULT_PROBE_DEPTH }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub name: String,
    pub n: usize,
    pub diameter: usize,
    pub valency: u64,
    pub b: Vec<u64>,
    pub c: Vec<u64>,
    pub a: Vec<u64>,
    pub k: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub theta: Vec<f64>,
    pub multiplicities: Vec<u64>,
    /// `u[i][j] = u_i(θ_j)`
    pub u: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSummary {
    pub p: usize,
    pub table: Vec<Vec<PairClass>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimitivitySummary {
    pub primitive: bool,
    pub disconnected_distances: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeSummary {
    pub name: String,
    pub dim: usize,
    pub numeric_dim: usize,
    pub basis_size: usize,
    pub basis: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeSummary {
    pub lower: String,
    pub upper: String,
    pub complement_dim: usize,
    pub numeric_dim: Option<usize>,
    pub basis_size: usize,
    pub basis: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub schema: u32,
    pub graph: GraphSummary,
    pub base_vertex: usize,
    pub spectrum: SpectrumSummary,
    pub pair_classification: PairSummary,
    pub primitivity: Option<PrimitivitySummary>,
    pub nodes: Vec<NodeSummary>,
    pub edges: Vec<EdgeSummary>,
    pub probe: Option<ProbeResult>,
    pub verdicts: Vec<Verdict>,
}

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn scheme_tolerances(user: &Tolerances) -> Tolerances {
    let mut t = Tolerances::default();
    if user.residual > t.residual {
        t.residual = user.residual;
    }
    t
}

/// Runs the whole pipeline for one base vertex.
pub fn analyze(graph: &Graph, name: &str, opts: &AnalyzeOptions) -> Result<LatticeReport> {
    let scheme = Scheme::new(graph.clone(), scheme_tolerances(&opts.tol))?;
    analyze_scheme(&scheme, name, opts)
}

/// As [`analyze`], reusing an already built scheme.
pub fn analyze_scheme(scheme: &Scheme, name: &str, opts: &AnalyzeOptions) -> Result<LatticeReport> {
    let tol = &opts.tol;
    let da = scheme.dual(opts.vertex)?;
    let pc = classify_pairs(&scheme.spec, &scheme.tol)?;
    let mut verdicts = Vec::new();

    verdicts.push(Verdict::residual(
        "A_iA_j = Σ_h p^h_ij A_h (exact)",
        crate::bm::product_law_error(&scheme.bm.a_int, &scheme.ia) as f64,
        0.0,
    ));
    let primitivity = match check_primitivity(&scheme.graph, &pc) {
        Ok(pr) => {
            verdicts.push(Verdict::flag(
                "P = 0 iff primitive",
                true,
                format!("P = {}, primitive = {}", pc.p, pr.primitive),
            ));
            Some(PrimitivitySummary { primitive: pr.primitive, disconnected_distances: pr.disconnected })
        }
        Err(e @ Error::PrimitivityMismatch { .. }) => {
            verdicts.push(Verdict::failed("P = 0 iff primitive", e.to_string()));
            None
        }
        Err(e) => return Err(e),
    };

    let lat = build_lattice(scheme, &da, &pc, tol)?;
    verdicts.extend(lat.verdicts.iter().cloned());

    let prods = lattice::MixedProducts::new(scheme, &da);
    let d = scheme.diameter();
    let mut worst = 0.0f64;
    for i in 0..=d {
        for j in 0..=d {
            worst = worst.max(lattice::gram_h(scheme, &prods, i, j).residual());
        }
    }
    verdicts.push(Verdict::residual("Gram matrices H_ij, determinants and ± norms", worst, tol.residual));

    let probe = if opts.probe {
        let pr = lattice::probe_upper(scheme, &da, &lat, opts.probe_depth, tol)?;
        verdicts.extend(pr.verdicts.iter().cloned());
        Some(ProbeResult { containment_residual: sig12(pr.containment_residual), ..pr })
    } else {
        None
    };

    let ia = &scheme.ia;
    let spec = &scheme.spec;
    let nodes = lat
        .nodes
        .iter()
        .map(|n| NodeSummary {
            name: n.id.label().to_string(),
            dim: n.closed_dim,
            numeric_dim: n.numeric.dim(),
            basis_size: n.closed.dim(),
            basis: n.id.basis_descriptor().to_string(),
        })
        .collect();
    let edges = lat
        .edges
        .iter()
        .map(|e| EdgeSummary {
            lower: e.lower.label().to_string(),
            upper: e.upper.label().to_string(),
            complement_dim: e.closed_dim,
            numeric_dim: e.numeric.as_ref().map(|s| s.dim()),
            basis_size: e.complement.dim(),
            basis: edge_descriptor(e.lower, e.upper).to_string(),
        })
        .collect();

    Ok(LatticeReport {
        schema: SCHEMA_VERSION,
        graph: GraphSummary {
            name: name.to_string(),
            n: scheme.n(),
            diameter: d,
            valency: ia.valency(),
            b: (0..d).map(|i| ia.b_at(i)).collect(),
            c: (1..=d).map(|i| ia.c_at(i)).collect(),
            a: ia.a.clone(),
            k: ia.k.clone(),
        },
        base_vertex: opts.vertex,
        spectrum: SpectrumSummary {
            theta: spec.theta.iter().map(|&t| sig12(t)).collect(),
            multiplicities: spec.m.clone(),
            u: spec.u.iter().map(|row| row.iter().map(|&v| sig12(v)).collect()).collect(),
        },
        pair_classification: PairSummary { p: pc.p, table: pc.table.clone() },
        primitivity,
        nodes,
        edges,
        probe,
        verdicts: verdicts
            .into_iter()
            .map(|v| Verdict { residual: sig12(v.residual), tol: sig12(v.tol), ..v })
            .collect(),
    })
}

fn list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

impl LatticeReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.passed)
    }

    pub fn node_dim(&self, id: NodeId) -> Option<usize> {
        self.nodes.iter().find(|n| n.name == id.label()).map(|n| n.dim)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_text(&self) -> String {
        let g = &self.graph;
        let mut out = String::new();
        let _ = writeln!(out, "graph {}  n={}  D={}  k={}  base vertex {}", g.name, g.n, g.diameter, g.valency, self.base_vertex);
        let _ = writeln!(out, "intersection array {{{}; {}}}", list(&g.b), list(&g.c));
        let theta: Vec<String> = self.spectrum.theta.iter().map(|t| format!("{t:.6}")).collect();
        let _ = writeln!(out, "eigenvalues    {}", theta.join(" "));
        let _ = writeln!(out, "multiplicities {}", list(&self.spectrum.multiplicities));
        out.push_str("\nu_i(θ_j) classes (+ = 1, - = -1, . = other)\n");
        for (i, row) in self.pair_classification.table.iter().enumerate() {
            let cells: Vec<&str> = row.iter().map(|c| c.symbol()).collect();
            let _ = writeln!(out, "  i={i}  {}", cells.join(" "));
        }
        let _ = write!(out, "P = {}", self.pair_classification.p);
        match &self.primitivity {
            Some(p) if p.primitive => out.push_str("  (primitive)\n"),
            Some(p) => {
                let _ = writeln!(out, "  (imprimitive; disconnected distance graphs {})", list(&p.disconnected_distances));
            }
            None => out.push('\n'),
        }
        out.push_str("\nnodes\n");
        for n in &self.nodes {
            let _ = writeln!(out, "{:<7}  dim {:<3} numeric {:<3} {}", n.name, n.dim, n.numeric_dim, n.basis);
        }
        out.push_str("\nedges (complement of lower in upper)\n");
        for e in &self.edges {
            let numeric = e.numeric_dim.map_or("-".to_string(), |d| d.to_string());
            let _ = writeln!(
                out,
                "{:<7} ⊂ {:<7}  ⊥dim {:<3} numeric {:<3} {}",
                e.lower, e.upper, e.complement_dim, numeric, e.basis
            );
        }
        if let Some(p) = &self.probe {
            out.push_str("\nprobe\n");
            let _ = writeln!(out, "MM*M          dim {}", p.m_mstar_m);
            let _ = writeln!(out, "M*MM*         dim {}", p.mstar_m_mstar);
            let _ = writeln!(out, "MM*M∩M*MM*    dim {}", p.cap);
            let _ = writeln!(out, "MM*M+M*MM*    dim {}", p.sum);
            let _ = writeln!(
                out,
                "T             dim {}{}  chain {:?}",
                p.t_dim,
                if p.converged { "" } else { " (not converged)" },
                p.t_chain
            );
        }
        out.push_str("\nverdicts\n");
        for v in &self.verdicts {
            let _ = writeln!(out, "{v}");
        }
        let failed = self.failures().count();
        let _ = writeln!(out, "\n{} verdicts, {} failed", self.verdicts.len(), failed);
        out
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph lattice {{");
        let _ = writeln!(out, "  rankdir=BT;");
        let _ = writeln!(out, "  node [shape=box];");
        let _ = writeln!(
            out,
            "  // graph {}, base vertex {}, P = {}",
            self.graph.name, self.base_vertex, self.pair_classification.p
        );
        let mut ids: Vec<(String, String, usize)> = vec![("n0".into(), "ℂI".into(), 1)];
        for (k, n) in self.nodes.iter().enumerate() {
            ids.push((format!("n{}", k + 1), n.name.clone(), n.dim));
        }
        if let Some(p) = &self.probe {
            let base = ids.len();
            for (k, (name, dim)) in [
                ("MM*M∩M*MM*", p.cap),
                ("MM*M", p.m_mstar_m),
                ("M*MM*", p.mstar_m_mstar),
                ("MM*M+M*MM*", p.sum),
                ("T", p.t_dim),
            ]
            .into_iter()
            .enumerate()
            {
                ids.push((format!("n{}", base + k), name.to_string(), dim));
            }
        }
        for (id, name, dim) in &ids {
            let _ = writeln!(out, "  {id} [label=\"{name}\\ndim={dim}\"];");
        }
        let lookup = |name: &str| ids.iter().find(|(_, n, _)| n == name).map(|(id, _, d)| (id.clone(), *d));
        let mut arrow = |lower: &str, upper: &str, dim: usize, style: &str| {
            if let (Some((a, _)), Some((b, _))) = (lookup(lower), lookup(upper)) {
                let _ = writeln!(out, "  {a} -> {b} [label=\"⊥dim={dim}\"{style}];");
            }
        };
        let bottom = self.node_dim(NodeId::MCapMStar).unwrap_or(1);
        arrow("ℂI", NodeId::MCapMStar.label(), bottom.saturating_sub(1), "");
        for e in &self.edges {
            arrow(&e.lower, &e.upper, e.complement_dim, "");
        }
        if let Some(p) = &self.probe {
            let top = self.node_dim(NodeId::ProductsSum).unwrap_or(0);
            arrow("MM*+M*M", "MM*M∩M*MM*", p.cap.saturating_sub(top), "");
            arrow("MM*M∩M*MM*", "MM*M", p.m_mstar_m.saturating_sub(p.cap), "");
            arrow("MM*M∩M*MM*", "M*MM*", p.mstar_m_mstar.saturating_sub(p.cap), "");
            arrow("MM*M", "MM*M+M*MM*", p.sum.saturating_sub(p.m_mstar_m), "");
            arrow("M*MM*", "MM*M+M*MM*", p.sum.saturating_sub(p.mstar_m_mstar), "");
            arrow("MM*M+M*MM*", "T", p.t_dim.saturating_sub(p.sum), ", style=dotted");
        }
        for v in &self.verdicts {
            let _ = writeln!(out, "  // {}", v.to_string().replace('\n', " "));
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_named, Family};

    fn cube_report(probe: bool) -> LatticeReport {
        let g = build_named(Family::Hypercube, &[3]).unwrap();
        analyze(&g, "hypercube:3", &AnalyzeOptions { probe, ..Default::default() }).unwrap()
    }

    #[test]
    fn sig12_rounds() {
        assert_eq!(sig12(1.0 / 3.0), 0.333333333333);
        assert_eq!(sig12(0.0), 0.0);
        assert_eq!(sig12(-2.0), -2.0);
    }

    #[test]
    fn cube_text_rows() {
        let text = cube_report(false).to_text();
        assert!(text.contains("MM*+M*M  dim 20"), "{text}");
        assert!(text.contains("P = 5"));
    }

    #[test]
    fn cube_dot_labels() {
        let dot = cube_report(false).to_dot();
        assert!(dot.contains("label=\"MM*∩M*M\\ndim=12\""), "{dot}");
        assert!(dot.contains("label=\"ℂI\\ndim=1\""));
        assert!(dot.contains("n4 -> n5 [label=\"⊥dim=5\"]"), "{dot}");
        assert!(dot.contains("rankdir=BT"));
    }

    #[test]
    fn json_round_trip() {
        let r = cube_report(true);
        assert!(r.passed(), "{}", r.to_text());
        let json = r.to_json();
        assert!(json.starts_with("{\"schema\":1,"));
        let back = LatticeReport::from_json(&json).unwrap();
        assert_eq!(back.nodes, r.nodes);
        assert_eq!(back.edges, r.edges);
        assert_eq!(back.verdicts.len(), r.verdicts.len());
        for (a, b) in back.verdicts.iter().zip(&r.verdicts) {
            assert_eq!(a.name, b.name);
            assert_eq!(a.passed, b.passed);
        }
        assert_eq!(back.to_json(), json);
    }

    #[test]
    fn deterministic() {
        assert_eq!(cube_report(false).to_json(), cube_report(false).to_json());
    }
}
