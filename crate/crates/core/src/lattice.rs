//! The inclusion lattice from `CI` up to `MM* + M*M`.
//!
//! Every node and edge is built twice: once from its explicit orthogonal
//! basis (products `A_i A*_j`, `A*_j A_i` selected by whether `u_i(θ_j)` is
//! ±1) and once as a brute-force subspace computation from independent
//! generators (powers of `A`, the dual idempotents). The two are reconciled
//! into [`Verdict`]s. [`probe_upper`] reports numeric dimensions above the
//! lattice, where no explicit bases are known.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dual::DualAlgebra;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{self, Mat};
use crate::matspace::{self, MatrixSpace};
use crate::scheme::Scheme;
use crate::tol::Tolerances;
use crate::verdict::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairClass {
    PlusOne,
    MinusOne,
    Generic,
}

impl PairClass {
    pub fn is_degenerate(self) -> bool {
        self != PairClass::Generic
    }

    pub fn symbol(self) -> &'static str {
        match self {
            PairClass::PlusOne => "+1",
            PairClass::MinusOne => "-1",
            PairClass::Generic => ".",
        }
    }
}

/// Which `u_i(θ_j)` equal ±1, and the count `P` of such pairs with
/// `1 <= i, j <= D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairClassification {
    pub table: Vec<Vec<PairClass>>,
    pub p: usize,
}

impl PairClassification {
    pub fn diameter(&self) -> usize {
        self.table.len() - 1
    }

    pub fn class(&self, i: usize, j: usize) -> PairClass {
        self.table[i][j]
    }

    /// Pairs `(i, j)` with both indices at least `from`, in row-major order.
    pub fn pairs(&self, from: usize, degenerate: bool) -> Vec<(usize, usize)> {
        let d = self.diameter();
        (from..=d)
            .flat_map(|i| (from..=d).map(move |j| (i, j)))
            .filter(|&(i, j)| self.class(i, j).is_degenerate() == degenerate)
            .collect()
    }
}

pub fn classify_pairs(spec: &crate::bm::Spectrum, tol: &Tolerances) -> Result<PairClassification> {
    let d = spec.diameter();
    let mut table = vec![vec![PairClass::Generic; d + 1]; d + 1];
    for i in 0..=d {
        for j in 0..=d {
            let value = spec.u(i, j);
            let distance = (value - 1.0).abs().min((value + 1.0).abs());
            table[i][j] = if distance <= tol.classify {
                if value > 0.0 {
                    PairClass::PlusOne
                } else {
                    PairClass::MinusOne
                }
            } else if distance < tol.ambiguity {
                return Err(Error::AmbiguousPair { i, j, value, distance });
            } else {
                PairClass::Generic
            };
        }
    }
    let p = (1..=d)
        .flat_map(|i| (1..=d).map(move |j| (i, j)))
        .filter(|&(i, j)| table[i][j].is_degenerate())
        .count();
    Ok(PairClassification { table, p })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Primitivity {
    /// Every distance-`i` graph (`1 <= i <= D`) is connected.
    pub primitive: bool,
    pub p_zero: bool,
    /// Distances whose distance graph is disconnected.
    pub disconnected: Vec<usize>,
}

fn distance_graph_connected(g: &Graph, i: usize) -> bool {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for v in 0..n {
            if !seen[v] && g.dist(u, v) == i {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == n
}

/// Decides primitivity from connectivity of the distance graphs and checks
/// it against `P = 0`.
pub fn check_primitivity(g: &Graph, pc: &PairClassification) -> Result<Primitivity> {
    let disconnected: Vec<usize> =
        (1..=g.diameter()).filter(|&i| !distance_graph_connected(g, i)).collect();
    let primitive = disconnected.is_empty();
    let p_zero = pc.p == 0;
    if primitive != p_zero {
        return Err(Error::PrimitivityMismatch { primitive, p: pc.p });
    }
    Ok(Primitivity { primitive, p_zero, disconnected })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NodeId {
    MCapMStar,
    M,
    MStar,
    MPlusMStar,
    ProductsCap,
    MMStar,
    MStarM,
    ProductsSum,
}

impl NodeId {
    pub const ALL: [NodeId; 8] = [
        NodeId::MCapMStar,
        NodeId::M,
        NodeId::MStar,
        NodeId::MPlusMStar,
        NodeId::ProductsCap,
        NodeId::MMStar,
        NodeId::MStarM,
        NodeId::ProductsSum,
    ];

    pub fn label(self) -> &'static str {
        match self {
            NodeId::MCapMStar => "M∩M*",
            NodeId::M => "M",
            NodeId::MStar => "M*",
            NodeId::MPlusMStar => "M+M*",
            NodeId::ProductsCap => "MM*∩M*M",
            NodeId::MMStar => "MM*",
            NodeId::MStarM => "M*M",
            NodeId::ProductsSum => "MM*+M*M",
        }
    }

    pub fn from_label(label: &str) -> Option<NodeId> {
        NodeId::ALL.into_iter().find(|n| n.label() == label)
    }

    /// Closed-form dimension for diameter `d` and pair count `p`.
    pub fn dimension(self, d: usize, p: usize) -> usize {
        match self {
            NodeId::MCapMStar => 1,
            NodeId::M | NodeId::MStar => d + 1,
            NodeId::MPlusMStar => 2 * d + 1,
            NodeId::ProductsCap => 2 * d + 1 + p,
            NodeId::MMStar | NodeId::MStarM => (d + 1) * (d + 1),
            NodeId::ProductsSum => 2 * d * d + 2 * d + 1 - p,
        }
    }

    pub fn basis_descriptor(self) -> &'static str {
        match self {
            NodeId::MCapMStar => "{I}",
            NodeId::M => "{A_i : 0<=i<=D}",
            NodeId::MStar => "{A*_i : 0<=i<=D}",
            NodeId::MPlusMStar => "{A_D,...,A_1, I, A*_1,...,A*_D}",
            NodeId::ProductsCap => "{A_i A*_j : 0<=i,j<=D, u_i(θ_j)=±1}",
            NodeId::MMStar => "{A_i A*_j : 0<=i,j<=D}",
            NodeId::MStarM => "{A*_j A_i : 0<=i,j<=D}",
            NodeId::ProductsSum => {
                "{A_i A*_j + A*_j A_i, A_i A*_j - A*_j A_i : u_i(θ_j)≠±1} ∪ {A_i A*_j : u_i(θ_j)=±1}"
            }
        }
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The nine covering relations, lower node first.
pub const EDGES: [(NodeId, NodeId); 9] = [
    (NodeId::MCapMStar, NodeId::M),
    (NodeId::MCapMStar, NodeId::MStar),
    (NodeId::M, NodeId::MPlusMStar),
    (NodeId::MStar, NodeId::MPlusMStar),
    (NodeId::MPlusMStar, NodeId::ProductsCap),
    (NodeId::ProductsCap, NodeId::MMStar),
    (NodeId::ProductsCap, NodeId::MStarM),
    (NodeId::MMStar, NodeId::ProductsSum),
    (NodeId::MStarM, NodeId::ProductsSum),
];

/// Closed-form dimension of the complement of `lower` in `upper`.
pub fn edge_dimension(lower: NodeId, upper: NodeId, d: usize, p: usize) -> usize {
    upper.dimension(d, p) - lower.dimension(d, p)
}

pub fn edge_descriptor(lower: NodeId, upper: NodeId) -> &'static str {
    use NodeId::*;
    match (lower, upper) {
        (MCapMStar, M) | (MStar, MPlusMStar) => "{A_i : 1<=i<=D}",
        (MCapMStar, MStar) | (M, MPlusMStar) => "{A*_i : 1<=i<=D}",
        (MPlusMStar, ProductsCap) => "{A_i A*_j : 1<=i,j<=D, u_i(θ_j)=±1}",
        (ProductsCap, MMStar) => "{A_i A*_j : 1<=i,j<=D, u_i(θ_j)≠±1}",
        (ProductsCap, MStarM) => "{A*_j A_i : 1<=i,j<=D, u_i(θ_j)≠±1}",
        (MMStar, ProductsSum) => "{u_i(θ_j) A_i A*_j - A*_j A_i : 1<=i,j<=D, u_i(θ_j)≠±1}",
        (MStarM, ProductsSum) => "{A_i A*_j - u_i(θ_j) A*_j A_i : 1<=i,j<=D, u_i(θ_j)≠±1}",
        _ => "",
    }
}

#[derive(Debug, Clone)]
pub struct LatticeNode {
    pub id: NodeId,
    pub closed_dim: usize,
    /// Explicit orthogonal basis.
    pub closed: MatrixSpace,
    /// Subspace computed from independent generators.
    pub numeric: MatrixSpace,
}

#[derive(Debug, Clone)]
pub struct LatticeEdge {
    pub lower: NodeId,
    pub upper: NodeId,
    pub closed_dim: usize,
    /// Explicit orthogonal basis of the complement.
    pub complement: MatrixSpace,
    /// Complement computed by projection, when that succeeded.
    pub numeric: Option<MatrixSpace>,
}

#[derive(Debug, Clone)]
pub struct Lattice {
    pub diameter: usize,
    pub p: usize,
    pub nodes: Vec<LatticeNode>,
    pub edges: Vec<LatticeEdge>,
    pub verdicts: Vec<Verdict>,
}

impl Lattice {
    pub fn node(&self, id: NodeId) -> &LatticeNode {
        self.nodes.iter().find(|n| n.id == id).expect("all nodes are built")
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }
}

/// `A_i A*_j` and `A*_j A_i` for all `(i, j)`.
pub struct MixedProducts {
    /// `right[i][j] = A_i A*_j`
    pub right: Vec<Vec<Mat>>,
    /// `left[i][j] = A*_j A_i`
    pub left: Vec<Vec<Mat>>,
}

impl MixedProducts {
    pub fn new(scheme: &Scheme, da: &DualAlgebra) -> Self {
        let a = &scheme.bm.a;
        let right = a
            .iter()
            .map(|ai| da.astar.iter().map(|aj| linalg::diag_right(ai, aj)).collect())
            .collect();
        let left = a
            .iter()
            .map(|ai| da.astar.iter().map(|aj| linalg::diag_left(aj, ai)).collect())
            .collect();
        MixedProducts { right, left }
    }
}

/// Generator set for the numeric side of `M`: normalized powers of `A`.
fn adjacency_powers(scheme: &Scheme) -> (Vec<Mat>, Vec<String>) {
    let a = &scheme.bm.a[1];
    let n = scheme.n();
    let mut out = vec![Mat::identity(n, n)];
    for _ in 0..scheme.diameter() {
        let next = out.last().unwrap() * a;
        out.push(&next / linalg::norm(&next));
    }
    let labels = (0..out.len()).map(|k| format!("A^{k}")).collect();
    (out, labels)
}

/// The numeric spaces `M`, `M*` built from generators independent of the
/// closed-form bases.
pub struct NumericBase {
    pub m: MatrixSpace,
    pub mstar: MatrixSpace,
}

impl NumericBase {
    pub fn new(scheme: &Scheme, da: &DualAlgebra, tol: &Tolerances) -> Self {
        let n = scheme.n();
        let (gens, labels) = adjacency_powers(scheme);
        let m = matspace::span(n, &gens, &labels, tol);
        let estar: Vec<Mat> = (0..=scheme.diameter()).map(|i| da.estar_matrix(i)).collect();
        let labels: Vec<String> = (0..estar.len()).map(|i| format!("E*_{i}")).collect();
        let mstar = matspace::span(n, &estar, &labels, tol);
        NumericBase { m, mstar }
    }
}

fn labelled(items: Vec<(Mat, String)>) -> (Vec<Mat>, Vec<String>) {
    items.into_iter().unzip()
}

fn closed_node(scheme: &Scheme, da: &DualAlgebra, pc: &PairClassification, prods: &MixedProducts, id: NodeId) -> MatrixSpace {
    let n = scheme.n();
    let d = scheme.diameter();
    let a = &scheme.bm.a;
    let all_pairs = || (0..=d).flat_map(|i| (0..=d).map(move |j| (i, j)));
    let items: Vec<(Mat, String)> = match id {
        NodeId::MCapMStar => vec![(Mat::identity(n, n), "I".into())],
        NodeId::M => (0..=d).map(|i| (a[i].clone(), format!("A_{i}"))).collect(),
        NodeId::MStar => (0..=d).map(|i| (da.astar_matrix(i), format!("A*_{i}"))).collect(),
        NodeId::MPlusMStar => (1..=d)
            .rev()
            .map(|i| (a[i].clone(), format!("A_{i}")))
            .chain(std::iter::once((Mat::identity(n, n), "I".into())))
            .chain((1..=d).map(|i| (da.astar_matrix(i), format!("A*_{i}"))))
            .collect(),
        NodeId::ProductsCap => pc
            .pairs(0, true)
            .into_iter()
            .map(|(i, j)| (prods.right[i][j].clone(), format!("A_{i}A*_{j}")))
            .collect(),
        NodeId::MMStar => {
            all_pairs().map(|(i, j)| (prods.right[i][j].clone(), format!("A_{i}A*_{j}"))).collect()
        }
        NodeId::MStarM => {
            all_pairs().map(|(i, j)| (prods.left[i][j].clone(), format!("A*_{j}A_{i}"))).collect()
        }
        NodeId::ProductsSum => all_pairs()
            .flat_map(|(i, j)| {
                let r = &prods.right[i][j];
                let l = &prods.left[i][j];
                if pc.class(i, j).is_degenerate() {
                    vec![(r.clone(), format!("A_{i}A*_{j}"))]
                } else {
                    vec![
                        (r + l, format!("A_{i}A*_{j}+A*_{j}A_{i}")),
                        (r - l, format!("A_{i}A*_{j}-A*_{j}A_{i}")),
                    ]
                }
            })
            .collect(),
    };
    let (basis, labels) = labelled(items);
    MatrixSpace::from_orthogonal(n, basis, labels)
}

fn closed_edge(scheme: &Scheme, da: &DualAlgebra, pc: &PairClassification, prods: &MixedProducts, lower: NodeId, upper: NodeId) -> MatrixSpace {
    use NodeId::*;
    let n = scheme.n();
    let d = scheme.diameter();
    let a = &scheme.bm.a;
    let u = |i: usize, j: usize| scheme.spec.u(i, j);
    let items: Vec<(Mat, String)> = match (lower, upper) {
        (MCapMStar, M) | (MStar, MPlusMStar) => {
            (1..=d).map(|i| (a[i].clone(), format!("A_{i}"))).collect()
        }
        (MCapMStar, MStar) | (M, MPlusMStar) => {
            (1..=d).map(|i| (da.astar_matrix(i), format!("A*_{i}"))).collect()
        }
        (MPlusMStar, ProductsCap) => pc
            .pairs(1, true)
            .into_iter()
            .map(|(i, j)| (prods.right[i][j].clone(), format!("A_{i}A*_{j}")))
            .collect(),
        (ProductsCap, MMStar) => pc
            .pairs(1, false)
            .into_iter()
            .map(|(i, j)| (prods.right[i][j].clone(), format!("A_{i}A*_{j}")))
            .collect(),
        (ProductsCap, MStarM) => pc
            .pairs(1, false)
            .into_iter()
            .map(|(i, j)| (prods.left[i][j].clone(), format!("A*_{j}A_{i}")))
            .collect(),
        (MMStar, ProductsSum) => pc
            .pairs(1, false)
            .into_iter()
            .map(|(i, j)| {
                (&prods.right[i][j] * u(i, j) - &prods.left[i][j], format!("u·A_{i}A*_{j}-A*_{j}A_{i}"))
            })
            .collect(),
        (MStarM, ProductsSum) => pc
            .pairs(1, false)
            .into_iter()
            .map(|(i, j)| {
                (&prods.right[i][j] - &prods.left[i][j] * u(i, j), format!("A_{i}A*_{j}-u·A*_{j}A_{i}"))
            })
            .collect(),
        _ => unreachable!("not a covering edge: {lower} ⊆ {upper}"),
    };
    let (basis, labels) = labelled(items);
    MatrixSpace::from_orthogonal(n, basis, labels)
}

fn numeric_nodes(base: &NumericBase, tol: &Tolerances) -> Result<Vec<(NodeId, MatrixSpace)>> {
    let m = base.m.clone();
    let ms = base.mstar.clone();
    let cap = matspace::intersect_space(&m, &ms, tol)?;
    let plus = matspace::sum_space(&m, &ms, tol)?;
    let mms = matspace::product_space(&m, &ms, tol)?;
    let msm = matspace::product_space(&ms, &m, tol)?;
    let pcap = matspace::intersect_space(&mms, &msm, tol)?;
    let psum = matspace::sum_space(&mms, &msm, tol)?;
    Ok(vec![
        (NodeId::MCapMStar, cap),
        (NodeId::M, m),
        (NodeId::MStar, ms),
        (NodeId::MPlusMStar, plus),
        (NodeId::ProductsCap, pcap),
        (NodeId::MMStar, mms),
        (NodeId::MStarM, msm),
        (NodeId::ProductsSum, psum),
    ])
}

/// Builds the eight nodes and nine edges in both representations and
/// reconciles them. Reconciliation failures become failed verdicts; only a
/// breakdown of the numeric subspace machinery is returned as an error.
pub fn build_lattice(
    scheme: &Scheme,
    da: &DualAlgebra,
    pc: &PairClassification,
    tol: &Tolerances,
) -> Result<Lattice> {
    let d = scheme.diameter();
    let p = pc.p;
    let prods = MixedProducts::new(scheme, da);
    let base = NumericBase::new(scheme, da, tol);
    let numeric = numeric_nodes(&base, tol)?;
    let mut verdicts = Vec::new();

    let mut nodes = Vec::new();
    for (id, num) in numeric {
        let closed = closed_node(scheme, da, pc, &prods, id);
        let expected = id.dimension(d, p);
        verdicts.push(Verdict::residual(
            format!("node {id}: explicit basis orthogonal"),
            closed.orthogonality_residual(),
            tol.residual,
        ));
        verdicts.push(Verdict::flag(
            format!("node {id}: explicit basis nonzero"),
            closed.min_norm() > tol.rank,
            format!("min norm {:.3e}", closed.min_norm()),
        ));
        verdicts.push(Verdict::exact(format!("node {id}: explicit basis size"), closed.dim(), expected));
        verdicts.push(Verdict::exact(format!("node {id}: numeric dimension"), num.dim(), expected));
        let containment = num.containment_residual(&closed).max(closed.containment_residual(&num));
        verdicts.push(Verdict::residual(
            format!("node {id}: explicit and numeric spaces coincide"),
            containment,
            tol.residual,
        ));
        for w in num.warnings() {
            verdicts.push(Verdict::flag(format!("node {id}: conditioning"), true, w.clone()));
        }
        nodes.push(LatticeNode { id, closed_dim: expected, closed, numeric: num });
    }

    let find = |id: NodeId| nodes.iter().find(|n| n.id == id).unwrap();
    let mut edges = Vec::new();
    for (lower, upper) in EDGES {
        let lo = find(lower);
        let up = find(upper);
        let expected = edge_dimension(lower, upper, d, p);
        let complement = closed_edge(scheme, da, pc, &prods, lower, upper);
        let name = format!("edge {lower} ⊆ {upper}");
        verdicts.push(Verdict::residual(
            format!("{name}: explicit complement orthogonal"),
            complement.orthogonality_residual(),
            tol.residual,
        ));
        verdicts.push(Verdict::exact(format!("{name}: explicit complement size"), complement.dim(), expected));
        verdicts.push(Verdict::residual(
            format!("{name}: complement ⊥ lower"),
            complement.cross_residual(&lo.numeric),
            tol.residual,
        ));
        verdicts.push(Verdict::residual(
            format!("{name}: complement ⊆ upper"),
            up.numeric.containment_residual(&complement),
            tol.residual,
        ));
        verdicts.push(Verdict::exact(
            format!("{name}: dim lower + dim complement = dim upper"),
            lo.numeric.dim() + complement.dim(),
            up.numeric.dim(),
        ));
        let numeric = match matspace::complement_in(&lo.numeric, &up.numeric, tol) {
            Ok(c) => {
                verdicts.push(Verdict::exact(format!("{name}: numeric complement dimension"), c.dim(), expected));
                Some(c)
            }
            Err(e) => {
                verdicts.push(Verdict::failed(format!("{name}: numeric complement"), e.to_string()));
                None
            }
        };
        edges.push(LatticeEdge { lower, upper, closed_dim: expected, complement, numeric });
    }

    // modular law for the two computed intersections
    for (a, b, cap, cup) in [
        (NodeId::M, NodeId::MStar, NodeId::MCapMStar, NodeId::MPlusMStar),
        (NodeId::MMStar, NodeId::MStarM, NodeId::ProductsCap, NodeId::ProductsSum),
    ] {
        verdicts.push(Verdict::exact(
            format!("modular law dim({a}) + dim({b}) = dim({cap}) + dim({cup})"),
            find(a).numeric.dim() + find(b).numeric.dim(),
            find(cap).numeric.dim() + find(cup).numeric.dim(),
        ));
    }

    verdicts.push(pair_blocks_orthogonal(scheme, &prods, tol));
    verdicts.extend(degenerate_pair_verdicts(pc, &prods, tol));

    Ok(Lattice { diameter: d, p, nodes, edges, verdicts })
}

/// `Span(A_i A*_j, A*_j A_i)` is orthogonal to `Span(A_r A*_s, A*_s A_r)`
/// whenever `(i, j) != (r, s)`.
pub fn pair_blocks_orthogonal(scheme: &Scheme, prods: &MixedProducts, tol: &Tolerances) -> Verdict {
    let d = scheme.diameter();
    let pairs: Vec<(usize, usize)> = (0..=d).flat_map(|i| (0..=d).map(move |j| (i, j))).collect();
    let norms = |i: usize, j: usize| linalg::norm(&prods.right[i][j]);
    let mut worst = 0.0f64;
    for (x, &(i, j)) in pairs.iter().enumerate() {
        for &(r, s) in &pairs[x + 1..] {
            let scale = norms(i, j) * norms(r, s);
            for a in [&prods.right[i][j], &prods.left[i][j]] {
                for b in [&prods.right[r][s], &prods.left[r][s]] {
                    worst = worst.max(linalg::inner(a, b).abs() / scale);
                }
            }
        }
    }
    Verdict::residual("pair blocks mutually orthogonal", worst, tol.residual)
        .with_detail(format!("{} blocks", pairs.len()))
}

/// For `u_i(θ_j) = ±1`: `A_i A*_j = ±A*_j A_i` and the common value is nonzero.
pub fn degenerate_pair_verdicts(pc: &PairClassification, prods: &MixedProducts, tol: &Tolerances) -> Vec<Verdict> {
    let mut worst = 0.0f64;
    let mut min_norm = f64::INFINITY;
    let pairs = pc.pairs(0, true);
    for &(i, j) in &pairs {
        let sign = if pc.class(i, j) == PairClass::PlusOne { 1.0 } else { -1.0 };
        let r = &prods.right[i][j];
        let diff = r - &prods.left[i][j] * sign;
        worst = worst.max(linalg::max_abs(&diff) / linalg::max_abs(r).max(1.0));
        min_norm = min_norm.min(linalg::norm(r));
    }
    vec![
        Verdict::residual("degenerate pairs: A_iA*_j = ±A*_jA_i", worst, tol.residual)
            .with_detail(format!("{} pairs", pairs.len())),
        Verdict::flag(
            "degenerate pairs: A_iA*_j nonzero",
            pairs.is_empty() || min_norm > 1e-3,
            format!("min norm {min_norm:.3e}"),
        ),
    ]
}

/// Two routes to the Gram matrix of `{A_i A*_j, A*_j A_i}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramCheck {
    pub i: usize,
    pub j: usize,
    pub gram: [[f64; 2]; 2],
    pub expected: [[f64; 2]; 2],
    /// `max |gram - expected| / (|X| k_i m_j)`
    pub entry_residual: f64,
    pub det: f64,
    pub det_expected: f64,
    /// `|det - det_expected| / (|X| k_i m_j)^2`
    pub det_residual: f64,
    /// Relative deviation of `<S+, S->` from 0 and of `|S±|^2` from
    /// `2 |X| k_i m_j (1 ± u)`, where `S± = A_i A*_j ± A*_j A_i`.
    pub norm_residual: f64,
}

impl GramCheck {
    pub fn residual(&self) -> f64 {
        self.entry_residual.max(self.det_residual).max(self.norm_residual)
    }
}

pub fn gram_h(scheme: &Scheme, prods: &MixedProducts, i: usize, j: usize) -> GramCheck {
    let n = scheme.n() as f64;
    let scale = n * scheme.ia.k[i] as f64 * scheme.spec.m[j] as f64;
    let u = scheme.spec.u(i, j);
    let r = &prods.right[i][j];
    let l = &prods.left[i][j];
    let gram = [[linalg::inner(r, r), linalg::inner(r, l)], [linalg::inner(l, r), linalg::inner(l, l)]];
    let expected = [[scale, scale * u], [scale * u, scale]];
    let entry_residual = (0..2)
        .flat_map(|a| (0..2).map(move |b| (a, b)))
        .map(|(a, b)| (gram[a][b] - expected[a][b]).abs())
        .fold(0.0, f64::max)
        / scale;
    let det = gram[0][0] * gram[1][1] - gram[0][1] * gram[1][0];
    let det_expected = scale * scale * (1.0 - u * u);
    let det_residual = (det - det_expected).abs() / (scale * scale);
    let plus = r + l;
    let minus = r - l;
    let norm_residual = [
        linalg::inner(&plus, &minus).abs(),
        (linalg::inner(&plus, &plus) - 2.0 * scale * (1.0 + u)).abs(),
        (linalg::inner(&minus, &minus) - 2.0 * scale * (1.0 - u)).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
        / scale;
    GramCheck { i, j, gram, expected, entry_residual, det, det_expected, det_residual, norm_residual }
}

/// Gram matrix check for one pair, failing if any residual exceeds `tol.residual`.
pub fn verify_gram_h(scheme: &Scheme, da: &DualAlgebra, i: usize, j: usize, tol: &Tolerances) -> Result<GramCheck> {
    let check = gram_h(scheme, &MixedProducts::new(scheme, da), i, j);
    if check.residual() > tol.residual {
        return Err(Error::Residual {
            what: format!("Gram matrix of A_{i}A*_{j}, A*_{j}A_{i}"),
            residual: check.residual(),
            tol: tol.residual,
        });
    }
    Ok(check)
}

/// Numeric dimensions above `MM* + M*M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    /// `dim MM*M`
    pub m_mstar_m: usize,
    /// `dim M*MM*`
    pub mstar_m_mstar: usize,
    pub cap: usize,
    pub sum: usize,
    pub m_mstar_m_gram_rank: usize,
    pub mstar_m_mstar_gram_rank: usize,
    /// Number of `(h, i, j)` with `q^h_ij > threshold`.
    pub q_nonzero: usize,
    /// Number of `(h, i, j)` with `p^h_ij != 0`.
    pub p_nonzero: usize,
    /// Relative residual of `MM* + M*M` inside each triple-product space.
    pub containment_residual: f64,
    /// Dimension after each round of right multiplication by the generators.
    pub t_chain: Vec<usize>,
    pub t_dim: usize,
    pub converged: bool,
    #[serde(skip)]
    pub verdicts: Vec<Verdict>,
}

pub const DEFAULT_PROBE_DEPTH: usize = 8;

/// Triple-product spaces, their sum and intersection, and the dimension of
/// the algebra generated by `M` and `M*` by iterated products.
pub fn probe_upper(
    scheme: &Scheme,
    da: &DualAlgebra,
    lattice: &Lattice,
    max_depth: usize,
    tol: &Tolerances,
) -> Result<ProbeResult> {
    let base = NumericBase::new(scheme, da, tol);
    let mms = &lattice.node(NodeId::MMStar).numeric;
    let msm = &lattice.node(NodeId::MStarM).numeric;
    let lower = &lattice.node(NodeId::ProductsSum).numeric;

    let mmsm = matspace::product_space(mms, &base.m, tol)?;
    let msmms = matspace::product_space(msm, &base.mstar, tol)?;
    let cap = matspace::intersect_space(&mmsm, &msmms, tol)?;
    let sum = matspace::sum_space(&mmsm, &msmms, tol)?;

    let products = |r: &MatrixSpace, s: &MatrixSpace| -> Vec<Mat> {
        r.basis().iter().flat_map(|a| s.basis().iter().map(move |b| a * b)).collect()
    };
    let m_mstar_m_gram_rank = matspace::gram_rank(&products(mms, &base.m), tol);
    let mstar_m_mstar_gram_rank = matspace::gram_rank(&products(msm, &base.mstar), tol);
    let q_nonzero = scheme.bm.q.nonzero_count(tol.classify);
    let p_nonzero = scheme.ia.nonzero_count();
    let containment_residual = mmsm.containment_residual(lower).max(msmms.containment_residual(lower));

    // iterate S <- S + S·G from S = M + M*, multiplying only new directions
    let mut gens: Vec<Mat> = base.m.basis().to_vec();
    gens.extend(base.mstar.basis().iter().cloned());
    let mut algebra = matspace::sum_space(&base.m, &base.mstar, tol)?;
    let mut frontier: Vec<Mat> = algebra.basis().to_vec();
    let mut t_chain = vec![algebra.dim()];
    let mut converged = false;
    for depth in 1..=max_depth {
        let new: Vec<Mat> = frontier.iter().flat_map(|s| gens.iter().map(move |g| s * g)).collect();
        let labels: Vec<String> = (0..new.len()).map(|k| format!("w{depth}.{k}")).collect();
        let before = algebra.dim();
        let added = matspace::extend(&mut algebra, &new, &labels, tol);
        t_chain.push(algebra.dim());
        if added == 0 {
            converged = true;
            break;
        }
        frontier = algebra.basis()[before..].to_vec();
    }

    let mut verdicts = vec![
        Verdict::exact("probe: dim M*MM* = #{p^h_ij ≠ 0}", msmms.dim(), p_nonzero),
        Verdict::exact("probe: dim M*MM* = Gram rank", msmms.dim(), mstar_m_mstar_gram_rank),
        Verdict::exact("probe: dim MM*M = #{q^h_ij > 0}", mmsm.dim(), q_nonzero),
        Verdict::exact("probe: dim MM*M = Gram rank", mmsm.dim(), m_mstar_m_gram_rank),
        Verdict::residual("probe: MM*+M*M inside MM*M and M*MM*", containment_residual, tol.residual),
        Verdict::exact(
            "probe: modular law for MM*M, M*MM*",
            mmsm.dim() + msmms.dim(),
            cap.dim() + sum.dim(),
        ),
    ];
    verdicts.push(Verdict::flag(
        "probe: generated algebra converged",
        converged,
        format!("chain {t_chain:?}, depth cap {max_depth}"),
    ));
    if !converged {
        verdicts.last_mut().unwrap().detail.push_str(" (not converged)");
    }

    Ok(ProbeResult {
        m_mstar_m: mmsm.dim(),
        mstar_m_mstar: msmms.dim(),
        cap: cap.dim(),
        sum: sum.dim(),
        m_mstar_m_gram_rank,
        mstar_m_mstar_gram_rank,
        q_nonzero,
        p_nonzero,
        containment_residual,
        t_dim: algebra.dim(),
        t_chain,
        converged,
        verdicts,
    })
}
