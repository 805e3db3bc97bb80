//! Connected simple graphs with dense all-pairs distances, and the
//! distance-regularity test that produces the intersection numbers.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, RegularityWitness, Result};

/// Largest vertex count accepted by default; every downstream matrix is dense.
pub const DEFAULT_VERTEX_CAP: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    neighbors: Vec<Vec<usize>>,
    dist: Vec<usize>,
    diameter: usize,
}

impl Graph {
    /// Builds a graph on `0..n` from an edge list, rejecting loops, repeated
    /// edges and disconnected inputs.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::from_edges_capped(n, edges, DEFAULT_VERTEX_CAP)
    }

    pub fn from_edges_capped(n: usize, edges: &[(usize, usize)], cap: usize) -> Result<Self> {
        if n > cap {
            return Err(Error::TooLarge { n, cap });
        }
        let mut neighbors = vec![Vec::new(); n];
        for (line, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::Parse {
                    line: line + 1,
                    reason: format!("endpoint out of range for {n} vertices"),
                });
            }
            if u == v {
                return Err(Error::SelfLoop { line: line + 1, vertex: u });
            }
            if neighbors[u].contains(&v) {
                return Err(Error::DuplicateEdge { line: line + 1, u, v });
            }
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Self::from_neighbors(neighbors)
    }

    /// Builds a graph from symmetric, loop-free adjacency lists.
    pub(crate) fn from_neighbors(neighbors: Vec<Vec<usize>>) -> Result<Self> {
        let n = neighbors.len();
        let mut dist = vec![usize::MAX; n * n];
        let mut queue = VecDeque::with_capacity(n);
        for src in 0..n {
            let row = &mut dist[src * n..(src + 1) * n];
            row[src] = 0;
            queue.clear();
            queue.push_back(src);
            while let Some(u) = queue.pop_front() {
                let du = row[u];
                for &w in &neighbors[u] {
                    if row[w] == usize::MAX {
                        row[w] = du + 1;
                        queue.push_back(w);
                    }
                }
            }
            if let Some(unreachable) = row.iter().position(|&d| d == usize::MAX) {
                return Err(Error::Disconnected { unreachable });
            }
        }
        let diameter = dist.iter().copied().max().unwrap_or(0);
        Ok(Graph { n, neighbors, dist, diameter })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diameter(&self) -> usize {
        self.diameter
    }

    pub fn dist(&self, x: usize, y: usize) -> usize {
        self.dist[x * self.n + y]
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.neighbors[x]
    }

    pub fn is_adjacent(&self, x: usize, y: usize) -> bool {
        self.dist(x, y) == 1
    }

    pub fn valency(&self, x: usize) -> usize {
        self.neighbors[x].len()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| self.neighbors[u].iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
            .collect()
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let edges: Vec<_> = self.edges().into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
        Graph::from_edges_capped(self.n, &edges, usize::MAX)
    }

    /// Parses the edge-list text format: one `u v` pair per line, an optional
    /// leading line holding the vertex count, `#` comments and blank lines.
    pub fn load_edge_list(text: &str) -> Result<Self> {
        let mut declared: Option<usize> = None;
        let mut seen_content = false;
        let mut edges = Vec::new();
        let mut lines_of = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|_| Error::Parse {
                    line,
                    reason: format!("`{s}` is not a non-negative integer"),
                })
            };
            match fields.as_slice() {
                [count] if !seen_content => declared = Some(parse(count)?),
                [u, v] => {
                    edges.push((parse(u)?, parse(v)?));
                    lines_of.push(line);
                }
                _ => {
                    return Err(Error::Parse {
                        line,
                        reason: format!("expected `u v`, found `{trimmed}`"),
                    })
                }
            }
            seen_content = true;
        }

        let max_index = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        let n = match declared {
            Some(n) if n < max_index => {
                let pos = edges.iter().position(|&(u, v)| u.max(v) >= n).unwrap();
                return Err(Error::Parse {
                    line: lines_of[pos],
                    reason: format!("endpoint exceeds declared vertex count {n}"),
                });
            }
            Some(n) => n,
            None => max_index,
        };
        if n == 0 {
            return Err(Error::Parse { line: 0, reason: "empty graph".into() });
        }

        // Report structural errors against the source line, not the edge index.
        Graph::from_edges(n, &edges).map_err(|e| match e {
            Error::SelfLoop { line, vertex } => Error::SelfLoop { line: lines_of[line - 1], vertex },
            Error::DuplicateEdge { line, u, v } => {
                Error::DuplicateEdge { line: lines_of[line - 1], u, v }
            }
            other => other,
        })
    }
}

/// Intersection numbers of a distance-regular graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionArray {
    pub diameter: usize,
    /// `b_0 .. b_{D-1}`
    pub b: Vec<u64>,
    /// `c_1 .. c_D`
    pub c: Vec<u64>,
    /// `a_0 .. a_D`
    pub a: Vec<u64>,
    /// `k_0 .. k_D`
    pub k: Vec<u64>,
    p: Vec<u64>,
}

impl IntersectionArray {
    /// `p^h_{ij}`.
    pub fn p(&self, h: usize, i: usize, j: usize) -> u64 {
        let d = self.diameter + 1;
        self.p[(h * d + i) * d + j]
    }

    /// `b_i` with the convention `b_D = 0`.
    pub fn b_at(&self, i: usize) -> u64 {
        self.b.get(i).copied().unwrap_or(0)
    }

    /// `c_i` with the convention `c_0 = 0`.
    pub fn c_at(&self, i: usize) -> u64 {
        if i == 0 {
            0
        } else {
            self.c[i - 1]
        }
    }

    pub fn valency(&self) -> u64 {
        self.k[1.min(self.diameter)]
    }

    pub fn vertex_count(&self) -> u64 {
        self.k.iter().sum()
    }

    /// Number of `(h, i, j)` with `p^h_{ij} != 0`.
    pub fn nonzero_count(&self) -> usize {
        self.p.iter().filter(|&&v| v != 0).count()
    }

    fn from_tensor(diameter: usize, p: Vec<u64>) -> Self {
        let d = diameter + 1;
        let at = |h: usize, i: usize, j: usize| p[(h * d + i) * d + j];
        let k = (0..d).map(|i| at(0, i, i)).collect();
        let a = (0..d).map(|i| if i == 0 { 0 } else { at(i, 1, i) }).collect();
        let b = (0..diameter).map(|i| at(i, 1, i + 1)).collect();
        let c = (1..d).map(|i| at(i, 1, i - 1)).collect();
        IntersectionArray { diameter, b, c, a, k, p }
    }
}

/// Result of the distance-regularity test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regularity {
    Regular(IntersectionArray),
    Irregular(RegularityWitness),
}

impl Regularity {
    pub fn is_regular(&self) -> bool {
        matches!(self, Regularity::Regular(_))
    }
}

/// Counts `|Γ_i(x) ∩ Γ_j(y)|` for every ordered pair, comparing each against
/// the first pair seen at the same distance. One pass yields both the verdict
/// and the tensor.
pub fn check_distance_regular(g: &Graph) -> Regularity {
    let n = g.n;
    let d = g.diameter + 1;
    let mut tensor: Vec<Option<(usize, usize, Vec<u64>)>> = vec![None; d];
    let mut counts = vec![0u64; d * d];
    for x in 0..n {
        for y in 0..n {
            counts.iter_mut().for_each(|c| *c = 0);
            for z in 0..n {
                counts[g.dist(x, z) * d + g.dist(y, z)] += 1;
            }
            let h = g.dist(x, y);
            match &tensor[h] {
                None => tensor[h] = Some((x, y, counts.clone())),
                Some((x0, y0, rep)) => {
                    if let Some(idx) = rep.iter().zip(&counts).position(|(a, b)| a != b) {
                        let (i, j) = (idx / d, idx % d);
                        return Regularity::Irregular(RegularityWitness {
                            h,
                            i,
                            j,
                            first: (*x0, *y0, rep[idx] as usize),
                            second: (x, y, counts[idx] as usize),
                        });
                    }
                }
            }
        }
    }
    let mut p = Vec::with_capacity(d * d * d);
    for slot in tensor {
        p.extend(slot.expect("every distance up to the diameter occurs").2);
    }
    Regularity::Regular(IntersectionArray::from_tensor(g.diameter, p))
}

pub fn is_distance_regular(g: &Graph) -> (bool, Option<RegularityWitness>) {
    match check_distance_regular(g) {
        Regularity::Regular(_) => (true, None),
        Regularity::Irregular(w) => (false, Some(w)),
    }
}

pub fn intersection_array(g: &Graph) -> Result<IntersectionArray> {
    match check_distance_regular(g) {
        Regularity::Regular(ia) => Ok(ia),
        Regularity::Irregular(w) => Err(Error::NotDistanceRegular(w)),
    }
}
