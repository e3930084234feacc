//! Simple connected undirected graphs, their hop metric and the random-walk
//! diffusion operator `A D^{-1}`.

mod generators;
mod parse;

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;
use std::sync::OnceLock;

use thiserror::Error;

use crate::function::VertexFunction;

pub use generators::{
    complete, cycle, faulkner_younger, frucht, generate_named, menger2, nauru, path, torus_grid,
    truncated_tetrahedral, GeneratorId,
};
pub use parse::from_edge_list;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: malformed edge list entry: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },

    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },

    #[error("line {line}: vertex {vertex} out of range for n={n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("graph has no vertices")]
    Empty,

    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),

    #[error("invalid parameters for {name}: {msg}")]
    InvalidParameters { name: String, msg: String },

    #[error("vertex index {vertex} out of range for n={n}")]
    IndexOutOfRange { vertex: usize, n: usize },
}

/// An undirected, unweighted, simple, connected graph.
///
/// Vertices are `0..n`. Neighbor lists are sorted. The hop metric is computed
/// lazily on first use and cached.
#[derive(Debug)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    degrees: Vec<usize>,
    regular: bool,
    metric: OnceLock<Metric>,
}

impl Clone for Graph {
    fn clone(&self) -> Self {
        let metric = OnceLock::new();
        if let Some(m) = self.metric.get() {
            let _ = metric.set(m.clone());
        }
        Self {
            adjacency: self.adjacency.clone(),
            degrees: self.degrees.clone(),
            regular: self.regular,
            metric,
        }
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.adjacency == other.adjacency
    }
}

impl Graph {
    /// Builds a graph on `n` vertices from an edge list, enforcing simplicity and
    /// connectivity. Edge order does not matter.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let numbered: Vec<_> = edges.iter().enumerate().map(|(i, &e)| (i + 1, e)).collect();
        Self::from_numbered_edges(n, &numbered)
    }

    /// Same as [`Graph::from_edges`], with a caller-supplied line number per
    /// edge for error reporting.
    pub(crate) fn from_numbered_edges(
        n: usize,
        edges: &[(usize, (usize, usize))],
    ) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut seen = HashSet::with_capacity(edges.len());
        for &(line, (u, v)) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { line, vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { line, vertex: u });
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(GraphError::DuplicateEdge { line, u: key.0, v: key.1 });
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        Self::from_adjacency(adjacency)
    }

    fn from_adjacency(adjacency: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        let components = count_components(&adjacency);
        if components != 1 {
            return Err(GraphError::Disconnected { components });
        }
        let degrees: Vec<usize> = adjacency.iter().map(Vec::len).collect();
        let regular = degrees.windows(2).all(|w| w[0] == w[1]);
        Ok(Self { adjacency, degrees, regular, metric: OnceLock::new() })
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v]
    }

    pub fn is_regular(&self) -> bool {
        self.regular
    }

    pub fn edge_count(&self) -> usize {
        self.degrees.iter().sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn is_tree(&self) -> bool {
        self.edge_count() + 1 == self.n()
    }

    /// All-pairs hop distances, computed by BFS on first call.
    pub fn metric(&self) -> &Metric {
        self.metric.get_or_init(|| shortest_paths(self))
    }

    pub fn diameter(&self) -> u32 {
        self.metric().diameter()
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::IndexOutOfRange { vertex: v, n: self.n() })
        }
    }

    /// Serializes to the edge-list text format with an explicit `n=` header.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n={}\n", self.n());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

fn count_components(adjacency: &[Vec<usize>]) -> usize {
    let n = adjacency.len();
    let mut seen = vec![false; n];
    let mut components = 0;
    let mut stack = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        components += 1;
        seen[s] = true;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &v in &adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    components
}

/// Hop-distance matrix of a connected graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    n: usize,
    dist: Vec<u32>,
    diameter: u32,
}

impl Metric {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dist(&self, u: usize, v: usize) -> u32 {
        self.dist[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[u32] {
        &self.dist[u * self.n..(u + 1) * self.n]
    }

    pub fn diameter(&self) -> u32 {
        self.diameter
    }

    /// `Σ_y d(x, y) / n`, i.e. `W₁(δ_x, dx)`.
    pub fn mean_distance(&self, x: usize) -> f64 {
        self.row(x).iter().map(|&d| d as f64).sum::<f64>() / self.n as f64
    }
}

/// BFS from every vertex.
pub fn shortest_paths(g: &Graph) -> Metric {
    let n = g.n();
    let mut dist = vec![u32::MAX; n * n];
    let mut queue = VecDeque::with_capacity(n);
    for s in 0..n {
        let row = &mut dist[s * n..(s + 1) * n];
        row[s] = 0;
        queue.clear();
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let du = row[u];
            for &v in g.neighbors(u) {
                if row[v] == u32::MAX {
                    row[v] = du + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    let diameter = dist.iter().copied().max().unwrap_or(0);
    Metric { n, dist, diameter }
}

/// Applies the diffusion operator `A D^{-1}`: every vertex splits its value
/// uniformly among its neighbors. Preserves the total sum.
pub fn diffuse(g: &Graph, v: &VertexFunction) -> VertexFunction {
    assert_eq!(v.len(), g.n(), "vertex function length must equal n");
    let mut out = VertexFunction::zeros(g.n());
    for (u, nbrs) in g.adjacency().iter().enumerate() {
        let share = v[u] / nbrs.len() as f64;
        for &w in nbrs {
            out[w] += share;
        }
    }
    out
}
