//! Undirected simple graphs and the quantities that govern epidemic
//! thresholds: maximum degree, spectral radius and the generalized
//! isoperimetric constant.

use alloc::vec::Vec;

mod generators;
mod isoperimetric;
mod metrics;
mod spectral;

pub use generators::{
    complete, cycle, generate_gnp, generate_grid_torus, generate_power_law, generate_small_world,
    generate_star, path, torus_distance,
};
pub use isoperimetric::{isoperimetric_constant, EtaMode, Isoperimetric, EXHAUSTIVE_CAP};
pub use metrics::{EtaEntry, GraphMetrics};
pub use spectral::{spectral_radius, SpectralEstimate};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("graph must have at least one node")]
    Empty,
    #[error("edge endpoint {node} out of range for {node_count} nodes")]
    OutOfRange { node: usize, node_count: usize },
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("exact isoperimetric enumeration needs n <= {cap}, got {node_count}; use sampled mode")]
    TooLargeForExact { node_count: usize, cap: usize },
}

/// Immutable undirected simple graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
    max_degree: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges (in either
    /// orientation) are collapsed.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if node_count == 0 {
            return Err(GraphError::Empty);
        }
        let mut adjacency = alloc::vec![Vec::new(); node_count];
        for (u, v) in edges {
            for node in [u, v] {
                if node >= node_count {
                    return Err(GraphError::OutOfRange { node, node_count });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        Ok(Self::from_raw_adjacency(adjacency))
    }

    /// Empty graph on `node_count` nodes.
    pub fn edgeless(node_count: usize) -> Result<Self, GraphError> {
        Self::from_edges(node_count, core::iter::empty())
    }

    pub(crate) fn from_raw_adjacency(mut adjacency: Vec<Vec<usize>>) -> Self {
        let mut twice_edges = 0;
        let mut max_degree = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            twice_edges += list.len();
            max_degree = max_degree.max(list.len());
        }
        Self { adjacency, edge_count: twice_edges / 2, max_degree }
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    #[inline]
    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.adjacency.iter().map(Vec::len)
    }

    #[inline]
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn average_degree(&self) -> f64 {
        2.0 * self.edge_count as f64 / self.node_count() as f64
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Lowest-index node of maximum degree.
    pub fn max_degree_node(&self) -> usize {
        self.degrees()
            .enumerate()
            .fold((0, 0), |best, (i, d)| if d > best.1 { (i, d) } else { best })
            .0
    }

    /// Nodes sorted by decreasing degree, ties by increasing index.
    pub fn nodes_by_degree(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.node_count()).collect();
        order.sort_by(|&a, &b| self.degree(b).cmp(&self.degree(a)).then(a.cmp(&b)));
        order
    }

    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        let mut seen = alloc::vec![false; n];
        let mut stack = alloc::vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == n
    }
}
