//! Deterministic families and seeded random graph generators.

use alloc::vec::Vec;

use rand::Rng;

use super::{Graph, GraphError};
use crate::rng::{stream_rng, DYNAMICS_STREAM};

/// Star with hub `0` and leaves `1..=leaves`.
pub fn generate_star(leaves: usize) -> Result<Graph, GraphError> {
    if leaves == 0 {
        return Err(GraphError::InvalidParameter("star needs at least one leaf"));
    }
    Graph::from_edges(leaves + 1, (1..=leaves).map(|leaf| (0, leaf)))
}

/// Complete graph `K_n`.
pub fn complete(n: usize) -> Result<Graph, GraphError> {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

/// Cycle `C_n`, `n >= 3`.
pub fn cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::InvalidParameter("cycle needs at least three nodes"));
    }
    Graph::from_edges(n, (0..n).map(|u| (u, (u + 1) % n)))
}

/// Path `P_n`.
pub fn path(n: usize) -> Result<Graph, GraphError> {
    Graph::from_edges(n, (1..n).map(|u| (u - 1, u)))
}

/// Erdős–Rényi `G(n, p)`: every unordered pair independently with probability `p`.
pub fn generate_gnp(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidParameter("edge probability must lie in [0, 1]"));
    }
    if n == 0 {
        return Err(GraphError::Empty);
    }
    let mut rng = stream_rng(seed, DYNAMICS_STREAM);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

fn torus_edges(side: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..side * side).flat_map(move |u| {
        let (r, c) = (u / side, u % side);
        [((r + 1) % side) * side + c, r * side + (c + 1) % side]
            .into_iter()
            .map(move |v| (u, v))
    })
}

/// `side × side` grid with wrap-around. For `side == 2` the two wrap edges of
/// each row and column coincide and collapse, leaving degree 2.
pub fn generate_grid_torus(side: usize) -> Result<Graph, GraphError> {
    if side < 2 {
        return Err(GraphError::InvalidParameter("torus side must be at least 2"));
    }
    Graph::from_edges(side * side, torus_edges(side))
}

/// Lattice (Manhattan) distance on the `side × side` torus.
pub fn torus_distance(side: usize, u: usize, v: usize) -> usize {
    let wrap = |a: usize, b: usize| {
        let d = a.abs_diff(b);
        d.min(side - d)
    };
    wrap(u / side, v / side) + wrap(u % side, v % side)
}

/// Kleinberg-style small world: the torus plus one long-range edge per node,
/// whose far end is drawn with probability proportional to
/// `distance^(-link_exponent)`. Draws landing on the node itself or on a
/// current neighbour are redrawn, which is the same as sampling from the
/// distribution restricted to non-neighbours.
pub fn generate_small_world(side: usize, link_exponent: f64, seed: u64) -> Result<Graph, GraphError> {
    if side < 2 {
        return Err(GraphError::InvalidParameter("torus side must be at least 2"));
    }
    if !link_exponent.is_finite() {
        return Err(GraphError::InvalidParameter("link exponent must be finite"));
    }
    let n = side * side;
    let mut adjacency: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
    for (u, v) in torus_edges(side) {
        if !adjacency[u].contains(&v) {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
    }
    let mut rng = stream_rng(seed, DYNAMICS_STREAM);
    let mut weights = alloc::vec![0.0f64; n];
    for u in 0..n {
        let mut total = 0.0;
        for (v, w) in weights.iter_mut().enumerate() {
            *w = if v == u || adjacency[u].contains(&v) {
                0.0
            } else {
                libm::pow(torus_distance(side, u, v) as f64, -link_exponent)
            };
            total += *w;
        }
        if total <= 0.0 {
            continue;
        }
        let mut target = rng.gen::<f64>() * total;
        let mut pick = None;
        for (v, &w) in weights.iter().enumerate() {
            if w > 0.0 {
                pick = Some(v);
                if target < w {
                    break;
                }
                target -= w;
            }
        }
        if let Some(v) = pick {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
    }
    Ok(Graph::from_raw_adjacency(adjacency))
}

/// Linear preferential attachment: a seed clique on `attachment_edges + 1`
/// nodes, then every arrival draws `attachment_edges` endpoints with
/// probability proportional to degree. Repeated draws of the same endpoint
/// collapse into one edge.
pub fn generate_power_law(n: usize, attachment_edges: usize, seed: u64) -> Result<Graph, GraphError> {
    if attachment_edges == 0 {
        return Err(GraphError::InvalidParameter("attachment_edges must be at least 1"));
    }
    if n <= attachment_edges {
        return Err(GraphError::InvalidParameter("n must exceed attachment_edges"));
    }
    let core_size = attachment_edges + 1;
    let mut edges = Vec::new();
    // each node appears once per incident edge
    let mut endpoints = Vec::new();
    for u in 0..core_size {
        for v in u + 1..core_size {
            edges.push((u, v));
            endpoints.push(u);
            endpoints.push(v);
        }
    }
    let mut rng = stream_rng(seed, DYNAMICS_STREAM);
    let mut chosen = Vec::with_capacity(attachment_edges);
    for v in core_size..n {
        chosen.clear();
        for _ in 0..attachment_edges {
            let target = endpoints[rng.gen_range(0..endpoints.len())];
            if !chosen.contains(&target) {
                chosen.push(target);
            }
        }
        for &t in &chosen {
            edges.push((t, v));
            endpoints.push(t);
            endpoints.push(v);
        }
    }
    Graph::from_edges(n, edges)
}
