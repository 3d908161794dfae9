//! Generalized isoperimetric constant
//! `η(m) = min_{S ⊆ V, 1 ≤ |S| ≤ m} |E(S, Sᶜ)| / |S|`.

use alloc::vec::Vec;

use rand::Rng;

use super::{Graph, GraphError};
use crate::rng::{stream_rng, METRICS_STREAM};

/// Largest graph accepted by exact enumeration.
pub const EXHAUSTIVE_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaMode {
    /// Enumerate every subset of size `<= m`.
    Exact,
    /// Minimum over randomly grown connected candidate sets; an upper bound.
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isoperimetric {
    pub value: f64,
    pub exact: bool,
}

pub fn isoperimetric_constant(g: &Graph, m: usize, mode: EtaMode) -> Result<Isoperimetric, GraphError> {
    let n = g.node_count();
    if m == 0 || m >= n {
        return Err(GraphError::InvalidParameter("isoperimetric size must satisfy 1 <= m < n"));
    }
    match mode {
        EtaMode::Exact => {
            if n > EXHAUSTIVE_CAP {
                return Err(GraphError::TooLargeForExact { node_count: n, cap: EXHAUSTIVE_CAP });
            }
            Ok(Isoperimetric { value: exact(g, m), exact: true })
        }
        EtaMode::Sampled { samples, seed } => Ok(Isoperimetric { value: sampled(g, m, samples, seed), exact: false }),
    }
}

fn exact(g: &Graph, m: usize) -> f64 {
    let n = g.node_count();
    let masks: Vec<u64> = (0..n)
        .map(|u| g.neighbors(u).iter().fold(0u64, |acc, &v| acc | (1 << v)))
        .collect();
    let limit = 1u64 << n;
    let full = limit - 1;
    let mut best = f64::INFINITY;
    for size in 1..=m {
        // Gosper's hack walks all n-bit words with `size` bits set.
        let mut set: u64 = (1u64 << size) - 1;
        while set < limit {
            let outside = !set & full;
            let mut boundary = 0u32;
            let mut bits = set;
            while bits != 0 {
                let u = bits.trailing_zeros() as usize;
                boundary += (masks[u] & outside).count_ones();
                bits &= bits - 1;
            }
            let ratio = f64::from(boundary) / size as f64;
            if ratio < best {
                best = ratio;
            }
            let low = set & set.wrapping_neg();
            let ripple = set + low;
            set = (((ripple ^ set) >> 2) / low) | ripple;
        }
    }
    best
}

fn sampled(g: &Graph, m: usize, samples: usize, seed: u64) -> f64 {
    let n = g.node_count();
    // singletons are free: η(m) <= min degree
    let mut best = g.degrees().min().unwrap_or(0) as f64;
    let mut rng = stream_rng(seed, METRICS_STREAM);
    let mut in_set = alloc::vec![false; n];
    let mut inside_neighbors = alloc::vec![0usize; n];
    let mut members = Vec::with_capacity(m);
    let mut frontier: Vec<usize> = Vec::new();
    for _ in 0..samples.max(1) {
        for &u in &members {
            in_set[u] = false;
        }
        members.clear();
        inside_neighbors.iter_mut().for_each(|c| *c = 0);
        let greedy = rng.gen::<bool>();
        let mut boundary = 0usize;
        let mut next = rng.gen_range(0..n);
        loop {
            boundary = boundary + g.degree(next) - 2 * inside_neighbors[next];
            in_set[next] = true;
            members.push(next);
            for &v in g.neighbors(next) {
                inside_neighbors[v] += 1;
            }
            let ratio = boundary as f64 / members.len() as f64;
            if ratio < best {
                best = ratio;
            }
            if members.len() == m {
                break;
            }
            frontier.clear();
            frontier.extend(members.iter().flat_map(|&u| g.neighbors(u).iter().copied()).filter(|&v| !in_set[v]));
            frontier.sort_unstable();
            frontier.dedup();
            next = if frontier.is_empty() {
                let outside: Vec<usize> = (0..n).filter(|&v| !in_set[v]).collect();
                outside[rng.gen_range(0..outside.len())]
            } else if greedy {
                // the addition that keeps the boundary smallest
                *frontier
                    .iter()
                    .min_by_key(|&&v| (g.degree(v) as isize - 2 * inside_neighbors[v] as isize, v))
                    .unwrap()
            } else {
                frontier[rng.gen_range(0..frontier.len())]
            };
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::super::{complete, cycle, generate_star};
    use super::*;

    #[test]
    fn complete_graph() {
        let eta = isoperimetric_constant(&complete(6).unwrap(), 3, EtaMode::Exact).unwrap();
        assert_eq!(eta, Isoperimetric { value: 3.0, exact: true });
    }

    #[test]
    fn cycle_arc() {
        let eta = isoperimetric_constant(&cycle(10).unwrap(), 4, EtaMode::Exact).unwrap();
        assert!((eta.value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn star_leaves() {
        let eta = isoperimetric_constant(&generate_star(5).unwrap(), 3, EtaMode::Exact).unwrap();
        assert_eq!(eta.value, 1.0);
    }

    #[test]
    fn parameter_checks() {
        let g = cycle(5).unwrap();
        assert!(isoperimetric_constant(&g, 0, EtaMode::Exact).is_err());
        assert!(isoperimetric_constant(&g, 5, EtaMode::Exact).is_err());
        let big = cycle(21).unwrap();
        assert_eq!(
            isoperimetric_constant(&big, 3, EtaMode::Exact),
            Err(GraphError::TooLargeForExact { node_count: 21, cap: EXHAUSTIVE_CAP })
        );
        assert!(isoperimetric_constant(&big, 3, EtaMode::Sampled { samples: 10, seed: 1 }).is_ok());
    }

    #[test]
    fn disconnected_reports_zero() {
        let g = Graph::from_edges(4, [(0, 1)]).unwrap();
        assert_eq!(isoperimetric_constant(&g, 2, EtaMode::Exact).unwrap().value, 0.0);
    }

    #[test]
    fn sampled_complete_graph_is_tight() {
        let g = complete(30).unwrap();
        let eta = isoperimetric_constant(&g, 5, EtaMode::Sampled { samples: 4, seed: 2 }).unwrap();
        assert_eq!(eta.value, 25.0);
        assert!(!eta.exact);
    }

    #[test]
    fn exact_at_cap_size() {
        let g = cycle(20).unwrap();
        let eta = isoperimetric_constant(&g, 10, EtaMode::Exact).unwrap();
        assert!((eta.value - 0.2).abs() < 1e-15);
    }
}
