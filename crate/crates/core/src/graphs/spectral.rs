//! Largest adjacency eigenvalue by power iteration.

use alloc::vec::Vec;

use rand::Rng;

use super::Graph;
use crate::rng::{stream_rng, METRICS_STREAM};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEstimate {
    /// Rayleigh-quotient estimate of `λ₁`.
    pub value: f64,
    pub iterations: usize,
    /// `false` when `max_iterations` ran out; `value` then holds the last estimate.
    pub converged: bool,
}

/// Estimates `λ₁` of the adjacency matrix.
///
/// Iterates `A + I` rather than `A`: on bipartite graphs `A` has `-λ₁` in its
/// spectrum and plain power iteration oscillates, while the shifted matrix has
/// a strictly dominant Perron root. The estimate is the Rayleigh quotient of
/// `A` at the current iterate; iteration stops once successive estimates move
/// by less than `tolerance`. Starts from the all-ones vector and, if that has
/// not converged after half the budget, restarts once from a random positive
/// vector.
pub fn spectral_radius(g: &Graph, tolerance: f64, max_iterations: usize) -> SpectralEstimate {
    if g.edge_count() == 0 {
        return SpectralEstimate { value: 0.0, iterations: 0, converged: true };
    }
    let tolerance = if tolerance > 0.0 { tolerance } else { 1e-12 };
    let n = g.node_count();
    let first_budget = max_iterations.div_ceil(2).max(1);

    let start = alloc::vec![1.0; n];
    let first = iterate(g, start, tolerance, first_budget);
    if first.converged {
        return first;
    }
    let mut rng = stream_rng(0x5EC7, METRICS_STREAM);
    let restart: Vec<f64> = (0..n).map(|_| 0.5 + rng.gen::<f64>()).collect();
    let second = iterate(g, restart, tolerance, max_iterations.saturating_sub(first_budget).max(1));
    SpectralEstimate { iterations: first.iterations + second.iterations, ..second }
}

fn iterate(g: &Graph, mut x: Vec<f64>, tolerance: f64, budget: usize) -> SpectralEstimate {
    let n = g.node_count();
    let mut ax = alloc::vec![0.0; n];
    normalize(&mut x);
    let mut previous = f64::NAN;
    let mut estimate = 0.0;
    for it in 1..=budget {
        multiply(g, &x, &mut ax);
        // x is unit length, so the Rayleigh quotient is x·Ax
        estimate = x.iter().zip(&ax).map(|(a, b)| a * b).sum::<f64>();
        if libm::fabs(estimate - previous) < tolerance {
            return SpectralEstimate { value: estimate, iterations: it, converged: true };
        }
        previous = estimate;
        for (xi, axi) in x.iter_mut().zip(&ax) {
            *xi += axi;
        }
        normalize(&mut x);
    }
    SpectralEstimate { value: estimate, iterations: budget, converged: false }
}

fn multiply(g: &Graph, x: &[f64], out: &mut [f64]) {
    for (u, o) in out.iter_mut().enumerate() {
        *o = g.neighbors(u).iter().map(|&v| x[v]).sum();
    }
}

fn normalize(x: &mut [f64]) {
    let norm = libm::sqrt(x.iter().map(|v| v * v).sum::<f64>());
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}

#[cfg(test)]
mod tests {
    use super::super::{complete, cycle, generate_grid_torus, generate_star};
    use super::*;

    fn radius(g: &Graph) -> f64 {
        let est = spectral_radius(g, 1e-12, 20_000);
        assert!(est.converged);
        est.value
    }

    #[test]
    fn known_values() {
        assert!((radius(&complete(5).unwrap()) - 4.0).abs() < 1e-9);
        assert!((radius(&cycle(8).unwrap()) - 2.0).abs() < 1e-9);
        assert!((radius(&generate_star(9).unwrap()) - 3.0).abs() < 1e-6);
        assert!((radius(&generate_star(100).unwrap()) - 10.0).abs() < 1e-6);
        assert!((radius(&generate_star(1).unwrap()) - 1.0).abs() < 1e-9);
        assert!((radius(&generate_grid_torus(10).unwrap()) - 4.0).abs() < 1e-9);
    }

    #[test]
    fn edgeless_is_zero() {
        let g = Graph::edgeless(4).unwrap();
        assert_eq!(spectral_radius(&g, 1e-9, 10).value, 0.0);
    }

    #[test]
    fn disconnected_takes_largest_component() {
        // K4 plus a disjoint edge
        let g = Graph::from_edges(6, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (4, 5)]).unwrap();
        assert!((radius(&g) - 3.0).abs() < 1e-9);
    }

    #[test]
    fn exhausted_budget_is_flagged() {
        let g = generate_star(50).unwrap();
        let est = spectral_radius(&g, 1e-15, 2);
        assert!(!est.converged);
        assert!(est.value > 0.0);
    }
}
