use alloc::vec::Vec;

use super::{isoperimetric_constant, spectral_radius, EtaMode, Graph, GraphError, EXHAUSTIVE_CAP};

/// Tolerance and iteration budget used by [`GraphMetrics::compute`].
pub const LAMBDA1_TOLERANCE: f64 = 1e-10;
pub const LAMBDA1_MAX_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaEntry {
    pub m: usize,
    pub value: f64,
    pub exact: bool,
}

/// Threshold-governing quantities of one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphMetrics {
    pub node_count: usize,
    pub d_max: usize,
    /// `d_avg = degree_sum / node_count`, kept as a ratio of integers.
    pub degree_sum: usize,
    pub lambda1: f64,
    pub lambda1_tolerance: f64,
    pub lambda1_converged: bool,
    pub eta: Vec<EtaEntry>,
}

impl GraphMetrics {
    /// Degrees, `λ₁`, and `η(m)` for each requested `m`.
    pub fn compute(g: &Graph, eta_sizes: &[usize], mode: EtaMode) -> Result<Self, GraphError> {
        let spectral = spectral_radius(g, LAMBDA1_TOLERANCE, LAMBDA1_MAX_ITERATIONS);
        let eta = eta_sizes
            .iter()
            .map(|&m| {
                isoperimetric_constant(g, m, mode).map(|r| EtaEntry { m, value: r.value, exact: r.exact })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            node_count: g.node_count(),
            d_max: g.max_degree(),
            degree_sum: 2 * g.edge_count(),
            lambda1: spectral.value,
            // the reported error bar is looser than the stopping rule
            lambda1_tolerance: 1e3 * LAMBDA1_TOLERANCE,
            lambda1_converged: spectral.converged,
            eta,
        })
    }

    /// Exact enumeration when the graph is small enough, sampling otherwise.
    pub fn auto_eta_mode(g: &Graph, seed: u64) -> EtaMode {
        if g.node_count() <= EXHAUSTIVE_CAP {
            EtaMode::Exact
        } else {
            EtaMode::Sampled { samples: 256, seed }
        }
    }

    pub fn d_avg(&self) -> f64 {
        self.degree_sum as f64 / self.node_count as f64
    }

    pub fn eta_at(&self, m: usize) -> Option<&EtaEntry> {
        self.eta.iter().find(|e| e.m == m)
    }

    /// `max(d_avg, √d_max) ≤ λ₁ ≤ d_max`, each side within `lambda1_tolerance`.
    pub fn sandwich_holds(&self) -> bool {
        let tol = self.lambda1_tolerance;
        let lower = self.d_avg().max(libm::sqrt(self.d_max as f64));
        lower <= self.lambda1 + tol && self.lambda1 <= self.d_max as f64 + tol
    }
}
