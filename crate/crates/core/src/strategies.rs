//! External-infection policies.
//!
//! A policy maps the current network state to a rate vector `L(t)` with
//! `L_i ≥ 0` and `‖L‖₁ ≤ μ(state)`; `L` is zero whenever no node is infected.
//! Rates are piecewise constant between events, so the simulator re-evaluates
//! the policy after every state change and the resulting process is exact.
//!
//! Policies return a compact [`ExternalRates`] so the event loop never has to
//! materialize an `n`-vector for the common single-target and uniform cases.
//! The `rates_*` functions give the dense vector form.

use alloc::vec::Vec;

use crate::epidemics::Compartment;
use crate::graphs::{Graph, GraphError};
use crate::rng::keyed_index;

/// External-infection policy and its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    /// No external source (`μ = 0`).
    Null,
    /// Whole budget on the highest-degree susceptible node, lowest index on ties.
    TargetedMaxDegree { mu: f64 },
    /// Whole budget on the lowest-index susceptible node of degree at least
    /// `threshold`; if there is none, on a susceptible node drawn uniformly
    /// from `(seed, draw index)`.
    DegreeThreshold { mu: f64, threshold: usize, seed: u64 },
    /// `L_i = μ/n` on every node, infected or not.
    Uniform { mu: f64 },
    /// Uniform split of a budget `γ·|I|` for `|I| < n^α`, frozen at
    /// `γ·⌊n^α⌋` above the cap.
    LinearScaling { gamma: f64, alpha: f64 },
    /// Extra edges that transmit at `rate` each: a susceptible node receives
    /// `rate` times its number of infected long-range peers.
    StaticLongRange { edges: Vec<(usize, usize)>, rate: f64 },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StrategyError {
    #[error("invalid strategy parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("long-range edge list: {0}")]
    LongRange(#[from] GraphError),
}

impl Strategy {
    pub const KIND_NAMES: [&'static str; 6] =
        ["null", "targeted_max_degree", "degree_threshold", "uniform", "linear_scaling", "static_long_range"];

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Null => "null",
            Self::TargetedMaxDegree { .. } => "targeted_max_degree",
            Self::DegreeThreshold { .. } => "degree_threshold",
            Self::Uniform { .. } => "uniform",
            Self::LinearScaling { .. } => "linear_scaling",
            Self::StaticLongRange { .. } => "static_long_range",
        }
    }

    pub fn validate(&self) -> Result<(), StrategyError> {
        let nonneg = |x: f64, what| if x.is_finite() && x >= 0.0 { Ok(()) } else { Err(StrategyError::InvalidParameter(what)) };
        match self {
            Self::Null => Ok(()),
            Self::TargetedMaxDegree { mu } | Self::Uniform { mu } => nonneg(*mu, "mu must be finite and >= 0"),
            Self::DegreeThreshold { mu, threshold, .. } => {
                nonneg(*mu, "mu must be finite and >= 0")?;
                if *threshold == 0 {
                    return Err(StrategyError::InvalidParameter("degree threshold must be >= 1"));
                }
                Ok(())
            }
            Self::LinearScaling { gamma, alpha } => {
                nonneg(*gamma, "gamma must be finite and >= 0")?;
                if !(*alpha > 0.0 && *alpha <= 1.0) {
                    return Err(StrategyError::InvalidParameter("alpha must lie in (0, 1]"));
                }
                Ok(())
            }
            Self::StaticLongRange { rate, .. } => nonneg(*rate, "long-range rate must be finite and >= 0"),
        }
    }

    /// `false` only for budgets that grow with the infected population.
    pub fn has_constant_budget(&self) -> bool {
        !matches!(self, Self::LinearScaling { .. })
    }

    /// Virulence bound `μ(state)` for a network of `n` nodes with
    /// `infected` infected nodes.
    pub fn budget(&self, n: usize, infected: usize) -> f64 {
        if infected == 0 {
            return 0.0;
        }
        match self {
            Self::Null => 0.0,
            Self::TargetedMaxDegree { mu } | Self::DegreeThreshold { mu, .. } | Self::Uniform { mu } => *mu,
            Self::LinearScaling { gamma, alpha } => {
                let cap = libm::pow(n as f64, *alpha);
                let i = infected as f64;
                if i < cap {
                    gamma * i
                } else {
                    gamma * libm::floor(cap)
                }
            }
            Self::StaticLongRange { edges, rate } => edges.len() as f64 * rate,
        }
    }

    /// Precomputes graph-dependent lookups for repeated evaluation.
    pub fn prepare<'a>(&'a self, g: &Graph) -> Result<PreparedStrategy<'a>, StrategyError> {
        self.validate()?;
        let n = g.node_count();
        let lookup = match self {
            Self::TargetedMaxDegree { .. } => Lookup::Order(g.nodes_by_degree()),
            Self::DegreeThreshold { threshold, .. } => {
                Lookup::Order((0..n).filter(|&i| g.degree(i) >= *threshold).collect())
            }
            Self::StaticLongRange { edges, .. } => Lookup::LongRange(Graph::from_edges(n, edges.iter().copied())?),
            _ => Lookup::None,
        };
        Ok(PreparedStrategy { strategy: self, node_count: n, lookup })
    }

    /// Dense rate vector at the given state.
    pub fn rate_vector(&self, g: &Graph, state: &[Compartment], draw: u64) -> Result<Vec<f64>, StrategyError> {
        let prepared = self.prepare(g)?;
        let infected = state.iter().filter(|c| **c == Compartment::Infected).count();
        let mut out = ExternalRates::Zero;
        prepared.evaluate(state, infected, draw, &mut out);
        Ok(out.to_dense(g.node_count()))
    }
}

/// Rate vector `L(t)` in compact form.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum ExternalRates {
    #[default]
    Zero,
    Single { node: usize, rate: f64 },
    Uniform { per_node: f64 },
    PerNode(Vec<f64>),
}

impl ExternalRates {
    /// `‖L‖₁` over all `n` nodes.
    pub fn total(&self, n: usize) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Single { rate, .. } => *rate,
            Self::Uniform { per_node } => per_node * n as f64,
            Self::PerNode(v) => v.iter().sum(),
        }
    }

    pub fn rate_at(&self, node: usize) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Single { node: target, rate } => {
                if *target == node {
                    *rate
                } else {
                    0.0
                }
            }
            Self::Uniform { per_node } => *per_node,
            Self::PerNode(v) => v[node],
        }
    }

    pub fn to_dense(&self, n: usize) -> Vec<f64> {
        (0..n).map(|i| self.rate_at(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Zero)
    }
}

#[derive(Debug, Clone)]
enum Lookup {
    None,
    Order(Vec<usize>),
    LongRange(Graph),
}

/// A [`Strategy`] bound to one graph.
#[derive(Debug, Clone)]
pub struct PreparedStrategy<'a> {
    strategy: &'a Strategy,
    node_count: usize,
    lookup: Lookup,
}

impl PreparedStrategy<'_> {
    pub fn strategy(&self) -> &Strategy {
        self.strategy
    }

    /// Writes `L` for the given state into `out`. `draw` indexes the random
    /// choice of policies that make one, so replays are exact.
    pub fn evaluate(&self, state: &[Compartment], infected: usize, draw: u64, out: &mut ExternalRates) {
        let n = self.node_count;
        if infected == 0 {
            *out = ExternalRates::Zero;
            return;
        }
        let susceptible = |i: &usize| state[*i] == Compartment::Susceptible;
        *out = match (self.strategy, &self.lookup) {
            (Strategy::Null, _) => ExternalRates::Zero,
            (Strategy::TargetedMaxDegree { mu }, Lookup::Order(order)) => match order.iter().find(|i| susceptible(i)) {
                Some(&node) if *mu > 0.0 => ExternalRates::Single { node, rate: *mu },
                _ => ExternalRates::Zero,
            },
            (Strategy::DegreeThreshold { mu, seed, .. }, Lookup::Order(high)) => {
                let target = high.iter().copied().find(|i| susceptible(i)).or_else(|| {
                    let count = state.iter().filter(|c| **c == Compartment::Susceptible).count();
                    if count == 0 {
                        return None;
                    }
                    let k = keyed_index(*seed, draw, count);
                    (0..n).filter(susceptible).nth(k)
                });
                match target {
                    Some(node) if *mu > 0.0 => ExternalRates::Single { node, rate: *mu },
                    _ => ExternalRates::Zero,
                }
            }
            (Strategy::Uniform { mu }, _) if *mu > 0.0 => ExternalRates::Uniform { per_node: mu / n as f64 },
            (Strategy::LinearScaling { .. }, _) => {
                let budget = self.strategy.budget(n, infected);
                if budget > 0.0 {
                    ExternalRates::Uniform { per_node: budget / n as f64 }
                } else {
                    ExternalRates::Zero
                }
            }
            (Strategy::StaticLongRange { rate, .. }, Lookup::LongRange(links)) => {
                let mut v = match core::mem::take(out) {
                    ExternalRates::PerNode(mut v) => {
                        v.clear();
                        v
                    }
                    _ => Vec::with_capacity(n),
                };
                v.extend((0..n).map(|i| {
                    if state[i] != Compartment::Susceptible {
                        return 0.0;
                    }
                    let hot = links.neighbors(i).iter().filter(|&&j| state[j] == Compartment::Infected).count();
                    hot as f64 * rate
                }));
                ExternalRates::PerNode(v)
            }
            _ => ExternalRates::Zero,
        };
    }
}

/// `L ≡ 0`.
pub fn rates_null(state: &[Compartment]) -> Vec<f64> {
    alloc::vec![0.0; state.len()]
}

pub fn rates_targeted_max_degree(state: &[Compartment], g: &Graph, mu: f64) -> Result<Vec<f64>, StrategyError> {
    Strategy::TargetedMaxDegree { mu }.rate_vector(g, state, 0)
}

pub fn rates_degree_threshold(
    state: &[Compartment],
    g: &Graph,
    mu: f64,
    threshold: usize,
    seed: u64,
    draw: u64,
) -> Result<Vec<f64>, StrategyError> {
    Strategy::DegreeThreshold { mu, threshold, seed }.rate_vector(g, state, draw)
}

pub fn rates_uniform(state: &[Compartment], g: &Graph, mu: f64) -> Result<Vec<f64>, StrategyError> {
    Strategy::Uniform { mu }.rate_vector(g, state, 0)
}

pub fn rates_linear_scaling(state: &[Compartment], g: &Graph, gamma: f64, alpha: f64) -> Result<Vec<f64>, StrategyError> {
    Strategy::LinearScaling { gamma, alpha }.rate_vector(g, state, 0)
}

pub fn rates_static_long_range(
    state: &[Compartment],
    g: &Graph,
    edges: &[(usize, usize)],
    rate: f64,
) -> Result<Vec<f64>, StrategyError> {
    Strategy::StaticLongRange { edges: edges.to_vec(), rate }.rate_vector(g, state, 0)
}

/// Rate at which external attempts actually convert a susceptible node,
/// given the compartments.
pub fn effective_rate(rates: &[f64], state: &[Compartment]) -> f64 {
    rates.iter().zip(state).filter(|(_, c)| **c == Compartment::Susceptible).map(|(r, _)| r).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{complete, cycle, generate_star};
    use alloc::vec;
    use Compartment::{Infected as I, Resistant as R, Susceptible as S};

    #[test]
    fn null_is_zero_everywhere() {
        assert_eq!(rates_null(&[I, S, S]), vec![0.0; 3]);
        assert_eq!(rates_null(&[S, S]), vec![0.0; 2]);
        assert_eq!(rates_null(&[I, I]), vec![0.0; 2]);
        let g = cycle(4).unwrap();
        assert_eq!(Strategy::Null.rate_vector(&g, &[I, I, I, I], 0).unwrap(), vec![0.0; 4]);
    }

    #[test]
    fn targeted_hits_susceptible_hub() {
        let g = generate_star(4).unwrap();
        let v = rates_targeted_max_degree(&[S, I, S, S, S], &g, 1.5).unwrap();
        assert_eq!(v, vec![1.5, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn targeted_ties_go_to_lowest_index() {
        let g = generate_star(4).unwrap();
        let v = rates_targeted_max_degree(&[I, I, S, I, S], &g, 1.0).unwrap();
        assert_eq!(v, vec![0.0, 0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn targeted_without_susceptibles_is_zero() {
        let g = generate_star(2).unwrap();
        assert_eq!(rates_targeted_max_degree(&[I, I, I], &g, 1.0).unwrap(), vec![0.0; 3]);
        assert_eq!(rates_targeted_max_degree(&[S, S, S], &g, 1.0).unwrap(), vec![0.0; 3]);
        // resistant nodes are not targets
        assert_eq!(rates_targeted_max_degree(&[R, I, S], &g, 1.0).unwrap(), vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn threshold_policy() {
        let g = generate_star(5).unwrap();
        let v = rates_degree_threshold(&[S, I, S, S, S, S], &g, 2.0, 5, 1, 0).unwrap();
        assert_eq!(v[0], 2.0);
        // nobody reaches the threshold: seed-determined uniform pick among 3 susceptibles
        let path = crate::graphs::path(6).unwrap();
        let state = [I, S, I, S, S, I];
        let a = rates_degree_threshold(&state, &path, 1.0, 3, 42, 7).unwrap();
        let b = rates_degree_threshold(&state, &path, 1.0, 3, 42, 7).unwrap();
        assert_eq!(a, b);
        let target = a.iter().position(|&r| r == 1.0).unwrap();
        assert_eq!(state[target], S);
        assert_eq!(a.iter().sum::<f64>(), 1.0);
        // all susceptible nodes qualify: lowest index wins
        let k = complete(4).unwrap();
        let v = rates_degree_threshold(&[I, I, S, S], &k, 1.0, 3, 0, 0).unwrap();
        assert_eq!(v, vec![0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn threshold_random_pick_covers_all_susceptibles() {
        let g = crate::graphs::path(6).unwrap();
        let state = [I, S, I, S, S, I];
        let mut hits = [0usize; 6];
        for draw in 0..600 {
            let v = rates_degree_threshold(&state, &g, 1.0, 3, 5, draw).unwrap();
            hits[v.iter().position(|&r| r > 0.0).unwrap()] += 1;
        }
        assert_eq!(hits[0] + hits[2] + hits[5], 0);
        assert!([1, 3, 4].iter().all(|&i| hits[i] > 150), "{hits:?}");
    }

    #[test]
    fn uniform_split() {
        let g = cycle(10).unwrap();
        let mut state = vec![S; 10];
        state[3] = I;
        assert_eq!(rates_uniform(&state, &g, 2.0).unwrap(), vec![0.2; 10]);
        assert_eq!(rates_uniform(&[S; 10], &g, 2.0).unwrap(), vec![0.0; 10]);
        let all = vec![I; 10];
        let v = rates_uniform(&all, &g, 2.0).unwrap();
        assert!((v.iter().sum::<f64>() - 2.0).abs() < 1e-12);
        assert_eq!(effective_rate(&v, &all), 0.0);
    }

    #[test]
    fn linear_scaling_budget() {
        let g = cycle(100).unwrap();
        let mut state = vec![S; 100];
        for s in state.iter_mut().take(4) {
            *s = I;
        }
        let v = rates_linear_scaling(&state, &g, 0.5, 0.5).unwrap();
        assert!((v.iter().sum::<f64>() - 2.0).abs() < 1e-12);
        assert!(v.iter().all(|&r| (r - 0.02).abs() < 1e-15));
        assert_eq!(rates_linear_scaling(&[S; 100], &g, 0.5, 0.5).unwrap(), vec![0.0; 100]);
        for s in state.iter_mut().take(50) {
            *s = I;
        }
        let capped = rates_linear_scaling(&state, &g, 0.5, 0.5).unwrap();
        assert!((capped.iter().sum::<f64>() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn linear_scaling_matches_uniform_at_equal_budget() {
        let g = cycle(100).unwrap();
        let mut state = vec![S; 100];
        for s in state.iter_mut().take(6) {
            *s = I;
        }
        let a = rates_linear_scaling(&state, &g, 0.5, 0.5).unwrap();
        let b = rates_uniform(&state, &g, 3.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn long_range_counts_infected_peers() {
        let g = cycle(6).unwrap();
        let v = rates_static_long_range(&[I, S, S, S, S, S], &g, &[(0, 3)], 0.7).unwrap();
        assert_eq!(v, vec![0.0, 0.0, 0.0, 0.7, 0.0, 0.0]);
        let none = rates_static_long_range(&[S, I, S, S, S, S], &g, &[(0, 3)], 0.7).unwrap();
        assert_eq!(none, vec![0.0; 6]);
        let v = rates_static_long_range(&[I, S, I, S, S, I], &g, &[(3, 0), (3, 2), (3, 4)], 0.5).unwrap();
        assert_eq!(v[3], 1.0);
    }

    #[test]
    fn parameter_validation() {
        assert!(Strategy::Uniform { mu: -1.0 }.validate().is_err());
        assert!(Strategy::LinearScaling { gamma: 1.0, alpha: 0.0 }.validate().is_err());
        assert!(Strategy::LinearScaling { gamma: 1.0, alpha: 1.5 }.validate().is_err());
        assert!(Strategy::DegreeThreshold { mu: 1.0, threshold: 0, seed: 0 }.validate().is_err());
        let g = cycle(4).unwrap();
        let bad = Strategy::StaticLongRange { edges: vec![(0, 9)], rate: 1.0 };
        assert!(bad.prepare(&g).is_err());
    }
}
