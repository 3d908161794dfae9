//! Exact continuous-time SIS/SIR dynamics with an external infection source.
//!
//! Cure rate is normalized to 1, every infected-susceptible edge transmits at
//! rate `β`, and the attached [`Strategy`] adds a state-dependent rate vector
//! `L(t)`. Trajectories are generated by aggregate-rate sampling: draw the
//! waiting time from the total rate, pick the event category, then the node.

use alloc::boxed::Box;
use alloc::vec::Vec;

use rand::seq::index;

use crate::graphs::Graph;
use crate::rng::{stream_rng, INITIAL_STREAM};
use crate::strategies::{Strategy, StrategyError};

mod coupling;
mod engine;
mod state;

pub use coupling::{coupled_sis_sir, CoupledOutcome};
pub use engine::{run_replication, simulate, simulate_batch, Simulation, Step};
pub use state::{audit_state, EpidemicState, NodeSet};

/// Node label: susceptible (0), infected (1) or resistant (e).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Compartment {
    Susceptible,
    Infected,
    Resistant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    Sis,
    Sir,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Self::Sis => "SIS",
            Self::Sir => "SIR",
        }
    }
}

/// Stop condition. A run reaching either limit before absorption is censored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Horizon {
    pub max_time: f64,
    pub max_events: u64,
}

impl Horizon {
    pub const fn events(max_events: u64) -> Self {
        Self { max_time: f64::INFINITY, max_events }
    }

    pub const fn time(max_time: f64) -> Self {
        Self { max_time, max_events: u64::MAX }
    }

    pub fn validate(&self) -> Result<(), SimulationError> {
        if !(self.max_time > 0.0) || self.max_events == 0 {
            return Err(SimulationError::InvalidHorizon);
        }
        Ok(())
    }
}

impl Default for Horizon {
    fn default() -> Self {
        Self::events(1_000_000)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationParams {
    pub model: Model,
    pub beta: f64,
    pub strategy: Strategy,
    pub horizon: Horizon,
}

impl SimulationParams {
    pub fn new(model: Model, beta: f64, strategy: Strategy) -> Self {
        Self { model, beta, strategy, horizon: Horizon::default() }
    }

    pub fn with_horizon(mut self, horizon: Horizon) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn validate(&self) -> Result<(), SimulationError> {
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(SimulationError::InvalidBeta(self.beta));
        }
        self.horizon.validate()?;
        self.strategy.validate()?;
        Ok(())
    }
}

/// Summary of one trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOutcome {
    pub seed: u64,
    pub model: Model,
    /// Absorption time, or the time the horizon was hit when `censored`.
    pub extinction_time: f64,
    pub censored: bool,
    /// SIR: nodes ever infected (the resistant count once absorbed).
    /// SIS: peak number of simultaneously infected nodes.
    pub eventual_infected: usize,
    pub peak_infected: usize,
    pub event_count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    Intrinsic,
    External,
    Recover,
}

impl EventKind {
    pub fn label(self) -> &'static str {
        match self {
            Self::Intrinsic => "INTRINSIC",
            Self::External => "EXTERNAL",
            Self::Recover => "RECOVER",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub time: f64,
    pub kind: EventKind,
    pub node: usize,
}

/// How the initially infected set is chosen for each replication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InitialRule {
    Fixed(Vec<usize>),
    /// `k` distinct nodes drawn uniformly.
    UniformRandom(usize),
    /// The highest-degree node, lowest index on ties.
    MaxDegree,
}

impl Default for InitialRule {
    fn default() -> Self {
        Self::UniformRandom(1)
    }
}

impl InitialRule {
    /// Initial set for a run keyed by `seed`. Random picks come from a stream
    /// separate from the dynamics.
    pub fn resolve(&self, g: &Graph, seed: u64) -> Result<Vec<usize>, SimulationError> {
        let n = g.node_count();
        match self {
            Self::Fixed(nodes) => {
                if let Some(&node) = nodes.iter().find(|&&v| v >= n) {
                    return Err(SimulationError::NodeOutOfRange { node, node_count: n });
                }
                Ok(nodes.clone())
            }
            Self::UniformRandom(k) => {
                if *k > n {
                    return Err(SimulationError::InitialTooLarge { requested: *k, node_count: n });
                }
                let mut rng = stream_rng(seed, INITIAL_STREAM);
                let mut picked = index::sample(&mut rng, n, *k).into_vec();
                picked.sort_unstable();
                Ok(picked)
            }
            Self::MaxDegree => Ok(alloc::vec![g.max_degree_node()]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimulationError {
    #[error("beta must be finite and positive, got {0}")]
    InvalidBeta(f64),
    #[error("horizon must allow positive time and at least one event")]
    InvalidHorizon,
    #[error("node {node} out of range for a graph with {node_count} nodes")]
    NodeOutOfRange { node: usize, node_count: usize },
    #[error("cannot pick {requested} distinct initial nodes from {node_count}")]
    InitialTooLarge { requested: usize, node_count: usize },
    #[error("replications must be at least 1")]
    NoReplications,
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error("replication {index}: {source}")]
    Replication { index: u64, source: Box<SimulationError> },
}
