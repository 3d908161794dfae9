//! Per-node compartments plus the incremental bookkeeping that makes each
//! event O(degree · log n).

use alloc::vec::Vec;

use super::{Compartment, Model, SimulationError};
use crate::graphs::Graph;
use crate::strategies::ExternalRates;

const ABSENT: usize = usize::MAX;

/// Index set over `0..n` with O(1) insert, remove, membership and uniform pick.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSet {
    members: Vec<usize>,
    position: Vec<usize>,
}

impl NodeSet {
    pub fn new(n: usize) -> Self {
        Self { members: Vec::new(), position: alloc::vec![ABSENT; n] }
    }

    #[inline]
    pub fn contains(&self, node: usize) -> bool {
        self.position[node] != ABSENT
    }

    pub fn insert(&mut self, node: usize) -> bool {
        if self.contains(node) {
            return false;
        }
        self.position[node] = self.members.len();
        self.members.push(node);
        true
    }

    pub fn remove(&mut self, node: usize) -> bool {
        let at = self.position[node];
        if at == ABSENT {
            return false;
        }
        let last = *self.members.last().expect("non-empty when a member exists");
        self.members.swap_remove(at);
        if last != node {
            self.position[last] = at;
        }
        self.position[node] = ABSENT;
        true
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    #[inline]
    pub fn members(&self) -> &[usize] {
        &self.members
    }
}

/// Fenwick tree over non-negative integer weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Fenwick {
    tree: Vec<u64>,
    total: u64,
}

impl Fenwick {
    pub(crate) fn new(n: usize) -> Self {
        Self { tree: alloc::vec![0; n + 1], total: 0 }
    }

    pub(crate) fn add(&mut self, index: usize, delta: i64) {
        self.total = self.total.wrapping_add_signed(delta);
        let mut i = index + 1;
        while i < self.tree.len() {
            self.tree[i] = self.tree[i].wrapping_add_signed(delta);
            i += i & i.wrapping_neg();
        }
    }

    #[inline]
    pub(crate) fn total(&self) -> u64 {
        self.total
    }

    fn prefix(&self, end: usize) -> u64 {
        let mut i = end;
        let mut sum = 0u64;
        while i > 0 {
            sum = sum.wrapping_add(self.tree[i]);
            i &= i - 1;
        }
        sum
    }

    pub(crate) fn weight(&self, index: usize) -> u64 {
        self.prefix(index + 1).wrapping_sub(self.prefix(index))
    }

    /// Smallest index whose inclusive prefix sum exceeds `target`
    /// (`target < total`).
    pub(crate) fn find(&self, mut target: u64) -> usize {
        let n = self.tree.len() - 1;
        let mut pos = 0usize;
        let mut step = if n == 0 { 0 } else { 1usize << (usize::BITS - 1 - n.leading_zeros()) };
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= target {
                target -= self.tree[next];
                pos = next;
            }
            step >>= 1;
        }
        pos
    }
}

/// Network state of one trajectory.
#[derive(Debug, Clone)]
pub struct EpidemicState {
    pub(crate) model: Model,
    pub(crate) compartments: Vec<Compartment>,
    pub(crate) infected: NodeSet,
    pub(crate) susceptible: NodeSet,
    /// Infected neighbours of every node.
    pub(crate) edge_pressure: Vec<u32>,
    /// `edge_pressure` restricted to susceptible nodes.
    pub(crate) pressure: Fenwick,
    pub(crate) time: f64,
    pub(crate) external: ExternalRates,
    pub(crate) ever_infected: usize,
    pub(crate) peak_infected: usize,
}

impl EpidemicState {
    /// All nodes susceptible except `initial`, which are infected. Repeated
    /// entries are ignored.
    pub fn new(g: &Graph, model: Model, initial: &[usize]) -> Result<Self, SimulationError> {
        let n = g.node_count();
        if let Some(&node) = initial.iter().find(|&&v| v >= n) {
            return Err(SimulationError::NodeOutOfRange { node, node_count: n });
        }
        let mut state = Self {
            model,
            compartments: alloc::vec![Compartment::Susceptible; n],
            infected: NodeSet::new(n),
            susceptible: NodeSet::new(n),
            edge_pressure: alloc::vec![0; n],
            pressure: Fenwick::new(n),
            time: 0.0,
            external: ExternalRates::Zero,
            ever_infected: 0,
            peak_infected: 0,
        };
        for v in 0..n {
            state.susceptible.insert(v);
        }
        for &v in initial {
            if state.compartments[v] == Compartment::Susceptible {
                state.infect(g, v);
            }
        }
        Ok(state)
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn compartments(&self) -> &[Compartment] {
        &self.compartments
    }

    pub fn infected(&self) -> &NodeSet {
        &self.infected
    }

    pub fn susceptible(&self) -> &NodeSet {
        &self.susceptible
    }

    #[inline]
    pub fn infected_count(&self) -> usize {
        self.infected.len()
    }

    pub fn resistant_count(&self) -> usize {
        self.compartments.len() - self.infected.len() - self.susceptible.len()
    }

    pub fn edge_pressure(&self) -> &[u32] {
        &self.edge_pressure
    }

    /// `Σ edge_pressure` over susceptible nodes; the intrinsic rate is `β` times this.
    pub fn susceptible_pressure(&self) -> u64 {
        self.pressure.total()
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn external_rates(&self) -> &ExternalRates {
        &self.external
    }

    /// Part of `‖L‖₁` that falls on susceptible nodes.
    pub fn effective_external_rate(&self) -> f64 {
        match &self.external {
            ExternalRates::Zero => 0.0,
            ExternalRates::Single { node, rate } => {
                if self.susceptible.contains(*node) {
                    *rate
                } else {
                    0.0
                }
            }
            ExternalRates::Uniform { per_node } => per_node * self.susceptible.len() as f64,
            ExternalRates::PerNode(v) => self.susceptible.members().iter().map(|&i| v[i]).sum(),
        }
    }

    pub(crate) fn infect(&mut self, g: &Graph, v: usize) {
        debug_assert_eq!(self.compartments[v], Compartment::Susceptible);
        self.compartments[v] = Compartment::Infected;
        self.susceptible.remove(v);
        self.infected.insert(v);
        self.pressure.add(v, -i64::from(self.edge_pressure[v]));
        for &u in g.neighbors(v) {
            self.edge_pressure[u] += 1;
            if self.compartments[u] == Compartment::Susceptible {
                self.pressure.add(u, 1);
            }
        }
        self.ever_infected += 1;
        self.peak_infected = self.peak_infected.max(self.infected.len());
    }

    pub(crate) fn recover(&mut self, g: &Graph, v: usize) {
        debug_assert_eq!(self.compartments[v], Compartment::Infected);
        self.infected.remove(v);
        match self.model {
            Model::Sis => {
                self.compartments[v] = Compartment::Susceptible;
                self.susceptible.insert(v);
                self.pressure.add(v, i64::from(self.edge_pressure[v]));
            }
            Model::Sir => self.compartments[v] = Compartment::Resistant,
        }
        for &u in g.neighbors(v) {
            self.edge_pressure[u] -= 1;
            if self.compartments[u] == Compartment::Susceptible {
                self.pressure.add(u, -1);
            }
        }
    }
}

/// Recomputes every counter from the compartments alone and compares it with
/// the incremental bookkeeping.
pub fn audit_state(state: &EpidemicState, g: &Graph) -> bool {
    let n = g.node_count();
    if state.compartments.len() != n {
        return false;
    }
    let infected = state.compartments.iter().filter(|c| **c == Compartment::Infected).count();
    if infected != state.infected.len() {
        return false;
    }
    if state.model == Model::Sis && state.compartments.contains(&Compartment::Resistant) {
        return false;
    }
    let mut pressure_total = 0u64;
    for v in 0..n {
        let c = state.compartments[v];
        if state.infected.contains(v) != (c == Compartment::Infected)
            || state.susceptible.contains(v) != (c == Compartment::Susceptible)
        {
            return false;
        }
        let hot = g.neighbors(v).iter().filter(|&&u| state.compartments[u] == Compartment::Infected).count();
        if state.edge_pressure[v] as usize != hot {
            return false;
        }
        let expected = if c == Compartment::Susceptible { hot as u64 } else { 0 };
        if state.pressure.weight(v) != expected {
            return false;
        }
        pressure_total += expected;
    }
    pressure_total == state.pressure.total()
}
