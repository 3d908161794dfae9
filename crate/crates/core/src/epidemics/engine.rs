use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::state::EpidemicState;
use super::{Event, EventKind, Horizon, InitialRule, Model, RunOutcome, SimulationError, SimulationParams};
use crate::graphs::Graph;
use crate::rng::{derive_seed, exponential, stream_rng, DYNAMICS_STREAM};
use crate::strategies::{ExternalRates, PreparedStrategy};

/// Result of advancing a [`Simulation`] by one event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    Event(Event),
    /// No infected node is left; nothing further can happen.
    Absorbed,
    /// The time or event limit was reached first.
    Horizon,
}

/// One trajectory, advanced event by event.
#[derive(Debug)]
pub struct Simulation<'a> {
    graph: &'a Graph,
    beta: f64,
    horizon: Horizon,
    strategy: PreparedStrategy<'a>,
    state: EpidemicState,
    rng: ChaCha8Rng,
    seed: u64,
    events: u64,
    censored: bool,
}

impl<'a> Simulation<'a> {
    pub fn new(g: &'a Graph, params: &'a SimulationParams, initial: &[usize], seed: u64) -> Result<Self, SimulationError> {
        params.validate()?;
        let strategy = params.strategy.prepare(g)?;
        let state = EpidemicState::new(g, params.model, initial)?;
        let mut sim = Self {
            graph: g,
            beta: params.beta,
            horizon: params.horizon,
            strategy,
            state,
            rng: stream_rng(seed, DYNAMICS_STREAM),
            seed,
            events: 0,
            censored: false,
        };
        sim.refresh_external();
        Ok(sim)
    }

    pub fn state(&self) -> &EpidemicState {
        &self.state
    }

    pub fn event_count(&self) -> u64 {
        self.events
    }

    fn refresh_external(&mut self) {
        let st = &mut self.state;
        self.strategy.evaluate(&st.compartments, st.infected.len(), self.events, &mut st.external);
    }

    pub fn step(&mut self) -> Step {
        if self.censored {
            return Step::Horizon;
        }
        let infected = self.state.infected.len();
        if infected == 0 {
            return Step::Absorbed;
        }
        if self.events >= self.horizon.max_events {
            self.censored = true;
            return Step::Horizon;
        }
        let pressure = self.state.pressure.total();
        let recover = infected as f64;
        let intrinsic = self.beta * pressure as f64;
        let external = self.state.effective_external_rate();
        let total = recover + intrinsic + external;

        let dt = exponential(&mut self.rng, total);
        if self.state.time + dt > self.horizon.max_time {
            self.state.time = self.horizon.max_time;
            self.censored = true;
            return Step::Horizon;
        }
        self.state.time += dt;

        let u = self.rng.gen::<f64>() * total;
        let (kind, node) = if u < recover || (pressure == 0 && external <= 0.0) {
            (EventKind::Recover, self.state.infected.members()[self.rng.gen_range(0..infected)])
        } else if (u < recover + intrinsic || external <= 0.0) && pressure > 0 {
            (EventKind::Intrinsic, self.state.pressure.find(self.rng.gen_range(0..pressure)))
        } else {
            (EventKind::External, self.pick_external(external))
        };
        match kind {
            EventKind::Recover => self.state.recover(self.graph, node),
            _ => self.state.infect(self.graph, node),
        }
        self.events += 1;
        self.refresh_external();
        Step::Event(Event { time: self.state.time, kind, node })
    }

    fn pick_external(&mut self, external: f64) -> usize {
        let st = &self.state;
        match &st.external {
            ExternalRates::Single { node, .. } => *node,
            ExternalRates::Uniform { .. } => st.susceptible.members()[self.rng.gen_range(0..st.susceptible.len())],
            ExternalRates::PerNode(v) => {
                let mut target = self.rng.gen::<f64>() * external;
                let mut last = None;
                for &i in st.susceptible.members() {
                    if v[i] > 0.0 {
                        if target < v[i] {
                            return i;
                        }
                        target -= v[i];
                        last = Some(i);
                    }
                }
                last.expect("positive external rate has a susceptible target")
            }
            ExternalRates::Zero => unreachable!("external event drawn with zero external rate"),
        }
    }

    /// Runs to absorption or the horizon, handing every event to `observer`.
    pub fn run_observed<F: FnMut(&Event)>(&mut self, mut observer: F) -> RunOutcome {
        while let Step::Event(e) = self.step() {
            observer(&e);
        }
        self.outcome()
    }

    pub fn run(&mut self) -> RunOutcome {
        self.run_observed(|_| {})
    }

    /// Outcome as of now; `censored` is only set once the horizon was hit.
    pub fn outcome(&self) -> RunOutcome {
        let st = &self.state;
        let eventual_infected = match st.model {
            Model::Sir => st.ever_infected,
            Model::Sis => st.peak_infected,
        };
        RunOutcome {
            seed: self.seed,
            model: st.model,
            extinction_time: st.time,
            censored: self.censored,
            eventual_infected,
            peak_infected: st.peak_infected,
            event_count: self.events,
        }
    }
}

/// One trajectory from `initial` under `seed`. An empty initial set is
/// absorbed at time 0 without any event.
pub fn simulate(g: &Graph, params: &SimulationParams, initial: &[usize], seed: u64) -> Result<RunOutcome, SimulationError> {
    Ok(Simulation::new(g, params, initial, seed)?.run())
}

/// Replication `index` of a batch: its seed is derived from
/// `(base_seed, index)` and its initial set from that seed.
pub fn run_replication(
    g: &Graph,
    params: &SimulationParams,
    initial: &InitialRule,
    base_seed: u64,
    index: u64,
) -> Result<RunOutcome, SimulationError> {
    let seed = derive_seed(base_seed, index);
    initial
        .resolve(g, seed)
        .and_then(|nodes| simulate(g, params, &nodes, seed))
        .map_err(|e| SimulationError::Replication { index, source: alloc::boxed::Box::new(e) })
}

/// Sequential batch. Each replication depends only on `(base_seed, index)`,
/// so any parallel schedule that orders results by index gives the same list.
pub fn simulate_batch(
    g: &Graph,
    params: &SimulationParams,
    initial: &InitialRule,
    replications: u64,
    base_seed: u64,
) -> Result<Vec<RunOutcome>, SimulationError> {
    if replications == 0 {
        return Err(SimulationError::NoReplications);
    }
    params.validate()?;
    (0..replications).map(|k| run_replication(g, params, initial, base_seed, k)).collect()
}
