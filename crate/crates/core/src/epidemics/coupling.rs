//! SIS and SIR run on one graphical construction.
//!
//! Poisson marks are generated for the SIS process: a recovery clock of rate 1
//! on each SIS-infected node, a transmission clock of rate `β` on each edge
//! leaving an SIS-infected node, and external marks from `L`. Every mark is
//! applied to both processes. A node recovering in SIR turns resistant while
//! the same mark returns it to susceptible in SIS, and the SIR-infected set
//! stays inside the SIS-infected set for the whole run, so `T_SIR ≤ T_SIS` on
//! every path.
//!
//! `L` is evaluated on the SIR state while SIR is alive and on the SIS state
//! afterwards. Each marginal is then an exact run of its model under a policy
//! within the same budget.

use rand::Rng;

use super::state::{EpidemicState, Fenwick};
use super::{Compartment, Horizon, Model, RunOutcome, SimulationError};
use crate::graphs::Graph;
use crate::rng::{exponential, stream_rng, DYNAMICS_STREAM};
use crate::strategies::{ExternalRates, Strategy};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledOutcome {
    pub sis: RunOutcome,
    pub sir: RunOutcome,
}

/// `horizon.max_events` caps the number of marks drawn.
pub fn coupled_sis_sir(
    g: &Graph,
    beta: f64,
    strategy: &Strategy,
    initial: &[usize],
    horizon: Horizon,
    seed: u64,
) -> Result<CoupledOutcome, SimulationError> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(SimulationError::InvalidBeta(beta));
    }
    horizon.validate()?;
    let prepared = strategy.prepare(g)?;
    let n = g.node_count();
    let mut sis = EpidemicState::new(g, Model::Sis, initial)?;
    let mut sir = EpidemicState::new(g, Model::Sir, initial)?;
    let mut rng = stream_rng(seed, DYNAMICS_STREAM);

    // Degree of every SIS-infected node.
    let mut spread = Fenwick::new(n);
    for &v in sis.infected.members() {
        spread.add(v, g.degree(v) as i64);
    }

    let mut marks = 0u64;
    let (mut sis_events, mut sir_events) = (0u64, 0u64);
    let mut sir_end: Option<f64> = (sir.infected.is_empty()).then_some(0.0);
    let mut censored = false;
    let mut external = ExternalRates::Zero;

    let refresh = |sis: &EpidemicState, sir: &EpidemicState, marks: u64, out: &mut ExternalRates| {
        let driver = if sir.infected.is_empty() { sis } else { sir };
        prepared.evaluate(&driver.compartments, driver.infected.len(), marks, out);
    };
    refresh(&sis, &sir, marks, &mut external);

    while !sis.infected.is_empty() {
        if marks >= horizon.max_events {
            censored = true;
            break;
        }
        let infected = sis.infected.len();
        let recover = infected as f64;
        let spread_total = spread.total();
        let intrinsic = beta * spread_total as f64;
        let ext = external.total(n);
        let total = recover + intrinsic + ext;
        let dt = exponential(&mut rng, total);
        if sis.time + dt > horizon.max_time {
            sis.time = horizon.max_time;
            censored = true;
            break;
        }
        sis.time += dt;
        marks += 1;

        let u = rng.gen::<f64>() * total;
        let mut changed = false;
        if u < recover || (spread_total == 0 && ext <= 0.0) {
            let v = sis.infected.members()[rng.gen_range(0..infected)];
            sis.recover(g, v);
            spread.add(v, -(g.degree(v) as i64));
            sis_events += 1;
            if sir.compartments[v] == Compartment::Infected {
                sir.recover(g, v);
                sir_events += 1;
            }
            changed = true;
        } else if (u < recover + intrinsic || ext <= 0.0) && spread_total > 0 {
            let source = spread.find(rng.gen_range(0..spread_total));
            let nbrs = g.neighbors(source);
            let target = nbrs[rng.gen_range(0..nbrs.len())];
            if sis.compartments[target] == Compartment::Susceptible {
                sis.infect(g, target);
                spread.add(target, g.degree(target) as i64);
                sis_events += 1;
                changed = true;
            }
            if sir.compartments[source] == Compartment::Infected && sir.compartments[target] == Compartment::Susceptible {
                sir.infect(g, target);
                sir_events += 1;
                changed = true;
            }
        } else {
            let target = pick_any(&external, n, ext, &mut rng);
            if sis.compartments[target] == Compartment::Susceptible {
                sis.infect(g, target);
                spread.add(target, g.degree(target) as i64);
                sis_events += 1;
                changed = true;
            }
            // L belongs to the SIS state once SIR is extinct
            if sir_end.is_none() && sir.compartments[target] == Compartment::Susceptible {
                sir.infect(g, target);
                sir_events += 1;
                changed = true;
            }
        }
        if sir_end.is_none() && sir.infected.is_empty() {
            sir_end = Some(sis.time);
        }
        if changed {
            refresh(&sis, &sir, marks, &mut external);
        }
    }

    let sir_censored = sir_end.is_none();
    let sis_out = RunOutcome {
        seed,
        model: Model::Sis,
        extinction_time: sis.time,
        censored,
        eventual_infected: sis.peak_infected,
        peak_infected: sis.peak_infected,
        event_count: sis_events,
    };
    let sir_out = RunOutcome {
        seed,
        model: Model::Sir,
        extinction_time: sir_end.unwrap_or(sis.time),
        censored: sir_censored,
        eventual_infected: sir.ever_infected,
        peak_infected: sir.peak_infected,
        event_count: sir_events,
    };
    Ok(CoupledOutcome { sis: sis_out, sir: sir_out })
}

/// Node drawn with probability `L_i / ‖L‖₁` over all nodes.
fn pick_any<R: Rng>(rates: &ExternalRates, n: usize, total: f64, rng: &mut R) -> usize {
    match rates {
        ExternalRates::Single { node, .. } => *node,
        ExternalRates::Uniform { .. } => rng.gen_range(0..n),
        ExternalRates::PerNode(v) => {
            let mut target = rng.gen::<f64>() * total;
            let mut last = 0;
            for (i, &r) in v.iter().enumerate() {
                if r > 0.0 {
                    if target < r {
                        return i;
                    }
                    target -= r;
                    last = i;
                }
            }
            last
        }
        ExternalRates::Zero => unreachable!("external mark drawn with zero external rate"),
    }
}
