//! Exact event-driven SIS/SIR epidemics on finite graphs aided by an external
//! infection agent of bounded virulence, together with the one-dimensional
//! birth-death machinery used to bound their extinction times.
//!
//! The crate is `no_std` and only needs `alloc`. Everything that touches files,
//! threads or the command line lives in the `episim` companion crate.
//!
//! Layout:
//!
//! * [`graphs`]: immutable simple graphs, generators, `λ₁` and `η(m)`.
//! * [`strategies`]: external-infection policies emitting a rate vector `L(t)`.
//! * [`epidemics`]: the exact jump-process simulator, batches and the SIS/SIR
//!   coupling.
//! * [`chains`]: birth-death chains, the reflected-at-zero embedding, upper and
//!   lower comparison chains and regime classification.
//! * [`stats`]: scaling fits and bootstrap intervals for sweep summaries.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod chains;
pub mod epidemics;
pub mod graphs;
pub mod logspace;
pub mod rng;
pub mod stats;
pub mod strategies;

pub use chains::{BirthDeathChain, Boundary, ChainError};
pub use epidemics::{
    Compartment, EpidemicState, Horizon, InitialRule, Model, RunOutcome, SimulationError,
    SimulationParams,
};
pub use graphs::{Graph, GraphError, GraphMetrics};
pub use strategies::Strategy;
