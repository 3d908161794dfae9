//! File formats, experiment configuration and parameter sweeps on top of
//! [`episim_core`].
//!
//! * [`io`]: edge lists, trajectory logs and the per-run CSV.
//! * [`config`]: the TOML experiment description.
//! * [`batch`]: replications in parallel, in replication order.
//! * [`sweep`]: [`run_experiment`] and the JSON summary it produces.
//! * [`report`]: JSON records for analytic bounds and regime labels.

pub mod batch;
pub mod config;
pub mod io;
pub mod report;
pub mod sweep;

pub use config::{ExperimentConfig, GraphSpec};
pub use sweep::{run_experiment, SweepReport};
