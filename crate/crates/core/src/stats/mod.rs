//! Summary statistics for sweeps: scaling-family fits and bootstrap intervals.

mod bootstrap;
mod fit;

pub use bootstrap::bootstrap_ci;
pub use fit::{fit_scaling, FamilyFit, ScalingFamily, ScalingFit, ScalingPoint, STRETCHED_EXPONENT_GRID};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("all sizes are identical; nothing to regress on")]
    DegenerateSizes,
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}
