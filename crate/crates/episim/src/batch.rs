use rayon::prelude::*;

use episim_core::epidemics::{run_replication, InitialRule, RunOutcome, SimulationError, SimulationParams};
use episim_core::Graph;

/// Same list as [`episim_core::epidemics::simulate_batch`], computed on the
/// rayon pool. On failure the error of the lowest failing replication is
/// returned.
pub fn parallel_batch(
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
    let results: Vec<_> =
        (0..replications).into_par_iter().map(|k| run_replication(g, params, initial, base_seed, k)).collect();
    results.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use episim_core::epidemics::{simulate_batch, Model};
    use episim_core::graphs::generate_star;
    use episim_core::Strategy;

    #[test]
    fn parallel_matches_sequential() {
        let g = generate_star(30).unwrap();
        let p = SimulationParams::new(Model::Sis, 0.2, Strategy::TargetedMaxDegree { mu: 1.0 });
        let rule = InitialRule::UniformRandom(1);
        assert_eq!(parallel_batch(&g, &p, &rule, 300, 5).unwrap(), simulate_batch(&g, &p, &rule, 300, 5).unwrap());
    }

    #[test]
    fn reports_lowest_failing_replication() {
        let g = generate_star(3).unwrap();
        let p = SimulationParams::new(Model::Sis, 0.2, Strategy::Null);
        let err = parallel_batch(&g, &p, &InitialRule::UniformRandom(9), 50, 1).unwrap_err();
        assert!(matches!(err, SimulationError::Replication { index: 0, .. }));
    }
}
