//! Simulated extinction times against the comparison chains, and the star
//! formulas against the simulator.

use episim_core::chains::{
    hub_regeneration_failure_probability, sis_lower_chain, sis_upper_chain, star_burst_probability, Clock,
};
use episim_core::epidemics::{simulate_batch, EventKind, InitialRule, Model, Simulation, SimulationParams, Step};
use episim_core::graphs::{complete, cycle, generate_gnp, generate_star, isoperimetric_constant, EtaMode, Graph};
use episim_core::rng::derive_seed;
use nalgebra::{DMatrix, DVector};
use episim_core::Strategy;

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

fn extinction_times(g: &Graph, beta: f64, strategy: Strategy, initial: InitialRule, reps: u64, seed: u64) -> Vec<f64> {
    let p = SimulationParams::new(Model::Sis, beta, strategy);
    let runs = simulate_batch(g, &p, &initial, reps, seed).unwrap();
    assert!(runs.iter().all(|r| !r.censored));
    runs.iter().map(|r| r.extinction_time).collect()
}

#[test]
fn upper_chain_dominates_every_strategy_on_ten_nodes() {
    let graphs = [cycle(10).unwrap(), generate_star(9).unwrap(), complete(10).unwrap(), generate_gnp(10, 0.4, 3).unwrap()];
    for g in &graphs {
        let d_max = g.max_degree() as f64;
        let beta = 0.5 / d_max;
        let bound = sis_upper_chain(beta, d_max, 1.0, 10).unwrap().absorption_from(1, Clock::Continuous).unwrap();
        let strategies = [
            Strategy::TargetedMaxDegree { mu: 1.0 },
            Strategy::Uniform { mu: 1.0 },
            Strategy::DegreeThreshold { mu: 1.0, threshold: g.max_degree(), seed: 5 },
            Strategy::StaticLongRange { edges: vec![(0, 5), (2, 7)], rate: 0.5 },
        ];
        for s in strategies {
            let t = extinction_times(g, beta, s.clone(), InitialRule::UniformRandom(1), 4000, 12);
            let (m, se) = mean_se(&t);
            assert!(m <= bound + 3.0 * se, "{s:?}: {m} ± {se} vs chain {bound}");
        }
    }
}

#[test]
fn lower_chain_is_dominated_on_complete_graph() {
    let g = complete(12).unwrap();
    let eta: Vec<f64> =
        (1..12).map(|m| isoperimetric_constant(&g, m, EtaMode::Exact).unwrap().value).collect();
    let chain = sis_lower_chain(0.2, |i| if i == 0 { 0.0 } else { eta[i - 1] }, |_| 0.0, 11).unwrap();
    let bound = chain.absorption_from(1, Clock::Continuous).unwrap();
    let t = extinction_times(&g, 0.2, Strategy::Null, InitialRule::UniformRandom(1), 4000, 4);
    let (m, se) = mean_se(&t);
    assert!(m >= bound - 3.0 * se, "{m} ± {se} vs chain {bound}");
}

#[test]
fn star_burst_probability_matches_simulation() {
    let (leaves, beta) = (60usize, 0.3);
    let g = generate_star(leaves).unwrap();
    let p = SimulationParams::new(Model::Sis, beta, Strategy::Null);
    let reps = 20_000u64;
    let mut at_first_recovery = Vec::with_capacity(reps as usize);
    for k in 0..reps {
        let mut sim = Simulation::new(&g, &p, &[0], derive_seed(31, k)).unwrap();
        let mut count = 1usize;
        while let Step::Event(e) = sim.step() {
            if e.kind == EventKind::Recover {
                break;
            }
            count += 1;
        }
        at_first_recovery.push(count);
    }
    for k in [2usize, 4, 6, 8] {
        let exact = star_burst_probability(beta, leaves, k).unwrap();
        let hits = at_first_recovery.iter().filter(|&&c| c >= k).count() as f64 / reps as f64;
        let se = (exact * (1.0 - exact) / reps as f64).sqrt();
        assert!((hits - exact).abs() <= 3.5 * se + 1e-12, "k {k}: {hits} vs {exact}");
    }
}

#[test]
fn hub_regeneration_failure_matches_simulation() {
    let (leaves, beta, mu, n_tilde) = (20usize, 0.1, 1.0, 4usize);
    let g = generate_star(leaves).unwrap();
    let p = SimulationParams::new(Model::Sis, beta, Strategy::TargetedMaxDegree { mu });
    let initial: Vec<usize> = (1..=n_tilde).collect();
    let reps = 40_000u64;
    let mut failures = 0u64;
    for k in 0..reps {
        let mut sim = Simulation::new(&g, &p, &initial, derive_seed(8, k)).unwrap();
        loop {
            match sim.step() {
                Step::Event(e) if e.kind == EventKind::Recover => continue,
                Step::Event(_) => break,
                _ => {
                    failures += 1;
                    break;
                }
            }
        }
    }
    let exact = hub_regeneration_failure_probability(n_tilde, beta, mu).unwrap();
    let freq = failures as f64 / reps as f64;
    let se = (exact * (1.0 - exact) / reps as f64).sqrt();
    assert!((freq - exact).abs() <= 3.5 * se, "{freq} vs {exact}");
}

/// Solves `(diag(q) − R) x = b` for a chain given as `(rates out, reward)`
/// per state; absorbing states have no transitions.
fn solve_chain(transitions: &[Vec<(f64, usize)>], reward: &[f64]) -> Vec<f64> {
    let n = transitions.len();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for (i, out) in transitions.iter().enumerate() {
        if out.is_empty() {
            a[(i, i)] = 1.0;
            continue;
        }
        for &(rate, j) in out {
            a[(i, i)] += rate;
            a[(i, j)] -= rate;
        }
    }
    let b = DVector::from_column_slice(reward);
    a.lu().solve(&b).unwrap().iter().copied().collect()
}

// Under the targeted policy a star is a Markov chain on (hub infected, infected leaves).
#[test]
fn targeted_star_sis_matches_exact_chain() {
    let m = 30usize;
    let (beta, mu) = ((m as f64).powf(-0.7), 1.0);
    let id = |h: usize, k: usize| h * (m + 1) + k;
    let mut tr = vec![Vec::new(); 2 * (m + 1)];
    let mut reward = vec![1.0; 2 * (m + 1)];
    reward[id(0, 0)] = 0.0;
    for k in 0..=m {
        if k > 0 {
            tr[id(0, k)].push((beta * k as f64 + mu, id(1, k)));
            tr[id(0, k)].push((k as f64, id(0, k - 1)));
            tr[id(1, k)].push((k as f64, id(1, k - 1)));
        }
        if k < m {
            tr[id(1, k)].push((beta * (m - k) as f64 + mu, id(1, k + 1)));
        }
        tr[id(1, k)].push((1.0, id(0, k)));
    }
    let exact = solve_chain(&tr, &reward);
    let g = generate_star(m).unwrap();
    let p = SimulationParams::new(Model::Sis, beta, Strategy::TargetedMaxDegree { mu });
    for (start, state) in [(0usize, id(1, 0)), (1, id(0, 1))] {
        let t = extinction_times(&g, beta, p.strategy.clone(), InitialRule::Fixed(vec![start]), 20_000, 40 + start as u64);
        let (mean, se) = mean_se(&t);
        assert!((mean - exact[state]).abs() <= 3.0 * se, "start {start}: {mean} ± {se} vs {}", exact[state]);
    }
}

// SIR on a targeted star: (hub S/I/R, infected leaves, resistant leaves); the reward counts infections.
#[test]
fn targeted_star_sir_eventual_infected_matches_exact_chain() {
    let m = 20usize;
    let (beta, mu) = ((m as f64).powf(-0.7), 1.0);
    let mut ids = std::collections::HashMap::new();
    for h in 0..3 {
        for i in 0..=m {
            for r in 0..=m - i {
                let next = ids.len();
                ids.insert((h, i, r), next);
            }
        }
    }
    let mut tr = vec![Vec::new(); ids.len()];
    let mut reward = vec![0.0; ids.len()];
    for (&(h, i, r), &k) in &ids {
        let s = m - i - r;
        if h != 1 && i == 0 {
            continue;
        }
        let mut infections = 0.0;
        let mut push = |rate: f64, to: (usize, usize, usize), infection: bool| {
            tr[k].push((rate, ids[&to]));
            if infection {
                infections += rate;
            }
        };
        match h {
            1 => {
                if s > 0 {
                    push(beta * s as f64 + mu, (1, i + 1, r), true);
                }
                push(1.0, (2, i, r), false);
            }
            0 => push(beta * i as f64 + mu, (1, i, r), true),
            _ => {
                if s > 0 {
                    push(mu, (2, i + 1, r), true);
                }
            }
        }
        if i > 0 {
            push(i as f64, (h, i - 1, r + 1), false);
        }
        let q: f64 = tr[k].iter().map(|t| t.0).sum();
        reward[k] = infections / q;
        for t in &mut tr[k] {
            t.0 /= q;
        }
    }
    // with rates normalised to jump probabilities the same solve gives expected infections
    let exact = solve_chain(&tr, &reward);
    let g = generate_star(m).unwrap();
    let p = SimulationParams::new(Model::Sir, beta, Strategy::TargetedMaxDegree { mu });
    for (start, state) in [(0usize, (1, 0, 0)), (1, (0, 1, 0))] {
        let runs = simulate_batch(&g, &p, &InitialRule::Fixed(vec![start]), 20_000, 60 + start as u64).unwrap();
        let n: Vec<f64> = runs.iter().map(|r| r.eventual_infected as f64).collect();
        let (mean, se) = mean_se(&n);
        let want = 1.0 + exact[ids[&state]];
        assert!((mean - want).abs() <= 3.0 * se, "start {start}: {mean} ± {se} vs {want}");
    }
}
