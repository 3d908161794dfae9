//! Comparison chains for the infected count and the closed-form bounds built
//! on them.

use super::{BirthDeathChain, Boundary, ChainError, Clock};
use crate::logspace::LogSum;

fn check_nonneg(x: f64, what: &'static str) -> Result<(), ChainError> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(ChainError::InvalidParameter(what))
    }
}

/// Dominating chain for `|I(t)|`: `i → i+1` at `β·d_max·i + μ`, `i → i−1`
/// at `i`, on `{0, …, n}`.
pub fn sis_upper_chain(beta: f64, d_max: f64, mu: f64, n: usize) -> Result<BirthDeathChain, ChainError> {
    check_nonneg(beta, "beta must be finite and >= 0")?;
    check_nonneg(d_max, "d_max must be finite and >= 0")?;
    check_nonneg(mu, "mu must be finite and >= 0")?;
    let x = beta * d_max;
    BirthDeathChain::from_rates(n, |i| x * i as f64 + mu, |i| i as f64, Boundary::Absorbing)
}

/// Under-dominating chain: `i → i+1` at `β·η(i)·i + μ(i)`, `i → i−1` at `i`,
/// on `{0, …, m}`. `eta` must not exceed the graph's true `η(i)` and `mu`
/// must not exceed the effective external rate at `i` infected nodes.
pub fn sis_lower_chain<E, M>(beta: f64, eta: E, mu: M, m: usize) -> Result<BirthDeathChain, ChainError>
where
    E: Fn(usize) -> f64,
    M: Fn(usize) -> f64,
{
    check_nonneg(beta, "beta must be finite and >= 0")?;
    BirthDeathChain::from_rates(
        m,
        |i| if i == 0 { mu(0) } else { beta * eta(i) * i as f64 + mu(i) },
        |i| i as f64,
        Boundary::Absorbing,
    )
}

/// `Σ_{k≥1} (βd)^k (k+1)^{μ/(βd)}` with `βd = β·d_max`: the first `n` terms
/// summed directly, the remainder bounded by a geometric majorant, so the
/// result is an upper bound on the infinite series.
pub fn subcritical_series_bound(beta: f64, d_max: f64, mu: f64, n: usize) -> Result<f64, ChainError> {
    check_nonneg(beta, "beta must be finite and >= 0")?;
    check_nonneg(d_max, "d_max must be finite and >= 0")?;
    check_nonneg(mu, "mu must be finite and >= 0")?;
    let x = beta * d_max;
    if x >= 1.0 {
        return Err(ChainError::SeriesDiverges { ratio: x });
    }
    if x == 0.0 {
        return if mu == 0.0 { Ok(0.0) } else { Err(ChainError::InvalidParameter("beta * d_max must be positive when mu > 0")) };
    }
    let s = mu / x;
    let ln_x = libm::log(x);
    let log_term = |k: usize| k as f64 * ln_x + s * libm::log((k + 1) as f64);
    // ratio of consecutive terms beyond k, non-increasing in k
    let ratio_after = |k: usize| x * libm::pow((k + 2) as f64 / (k + 1) as f64, s);

    let mut acc = LogSum::new();
    let mut k = 1;
    while k <= n.max(1) || ratio_after(k) >= 1.0 {
        acc.add(log_term(k));
        k += 1;
    }
    // terms 1..k−1 are in; the rest is at most t_k / (1 − r_k)
    acc.add(log_term(k) - libm::log(1.0 - ratio_after(k)));
    Ok(libm::exp(acc.value()))
}

/// An explicit finite bound on the expected jump count of
/// [`sis_upper_chain`] from one infected node:
/// `(1 + βd + μ)(1 + e^{μ/(βd)} S)` with `S` from
/// [`subcritical_series_bound`].
///
/// The balance weights are `Π_{i<k}(βd + μ/i) / p_{k,k−1}`; the product is at
/// most `(βd)^{k−1} e^{(μ/βd)(1 + ln(k−1))}` and `1/p_{k,k−1} ≤ 1 + βd + μ`.
pub fn explicit_upper_bound(beta: f64, d_max: f64, mu: f64, n: usize) -> Result<f64, ChainError> {
    let series = subcritical_series_bound(beta, d_max, mu, n)?;
    let x = beta * d_max;
    let spread = if mu == 0.0 { 1.0 } else { libm::exp(mu / x) };
    Ok((1.0 + x + mu) * (1.0 + spread * series))
}

/// Probability that an SIS epidemic on a star with `leaves` leaves, started
/// from the hub alone, has at least `k` infected nodes when the first
/// recovery happens: `Π_{i=1}^{k−1} β(m−i+1) / (β(m−i+1) + i)`.
pub fn star_burst_probability(beta: f64, leaves: usize, k: usize) -> Result<f64, ChainError> {
    check_nonneg(beta, "beta must be finite and >= 0")?;
    if k == 0 || k > leaves + 1 {
        return Err(ChainError::InvalidParameter("k must lie in 1..=leaves+1"));
    }
    let mut ln_p = 0.0;
    for i in 1..k {
        let up = beta * (leaves - i + 1) as f64;
        ln_p += libm::log(up) - libm::log(up + i as f64);
    }
    Ok(libm::exp(ln_p))
}

/// `1 − k² / (β(m − k + 1))`, the closed-form lower bound on
/// [`star_burst_probability`]. May be negative, in which case it is vacuous.
pub fn star_burst_lower_bound(beta: f64, leaves: usize, k: usize) -> Result<f64, ChainError> {
    check_nonneg(beta, "beta must be finite and >= 0")?;
    if k == 0 || k > leaves {
        return Err(ChainError::InvalidParameter("k must lie in 1..=leaves"));
    }
    let k = k as f64;
    Ok(1.0 - k * k / (beta * (leaves as f64 - k + 1.0)))
}

/// Probability that a recovered hub with `n_tilde` infected leaves, an
/// external rate `μ` aimed at the hub and per-edge rate `β`, is not
/// reinfected before every leaf recovers:
/// `Π_{k=1}^{ñ} k / (μ + k(1 + β)) = Π 1/(1 + β + μ/k)`.
pub fn hub_regeneration_failure_probability(n_tilde: usize, beta: f64, mu: f64) -> Result<f64, ChainError> {
    check_nonneg(beta, "beta must be finite and >= 0")?;
    check_nonneg(mu, "mu must be finite and >= 0")?;
    let mut ln_p = 0.0;
    for k in 1..=n_tilde {
        ln_p -= libm::log1p(beta + mu / k as f64);
    }
    Ok(libm::exp(ln_p))
}

/// Upper bound on the mean eventual SIR size with `initial` initially
/// infected nodes on an `n`-node graph:
/// `(N₀ + μ E[T]) / (1 − β d_max/(β + 1))`, where `E[T]` is the continuous
/// absorption time of [`sis_upper_chain`] started at `N₀`, which bounds
/// `E[T_SIS] ≥ E[T_SIR]`. Needs `β(d_max − 1) < 1`.
pub fn sir_eventual_infected_bound(beta: f64, d_max: f64, mu: f64, initial: usize, n: usize) -> Result<f64, ChainError> {
    check_nonneg(beta, "beta must be finite and >= 0")?;
    let denom = 1.0 - beta * d_max / (beta + 1.0);
    if !(denom > 0.0) {
        return Err(ChainError::InvalidParameter("needs beta * (d_max - 1) < 1"));
    }
    let t = sis_upper_chain(beta, d_max, mu, n)?.absorption_from(initial, Clock::Continuous)?;
    Ok((initial as f64 + mu * t) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::Clock;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs())
    }

    #[test]
    fn upper_chain_probabilities() {
        let c = sis_upper_chain(0.1, 6.0, 1.0, 10).unwrap();
        for i in 1..10 {
            let want = (0.6 * i as f64 + 1.0) / (1.6 * i as f64 + 1.0);
            assert!(close(c.up_probability(i), want, 1e-14));
        }
        assert!(close(c.down_probability(10), 1.0, 1e-15));
    }

    #[test]
    fn no_growth_means_one_jump() {
        let c = sis_upper_chain(0.0, 5.0, 0.0, 20).unwrap();
        assert_eq!(c.absorption_from_1(Clock::Jumps).unwrap(), 1.0);
        let c = sis_lower_chain(0.0, |_| 0.0, |_| 0.0, 20).unwrap();
        assert_eq!(c.absorption_from_1(Clock::Jumps).unwrap(), 1.0);
    }

    #[test]
    fn series_bound_cases() {
        assert!(close(subcritical_series_bound(0.25, 2.0, 0.0, 10).unwrap(), 1.0, 1e-14));
        let direct: f64 = (1..=200).map(|k| 0.5f64.powi(k) * (k + 1) as f64).sum();
        assert!(close(subcritical_series_bound(0.5, 1.0, 0.5, 200).unwrap(), direct, 1e-9));
        // Few direct terms still bound the full series from above.
        assert!(subcritical_series_bound(0.5, 1.0, 0.5, 3).unwrap() >= direct);
        assert!(matches!(subcritical_series_bound(0.5, 2.0, 1.0, 10), Err(ChainError::SeriesDiverges { .. })));
    }

    #[test]
    fn explicit_bound_holds_where_the_bare_series_does_not() {
        for (x, mu) in [(0.6, 1.0), (0.5, 0.5), (0.9, 2.0), (0.2, 3.0), (0.5, 0.0)] {
            for n in [5, 50, 400] {
                let e = sis_upper_chain(x, 1.0, mu, n).unwrap().absorption_from_1(Clock::Jumps).unwrap();
                assert!(e <= explicit_upper_bound(x, 1.0, mu, n).unwrap(), "x {x} mu {mu} n {n}");
            }
        }
        let e = sis_upper_chain(0.6, 1.0, 1.0, 50).unwrap().absorption_from_1(Clock::Jumps).unwrap();
        assert!(e > subcritical_series_bound(0.6, 1.0, 1.0, 50).unwrap());
    }

    #[test]
    fn product_lower_bound_in_supercritical_chain() {
        // β·η + γ = 1.2 with a uniform external push γ·i(1 − i/n).
        let (beta, eta, gamma, n, m) = (0.5 / 20.0, 20.0, 0.7, 100usize, 20usize);
        let c = sis_lower_chain(beta, |_| eta, |i| gamma * i as f64 * (1.0 - i as f64 / n as f64), m).unwrap();
        let log_e = c.log_absorption_from_1(Clock::Jumps).unwrap();
        assert!(log_e >= 20.0 * 1.1f64.ln());
    }

    #[test]
    fn star_burst_bound_is_below_exact() {
        for (beta, m) in [(0.2, 400usize), (0.05, 1000), (0.5, 50)] {
            for k in 1..=((m as f64).powf(1.0 / 3.0) as usize + 1) {
                let p = star_burst_probability(beta, m, k).unwrap();
                assert!(star_burst_lower_bound(beta, m, k).unwrap() <= p + 1e-15);
            }
        }
        assert_eq!(star_burst_probability(0.3, 5, 1).unwrap(), 1.0);
    }

    #[test]
    fn hub_failure_probability_matches_race_form() {
        let (n, beta, mu): (usize, f64, f64) = (7, 0.3, 1.5);
        let race: f64 = (0..n).map(|i| (n - i) as f64 / (mu + (n - i) as f64 * (1.0 + beta))).product();
        assert!(close(hub_regeneration_failure_probability(n, beta, mu).unwrap(), race, 1e-13));
        assert_eq!(hub_regeneration_failure_probability(0, beta, mu).unwrap(), 1.0);
    }

    #[test]
    fn sir_bound_requires_condition() {
        assert!(sir_eventual_infected_bound(0.3, 2.0, 1.0, 1, 100).unwrap() > 1.0);
        assert!(sir_eventual_infected_bound(0.6, 3.0, 1.0, 1, 100).is_err());
    }
}
