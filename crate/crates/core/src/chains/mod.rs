//! Birth-death chains on `{0, …, n}` and their absorption times.
//!
//! A chain is stored through its jump probabilities `p_{i,i+1}` and
//! `p_{i,i−1}` (any remainder is a holding probability), and, when built from
//! rates, the total exit rate of each state. All products are accumulated as
//! sums of logarithms so that values like `e^{10⁴}` are reported as logs
//! instead of overflowing.
//!
//! Two independent routes give `E[T_{1,0}]`: the detailed-balance closed form
//! `Σ_k Π_{i≤k} p_{i−1,i}/p_{i,i−1}` (with `p_{0,1} = 1`), which equals
//! `1/π̃(0) − 1` for the companion chain reflected at 0, and the first-step
//! recursion used by [`BirthDeathChain::log_absorption_from`] for any start.

use alloc::vec::Vec;

use crate::logspace::{log_add_exp, log_sum_exp, LogSum};

mod bounds;
mod regime;

pub use bounds::{
    explicit_upper_bound, hub_regeneration_failure_probability, sir_eventual_infected_bound, sis_lower_chain,
    sis_upper_chain, star_burst_probability, star_burst_lower_bound, subcritical_series_bound,
};
pub use regime::{regime_classify, Certificate, Regime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    /// 0 is absorbing.
    Absorbing,
    /// `p_{0,1} = 1`.
    Reflecting,
}

/// What a hitting time is measured in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Clock {
    /// Steps of the jump chain.
    Jumps,
    /// Time of the continuous chain; needs a chain built from rates.
    Continuous,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ChainError {
    #[error("invalid chain parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("downward probability vanishes at state {state}")]
    ZeroDown { state: usize },
    #[error("upward probability vanishes at interior state {state}; the reflected chain is reducible")]
    ZeroUp { state: usize },
    #[error("operation needs a chain with {expected:?} boundary at 0")]
    WrongBoundary { expected: Boundary },
    #[error("start state {start} outside 1..={state_max}")]
    StartOutOfRange { start: usize, state_max: usize },
    #[error("continuous times need a chain built from rates")]
    NoRates,
    #[error("series diverges: beta * d_max = {ratio} is not below 1")]
    SeriesDiverges { ratio: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BirthDeathChain {
    boundary: Boundary,
    /// `ln p_{i,i+1}` for `i = 0..=n`; the entry at `n` is `-∞`.
    ln_up: Vec<f64>,
    /// `ln p_{i,i−1}` for `i = 0..=n`; the entry at 0 is unused.
    ln_down: Vec<f64>,
    /// `ln q_i`, the total exit rate, when built from rates.
    ln_exit: Option<Vec<f64>>,
}

impl BirthDeathChain {
    /// Continuous-time chain with rates `up(i)` (`0 ≤ i < n`) and `down(i)`
    /// (`1 ≤ i ≤ n`). No upward move from `n`.
    pub fn from_rates<U, D>(state_max: usize, up: U, down: D, boundary: Boundary) -> Result<Self, ChainError>
    where
        U: Fn(usize) -> f64,
        D: Fn(usize) -> f64,
    {
        if state_max == 0 {
            return Err(ChainError::InvalidParameter("state_max must be at least 1"));
        }
        let n = state_max;
        let mut ln_up = Vec::with_capacity(n + 1);
        let mut ln_down = Vec::with_capacity(n + 1);
        let mut ln_exit = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let u = if i < n { up(i) } else { 0.0 };
            let d = if i > 0 { down(i) } else { 0.0 };
            if !(u.is_finite() && u >= 0.0 && d.is_finite() && d >= 0.0) {
                return Err(ChainError::InvalidParameter("rates must be finite and non-negative"));
            }
            if i > 0 && d <= 0.0 {
                return Err(ChainError::ZeroDown { state: i });
            }
            if i == 0 {
                // Only the reflected companion leaves 0, and it does so surely.
                ln_up.push(0.0);
                ln_down.push(f64::NEG_INFINITY);
                ln_exit.push(libm::log(u));
                continue;
            }
            let q = u + d;
            ln_up.push(libm::log(u) - libm::log(q));
            ln_down.push(libm::log(d) - libm::log(q));
            ln_exit.push(libm::log(q));
        }
        Ok(Self { boundary, ln_up, ln_down, ln_exit: Some(ln_exit) })
    }

    /// Discrete-time chain from `up[i] = p_{i,i+1}` and `down[i] = p_{i,i−1}`,
    /// both of length `n + 1`. `up[0]` is replaced by 1, `down[0]` is ignored
    /// and `up[n]` must be 0. Rows may leave a holding probability.
    pub fn from_jump_probabilities(up: &[f64], down: &[f64], boundary: Boundary) -> Result<Self, ChainError> {
        if up.len() != down.len() || up.len() < 2 {
            return Err(ChainError::InvalidParameter("need equal-length probability vectors covering 0..=n, n >= 1"));
        }
        let n = up.len() - 1;
        if up[n] != 0.0 {
            return Err(ChainError::InvalidParameter("no upward move from the top state"));
        }
        let mut ln_up = Vec::with_capacity(n + 1);
        let mut ln_down = Vec::with_capacity(n + 1);
        ln_up.push(0.0);
        ln_down.push(f64::NEG_INFINITY);
        for i in 1..=n {
            let (u, d) = (up[i], down[i]);
            let ok = |p: f64| (0.0..=1.0).contains(&p);
            if !ok(u) || !ok(d) || u + d > 1.0 + 1e-12 {
                return Err(ChainError::InvalidParameter("each row must hold probabilities summing to at most 1"));
            }
            if d <= 0.0 {
                return Err(ChainError::ZeroDown { state: i });
            }
            ln_up.push(libm::log(u));
            ln_down.push(libm::log(d));
        }
        Ok(Self { boundary, ln_up, ln_down, ln_exit: None })
    }

    pub fn state_max(&self) -> usize {
        self.ln_up.len() - 1
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn has_rates(&self) -> bool {
        self.ln_exit.is_some()
    }

    pub fn with_boundary(&self, boundary: Boundary) -> Self {
        Self { boundary, ..self.clone() }
    }

    /// Same transitions, reflected at 0.
    pub fn reflected(&self) -> Self {
        self.with_boundary(Boundary::Reflecting)
    }

    /// Same transitions, absorbing at 0.
    pub fn absorbing(&self) -> Self {
        self.with_boundary(Boundary::Absorbing)
    }

    /// `p_{i,i+1}` as seen by the reflected companion (`p_{0,1} = 1`).
    pub fn up_probability(&self, i: usize) -> f64 {
        libm::exp(self.ln_up[i])
    }

    pub fn down_probability(&self, i: usize) -> f64 {
        libm::exp(self.ln_down[i])
    }

    /// `ln(π̃(k)/π̃(0))` for `k = 0..=n`, from detailed balance.
    fn log_balance_weights(&self) -> Vec<f64> {
        let n = self.state_max();
        let mut w = Vec::with_capacity(n + 1);
        w.push(0.0);
        let mut acc = 0.0;
        for k in 1..=n {
            acc += self.ln_up[k - 1] - self.ln_down[k];
            w.push(acc);
        }
        w
    }

    fn require(&self, boundary: Boundary) -> Result<(), ChainError> {
        if self.boundary != boundary {
            return Err(ChainError::WrongBoundary { expected: boundary });
        }
        Ok(())
    }

    /// `ln π̃` of the chain reflected at 0.
    pub fn log_stationary_reflected(&self) -> Result<Vec<f64>, ChainError> {
        self.require(Boundary::Reflecting)?;
        let n = self.state_max();
        if let Some(state) = (1..n).find(|&i| self.ln_up[i] == f64::NEG_INFINITY) {
            return Err(ChainError::ZeroUp { state });
        }
        let mut w = self.log_balance_weights();
        let z = log_sum_exp(w.iter().copied());
        for x in &mut w {
            *x -= z;
        }
        Ok(w)
    }

    pub fn stationary_reflected(&self) -> Result<Vec<f64>, ChainError> {
        Ok(self.log_stationary_reflected()?.into_iter().map(libm::exp).collect())
    }

    /// Closed-form `ln E[T_{1,0}]`.
    ///
    /// In jumps the sum of the balance weights; in continuous time each
    /// weight (the expected visits to `k` before absorption) is divided by
    /// the exit rate `q_k`.
    pub fn log_absorption_from_1(&self, clock: Clock) -> Result<f64, ChainError> {
        self.require(Boundary::Absorbing)?;
        let w = self.log_balance_weights();
        let mut acc = LogSum::new();
        match clock {
            Clock::Jumps => w[1..].iter().for_each(|&x| acc.add(x)),
            Clock::Continuous => {
                let q = self.ln_exit.as_ref().ok_or(ChainError::NoRates)?;
                w.iter().zip(q).skip(1).for_each(|(&x, &lq)| acc.add(x - lq));
            }
        }
        Ok(acc.value())
    }

    pub fn absorption_from_1(&self, clock: Clock) -> Result<f64, ChainError> {
        self.log_absorption_from_1(clock).map(libm::exp)
    }

    /// `ln E[T_{L,0}]` by first-step analysis.
    ///
    /// With `d_i` the expected cost of the first passage `i → i−1`,
    /// `d_i = (c_i + p_{i,i+1} d_{i+1}) / p_{i,i−1}` where `c_i` is one jump,
    /// or the mean holding time `1/q_i`. The tridiagonal system is solved
    /// from the top down and `E[T_{L,0}] = Σ_{i ≤ L} d_i`.
    pub fn log_absorption_from(&self, start: usize, clock: Clock) -> Result<f64, ChainError> {
        self.require(Boundary::Absorbing)?;
        let n = self.state_max();
        if start == 0 || start > n {
            return Err(ChainError::StartOutOfRange { start, state_max: n });
        }
        let cost: Vec<f64> = match clock {
            Clock::Jumps => alloc::vec![0.0; n + 1],
            Clock::Continuous => self.ln_exit.as_ref().ok_or(ChainError::NoRates)?.iter().map(|q| -q).collect(),
        };
        let log_d = self.log_passage_costs(&cost);
        Ok(log_sum_exp(log_d[1..=start].iter().copied()))
    }

    pub fn absorption_from(&self, start: usize, clock: Clock) -> Result<f64, ChainError> {
        self.log_absorption_from(start, clock).map(libm::exp)
    }

    /// `ln d_i` for `i = 0..=n`, given `ln c_i`.
    fn log_passage_costs(&self, log_cost: &[f64]) -> Vec<f64> {
        let n = self.state_max();
        let mut d = alloc::vec![f64::NEG_INFINITY; n + 1];
        let mut above = f64::NEG_INFINITY;
        for i in (1..=n).rev() {
            let v = log_add_exp(log_cost[i], self.ln_up[i] + above) - self.ln_down[i];
            d[i] = v;
            above = v;
        }
        d
    }
}

/// Stationary law of the chain reflected at 0.
pub fn stationary_reflected(chain: &BirthDeathChain) -> Result<Vec<f64>, ChainError> {
    chain.stationary_reflected()
}

/// Expected number of jumps to absorption from state 1.
pub fn expected_absorption_from_1(chain: &BirthDeathChain) -> Result<f64, ChainError> {
    chain.absorption_from_1(Clock::Jumps)
}

/// Expected number of jumps to absorption from state `start`.
pub fn expected_absorption_from_l(chain: &BirthDeathChain, start: usize) -> Result<f64, ChainError> {
    chain.absorption_from(start, Clock::Jumps)
}
