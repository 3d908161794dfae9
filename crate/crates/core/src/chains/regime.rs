//! Parameter-space regime labels with the inequality that decided them.

use alloc::format;
use alloc::string::String;

use crate::graphs::GraphMetrics;
use crate::strategies::Strategy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Subcritical,
    CriticalCandidate,
    SupercriticalCandidate,
    Unclassified,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Self::Subcritical => "SUBCRITICAL",
            Self::CriticalCandidate => "CRITICAL-CANDIDATE",
            Self::SupercriticalCandidate => "SUPERCRITICAL-CANDIDATE",
            Self::Unclassified => "UNCLASSIFIED",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub regime: Regime,
    /// The inequality that fired, e.g. `beta*d_max < 1`.
    pub inequality: String,
    /// Left-hand side of that inequality.
    pub value: f64,
    /// Distance of `value` from its threshold, positive when it holds.
    pub margin: f64,
    /// `β·d_max`, reported as the strength of a critical claim.
    pub beta_d_max: f64,
    /// False when the decision rests on a sampled (upper-bound) `η`.
    pub exact: bool,
    pub diagnostic: Option<String>,
}

impl Certificate {
    fn new(regime: Regime, inequality: &str, value: f64, margin: f64, beta_d_max: f64) -> Self {
        Self { regime, inequality: inequality.into(), value, margin, beta_d_max, exact: true, diagnostic: None }
    }

    fn unclassified(beta_d_max: f64, diagnostic: String) -> Self {
        Self {
            regime: Regime::Unclassified,
            inequality: String::new(),
            value: f64::NAN,
            margin: f64::NAN,
            beta_d_max,
            exact: true,
            diagnostic: Some(diagnostic),
        }
    }
}

/// Rules, first match wins:
///
/// * constant budget and `β·d_max < 1`: subcritical;
/// * constant nonzero budget and `β·λ₁ < 1 ≤ β·d_max`: critical candidate;
/// * linear scaling with `β·η(⌊n^α⌋) + γ > 1`: supercritical candidate;
/// * otherwise unclassified.
pub fn regime_classify(beta: f64, metrics: &GraphMetrics, strategy: &Strategy, alpha: f64) -> Certificate {
    let bd = beta * metrics.d_max as f64;
    let bl = beta * metrics.lambda1;
    if strategy.has_constant_budget() {
        if bd < 1.0 {
            return Certificate::new(Regime::Subcritical, "beta*d_max < 1", bd, 1.0 - bd, bd);
        }
        if matches!(strategy, Strategy::Null) {
            return Certificate::unclassified(bd, "no external source; the critical band needs a nonzero budget".into());
        }
        if bl < 1.0 {
            return Certificate::new(Regime::CriticalCandidate, "beta*lambda1 < 1 <= beta*d_max", bl, 1.0 - bl, bd);
        }
        return Certificate::unclassified(bd, format!("beta*lambda1 = {bl} >= 1 with a constant budget"));
    }
    let Strategy::LinearScaling { gamma, .. } = strategy else {
        return Certificate::unclassified(bd, "state-dependent budget other than linear scaling".into());
    };
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Certificate::unclassified(bd, format!("alpha = {alpha} outside (0, 1]"));
    }
    let m = libm::floor(libm::pow(metrics.node_count as f64, alpha)) as usize;
    let Some(entry) = metrics.eta_at(m) else {
        return Certificate::unclassified(bd, format!("eta({m}) was not computed"));
    };
    let value = beta * entry.value + gamma;
    if value > 1.0 {
        let mut cert =
            Certificate::new(Regime::SupercriticalCandidate, "beta*eta(floor(n^alpha)) + gamma > 1", value, value - 1.0, bd);
        cert.exact = entry.exact;
        if !entry.exact {
            cert.diagnostic = Some(format!("eta({m}) is a sampled upper bound"));
        }
        return cert;
    }
    Certificate::unclassified(bd, format!("beta*eta({m}) + gamma = {value} <= 1"))
}
