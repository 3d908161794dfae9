//! JSON records for the `bounds`, `classify` and `metrics` commands.

use serde::Serialize;

use episim_core::chains::{
    explicit_upper_bound, regime_classify, sis_upper_chain, subcritical_series_bound, Certificate, ChainError, Clock,
};
use episim_core::{Graph, GraphMetrics, Strategy};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EtaReport {
    pub m: usize,
    pub value: f64,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub node_count: usize,
    pub edge_count: usize,
    pub d_max: usize,
    pub d_avg: f64,
    pub lambda1: f64,
    pub lambda1_tolerance: f64,
    pub lambda1_converged: bool,
    /// `d_avg ≤ λ₁ ≤ d_max` within the reported tolerance.
    pub sandwich_holds: bool,
    pub eta: Vec<EtaReport>,
}

impl MetricsReport {
    pub fn new(g: &Graph, m: &GraphMetrics) -> Self {
        Self {
            node_count: m.node_count,
            edge_count: g.edge_count(),
            d_max: m.d_max,
            d_avg: m.d_avg(),
            lambda1: m.lambda1,
            lambda1_tolerance: m.lambda1_tolerance,
            lambda1_converged: m.lambda1_converged,
            sandwich_holds: m.sandwich_holds(),
            eta: m.eta.iter().map(|e| EtaReport { m: e.m, value: e.value, exact: e.exact }).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub regime: &'static str,
    pub inequality: String,
    pub value: Option<f64>,
    pub margin: Option<f64>,
    pub beta_d_max: f64,
    pub exact: bool,
    pub diagnostic: Option<String>,
}

impl From<&Certificate> for CertificateReport {
    fn from(c: &Certificate) -> Self {
        Self {
            regime: c.regime.label(),
            inequality: c.inequality.clone(),
            value: c.value.is_finite().then_some(c.value),
            margin: c.margin.is_finite().then_some(c.margin),
            beta_d_max: c.beta_d_max,
            exact: c.exact,
            diagnostic: c.diagnostic.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifyReport {
    pub graph: String,
    pub beta: f64,
    pub strategy: &'static str,
    pub alpha: f64,
    pub metrics: MetricsReport,
    pub certificate: CertificateReport,
}

pub fn classify_report(
    graph_name: String,
    g: &Graph,
    metrics: &GraphMetrics,
    beta: f64,
    strategy: &Strategy,
    alpha: f64,
) -> ClassifyReport {
    let cert = regime_classify(beta, metrics, strategy, alpha);
    ClassifyReport {
        graph: graph_name,
        beta,
        strategy: strategy.kind_name(),
        alpha,
        metrics: MetricsReport::new(g, metrics),
        certificate: CertificateReport::from(&cert),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundParameters {
    pub beta: f64,
    pub d_max: f64,
    pub mu: f64,
    pub n: usize,
    pub start: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogTimes {
    /// Expected number of jumps.
    pub jumps: f64,
    /// Expected continuous time.
    pub continuous: f64,
}

/// Expected absorption of the dominating chain `i → i+1` at `β·d_max·i + μ`,
/// `i → i−1` at `i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub parameters: BoundParameters,
    pub regime: &'static str,
    pub certificate: String,
    pub log_expected_absorption_time: LogTimes,
    pub evaluation_method: &'static str,
    /// Series bound on the jump count from state 1; subcritical only.
    pub series_bound: Option<f64>,
    /// Valid closed-form bound on the jump count from state 1; subcritical only.
    pub explicit_bound: Option<f64>,
}

pub fn upper_bound_report(beta: f64, d_max: f64, mu: f64, n: usize, start: usize) -> Result<BoundReport, ChainError> {
    let chain = sis_upper_chain(beta, d_max, mu, n)?;
    let log_time = LogTimes {
        jumps: chain.log_absorption_from(start, Clock::Jumps)?,
        continuous: chain.log_absorption_from(start, Clock::Continuous)?,
    };
    let x = beta * d_max;
    let subcritical = x < 1.0;
    let (series_bound, explicit_bound) = if subcritical && x > 0.0 {
        (Some(subcritical_series_bound(beta, d_max, mu, n)?), Some(explicit_upper_bound(beta, d_max, mu, n)?))
    } else {
        (None, None)
    };
    Ok(BoundReport {
        parameters: BoundParameters { beta, d_max, mu, n, start },
        regime: if subcritical { "SUBCRITICAL" } else { "UNCLASSIFIED" },
        certificate: if subcritical { format!("beta*d_max = {x} < 1") } else { format!("beta*d_max = {x} >= 1") },
        log_expected_absorption_time: log_time,
        evaluation_method: if start == 1 {
            "closed form: sum of detailed-balance weights, log space"
        } else {
            "first-step recursion, log space"
        },
        series_bound,
        explicit_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use episim_core::graphs::{cycle, EtaMode};

    #[test]
    fn bound_report_fields() {
        let r = upper_bound_report(0.1, 2.0, 1.0, 50, 1).unwrap();
        assert_eq!(r.regime, "SUBCRITICAL");
        assert!(r.log_expected_absorption_time.jumps.exp() <= r.explicit_bound.unwrap());
        let json = serde_json::to_value(&r).unwrap();
        for key in ["parameters", "regime", "certificate", "log_expected_absorption_time", "evaluation_method"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        let hot = upper_bound_report(1.0, 3.0, 1.0, 50, 4).unwrap();
        assert_eq!(hot.regime, "UNCLASSIFIED");
        assert_eq!(hot.series_bound, None);
        assert!(hot.evaluation_method.starts_with("first-step"));
        assert!(upper_bound_report(0.1, 2.0, 1.0, 50, 51).is_err());
    }

    #[test]
    fn classify_cycle() {
        let g = cycle(10).unwrap();
        let m = GraphMetrics::compute(&g, &[3], EtaMode::Exact).unwrap();
        let r = classify_report("cycle:n=10".into(), &g, &m, 0.2, &Strategy::TargetedMaxDegree { mu: 1.0 }, 0.5);
        assert_eq!(r.certificate.regime, "SUBCRITICAL");
        assert_eq!(r.metrics.eta[0].value, 2.0 / 3.0);
        let unc = classify_report("c".into(), &g, &m, 0.9, &Strategy::Null, 0.5);
        assert_eq!(unc.certificate.value, None);
    }
}
