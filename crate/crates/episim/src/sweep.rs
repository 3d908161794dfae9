//! Sweeps over system size and the JSON summary they produce.
//!
//! Censored runs enter every statistic with their horizon time (a lower
//! bound), and each record carries the censored fraction it was computed
//! with. Scaling regressions are only attempted when every point has fewer
//! than 10% censored runs.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use episim_core::epidemics::{Model, RunOutcome, SimulationError};
use episim_core::rng::derive_seed;
use episim_core::stats::{bootstrap_ci, fit_scaling, ScalingFamily, ScalingFit, ScalingPoint};

use crate::batch::parallel_batch;
use crate::config::{ConfigError, ExperimentConfig, Metric, PlannedPoint};
use crate::io::save_outcomes_csv;

pub const CENSORED_REGRESSION_LIMIT: f64 = 0.1;
pub const BOOTSTRAP_RESAMPLES: usize = 2000;
pub const CONFIDENCE_LEVEL: f64 = 0.95;

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("sweep point {size:?}: {source}")]
    Simulation { size: Option<usize>, source: SimulationError },
    /// Points listed in `completed` ran and had their CSV written.
    #[error("writing {path}: {source}")]
    Io { path: PathBuf, completed: Vec<PointSummary>, source: std::io::Error },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub median: f64,
    pub stderr: f64,
    /// Percentile bootstrap interval for the mean; absent with one run.
    pub ci95: Option<[f64; 2]>,
}

impl Summary {
    pub fn of(samples: &[f64], seed: u64) -> Self {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = if samples.len() > 1 {
            samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 1 { sorted[mid] } else { 0.5 * (sorted[mid - 1] + sorted[mid]) };
        let ci95 = bootstrap_ci(samples, CONFIDENCE_LEVEL, BOOTSTRAP_RESAMPLES, seed).ok().map(|(lo, hi)| [lo, hi]);
        Self { mean, median, stderr: (var / n).sqrt(), ci95 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSummary {
    pub size: Option<usize>,
    pub graph: String,
    pub node_count: usize,
    pub beta: f64,
    pub replications: u64,
    pub censored_count: u64,
    pub censored_fraction: f64,
    pub extinction_time: Summary,
    /// SIR only.
    pub eventual_infected: Option<Summary>,
    pub mean_event_count: f64,
    pub raw_csv: Option<PathBuf>,
}

impl PointSummary {
    pub fn from_outcomes(point: &PlannedPoint, outcomes: &[RunOutcome]) -> Self {
        let seed = derive_seed(point.base_seed, u64::MAX);
        let times: Vec<f64> = outcomes.iter().map(|r| r.extinction_time).collect();
        let censored_count = outcomes.iter().filter(|r| r.censored).count() as u64;
        let eventual_infected = (point.params.model == Model::Sir).then(|| {
            let v: Vec<f64> = outcomes.iter().map(|r| r.eventual_infected as f64).collect();
            Summary::of(&v, seed ^ 1)
        });
        let reps = outcomes.len() as u64;
        Self {
            size: point.size,
            graph: point.graph_spec.to_string(),
            node_count: point.graph.node_count(),
            beta: point.params.beta,
            replications: reps,
            censored_count,
            censored_fraction: censored_count as f64 / reps as f64,
            extinction_time: Summary::of(&times, seed),
            eventual_infected,
            mean_event_count: outcomes.iter().map(|r| r.event_count as f64).sum::<f64>() / reps as f64,
            raw_csv: point.raw_csv.clone(),
        }
    }

    pub fn metric(&self, metric: Metric) -> Option<&Summary> {
        match metric {
            Metric::ExtinctionTime => Some(&self.extinction_time),
            Metric::EventualInfected => self.eventual_infected.as_ref(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReport {
    pub family: &'static str,
    pub scale: f64,
    pub exponent: f64,
    pub rss: f64,
    /// `None` when the family could not be fitted.
    pub aicc: Option<f64>,
    /// Observed minus fitted `ln T`, one per point.
    pub residuals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Regression {
    pub metric: &'static str,
    pub best_family: &'static str,
    pub power_exponent: f64,
    pub power_exponent_ci95: [f64; 2],
    pub families: Vec<FamilyReport>,
}

impl Regression {
    fn new(metric: Metric, fit: &ScalingFit, points: &[ScalingPoint]) -> Self {
        let families = fit
            .fits
            .iter()
            .map(|f| FamilyReport {
                family: f.family.name(),
                scale: f.scale,
                exponent: f.exponent,
                rss: f.rss,
                aicc: f.criterion.is_finite().then_some(f.criterion),
                residuals: if f.criterion.is_finite() {
                    points.iter().map(|p| p.mean.ln() - f.predict_log(p.n)).collect()
                } else {
                    Vec::new()
                },
            })
            .collect();
        Self {
            metric: metric.name(),
            best_family: fit.best.name(),
            power_exponent: fit.power_exponent,
            power_exponent_ci95: [fit.power_exponent_ci.0, fit.power_exponent_ci.1],
            families,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub version: &'static str,
    pub config: ExperimentConfig,
    pub points: Vec<PointSummary>,
    pub regression: Option<Regression>,
    pub verdict: String,
}

impl SweepReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn verdict_for(family: ScalingFamily) -> &'static str {
    match family {
        ScalingFamily::Constant => "bounded",
        ScalingFamily::Logarithmic => "logarithmic growth",
        ScalingFamily::PowerLaw => "polynomial growth",
        ScalingFamily::StretchedExponential => "stretched-exponential growth",
    }
}

/// Regression block and verdict for a finished sweep.
pub fn assess(points: &[PointSummary], metric: Metric) -> (Option<Regression>, String) {
    if points.iter().any(|p| p.censored_fraction >= CENSORED_REGRESSION_LIMIT) {
        return (None, "exceeds horizon".into());
    }
    let data: Option<Vec<ScalingPoint>> = points
        .iter()
        .map(|p| {
            let s = p.metric(metric)?;
            Some(ScalingPoint { n: p.size? as f64, mean: s.mean, stderr: s.stderr })
        })
        .collect();
    let Some(data) = data else {
        return (None, "no size to regress on".into());
    };
    match fit_scaling(&data) {
        Ok(fit) => {
            let verdict = verdict_for(fit.best).to_owned();
            (Some(Regression::new(metric, &fit, &data)), verdict)
        }
        Err(e) => (None, format!("no regression: {e}")),
    }
}

/// Runs every sweep point, writes per-point CSVs as they finish and the
/// summary JSON at the end. Paths are used as given.
pub fn run_experiment(config: &ExperimentConfig) -> Result<SweepReport, ExperimentError> {
    run_experiment_in(config, Path::new(""))
}

/// As [`run_experiment`] with relative graph and output paths resolved
/// against `base_dir`.
pub fn run_experiment_in(config: &ExperimentConfig, base_dir: &Path) -> Result<SweepReport, ExperimentError> {
    let plan = config.plan(base_dir)?;
    let mut points = Vec::with_capacity(plan.len());
    for point in &plan {
        let outcomes = parallel_batch(&point.graph, &point.params, &point.initial, config.replications, point.base_seed)
            .map_err(|source| ExperimentError::Simulation { size: point.size, source })?;
        if let Some(path) = &point.raw_csv {
            let path = base_dir.join(path);
            write_with_parent(&path, |p| save_outcomes_csv(p, &outcomes))
                .map_err(|source| ExperimentError::Io { path, completed: points.clone(), source })?;
        }
        points.push(PointSummary::from_outcomes(point, &outcomes));
    }
    let (regression, verdict) = assess(&points, config.metric());
    let report = SweepReport { version: env!("CARGO_PKG_VERSION"), config: config.clone(), points, regression, verdict };
    if let Some(path) = &config.outputs.summary_json {
        let path = base_dir.join(path);
        write_with_parent(&path, |p| {
            let mut f = fs::File::create(p)?;
            f.write_all(report.to_json().as_bytes())?;
            f.write_all(b"\n")
        })
        .map_err(|source| ExperimentError::Io { path, completed: report.points.clone(), source })?;
    }
    Ok(report)
}

fn write_with_parent(path: &Path, write: impl FnOnce(&Path) -> std::io::Result<()>) -> std::io::Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    write(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_statistics() {
        let s = Summary::of(&[1.0, 2.0, 3.0, 10.0], 1);
        assert_eq!(s.mean, 4.0);
        assert_eq!(s.median, 2.5);
        assert!((s.stderr - (50.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-12);
        let [lo, hi] = s.ci95.unwrap();
        assert!(lo <= s.mean && s.mean <= hi);
        assert_eq!(Summary::of(&[5.0], 1).ci95, None);
        assert_eq!(Summary::of(&[2.0, 2.0, 2.0], 1).ci95, Some([2.0, 2.0]));
    }

    fn point(size: usize, mean: f64, censored_fraction: f64) -> PointSummary {
        PointSummary {
            size: Some(size),
            graph: String::new(),
            node_count: size,
            beta: 0.1,
            replications: 100,
            censored_count: (censored_fraction * 100.0) as u64,
            censored_fraction,
            extinction_time: Summary { mean, median: mean, stderr: 0.0, ci95: None },
            eventual_infected: None,
            mean_event_count: 0.0,
            raw_csv: None,
        }
    }

    #[test]
    fn censoring_blocks_regression() {
        let pts = [point(10, 5.0, 0.0), point(20, 5.0, 0.1), point(40, 5.0, 0.0)];
        assert_eq!(assess(&pts, Metric::ExtinctionTime), (None, "exceeds horizon".into()));
    }

    #[test]
    fn exact_power_law_is_recognised() {
        let pts: Vec<_> = [10usize, 20, 40, 80].iter().map(|&n| point(n, 2.0 * (n as f64).powf(1.5), 0.0)).collect();
        let (reg, verdict) = assess(&pts, Metric::ExtinctionTime);
        let reg = reg.unwrap();
        assert_eq!(verdict, "polynomial growth");
        assert!((reg.power_exponent - 1.5).abs() < 1e-6);
        let power = reg.families.iter().find(|f| f.family == "power_law").unwrap();
        assert!(power.residuals.iter().all(|r| r.abs() < 1e-9));
    }

    #[test]
    fn missing_metric_or_points() {
        let pts = [point(10, 5.0, 0.0), point(20, 6.0, 0.0)];
        assert!(assess(&pts, Metric::ExtinctionTime).1.starts_with("no regression"));
        assert_eq!(assess(&pts, Metric::EventualInfected).1, "no size to regress on");
    }
}
