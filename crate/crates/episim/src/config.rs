//! TOML experiment description.
//!
//! ```toml
//! model = "sis"
//! beta = 0.2
//! replications = 1000
//! n_sweep = [50, 100, 200, 400]
//! base_seed = 1
//!
//! [graph]
//! family = "cycle"
//! n = 50
//!
//! [strategy]
//! kind = "targeted_max_degree"
//! mu = 1.0
//!
//! [outputs]
//! raw_csv = "runs_{n}.csv"
//! summary_json = "summary.json"
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use episim_core::epidemics::{Horizon, InitialRule, Model, SimulationError, SimulationParams};
use episim_core::graphs::{
    complete, cycle, generate_gnp, generate_grid_torus, generate_power_law, generate_small_world, generate_star, path,
};
use episim_core::strategies::StrategyError;
use episim_core::{Graph, GraphError, Strategy};

use crate::io::{load_edge_list, FormatError};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("could not read config {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("could not parse config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("graph family `{family}` has no single size parameter to sweep")]
    NotSweepable { family: &'static str },
    #[error("graph: {0}")]
    Graph(#[from] GraphError),
    #[error("graph file: {0}")]
    GraphFile(#[from] FormatError),
    #[error("strategy: {0}")]
    Strategy(#[from] StrategyError),
    #[error("simulation parameters: {0}")]
    Simulation(#[from] SimulationError),
    #[error("bad graph spec {spec:?}: {reason}")]
    Spec { spec: String, reason: String },
}

/// Graph family and its parameters. `seed` defaults to 0 for the random
/// families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphSpec {
    Star { leaves: usize },
    Complete { n: usize },
    Cycle { n: usize },
    Path { n: usize },
    Gnp { n: usize, p: f64, #[serde(default)] seed: u64 },
    Torus { side: usize },
    SmallWorld { side: usize, exponent: f64, #[serde(default)] seed: u64 },
    PowerLaw { n: usize, attachment_edges: usize, #[serde(default)] seed: u64 },
    File { path: PathBuf },
}

impl GraphSpec {
    pub fn family(&self) -> &'static str {
        match self {
            Self::Star { .. } => "star",
            Self::Complete { .. } => "complete",
            Self::Cycle { .. } => "cycle",
            Self::Path { .. } => "path",
            Self::Gnp { .. } => "gnp",
            Self::Torus { .. } => "torus",
            Self::SmallWorld { .. } => "small_world",
            Self::PowerLaw { .. } => "power_law",
            Self::File { .. } => "file",
        }
    }

    /// The swept size parameter: leaves for stars, side length for tori,
    /// node count otherwise.
    pub fn size(&self) -> Option<usize> {
        match *self {
            Self::Star { leaves } => Some(leaves),
            Self::Complete { n } | Self::Cycle { n } | Self::Path { n } => Some(n),
            Self::Gnp { n, .. } | Self::PowerLaw { n, .. } => Some(n),
            Self::Torus { side } | Self::SmallWorld { side, .. } => Some(side),
            Self::File { .. } => None,
        }
    }

    pub fn with_size(&self, size: usize) -> Result<Self, ConfigError> {
        let mut spec = self.clone();
        match &mut spec {
            Self::Star { leaves } => *leaves = size,
            Self::Complete { n } | Self::Cycle { n } | Self::Path { n } => *n = size,
            Self::Gnp { n, .. } | Self::PowerLaw { n, .. } => *n = size,
            Self::Torus { side } | Self::SmallWorld { side, .. } => *side = size,
            Self::File { .. } => return Err(ConfigError::NotSweepable { family: "file" }),
        }
        Ok(spec)
    }

    /// Builds the graph. Relative file paths resolve against `base_dir`.
    pub fn build(&self, base_dir: &Path) -> Result<Graph, ConfigError> {
        Ok(match self {
            Self::Star { leaves } => generate_star(*leaves)?,
            Self::Complete { n } => complete(*n)?,
            Self::Cycle { n } => cycle(*n)?,
            Self::Path { n } => path(*n)?,
            Self::Gnp { n, p, seed } => generate_gnp(*n, *p, *seed)?,
            Self::Torus { side } => generate_grid_torus(*side)?,
            Self::SmallWorld { side, exponent, seed } => generate_small_world(*side, *exponent, *seed)?,
            Self::PowerLaw { n, attachment_edges, seed } => generate_power_law(*n, *attachment_edges, *seed)?,
            Self::File { path } => load_edge_list(&base_dir.join(path))?,
        })
    }
}

/// `family:key=value,...`, e.g. `star:leaves=100` or `gnp:n=50,p=0.1,seed=3`.
/// A bare `file:<path>` is also accepted.
impl FromStr for GraphSpec {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |reason: &str| ConfigError::Spec { spec: s.to_owned(), reason: reason.to_owned() };
        let (family, rest) = s.split_once(':').ok_or_else(|| bad("expected `family:key=value,...`"))?;
        let mut table = toml::Table::new();
        table.insert("family".into(), toml::Value::String(family.trim().into()));
        if family.trim() == "file" && !rest.contains('=') {
            table.insert("path".into(), toml::Value::String(rest.into()));
        } else {
            for pair in rest.split(',').filter(|p| !p.trim().is_empty()) {
                let (k, v) = pair.split_once('=').ok_or_else(|| bad("expected key=value"))?;
                let v = v.trim();
                let value = if let Ok(i) = v.parse::<i64>() {
                    toml::Value::Integer(i)
                } else if let Ok(f) = v.parse::<f64>() {
                    toml::Value::Float(f)
                } else {
                    toml::Value::String(v.into())
                };
                table.insert(k.trim().into(), value);
            }
        }
        toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| bad(e.message()))
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Star { leaves } => write!(f, "star:leaves={leaves}"),
            Self::Complete { n } => write!(f, "complete:n={n}"),
            Self::Cycle { n } => write!(f, "cycle:n={n}"),
            Self::Path { n } => write!(f, "path:n={n}"),
            Self::Gnp { n, p, seed } => write!(f, "gnp:n={n},p={p},seed={seed}"),
            Self::Torus { side } => write!(f, "torus:side={side}"),
            Self::SmallWorld { side, exponent, seed } => {
                write!(f, "small_world:side={side},exponent={exponent},seed={seed}")
            }
            Self::PowerLaw { n, attachment_edges, seed } => {
                write!(f, "power_law:n={n},attachment_edges={attachment_edges},seed={seed}")
            }
            Self::File { path } => write!(f, "file:{}", path.display()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelName {
    Sis,
    Sir,
}

impl From<ModelName> for Model {
    fn from(m: ModelName) -> Self {
        match m {
            ModelName::Sis => Model::Sis,
            ModelName::Sir => Model::Sir,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StrategyConfig {
    Null,
    TargetedMaxDegree { mu: f64 },
    DegreeThreshold { mu: f64, threshold: usize, #[serde(default)] seed: u64 },
    Uniform { mu: f64 },
    LinearScaling { gamma: f64, alpha: f64 },
    /// `rate` defaults to the infection rate of the point being run.
    StaticLongRange { edges: Vec<(usize, usize)>, rate: Option<f64> },
}

impl StrategyConfig {
    pub fn to_strategy(&self, beta: f64) -> Strategy {
        match self {
            Self::Null => Strategy::Null,
            Self::TargetedMaxDegree { mu } => Strategy::TargetedMaxDegree { mu: *mu },
            Self::DegreeThreshold { mu, threshold, seed } => {
                Strategy::DegreeThreshold { mu: *mu, threshold: *threshold, seed: *seed }
            }
            Self::Uniform { mu } => Strategy::Uniform { mu: *mu },
            Self::LinearScaling { gamma, alpha } => Strategy::LinearScaling { gamma: *gamma, alpha: *alpha },
            Self::StaticLongRange { edges, rate } => {
                Strategy::StaticLongRange { edges: edges.clone(), rate: rate.unwrap_or(beta) }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialConfig {
    Fixed { nodes: Vec<usize> },
    UniformRandom { #[serde(default = "one")] k: usize },
    MaxDegree,
}

fn one() -> usize {
    1
}

impl Default for InitialConfig {
    fn default() -> Self {
        Self::UniformRandom { k: 1 }
    }
}

impl From<&InitialConfig> for InitialRule {
    fn from(c: &InitialConfig) -> Self {
        match c {
            InitialConfig::Fixed { nodes } => InitialRule::Fixed(nodes.clone()),
            InitialConfig::UniformRandom { k } => InitialRule::UniformRandom(*k),
            InitialConfig::MaxDegree => InitialRule::MaxDegree,
        }
    }
}

/// Either cap may be omitted; with both omitted the cap is 10⁶ events.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct HorizonConfig {
    pub max_time: Option<f64>,
    pub max_events: Option<u64>,
}

impl HorizonConfig {
    pub fn to_horizon(&self) -> Horizon {
        match (self.max_time, self.max_events) {
            (None, None) => Horizon::default(),
            (t, e) => Horizon { max_time: t.unwrap_or(f64::INFINITY), max_events: e.unwrap_or(u64::MAX) },
        }
    }
}

/// Quantity regressed against size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    ExtinctionTime,
    EventualInfected,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Self::ExtinctionTime => "extinction_time",
            Self::EventualInfected => "eventual_infected",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    /// Per-run CSV. With several sweep points, `{n}` in the file name is
    /// replaced by the size; without it `_n<size>` is appended to the stem.
    pub raw_csv: Option<PathBuf>,
    pub summary_json: Option<PathBuf>,
}

impl Outputs {
    pub fn raw_csv_for(&self, size: Option<usize>, points: usize) -> Option<PathBuf> {
        let path = self.raw_csv.as_ref()?;
        let Some(size) = size else { return Some(path.clone()) };
        let text = path.to_string_lossy();
        if text.contains("{n}") {
            return Some(PathBuf::from(text.replace("{n}", &size.to_string())));
        }
        if points <= 1 {
            return Some(path.clone());
        }
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let name = match path.extension() {
            Some(ext) => format!("{stem}_n{size}.{}", ext.to_string_lossy()),
            None => format!("{stem}_n{size}"),
        };
        Some(path.with_file_name(name))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub graph: GraphSpec,
    pub model: ModelName,
    pub beta: f64,
    /// When set, a point of size `s` runs at `beta · s^beta_exponent`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_exponent: Option<f64>,
    pub strategy: StrategyConfig,
    #[serde(default)]
    pub initial: InitialConfig,
    pub replications: u64,
    #[serde(default)]
    pub horizon: HorizonConfig,
    /// Sizes to sweep; empty runs the graph as given.
    #[serde(default)]
    pub n_sweep: Vec<usize>,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Metric>,
    #[serde(default)]
    pub outputs: Outputs,
}

/// One validated sweep point, graph built.
#[derive(Debug, Clone)]
pub struct PlannedPoint {
    pub size: Option<usize>,
    pub graph_spec: GraphSpec,
    pub graph: Graph,
    pub params: SimulationParams,
    pub initial: InitialRule,
    pub base_seed: u64,
    pub raw_csv: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_owned(), source })?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn metric(&self) -> Metric {
        self.metric.unwrap_or(match self.model {
            ModelName::Sis => Metric::ExtinctionTime,
            ModelName::Sir => Metric::EventualInfected,
        })
    }

    pub fn beta_at(&self, size: Option<usize>) -> f64 {
        match (self.beta_exponent, size) {
            (Some(e), Some(s)) => self.beta * (s as f64).powf(e),
            _ => self.beta,
        }
    }

    /// Checks every field and builds every graph; nothing is run.
    pub fn plan(&self, base_dir: &Path) -> Result<Vec<PlannedPoint>, ConfigError> {
        if self.replications == 0 {
            return Err(ConfigError::Invalid("replications must be >= 1".into()));
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(ConfigError::Invalid(format!("beta must be finite and > 0, got {}", self.beta)));
        }
        if let Some(e) = self.beta_exponent {
            if !e.is_finite() {
                return Err(ConfigError::Invalid("beta_exponent must be finite".into()));
            }
        }
        if matches!(self.metric, Some(Metric::EventualInfected)) && self.model == ModelName::Sis {
            return Err(ConfigError::Invalid("eventual_infected is only a regression metric for SIR".into()));
        }
        let mut sizes: Vec<Option<usize>> = self.n_sweep.iter().copied().map(Some).collect();
        if sizes.is_empty() {
            sizes.push(self.graph.size());
        } else {
            let mut seen = std::collections::HashSet::new();
            if let Some(dup) = self.n_sweep.iter().find(|s| !seen.insert(**s)) {
                return Err(ConfigError::Invalid(format!("n_sweep lists {dup} twice")));
            }
        }
        let initial = InitialRule::from(&self.initial);
        let horizon = self.horizon.to_horizon();
        let count = sizes.len();
        let mut points = Vec::with_capacity(count);
        for size in sizes {
            let graph_spec = match size {
                Some(s) if !self.n_sweep.is_empty() => self.graph.with_size(s)?,
                _ => self.graph.clone(),
            };
            let graph = graph_spec.build(base_dir)?;
            let beta = self.beta_at(size);
            let strategy = self.strategy.to_strategy(beta);
            let params = SimulationParams::new(self.model.into(), beta, strategy.clone()).with_horizon(horizon);
            params.validate()?;
            strategy.prepare(&graph)?;
            initial.resolve(&graph, 0)?;
            let seed = point_seed(self.base_seed, size);
            points.push(PlannedPoint {
                size,
                graph_spec,
                graph,
                params,
                initial: initial.clone(),
                base_seed: seed,
                raw_csv: self.outputs.raw_csv_for(size, count),
            });
        }
        Ok(points)
    }
}

/// Replication seeds of a point are `derive_seed(point_seed, k)`; keying on
/// the size keeps a point's runs unchanged when other sizes are added.
pub fn point_seed(base_seed: u64, size: Option<usize>) -> u64 {
    match size {
        Some(s) => episim_core::rng::derive_seed(base_seed, s as u64),
        None => base_seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CYCLE: &str = r#"
model = "sis"
beta = 0.2
replications = 10
n_sweep = [50, 100]

[graph]
family = "cycle"
n = 50

[strategy]
kind = "targeted_max_degree"
mu = 1.0
"#;

    #[test]
    fn parses_and_round_trips() {
        let c = ExperimentConfig::from_toml(CYCLE).unwrap();
        assert_eq!(c.graph, GraphSpec::Cycle { n: 50 });
        assert_eq!(c.initial, InitialConfig::UniformRandom { k: 1 });
        assert_eq!(c.horizon.to_horizon(), Horizon::default());
        assert_eq!(c.metric(), Metric::ExtinctionTime);
        assert_eq!(ExperimentConfig::from_toml(&c.to_toml()).unwrap(), c);
        let plan = c.plan(Path::new(".")).unwrap();
        assert_eq!(plan.len(), 2);
        assert_eq!(plan[1].graph.node_count(), 100);
    }

    #[test]
    fn rejects_bad_fields_before_running() {
        let bad = [
            CYCLE.replace("replications = 10", "replications = 0"),
            CYCLE.replace("beta = 0.2", "beta = -1.0"),
            CYCLE.replace("mu = 1.0", "mu = -1.0"),
            CYCLE.replace("[50, 100]", "[50, 2]"),
            CYCLE.replace("[50, 100]", "[50, 50]"),
        ];
        for text in bad {
            let c = ExperimentConfig::from_toml(&text).unwrap();
            assert!(c.plan(Path::new(".")).is_err(), "{text}");
        }
        assert!(ExperimentConfig::from_toml(&CYCLE.replace("mu = 1.0", "mu = 1.0\nbogus = 1")).is_err());
        assert!(ExperimentConfig::from_toml(&CYCLE.replace("\"sis\"", "\"seir\"")).is_err());
        let oversize = format!("{CYCLE}\n[initial]\nrule = \"uniform_random\"\nk = 60\n");
        assert!(ExperimentConfig::from_toml(&oversize).unwrap().plan(Path::new(".")).is_err());
    }

    #[test]
    fn graph_spec_strings() {
        let cases = [
            ("star:leaves=100", GraphSpec::Star { leaves: 100 }),
            ("gnp:n=50,p=0.1,seed=3", GraphSpec::Gnp { n: 50, p: 0.1, seed: 3 }),
            ("small_world:side=10,exponent=2,seed=1", GraphSpec::SmallWorld { side: 10, exponent: 2.0, seed: 1 }),
            ("file:graphs/a.txt", GraphSpec::File { path: "graphs/a.txt".into() }),
        ];
        for (text, spec) in cases {
            let parsed: GraphSpec = text.parse().unwrap();
            assert_eq!(parsed, spec);
            assert_eq!(parsed.to_string().parse::<GraphSpec>().unwrap(), spec);
        }
        assert!("star".parse::<GraphSpec>().is_err());
        assert!("star:n=3".parse::<GraphSpec>().is_err());
        assert!("moebius:n=3".parse::<GraphSpec>().is_err());
    }

    #[test]
    fn csv_names_per_point() {
        let o = Outputs { raw_csv: Some("out/runs.csv".into()), summary_json: None };
        assert_eq!(o.raw_csv_for(Some(50), 1), Some(PathBuf::from("out/runs.csv")));
        assert_eq!(o.raw_csv_for(Some(50), 4), Some(PathBuf::from("out/runs_n50.csv")));
        let t = Outputs { raw_csv: Some("runs_{n}.csv".into()), summary_json: None };
        assert_eq!(t.raw_csv_for(Some(7), 4), Some(PathBuf::from("runs_7.csv")));
    }

    #[test]
    fn beta_scales_with_size() {
        let mut c = ExperimentConfig::from_toml(CYCLE).unwrap();
        c.beta = 1.0;
        c.beta_exponent = Some(-0.5);
        assert!((c.beta_at(Some(100)) - 0.1).abs() < 1e-15);
    }
}
