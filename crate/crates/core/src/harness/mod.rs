//! Seeded Monte Carlo experiments, reports and the acceptance battery.
//!
//! An [`ExperimentConfig`] is one self-contained JSON document:
//!
//! ```json
//! {"instance": {"generated": {"name": "random-known-id(20,3)", "index": 0}},
//!  "method": "enumerate", "algorithm": "ocrs", "arrivals": "worst-found",
//!  "trials": 100000, "seed": 7, "out": "report.csv"}
//! ```
//!
//! `instance` is either `{"file": PATH}` or a generated suite member,
//! `solution` optionally names a saved LP solution, and `arrivals` is one of
//! `"random"`, `"random-times"`, `"worst-found"` or `{"perm": [..]}`.

pub mod acceptance;
pub mod suite;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use acceptance::{run_acceptance, run_criterion, AcceptanceOptions, CriterionResult, CRITERIA};
pub use suite::{generate_suite, Suite};

use crate::benchmarks::{er_adaptive_greedy, er_adaptive_value, er_balanced_nonadaptive, er_balanced_value, BenchmarkError};
use crate::graph::{ArrivalModel, GraphError, KnownIdInput};
use crate::io::{read_instance, read_text, write_atomic, Instance, IoError};
use crate::lp::{solve_lp_config_id, ConfigSolution, LpError, Method};
use crate::probing::{exact_value, run_trial, worst_found_order, Algorithm, ProbingError, ProbingPlan};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("{context}: {source}")]
    Context {
        context: String,
        source: Box<HarnessError>,
    },
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Probing(#[from] ProbingError),
    #[error(transparent)]
    Benchmark(#[from] BenchmarkError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl HarnessError {
    fn context(self, context: impl Into<String>) -> Self {
        HarnessError::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum InstanceSource {
    File(PathBuf),
    Generated { name: String, index: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArrivalSpec {
    Random,
    RandomTimes,
    WorstFound,
    Perm(Vec<usize>),
}

fn default_method() -> Method {
    Method::Enumerate
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub instance: InstanceSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<PathBuf>,
    #[serde(default = "default_method")]
    pub method: Method,
    pub algorithm: Algorithm,
    pub arrivals: ArrivalSpec,
    pub trials: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(IoError::from)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn read(path: &Path) -> Result<Self, HarnessError> {
        Self::from_json(&read_text(path)?)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.trials == 0 {
            return Err(HarnessError::Config("trials must be at least 1".into()));
        }
        if let InstanceSource::Generated { name, .. } = &self.instance {
            name.parse::<Suite>()?;
        }
        Ok(())
    }

    /// Short name of the instance for reports.
    pub fn instance_label(&self) -> String {
        match &self.instance {
            InstanceSource::File(p) => p.display().to_string(),
            InstanceSource::Generated { name, index } => format!("{name}[{index}]"),
        }
    }

    pub fn load_instance(&self) -> Result<Instance, HarnessError> {
        match &self.instance {
            InstanceSource::File(p) => Ok(read_instance(p)?),
            InstanceSource::Generated { name, index } => {
                let mut all = generate_suite(&name.parse()?);
                if *index >= all.len() {
                    return Err(HarnessError::Config(format!(
                        "{name} has {} instances, index {index} requested",
                        all.len()
                    )));
                }
                Ok(all.swap_remove(*index))
            }
        }
    }
}

/// Optimal LP solution for `input`, averaged over arrivals when the input is
/// i.i.d.
pub fn solve_for_plan(input: &KnownIdInput, method: Method) -> Result<ProbingPlan, HarnessError> {
    let sol = solve_lp_config_id(input, method)?;
    plan_from_solution(input, sol)
}

pub fn plan_from_solution(input: &KnownIdInput, sol: ConfigSolution) -> Result<ProbingPlan, HarnessError> {
    let sol = if input.is_iid() { sol.symmetrized().unwrap_or(sol) } else { sol };
    Ok(ProbingPlan::new(input, &sol)?)
}

/// Arrival model for `spec`; `worst-found` minimises the exact value of `alg`.
pub fn arrival_model(plan: &ProbingPlan, alg: Algorithm, spec: &ArrivalSpec) -> Result<ArrivalModel, HarnessError> {
    Ok(match spec {
        ArrivalSpec::Random => ArrivalModel::RandomOrder,
        ArrivalSpec::RandomTimes => ArrivalModel::RandomArrivalTimes,
        ArrivalSpec::Perm(p) => ArrivalModel::Adversarial(p.clone()),
        ArrivalSpec::WorstFound => {
            if alg == Algorithm::Rcrs {
                return Err(HarnessError::Config("worst-found orders apply to greedy and ocrs only".into()));
            }
            let order = worst_found_order(plan.arrivals(), |o| exact_value(plan, alg, o).unwrap_or(f64::INFINITY));
            ArrivalModel::Adversarial(order)
        }
    })
}

/// Upper bound on the weight of one trial: `min(Σ_u max w_u, n · max w)`.
pub fn weight_bound(input: &KnownIdInput) -> f64 {
    let g = &input.type_graph;
    let mut best = vec![0.0f64; g.offline_count()];
    let mut top = 0.0f64;
    for (_, _, e) in g.edge_refs() {
        if e.prob > 0.0 {
            best[e.offline] = best[e.offline].max(e.weight);
            top = top.max(e.weight);
        }
    }
    best.iter().sum::<f64>().min(input.arrivals() as f64 * top)
}

/// Mean, spread and confidence widths of per-trial weights.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub trials: u64,
    pub mean: f64,
    pub stderr: f64,
    pub ci95: (f64, f64),
    /// Hoeffding half-width at confidence 0.95.
    pub hoeffding: f64,
    /// `mean ± 3 stderr`.
    pub band: (f64, f64),
}

impl Summary {
    pub fn from_weights(weights: &[f64], bound: f64) -> Summary {
        let t = weights.len() as f64;
        let mean = weights.iter().sum::<f64>() / t;
        let var = if weights.len() > 1 {
            weights.iter().map(|w| (w - mean).powi(2)).sum::<f64>() / (t - 1.0)
        } else {
            0.0
        };
        let stderr = (var / t).sqrt();
        Summary {
            trials: weights.len() as u64,
            mean,
            stderr,
            ci95: (mean - 1.96 * stderr, mean + 1.96 * stderr),
            hoeffding: bound * ((2.0f64 / 0.05).ln() / (2.0 * t)).sqrt(),
            band: (mean - 3.0 * stderr, mean + 3.0 * stderr),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Parallel,
    Serial,
}

#[derive(Clone, Debug)]
pub struct TrialReport {
    pub config: ExperimentConfig,
    pub weights: Vec<f64>,
    pub summary: Summary,
    pub lpopt: f64,
    /// `mean / LPOPT`; absent when the LP value is zero.
    pub ratio: Option<f64>,
    /// `(type id, offline id, frequency)` for every edge of the type graph.
    pub edge_freqs: Vec<(String, String, f64)>,
    pub runtime: Duration,
}

pub const REPORT_HEADER: [&str; 15] = [
    "instance",
    "algorithm",
    "arrivals",
    "seed",
    "trials",
    "mean_weight",
    "stderr",
    "ci95_lo",
    "ci95_hi",
    "hoeffding",
    "lpopt",
    "ratio",
    "band_lo",
    "band_hi",
    "edge_freqs",
];

fn arrivals_label(spec: &ArrivalSpec) -> String {
    match spec {
        ArrivalSpec::Random => "random".into(),
        ArrivalSpec::RandomTimes => "random-times".into(),
        ArrivalSpec::WorstFound => "worst-found".into(),
        ArrivalSpec::Perm(p) => format!("perm:{}", p.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")),
    }
}

impl TrialReport {
    /// CSV with [`REPORT_HEADER`] and one data row. Runtime is left out so
    /// reruns are byte-identical.
    pub fn to_csv(&self) -> Result<String, HarnessError> {
        let s = &self.summary;
        let mut freqs = String::new();
        for (k, (b, u, f)) in self.edge_freqs.iter().enumerate() {
            if k > 0 {
                freqs.push(';');
            }
            let _ = write!(freqs, "{b}-{u}={f}");
        }
        let alg = serde_json::to_value(self.config.algorithm).map_err(IoError::from)?;
        let row = [
            self.config.instance_label(),
            alg.as_str().unwrap_or_default().to_string(),
            arrivals_label(&self.config.arrivals),
            self.config.seed.to_string(),
            s.trials.to_string(),
            s.mean.to_string(),
            s.stderr.to_string(),
            s.ci95.0.to_string(),
            s.ci95.1.to_string(),
            s.hoeffding.to_string(),
            self.lpopt.to_string(),
            self.ratio.map(|r| r.to_string()).unwrap_or_default(),
            s.band.0.to_string(),
            s.band.1.to_string(),
            freqs,
        ];
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(REPORT_HEADER)?;
        w.write_record(&row)?;
        let bytes = w.into_inner().map_err(|e| HarnessError::Config(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), HarnessError> {
        Ok(write_atomic(path, self.to_csv()?.as_bytes())?)
    }
}

/// Per-trial weights and matched `(type, edge)` pairs.
pub fn run_trials(
    plan: &ProbingPlan,
    alg: Algorithm,
    arrivals: &ArrivalModel,
    seed: u64,
    trials: u64,
    exec: Execution,
) -> Result<Vec<(f64, Vec<(usize, usize)>)>, ProbingError> {
    let one = |t: u64| {
        run_trial(plan, alg, arrivals, seed, t).map(|out| {
            let pairs = out.matching.pairs.iter().map(|p| (out.types[p.arrival], p.edge)).collect();
            (out.weight(), pairs)
        })
    };
    match exec {
        Execution::Parallel => (0..trials).into_par_iter().map(one).collect(),
        Execution::Serial => (0..trials).map(one).collect(),
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<TrialReport, HarnessError> {
    run_experiment_with(cfg, Execution::Parallel)
}

/// Runs the experiment and writes the report to `cfg.out` if set.
pub fn run_experiment_with(cfg: &ExperimentConfig, exec: Execution) -> Result<TrialReport, HarnessError> {
    let label = cfg.instance_label();
    let inner = || -> Result<TrialReport, HarnessError> {
        cfg.validate()?;
        let start = Instant::now();
        let input = cfg.load_instance()?.into_known_id();
        let plan = match &cfg.solution {
            Some(p) => {
                let sol: ConfigSolution = serde_json::from_str(&read_text(p)?).map_err(IoError::from)?;
                plan_from_solution(&input, sol)?
            }
            None => solve_for_plan(&input, cfg.method)?,
        };
        let arrivals = arrival_model(&plan, cfg.algorithm, &cfg.arrivals)?;
        let results = run_trials(&plan, cfg.algorithm, &arrivals, cfg.seed, cfg.trials, exec)?;
        let g = &input.type_graph;
        let mut counts: Vec<Vec<u64>> = g.online.iter().map(|v| vec![0; v.degree()]).collect();
        for (_, pairs) in &results {
            for &(b, k) in pairs {
                counts[b][k] += 1;
            }
        }
        let weights: Vec<f64> = results.into_iter().map(|r| r.0).collect();
        let summary = Summary::from_weights(&weights, weight_bound(&input));
        let mut edge_freqs = Vec::new();
        for (b, v) in g.online.iter().enumerate() {
            for (k, e) in v.edges.iter().enumerate() {
                edge_freqs.push((v.id.clone(), g.offline[e.offline].clone(), counts[b][k] as f64 / cfg.trials as f64));
            }
        }
        let report = TrialReport {
            config: cfg.clone(),
            summary,
            lpopt: plan.lpopt,
            ratio: (plan.lpopt > 0.0).then(|| summary.mean / plan.lpopt),
            weights,
            edge_freqs,
            runtime: start.elapsed(),
        };
        if let Some(out) = &cfg.out {
            report.write_csv(out)?;
        }
        Ok(report)
    };
    inner().map_err(|e| e.context(format!("experiment on {label}")))
}

/// Adaptive greedy against the balanced non-adaptive plan on the
/// Erdős–Rényi instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapReport {
    pub n: usize,
    pub p: f64,
    pub s: usize,
    pub seed: u64,
    pub adaptive: Summary,
    pub nonadaptive: Summary,
    /// `E[min(Bin(n, p), s)]`.
    pub adaptive_exact: f64,
    /// Closed-form value of the balanced plan.
    pub balanced_value: f64,
    /// Ratio of the two Monte Carlo means.
    pub ratio: f64,
    #[serde(skip)]
    pub runtime: Duration,
}

pub const GAP_HEADER: [&str; 12] = [
    "n",
    "p",
    "s",
    "seed",
    "trials",
    "adaptive_mean",
    "adaptive_stderr",
    "nonadaptive_mean",
    "nonadaptive_stderr",
    "adaptive_exact",
    "balanced_value",
    "ratio",
];

impl GapReport {
    pub fn to_csv(&self) -> Result<String, HarnessError> {
        let row = [
            self.n.to_string(),
            self.p.to_string(),
            self.s.to_string(),
            self.seed.to_string(),
            self.adaptive.trials.to_string(),
            self.adaptive.mean.to_string(),
            self.adaptive.stderr.to_string(),
            self.nonadaptive.mean.to_string(),
            self.nonadaptive.stderr.to_string(),
            self.adaptive_exact.to_string(),
            self.balanced_value.to_string(),
            self.ratio.to_string(),
        ];
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(GAP_HEADER)?;
        w.write_record(&row)?;
        let bytes = w.into_inner().map_err(|e| HarnessError::Config(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

pub fn run_adaptivity_gap(n: usize, p: f64, s: usize, trials: u64, seed: u64) -> Result<GapReport, HarnessError> {
    if trials == 0 || s == 0 || !(0.0..=1.0).contains(&p) {
        return Err(HarnessError::Config("need trials ≥ 1, s ≥ 1 and p in [0, 1]".into()));
    }
    let start = Instant::now();
    let bound = s as f64;
    let adaptive = Summary::from_weights(&er_adaptive_greedy(n, p, s, seed, trials), bound);
    let nonadaptive = Summary::from_weights(&er_balanced_nonadaptive(n, p, s, seed, trials), bound);
    Ok(GapReport {
        n,
        p,
        s,
        seed,
        ratio: nonadaptive.mean / adaptive.mean,
        adaptive,
        nonadaptive,
        adaptive_exact: er_adaptive_value(n, p, s),
        balanced_value: er_balanced_value(n, p, s),
        runtime: start.elapsed(),
    })
}
