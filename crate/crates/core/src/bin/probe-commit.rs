//! Command-line front end. Exit codes: 0 success, 1 acceptance failure,
//! 2 usage or data error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use probe_commit::benchmarks::{adaptive_opt_bruteforce, nonadaptive_opt_bruteforce, relaxed_opt, Limits};
use probe_commit::harness::{
    run_adaptivity_gap, run_criterion, run_experiment, AcceptanceOptions, ArrivalSpec, ExperimentConfig,
    InstanceSource, CRITERIA,
};
use probe_commit::io::{read_instance, read_text, write_atomic, Instance};
use probe_commit::lp::{build_lp_qc, build_lp_std, simplex_solve, solve_lp_config, solve_lp_config_id, Method};
use probe_commit::probing::Algorithm;

#[derive(Parser)]
#[command(name = "probe-commit", version, about = "Online stochastic matching with probe-commit constraints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum LpKind {
    Config,
    ConfigId,
    Std,
    Qc,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Enumerate,
    Colgen,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Enumerate => Method::Enumerate,
            MethodArg::Colgen => Method::ColumnGeneration,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgArg {
    Greedy,
    Ocrs,
    Rcrs,
}

impl From<AlgArg> for Algorithm {
    fn from(a: AlgArg) -> Algorithm {
        match a {
            AlgArg::Greedy => Algorithm::Greedy,
            AlgArg::Ocrs => Algorithm::Ocrs,
            AlgArg::Rcrs => Algorithm::Rcrs,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Adaptive,
    Nonadaptive,
    Relaxed,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an LP relaxation of an instance file.
    SolveLp {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "config")]
        lp: LpKind,
        #[arg(long, value_enum, default_value = "enumerate")]
        method: MethodArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo run of an online algorithm; writes a CSV report.
    Simulate {
        /// Experiment config; replaces the other options.
        #[arg(long, conflicts_with_all = ["input", "sol", "alg"])]
        config: Option<PathBuf>,
        #[arg(long, required_unless_present = "config")]
        input: Option<PathBuf>,
        /// Saved configuration LP solution (solved on the fly if absent).
        #[arg(long)]
        sol: Option<PathBuf>,
        #[arg(long, value_enum, required_unless_present = "config")]
        alg: Option<AlgArg>,
        /// `random`, `random-times`, `worst-found` or `perm:FILE`.
        #[arg(long, default_value = "random")]
        arrivals: String,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "enumerate")]
        method: MethodArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact benchmark value of a small known graph.
    Benchmark {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Adaptive greedy against the balanced non-adaptive plan on the
    /// Erdős–Rényi instance.
    AdaptivityGap {
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 0.001)]
        p: f64,
        #[arg(long, default_value_t = 10)]
        s: usize,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance battery; exits 1 if any criterion fails.
    Suite {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
        /// Run only these criteria (comma separated).
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u8>,
    },
}

type CliResult = Result<ExitCode, String>;

fn emit(out: Option<&Path>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => write_atomic(p, text.as_bytes()).map_err(|e| e.to_string()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<Instance, String> {
    read_instance(path).map_err(|e| e.to_string())
}

fn known_graph(path: &Path) -> Result<probe_commit::graph::StochasticGraph, String> {
    match load(path)? {
        Instance::Graph(g) => Ok(g),
        Instance::KnownId(_) => Err(format!("{}: expected a known graph, found a known i.d. input", path.display())),
    }
}

fn solve_lp(input: &Path, lp: LpKind, method: MethodArg, out: Option<&Path>) -> CliResult {
    let text = match lp {
        LpKind::Config => {
            let sol = solve_lp_config(&known_graph(input)?, method.into()).map_err(|e| e.to_string())?;
            eprintln!("LPOPT = {}", sol.objective);
            serde_json::to_string_pretty(&sol).map_err(|e| e.to_string())?
        }
        LpKind::ConfigId => {
            let sol = solve_lp_config_id(&load(input)?.into_known_id(), method.into()).map_err(|e| e.to_string())?;
            eprintln!("LPOPT = {}", sol.objective);
            serde_json::to_string_pretty(&sol).map_err(|e| e.to_string())?
        }
        LpKind::Std | LpKind::Qc => {
            let g = known_graph(input)?;
            let model = match lp {
                LpKind::Std => build_lp_std(&g),
                _ => build_lp_qc(&g),
            }
            .map_err(|e| e.to_string())?;
            let sol = simplex_solve(&model).map_err(|e| e.to_string())?;
            eprintln!("LPOPT = {}", sol.objective);
            serde_json::to_string_pretty(&json!({"objective": sol.objective, "x": sol.x, "duals": sol.duals}))
                .map_err(|e| e.to_string())?
        }
    };
    emit(out, &(text + "\n"))?;
    Ok(ExitCode::SUCCESS)
}

fn parse_arrivals(spec: &str) -> Result<ArrivalSpec, String> {
    Ok(match spec {
        "random" => ArrivalSpec::Random,
        "random-times" => ArrivalSpec::RandomTimes,
        "worst-found" => ArrivalSpec::WorstFound,
        _ => {
            let file = spec
                .strip_prefix("perm:")
                .ok_or_else(|| format!("unknown arrival model {spec:?}"))?;
            let text = read_text(Path::new(file)).map_err(|e| e.to_string())?;
            let perm = text
                .split(|c: char| c.is_whitespace() || c == ',' || c == '[' || c == ']')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| format!("{file}: {t:?} is not an arrival index")))
                .collect::<Result<Vec<_>, _>>()?;
            ArrivalSpec::Perm(perm)
        }
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::SolveLp { input, lp, method, out } => solve_lp(&input, lp, method, out.as_deref()),
        Command::Simulate {
            config,
            input,
            sol,
            alg,
            arrivals,
            trials,
            seed,
            method,
            out,
        } => {
            let cfg = match config {
                Some(path) => ExperimentConfig::read(&path).map_err(|e| e.to_string())?,
                None => ExperimentConfig {
                    instance: InstanceSource::File(input.expect("required by clap")),
                    solution: sol,
                    method: method.into(),
                    algorithm: alg.expect("required by clap").into(),
                    arrivals: parse_arrivals(&arrivals)?,
                    trials,
                    seed,
                    out: out.clone(),
                },
            };
            let report = run_experiment(&cfg).map_err(|e| e.to_string())?;
            let s = &report.summary;
            eprintln!(
                "mean {:.6} ± {:.6} over {} trials, LPOPT {:.6}, ratio {} ({:.2} s)",
                s.mean,
                s.stderr,
                s.trials,
                report.lpopt,
                report.ratio.map_or("n/a".into(), |r| format!("{r:.4}")),
                report.runtime.as_secs_f64()
            );
            if cfg.out.is_none() {
                print!("{}", report.to_csv().map_err(|e| e.to_string())?);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Benchmark { input, which, out } => {
            let g = known_graph(&input)?;
            let (name, value) = match which {
                Which::Adaptive => ("adaptive", adaptive_opt_bruteforce(&g, Limits::default())),
                Which::Nonadaptive => ("nonadaptive", nonadaptive_opt_bruteforce(&g, Limits::default())),
                Which::Relaxed => ("relaxed", relaxed_opt(&g)),
            };
            let value = value.map_err(|e| e.to_string())?;
            let text = serde_json::to_string_pretty(&json!({"benchmark": name, "value": value})).map_err(|e| e.to_string())?;
            emit(out.as_deref(), &(text + "\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::AdaptivityGap { n, p, s, trials, seed, out } => {
            let r = run_adaptivity_gap(n, p, s, trials, seed).map_err(|e| e.to_string())?;
            emit(out.as_deref(), &r.to_csv().map_err(|e| e.to_string())?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Suite { seed, trials, criteria } => {
            let mut opts = AcceptanceOptions::default();
            opts.seed = seed.unwrap_or(opts.seed);
            opts.trials = trials.unwrap_or(opts.trials);
            if let Some(bad) = criteria.iter().find(|c| !CRITERIA.iter().any(|k| k.0 == **c)) {
                return Err(format!("no criterion {bad}"));
            }
            let mut failed = 0;
            for (id, _) in CRITERIA {
                if !criteria.is_empty() && !criteria.contains(&id) {
                    continue;
                }
                let r = run_criterion(id, &opts).map_err(|e| e.to_string())?;
                println!("{}", r.line());
                failed += usize::from(!r.passed);
            }
            Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}
