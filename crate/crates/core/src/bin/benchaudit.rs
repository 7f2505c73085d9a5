use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use benchaudit::impute::DEFAULT_NEIGHBOURS;
use benchaudit::workbench::io::{read_json, save_leaderboard, write_atomic, write_json};
use benchaudit::workbench::{
    audit, load_leaderboard, subset_analysis, tradeoff_csv, tradeoff_fit, AuditOptions,
    AuditReport, EpsilonSource, MissingPolicy, SensitivityMethod, SplitChoice, DEFAULT_GRID_POINTS,
    DEFAULT_SPLIT_FRACTION,
};
use benchaudit::{
    generate_constant, generate_random, BenchmarkKind, CardinalAttackConfig, OrdinalAttackConfig,
    Result,
};

#[derive(Parser)]
#[command(
    name = "benchaudit",
    version,
    about = "Diversity and sensitivity audits for multi-task benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Measure diversity and attack-based sensitivity of one leaderboard.
    Audit {
        #[arg(long, value_enum)]
        kind: Kind,
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        attack: AttackArgs,
    },
    /// Write a synthetic reference leaderboard.
    Generate {
        #[arg(value_enum)]
        which: Synthetic,
        #[arg(long, default_value_t = 100)]
        models: usize,
        #[arg(long, default_value_t = 100)]
        tasks: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Smallest rank distance reachable from task subsets of each size.
    SubsetAnalysis {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Cardinal)]
        kind: Kind,
        #[arg(long, default_value_t = 6)]
        max_k: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify sensitivity by exhaustive search on small instances.
    Oracle {
        #[arg(value_enum)]
        kind: Kind,
        #[command(flatten)]
        common: CommonArgs,
        /// Grid points per task for the cardinal search.
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid_points: usize,
    },
    /// Fit sensitivity against diversity across audit reports.
    Tradeoff {
        #[arg(long, num_args = 1.., required = true)]
        inputs: Vec<PathBuf>,
        /// Also write plot-ready points as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CommonArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Benchmark name in the report; defaults to the input file stem.
    #[arg(long)]
    name: Option<String>,
    #[arg(long, conflicts_with = "epsilon_rule")]
    epsilon: Option<f64>,
    /// Derive epsilon from per-task score spread (the default).
    #[arg(long)]
    epsilon_rule: bool,
    #[arg(long, default_value_t = DEFAULT_SPLIT_FRACTION)]
    split_fraction: f64,
    /// Evaluate these models instead of the top fraction.
    #[arg(long, value_delimiter = ',', conflicts_with = "split_fraction")]
    kept: Option<Vec<String>>,
    #[arg(long, default_value_t = DEFAULT_NEIGHBOURS)]
    impute_k: usize,
    /// Run sensitivity on models with complete scores only.
    #[arg(long)]
    drop_incomplete: bool,
}

#[derive(Args)]
struct AttackArgs {
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    step: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Cardinal,
    Ordinal,
}

impl From<Kind> for BenchmarkKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Cardinal => BenchmarkKind::Cardinal,
            Kind::Ordinal => BenchmarkKind::Ordinal,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Synthetic {
    Constant,
    Random,
}

impl CommonArgs {
    fn epsilon(&self) -> EpsilonSource {
        self.epsilon
            .map_or(EpsilonSource::Rule, EpsilonSource::Fixed)
    }

    fn split(&self) -> SplitChoice {
        match &self.kept {
            Some(names) => SplitChoice::Named(names.clone()),
            None => SplitChoice::TopFraction(self.split_fraction),
        }
    }

    fn options(&self, method: SensitivityMethod) -> AuditOptions {
        AuditOptions {
            method,
            impute_k: self.impute_k,
            missing: if self.drop_incomplete {
                MissingPolicy::DropIncomplete
            } else {
                MissingPolicy::Reject
            },
        }
    }

    fn run(&self, method: SensitivityMethod) -> Result<()> {
        let scores = load_leaderboard(&self.input)?;
        let name = self.name.clone().unwrap_or_else(|| stem(&self.input));
        let report = audit(&name, &scores, &self.options(method))?;
        write_json(&report, &self.out)?;
        println!(
            "{name}: diversity {:.4}, sensitivity tau {:.4}, mrc {:.4}",
            report.diversity, report.sensitivity_tau, report.sensitivity_mrc
        );
        Ok(())
    }
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "benchmark".into())
}

fn attack_method(kind: Kind, common: &CommonArgs, a: &AttackArgs) -> SensitivityMethod {
    match kind {
        Kind::Cardinal => {
            let d = CardinalAttackConfig::default();
            SensitivityMethod::Cardinal {
                epsilon: common.epsilon(),
                attack: CardinalAttackConfig {
                    lambda: a.lambda.unwrap_or(d.lambda),
                    iterations: a.iters.unwrap_or(d.iterations),
                    step_size: a.step.unwrap_or(d.step_size),
                    restarts: a.restarts.unwrap_or(d.restarts),
                    seed: a.seed,
                    ..d
                },
            }
        }
        Kind::Ordinal => {
            let d = OrdinalAttackConfig::default();
            SensitivityMethod::Ordinal {
                split: common.split(),
                attack: OrdinalAttackConfig {
                    lambda: a.lambda.unwrap_or(d.lambda),
                    iterations: a.iters.unwrap_or(d.iterations),
                    step_size: a.step.unwrap_or(d.step_size),
                    restarts: a.restarts.unwrap_or(d.restarts),
                    seed: a.seed,
                },
            }
        }
    }
}

fn emit<T: serde::Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => write_json(value, path),
        None => {
            println!(
                "{}",
                serde_json::to_string_pretty(value).expect("serializable")
            );
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Audit {
            kind,
            common,
            attack,
        } => common.run(attack_method(kind, &common, &attack)),
        Command::Oracle {
            kind,
            common,
            grid_points,
        } => {
            let method = match kind {
                Kind::Cardinal => SensitivityMethod::CardinalGrid {
                    epsilon: common.epsilon(),
                    points_per_task: grid_points,
                },
                Kind::Ordinal => SensitivityMethod::OrdinalExhaustive {
                    split: common.split(),
                },
            };
            common.run(method)
        }
        Command::Generate {
            which,
            models,
            tasks,
            seed,
            out,
        } => {
            let scores = match which {
                Synthetic::Constant => generate_constant(models, tasks, seed)?,
                Synthetic::Random => generate_random(models, tasks, seed)?,
            };
            save_leaderboard(&scores, out)
        }
        Command::SubsetAnalysis {
            input,
            kind,
            max_k,
            samples,
            seed,
            out,
        } => {
            let scores = load_leaderboard(&input)?;
            let analysis = subset_analysis(&scores, kind.into(), max_k, samples, seed)?;
            emit(&analysis, out.as_deref())
        }
        Command::Tradeoff { inputs, csv, out } => {
            let reports = inputs
                .iter()
                .map(read_json::<AuditReport>)
                .collect::<Result<Vec<_>>>()?;
            if let Some(path) = csv {
                write_atomic(path, tradeoff_csv(&reports).as_bytes())?;
            }
            emit(&tradeoff_fit(&reports)?, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("benchaudit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
