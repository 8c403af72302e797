use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sbs_cli::{CliError, Scenario, Sweep};
use sbs_core::oracle::SuiteConfig;

#[derive(Debug, Parser)]
#[command(name = "sbs", version, about = "Pure-dephasing simulator with spectrum broadcast structure diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep a time grid and write one CSV row per time point.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Evaluate a single time instead of the sweep.
        #[arg(long, conflicts_with_all = ["t_start", "t_end", "steps"])]
        t: Option<f64>,
        #[arg(long)]
        t_start: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Write the full diagnostic report at one time as JSON.
    Check {
        #[command(flatten)]
        common: Common,
        /// Time to evaluate (default: the sweep's t_start).
        #[arg(long)]
        t: Option<f64>,
        /// Cross-check every quantity against the dense oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Run the seeded implication suite and report counterexamples.
    Verify {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Observed-environment dimensions to sample from.
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        times: usize,
        /// Negative control: break unitarity of one conditional evolution.
        #[arg(long)]
        inject_fault: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerances,
    },
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    tol: Tolerances,
}

#[derive(Debug, Args)]
struct Tolerances {
    #[arg(long)]
    tol_support: Option<f64>,
    #[arg(long)]
    tol_orthogonality: Option<f64>,
    #[arg(long)]
    tol_decoherence: Option<f64>,
    #[arg(long)]
    tol_equality: Option<f64>,
}

impl Tolerances {
    fn apply(&self, t: &mut sbs_core::diagnostics::Thresholds) -> Result<(), CliError> {
        for (target, value) in [
            (&mut t.support_tol, self.tol_support),
            (&mut t.orthogonality_tol, self.tol_orthogonality),
            (&mut t.decoherence_tol, self.tol_decoherence),
            (&mut t.equality_tol, self.tol_equality),
        ] {
            if let Some(v) = value {
                *target = v;
            }
        }
        t.validate().map_err(CliError::from_validation)
    }
}

fn load(common: &Common) -> Result<Scenario, CliError> {
    let mut scenario = Scenario::from_path(&common.config)?;
    common.tol.apply(&mut scenario.thresholds)?;
    Ok(scenario)
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate {
            common,
            t,
            t_start,
            t_end,
            steps,
        } => {
            let scenario = load(&common)?;
            let sweep = match t {
                Some(t) => Sweep {
                    t_start: t,
                    t_end: t + 1.0,
                    steps: 1,
                },
                None => {
                    let base = scenario.sweep;
                    let pick = |v: Option<f64>, b: Option<f64>, name: &str| {
                        v.or(b).ok_or_else(|| {
                            CliError::validation(format!("sweep.{name}"), "missing; give it in the scenario or on the command line")
                        })
                    };
                    Sweep {
                        t_start: pick(t_start, base.map(|s| s.t_start), "t_start")?,
                        t_end: pick(t_end, base.map(|s| s.t_end), "t_end")?,
                        steps: steps
                            .or(base.map(|s| s.steps))
                            .ok_or_else(|| CliError::validation("sweep.steps", "missing"))?,
                    }
                }
            };
            let csv = sbs_cli::simulate(&scenario, &sweep)?;
            emit(common.out.as_ref(), &csv)
        }
        Command::Check { common, t, oracle } => {
            let scenario = load(&common)?;
            let t = t
                .or(scenario.sweep.map(|s| s.t_start))
                .ok_or_else(|| CliError::validation("t", "no --t given and the scenario has no sweep"))?;
            let (report, failures) = sbs_cli::check(&scenario, t, oracle)?;
            emit(common.out.as_ref(), &json_text(&report))?;
            if failures > 0 {
                return Err(CliError::Counterexample { count: failures });
            }
            Ok(())
        }
        Command::Verify {
            samples,
            seed,
            dims,
            times,
            inject_fault,
            out,
            tol,
        } => {
            let mut config = SuiteConfig::new(seed, dims);
            config.times_per_sample = times;
            config.corrupt = inject_fault;
            tol.apply(&mut config.thresholds)?;
            let (report, failures) = sbs_cli::verify(&config, samples)?;
            emit(out.as_ref(), &json_text(&report))?;
            if failures > 0 {
                return Err(CliError::Counterexample { count: failures });
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
