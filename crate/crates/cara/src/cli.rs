//! Argument parsing, dispatch, exit codes and run manifests.

use std::ffi::OsString;
use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use cara_core::condition::{Condition22Config, Mode};
use cara_core::fit::FitConfig;
use cara_core::flow::{FlowConfig, FlowNormalization};
use cara_core::mass::MassConfig;
use cara_core::waring::WaringConfig;
use cara_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::{self, BoundsFormat, Report, SchurOptions};
use crate::io::Inputs;
use crate::manifest::RunManifest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable holding the default worker thread count.
pub const THREADS_ENV: &str = "CARA_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "cara",
    version,
    about = "Carathéodory numbers of truncated moment problems"
)]
pub struct Cli {
    /// Seed for every random choice (probe points, restarts, sampling).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write a run manifest to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub manifest: Option<String>,
    /// Worker threads; 0 lets the runtime decide.
    #[arg(long, global = true, env = THREADS_ENV, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ConditionMode {
    Numeric,
    Positivity,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Normalization {
    Unit,
    WeightRate,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long, default_value_t = 64)]
    pub restarts: usize,
    /// Convergence threshold relative to the sup norm of the sequence.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

impl FitArgs {
    fn config(&self) -> FitConfig {
        FitConfig {
            restarts: self.restarts,
            tolerance: self.tolerance,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generic rank number of a basis, by exact probing or closed form.
    Na {
        /// Shorthand (full:n:d, hom:n:d, gapped1d:…, gappedhom:…, motzkin) or JSON file.
        #[arg(long)]
        basis: String,
        #[arg(long)]
        max_k: Option<usize>,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long)]
        closed_form: bool,
    },
    /// Schur factorization of a gapped monomial list and the derived q polynomials.
    Schur {
        #[arg(long, value_delimiter = ',', required = true)]
        exponents: Vec<u32>,
        #[arg(long)]
        verify_identity: bool,
        #[arg(long, value_name = "MODE")]
        check_condition22: Option<ConditionMode>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 1000)]
        local_searches: usize,
    },
    /// Fit a k-atomic measure to a moment sequence.
    Fit {
        #[arg(long)]
        seq: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        signed: bool,
        #[command(flatten)]
        fit: FitArgs,
    },
    /// Estimate the Carathéodory number of one sequence.
    Cara {
        #[arg(long)]
        seq: String,
        #[arg(long)]
        signed: bool,
        /// A proven lower bound to start the sweep from.
        #[arg(long)]
        certified: Option<usize>,
        #[command(flatten)]
        fit: FitArgs,
    },
    /// Maximal point mass at a point.
    Maxmass {
        #[arg(long)]
        seq: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Polynomial file or literal, positive at the point.
        #[arg(long)]
        e: String,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
    },
    /// Integrate the moment-preserving kernel flow.
    Flow {
        #[arg(long)]
        basis: String,
        #[arg(long)]
        measure: String,
        #[arg(long, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long, allow_hyphen_values = true)]
        t1: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Normalization::Unit)]
        normalization: Normalization,
        /// Also write the trajectory as CSV.
        #[arg(long, value_name = "PATH")]
        csv: Option<String>,
    },
    /// Signed decomposition of an even form into powers of linear forms.
    Waring {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
    },
    /// Exact zero-set certificate for a builtin nonnegative form.
    Cert {
        #[arg(long)]
        name: String,
        #[arg(long)]
        basis: Option<String>,
        #[arg(long)]
        dump_matrix: bool,
    },
    /// Carathéodory bounds for ternary forms.
    Bounds {
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "2,4,6,8,10,12,14,16,18,20,40,100,1000"
        )]
        rows: Vec<u64>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn is_nonconvergence(e: &anyhow::Error) -> bool {
    matches!(
        e.downcast_ref::<Error>(),
        Some(
            Error::Exhausted { .. }
                | Error::NotAMomentSequence { .. }
                | Error::Inconsistent { .. }
                | Error::NotConverged { .. }
        )
    )
}

fn dispatch(cmd: &Command, seed: u64, inputs: &mut Inputs) -> Result<Report> {
    match cmd {
        Command::Na {
            basis,
            max_k,
            trials,
            closed_form,
        } => commands::na(inputs, basis, *max_k, *trials, *closed_form, seed),
        Command::Schur {
            exponents,
            verify_identity,
            check_condition22,
            samples,
            local_searches,
        } => {
            let opts = SchurOptions {
                verify_identity: *verify_identity,
                condition: check_condition22.map(|m| match m {
                    ConditionMode::Numeric => Mode::Numeric,
                    ConditionMode::Positivity => Mode::Positivity,
                }),
                condition_cfg: Condition22Config {
                    samples: *samples,
                    local_searches: *local_searches,
                    ..Condition22Config::default()
                },
                seed,
            };
            commands::schur(exponents, &opts)
        }
        Command::Fit {
            seq,
            k,
            signed,
            fit,
        } => commands::fit(inputs, seq, *k, *signed, &fit.config(), seed),
        Command::Cara {
            seq,
            signed,
            certified,
            fit,
        } => commands::cara(inputs, seq, *signed, *certified, &fit.config(), seed),
        Command::Maxmass {
            seq,
            point,
            e,
            tolerance,
            restarts,
        } => {
            let cfg = MassConfig {
                tolerance: *tolerance,
                restarts: *restarts,
                ..MassConfig::default()
            };
            commands::maxmass(inputs, seq, point, e, &cfg, seed)
        }
        Command::Flow {
            basis,
            measure,
            t0,
            t1,
            steps,
            normalization,
            csv,
        } => {
            let cfg = FlowConfig {
                steps: *steps,
                normalization: match normalization {
                    Normalization::Unit => FlowNormalization::Unit,
                    Normalization::WeightRate => FlowNormalization::WeightRate,
                },
                ..FlowConfig::default()
            };
            commands::flow(inputs, basis, measure, *t0, *t1, &cfg, csv.as_deref())
        }
        Command::Waring {
            poly,
            restarts,
            tolerance,
        } => {
            let cfg = WaringConfig {
                fit: FitConfig {
                    restarts: *restarts,
                    tolerance: *tolerance,
                },
            };
            commands::waring(inputs, poly, &cfg, seed)
        }
        Command::Cert {
            name,
            basis,
            dump_matrix,
        } => commands::cert(inputs, name, basis.as_deref(), *dump_matrix),
        Command::Bounds { rows, format } => commands::bounds(
            rows,
            match format {
                Format::Table => BoundsFormat::Table,
                Format::Json => BoundsFormat::Json,
                Format::Csv => BoundsFormat::Csv,
            },
        ),
    }
}

fn render(json: &serde_json::Value) -> String {
    match json {
        serde_json::Value::String(s) => s.clone(),
        other => {
            let mut s = serde_json::to_string_pretty(other).expect("JSON values always serialize");
            s.push('\n');
            s
        }
    }
}

fn write_atomically(path: &str, text: &str) -> Result<()> {
    let target = Path::new(path);
    let tmp = target.with_extension("tmp");
    fs::write(&tmp, text).with_context(|| format!("cannot write '{}'", tmp.display()))?;
    fs::rename(&tmp, target).with_context(|| format!("cannot write '{path}'"))
}

/// Parses `argv` (program name first), runs the command and reports what to
/// print. Never exits the process.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            return Outcome {
                code: EXIT_DOMAIN,
                stdout: String::new(),
                stderr: format!("error: cannot start worker threads: {e}\n"),
            }
        }
    };
    let started = Instant::now();
    let mut inputs = Inputs::default();
    let result = pool.install(|| dispatch(&cli.command, cli.seed, &mut inputs));
    let (mut outcome, tolerances) = match result {
        Ok(report) => (
            Outcome {
                code: if report.converged {
                    EXIT_OK
                } else {
                    EXIT_NOT_CONVERGED
                },
                stdout: render(&report.json),
                stderr: String::new(),
            },
            report.tolerances,
        ),
        Err(e) => (
            Outcome {
                code: if is_nonconvergence(&e) {
                    EXIT_NOT_CONVERGED
                } else {
                    EXIT_DOMAIN
                },
                stdout: String::new(),
                stderr: format!("error: {e:#}\n"),
            },
            Default::default(),
        ),
    };
    if let Some(path) = &cli.manifest {
        let manifest = RunManifest {
            command_line: argv
                .iter()
                .map(|a| a.to_string_lossy().into_owned())
                .collect(),
            input_digests: inputs.digests,
            seed: cli.seed,
            tolerances,
            threads: pool.current_num_threads(),
            version: env!("CARGO_PKG_VERSION").into(),
            exit_code: outcome.code,
            wall_time_seconds: started.elapsed().as_secs_f64(),
        };
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        if let Err(e) = write_atomically(path, &text) {
            outcome.stderr.push_str(&format!("error: {e:#}\n"));
            if outcome.code == EXIT_OK {
                outcome.code = EXIT_DOMAIN;
            }
        }
    }
    outcome
}
