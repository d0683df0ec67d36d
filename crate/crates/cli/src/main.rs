#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gamow_core::validation::Suite;

mod commands;
mod config;
mod output;

#[derive(Parser, Debug)]
#[command(name = "gamow", version, about = "Wavefronts and pseudo-norms of multi-particle Gamow states")]
struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a constant-τ front and write `sample_id,r_1,…,r_N,tau,residual`.
    Front {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pseudo-norm convergence scan over τ_R.
    Norm {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Delta-shell resonance poles for a range of branches.
    Poles {
        #[arg(long)]
        g: f64,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        m: f64,
        /// Inclusive range `B1:B2`.
        #[arg(long)]
        branches: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// τ, p_s, S, T and surface weight at one radial point, as JSON.
    Tau {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the built-in invariant suites.
    Validate {
        #[arg(long, value_enum, default_value_t = SuiteName::Fast)]
        suite: SuiteName,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteName {
    Fast,
    All,
}

/// Exit status and the one-line reason written to stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: &'static str,
    pub reason: String,
}

impl Failure {
    pub fn config(reason: impl Into<String>) -> Self {
        Self {
            code: 2,
            kind: "config",
            reason: reason.into(),
        }
    }

    pub fn validation(reason: impl Into<String>) -> Self {
        Self {
            code: 1,
            kind: "validation",
            reason: reason.into(),
        }
    }

    fn report(&self) {
        let line = serde_json::json!({ "error": self.kind, "reason": self.reason });
        eprintln!("{line}");
    }
}

impl From<gamow_core::Error> for Failure {
    fn from(e: gamow_core::Error) -> Self {
        if e.is_convergence_failure() {
            Self {
                code: 3,
                kind: "nonconvergence",
                reason: e.to_string(),
            }
        } else {
            Self::config(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::config(format!("i/o: {e}"))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Front { config, out } => commands::front(&config, out),
        Command::Norm { config, out } => commands::norm(&config, out),
        Command::Poles { g, a, m, branches, out } => commands::poles(g, a, m, &branches, &out),
        Command::Tau { config } => commands::tau(&config),
        Command::Validate { suite } => commands::validate(match suite {
            SuiteName::Fast => Suite::Fast,
            SuiteName::All => Suite::All,
        }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e.to_string().lines().next().unwrap_or_default().to_string();
            Failure::config(first).report();
            return ExitCode::from(2);
        }
    };
    let threads = cli.threads;
    let outcome = match threads {
        Some(0) => Err(Failure::config("--threads must be at least 1")),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(cli)),
            Err(e) => Err(Failure::config(format!("thread pool: {e}"))),
        },
        None => run(cli),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            failure.report();
            ExitCode::from(failure.code)
        }
    }
}
