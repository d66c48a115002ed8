//! `obook`: open book decompositions, pseudo-Anosov orbit counts and contact
//! homology growth tables from the command line.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use report::{render_text, CliError, Inputs, RunReport, SCHEMA_VERSION};

#[derive(Parser, Debug)]
#[command(
    name = "obook",
    version,
    about = "Invariants of open books and pseudo-Anosov dynamics"
)]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,
    /// Seed for randomized subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Size parameter for commands that take one (action cap, model range).
    #[arg(long, global = true)]
    cap: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rademacher functions.
    #[command(subcommand)]
    Phi(PhiCommand),
    /// Rotation number of a PL circle-map lift.
    Rotnum {
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = 1000)]
        max_den: u64,
        #[arg(long, default_value_t = 1_000_000)]
        iterations: u64,
    },
    /// Fractional Dehn twist coefficient from prong data.
    Fdtc {
        #[arg(long)]
        prongs: u32,
        #[arg(long, allow_negative_numbers = true)]
        shift: i64,
        #[arg(long, default_value_t = 0)]
        boundary: usize,
        /// Boundary circle map whose rotation number must equal shift/prongs.
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        max_den: u64,
        #[arg(long, default_value_t = 1_000_000)]
        iterations: u64,
    },
    /// Right-veering, tightness and Weinstein status of an open book.
    Classify {
        #[arg(long)]
        book: PathBuf,
    },
    /// Positive (default) or negative stabilization.
    Stabilize {
        #[arg(long)]
        book: PathBuf,
        #[arg(long)]
        negative: bool,
        /// `same:I` (both feet on boundary I) or `connect:I:J`.
        #[arg(long)]
        handle: String,
    },
    /// Periodic orbit counts of a Markov transition graph.
    Orbits {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 30)]
        max_period: u32,
        /// Include parity, good-orbit and Lefschetz columns.
        #[arg(long)]
        signed: bool,
        /// Exponential growth certificate.
        #[arg(long)]
        certificate: bool,
        #[arg(long, default_value_t = 0.01)]
        slack: f64,
        /// Width target for the dilatation interval.
        #[arg(long, default_value = "1/1000000000")]
        tol: String,
    },
    /// Seifert invariants and contact homology generators.
    #[command(subcommand)]
    Seifert(SeifertCommand),
    /// Growth rate of counting functions.
    #[command(subcommand)]
    Growth(GrowthCommand),
}

#[derive(Subcommand, Debug)]
pub enum PhiCommand {
    /// Step values `phi(s, i)` for one polygon size.
    Step {
        #[arg(long)]
        sides: usize,
    },
    /// Value on a tessellation path.
    Eval {
        #[arg(long, visible_alias = "tess")]
        tessellation: PathBuf,
        #[arg(long)]
        path: PathBuf,
    },
    /// Value on a prong crossing word.
    Pa {
        #[arg(long)]
        word: PathBuf,
    },
    /// Concatenation defect of two paths or two words.
    Defect {
        #[arg(long, visible_alias = "tess")]
        tessellation: Option<PathBuf>,
        #[arg(long)]
        path: Option<PathBuf>,
        #[arg(long)]
        path2: Option<PathBuf>,
        #[arg(long)]
        word: Option<PathBuf>,
        #[arg(long)]
        word2: Option<PathBuf>,
    },
    /// Random defect and antisymmetry checks.
    Fuzz {
        #[arg(long, default_value_t = 10_000)]
        pairs: usize,
        /// Defaults to the built-in pants, holed torus and genus-2 tessellations.
        #[arg(long, visible_alias = "tess")]
        tessellation: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum SeifertCommand {
    /// Euler number and the invariant transverse criterion.
    Euler {
        #[arg(long)]
        inv: PathBuf,
    },
    /// Contact homology generators up to action `--cap` (default 10).
    Hc {
        #[arg(long)]
        data: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum GrowthCommand {
    /// Linear, polynomial or exponential growth of an `N(L)` table.
    Classify {
        #[arg(long)]
        table: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        threshold: f64,
    },
    /// Counting function of a model example up to `--cap`.
    Model {
        #[arg(long, value_enum)]
        example: ModelArg,
        #[arg(long, default_value_t = 2)]
        genus: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    S3,
    T3,
    Words,
}

pub struct Ctx {
    pub seed: u64,
    pub cap: Option<u64>,
    pub inputs: Inputs,
}

/// Results of a command. `failure` marks a run whose report is still
/// printed but whose checks did not pass.
pub struct Outcome {
    pub command: String,
    pub results: serde_json::Value,
    pub warnings: Vec<String>,
    pub failure: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let output = cli.output;
    let mut ctx = Ctx {
        seed: cli.seed,
        cap: cli.cap,
        inputs: Inputs::default(),
    };
    match commands::dispatch(cli.command, &mut ctx) {
        Ok(outcome) => {
            let report = RunReport {
                schema_version: SCHEMA_VERSION.to_string(),
                command: outcome.command,
                inputs_digest: ctx.inputs.digest(),
                results: outcome.results,
                warnings: outcome.warnings,
            };
            match output {
                Output::Json => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&report).expect("report serializes")
                    )
                }
                Output::Text => print!("{}", render_text(&report)),
            }
            match outcome.failure {
                Some(msg) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(2)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
