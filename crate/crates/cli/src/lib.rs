//! Command-line front end: system files in, canonical JSON reports out.
//!
//! Exit codes: 0 for a positive result, 2 for an expected negative result
//! (obstructed, non-involutive, rejected certificate), 1 for usage and
//! internal errors.

pub mod commands;
pub mod report;
pub mod system;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use qlift_core::koszul::SolverRegistry;

use commands::{CliError, GenerateArgs};
use report::Report;

/// Environment variable holding the log filter.
pub const LOG_ENV: &str = "QLIFT_LOG";

#[derive(Debug, Parser)]
#[command(
    name = "qlift",
    version,
    about = "Order-by-order quantisation of involutive polynomial systems"
)]
pub struct Cli {
    /// Coboundary solver.
    #[arg(long, global = true, default_value = "auto")]
    pub solver: String,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that the generators pairwise Poisson-commute.
    Check { file: PathBuf },
    /// Build commuting lifts to a given order, or report the obstruction.
    Quantize {
        file: PathBuf,
        #[arg(long)]
        order: Option<usize>,
        /// Degree bound for every correction; overrides the file.
        #[arg(long)]
        degree_bound: Option<u32>,
    },
    /// Anomaly of the lift given by the `f<i>@<k>` lines, and its correction.
    Anomaly {
        file: PathBuf,
        /// Level of the lifting being lifted; defaults to the highest order given minus one.
        #[arg(long)]
        level: Option<usize>,
        #[arg(long)]
        degree_bound: Option<u32>,
    },
    /// Graded cohomology dimensions of a homogeneous system.
    Cohomology {
        file: PathBuf,
        /// Cochain degree; all degrees when omitted.
        #[arg(long)]
        p: Option<usize>,
        /// Highest internal degree in the table.
        #[arg(long, default_value_t = 4)]
        max_degree: i64,
    },
    /// Apply the comparison map to the file's `form[...]` lines.
    CompareForm { file: PathBuf },
    /// Involutive system from the file's shears, or from a seeded random sequence.
    Generate {
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        steps: usize,
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
    },
    /// Re-check a certificate, given as a quantize report or a bare certificate.
    Verify { file: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn failure(code: i32, message: String) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: message,
            code,
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let solver = SolverRegistry::builtin().get(&cli.solver).map_err(|_| {
        let known: Vec<&str> = SolverRegistry::builtin().names().collect();
        CliError::Usage(format!(
            "unknown solver {:?}; known: {}",
            cli.solver,
            known.join(", ")
        ))
    })?;
    match &cli.command {
        Command::Check { file } => commands::check(&commands::load(file)?),
        Command::Quantize {
            file,
            order,
            degree_bound,
        } => commands::quantize_cmd(&commands::load(file)?, *order, *degree_bound, &solver),
        Command::Anomaly {
            file,
            level,
            degree_bound,
        } => commands::anomaly_cmd(&commands::load(file)?, *level, *degree_bound, &solver),
        Command::Cohomology {
            file,
            p,
            max_degree,
        } => commands::cohomology(&commands::load(file)?, *p, *max_degree),
        Command::CompareForm { file } => commands::compare_form(&commands::load(file)?),
        Command::Generate {
            file,
            n,
            seed,
            steps,
            max_degree,
        } => {
            let input = file.as_deref().map(commands::load).transpose()?;
            let args = GenerateArgs {
                n: *n,
                seed: *seed,
                steps: *steps,
                max_degree: *max_degree,
            };
            commands::generate(input.as_ref(), &args)
        }
        Command::Verify { file } => commands::verify(file),
    }
}

/// Parses `args` (program name first), runs the command, and renders the result.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            } else {
                Outcome::failure(code, text)
            };
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => return Outcome::failure(1, format!("error: {e}\n")),
    };
    let text = report.render();
    let code = report.status.exit_code();
    match &cli.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => {
                log::info!(
                    "wrote {} report to {}",
                    report.status.as_str(),
                    path.display()
                );
                Outcome {
                    stdout: String::new(),
                    stderr: String::new(),
                    code,
                }
            }
            Err(e) => Outcome::failure(1, format!("error: cannot write {}: {e}\n", path.display())),
        },
        None => Outcome {
            stdout: text,
            stderr: String::new(),
            code,
        },
    }
}
