mod commands;
mod config;
mod error;

use clap::{CommandFactory, Parser, Subcommand};
use commands::{CurveKind, NormalizationArg};
use config::{CommonArgs, RunConfig};
use error::CliError;
use std::process::ExitCode;

/// Self-similar CW-complexes, trace curves and L2-invariants.
///
/// Exit codes: 0 ok, 1 usage, 2 axiom/identity/margin failure,
/// 3 indeterminate fit, 4 I/O.
#[derive(Parser, Debug)]
#[command(name = "l2fractal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build levels 0..=N, write them with copy maps and a self-similarity report.
    Build(CommonArgs),
    /// Betti and Novikov–Shubin estimates, Euler data and identity suites as JSON.
    Invariants(CommonArgs),
    /// Heat, resolvent, density or return-probability curves as CSV.
    Curve {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value = "heat")]
        curve: CurveKind,
        #[arg(long, value_enum, default_value = "volume")]
        normalization: NormalizationArg,
        /// Prepend a t = 0 row.
        #[arg(long)]
        with_zero: bool,
    },
    /// Self-similarity, identity, geometric-operator and norm-bound checks.
    Verify(CommonArgs),
    /// Dual graphs of a 2-complex family.
    DualGraph(CommonArgs),
    /// Exact Euler characteristics per level and their limit.
    Euler(CommonArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Build(a) => commands::cmd_build(&RunConfig::resolve(&a, 4)?),
        Command::Invariants(a) => commands::cmd_invariants(&RunConfig::resolve(&a, 5)?),
        Command::Curve {
            common,
            curve,
            normalization,
            with_zero,
        } => commands::cmd_curve(
            &RunConfig::resolve(&common, 5)?,
            curve,
            normalization,
            with_zero,
        ),
        Command::Verify(a) => commands::cmd_verify(&RunConfig::resolve(&a, 3)?),
        Command::DualGraph(a) => commands::cmd_dual_graph(&RunConfig::resolve(&a, 4)?),
        Command::Euler(a) => commands::cmd_euler(&RunConfig::resolve(&a, 8)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Usage(_) = e {
                eprintln!("{}", Cli::command().render_usage());
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
