//! Command-line front end: ingest competition results from CSV, run the
//! rating solvers and diagnostics, and emit published ratings and reports.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fixelo_cli::commands::{
    cmd_analyze, cmd_classical, cmd_compare, cmd_solve, AnalyzeArgs, ClassicalArgs, SolveArgs,
};

#[derive(Parser)]
#[command(
    name = "fixelo",
    version,
    about = "Elo-style ratings computed as the fixed point of the classical Elo update"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute self-justifying ratings from accumulated results
    Solve(SolveArgs),
    /// Run the sequential classical Elo and classify its tail behaviour
    Classical(ClassicalArgs),
    /// Report connectivity, boundedness, and the large-k rating asymptote
    Analyze(AnalyzeArgs),
    /// Print classical and self-justifying ratings side by side
    Compare(SolveArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Classical(args) => cmd_classical(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Compare(args) => cmd_compare(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}
