//! `sqpc` — run and stress a Bell-state semiquantum private comparison
//! protocol from the command line.
//!
//! Exit codes: 0 on success, 1 when a run aborts or the command fails,
//! 2 for usage errors.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod output;
mod transcript_file;

use commands::{
    AttackArgs, EfficiencyArgs, LeakageArgs, ReportArgs, RunArgs, TableArgs,
};

#[derive(Parser)]
#[command(name = "sqpc", version, about = "Semiquantum private comparison laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one full protocol run on a pair of inputs.
    Run(RunArgs),
    /// Score an adversary over many runs: detection odds and what it learns.
    Attack(AttackArgs),
    /// Print the Bell-state encoding table, verified by exact enumeration.
    Table1(TableArgs),
    /// Account qubit and classical costs and the resulting efficiency.
    Efficiency(EfficiencyArgs),
    /// Estimate how often an unequal comparison stops before the last round.
    Leakage(LeakageArgs),
    /// Run every analysis and emit one combined JSON report.
    Report(ReportArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => commands::run(args),
        Command::Attack(args) => commands::attack(args),
        Command::Table1(args) => commands::table1(args),
        Command::Efficiency(args) => commands::efficiency_cmd(args),
        Command::Leakage(args) => commands::leakage(args),
        Command::Report(args) => commands::report(args),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(error) => {
            eprintln!("error: {}", error.message());
            if error.exit_code() == 2 {
                eprintln!("run `sqpc help` for the full flag synopsis");
            }
            ExitCode::from(error.exit_code() as u8)
        }
    }
}
