//! Command-line harness for the collaborative-representation toolkit:
//! synthetic data generation, model evaluation over seeded splits,
//! sparse-vs-non-sparse selection scoring, model comparison, and
//! dictionary fitting.

use clap::{Parser, Subcommand};
use colrep_cli::commands;

#[derive(Parser)]
#[command(
    name = "colrep",
    version,
    about = "Sparse vs. non-sparse collaborative representation classification toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic Gaussian-cluster dataset CSV.
    Synth(commands::synth::SynthArgs),
    /// Evaluate one classifier over seeded train/test splits.
    Eval(commands::eval::EvalArgs),
    /// Score a dataset (or a raw statistics table) for the sparse vs.
    /// non-sparse choice.
    Select(commands::select::SelectArgs),
    /// Run several classifiers on identical splits and tabulate accuracy
    /// and timings.
    Compare(commands::compare::CompareArgs),
    /// Fit a dictionary and persist it with its fit trace.
    FitDict(commands::fit_dict::FitDictArgs),
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Synth(args) => commands::synth::run(args),
        Command::Eval(args) => commands::eval::run(args),
        Command::Select(args) => commands::select::run(args),
        Command::Compare(args) => commands::compare::run(args),
        Command::FitDict(args) => commands::fit_dict::run(args),
    };
    if let Err(error) = outcome {
        eprintln!("error: {error}");
        std::process::exit(error.exit_code());
    }
}
