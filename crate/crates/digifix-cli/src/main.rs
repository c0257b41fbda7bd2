//! Command line front end for the digifix library.

mod commands;
mod doc;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::Options;

#[derive(Parser)]
#[command(
    name = "digifix",
    about = "Check contraction conditions, hunt fixed points, and stress-test \
             convergence claims on finite digital metric spaces",
    version
)]
struct Cli {
    /// Largest image size the exhaustive fixed point property scan will accept.
    #[arg(long, global = true, default_value_t = 8, env = "DIGIFIX_BUDGET")]
    budget: usize,

    /// Iteration cap for orbits (default: four times the point count).
    #[arg(long, global = true)]
    max_iter: Option<usize>,

    /// Absolute tolerance for inequality margins.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,

    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Sample count for doubling-family windows.
    #[arg(long, global = true, default_value_t = 10)]
    window: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a contraction condition for a map described in a JSON document.
    Check {
        /// Path to the JSON document.
        file: PathBuf,
    },
    /// List fixed points and follow the orbit of the first point.
    FixedPoints {
        /// Path to the JSON document.
        file: PathBuf,
    },
    /// Decide whether an image has the fixed point property.
    Fpp {
        /// Path to the JSON document (only the image part is used).
        file: PathBuf,
    },
    /// Audit built-in counterexamples, or search for one against a document's condition.
    Falsify {
        /// Optional JSON document naming the condition to attack.
        file: Option<PathBuf>,
    },
    /// Run the full battery of built-in demonstrations.
    Demo,
}

fn main() {
    let cli = Cli::parse();
    let opts = Options {
        budget: cli.budget,
        max_iter: cli.max_iter,
        tolerance: cli.tolerance,
        seed: cli.seed,
        window: cli.window,
    };
    let outcome = match &cli.command {
        Command::Check { file } => commands::check(file, &opts),
        Command::FixedPoints { file } => commands::cmd_fixed_points(file, &opts),
        Command::Fpp { file } => commands::cmd_fpp(file, &opts),
        Command::Falsify { file } => commands::cmd_falsify(file.as_deref(), &opts),
        Command::Demo => commands::cmd_demo(&opts),
    };
    let code = match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    };
    std::process::exit(code);
}
