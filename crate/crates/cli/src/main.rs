//! `semidisc` — scenario runner for semigroup models of the unit disc:
//! boundary classification, conjugation checks, disc-side plots.

mod artifacts;
mod expr;
mod scenario;
mod tasks;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use semidisc::{ExampleId, DEFAULT_RESOLUTION};
use tasks::{CliError, Format, Settings};

/// Environment variable naming the default output directory.
const OUT_ENV: &str = "SEMIDISC_OUT";

#[derive(Parser)]
#[command(name = "semidisc", version, about = "Koenigs-model toolkit for semigroups of the unit disc")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output directory (default: $SEMIDISC_OUT or ./out)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Boundary sampling resolution for the conformal map
    #[arg(long, global = true, default_value_t = DEFAULT_RESOLUTION)]
    resolution: usize,

    /// Numeric tolerance echoed into reports and used by verification
    #[arg(long, global = true, default_value_t = 1e-6)]
    tolerance: f64,

    /// Artifact formats to emit (default: all; a scenario's output.formats
    /// applies when this flag is omitted)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task of a scenario file and emit artifacts + report.json
    Run { file: PathBuf },
    /// Run one built-in reproduction and assert its distinguishing fact
    Reproduce { example: ExampleIdArg },
    /// Parse a scenario file and check model invariants without running it
    Validate { file: PathBuf },
}

#[derive(Clone)]
struct ExampleIdArg(ExampleId);

impl std::str::FromStr for ExampleIdArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(ExampleIdArg)
    }
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = Cli::parse();
    let out = cli
        .out
        .clone()
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    let settings = Settings {
        out,
        resolution: cli.resolution,
        tolerance: cli.tolerance,
        format: cli.format.unwrap_or(Format::All),
        explicit_format: cli.format,
    };
    let result: Result<(), CliError> = match &cli.command {
        Command::Run { file } => tasks::run_scenario(file, &settings),
        Command::Reproduce { example } => tasks::run_reproduce(example.0, &settings),
        Command::Validate { file } => tasks::run_validate(file),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
