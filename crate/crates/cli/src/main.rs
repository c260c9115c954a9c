use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use pisomlab::{run, AnalysisRequest, Command, Format, Options};

/// Semigroups of partial isometries: closures, extendability certificates,
/// projection atoms and inverse semigroup representations.
#[derive(Debug, Parser)]
#[command(name = "pisomlab", version)]
struct Args {
    /// Analysis to run.
    #[arg(value_enum)]
    command: Command,
    /// Generator file, or a table file for `barnes`.
    input: PathBuf,
    /// Uniform tolerance for equality, projection and rank tests.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_elements: Option<usize>,
    #[arg(long = "max-word-len")]
    max_word_len: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for sampled property checks (recorded in the output).
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let req = AnalysisRequest {
        input_path: args.input,
        command: args.command,
        options: Options {
            tol: args.tol,
            max_elements: args.max_elements,
            max_word_length: args.max_word_len,
            seed: args.seed,
        },
        format: args.format,
    };
    let outcome = run(&req);
    let written = if outcome.exit_code == 0 {
        std::io::stdout()
            .lock()
            .write_all(outcome.output.as_bytes())
    } else {
        std::io::stderr()
            .lock()
            .write_all(outcome.output.as_bytes())
    };
    if written.is_err() {
        return ExitCode::from(2);
    }
    ExitCode::from(outcome.exit_code as u8)
}
