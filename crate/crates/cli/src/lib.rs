//! Batch front end: loads generator or table files, runs one analysis command
//! and renders the result as JSON or text.

pub mod input;
pub mod pipeline;
mod render;

use std::path::PathBuf;

use clap::ValueEnum;
use thiserror::Error;

pub use pipeline::{analyze, Context, Options, Report, Verdict};
pub use render::render_text;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invariant(_) => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Validate generators, their projections and pairwise products.
    Check,
    /// Monitored closure of the generated semigroup.
    Closure,
    /// Projection enrichment plus the selfadjoint closure.
    Extend,
    /// Atoms of the algebra generated by the final projections.
    Atoms,
    /// Multiplicity profile of those atoms.
    Multiplicity,
    /// Unitary / truncated-shift decomposition of each generator.
    Decompose,
    /// Brandt structure of the closed semigroup.
    Brandt,
    /// Left regular representation of an inverse semigroup table.
    Barnes,
    /// Full pipeline with a verdict.
    Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisRequest {
    pub input_path: PathBuf,
    pub command: Command,
    pub options: Options,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    /// Complete output; written to stdout on success and stderr on failure.
    pub output: String,
}

fn execute(req: &AnalysisRequest) -> Result<serde_json::Value, CliError> {
    if req.command == Command::Barnes {
        let table = input::load_table(&req.input_path)?;
        return pipeline::barnes(&table, &req.options);
    }
    let file = input::load_generator_file(&req.input_path)?;
    let ctx = Context::new(&file, &req.options)?;
    match req.command {
        Command::Check => pipeline::check(&ctx),
        Command::Closure => pipeline::closure(&ctx),
        Command::Extend => pipeline::extend(&ctx),
        Command::Atoms => pipeline::atoms(&ctx, true),
        Command::Multiplicity => pipeline::atoms(&ctx, false),
        Command::Decompose => pipeline::decompose(&ctx),
        Command::Brandt => pipeline::brandt(&ctx),
        Command::Report => {
            serde_json::to_value(analyze(&ctx)?).map_err(|e| CliError::Invariant(e.to_string()))
        }
        Command::Barnes => unreachable!("handled above"),
    }
}

/// Runs one request. Exit code 0 means the analysis completed, whatever the
/// verdict; 2 is an input error and 3 an internal invariant violation.
pub fn run(req: &AnalysisRequest) -> Outcome {
    match execute(req) {
        Ok(value) => {
            let output = match req.format {
                Format::Json => {
                    serde_json::to_string_pretty(&value).expect("JSON values serialize") + "\n"
                }
                Format::Text => render_text(&value),
            };
            Outcome {
                exit_code: 0,
                output,
            }
        }
        Err(e) => Outcome {
            exit_code: e.exit_code(),
            output: format!("error: {e}\n"),
        },
    }
}
