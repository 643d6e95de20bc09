//! Command-line front end for the precedent engine.
//!
//! Every command loads one case-base file, runs one engine operation and
//! renders a [`Report`]. Exit status is 0 on success, 1 on a domain error or
//! a property counterexample, and 2 when the input cannot be parsed or fails
//! validation.

mod commands;
mod render;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;
use stare_core::{validate_model, CaseBase, EngineError, IssueKind, RawCaseBase, ValidationReport};
use thiserror::Error;

pub use commands::execute;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    SyntaxError { line: usize, column: usize, message: String },
    #[error("unknown reference `{0}`")]
    UnknownReference(String),
    #[error("case base failed validation:\n{0}")]
    ValidationFailed(ValidationReport),
    #[error("cannot read `{path}`: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Engine(_) => 1,
            _ => 2,
        }
    }
}

/// Parses and validates a case-base file. Warnings are kept on the case
/// base; any error rejects it.
pub fn parse_case_base(text: &str) -> Result<CaseBase, CliError> {
    let raw = parse_raw(text)?;
    let report = validate_model(&raw, false);
    if report.has_errors() {
        return Err(rejection(report));
    }
    CaseBase::from_raw(&raw).map_err(|e| rejection(e.0))
}

pub fn parse_raw(text: &str) -> Result<RawCaseBase, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::SyntaxError {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn rejection(report: ValidationReport) -> CliError {
    let unknown = report.errors().find_map(|i| match &i.kind {
        IssueKind::UnknownReference { id, .. } | IssueKind::UnknownRelevanceEndpoint { id, .. } => Some(id.clone()),
        _ => None,
    });
    match unknown {
        Some(id) => CliError::UnknownReference(id),
        None => CliError::ValidationFailed(report),
    }
}

pub fn load(path: &Path) -> Result<CaseBase, CliError> {
    parse_case_base(&read(path)?)
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

#[derive(Debug, Parser)]
#[command(name = "stare", version, about = "Precedent reasoning over temporal court hierarchies")]
pub struct Cli {
    /// Output format; `dot` is available for `explain` only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Relevance relation to use instead of the one declared in the file.
    #[arg(long, global = true, value_enum)]
    pub relevance: Option<RelevanceOverride>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RelevanceOverride {
    Afortiori,
    Explicit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum PrincipleArg {
    #[value(name = "th")]
    #[serde(rename = "th")]
    Th,
    #[value(name = "naive")]
    #[serde(rename = "naive")]
    Naive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RanksArg {
    Injective,
    Ties,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a case base for structural problems.
    Validate {
        file: PathBuf,
        /// Also require the state space to be complete.
        #[arg(long)]
        complete: bool,
    },
    /// Relevant cases for one case, or for every case.
    Relevance {
        file: PathBuf,
        #[arg(long = "case")]
        case: Option<String>,
    },
    /// Supporting and binding precedents of a case.
    Precedents(CaseArgs),
    /// Per-incuriam marks of assessed cases.
    Incuriam {
        file: PathBuf,
        #[arg(long = "case")]
        case: Option<String>,
    },
    /// The precedent graph rooted at a case.
    Explain(CaseArgs),
    /// Decide an undecided case.
    Decide {
        #[command(flatten)]
        target: CaseArgs,
        #[arg(long, value_enum, default_value_t = PrincipleArg::Th)]
        principle: PrincipleArg,
    },
    /// Check the propositions on every small model.
    CheckProps(CheckArgs),
}

#[derive(Debug, Args)]
pub struct CaseArgs {
    pub file: PathBuf,
    #[arg(long = "case")]
    pub case: String,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Property to check; all properties when omitted.
    #[arg(long)]
    pub property: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub plt: usize,
    #[arg(long, default_value_t = 1)]
    pub dfd: usize,
    #[arg(long, default_value_t = 3)]
    pub courts: usize,
    #[arg(long, default_value_t = 3)]
    pub assessed: usize,
    #[arg(long, value_enum, default_value_t = RanksArg::Ties)]
    pub ranks: RanksArg,
    /// Check without the properties' model-level hypotheses.
    #[arg(long)]
    pub no_hypotheses: bool,
    /// Also enumerate license-free states at courts that are not self-bound.
    #[arg(long)]
    pub free_license: bool,
    /// Largest projected model count accepted.
    #[arg(long)]
    pub cap: Option<u128>,
    /// Directory for counterexample case-base files.
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

/// What a command produced.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: Value,
    pub payload: Value,
    pub diagnostics: Vec<String>,
}

/// Rendered output and exit status of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub status: u8,
}

/// Runs `cli` and renders its report or error.
pub fn run(cli: &Cli) -> Outcome {
    match execute(cli) {
        Ok((report, status)) => match render::render(&report, cli) {
            Ok(stdout) => Outcome { stdout, stderr: String::new(), status },
            Err(e) => failure(e),
        },
        Err(e) => failure(e),
    }
}

fn failure(e: CliError) -> Outcome {
    Outcome {
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
        status: e.exit_code(),
    }
}
