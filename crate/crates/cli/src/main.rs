//! `invsg`: run one computation or check on a finite inverse semigroup, or on
//! the Cuntz inverse monoid, and print a report.
//!
//! Exit status: 0 when every check passes, 2 on input errors, 3 when a bound
//! is exceeded, 4 when a check fails.

mod commands;
mod document;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use commands::{run_command, Command, Options};
use document::{builtin_document, parse_document, Document};
use invsg::table::DEFAULT_CLOSURE_BOUND;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("bound exceeded: {0}")]
    Bound(String),
}

impl From<invsg::Error> for CliError {
    fn from(e: invsg::Error) -> Self {
        match e {
            invsg::Error::Bound { .. } => CliError::Bound(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Bound(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "invsg", version, about = "Booleanization and Exel completion of finite inverse semigroups")]
struct Cli {
    command: Command,
    /// Builtin fixture name, as an alternative to --builtin.
    name: Option<String>,
    /// Semigroup document (TOML).
    #[arg(long, conflicts_with_all = ["builtin", "name"])]
    input: Option<PathBuf>,
    /// CHAIN3, SL22, B2, I2 or Z2_0.
    #[arg(long, conflicts_with = "name")]
    builtin: Option<String>,
    /// Seed for randomized checks.
    #[arg(long)]
    seed: Option<u64>,
    /// Largest semigroup generated from partial bijections.
    #[arg(long, default_value_t = DEFAULT_CLOSURE_BOUND)]
    bound: usize,
    /// Compact JSON (the default).
    #[arg(long, conflicts_with = "pretty")]
    json: bool,
    /// Indented plain text.
    #[arg(long)]
    pretty: bool,
    /// Rank of the Cuntz inverse monoid.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Length of the words the boundary action is evaluated on.
    #[arg(long)]
    depth: Option<usize>,
    /// Comma-separated maximal prefix code, e.g. "a1,a2a1,a2a2".
    #[arg(long)]
    code: Option<String>,
    /// Element of Cₙ, e.g. "a1>a1 + a2>a2".
    #[arg(long)]
    expr: Option<String>,
    /// Second element for products, joins and comparisons.
    #[arg(long)]
    other: Option<String>,
    /// Word for the boundary action, e.g. "a1a2".
    #[arg(long)]
    word: Option<String>,
    /// Random samples for cuntz-verify.
    #[arg(long, default_value_t = 500)]
    samples: usize,
    /// Boolean target for the factorisation checks; repeatable.
    #[arg(long = "target")]
    targets: Vec<String>,
}

fn load(cli: &Cli) -> Result<Option<Document>, CliError> {
    if let Some(path) = &cli.input {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        let doc = parse_document(&text, cli.bound)?;
        return Ok(Some(doc));
    }
    match cli.builtin.as_ref().or(cli.name.as_ref()) {
        Some(name) => builtin_document(name).map(Some),
        None => Ok(None),
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let doc = if cli.command.needs_semigroup() { load(cli)? } else { None };
    if let Some(d) = &doc {
        if let document::Payload::Semigroup(t) = &d.payload {
            if t.order() > cli.bound {
                return Err(CliError::Bound(format!("semigroup of order {} exceeds --bound {}", t.order(), cli.bound)));
            }
        }
    }
    let opts = Options {
        seed: cli.seed,
        n: cli.n,
        depth: cli.depth,
        code: cli.code.clone(),
        expr: cli.expr.clone(),
        other: cli.other.clone(),
        word: cli.word.clone(),
        samples: cli.samples,
        targets: cli.targets.clone(),
    };
    let report = run_command(cli.command, doc.as_ref(), &opts)?;
    let value = serde_json::to_value(&report).expect("reports serialize");
    if cli.pretty {
        print!("{}", render::render(&value));
    } else {
        println!("{value}");
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(4),
        Err(e) => {
            eprintln!("invsg: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
