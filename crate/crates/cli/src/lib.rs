//! File formats, subcommands and reports for the `hodge-lattice` tool.

pub mod commands;
pub mod document;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

pub use commands::Outcome;
pub use document::InputDocument;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Validate,
    Log,
    Lattice,
    Weights,
    Norm,
    Decide,
    Quadcheck,
    Compare,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Log => "log",
            Command::Lattice => "lattice",
            Command::Weights => "weights",
            Command::Norm => "norm",
            Command::Decide => "decide",
            Command::Quadcheck => "quadcheck",
            Command::Compare => "compare",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub seed: u64,
    pub tol: f64,
    pub center: i32,
    pub samples: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 0,
            tol: 1e-4,
            center: 0,
            samples: 1000,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hodge-lattice", version, about = "Canonical lattices, weight filtrations and L2 extension checks")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    /// Write the machine-readable report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub center: i32,
    /// Sample count for `compare`.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
}

/// Runs one subcommand on document text. Input errors become exit code 2.
pub fn run_text(command: Command, text: &str, opts: &Options) -> Outcome {
    let result = InputDocument::parse(text).and_then(|doc| commands::execute(command, &doc, opts));
    let mut out = match result {
        Ok(o) => o,
        Err(e) => Outcome {
            code: 2,
            summary: format!("{e}\n"),
            report: json!({ "error": e.to_string() }),
        },
    };
    let status = match out.code {
        0 => "PASS",
        1 => "FAIL",
        _ => "ERROR",
    };
    if let Value::Object(map) = &mut out.report {
        map.insert("schema_version".into(), json!(report::SCHEMA_VERSION));
        map.insert("command".into(), json!(command.name()));
        map.insert("status".into(), json!(status));
    }
    out
}

/// Serialized report, byte-stable for identical inputs and seeds.
pub fn report_text(out: &Outcome) -> String {
    let mut s = serde_json::to_string_pretty(&out.report).expect("reports serialize");
    s.push('\n');
    s
}

pub fn run(args: &Args) -> i32 {
    let opts = Options {
        seed: args.seed,
        tol: args.tol,
        center: args.center,
        samples: args.samples,
    };
    let out = match std::fs::read_to_string(&args.input) {
        Ok(text) => run_text(args.command, &text, &opts),
        Err(e) => {
            eprintln!("cannot read {}: {e}", args.input.display());
            return 2;
        }
    };
    if out.code == 2 {
        eprint!("{}", out.summary);
    } else {
        print!("{}", out.summary);
        println!("{}", if out.code == 0 { "PASS" } else { "FAIL" });
    }
    if let Some(path) = &args.report {
        if let Err(e) = std::fs::write(path, report_text(&out)) {
            eprintln!("cannot write {}: {e}", path.display());
            return 2;
        }
    }
    out.code
}
