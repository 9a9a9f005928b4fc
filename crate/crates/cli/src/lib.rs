//! The `rsl` command-line driver. Every run prints one JSON report.
//!
//! Exit codes: 0 when no check fails and at least one passes, 1 when any
//! check fails, 2 on usage or input errors, 3 when every check is
//! indeterminate.

use std::path::PathBuf;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

mod commands;
pub mod input;
pub mod report;

use input::InputError;
use report::{exit_code, render, summarize};

#[derive(Debug, Parser)]
#[command(name = "rsl", version, about = "Finite verification campaigns for topological Ramsey spaces")]
pub struct Cli {
    /// Indent the JSON report.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Add wall-clock timing to the report; output is then no longer reproducible.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    Ellentuck,
    R1,
    H2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BarrierCheck {
    Nw,
    Sperner,
    Coverage,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check A.1 to A.3 exhaustively and A.4 on sampled colorings.
    Axioms {
        #[arg(long, value_enum)]
        space: SpaceArg,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 10)]
        a4_samples: usize,
        /// Ground set size for the Ellentuck sample; defaults to depth + 2.
        #[arg(long)]
        ground: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Flatten a barrier over a finite ground set and check its properties.
    #[command(group(ArgGroup::new("kind").required(true).args(["uniform", "schreier"])))]
    Barrier {
        #[arg(long)]
        uniform: Option<u32>,
        #[arg(long)]
        schreier: bool,
        #[arg(long)]
        ground: u32,
        #[arg(long, value_enum, value_delimiter = ',')]
        check: Vec<BarrierCheck>,
    },
    /// Find a homogeneous set for a coloring of a uniform barrier.
    Homogenize {
        #[arg(long)]
        ground: u32,
        #[arg(long)]
        colors: u32,
        #[arg(long)]
        target: usize,
        #[arg(long)]
        coloring: PathBuf,
        /// Rank of the uniform barrier being colored.
        #[arg(long, default_value_t = 2)]
        uniform: u32,
    },
    /// Canonize an equivalence relation.
    #[command(group(ArgGroup::new("mode").required(true).args(["er", "pr", "graph"])))]
    Canonize {
        /// Arity of the uniform domain `[ground]^k`.
        #[arg(long)]
        er: Option<usize>,
        #[arg(long)]
        pr: bool,
        #[arg(long)]
        graph: bool,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, required_unless_present = "graph")]
        target: Option<usize>,
    },
    /// List the canonical subtree masks (or mask pairs) at position n.
    Subtrees {
        #[arg(long, value_enum)]
        space: SpaceArg,
        #[arg(long)]
        n: usize,
    },
    /// Apply a projection to one block.
    Project {
        #[arg(long, value_enum)]
        space: SpaceArg,
        #[arg(long)]
        block: PathBuf,
        #[arg(long)]
        mask: PathBuf,
    },
    /// Ordered graph utilities.
    #[command(group(ArgGroup::new("op").required(true).args(["enumerate", "copies", "arrow"])))]
    Graphs {
        #[arg(long, num_args = 2, value_names = ["N", "Q"])]
        enumerate: Option<Vec<u32>>,
        #[arg(long, num_args = 2, value_names = ["A", "C"])]
        copies: Option<Vec<PathBuf>>,
        #[arg(long, num_args = 3, value_names = ["FILE", "S", "N"])]
        arrow: Option<Vec<String>>,
    },
    /// Decide membership of a symbolic set in the ideal Fin^k.
    Ideal {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        paper_positive: bool,
    },
    /// Decide membership in a Fubini product of ultrafilters.
    Fubini {
        #[arg(long)]
        set: PathBuf,
        /// `cofinite` or `principal:N`.
        #[arg(long)]
        u: String,
        /// `DEFAULT[;N=ORACLE]...`
        #[arg(long)]
        v: String,
    },
}

/// Shared settings resolved before dispatch.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub budget: usize,
}

/// Runs one command line (without the program name) and returns the exit
/// code with the text for standard output. `budget_env` is the value of
/// `RSL_BUDGET`, if set.
pub fn run(args: &[String], budget_env: Option<&str>) -> (i32, String) {
    let argv = std::iter::once("rsl".to_string()).chain(args.iter().cloned());
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (0, e.to_string()),
                _ => (2, render(&json!({"command": args, "error": e.to_string().trim_end()}), false)),
            };
        }
    };
    let budget = match budget_env.map(|s| s.trim().parse::<usize>()) {
        None => rsl_core::DEFAULT_BUDGET,
        Some(Ok(b)) if b > 0 => b,
        Some(_) => {
            let msg = format!("RSL_BUDGET must be a positive integer, got {:?}", budget_env.unwrap_or_default());
            return (2, render(&json!({"command": args, "error": msg}), cli.pretty));
        }
    };
    let settings = Settings { budget };
    let start = Instant::now();
    match commands::dispatch(&cli.command, settings) {
        Ok(outcome) => {
            let status = summarize(&outcome.verdicts);
            let mut report = Map::new();
            report.insert("command".into(), json!(args));
            report.insert("parameters".into(), Value::Object(outcome.parameters));
            report.insert("data".into(), Value::Object(outcome.data));
            report.insert("verdicts".into(), serde_json::to_value(&outcome.verdicts).expect("verdicts serialize"));
            report.insert("summary".into(), serde_json::to_value(status).expect("status serializes"));
            if cli.timing {
                report.insert("timing".into(), json!({"elapsed_ms": start.elapsed().as_secs_f64() * 1e3}));
            }
            (exit_code(status), render(&Value::Object(report), cli.pretty))
        }
        Err(InputError(msg)) => (2, render(&json!({"command": args, "error": msg}), cli.pretty)),
    }
}
