//! `qfalab` command-line tool.
//!
//! Exit codes: 0 success, 1 domain error or failed check, 2 usage or parse
//! error, 3 inconclusive.

mod commands;
mod probability;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use qfalab::automata::DEFAULT_MONOID_CAP;
use qfalab::qfa::USER_TOLERANCE;

use commands::{CliError, Language, SimulateArgs};
use report::{CommandReport, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Structured,
}

#[derive(Debug, Parser)]
#[command(name = "qfalab", version, about = "Recognizability analysis, compilation and simulation of one-way measure-many QFAs")]
struct Cli {
    /// Numerical tolerance for unitarity and probability checks.
    #[arg(long, global = true, default_value_t = USER_TOLERANCE)]
    tol: f64,
    /// Maximum number of transition-monoid elements to enumerate.
    #[arg(long, global = true, env = "QFALAB_MONOID_CAP", default_value_t = DEFAULT_MONOID_CAP)]
    monoid_cap: usize,
    /// Output style.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether the language of a DFA is QFA-recognizable.
    Classify {
        dfa: PathBuf,
        /// Send missing transitions to a fresh rejecting sink.
        #[arg(long)]
        complete_with_sink: bool,
    },
    /// Run a QFA on one word, or check it against a language on all short words.
    Simulate {
        qfa: PathBuf,
        word: Option<String>,
        #[arg(long, value_name = "N", conflicts_with = "word")]
        all_up_to: Option<usize>,
        /// Fixture language name (L1, L2, L3, FIG12).
        #[arg(long)]
        oracle: Option<String>,
        /// Language given by a DFA file.
        #[arg(long, value_name = "FILE")]
        oracle_dfa: Option<PathBuf>,
        /// Claimed recognition probability, decimal or a/b.
        #[arg(long)]
        p: Option<String>,
        /// Print the per-symbol measurement trace.
        #[arg(long)]
        trace: bool,
    },
    /// Compile a DFA into a QFA recognizing the same language.
    Synthesize {
        dfa: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Also write the plan report here.
        #[arg(long, value_name = "FILE")]
        plan: Option<PathBuf>,
    },
    /// Combine two machines into one recognizing the union.
    Union {
        q1: PathBuf,
        p1: String,
        q2: PathBuf,
        p2: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Swap accepting and rejecting states.
    Complement {
        qfa: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Report the unitarity deviation of every matrix in a QFA file.
    Validate { qfa: PathBuf },
    /// Split the non-halting space into isometric and decaying parts.
    Decompose {
        qfa: PathBuf,
        #[arg(long)]
        word: String,
        /// Second word, for the joint decomposition.
        #[arg(long)]
        with: Option<String>,
        /// Rows of the norm-decay table.
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
    /// Tabulate (p1, p2) for all short words and look for a separating line.
    Separability {
        q1: PathBuf,
        q2: PathBuf,
        #[arg(long)]
        oracle: Option<String>,
        #[arg(long, value_name = "FILE")]
        oracle_dfa: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
    /// Built-in automata, machines and witnesses.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
    /// Check a witness file condition by condition.
    VerifyWitness {
        witness: PathBuf,
        /// DFA the witness refers to, if not bundled in the file.
        #[arg(long)]
        dfa: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum FixtureAction {
    List,
    Emit {
        name: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Simulate { .. } => "simulate",
            Command::Synthesize { .. } => "synthesize",
            Command::Union { .. } => "union",
            Command::Complement { .. } => "complement",
            Command::Validate { .. } => "validate",
            Command::Decompose { .. } => "decompose",
            Command::Separability { .. } => "separability",
            Command::Fixtures { .. } => "fixtures",
            Command::VerifyWitness { .. } => "verify-witness",
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let tol = cli.tol;
    match &cli.command {
        Command::Classify { dfa, complete_with_sink } => commands::classify(dfa, *complete_with_sink, cli.monoid_cap),
        Command::Simulate { qfa, word, all_up_to, oracle, oracle_dfa, p, trace } => commands::simulate(SimulateArgs {
            qfa,
            word: word.as_deref(),
            all_up_to: *all_up_to,
            oracle: oracle.as_deref(),
            oracle_dfa: oracle_dfa.as_deref(),
            p: p.as_deref(),
            trace: *trace,
            tol,
        }),
        Command::Synthesize { dfa, out, plan } => {
            commands::synthesize_cmd(dfa, out.as_deref(), plan.as_deref(), cli.monoid_cap, tol)
        }
        Command::Union { q1, p1, q2, p2, out } => commands::union_cmd(q1, p1, q2, p2, out.as_deref(), tol),
        Command::Complement { qfa, out } => commands::complement_cmd(qfa, out.as_deref(), tol),
        Command::Validate { qfa } => commands::validate_cmd(qfa, tol),
        Command::Decompose { qfa, word, with, steps } => commands::decompose_cmd(qfa, word, with.as_deref(), *steps, tol),
        Command::Separability { q1, q2, oracle, oracle_dfa, max_len } => {
            let lang = Language::from_args(oracle.as_deref(), oracle_dfa.as_deref())?;
            commands::separability_cmd(q1, q2, lang, *max_len, tol)
        }
        Command::Fixtures { action: FixtureAction::List } => Ok(commands::fixtures_list()),
        Command::Fixtures { action: FixtureAction::Emit { name, out } } => commands::fixtures_emit(name, out.as_ref()),
        Command::VerifyWitness { witness, dfa } => commands::verify_witness_cmd(witness, dfa.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let start = Instant::now();
    let result = run(&cli);
    let took = start.elapsed();
    let code = match &result {
        Ok(o) => o.status.exit_code(),
        Err(e) => e.exit_code(),
    };
    match (cli.format, result) {
        (Format::Table, Ok(o)) => print!("{}", o.table),
        (Format::Table, Err(e)) => eprintln!("error: {e}"),
        (Format::Structured, result) => {
            let outcome = result.unwrap_or_else(|e| {
                Outcome::new(report::Status::Fail, serde_json::json!({ "error": e.to_string(), "exit_code": code }), String::new())
            });
            let report = CommandReport::new(cli.command.name(), args, &outcome, took);
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
        }
    }
    ExitCode::from(code as u8)
}
