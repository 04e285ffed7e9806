mod commands;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

/// Schema version stamped on every JSON report.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "cpgame", version, about = "Exact solvers for the controller-placement game")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Payoffs of a defense against an attack (pure or mixed).
    Payoff {
        #[arg(long)]
        graph: PathBuf,
        /// Vertex list, strategy object, or mixed strategy (inline JSON or file).
        #[arg(long)]
        defense: String,
        #[arg(long)]
        attack: String,
    },
    /// Exact best response to a fixed pure or mixed opponent.
    BestResponse {
        #[arg(long)]
        graph: PathBuf,
        /// Opponent defense; the reply is an attack of size at most `-l`.
        #[arg(long, conflicts_with = "attack", required_unless_present = "attack", requires = "l")]
        defense: Option<String>,
        /// Opponent attack; the reply is a defense of size at most `-k`.
        #[arg(long, requires = "k")]
        attack: Option<String>,
        #[arg(short = 'k')]
        k: Option<usize>,
        #[arg(short = 'l')]
        l: Option<usize>,
    },
    /// Mixed value of the game with exact rational strategies.
    Value {
        #[arg(long)]
        graph: PathBuf,
        #[arg(short = 'k')]
        k: usize,
        #[arg(short = 'l')]
        l: usize,
        #[arg(long, value_enum, default_value_t = Method::DoubleOracle)]
        method: Method,
        /// Double-oracle iteration limit.
        #[arg(long, default_value_t = 10_000)]
        max_iters: usize,
        /// Double-oracle wall-clock limit in seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        /// Record every restricted game of the double oracle.
        #[arg(long)]
        trace: bool,
        /// Largest payoff matrix full enumeration will build.
        #[arg(long, default_value_t = cpgame::equilibrium::DEFAULT_ENTRY_CAP)]
        entry_cap: u64,
    },
    /// Checks a claimed pair of mixed strategies against exact best responses.
    VerifyEquilibrium {
        #[arg(long)]
        graph: PathBuf,
        #[arg(short = 'k')]
        k: usize,
        #[arg(short = 'l')]
        l: usize,
        #[arg(long)]
        defense: String,
        #[arg(long)]
        attack: String,
    },
    /// Leader/follower problems with a committed first mover.
    Sequential {
        #[arg(long)]
        graph: PathBuf,
        #[arg(short = 'k')]
        k: usize,
        #[arg(short = 'l')]
        l: usize,
        #[arg(long, value_enum, default_value_t = First::Defender)]
        first: First,
        /// Stop at the first leader move guaranteeing this payoff.
        #[arg(long)]
        threshold: Option<usize>,
        /// Largest number of leader moves to examine.
        #[arg(long, default_value_t = cpgame::sequential::DEFAULT_LEADER_CAP)]
        leader_cap: u64,
    },
    /// Builds a game instance from a classical decision problem.
    #[command(disable_help_flag = true)]
    Reduce(ReduceArgs),
    /// Attacker best response on an interval graph.
    SolveInterval {
        /// Interval representation JSON.
        #[arg(long)]
        intervals: PathBuf,
        #[arg(long)]
        defense: String,
        #[arg(short = 'l')]
        l: usize,
    },
    /// Attacker best response over a tree decomposition.
    SolveTreewidth {
        #[arg(long)]
        graph: PathBuf,
        /// PACE `.td` file, or `auto` for a min-fill heuristic decomposition.
        #[arg(long, default_value = "auto")]
        td: String,
        #[arg(long)]
        defense: String,
        #[arg(short = 'l')]
        l: usize,
    },
    /// Generates a seeded instance.
    Gen {
        /// random-gnp, path, cycle, clique, star, random-interval or random-bounded-tw.
        kind: String,
        #[arg(short = 'n', long = "n", default_value_t = 8)]
        n: usize,
        #[arg(short = 'p', long = "p", default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 2)]
        width: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write PREFIX.json, PREFIX.intervals.json and PREFIX.td.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs a benchmark suite comparing solvers.
    Bench {
        /// do-vs-full, interval-vs-brute, tw-vs-brute or reductions-fidelity.
        suite: String,
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include wall-clock microseconds per row.
        #[arg(long)]
        timings: bool,
        /// Worker threads (0 uses every core).
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[arg(long)]
        csv: bool,
        /// Where to write the failing instance on a mismatch.
        #[arg(long, default_value = "bench-reproducer.json")]
        reproducer: PathBuf,
        #[arg(long, default_value_t = cpgame::equilibrium::DEFAULT_ENTRY_CAP)]
        entry_cap: u64,
        #[arg(long, default_value_t = cpgame::sequential::DEFAULT_LEADER_CAP)]
        leader_cap: u64,
        #[arg(long, default_value_t = 10_000)]
        max_iters: usize,
    },
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[arg(long, value_enum)]
    pub from: Option<Source>,
    /// Source graph for clique, cnd and bvs.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Source instance JSON (inline or file); set cover reads
    /// `{"universe":[..],"sets":[[..],..]}` from here.
    #[arg(long)]
    pub input: Option<String>,
    /// Clique size.
    #[arg(short = 't')]
    pub t: Option<usize>,
    /// Node deletions allowed.
    #[arg(short = 's')]
    pub s: Option<usize>,
    /// Separator size or cover size.
    #[arg(short = 'h')]
    pub h: Option<usize>,
    /// Universal vertices joined before a clique-node-deletion construction:
    /// `none`, `auto`, or a count.
    #[arg(long, default_value = "none")]
    pub pad: String,
    /// Also solve the game instance and the source problem by search.
    #[arg(long)]
    pub decide: bool,
    #[arg(long, default_value_t = cpgame::reductions::DEFAULT_DECIDER_CAP)]
    pub decide_cap: u64,
    #[arg(long, action = ArgAction::Help, help = "Print help")]
    pub help: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Full,
    DoubleOracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum First {
    Defender,
    Attacker,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Source {
    Clique,
    Cnd,
    Bvs,
    Setcover,
}

/// What a command produced: the JSON report, its text rendering, and the
/// exit status. `raw` replaces both renderings when set (CSV reports).
pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub status: u8,
    pub raw: Option<String>,
}

impl Outcome {
    pub fn ok(json: Value, text: String) -> Self {
        Outcome { json, text, status: 0, raw: None }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(&cli.command) {
        Ok(outcome) => {
            let rendered = match (outcome.raw, cli.format) {
                (Some(raw), _) => raw.trim_end().to_string(),
                (None, Format::Json) => {
                    let mut json = outcome.json;
                    if let Value::Object(map) = &mut json {
                        map.insert("version".into(), SCHEMA_VERSION.into());
                    }
                    serde_json::to_string_pretty(&json).expect("reports serialize")
                }
                (None, Format::Text) => outcome.text.trim_end().to_string(),
            };
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{rendered}");
            ExitCode::from(outcome.status)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
