//! Command-line front end: reads games from files, runs the engine and
//! writes labelled CSV or JSON with a run manifest.

pub mod commands;
pub mod error;
pub mod ingest;
pub mod labels;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use groupvalue_core::applied::NetworkFamily;

use crate::error::{CliError, CliResult};
use crate::ingest::Source;
use crate::output::{Format, OutputDigest, RunManifest};

pub const SEED_ENV: &str = "GROUPVALUE_SEED";

#[derive(Debug, Parser)]
#[command(name = "groupvalue", version, about = "Shapley group values of cooperative games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shapley value of every player, best first.
    Value(ValueArgs),
    /// Value of one group.
    GroupValue(GroupValueArgs),
    /// Best groups of a given size.
    Rank(RankArgs),
    /// Average complementarity of two players.
    Complementarity(ComplementarityArgs),
    /// Surplus of a group over its members' values and the sign tests.
    Profitability(ProfitabilityArgs),
    /// Property suites for a group value functional.
    Axioms(AxiomsArgs),
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false)]
pub struct InputArgs {
    /// Explicit game (JSON worth or dividend file).
    #[arg(long, value_name = "FILE", group = "source")]
    pub game: Option<PathBuf>,
    /// Edge list `u v [weight]`.
    #[arg(long, value_name = "FILE", group = "source")]
    pub network: Option<PathBuf>,
    /// Influence weights `listener source weight` for the linear-threshold game.
    #[arg(long, value_name = "FILE", group = "source")]
    pub influence: Option<PathBuf>,
    /// Survey CSV: 0/1 failure columns, dissatisfaction flag last.
    #[arg(long, value_name = "FILE", group = "source")]
    pub survey: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NetworkArgs {
    /// Game built on the network.
    #[arg(long, default_value = "conn", value_parser = parse_family)]
    pub family: NetworkFamily,
    /// Node weights `node weight`, required by wconn2.
    #[arg(long, value_name = "FILE")]
    pub node_weights: Option<PathBuf>,
    /// Threshold samples per coalition for the influence game.
    #[arg(long, default_value_t = 10_000)]
    pub runs: u64,
}

fn parse_family(s: &str) -> Result<NetworkFamily, String> {
    s.parse().map_err(|e: groupvalue_core::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct SamplingArgs {
    /// Estimate by sampling random orders instead of exact enumeration.
    #[arg(long)]
    pub mc: bool,
    /// Sampled orders per estimate.
    #[arg(long, default_value_t = 100_000)]
    pub iters: u64,
    /// Random seed for sampling and threshold draws.
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write output here and the manifest to FILE.manifest.json.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Common {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub network: NetworkArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl Common {
    pub fn source(&self) -> Source {
        let i = &self.input;
        if let Some(p) = &i.game {
            Source::Game(p.clone())
        } else if let Some(p) = &i.network {
            Source::Network {
                edges: p.clone(),
                family: self.network.family,
                weights: self.network.node_weights.clone(),
            }
        } else if let Some(p) = &i.influence {
            Source::Influence {
                path: p.clone(),
                runs: self.network.runs,
                seed: self.sampling.seed,
            }
        } else {
            Source::Survey(i.survey.clone().expect("clap enforces one source"))
        }
    }
}

#[derive(Debug, Args)]
pub struct ValueArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct GroupValueArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated player labels.
    #[arg(long)]
    pub group: String,
    /// Add the member-by-member decomposition in greedy order.
    #[arg(long)]
    pub explain: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodArg {
    Exact,
    Mc,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[command(flatten)]
    pub common: Common,
    /// Group size.
    #[arg(long)]
    pub size: usize,
    /// Number of groups to report.
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    #[arg(long, value_enum, default_value = "exact")]
    pub method: MethodArg,
    /// Largest number of groups to evaluate.
    #[arg(long, default_value_t = groupvalue_core::search::SearchConfig::DEFAULT_BUDGET)]
    pub budget: u128,
}

#[derive(Debug, Args)]
pub struct ComplementarityArgs {
    #[command(flatten)]
    pub common: Common,
    /// Two player labels `i,j`.
    #[arg(long)]
    pub pair: String,
    /// Group containing `i` to merge first; `j` is then compared with its proxy.
    #[arg(long)]
    pub context: Option<String>,
}

#[derive(Debug, Args)]
pub struct ProfitabilityArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub group: String,
    /// Also run the sign test for admitting this player into the group.
    #[arg(long)]
    pub entrant: Option<String>,
}

#[derive(Debug, Args)]
pub struct AxiomsArgs {
    /// shapley, additive, alpha, shift or product.
    #[arg(long)]
    pub functional: String,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Constant of the shift functional.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub shift: f64,
    /// Suite JSON: {"n_range": [3, 8], "games_per_n": 100, "seed": 0, "tolerance": 1e-9}.
    #[arg(long, value_name = "FILE")]
    pub suite: Option<PathBuf>,
    /// Check one property (P1..P13) instead of all.
    #[arg(long)]
    pub property: Option<String>,
    /// Suite seed when no suite file is given.
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Bytes of the result and the parts of the manifest a command knows.
pub struct Produced {
    pub bytes: Vec<u8>,
    pub inputs: Vec<ingest::InputDigest>,
    pub seed: Option<u64>,
    pub iterations: Option<u64>,
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<String> = args
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli, argv) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.render());
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, argv: Vec<String>) -> CliResult<()> {
    let start = Instant::now();
    let output = match &cli.command {
        Command::Value(a) => &a.common.output,
        Command::GroupValue(a) => &a.common.output,
        Command::Rank(a) => &a.common.output,
        Command::Complementarity(a) => &a.common.output,
        Command::Profitability(a) => &a.common.output,
        Command::Axioms(a) => &a.output,
    };
    let (format, out) = (output.format, output.out.clone());
    let produced = match &cli.command {
        Command::Value(a) => commands::value(a)?,
        Command::GroupValue(a) => commands::group_value(a)?,
        Command::Rank(a) => commands::rank(a)?,
        Command::Complementarity(a) => commands::complementarity(a)?,
        Command::Profitability(a) => commands::profitability(a)?,
        Command::Axioms(a) => commands::axioms(a)?,
    };
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: argv,
        inputs: produced.inputs,
        seed: produced.seed,
        iterations: produced.iterations,
        format,
        output: OutputDigest {
            path: None,
            sha256: String::new(),
        },
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    if out.as_deref().is_some_and(|p| p.as_os_str().is_empty()) {
        return Err(CliError::Usage("--out needs a file name".into()));
    }
    output::emit(&produced.bytes, out.as_deref(), manifest)
}
