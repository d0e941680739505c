//! Command-line surface. Every parsed invocation is an [`ExperimentConfig`], which is also
//! what `--config` files hold and what each report echoes.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "algostat", version, about = "Exact algorithmic statistics over an explicit description system")]
pub struct Cli {
    /// Run the configuration stored in this JSON file instead of a subcommand.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Args, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputArgs {
    #[arg(long, value_enum, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Command {
    /// Complexity of a string, tuple (`0101,0011`), model or distribution literal.
    Complexity {
        object: String,
        /// Condition on this object.
        #[arg(long)]
        #[serde(default)]
        given: Option<String>,
    },
    /// Optimality or randomness deficiency of data in a model or distribution.
    Deficiency {
        #[arg(long)]
        data: String,
        #[arg(long, conflicts_with = "dist", required_unless_present = "dist")]
        #[serde(default)]
        model: Option<String>,
        #[arg(long)]
        #[serde(default)]
        dist: Option<String>,
        #[arg(long, value_enum, default_value_t = DeficiencyKind::Optimality)]
        #[serde(default)]
        kind: DeficiencyKind,
    },
    /// Algorithmic or probabilistic prediction neighborhood.
    Predict {
        #[arg(long)]
        data: String,
        #[arg(long)]
        family: String,
        /// Threshold in bits.
        #[arg(long)]
        d: u32,
        /// Complexity cap; defaults to 4n (one string) or (l+3)n plus the model header.
        #[arg(long)]
        #[serde(default)]
        cap: Option<u32>,
        /// Defaults to absolute when the family holds every singleton.
        #[arg(long, value_enum)]
        #[serde(default)]
        mode: Option<ModeArg>,
        #[arg(long, value_enum, default_value_t = NeighborhoodKind::Algorithmic)]
        #[serde(default)]
        kind: NeighborhoodKind,
    },
    /// Optimality and stochasticity staircases and their distance.
    Profile {
        /// Data string or tuple; alternatively use --pair.
        #[arg(long, conflicts_with = "pair", required_unless_present = "pair")]
        #[serde(default)]
        data: Option<String>,
        #[arg(long, value_enum)]
        #[serde(default)]
        pair: Option<PairKind>,
        /// Half length for prefix pairs, field exponent for plane pairs.
        #[arg(long, default_value_t = 2)]
        #[serde(default = "two")]
        n: u32,
        #[arg(long, default_value_t = 0)]
        #[serde(default)]
        seed: u64,
        #[arg(long, default_value = "mixtures")]
        #[serde(default = "mixtures")]
        dfam: String,
        #[arg(long, default_value_t = 40)]
        #[serde(default = "forty")]
        amax: u32,
    },
    /// Run an experiment grid and compare it with the frozen baselines.
    Verify(VerifyArgs),
    /// The marking game.
    #[command(subcommand)]
    Game(GameCommand),
    /// Witness constructions.
    #[command(subcommand)]
    Construct(ConstructCommand),
    /// List the model families.
    Families {
        /// Also count members at this length.
        #[arg(long)]
        #[serde(default)]
        n: Option<u32>,
    },
}

fn two() -> u32 {
    2
}

fn forty() -> u32 {
    40
}

fn mixtures() -> String {
    "mixtures".into()
}

fn default_baseline() -> PathBuf {
    PathBuf::from("baselines/slack.json")
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyArgs {
    /// `theorem-1` .. `theorem-6`, `corollary-1`, `lemma-1`, `lemma-4`, or `all`.
    pub experiment: String,
    /// Replace the grid's string lengths.
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub n: Vec<u32>,
    /// Replace the grid's families.
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub family: Vec<String>,
    /// Threshold grid in bits: `0..4` (inclusive) or `0,2,5`.
    #[arg(long)]
    #[serde(default)]
    pub d: Option<String>,
    #[arg(long, default_value = "baselines/slack.json")]
    #[serde(default = "default_baseline")]
    pub baseline: PathBuf,
    /// Accept new or larger slacks and write them to the baseline.
    #[arg(long)]
    #[serde(default)]
    pub refreeze: bool,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GameCommand {
    /// One run of the randomized marking strategy on a random graph.
    Run {
        #[command(flatten)]
        #[serde(default)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0)]
        #[serde(default)]
        seed: u64,
        /// Emit the transcript as JSON lines instead of a summary.
        #[arg(long)]
        #[serde(default)]
        transcript: bool,
    },
    /// Exhaustive minimax for a second-player strategy.
    Search {
        #[command(flatten)]
        #[serde(default)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 1_000_000)]
        #[serde(default = "million")]
        max_states: usize,
    },
    /// Replace a distribution by a marked neighbor in the likelihood game.
    Simplify {
        #[arg(long)]
        data: String,
        #[arg(long)]
        dfam: String,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long, default_value_t = 0)]
        #[serde(default)]
        seed: u64,
    },
}

impl Default for GraphArgs {
    fn default() -> Self {
        Self { n: 6, i: 8, k: 3, left: None, degree: 8, graph_seed: 0 }
    }
}

fn million() -> usize {
    1_000_000
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GraphArgs {
    #[arg(long, default_value_t = 6)]
    pub n: u32,
    #[arg(long, default_value_t = 8)]
    pub i: u32,
    #[arg(long, default_value_t = 3)]
    pub k: u32,
    /// Left nodes; defaults to 2^i.
    #[arg(long)]
    #[serde(default)]
    pub left: Option<usize>,
    #[arg(long, default_value_t = 8)]
    pub degree: usize,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub graph_seed: u64,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "object", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ConstructCommand {
    PlanePair {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        #[serde(default)]
        seed: u64,
    },
    PrefixPair {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        #[serde(default)]
        seed: u64,
    },
    Example3 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        prefix: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeficiencyKind {
    #[default]
    Optimality,
    Randomness,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Absolute,
    Relative,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NeighborhoodKind {
    #[default]
    Algorithmic,
    Probabilistic,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairKind {
    Prefix,
    Plane,
}

impl Command {
    /// Every seed the command uses, for the report header.
    pub fn seeds(&self) -> Vec<u64> {
        match self {
            Command::Profile { pair: Some(_), seed, .. } => vec![*seed],
            Command::Game(GameCommand::Run { graph, seed, .. }) => vec![graph.graph_seed, *seed],
            Command::Game(GameCommand::Search { graph, .. }) => vec![graph.graph_seed],
            Command::Game(GameCommand::Simplify { seed, .. }) => vec![*seed],
            Command::Construct(ConstructCommand::PlanePair { seed, .. } | ConstructCommand::PrefixPair { seed, .. }) => vec![*seed],
            _ => Vec::new(),
        }
    }
}

/// Parses `0..4` (inclusive) or a comma list.
pub fn parse_d_grid(s: &str) -> Result<Vec<u32>, String> {
    let bad = || format!("bad threshold grid `{s}`; expected `lo..hi` or `a,b,c`");
    if let Some((lo, hi)) = s.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
}
