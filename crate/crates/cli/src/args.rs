use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "shapley-minimax", version, about = "Minimax representations of Shapley operators and risk measures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample the order axioms and an equivalence suite.
    Check(CheckArgs),
    /// Polyhedral approximation of a payment-free operator.
    Approx(ApproxArgs),
    /// Value iteration x_{k+1} = F(x_k).
    Iterate(IterateArgs),
    /// Build a payment-free representation or evaluate minimax witnesses.
    Represent(RepresentArgs),
    /// Evaluate a risk measure directly and through its representations.
    Risk(RiskArgs),
    /// Brute-force reference computations.
    Oracle(OracleArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, env = "SHAPLEY_MINIMAX_SEED", default_value_t = shapley_minimax::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Absolute and relative comparison tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Omit the timestamp so repeated runs are byte-identical.
    #[arg(long)]
    pub reproducible: bool,
}

#[derive(Args, Debug, Clone)]
pub struct Source {
    /// GameSpec JSON file.
    #[arg(long, conflicts_with = "operator")]
    pub input: Option<PathBuf>,
    /// Built-in operator: top, min, identity, negate.
    #[arg(long, requires = "dim")]
    pub operator: Option<String>,
    #[arg(long)]
    pub dim: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteName {
    /// (M) and (AH) against (N) and (AH)
    Ct,
    /// (M) and (AH) against (Nt)
    Gk,
    /// (M) and (ASH) against (Nt+)
    GkSub,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub source: Source,
    /// Defaults to gk, or gk-sub for subprobability specs.
    #[arg(long, value_enum)]
    pub suite: Option<SuiteName>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ApproxArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub epsilon: f64,
    /// Drop payoffs instead of rejecting a spec that has them.
    #[arg(long)]
    pub force_recursive: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct IterateArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Comma-separated starting point.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: String,
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct RepresentArgs {
    #[command(flatten)]
    pub source: Source,
    /// YNet JSON file; defaults to a sup-sphere net for specs and seeded
    /// samples of [-10, 10]^n for built-ins.
    #[arg(long)]
    pub ynet: Option<PathBuf>,
    /// Spacing of the default sphere net.
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    /// Point to evaluate at; it is added to the default net.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    #[arg(long)]
    pub force_recursive: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureName {
    WorstCase,
    Expectation,
    /// min(-X1, max_j>1 -Xj)
    Nonconvex,
}

#[derive(Args, Debug)]
pub struct RiskArgs {
    /// Scenario CSV: one row per atom, `label,weight,v1,v2,...`.
    #[arg(long)]
    pub input: PathBuf,
    /// RiskSpace JSON; must agree with the CSV labels and weights.
    #[arg(long)]
    pub space: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = MeasureName::WorstCase)]
    pub measure: MeasureName,
    /// YNet JSON file; defaults to the positions themselves.
    #[arg(long)]
    pub ynet: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[command(subcommand)]
    pub command: OracleCommand,
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Vertices of {p in the simplex : <p, a> <= 0} by enumeration.
    Vertices {
        /// Comma-separated constraint vector.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[command(flatten)]
        common: Common,
    },
    /// Full payoff-table evaluation of a Shapley operator.
    Minimax {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        #[command(flatten)]
        common: Common,
    },
}
