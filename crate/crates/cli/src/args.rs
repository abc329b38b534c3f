use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wkl_core::BlockSpec;

#[derive(Parser, Debug)]
#[command(name = "wkl", version, about = "Whittaker models of holomorphic discrete series for SU(p,q)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Factor a group element as P⁺·K_ℂ·N_ℂ (or P⁺·K_ℂ·P⁻ with --hc).
    Decompose(DecomposeArgs),
    /// Restricted roots, multiplicities and ρ-constants of a group.
    Roots(CommonArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Discrete-series parameters and L²-norms over a sweep of characters.
    Plancherel(PlancherelArgs),
    /// Evaluate the lowest-K-type section T_{π,η}ξ at a group element.
    Whittaker(WhittakerArgs),
    /// L²(G/N, ω)-norm of T_{π,η}ξ for the highest weight vector ξ.
    L2norm(L2Args),
    /// Sample the reduced L²-integrand on a grid of t (CSV).
    SampleIntegrand(SampleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Group {
    Sl2,
    Su11,
    Su21,
    Su22,
}

impl Group {
    pub fn spec(self) -> BlockSpec {
        let (p, q) = match self {
            Group::Sl2 | Group::Su11 => (1, 1),
            Group::Su21 => (2, 1),
            Group::Su22 => (2, 2),
        };
        BlockSpec::new(p, q).expect("positive block sizes")
    }

    pub fn name(self) -> &'static str {
        match self {
            Group::Sl2 => "sl2",
            Group::Su11 => "su11",
            Group::Su21 => "su21",
            Group::Su22 => "su22",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Emit JSON only (no human-readable text on stderr).
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV (sample-integrand only).
    #[arg(long)]
    pub csv: bool,
    /// Write the primary output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    #[arg(long, value_enum, default_value = "su21")]
    pub group: Group,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct DecomposeArgs {
    #[arg(long, value_enum)]
    pub group: Group,
    /// Matrix, e.g. `[[1,0],[i,1]]` or JSON with `{re, im}` entries.
    #[arg(long, allow_hyphen_values = true)]
    pub element: String,
    /// Use the Harish-Chandra factorization P⁺·K_ℂ·P⁻ instead.
    #[arg(long)]
    pub hc: bool,
    /// Also test membership in P⁺K_ℂN_{j,ℂ} for this parabolic index.
    #[arg(long)]
    pub parabolic: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Cocycle,
    Kernel,
    Fock,
    Pkn,
    Whittaker,
    Roots,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Cocycle => "cocycle",
            Suite::Kernel => "kernel",
            Suite::Fock => "fock",
            Suite::Pkn => "pkn",
            Suite::Whittaker => "whittaker",
            Suite::Roots => "roots",
            Suite::All => "all",
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Restrict group-dependent suites (roots) to one group.
    #[arg(long, value_enum)]
    pub group: Option<Group>,
    /// Fock truncation degree.
    #[arg(long, default_value_t = 12)]
    pub degree_cap: usize,
    /// Radial Gauss nodes of the disk rule (angular nodes: four times as many).
    #[arg(long, default_value_t = 64)]
    pub quad_nodes: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct PlancherelArgs {
    #[arg(long, value_enum, default_value = "su11")]
    pub group: Group,
    /// Largest λ of the character sweep `det^{−λ}`, λ = 0, 1, …
    #[arg(long, default_value_t = 6)]
    pub lambda_max: i64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct RepArgs {
    #[arg(long, value_enum, default_value = "su21")]
    pub group: Group,
    /// Representation of K: `char:M` (det^M) or `sym:M:K` (det^M ⊗ Sym^K).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "lambda")]
    pub pi: Option<String>,
    /// Shorthand for `--pi char:-λ`.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<i64>,
    /// η as a basis index (`e0`, `e1`, … or a number).
    #[arg(long, default_value = "e0")]
    pub eta: String,
    #[arg(long, default_value_t = 12)]
    pub degree_cap: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct WhittakerArgs {
    #[command(flatten)]
    pub rep: RepArgs,
    /// Group element x (matrix); defaults to the identity.
    #[arg(long, allow_hyphen_values = true)]
    pub at: Option<String>,
    /// ξ as a basis index.
    #[arg(long, default_value = "e0")]
    pub xi: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Reduced,
    Full,
}

#[derive(Args, Debug, Clone)]
pub struct L2Args {
    #[command(flatten)]
    pub rep: RepArgs,
    #[arg(long, value_enum, default_value = "reduced")]
    pub method: Method,
    /// Gauss nodes per unit length of the A-interval (full method).
    #[arg(long, default_value_t = 16)]
    pub quad_nodes: usize,
    /// Haar samples on K (full method).
    #[arg(long, default_value_t = 8)]
    pub k_samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct SampleArgs {
    #[arg(long, value_enum, default_value = "su11")]
    pub group: Group,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: i64,
    #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
    pub t_min: f64,
    #[arg(long, default_value_t = 6.0, allow_hyphen_values = true)]
    pub t_max: f64,
    /// Rows `t_min + i·(t_max − t_min)/rows`, `i = 0, …, rows − 1`.
    #[arg(long, default_value_t = 400)]
    pub rows: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}
