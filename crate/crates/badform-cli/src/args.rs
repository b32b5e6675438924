//! Command-line surface.

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "badform",
    about = "Approximation constants of systems of linear forms: direct search, lattice orbits, hyperplane games, and dimension estimates",
    version
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Write the result payload as JSON to this path.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,

    /// Run-cache directory (defaults to $BADFORM_CACHE; no records are
    /// written when neither is set).
    #[arg(long, global = true)]
    pub cache: Option<std::path::PathBuf>,

    /// Flat key = value config file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<std::path::PathBuf>,

    /// RNG seed for randomized strategies and sampling.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker-count cap for parallel searches.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Mantissa bits for high-precision parsing and arithmetic.
    #[arg(long, global = true)]
    pub precision_bits: Option<usize>,

    /// Coefficient-box cap for certified lattice enumerations.
    #[arg(long, global = true)]
    pub search_bound: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Truncated approximation constant and membership verdicts by direct search.
    Approx(ApproxArgs),
    /// Shortest-vector profile of the flow orbit (CSV).
    Orbit(OrbitArgs),
    /// Cusp-avoidance check of the flow orbit at eps = c^(1/(m+n)).
    Dani(DaniArgs),
    /// Play the hyperplane game and check the strategy guarantee.
    Game(GameArgs),
    /// Build the game-driven Cantor subdivision and audit its counts.
    Cantor(CantorArgs),
    /// Box-counting / cylinder-pressure dimension estimates.
    Boxdim(BoxdimArgs),
    /// Covering upper-bound estimate over renormalized lattice orbits.
    Cover(CoverArgs),
    /// Closed-form bound curves and exponents.
    Bounds(BoundsArgs),
    /// Re-run a cached record and verify the payload is reproduced byte for byte.
    Replay(ReplayArgs),
}

#[derive(Args, Debug)]
pub struct ApproxArgs {
    /// Matrix entries: named constant (phi, sqrt2, sqrt5, e), a scalar, or
    /// rows like "0.3,0.7;0.1,0.9". Fractions ("1/3") stay exact.
    #[arg(long)]
    pub entries: String,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Search bound Q over sup-norm shells of q.
    #[arg(long, default_value_t = 10_000)]
    pub bound: u64,
    /// Optional constant to test membership against.
    #[arg(long)]
    pub c: Option<String>,
}

#[derive(Args, Debug)]
pub struct OrbitArgs {
    #[arg(long)]
    pub entries: String,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 20.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Write the t,delta,witness table here (also cached as an artifact).
    #[arg(long)]
    pub csv: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
pub struct DaniArgs {
    #[arg(long)]
    pub entries: String,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub c: String,
    #[arg(long, default_value_t = 20.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BobKind {
    Shrink,
    Random,
    Steer,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum AliceKind {
    Simplex,
    Fallback,
}

#[derive(Args, Debug)]
pub struct GameArgs {
    /// Dimension of the game (number of forms; the game runs on R^m).
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Game parameter as an exact rational ("1/10") or decimal.
    #[arg(long)]
    pub beta: String,
    #[arg(long, default_value_t = 40)]
    pub rounds: usize,
    #[arg(long, value_enum, default_value_t = BobKind::Random)]
    pub bob: BobKind,
    #[arg(long, value_enum, default_value_t = AliceKind::Simplex)]
    pub alice: AliceKind,
    /// Initial ball center (comma-separated, defaults to 1/2 per coordinate).
    #[arg(long)]
    pub center: Option<String>,
    /// Initial radius (rational or decimal, default 1).
    #[arg(long, default_value = "1")]
    pub radius: String,
    /// Steering target for the adversarial Bob.
    #[arg(long)]
    pub target: Option<String>,
    /// Check the limit point against this search bound.
    #[arg(long, default_value_t = 1000)]
    pub check_bound: u64,
}

#[derive(Args, Debug)]
pub struct CantorArgs {
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long)]
    pub beta: String,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    #[arg(long, value_enum, default_value_t = AliceKind::Simplex)]
    pub alice: AliceKind,
    /// Cap on recursively expanded children per node (counts always cover the
    /// full grid); omit for the full tree.
    #[arg(long)]
    pub expand_limit: Option<usize>,
    #[arg(long)]
    pub center: Option<String>,
    #[arg(long, default_value = "1")]
    pub radius: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BoxdimSet {
    /// Bounded-quotient continued-fraction set.
    Ek,
    /// Full unit cube (calibration).
    Full,
    /// Thin horizontal strip (calibration).
    Strip,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BoxdimMethod {
    Cylinder,
    Boxcount,
}

#[derive(Args, Debug)]
pub struct BoxdimArgs {
    #[arg(long, value_enum, default_value_t = BoxdimSet::Ek)]
    pub set: BoxdimSet,
    /// Quotient bound for the ek set.
    #[arg(long, default_value_t = 2)]
    pub k: u64,
    #[arg(long, default_value_t = 12)]
    pub max_depth: usize,
    #[arg(long, value_enum, default_value_t = BoxdimMethod::Cylinder)]
    pub method: BoxdimMethod,
    /// Dyadic scale exponents "lo..hi" for box counting (scales 2^-lo..2^-hi).
    #[arg(long, default_value = "9..16")]
    pub scales: String,
    #[arg(long, default_value_t = 96)]
    pub samples: u32,
    /// Denominator resolution of the fattened ek set for box counting.
    #[arg(long, default_value_t = 500)]
    pub q_res: u64,
    /// Ambient dimension for the calibration sets.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
}

#[derive(Args, Debug)]
pub struct CoverArgs {
    /// Base system around which offsets are covered.
    #[arg(long, default_value = "phi")]
    pub entries: String,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub c: f64,
    /// Flow time per level (must exceed m*n); default ln(10).
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    /// Injectivity-radius constant.
    #[arg(long, default_value_t = 0.1)]
    pub b: f64,
    #[arg(long)]
    pub csv: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub k1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub k2: f64,
    /// Also evaluate the game-side bounds at this parameter.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub d: Option<u32>,
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    /// Path to a record.json produced by a cached run.
    pub record: std::path::PathBuf,
}
