use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "sts",
    version,
    about = "Correlations of two-mode squeezed thermal states under local thermal damping"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Correlations of the state at a single time
    Report(ReportArgs),
    /// Time series of the damped state and its correlations
    Evolve(EvolveArgs),
    /// Entanglement sudden-death time
    Esd(EsdArgs),
    /// Scan one parameter and tabulate scalar outputs
    Sweep(SweepArgs),
    /// Compare closed forms against numeric oracles
    Verify(VerifyArgs),
}

/// Either `--n1 --n2 --r` or `--b1 --b2 --c`, never both.
#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Thermal occupancy of mode 1
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["b1", "b2", "c"])]
    pub n1: Option<f64>,
    /// Thermal occupancy of mode 2
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["b1", "b2", "c"])]
    pub n2: Option<f64>,
    /// Two-mode squeezing parameter
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["b1", "b2", "c"])]
    pub r: Option<f64>,
    /// Variance of mode 1 (vacuum is 1/2)
    #[arg(long, allow_negative_numbers = true)]
    pub b1: Option<f64>,
    /// Variance of mode 2 (vacuum is 1/2)
    #[arg(long, allow_negative_numbers = true)]
    pub b2: Option<f64>,
    /// Correlation amplitude between the modes
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    /// Squeezing phase
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi: f64,
}

/// Baths. A mode is damped when its rate or occupancy is given; its rate
/// then defaults to 1.
#[derive(Debug, Clone, Args)]
pub struct ReservoirArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub gamma1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub nr1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub nr2: Option<f64>,
    /// Same bath (--gamma, --nr) on both modes
    #[arg(long, conflicts_with_all = ["single_bath", "gamma1", "nr1", "gamma2", "nr2"])]
    pub identical: bool,
    /// Bath (--gamma, --nr) on mode 1 only
    #[arg(long, conflicts_with_all = ["gamma1", "nr1", "gamma2", "nr2"])]
    pub single_bath: bool,
    /// Damping rate for --identical / --single-bath
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["gamma1", "nr1", "gamma2", "nr2"])]
    pub gamma: Option<f64>,
    /// Bath occupancy for --identical / --single-bath
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["gamma1", "nr1", "gamma2", "nr2"])]
    pub nr: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t_start: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub t_end: f64,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    /// Geometric spacing (needs --t-start > 0)
    #[arg(long)]
    pub log_spacing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Entropy units of the printed correlations
    #[arg(long, value_enum, default_value_t = Units::Nats)]
    pub units: Units,
    /// Write here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// key=value file with defaults for any long flag
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub reservoir: ReservoirArgs,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t: f64,
    #[arg(long, value_enum, value_delimiter = ',')]
    pub outputs: Vec<OutputField>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub reservoir: ReservoirArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EsdArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub reservoir: ReservoirArgs,
    /// Also run the bisection oracle and print the difference
    #[arg(long)]
    pub verify: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub reservoir: ReservoirArgs,
    #[arg(long, value_enum)]
    pub sweep: SweepAxis,
    #[arg(long, allow_negative_numbers = true)]
    pub min: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub max: f64,
    #[arg(long)]
    pub steps: usize,
    /// Time at which the correlations are evaluated
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t: f64,
    #[arg(long, value_enum, value_delimiter = ',')]
    pub outputs: Vec<OutputField>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub reservoir: ReservoirArgs,
    /// Check this many random states instead of the given one
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Units {
    Nats,
    Bits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputField {
    Ef,
    D1,
    D2,
    #[value(name = "mutual_information")]
    MutualInformation,
    Kappas,
    Separable,
    #[value(name = "t_s")]
    Ts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepAxis {
    N1,
    N2,
    R,
    Nr,
    Gamma,
}
