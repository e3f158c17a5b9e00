use std::path::PathBuf;

use antsys::engine::default_workers;
use antsys::{DepositStrategy, Parameters, SelectionStrategy, StartPlacement};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "antsys",
    version,
    about = "Ant System solver and strategy benchmark for the symmetric TSP"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance and write the run report as JSON.
    Solve(SolveArgs),
    /// Run a grid of strategies over several instances and write per-iteration CSV.
    Bench(BenchArgs),
    /// Check that all four deposit strategies agree on one iteration's tours.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SelectionArg {
    Roulette,
    Nn,
    DataParallel,
}

impl SelectionArg {
    pub fn strategy(self, theta: usize) -> SelectionStrategy {
        match self {
            SelectionArg::Roulette => SelectionStrategy::RouletteFull,
            SelectionArg::Nn => SelectionStrategy::RouletteNn,
            SelectionArg::DataParallel => SelectionStrategy::DataParallelTiled { tile_size: theta },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DepositArg {
    Accumulate,
    ScatterGather,
    ScatterGatherTiled,
    SymmetricReduction,
}

impl DepositArg {
    pub fn strategy(self, theta: usize) -> DepositStrategy {
        match self {
            DepositArg::Accumulate => DepositStrategy::Accumulate,
            DepositArg::ScatterGather => DepositStrategy::ScatterGather,
            DepositArg::ScatterGatherTiled => DepositStrategy::ScatterGatherTiled { tile_size: theta },
            DepositArg::SymmetricReduction => DepositStrategy::SymmetricReduction { tile_size: theta },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlacementArg {
    Fixed,
    Random,
}

impl From<PlacementArg> for StartPlacement {
    fn from(p: PlacementArg) -> Self {
        match p {
            PlacementArg::Fixed => StartPlacement::Fixed,
            PlacementArg::Random => StartPlacement::Random,
        }
    }
}

/// Ant System parameters shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Pheromone exponent.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Heuristic exponent.
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    /// Evaporation rate, in (0, 1].
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub rho: f64,
    /// Number of ants [default: number of cities].
    #[arg(long)]
    pub ants: Option<usize>,
    /// Nearest-neighbour list length.
    #[arg(long, default_value_t = 30)]
    pub nn: usize,
    /// Iterations per run.
    #[arg(long, default_value_t = 100)]
    pub iters: usize,
    /// Tile size for the tiled strategies.
    #[arg(long, default_value_t = 64)]
    pub theta: usize,
    /// Worker threads [default: available parallelism].
    #[arg(long)]
    pub workers: Option<usize>,
    /// Start cities: ant k at city k mod n, or drawn at random.
    #[arg(long, value_enum, default_value_t = PlacementArg::Fixed)]
    pub placement: PlacementArg,
}

impl ParamArgs {
    pub fn parameters(&self, seed: u64) -> Parameters {
        Parameters {
            alpha: self.alpha,
            beta: self.beta,
            rho: self.rho,
            ants: self.ants,
            nn: self.nn,
            iterations: self.iters,
            seed,
        }
    }

    pub fn workers(&self) -> usize {
        self.workers.unwrap_or_else(default_workers)
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// TSPLIB instance file.
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = SelectionArg::Roulette)]
    pub selection: SelectionArg,
    #[arg(long, value_enum, default_value_t = DepositArg::Accumulate)]
    pub deposit: DepositArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report file; without it the JSON goes to standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// TSPLIB instance files (repeat the flag or separate with commas).
    #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
    pub instance: Vec<PathBuf>,
    /// Selection strategies to include.
    #[arg(long, value_enum, num_args = 1.., value_delimiter = ',', default_values_t = [SelectionArg::Roulette])]
    pub selection: Vec<SelectionArg>,
    /// Deposit strategies to include.
    #[arg(long, value_enum, num_args = 1.., value_delimiter = ',', default_values_t = [DepositArg::Accumulate])]
    pub deposit: Vec<DepositArg>,
    /// Repetitions of every cell; repetition r uses seed + r.
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
    /// Base seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV file; without it the CSV goes to standard output and the summary
    /// table to standard error.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// TSPLIB instance file.
    #[arg(long)]
    pub instance: PathBuf,
    /// Selection strategy used to build the tours.
    #[arg(long, value_enum, default_value_t = SelectionArg::Roulette)]
    pub selection: SelectionArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Absolute tolerance between two strategies' matrices.
    #[arg(long, default_value_t = antsys::verify::TOLERANCE)]
    pub tolerance: f64,
    #[command(flatten)]
    pub params: ParamArgs,
}
