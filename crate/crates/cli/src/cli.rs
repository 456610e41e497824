use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "gensel", version, about = "Observable-guided generator selection for Pauli-rotation circuits")]
pub struct Cli {
    /// TOML file with [dataset], [spsa], [expressibility] and [selection] sections.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Master seed.
    #[arg(long, global = true, env = "GENSEL_SEED")]
    pub seed: Option<u64>,

    /// Worker threads for independent trials (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Choose generators for an observable.
    Select(SelectArgs),
    /// Generate the teacher dataset.
    GenData(GenDataArgs),
    /// Train selected circuits on a dataset and write RMSE traces.
    Train(TrainArgs),
    /// Hellinger distance of the fidelity distribution to the Haar law.
    Expressibility(ExpressibilityArgs),
    /// Check the commutator-norm identities on random observables.
    VerifyTheory(VerifyTheoryArgs),
    /// Summaries, curves and the final-epoch t-test from earlier outputs.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct CircuitArgs {
    /// Qubits.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of generators L.
    #[arg(long)]
    pub depth: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[command(flatten)]
    pub circuit: CircuitArgs,
    /// Observable as an IXYZ string, qubit 0 first (default Z on qubit 0).
    #[arg(long)]
    pub observable: Option<String>,
    #[arg(long)]
    pub method: Option<String>,
    /// Keep a seeded random subset of this many pool candidates.
    #[arg(long)]
    pub pool_subsample: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenDataArgs {
    #[command(flatten)]
    pub circuit: CircuitArgs,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub circuit: CircuitArgs,
    /// CSV with columns index, x, y.
    #[arg(long)]
    pub data: PathBuf,
    /// Comma-separated methods.
    #[arg(long, value_delimiter = ',')]
    pub method: Vec<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    pub momentum: Option<f64>,
    #[arg(long)]
    pub perturbation: Option<f64>,
    /// Samples per SPSA step; 0 = full dataset.
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExpressibilityArgs {
    #[command(flatten)]
    pub circuit: CircuitArgs,
    #[arg(long, value_delimiter = ',')]
    pub method: Vec<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Fidelity pairs per circuit.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyTheoryArgs {
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub traces: PathBuf,
    #[arg(long)]
    pub expr: Option<PathBuf>,
    /// Table of per-method metric means and standard deviations.
    #[arg(long, default_value = "table1.csv")]
    pub table: PathBuf,
    #[arg(long, default_value = "curves.svg")]
    pub svg: PathBuf,
    /// Omit the generation timestamp from the SVG.
    #[arg(long)]
    pub deterministic: bool,
}
