//! `desparsify` command-line front end.

mod commands;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "desparsify", version, about = "Graph de-sparsification toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, default_value_t = 0.3)]
    pub eps: f64,
    /// Overrides the profile's weak-edge threshold λ.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, env = "DESPARSIFY_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ProfileArg::Desk)]
    pub profile: ProfileArg,
    #[arg(long)]
    pub max_attempts: Option<u64>,
    #[arg(long)]
    pub max_iters: Option<u64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileArg {
    Paper,
    Desk,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendArg {
    Pivot,
    Brute,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyKind {
    Cut,
    Spectral,
    Twp,
    None,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    CliqueUnion,
    RandomGnp,
    ExpanderLike,
    Tree,
    Cycle,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum PipelineMode {
    /// Sketch G, recover weak edges and a cut sparsifier, de-sparsify.
    Sketch,
    /// Spectral sketch pipeline with the offset program.
    SpectralSketch,
    /// Resistance-sample G into a weighted sparsifier and de-sparsify it.
    Cut,
    Spectral,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamMode {
    Dynamic,
    Insertion,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimMode {
    Distributed,
    Mpc,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a graph.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        /// Vertex count (random-gnp, expander-like, tree, cycle).
        #[arg(long, default_value_t = 16)]
        n: usize,
        /// Clique sizes for clique-union, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "8,8,8")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        bridges: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 4)]
        degree: usize,
        #[arg(long, env = "DESPARSIFY_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover a simple m-edge sparsifier of the input graph.
    Desparsify {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = PipelineMode::Sketch)]
        mode: PipelineMode,
        /// Weighted sparsifier to de-sparsify instead of sampling one (cut/spectral modes).
        #[arg(long)]
        sparsifier: Option<PathBuf>,
        /// Sampling constant for the generated weighted sparsifier.
        #[arg(long, default_value_t = 2.0)]
        sample_c: f64,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "cut,twp")]
        verify: Vec<VerifyKind>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Correlation clustering, directly or from sketches.
    Cluster {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = BackendArg::Pivot)]
        backend: BackendArg,
        #[arg(long, default_value_t = 16)]
        runs: usize,
        #[arg(long)]
        from_sketch: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a streaming harness on an event file.
    Stream {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = StreamMode::Dynamic)]
        mode: StreamMode,
        /// Vertex count; defaults to one more than the largest id.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = BackendArg::Pivot)]
        backend: BackendArg,
        #[arg(long, default_value_t = 16)]
        runs: usize,
    },
    /// Split a graph over machines and run a communication model.
    Simulate {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = SimMode::Distributed)]
        mode: SimMode,
        #[arg(long, default_value_t = 4)]
        machines: usize,
        /// Per-machine, per-round byte cap for MPC.
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, value_enum, default_value_t = BackendArg::Pivot)]
        backend: BackendArg,
        #[arg(long, default_value_t = 16)]
        runs: usize,
    },
    /// Check a (weighted) graph H against G.
    Verify {
        h: PathBuf,
        g: PathBuf,
        #[arg(long, default_value_t = 0.3)]
        eps: f64,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "cut,spectral,twp")]
        kind: Vec<VerifyKind>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (name, report_path) = match &cli.command {
        Command::Gen { .. } => ("gen", None),
        Command::Desparsify { common, .. } => ("desparsify", common.report.clone()),
        Command::Cluster { common, .. } => ("cluster", common.report.clone()),
        Command::Stream { common, .. } => ("stream", common.report.clone()),
        Command::Simulate { common, .. } => ("simulate", common.report.clone()),
        Command::Verify { report, .. } => ("verify", report.clone()),
    };
    let outcome = match cli.command {
        Command::Gen { kind, n, sizes, bridges, p, degree, seed, out } => {
            commands::gen(kind, n, &sizes, bridges, p, degree, seed, out.as_deref())
        }
        Command::Desparsify { input, common, mode, sparsifier, sample_c, verify, out } => {
            commands::desparsify(&input, &common, mode, sparsifier.as_deref(), sample_c, &verify, out.as_deref())
        }
        Command::Cluster { input, common, backend, runs, from_sketch, out } => {
            commands::cluster(&input, &common, backend, runs, from_sketch, out.as_deref())
        }
        Command::Stream { input, common, mode, n, backend, runs } => {
            commands::stream(&input, &common, mode, n, backend, runs)
        }
        Command::Simulate { input, common, mode, machines, cap, backend, runs } => {
            commands::simulate(&input, &common, mode, machines, cap, backend, runs)
        }
        Command::Verify { h, g, eps, kind, .. } => commands::verify(&h, &g, eps, &kind),
    };
    commands::finish(name, report_path.as_deref(), outcome)
}
