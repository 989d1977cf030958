use clap::{Args, Parser, Subcommand, ValueEnum};
use covermedian_cli::{
    cmd_bench, cmd_cluster, cmd_validate, write_report, BenchOptions, CliError, ClusterOptions,
    ModeOpt,
};
use std::path::PathBuf;
use std::process::ExitCode;

/// k-median clustering of trajectories (discrete Frechet) and point sets
/// (Hausdorff) with restricted-complexity centers.
#[derive(Parser)]
#[command(name = "covermedian", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster a dataset and emit a run report.
    Cluster(ClusterArgs),
    /// Run the clustering job on growing prefixes and tabulate counters.
    Bench(BenchArgs),
    /// Parse a dataset and check its invariants.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Weak,
    Strong,
}

#[derive(Args)]
struct ClusterArgs {
    /// Newline-delimited dataset.
    input: PathBuf,
    /// Number of cluster centers.
    #[arg(long)]
    k: usize,
    /// Maximum center complexity (points per center).
    #[arg(long)]
    l: usize,
    /// Approximation parameter, in (0, 4/9) unless --allow-loose-params.
    #[arg(long)]
    epsilon: f64,
    /// Failure-probability parameter, in (1 - 5*epsilon/18, 1) unless loose.
    #[arg(long)]
    delta: f64,
    /// Candidate generation mode.
    #[arg(long, value_enum, default_value = "weak")]
    mode: ModeArg,
    /// Root seed; all randomness derives from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random subsets per sampling phase, or `exhaustive`.
    #[arg(long, default_value = "32")]
    subset_budget: String,
    /// Outer repetitions; defaults to the amplification formula.
    #[arg(long)]
    repetitions: Option<usize>,
    /// Cap on the cover ratio r/r'; 0 disables the cap (paper-faithful).
    #[arg(long, default_value_t = 64.0)]
    cover_ratio_cap: f64,
    /// Permit epsilon/delta outside the weak-sampling ranges.
    #[arg(long, default_value_t = false)]
    allow_loose_params: bool,
    /// Cover elements consumed per candidate generation.
    #[arg(long, default_value_t = 2048)]
    cover_sample_size: usize,
    /// Maximum candidates per generation (including the anchor).
    #[arg(long, default_value_t = 16)]
    max_candidates: usize,
    /// Pruning parameter; defaults to epsilon / (8 k^2).
    #[arg(long)]
    alpha: Option<f64>,
    /// Explicit centers file for strong mode (defaults to the input).
    #[arg(long)]
    centers: Option<PathBuf>,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    cluster: ClusterArgs,
    /// Comma-separated prefix sizes, e.g. 200,400,800.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    /// Seeds per size (rows are medianed per size).
    #[arg(long, default_value_t = 5)]
    bench_seeds: usize,
}

#[derive(Args)]
struct ValidateArgs {
    input: PathBuf,
}

fn to_options(args: &ClusterArgs) -> ClusterOptions {
    let mut opts =
        ClusterOptions::new(args.input.clone(), args.k, args.l, args.epsilon, args.delta);
    opts.mode = match args.mode {
        ModeArg::Weak => ModeOpt::Weak,
        ModeArg::Strong => ModeOpt::Strong,
    };
    opts.seed = args.seed;
    opts.subset_budget = args.subset_budget.clone();
    opts.repetitions = args.repetitions;
    opts.cover_ratio_cap = args.cover_ratio_cap;
    opts.allow_loose_params = args.allow_loose_params;
    opts.cover_sample_size = args.cover_sample_size;
    opts.max_candidates = args.max_candidates;
    opts.alpha = args.alpha;
    opts.centers = args.centers.clone();
    opts.output = args.output.clone();
    opts
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Cluster(args) => {
            let opts = to_options(&args);
            let report = cmd_cluster(&opts)?;
            write_report(&report.to_json(), opts.output.as_ref())
        }
        Command::Bench(args) => {
            let opts = BenchOptions {
                cluster: to_options(&args.cluster),
                sizes: args.sizes.clone(),
                bench_seeds: args.bench_seeds,
            };
            let report = cmd_bench(&opts)?;
            write_report(&report.to_json(), opts.cluster.output.as_ref())
        }
        Command::Validate(args) => {
            let summary = cmd_validate(&args.input)?;
            let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
            text.push('\n');
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code.clamp(0, 255) as u8)
        }
    }
}
