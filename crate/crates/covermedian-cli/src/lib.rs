//! Library backing the `covermedian` binary: dataset ingestion, parameter
//! wiring, run orchestration, and machine-readable reports. The binary is a
//! thin argument-parsing shell over these functions, which keeps every code
//! path testable in-process.

pub mod dataset;
pub mod fixtures;
pub mod report;

use covermedian::engine::Mode;
use covermedian::{
    ClusterParams, ClusteringResult, FiniteSpace, PointSetSpace, SamplingParams, SubsetBudget,
    TrajectorySpace,
};
use dataset::{load_dataset, point_set_record, trajectory_record, Dataset, DatasetKind, RawRecord};
use report::{
    AssignmentRow, BenchMedian, BenchReport, BenchRow, CountersEcho, ModeFlags, ParamsEcho,
    RunReport,
};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

/// Error with a process exit code: 2 for input problems, 3 for parameter
/// problems, 1 for internal failures.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    pub fn param(message: impl Into<String>) -> Self {
        CliError {
            code: 3,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<covermedian::Error> for CliError {
    fn from(err: covermedian::Error) -> Self {
        use covermedian::Error as E;
        match err {
            E::InvalidParameter { .. } | E::InvalidCoverRadii { .. } | E::ResourceLimit(_) => {
                CliError::param(err.to_string())
            }
            E::DimensionMismatch { .. } | E::EmptyInput(_) | E::NonFiniteCoordinate => {
                CliError::input(err.to_string())
            }
            E::CostMismatch { .. } => CliError::internal(err.to_string()),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeOpt {
    Weak,
    Strong,
}

impl ModeOpt {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModeOpt::Weak => "weak",
            ModeOpt::Strong => "strong",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClusterOptions {
    pub input: PathBuf,
    pub k: usize,
    pub l: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub mode: ModeOpt,
    pub seed: u64,
    /// "exhaustive" or a positive count of random subsets per phase.
    pub subset_budget: String,
    pub repetitions: Option<usize>,
    /// 0 disables the cap (paper-faithful covers).
    pub cover_ratio_cap: f64,
    pub allow_loose_params: bool,
    pub cover_sample_size: usize,
    pub max_candidates: usize,
    pub alpha: Option<f64>,
    /// Explicit centers for strong mode; defaults to the input elements.
    pub centers: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

impl ClusterOptions {
    pub fn new(input: PathBuf, k: usize, l: usize, epsilon: f64, delta: f64) -> Self {
        ClusterOptions {
            input,
            k,
            l,
            epsilon,
            delta,
            mode: ModeOpt::Weak,
            seed: 0,
            subset_budget: "32".to_string(),
            repetitions: None,
            cover_ratio_cap: 64.0,
            allow_loose_params: false,
            cover_sample_size: 2048,
            max_candidates: 16,
            alpha: None,
            centers: None,
            output: None,
        }
    }

    fn build_params(&self) -> Result<ClusterParams, CliError> {
        let cap = if self.cover_ratio_cap <= 0.0 {
            None
        } else {
            Some(self.cover_ratio_cap)
        };
        let sampling = SamplingParams::new(self.epsilon, self.delta)
            .with_cover_ratio_cap(cap)
            .with_cover_sample_size(self.cover_sample_size)
            .with_max_candidates(self.max_candidates)
            .with_loose(self.allow_loose_params);
        let budget = if self.subset_budget.eq_ignore_ascii_case("exhaustive") {
            SubsetBudget::Exhaustive
        } else {
            let count: usize = self.subset_budget.parse().map_err(|_| {
                CliError::param(format!(
                    "subset-budget must be a count or `exhaustive`, got `{}`",
                    self.subset_budget
                ))
            })?;
            SubsetBudget::Random(count)
        };
        let mut params = ClusterParams::new(self.k, sampling)
            .with_seed(self.seed)
            .with_subset_budget(budget)
            .with_mode(match self.mode {
                ModeOpt::Weak => Mode::Weak,
                ModeOpt::Strong => Mode::Strong,
            });
        if let Some(reps) = self.repetitions {
            params = params.with_repetitions(reps);
        }
        if let Some(alpha) = self.alpha {
            params = params.with_alpha(alpha);
        }
        params.validate().map_err(CliError::from)?;
        Ok(params)
    }
}

fn echo(opts: &ClusterOptions, params: &ClusterParams, ds: &Dataset) -> (ParamsEcho, ModeFlags) {
    let budget = match params.subset_budget {
        SubsetBudget::Random(n) => format!("random:{n}"),
        SubsetBudget::Exhaustive => "exhaustive".to_string(),
    };
    let echo = ParamsEcho {
        kind: ds.kind.as_str().to_string(),
        n: ds.len(),
        dimension: ds.dimension,
        k: params.k,
        l: opts.l,
        epsilon: params.sampling.epsilon,
        delta: params.sampling.delta,
        alpha: params.alpha,
        mode: opts.mode.as_str().to_string(),
        subset_budget: budget,
        repetitions: params.repetitions,
        cover_ratio_cap: params.sampling.cover_ratio_cap,
        cover_sample_size: params.sampling.cover_sample_size,
        max_candidates: params.sampling.max_candidates,
    };
    let flags = ModeFlags {
        paper_faithful: params.sampling.cover_ratio_cap.is_none(),
        loose_params: params.sampling.allow_loose,
        sample_size: params.sampling.sample_size(),
        theoretical_cover_ratio: params.sampling.theoretical_cover_ratio(),
    };
    (echo, flags)
}

fn result_to_rows<E, F>(
    result: &ClusteringResult<E>,
    ids: &[String],
    to_record: F,
) -> (Vec<RawRecord>, Vec<AssignmentRow>)
where
    F: Fn(String, &E) -> RawRecord,
{
    let centers = result
        .centers
        .iter()
        .enumerate()
        .map(|(i, c)| to_record(format!("center_{i}"), c))
        .collect();
    let assignment = result
        .assignment
        .iter()
        .map(|a| AssignmentRow {
            id: ids[a.element].clone(),
            center_index: a.center,
            distance: a.distance,
        })
        .collect();
    (centers, assignment)
}

/// Runs a clustering job and builds the report. Does not touch the output
/// path; `write_report` does that.
pub fn cmd_cluster(opts: &ClusterOptions) -> Result<RunReport, CliError> {
    let ds = load_dataset(&opts.input)?;
    let params = opts.build_params()?;
    let (params_echo, mode_flags) = echo(opts, &params, &ds);
    let ids = ds.ids();

    let (centers, assignment, total_cost, counters) = match ds.kind {
        DatasetKind::Trajectory => {
            let space = TrajectorySpace::new(opts.l)?;
            let elements = &ds.trajectories;
            match opts.mode {
                ModeOpt::Weak => {
                    let result = covermedian::run(&space, elements, &params)?;
                    let (c, a) = result_to_rows(&result, &ids, |id, t| trajectory_record(&id, t));
                    (c, a, result.total_cost, result.counters)
                }
                ModeOpt::Strong => {
                    let explicit = match &opts.centers {
                        Some(path) => {
                            let center_ds = load_dataset(path)?;
                            if center_ds.kind != DatasetKind::Trajectory {
                                return Err(CliError::input("centers file kind differs from input"));
                            }
                            center_ds.trajectories
                        }
                        None => elements.clone(),
                    };
                    let finite = FiniteSpace::new(space, explicit)?;
                    let result = covermedian::run(&finite, elements, &params)?;
                    let (c, a) = result_to_rows(&result, &ids, |id, t| trajectory_record(&id, t));
                    (c, a, result.total_cost, result.counters)
                }
            }
        }
        DatasetKind::PointSet => {
            let space = PointSetSpace::new(opts.l)?;
            let elements = &ds.point_sets;
            match opts.mode {
                ModeOpt::Weak => {
                    let result = covermedian::run(&space, elements, &params)?;
                    let (c, a) = result_to_rows(&result, &ids, |id, s| point_set_record(&id, s));
                    (c, a, result.total_cost, result.counters)
                }
                ModeOpt::Strong => {
                    let explicit = match &opts.centers {
                        Some(path) => {
                            let center_ds = load_dataset(path)?;
                            if center_ds.kind != DatasetKind::PointSet {
                                return Err(CliError::input("centers file kind differs from input"));
                            }
                            center_ds.point_sets
                        }
                        None => elements.clone(),
                    };
                    let finite = FiniteSpace::new(space, explicit)?;
                    let result = covermedian::run(&finite, elements, &params)?;
                    let (c, a) = result_to_rows(&result, &ids, |id, s| point_set_record(&id, s));
                    (c, a, result.total_cost, result.counters)
                }
            }
        }
    };

    Ok(RunReport {
        params: params_echo,
        seed: opts.seed,
        mode_flags,
        centers,
        assignment,
        total_cost,
        counters: CountersEcho {
            distance_evals: counters.distance_evals,
            projection_evals: counters.projection_evals,
            wall_ms: counters.wall.as_millis() as u64,
        },
    })
}

pub fn write_report(text: &str, output: Option<&PathBuf>) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub cluster: ClusterOptions,
    pub sizes: Vec<usize>,
    pub bench_seeds: usize,
}

/// Runs the clustering job on growing prefixes of the dataset, several seeds
/// per size, and tabulates counters.
pub fn cmd_bench(opts: &BenchOptions) -> Result<BenchReport, CliError> {
    if opts.sizes.is_empty() {
        return Err(CliError::param("bench requires at least one size"));
    }
    if opts.bench_seeds == 0 {
        return Err(CliError::param("bench requires at least one seed"));
    }
    let ds = load_dataset(&opts.cluster.input)?;
    let params = opts.cluster.build_params()?;
    let mut rows: Vec<BenchRow> = Vec::new();
    for &n in &opts.sizes {
        if n == 0 || n > ds.len() {
            return Err(CliError::input(format!(
                "bench size {n} outside the dataset ({} records)",
                ds.len()
            )));
        }
        for s in 0..opts.bench_seeds {
            let seed = opts.cluster.seed.wrapping_add(s as u64);
            let run_params = params.clone().with_seed(seed);
            let (total_cost, counters) = match ds.kind {
                DatasetKind::Trajectory => {
                    let space = TrajectorySpace::new(opts.cluster.l)?;
                    let result = covermedian::run(&space, &ds.trajectories[..n], &run_params)?;
                    (result.total_cost, result.counters)
                }
                DatasetKind::PointSet => {
                    let space = PointSetSpace::new(opts.cluster.l)?;
                    let result = covermedian::run(&space, &ds.point_sets[..n], &run_params)?;
                    (result.total_cost, result.counters)
                }
            };
            rows.push(BenchRow {
                n,
                seed,
                total_cost,
                distance_evals: counters.distance_evals,
                projection_evals: counters.projection_evals,
                wall_ms: counters.wall.as_millis() as u64,
            });
        }
    }
    let mut medians = Vec::new();
    for &n in &opts.sizes {
        let mut evals: Vec<u64> = rows
            .iter()
            .filter(|r| r.n == n)
            .map(|r| r.distance_evals)
            .collect();
        let mut walls: Vec<u64> = rows.iter().filter(|r| r.n == n).map(|r| r.wall_ms).collect();
        evals.sort_unstable();
        walls.sort_unstable();
        medians.push(BenchMedian {
            n,
            distance_evals: evals[evals.len() / 2],
            wall_ms: walls[walls.len() / 2],
        });
    }
    Ok(BenchReport { rows, medians })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidateSummary {
    pub kind: String,
    pub records: usize,
    pub dimension: usize,
}

/// Parses the dataset and checks its invariants (uniform kind and dimension,
/// unique ids), returning a summary.
pub fn cmd_validate(input: &PathBuf) -> Result<ValidateSummary, CliError> {
    let ds = load_dataset(input)?;
    Ok(ValidateSummary {
        kind: ds.kind.as_str().to_string(),
        records: ds.len(),
        dimension: ds.dimension,
    })
}
