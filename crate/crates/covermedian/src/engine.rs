//! The recursive clustering engine: pruning phase, sampling phase, candidate
//! recursion, best-cost selection, outer repetition for probability
//! amplification, and final assignment.

use crate::center_space::{finite_space_1median, CenterSpace};
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::sampling::{gamma_candidates, uniform_multiset, OperationCounter, SamplingParams};
use rand::Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::time::Instant;

/// Which sampling property drives candidate generation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Candidates from the cover-based generator.
    Weak,
    /// Candidates are exact 1-medians over an explicit center list.
    Strong,
}

/// How many size-m subsets of the phase sample are expanded into candidates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubsetBudget {
    /// That many uniformly random size-m subsets.
    Random(usize),
    /// Every subset of the (deduplicated) view of size at most m. Feasible
    /// only for tiny instances; used by the strong-mode exactness tests.
    Exhaustive,
}

#[derive(Clone, Debug)]
pub struct ClusterParams {
    pub k: usize,
    /// Pruning fraction parameter; must satisfy 0 < alpha < 1/(4k).
    pub alpha: f64,
    pub sampling: SamplingParams,
    pub mode: Mode,
    pub subset_budget: SubsetBudget,
    pub repetitions: usize,
    pub seed: u64,
}

impl ClusterParams {
    /// Defaults: alpha = epsilon / (8 k^2), random subset budget 32, and the
    /// repetition count from `default_repetitions`.
    pub fn new(k: usize, sampling: SamplingParams) -> Self {
        let alpha = sampling.epsilon / (8.0 * (k * k) as f64);
        let repetitions = default_repetitions(k, sampling.delta);
        ClusterParams {
            k,
            alpha,
            sampling,
            mode: Mode::Weak,
            subset_budget: SubsetBudget::Random(32),
            repetitions,
            seed: 0,
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_repetitions(mut self, repetitions: usize) -> Self {
        self.repetitions = repetitions;
        self
    }

    pub fn with_subset_budget(mut self, budget: SubsetBudget) -> Self {
        self.subset_budget = budget;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::param("k", "must be at least 1"));
        }
        let limit = 1.0 / (4.0 * self.k as f64);
        if !(self.alpha > 0.0 && self.alpha < limit) {
            return Err(Error::param(
                "alpha",
                format!("must lie in (0, 1/(4k)) = (0, {limit}), got {}", self.alpha),
            ));
        }
        if self.repetitions < 1 {
            return Err(Error::param("repetitions", "must be at least 1"));
        }
        if let SubsetBudget::Random(0) = self.subset_budget {
            return Err(Error::param("subset_budget", "must be at least 1"));
        }
        if self.mode == Mode::Weak {
            self.sampling.validate_weak()?;
        }
        Ok(())
    }
}

/// Repetition count for amplifying the per-run success probability
/// `((1 - delta) / 5)^k` to 95%, capped at 256.
pub fn default_repetitions(k: usize, delta: f64) -> usize {
    let per_run = ((1.0 - delta) / 5.0).powi(k as i32);
    if per_run <= 0.0 {
        return 256;
    }
    let reps = ((1.0f64 / 0.05).ln() / per_run).ceil();
    (reps as usize).clamp(1, 256)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Phase {
    Pruning,
    Sampling,
    Terminal,
}

/// Aggregated per-depth recursion summary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRow {
    pub depth: usize,
    pub phase: Phase,
    pub calls: u64,
    pub candidates_tried: u64,
}

type TraceMap = BTreeMap<(usize, Phase), (u64, u64)>;

fn trace_note(trace: &mut TraceMap, depth: usize, phase: Phase, candidates: u64) {
    let entry = trace.entry((depth, phase)).or_insert((0, 0));
    entry.0 += 1;
    entry.1 += candidates;
}

fn merge_trace(into: &mut TraceMap, from: &TraceMap) {
    for (&key, &(calls, cands)) in from {
        let entry = into.entry(key).or_insert((0, 0));
        entry.0 += calls;
        entry.1 += cands;
    }
}

#[derive(Clone, Debug)]
pub struct Assignment {
    pub element: usize,
    pub center: usize,
    pub distance: f64,
}

#[derive(Clone, Debug)]
pub struct ClusteringResult<E> {
    pub centers: Vec<E>,
    pub assignment: Vec<Assignment>,
    pub total_cost: f64,
    pub counters: OperationCounter,
    pub trace: Vec<TraceRow>,
    pub best_repetition: usize,
}

/// Source of candidate centers for one sampling-phase subset.
pub trait CandidateSource<S: CenterSpace>: Sync {
    fn candidates(
        &self,
        space: &S,
        view: &[&S::Elem],
        stream: &RngStream,
        counter: &mut OperationCounter,
    ) -> Result<Vec<S::Elem>>;
}

/// Weak-sampling candidates via the cover-based generator.
struct WeakParamSource {
    sampling: SamplingParams,
}

impl<S: CenterSpace> CandidateSource<S> for WeakParamSource {
    fn candidates(
        &self,
        space: &S,
        view: &[&S::Elem],
        stream: &RngStream,
        counter: &mut OperationCounter,
    ) -> Result<Vec<S::Elem>> {
        Ok(gamma_candidates(space, view, &self.sampling, stream, counter)?.candidates)
    }
}

struct StrongSource<E> {
    centers: Vec<E>,
}

impl<S: CenterSpace> CandidateSource<S> for StrongSource<S::Elem> {
    fn candidates(
        &self,
        space: &S,
        view: &[&S::Elem],
        _stream: &RngStream,
        counter: &mut OperationCounter,
    ) -> Result<Vec<S::Elem>> {
        let sample: Vec<S::Elem> = view.iter().map(|e| (*e).clone()).collect();
        let (median, _cost) = finite_space_1median(space, &sample, &self.centers)?;
        counter.distance_evals += (sample.len() * self.centers.len()) as u64;
        Ok(vec![median])
    }
}

/// Sum of nearest-center distances; independent of element order.
pub fn evaluate_cost<S: CenterSpace>(
    space: &S,
    elements: &[S::Elem],
    centers: &[S::Elem],
) -> Result<f64> {
    if centers.is_empty() {
        return Err(Error::EmptyInput("centers"));
    }
    let mut total = 0.0;
    for e in elements {
        let mut best = f64::INFINITY;
        for c in centers {
            best = best.min(space.distance(e, c)?);
        }
        total += best;
    }
    Ok(total)
}

struct Ctx<'a, S: CenterSpace, F: CandidateSource<S>> {
    space: &'a S,
    elements: &'a [S::Elem],
    params: &'a ClusterParams,
    source: &'a F,
}

struct Outcome<E> {
    centers: Vec<E>,
    cost: f64,
    counter: OperationCounter,
    trace: TraceMap,
}

/// Splits the view into (removed, retained): the floor(|view|/2) elements
/// closest to the current centers are removed, ties broken by element index
/// ascending. Both halves preserve the view's element order.
fn prune_view(view: &[usize], dist: &[f64]) -> (Vec<usize>, Vec<usize>) {
    let remove = view.len() / 2;
    let mut order: Vec<usize> = view.to_vec();
    order.sort_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(a.cmp(&b)));
    let removed_set: Vec<usize> = order[..remove].to_vec();
    let mut removed_flag = vec![false; dist.len()];
    for &i in &removed_set {
        removed_flag[i] = true;
    }
    let retained: Vec<usize> = view.iter().copied().filter(|&i| !removed_flag[i]).collect();
    let removed: Vec<usize> = view.iter().copied().filter(|&i| removed_flag[i]).collect();
    (removed, retained)
}

fn cluster_rec<S: CenterSpace, F: CandidateSource<S>>(
    ctx: &Ctx<'_, S, F>,
    view: &[usize],
    k_rem: usize,
    c_bar: &[S::Elem],
    dist: &[f64],
    stream: RngStream,
    depth: usize,
) -> Result<Outcome<S::Elem>> {
    let mut counter = OperationCounter::default();
    let mut trace = TraceMap::new();

    if k_rem == 0 {
        trace_note(&mut trace, depth, Phase::Terminal, 0);
        return Ok(Outcome {
            centers: c_bar.to_vec(),
            cost: dist.iter().sum(),
            counter,
            trace,
        });
    }

    if k_rem >= view.len() {
        // every remaining element becomes (the projection of) its own center
        let mut centers = c_bar.to_vec();
        let mut dist = dist.to_vec();
        for &i in view {
            let center = ctx.space.project(&ctx.elements[i])?;
            counter.projection_evals += 1;
            extend_distances(ctx.space, ctx.elements, &mut dist, &center, &mut counter)?;
            centers.push(center);
        }
        trace_note(&mut trace, depth, Phase::Terminal, 0);
        return Ok(Outcome {
            centers,
            cost: dist.iter().sum(),
            counter,
            trace,
        });
    }

    enum Branch<'v> {
        Prune { retained: Vec<usize> },
        Candidate { _order: usize, view: &'v [usize] },
    }

    let mut branches: Vec<(Branch, Option<S::Elem>)> = Vec::new();

    // Pruning phase. Skipped when no centers exist yet: pruning against an
    // empty center set would remove arbitrary elements.
    if !c_bar.is_empty() {
        let (_removed, retained) = prune_view(view, dist);
        trace_note(&mut trace, depth, Phase::Pruning, 0);
        branches.push((Branch::Prune { retained }, None));
    }

    // Sampling phase.
    let m = ctx.params.sampling.sample_size();
    let phase_stream = stream.child(0);
    let mut rng = phase_stream.rng();
    let mut candidates: Vec<S::Elem> = Vec::new();
    let mut seen_keys: Vec<Vec<u64>> = Vec::new();
    let push_candidates = |generated: Vec<S::Elem>,
                               candidates: &mut Vec<S::Elem>,
                               seen_keys: &mut Vec<Vec<u64>>| {
        for cand in generated {
            let key = ctx.space.candidate_key(&cand);
            if !seen_keys.contains(&key) {
                seen_keys.push(key);
                candidates.push(cand);
            }
        }
    };

    match ctx.params.subset_budget {
        SubsetBudget::Random(budget) => {
            let sample_len = ((2.0 / ctx.params.alpha) * m as f64).ceil() as usize;
            let sample = uniform_multiset(view, sample_len, &mut rng)?;
            for j in 0..budget {
                // m distinct positions of the sampled multiset
                let mut positions: Vec<usize> = (0..sample.len()).collect();
                for target in 0..m.min(sample.len()) {
                    let swap = rng.gen_range(target..positions.len());
                    positions.swap(target, swap);
                }
                let subset: Vec<&S::Elem> = positions[..m.min(sample.len())]
                    .iter()
                    .map(|&p| &ctx.elements[sample[p]])
                    .collect();
                let generated =
                    ctx.source
                        .candidates(ctx.space, &subset, &phase_stream.child(j as u64 + 1), &mut counter)?;
                push_candidates(generated, &mut candidates, &mut seen_keys);
            }
        }
        SubsetBudget::Exhaustive => {
            if view.len() > 16 {
                return Err(Error::ResourceLimit(format!(
                    "exhaustive subset enumeration over {} elements",
                    view.len()
                )));
            }
            // All nonempty support subsets of the view up to size m. The
            // candidate union only depends on distinct subsets, so the
            // index-multiset enumeration collapses to this.
            let total = 1u32 << view.len();
            for mask in 1..total {
                if (mask.count_ones() as usize) > m {
                    continue;
                }
                let subset: Vec<&S::Elem> = view
                    .iter()
                    .enumerate()
                    .filter(|(pos, _)| mask & (1 << pos) != 0)
                    .map(|(_, &i)| &ctx.elements[i])
                    .collect();
                let generated = ctx.source.candidates(
                    ctx.space,
                    &subset,
                    &phase_stream.child(mask as u64),
                    &mut counter,
                )?;
                push_candidates(generated, &mut candidates, &mut seen_keys);
            }
        }
    }
    trace_note(&mut trace, depth, Phase::Sampling, candidates.len() as u64);

    for (order, cand) in candidates.into_iter().enumerate() {
        branches.push((Branch::Candidate { _order: order, view }, Some(cand)));
    }

    // Recurse on every branch; branch order fixes tie-breaking, independent
    // of the parallel schedule.
    let outcomes: Vec<Result<Outcome<S::Elem>>> = branches
        .into_par_iter()
        .enumerate()
        .map(|(branch_idx, (branch, cand))| match branch {
            Branch::Prune { retained } => cluster_rec(
                ctx,
                &retained,
                k_rem,
                c_bar,
                dist,
                stream.child(1_000_000),
                depth + 1,
            ),
            Branch::Candidate { _order, view } => {
                let cand = cand.expect("candidate branch carries its center");
                let mut local = OperationCounter::default();
                let mut new_dist = dist.to_vec();
                extend_distances(ctx.space, ctx.elements, &mut new_dist, &cand, &mut local)?;
                let mut new_c_bar = c_bar.to_vec();
                new_c_bar.push(cand);
                let mut out = cluster_rec(
                    ctx,
                    view,
                    k_rem - 1,
                    &new_c_bar,
                    &new_dist,
                    stream.child(branch_idx as u64 + 1),
                    depth + 1,
                )?;
                out.counter.merge(&local);
                Ok(out)
            }
        })
        .collect();

    let mut best: Option<Outcome<S::Elem>> = None;
    for outcome in outcomes {
        let outcome = outcome?;
        counter.merge(&outcome.counter);
        merge_trace(&mut trace, &outcome.trace);
        best = match best {
            None => Some(outcome),
            Some(current) => {
                if outcome.cost < current.cost {
                    Some(outcome)
                } else {
                    Some(current)
                }
            }
        };
    }
    let best = best.expect("at least one branch exists when k_rem > 0 and view is nonempty");
    Ok(Outcome {
        centers: best.centers,
        cost: best.cost,
        counter,
        trace,
    })
}

fn extend_distances<S: CenterSpace>(
    space: &S,
    elements: &[S::Elem],
    dist: &mut [f64],
    center: &S::Elem,
    counter: &mut OperationCounter,
) -> Result<()> {
    for (i, e) in elements.iter().enumerate() {
        let d = space.distance(e, center)?;
        counter.distance_evals += 1;
        if d < dist[i] {
            dist[i] = d;
        }
    }
    Ok(())
}

/// One invocation of the recursive clustering algorithm, starting from the
/// given center set. Returns the chosen centers.
pub fn cluster<S: CenterSpace>(
    space: &S,
    elements: &[S::Elem],
    k_remaining: usize,
    c_bar: &[S::Elem],
    params: &ClusterParams,
    stream: RngStream,
) -> Result<Vec<S::Elem>> {
    params.validate()?;
    if elements.is_empty() {
        return Err(Error::EmptyInput("elements"));
    }
    if k_remaining > params.k {
        return Err(Error::param("k_remaining", "exceeds params.k"));
    }
    let source = build_source(space, params)?;
    let mut counter = OperationCounter::default();
    let mut dist = vec![f64::INFINITY; elements.len()];
    for c in c_bar {
        extend_distances(space, elements, &mut dist, c, &mut counter)?;
    }
    let view: Vec<usize> = (0..elements.len()).collect();
    let outcome = dispatch(space, elements, params, &source, &view, k_remaining, c_bar, &dist, stream)?;
    Ok(outcome.centers)
}

enum Source<E> {
    Weak(WeakParamSource),
    Strong(StrongSource<E>),
}

impl<S: CenterSpace> CandidateSource<S> for Source<S::Elem> {
    fn candidates(
        &self,
        space: &S,
        view: &[&S::Elem],
        stream: &RngStream,
        counter: &mut OperationCounter,
    ) -> Result<Vec<S::Elem>> {
        match self {
            Source::Weak(w) => CandidateSource::<S>::candidates(w, space, view, stream, counter),
            Source::Strong(s) => s.candidates(space, view, stream, counter),
        }
    }
}

fn build_source<S: CenterSpace>(space: &S, params: &ClusterParams) -> Result<Source<S::Elem>> {
    match params.mode {
        Mode::Weak => Ok(Source::Weak(WeakParamSource {
            sampling: params.sampling.clone(),
        })),
        Mode::Strong => {
            let centers = space.explicit_centers().ok_or_else(|| {
                Error::param("mode", "strong mode requires a finite center space")
            })?;
            Ok(Source::Strong(StrongSource {
                centers: centers.to_vec(),
            }))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn dispatch<S: CenterSpace, F: CandidateSource<S>>(
    space: &S,
    elements: &[S::Elem],
    params: &ClusterParams,
    source: &F,
    view: &[usize],
    k_rem: usize,
    c_bar: &[S::Elem],
    dist: &[f64],
    stream: RngStream,
) -> Result<Outcome<S::Elem>> {
    let ctx = Ctx {
        space,
        elements,
        params,
        source,
    };
    cluster_rec(&ctx, view, k_rem, c_bar, dist, stream, 0)
}

/// Full run: `repetitions` independent invocations with derived seeds, the
/// minimum-cost center set, top-up to k centers when the input allows it,
/// and the final assignment.
pub fn run<S: CenterSpace>(
    space: &S,
    elements: &[S::Elem],
    params: &ClusterParams,
) -> Result<ClusteringResult<S::Elem>> {
    let source = build_source(space, params)?;
    run_with_source(space, elements, params, &source)
}

/// `run` with an explicit candidate source; the seam used by tests to inject
/// scripted candidates.
pub fn run_with_source<S: CenterSpace, F: CandidateSource<S>>(
    space: &S,
    elements: &[S::Elem],
    params: &ClusterParams,
    source: &F,
) -> Result<ClusteringResult<S::Elem>> {
    params.validate()?;
    if elements.is_empty() {
        return Err(Error::EmptyInput("elements"));
    }
    let started = Instant::now();
    let root = RngStream::from_seed(params.seed);
    let mut counter = OperationCounter::default();
    let mut trace = TraceMap::new();
    let mut best: Option<(Outcome<S::Elem>, usize)> = None;
    let view: Vec<usize> = (0..elements.len()).collect();
    let dist = vec![f64::INFINITY; elements.len()];
    for rep in 0..params.repetitions {
        let outcome = dispatch(
            space,
            elements,
            params,
            source,
            &view,
            params.k,
            &[],
            &dist,
            root.child(rep as u64),
        )?;
        counter.merge(&outcome.counter);
        merge_trace(&mut trace, &outcome.trace);
        best = match best {
            None => Some((outcome, rep)),
            Some((current, cur_rep)) => {
                if outcome.cost < current.cost {
                    Some((outcome, rep))
                } else {
                    Some((current, cur_rep))
                }
            }
        };
    }
    let (mut winner, best_repetition) = best.expect("repetitions >= 1");

    // Rebuild the distance vector for the winning set, then top up to k
    // centers when there are enough elements.
    let mut dist = vec![f64::INFINITY; elements.len()];
    for c in &winner.centers {
        let mut ignore = OperationCounter::default();
        extend_distances(space, elements, &mut dist, c, &mut ignore)?;
    }
    if elements.len() >= params.k {
        let mut keys: Vec<Vec<u64>> = winner.centers.iter().map(|c| space.candidate_key(c)).collect();
        while winner.centers.len() < params.k {
            let mut order: Vec<usize> = (0..elements.len()).collect();
            order.sort_by(|&a, &b| dist[b].total_cmp(&dist[a]).then(a.cmp(&b)));
            let mut added = false;
            for &i in &order {
                let candidate = space.project(&elements[i])?;
                counter.projection_evals += 1;
                let key = space.candidate_key(&candidate);
                if !keys.contains(&key) {
                    extend_distances(space, elements, &mut dist, &candidate, &mut counter)?;
                    keys.push(key);
                    winner.centers.push(candidate);
                    added = true;
                    break;
                }
            }
            if !added {
                // all projections already present; duplicate the last center
                let dup = winner.centers.last().expect("nonempty centers").clone();
                winner.centers.push(dup);
            }
        }
        winner.cost = dist.iter().sum();
    }

    // Final assignment and the independent cost recomputation.
    let mut assignment = Vec::with_capacity(elements.len());
    let mut total_cost = 0.0;
    for (i, e) in elements.iter().enumerate() {
        let mut best_center = 0usize;
        let mut best_d = f64::INFINITY;
        for (j, c) in winner.centers.iter().enumerate() {
            let d = space.distance(e, c)?;
            counter.distance_evals += 1;
            if d < best_d {
                best_d = d;
                best_center = j;
            }
        }
        total_cost += best_d;
        assignment.push(Assignment {
            element: i,
            center: best_center,
            distance: best_d,
        });
    }
    let scale = winner.cost.abs().max(total_cost.abs()).max(1.0);
    if (total_cost - winner.cost).abs() > 1e-6 * scale {
        return Err(Error::CostMismatch {
            running: winner.cost,
            recomputed: total_cost,
        });
    }

    counter.wall = started.elapsed();
    let trace_rows = trace
        .into_iter()
        .map(|((depth, phase), (calls, candidates_tried))| TraceRow {
            depth,
            phase,
            calls,
            candidates_tried,
        })
        .collect();
    Ok(ClusteringResult {
        centers: winner.centers,
        assignment,
        total_cost,
        counters: counter,
        trace: trace_rows,
        best_repetition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::center_space::{FiniteSpace, TrajectorySpace};
    use crate::geometry::Point;
    use crate::metrics::Trajectory;

    fn pt(coords: &[f64]) -> Point {
        Point::new(coords.to_vec()).unwrap()
    }

    fn traj(id: &str, points: &[&[f64]]) -> Trajectory {
        Trajectory::new(id, points.iter().map(|p| pt(p)).collect()).unwrap()
    }

    fn quick_params(k: usize) -> ClusterParams {
        ClusterParams::new(
            k,
            SamplingParams::new(0.4, 0.95)
                .with_cover_sample_size(64)
                .with_max_candidates(6),
        )
        .with_repetitions(1)
        .with_subset_budget(SubsetBudget::Random(2))
    }

    #[test]
    fn params_validation() {
        let p = quick_params(2);
        assert!(p.validate().is_ok());
        assert!(quick_params(2).with_alpha(0.2).validate().is_err());
        assert!(quick_params(2).with_repetitions(0).validate().is_err());
        let mut bad = quick_params(2);
        bad.k = 0;
        assert!(bad.validate().is_err());
        let mut loose = quick_params(2);
        loose.sampling.epsilon = 0.6;
        assert!(loose.validate().is_err(), "epsilon outside weak range");
        loose.sampling.allow_loose = true;
        assert!(loose.validate().is_ok());
    }

    #[test]
    fn every_element_its_own_center_when_k_geq_n() {
        let space = TrajectorySpace::new(2).unwrap();
        let elements = vec![
            traj("a", &[&[0.0, 0.0]]),
            traj("b", &[&[5.0, 0.0]]),
            traj("c", &[&[9.0, 0.0]]),
        ];
        let result = run(&space, &elements, &quick_params(3)).unwrap();
        assert_eq!(result.centers.len(), 3);
        assert_eq!(result.total_cost, 0.0);
        for a in &result.assignment {
            assert_eq!(a.distance, 0.0);
        }
    }

    #[test]
    fn identical_elements_collapse_to_projection() {
        let space = TrajectorySpace::new(1).unwrap();
        // 2-vertex trajectory projected into 1 vertex at cost 0.5 per element
        let x = traj("x", &[&[0.0, 0.0], &[1.0, 0.0]]);
        let elements = vec![x.clone(), x.clone(), x.clone(), x.clone()];
        let result = run(&space, &elements, &quick_params(1)).unwrap();
        assert_eq!(result.centers.len(), 1);
        assert_eq!(result.centers[0].len(), 1);
        assert!((result.total_cost - 4.0 * 0.5).abs() < 1e-9);
    }

    #[test]
    fn two_planted_clusters_recovered() {
        let space = TrajectorySpace::new(2).unwrap();
        let stream = RngStream::from_seed(12);
        let mut rng = stream.rng();
        let mut elements = Vec::new();
        for i in 0..15 {
            elements.push(traj(
                &format!("a{i}"),
                &[
                    &[rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1)],
                    &[1.0 + rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1)],
                ],
            ));
        }
        for i in 0..15 {
            elements.push(traj(
                &format!("b{i}"),
                &[
                    &[100.0 + rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1)],
                    &[101.0 + rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1)],
                ],
            ));
        }
        let params = quick_params(2).with_seed(3);
        let result = run(&space, &elements, &params).unwrap();
        assert_eq!(result.centers.len(), 2);
        // both clusters must be represented: every assignment distance far
        // below the 100-unit separation
        for a in &result.assignment {
            assert!(a.distance < 5.0, "assignment distance {}", a.distance);
        }
    }

    #[test]
    fn repetitions_never_increase_cost() {
        let space = TrajectorySpace::new(2).unwrap();
        let stream = RngStream::from_seed(5);
        let mut rng = stream.rng();
        let elements: Vec<Trajectory> = (0..12)
            .map(|i| {
                traj(
                    &format!("e{i}"),
                    &[
                        &[rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
                        &[rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
                    ],
                )
            })
            .collect();
        let c1 = run(&space, &elements, &quick_params(2).with_seed(9).with_repetitions(1))
            .unwrap()
            .total_cost;
        let c3 = run(&space, &elements, &quick_params(2).with_seed(9).with_repetitions(3))
            .unwrap()
            .total_cost;
        let c6 = run(&space, &elements, &quick_params(2).with_seed(9).with_repetitions(6))
            .unwrap()
            .total_cost;
        assert!(c3 <= c1 + 1e-12);
        assert!(c6 <= c3 + 1e-12);
    }

    #[test]
    fn pruning_removes_the_closest_half() {
        let dist = vec![5.0, 1.0, 3.0, 1.0, 9.0, 0.5];
        let view: Vec<usize> = (0..6).collect();
        let (removed, retained) = prune_view(&view, &dist);
        // closest half: 0.5 (idx 5), then the 1.0 tie broken by index (1, 3)
        assert_eq!(removed, vec![1, 3, 5]);
        assert_eq!(retained, vec![0, 2, 4]);
        let worst_removed = removed.iter().map(|&i| dist[i]).fold(0.0f64, f64::max);
        let best_retained = retained.iter().map(|&i| dist[i]).fold(f64::MAX, f64::min);
        assert!(worst_removed <= best_retained);
    }

    #[test]
    fn recursion_depth_stays_within_bound() {
        let space = TrajectorySpace::new(1).unwrap();
        let stream = RngStream::from_seed(31);
        let mut rng = stream.rng();
        let elements: Vec<Trajectory> = (0..20)
            .map(|i| traj(&format!("e{i}"), &[&[rng.gen_range(-1.0..1.0), 0.0]]))
            .collect();
        let params = quick_params(2).with_seed(1);
        let result = run(&space, &elements, &params).unwrap();
        let max_depth = result.trace.iter().map(|r| r.depth).max().unwrap();
        let bound = params.k + (elements.len() as f64).log2().ceil() as usize + 1;
        assert!(
            max_depth <= bound,
            "depth {max_depth} exceeds k + ceil(log2 n) + 1 = {bound}"
        );
    }

    /// Scripted candidate source: returns a fixed candidate list regardless
    /// of the sampled subset.
    struct Scripted {
        list: Vec<Trajectory>,
    }

    impl CandidateSource<TrajectorySpace> for Scripted {
        fn candidates(
            &self,
            _space: &TrajectorySpace,
            _view: &[&Trajectory],
            _stream: &RngStream,
            _counter: &mut OperationCounter,
        ) -> Result<Vec<Trajectory>> {
            Ok(self.list.clone())
        }
    }

    #[test]
    fn enlarging_the_candidate_set_never_increases_cost() {
        let space = TrajectorySpace::new(1).unwrap();
        let elements = vec![
            traj("a", &[&[0.0, 0.0]]),
            traj("b", &[&[1.0, 0.0]]),
            traj("c", &[&[10.0, 0.0]]),
            traj("d", &[&[11.0, 0.0]]),
        ];
        let a_only = Scripted {
            list: vec![traj("ca", &[&[0.4, 0.0]])],
        };
        let a_and_b = Scripted {
            list: vec![traj("ca", &[&[0.4, 0.0]]), traj("cb", &[&[10.5, 0.0]])],
        };
        let params = quick_params(2).with_seed(4);
        let cost_a = run_with_source(&space, &elements, &params, &a_only)
            .unwrap()
            .total_cost;
        let cost_ab = run_with_source(&space, &elements, &params, &a_and_b)
            .unwrap()
            .total_cost;
        assert!(cost_ab <= cost_a + 1e-12, "{cost_ab} vs {cost_a}");
    }

    #[test]
    fn strong_mode_requires_finite_space() {
        let space = TrajectorySpace::new(1).unwrap();
        let elements = vec![traj("a", &[&[0.0, 0.0]])];
        let params = quick_params(1).with_mode(Mode::Strong);
        assert!(run(&space, &elements, &params).is_err());
    }

    #[test]
    fn strong_mode_exhaustive_matches_exhaustive_k_subset_search() {
        let stream = RngStream::from_seed(77);
        let mut rng = stream.rng();
        for trial in 0..20 {
            let base = TrajectorySpace::new(1).unwrap();
            let centers: Vec<Trajectory> = (0..6)
                .map(|i| traj(&format!("c{i}"), &[&[rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)]]))
                .collect();
            let space = FiniteSpace::new(base, centers.clone()).unwrap();
            let n = rng.gen_range(3..=7);
            let elements: Vec<Trajectory> = (0..n)
                .map(|i| traj(&format!("e{i}"), &[&[rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)]]))
                .collect();
            let k = 2;
            let mut params = ClusterParams::new(
                k,
                SamplingParams::new(0.4, 0.95).with_sample_size_override(Some(n)),
            )
            .with_mode(Mode::Strong)
            .with_subset_budget(SubsetBudget::Exhaustive)
            .with_repetitions(1)
            .with_seed(trial);
            params.alpha = 0.4 / (8.0 * (k * k) as f64);
            let result = run(&space, &elements, &params).unwrap();

            // oracle: every k-subset of the explicit centers
            let mut best = f64::INFINITY;
            for i in 0..centers.len() {
                for j in (i + 1)..centers.len() {
                    let cost =
                        evaluate_cost(&space, &elements, &[centers[i].clone(), centers[j].clone()])
                            .unwrap();
                    best = best.min(cost);
                }
            }
            assert_eq!(
                result.total_cost, best,
                "trial {trial}: engine {} vs exhaustive optimum {best}",
                result.total_cost
            );
        }
    }

    #[test]
    fn counters_are_populated() {
        let space = TrajectorySpace::new(1).unwrap();
        let elements = vec![traj("a", &[&[0.0, 0.0], &[1.0, 0.0]]), traj("b", &[&[4.0, 0.0]])];
        let result = run(&space, &elements, &quick_params(1)).unwrap();
        assert!(result.counters.distance_evals > 0);
        assert!(result.counters.projection_evals > 0);
    }
}
