//! Randomized subroutines: uniform multiset sampling, the cover-based
//! candidate set around an anchor projection, and the weak-sampling candidate
//! generator used by the clustering engine.

use crate::center_space::{CenterSpace, CoverEnumeration, CoverRequest};
use crate::error::{Error, Result};
use crate::rng::RngStream;
use rand::Rng;
use std::time::Duration;

/// Parameters of the weak-sampling construction, with the derived constants.
///
/// Valid ranges: `epsilon` in (0, 4/9) and `delta` in (1 - 5 epsilon / 18, 1),
/// which force `delta1 > 0`. The loose flag lifts the range checks for
/// desk-scale experiments.
#[derive(Clone, Debug)]
pub struct SamplingParams {
    pub epsilon: f64,
    pub delta: f64,
    /// Cap on the requested cover ratio r / r'. `None` is the paper-faithful
    /// mode, feasible only for tiny instances; the capped mode keeps the
    /// construction's shape but derives desk-scale radii from the sampled
    /// cost estimate.
    pub cover_ratio_cap: Option<f64>,
    /// Number of cover elements consumed per anchor. Larger covers are
    /// subsampled (seeded, index-based) down to this many elements.
    pub cover_sample_size: usize,
    /// Cap on the number of candidates a single generator call returns
    /// (including the anchor). Capped mode keeps the anchor plus the
    /// lowest sample-cost cover candidates.
    pub max_candidates: usize,
    /// Sample-size override for strong-sampling mode, where the constant is
    /// not fixed by the construction.
    pub sample_size_override: Option<usize>,
    /// Permit epsilon/delta outside the weak-sampling ranges.
    pub allow_loose: bool,
}

impl SamplingParams {
    pub fn new(epsilon: f64, delta: f64) -> Self {
        SamplingParams {
            epsilon,
            delta,
            cover_ratio_cap: Some(64.0),
            cover_sample_size: 2048,
            max_candidates: 16,
            sample_size_override: None,
            allow_loose: false,
        }
    }

    pub fn with_cover_ratio_cap(mut self, cap: Option<f64>) -> Self {
        self.cover_ratio_cap = cap;
        self
    }

    pub fn with_cover_sample_size(mut self, n: usize) -> Self {
        self.cover_sample_size = n;
        self
    }

    pub fn with_max_candidates(mut self, n: usize) -> Self {
        self.max_candidates = n;
        self
    }

    pub fn with_sample_size_override(mut self, m: Option<usize>) -> Self {
        self.sample_size_override = m;
        self
    }

    pub fn with_loose(mut self, loose: bool) -> Self {
        self.allow_loose = loose;
        self
    }

    /// Checks the weak-sampling ranges (unless loose mode is on).
    pub fn validate_weak(&self) -> Result<()> {
        if !self.epsilon.is_finite() || self.epsilon <= 0.0 {
            return Err(Error::param("epsilon", "must be positive"));
        }
        if !self.delta.is_finite() || self.delta <= 0.0 || self.delta >= 1.0 {
            return Err(Error::param("delta", "must lie in (0, 1)"));
        }
        if self.allow_loose {
            return Ok(());
        }
        if self.epsilon >= 4.0 / 9.0 {
            return Err(Error::param(
                "epsilon",
                format!("must lie in (0, 4/9) for weak sampling, got {}", self.epsilon),
            ));
        }
        let lower = 1.0 - 5.0 * self.epsilon / 18.0;
        if self.delta <= lower {
            return Err(Error::param(
                "delta",
                format!(
                    "must lie in (1 - 5*epsilon/18, 1) = ({lower}, 1) for weak sampling, got {}",
                    self.delta
                ),
            ));
        }
        Ok(())
    }

    pub fn epsilon1(&self) -> f64 {
        self.epsilon / 4.0
    }

    pub fn delta1(&self) -> f64 {
        self.epsilon / 2.0 - (9.0 / 5.0) * (1.0 - self.delta)
    }

    /// Sample size m = 1 + ceil(4 / epsilon), or the strong-mode override.
    pub fn sample_size(&self) -> usize {
        if let Some(m) = self.sample_size_override {
            return m.max(1);
        }
        1 + (4.0 / self.epsilon).ceil() as usize
    }

    /// The cover ratio the construction requests before any cap:
    /// `(2b / delta1) / (epsilon a / 2)` with `a = (eps1^3 / 2) W` and
    /// `b = W / eps1`, which simplifies to `2048 / (delta1 epsilon^5)`.
    pub fn theoretical_cover_ratio(&self) -> f64 {
        // computed through the same a, b expressions the generator uses, so a
        // regression in either shows up as a ratio mismatch
        let w = 1.0;
        let a = self.anchor_lower_bound(w, 1);
        let b = self.anchor_upper_bound(w, 1);
        (2.0 * b / self.delta1()) / (self.epsilon * a / 2.0)
    }

    /// Lower estimate `a` fed to the anchor candidate construction, in
    /// per-point units: `(eps1^3 / 2) * W / |Q|`.
    pub fn anchor_lower_bound(&self, sample_cost: f64, sample_len: usize) -> f64 {
        let e1 = self.epsilon1();
        (e1 * e1 * e1 / 2.0) * sample_cost / sample_len as f64
    }

    /// Upper estimate `b`: `(1 / eps1) * W / |Q|`.
    pub fn anchor_upper_bound(&self, sample_cost: f64, sample_len: usize) -> f64 {
        sample_cost / (self.epsilon1() * sample_len as f64)
    }
}

/// Counts of the abstract operations the running-time model charges for:
/// distance evaluations between elements and centers, and nearest-center
/// projections.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OperationCounter {
    pub distance_evals: u64,
    pub projection_evals: u64,
    pub wall: Duration,
}

impl OperationCounter {
    pub fn merge(&mut self, other: &OperationCounter) {
        self.distance_evals += other.distance_evals;
        self.projection_evals += other.projection_evals;
        self.wall += other.wall;
    }
}

/// Uniform sample multiset (with replacement), reproducible given the rng.
pub fn uniform_multiset<T: Clone>(
    population: &[T],
    size: usize,
    rng: &mut impl Rng,
) -> Result<Vec<T>> {
    if population.is_empty() {
        return Err(Error::EmptyInput("sampling population"));
    }
    Ok((0..size)
        .map(|_| population[rng.gen_range(0..population.len())].clone())
        .collect())
}

/// Outcome of one anchor-candidate construction, with the radii actually
/// requested so runs can report whether the cap engaged.
#[derive(Clone, Debug)]
pub struct AnchorCandidates<E> {
    pub candidates: Vec<E>,
    pub requested_ratio: f64,
    pub effective_ratio: f64,
    pub cover_count: u128,
    pub consumed: usize,
}

/// Candidate centers around an anchor projection `q'`, given estimates
/// `a <= mean cost <= b`.
///
/// Builds an `(epsilon a / 2)`-cover of `ball(q', 2b / delta1) ∩ C`, projects
/// every consumed cover element into `C`, and returns the anchor plus the
/// projections. With a cover-ratio cap in effect, the ball radius is derived
/// from the sampled mean cost (`2 * eps1 * b`) and the resolution from the
/// capped ratio, preserving the construction's shape at desk scale.
pub fn candidate_set_from_anchor<S: CenterSpace>(
    space: &S,
    anchor: &S::Elem,
    a: f64,
    b: f64,
    params: &SamplingParams,
    sample: &[&S::Elem],
    stream: &RngStream,
    counter: &mut OperationCounter,
) -> Result<AnchorCandidates<S::Elem>> {
    if !(a > 0.0) || !(b >= a) {
        return Err(Error::param("a", format!("need 0 < a <= b, got a = {a}, b = {b}")));
    }
    let delta1 = params.delta1();
    if delta1 <= 0.0 && !params.allow_loose {
        return Err(Error::param("delta", "delta1 must be positive; adjust epsilon/delta"));
    }
    let requested_ratio = (2.0 * b / delta1) / (params.epsilon * a / 2.0);

    let (r, r_prime, effective_ratio) = match params.cover_ratio_cap {
        Some(cap) if requested_ratio > cap => {
            // desk-scale ball: twice the sampled mean cost (b = mean / eps1)
            let r = 2.0 * params.epsilon1() * b;
            (r, r / cap, cap)
        }
        _ => (
            2.0 * b / delta1,
            params.epsilon * a / 2.0,
            requested_ratio,
        ),
    };

    let mut candidates = vec![anchor.clone()];
    if !(r_prime > 0.0) || r_prime >= r {
        // degenerate: the singleton cover {anchor} suffices
        return Ok(AnchorCandidates {
            candidates,
            requested_ratio,
            effective_ratio,
            cover_count: 1,
            consumed: 1,
        });
    }

    let req = CoverRequest::new(anchor.clone(), r, r_prime)?;
    let cover = space.cover(&req)?;
    let total = cover.count();
    let budget = params.cover_sample_size.max(1) as u128;

    let mut scored: Vec<(f64, usize, S::Elem)> = Vec::new();
    let mut consumed = 0usize;
    let mut rng = stream.child(0xc0fe).rng();
    let consume = |idx: u128,
                       order: usize,
                       scored: &mut Vec<(f64, usize, S::Elem)>,
                       counter: &mut OperationCounter|
     -> Result<()> {
        let element = cover.get(idx);
        let projected = space.project(&element)?;
        counter.projection_evals += 1;
        let mut cost = 0.0;
        for s in sample {
            cost += space.distance(s, &projected)?;
            counter.distance_evals += 1;
        }
        scored.push((cost, order, projected));
        Ok(())
    };
    if total <= budget {
        for idx in 0..total {
            consume(idx, consumed, &mut scored, counter)?;
            consumed += 1;
        }
    } else {
        // seeded index subsample of the full enumeration
        for _ in 0..budget {
            let idx = sample_u128(&mut rng, total);
            consume(idx, consumed, &mut scored, counter)?;
            consumed += 1;
        }
    }

    // keep the anchor plus the best-scoring projections
    scored.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    let keep = params.max_candidates.saturating_sub(1);
    let mut seen: Vec<Vec<u64>> = vec![space.candidate_key(anchor)];
    for (_, _, cand) in scored {
        if candidates.len() > keep {
            break;
        }
        let key = space.candidate_key(&cand);
        if !seen.contains(&key) {
            seen.push(key);
            candidates.push(cand);
        }
    }
    Ok(AnchorCandidates {
        candidates,
        requested_ratio,
        effective_ratio,
        cover_count: total,
        consumed,
    })
}

fn sample_u128(rng: &mut impl Rng, bound: u128) -> u128 {
    debug_assert!(bound > 0);
    if bound <= u64::MAX as u128 {
        rng.gen_range(0..bound as u64) as u128
    } else {
        // rejection sampling over the full width
        loop {
            let hi = rng.gen::<u64>() as u128;
            let lo = rng.gen::<u64>() as u128;
            let v = (hi << 64) | lo;
            if v < u128::MAX - u128::MAX % bound {
                return v % bound;
            }
        }
    }
}

/// Report of one weak-sampling candidate generation.
#[derive(Clone, Debug)]
pub struct GammaOutcome<E> {
    pub candidates: Vec<E>,
    /// The ratio `2048 / (delta1 epsilon^5)` the theory requests.
    pub requested_ratio: f64,
    /// The ratio actually used after any cap.
    pub effective_ratio: f64,
    pub cover_count: u128,
    pub zero_spread: bool,
}

/// Weak-sampling candidate generator.
///
/// Samples a multiset `Q` of size `ceil(1/eps1)` plus one extra element `q`
/// from the view, projects `q` to `q'`, sums the sampled distances to `q'`,
/// and turns the cover of the ball around `q'` into candidates. A zero sum
/// means the sampled mass sits on `q'` exactly and the anchor alone is
/// returned.
pub fn gamma_candidates<S: CenterSpace>(
    space: &S,
    view: &[&S::Elem],
    params: &SamplingParams,
    stream: &RngStream,
    counter: &mut OperationCounter,
) -> Result<GammaOutcome<S::Elem>> {
    if view.is_empty() {
        return Err(Error::EmptyInput("candidate generator view"));
    }
    let mut rng = stream.child(0x5a).rng();
    let q_size = (1.0 / params.epsilon1()).ceil() as usize;
    let sample = uniform_multiset(view, q_size, &mut rng)?;
    let q = view[rng.gen_range(0..view.len())];

    let anchor = space.project(q)?;
    counter.projection_evals += 1;

    let mut spread = 0.0;
    for p in &sample {
        spread += space.distance(p, &anchor)?;
        counter.distance_evals += 1;
    }

    let requested_ratio = params.theoretical_cover_ratio();
    if spread == 0.0 {
        return Ok(GammaOutcome {
            candidates: vec![anchor],
            requested_ratio,
            effective_ratio: 1.0,
            cover_count: 1,
            zero_spread: true,
        });
    }

    let a = params.anchor_lower_bound(spread, sample.len());
    let b = params.anchor_upper_bound(spread, sample.len());
    let mut scoring: Vec<&S::Elem> = sample.clone();
    scoring.push(q);
    let anchor_out = candidate_set_from_anchor(
        space,
        &anchor,
        a,
        b,
        params,
        &scoring,
        &stream.child(1),
        counter,
    )?;
    Ok(GammaOutcome {
        candidates: anchor_out.candidates,
        requested_ratio: anchor_out.requested_ratio,
        effective_ratio: anchor_out.effective_ratio,
        cover_count: anchor_out.cover_count,
        zero_spread: false,
    })
}
