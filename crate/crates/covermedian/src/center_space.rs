//! Coverable center spaces.
//!
//! A center space bundles the three capabilities the clustering framework
//! needs from the restricted center set `C`:
//!
//! 1. distance from any element to a center,
//! 2. nearest-center projection `x -> argmin_{y in C} d(x, y)`,
//! 3. an `r'`-cover of `ball(c, r) ∩ C`, emitted lazily because cover
//!    cardinality is exponential in the center complexity.
//!
//! Two geometric spaces are provided (trajectories of at most `l` vertices
//! under the discrete Frechet distance, point sets of at most `l` points
//! under the Hausdorff distance) plus a finite space wrapping an explicit
//! center list.

use crate::error::{Error, Result};
use crate::geometry::{dist, euclidean_ball_cover, min_enclosing_ball, Ball, Point, GEOM_TOL};
use crate::metrics::{
    discrete_frechet, frechet_points, hausdorff, hausdorff_points, PointSet, Trajectory,
};

/// A request for an `r'`-cover of `ball(center, r) ∩ C`.
#[derive(Clone, Debug)]
pub struct CoverRequest<E> {
    pub center: E,
    pub r: f64,
    pub r_prime: f64,
}

impl<E> CoverRequest<E> {
    pub fn new(center: E, r: f64, r_prime: f64) -> Result<Self> {
        if !(r.is_finite() && r_prime.is_finite()) || r_prime <= 0.0 || r_prime >= r {
            return Err(Error::InvalidCoverRadii { r, r_prime });
        }
        Ok(CoverRequest { center, r, r_prime })
    }
}

/// Lazy enumeration of a ball cover. Elements are decoded on demand from a
/// flat index, which lets consumers subsample enormous covers without
/// materializing them.
pub trait CoverEnumeration {
    type Elem;

    fn count(&self) -> u128;

    /// Decodes the element at `index` (must be `< count()`).
    fn get(&self, index: u128) -> Self::Elem;

    fn iter(&self) -> CoverIter<'_, Self>
    where
        Self: Sized,
    {
        CoverIter { cover: self, next: 0 }
    }
}

pub struct CoverIter<'a, C: CoverEnumeration> {
    cover: &'a C,
    next: u128,
}

impl<C: CoverEnumeration> Iterator for CoverIter<'_, C> {
    type Item = C::Elem;

    fn next(&mut self) -> Option<C::Elem> {
        if self.next >= self.cover.count() {
            return None;
        }
        let item = self.cover.get(self.next);
        self.next += 1;
        Some(item)
    }
}

/// The restricted center set `C` with its distance, projection, and covers.
pub trait CenterSpace: Sync {
    type Elem: Clone + Send + Sync;
    type Cover: CoverEnumeration<Elem = Self::Elem> + Send + Sync;

    fn distance(&self, x: &Self::Elem, y: &Self::Elem) -> Result<f64>;

    /// Nearest-center projection of an arbitrary element into `C`.
    fn project(&self, x: &Self::Elem) -> Result<Self::Elem>;

    /// An `r'`-cover of `ball(center, r) ∩ C`. Cover elements need not lie
    /// in `C` themselves.
    fn cover(&self, req: &CoverRequest<Self::Elem>) -> Result<Self::Cover>;

    /// Exact content key used to deduplicate candidate centers.
    fn candidate_key(&self, x: &Self::Elem) -> Vec<u64>;

    /// Maximum center complexity `l`, when the space has one.
    fn complexity_limit(&self) -> Option<usize> {
        None
    }

    /// Explicit center list, when the space is finite.
    fn explicit_centers(&self) -> Option<&[Self::Elem]> {
        None
    }
}

/// A nearest-center projection together with the achieved distance.
#[derive(Clone, Debug)]
pub struct Projection<E> {
    pub center: E,
    pub distance: f64,
}

// ---------------------------------------------------------------------------
// Trajectory simplification (nearest trajectory with at most l vertices)
// ---------------------------------------------------------------------------

/// Nearest trajectory with at most `l` vertices under the discrete Frechet
/// distance.
///
/// Reduction: an optimal correspondence assigns each center vertex a
/// contiguous block of input vertices, so the problem is a minimax partition
/// of the index range into at most `l` contiguous blocks where a block costs
/// the radius of its minimum enclosing ball; the block centers, in order,
/// form the output. Solved exactly by dynamic programming over the interval
/// ball table.
pub fn project_trajectory(t: &Trajectory, l: usize) -> Result<Projection<Trajectory>> {
    if l < 1 {
        return Err(Error::param("l", "center complexity must be at least 1"));
    }
    let m = t.len();
    if m <= l {
        return Ok(Projection {
            center: t.clone(),
            distance: 0.0,
        });
    }
    let pts = t.points();
    // balls[i][j]: enclosing ball of pts[i..=j]
    let mut balls: Vec<Vec<Ball>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(m - i);
        for j in i..m {
            row.push(min_enclosing_ball(&pts[i..=j])?);
        }
        balls.push(row);
    }
    let radius = |i: usize, j: usize| balls[i][j - i].radius;

    // cost[j][i]: minimax radius splitting the first i points into exactly j blocks
    let blocks = l.min(m);
    let inf = f64::INFINITY;
    let mut cost = vec![vec![inf; m + 1]; blocks + 1];
    let mut split = vec![vec![0usize; m + 1]; blocks + 1];
    for i in 1..=m {
        cost[1][i] = radius(0, i - 1);
    }
    for j in 2..=blocks {
        for i in j..=m {
            let mut best = inf;
            let mut best_s = j - 1;
            for s in (j - 1)..i {
                let c = cost[j - 1][s].max(radius(s, i - 1));
                if c < best {
                    best = c;
                    best_s = s;
                }
            }
            cost[j][i] = best;
            split[j][i] = best_s;
        }
    }

    let mut bounds = Vec::with_capacity(blocks);
    let mut i = m;
    for j in (1..=blocks).rev() {
        let s = if j == 1 { 0 } else { split[j][i] };
        bounds.push((s, i - 1));
        i = s;
    }
    bounds.reverse();
    let centers: Vec<Point> = bounds
        .iter()
        .map(|&(a, b)| balls[a][b - a].center.clone())
        .collect();
    let center = Trajectory::new(t.id().to_string(), centers)?;
    Ok(Projection {
        center,
        distance: cost[blocks][m],
    })
}

// ---------------------------------------------------------------------------
// Euclidean l-center (nearest point set with at most l points)
// ---------------------------------------------------------------------------

/// Nearest point set with at most `l` points under the Hausdorff distance.
///
/// Exact: optimal disks can be shrunk to minimum enclosing balls of the
/// points they cover, and such a ball is determined by at most `d + 1`
/// support points, so the balls of all subsets of size at most `d + 1` form
/// a complete candidate set. The minimal feasible radius is found by binary
/// search over candidate radii with an exhaustive cover search.
pub fn project_point_set(s: &PointSet, l: usize) -> Result<Projection<PointSet>> {
    if l < 1 {
        return Err(Error::param("l", "center complexity must be at least 1"));
    }
    let m = s.len();
    if m <= l {
        return Ok(Projection {
            center: s.clone(),
            distance: 0.0,
        });
    }
    let pts = s.points();
    let d = s.dim();
    let max_support = (d + 1).min(m);
    let mut candidates: Vec<Ball> = Vec::new();
    let mut combo: Vec<usize> = Vec::new();
    enumerate_subset_balls(pts, max_support, 0, &mut combo, &mut candidates)?;
    candidates.sort_by(|a, b| a.radius.total_cmp(&b.radius));

    let mut radii: Vec<f64> = candidates.iter().map(|b| b.radius).collect();
    radii.dedup();

    // Smallest candidate radius admitting a cover by at most l candidate
    // balls. The largest is always feasible: it is the radius of the ball of
    // the whole set's support, which covers every point on its own. The
    // optimum is itself a candidate radius and feasibility is monotone, so a
    // binary search is exact.
    let mut lo = 0usize;
    let mut hi = radii.len() - 1;
    let mut best = feasible_cover(pts, &candidates, radii[hi], l)
        .expect("the full-support ball always covers the whole set");
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match feasible_cover(pts, &candidates, radii[mid], l) {
            Some(centers) => {
                best = centers;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    let center = PointSet::new(s.id().to_string(), best)?;
    let distance = hausdorff(s, &center)?;
    Ok(Projection { center, distance })
}

fn enumerate_subset_balls(
    pts: &[Point],
    max_support: usize,
    start: usize,
    combo: &mut Vec<usize>,
    out: &mut Vec<Ball>,
) -> Result<()> {
    if !combo.is_empty() {
        let subset: Vec<Point> = combo.iter().map(|&i| pts[i].clone()).collect();
        out.push(min_enclosing_ball(&subset)?);
        if out.len() > 200_000 {
            return Err(Error::ResourceLimit(
                "l-center candidate enumeration too large".into(),
            ));
        }
    }
    if combo.len() == max_support {
        return Ok(());
    }
    for i in start..pts.len() {
        combo.push(i);
        enumerate_subset_balls(pts, max_support, i + 1, combo, out)?;
        combo.pop();
    }
    Ok(())
}

/// Searches for at most `budget` candidate balls of radius <= r covering all
/// points within distance r. Returns the chosen centers.
fn feasible_cover(pts: &[Point], candidates: &[Ball], r: f64, budget: usize) -> Option<Vec<Point>> {
    let usable: Vec<&Ball> = candidates
        .iter()
        .take_while(|b| b.radius <= r + GEOM_TOL)
        .collect();
    let mut covered = vec![false; pts.len()];
    let mut chosen: Vec<Point> = Vec::new();
    if cover_search(pts, &usable, r, budget, &mut covered, &mut chosen) {
        Some(chosen)
    } else {
        None
    }
}

fn cover_search(
    pts: &[Point],
    usable: &[&Ball],
    r: f64,
    budget: usize,
    covered: &mut [bool],
    chosen: &mut Vec<Point>,
) -> bool {
    let Some(target) = covered.iter().position(|c| !c) else {
        return true;
    };
    if budget == 0 {
        return false;
    }
    for ball in usable {
        if dist(&pts[target], &ball.center) > r + GEOM_TOL {
            continue;
        }
        let newly: Vec<usize> = (0..pts.len())
            .filter(|&i| !covered[i] && dist(&pts[i], &ball.center) <= r + GEOM_TOL)
            .collect();
        for &i in &newly {
            covered[i] = true;
        }
        chosen.push(ball.center.clone());
        if cover_search(pts, usable, r, budget - 1, covered, chosen) {
            return true;
        }
        chosen.pop();
        for &i in &newly {
            covered[i] = false;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Trajectory space
// ---------------------------------------------------------------------------

/// Trajectories with at most `l` vertices under the discrete Frechet
/// distance.
#[derive(Clone, Debug)]
pub struct TrajectorySpace {
    l: usize,
}

impl TrajectorySpace {
    pub fn new(l: usize) -> Result<Self> {
        if l < 1 {
            return Err(Error::param("l", "center complexity must be at least 1"));
        }
        Ok(TrajectorySpace { l })
    }

    pub fn l(&self) -> usize {
        self.l
    }
}

impl CenterSpace for TrajectorySpace {
    type Elem = Trajectory;
    type Cover = TrajectoryBallCover;

    fn distance(&self, x: &Trajectory, y: &Trajectory) -> Result<f64> {
        discrete_frechet(x, y)
    }

    fn project(&self, x: &Trajectory) -> Result<Trajectory> {
        Ok(project_trajectory(x, self.l)?.center)
    }

    fn cover(&self, req: &CoverRequest<Trajectory>) -> Result<TrajectoryBallCover> {
        TrajectoryBallCover::build(&req.center, self.l, req.r, req.r_prime)
    }

    fn candidate_key(&self, x: &Trajectory) -> Vec<u64> {
        let mut key = vec![x.len() as u64];
        for p in x.points() {
            key.extend(p.bit_key());
        }
        key
    }

    fn complexity_limit(&self) -> Option<usize> {
        Some(self.l)
    }
}

/// Cover of `ball(center, r) ∩ T^l` under the discrete Frechet distance.
///
/// Emits every vertex sequence of length at most `2l` whose block indices
/// are non-decreasing, start at the first center vertex, end at the last,
/// and visit every block, with each vertex drawn from the Euclidean grid
/// cover of the ball of radius `r` around its block's center vertex. Every
/// trajectory with at most `l` vertices within Frechet distance `r` of the
/// center has an emitted element within `r'` of it.
pub struct TrajectoryBallCover {
    grids: Vec<Vec<Point>>,
    seqs: Vec<BlockSeq>,
    total: u128,
    id_prefix: String,
}

struct BlockSeq {
    blocks: Vec<usize>,
    offset: u128,
    size: u128,
}

impl TrajectoryBallCover {
    fn build(center: &Trajectory, l: usize, r: f64, r_prime: f64) -> Result<Self> {
        if center.len() > l {
            return Err(Error::param(
                "cover center",
                format!("center has {} vertices, exceeding l = {l}", center.len()),
            ));
        }
        let grids: Vec<Vec<Point>> = center
            .points()
            .iter()
            .map(|p| euclidean_ball_cover(p, r, r_prime))
            .collect::<Result<_>>()?;
        let l_prime = grids.len();
        let mut seqs = Vec::new();
        let mut total: u128 = 0;
        let mut mults = vec![1usize; l_prime];
        loop {
            let len: usize = mults.iter().sum();
            if len <= 2 * l {
                let size: u128 = mults
                    .iter()
                    .enumerate()
                    .try_fold(1u128, |acc, (i, &c)| {
                        acc.checked_mul((grids[i].len() as u128).checked_pow(c as u32)?)
                    })
                    .ok_or_else(|| Error::ResourceLimit("trajectory cover count overflow".into()))?;
                seqs.push(BlockSeq {
                    blocks: expand_blocks(&mults),
                    offset: total,
                    size,
                });
                total = total
                    .checked_add(size)
                    .ok_or_else(|| Error::ResourceLimit("trajectory cover count overflow".into()))?;
            }
            if !next_multiplicity(&mut mults, 2 * l) {
                break;
            }
        }
        // order block sequences by (length, multiplicities) for a stable stream
        seqs.sort_by(|a, b| {
            (a.blocks.len(), &a.blocks).cmp(&(b.blocks.len(), &b.blocks))
        });
        let mut offset = 0u128;
        for seq in &mut seqs {
            seq.offset = offset;
            offset += seq.size;
        }
        Ok(TrajectoryBallCover {
            grids,
            seqs,
            total,
            id_prefix: center.id().to_string(),
        })
    }

    /// Largest per-vertex grid; used by the advertised size bound.
    pub fn max_grid_len(&self) -> usize {
        self.grids.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// The per-vertex Euclidean grids the enumeration draws from.
    pub fn grids(&self) -> &[Vec<Point>] {
        &self.grids
    }

    /// Flat index of the sequence with the given block indices and per-slot
    /// grid picks, or `None` when no such block sequence is enumerated.
    pub fn index_of(&self, blocks: &[usize], picks: &[usize]) -> Option<u128> {
        if blocks.len() != picks.len() {
            return None;
        }
        let seq = self.seqs.iter().find(|s| s.blocks == blocks)?;
        let mut idx = 0u128;
        for (slot, &block) in blocks.iter().enumerate() {
            let g = self.grids[block].len() as u128;
            if picks[slot] >= self.grids[block].len() {
                return None;
            }
            idx = idx * g + picks[slot] as u128;
        }
        Some(seq.offset + idx)
    }
}

fn expand_blocks(mults: &[usize]) -> Vec<usize> {
    let mut blocks = Vec::with_capacity(mults.iter().sum());
    for (i, &c) in mults.iter().enumerate() {
        blocks.extend(std::iter::repeat(i).take(c));
    }
    blocks
}

/// Advances a multiplicity vector (each entry >= 1, sum <= cap) in odometer
/// order; returns false when exhausted.
fn next_multiplicity(mults: &mut [usize], cap: usize) -> bool {
    for i in 0..mults.len() {
        mults[i] += 1;
        if mults.iter().sum::<usize>() <= cap {
            return true;
        }
        mults[i] = 1;
    }
    false
}

impl CoverEnumeration for TrajectoryBallCover {
    type Elem = Trajectory;

    fn count(&self) -> u128 {
        self.total
    }

    fn get(&self, index: u128) -> Trajectory {
        debug_assert!(index < self.total);
        let seq_idx = match self
            .seqs
            .binary_search_by(|s| s.offset.cmp(&index))
        {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let seq = &self.seqs[seq_idx];
        let mut rem = index - seq.offset;
        debug_assert!(rem < seq.size);
        let mut picks = vec![0usize; seq.blocks.len()];
        for (slot, &block) in seq.blocks.iter().enumerate().rev() {
            let g = self.grids[block].len() as u128;
            picks[slot] = (rem % g) as usize;
            rem /= g;
        }
        let points: Vec<Point> = seq
            .blocks
            .iter()
            .zip(&picks)
            .map(|(&block, &pick)| self.grids[block][pick].clone())
            .collect();
        Trajectory::new(format!("{}#cov{}", self.id_prefix, index), points)
            .expect("cover element points are valid by construction")
    }
}

// ---------------------------------------------------------------------------
// Point-set space
// ---------------------------------------------------------------------------

/// Point sets with at most `l` points under the Hausdorff distance.
#[derive(Clone, Debug)]
pub struct PointSetSpace {
    l: usize,
}

impl PointSetSpace {
    pub fn new(l: usize) -> Result<Self> {
        if l < 1 {
            return Err(Error::param("l", "center complexity must be at least 1"));
        }
        Ok(PointSetSpace { l })
    }

    pub fn l(&self) -> usize {
        self.l
    }
}

impl CenterSpace for PointSetSpace {
    type Elem = PointSet;
    type Cover = PointSetBallCover;

    fn distance(&self, x: &PointSet, y: &PointSet) -> Result<f64> {
        hausdorff(x, y)
    }

    fn project(&self, x: &PointSet) -> Result<PointSet> {
        Ok(project_point_set(x, self.l)?.center)
    }

    fn cover(&self, req: &CoverRequest<PointSet>) -> Result<PointSetBallCover> {
        PointSetBallCover::build(&req.center, self.l, req.r, req.r_prime)
    }

    fn candidate_key(&self, x: &PointSet) -> Vec<u64> {
        let mut key = vec![x.len() as u64];
        for p in x.points() {
            key.extend(p.bit_key());
        }
        key
    }

    fn complexity_limit(&self) -> Option<usize> {
        Some(self.l)
    }
}

/// Cover of `ball(center, r) ∩ U^l` under the Hausdorff distance: all
/// nonempty subsets of size at most `l` of the union of the per-point grid
/// covers. Grid points shared between overlapping balls are kept duplicated;
/// correctness is unaffected.
pub struct PointSetBallCover {
    union: Vec<Point>,
    size_counts: Vec<(usize, u128, u128)>, // (subset size, offset, count)
    total: u128,
    id_prefix: String,
}

impl PointSetBallCover {
    fn build(center: &PointSet, l: usize, r: f64, r_prime: f64) -> Result<Self> {
        if center.len() > l {
            return Err(Error::param(
                "cover center",
                format!("center has {} points, exceeding l = {l}", center.len()),
            ));
        }
        let mut union = Vec::new();
        for p in center.points() {
            union.extend(euclidean_ball_cover(p, r, r_prime)?);
        }
        let n = union.len() as u128;
        let mut size_counts = Vec::with_capacity(l);
        let mut total = 0u128;
        for j in 1..=l.min(union.len()) {
            let count = binomial(n, j)
                .ok_or_else(|| Error::ResourceLimit("point-set cover count overflow".into()))?;
            size_counts.push((j, total, count));
            total = total
                .checked_add(count)
                .ok_or_else(|| Error::ResourceLimit("point-set cover count overflow".into()))?;
        }
        Ok(PointSetBallCover {
            union,
            size_counts,
            total,
            id_prefix: center.id().to_string(),
        })
    }

    pub fn union_len(&self) -> usize {
        self.union.len()
    }

    /// The concatenated per-point grids the subsets are drawn from.
    pub fn union(&self) -> &[Point] {
        &self.union
    }

    /// Flat index of the subset given by ascending distinct union indices.
    pub fn index_of(&self, indices: &[usize]) -> Option<u128> {
        let size = indices.len();
        if size == 0 || indices.windows(2).any(|w| w[0] >= w[1]) {
            return None;
        }
        let &(_, offset, _) = self.size_counts.iter().find(|&&(j, _, _)| j == size)?;
        let n = self.union.len() as u128;
        let mut rank = 0u128;
        let mut base = 0u128;
        let mut remaining = size;
        for &a in indices {
            let a = a as u128;
            rank += binomial(n - base, remaining)? - binomial(n - a, remaining)?;
            base = a + 1;
            remaining -= 1;
        }
        Some(offset + rank)
    }
}

impl CoverEnumeration for PointSetBallCover {
    type Elem = PointSet;

    fn count(&self) -> u128 {
        self.total
    }

    fn get(&self, index: u128) -> PointSet {
        debug_assert!(index < self.total);
        let &(size, offset, _) = self
            .size_counts
            .iter()
            .rev()
            .find(|&&(_, offset, _)| index >= offset)
            .expect("index within total");
        let rank = index - offset;
        let indices = unrank_combination(self.union.len() as u128, size, rank);
        let points: Vec<Point> = indices.iter().map(|&i| self.union[i as usize].clone()).collect();
        PointSet::new(format!("{}#cov{}", self.id_prefix, index), points)
            .expect("cover element points are valid by construction")
    }
}

/// `C(n, k)` with overflow checking.
fn binomial(n: u128, k: usize) -> Option<u128> {
    if (k as u128) > n {
        return Some(0);
    }
    let mut result = 1u128;
    for i in 0..k {
        result = result.checked_mul(n - i as u128)?;
        result /= i as u128 + 1;
    }
    Some(result)
}

/// Lexicographic unranking of a k-combination of `0..n`.
fn unrank_combination(n: u128, k: usize, mut rank: u128) -> Vec<u128> {
    let mut out = Vec::with_capacity(k);
    let mut base = 0u128;
    let mut remaining = k;
    while remaining > 0 {
        // first index a: combinations starting at exactly a number C(n-a-1, remaining-1)
        let mut lo = base;
        let mut hi = n - remaining as u128;
        // count of combinations with first index < a, among indices [base, n)
        let before = |a: u128| {
            binomial(n - base, remaining).unwrap() - binomial(n - a, remaining).unwrap()
        };
        while lo < hi {
            let mid = lo + (hi - lo + 1) / 2;
            if before(mid) <= rank {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        rank -= before(lo);
        out.push(lo);
        base = lo + 1;
        remaining -= 1;
    }
    out
}

// ---------------------------------------------------------------------------
// Finite space
// ---------------------------------------------------------------------------

/// A finite center space: an explicit list of centers over a base metric.
pub struct FiniteSpace<S: CenterSpace> {
    base: S,
    centers: Vec<S::Elem>,
}

impl<S: CenterSpace> FiniteSpace<S> {
    pub fn new(base: S, centers: Vec<S::Elem>) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::EmptyInput("explicit centers"));
        }
        Ok(FiniteSpace { base, centers })
    }

    pub fn centers(&self) -> &[S::Elem] {
        &self.centers
    }
}

pub struct FiniteBallCover<E> {
    members: Vec<E>,
}

impl<E: Clone> CoverEnumeration for FiniteBallCover<E> {
    type Elem = E;

    fn count(&self) -> u128 {
        self.members.len() as u128
    }

    fn get(&self, index: u128) -> E {
        self.members[index as usize].clone()
    }
}

impl<S: CenterSpace> CenterSpace for FiniteSpace<S> {
    type Elem = S::Elem;
    type Cover = FiniteBallCover<S::Elem>;

    fn distance(&self, x: &S::Elem, y: &S::Elem) -> Result<f64> {
        self.base.distance(x, y)
    }

    fn project(&self, x: &S::Elem) -> Result<S::Elem> {
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (i, c) in self.centers.iter().enumerate() {
            let d = self.base.distance(x, c)?;
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        Ok(self.centers[best].clone())
    }

    fn cover(&self, req: &CoverRequest<S::Elem>) -> Result<FiniteBallCover<S::Elem>> {
        // every in-ball center is its own 0-cover
        let mut members = Vec::new();
        for c in &self.centers {
            if self.base.distance(&req.center, c)? <= req.r + GEOM_TOL {
                members.push(c.clone());
            }
        }
        Ok(FiniteBallCover { members })
    }

    fn candidate_key(&self, x: &S::Elem) -> Vec<u64> {
        self.base.candidate_key(x)
    }

    fn complexity_limit(&self) -> Option<usize> {
        self.base.complexity_limit()
    }

    fn explicit_centers(&self) -> Option<&[S::Elem]> {
        Some(&self.centers)
    }
}

/// Exact 1-median over an explicit center list: the center minimizing the
/// summed distance to the sample, ties broken by lowest center index.
pub fn finite_space_1median<S: CenterSpace>(
    space: &S,
    sample: &[S::Elem],
    centers: &[S::Elem],
) -> Result<(S::Elem, f64)> {
    if sample.is_empty() {
        return Err(Error::EmptyInput("1-median sample"));
    }
    if centers.is_empty() {
        return Err(Error::EmptyInput("explicit centers"));
    }
    let mut best = 0usize;
    let mut best_cost = f64::INFINITY;
    for (i, c) in centers.iter().enumerate() {
        let mut cost = 0.0;
        for s in sample {
            cost += space.distance(s, c)?;
        }
        if cost < best_cost {
            best_cost = cost;
            best = i;
        }
    }
    Ok((centers[best].clone(), best_cost))
}

/// Exact count the trajectory cover enumeration will emit, computed from the
/// grid sizes alone; used to cross-check the stream against the stated
/// cardinality bounds.
pub fn trajectory_cover_exact_count(grid_sizes: &[usize], l: usize) -> Option<u128> {
    let l_prime = grid_sizes.len();
    if l_prime == 0 || l_prime > 2 * l {
        return Some(0);
    }
    let mut mults = vec![1usize; l_prime];
    let mut total = 0u128;
    loop {
        let len: usize = mults.iter().sum();
        if len <= 2 * l {
            let size = mults
                .iter()
                .enumerate()
                .try_fold(1u128, |acc, (i, &c)| {
                    acc.checked_mul((grid_sizes[i] as u128).checked_pow(c as u32)?)
                })?;
            total = total.checked_add(size)?;
        }
        if !next_multiplicity(&mut mults, 2 * l) {
            break;
        }
    }
    Some(total)
}

// Re-exported distance helpers for oracle/test use on raw slices.
pub(crate) fn frechet_raw(a: &[Point], b: &[Point]) -> f64 {
    frechet_points(a, b)
}

pub(crate) fn hausdorff_raw(a: &[Point], b: &[Point]) -> f64 {
    hausdorff_points(a, b)
}
