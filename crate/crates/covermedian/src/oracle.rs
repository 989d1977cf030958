//! Independent brute-force references and adversarial instance generators.
//!
//! Everything here exists to check the production implementations from a
//! different code path: no DP tables or candidate enumerations are shared
//! with the modules under test. Used by tests, the acceptance suite, and the
//! fixture generator; exponential-time throughout.

use crate::engine::evaluate_cost;
use crate::error::{Error, Result};
use crate::geometry::{dist, Point};
use crate::metrics::{PointSet, Trajectory};
use crate::rng::RngStream;
use rand::Rng;

/// Discrete Frechet distance by exhaustive minimization over all monotone
/// correspondences, enumerated as lattice paths. Feasible for lengths <= 6.
pub fn brute_frechet(a: &Trajectory, b: &Trajectory) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    fn walk(a: &[Point], b: &[Point], i: usize, j: usize, running: f64) -> f64 {
        let here = running.max(dist(&a[i], &b[j]));
        if i == a.len() - 1 && j == b.len() - 1 {
            return here;
        }
        let mut best = f64::INFINITY;
        if i + 1 < a.len() {
            best = best.min(walk(a, b, i + 1, j, here));
        }
        if j + 1 < b.len() {
            best = best.min(walk(a, b, i, j + 1, here));
        }
        if i + 1 < a.len() && j + 1 < b.len() {
            best = best.min(walk(a, b, i + 1, j + 1, here));
        }
        best
    }
    Ok(walk(a.points(), b.points(), 0, 0, 0.0))
}

/// Hausdorff distance by exhaustive minimization over every correspondence
/// (every subset of the pair grid covering both sides). Feasible for sizes
/// <= 4.
pub fn brute_hausdorff(a: &PointSet, b: &PointSet) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let (pa, pb) = (a.points(), b.points());
    let pairs: Vec<(usize, usize, f64)> = pa
        .iter()
        .enumerate()
        .flat_map(|(i, p)| pb.iter().enumerate().map(move |(j, q)| (i, j, dist(p, q))))
        .collect();
    let total = 1u64 << pairs.len();
    let mut best = f64::INFINITY;
    for mask in 1..total {
        let mut covered_a = 0u32;
        let mut covered_b = 0u32;
        let mut worst = 0.0f64;
        for (bit, &(i, j, d)) in pairs.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                covered_a |= 1 << i;
                covered_b |= 1 << j;
                worst = worst.max(d);
            }
        }
        if covered_a.count_ones() as usize == pa.len()
            && covered_b.count_ones() as usize == pb.len()
        {
            best = best.min(worst);
        }
    }
    Ok(best)
}

/// Result of an exhaustive lattice search for a 1-median.
#[derive(Clone, Debug)]
pub struct GridMedian<E> {
    pub center: E,
    pub cost: f64,
    /// Upper bound on how far the lattice optimum can sit above the true
    /// optimum: `n * spacing * sqrt(d) / 2` (each center vertex moves by at
    /// most half a cell diagonal). The true optimum lies in
    /// `[cost - slack, cost]`.
    pub slack: f64,
    pub spacing: f64,
}

fn lattice(bbox: &[(f64, f64)], spacing: f64) -> Vec<Point> {
    let axes: Vec<Vec<f64>> = bbox
        .iter()
        .map(|&(lo, hi)| {
            let steps = ((hi - lo) / spacing).ceil() as usize;
            (0..=steps).map(|i| lo + i as f64 * spacing).collect()
        })
        .collect();
    let mut out = vec![Vec::new()];
    for axis in &axes {
        let mut next = Vec::with_capacity(out.len() * axis.len());
        for partial in &out {
            for &v in axis {
                let mut p = partial.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out.into_iter().map(|coords| Point::new(coords).unwrap()).collect()
}

/// Data bounding box, one (lo, hi) per axis.
pub fn bounding_box(points: impl Iterator<Item = Point>, d: usize) -> Vec<(f64, f64)> {
    let mut bbox = vec![(f64::MAX, f64::MIN); d];
    for p in points {
        for i in 0..d {
            bbox[i].0 = bbox[i].0.min(p[i]);
            bbox[i].1 = bbox[i].1.max(p[i]);
        }
    }
    bbox
}

/// Exhaustive 1-median search over all center trajectories with at most `l`
/// vertices drawn from a lattice over `bbox` with the given spacing.
pub fn grid_1median_trajectories(
    elements: &[Trajectory],
    l: usize,
    bbox: &[(f64, f64)],
    spacing: f64,
) -> Result<GridMedian<Trajectory>> {
    if elements.is_empty() {
        return Err(Error::EmptyInput("grid 1-median elements"));
    }
    let verts = lattice(bbox, spacing);
    let d = bbox.len();
    let mut best_cost = f64::INFINITY;
    let mut best: Option<Vec<Point>> = None;
    // ordered tuples with repetition, lengths 1..=l
    let mut tuple: Vec<usize> = Vec::new();
    search_tuples(&verts, l, &mut tuple, &mut |candidate: &[usize]| {
        let pts: Vec<Point> = candidate.iter().map(|&i| verts[i].clone()).collect();
        let mut cost = 0.0;
        for e in elements {
            cost += crate::center_space::frechet_raw(e.points(), &pts);
        }
        if cost < best_cost {
            best_cost = cost;
            best = Some(pts);
        }
    });
    let center = Trajectory::new("grid-median", best.expect("nonempty lattice"))?;
    let slack = elements.len() as f64 * spacing * (d as f64).sqrt() / 2.0;
    Ok(GridMedian {
        center,
        cost: best_cost,
        slack,
        spacing,
    })
}

/// Exhaustive 1-median search over all center point sets with at most `l`
/// points drawn from the lattice.
pub fn grid_1median_point_sets(
    elements: &[PointSet],
    l: usize,
    bbox: &[(f64, f64)],
    spacing: f64,
) -> Result<GridMedian<PointSet>> {
    if elements.is_empty() {
        return Err(Error::EmptyInput("grid 1-median elements"));
    }
    let verts = lattice(bbox, spacing);
    let d = bbox.len();
    let mut best_cost = f64::INFINITY;
    let mut best: Option<Vec<Point>> = None;
    let mut combo: Vec<usize> = Vec::new();
    search_combos(verts.len(), l, 0, &mut combo, &mut |candidate: &[usize]| {
        let pts: Vec<Point> = candidate.iter().map(|&i| verts[i].clone()).collect();
        let mut cost = 0.0;
        for e in elements {
            cost += crate::center_space::hausdorff_raw(e.points(), &pts);
        }
        if cost < best_cost {
            best_cost = cost;
            best = Some(pts);
        }
    });
    let center = PointSet::new("grid-median", best.expect("nonempty lattice"))?;
    let slack = elements.len() as f64 * spacing * (d as f64).sqrt() / 2.0;
    Ok(GridMedian {
        center,
        cost: best_cost,
        slack,
        spacing,
    })
}

fn search_tuples(verts: &[Point], l: usize, tuple: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if !tuple.is_empty() {
        visit(tuple);
    }
    if tuple.len() == l {
        return;
    }
    for i in 0..verts.len() {
        tuple.push(i);
        search_tuples(verts, l, tuple, visit);
        tuple.pop();
    }
}

fn search_combos(
    n: usize,
    l: usize,
    start: usize,
    combo: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if !combo.is_empty() {
        visit(combo);
    }
    if combo.len() == l {
        return;
    }
    for i in start..n {
        combo.push(i);
        search_combos(n, l, i + 1, combo, visit);
        combo.pop();
    }
}

/// The doubling-dimension witness family: a straight spine with consecutive
/// vertices 3r apart, and the 2^m trajectories choosing one of two
/// diametrically opposite points (at 0.99r along the first axis) per vertex.
/// Every member lies within Frechet distance r of the spine while every
/// distinct pair is more than r apart.
pub struct AntipodalFamily {
    pub spine: Trajectory,
    pub members: Vec<Trajectory>,
}

pub fn antipodal_family(m: usize, r: f64, d: usize) -> Result<AntipodalFamily> {
    if m == 0 || m > 12 {
        return Err(Error::param("m", "need 1 <= m <= 12"));
    }
    if !(r > 0.0) {
        return Err(Error::param("r", "radius must be positive"));
    }
    if d < 1 {
        return Err(Error::param("d", "dimension must be at least 1"));
    }
    let spine_pts: Vec<Point> = (0..m)
        .map(|i| {
            let mut coords = vec![0.0; d];
            coords[d - 1] = 3.0 * r * i as f64;
            Point::new(coords).unwrap()
        })
        .collect();
    let offset = 0.99 * r;
    let mut members = Vec::with_capacity(1 << m);
    for mask in 0..(1u32 << m) {
        let pts: Vec<Point> = spine_pts
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let mut coords = p.coords().to_vec();
                coords[0] += if mask & (1 << i) != 0 { offset } else { -offset };
                Point::new(coords).unwrap()
            })
            .collect();
        members.push(Trajectory::new(format!("w{mask}"), pts)?);
    }
    let spine = Trajectory::new("spine", spine_pts)?;
    Ok(AntipodalFamily { spine, members })
}

/// A generated instance with known centers and exact ground-truth cost.
#[derive(Clone, Debug)]
pub struct PlantedInstance<E> {
    pub elements: Vec<E>,
    pub ground_truth_centers: Vec<E>,
    pub ground_truth_cost: f64,
    pub jitter: f64,
    pub per_cluster: usize,
    pub seed: u64,
}

/// Jitters every spine vertex by a uniform offset within a ball of radius
/// `jitter`, `per_cluster` copies per spine.
pub fn plant_trajectories(
    spines: &[Trajectory],
    per_cluster: usize,
    jitter: f64,
    seed: u64,
) -> Result<PlantedInstance<Trajectory>> {
    let mut rng = RngStream::from_seed(seed).rng();
    let mut elements = Vec::with_capacity(spines.len() * per_cluster);
    for (s_idx, spine) in spines.iter().enumerate() {
        for copy in 0..per_cluster {
            let pts: Vec<Point> = spine
                .points()
                .iter()
                .map(|p| jitter_point(p, jitter, &mut rng))
                .collect();
            elements.push(Trajectory::new(format!("c{s_idx}-{copy}"), pts)?);
        }
    }
    let space = crate::center_space::TrajectorySpace::new(
        spines.iter().map(Trajectory::len).max().unwrap_or(1),
    )?;
    let ground_truth_cost = evaluate_cost(&space, &elements, spines)?;
    Ok(PlantedInstance {
        elements,
        ground_truth_centers: spines.to_vec(),
        ground_truth_cost,
        jitter,
        per_cluster,
        seed,
    })
}

pub fn plant_point_sets(
    spines: &[PointSet],
    per_cluster: usize,
    jitter: f64,
    seed: u64,
) -> Result<PlantedInstance<PointSet>> {
    let mut rng = RngStream::from_seed(seed).rng();
    let mut elements = Vec::with_capacity(spines.len() * per_cluster);
    for (s_idx, spine) in spines.iter().enumerate() {
        for copy in 0..per_cluster {
            let pts: Vec<Point> = spine
                .points()
                .iter()
                .map(|p| jitter_point(p, jitter, &mut rng))
                .collect();
            elements.push(PointSet::new(format!("c{s_idx}-{copy}"), pts)?);
        }
    }
    let space = crate::center_space::PointSetSpace::new(
        spines.iter().map(PointSet::len).max().unwrap_or(1),
    )?;
    let ground_truth_cost = evaluate_cost(&space, &elements, spines)?;
    Ok(PlantedInstance {
        elements,
        ground_truth_centers: spines.to_vec(),
        ground_truth_cost,
        jitter,
        per_cluster,
        seed,
    })
}

fn jitter_point(p: &Point, jitter: f64, rng: &mut impl Rng) -> Point {
    if jitter == 0.0 {
        return p.clone();
    }
    let d = p.dim();
    loop {
        let offset: Vec<f64> = (0..d).map(|_| rng.gen_range(-jitter..jitter)).collect();
        if offset.iter().map(|c| c * c).sum::<f64>().sqrt() <= jitter {
            return Point::new(p.coords().iter().zip(&offset).map(|(a, b)| a + b).collect())
                .unwrap();
        }
    }
}
