//! Exact distance computations: discrete Frechet distance between
//! trajectories and Hausdorff distance between finite point sets.

use crate::error::{Error, Result};
use crate::geometry::{dist, Point, GEOM_TOL};

/// An ordered, nonempty sequence of points. Order is semantically meaningful.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    id: String,
    points: Vec<Point>,
}

impl Trajectory {
    pub fn new(id: impl Into<String>, points: Vec<Point>) -> Result<Self> {
        let points = check_uniform(points)?;
        Ok(Trajectory {
            id: id.into(),
            points,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }
}

/// An unordered, nonempty collection of points. Duplicates within `GEOM_TOL`
/// are removed on construction and the remaining points are stored in a
/// canonical lexicographic order, so equal sets compare equal.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    id: String,
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(id: impl Into<String>, points: Vec<Point>) -> Result<Self> {
        let points = check_uniform(points)?;
        let mut kept: Vec<Point> = Vec::with_capacity(points.len());
        for p in points {
            if !kept.iter().any(|q| dist(q, &p) <= GEOM_TOL) {
                kept.push(p);
            }
        }
        kept.sort_by(|a, b| a.lex_cmp(b));
        Ok(PointSet {
            id: id.into(),
            points: kept,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }
}

fn check_uniform(points: Vec<Point>) -> Result<Vec<Point>> {
    if points.is_empty() {
        return Err(Error::EmptyInput("element points"));
    }
    let d = points[0].dim();
    for p in &points {
        if p.dim() != d {
            return Err(Error::DimensionMismatch {
                left: d,
                right: p.dim(),
            });
        }
    }
    Ok(points)
}

/// Discrete Frechet distance: the minimum over monotone correspondences of
/// the maximum matched-pair distance, computed by the standard dynamic
/// program in O(|a| * |b|) time and O(min(|a|, |b|)) memory.
pub fn discrete_frechet(a: &Trajectory, b: &Trajectory) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(frechet_points(a.points(), b.points()))
}

pub(crate) fn frechet_points(a: &[Point], b: &[Point]) -> f64 {
    // keep the rolling row over the shorter side
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let m = short.len();
    let mut prev = vec![0.0f64; m];
    let mut curr = vec![0.0f64; m];

    prev[0] = dist(&long[0], &short[0]);
    for j in 1..m {
        prev[j] = prev[j - 1].max(dist(&long[0], &short[j]));
    }
    for i in 1..long.len() {
        curr[0] = prev[0].max(dist(&long[i], &short[0]));
        for j in 1..m {
            let reach = prev[j].min(curr[j - 1]).min(prev[j - 1]);
            curr[j] = reach.max(dist(&long[i], &short[j]));
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[m - 1]
}

/// Hausdorff distance via the directed-max formula:
/// `max(max_{p in a} min_{q in b} |p-q|, max_{q in b} min_{p in a} |p-q|)`.
pub fn hausdorff(a: &PointSet, b: &PointSet) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(hausdorff_points(a.points(), b.points()))
}

pub(crate) fn hausdorff_points(a: &[Point], b: &[Point]) -> f64 {
    directed(a, b).max(directed(b, a))
}

fn directed(from: &[Point], to: &[Point]) -> f64 {
    from.iter()
        .map(|p| to.iter().map(|q| dist(p, q)).fold(f64::MAX, f64::min))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn pt(coords: &[f64]) -> Point {
        Point::new(coords.to_vec()).unwrap()
    }

    fn traj(points: &[&[f64]]) -> Trajectory {
        Trajectory::new("t", points.iter().map(|p| pt(p)).collect()).unwrap()
    }

    fn pset(points: &[&[f64]]) -> PointSet {
        PointSet::new("s", points.iter().map(|p| pt(p)).collect()).unwrap()
    }

    fn random_traj(rng: &mut impl Rng, max_len: usize, d: usize) -> Trajectory {
        let len = rng.gen_range(1..=max_len);
        Trajectory::new(
            "r",
            (0..len)
                .map(|_| Point::new((0..d).map(|_| rng.gen_range(-3.0..3.0)).collect()).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn random_pset(rng: &mut impl Rng, max_len: usize, d: usize) -> PointSet {
        let len = rng.gen_range(1..=max_len);
        PointSet::new(
            "r",
            (0..len)
                .map(|_| Point::new((0..d).map(|_| rng.gen_range(-3.0..3.0)).collect()).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn frechet_identity_and_singletons() {
        let t = traj(&[&[0.0, 0.0], &[1.0, 2.0], &[5.0, -1.0]]);
        assert_eq!(discrete_frechet(&t, &t).unwrap(), 0.0);
        let a = traj(&[&[0.0, 0.0]]);
        let b = traj(&[&[3.0, 4.0]]);
        assert_eq!(discrete_frechet(&a, &b).unwrap(), 5.0);
    }

    #[test]
    fn frechet_forced_diagonal_pair() {
        // brute-force over monotone correspondences gives sqrt(2)
        let a = traj(&[&[0.0, 0.0], &[1.0, 0.0], &[2.0, 0.0]]);
        let b = traj(&[&[0.0, 1.0], &[2.0, 1.0]]);
        let d = discrete_frechet(&a, &b).unwrap();
        assert!((d - 2f64.sqrt()).abs() < GEOM_TOL, "got {d}");
    }

    #[test]
    fn frechet_dimension_mismatch() {
        let a = traj(&[&[0.0, 0.0]]);
        let b = Trajectory::new("b", vec![pt(&[0.0])]).unwrap();
        assert!(discrete_frechet(&a, &b).is_err());
    }

    #[test]
    fn frechet_duplicate_last_point_invariant() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a = random_traj(&mut rng, 6, 2);
            let b = random_traj(&mut rng, 6, 2);
            let base = discrete_frechet(&a, &b).unwrap();
            let mut extended = a.points().to_vec();
            extended.push(a.points().last().unwrap().clone());
            let a2 = Trajectory::new("a2", extended).unwrap();
            let with_dup = discrete_frechet(&a2, &b).unwrap();
            assert!((base - with_dup).abs() < GEOM_TOL);
        }
    }

    #[test]
    fn hausdorff_examples() {
        let s = pset(&[&[0.0, 0.0], &[2.0, 5.0]]);
        assert_eq!(hausdorff(&s, &s).unwrap(), 0.0);

        let a = pset(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let b = pset(&[&[0.0, 0.0]]);
        assert_eq!(hausdorff(&a, &b).unwrap(), 1.0);

        let a = pset(&[&[0.0, 0.0], &[4.0, 0.0]]);
        let b = pset(&[&[1.0, 0.0], &[2.0, 0.0]]);
        assert_eq!(hausdorff(&a, &b).unwrap(), 2.0);
    }

    #[test]
    fn pointset_dedups_within_tolerance() {
        let s = pset(&[&[0.0, 0.0], &[0.0, 0.0], &[1e-12, 0.0], &[1.0, 0.0]]);
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn metric_axioms_on_random_samples() {
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        for _ in 0..1000 {
            let (a, b, c) = (
                random_traj(&mut rng, 5, 2),
                random_traj(&mut rng, 5, 2),
                random_traj(&mut rng, 5, 2),
            );
            let ab = discrete_frechet(&a, &b).unwrap();
            let ba = discrete_frechet(&b, &a).unwrap();
            let ac = discrete_frechet(&a, &c).unwrap();
            let cb = discrete_frechet(&c, &b).unwrap();
            assert_eq!(discrete_frechet(&a, &a).unwrap(), 0.0);
            assert_eq!(ab, ba, "frechet symmetry must be exact");
            assert!(ab <= ac + cb + GEOM_TOL, "frechet triangle inequality");
        }
        for _ in 0..1000 {
            let (a, b, c) = (
                random_pset(&mut rng, 4, 2),
                random_pset(&mut rng, 4, 2),
                random_pset(&mut rng, 4, 2),
            );
            let ab = hausdorff(&a, &b).unwrap();
            let ba = hausdorff(&b, &a).unwrap();
            let ac = hausdorff(&a, &c).unwrap();
            let cb = hausdorff(&c, &b).unwrap();
            assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
            assert_eq!(ab, ba, "hausdorff symmetry must be exact");
            assert!(ab <= ac + cb + GEOM_TOL, "hausdorff triangle inequality");
        }
    }
}
