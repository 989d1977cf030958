//! Euclidean primitives: points, minimum enclosing balls, and grid covers of
//! Euclidean balls. These are the building blocks for the nearest-center
//! projections and the metric-ball covers of the center spaces.

use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Absolute tolerance used by all geometric predicates on distances.
pub const GEOM_TOL: f64 = 1e-9;

/// Upper bound on the number of lattice cells a single ball cover is allowed
/// to enumerate. Requests beyond this (e.g. paper-faithful cover ratios in the
/// millions) return [`Error::ResourceLimit`] instead of running forever.
pub const GRID_CELL_LIMIT: u128 = 10_000_000;

/// Seed for the shuffle inside the minimum-enclosing-ball computation, fixed
/// so repeated calls produce identical support sets.
const MEB_SHUFFLE_SEED: u64 = 0x5eed_ba11;

/// A point in `R^d`. Coordinates are finite by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyInput("point coordinates"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteCoordinate);
        }
        Ok(Point { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Ordering key: coordinates compared lexicographically by total order.
    pub(crate) fn lex_cmp(&self, other: &Point) -> std::cmp::Ordering {
        for (a, b) in self.coords.iter().zip(other.coords.iter()) {
            match a.total_cmp(b) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.coords.len().cmp(&other.coords.len())
    }

    pub(crate) fn bit_key(&self) -> impl Iterator<Item = u64> + '_ {
        self.coords.iter().map(|c| c.to_bits())
    }
}

impl std::ops::Index<usize> for Point {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

/// A Euclidean ball with nonnegative radius.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn contains(&self, p: &Point) -> bool {
        dist(&self.center, p) <= self.radius + GEOM_TOL
    }
}

/// Euclidean distance between two points of the same dimension.
pub fn euclidean_distance(a: &Point, b: &Point) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(dist(a, b))
}

/// Distance without the dimension check, for internal hot paths where the
/// inputs were validated at construction.
pub(crate) fn dist(a: &Point, b: &Point) -> f64 {
    debug_assert_eq!(a.dim(), b.dim());
    a.coords
        .iter()
        .zip(b.coords.iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Smallest enclosing ball of a nonempty point set.
///
/// Randomized incremental (Welzl) over at most `d + 1` support points; the
/// internal shuffle is deterministically seeded so results are reproducible.
pub fn min_enclosing_ball(points: &[Point]) -> Result<Ball> {
    if points.is_empty() {
        return Err(Error::EmptyInput("point set for enclosing ball"));
    }
    let d = points[0].dim();
    for p in points {
        if p.dim() != d {
            return Err(Error::DimensionMismatch {
                left: d,
                right: p.dim(),
            });
        }
    }
    let mut shuffled: Vec<&Point> = points.iter().collect();
    let mut rng = ChaCha12Rng::seed_from_u64(MEB_SHUFFLE_SEED);
    shuffled.shuffle(&mut rng);
    let mut boundary: Vec<&Point> = Vec::with_capacity(d + 1);
    Ok(welzl(&shuffled, &mut boundary, d))
}

fn welzl<'a>(points: &[&'a Point], boundary: &mut Vec<&'a Point>, d: usize) -> Ball {
    if points.is_empty() || boundary.len() == d + 1 {
        return ball_from_boundary(boundary, d);
    }
    let p = points[points.len() - 1];
    let rest = &points[..points.len() - 1];
    let ball = welzl(rest, boundary, d);
    if ball.radius >= 0.0 && ball.contains(p) {
        return ball;
    }
    boundary.push(p);
    let ball = welzl(rest, boundary, d);
    boundary.pop();
    ball
}

/// Ball with the given points on its boundary (circumball of the support
/// set). An empty support yields the sentinel radius -1.
fn ball_from_boundary(boundary: &[&Point], d: usize) -> Ball {
    match boundary.len() {
        0 => Ball {
            center: Point {
                coords: vec![0.0; d],
            },
            radius: -1.0,
        },
        1 => Ball {
            center: boundary[0].clone(),
            radius: 0.0,
        },
        _ => circumball(boundary).unwrap_or_else(|| ball_from_boundary(&boundary[..boundary.len() - 1], d)),
    }
}

/// Circumball of affinely independent points: the center is `b0 + sum l_i v_i`
/// with `v_i = b_i - b0`, solving the Gram system `(v_i . v_k) l = |v_i|^2/2`.
/// Returns `None` when the system is numerically singular.
fn circumball(boundary: &[&Point]) -> Option<Ball> {
    let b0 = boundary[0];
    let d = b0.dim();
    let k = boundary.len() - 1;
    let vs: Vec<Vec<f64>> = boundary[1..]
        .iter()
        .map(|b| (0..d).map(|i| b[i] - b0[i]).collect())
        .collect();
    let mut m = vec![vec![0.0; k + 1]; k];
    for i in 0..k {
        for j in 0..k {
            m[i][j] = dotv(&vs[i], &vs[j]);
        }
        m[i][k] = dotv(&vs[i], &vs[i]) / 2.0;
    }
    let lambda = solve(&mut m)?;
    let mut center = b0.coords.clone();
    for (i, l) in lambda.iter().enumerate() {
        for j in 0..d {
            center[j] += l * vs[i][j];
        }
    }
    let center = Point { coords: center };
    let radius = dist(&center, b0);
    Some(Ball { center, radius })
}

fn dotv(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gaussian elimination with partial pivoting on an augmented `k x (k+1)`
/// matrix. `None` when a pivot is degenerate.
fn solve(m: &mut [Vec<f64>]) -> Option<Vec<f64>> {
    let k = m.len();
    for col in 0..k {
        let pivot = (col..k).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[pivot][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, pivot);
        for row in 0..k {
            if row == col {
                continue;
            }
            let f = m[row][col] / m[col][col];
            for c in col..=k {
                let sub = f * m[col][c];
                m[row][c] -= sub;
            }
        }
    }
    Some((0..k).map(|i| m[i][k] / m[i][i]).collect())
}

/// Finite grid cover of a Euclidean ball: every point within distance `r` of
/// `center` lies within `r_prime` of some returned point.
///
/// The grid is axis-aligned with spacing `r_prime / sqrt(d)` (cell diameter
/// at most `r_prime`), restricted to the ball of radius `r + r_prime / 2`
/// and to per-axis index `ceil(r sqrt(d) / r_prime)`, which keeps the size
/// within `(2 ceil(r sqrt(d) / r_prime) + 1)^d`.
pub fn euclidean_ball_cover(center: &Point, r: f64, r_prime: f64) -> Result<Vec<Point>> {
    if !(r_prime > 0.0) || !r_prime.is_finite() {
        return Err(Error::param("r_prime", format!("must be positive, got {r_prime}")));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::param("r", format!("must be nonnegative, got {r}")));
    }
    if r == 0.0 || r_prime >= r {
        return Ok(vec![center.clone()]);
    }
    let d = center.dim();
    let sqrt_d = (d as f64).sqrt();
    let spacing = r_prime / sqrt_d;
    let max_index = (r * sqrt_d / r_prime).ceil() as i64;
    let per_axis = 2 * max_index as u128 + 1;
    let cells = per_axis.checked_pow(d as u32).ok_or_else(|| {
        Error::ResourceLimit(format!("ball cover lattice overflow at ratio {}", r / r_prime))
    })?;
    if cells > GRID_CELL_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "ball cover would enumerate {cells} lattice cells (limit {GRID_CELL_LIMIT}); \
             lower the cover ratio (r/r' = {})",
            r / r_prime
        )));
    }
    let reach = r + r_prime / 2.0;
    let mut out = Vec::new();
    let mut index = vec![-max_index; d];
    loop {
        let norm2: f64 = index
            .iter()
            .map(|&z| (z as f64 * spacing) * (z as f64 * spacing))
            .sum();
        if norm2.sqrt() <= reach + GEOM_TOL {
            let coords = (0..d).map(|i| center[i] + index[i] as f64 * spacing).collect();
            out.push(Point { coords });
        }
        // odometer increment
        let mut axis = 0;
        loop {
            if axis == d {
                return Ok(out);
            }
            index[axis] += 1;
            if index[axis] <= max_index {
                break;
            }
            index[axis] = -max_index;
            axis += 1;
        }
    }
}

/// The per-axis bound used by `euclidean_ball_cover`; exposed so tests can
/// check the advertised size bound `(2 ceil(r sqrt(d)/r') + 1)^d`.
pub fn ball_cover_size_bound(d: usize, r: f64, r_prime: f64) -> u128 {
    if r == 0.0 || r_prime >= r {
        return 1;
    }
    let max_index = (r * (d as f64).sqrt() / r_prime).ceil() as u128;
    (2 * max_index + 1).pow(d as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn pt(coords: &[f64]) -> Point {
        Point::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn distance_basics() {
        assert_eq!(euclidean_distance(&pt(&[0.0, 0.0]), &pt(&[0.0, 0.0])).unwrap(), 0.0);
        assert_eq!(euclidean_distance(&pt(&[0.0, 0.0]), &pt(&[3.0, 4.0])).unwrap(), 5.0);
        let d = euclidean_distance(&pt(&[1.0, 1.0, 1.0]), &pt(&[2.0, 2.0, 2.0])).unwrap();
        assert!((d - 3f64.sqrt()).abs() < GEOM_TOL);
    }

    #[test]
    fn distance_dimension_mismatch() {
        let err = euclidean_distance(&pt(&[0.0]), &pt(&[0.0, 1.0])).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn point_rejects_non_finite() {
        assert!(Point::new(vec![f64::NAN]).is_err());
        assert!(Point::new(vec![f64::INFINITY, 0.0]).is_err());
        assert!(Point::new(vec![]).is_err());
    }

    #[test]
    fn meb_singleton_and_pair() {
        let b = min_enclosing_ball(&[pt(&[0.0, 0.0])]).unwrap();
        assert_eq!(b.center, pt(&[0.0, 0.0]));
        assert_eq!(b.radius, 0.0);

        let b = min_enclosing_ball(&[pt(&[0.0, 0.0]), pt(&[2.0, 0.0])]).unwrap();
        assert!(dist(&b.center, &pt(&[1.0, 0.0])) < GEOM_TOL);
        assert!((b.radius - 1.0).abs() < GEOM_TOL);
    }

    #[test]
    fn meb_equilateral_triangle() {
        // circumradius of the equilateral triangle with side 2 is 2/sqrt(3)
        let points = [pt(&[0.0, 0.0]), pt(&[2.0, 0.0]), pt(&[1.0, 3f64.sqrt()])];
        let b = min_enclosing_ball(&points).unwrap();
        assert!((b.radius - 2.0 / 3f64.sqrt()).abs() < 1e-9, "radius {}", b.radius);
        for p in &points {
            assert!(dist(&b.center, p) <= b.radius + GEOM_TOL);
        }
    }

    #[test]
    fn meb_empty_errors() {
        assert!(min_enclosing_ball(&[]).is_err());
    }

    /// Grid oracle: the MEB radius must not exceed the best covering ball
    /// centered on a 200x200 grid over the bounding box, and must be at
    /// least half the diameter.
    #[test]
    fn meb_matches_grid_oracle_on_small_instances() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for trial in 0..25 {
            let n = rng.gen_range(1..=6);
            let points: Vec<Point> = (0..n)
                .map(|_| pt(&[rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)]))
                .collect();
            let ball = min_enclosing_ball(&points).unwrap();

            for p in &points {
                assert!(
                    dist(&ball.center, p) <= ball.radius + GEOM_TOL,
                    "trial {trial}: point outside ball"
                );
            }

            let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
            for p in &points {
                lo_x = lo_x.min(p[0]);
                hi_x = hi_x.max(p[0]);
                lo_y = lo_y.min(p[1]);
                hi_y = hi_y.max(p[1]);
            }
            let mut best = f64::MAX;
            for i in 0..200 {
                for j in 0..200 {
                    let cx = lo_x + (hi_x - lo_x) * i as f64 / 199.0;
                    let cy = lo_y + (hi_y - lo_y) * j as f64 / 199.0;
                    let c = pt(&[cx, cy]);
                    let needed = points
                        .iter()
                        .map(|p| dist(&c, p))
                        .fold(0.0f64, f64::max);
                    best = best.min(needed);
                }
            }
            assert!(
                ball.radius <= best + GEOM_TOL,
                "trial {trial}: MEB radius {} beats grid oracle {}",
                ball.radius,
                best
            );

            let mut diameter = 0.0f64;
            for a in &points {
                for b in &points {
                    diameter = diameter.max(dist(a, b));
                }
            }
            assert!(ball.radius >= diameter / 2.0 - GEOM_TOL);
        }
    }

    #[test]
    fn ball_cover_axis_example() {
        // d=1, r=4, r'=2: grid spacing 2, five points
        let g = euclidean_ball_cover(&pt(&[0.0]), 4.0, 2.0).unwrap();
        let mut xs: Vec<f64> = g.iter().map(|p| p[0]).collect();
        xs.sort_by(f64::total_cmp);
        assert_eq!(xs, vec![-4.0, -2.0, 0.0, 2.0, 4.0]);
    }

    #[test]
    fn ball_cover_degenerate_cases() {
        let c = pt(&[1.0, 2.0]);
        assert_eq!(euclidean_ball_cover(&c, 0.0, 1.0).unwrap(), vec![c.clone()]);
        assert_eq!(euclidean_ball_cover(&c, 1.0, 2.0).unwrap(), vec![c.clone()]);
        assert!(euclidean_ball_cover(&c, 1.0, 0.0).is_err());
        assert!(euclidean_ball_cover(&c, 1.0, -1.0).is_err());
    }

    #[test]
    fn ball_cover_rejects_huge_requests() {
        let err = euclidean_ball_cover(&pt(&[0.0, 0.0]), 1.0, 1e-6).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit(_)));
    }

    #[test]
    fn ball_cover_soundness_and_size() {
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        for &(d, r, rp) in &[(1usize, 4.0, 2.0), (2, 1.0, 0.25), (2, 3.0, 1.0), (3, 2.0, 0.8), (4, 1.0, 0.5)] {
            let center = Point::new((0..d).map(|_| rng.gen_range(-2.0..2.0)).collect()).unwrap();
            let cover = euclidean_ball_cover(&center, r, rp).unwrap();
            assert!(
                (cover.len() as u128) <= ball_cover_size_bound(d, r, rp),
                "cover size {} exceeds bound {} for d={d}",
                cover.len(),
                ball_cover_size_bound(d, r, rp)
            );
            for _ in 0..1000 {
                // uniform point inside the ball by rejection
                let q = loop {
                    let coords: Vec<f64> = (0..d).map(|_| rng.gen_range(-r..r)).collect();
                    if coords.iter().map(|c| c * c).sum::<f64>().sqrt() <= r {
                        break Point::new(
                            coords.iter().zip(center.coords()).map(|(a, b)| a + b).collect(),
                        )
                        .unwrap();
                    }
                };
                let nearest = cover.iter().map(|g| dist(g, &q)).fold(f64::MAX, f64::min);
                assert!(
                    nearest <= rp + GEOM_TOL,
                    "point at distance {nearest} from cover (r'={rp}, d={d})"
                );
            }
        }
    }
}
