//! Property tests for the metric and cover invariants.

use covermedian::{
    discrete_frechet, euclidean_ball_cover, hausdorff, min_enclosing_ball, project_trajectory,
    Point, PointSet, Trajectory,
};
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = f64> {
    -10.0..10.0f64
}

fn point(d: usize) -> impl Strategy<Value = Point> {
    prop::collection::vec(coord(), d).prop_map(|c| Point::new(c).unwrap())
}

fn trajectory(max_len: usize) -> impl Strategy<Value = Trajectory> {
    prop::collection::vec(point(2), 1..=max_len)
        .prop_map(|pts| Trajectory::new("t", pts).unwrap())
}

fn point_set(max_len: usize) -> impl Strategy<Value = PointSet> {
    prop::collection::vec(point(2), 1..=max_len).prop_map(|pts| PointSet::new("s", pts).unwrap())
}

proptest! {
    #[test]
    fn frechet_is_a_metric(a in trajectory(5), b in trajectory(5), c in trajectory(5)) {
        let ab = discrete_frechet(&a, &b).unwrap();
        prop_assert_eq!(discrete_frechet(&a, &a).unwrap(), 0.0);
        prop_assert_eq!(ab, discrete_frechet(&b, &a).unwrap());
        let ac = discrete_frechet(&a, &c).unwrap();
        let cb = discrete_frechet(&c, &b).unwrap();
        prop_assert!(ab <= ac + cb + 1e-9);
    }

    #[test]
    fn hausdorff_is_a_metric(a in point_set(4), b in point_set(4), c in point_set(4)) {
        let ab = hausdorff(&a, &b).unwrap();
        prop_assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
        prop_assert_eq!(ab, hausdorff(&b, &a).unwrap());
        let ac = hausdorff(&a, &c).unwrap();
        let cb = hausdorff(&c, &b).unwrap();
        prop_assert!(ab <= ac + cb + 1e-9);
    }

    #[test]
    fn ball_cover_is_sound(
        center in point(2),
        r in 0.1..4.0f64,
        ratio in 1.05..8.0f64,
        dir in 0.0..std::f64::consts::TAU,
        frac in 0.0..1.0f64,
    ) {
        let r_prime = r / ratio;
        let cover = euclidean_ball_cover(&center, r, r_prime).unwrap();
        let q = Point::new(vec![
            center.coords()[0] + frac * r * dir.cos(),
            center.coords()[1] + frac * r * dir.sin(),
        ])
        .unwrap();
        let nearest = cover
            .iter()
            .map(|g| covermedian::euclidean_distance(g, &q).unwrap())
            .fold(f64::MAX, f64::min);
        prop_assert!(nearest <= r_prime + 1e-9, "nearest cover point at {nearest}");
    }

    #[test]
    fn projection_stays_within_complexity_and_never_beats_one_block(
        t in trajectory(8),
        l in 1usize..=3,
    ) {
        let p = project_trajectory(&t, l).unwrap();
        prop_assert!(p.center.len() <= l);
        // collapsing everything into the enclosing-ball center is one valid
        // partition, so the optimum cannot be worse
        let one_block = min_enclosing_ball(t.points()).unwrap().radius;
        prop_assert!(p.distance <= one_block + 1e-9);
        let achieved = discrete_frechet(&t, &p.center).unwrap();
        prop_assert!((achieved - p.distance).abs() <= 1e-9);
    }
}
