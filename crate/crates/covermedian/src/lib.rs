//! Approximate (k,C)-median clustering where the centers come from a
//! restricted, coverable space: polygonal trajectories with at most `l`
//! vertices under the discrete Frechet distance, and finite point sets with
//! at most `l` points under the Hausdorff distance.
//!
//! The pieces, bottom up:
//!
//! - [`geometry`]: points, minimum enclosing balls, grid covers of Euclidean
//!   balls;
//! - [`metrics`]: exact discrete Frechet and Hausdorff distances;
//! - [`center_space`]: the coverable-center-space abstraction (distance,
//!   nearest-center projection, lazy ball covers) with trajectory, point-set
//!   and finite instantiations;
//! - [`sampling`]: uniform multiset sampling and the cover-based candidate
//!   generator;
//! - [`engine`]: the recursive prune-or-sample clustering algorithm with
//!   outer repetitions and exact cost accounting;
//! - [`oracle`]: brute-force references and planted-instance generators used
//!   by tests and benchmarks.

pub mod center_space;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod metrics;
pub mod oracle;
pub mod rng;
pub mod sampling;

pub use center_space::{
    finite_space_1median, project_point_set, project_trajectory, CenterSpace, CoverEnumeration,
    CoverRequest, FiniteSpace, PointSetSpace, Projection, TrajectorySpace,
};
pub use engine::{
    cluster, evaluate_cost, run, run_with_source, Assignment, ClusterParams, ClusteringResult,
    Mode, SubsetBudget,
};
pub use error::{Error, Result};
pub use geometry::{euclidean_ball_cover, euclidean_distance, min_enclosing_ball, Ball, Point};
pub use metrics::{discrete_frechet, hausdorff, PointSet, Trajectory};
pub use rng::RngStream;
pub use sampling::{
    candidate_set_from_anchor, gamma_candidates, uniform_multiset, OperationCounter,
    SamplingParams,
};
