//! Regenerates the shipped fixtures. Deterministic: fixed seeds, shortest
//! round-trip float formatting, stable record order.
//!
//! Usage: cargo run --release -p covermedian-cli --bin gen_fixtures [dir]

use covermedian::oracle::{
    bounding_box, grid_1median_point_sets, grid_1median_trajectories, plant_point_sets,
    plant_trajectories,
};
use covermedian::{Point, PointSet, Trajectory};
use covermedian_cli::dataset::{point_set_record, record_to_line, trajectory_record, RawRecord};
use covermedian_cli::fixtures::FixtureMeta;
use std::path::PathBuf;

fn pt(x: f64, y: f64) -> Point {
    Point::new(vec![x, y]).unwrap()
}

fn traj_spine(id: &str, pts: &[(f64, f64)]) -> Trajectory {
    Trajectory::new(id, pts.iter().map(|&(x, y)| pt(x, y)).collect()).unwrap()
}

fn ps_spine(id: &str, pts: &[(f64, f64)]) -> PointSet {
    PointSet::new(id, pts.iter().map(|&(x, y)| pt(x, y)).collect()).unwrap()
}

/// Lattice spacing: the larger bbox extent divided by 40.
fn cluster_spacing(bbox: &[(f64, f64)]) -> f64 {
    bbox.iter().map(|&(lo, hi)| hi - lo).fold(0.0f64, f64::max) / 40.0
}

fn main() {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("crates/covermedian-cli/fixtures"));
    std::fs::create_dir_all(&dir).expect("fixture directory");

    let jitter = 0.1;
    let l = 2;

    // trajectory fixtures
    for (name, spines, per_cluster, seed) in [
        (
            "traj-2cluster",
            vec![
                traj_spine("spine0", &[(0.0, 0.0), (1.0, 0.0)]),
                traj_spine("spine1", &[(100.0, 0.0), (101.0, 0.0)]),
            ],
            15,
            1001u64,
        ),
        (
            "traj-3cluster",
            vec![
                traj_spine("spine0", &[(0.0, 0.0), (1.0, 0.0)]),
                traj_spine("spine1", &[(100.0, 0.0), (101.0, 0.0)]),
                traj_spine("spine2", &[(0.0, 100.0), (1.0, 100.0)]),
            ],
            12,
            1002,
        ),
    ] {
        let inst = plant_trajectories(&spines, per_cluster, jitter, seed).unwrap();
        let lines: Vec<String> = inst
            .elements
            .iter()
            .map(|t| record_to_line(&trajectory_record(t.id(), t)))
            .collect();
        std::fs::write(dir.join(format!("{name}.jsonl")), lines.join("\n") + "\n").unwrap();

        // per-cluster lattice search; clusters are disjoint by construction
        let mut grid_cost = 0.0;
        let mut grid_slack = 0.0;
        for (c_idx, spine) in spines.iter().enumerate() {
            let members: Vec<Trajectory> = inst
                .elements
                .iter()
                .filter(|t| t.id().starts_with(&format!("c{c_idx}-")))
                .cloned()
                .collect();
            let bbox = bounding_box(
                members.iter().flat_map(|t| t.points().iter().cloned()),
                spine.dim(),
            );
            let spacing = cluster_spacing(&bbox);
            let result = grid_1median_trajectories(&members, l, &bbox, spacing).unwrap();
            grid_cost += result.cost;
            grid_slack += result.slack;
        }

        let meta = FixtureMeta {
            kind: "trajectory".into(),
            k: spines.len(),
            l,
            per_cluster,
            jitter,
            seed,
            ground_truth_cost: inst.ground_truth_cost,
            grid_cost,
            grid_slack,
            spines: spines
                .iter()
                .map(|s| trajectory_record(s.id(), s))
                .collect::<Vec<RawRecord>>(),
        };
        meta.save(&dir.join(format!("{name}.meta.json"))).unwrap();
        println!("{name}: n={} gt={:.6} grid={:.6}+{:.6}", inst.elements.len(), inst.ground_truth_cost, grid_cost, grid_slack);
    }

    // point-set fixtures
    for (name, spines, per_cluster, seed) in [
        (
            "ps-2cluster",
            vec![
                ps_spine("spine0", &[(0.0, 0.0), (1.0, 0.0)]),
                ps_spine("spine1", &[(100.0, 0.0), (101.0, 0.0)]),
            ],
            15,
            1003u64,
        ),
        (
            "ps-3cluster",
            vec![
                ps_spine("spine0", &[(0.0, 0.0), (1.0, 0.0)]),
                ps_spine("spine1", &[(100.0, 0.0), (101.0, 0.0)]),
                ps_spine("spine2", &[(0.0, 100.0), (1.0, 100.0)]),
            ],
            12,
            1004,
        ),
    ] {
        let inst = plant_point_sets(&spines, per_cluster, jitter, seed).unwrap();
        let lines: Vec<String> = inst
            .elements
            .iter()
            .map(|s| record_to_line(&point_set_record(s.id(), s)))
            .collect();
        std::fs::write(dir.join(format!("{name}.jsonl")), lines.join("\n") + "\n").unwrap();

        let mut grid_cost = 0.0;
        let mut grid_slack = 0.0;
        for (c_idx, spine) in spines.iter().enumerate() {
            let members: Vec<PointSet> = inst
                .elements
                .iter()
                .filter(|s| s.id().starts_with(&format!("c{c_idx}-")))
                .cloned()
                .collect();
            let bbox = bounding_box(
                members.iter().flat_map(|s| s.points().iter().cloned()),
                spine.dim(),
            );
            let spacing = cluster_spacing(&bbox);
            let result = grid_1median_point_sets(&members, l, &bbox, spacing).unwrap();
            grid_cost += result.cost;
            grid_slack += result.slack;
        }

        let meta = FixtureMeta {
            kind: "pointset".into(),
            k: spines.len(),
            l,
            per_cluster,
            jitter,
            seed,
            ground_truth_cost: inst.ground_truth_cost,
            grid_cost,
            grid_slack,
            spines: spines
                .iter()
                .map(|s| point_set_record(s.id(), s))
                .collect::<Vec<RawRecord>>(),
        };
        meta.save(&dir.join(format!("{name}.meta.json"))).unwrap();
        println!("{name}: n={} gt={:.6} grid={:.6}+{:.6}", inst.elements.len(), inst.ground_truth_cost, grid_cost, grid_slack);
    }
}
