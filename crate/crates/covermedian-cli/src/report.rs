//! The machine-readable run report emitted by the `cluster` subcommand.

use crate::dataset::RawRecord;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub params: ParamsEcho,
    pub seed: u64,
    pub mode_flags: ModeFlags,
    pub centers: Vec<RawRecord>,
    pub assignment: Vec<AssignmentRow>,
    pub total_cost: f64,
    pub counters: CountersEcho,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParamsEcho {
    pub kind: String,
    pub n: usize,
    pub dimension: usize,
    pub k: usize,
    pub l: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub alpha: f64,
    pub mode: String,
    pub subset_budget: String,
    pub repetitions: usize,
    pub cover_ratio_cap: Option<f64>,
    pub cover_sample_size: usize,
    pub max_candidates: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModeFlags {
    /// True when no cover-ratio cap is in effect.
    pub paper_faithful: bool,
    /// True when epsilon/delta range checks were overridden.
    pub loose_params: bool,
    /// Derived sample size m per subset.
    pub sample_size: usize,
    /// The cover ratio the construction would request uncapped.
    pub theoretical_cover_ratio: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AssignmentRow {
    pub id: String,
    pub center_index: usize,
    pub distance: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CountersEcho {
    pub distance_evals: u64,
    pub projection_evals: u64,
    pub wall_ms: u64,
}

impl RunReport {
    /// Pretty JSON document, trailing newline included. Field order is fixed
    /// by the struct layout and floats use the shortest round-trip
    /// representation, so identical runs serialize to identical bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        s.push('\n');
        s
    }

    /// The report with wall-clock timing zeroed: every byte of this document
    /// is reproducible from (input, params, seed).
    pub fn canonical(&self) -> RunReport {
        let mut clone = self.clone();
        clone.counters.wall_ms = 0;
        clone
    }
}

/// Benchmark table: one row per (n, seed) plus per-n medians.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub medians: Vec<BenchMedian>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub seed: u64,
    pub total_cost: f64,
    pub distance_evals: u64,
    pub projection_evals: u64,
    pub wall_ms: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchMedian {
    pub n: usize,
    pub distance_evals: u64,
    pub wall_ms: u64,
}

impl BenchReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        s.push('\n');
        s
    }
}
