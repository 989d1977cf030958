//! Fixture metadata: each shipped dataset carries a sidecar JSON file with
//! its generation parameters, the planted ground-truth cost, and a recorded
//! lattice-search cost with its slack.

use crate::dataset::RawRecord;
use crate::CliError;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixtureMeta {
    pub kind: String,
    pub k: usize,
    pub l: usize,
    pub per_cluster: usize,
    pub jitter: f64,
    pub seed: u64,
    pub ground_truth_cost: f64,
    /// Sum over clusters of the exhaustive lattice 1-median cost.
    pub grid_cost: f64,
    /// Sum over clusters of the lattice slack (n * spacing * sqrt(d) / 2).
    pub grid_slack: f64,
    pub spines: Vec<RawRecord>,
}

impl FixtureMeta {
    pub fn load(path: &Path) -> Result<FixtureMeta, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::input(format!("malformed fixture meta {}: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(self).expect("meta serializes");
        text.push('\n');
        std::fs::write(path, text)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
    }
}
