//! Newline-delimited dataset ingestion.
//!
//! One JSON record per line: `{"id": ..., "kind": "trajectory" | "pointset",
//! "points": [[x, y, ...], ...]}`. A file holds one kind and one dimension;
//! ids are unique within a file.

use crate::CliError;
use covermedian::{Point, PointSet, Trajectory};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::path::Path;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RawRecord {
    pub id: String,
    pub kind: String,
    pub points: Vec<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DatasetKind {
    Trajectory,
    PointSet,
}

impl DatasetKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DatasetKind::Trajectory => "trajectory",
            DatasetKind::PointSet => "pointset",
        }
    }
}

/// A parsed, validated dataset: one element kind, one dimension, unique ids.
#[derive(Clone, Debug)]
pub struct Dataset {
    pub kind: DatasetKind,
    pub dimension: usize,
    pub trajectories: Vec<Trajectory>,
    pub point_sets: Vec<PointSet>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        match self.kind {
            DatasetKind::Trajectory => self.trajectories.len(),
            DatasetKind::PointSet => self.point_sets.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn ids(&self) -> Vec<String> {
        match self.kind {
            DatasetKind::Trajectory => self.trajectories.iter().map(|t| t.id().to_string()).collect(),
            DatasetKind::PointSet => self.point_sets.iter().map(|s| s.id().to_string()).collect(),
        }
    }
}

pub fn load_dataset(path: &Path) -> Result<Dataset, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    parse_dataset(&text)
}

pub fn parse_dataset(text: &str) -> Result<Dataset, CliError> {
    let mut kind: Option<DatasetKind> = None;
    let mut dimension: Option<usize> = None;
    let mut seen_ids: HashSet<String> = HashSet::new();
    let mut trajectories = Vec::new();
    let mut point_sets = Vec::new();

    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        if line.trim().is_empty() {
            continue;
        }
        let record: RawRecord = serde_json::from_str(line)
            .map_err(|e| CliError::input(format!("line {lineno}: malformed record: {e}")))?;
        let record_kind = match record.kind.as_str() {
            "trajectory" => DatasetKind::Trajectory,
            "pointset" => DatasetKind::PointSet,
            other => {
                return Err(CliError::input(format!(
                    "line {lineno}: unknown kind `{other}` (expected trajectory or pointset)"
                )))
            }
        };
        match kind {
            None => kind = Some(record_kind),
            Some(k) if k != record_kind => {
                return Err(CliError::input(format!(
                    "line {lineno}: record `{}` has kind {}, file started with {}",
                    record.id,
                    record_kind.as_str(),
                    k.as_str()
                )))
            }
            _ => {}
        }
        if record.points.is_empty() {
            return Err(CliError::input(format!(
                "line {lineno}: record `{}` has no points",
                record.id
            )));
        }
        for coords in &record.points {
            match dimension {
                None => dimension = Some(coords.len()),
                Some(d) if d != coords.len() => {
                    return Err(CliError::input(format!(
                        "line {lineno}: record `{}` has a {}-dimensional point, file is {d}-dimensional",
                        record.id,
                        coords.len()
                    )))
                }
                _ => {}
            }
        }
        if !seen_ids.insert(record.id.clone()) {
            return Err(CliError::input(format!(
                "line {lineno}: duplicate id `{}`",
                record.id
            )));
        }
        let points: Result<Vec<Point>, _> = record.points.iter().map(|c| Point::new(c.clone())).collect();
        let points = points
            .map_err(|e| CliError::input(format!("line {lineno}: record `{}`: {e}", record.id)))?;
        match record_kind {
            DatasetKind::Trajectory => {
                let t = Trajectory::new(record.id.clone(), points)
                    .map_err(|e| CliError::input(format!("line {lineno}: {e}")))?;
                trajectories.push(t);
            }
            DatasetKind::PointSet => {
                let s = PointSet::new(record.id.clone(), points)
                    .map_err(|e| CliError::input(format!("line {lineno}: {e}")))?;
                point_sets.push(s);
            }
        }
    }

    let kind = kind.ok_or_else(|| CliError::input("dataset contains no records".to_string()))?;
    Ok(Dataset {
        kind,
        dimension: dimension.expect("dimension set with first record"),
        trajectories,
        point_sets,
    })
}

pub fn trajectory_record(id: &str, t: &Trajectory) -> RawRecord {
    RawRecord {
        id: id.to_string(),
        kind: "trajectory".to_string(),
        points: t.points().iter().map(|p| p.coords().to_vec()).collect(),
    }
}

pub fn point_set_record(id: &str, s: &PointSet) -> RawRecord {
    RawRecord {
        id: id.to_string(),
        kind: "pointset".to_string(),
        points: s.points().iter().map(|p| p.coords().to_vec()).collect(),
    }
}

pub fn record_to_line(record: &RawRecord) -> String {
    serde_json::to_string(record).expect("record serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_small_trajectory_file() {
        let text = r#"{"id":"a","kind":"trajectory","points":[[0.0,0.0],[1.0,0.5]]}
{"id":"b","kind":"trajectory","points":[[2.0,2.0]]}"#;
        let ds = parse_dataset(text).unwrap();
        assert_eq!(ds.kind, DatasetKind::Trajectory);
        assert_eq!(ds.dimension, 2);
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.trajectories[0].id(), "a");
    }

    #[test]
    fn rejects_duplicate_ids() {
        let text = r#"{"id":"a","kind":"trajectory","points":[[0.0]]}
{"id":"a","kind":"trajectory","points":[[1.0]]}"#;
        let err = parse_dataset(text).unwrap_err();
        assert_eq!(err.code, 2);
        assert!(err.message.contains("line 2"), "{}", err.message);
        assert!(err.message.contains("duplicate id"));
    }

    #[test]
    fn rejects_mixed_dimension() {
        let text = r#"{"id":"a","kind":"pointset","points":[[0.0,0.0]]}
{"id":"b","kind":"pointset","points":[[1.0]]}"#;
        let err = parse_dataset(text).unwrap_err();
        assert_eq!(err.code, 2);
        assert!(err.message.contains("line 2"));
        assert!(err.message.contains('b'));
    }

    #[test]
    fn rejects_mixed_kinds_and_bad_json() {
        let text = r#"{"id":"a","kind":"pointset","points":[[0.0]]}
{"id":"b","kind":"trajectory","points":[[1.0]]}"#;
        assert!(parse_dataset(text).is_err());
        assert!(parse_dataset("not json").is_err());
        assert!(parse_dataset("").is_err());
    }

    #[test]
    fn records_round_trip_through_lines() {
        let t = Trajectory::new(
            "x",
            vec![
                Point::new(vec![0.1, 0.2]).unwrap(),
                Point::new(vec![0.30000000000000004, 1.0 / 3.0]).unwrap(),
            ],
        )
        .unwrap();
        let line = record_to_line(&trajectory_record("x", &t));
        let ds = parse_dataset(&line).unwrap();
        assert_eq!(ds.trajectories[0], t, "shortest round-trip floats must re-ingest exactly");
    }
}
