//! Experiment reports and CSV profile emission.

use serde::{Deserialize, Serialize};

pub const REPORT_VERSION: u32 = 1;

/// An assertable outcome of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(name: &str, passed: bool) -> Self {
        Check { name: name.into(), passed, note: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Min, median, mean and max of a sample, the mean summed in index order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub min: f64,
    pub median: f64,
    pub mean: f64,
    pub max: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Summary {
        assert!(!values.is_empty(), "summary of an empty sample");
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let m = sorted.len();
        let median = if m % 2 == 1 { sorted[m / 2] } else { (sorted[m / 2 - 1] + sorted[m / 2]) / 2.0 };
        Summary {
            min: sorted[0],
            median,
            mean: values.iter().sum::<f64>() / m as f64,
            max: sorted[m - 1],
        }
    }
}

/// One experiment's persisted record. `summary` holds the kind-specific
/// statistics; every number in it can be recomputed from the CSV files
/// listed in `profiles`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub report_version: u32,
    pub id: String,
    pub kind: String,
    pub group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    pub params: serde_json::Value,
    pub summary: serde_json::Value,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub profiles: Vec<String>,
    pub wall_time_s: f64,
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn summary_as<T: serde::de::DeserializeOwned>(&self) -> serde_json::Result<T> {
        serde_json::from_value(self.summary.clone())
    }
}

/// A CSV file produced by an experiment, written next to its report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileFile {
    pub name: String,
    pub contents: Vec<u8>,
}

impl ProfileFile {
    /// Serialises `rows` with a header taken from the row type.
    pub fn from_rows<R: Serialize>(name: String, rows: &[R]) -> anyhow::Result<Self> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            w.serialize(r)?;
        }
        Ok(ProfileFile { name, contents: w.into_inner()? })
    }
}

/// A report together with the profile files backing it.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub report: ExperimentReport,
    pub profiles: Vec<ProfileFile>,
}
