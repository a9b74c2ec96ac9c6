//! The JSON run report.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Ok,
    Iso,
    NonIso,
    Error,
}

/// A coset `{x -> representative(sigma(x))}` of a permutation group on the
/// source elements. Maps are 0-based image arrays.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetSummary {
    pub stabilizer_order: u128,
    pub stabilizer_generators: Vec<Vec<usize>>,
    pub representative: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<String>,
    pub outcome: Outcome,
    pub coset: Option<CosetSummary>,
    /// command-specific results
    pub details: serde_json::Value,
    /// milliseconds per phase, only with `--timings`
    pub timings: Option<BTreeMap<String, f64>>,
    pub error: Option<String>,
}

/// Pretty JSON with every object's keys in sorted order.
pub fn to_sorted_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

impl RunReport {
    pub fn emit(&self) -> String {
        to_sorted_json(self).expect("reports serialize")
    }

    pub fn parse(text: &str) -> serde_json::Result<RunReport> {
        serde_json::from_str(text)
    }
}
