//! Check reports and numerical invariants shared by the verification
//! stages.

use serde::Serialize;

/// One named pass/fail line of a verification report.
#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// An ordered list of checks. A report passes when every entry does.
#[derive(Debug, Clone, Default, Serialize)]
#[serde(transparent)]
pub struct CheckReport {
    pub entries: Vec<CheckEntry>,
}

impl CheckReport {
    pub fn new() -> Self {
        CheckReport::default()
    }

    pub fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.entries.push(CheckEntry {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| !e.passed)
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.entries.extend(other.entries);
    }
}

/// The numerical invariants of a surface: `K^2`, geometric genus,
/// holomorphic Euler characteristic and irregularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Invariants {
    #[serde(rename = "K2")]
    pub k2: i64,
    pub pg: u64,
    pub q: i64,
    pub chi: i64,
}

impl Invariants {
    /// `chi(O) = 1 - q + p_g` must hold; callers compute `q` from it.
    pub fn consistent(&self) -> bool {
        self.chi == 1 - self.q + self.pg as i64
    }
}
