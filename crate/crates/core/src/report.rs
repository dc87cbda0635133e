//! Machine-readable planning reports.

use serde::{Deserialize, Serialize};

use crate::planner::{LevelStats, Outcome, SearchReport};

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub level: usize,
    pub relation_nodes: usize,
    pub plans_kept: u128,
}

impl From<&LevelStats> for LevelRecord {
    fn from(s: &LevelStats) -> Self {
        LevelRecord {
            level: s.level,
            relation_nodes: s.relation_nodes,
            plans_kept: s.plans_kept,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub version: u32,
    pub command: String,
    pub instance: String,
    pub outcome: Outcome,
    pub plan: Vec<String>,
    pub length: Option<usize>,
    pub levels: Vec<LevelRecord>,
    pub bs_inserted: u64,
    pub bs_hits: u64,
    pub elapsed_ms: u64,
}

impl RunReport {
    pub fn from_search(command: &str, instance: &str, search: &SearchReport) -> Self {
        RunReport {
            version: REPORT_VERSION,
            command: command.to_string(),
            instance: instance.to_string(),
            outcome: search.outcome,
            plan: search.plan().map(|p| p.0.clone()).unwrap_or_default(),
            length: search.length(),
            levels: search.levels.iter().map(LevelRecord::from).collect(),
            bs_inserted: search.bs_inserted,
            bs_hits: search.bs_hits,
            elapsed_ms: search.elapsed.as_millis() as u64,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
