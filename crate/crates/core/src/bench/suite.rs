use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::registry::family_rows;
use super::{expected, generate, Family, FamilySpec, Variant};
use crate::par::{self, Execution};
use crate::planner::{verify_symbolic, Outcome, PlannerOptions};
use crate::{Error, Problem};

/// Selects instances. Without a family the selection is empty.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SuiteFilter {
    pub family: Option<Family>,
    pub variant: Option<Variant>,
    pub min: Option<usize>,
    pub max: Option<usize>,
    /// BMTC toilets or NDRING noninertial fluents.
    pub extra: Option<usize>,
}

impl SuiteFilter {
    pub fn family(family: Family) -> Self {
        SuiteFilter {
            family: Some(family),
            ..SuiteFilter::default()
        }
    }

    fn admits(&self, spec: &FamilySpec) -> bool {
        Some(spec.family) == self.family
            && self.variant.is_none_or(|v| v == spec.variant)
            && self.min.is_none_or(|m| spec.size >= m)
            && self.max.is_none_or(|m| spec.size <= m)
            && self.extra.is_none_or(|e| e == spec.extra)
    }

    /// Published instances passing the filter; when there are none, every
    /// size of the `min..=max` range.
    pub fn instances(&self) -> Vec<FamilySpec> {
        let Some(family) = self.family else {
            return Vec::new();
        };
        let published: Vec<FamilySpec> = family_rows(family)
            .into_iter()
            .map(|r| r.spec)
            .filter(|s| self.admits(s))
            .collect();
        if !published.is_empty() {
            return published;
        }
        let (Some(min), Some(max)) = (self.min, self.max) else {
            return Vec::new();
        };
        (min..=max)
            .map(|n| {
                let mut spec = FamilySpec::new(family, n);
                if let Some(v) = self.variant {
                    spec.variant = v;
                }
                if let Some(e) = self.extra {
                    spec.extra = e;
                }
                spec
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Budget {
    pub options: PlannerOptions,
    pub exec: Execution,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteRow {
    pub instance: String,
    pub spec: FamilySpec,
    pub expected_outcome: Option<Outcome>,
    pub expected_length: Option<usize>,
    pub outcome: Option<Outcome>,
    pub length: Option<usize>,
    pub plan: Option<String>,
    pub bs_inserted: u64,
    pub bs_hits: u64,
    pub elapsed_ms: u64,
    pub error: Option<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SuiteReport {
    pub rows: Vec<SuiteRow>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn to_text(&self) -> String {
        let header = ["instance", "expected", "outcome", "length", "#BS", "#BSH", "ms", "status"];
        let show = |o: Option<Outcome>, l: Option<usize>| match (o, l) {
            (Some(o), Some(l)) => format!("{o} {l}"),
            (Some(o), None) => o.to_string(),
            _ => "-".into(),
        };
        let cells: Vec<[String; 8]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.instance.clone(),
                    show(r.expected_outcome, r.expected_length),
                    match &r.error {
                        Some(_) => "ERROR".into(),
                        None => show(r.outcome, None),
                    },
                    r.length.map_or("-".into(), |l| l.to_string()),
                    r.bs_inserted.to_string(),
                    r.bs_hits.to_string(),
                    r.elapsed_ms.to_string(),
                    if r.pass { "ok" } else { "MISMATCH" }.into(),
                ]
            })
            .collect();
        let mut widths = header.map(str::len);
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let mut out = String::new();
        let mut line = |cols: &[String]| {
            let mut s = String::new();
            for (i, (c, w)) in cols.iter().zip(widths).enumerate() {
                if i > 0 {
                    s.push_str("  ");
                }
                let _ = write!(s, "{c:<w$}");
            }
            out.push_str(s.trim_end());
            out.push('\n');
        };
        line(&header.map(String::from));
        for row in &cells {
            line(row);
        }
        for row in self.rows.iter().filter(|r| r.error.is_some()) {
            let _ = writeln!(out, "{}: {}", row.instance, row.error.as_deref().unwrap_or_default());
        }
        out
    }
}

/// Generates, plans and checks one instance in a fresh store.
pub fn run_instance(spec: &FamilySpec, options: &PlannerOptions) -> SuiteRow {
    let record = expected(spec).ok();
    let mut row = SuiteRow {
        instance: spec.to_string(),
        spec: *spec,
        expected_outcome: record.as_ref().map(|r| r.outcome),
        expected_length: record.as_ref().and_then(|r| r.length),
        outcome: None,
        length: None,
        plan: None,
        bs_inserted: 0,
        bs_hits: 0,
        elapsed_ms: 0,
        error: None,
        pass: false,
    };
    let start = Instant::now();
    let result = (|| -> Result<_, Error> {
        let mut problem = Problem::from_source(&generate(spec)?)?;
        let report = problem.plan(options)?;
        let verified = match report.plan() {
            Some(p) => verify_symbolic(&mut problem.store, &problem.domain, p.actions())?.conformant,
            None => true,
        };
        Ok((report, verified))
    })();
    row.elapsed_ms = start.elapsed().as_millis() as u64;
    match result {
        Ok((report, verified)) => {
            row.outcome = Some(report.outcome);
            row.length = report.length();
            row.plan = report.plan().map(|p| p.to_string());
            row.bs_inserted = report.bs_inserted;
            row.bs_hits = report.bs_hits;
            row.pass = verified
                && match &record {
                    Some(r) => row.outcome == Some(r.outcome) && row.length == r.length,
                    None => report.outcome != Outcome::Unknown,
                };
            if !verified {
                row.error = Some("returned plan fails verification".into());
            }
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Runs every selected instance, one store each, independently.
pub fn run_suite(filter: &SuiteFilter, budget: &Budget) -> SuiteReport {
    let specs = filter.instances();
    SuiteReport {
        rows: par::map(budget.exec, &specs, |s| run_instance(s, &budget.options)),
    }
}
