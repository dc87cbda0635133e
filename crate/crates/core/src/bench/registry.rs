use serde::Serialize;

use super::{BenchError, Family, FamilySpec, Variant};
use crate::planner::Outcome;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectedRecord {
    pub spec: FamilySpec,
    pub outcome: Outcome,
    /// Plan length, for solvable instances.
    pub length: Option<usize>,
    /// Search steps reported for unsolvable instances; informational.
    pub steps: Option<usize>,
    pub source: &'static str,
}

fn plan(spec: FamilySpec, length: usize, source: &'static str) -> ExpectedRecord {
    ExpectedRecord {
        spec,
        outcome: Outcome::Plan,
        length: Some(length),
        steps: None,
        source,
    }
}

const BMTC_LOW: [(usize, [usize; 9]); 5] = [
    (2, [2, 4, 6, 8, 10, 12, 14, 16, 18]),
    (3, [2, 3, 5, 7, 9, 11, 13, 15, 17]),
    (4, [2, 3, 4, 6, 8, 10, 12, 14, 16]),
    (5, [2, 3, 4, 5, 7, 9, 11, 13, 15]),
    (6, [2, 3, 4, 5, 6, 8, 10, 12, 14]),
];

const SQUARE: [(Variant, [usize; 10]); 3] = [
    (Variant::Corner, [2, 6, 10, 14, 18, 22, 26, 30, 34, 38]),
    (Variant::Face, [2, 7, 12, 17, 22, 27, 32, 37, 42, 47]),
    (Variant::Center, [2, 8, 14, 20, 26, 32, 38, 44, 50, 56]),
];

const CUBE_SIZES: [usize; 10] = [2, 3, 4, 5, 6, 7, 8, 9, 10, 15];
const CUBE: [(Variant, [usize; 10]); 3] = [
    (Variant::Corner, [3, 6, 9, 12, 15, 18, 21, 24, 27, 42]),
    (Variant::Face, [3, 6, 11, 14, 19, 22, 27, 30, 35, 54]),
    (Variant::Center, [3, 6, 12, 15, 21, 24, 30, 33, 39, 60]),
];

const OMELETTE: [(usize, usize); 11] = [
    (3, 9),
    (4, 11),
    (5, 13),
    (6, 15),
    (7, 17),
    (8, 19),
    (9, 21),
    (10, 23),
    (15, 33),
    (20, 43),
    (30, 63),
];

/// Every published instance, in family order.
pub fn registry() -> Vec<ExpectedRecord> {
    let mut out = Vec::new();
    for p in 2..=10 {
        out.push(plan(FamilySpec::bt(p), p, "published BT plan lengths"));
    }
    for p in (2..=10).chain([16]) {
        out.push(plan(FamilySpec::btc(p), 2 * p - 1, "published BTC plan lengths"));
    }
    for (t, lengths) in BMTC_LOW {
        for (p, len) in (2..=10).zip(lengths) {
            out.push(plan(
                FamilySpec::bmtc(p, t, Variant::Low),
                len,
                "published BMTC low-uncertainty plan lengths",
            ));
        }
    }
    for p in (2..=10).chain([16]) {
        out.push(plan(FamilySpec::btuc(p), 2 * p - 1, "published BTUC plan lengths"));
    }
    for r in 2..=10 {
        out.push(plan(FamilySpec::ring(r), 3 * r - 1, "published RING plan lengths"));
    }
    for r in 2..=10 {
        for i in 1..=5 {
            out.push(plan(FamilySpec::ndring(r, i), 3 * r - 1, "published NDRING plan lengths"));
        }
    }
    for r in 2..=10 {
        out.push(plan(FamilySpec::uring(r), 3 * r - 1, "published URING plan lengths"));
    }
    for (goal, lengths) in SQUARE {
        for (n, len) in (2..=20).step_by(2).zip(lengths) {
            out.push(plan(FamilySpec::square(n, goal), len, "published SQUARE plan lengths"));
        }
    }
    for (goal, lengths) in CUBE {
        for (n, len) in CUBE_SIZES.into_iter().zip(lengths) {
            out.push(plan(FamilySpec::cube(n, goal), len, "published CUBE plan lengths"));
        }
    }
    for (i, steps) in OMELETTE {
        out.push(ExpectedRecord {
            spec: FamilySpec::omelette(i),
            outcome: Outcome::Fail,
            length: None,
            steps: Some(steps),
            source: "published OMELETTE results",
        });
    }
    out
}

pub fn expected(spec: &FamilySpec) -> Result<ExpectedRecord, BenchError> {
    registry()
        .into_iter()
        .find(|r| r.spec == *spec)
        .ok_or_else(|| BenchError::NoRecord(spec.to_string()))
}

/// Registry rows of one family.
pub(crate) fn family_rows(family: Family) -> Vec<ExpectedRecord> {
    registry().into_iter().filter(|r| r.spec.family == family).collect()
}
