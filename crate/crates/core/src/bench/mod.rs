//! Benchmark families: deterministic domain generators, a registry of
//! published results, and a suite runner that plans and compares.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

mod generate;
mod registry;
mod suite;

pub use generate::generate;
pub use registry::{expected, registry, ExpectedRecord};
pub use suite::{run_instance, run_suite, Budget, SuiteFilter, SuiteReport, SuiteRow};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BenchError {
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("unknown variant `{0}`")]
    UnknownVariant(String),
    #[error("{spec}: {reason}")]
    InvalidSpec { spec: String, reason: String },
    #[error("no published result for {0}")]
    NoRecord(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Family {
    Bt,
    Btc,
    Bmtc,
    Btuc,
    Ring,
    Uring,
    Ndring,
    Square,
    Cube,
    Omelette,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Bt,
        Family::Btc,
        Family::Bmtc,
        Family::Btuc,
        Family::Ring,
        Family::Uring,
        Family::Ndring,
        Family::Square,
        Family::Cube,
        Family::Omelette,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Bt => "BT",
            Family::Btc => "BTC",
            Family::Bmtc => "BMTC",
            Family::Btuc => "BTUC",
            Family::Ring => "RING",
            Family::Uring => "URING",
            Family::Ndring => "NDRING",
            Family::Square => "SQUARE",
            Family::Cube => "CUBE",
            Family::Omelette => "OMELETTE",
        }
    }

    fn default_variant(self) -> Variant {
        match self {
            Family::Bmtc => Variant::Low,
            Family::Square | Family::Cube => Variant::Corner,
            _ => Variant::Plain,
        }
    }

    fn allows(self, v: Variant) -> bool {
        match self {
            Family::Bmtc => matches!(v, Variant::Low | Variant::Mid | Variant::High),
            Family::Square | Family::Cube => matches!(v, Variant::Corner | Variant::Face | Variant::Center),
            Family::Btuc => matches!(v, Variant::Plain | Variant::Uncertain),
            _ => v == Variant::Plain,
        }
    }

    /// Smallest size accepted by the generator.
    fn min_size(self) -> usize {
        match self {
            Family::Ring | Family::Uring | Family::Ndring | Family::Square | Family::Cube => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| BenchError::UnknownFamily(s.to_string()))
    }
}

/// Initial uncertainty for BMTC, goal for SQUARE/CUBE, and the uncertain
/// clogging instance of BTUC.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Variant {
    Plain,
    Low,
    Mid,
    High,
    Corner,
    Face,
    Center,
    Uncertain,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Plain => "PLAIN",
            Variant::Low => "LOW",
            Variant::Mid => "MID",
            Variant::High => "HIGH",
            Variant::Corner => "CORNER",
            Variant::Face => "FACE",
            Variant::Center => "CENTER",
            Variant::Uncertain => "UNCERTAIN",
        }
    }
}

impl FromStr for Variant {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Variant::Plain,
            Variant::Low,
            Variant::Mid,
            Variant::High,
            Variant::Corner,
            Variant::Face,
            Variant::Center,
            Variant::Uncertain,
        ]
        .into_iter()
        .find(|v| v.name().eq_ignore_ascii_case(s))
        .ok_or_else(|| BenchError::UnknownVariant(s.to_string()))
    }
}

/// One benchmark instance. `extra` is the number of toilets for BMTC and
/// the number of noninertial fluents for NDRING, and 0 elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub size: usize,
    pub extra: usize,
    pub variant: Variant,
}

impl FamilySpec {
    /// Spec with the family's default variant and no extra parameter.
    pub fn new(family: Family, size: usize) -> Self {
        FamilySpec {
            family,
            size,
            extra: match family {
                Family::Bmtc => 1,
                _ => 0,
            },
            variant: family.default_variant(),
        }
    }

    pub fn with_extra(self, extra: usize) -> Self {
        FamilySpec { extra, ..self }
    }

    pub fn with_variant(self, variant: Variant) -> Self {
        FamilySpec { variant, ..self }
    }

    pub fn bt(p: usize) -> Self {
        FamilySpec::new(Family::Bt, p)
    }

    pub fn btc(p: usize) -> Self {
        FamilySpec::new(Family::Btc, p)
    }

    pub fn btuc(p: usize) -> Self {
        FamilySpec::new(Family::Btuc, p)
    }

    pub fn btuc_uncertain(p: usize) -> Self {
        FamilySpec::btuc(p).with_variant(Variant::Uncertain)
    }

    pub fn bmtc(p: usize, toilets: usize, uncertainty: Variant) -> Self {
        FamilySpec::new(Family::Bmtc, p).with_extra(toilets).with_variant(uncertainty)
    }

    pub fn ring(r: usize) -> Self {
        FamilySpec::new(Family::Ring, r)
    }

    pub fn uring(r: usize) -> Self {
        FamilySpec::new(Family::Uring, r)
    }

    pub fn ndring(r: usize, noninertial: usize) -> Self {
        FamilySpec::new(Family::Ndring, r).with_extra(noninertial)
    }

    pub fn square(n: usize, goal: Variant) -> Self {
        FamilySpec::new(Family::Square, n).with_variant(goal)
    }

    pub fn cube(n: usize, goal: Variant) -> Self {
        FamilySpec::new(Family::Cube, n).with_variant(goal)
    }

    pub fn omelette(i: usize) -> Self {
        FamilySpec::new(Family::Omelette, i)
    }

    pub fn check(&self) -> Result<(), BenchError> {
        let invalid = |reason: &str| {
            Err(BenchError::InvalidSpec {
                spec: self.to_string(),
                reason: reason.to_string(),
            })
        };
        if self.size < self.family.min_size() {
            return invalid(&format!("size must be at least {}", self.family.min_size()));
        }
        if !self.family.allows(self.variant) {
            return invalid(&format!("variant {} does not apply", self.variant.name()));
        }
        match self.family {
            Family::Bmtc if self.extra == 0 => invalid("at least one toilet is required"),
            Family::Bmtc | Family::Ndring => Ok(()),
            _ if self.extra != 0 => invalid("family takes no second parameter"),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}", self.family, self.size)?;
        if matches!(self.family, Family::Bmtc | Family::Ndring) {
            write!(f, ",{}", self.extra)?;
        }
        if self.variant != Variant::Plain {
            write!(f, ",{}", self.variant.name())?;
        }
        f.write_str(")")
    }
}
