//! Conformant planning over symbolically encoded nondeterministic domains.
pub mod bench;
pub mod dd;
pub mod lang;
pub mod oracle;
pub mod par;
pub mod planner;
mod problem;
pub mod report;
pub mod symdomain;
#[cfg(test)]
pub(crate) mod testutil;

pub use problem::Problem;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Lang(#[from] lang::LangError),
    #[error(transparent)]
    Symbolic(#[from] symdomain::SymError),
    #[error(transparent)]
    Plan(#[from] planner::PlanError),
    #[error(transparent)]
    Oracle(#[from] oracle::OracleError),
    #[error(transparent)]
    Bench(#[from] bench::BenchError),
    #[error(transparent)]
    Dd(#[from] dd::DdError),
}
