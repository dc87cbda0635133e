//! Reduced ordered binary decision diagrams.
//!
//! All functions live in a shared [`NodeStore`]. A [`Bdd`] is a handle into one
//! store; because nodes are hash-consed through the unique table, two handles
//! from the same store are equal exactly when they denote the same boolean
//! function.
//!
//! Variables are identified by a stable [`VarId`]. Their position in the
//! variable order is tracked separately, so fresh variables may be inserted
//! anywhere in the order (the planner allocates plan variables between the
//! action and state groups while the search runs). Moving variables that
//! already exist is not supported once nodes have been built.

mod dot;
mod ops;
mod quant;
mod sat;
mod store;

pub use sat::Assignment;
pub use store::{NodeStore, StoreConfig, UNIQUE_TABLE_BITS_ENV};

use thiserror::Error;

/// Stable identity of a decision variable inside one store.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub(crate) u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Handle to a boolean function in a [`NodeStore`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bdd {
    pub(crate) store: u32,
    pub(crate) node: u32,
}

impl Bdd {
    pub fn is_false(self) -> bool {
        self.node == store::FALSE
    }

    pub fn is_true(self) -> bool {
        self.node == store::TRUE
    }

    pub fn is_const(self) -> bool {
        self.node <= store::TRUE
    }

    /// Raw node index, unique within the owning store.
    pub fn node_index(self) -> u32 {
        self.node
    }
}

/// Binary boolean connectives accepted by [`NodeStore::apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    And,
    Or,
    Xor,
    Implies,
    Iff,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DdError {
    #[error("unknown variable #{0}")]
    UnknownVariable(u32),
    #[error("handle belongs to a different node store")]
    ForeignHandle,
    #[error("renaming vectors differ in length ({from} vs {to})")]
    LengthMismatch { from: usize, to: usize },
    #[error("variable `{0}` appears more than once in a renaming")]
    DuplicateVariable(String),
    #[error("renaming target `{0}` already occurs in the function")]
    OverlappingSupport(String),
    #[error("assignment does not give a value to `{0}`")]
    MissingAssignment(String),
    #[error("variable order cannot change after nodes have been created")]
    ReorderAfterCreation,
    #[error("invalid variable order: {0}")]
    InvalidOrder(String),
    #[error("node `{var}` would violate the variable order")]
    OrderViolation { var: String },
    #[error("node limit of {limit} nodes exhausted")]
    NodeLimit { limit: usize },
}

pub type DdResult<T> = Result<T, DdError>;

#[cfg(test)]
pub(crate) mod tests;
