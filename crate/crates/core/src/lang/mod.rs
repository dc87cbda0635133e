//! The domain description language: lexer, parser, static checks, the
//! compiler to a [`SymbolicDomain`](crate::symdomain::SymbolicDomain), and an
//! explicit transition semantics that never touches decision diagrams.

mod ast;
mod compile;
mod lexer;
mod parser;
mod semantics;
mod validate;

pub use ast::{ActionDecl, CausalRule, DomainAst, Formula, Ident, Literal, Span};
pub use compile::{compile, formula_to_bdd};
pub use lexer::{tokenize, Keyword, Token, TokenKind};
pub use parser::parse;
pub use semantics::{explicit_step, ExplicitModel, State, MAX_EXPLICIT_FLUENTS};
pub use validate::{validate, CheckedDomain};

use thiserror::Error;

use crate::dd::DdError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LangError {
    #[error("{span}: unexpected character `{found}`")]
    Lex { found: char, span: Span },
    #[error("{span}: expected {expected}, found {found}")]
    Syntax {
        expected: String,
        found: String,
        span: Span,
    },
    #[error("{span}: `{name}` is already declared at {first}")]
    Duplicate { name: String, span: Span, first: Span },
    #[error("{span}: undeclared {kind} `{name}`")]
    Undeclared {
        kind: &'static str,
        name: String,
        span: Span,
    },
    #[error("missing {clause} clause")]
    MissingClause { clause: &'static str },
    #[error("{span}: second {clause} clause")]
    RepeatedClause { clause: &'static str, span: Span },
    #[error("{span}: action `{action}` can cause both `{fluent}` and `!{fluent}` in the same state")]
    ConflictingEffects {
        action: String,
        fluent: String,
        span: Span,
    },
    #[error("the domain declares no actions")]
    NoActions,
    #[error("no state satisfies the ALWAYS constraints")]
    EmptyStateSpace,
    #[error("no state satisfies INITIALLY together with the ALWAYS constraints")]
    EmptyInitial,
    #[error("no state satisfies CONFORMANT together with the ALWAYS constraints")]
    EmptyGoal,
    #[error("{count} fluents exceed the explicit-state limit of {limit}")]
    TooManyFluents { count: usize, limit: usize },
    #[error("state {0:#x} violates the ALWAYS constraints")]
    IllegalState(u64),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("unknown fluent `{0}`")]
    UnknownFluent(String),
    #[error(transparent)]
    Dd(#[from] DdError),
}

#[cfg(test)]
mod tests;
