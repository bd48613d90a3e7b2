//! Explicit-state GR(1) realizability checking, counter-strategy extraction
//! and environment assumption mining.

pub mod abstraction;
pub mod arena;
pub mod candidates;
pub mod graph;
pub mod logic;
pub mod patterns;
pub mod refine;
pub mod rules;
pub mod solver;
pub mod specml;
pub mod valuation;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] specml::ParseError),
    #[error(transparent)]
    StateSpace(#[from] arena::StateSpaceLimitExceeded),
    #[error(transparent)]
    Search(#[from] refine::SearchError),
}
