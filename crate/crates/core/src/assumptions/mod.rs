//! Finite regular representation of assumption trees: alternating promise
//! and environment-letter structure, dominant strategy annotations, the
//! unary path codec, compatibility games between processes, and the
//! incremental assumption-propagation pipeline for ordered process sets.
//!
//! Generators are restricted to regular, finitely-branching trees; truly
//! infinitely-branching assumption trees are representable only as
//! parametric families and are out of scope.

mod annotate;
mod compat;
mod generator;
mod propagate;
mod search;
mod unary;

pub use annotate::AnnotationChecker;
pub use compat::{check_compatible, CompatGame, CompatStep, CompatVerdict};
pub use generator::{AnnotatedGenerator, AssumptionGenerator, BranchNode, InputNode, PathStep};
pub use propagate::{propagate, PropagateOptions, PropagateOutcome};
pub use search::{for_each_generator, search_assumption_bounded, SearchOptions};
pub use unary::{decode_unary, encode_unary, UnaryDecode};

use crate::automata::AutomataError;
use crate::dominance::DominanceError;
use crate::ltl::LtlError;
use crate::strategies::StrategyError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssumptionError {
    #[error("malformed generator: {0}")]
    Malformed(String),

    #[error("path must alternate promise and letter steps, starting with a promise")]
    AlternationViolated,

    #[error("interface mismatch: {0}")]
    InterfaceMismatch(String),

    #[error("unary code contains a character other than 0 or 1")]
    BadUnaryDigit,

    #[error("unsupported structure: {0}")]
    Unsupported(String),

    #[error("no compatible dominant assumption for process `{process}` within {examined} candidates at node bound {bound}")]
    NoCandidate {
        process: String,
        bound: usize,
        examined: usize,
    },

    #[error("residual assumption of process `{process}` restricts the external inputs")]
    ResidualNotUniversal { process: String },

    #[error("no promise selection resolves the generator of process `{process}` against its environment")]
    SelectionUnavailable { process: String },

    #[error(transparent)]
    Ltl(#[from] LtlError),

    #[error(transparent)]
    Strategy(#[from] StrategyError),

    #[error(transparent)]
    Dominance(#[from] DominanceError),

    #[error(transparent)]
    Automata(#[from] AutomataError),
}
