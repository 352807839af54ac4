//! Deciding winning and remorse-free dominance of finite-state strategies
//! against prioritized objectives, plus bounded synthesis by canonical
//! enumeration and an independent brute-force falsification oracle.
//!
//! Nothing here complements a Büchi automaton: negated objectives are
//! obtained by LTL-level negation and translated directly.

mod brute;
mod problem;
#[cfg(test)]
mod sbs_tests;
mod synth;
mod verdict;

pub use problem::Problem;
pub use synth::{for_each_canonical_transducer, SynthesisResult};
pub use verdict::{Counterexample, DominanceVerdict, WinningVerdict};

use crate::automata::AutomataError;
use crate::ltl::LtlError;
use crate::strategies::StrategyError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DominanceError {
    #[error("interface mismatch: {0}")]
    InterfaceMismatch(String),

    #[error("brute-force enumeration of {candidates} candidate pairs exceeds the bound guard")]
    BoundExceeded { candidates: u128 },

    #[error(transparent)]
    Ltl(#[from] LtlError),

    #[error(transparent)]
    Strategy(#[from] StrategyError),

    #[error(transparent)]
    Automata(#[from] AutomataError),
}
