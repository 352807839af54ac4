//! Nondeterministic Büchi word automata over valuation alphabets.
//!
//! Guards are symbolic predicates rather than letter lists: the alphabet
//! `2^V` is exponential, and cube guards keep the automata small.
//! Complementation is deliberately absent — negation happens at the LTL
//! level before translation.

mod buchi;
mod guard;
mod tableau;

pub use buchi::{BuchiAutomaton, LassoWitness, StateId};
pub use guard::{Cube, Guard};
pub use tableau::ltl_to_buchi;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomataError {
    #[error("edge references an undeclared state")]
    UnknownState,

    #[error("guard references variables outside the automaton alphabet")]
    GuardOutsideAlphabet,

    #[error("projection must keep a subset of the alphabet")]
    ProjectionOutsideAlphabet,

    #[error("word ranges over variables outside the automaton alphabet")]
    WordOutsideAlphabet,
}
