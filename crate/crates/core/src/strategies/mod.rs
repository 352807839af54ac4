//! Finite-state strategies (Moore transducers), the computation they induce
//! against an environment word, parallel composition with input fill-in,
//! architectures, and world models as plant transducers.

mod arch;
mod transducer;
mod world;

pub use arch::Architecture;
pub use transducer::{achieved_priority, comp, compose, Transducer};
pub use world::WorldModel;

use crate::ltl::LtlError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("output variables clash: {0}")]
    OutputClash(String),

    #[error("variable mismatch: {0}")]
    VariableMismatch(String),

    #[error("transducers with more than {limit} input variables are not representable")]
    TooManyInputs { limit: usize },

    #[error("malformed transducer: {0}")]
    BadTransducer(String),

    #[error("duplicate process name `{0}`")]
    DuplicateProcess(String),

    #[error("architectures must share the same variable universe")]
    UniverseMismatch,

    #[error("unknown process `{0}`")]
    UnknownProcess(String),

    #[error("variable `{var}` is declared as {declared} but used as {used}")]
    KindMismatch {
        var: String,
        declared: String,
        used: String,
    },

    #[error("world model is not input-deterministic at state `{state}` on letter {letter}")]
    InputNondeterminism { state: String, letter: String },

    #[error("world model is missing a transition from state `{state}` on joint action {letter}")]
    ModelIncomplete { state: String, letter: String },

    #[error(transparent)]
    Ltl(#[from] LtlError),
}
