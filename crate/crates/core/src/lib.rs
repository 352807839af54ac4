//! Core library for deciding winning and remorse-free dominance of
//! finite-state strategies against prioritized LTL objectives.
//!
//! The crate is organized around a small number of value types:
//!
//! * [`ltl`] — LTL syntax trees, a concrete-syntax parser, negation normal
//!   form, prioritized objective lists, and a ground-truth evaluator on
//!   ultimately periodic words (lassos).
//! * [`automata`] — nondeterministic Büchi word automata over valuation
//!   alphabets with symbolic edge guards: translation from LTL, product,
//!   union, existential projection, membership, and emptiness with lasso
//!   witnesses.
//! * [`strategies`] — finite-state strategies (Moore transducers), the
//!   computation function, parallel composition with input fill-in,
//!   architectures, and world models as plant transducers.
//! * [`dominance`] — winning and dominance verdicts for given transducers,
//!   bounded synthesis by canonical enumeration, and an independent
//!   brute-force falsification oracle.
//! * [`assumptions`] — finite regular assumption generators (promise trees),
//!   dominant strategy annotations, the unary path codec, compatibility
//!   games, and the incremental assumption-propagation pipeline.
//!
//! All values are immutable after construction and safe to share across
//! threads.

pub mod assumptions;
pub mod automata;
pub mod dominance;
pub mod ltl;
pub mod strategies;

#[cfg(test)]
pub(crate) mod fixtures;
