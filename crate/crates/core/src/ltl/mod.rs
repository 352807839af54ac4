//! LTL abstract syntax, concrete-syntax parser, normal forms, prioritized
//! specifications, and the semantic ground truth on lasso words.

mod error;
mod formula;
mod lasso;
mod parser;
mod spec;
mod vars;

pub use error::LtlError;
pub use formula::Formula;
pub use lasso::{evaluate_on_lasso, Lasso};
pub use parser::parse_ltl;
pub use spec::PrioritizedSpec;
pub use vars::{LetterSpace, Universe, Valuation, VarId, VarKind, VarSet};
