use thiserror::Error;

/// Errors produced while parsing or evaluating formulas and lassos.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LtlError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },

    #[error("unknown atom `{name}` at {line}:{col}")]
    UnknownAtom {
        name: String,
        line: usize,
        col: usize,
    },

    #[error("`{name}` is a reserved word and cannot be declared as a variable")]
    ReservedName { name: String },

    #[error("variable `{name}` declared twice")]
    DuplicateVariable { name: String },

    #[error("universe limited to 64 variables")]
    UniverseFull,

    #[error("lasso loop must be nonempty")]
    EmptyLoop,

    #[error("valuation uses variables outside the declared set")]
    ValuationOutsideVars,

    #[error("variable mismatch: {0}")]
    VariableMismatch(String),

    #[error("priority {k} out of range (spec has {n} objectives)")]
    PriorityOutOfRange { k: usize, n: usize },

    #[error("a prioritized specification needs at least one objective")]
    EmptySpec,

    #[error("letter space over more than {limit} variables is not enumerable")]
    LetterSpaceTooLarge { limit: usize },
}
