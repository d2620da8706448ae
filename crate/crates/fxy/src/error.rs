use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("variable index x{index} at byte {pos} out of range 1..={num_vars}")]
    VarOutOfRange { pos: usize, index: u32, num_vars: u32 },

    #[error("expansion cap exceeded: product would exceed {cap} stored terms")]
    ExpansionCapExceeded { cap: usize },

    #[error("base {base} is not faithful: it must exceed the coefficient sum {coeff_sum}")]
    UnfaithfulBase { base: String, coeff_sum: String },

    #[error("empty polynomial has no order or degree")]
    EmptyPolynomial,

    #[error("operation undefined for the bare variable x")]
    BareVariable,

    #[error("stage index {stage} out of range 1..={total}")]
    StageOutOfRange { stage: usize, total: usize },

    #[error("no subterm at path {path}")]
    BadPath { path: String },

    #[error("subterm at path {path} contains no core of the term")]
    NoCoreAtPath { path: String },

    #[error("enumeration budget of {budget} candidates exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("{0}")]
    Invalid(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
