use thiserror::Error;

use crate::grading::Multidegree;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("differentials do not compose to zero")]
    CompositionNotZero,
    #[error("operation requires a nonzero module")]
    ZeroModule,
    #[error("module has support outside the squarefree degrees")]
    NotSquarefree,
    #[error("evaluation window is missing {} degree(s), first {:?}", missing.len(), missing.first())]
    WindowTooSmall { missing: Vec<Multidegree> },
    #[error("d^2 != 0 in {0}")]
    DifferentialCheckFailed(String),
    #[error("complex is not minimal: unit entry at spot {spot}")]
    NotMinimal { spot: i32 },
    #[error("module is not weakly Koszul")]
    NotWeaklyKoszul,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: bad index {index}")]
    BadIndex { line: usize, index: i64 },
    #[error("characteristic {0} is neither 0 nor a supported prime")]
    BadChar(u64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
