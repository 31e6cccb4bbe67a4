use thiserror::Error;

use crate::ordered_groups::Support;
use crate::report::Report;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    Dimension { what: String, expected: usize, found: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("rank {rank} exceeds the enumeration limit {max}")]
    Capacity { rank: usize, max: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no Riesz decomposition: f exceeds g + h at coordinate {coordinate}")]
    Decomposition { coordinate: usize },

    #[error("support mismatch: {0}")]
    SupportMismatch(String),

    #[error("hereditary lift failed: {0}")]
    Hereditary(String),

    #[error("no extension from {from} to {to}: {reason}")]
    Extension { from: Support, to: Support, reason: String },

    #[error(
        "partial traces {first} and {second} disagree on {overlap}: ray {ray} gives {left} vs {right}"
    )]
    Conflict {
        first: usize,
        second: usize,
        overlap: Support,
        ray: usize,
        left: String,
        right: String,
    },

    #[error("partial traces are consistent but admit no common extension over {0}")]
    Gluing(Support),

    #[error("context mismatch: {0}")]
    Context(String),

    #[error("invalid input object:\n{0}")]
    Invalid(Report),

    #[error("transport error: {0}")]
    Transport(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("document error in field `{field}`: {message}")]
    Document { field: String, message: String },

    #[error("generation failed for seed {seed}: {reason}")]
    Generation { seed: u64, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
