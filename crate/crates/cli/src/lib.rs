//! Front end for the `khmovie` binary: file loading, commands and the corpus.

pub mod commands;
pub mod corpus;

use khmovie::Error;

pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_PARSE: i32 = 4;

/// Process exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::InvalidDiagram(_) | Error::InvalidChain(_) | Error::InvalidBraid(_) => EXIT_PARSE,
        Error::Budget(_) => EXIT_BUDGET,
        Error::Grading { .. } => EXIT_MISMATCH,
        _ => 1,
    }
}
