// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid run or register configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// An input failed a numerical validity check (e.g. a non-unitary matrix).
    #[error("validation error: {0}")]
    Validation(String),

    /// Malformed call arguments (duplicate ions, mismatched dimensions, ...).
    #[error("argument error: {0}")]
    Argument(String),

    /// Readout attempted while another ion still carries fluorescing population.
    #[error("readout protection violated: ion {ion} has ground-state population {population:.3e}")]
    Protection { ion: usize, population: f64 },

    /// An operation's contract was broken by the caller.
    #[error("contract error: {0}")]
    Contract(String),

    /// The base shares a factor with the modulus, so no period exists.
    #[error("gcd({a}, {n}) = {factor}: trivial factor found, no period to estimate")]
    TrivialFactor { a: u64, n: u64, factor: u64 },

    /// Arithmetic input outside the supported domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A valid request this build cannot execute (e.g. pulse mode for N != 15).
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("compile error: {0}")]
    Compile(String),

    /// Internal numerical failure: norm drift signals a unitarity bug.
    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Unsupported(_) => 2,
            _ => 1,
        }
    }
}
