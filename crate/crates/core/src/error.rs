// Copyright 2026 The povm-concurrence Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("capacity exceeded: dimension {requested} is larger than the limit {limit}")]
    Capacity { requested: usize, limit: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian: max |A - A^dagger| = {deviation:e} exceeds {tolerance:e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("matrix is not positive semi-definite: eigenvalue {eigenvalue:e}")]
    NotPositive { eigenvalue: f64 },

    #[error("non-finite entry at position {index}")]
    NonFinite { index: usize },

    #[error("invalid qubit count {found}: {reason}")]
    QubitCount { found: usize, reason: &'static str },

    #[error("invalid site index {index} for {qubits} qubits: {reason}")]
    SiteIndex {
        index: usize,
        qubits: usize,
        reason: &'static str,
    },

    #[error("state norm violation: sum |a|^2 = {norm_sq} (tolerance {tolerance:e})")]
    Norm { norm_sq: f64, tolerance: f64 },

    #[error("ensemble weights sum to {sum} instead of 1")]
    WeightSum { sum: f64 },

    #[error("ensemble weight {weight} outside (0, 1]")]
    Weight { weight: f64 },

    #[error("density matrix trace is {trace} instead of 1")]
    Trace { trace: f64 },

    #[error("qubit count mismatch: expected {expected}, found {found}")]
    QubitMismatch { expected: usize, found: usize },

    #[error("invalid optimizer budget: {0}")]
    Budget(&'static str),

    #[error("empty operator list")]
    EmptyOperators,

    #[error("normalization constant must be finite and strictly positive, got {0}")]
    Normalization(f64),

    #[error("malformed state file: {0}")]
    Malformed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Input that could not be parsed at all, as opposed to parsed input that
    /// breaks a mathematical contract.
    pub fn is_malformed_input(&self) -> bool {
        matches!(self, Error::Malformed(_) | Error::Io(_))
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Malformed(e.to_string())
    }
}
