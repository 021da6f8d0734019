// Copyright 2026 The qexam Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("state of {qubits} qubits exceeds the dense oracle limit of {limit}")]
    ResourceLimit { qubits: usize, limit: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("key exhausted: need {needed} bits, have {available}")]
    KeyExhausted { needed: usize, available: usize },

    #[error("inconsistent transcript: {0}")]
    InconsistentTranscript(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
