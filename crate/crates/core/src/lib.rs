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

//! Simulator for the quantum exam key distribution protocol, the
//! participant attack in which one examinee uses CNOTs onto an ancilla to
//! learn another examinee's key, and the decoy-qubit defence against it.
//!
//! * [`quantum`]: sparse pure states, CNOT, Z/X measurement, reduced
//!   density matrices and a dense brute-force oracle.
//! * [`protocol`]: one full exam run, its transcript and the one-time pad.
//! * [`adversary`]: the tap, key reconstruction and solution theft.
//! * [`countermeasure`]: decoy planning, verification and detection odds.

pub mod adversary;
pub mod countermeasure;
mod error;
pub mod protocol;
pub mod quantum;
pub mod rng;

pub use error::{Error, Result};
