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

//! Exact sparse pure-state simulation for the handful of gates the protocol
//! needs: carrier and decoy preparation, CNOT, and Z/X measurement.

mod bits;
pub mod dense;
mod density;
mod register;
mod state;

pub use bits::BitString;
pub use dense::{DenseState, MAX_DENSE_QUBITS};
pub use density::DensityMatrix2;
pub use register::Register;
pub use state::{Basis, MeasurementOutcome, PureState, Sign, PRUNE_THRESHOLD, TOLERANCE};
