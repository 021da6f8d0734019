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

//! Brute-force dense state vectors.
//!
//! Every operation here works on the full `2^n` amplitude vector with plain
//! index arithmetic and shares no code with the sparse backend, so the two
//! can be checked against each other.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::bits::BitString;
use super::density::DensityMatrix2;
use super::state::{MeasurementOutcome, PureState};
use crate::error::{invalid, Error, Result};

/// Largest register the dense oracle accepts.
pub const MAX_DENSE_QUBITS: usize = 20;

/// A dense amplitude vector. Qubit 0 is the most significant index bit.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    pub fn new(num_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if num_qubits > MAX_DENSE_QUBITS {
            return Err(Error::ResourceLimit {
                qubits: num_qubits,
                limit: MAX_DENSE_QUBITS,
            });
        }
        if amps.len() != 1 << num_qubits {
            return Err(invalid("amplitude vector length must be 2^n"));
        }
        Ok(DenseState { num_qubits, amps })
    }

    pub fn from_sparse(state: &PureState) -> Result<Self> {
        let n = state.num_qubits();
        if n > MAX_DENSE_QUBITS {
            return Err(Error::ResourceLimit {
                qubits: n,
                limit: MAX_DENSE_QUBITS,
            });
        }
        let mut amps = vec![Complex64::default(); 1 << n];
        for (bits, amp) in state.terms() {
            amps[bits.to_index()] = *amp;
        }
        Ok(DenseState { num_qubits: n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    fn mask(&self, q: usize) -> usize {
        1 << (self.num_qubits - 1 - q)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Kronecker product.
    pub fn tensor(&self, other: &DenseState) -> Result<DenseState> {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        DenseState::new(self.num_qubits + other.num_qubits, amps)
    }

    /// Applies the CNOT matrix: `out[i] = in[i ^ t]` when bit `c` of `i` is set.
    pub fn cnot(&self, control: usize, target: usize) -> Result<DenseState> {
        if control >= self.num_qubits || target >= self.num_qubits || control == target {
            return Err(invalid("bad CNOT indices"));
        }
        let (c, t) = (self.mask(control), self.mask(target));
        let amps = (0..self.amps.len())
            .map(|i| if i & c != 0 { self.amps[i ^ t] } else { self.amps[i] })
            .collect();
        DenseState::new(self.num_qubits, amps)
    }

    /// Applies the single-qubit projector for `outcome` and renormalizes.
    pub fn project(&self, q: usize, outcome: MeasurementOutcome) -> Result<Option<(f64, DenseState)>> {
        if q >= self.num_qubits {
            return Err(invalid("qubit out of range"));
        }
        let m = self.mask(q);
        // 2x2 projector in the {|0>,|1>} basis of qubit q
        let proj: [[f64; 2]; 2] = match outcome {
            MeasurementOutcome::Z(false) => [[1.0, 0.0], [0.0, 0.0]],
            MeasurementOutcome::Z(true) => [[0.0, 0.0], [0.0, 1.0]],
            MeasurementOutcome::X(s) => {
                let v = s.value() as f64;
                [[0.5, 0.5 * v], [0.5 * v, 0.5]]
            }
        };
        let mut out = vec![Complex64::default(); self.amps.len()];
        for (i, slot) in out.iter_mut().enumerate() {
            let row = (i & m != 0) as usize;
            let i0 = i & !m;
            let i1 = i | m;
            *slot = self.amps[i0] * proj[row][0] + self.amps[i1] * proj[row][1];
        }
        let p: f64 = out.iter().map(|a| a.norm_sqr()).sum();
        if p < 1e-30 {
            return Ok(None);
        }
        let scale = 1.0 / p.sqrt();
        out.iter_mut().for_each(|a| *a *= scale);
        Ok(Some((p, DenseState::new(self.num_qubits, out)?)))
    }

    /// Partial trace down to qubit `q`.
    pub fn reduced_density(&self, q: usize) -> Result<DensityMatrix2> {
        if q >= self.num_qubits {
            return Err(invalid("qubit out of range"));
        }
        let m = self.mask(q);
        let mut rho = [[Complex64::default(); 2]; 2];
        for i in (0..self.amps.len()).filter(|i| i & m == 0) {
            let a = [self.amps[i], self.amps[i | m]];
            for r in 0..2 {
                for c in 0..2 {
                    rho[r][c] += a[r] * a[c].conj();
                }
            }
        }
        Ok(DensityMatrix2::new(rho))
    }

    /// Entrywise comparison against a sparse state, after removing the
    /// global phase fixed by the largest dense amplitude.
    pub fn approx_eq_sparse(&self, sparse: &PureState, tol: f64) -> bool {
        if sparse.num_qubits() != self.num_qubits {
            return false;
        }
        let (pivot, a) = self
            .amps
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.norm_sqr().total_cmp(&y.1.norm_sqr()))
            .expect("nonempty vector");
        let b = sparse.amplitude(&BitString::from_index(pivot, self.num_qubits));
        if b.norm() < 1e-15 {
            return a.norm() < tol;
        }
        let phase = (b / b.norm()) / (a / a.norm());
        self.amps.iter().enumerate().all(|(i, amp)| {
            let s = sparse.amplitude(&BitString::from_index(i, self.num_qubits));
            (amp * phase - s).norm() <= tol
        })
    }
}

/// `|+>` or `|->` built densely.
pub fn dense_decoy(sign: super::Sign) -> DenseState {
    let v = sign.value() as f64;
    DenseState {
        num_qubits: 1,
        amps: vec![Complex64::new(FRAC_1_SQRT_2, 0.0), Complex64::new(v * FRAC_1_SQRT_2, 0.0)],
    }
}

/// The carrier state built densely from its two basis indices.
pub fn dense_phi(s: &[bool]) -> Result<DenseState> {
    if s.is_empty() {
        return Err(invalid("empty secret"));
    }
    let n = s.len() + 1;
    let low = s.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
    let high = (1 << (n - 1)) | (!low & ((1 << (n - 1)) - 1));
    let mut amps = vec![Complex64::default(); 1 << n];
    amps[low] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    amps[high] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    DenseState::new(n, amps)
}

impl PureState {
    /// Dense amplitude vector of length `2^n`.
    pub fn to_dense(&self) -> Result<Vec<Complex64>> {
        DenseState::from_sparse(self).map(|d| d.amps)
    }
}
