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

use num_complex::Complex64;

use super::state::PureState;

/// A single-qubit density operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2 {
    entries: [[Complex64; 2]; 2],
}

impl DensityMatrix2 {
    pub fn new(entries: [[Complex64; 2]; 2]) -> Self {
        DensityMatrix2 { entries }
    }

    /// `½·I`.
    pub fn maximally_mixed() -> Self {
        let half = Complex64::new(0.5, 0.0);
        let zero = Complex64::default();
        DensityMatrix2::new([[half, zero], [zero, half]])
    }

    /// `|ψ><ψ|` for a single-qubit state.
    pub fn projector(psi: &PureState) -> Self {
        psi.reduced_density(0).expect("single-qubit state")
    }

    pub fn entries(&self) -> &[[Complex64; 2]; 2] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row][col]
    }

    pub fn trace(&self) -> Complex64 {
        self.entries[0][0] + self.entries[1][1]
    }

    /// Convex combination `w·self + (1-w)·other`.
    pub fn mix(&self, other: &DensityMatrix2, w: f64) -> Self {
        let mut entries = [[Complex64::default(); 2]; 2];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.entries[i][j] * w + other.entries[i][j] * (1.0 - w);
            }
        }
        DensityMatrix2::new(entries)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..2).all(|i| (0..2).all(|j| (self.entries[i][j] - self.entries[j][i].conj()).norm() <= tol))
    }

    /// Both eigenvalues nonnegative within `tol`.
    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        let [[a, b], [_, d]] = self.entries;
        let tr = (a + d).re;
        let det = (a * d).re - b.norm_sqr();
        let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
        (tr - disc) / 2.0 >= -tol
    }

    /// Hermitian, unit trace and positive semidefinite within `tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && (self.trace() - 1.0).norm() <= tol && self.is_positive_semidefinite(tol)
    }

    pub fn approx_eq(&self, other: &DensityMatrix2, tol: f64) -> bool {
        (0..2).all(|i| (0..2).all(|j| (self.entries[i][j] - other.entries[i][j]).norm() <= tol))
    }

    pub fn is_maximally_mixed(&self, tol: f64) -> bool {
        self.approx_eq(&DensityMatrix2::maximally_mixed(), tol)
    }
}
