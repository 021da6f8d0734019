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

//! Sparse backend against the dense brute-force vectors.

use num_complex::Complex64;
use qexam_core::quantum::dense::{dense_decoy, dense_phi, DenseState};
use qexam_core::quantum::{BitString, MeasurementOutcome, PureState, Sign, TOLERANCE};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_dense(n: usize, rng: &mut ChaCha8Rng) -> DenseState {
    let mut amps: Vec<Complex64> = (0..1 << n)
        .map(|_| {
            // about half the entries zero so pruning paths get exercised
            if rng.random::<bool>() {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            } else {
                Complex64::default()
            }
        })
        .collect();
    if amps.iter().all(|a| a.norm() == 0.0) {
        amps[0] = Complex64::new(1.0, 0.0);
    }
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    DenseState::new(n, amps).unwrap()
}

fn to_sparse(d: &DenseState) -> PureState {
    let n = d.num_qubits();
    PureState::from_terms(
        n,
        d.amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > 0.0)
            .map(|(i, a)| (BitString::from_index(i, n), *a)),
    )
    .unwrap()
}

#[test]
fn cnot_matches_dense_matrix_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for _ in 0..1000 {
        let n = rng.random_range(2..=5);
        let dense = random_dense(n, &mut rng);
        let sparse = to_sparse(&dense);
        let c = rng.random_range(0..n);
        let t = (c + rng.random_range(1..n)) % n;
        let d2 = dense.cnot(c, t).unwrap();
        let s2 = sparse.cnot(c, t).unwrap();
        assert!(d2.approx_eq_sparse(&s2, TOLERANCE), "cnot({c},{t}) on {sparse:?}");
        assert!((s2.norm_sqr() - 1.0).abs() < TOLERANCE);
    }
}

fn random_protocol_state(rng: &mut ChaCha8Rng) -> (PureState, DenseState) {
    let bobs = rng.random_range(1..=7);
    let s: Vec<bool> = (0..bobs).map(|_| rng.random()).collect();
    let mut sparse = PureState::phi(&s).unwrap();
    let mut dense = dense_phi(&s).unwrap();
    // up to two extra single qubits: ancilla |0> or a decoy
    let extra = rng.random_range(0..=(8 - bobs).min(2));
    for _ in 0..extra {
        if rng.random::<bool>() {
            sparse = sparse.tensor(&PureState::zeros(1));
            dense = dense.tensor(&DenseState::from_sparse(&PureState::zeros(1)).unwrap()).unwrap();
        } else {
            let sign = Sign::random(rng);
            sparse = sparse.tensor(&PureState::decoy(sign));
            dense = dense.tensor(&dense_decoy(sign)).unwrap();
        }
    }
    (sparse, dense)
}

#[test]
fn gate_and_measurement_sequences_match_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let (mut sparse, mut dense) = random_protocol_state(&mut rng);
        assert!(dense.approx_eq_sparse(&sparse, TOLERANCE));
        let n = sparse.num_qubits();
        for _ in 0..rng.random_range(1..=8) {
            if rng.random_range(0..3) < 2 {
                let c = rng.random_range(0..n);
                let t = (c + rng.random_range(1..n)) % n;
                sparse = sparse.cnot(c, t).unwrap();
                dense = dense.cnot(c, t).unwrap();
            } else {
                let q = rng.random_range(0..n);
                let basis_x = rng.random::<bool>();
                let outcomes = if basis_x {
                    [MeasurementOutcome::X(Sign::Plus), MeasurementOutcome::X(Sign::Minus)]
                } else {
                    [MeasurementOutcome::Z(false), MeasurementOutcome::Z(true)]
                };
                let mut branches = Vec::new();
                for o in outcomes {
                    let s = sparse.project(q, o).unwrap();
                    let d = dense.project(q, o).unwrap();
                    match (s, d) {
                        (Some((ps, s)), Some((pd, d))) => {
                            assert!((ps - pd).abs() < TOLERANCE);
                            assert!(d.approx_eq_sparse(&s, TOLERANCE));
                            branches.push((ps, s, d));
                        }
                        (None, None) => {}
                        (s, d) => panic!("branch mismatch: {:?} vs {:?}", s.map(|x| x.0), d.map(|x| x.0)),
                    }
                }
                let total: f64 = branches.iter().map(|b| b.0).sum();
                assert!((total - 1.0).abs() < TOLERANCE);
                let pick = rng.random_range(0..branches.len());
                let (_, s, d) = branches.swap_remove(pick);
                sparse = s;
                dense = d;
            }
            assert!(dense.approx_eq_sparse(&sparse, TOLERANCE));
            assert!((sparse.norm_sqr() - 1.0).abs() < TOLERANCE);
            for q in 0..n {
                let rs = sparse.reduced_density(q).unwrap();
                let rd = dense.reduced_density(q).unwrap();
                assert!(rs.approx_eq(&rd, TOLERANCE));
                assert!(rs.is_valid(TOLERANCE));
            }
        }
    }
}

#[test]
fn dense_vector_is_normalized() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let (sparse, _) = random_protocol_state(&mut rng);
        let v = sparse.to_dense().unwrap();
        assert_eq!(v.len(), 1 << sparse.num_qubits());
        assert!((v.iter().map(|a| a.norm_sqr()).sum::<f64>() - 1.0).abs() < TOLERANCE);
    }
}
