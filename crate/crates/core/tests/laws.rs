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

use proptest::prelude::*;
use qexam_core::adversary::attack_round;
use qexam_core::quantum::{Basis, DensityMatrix2, PureState, Sign, TOLERANCE};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn secret() -> impl Strategy<Value = Vec<bool>> {
    prop::collection::vec(any::<bool>(), 1..=8)
}

proptest! {
    #[test]
    fn x_outcomes_multiply_to_plus(s in secret(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state = PureState::phi(&s).unwrap();
        let mut product = Sign::Plus;
        while state.num_qubits() > 0 {
            let (o, rest) = state.measure_and_remove(0, Basis::X, &mut rng).unwrap();
            product = product * o.sign().unwrap();
            prop_assert!(rest.num_terms() <= 4);
            state = rest;
        }
        prop_assert_eq!(product, Sign::Plus);
    }

    #[test]
    fn z_outcomes_follow_secret(s in secret(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state = PureState::phi(&s).unwrap();
        let mut bits = Vec::new();
        while state.num_qubits() > 0 {
            let (o, rest) = state.measure_and_remove(0, Basis::Z, &mut rng).unwrap();
            bits.push(o.bit().unwrap());
            state = rest;
        }
        for (n, &sn) in s.iter().enumerate() {
            prop_assert_eq!(bits[n + 1], bits[0] ^ sn);
        }
    }

    #[test]
    fn cnot_is_an_involution(s in secret(), extra in 0usize..2, c in 0usize..10, t in 0usize..10) {
        let mut state = PureState::phi(&s).unwrap();
        for _ in 0..extra {
            state = state.tensor(&PureState::decoy(Sign::Minus));
        }
        let n = state.num_qubits();
        let (c, t) = (c % n, t % n);
        prop_assume!(c != t);
        let twice = state.cnot(c, t).unwrap().cnot(c, t).unwrap();
        prop_assert!(twice.approx_eq(&state, TOLERANCE).unwrap());
    }

    #[test]
    fn cnots_sharing_a_target_commute(s in secret(), k in 1usize..9, r in 1usize..9) {
        let n = s.len();
        let (k, r) = (1 + (k - 1) % n, 1 + (r - 1) % n);
        prop_assume!(k != r);
        let g = n + 1;
        let base = PureState::phi(&s).unwrap().tensor(&PureState::zeros(1));
        let kr = base.cnot(k, g).unwrap().cnot(r, g).unwrap();
        let rk = base.cnot(r, g).unwrap().cnot(k, g).unwrap();
        prop_assert!(kr.approx_eq(&rk, TOLERANCE).unwrap());
        prop_assert!(kr.num_terms() <= 4);
    }

    #[test]
    fn every_carrier_member_is_maximally_mixed(s in secret()) {
        let state = PureState::phi(&s).unwrap();
        for q in 0..state.num_qubits() {
            prop_assert!(state.reduced_density(q).unwrap().is_maximally_mixed(TOLERANCE));
        }
    }

    #[test]
    fn attack_restores_carrier(s in prop::collection::vec(any::<bool>(), 2..=8), k in 1usize..9, r in 1usize..9, seed in any::<u64>()) {
        let n = s.len();
        let (k, r) = (1 + (k - 1) % n, 1 + (r - 1) % n);
        prop_assume!(k != r);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = PureState::phi(&s).unwrap();
        let (after, bit) = attack_round(&phi, k, r, &mut rng).unwrap();
        prop_assert_eq!(bit, s[k - 1] ^ s[r - 1]);
        prop_assert!(after.approx_eq(&phi, TOLERANCE).unwrap());
    }
}

#[test]
fn random_sign_decoy_is_maximally_mixed() {
    let plus = PureState::decoy(Sign::Plus).reduced_density(0).unwrap();
    let minus = PureState::decoy(Sign::Minus).reduced_density(0).unwrap();
    assert!(plus.mix(&minus, 0.5).is_maximally_mixed(TOLERANCE));
    assert!(DensityMatrix2::maximally_mixed().is_valid(TOLERANCE));
}

#[test]
fn decoy_measures_its_own_sign() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for sign in [Sign::Plus, Sign::Minus] {
        for _ in 0..100 {
            let (o, _) = PureState::decoy(sign).measure(0, Basis::X, &mut rng).unwrap();
            assert_eq!(o.sign(), Some(sign));
        }
    }
}
