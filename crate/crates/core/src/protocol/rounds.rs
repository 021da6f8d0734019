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

use std::collections::BTreeSet;

use rand::seq::index;
use rand::Rng;

use super::channel::{Party, Qubit};
use super::config::{check_count, ExamConfig};
use crate::error::{invalid, Error, Result};
use crate::quantum::{Basis, MeasurementOutcome, PureState, Register, Sign};

/// Alice's private bits `s_1 … s_N` fixing one carrier state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SecretBits(Vec<bool>);

impl SecretBits {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(invalid("secret needs at least one bit"));
        }
        Ok(SecretBits(bits))
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    /// Secret bit of Bob `n` (1-based).
    pub fn bob(&self, n: usize) -> bool {
        self.0[n - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// One uniformly random secret per round.
pub fn generate_secrets<R: Rng + ?Sized>(config: &ExamConfig, rng: &mut R) -> Result<Vec<SecretBits>> {
    if config.bobs == 0 {
        return Err(invalid("no Bobs to generate secrets for"));
    }
    Ok((0..config.rounds)
        .map(|_| SecretBits((0..config.bobs).map(|_| rng.random()).collect()))
        .collect())
}

/// Prepares the carrier for one round. Entry `i` of the ownership list is
/// the party holding qubit `i`.
pub fn distribute_round(secret: &SecretBits) -> Result<(PureState, Vec<Party>)> {
    let state = PureState::phi(secret.bits())?;
    let owners = std::iter::once(Party::Alice)
        .chain((1..=secret.len()).map(Party::Bob))
        .collect();
    Ok((state, owners))
}

/// Draws the check rounds (1-based) uniformly without replacement.
pub fn select_check_rounds<R: Rng + ?Sized>(
    rounds: usize,
    fraction: f64,
    solution_length: usize,
    rng: &mut R,
) -> Result<BTreeSet<usize>> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(invalid(format!("check fraction {fraction} outside (0, 1)")));
    }
    let count = check_count(rounds, fraction).min(rounds);
    if rounds - count < solution_length {
        return Err(Error::Config(format!(
            "{} key rounds left for a {solution_length}-bit solution",
            rounds - count
        )));
    }
    Ok(index::sample(rng, rounds, count).into_iter().map(|i| i + 1).collect())
}

/// Eq. (2)/(3) style acceptance test for one check round.
///
/// In `Z` every Bob's bit must equal Alice's bit XOR his secret bit. In `X`
/// Alice's sign must equal the product of all Bobs' signs.
pub fn check_passes(secret: &SecretBits, alice: MeasurementOutcome, bobs: &[MeasurementOutcome]) -> bool {
    match alice {
        MeasurementOutcome::Z(a) => bobs
            .iter()
            .zip(secret.bits())
            .all(|(b, &s)| b.bit() == Some(a ^ s)),
        MeasurementOutcome::X(a) => {
            let mut product = Sign::Plus;
            for b in bobs {
                match b.sign() {
                    Some(s) => product = product * s,
                    None => return false,
                }
            }
            product == a
        }
    }
}

/// Outcomes of measuring every member of one carrier state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundOutcome {
    pub alice: MeasurementOutcome,
    pub bobs: Vec<MeasurementOutcome>,
}

/// Measures Alice's and then each Bob's qubit of `round` in `basis`.
pub(crate) fn measure_round<R: Rng + ?Sized>(
    register: &mut Register<Qubit>,
    round: usize,
    bobs: usize,
    basis: Basis,
    rng: &mut R,
) -> Result<RoundOutcome> {
    let alice = register.measure(Qubit::Carrier { round, holder: 0 }, basis, rng)?;
    let bobs = (1..=bobs)
        .map(|holder| register.measure(Qubit::Carrier { round, holder }, basis, rng))
        .collect::<Result<_>>()?;
    Ok(RoundOutcome { alice, bobs })
}

fn single_round_register(state: &PureState, bobs: usize) -> Result<Register<Qubit>> {
    if state.num_qubits() != bobs + 1 {
        return Err(invalid(format!(
            "carrier has {} qubits, expected {}",
            state.num_qubits(),
            bobs + 1
        )));
    }
    let labels: Vec<Qubit> = (0..=bobs).map(|holder| Qubit::Carrier { round: 0, holder }).collect();
    let mut register = Register::new();
    register.insert(state.clone(), &labels)?;
    Ok(register)
}

/// Verdict and outcomes of a check round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub passed: bool,
    pub outcome: RoundOutcome,
}

/// Runs one check round on a standalone carrier state.
pub fn run_check_round<R: Rng + ?Sized>(
    state: &PureState,
    basis: Basis,
    secret: &SecretBits,
    rng: &mut R,
) -> Result<CheckOutcome> {
    let mut register = single_round_register(state, secret.len())?;
    let outcome = measure_round(&mut register, 0, secret.len(), basis, rng)?;
    Ok(CheckOutcome {
        passed: check_passes(secret, outcome.alice, &outcome.bobs),
        outcome,
    })
}

/// Z-basis bits of one key round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyRoundOutcome {
    pub alice: bool,
    pub bobs: Vec<bool>,
}

impl TryFrom<&RoundOutcome> for KeyRoundOutcome {
    type Error = Error;

    fn try_from(o: &RoundOutcome) -> Result<Self> {
        let bit = |m: &MeasurementOutcome| {
            m.bit()
                .ok_or_else(|| Error::InconsistentTranscript("key round measured outside Z".into()))
        };
        Ok(KeyRoundOutcome {
            alice: bit(&o.alice)?,
            bobs: o.bobs.iter().map(bit).collect::<Result<_>>()?,
        })
    }
}

/// Runs one key round on a standalone `bobs + 1` qubit carrier state.
pub fn run_key_round<R: Rng + ?Sized>(state: &PureState, rng: &mut R) -> Result<KeyRoundOutcome> {
    if state.num_qubits() < 2 {
        return Err(invalid("carrier needs Alice and at least one Bob"));
    }
    let bobs = state.num_qubits() - 1;
    let mut register = single_round_register(state, bobs)?;
    let outcome = measure_round(&mut register, 0, bobs, Basis::Z, rng)?;
    KeyRoundOutcome::try_from(&outcome)
}
