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

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::channel::{plain_sequence, Party, Qubit};
use super::config::{ExamConfig, Scenario};
use super::keys::{alice_recover_bob_key, otp_decrypt, otp_encrypt, KeyMaterial};
use super::rounds::{check_passes, generate_secrets, measure_round, select_check_rounds, KeyRoundOutcome, SecretBits};
use super::transcript::{RoundRecord, RoundRole, Transcript};
use crate::adversary::{estimate_target_key, filter_key_parities, reconstruct_target_key, steal_solution, tap_sequences, AttackConfig, AttackRecord};
use crate::countermeasure::{insert_decoys, measure_decoys, reveal_and_verify, DecoyPlan, DecoyVerdict};
use crate::error::{Error, Result};
use crate::quantum::{Basis, PureState, Register};
use crate::rng::SeedTree;

// Stream labels below the run seed.
const SECRETS: u64 = 1;
const DECOY_PLAN: u64 = 2;
const ATTACK: u64 = 3;
const DECOY_MEASURE: u64 = 4;
const CHECK_SELECT: u64 = 5;
const CHECK_BASIS: u64 = 6;
const MEASURE: u64 = 7;
const SOLUTIONS: u64 = 8;

/// What the attacker got out of a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackOutcome {
    pub key_bits: usize,
    pub key_bits_correct: usize,
    /// Key rounds no tap said anything about; filled with guesses.
    pub key_bits_unknown: usize,
    pub solution_bits: usize,
    /// `None` when Alice aborted and no ciphertext was sent.
    pub solution_bits_correct: Option<usize>,
    pub touched_decoys: usize,
    pub independent_decoy_groups: usize,
}

impl AttackOutcome {
    pub fn key_exact(&self) -> bool {
        self.key_bits_correct == self.key_bits
    }

    pub fn solution_exact(&self) -> bool {
        self.solution_bits_correct == Some(self.solution_bits)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExamSummary {
    pub checks_run: usize,
    pub check_failures: usize,
    pub decoys: Option<DecoyVerdict>,
    /// Alice abandoned the keys because of a failed check or decoy test.
    pub aborted: bool,
    /// Per Bob: Alice's reconstruction equals his measured key.
    pub key_agreement: Vec<bool>,
    /// Per Bob: Alice decrypted his exact solution. `None` after an abort.
    pub solutions_received: Option<Vec<bool>>,
    pub attack: Option<AttackOutcome>,
    /// Largest sparse term count seen in any live state.
    pub max_terms: usize,
}

impl ExamSummary {
    pub fn detected(&self) -> bool {
        self.aborted
    }

    pub fn decoy_mismatches(&self) -> usize {
        self.decoys.as_ref().map_or(0, DecoyVerdict::mismatched)
    }
}

/// Full result of one exam execution.
#[derive(Debug, Clone)]
pub struct ExamRun {
    pub scenario: Scenario,
    pub secrets: Vec<SecretBits>,
    pub transcript: Transcript,
    pub decoy_plan: Option<DecoyPlan>,
    pub attack_record: Option<AttackRecord>,
    pub solutions: Vec<Vec<bool>>,
    /// Ciphertexts sent to Alice; empty after an abort.
    pub ciphertexts: Vec<Vec<bool>>,
    pub summary: ExamSummary,
}

/// Runs the solution-collecting stage end to end.
///
/// All randomness derives from `config.seed`. `attack` is required for the
/// attacked scenarios and ignored otherwise.
pub fn run_exam(config: &ExamConfig, scenario: Scenario, attack: Option<&AttackConfig>) -> Result<ExamRun> {
    config.validate()?;
    let attack = if scenario.is_attacked() {
        let a = attack.ok_or_else(|| Error::Config(format!("scenario {scenario} needs an attack configuration")))?;
        if config.bobs < 2 {
            return Err(Error::Config("an attack needs at least two Bobs".into()));
        }
        a.validate(config.bobs).map_err(|e| Error::Config(e.to_string()))?;
        Some(a)
    } else {
        None
    };
    let seeds = SeedTree::new(config.seed);
    let (bobs, rounds) = (config.bobs, config.rounds);

    let secrets = generate_secrets(config, &mut seeds.child(SECRETS).rng())?;
    let mut register: Register<Qubit> = Register::new();
    for (i, s) in secrets.iter().enumerate() {
        let labels: Vec<Qubit> = (0..=bobs).map(|holder| Qubit::Carrier { round: i + 1, holder }).collect();
        register.insert(PureState::phi(s.bits())?, &labels)?;
    }
    let mut max_terms = register.max_terms();

    let decoy_plan = if scenario.uses_decoys(config) {
        let plan = insert_decoys(config, &mut seeds.child(DECOY_PLAN).rng())?;
        plan.prepare(&mut register)?;
        Some(plan)
    } else {
        None
    };

    let attack_record = match attack {
        Some(a) => {
            let (target_seq, attacker_seq) = match &decoy_plan {
                Some(plan) => (plan.extended_sequence(a.target), plan.extended_sequence(a.attacker)),
                None => (plain_sequence(rounds), plain_sequence(rounds)),
            };
            let record = tap_sequences(&mut register, &target_seq, &attacker_seq, a, rounds, seeds.child(ATTACK))?;
            max_terms = max_terms.max(register.max_terms());
            Some(record)
        }
        None => None,
    };

    let decoys = match &decoy_plan {
        Some(plan) => {
            let readings = measure_decoys(&mut register, plan, seeds.child(DECOY_MEASURE))?;
            Some(reveal_and_verify(plan, &readings)?)
        }
        None => None,
    };

    let check_set = select_check_rounds(
        rounds,
        config.check_fraction,
        config.solution_length,
        &mut seeds.child(CHECK_SELECT).rng(),
    )?;

    let mut records = Vec::with_capacity(rounds);
    let mut alice_key = Vec::new();
    let mut bob_keys = vec![Vec::new(); bobs];
    let mut key_secrets = Vec::new();
    let (mut l, mut m) = (0, 0);
    for (p, secret) in (1..=rounds).zip(&secrets) {
        let mut rng = seeds.path(&[MEASURE, p as u64]).rng();
        if check_set.contains(&p) {
            l += 1;
            let basis = if seeds.path(&[CHECK_BASIS, p as u64]).rng().random::<bool>() {
                Basis::X
            } else {
                Basis::Z
            };
            let o = measure_round(&mut register, p, bobs, basis, &mut rng)?;
            let passed = check_passes(secret, o.alice, &o.bobs);
            records.push(RoundRecord {
                round: p,
                role: RoundRole::Check(l),
                basis,
                alice: o.alice,
                bobs: o.bobs,
                verdict: Some(passed),
            });
        } else {
            m += 1;
            let o = measure_round(&mut register, p, bobs, Basis::Z, &mut rng)?;
            let bits = KeyRoundOutcome::try_from(&o)?;
            alice_key.push(bits.alice);
            for (key, b) in bob_keys.iter_mut().zip(&bits.bobs) {
                key.push(*b);
            }
            key_secrets.push(secret.clone());
            records.push(RoundRecord {
                round: p,
                role: RoundRole::Key(m),
                basis: Basis::Z,
                alice: o.alice,
                bobs: o.bobs,
                verdict: None,
            });
        }
    }

    let alice_key = KeyMaterial::new(Party::Alice, alice_key);
    let bob_keys: Vec<KeyMaterial> = bob_keys
        .into_iter()
        .enumerate()
        .map(|(i, bits)| KeyMaterial::new(Party::Bob(i + 1), bits))
        .collect();
    let recovered: Vec<KeyMaterial> = (1..=bobs)
        .map(|n| alice_recover_bob_key(&alice_key, &key_secrets, n))
        .collect::<Result<_>>()?;
    let key_agreement = recovered.iter().zip(&bob_keys).map(|(a, b)| a.bits == b.bits).collect();

    let transcript = Transcript {
        records,
        keys: std::iter::once(alice_key).chain(bob_keys.iter().cloned()).collect(),
    };
    let check_failures = transcript.check_failures();
    let aborted = check_failures > 0 || decoys.as_ref().is_some_and(|v| v.aborts(config.decoy_tolerance));

    let solutions: Vec<Vec<bool>> = (1..=bobs)
        .map(|n| {
            let mut rng = seeds.path(&[SOLUTIONS, n as u64]).rng();
            (0..config.solution_length).map(|_| rng.random()).collect()
        })
        .collect();
    let (ciphertexts, solutions_received) = if aborted {
        (Vec::new(), None)
    } else {
        let cts: Vec<Vec<bool>> = solutions
            .iter()
            .zip(&bob_keys)
            .map(|(s, k)| otp_encrypt(s, k))
            .collect::<Result<_>>()?;
        let received = cts
            .iter()
            .zip(&recovered)
            .zip(&solutions)
            .map(|((ct, key), sol)| otp_decrypt(ct, key).map(|d| &d == sol))
            .collect::<Result<_>>()?;
        (cts, Some(received))
    };

    let attack_outcome = match (attack, &attack_record) {
        (Some(a), Some(record)) => Some(assess_attack(
            a,
            record,
            &transcript,
            &bob_keys,
            &solutions,
            &ciphertexts,
        )?),
        _ => None,
    };

    Ok(ExamRun {
        scenario,
        secrets,
        summary: ExamSummary {
            checks_run: check_set.len(),
            check_failures,
            decoys,
            aborted,
            key_agreement,
            solutions_received,
            attack: attack_outcome,
            max_terms,
        },
        transcript,
        decoy_plan,
        attack_record,
        solutions,
        ciphertexts,
    })
}

fn assess_attack(
    attack: &AttackConfig,
    record: &AttackRecord,
    transcript: &Transcript,
    bob_keys: &[KeyMaterial],
    solutions: &[Vec<bool>],
    ciphertexts: &[Vec<bool>],
) -> Result<AttackOutcome> {
    let own = &bob_keys[attack.attacker - 1];
    let actual = &bob_keys[attack.target - 1];
    let estimate: Vec<Option<bool>> = match filter_key_parities(record, &transcript.check_rounds()) {
        Ok(parities) => reconstruct_target_key(&parities, own, attack.target)?
            .bits
            .into_iter()
            .map(Some)
            .collect(),
        Err(_) => estimate_target_key(record, &transcript.key_rounds(), own),
    };
    let key_bits_unknown = estimate.iter().filter(|b| b.is_none()).count();
    // unknown bits fall back to the attacker's own bit, a fair guess
    let guessed = KeyMaterial::new(
        Party::Bob(attack.target),
        estimate.iter().zip(&own.bits).map(|(e, o)| e.unwrap_or(*o)).collect(),
    );
    let key_bits_correct = guessed.bits.iter().zip(&actual.bits).filter(|(a, b)| a == b).count();
    let target_solution = &solutions[attack.target - 1];
    let solution_bits_correct = match ciphertexts.get(attack.target - 1) {
        Some(ct) => {
            let stolen = steal_solution(ct, &guessed)?;
            Some(stolen.iter().zip(target_solution).filter(|(a, b)| a == b).count())
        }
        None => None,
    };
    Ok(AttackOutcome {
        key_bits: actual.len(),
        key_bits_correct,
        key_bits_unknown,
        solution_bits: target_solution.len(),
        solution_bits_correct,
        touched_decoys: record.touched_decoys(),
        independent_decoy_groups: record.independent_decoy_groups(),
    })
}
