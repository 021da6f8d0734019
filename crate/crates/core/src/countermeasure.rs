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

//! Decoy qubits hidden in each Bob's sequence.
//!
//! Before sending, Alice inserts `d` single qubits in random `|+>`/`|->`
//! states at random slots of every Bob's sequence. Once everyone has
//! received, she announces the slots, each Bob measures those qubits in X,
//! and mismatches against the prepared signs are counted. Seen alone, a
//! decoy and a carrier member are both `½·I`, so the attacker cannot avoid
//! them; a decoy that controls a CNOT onto his ancilla is dephased and
//! reports the wrong sign half of the time.

use std::collections::BTreeMap;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::adversary::{tap_sequences, AttackConfig, AttackRecord};
use crate::error::{invalid, Error, Result};
use crate::protocol::{ExamConfig, Qubit, SequenceItem};
use crate::quantum::{Basis, PureState, Register, Sign};
use crate::rng::SeedTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decoy {
    /// 1-based slot in the extended sequence.
    pub position: usize,
    pub sign: Sign,
}

/// Decoy slots and signs for every Bob.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoyPlan {
    rounds: usize,
    decoy_count: usize,
    per_bob: Vec<Vec<Decoy>>,
}

impl DecoyPlan {
    /// Plan with no decoys.
    pub fn empty(bobs: usize, rounds: usize) -> Self {
        DecoyPlan {
            rounds,
            decoy_count: 0,
            per_bob: vec![Vec::new(); bobs],
        }
    }

    /// Builds a plan from explicit decoys; `per_bob[n - 1]` belongs to Bob n.
    pub fn new(rounds: usize, mut per_bob: Vec<Vec<Decoy>>) -> Result<Self> {
        let decoy_count = per_bob.first().map_or(0, Vec::len);
        let length = rounds + decoy_count;
        for (i, decoys) in per_bob.iter_mut().enumerate() {
            if decoys.len() != decoy_count {
                return Err(invalid("every Bob needs the same number of decoys"));
            }
            decoys.sort_by_key(|d| d.position);
            if decoys.iter().any(|d| d.position == 0 || d.position > length) {
                return Err(invalid(format!("decoy slot outside 1..={length} for Bob {}", i + 1)));
            }
            if decoys.windows(2).any(|w| w[0].position == w[1].position) {
                return Err(invalid(format!("repeated decoy slot for Bob {}", i + 1)));
            }
        }
        Ok(DecoyPlan {
            rounds,
            decoy_count,
            per_bob,
        })
    }

    pub fn decoy_count(&self) -> usize {
        self.decoy_count
    }

    pub fn bobs(&self) -> usize {
        self.per_bob.len()
    }

    pub fn extended_length(&self) -> usize {
        self.rounds + self.decoy_count
    }

    pub fn decoys(&self, bob: usize) -> &[Decoy] {
        &self.per_bob[bob - 1]
    }

    /// Slot-by-slot contents of Bob `bob`'s transmitted sequence. Carriers
    /// fill the non-decoy slots in round order.
    pub fn extended_sequence(&self, bob: usize) -> Vec<SequenceItem> {
        let decoys = self.decoys(bob);
        let mut next_round = 1;
        let mut d = decoys.iter().peekable();
        (1..=self.extended_length())
            .map(|pos| {
                if d.peek().is_some_and(|x| x.position == pos) {
                    d.next();
                    SequenceItem::Decoy(pos)
                } else {
                    next_round += 1;
                    SequenceItem::Carrier(next_round - 1)
                }
            })
            .collect()
    }

    /// Adds every decoy to `register` as its own component.
    pub fn prepare(&self, register: &mut Register<Qubit>) -> Result<()> {
        for bob in 1..=self.bobs() {
            for d in self.decoys(bob) {
                register.insert(PureState::decoy(d.sign), &[Qubit::Decoy { bob, position: d.position }])?;
            }
        }
        Ok(())
    }
}

/// Samples `decoy_count` distinct slots and a random sign per decoy,
/// independently for each Bob.
pub fn insert_decoys<R: Rng + ?Sized>(config: &ExamConfig, rng: &mut R) -> Result<DecoyPlan> {
    let length = config.rounds + config.decoy_count;
    if config.decoy_count > length {
        return Err(invalid("more decoys than slots"));
    }
    let per_bob = (0..config.bobs)
        .map(|_| {
            let mut slots: Vec<usize> = index::sample(rng, length, config.decoy_count)
                .into_iter()
                .map(|i| i + 1)
                .collect();
            slots.sort_unstable();
            slots
                .into_iter()
                .map(|position| Decoy {
                    position,
                    sign: Sign::random(rng),
                })
                .collect()
        })
        .collect();
    DecoyPlan::new(config.rounds, per_bob)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoyStats {
    pub measured: usize,
    pub mismatched: usize,
}

/// Outcome of the decoy comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoyVerdict {
    /// Entry `n - 1` is Bob n.
    pub per_bob: Vec<DecoyStats>,
}

impl DecoyVerdict {
    pub fn measured(&self) -> usize {
        self.per_bob.iter().map(|s| s.measured).sum()
    }

    pub fn mismatched(&self) -> usize {
        self.per_bob.iter().map(|s| s.mismatched).sum()
    }

    /// Mismatches over measured decoys; 0 when nothing was measured.
    pub fn error_rate(&self) -> f64 {
        match self.measured() {
            0 => 0.0,
            m => self.mismatched() as f64 / m as f64,
        }
    }

    /// Whether Alice aborts at the given error-rate tolerance.
    pub fn aborts(&self, tolerance: f64) -> bool {
        self.mismatched() > 0 && self.error_rate() > tolerance
    }
}

/// Measured decoy signs keyed by `(bob, position)`.
pub type DecoyReadings = BTreeMap<(usize, usize), Sign>;

/// Compares each Bob's X readings with the prepared signs.
pub fn reveal_and_verify(plan: &DecoyPlan, readings: &DecoyReadings) -> Result<DecoyVerdict> {
    let per_bob = (1..=plan.bobs())
        .map(|bob| {
            let mut stats = DecoyStats::default();
            for d in plan.decoys(bob) {
                let got = readings.get(&(bob, d.position)).ok_or_else(|| {
                    Error::InconsistentTranscript(format!("no reading for Bob {bob}'s decoy at slot {}", d.position))
                })?;
                stats.measured += 1;
                stats.mismatched += (*got != d.sign) as usize;
            }
            Ok(stats)
        })
        .collect::<Result<_>>()?;
    Ok(DecoyVerdict { per_bob })
}

/// Each Bob measures his announced decoys in X. One stream per decoy.
pub fn measure_decoys(register: &mut Register<Qubit>, plan: &DecoyPlan, seeds: SeedTree) -> Result<DecoyReadings> {
    let mut readings = DecoyReadings::new();
    for bob in 1..=plan.bobs() {
        for d in plan.decoys(bob) {
            let mut rng = seeds.path(&[bob as u64, d.position as u64]).rng();
            let o = register.measure(Qubit::Decoy { bob, position: d.position }, Basis::X, &mut rng)?;
            readings.insert((bob, d.position), o.sign().expect("X outcome"));
        }
    }
    Ok(readings)
}

/// Runs the tap against the extended sequences of Bob k and Bob r. Returns
/// the record and the number of decoys it touched.
pub fn attack_under_decoys(
    register: &mut Register<Qubit>,
    plan: &DecoyPlan,
    attack: &AttackConfig,
    rounds: usize,
    seeds: SeedTree,
) -> Result<(AttackRecord, usize)> {
    let record = tap_sequences(
        register,
        &plan.extended_sequence(attack.target),
        &plan.extended_sequence(attack.attacker),
        attack,
        rounds,
        seeds,
    )?;
    let touched = record.touched_decoys();
    Ok((record, touched))
}

/// Isolated experiment: `touched` decoys with random signs each control a
/// CNOT onto a fresh ancilla, which is read in Z; then the decoys are
/// verified as usual. All decoys are reported as Bob 1's.
pub fn simulate_touched_decoys<R: Rng + ?Sized>(touched: usize, rng: &mut R) -> Result<DecoyVerdict> {
    let mut register = Register::new();
    let mut decoys = Vec::with_capacity(touched);
    for position in 1..=touched {
        let sign = Sign::random(rng);
        decoys.push(Decoy { position, sign });
        let d = Qubit::Decoy { bob: 1, position };
        let g = Qubit::Ancilla { position };
        register.insert(PureState::decoy(sign), &[d])?;
        register.insert(PureState::zeros(1), &[g])?;
        register.cnot(d, g)?;
        register.measure(g, Basis::Z, rng)?;
    }
    let mut readings = DecoyReadings::new();
    for position in 1..=touched {
        let o = register.measure(Qubit::Decoy { bob: 1, position }, Basis::X, rng)?;
        readings.insert((1, position), o.sign().expect("X outcome"));
    }
    reveal_and_verify(&DecoyPlan::new(0, vec![decoys])?, &readings)
}

/// Chance that at least one of `t` independently touched decoys mismatches.
pub fn detection_probability(t: usize) -> f64 {
    1.0 - 0.5f64.powi(t as i32)
}

/// Mean number of decoys hit when `tapped` of `length` slots are tapped in
/// both sequences and each sequence holds `decoy_count` decoys.
pub fn expected_touched_decoys(length: usize, decoy_count: usize, tapped: usize) -> f64 {
    if length == 0 {
        return 0.0;
    }
    2.0 * decoy_count as f64 * tapped as f64 / length as f64
}
