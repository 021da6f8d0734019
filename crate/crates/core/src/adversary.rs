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

//! The dishonest-examinee attack.
//!
//! Bob r appends an ancilla `|0>` to each transmitted slot, applies a CNOT
//! from Bob k's qubit and one from his own qubit onto it, and reads the
//! ancilla in Z. On a carrier state the ancilla comes out as `s_k ⊕ s_r`
//! with certainty and the carrier is left exactly as it was, so the checks
//! see nothing. After the key rounds he turns his own key into Bob k's by
//! XOR-ing in those parities.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::protocol::{otp_decrypt, KeyMaterial, Party, Qubit, SequenceItem};
use crate::quantum::{Basis, PureState, Register};
use crate::rng::SeedTree;

/// Which slots of the transmitted sequences the attacker taps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PositionStrategy {
    All,
    /// A uniformly random subset of `round(f · length)` slots.
    Fraction(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackConfig {
    /// Bob r.
    pub attacker: usize,
    /// Bob k.
    pub target: usize,
    /// Whether a helper on Bob k's channel performs the first CNOT.
    pub charlie_assisted: bool,
    pub positions: PositionStrategy,
}

impl AttackConfig {
    pub fn new(attacker: usize, target: usize) -> Self {
        AttackConfig {
            attacker,
            target,
            charlie_assisted: false,
            positions: PositionStrategy::All,
        }
    }

    pub fn validate(&self, bobs: usize) -> Result<()> {
        if self.attacker == self.target {
            return Err(invalid("attacker and target must be different Bobs"));
        }
        for n in [self.attacker, self.target] {
            if n == 0 || n > bobs {
                return Err(invalid(format!("Bob {n} does not exist among {bobs} Bobs")));
            }
        }
        if let PositionStrategy::Fraction(f) = self.positions {
            if !(0.0..=1.0).contains(&f) {
                return Err(invalid(format!("tap fraction {f} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Whose qubit controls a scheduled CNOT.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ControlOwner {
    Target,
    Attacker,
}

/// Where on the network a CNOT is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChannelSegment {
    /// One location with access to both channels.
    TapPoint,
    /// Alice → Bob k, where the helper sits.
    TargetChannel,
    /// Alice → Bob r.
    AttackerChannel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduledCnot {
    pub control: ControlOwner,
    pub segment: ChannelSegment,
}

/// CNOT order for one tapped slot. The ancilla is always the target.
pub fn order_operations(config: &AttackConfig) -> Vec<ScheduledCnot> {
    let (first, second) = if config.charlie_assisted {
        (ChannelSegment::TargetChannel, ChannelSegment::AttackerChannel)
    } else {
        (ChannelSegment::TapPoint, ChannelSegment::TapPoint)
    };
    vec![
        ScheduledCnot {
            control: ControlOwner::Target,
            segment: first,
        },
        ScheduledCnot {
            control: ControlOwner::Attacker,
            segment: second,
        },
    ]
}

/// Taps one standalone carrier state: qubits `target` and `attacker` are the
/// carrier indices of Bob k and Bob r. Returns the carrier after the ancilla
/// is measured and discarded, and the ancilla bit.
pub fn attack_round<R: Rng + ?Sized>(
    state: &PureState,
    target: usize,
    attacker: usize,
    rng: &mut R,
) -> Result<(PureState, bool)> {
    attack_round_scheduled(state, target, attacker, &order_operations(&AttackConfig::new(attacker, target)), rng)
}

/// [`attack_round`] following an explicit schedule.
pub fn attack_round_scheduled<R: Rng + ?Sized>(
    state: &PureState,
    target: usize,
    attacker: usize,
    schedule: &[ScheduledCnot],
    rng: &mut R,
) -> Result<(PureState, bool)> {
    if target == attacker {
        return Err(invalid("attacker and target qubits must differ"));
    }
    let n = state.num_qubits();
    let ancilla = n;
    let mut s = state.tensor(&PureState::zeros(1));
    for step in schedule {
        let control = match step.control {
            ControlOwner::Target => target,
            ControlOwner::Attacker => attacker,
        };
        s = s.cnot(control, ancilla)?;
    }
    let (bit, rest) = s.measure_and_remove(ancilla, Basis::Z, rng)?;
    Ok((rest, bit.bit().expect("Z outcome")))
}

/// One tapped slot of the two sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tap {
    /// 1-based slot index in the transmitted sequences.
    pub position: usize,
    /// What actually sat in Bob k's sequence at this slot.
    pub target_item: SequenceItem,
    /// What actually sat in Bob r's sequence at this slot.
    pub attacker_item: SequenceItem,
    pub ancilla: bool,
}

impl Tap {
    pub fn touched_decoys(&self) -> usize {
        self.target_item.is_decoy() as usize + self.attacker_item.is_decoy() as usize
    }

    /// Both items are carriers of the same round.
    pub fn aligned_round(&self) -> Option<usize> {
        match (self.target_item, self.attacker_item) {
            (SequenceItem::Carrier(a), SequenceItem::Carrier(b)) if a == b => Some(a),
            _ => None,
        }
    }
}

/// The attacker's data from one run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackRecord {
    /// Number of carrier rounds in the run.
    pub rounds: usize,
    pub taps: Vec<Tap>,
}

impl AttackRecord {
    /// A record for the undefended protocol where slot `p` carried round `p`
    /// and produced `parities[p - 1]`.
    pub fn from_round_parities(parities: &[bool]) -> Self {
        AttackRecord {
            rounds: parities.len(),
            taps: parities
                .iter()
                .enumerate()
                .map(|(i, &ancilla)| Tap {
                    position: i + 1,
                    target_item: SequenceItem::Carrier(i + 1),
                    attacker_item: SequenceItem::Carrier(i + 1),
                    ancilla,
                })
                .collect(),
        }
    }

    /// Decoys entangled with an ancilla.
    pub fn touched_decoys(&self) -> usize {
        self.taps.iter().map(Tap::touched_decoys).sum()
    }

    /// Touched decoys counted so that two decoys sharing one ancilla count
    /// once; their X outcomes are perfectly correlated.
    pub fn independent_decoy_groups(&self) -> usize {
        self.taps
            .iter()
            .map(|t| match t.touched_decoys() {
                2 => 1,
                n => n,
            })
            .sum()
    }

    /// `s_k ⊕ s_r` for each round whose two carrier qubits shared an ancilla.
    pub fn round_parities(&self) -> BTreeMap<usize, bool> {
        self.taps
            .iter()
            .filter_map(|t| t.aligned_round().map(|p| (p, t.ancilla)))
            .collect()
    }
}

/// Drops the check-round parities, keeping key rounds in order.
pub fn filter_key_parities(record: &AttackRecord, check_set: &BTreeSet<usize>) -> Result<Vec<bool>> {
    let parities = record.round_parities();
    (1..=record.rounds)
        .filter(|p| !check_set.contains(p))
        .map(|p| {
            parities
                .get(&p)
                .copied()
                .ok_or_else(|| Error::InconsistentTranscript(format!("no ancilla parity for key round {p}")))
        })
        .collect()
}

/// Bob k's key bit m is `parity_m ⊕ own_m`.
pub fn reconstruct_target_key(parities: &[bool], own_key: &KeyMaterial, target: usize) -> Result<KeyMaterial> {
    if parities.len() != own_key.len() {
        return Err(invalid(format!(
            "{} parities for a {}-bit key",
            parities.len(),
            own_key.len()
        )));
    }
    Ok(KeyMaterial::new(
        Party::Bob(target),
        parities.iter().zip(&own_key.bits).map(|(p, k)| p ^ k).collect(),
    ))
}

/// Best-effort reconstruction once slot contents are public.
///
/// Any tap that paired a target carrier of key round `a` with an attacker
/// carrier of key round `b` fixes the target's bit for `a` as
/// `ancilla ⊕ own bit of b`, since later Z measurements respect the parity
/// the ancilla projected onto. Rounds with no such tap come back `None`.
pub fn estimate_target_key(record: &AttackRecord, key_rounds: &[usize], own_key: &KeyMaterial) -> Vec<Option<bool>> {
    let own: BTreeMap<usize, bool> = key_rounds.iter().copied().zip(own_key.bits.iter().copied()).collect();
    let mut learned: BTreeMap<usize, bool> = BTreeMap::new();
    for tap in &record.taps {
        if let (SequenceItem::Carrier(a), SequenceItem::Carrier(b)) = (tap.target_item, tap.attacker_item) {
            if let Some(&mine) = own.get(&b) {
                learned.entry(a).or_insert(tap.ancilla ^ mine);
            }
        }
    }
    key_rounds.iter().map(|p| learned.get(p).copied()).collect()
}

/// Decrypts Bob k's ciphertext with the reconstructed key.
pub fn steal_solution(ciphertext: &[bool], key: &KeyMaterial) -> Result<Vec<bool>> {
    otp_decrypt(ciphertext, key)
}

/// Slots the attacker taps, in increasing order.
pub fn choose_positions<R: Rng + ?Sized>(strategy: PositionStrategy, length: usize, rng: &mut R) -> Vec<usize> {
    match strategy {
        PositionStrategy::All => (1..=length).collect(),
        PositionStrategy::Fraction(f) => {
            let count = ((length as f64 * f).round() as usize).min(length);
            let mut picked: Vec<usize> = index::sample(rng, length, count).into_iter().map(|i| i + 1).collect();
            picked.sort_unstable();
            picked
        }
    }
}

pub(crate) const STRATEGY_STREAM: u64 = 0;
pub(crate) const ANCILLA_STREAM: u64 = 1;

/// Taps the two transmitted sequences inside a running register.
///
/// The attacker cannot see which slots hold decoys, so he pairs slot `j` of
/// Bob k's sequence with slot `j` of his own. Ancillas are measured right
/// away; randomness comes from `seeds` (one stream per slot).
pub fn tap_sequences(
    register: &mut Register<Qubit>,
    target_sequence: &[SequenceItem],
    attacker_sequence: &[SequenceItem],
    config: &AttackConfig,
    rounds: usize,
    seeds: SeedTree,
) -> Result<AttackRecord> {
    if target_sequence.len() != attacker_sequence.len() {
        return Err(invalid("transmitted sequences differ in length"));
    }
    let schedule = order_operations(config);
    let positions = choose_positions(
        config.positions,
        target_sequence.len(),
        &mut seeds.child(STRATEGY_STREAM).rng(),
    );
    let mut taps = Vec::with_capacity(positions.len());
    for position in positions {
        let target_item = target_sequence[position - 1];
        let attacker_item = attacker_sequence[position - 1];
        let ancilla = Qubit::Ancilla { position };
        register.insert(PureState::zeros(1), &[ancilla])?;
        for step in &schedule {
            let control = match step.control {
                ControlOwner::Target => target_item.qubit(config.target),
                ControlOwner::Attacker => attacker_item.qubit(config.attacker),
            };
            register.cnot(control, ancilla)?;
        }
        let mut rng = seeds.path(&[ANCILLA_STREAM, position as u64]).rng();
        let bit = register.measure(ancilla, Basis::Z, &mut rng)?;
        taps.push(Tap {
            position,
            target_item,
            attacker_item,
            ancilla: bit.bit().expect("Z outcome"),
        });
    }
    Ok(AttackRecord { rounds, taps })
}
