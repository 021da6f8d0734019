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

use serde::{Deserialize, Serialize};

/// A protocol participant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Party {
    Alice,
    /// Bob `n`, numbered from 1.
    Bob(usize),
}

impl Party {
    /// Qubit index of this party inside a carrier state.
    pub fn carrier_index(self) -> usize {
        match self {
            Party::Alice => 0,
            Party::Bob(n) => n,
        }
    }
}

/// Label of a physical qubit anywhere in a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Qubit {
    /// Qubit `holder` (0 = Alice, n = Bob n) of the carrier for `round`.
    Carrier { round: usize, holder: usize },
    /// Decoy at `position` of Bob `bob`'s extended sequence.
    Decoy { bob: usize, position: usize },
    /// Attacker ancilla used at sequence position `position`.
    Ancilla { position: usize },
}

/// What occupies one slot of a Bob's transmitted sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceItem {
    /// His member of the carrier state for this round.
    Carrier(usize),
    /// A decoy at this position.
    Decoy(usize),
}

impl SequenceItem {
    /// Register label of this item when it sits in Bob `bob`'s sequence.
    pub fn qubit(self, bob: usize) -> Qubit {
        match self {
            SequenceItem::Carrier(round) => Qubit::Carrier { round, holder: bob },
            SequenceItem::Decoy(position) => Qubit::Decoy { bob, position },
        }
    }

    pub fn is_decoy(self) -> bool {
        matches!(self, SequenceItem::Decoy(_))
    }
}

/// Sequence sent to a Bob when no decoys are inserted.
pub fn plain_sequence(rounds: usize) -> Vec<SequenceItem> {
    (1..=rounds).map(SequenceItem::Carrier).collect()
}
