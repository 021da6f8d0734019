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

//! Hierarchical seed derivation.
//!
//! Every random decision in a run draws from its own stream, addressed by a
//! path of labels below a master seed. Streams never share state, so the
//! outcome of one step does not depend on how many draws another step made,
//! nor on the order in which independent steps execute.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used throughout the simulator.
pub type SimRng = ChaCha8Rng;

/// A node in the seed tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedTree(u64);

impl SeedTree {
    pub fn new(seed: u64) -> Self {
        SeedTree(seed)
    }

    pub fn seed(self) -> u64 {
        self.0
    }

    pub fn child(self, label: u64) -> Self {
        SeedTree(splitmix64(self.0 ^ splitmix64(label.wrapping_add(0x5851_f42d_4c95_7f2d))))
    }

    pub fn path(self, labels: &[u64]) -> Self {
        labels.iter().fold(self, |node, &l| node.child(l))
    }

    pub fn rng(self) -> SimRng {
        SimRng::seed_from_u64(self.0)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
