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

use super::channel::Party;
use super::rounds::SecretBits;
use crate::error::{invalid, Error, Result};

/// Ordered key bits held by one party, one per key round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyMaterial {
    pub owner: Party,
    pub bits: Vec<bool>,
}

impl KeyMaterial {
    pub fn new(owner: Party, bits: Vec<bool>) -> Self {
        KeyMaterial { owner, bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Alice's view of Bob `n`'s key: her bit XOR his secret bit, round by round.
pub fn alice_recover_bob_key(alice: &KeyMaterial, secrets: &[SecretBits], n: usize) -> Result<KeyMaterial> {
    if alice.len() != secrets.len() {
        return Err(invalid(format!(
            "{} key bits but {} secrets",
            alice.len(),
            secrets.len()
        )));
    }
    if n == 0 || secrets.iter().any(|s| s.len() < n) {
        return Err(invalid(format!("no Bob {n} in these secrets")));
    }
    let bits = alice
        .bits
        .iter()
        .zip(secrets)
        .map(|(&a, s)| a ^ s.bob(n))
        .collect();
    Ok(KeyMaterial::new(Party::Bob(n), bits))
}

/// XORs `message` with the leading bits of `key`.
pub fn otp_encrypt(message: &[bool], key: &KeyMaterial) -> Result<Vec<bool>> {
    if key.len() < message.len() {
        return Err(Error::KeyExhausted {
            needed: message.len(),
            available: key.len(),
        });
    }
    Ok(message.iter().zip(&key.bits).map(|(m, k)| m ^ k).collect())
}

pub fn otp_decrypt(ciphertext: &[bool], key: &KeyMaterial) -> Result<Vec<bool>> {
    otp_encrypt(ciphertext, key)
}
