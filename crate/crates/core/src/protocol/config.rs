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

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sizes and seed for one exam execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExamConfig {
    /// Number of examinees (Bobs).
    pub bobs: usize,
    /// Number of carrier states distributed.
    pub rounds: usize,
    /// Fraction of rounds sacrificed as checks, in (0, 1).
    pub check_fraction: f64,
    /// Decoy qubits inserted into each Bob's sequence; 0 disables decoys.
    pub decoy_count: usize,
    pub seed: u64,
    /// Bits in each Bob's solution.
    pub solution_length: usize,
    /// Decoy error rate above which Alice aborts. Any mismatch aborts at 0.
    pub decoy_tolerance: f64,
}

impl Default for ExamConfig {
    fn default() -> Self {
        ExamConfig {
            bobs: 3,
            rounds: 256,
            check_fraction: 0.5,
            decoy_count: 0,
            seed: 0,
            solution_length: 64,
            decoy_tolerance: 0.0,
        }
    }
}

impl ExamConfig {
    /// Number of check rounds drawn from `rounds`.
    pub fn check_count(&self) -> usize {
        check_count(self.rounds, self.check_fraction)
    }

    pub fn key_count(&self) -> usize {
        self.rounds - self.check_count().min(self.rounds)
    }

    pub fn validate(&self) -> Result<()> {
        if self.bobs == 0 {
            return Err(Error::Config("at least one Bob is required".into()));
        }
        if self.rounds == 0 {
            return Err(Error::Config("at least one round is required".into()));
        }
        if !(self.check_fraction > 0.0 && self.check_fraction < 1.0) {
            return Err(Error::Config(format!(
                "check fraction {} must lie strictly between 0 and 1",
                self.check_fraction
            )));
        }
        if self.key_count() < self.solution_length {
            return Err(Error::Config(format!(
                "{} key rounds cannot cover a {}-bit solution",
                self.key_count(),
                self.solution_length
            )));
        }
        if !(0.0..=1.0).contains(&self.decoy_tolerance) {
            return Err(Error::Config("decoy tolerance must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

pub(crate) fn check_count(rounds: usize, fraction: f64) -> usize {
    (rounds as f64 * fraction).round() as usize
}

/// Which parties misbehave during a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Everyone follows the protocol. Decoys are inserted if configured.
    Honest,
    /// Bob r taps the original protocol; decoys are never inserted.
    Attacked,
    /// Bob r taps the protocol hardened with decoy qubits.
    AttackedWithDecoys,
}

impl Scenario {
    pub fn is_attacked(self) -> bool {
        !matches!(self, Scenario::Honest)
    }

    pub fn uses_decoys(self, config: &ExamConfig) -> bool {
        config.decoy_count > 0 && !matches!(self, Scenario::Attacked)
    }

    pub fn tag(self) -> &'static str {
        match self {
            Scenario::Honest => "honest",
            Scenario::Attacked => "attacked",
            Scenario::AttackedWithDecoys => "attacked_with_decoys",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "honest" => Ok(Scenario::Honest),
            "attacked" => Ok(Scenario::Attacked),
            "attacked_with_decoys" | "defended" => Ok(Scenario::AttackedWithDecoys),
            other => Err(Error::Config(format!("unknown scenario `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = ExamConfig::default();
        c.validate().unwrap();
        assert_eq!(c.check_count(), 128);
        assert_eq!(c.key_count(), 128);
    }

    #[test]
    fn rejects_bad_configs() {
        let base = ExamConfig::default();
        for bad in [
            ExamConfig { bobs: 0, ..base.clone() },
            ExamConfig { check_fraction: 0.0, ..base.clone() },
            ExamConfig { check_fraction: 1.0, ..base.clone() },
            ExamConfig { rounds: 100, solution_length: 64, ..base.clone() },
        ] {
            assert!(matches!(bad.validate(), Err(Error::Config(_))), "{bad:?}");
        }
    }

    #[test]
    fn scenario_round_trip() {
        for s in [Scenario::Honest, Scenario::Attacked, Scenario::AttackedWithDecoys] {
            assert_eq!(s.tag().parse::<Scenario>().unwrap(), s);
        }
        assert!("nope".parse::<Scenario>().is_err());
    }
}
