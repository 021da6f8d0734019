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

//! Per-round protocol record and its line format.
//!
//! One round per line, tab separated, fields in this order:
//!
//! ```text
//! round  role     basis  alice  bobs          verdict
//! 1      check:1  X      +      +,-,-         pass
//! 2      key:1    Z      0      0,1,1         -
//! ```
//!
//! `role` carries the round's rank inside its check or key set. Key rounds
//! have no verdict and print `-`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::keys::KeyMaterial;
use crate::error::{Error, Result};
use crate::quantum::{Basis, MeasurementOutcome, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoundRole {
    /// `l`-th check round.
    Check(usize),
    /// `m`-th key round.
    Key(usize),
}

impl fmt::Display for RoundRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RoundRole::Check(l) => write!(f, "check:{l}"),
            RoundRole::Key(m) => write!(f, "key:{m}"),
        }
    }
}

impl FromStr for RoundRole {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InconsistentTranscript(format!("bad role `{s}`"));
        let (kind, idx) = s.split_once(':').ok_or_else(bad)?;
        let idx: usize = idx.parse().map_err(|_| bad())?;
        match kind {
            "check" => Ok(RoundRole::Check(idx)),
            "key" => Ok(RoundRole::Key(idx)),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord {
    pub round: usize,
    pub role: RoundRole,
    pub basis: Basis,
    pub alice: MeasurementOutcome,
    pub bobs: Vec<MeasurementOutcome>,
    /// `Some(pass)` for check rounds, `None` for key rounds.
    pub verdict: Option<bool>,
}

impl fmt::Display for RoundRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bobs: Vec<String> = self.bobs.iter().map(|o| o.to_string()).collect();
        let verdict = match self.verdict {
            Some(true) => "pass",
            Some(false) => "fail",
            None => "-",
        };
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}\t{}",
            self.round,
            self.role,
            self.basis,
            self.alice,
            bobs.join(","),
            verdict
        )
    }
}

fn parse_outcome(basis: Basis, s: &str) -> Result<MeasurementOutcome> {
    let bad = || Error::InconsistentTranscript(format!("bad {basis} outcome `{s}`"));
    match (basis, s) {
        (Basis::Z, "0") => Ok(MeasurementOutcome::Z(false)),
        (Basis::Z, "1") => Ok(MeasurementOutcome::Z(true)),
        (Basis::X, "+") => Ok(MeasurementOutcome::X(Sign::Plus)),
        (Basis::X, "-") => Ok(MeasurementOutcome::X(Sign::Minus)),
        _ => Err(bad()),
    }
}

impl FromStr for RoundRecord {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let fields: Vec<&str> = line.split('\t').collect();
        let bad = |what: &str| Error::InconsistentTranscript(format!("{what} in `{line}`"));
        if fields.len() != 6 {
            return Err(bad("expected 6 fields"));
        }
        let round = fields[0].parse().map_err(|_| bad("bad round index"))?;
        let role: RoundRole = fields[1].parse()?;
        let basis = match fields[2] {
            "Z" => Basis::Z,
            "X" => Basis::X,
            _ => return Err(bad("bad basis")),
        };
        let alice = parse_outcome(basis, fields[3])?;
        let bobs = fields[4]
            .split(',')
            .map(|o| parse_outcome(basis, o))
            .collect::<Result<_>>()?;
        let verdict = match fields[5] {
            "pass" => Some(true),
            "fail" => Some(false),
            "-" => None,
            _ => return Err(bad("bad verdict")),
        };
        Ok(RoundRecord {
            round,
            role,
            basis,
            alice,
            bobs,
            verdict,
        })
    }
}

/// Everything observable about one exam execution, in round order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub records: Vec<RoundRecord>,
    /// Alice's key followed by each Bob's measured key.
    pub keys: Vec<KeyMaterial>,
}

impl Transcript {
    pub fn check_rounds(&self) -> BTreeSet<usize> {
        self.records
            .iter()
            .filter(|r| matches!(r.role, RoundRole::Check(_)))
            .map(|r| r.round)
            .collect()
    }

    pub fn key_rounds(&self) -> Vec<usize> {
        self.records
            .iter()
            .filter(|r| matches!(r.role, RoundRole::Key(_)))
            .map(|r| r.round)
            .collect()
    }

    pub fn check_failures(&self) -> usize {
        self.records.iter().filter(|r| r.verdict == Some(false)).count()
    }

    /// Checks that rounds `1..=rounds` appear once each, in order, that the
    /// role ranks count up within each set, and that key rounds used `Z`.
    pub fn validate(&self, rounds: usize) -> Result<()> {
        if self.records.len() != rounds {
            return Err(Error::InconsistentTranscript(format!(
                "{} records for {rounds} rounds",
                self.records.len()
            )));
        }
        let (mut l, mut m) = (0, 0);
        for (i, r) in self.records.iter().enumerate() {
            if r.round != i + 1 {
                return Err(Error::InconsistentTranscript(format!("round {} out of order", r.round)));
            }
            match r.role {
                RoundRole::Check(idx) => {
                    l += 1;
                    if idx != l || r.verdict.is_none() {
                        return Err(Error::InconsistentTranscript(format!("bad check entry {}", r.round)));
                    }
                }
                RoundRole::Key(idx) => {
                    m += 1;
                    if idx != m || r.basis != Basis::Z || r.verdict.is_some() {
                        return Err(Error::InconsistentTranscript(format!("bad key entry {}", r.round)));
                    }
                }
            }
        }
        Ok(())
    }

    /// The line-oriented record form, newline terminated.
    pub fn to_records(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse_records(text: &str) -> Result<Vec<RoundRecord>> {
        text.lines().filter(|l| !l.is_empty()).map(str::parse).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_line_layout() {
        let rec = RoundRecord {
            round: 7,
            role: RoundRole::Check(3),
            basis: Basis::X,
            alice: MeasurementOutcome::X(Sign::Minus),
            bobs: vec![MeasurementOutcome::X(Sign::Plus), MeasurementOutcome::X(Sign::Minus)],
            verdict: Some(true),
        };
        assert_eq!(rec.to_string(), "7\tcheck:3\tX\t-\t+,-\tpass");
        assert_eq!(rec.to_string().parse::<RoundRecord>().unwrap(), rec);

        let key = RoundRecord {
            round: 8,
            role: RoundRole::Key(1),
            basis: Basis::Z,
            alice: MeasurementOutcome::Z(true),
            bobs: vec![MeasurementOutcome::Z(false)],
            verdict: None,
        };
        assert_eq!(key.to_string(), "8\tkey:1\tZ\t1\t0\t-");
    }

    #[test]
    fn rejects_malformed_lines() {
        for line in ["1\tcheck:1\tZ\t0\t1", "1\tfoo:1\tZ\t0\t1\tpass", "1\tkey:1\tZ\t+\t1\t-", "x\tkey:1\tZ\t0\t1\t-"] {
            assert!(line.parse::<RoundRecord>().is_err(), "{line}");
        }
    }
}
