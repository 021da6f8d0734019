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

use qexam_core::adversary::AttackConfig;
use qexam_core::countermeasure::detection_probability;
use qexam_core::protocol::{run_exam, ExamConfig, ExamRun, Scenario};
use qexam_core::rng::SeedTree;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::stats::Proportion;
use crate::HarnessError;

/// One batch of independent exam runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    /// Free-form name used in reports, e.g. `attacked_with_decoys/decoys=4`.
    pub label: String,
    pub scenario: Scenario,
    /// `exam.seed` is the master seed; trial seeds derive from it.
    pub exam: ExamConfig,
    pub attack: Option<AttackConfig>,
    pub trials: usize,
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.trials == 0 {
            return Err(HarnessError::Config("trial count must be at least 1".into()));
        }
        if self.scenario.is_attacked() && self.attack.is_none() {
            return Err(HarnessError::Config(format!("scenario {} needs an attacker and target", self.scenario)));
        }
        self.exam.validate()?;
        if let Some(a) = &self.attack {
            a.validate(self.exam.bobs)?;
        }
        Ok(())
    }

    /// Seed of trial `trial`; independent of worker count and of other trials.
    pub fn trial_seed(&self, trial: usize) -> u64 {
        SeedTree::new(self.exam.seed).child(trial as u64).seed()
    }

    pub fn trial_config(&self, trial: usize) -> ExamConfig {
        ExamConfig {
            seed: self.trial_seed(trial),
            ..self.exam.clone()
        }
    }

    /// Executes a single trial.
    pub fn run_trial(&self, trial: usize) -> Result<ExamRun, HarnessError> {
        Ok(run_exam(&self.trial_config(trial), self.scenario, self.attack.as_ref())?)
    }
}

/// Per-trial row of the detail file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialDetail {
    pub label: String,
    pub trial: usize,
    pub seed: u64,
    pub checks_run: usize,
    pub check_failures: usize,
    pub decoys_measured: usize,
    pub decoy_mismatches: usize,
    pub aborted: bool,
    pub keys_agree: bool,
    pub solutions_received: Option<bool>,
    pub attacker_key_bits: Option<usize>,
    pub attacker_key_correct: Option<usize>,
    pub stolen_solution_exact: Option<bool>,
    pub touched_decoys: Option<usize>,
    pub independent_decoy_groups: Option<usize>,
}

impl TrialDetail {
    pub fn from_run(label: &str, trial: usize, seed: u64, run: &ExamRun) -> Self {
        let s = &run.summary;
        let a = s.attack.as_ref();
        TrialDetail {
            label: label.to_string(),
            trial,
            seed,
            checks_run: s.checks_run,
            check_failures: s.check_failures,
            decoys_measured: s.decoys.as_ref().map_or(0, |v| v.measured()),
            decoy_mismatches: s.decoy_mismatches(),
            aborted: s.aborted,
            keys_agree: s.key_agreement.iter().all(|&ok| ok),
            solutions_received: s.solutions_received.as_ref().map(|v| v.iter().all(|&ok| ok)),
            attacker_key_bits: a.map(|a| a.key_bits),
            attacker_key_correct: a.map(|a| a.key_bits_correct),
            stolen_solution_exact: a.and_then(|a| a.solution_bits_correct.map(|_| a.solution_exact())),
            touched_decoys: a.map(|a| a.touched_decoys),
            independent_decoy_groups: a.map(|a| a.independent_decoy_groups),
        }
    }
}

/// Aggregates for one scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub label: String,
    pub scenario: Scenario,
    pub trials: usize,
    pub master_seed: u64,
    /// Set when the scenario could not run; all aggregates are then empty.
    pub error: Option<String>,
    /// Failed check rounds over all check rounds.
    pub check_failure_rate: f64,
    /// Mismatched decoys over all measured decoys.
    pub decoy_mismatch_rate: f64,
    /// Trials in which Alice aborted.
    pub detection: Option<Proportion>,
    /// Trials in which at least one decoy mismatched.
    pub decoy_detection: Option<Proportion>,
    /// Mean of `1 - 2^-t` over trials, `t` the independent decoy touches.
    pub predicted_decoy_detection: Option<f64>,
    pub mean_touched_decoys: Option<f64>,
    /// Trials where Alice's reconstruction matched every Bob's key.
    pub key_agreement_rate: f64,
    /// Among unaborted trials, those where every solution arrived intact.
    pub solution_delivery: Option<Proportion>,
    /// Correct target key bits over all target key bits.
    pub key_recovery_accuracy: Option<f64>,
    /// Trials with the full target key recovered.
    pub exact_key_theft: Option<Proportion>,
    /// Among unaborted trials, those with the solution copied exactly.
    pub stolen_solution_accuracy: Option<Proportion>,
    pub seeds: Vec<u64>,
}

impl ScenarioReport {
    fn failed(spec: &ScenarioSpec, err: &HarnessError) -> Self {
        ScenarioReport {
            label: spec.label.clone(),
            scenario: spec.scenario,
            trials: spec.trials,
            master_seed: spec.exam.seed,
            error: Some(err.to_string()),
            check_failure_rate: 0.0,
            decoy_mismatch_rate: 0.0,
            detection: None,
            decoy_detection: None,
            predicted_decoy_detection: None,
            mean_touched_decoys: None,
            key_agreement_rate: 0.0,
            solution_delivery: None,
            key_recovery_accuracy: None,
            exact_key_theft: None,
            stolen_solution_accuracy: None,
            seeds: Vec::new(),
        }
    }

    fn aggregate(spec: &ScenarioSpec, details: &[TrialDetail]) -> Self {
        let n = details.len();
        let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let sum = |f: fn(&TrialDetail) -> usize| details.iter().map(f).sum::<usize>();
        let count = |f: &dyn Fn(&TrialDetail) -> bool| details.iter().filter(|d| f(d)).count();

        let attacked = spec.scenario.is_attacked();
        let with_decoys = spec.scenario.uses_decoys(&spec.exam);
        let delivered: Vec<bool> = details.iter().filter_map(|d| d.solutions_received).collect();
        let stolen: Vec<bool> = details.iter().filter_map(|d| d.stolen_solution_exact).collect();
        let key_bits: usize = details.iter().filter_map(|d| d.attacker_key_bits).sum();
        let key_correct: usize = details.iter().filter_map(|d| d.attacker_key_correct).sum();

        ScenarioReport {
            label: spec.label.clone(),
            scenario: spec.scenario,
            trials: n,
            master_seed: spec.exam.seed,
            error: None,
            check_failure_rate: ratio(sum(|d| d.check_failures), sum(|d| d.checks_run)),
            decoy_mismatch_rate: ratio(sum(|d| d.decoy_mismatches), sum(|d| d.decoys_measured)),
            detection: Some(Proportion::new(count(&|d| d.aborted), n)),
            decoy_detection: with_decoys.then(|| Proportion::new(count(&|d| d.decoy_mismatches > 0), n)),
            predicted_decoy_detection: (with_decoys && attacked).then(|| {
                details
                    .iter()
                    .map(|d| detection_probability(d.independent_decoy_groups.unwrap_or(0)))
                    .sum::<f64>()
                    / n as f64
            }),
            mean_touched_decoys: attacked
                .then(|| details.iter().map(|d| d.touched_decoys.unwrap_or(0)).sum::<usize>() as f64 / n as f64),
            key_agreement_rate: ratio(count(&|d| d.keys_agree), n),
            solution_delivery: Some(Proportion::new(delivered.iter().filter(|&&b| b).count(), delivered.len())),
            key_recovery_accuracy: attacked.then(|| ratio(key_correct, key_bits)),
            exact_key_theft: attacked.then(|| {
                Proportion::new(count(&|d| d.attacker_key_bits == d.attacker_key_correct), n)
            }),
            stolen_solution_accuracy: attacked
                .then(|| Proportion::new(stolen.iter().filter(|&&b| b).count(), stolen.len())),
            seeds: details.iter().map(|d| d.seed).collect(),
        }
    }
}

/// Everything produced by a batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenarios: Vec<ScenarioReport>,
    pub details: Vec<TrialDetail>,
}

/// Runs every trial of `spec` in parallel; rows come back in trial order.
pub fn run_scenario(spec: &ScenarioSpec) -> Result<(ScenarioReport, Vec<TrialDetail>), HarnessError> {
    spec.validate()?;
    let details = (0..spec.trials)
        .into_par_iter()
        .map(|trial| {
            let run = spec.run_trial(trial)?;
            Ok(TrialDetail::from_run(&spec.label, trial, spec.trial_seed(trial), &run))
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    Ok((ScenarioReport::aggregate(spec, &details), details))
}

/// Runs a batch. A scenario that fails is reported with its error and does
/// not affect the others.
pub fn run_scenarios(specs: &[ScenarioSpec]) -> Report {
    let mut report = Report {
        scenarios: Vec::with_capacity(specs.len()),
        details: Vec::new(),
    };
    for spec in specs {
        match run_scenario(spec) {
            Ok((summary, details)) => {
                report.scenarios.push(summary);
                report.details.extend(details);
            }
            Err(e) => report.scenarios.push(ScenarioReport::failed(spec, &e)),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(scenario: Scenario, trials: usize) -> ScenarioSpec {
        ScenarioSpec {
            label: scenario.tag().into(),
            scenario,
            exam: ExamConfig { seed: 11, ..ExamConfig::default() },
            attack: scenario.is_attacked().then(|| AttackConfig::new(2, 1)),
            trials,
        }
    }

    #[test]
    fn trial_seeds_are_distinct() {
        let s = spec(Scenario::Honest, 10);
        let seeds: std::collections::BTreeSet<u64> = (0..100).map(|t| s.trial_seed(t)).collect();
        assert_eq!(seeds.len(), 100);
    }

    #[test]
    fn validation() {
        let mut s = spec(Scenario::Attacked, 0);
        assert!(s.validate().is_err());
        s.trials = 1;
        s.attack = None;
        assert!(s.validate().is_err());
    }

    #[test]
    fn failing_scenario_is_isolated() {
        let good = spec(Scenario::Honest, 20);
        let mut bad = spec(Scenario::Attacked, 20);
        bad.attack = Some(AttackConfig::new(5, 1));
        let report = run_scenarios(&[good.clone(), bad, good.clone()]);
        assert_eq!(report.scenarios.len(), 3);
        assert!(report.scenarios[1].error.is_some());
        assert_eq!(report.scenarios[0], report.scenarios[2]);
        assert_eq!(report.details.len(), 40);
        assert_eq!(report.scenarios[0].check_failure_rate, 0.0);
    }
}
