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

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::run::{Report, ScenarioReport, TrialDetail};
use crate::stats::Proportion;
use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    JsonLines,
    Csv,
}

impl OutputFormat {
    fn extension(self) -> &'static str {
        match self {
            OutputFormat::JsonLines => "jsonl",
            OutputFormat::Csv => "csv",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match s {
            "json" | "jsonl" | "json-lines" => Ok(OutputFormat::JsonLines),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(HarnessError::Config(format!("unknown format `{other}`"))),
        }
    }
}

pub const SCENARIO_COLUMNS: &[&str] = &[
    "label",
    "scenario",
    "trials",
    "master_seed",
    "error",
    "check_failure_rate",
    "decoy_mismatch_rate",
    "detection",
    "detection_lower",
    "detection_upper",
    "decoy_detection",
    "decoy_detection_lower",
    "decoy_detection_upper",
    "predicted_decoy_detection",
    "mean_touched_decoys",
    "key_agreement_rate",
    "solution_delivery",
    "key_recovery_accuracy",
    "exact_key_theft",
    "exact_key_theft_lower",
    "exact_key_theft_upper",
    "stolen_solution_accuracy",
];

pub const TRIAL_COLUMNS: &[&str] = &[
    "label",
    "trial",
    "seed",
    "checks_run",
    "check_failures",
    "decoys_measured",
    "decoy_mismatches",
    "aborted",
    "keys_agree",
    "solutions_received",
    "attacker_key_bits",
    "attacker_key_correct",
    "stolen_solution_exact",
    "touched_decoys",
    "independent_decoy_groups",
];

/// Flat CSV form of a [`ScenarioReport`]; field order is [`SCENARIO_COLUMNS`].
#[derive(Serialize)]
struct ScenarioRow<'a> {
    label: &'a str,
    scenario: &'a str,
    trials: usize,
    master_seed: u64,
    error: Option<&'a str>,
    check_failure_rate: f64,
    decoy_mismatch_rate: f64,
    detection: Option<f64>,
    detection_lower: Option<f64>,
    detection_upper: Option<f64>,
    decoy_detection: Option<f64>,
    decoy_detection_lower: Option<f64>,
    decoy_detection_upper: Option<f64>,
    predicted_decoy_detection: Option<f64>,
    mean_touched_decoys: Option<f64>,
    key_agreement_rate: f64,
    solution_delivery: Option<f64>,
    key_recovery_accuracy: Option<f64>,
    exact_key_theft: Option<f64>,
    exact_key_theft_lower: Option<f64>,
    exact_key_theft_upper: Option<f64>,
    stolen_solution_accuracy: Option<f64>,
}

impl<'a> From<&'a ScenarioReport> for ScenarioRow<'a> {
    fn from(r: &'a ScenarioReport) -> Self {
        let est = |p: &Option<Proportion>| p.map(|p| p.estimate);
        ScenarioRow {
            label: &r.label,
            scenario: r.scenario.tag(),
            trials: r.trials,
            master_seed: r.master_seed,
            error: r.error.as_deref(),
            check_failure_rate: r.check_failure_rate,
            decoy_mismatch_rate: r.decoy_mismatch_rate,
            detection: est(&r.detection),
            detection_lower: r.detection.map(|p| p.lower),
            detection_upper: r.detection.map(|p| p.upper),
            decoy_detection: est(&r.decoy_detection),
            decoy_detection_lower: r.decoy_detection.map(|p| p.lower),
            decoy_detection_upper: r.decoy_detection.map(|p| p.upper),
            predicted_decoy_detection: r.predicted_decoy_detection,
            mean_touched_decoys: r.mean_touched_decoys,
            key_agreement_rate: r.key_agreement_rate,
            solution_delivery: est(&r.solution_delivery),
            key_recovery_accuracy: r.key_recovery_accuracy,
            exact_key_theft: est(&r.exact_key_theft),
            exact_key_theft_lower: r.exact_key_theft.map(|p| p.lower),
            exact_key_theft_upper: r.exact_key_theft.map(|p| p.upper),
            stolen_solution_accuracy: est(&r.stolen_solution_accuracy),
        }
    }
}

fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: impl IntoIterator<Item = T>) -> Result<(), HarnessError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

fn write_jsonl<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<(), HarnessError> {
    let mut w = BufWriter::new(File::create(path)?);
    for row in rows {
        serde_json::to_writer(&mut w, &row)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `scenarios.<ext>` and `trials.<ext>` into `dir`, creating it if
/// needed. Returns the two paths.
pub fn emit_report(report: &Report, format: OutputFormat, dir: &Path) -> Result<(PathBuf, PathBuf), HarnessError> {
    fs::create_dir_all(dir)?;
    let ext = format.extension();
    let scenarios = dir.join(format!("scenarios.{ext}"));
    let trials = dir.join(format!("trials.{ext}"));
    match format {
        OutputFormat::Csv => {
            write_csv(&scenarios, SCENARIO_COLUMNS, report.scenarios.iter().map(ScenarioRow::from))?;
            write_csv(&trials, TRIAL_COLUMNS, &report.details)?;
        }
        OutputFormat::JsonLines => {
            write_jsonl(&scenarios, &report.scenarios)?;
            write_jsonl(&trials, &report.details)?;
        }
    }
    Ok((scenarios, trials))
}

fn read_jsonl<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<T>, HarnessError> {
    let mut out = Vec::new();
    for line in BufReader::new(File::open(path)?).lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(serde_json::from_str(&line)?);
        }
    }
    Ok(out)
}

/// Reads back a report written with [`OutputFormat::JsonLines`].
pub fn read_report_jsonl(scenarios: &Path, trials: &Path) -> Result<Report, HarnessError> {
    Ok(Report {
        scenarios: read_jsonl::<ScenarioReport>(scenarios)?,
        details: read_jsonl::<TrialDetail>(trials)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_lists_match_serialized_headers() {
        let detail = TrialDetail {
            label: "x".into(),
            trial: 0,
            seed: 1,
            checks_run: 0,
            check_failures: 0,
            decoys_measured: 0,
            decoy_mismatches: 0,
            aborted: false,
            keys_agree: true,
            solutions_received: None,
            attacker_key_bits: None,
            attacker_key_correct: None,
            stolen_solution_exact: None,
            touched_decoys: None,
            independent_decoy_groups: None,
        };
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(&detail).unwrap();
        let text = String::from_utf8(w.into_inner().unwrap()).unwrap();
        assert_eq!(text.lines().next().unwrap(), TRIAL_COLUMNS.join(","));
    }
}
