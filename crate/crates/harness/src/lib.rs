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

//! Monte-Carlo driver: batches of seeded exam runs, aggregated with Wilson
//! intervals and written as JSON lines or CSV.

pub mod report;
pub mod run;
pub mod stats;

use std::path::Path;

use qexam_core::protocol::ExamConfig;
use thiserror::Error;

pub use report::{emit_report, read_report_jsonl, OutputFormat};
pub use run::{run_scenario, run_scenarios, Report, ScenarioReport, ScenarioSpec, TrialDetail};
pub use stats::{wilson_interval, Proportion};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] qexam_core::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("config file: {0}")]
    ConfigFile(#[from] toml::de::Error),
}

/// Parses `key = value` lines naming [`ExamConfig`] fields. Missing keys
/// keep their defaults; unknown keys are rejected.
pub fn parse_exam_config(text: &str) -> Result<ExamConfig, HarnessError> {
    Ok(toml::from_str(text)?)
}

pub fn load_exam_config(path: &Path) -> Result<ExamConfig, HarnessError> {
    parse_exam_config(&std::fs::read_to_string(path)?)
}
