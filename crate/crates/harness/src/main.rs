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

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use qexam_core::adversary::{AttackConfig, PositionStrategy};
use qexam_core::protocol::{ExamConfig, Scenario};
use qexam_harness::{emit_report, load_exam_config, run_scenarios, OutputFormat, Report, ScenarioSpec, TrialDetail};

#[derive(Parser)]
#[command(name = "qexam", version, about = "Quantum exam attack and countermeasure simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario for many trials.
    Run {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Re-run a single trial and print its transcript.
    Replay {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Trial index within the batch.
        #[arg(long)]
        trial: usize,
    },
    /// Run one scenario per value of a parameter.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// decoys, rounds, bobs or check_fraction.
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
    },
}

#[derive(Args, Clone)]
struct ScenarioArgs {
    /// Key-value file with exam parameters.
    #[arg(long)]
    config: Option<PathBuf>,
    /// honest, attacked or attacked_with_decoys.
    #[arg(long, default_value = "honest")]
    scenario: String,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// Master seed. Required here or in the config file.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    decoys: Option<usize>,
    #[arg(long)]
    bobs: Option<usize>,
    #[arg(long)]
    rounds: Option<usize>,
    /// Dishonest Bob r.
    #[arg(long, default_value_t = 2)]
    attacker: usize,
    /// Victim Bob k.
    #[arg(long, default_value_t = 1)]
    target: usize,
    /// Have a helper on the target's channel apply the first CNOT.
    #[arg(long)]
    charlie: bool,
    /// Tap only this fraction of slots instead of all of them.
    #[arg(long)]
    tap_fraction: Option<f64>,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Directory for the report files. Without it the summary goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// json or csv.
    #[arg(long, default_value = "json")]
    format: String,
}

impl ScenarioArgs {
    fn exam_config(&self) -> Result<ExamConfig> {
        let (mut exam, file_seed) = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let has_seed = text.parse::<toml::Table>().map(|t| t.contains_key("seed")).unwrap_or(false);
                (load_exam_config(path)?, has_seed)
            }
            None => (ExamConfig::default(), false),
        };
        match self.seed {
            Some(seed) => exam.seed = seed,
            None if file_seed => {}
            None => bail!("a master seed is required: pass --seed or set `seed` in the config file"),
        }
        if let Some(d) = self.decoys {
            exam.decoy_count = d;
        }
        if let Some(b) = self.bobs {
            exam.bobs = b;
        }
        if let Some(r) = self.rounds {
            exam.rounds = r;
        }
        Ok(exam)
    }

    fn spec(&self, exam: ExamConfig, label: String) -> Result<ScenarioSpec> {
        let scenario: Scenario = self.scenario.parse()?;
        let attack = scenario.is_attacked().then(|| AttackConfig {
            attacker: self.attacker,
            target: self.target,
            charlie_assisted: self.charlie,
            positions: self.tap_fraction.map_or(PositionStrategy::All, PositionStrategy::Fraction),
        });
        Ok(ScenarioSpec {
            label,
            scenario,
            exam,
            attack,
            trials: self.trials,
        })
    }
}

fn apply_param(exam: &mut ExamConfig, param: &str, value: &str) -> Result<()> {
    let int = || value.parse::<usize>().with_context(|| format!("bad value `{value}` for {param}"));
    match param {
        "decoys" | "decoy_count" => exam.decoy_count = int()?,
        "rounds" => exam.rounds = int()?,
        "bobs" => exam.bobs = int()?,
        "check_fraction" => {
            exam.check_fraction = value.parse().with_context(|| format!("bad value `{value}` for {param}"))?
        }
        other => bail!("cannot sweep `{other}`; use decoys, rounds, bobs or check_fraction"),
    }
    Ok(())
}

fn finish(report: &Report, output: &OutputArgs) -> Result<ExitCode> {
    let format: OutputFormat = output.format.parse()?;
    match &output.out {
        Some(dir) => {
            let (s, t) = emit_report(report, format, dir)?;
            eprintln!("wrote {} and {}", s.display(), t.display());
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            for s in &report.scenarios {
                let mut s = s.clone();
                s.seeds.clear();
                serde_json::to_writer(&mut stdout, &s)?;
                writeln!(stdout)?;
            }
        }
    }
    for s in &report.scenarios {
        match &s.error {
            Some(e) => eprintln!("{}: FAILED: {e}", s.label),
            None => eprintln!(
                "{}: trials={} check_failure_rate={:.4} detection={:.4} key_recovery={}",
                s.label,
                s.trials,
                s.check_failure_rate,
                s.detection.map_or(0.0, |p| p.estimate),
                s.key_recovery_accuracy.map_or("-".into(), |a| format!("{a:.4}")),
            ),
        }
    }
    Ok(if report.scenarios.iter().any(|s| s.error.is_some()) {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn real_main() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Run { scenario, output } => {
            let exam = scenario.exam_config()?;
            let spec = scenario.spec(exam, scenario.scenario.clone())?;
            finish(&run_scenarios(&[spec]), &output)
        }
        Command::Sweep {
            scenario,
            output,
            param,
            values,
        } => {
            let base = scenario.exam_config()?;
            let specs = values
                .iter()
                .map(|v| {
                    let mut exam = base.clone();
                    apply_param(&mut exam, &param, v)?;
                    scenario.spec(exam, format!("{}/{param}={v}", scenario.scenario))
                })
                .collect::<Result<Vec<_>>>()?;
            finish(&run_scenarios(&specs), &output)
        }
        Command::Replay { scenario, trial } => {
            let exam = scenario.exam_config()?;
            let spec = scenario.spec(exam, scenario.scenario.clone())?;
            spec.validate()?;
            let run = spec.run_trial(trial)?;
            let detail = TrialDetail::from_run(&spec.label, trial, spec.trial_seed(trial), &run);
            let mut stdout = std::io::stdout().lock();
            serde_json::to_writer(&mut stdout, &detail)?;
            writeln!(stdout)?;
            stdout.write_all(run.transcript.to_records().as_bytes())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
