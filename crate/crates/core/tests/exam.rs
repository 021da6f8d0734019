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

use qexam_core::adversary::{filter_key_parities, reconstruct_target_key, AttackConfig, PositionStrategy};
use qexam_core::countermeasure::detection_probability;
use qexam_core::protocol::{alice_recover_bob_key, run_exam, ExamConfig, Party, Scenario, SequenceItem, Transcript};
use qexam_core::Error;

fn config(seed: u64) -> ExamConfig {
    ExamConfig { seed, ..ExamConfig::default() }
}

#[test]
fn honest_runs_pass_and_deliver() {
    for seed in 0..40 {
        let run = run_exam(&config(seed), Scenario::Honest, None).unwrap();
        let s = &run.summary;
        assert_eq!(s.check_failures, 0);
        assert!(!s.aborted);
        assert_eq!(s.checks_run, 128);
        assert!(s.key_agreement.iter().all(|&ok| ok));
        assert_eq!(s.solutions_received.as_deref(), Some(&[true, true, true][..]));
        assert!(s.max_terms <= 4);
        run.transcript.validate(256).unwrap();
        assert_eq!(run.transcript.keys[0].owner, Party::Alice);
    }
}

#[test]
fn honest_runs_with_decoys_have_no_false_positives() {
    for seed in 0..40 {
        let cfg = ExamConfig { decoy_count: 16, ..config(seed) };
        let run = run_exam(&cfg, Scenario::Honest, None).unwrap();
        let v = run.summary.decoys.as_ref().unwrap();
        assert_eq!(v.measured(), 48);
        assert_eq!(v.mismatched(), 0);
        assert!(!run.summary.aborted);
    }
}

#[test]
fn alice_reconstruction_equals_measured_keys() {
    let run = run_exam(&config(5), Scenario::Honest, None).unwrap();
    let key_rounds = run.transcript.key_rounds();
    let secrets: Vec<_> = key_rounds.iter().map(|&p| run.secrets[p - 1].clone()).collect();
    for n in 1..=3 {
        let rec = alice_recover_bob_key(&run.transcript.keys[0], &secrets, n).unwrap();
        assert_eq!(rec.bits, run.transcript.keys[n].bits);
    }
}

#[test]
fn plain_attack_is_invisible_and_steals_everything() {
    let attack = AttackConfig::new(3, 1);
    for seed in 0..100 {
        let run = run_exam(&config(seed), Scenario::Attacked, Some(&attack)).unwrap();
        let s = &run.summary;
        assert_eq!(s.check_failures, 0, "seed {seed}");
        assert!(!s.aborted);
        let a = s.attack.as_ref().unwrap();
        assert!(a.key_exact());
        assert!(a.solution_exact());
        assert_eq!(a.touched_decoys, 0);
        assert!(s.max_terms <= 4);

        // steps (iv) done by hand
        let record = run.attack_record.as_ref().unwrap();
        let parities = filter_key_parities(record, &run.transcript.check_rounds()).unwrap();
        assert_eq!(parities.len(), run.transcript.keys[3].len());
        let stolen = reconstruct_target_key(&parities, &run.transcript.keys[3], 1).unwrap();
        assert_eq!(stolen.bits, run.transcript.keys[1].bits);
        for tap in &record.taps {
            let p = tap.aligned_round().unwrap();
            assert_eq!(tap.ancilla, run.secrets[p - 1].bob(1) ^ run.secrets[p - 1].bob(3));
        }
    }
}

#[test]
fn charlie_relay_is_observationally_identical() {
    let single = AttackConfig::new(2, 1);
    let relay = AttackConfig { charlie_assisted: true, ..single.clone() };
    for seed in 0..20 {
        let a = run_exam(&config(seed), Scenario::Attacked, Some(&single)).unwrap();
        let b = run_exam(&config(seed), Scenario::Attacked, Some(&relay)).unwrap();
        assert_eq!(a.transcript, b.transcript);
        assert_eq!(a.attack_record, b.attack_record);
        assert_eq!(a.summary, b.summary);
    }
}

#[test]
fn zero_decoys_reproduce_the_original_protocol() {
    let attack = AttackConfig::new(2, 3);
    for seed in 0..20 {
        let cfg = config(seed);
        let plain = run_exam(&cfg, Scenario::Attacked, Some(&attack)).unwrap();
        let defended = run_exam(&cfg, Scenario::AttackedWithDecoys, Some(&attack)).unwrap();
        assert_eq!(plain.transcript.to_records(), defended.transcript.to_records());
        assert_eq!(plain.transcript, defended.transcript);
        assert!(defended.summary.decoys.is_none());
        assert_eq!(defended.summary.attack.as_ref().unwrap().touched_decoys, 0);
    }
}

#[test]
fn runs_are_deterministic() {
    let attack = AttackConfig::new(1, 2);
    let cfg = ExamConfig { decoy_count: 4, ..config(99) };
    let a = run_exam(&cfg, Scenario::AttackedWithDecoys, Some(&attack)).unwrap();
    let b = run_exam(&cfg, Scenario::AttackedWithDecoys, Some(&attack)).unwrap();
    assert_eq!(a.transcript.to_records(), b.transcript.to_records());
    assert_eq!(a.summary, b.summary);
    let c = run_exam(&config(100), Scenario::Honest, None).unwrap();
    assert_ne!(a.transcript.to_records(), c.transcript.to_records());
}

#[test]
fn transcript_records_round_trip() {
    let run = run_exam(&config(3), Scenario::Honest, None).unwrap();
    let text = run.transcript.to_records();
    assert_eq!(text.lines().count(), 256);
    let parsed = Transcript::parse_records(&text).unwrap();
    assert_eq!(parsed, run.transcript.records);
}

#[test]
fn decoys_expose_the_attack() {
    let attack = AttackConfig::new(3, 1);
    let trials = 400;
    let mut detected = 0;
    for seed in 0..trials {
        let cfg = ExamConfig { decoy_count: 2, ..config(seed) };
        let run = run_exam(&cfg, Scenario::AttackedWithDecoys, Some(&attack)).unwrap();
        let a = run.summary.attack.as_ref().unwrap();
        // every slot is tapped, so all 2 + 2 decoys are touched
        assert_eq!(a.touched_decoys, 4);
        assert!(run.summary.max_terms <= 4, "max terms {}", run.summary.max_terms);
        if run.summary.aborted {
            detected += 1;
            assert!(run.ciphertexts.is_empty());
            assert_eq!(a.solution_bits_correct, None);
        }
    }
    // decoys alone already give 1 - 2^-4; misaligned carriers only add to it
    let rate = detected as f64 / trials as f64;
    assert!(rate >= detection_probability(4) - 0.05, "{rate}");
}

#[test]
fn decoy_mismatches_track_independent_touches() {
    let attack = AttackConfig::new(2, 1);
    let trials = 2000;
    let (mut hit, mut predicted) = (0usize, 0.0);
    for seed in 0..trials {
        let cfg = ExamConfig { decoy_count: 1, rounds: 64, solution_length: 16, ..config(seed) };
        let run = run_exam(&cfg, Scenario::AttackedWithDecoys, Some(&attack)).unwrap();
        hit += (run.summary.decoy_mismatches() > 0) as usize;
        predicted += detection_probability(run.summary.attack.as_ref().unwrap().independent_decoy_groups);
    }
    let (rate, expect) = (hit as f64 / trials as f64, predicted / trials as f64);
    let sigma = (expect * (1.0 - expect) / trials as f64).sqrt();
    assert!((rate - expect).abs() < 4.0 * sigma, "{rate} vs {expect}");
}

#[test]
fn partial_tapping_touches_fewer_decoys() {
    let attack = AttackConfig { positions: PositionStrategy::Fraction(0.25), ..AttackConfig::new(2, 1) };
    let cfg = ExamConfig { decoy_count: 8, ..config(1) };
    let run = run_exam(&cfg, Scenario::AttackedWithDecoys, Some(&attack)).unwrap();
    let record = run.attack_record.as_ref().unwrap();
    assert_eq!(record.taps.len(), 66);
    assert!(record.touched_decoys() <= 16);
    let touched: usize = record
        .taps
        .iter()
        .map(|t| matches!(t.target_item, SequenceItem::Decoy(_)) as usize + matches!(t.attacker_item, SequenceItem::Decoy(_)) as usize)
        .sum();
    assert_eq!(touched, record.touched_decoys());
}

#[test]
fn config_errors_surface() {
    assert!(matches!(run_exam(&config(0), Scenario::Attacked, None), Err(Error::Config(_))));
    let bad = AttackConfig::new(1, 1);
    assert!(matches!(run_exam(&config(0), Scenario::Attacked, Some(&bad)), Err(Error::Config(_))));
    let one_bob = ExamConfig { bobs: 1, ..config(0) };
    assert!(run_exam(&one_bob, Scenario::Attacked, Some(&AttackConfig::new(1, 2))).is_err());
    let short = ExamConfig { rounds: 64, ..config(0) };
    assert!(matches!(run_exam(&short, Scenario::Honest, None), Err(Error::Config(_))));
}
