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

//! The solution-collecting stage of the exam: carrier distribution, random
//! check rounds, key rounds, and one-time-pad submission of solutions.

mod channel;
mod config;
mod exam;
mod keys;
mod rounds;
mod transcript;

pub use channel::{plain_sequence, Party, Qubit, SequenceItem};
pub use config::{ExamConfig, Scenario};
pub use exam::{run_exam, AttackOutcome, ExamRun, ExamSummary};
pub use keys::{alice_recover_bob_key, otp_decrypt, otp_encrypt, KeyMaterial};
pub use rounds::{
    check_passes, distribute_round, generate_secrets, run_check_round, run_key_round, select_check_rounds,
    CheckOutcome, KeyRoundOutcome, RoundOutcome, SecretBits,
};
pub use transcript::{RoundRecord, RoundRole, Transcript};
