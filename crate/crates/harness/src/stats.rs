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

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// A proportion with its Wilson score interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Proportion {
    pub successes: usize,
    pub trials: usize,
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
}

impl Proportion {
    pub fn new(successes: usize, trials: usize) -> Self {
        let (lower, upper) = wilson_interval(successes, trials, Z_95);
        Proportion {
            successes,
            trials,
            estimate: if trials == 0 { 0.0 } else { successes as f64 / trials as f64 },
            lower,
            upper,
        }
    }

    pub fn contains(&self, p: f64) -> bool {
        self.lower <= p && p <= self.upper
    }
}

/// Wilson score interval for `successes` out of `trials` at quantile `z`.
/// With no trials the interval is the whole of [0, 1].
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // the bounds are exactly 0 and 1 at the extremes; rounding would exclude them
    let lower = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let upper = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qexam_core::rng::SeedTree;
    use rand::Rng;

    #[test]
    fn known_values() {
        // 50/100 at 95%: centre 0.5, half-width 0.0951
        let (lo, hi) = wilson_interval(50, 100, Z_95);
        assert!((lo - 0.4038).abs() < 1e-4 && (hi - 0.5962).abs() < 1e-4, "{lo} {hi}");
        let (lo, hi) = wilson_interval(0, 10, Z_95);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.2775).abs() < 1e-4);
        assert_eq!(wilson_interval(0, 0, Z_95), (0.0, 1.0));
    }

    #[test]
    fn interval_contains_estimate() {
        for n in [1usize, 7, 100, 10_000] {
            for k in [0, n / 3, n] {
                let p = Proportion::new(k, n);
                assert!(p.contains(p.estimate));
                assert!(0.0 <= p.lower && p.upper <= 1.0);
            }
        }
    }

    #[test]
    fn fair_coin_coverage_is_near_95_percent() {
        let batches = 4000;
        let flips = 200;
        let mut covered = 0;
        for b in 0..batches {
            let mut rng = SeedTree::new(2024).child(b).rng();
            let heads = (0..flips).filter(|_| rng.random::<bool>()).count();
            covered += Proportion::new(heads, flips).contains(0.5) as usize;
        }
        let coverage = covered as f64 / batches as f64;
        // 3σ band around 0.95 for 4000 batches is about ±0.010
        assert!((coverage - 0.95).abs() < 0.015, "{coverage}");
    }
}
