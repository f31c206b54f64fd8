// SPDX-License-Identifier: Apache-2.0

//! Seeded ranking scenarios that separate `S` from Kendall tau and plain
//! set overlap: reversal, random permutation, and rankings that share only
//! their first or only their second half.
//!
//! Every trial draws from its own ChaCha stream keyed by the trial index, so
//! results do not depend on how trials are spread over threads.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graphsim::mean_std;
use crate::ranksim::{compare, pearson, SimilarityReport, TruncatedRanking};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    Reverse,
    RandomPermutation,
    FirstHalfShared,
    SecondHalfShared,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [
        Scenario::Reverse,
        Scenario::RandomPermutation,
        Scenario::FirstHalfShared,
        Scenario::SecondHalfShared,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Reverse => "reverse",
            Scenario::RandomPermutation => "random_permutation",
            Scenario::FirstHalfShared => "first_half_shared",
            Scenario::SecondHalfShared => "second_half_shared",
        }
    }
}

/// Builds the ranking pair for one trial.
pub fn scenario_pair(scenario: Scenario, n: usize, rng: &mut ChaCha8Rng) -> (Vec<u64>, Vec<u64>) {
    let n = n as u64;
    let half = n / 2;
    match scenario {
        Scenario::Reverse => {
            let q1: Vec<u64> = (0..n).collect();
            let q2 = q1.iter().rev().copied().collect();
            (q1, q2)
        }
        Scenario::RandomPermutation => {
            let q1: Vec<u64> = (0..n).collect();
            let mut q2 = q1.clone();
            q2.shuffle(rng);
            (q1, q2)
        }
        Scenario::FirstHalfShared | Scenario::SecondHalfShared => {
            let shared: Vec<u64> = (0..half).collect();
            let mut shuffled = shared.clone();
            shuffled.shuffle(rng);
            // the two unshared halves come from disjoint id ranges
            let own1: Vec<u64> = (n..2 * n - half).collect();
            let own2: Vec<u64> = (2 * n..3 * n - half).collect();
            if scenario == Scenario::FirstHalfShared {
                ([shared, own1].concat(), [shuffled, own2].concat())
            } else {
                ([own1, shared].concat(), [own2, shuffled].concat())
            }
        }
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

pub fn run_trial(scenario: Scenario, n: usize, seed: u64, trial: usize) -> SimilarityReport {
    let mut rng = trial_rng(seed, trial);
    let (a, b) = scenario_pair(scenario, n, &mut rng);
    let q1 = TruncatedRanking::new(a).expect("scenario ids are distinct");
    let q2 = TruncatedRanking::new(b).expect("scenario ids are distinct");
    compare(&q1, &q2).expect("scenario rankings have equal length")
}

/// Runs `trials` trials of one scenario on up to `threads` threads. The
/// output is identical for every thread count.
pub fn run_trials(
    scenario: Scenario,
    n: usize,
    trials: usize,
    seed: u64,
    threads: usize,
) -> Vec<SimilarityReport> {
    let threads = threads.clamp(1, trials.max(1));
    if threads == 1 {
        return (0..trials).map(|t| run_trial(scenario, n, seed, t)).collect();
    }
    let chunk = trials.div_ceil(threads);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..trials)
            .step_by(chunk)
            .map(|start| {
                let end = (start + chunk).min(trials);
                scope.spawn(move || {
                    (start..end)
                        .map(|t| run_trial(scenario, n, seed, t))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("trial thread panicked"))
            .collect()
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSummary {
    pub scenario: Scenario,
    pub trials: usize,
    pub mean_s: f64,
    pub std_s: f64,
    pub mean_kendall: f64,
    pub std_kendall: f64,
    pub mean_overlap: f64,
    pub pearson_s_kendall: Option<f64>,
    pub pearson_s_overlap: Option<f64>,
}

pub fn summarize(scenario: Scenario, reports: &[SimilarityReport]) -> ScenarioSummary {
    let s: Vec<f64> = reports.iter().map(|r| r.s).collect();
    let k: Vec<f64> = reports.iter().map(|r| r.kendall).collect();
    let o: Vec<f64> = reports.iter().map(|r| r.overlap).collect();
    let (mean_s, std_s) = mean_std(&s);
    let (mean_kendall, std_kendall) = mean_std(&k);
    ScenarioSummary {
        scenario,
        trials: reports.len(),
        mean_s,
        std_s,
        mean_kendall,
        std_kendall,
        mean_overlap: mean_std(&o).0,
        pearson_s_kendall: pearson(&s, &k).ok(),
        pearson_s_overlap: pearson(&s, &o).ok(),
    }
}
