// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any fails.

mod common;

use std::collections::{BTreeMap, HashSet};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use recapture::coverage::{self, ExtremumKind, KeywordType, StoppingConfig};
use recapture::estimators::{petersen_estimate, schnabel_estimate, CaptureSample};
use recapture::graphsim::{self, ChurnConfig, Graph, DEFAULT_MAX_ITER, DEFAULT_TOL};
use recapture::ranksim::{kendall_tau_truncated, overlap_curve, similarity_s, TruncatedRanking};
use recapture::suites::{self, Scenario};

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

const INSTANT: Duration = Duration::from_secs(1);

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ranking(ids: Vec<u64>) -> TruncatedRanking<u64> {
    TruncatedRanking::new(ids).unwrap()
}

fn ac1_petersen_worked_example() -> Outcome {
    let est = petersen_estimate(43, 55, 20).unwrap();
    check(
        (est.point - 118.25).abs() <= 1e-9 && (est.stddev - 14.298).abs() <= 0.005,
        format!("point {:.10}, stddev {:.6} (reference 118 ± 14)", est.point, est.stddev),
    )
}

fn ac2_schnabel_reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let n1 = rng.random_range(1..=100_000u64);
        let n2 = rng.random_range(1..=100_000u64);
        let r = rng.random_range(1..=n1.min(n2));
        let p = petersen_estimate(n1, n2, r).unwrap().point;
        let samples = [CaptureSample::new(n1, 0, 0), CaptureSample::new(n2, r, n1)];
        let s = schnabel_estimate(&samples).unwrap().point;
        worst = worst.max((s - p).abs() / p);
    }
    check(worst <= 1e-12, format!("max relative error {worst:e} over 10000 inputs"))
}

fn ac3_metric_boundaries() -> Outcome {
    let mut failures = Vec::new();
    for n in [1u64, 2, 10, 1000] {
        let q = ranking((0..n).collect());
        let other = ranking((n..2 * n).collect());
        let same = similarity_s(&q, &q).unwrap();
        let disjoint = similarity_s(&q, &other).unwrap();
        if same != 1.0 || disjoint != 0.0 {
            failures.push(format!("N={n}: S(same)={same}, S(disjoint)={disjoint}"));
        }
    }
    check(
        failures.is_empty(),
        if failures.is_empty() {
            "S(identical)=1 and S(disjoint)=0 for N in {1,2,10,1000}".to_string()
        } else {
            failures.join("; ")
        },
    )
}

fn ac4_reverse_ranking() -> Outcome {
    let n = 1000u64;
    let q = ranking((0..n).collect());
    let s = similarity_s(&q, &q.reversed()).unwrap();
    // brute force: intersect the two prefixes explicitly for every j
    let ids: Vec<u64> = (0..n).collect();
    let rev: Vec<u64> = ids.iter().rev().copied().collect();
    let mut err: u128 = 0;
    for j in 0..=n as usize {
        let a: HashSet<u64> = ids[..j].iter().copied().collect();
        let common = rev[..j].iter().filter(|x| a.contains(x)).count() as u128;
        err += (j as u128 - common).pow(2);
    }
    let nn = n as u128;
    let worst = nn * (nn + 1) * (2 * nn + 1) / 6;
    let exact = 1.0 - err as f64 / worst as f64;
    let pass = (s - exact).abs() < 1e-15
        && (s - 0.750375).abs() < 1e-6
        && (0.745..=0.755).contains(&s);
    check(
        pass,
        format!(
            "S = {s:.7} = 1 - {err}/{worst}; reference 0.7492, residual {:+.4}",
            s - 0.7492
        ),
    )
}

fn ac5_random_permutation() -> Outcome {
    let reports = suites::run_trials(Scenario::RandomPermutation, 1000, 1000, 5, 4);
    let summary = suites::summarize(Scenario::RandomPermutation, &reports);
    check(
        (0.89..=0.91).contains(&summary.mean_s) && (-0.01..=0.01).contains(&summary.mean_kendall),
        format!(
            "mean S {:.4} (reference 0.8993), mean tau {:+.4} (reference -0.0016)",
            summary.mean_s, summary.mean_kendall
        ),
    )
}

fn ac6_asymmetry() -> Outcome {
    let front = suites::run_trials(Scenario::FirstHalfShared, 1000, 1000, 6, 4);
    let back = suites::run_trials(Scenario::SecondHalfShared, 1000, 1000, 6, 4);
    let f = suites::summarize(Scenario::FirstHalfShared, &front);
    let b = suites::summarize(Scenario::SecondHalfShared, &back);
    let every_trial = front.iter().zip(&back).all(|(x, y)| x.s > y.s);
    check(
        (0.85..=0.875).contains(&f.mean_s) && (0.35..=0.375).contains(&b.mean_s) && every_trial,
        format!(
            "first-half mean S {:.4} (reference 0.8629), second-half mean S {:.4} (reference 0.3616), first > second in every trial: {every_trial}",
            f.mean_s, b.mean_s
        ),
    )
}

fn ac7_churn_experiment() -> Outcome {
    let desk = ChurnConfig {
        iterations: 200,
        seed: 1,
        ..ChurnConfig::default()
    };
    let start = Instant::now();
    let out = graphsim::run_experiment(&desk).unwrap();
    let desk_time = start.elapsed();
    let s = &out.summary;
    let p_overlap = s.pearson_s_overlap.unwrap_or(f64::NAN);
    let p_kendall = s.pearson_s_kendall.unwrap_or(f64::NAN);
    let desk_checks = [
        ("pearson_s_overlap > 0.9", p_overlap > 0.9),
        ("mean S in [0.80, 0.95]", (0.80..=0.95).contains(&s.mean_s)),
        ("|pearson_s_kendall| < 0.6", p_kendall.abs() < 0.6),
        ("desk runtime < 10 min", desk_time < Duration::from_secs(600)),
    ];

    let ci = ChurnConfig {
        initial_n: 2000,
        top_k: 200,
        iterations: 100,
        seed: 1,
        ..ChurnConfig::default()
    };
    let start = Instant::now();
    let ci_out = graphsim::run_experiment(&ci).unwrap();
    let ci_time = start.elapsed();
    let ci_overlap = ci_out.summary.pearson_s_overlap.unwrap_or(f64::NAN);
    let ci_checks = [
        ("CI pearson_s_overlap > 0.85", ci_overlap > 0.85),
        ("CI runtime < 1 min", ci_time < Duration::from_secs(60)),
    ];

    let failed: Vec<&str> = desk_checks
        .iter()
        .chain(&ci_checks)
        .filter(|c| !c.1)
        .map(|c| c.0)
        .collect();
    check(
        failed.is_empty(),
        format!(
            "desk: pearson_s_overlap {p_overlap:.4} (reference 0.984), mean S {:.4} ± {:.4} (reference 0.8831 ± 0.0697), pearson_s_kendall {p_kendall:.4} (reference 0.2443), {:.1}s; CI: pearson_s_overlap {ci_overlap:.4}, {:.1}s{}",
            s.mean_s,
            s.std_s,
            desk_time.as_secs_f64(),
            ci_time.as_secs_f64(),
            if failed.is_empty() {
                String::new()
            } else {
                format!("; failed: {}", failed.join(", "))
            }
        ),
    )
}

fn ac8_coverage_shapes() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for len in [100, 500] {
        let (a, b) = common::disjoint_fixture(len);
        let series = coverage::build_series(&a, &b, len).unwrap();
        let class = coverage::classify_keyword(&series);
        let slope = class.t_growth_exponent.unwrap_or(f64::NAN);
        let terminal = series.c[len - 1];
        let ok = class.class == KeywordType::TypeI && (1.8..=2.2).contains(&slope) && terminal < 0.05;
        pass &= ok;
        notes.push(format!("disjoint[{len}] {} slope {slope:.3} terminal C {terminal:.4}", class.class));
    }

    let (a, b) = common::min_max_fixture(200);
    let series = coverage::build_series(&a, &b, 200).unwrap();
    let class = coverage::classify_keyword_with(&series, &StoppingConfig::default());
    let min = class.stopping_points.iter().find(|p| p.kind == ExtremumKind::LocalMin).map(|p| p.n);
    let max = class.stopping_points.iter().find(|p| p.kind == ExtremumKind::LocalMax).map(|p| p.n);
    let ok = class.class == KeywordType::TypeII
        && min.is_some_and(|n| (15..=25).contains(&n))
        && max.is_some_and(|n| (45..=75).contains(&n));
    pass &= ok;
    notes.push(format!("min+max fixture {} min {min:?} max {max:?}", class.class));
    check(pass, notes.join("; "))
}

fn all_permutations(n: u64) -> Vec<Vec<u64>> {
    fn go(prefix: &mut Vec<u64>, rest: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            prefix.push(x);
            go(prefix, rest, out);
            prefix.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (0..n).collect(), &mut out);
    out
}

fn brute_tau(a: &[u64], pos_b: &[usize]) -> f64 {
    let (mut c, mut d) = (0i64, 0i64);
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if pos_b[a[i] as usize] < pos_b[a[j] as usize] {
                c += 1;
            } else {
                d += 1;
            }
        }
    }
    (c - d) as f64 / (c + d) as f64
}

fn ac9_oracle_equivalence() -> Outcome {
    let mut pairs: u64 = 0;
    let mut mismatches = 0u64;
    for n in 2..=7u64 {
        let perms = all_permutations(n);
        let rankings: Vec<TruncatedRanking<u64>> = perms.iter().map(|p| ranking(p.clone())).collect();
        let positions: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| {
                let mut pos = vec![0; p.len()];
                for (i, &x) in p.iter().enumerate() {
                    pos[x as usize] = i;
                }
                pos
            })
            .collect();
        let chunk = perms.len().div_ceil(8);
        let (count, bad) = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..perms.len())
                .step_by(chunk)
                .map(|start| {
                    let (perms, rankings, positions) = (&perms, &rankings, &positions);
                    scope.spawn(move || {
                        let mut count = 0u64;
                        let mut bad = 0u64;
                        for i in start..(start + chunk).min(perms.len()) {
                            for j in 0..perms.len() {
                                let fast = kendall_tau_truncated(&rankings[i], &rankings[j]).value;
                                if (fast - brute_tau(&perms[i], &positions[j])).abs() > 1e-12 {
                                    bad += 1;
                                }
                                count += 1;
                            }
                        }
                        (count, bad)
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().unwrap())
                .fold((0, 0), |acc, x| (acc.0 + x.0, acc.1 + x.1))
        });
        pairs += count;
        mismatches += bad;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut curve_bad = 0;
    for _ in 0..1000 {
        let n = rng.random_range(1..=50usize);
        let mut universe: Vec<u64> = (0..2 * n as u64).collect();
        universe.shuffle(&mut rng);
        let a: Vec<u64> = universe[..n].to_vec();
        universe.shuffle(&mut rng);
        let b: Vec<u64> = universe[..n].to_vec();
        let curve = overlap_curve(&ranking(a.clone()), &ranking(b.clone())).unwrap();
        for j in 0..=n {
            let pa: HashSet<u64> = a[..j].iter().copied().collect();
            let expected = b[..j].iter().filter(|x| pa.contains(x)).count();
            if curve.values[j] != expected {
                curve_bad += 1;
                break;
            }
        }
    }
    check(
        mismatches == 0 && curve_bad == 0,
        format!("tau: {pairs} permutation pairs (N=2..7), {mismatches} mismatches; overlap curve: 1000 random pairs, {curve_bad} mismatches"),
    )
}

fn from_edges(n: usize, edges: &[(u64, u64)]) -> Graph {
    let mut g = Graph::new();
    for _ in 0..n {
        g.add_vertex();
    }
    for &(a, b) in edges {
        g.add_edge(a, b);
    }
    g
}

/// `‖A v − λ v‖∞` on the scored component with `λ = vᵀ A v`.
fn rayleigh_residual(g: &Graph, v: &BTreeMap<u64, f64>) -> f64 {
    let av: BTreeMap<u64, f64> = g
        .vertices()
        .map(|x| (x, g.neighbours(x).map(|u| v[&u]).sum::<f64>()))
        .collect();
    let lambda: f64 = v.iter().map(|(x, vx)| vx * av[x]).sum();
    v.iter()
        .map(|(x, vx)| (av[x] - lambda * vx).abs())
        .fold(0.0, f64::max)
}

fn ac10_centrality() -> Outcome {
    let mut worst_fixture: f64 = 0.0;
    let star = from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
    let c = graphsim::eigenvector_centrality(&star, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
    worst_fixture = worst_fixture.max((c[&0] - 1.0 / 2f64.sqrt()).abs());
    for leaf in 1..5 {
        worst_fixture = worst_fixture.max((c[&leaf] - 1.0 / (2.0 * 2f64.sqrt())).abs());
    }
    for n in [2u64, 5, 12] {
        let edges: Vec<_> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let g = from_edges(n as usize, &edges);
        let c = graphsim::eigenvector_centrality(&g, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        for v in 0..n {
            worst_fixture = worst_fixture.max((c[&v] - 1.0 / (n as f64).sqrt()).abs());
        }
    }
    let triangles = from_edges(6, &[(3, 4), (4, 5), (3, 5), (0, 1), (1, 2), (0, 2)]);
    let c = graphsim::eigenvector_centrality(&triangles, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
    for v in 0..6 {
        let expected = if v < 3 { 1.0 / 3f64.sqrt() } else { 0.0 };
        worst_fixture = worst_fixture.max((c[&v] - expected).abs());
    }

    let mut worst_residual: f64 = 0.0;
    for seed in 0..50 {
        let g = graphsim::ba_generate(500, 5, seed).unwrap();
        let v = graphsim::eigenvector_centrality(&g, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        worst_residual = worst_residual.max(rayleigh_residual(&g, &v));
    }
    check(
        worst_fixture <= 1e-9 && worst_residual < 10.0 * DEFAULT_TOL,
        format!("analytic fixtures max error {worst_fixture:e}; BA(500) max Rayleigh residual {worst_residual:e} (limit {:e})", 10.0 * DEFAULT_TOL),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("AC1 Petersen worked example", ac1_petersen_worked_example, INSTANT),
        ("AC2 Schnabel reduces to Petersen", ac2_schnabel_reduction, Duration::from_secs(1)),
        ("AC3 metric boundary cases", ac3_metric_boundaries, INSTANT),
        ("AC4 reverse ranking", ac4_reverse_ranking, INSTANT),
        ("AC5 random permutation suite", ac5_random_permutation, Duration::from_secs(60)),
        ("AC6 asymmetry suite", ac6_asymmetry, Duration::from_secs(120)),
        ("AC7 churn experiment", ac7_churn_experiment, Duration::from_secs(660)),
        ("AC8 coverage shapes", ac8_coverage_shapes, INSTANT),
        ("AC9 oracle equivalence", ac9_oracle_equivalence, Duration::from_secs(60)),
        ("AC10 centrality correctness", ac10_centrality, Duration::from_secs(60)),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run, budget) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let pass = outcome.pass && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "[{}] {name}: {} ({:.2}s{})",
            if pass { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64(),
            if in_time { String::new() } else { format!(", over budget {:?}", budget) }
        );
    }
    println!("acceptance: {failed} failed");
    if failed > 0 {
        std::process::exit(1);
    }
}
