//! Acceptance suite. Prints one PASS/FAIL line per criterion plus INFO
//! lines, and exits non-zero if any criterion fails.
//!
//! Run a subset with `cargo test -p edgecount-verify --test acceptance -- 3 4`.

use std::time::{Duration, Instant};

use edgecount::driver::{estimate_edges_report, estimate_edges_with, LevelParams, Tuning};
use edgecount::enumeration::enumerate_edges;
use edgecount::estimators::{
    edge_class_counts_oracle, estimate_l1h_advice_with, ll_repetitions, sample_ll_sparse,
    threshold_for, Thresholds,
};
use edgecount::guards::{small_mbar_guard, GuardConfig, RejectReason};
use edgecount::lowerbound::{
    coupled_distinguish, draw_hard_pair, lb_params, reduction_graph, LabeledString,
    SimulatedOracle, SimulationTrace, Symbol,
};
use edgecount::{Graph, NeighborAnswer, OracleSession, Vertex};
use edgecount_bench::divergence::tenth_r_budget;
use edgecount_bench::experiment::{graph_rng, median};
use edgecount_bench::families::{clique, clique_biclique, gnm, star_forest, DEFAULT_STAR_DEGREES};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

// Tolerances and sizes, as stated by the criteria.
const C1_CASES: usize = 500;
const C1_MAX_N: usize = 64;
const C1_TIME_LIMIT: Duration = Duration::from_secs(30);
const C2_CONSTANT: f64 = 50.0;
const C3_TRIALS: usize = 100_000;
const C3_SE_MULT: f64 = 5.0;
const C3_VAR_SLACK: f64 = 1.1;
const C5_TRIALS: usize = 300;
const C5_MIN_ACCEPT: f64 = 0.99;
const C6_TRIALS: usize = 300;
const C6_SLACK: f64 = 100.0;
const C7_TRIALS: usize = 300;
const C7_EPS: f64 = 1.0 / 15.0;
const C7_MIN_RATE: f64 = 2.0 / 3.0 - 0.05;
const C7_TIME_LIMIT: Duration = Duration::from_secs(600);
const C8_N: usize = 1 << 16;
const C8_TRIALS: usize = 50;
const C8_SLOPE_TOL: f64 = 0.15;
const C9_CHECKS: usize = 10_000;
const C9_MAX_N: usize = 512;
const C9_MIN_P: f64 = 0.01;
const C10_RUNS: usize = 500;
const C10_SE_MULT: f64 = 3.0;
const MBAR_STAR: f64 = 64.0;

/// Query budget per trial for runs with the standard constants. Their
/// first advice call alone needs more sampler runs than any budget that
/// fits the time limit, so every such trial ends at this cap.
const STANDARD_TRIAL_BUDGET: u64 = 50_000;

/// Trials per family of the reduced-constant runs reported as INFO.
const DESK_TRIALS: usize = 30;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn info(msg: impl AsRef<str>) {
    println!("INFO  {}", msg.as_ref());
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Standard error of the sample variance, from the fourth central moment.
fn var_se(xs: &[f64], mean: f64, var: f64) -> f64 {
    let n = xs.len() as f64;
    let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    ((m4 - var * var).max(0.0) / n).sqrt()
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let cov: f64 = points.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = points.iter().map(|&(x, _)| (x - mx).powi(2)).sum();
    cov / var
}

fn path(n: usize) -> Graph {
    Graph::new(n, (1..n as Vertex).map(|v| (v - 1, v))).unwrap()
}

fn cycle(n: usize) -> Graph {
    Graph::new(n, (0..n as Vertex).map(|v| (v, (v + 1) % n as Vertex))).unwrap()
}

fn grid(w: usize) -> Graph {
    let id = |r: usize, c: usize| (r * w + c) as Vertex;
    let mut e = Vec::new();
    for r in 0..w {
        for c in 0..w {
            if c + 1 < w {
                e.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < w {
                e.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Graph::new(w * w, e).unwrap()
}

fn complete_bipartite(a: usize, b: usize) -> Graph {
    let e = (0..a as Vertex).flat_map(|u| (a as Vertex..(a + b) as Vertex).map(move |v| (u, v)));
    Graph::new(a + b, e).unwrap()
}

fn with_hub(g: &Graph, hub_degree: usize) -> Graph {
    let mut e: Vec<_> = g.edges().collect();
    e.extend((1..=hub_degree as Vertex).map(|v| (0, v)));
    Graph::new(g.n(), e).unwrap()
}

fn gnm_seeded(n: usize, m: u64, seed: u64) -> Graph {
    gnm(n, m, &mut rng(seed)).unwrap()
}

// 1 and 2 share runs: exact output and the per-edge cost bound.
fn criteria_1_2() -> (Outcome, Outcome) {
    let mut r = rng(1);
    let start = Instant::now();
    let (mut mismatches, mut violations, mut checked_prefixes) = (0, 0, 0u64);
    let mut worst_ratio = 0.0f64;
    for case in 0..C1_CASES {
        let n = r.gen_range(2..=C1_MAX_N);
        let g = match case % 4 {
            0 => Graph::empty(n),
            1 => gnm_seeded(n, r.gen_range(0..=2 * n as u64).min((n * (n - 1) / 2) as u64), case as u64),
            2 => clique(r.gen_range(2..=n), n).unwrap(),
            _ => {
                let a = r.gen_range(1..n);
                let p: f64 = r.gen_range(0.2..=1.0);
                let e: Vec<_> = (0..a as Vertex)
                    .flat_map(|u| (a as Vertex..n as Vertex).map(move |v| (u, v)))
                    .filter(|_| r.gen_bool(p))
                    .collect();
                Graph::new(n, e).unwrap()
            }
        };
        let keep: f64 = [0.3, 0.6, 1.0][case % 3];
        let set: Vec<Vertex> = (0..n as Vertex).filter(|_| r.gen_bool(keep)).collect();
        let mut s = OracleSession::new(&g, case as u64);
        let log_n = (n as f64).log2();
        let mut stream = enumerate_edges(set.clone());
        let mut got = Vec::new();
        loop {
            let next = stream.next_edge(&mut s).unwrap();
            let t = got.len() + usize::from(next.is_some());
            let cap = C2_CONSTANT * (1.0 + t as f64 * log_n);
            let spent = s.ledger().total as f64;
            worst_ratio = worst_ratio.max(spent / cap);
            checked_prefixes += 1;
            if spent > cap {
                violations += 1;
            }
            match next {
                Some(e) => got.push(e),
                None => break,
            }
        }
        got.sort_unstable();
        if got != g.induced_edges(&set) {
            mismatches += 1;
        }
    }
    let elapsed = start.elapsed();
    (
        outcome(
            mismatches == 0 && elapsed < C1_TIME_LIMIT,
            format!("{C1_CASES} cases, {mismatches} mismatches, {:.2}s (limit 30s)", elapsed.as_secs_f64()),
        ),
        outcome(
            violations == 0,
            format!(
                "{checked_prefixes} prefixes, {violations} violations of 50(1 + t log2 n), worst ratio {worst_ratio:.3}"
            ),
        ),
    )
}

fn criterion_3() -> Outcome {
    let cases: Vec<(&str, Graph, f64, f64)> = vec![
        ("K6 k5 mbar1", clique(6, 6).unwrap(), 5.0, 1.0),
        ("K6 k5 mbar15", clique(6, 6).unwrap(), 5.0, 15.0),
        ("K6 k4 mbar4", clique(6, 6).unwrap(), 4.0, 4.0),
        ("P30 k2 mbar4", path(30), 2.0, 4.0),
        ("C40 k2 mbar10", cycle(40), 2.0, 10.0),
        ("star20 k5 mbar20", star_forest(21, &[20]).unwrap(), 5.0, 20.0),
        ("stars k4 mbar16", star_forest(60, &[3, 3, 12, 20]).unwrap(), 4.0, 16.0),
        ("gnm40,60 k3 mbar16", gnm_seeded(40, 60, 3), 3.0, 16.0),
        ("gnm40,60 k100 mbar60", gnm_seeded(40, 60, 3), 100.0, 60.0),
        ("gnm64,200 k6 mbar50", gnm_seeded(64, 200, 4), 6.0, 50.0),
        ("gnm64,200 k64 mbar200", gnm_seeded(64, 200, 4), 64.0, 200.0),
        ("cb60 k7 mbar30", clique_biclique(60, 8, 10, 4).unwrap(), 7.0, 30.0),
        ("cb60 k9 mbar68", clique_biclique(60, 8, 10, 4).unwrap(), 9.0, 68.0),
        ("K5,7 k7 mbar8", complete_bipartite(5, 7), 7.0, 8.0),
        ("grid6 k3 mbar20", grid(6), 3.0, 20.0),
        ("gnm100,300 k8 mbar300", gnm_seeded(100, 300, 5), 8.0, 300.0),
        ("gnm100,300 k4 mbar100", gnm_seeded(100, 300, 5), 4.0, 100.0),
        ("empty30 k1 mbar5", Graph::empty(30), 1.0, 5.0),
        ("edge k1 mbar1", Graph::new(10, [(2, 7)]).unwrap(), 1.0, 1.0),
        ("triangles k2 mbar3", Graph::new(12, [(0, 1), (1, 2), (0, 2), (5, 6), (6, 7), (5, 7), (7, 8)]).unwrap(), 2.0, 3.0),
    ];
    let mut failed = Vec::new();
    for (i, (name, g, k, m_bar)) in cases.iter().enumerate() {
        let th = Thresholds::with_k(g.n(), 1.0, *m_bar, *k).unwrap();
        let m_ll = edge_class_counts_oracle(g, &th).ll as f64;
        let mut s = OracleSession::new(g, 300 + i as u64);
        let xs: Vec<f64> = (0..C3_TRIALS)
            .map(|_| sample_ll_sparse(&mut s, &th).unwrap() as f64)
            .collect();
        let (mean, var) = mean_var(&xs);
        let target = m_ll / m_bar;
        let se = (var / xs.len() as f64).sqrt();
        let bound = (1.0 + 2.0 * k / m_bar.sqrt()) * m_ll / m_bar;
        let vse = var_se(&xs, mean, var);
        let mean_ok = (mean - target).abs() <= C3_SE_MULT * se + 1e-12;
        let var_ok = var <= C3_VAR_SLACK * bound + C3_SE_MULT * vse + 1e-12;
        if !(mean_ok && var_ok) {
            failed.push(format!(
                "{name}: mean {mean:.5} vs {target:.5} (se {se:.2e}), var {var:.5} vs bound {bound:.5}"
            ));
        }
    }
    outcome(
        failed.is_empty(),
        format!("{} cases x {C3_TRIALS} runs; failing: [{}]", cases.len(), failed.join("; ")),
    )
}

fn criterion_4() -> Outcome {
    let cases: Vec<(&str, Graph, f64, f64, f64)> = vec![
        ("star20", star_forest(21, &[20]).unwrap(), 5.0, 10.0, 0.5),
        ("stars", star_forest(60, &[3, 3, 12, 20]).unwrap(), 4.0, 16.0, 0.5),
        ("cb60", clique_biclique(60, 8, 10, 4).unwrap(), 7.0, 50.0, 1.0),
        ("gnm64,200", gnm_seeded(64, 200, 4), 6.0, 40.0, 0.5),
        ("gnm100,300", gnm_seeded(100, 300, 5), 6.0, 20.0, 1.0),
        ("K3,30", complete_bipartite(3, 30), 10.0, 30.0, 0.5),
        ("grid6", grid(6), 3.0, 20.0, 1.0),
        ("empty30", Graph::empty(30), 1.0, 5.0, 0.5),
        ("K6", clique(6, 6).unwrap(), 5.0, 15.0, 0.5),
        ("gnm40,60+hub30", with_hub(&gnm_seeded(40, 60, 3), 30), 5.0, 30.0, 0.5),
    ];
    let mut failed = Vec::new();
    let mut nontrivial = 0;
    for (i, (name, g, k, m_bar, eps)) in cases.iter().enumerate() {
        let th = Thresholds::with_k(g.n(), *eps, *m_bar, *k).unwrap();
        let m_l1h = edge_class_counts_oracle(g, &th).l1h as f64;
        nontrivial += usize::from(m_l1h > 0.0);
        let mut s = OracleSession::new(g, 400 + i as u64);
        // a vanishing sample factor leaves one neighbor sample per call
        let xs: Vec<f64> = (0..C3_TRIALS)
            .map(|_| estimate_l1h_advice_with(&mut s, *eps, *m_bar, *k, 1e-12).unwrap())
            .collect();
        let (mean, var) = mean_var(&xs);
        let se = (var / xs.len() as f64).sqrt();
        let bound = g.n() as f64 * th.k_prime * m_l1h;
        let vse = var_se(&xs, mean, var);
        let mean_ok = (mean - m_l1h).abs() <= C3_SE_MULT * se + 1e-12;
        let var_ok = var <= C3_VAR_SLACK * bound + C3_SE_MULT * vse + 1e-12;
        if !(mean_ok && var_ok) {
            failed.push(format!(
                "{name}: mean {mean:.4} vs {m_l1h} (se {se:.2e}), var {var:.3} vs bound {bound:.3}"
            ));
        }
    }
    outcome(
        failed.is_empty(),
        format!(
            "{} cases ({nontrivial} with m_L1H > 0) x {C3_TRIALS} samples; failing: [{}]",
            cases.len(),
            failed.join("; ")
        ),
    )
}

fn criterion_5() -> Outcome {
    let config = GuardConfig::default();
    let cases: Vec<(&str, Graph, f64)> = vec![
        ("empty16", Graph::empty(16), 1.0),
        ("edge", Graph::new(8, [(0, 1)]).unwrap(), 1.0),
        ("P3", path(3), 2.0),
        ("matching2", Graph::new(8, [(0, 1), (2, 3)]).unwrap(), 2.0),
        ("triangle", clique(3, 6).unwrap(), 3.0),
        ("star3", star_forest(8, &[3]).unwrap(), 3.0),
        ("P4", path(4), 4.0),
        ("star4", star_forest(6, &[4]).unwrap(), 5.0),
        ("K4", clique(4, 8).unwrap(), 6.0),
        ("C5", cycle(5), 6.0),
    ];
    let mut rates = Vec::new();
    let mut worst = 1.0f64;
    for (i, (name, g, m_bar)) in cases.iter().enumerate() {
        assert!(g.m() as f64 <= *m_bar);
        let accepted = (0..C5_TRIALS)
            .filter(|t| {
                let mut s = OracleSession::new(g, (i * 1000 + t) as u64);
                small_mbar_guard(&mut s, *m_bar, &config).unwrap().is_accept()
            })
            .count();
        let rate = accepted as f64 / C5_TRIALS as f64;
        worst = worst.min(rate);
        rates.push(format!("{name}={rate:.3}"));
    }
    outcome(
        worst >= C5_MIN_ACCEPT,
        format!("c=1/1000, default m_bar*; accept rates {} (min {worst:.3}, need 0.99)", rates.join(" ")),
    )
}

fn criterion_6() -> Outcome {
    let full = GuardConfig::default();
    let capped = full.with_m_bar_star(MBAR_STAR).unwrap();
    // the bounded enumeration rejects whenever m_bar < m_bar*, so only the
    // last two cases reach the randomized stages
    let cases: Vec<(&str, Graph, f64, GuardConfig)> = vec![
        ("K6 mbar3", clique(6, 6).unwrap(), 3.0, full),
        ("gnm40,60 mbar10", gnm_seeded(40, 60, 6), 10.0, full),
        ("star20 mbar10", star_forest(30, &[20]).unwrap(), 10.0, full),
        ("P30 mbar5", path(30), 5.0, full),
        ("cb60 mbar12", clique_biclique(60, 8, 10, 4).unwrap(), 12.0, full),
        ("gnm200,400 mbar10 capped", gnm_seeded(200, 400, 7), 10.0, capped),
        ("K20 mbar40 capped", clique(20, 64).unwrap(), 40.0, capped),
        ("star90+gnm mbar60 capped", with_hub(&gnm_seeded(120, 60, 8), 90), 60.0, capped),
        ("star300 mbar100 capped", star_forest(400, &[300]).unwrap(), 100.0, capped),
        ("K30 in 200 mbar100 capped", clique(30, 200).unwrap(), 100.0, capped),
    ];
    let mut rates = Vec::new();
    let mut ok = true;
    for (i, (name, g, m_bar, config)) in cases.iter().enumerate() {
        let m = g.m() as f64;
        assert!(*m_bar < m / 4.0 || g.max_degree() as f64 > *m_bar, "{name} is not a soundness case");
        let mut reasons = [0usize; 3];
        let rejected = (0..C6_TRIALS)
            .filter(|t| {
                let mut s = OracleSession::new(g, (6000 + i * 1000 + t) as u64);
                match small_mbar_guard(&mut s, *m_bar, config).unwrap().reason() {
                    Some(r) => {
                        reasons[match r {
                            RejectReason::DeterministicCase0 => 0,
                            RejectReason::HighDegreeWitness => 1,
                            RejectReason::CountOverflow => 2,
                        }] += 1;
                        true
                    }
                    None => false,
                }
            })
            .count();
        let rate = rejected as f64 / C6_TRIALS as f64;
        let need = 1.0 - m_bar / (C6_SLACK * m);
        ok &= rate >= need;
        rates.push(format!(
            "{name}={rate:.3}/{need:.4} (case0 {}, witness {}, overflow {})",
            reasons[0], reasons[1], reasons[2]
        ));
    }
    outcome(ok, format!("reject rate/required: {}", rates.join("; ")))
}

fn c7_families() -> Vec<(&'static str, Graph)> {
    vec![
        ("K32-in-4096", clique(32, 4096).unwrap()),
        ("gnm(2048,8192)", gnm(2048, 8192, &mut graph_rng(7)).unwrap()),
        ("star_forest(4096)", star_forest(4096, &DEFAULT_STAR_DEGREES).unwrap()),
        ("clique_biclique(2048,45,64,8)", clique_biclique(2048, 45, 64, 8).unwrap()),
    ]
}

struct FamilyRun {
    successes: usize,
    exhausted: usize,
    median_total: f64,
    elapsed: Duration,
}

fn run_family(g: &Graph, eps: f64, trials: usize, tuning: &Tuning, budget: Option<u64>, seed0: u64) -> FamilyRun {
    let m = g.m() as f64;
    let start = Instant::now();
    let (mut successes, mut exhausted) = (0, 0);
    let mut totals = Vec::with_capacity(trials);
    for t in 0..trials {
        let mut s = OracleSession::new(g, seed0 + t as u64).with_budget(budget);
        match estimate_edges_report(&mut s, eps, tuning) {
            Ok(r) => successes += usize::from((r.estimate - m).abs() <= eps * m),
            Err(edgecount::Error::BudgetExhausted { .. }) => exhausted += 1,
            Err(e) => panic!("estimator error: {e}"),
        }
        totals.push(s.ledger().total as f64);
    }
    FamilyRun {
        successes,
        exhausted,
        median_total: median(&mut totals),
        elapsed: start.elapsed(),
    }
}

/// Sampler runs requested by the first advice call of the deepening loop.
fn first_call_runs(n: usize, eps: f64) -> f64 {
    let tuning = Tuning::standard();
    let level = LevelParams::new(n, 0);
    let inner = eps / tuning.high_eps_divisor;
    let th = threshold_for(n, inner, level.m_bar_big).unwrap();
    ll_repetitions(inner, level.m_bar_big, th.k, tuning.ll_factor)
}

fn criterion_7() -> Outcome {
    let tuning = Tuning::standard().with_m_bar_star(MBAR_STAR).unwrap();
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, g) in c7_families() {
        let run = run_family(&g, C7_EPS, C7_TRIALS, &tuning, Some(STANDARD_TRIAL_BUDGET), 70_000);
        let rate = run.successes as f64 / C7_TRIALS as f64;
        ok &= rate >= C7_MIN_RATE && run.elapsed < C7_TIME_LIMIT;
        let per_query = run.elapsed.as_secs_f64() / (C7_TRIALS as f64 * run.median_total.max(1.0));
        let needed = first_call_runs(g.n(), C7_EPS);
        parts.push(format!(
            "{name}: success {rate:.3}, exhausted {}/{C7_TRIALS} at {STANDARD_TRIAL_BUDGET} queries, {:.1}s; \
             first advice call needs >= {needed:.3e} queries (~{:.1e}s at {per_query:.1e}s/query)",
            run.exhausted,
            run.elapsed.as_secs_f64(),
            needed * per_query
        ));
    }
    outcome(ok, format!("standard constants, m_bar*=64, need >= {C7_MIN_RATE:.4}: {}", parts.join("; ")))
}

fn info_7_desk() {
    let tuning = Tuning::desk();
    for (name, g) in c7_families() {
        let run = run_family(&g, C7_EPS, DESK_TRIALS, &tuning, None, 71_000);
        info(format!(
            "7 desk constants {name}: success {}/{DESK_TRIALS}, median queries {:.0}, {:.1}s",
            run.successes,
            run.median_total,
            run.elapsed.as_secs_f64()
        ));
    }
}

/// Clique sizes `t` with `C(t,2)` closest to `2^j`.
fn c8_cliques() -> Vec<(u32, usize)> {
    (8..=18)
        .map(|j| {
            let m = (1u64 << j) as f64;
            let t = ((1.0 + (1.0 + 8.0 * m).sqrt()) / 2.0).round() as usize;
            (j, t)
        })
        .collect()
}

fn regime_slopes(points: &[(f64, f64)], n: usize) -> (f64, f64) {
    // the two terms balance where sqrt(n / sqrt(m)) = sqrt(m), at m = n^(2/3)
    let cross = (n as f64).powf(2.0 / 3.0).ln();
    let low: Vec<_> = points.iter().copied().filter(|p| p.0 <= cross).collect();
    let high: Vec<_> = points.iter().copied().filter(|p| p.0 > cross).collect();
    (slope(&low), slope(&high))
}

fn criterion_8() -> Outcome {
    let tuning = Tuning::standard().with_m_bar_star(MBAR_STAR).unwrap();
    let mut points = Vec::new();
    let mut exhausted = 0;
    for (j, t) in c8_cliques() {
        let g = clique(t, C8_N).unwrap();
        let run = run_family(&g, C7_EPS, C8_TRIALS, &tuning, Some(STANDARD_TRIAL_BUDGET), 80_000 + 100 * j as u64);
        exhausted += run.exhausted;
        points.push(((g.m() as f64).ln(), run.median_total.ln()));
    }
    let (low, high) = regime_slopes(&points, C8_N);
    // below the crossover the sqrt(m) term is the smaller one
    let ok = (low - 0.5).abs() <= C8_SLOPE_TOL && (high + 0.25).abs() <= C8_SLOPE_TOL;
    outcome(
        ok,
        format!(
            "standard constants, m_bar*=64, {C8_TRIALS} trials/point: slope {low:.3} (want 0.5) below m=n^(2/3), \
             {high:.3} (want -0.25) above; {exhausted}/{} trials hit the {STANDARD_TRIAL_BUDGET}-query cap; \
             first advice call needs >= {:.3e} queries",
            11 * C8_TRIALS,
            first_call_runs(C8_N, C7_EPS)
        ),
    )
}

fn info_8_desk() {
    let tuning = Tuning::desk().with_m_bar_star(MBAR_STAR).unwrap();
    let mut points = Vec::new();
    let start = Instant::now();
    for (j, t) in c8_cliques().into_iter().filter(|(j, _)| j % 2 == 0) {
        let g = clique(t, C8_N).unwrap();
        let run = run_family(&g, C7_EPS, 2, &tuning, None, 81_000 + 100 * j as u64);
        points.push(((g.m() as f64).ln(), run.median_total.ln()));
        info(format!("8 desk constants m={} median queries {:.0}", g.m(), run.median_total));
    }
    let (low, high) = regime_slopes(&points, C8_N);
    info(format!(
        "8 desk constants, 2 trials/point: slopes {low:.3} below and {high:.3} above m=n^(2/3), {:.0}s",
        start.elapsed().as_secs_f64()
    ));
}

fn random_string(r: &mut ChaCha8Rng) -> LabeledString {
    let n = r.gen_range(2..=C9_MAX_N);
    let w: [f64; 4] = std::array::from_fn(|_| r.gen_range(0.0..1.0));
    let total: f64 = w.iter().sum();
    let labels = (0..n)
        .map(|_| {
            let mut x = r.gen_range(0.0..total);
            for (i, wi) in w.iter().enumerate() {
                if x < *wi {
                    return Symbol::ALL[i];
                }
                x -= wi;
            }
            Symbol::H
        })
        .collect();
    LabeledString::new(labels)
}

fn chi_square_p(stat: f64, df: usize) -> f64 {
    1.0 - ChiSquared::new(df as f64).unwrap().cdf(stat)
}

fn criterion_9() -> Outcome {
    let mut r = rng(9);
    let (mut mismatches, mut max_k, mut counts) = (0, 0u32, [0usize; 3]);
    let strings = 100;
    for si in 0..strings {
        let s = random_string(&mut r);
        let g = reduction_graph(&s);
        let n = s.len() as Vertex;
        for q in 0..C9_CHECKS / strings {
            let seed = (si * 1000 + q) as u64;
            let mut trace = SimulationTrace::new(true);
            let mut direct = OracleSession::new(&g, seed);
            let same = {
                let mut sim = OracleSession::with_backend(Box::new(SimulatedOracle::new(&s, &mut trace)), seed);
                let u = r.gen_range(0..n);
                match q % 3 {
                    0 => sim.deg(u).unwrap() == direct.deg(u).unwrap(),
                    1 => match sim.neigh(u).unwrap() {
                        NeighborAnswer::NoNeighbor => g.degree(u) == 0,
                        NeighborAnswer::Vertex(v) => g.has_edge(u, v),
                    },
                    _ => {
                        let keep = r.gen_range(0.0..=1.0);
                        let set: Vec<Vertex> = (0..n).filter(|_| r.gen_bool(keep * keep)).collect();
                        sim.is_independent(&set).unwrap() == direct.is_independent(&set).unwrap()
                    }
                }
            };
            counts[q % 3] += 1;
            mismatches += usize::from(!same);
            max_k = max_k.max(trace.max_k_involved);
        }
    }
    // whole estimator runs on hard pairs, for the involvement bound
    let tuning = Tuning::desk();
    for seed in 0..20 {
        let pair = draw_hard_pair(&mut rng(900 + seed), 512, 24, 1.0 / 11.0).unwrap();
        let run = coupled_distinguish(|s| estimate_edges_with(s, C7_EPS, &tuning), &pair, seed, Some(200_000), false);
        max_k = max_k.max(run.trace1.max_k_involved).max(run.trace2.max_k_involved);
    }
    // neighbor answers: simulated against direct, and simulated against uniform
    let s = LabeledString::parse(&format!("{}{}{}", "K".repeat(40), "L".repeat(30), "H".repeat(25))).unwrap();
    let g = reduction_graph(&s);
    let mut p_values = Vec::new();
    for u in [3 as Vertex, 50, 80] {
        let nbrs = g.neighbors(u).to_vec();
        let samples = 20_000;
        let mut sim_counts = vec![0f64; nbrs.len()];
        let mut dir_counts = vec![0f64; nbrs.len()];
        let mut trace = SimulationTrace::new(false);
        {
            let mut sim = OracleSession::with_backend(Box::new(SimulatedOracle::new(&s, &mut trace)), u as u64);
            let mut direct = OracleSession::new(&g, 10_000 + u as u64);
            for _ in 0..samples {
                let a = sim.neigh(u).unwrap().vertex().unwrap();
                let b = direct.neigh(u).unwrap().vertex().unwrap();
                sim_counts[nbrs.binary_search(&a).unwrap()] += 1.0;
                dir_counts[nbrs.binary_search(&b).unwrap()] += 1.0;
            }
        }
        let d = nbrs.len();
        let expected = samples as f64 / d as f64;
        let gof: f64 = sim_counts.iter().map(|c| (c - expected).powi(2) / expected).sum();
        // two-sample homogeneity with equal sample sizes
        let homog: f64 = sim_counts
            .iter()
            .zip(&dir_counts)
            .map(|(a, b)| (a - b).powi(2) / (a + b))
            .sum();
        p_values.push(chi_square_p(gof, d - 1));
        p_values.push(chi_square_p(homog, d - 1));
    }
    let min_p = p_values.iter().copied().fold(1.0, f64::min);
    outcome(
        mismatches == 0 && max_k <= 2 && min_p > C9_MIN_P,
        format!(
            "{} checks (deg {}, neigh {}, is {}), {mismatches} mismatches; max K-involvement {max_k}; \
             neighbor chi-square p-values {:?} (min {min_p:.3})",
            counts.iter().sum::<usize>(),
            counts[0],
            counts[1],
            counts[2],
            p_values.iter().map(|p| format!("{p:.3}")).collect::<Vec<_>>()
        ),
    )
}

fn criterion_10() -> Outcome {
    let (n, n_k, eps) = (1usize << 14, 1usize << 7, 1.0 / 11.0);
    let params = lb_params(n, n_k, eps).unwrap();
    let q = tenth_r_budget(&params);
    let tuning = Tuning::standard();
    let (mut diverged, mut identity_failures) = (0usize, 0usize);
    for run in 0..C10_RUNS {
        let seed = 100_000 + run as u64;
        let pair = draw_hard_pair(&mut rng(seed), n, n_k, eps).unwrap();
        let p = pair.params;
        let (g1, g2) = pair.graphs();
        identity_failures += usize::from(g2.m() - g1.m() != (p.n_ell * p.n_h) as u64);
        let r = coupled_distinguish(|s| estimate_edges_with(s, C7_EPS, &tuning), &pair, seed, Some(q), false);
        diverged += usize::from(r.diverged);
    }
    let rate = diverged as f64 / C10_RUNS as f64;
    let se = (rate * (1.0 - rate) / C10_RUNS as f64).sqrt();
    let limit = 0.1 + C10_SE_MULT * se;
    outcome(
        rate <= limit && identity_failures == 0,
        format!(
            "n_h={} n_ell={} R={:.4} floor(R/10)={} so q={q}; divergence {diverged}/{C10_RUNS} = {rate:.3} \
             (limit {limit:.3}); identity failures {identity_failures}",
            params.n_h,
            params.n_ell,
            params.r(),
            (params.r() / 10.0).floor()
        ),
    )
}

fn info_10_budgets() {
    let (n, n_k, eps) = (1usize << 14, 1usize << 7, 1.0 / 11.0);
    let tuning = Tuning::desk();
    let runs = 50;
    for q in [10u64, 100, 1_000] {
        let diverged = (0..runs)
            .filter(|&i| {
                let seed = 200_000 + i as u64;
                let pair = draw_hard_pair(&mut rng(seed), n, n_k, eps).unwrap();
                coupled_distinguish(|s| estimate_edges_with(s, C7_EPS, &tuning), &pair, seed, Some(q), false).diverged
            })
            .count();
        info(format!("10 desk constants budget {q}: divergence {diverged}/{runs}"));
    }
}

fn main() {
    let wanted: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let run = |c: u32| wanted.is_empty() || wanted.contains(&c);
    let mut failures = Vec::new();
    let mut clock = Instant::now();
    let mut report = |c: u32, name: &str, o: Outcome| {
        println!(
            "{} {c:>2} {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            clock.elapsed().as_secs_f64()
        );
        clock = Instant::now();
        if !o.pass {
            failures.push(c);
        }
    };
    if run(1) || run(2) {
        let (a, b) = criteria_1_2();
        report(1, "enumeration exactness", a);
        report(2, "amortized enumeration cost", b);
    }
    if run(3) {
        report(3, "low-low sampler unbiasedness", criterion_3());
    }
    if run(4) {
        report(4, "very-low/high estimator unbiasedness", criterion_4());
    }
    if run(5) {
        report(5, "guard completeness", criterion_5());
    }
    if run(6) {
        report(6, "guard soundness", criterion_6());
    }
    if run(7) {
        report(7, "end-to-end correctness", criterion_7());
        info_7_desk();
    }
    if run(8) {
        report(8, "query scaling", criterion_8());
        info_8_desk();
    }
    if run(9) {
        report(9, "simulation fidelity", criterion_9());
    }
    if run(10) {
        report(10, "distinguishing bound", criterion_10());
        info_10_budgets();
    }
    if !failures.is_empty() {
        println!("acceptance: failing criteria {failures:?}");
        std::process::exit(1);
    }
}
