//! Seeded trials, per-trial records and CSV output.

use std::io::Write;
use std::time::Instant;

use edgecount::driver::{estimate_edges_report, Route};
use edgecount::{Error, Graph, OracleSession, QueryLedger};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::BenchResult;
use crate::families::{brute_count, gen_family};

/// Column order of the trial CSV. Changing it breaks stored results.
pub const CSV_HEADER: [&str; 15] = [
    "trial",
    "seed",
    "family",
    "n",
    "true_m",
    "epsilon",
    "estimate",
    "rel_error",
    "success",
    "deg_queries",
    "neigh_queries",
    "is_queries",
    "total_queries",
    "deviation",
    "wall_ms",
];

/// Stream offset of the generator that builds random graphs, so graph
/// randomness never overlaps trial randomness.
const GRAPH_STREAM: u64 = 0x0067_7261_7068;

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub true_m: u64,
    /// `None` when the budget ran out.
    pub estimate: Option<f64>,
    pub rel_error: Option<f64>,
    pub success: bool,
    pub ledger: QueryLedger,
    pub route: Option<Route>,
    pub wall_ms: Option<f64>,
    pub deviation: String,
}

impl TrialRecord {
    pub fn budget_exhausted(&self) -> bool {
        self.estimate.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub trials: usize,
    pub true_m: u64,
    pub successes: usize,
    pub success_rate: f64,
    pub exhausted: usize,
    pub median_total: f64,
    pub mean_total: f64,
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub n: usize,
    pub records: Vec<TrialRecord>,
    pub summary: Summary,
}

/// Generator for the experiment's graph, independent of trial seeds.
pub fn graph_rng(master_seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(GRAPH_STREAM);
    rng
}

pub fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    }
}

pub fn summarize(records: &[TrialRecord], true_m: u64) -> Summary {
    let mut totals: Vec<f64> = records.iter().map(|r| r.ledger.total as f64).collect();
    let successes = records.iter().filter(|r| r.success).count();
    let trials = records.len();
    Summary {
        trials,
        true_m,
        successes,
        success_rate: successes as f64 / trials.max(1) as f64,
        exhausted: records.iter().filter(|r| r.budget_exhausted()).count(),
        mean_total: totals.iter().sum::<f64>() / trials.max(1) as f64,
        median_total: median(&mut totals),
    }
}

/// One seeded estimator run with full ledger capture.
pub fn run_trial(graph: &Graph, true_m: u64, config: &ExperimentConfig, trial: usize) -> BenchResult<TrialRecord> {
    let tuning = config.tuning()?;
    let seed = config.master_seed.wrapping_add(trial as u64);
    let start = config.timing.then(Instant::now);
    let mut s = OracleSession::new(graph, seed).with_budget(config.budget);
    let (estimate, route) = match estimate_edges_report(&mut s, config.epsilon, &tuning) {
        Ok(r) => (Some(r.estimate), Some(r.route)),
        Err(Error::BudgetExhausted { .. }) => (None, None),
        Err(e) => return Err(e.into()),
    };
    let m = true_m as f64;
    let rel_error = estimate.map(|e| if m == 0.0 { e.abs() } else { (e - m).abs() / m });
    let success = estimate.is_some_and(|e| (e - m).abs() <= config.epsilon * m);
    Ok(TrialRecord {
        trial,
        seed,
        true_m,
        estimate,
        rel_error,
        success,
        ledger: s.ledger(),
        route,
        wall_ms: start.map(|t| t.elapsed().as_secs_f64() * 1e3),
        deviation: config.deviation(),
    })
}

/// Runs all trials of `config` on one generated graph. Records come back
/// ordered by trial index.
pub fn run_experiment(config: &ExperimentConfig) -> BenchResult<Experiment> {
    config.validate()?;
    let graph = gen_family(&config.family, config.n, &mut graph_rng(config.master_seed))?;
    run_on_graph(config, &graph)
}

pub fn run_on_graph(config: &ExperimentConfig, graph: &Graph) -> BenchResult<Experiment> {
    let true_m = brute_count(graph);
    let records = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(graph, true_m, config, t))
        .collect::<BenchResult<Vec<_>>>()?;
    let summary = summarize(&records, true_m);
    Ok(Experiment {
        config: config.clone(),
        n: graph.n(),
        records,
        summary,
    })
}

/// `x` rounded to 9 significant digits, printed in shortest form.
pub fn sig9(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.8e}").parse().unwrap_or(x);
    rounded.to_string()
}

fn opt(x: Option<f64>) -> String {
    x.map(sig9).unwrap_or_default()
}

pub fn write_csv<W: Write>(exp: &Experiment, out: W) -> BenchResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in &exp.records {
        w.write_record([
            r.trial.to_string(),
            r.seed.to_string(),
            exp.config.family.name().to_string(),
            exp.n.to_string(),
            r.true_m.to_string(),
            sig9(exp.config.epsilon),
            opt(r.estimate),
            opt(r.rel_error),
            u8::from(r.success).to_string(),
            r.ledger.deg_count.to_string(),
            r.ledger.neigh_count.to_string(),
            r.ledger.is_count.to_string(),
            r.ledger.total.to_string(),
            r.deviation.clone(),
            opt(r.wall_ms),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn format_summary(exp: &Experiment) -> String {
    let s = &exp.summary;
    format!(
        "family={} n={} m={} eps={} trials={} success_rate={} exhausted={} median_queries={} mean_queries={} deviation={}",
        exp.config.family.name(),
        exp.n,
        s.true_m,
        sig9(exp.config.epsilon),
        s.trials,
        sig9(s.success_rate),
        s.exhausted,
        sig9(s.median_total),
        sig9(s.mean_total),
        exp.config.deviation(),
    )
}
