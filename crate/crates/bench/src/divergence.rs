//! Coupled runs of the estimator on hard pairs.

use std::io::Write;

use edgecount::driver::estimate_edges_with;
use edgecount::lowerbound::{coupled_distinguish, draw_hard_pair, lb_params, LbParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::Profile;
use crate::error::{config_err, BenchResult};
use crate::experiment::sig9;

pub const CSV_HEADER: [&str; 12] = [
    "n", "n_k", "n_h", "n_ell", "lb_epsilon", "r", "budget", "trials", "diverged", "rate", "se",
    "q_over_r",
];

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceConfig {
    pub n: usize,
    pub n_k: usize,
    /// Accuracy parameter of the hard pair.
    pub lb_epsilon: f64,
    /// Accuracy requested from the estimator.
    pub epsilon: f64,
    pub trials: usize,
    pub master_seed: u64,
    pub budgets: Vec<u64>,
    pub profile: Profile,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceRow {
    pub budget: u64,
    pub trials: usize,
    pub diverged: usize,
    pub rate: f64,
    /// Binomial standard error of `rate`.
    pub se: f64,
}

#[derive(Debug, Clone)]
pub struct DivergenceReport {
    pub config: DivergenceConfig,
    pub params: LbParams,
    pub rows: Vec<DivergenceRow>,
    /// Draws with `m2 - m1 != n_ell * n_h`; zero when the construction is right.
    pub identity_failures: usize,
}

/// Largest budget the distinguishing bound covers at one tenth: `floor(R/10)`,
/// raised to one query since a zero budget runs nothing.
pub fn tenth_r_budget(params: &LbParams) -> u64 {
    ((params.r() / 10.0).floor() as u64).max(1)
}

pub fn run_divergence(config: &DivergenceConfig) -> BenchResult<DivergenceReport> {
    if config.trials < 1 || config.budgets.is_empty() {
        return Err(config_err("need at least one trial and one budget"));
    }
    let params = lb_params(config.n, config.n_k, config.lb_epsilon)?;
    let tuning = config.profile.tuning();
    // per trial: identity check and one divergence flag per budget
    let per_trial = (0..config.trials)
        .into_par_iter()
        .map(|t| -> BenchResult<(bool, Vec<bool>)> {
            let seed = config.master_seed.wrapping_add(t as u64);
            let pair = draw_hard_pair(&mut ChaCha8Rng::seed_from_u64(seed), config.n, config.n_k, config.lb_epsilon)?;
            let (g1, g2) = pair.graphs();
            let identity = g2.m() - g1.m() == (pair.params.n_ell * pair.params.n_h) as u64;
            let flags = config
                .budgets
                .iter()
                .map(|&b| {
                    coupled_distinguish(
                        |s| estimate_edges_with(s, config.epsilon, &tuning),
                        &pair,
                        seed,
                        Some(b),
                        false,
                    )
                    .diverged
                })
                .collect();
            Ok((identity, flags))
        })
        .collect::<BenchResult<Vec<_>>>()?;
    let trials = config.trials;
    let rows = config
        .budgets
        .iter()
        .enumerate()
        .map(|(i, &budget)| {
            let diverged = per_trial.iter().filter(|(_, f)| f[i]).count();
            let rate = diverged as f64 / trials as f64;
            DivergenceRow {
                budget,
                trials,
                diverged,
                rate,
                se: (rate * (1.0 - rate) / trials as f64).sqrt(),
            }
        })
        .collect();
    Ok(DivergenceReport {
        config: config.clone(),
        params,
        rows,
        identity_failures: per_trial.iter().filter(|(ok, _)| !ok).count(),
    })
}

pub fn write_csv<W: Write>(report: &DivergenceReport, out: W) -> BenchResult<()> {
    let p = &report.params;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in &report.rows {
        w.write_record([
            p.n.to_string(),
            p.n_k.to_string(),
            p.n_h.to_string(),
            p.n_ell.to_string(),
            sig9(p.epsilon),
            sig9(p.r()),
            row.budget.to_string(),
            row.trials.to_string(),
            row.diverged.to_string(),
            sig9(row.rate),
            sig9(row.se),
            sig9(row.budget as f64 / p.r()),
        ])?;
    }
    w.flush()?;
    Ok(())
}
