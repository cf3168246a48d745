//! The full estimator: advice-level composition, the two advice sequences,
//! bounded prefix runs and iterative deepening.
//!
//! Level `ell` tries a large advice `n^2 / 2^ell` (decreasing) and a small
//! advice `2^(ell/2)` (increasing). An advice value is accepted only if the
//! estimate it produces lands in a window that is consistent with it. Rounds
//! run the prefixes `0..=0`, `0..=1`, `0..=2`, ... until one accepts.
//!
//! All constants live in [`Tuning`]. [`Tuning::standard`] uses the constants
//! for which the accuracy guarantee is proven; they make a single advice
//! call cost on the order of `10^11` queries at `eps = 1/15`, so
//! [`Tuning::desk`] scales them down for runs that should finish.

use crate::error::{domain, Result};
use crate::estimators::{
    estimate_l1h_advice_with, estimate_ll_advice_with, L1H_SAMPLE_FACTOR, LL_SAMPLE_FACTOR,
};
use crate::graph::{Graph, Vertex};
use crate::guards::{small_mbar_guard, GuardConfig};
use crate::oracle::{OracleSession, QueryLedger};

/// Largest accuracy parameter the deepening loop works with.
pub const MAX_EPSILON: f64 = 1.0 / 15.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimateOutcome {
    Value(f64),
    Reject,
    Infinite,
}

impl EstimateOutcome {
    pub fn value(self) -> Option<f64> {
        match self {
            EstimateOutcome::Value(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_reject(self) -> bool {
        self == EstimateOutcome::Reject
    }
}

/// Constants of the estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tuning {
    /// Repetition factor of the low-low estimator.
    pub ll_factor: f64,
    /// Sample factor of the very-low/high estimator.
    pub l1h_factor: f64,
    /// The large-advice branch runs with `eps / high_eps_divisor`.
    pub high_eps_divisor: f64,
    /// The small-advice branch runs with `eps / low_eps_divisor`.
    pub low_eps_divisor: f64,
    /// After the guard accepts, the small-advice estimate uses a further
    /// `eps / low_inner_eps_divisor`.
    pub low_inner_eps_divisor: f64,
    pub guard: GuardConfig,
}

impl Tuning {
    pub fn standard() -> Self {
        Tuning {
            ll_factor: LL_SAMPLE_FACTOR,
            l1h_factor: L1H_SAMPLE_FACTOR,
            high_eps_divisor: 1000.0,
            low_eps_divisor: 10.0,
            low_inner_eps_divisor: 10.0,
            guard: GuardConfig::default(),
        }
    }

    /// Scaled-down constants for desk-scale experiments. Accuracy is measured
    /// rather than proven for this profile.
    pub fn desk() -> Self {
        Tuning {
            ll_factor: 2.0,
            l1h_factor: 2.0,
            high_eps_divisor: 1.0,
            low_eps_divisor: 1.0,
            low_inner_eps_divisor: 1.0,
            guard: GuardConfig {
                c: 0.25,
                m_bar_star: 64.0,
            },
        }
    }

    pub fn with_m_bar_star(mut self, m_bar_star: f64) -> Result<Self> {
        self.guard = self.guard.with_m_bar_star(m_bar_star)?;
        Ok(self)
    }
}

impl Default for Tuning {
    fn default() -> Self {
        Tuning::standard()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelParams {
    pub ell: u32,
    pub m_bar_big: f64,
    pub m_bar_small: f64,
}

impl LevelParams {
    pub fn new(n: usize, ell: u32) -> Self {
        let n = n as f64;
        LevelParams {
            ell,
            // scaling by a power of two is exact
            m_bar_big: n * n * (-(ell as f64)).exp2(),
            m_bar_small: (ell as f64 / 2.0).exp2(),
        }
    }
}

/// Reference levels of a graph with `m >= 1` edges on `n` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelDiagnostics {
    /// The level with `sqrt(2) m <= n^2 / 2^ell < sqrt(8) m`.
    pub ell_big: i64,
    /// The level with `sqrt(2) m <= 2^(ell/2) < 2 m`.
    pub ell_small: i64,
    pub ell_0: i64,
}

pub fn level_diagnostics(n: usize, m: u64) -> Option<LevelDiagnostics> {
    if m == 0 {
        return None;
    }
    let (n, m) = (n as f64, m as f64);
    let lo = 2f64.sqrt() * m;
    let big = |l: i64| n * n * (-(l as f64)).exp2();
    let mut ell_big = (n * n / lo).log2().floor() as i64;
    while big(ell_big) < lo {
        ell_big -= 1;
    }
    while big(ell_big + 1) >= lo {
        ell_big += 1;
    }
    let small = |l: i64| (l as f64 / 2.0).exp2();
    let mut ell_small = (2.0 * lo.log2()).ceil() as i64;
    while small(ell_small) < lo {
        ell_small += 1;
    }
    while small(ell_small - 1) >= lo {
        ell_small -= 1;
    }
    Some(LevelDiagnostics {
        ell_big,
        ell_small,
        ell_0: ell_big.min(ell_small),
    })
}

/// Estimate for advice that is assumed not to be far below `m`.
pub fn estimate_edges_advice_high(
    s: &mut OracleSession<'_>,
    epsilon: f64,
    m_bar: f64,
) -> Result<f64> {
    estimate_edges_advice_high_with(s, epsilon, m_bar, &Tuning::standard())
}

pub fn estimate_edges_advice_high_with(
    s: &mut OracleSession<'_>,
    epsilon: f64,
    m_bar: f64,
    tuning: &Tuning,
) -> Result<f64> {
    let n = s.n() as f64;
    if m_bar >= 0.25 * epsilon * n * n {
        let k = (n - 1.0).max(0.0);
        return estimate_ll_advice_with(s, epsilon, m_bar, k, tuning.ll_factor);
    }
    let k = (2.0 / epsilon).sqrt() * n.sqrt() * m_bar.powf(0.25);
    let ll = estimate_ll_advice_with(s, epsilon, m_bar, k, tuning.ll_factor)?;
    let l1h = estimate_l1h_advice_with(s, epsilon, m_bar, k, tuning.l1h_factor)?;
    Ok(ll + l1h)
}

/// Estimate for small advice, guarded so that advice far below `m` returns
/// [`EstimateOutcome::Infinite`] instead of an expensive run.
pub fn estimate_edges_advice_low(
    s: &mut OracleSession<'_>,
    epsilon: f64,
    m_bar: f64,
    guard: &GuardConfig,
) -> Result<EstimateOutcome> {
    let tuning = Tuning {
        guard: *guard,
        ..Tuning::standard()
    };
    estimate_edges_advice_low_with(s, epsilon, m_bar, &tuning)
}

pub fn estimate_edges_advice_low_with(
    s: &mut OracleSession<'_>,
    epsilon: f64,
    m_bar: f64,
    tuning: &Tuning,
) -> Result<EstimateOutcome> {
    let n = s.n() as f64;
    let k = m_bar.min(n - 1.0).max(0.0);
    if small_mbar_guard(s, m_bar, &tuning.guard)?.is_accept() {
        let eps = epsilon / tuning.low_inner_eps_divisor;
        let v = estimate_ll_advice_with(s, eps, m_bar, k, tuning.ll_factor)?;
        Ok(EstimateOutcome::Value(v))
    } else {
        Ok(EstimateOutcome::Infinite)
    }
}

/// Which advice sequence produced an accepted value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Big,
    Small,
}

fn in_big_window(x: f64, m_bar_big: f64) -> bool {
    4.0 * x >= m_bar_big && 5.0 * x <= 4.0 * m_bar_big
}

fn in_small_window(y: f64, m_bar_small: f64) -> bool {
    y <= m_bar_small * (-0.25f64).exp2()
}

fn iteration_detail(
    s: &mut OracleSession<'_>,
    epsilon: f64,
    ell: u32,
    tuning: &Tuning,
) -> Result<Option<(Branch, f64)>> {
    let lp = LevelParams::new(s.n(), ell);
    let x = estimate_edges_advice_high_with(
        s,
        epsilon / tuning.high_eps_divisor,
        lp.m_bar_big,
        tuning,
    )?;
    if in_big_window(x, lp.m_bar_big) {
        return Ok(Some((Branch::Big, x)));
    }
    let y = estimate_edges_advice_low_with(
        s,
        epsilon / tuning.low_eps_divisor,
        lp.m_bar_small,
        tuning,
    )?;
    if let EstimateOutcome::Value(y) = y {
        if in_small_window(y, lp.m_bar_small) {
            return Ok(Some((Branch::Small, y)));
        }
    }
    Ok(None)
}

fn outcome(r: Option<(Branch, f64)>) -> EstimateOutcome {
    r.map_or(EstimateOutcome::Reject, |(_, v)| EstimateOutcome::Value(v))
}

/// One level: the large advice first, then the small advice.
pub fn estimate_edges_iteration(
    s: &mut OracleSession<'_>,
    epsilon: f64,
    ell: u32,
) -> Result<EstimateOutcome> {
    estimate_edges_iteration_with(s, epsilon, ell, &Tuning::standard())
}

pub fn estimate_edges_iteration_with(
    s: &mut OracleSession<'_>,
    epsilon: f64,
    ell: u32,
    tuning: &Tuning,
) -> Result<EstimateOutcome> {
    iteration_detail(s, epsilon, ell, tuning).map(outcome)
}

/// First accepted level among `0..=ell_max`.
pub fn estimate_edges_bounded(
    s: &mut OracleSession<'_>,
    epsilon: f64,
    ell_max: u32,
) -> Result<EstimateOutcome> {
    estimate_edges_bounded_with(s, epsilon, ell_max, &Tuning::standard())
}

pub fn estimate_edges_bounded_with(
    s: &mut OracleSession<'_>,
    epsilon: f64,
    ell_max: u32,
    tuning: &Tuning,
) -> Result<EstimateOutcome> {
    bounded_detail(s, epsilon, ell_max, tuning).map(|r| outcome(r.map(|(_, b, v)| (b, v))))
}

fn bounded_detail(
    s: &mut OracleSession<'_>,
    epsilon: f64,
    ell_max: u32,
    tuning: &Tuning,
) -> Result<Option<(u32, Branch, f64)>> {
    for ell in 0..=ell_max {
        if let Some((b, v)) = iteration_detail(s, epsilon, ell, tuning)? {
            return Ok(Some((ell, b, v)));
        }
    }
    Ok(None)
}

/// How the top-level estimate was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// A single independent-set query showed there are no edges.
    Empty,
    /// Few vertices: all degrees were read.
    Exact,
    /// Iterative deepening accepted at `ell` from the given sequence.
    Deepening { ell: u32, branch: Branch },
}

/// One round of iterative deepening.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeepeningRound {
    pub ell_max: u32,
    pub accepted: bool,
    /// Ledger total at the end of the round.
    pub ledger_total: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub estimate: f64,
    /// The accuracy parameter after clamping.
    pub epsilon: f64,
    pub route: Route,
    pub ledger: QueryLedger,
    pub rounds: Vec<DeepeningRound>,
}

fn check_epsilon(epsilon: f64) -> Result<f64> {
    if epsilon > 0.0 && epsilon <= 1.0 {
        Ok(epsilon.min(MAX_EPSILON))
    } else {
        Err(domain(format!("epsilon must lie in (0, 1], got {epsilon}")))
    }
}

/// `(1 +- eps)`-estimate of the number of edges with the standard constants.
pub fn estimate_edges(s: &mut OracleSession<'_>, epsilon: f64) -> Result<f64> {
    estimate_edges_with(s, epsilon, &Tuning::standard())
}

pub fn estimate_edges_with(s: &mut OracleSession<'_>, epsilon: f64, tuning: &Tuning) -> Result<f64> {
    estimate_edges_report(s, epsilon, tuning).map(|r| r.estimate)
}

/// The estimate together with the ledger and the deepening trace.
pub fn estimate_edges_report(
    s: &mut OracleSession<'_>,
    epsilon: f64,
    tuning: &Tuning,
) -> Result<EstimateReport> {
    let eps = check_epsilon(epsilon)?;
    let n = s.n();
    let all: Vec<Vertex> = (0..n as Vertex).collect();
    let report = |s: &OracleSession<'_>, estimate, route, rounds| EstimateReport {
        estimate,
        epsilon: eps,
        route,
        ledger: s.ledger(),
        rounds,
    };
    if s.is_independent(&all)? {
        return Ok(report(s, 0.0, Route::Empty, Vec::new()));
    }
    drop(all);
    if (n as f64) < 2.0 / (eps * eps) {
        let mut sum = 0u64;
        for u in 0..n as Vertex {
            sum += s.deg(u)?;
        }
        return Ok(report(s, sum as f64 / 2.0, Route::Exact, Vec::new()));
    }
    let mut rounds = Vec::new();
    for ell_max in 0.. {
        let r = bounded_detail(s, eps, ell_max, tuning)?;
        rounds.push(DeepeningRound {
            ell_max,
            accepted: r.is_some(),
            ledger_total: s.ledger().total,
        });
        if let Some((ell, branch, v)) = r {
            return Ok(report(s, v, Route::Deepening { ell, branch }, rounds));
        }
    }
    unreachable!("the deepening loop only exits by returning")
}

/// Runs the estimator on `graph` in a fresh session seeded with `seed`.
pub fn estimate_edges_on(graph: &Graph, epsilon: f64, seed: u64) -> Result<f64> {
    let mut s = OracleSession::new(graph, seed);
    estimate_edges(&mut s, epsilon)
}

/// Like [`estimate_edges_on`], with explicit constants and an optional budget.
pub fn estimate_edges_report_on(
    graph: &Graph,
    epsilon: f64,
    seed: u64,
    tuning: &Tuning,
    budget: Option<u64>,
) -> Result<EstimateReport> {
    let mut s = OracleSession::new(graph, seed).with_budget(budget);
    estimate_edges_report(&mut s, epsilon, tuning)
}
