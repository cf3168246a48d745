//! Validation of small advice values.
//!
//! [`small_mbar_guard`] accepts advice `m_bar >= m` with high probability and
//! rejects advice that is far too small, or that is contradicted by a vertex
//! of degree above `m_bar`, while spending `O(sqrt(m_bar) log n)` queries
//! (plus a bounded deterministic phase) whatever the true edge count.

use rand::Rng;

use crate::enumeration::EdgeStream;
use crate::error::{domain, Result};
use crate::estimators::{inclusion_probability, sample_subset};
use crate::graph::Vertex;
use crate::oracle::OracleSession;

/// Default soundness constant of the combined guard.
pub const DEFAULT_C: f64 = 1.0 / 1000.0;

/// Rounds factor of the quantity guard: `t = ceil(96/c * sqrt(m_bar))`.
pub const QUANTITY_ROUNDS_FACTOR: f64 = 96.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RejectReason {
    /// An enumerated edge had an endpoint of degree above the advice.
    HighDegreeWitness,
    /// Too many low-degree edges were found.
    CountOverflow,
    /// The bounded whole-graph enumeration found more than `m_bar` edges.
    DeterministicCase0,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GuardVerdict {
    Accept,
    Reject(RejectReason),
}

impl GuardVerdict {
    pub fn is_accept(self) -> bool {
        self == GuardVerdict::Accept
    }

    pub fn reason(self) -> Option<RejectReason> {
        match self {
            GuardVerdict::Accept => None,
            GuardVerdict::Reject(r) => Some(r),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuardConfig {
    pub c: f64,
    /// Cap on the deterministic whole-graph enumeration.
    pub m_bar_star: f64,
}

impl GuardConfig {
    /// `m_bar* = max(16 (1 + ln(1/c))^14, 1/c)`.
    pub fn default_m_bar_star(c: f64) -> f64 {
        (16.0 * (1.0 + (1.0 / c).ln()).powi(14)).max(1.0 / c)
    }

    pub fn with_c(c: f64) -> Result<Self> {
        if !(c > 0.0 && c <= 1.0) {
            return Err(domain(format!("guard constant must lie in (0, 1], got {c}")));
        }
        Ok(GuardConfig {
            c,
            m_bar_star: Self::default_m_bar_star(c),
        })
    }

    pub fn with_m_bar_star(self, m_bar_star: f64) -> Result<Self> {
        if !(m_bar_star >= 1.0) {
            return Err(domain(format!("m_bar_star must be at least 1, got {m_bar_star}")));
        }
        Ok(GuardConfig { m_bar_star, ..self })
    }
}

impl Default for GuardConfig {
    fn default() -> Self {
        GuardConfig {
            c: DEFAULT_C,
            m_bar_star: Self::default_m_bar_star(DEFAULT_C),
        }
    }
}

fn check_guard_args(c: f64, m_bar: f64) -> Result<()> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(domain(format!("guard constant must lie in (0, 1], got {c}")));
    }
    if !(m_bar >= 1.0 && m_bar.is_finite()) {
        return Err(domain(format!("guard advice must be at least 1, got {m_bar}")));
    }
    Ok(())
}

/// Drains `stream`, checking both endpoint degrees of every edge and
/// counting into `x`. Stops early with a rejection.
fn scan_stream(
    s: &mut OracleSession<'_>,
    stream: &mut EdgeStream,
    m_bar: f64,
    x: &mut u64,
    limit: f64,
) -> Result<Option<RejectReason>> {
    while let Some((u, v)) = stream.next_edge(s)? {
        let du = s.deg(u)? as f64;
        let dv = s.deg(v)? as f64;
        if du > m_bar || dv > m_bar {
            return Ok(Some(RejectReason::HighDegreeWitness));
        }
        *x += 1;
        if *x as f64 >= limit {
            return Ok(Some(RejectReason::CountOverflow));
        }
    }
    Ok(None)
}

/// Number of sampling rounds of the quantity guard.
pub fn quantity_rounds(c: f64, m_bar: f64) -> f64 {
    (QUANTITY_ROUNDS_FACTOR / c * m_bar.sqrt()).ceil()
}

/// Repeated sparse sampling with a cap on the total number of edges seen.
pub fn guard_quantity(s: &mut OracleSession<'_>, c: f64, m_bar: f64) -> Result<GuardVerdict> {
    check_guard_args(c, m_bar)?;
    let t = quantity_rounds(c, m_bar);
    let limit = 1.25 * t;
    let p = inclusion_probability(m_bar);
    let n = s.n();
    let mut x = 0u64;
    for _ in 0..t as u64 {
        let set = sample_subset(s.rng(), n, p);
        let mut stream = EdgeStream::new(set);
        if let Some(r) = scan_stream(s, &mut stream, m_bar, &mut x, limit)? {
            return Ok(GuardVerdict::Reject(r));
        }
    }
    Ok(GuardVerdict::Accept)
}

/// Random partition of the vertices into `ceil(sqrt(m_bar))` buckets, each
/// scanned in turn, so every vertex is examined exactly once.
pub fn guard_quality(s: &mut OracleSession<'_>, c: f64, m_bar: f64) -> Result<GuardVerdict> {
    check_guard_args(c, m_bar)?;
    let t = m_bar.sqrt().ceil() as usize;
    let limit = 2.0 * t as f64 / c;
    let n = s.n();
    let bucket_of: Vec<u32> = {
        let rng = s.rng();
        (0..n).map(|_| rng.gen_range(0..t as u32)).collect()
    };
    // counting sort keeps each bucket in increasing vertex order
    let mut start = vec![0usize; t + 1];
    for &b in &bucket_of {
        start[b as usize + 1] += 1;
    }
    for i in 0..t {
        start[i + 1] += start[i];
    }
    let mut fill = start.clone();
    let mut order = vec![0 as Vertex; n];
    for (v, &b) in bucket_of.iter().enumerate() {
        order[fill[b as usize]] = v as Vertex;
        fill[b as usize] += 1;
    }
    let mut x = 0u64;
    for i in 0..t {
        let set = order[start[i]..start[i + 1]].to_vec();
        let mut stream = EdgeStream::new(set);
        if let Some(r) = scan_stream(s, &mut stream, m_bar, &mut x, limit)? {
            return Ok(GuardVerdict::Reject(r));
        }
    }
    Ok(GuardVerdict::Accept)
}

/// Bounded whole-graph enumeration, then the quantity guard, then the
/// quality guard; rejects as soon as any stage rejects.
pub fn small_mbar_guard(
    s: &mut OracleSession<'_>,
    m_bar: f64,
    config: &GuardConfig,
) -> Result<GuardVerdict> {
    check_guard_args(config.c, m_bar)?;
    let n = s.n() as Vertex;
    let mut stream = EdgeStream::new((0..n).collect());
    let mut x = 0u64;
    while x as f64 <= config.m_bar_star {
        if stream.next_edge(s)?.is_none() {
            break;
        }
        x += 1;
    }
    drop(stream);
    if x as f64 > m_bar {
        return Ok(GuardVerdict::Reject(RejectReason::DeterministicCase0));
    }
    let v = guard_quantity(s, config.c, m_bar)?;
    if !v.is_accept() {
        return Ok(v);
    }
    guard_quality(s, config.c, m_bar)
}
