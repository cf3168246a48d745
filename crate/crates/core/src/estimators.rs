//! Degree thresholds and the advice-based partial estimators.
//!
//! Given an advice value `m_bar`, vertices split into very-low (`L1`,
//! degree at most `k'`), low (`L2`, up to `k`) and high (`H`) degree. The
//! sparse sampler estimates the number of low-low edges from a random vertex
//! subset; the neighbor sampler estimates the very-low to high edges.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::enumeration::EdgeStream;
use crate::error::{domain, Result};
use crate::graph::{Graph, Vertex};
use crate::oracle::OracleSession;

/// Repetition factor of the low-low estimator: `q = ceil(600/eps^2 * max(1, k/sqrt(m_bar)))`.
pub const LL_SAMPLE_FACTOR: f64 = 600.0;

/// Repetition factor of the very-low/high estimator: `t = ceil(200 n k' / (eps^2 m_bar))`.
pub const L1H_SAMPLE_FACTOR: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub k: f64,
    pub k_prime: f64,
    pub epsilon: f64,
    pub m_bar: f64,
    pub n: usize,
}

impl Thresholds {
    /// Thresholds with an explicit `k`; `k' = min(k, m_bar / (eps k))`.
    pub fn with_k(n: usize, epsilon: f64, m_bar: f64, k: f64) -> Result<Self> {
        check_eps(epsilon)?;
        check_mbar(m_bar)?;
        if !(k >= 0.0) {
            return Err(domain(format!("threshold k must be nonnegative, got {k}")));
        }
        let k_prime = if k > 0.0 {
            k.min(m_bar / (epsilon * k))
        } else {
            0.0
        };
        Ok(Thresholds {
            k,
            k_prime,
            epsilon,
            m_bar,
            n,
        })
    }
}

fn check_eps(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon <= 1.0 {
        Ok(())
    } else {
        Err(domain(format!("epsilon must lie in (0, 1], got {epsilon}")))
    }
}

fn check_mbar(m_bar: f64) -> Result<()> {
    if m_bar > 0.0 && m_bar.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("advice must be positive, got {m_bar}")))
    }
}

/// Default thresholds for advice `m_bar`: `k = sqrt(2 n sqrt(m_bar) / eps)`.
pub fn threshold_for(n: usize, epsilon: f64, m_bar: f64) -> Result<Thresholds> {
    check_eps(epsilon)?;
    check_mbar(m_bar)?;
    let k = (2.0 * n as f64 * m_bar.sqrt() / epsilon).sqrt();
    Thresholds::with_k(n, epsilon, m_bar, k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexClass {
    L1,
    L2,
    H,
}

impl VertexClass {
    pub fn is_low(self) -> bool {
        self != VertexClass::H
    }
}

pub fn classify(deg: u64, th: &Thresholds) -> VertexClass {
    let d = deg as f64;
    if d <= th.k_prime {
        VertexClass::L1
    } else if d <= th.k {
        VertexClass::L2
    } else {
        VertexClass::H
    }
}

/// Exact edge counts per class pair, read straight from the graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EdgeClassCounts {
    pub ll: u64,
    pub l1h: u64,
    pub l2h: u64,
    pub hh: u64,
}

pub fn edge_class_counts_oracle(graph: &Graph, th: &Thresholds) -> EdgeClassCounts {
    let class = |u: Vertex| classify(graph.degree(u) as u64, th);
    let mut c = EdgeClassCounts::default();
    for (u, v) in graph.edges() {
        match (class(u), class(v)) {
            (VertexClass::H, VertexClass::H) => c.hh += 1,
            (VertexClass::L1, VertexClass::H) | (VertexClass::H, VertexClass::L1) => c.l1h += 1,
            (VertexClass::L2, VertexClass::H) | (VertexClass::H, VertexClass::L2) => c.l2h += 1,
            _ => c.ll += 1,
        }
    }
    c
}

/// Sorted random subset of `0..n`, each vertex included independently with
/// probability `p`. Sparse draws skip ahead geometrically.
pub fn sample_subset(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Vec<Vertex> {
    if p >= 1.0 {
        return (0..n as Vertex).collect();
    }
    if p <= 0.0 || n == 0 {
        return Vec::new();
    }
    if p >= 0.25 {
        return (0..n as Vertex).filter(|_| rng.gen_bool(p)).collect();
    }
    let mut out = Vec::with_capacity((n as f64 * p * 1.5) as usize + 4);
    let log_q = (1.0 - p).ln();
    let mut i = 0usize;
    loop {
        // number of skipped vertices before the next inclusion
        let u: f64 = 1.0 - rng.gen::<f64>();
        let skip = (u.ln() / log_q).floor();
        if skip >= (n - i) as f64 {
            break;
        }
        i += skip as usize;
        out.push(i as Vertex);
        i += 1;
        if i >= n {
            break;
        }
    }
    out
}

/// Inclusion probability `min(1, 1/sqrt(m_bar))` of the sparse sampler.
pub fn inclusion_probability(m_bar: f64) -> f64 {
    (1.0 / m_bar.sqrt()).min(1.0)
}

/// One run of the sparse low-low sampler: draw a subset, enumerate its
/// edges and count those whose endpoints both have degree at most `k`.
/// The expectation is `m_LL / m_bar` when `m_bar >= 1`.
pub fn sample_ll_sparse(s: &mut OracleSession<'_>, th: &Thresholds) -> Result<u64> {
    let n = s.n();
    let set = sample_subset(s.rng(), n, inclusion_probability(th.m_bar));
    let mut stream = EdgeStream::new(set);
    let mut x = 0;
    while let Some((u, v)) = stream.next_edge(s)? {
        let du = s.deg(u)? as f64;
        let dv = s.deg(v)? as f64;
        if du <= th.k && dv <= th.k {
            x += 1;
        }
    }
    Ok(x)
}

/// Averaged low-low estimate with the default repetition factor.
pub fn estimate_ll_advice(s: &mut OracleSession<'_>, epsilon: f64, m_bar: f64, k: f64) -> Result<f64> {
    estimate_ll_advice_with(s, epsilon, m_bar, k, LL_SAMPLE_FACTOR)
}

/// Number of sampler runs for the low-low estimate.
pub fn ll_repetitions(epsilon: f64, m_bar: f64, k: f64, factor: f64) -> f64 {
    (factor / (epsilon * epsilon) * (k / m_bar.sqrt()).max(1.0)).ceil()
}

pub fn estimate_ll_advice_with(
    s: &mut OracleSession<'_>,
    epsilon: f64,
    m_bar: f64,
    k: f64,
    factor: f64,
) -> Result<f64> {
    let th = Thresholds::with_k(s.n(), epsilon, m_bar, k)?;
    let q = ll_repetitions(epsilon, m_bar, k, factor).max(1.0);
    let runs = q as u64;
    let mut total = 0u64;
    for _ in 0..runs {
        total += sample_ll_sparse(s, &th)?;
    }
    Ok(m_bar * total as f64 / q)
}

/// Number of neighbor samples for the very-low/high estimate.
pub fn l1h_iterations(n: usize, epsilon: f64, m_bar: f64, k_prime: f64, factor: f64) -> f64 {
    (factor * n as f64 * k_prime / (epsilon * epsilon * m_bar)).ceil()
}

/// Unbiased estimate of the number of edges between very-low and high
/// vertices, with the default sample factor.
pub fn estimate_l1h_advice(s: &mut OracleSession<'_>, epsilon: f64, m_bar: f64, k: f64) -> Result<f64> {
    estimate_l1h_advice_with(s, epsilon, m_bar, k, L1H_SAMPLE_FACTOR)
}

pub fn estimate_l1h_advice_with(
    s: &mut OracleSession<'_>,
    epsilon: f64,
    m_bar: f64,
    k: f64,
    factor: f64,
) -> Result<f64> {
    if !(k > 0.0) {
        return Err(domain(format!("threshold k must be positive, got {k}")));
    }
    let th = Thresholds::with_k(s.n(), epsilon, m_bar, k)?;
    let n = s.n();
    if n == 0 {
        return Ok(0.0);
    }
    let t = l1h_iterations(n, epsilon, m_bar, th.k_prime, factor).max(1.0);
    let mut counter = 0u64;
    for _ in 0..t as u64 {
        let u = s.uniform_vertex();
        let v = s.neigh(u)?;
        let du = s.deg(u)?;
        let Some(v) = v.vertex() else { continue };
        let dv = s.deg(v)?;
        if du as f64 <= th.k_prime && dv as f64 > th.k {
            counter += du;
        }
    }
    Ok(n as f64 / t * counter as f64)
}
