//! Graph families used by the experiments.

use std::path::PathBuf;

use edgecount::lowerbound::{draw_hard_pair, HardInstancePair};
use edgecount::{Graph, Vertex};
use rand::seq::index::sample;
use rand_chacha::ChaCha8Rng;

use crate::error::{BenchError, BenchResult};

/// Star sizes used when a star forest is requested without explicit degrees.
pub const DEFAULT_STAR_DEGREES: [usize; 14] = [200, 100, 50, 50, 25, 25, 10, 10, 10, 10, 5, 5, 5, 5];

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `K_t` plus isolated vertices.
    Clique { t: usize },
    /// Uniform simple graph with exactly `m` edges.
    Gnm { m: u64 },
    /// Disjoint stars with the given leaf counts, then isolated vertices.
    StarForest { degrees: Vec<usize> },
    /// Clique on the first `n_k` vertices plus a complete bipartite graph
    /// between the next `n_ell` and the `n_h` after them.
    CliqueBiclique { n_k: usize, n_ell: usize, n_h: usize },
    /// One side of a random hard pair; `second` picks the denser graph.
    HardPair { n_k: usize, epsilon: f64, second: bool },
    File { path: PathBuf },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Clique { .. } => "clique",
            Family::Gnm { .. } => "gnm",
            Family::StarForest { .. } => "star_forest",
            Family::CliqueBiclique { .. } => "clique_biclique",
            Family::HardPair { .. } => "hard_pair",
            Family::File { .. } => "file",
        }
    }
}

fn bad(msg: impl Into<String>) -> BenchError {
    BenchError::Core(edgecount::Error::Domain(msg.into()))
}

fn check_fits(n: usize, used: usize, what: &str) -> BenchResult<()> {
    if used > n {
        return Err(bad(format!("{what} needs {used} vertices but n = {n}")));
    }
    Ok(())
}

pub fn clique(t: usize, n: usize) -> BenchResult<Graph> {
    check_fits(n, t, "clique")?;
    let t = t as Vertex;
    let edges = (0..t).flat_map(|u| (u + 1..t).map(move |v| (u, v)));
    Ok(Graph::new(n, edges)?)
}

/// Position `p` in the lexicographic order of pairs `u < v` by `v`, then `u`.
fn pair_at(p: u64) -> (Vertex, Vertex) {
    let mut v = ((1.0 + (1.0 + 8.0 * p as f64).sqrt()) / 2.0) as u64;
    while v * (v - 1) / 2 > p {
        v -= 1;
    }
    while (v + 1) * v / 2 <= p {
        v += 1;
    }
    ((p - v * (v - 1) / 2) as Vertex, v as Vertex)
}

pub fn gnm(n: usize, m: u64, rng: &mut ChaCha8Rng) -> BenchResult<Graph> {
    let pairs = n as u64 * (n as u64).saturating_sub(1) / 2;
    if m > pairs {
        return Err(bad(format!("gnm: m = {m} exceeds C({n}, 2) = {pairs}")));
    }
    let picked = sample(rng, pairs as usize, m as usize);
    Ok(Graph::new(n, picked.iter().map(|p| pair_at(p as u64)))?)
}

pub fn star_forest(n: usize, degrees: &[usize]) -> BenchResult<Graph> {
    let used: usize = degrees.iter().map(|d| d + 1).sum();
    check_fits(n, used, "star forest")?;
    let mut edges = Vec::with_capacity(used);
    let mut center = 0 as Vertex;
    for &d in degrees {
        edges.extend((1..=d as Vertex).map(|j| (center, center + j)));
        center += d as Vertex + 1;
    }
    Ok(Graph::new(n, edges)?)
}

pub fn clique_biclique(n: usize, n_k: usize, n_ell: usize, n_h: usize) -> BenchResult<Graph> {
    check_fits(n, n_k + n_ell + n_h, "clique_biclique")?;
    let (k, l) = (n_k as Vertex, n_ell as Vertex);
    let h_end = (n_k + n_ell + n_h) as Vertex;
    let clique = (0..k).flat_map(|u| (u + 1..k).map(move |v| (u, v)));
    let biclique = (k..k + l).flat_map(|u| (k + l..h_end).map(move |v| (u, v)));
    Ok(Graph::new(n, clique.chain(biclique))?)
}

pub fn hard_pair(n: usize, n_k: usize, epsilon: f64, rng: &mut ChaCha8Rng) -> BenchResult<HardInstancePair> {
    Ok(draw_hard_pair(rng, n, n_k, epsilon)?)
}

/// Builds a member of `family` on `n` vertices. File graphs ignore `n`.
pub fn gen_family(family: &Family, n: usize, rng: &mut ChaCha8Rng) -> BenchResult<Graph> {
    match family {
        Family::Clique { t } => clique(*t, n),
        Family::Gnm { m } => gnm(n, *m, rng),
        Family::StarForest { degrees } => star_forest(n, degrees),
        Family::CliqueBiclique { n_k, n_ell, n_h } => clique_biclique(n, *n_k, *n_ell, *n_h),
        Family::HardPair { n_k, epsilon, second } => {
            let (g1, g2) = hard_pair(n, *n_k, *epsilon, rng)?.graphs();
            Ok(if *second { g2 } else { g1 })
        }
        Family::File { path } => {
            let text = std::fs::read_to_string(path)?;
            Ok(Graph::parse_text(&text)?)
        }
    }
}

/// Exact edge count from the adjacency lists.
pub fn brute_count(graph: &Graph) -> u64 {
    let degree_sum: u64 = (0..graph.n() as Vertex).map(|u| graph.degree(u) as u64).sum();
    degree_sum / 2
}
