//! Oracle access with exact query accounting.
//!
//! Algorithms never read a [`Graph`] directly; they hold an [`OracleSession`]
//! and pay one ledger unit per degree, neighbor or independent-set query. An
//! independent-set query costs one unit whatever the size of the set.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryLedger {
    pub deg_count: u64,
    pub neigh_count: u64,
    pub is_count: u64,
    pub total: u64,
}

impl QueryLedger {
    /// Counter-wise difference `self - earlier`.
    pub fn since(&self, earlier: &QueryLedger) -> QueryLedger {
        QueryLedger {
            deg_count: self.deg_count - earlier.deg_count,
            neigh_count: self.neigh_count - earlier.neigh_count,
            is_count: self.is_count - earlier.is_count,
            total: self.total - earlier.total,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NeighborAnswer {
    Vertex(Vertex),
    NoNeighbor,
}

impl NeighborAnswer {
    pub fn vertex(self) -> Option<Vertex> {
        match self {
            NeighborAnswer::Vertex(v) => Some(v),
            NeighborAnswer::NoNeighbor => None,
        }
    }
}

/// One oracle answer, as recorded in a session transcript.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Answer {
    Degree(u64),
    Neighbor(NeighborAnswer),
    Independent(bool),
}

/// Something that can answer the three graph queries. Range checks and
/// accounting are done by the session, so backends may assume valid input.
pub trait OracleBackend {
    fn vertex_count(&self) -> usize;

    fn degree(&mut self, u: Vertex) -> u64;

    fn random_neighbor(&mut self, u: Vertex, rng: &mut ChaCha8Rng) -> NeighborAnswer;

    fn is_independent(&mut self, set: &[Vertex], rng: &mut ChaCha8Rng) -> bool;
}

/// Direct oracle over an in-memory graph.
pub struct GraphOracle<'g> {
    graph: &'g Graph,
    mark: Vec<u32>,
    epoch: u32,
}

impl<'g> GraphOracle<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        GraphOracle {
            graph,
            mark: vec![0; graph.n()],
            epoch: 0,
        }
    }
}

impl OracleBackend for GraphOracle<'_> {
    fn vertex_count(&self) -> usize {
        self.graph.n()
    }

    fn degree(&mut self, u: Vertex) -> u64 {
        self.graph.degree(u) as u64
    }

    fn random_neighbor(&mut self, u: Vertex, rng: &mut ChaCha8Rng) -> NeighborAnswer {
        let list = self.graph.neighbors(u);
        if list.is_empty() {
            NeighborAnswer::NoNeighbor
        } else {
            NeighborAnswer::Vertex(list[rng.gen_range(0..list.len())])
        }
    }

    fn is_independent(&mut self, set: &[Vertex], _rng: &mut ChaCha8Rng) -> bool {
        if set.len() < 2 {
            return true;
        }
        if self.epoch == u32::MAX {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.epoch = 0;
        }
        self.epoch += 1;
        let epoch = self.epoch;
        for &v in set {
            self.mark[v as usize] = epoch;
        }
        set.iter().all(|&v| {
            self.graph
                .neighbors(v)
                .iter()
                .all(|&w| self.mark[w as usize] != epoch)
        })
    }
}

/// A graph (or simulated graph) behind the three oracles, a seeded random
/// source for the algorithm, and a monotone query ledger.
///
/// The algorithm's random stream and the oracle's random stream (used for
/// neighbor draws and by simulated backends) are separate ChaCha streams of
/// the same seed, so equal seeds give equal transcripts.
pub struct OracleSession<'a> {
    backend: Box<dyn OracleBackend + 'a>,
    n: usize,
    rng: ChaCha8Rng,
    oracle_rng: ChaCha8Rng,
    ledger: QueryLedger,
    budget: Option<u64>,
    transcript: Option<Vec<Answer>>,
}

impl<'a> OracleSession<'a> {
    pub fn new(graph: &'a Graph, seed: u64) -> Self {
        Self::with_backend(Box::new(GraphOracle::new(graph)), seed)
    }

    pub fn with_backend(backend: Box<dyn OracleBackend + 'a>, seed: u64) -> Self {
        let n = backend.vertex_count();
        let rng = ChaCha8Rng::seed_from_u64(seed);
        let mut oracle_rng = ChaCha8Rng::seed_from_u64(seed);
        oracle_rng.set_stream(1);
        OracleSession {
            backend,
            n,
            rng,
            oracle_rng,
            ledger: QueryLedger::default(),
            budget: None,
            transcript: None,
        }
    }

    pub fn with_budget(mut self, budget: Option<u64>) -> Self {
        self.budget = budget;
        self
    }

    pub fn set_budget(&mut self, budget: Option<u64>) {
        self.budget = budget;
    }

    pub fn budget(&self) -> Option<u64> {
        self.budget
    }

    /// Starts recording every answer from now on.
    pub fn record_transcript(&mut self) {
        self.transcript.get_or_insert_with(Vec::new);
    }

    pub fn transcript(&self) -> Option<&[Answer]> {
        self.transcript.as_deref()
    }

    pub fn take_transcript(&mut self) -> Option<Vec<Answer>> {
        self.transcript.take()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn ledger(&self) -> QueryLedger {
        self.ledger
    }

    /// The algorithm's random source. Drawing from it is free.
    #[inline]
    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Uniform vertex id; vertex ids are public so this costs no query.
    pub fn uniform_vertex(&mut self) -> Vertex {
        self.rng.gen_range(0..self.n) as Vertex
    }

    #[inline]
    fn check_vertex(&self, u: Vertex) -> Result<()> {
        if (u as usize) < self.n {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                vertex: u as u64,
                n: self.n,
            })
        }
    }

    #[inline]
    fn check_budget(&self) -> Result<()> {
        match self.budget {
            Some(budget) if self.ledger.total >= budget => Err(Error::BudgetExhausted { budget }),
            _ => Ok(()),
        }
    }

    #[inline]
    fn record(&mut self, answer: Answer) {
        if let Some(t) = self.transcript.as_mut() {
            t.push(answer);
        }
    }

    pub fn deg(&mut self, u: Vertex) -> Result<u64> {
        self.check_vertex(u)?;
        self.check_budget()?;
        self.ledger.deg_count += 1;
        self.ledger.total += 1;
        let d = self.backend.degree(u);
        self.record(Answer::Degree(d));
        Ok(d)
    }

    pub fn neigh(&mut self, u: Vertex) -> Result<NeighborAnswer> {
        self.check_vertex(u)?;
        self.check_budget()?;
        self.ledger.neigh_count += 1;
        self.ledger.total += 1;
        let a = self.backend.random_neighbor(u, &mut self.oracle_rng);
        self.record(Answer::Neighbor(a));
        Ok(a)
    }

    pub fn is_independent(&mut self, set: &[Vertex]) -> Result<bool> {
        for &v in set {
            self.check_vertex(v)?;
        }
        self.check_budget()?;
        self.ledger.is_count += 1;
        self.ledger.total += 1;
        let a = self.backend.is_independent(set, &mut self.oracle_rng);
        self.record(Answer::Independent(a));
        Ok(a)
    }
}
