//! Edge extraction and enumeration using independent-set queries only.
//!
//! [`enumerate_edges`] returns a lazy [`EdgeStream`] that lists the edges
//! induced on a vertex set in three phases:
//!
//! 1. **Cover**: repeatedly extract an edge from the remaining set and delete
//!    both endpoints, until the remainder is independent. The extracted edges
//!    are disjoint and their endpoints `V1` cover every induced edge.
//! 2. **Coloring**: greedily place each vertex of `V1` in the first
//!    independent part that stays independent with it. Each rejection is
//!    turned into an edge incident to the vertex.
//! 3. **Cross**: with the parts `A_1..A_{k-1}` and `A_k = A \ V1`, run the
//!    bipartite splitter on every pair `(i, j)`, ordered by `j` then `i`.
//!
//! Every edge is discovered at most once per phase and reported the first
//! time it is seen, so the `t`-th distinct edge arrives after
//! `O(1 + t log n)` queries.
//!
//! Query constants for this implementation (checked by the test suite):
//! extraction costs at most `1 + 2 * ceil(log2 |A|)` queries.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use crate::error::Result;
use crate::graph::{normalize, Edge, Vertex};
use crate::oracle::OracleSession;

/// Worst-case extraction cost is at most `EXTRACT_COST_FACTOR * (1 + ceil(log2 |A|))`.
pub const EXTRACT_COST_FACTOR: u64 = 2;

fn query_union(
    s: &mut OracleSession<'_>,
    scratch: &mut Vec<Vertex>,
    a: &[Vertex],
    b: &[Vertex],
) -> Result<bool> {
    scratch.clear();
    scratch.extend_from_slice(a);
    scratch.extend_from_slice(b);
    s.is_independent(scratch)
}

/// Finds the first vertex of `candidates` adjacent to `u`, given that
/// `candidates` is independent and `candidates + {u}` is not.
fn neighbor_in_known(
    s: &mut OracleSession<'_>,
    scratch: &mut Vec<Vertex>,
    u: Vertex,
    candidates: &[Vertex],
) -> Result<Vertex> {
    // prefix of length `lo` plus u is independent, of length `hi` is not
    let (mut lo, mut hi) = (0usize, candidates.len());
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if query_union(s, scratch, &candidates[..mid], &[u])? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(candidates[hi - 1])
}

/// Extracts an edge from a set already known to be non-independent.
fn extract_known(
    s: &mut OracleSession<'_>,
    scratch: &mut Vec<Vertex>,
    set: &[Vertex],
) -> Result<Edge> {
    // shortest non-independent prefix; its last vertex is an endpoint
    let (mut lo, mut hi) = (1usize, set.len());
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        scratch.clear();
        scratch.extend_from_slice(&set[..mid]);
        if s.is_independent(scratch)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u = set[hi - 1];
    let v = neighbor_in_known(s, scratch, u, &set[..hi - 1])?;
    Ok(normalize(u, v))
}

/// Returns an edge with both endpoints in `set`, or `None` when `set` is
/// independent. Uses at most `1 + 2 * ceil(log2 |set|)` queries.
pub fn extract_edge(s: &mut OracleSession<'_>, set: &[Vertex]) -> Result<Option<Edge>> {
    if s.is_independent(set)? {
        return Ok(None);
    }
    let mut scratch = Vec::with_capacity(set.len());
    extract_known(s, &mut scratch, set).map(Some)
}

#[derive(Debug, Clone, Copy)]
struct SetPair {
    a_lo: u32,
    a_hi: u32,
    b_lo: u32,
    b_hi: u32,
}

/// Lazy splitter for the edges between two disjoint independent sets.
///
/// Pending pairs are contiguous ranges of the two input sets, and every
/// pair on the stack has failed an independent-set query.
#[derive(Debug, Default)]
struct BipartiteCursor {
    started: bool,
    stack: Vec<SetPair>,
}

impl BipartiteCursor {
    fn step(
        &mut self,
        s: &mut OracleSession<'_>,
        scratch: &mut Vec<Vertex>,
        a: &[Vertex],
        b: &[Vertex],
    ) -> Result<Option<Edge>> {
        if !self.started {
            self.started = true;
            if query_union(s, scratch, a, b)? {
                return Ok(None);
            }
            self.stack.push(SetPair {
                a_lo: 0,
                a_hi: a.len() as u32,
                b_lo: 0,
                b_hi: b.len() as u32,
            });
        }
        while let Some(p) = self.stack.pop() {
            let a_len = p.a_hi - p.a_lo;
            let b_len = p.b_hi - p.b_lo;
            if a_len >= 2 {
                let mid = p.a_lo + a_len / 2;
                let first = SetPair { a_hi: mid, ..p };
                let second = SetPair { a_lo: mid, ..p };
                self.split(s, scratch, a, b, first, second)?;
            } else if b_len >= 2 {
                let mid = p.b_lo + b_len / 2;
                let first = SetPair { b_hi: mid, ..p };
                let second = SetPair { b_lo: mid, ..p };
                self.split(s, scratch, a, b, first, second)?;
            } else {
                return Ok(Some(normalize(a[p.a_lo as usize], b[p.b_lo as usize])));
            }
        }
        Ok(None)
    }

    fn split(
        &mut self,
        s: &mut OracleSession<'_>,
        scratch: &mut Vec<Vertex>,
        a: &[Vertex],
        b: &[Vertex],
        first: SetPair,
        second: SetPair,
    ) -> Result<()> {
        let slice = |p: &SetPair| {
            (
                &a[p.a_lo as usize..p.a_hi as usize],
                &b[p.b_lo as usize..p.b_hi as usize],
            )
        };
        let (fa, fb) = slice(&first);
        let first_dependent = !query_union(s, scratch, fa, fb)?;
        let (sa, sb) = slice(&second);
        let second_dependent = !query_union(s, scratch, sa, sb)?;
        // LIFO: push the second half first so the first half is processed first
        if second_dependent {
            self.stack.push(second);
        }
        if first_dependent {
            self.stack.push(first);
        }
        Ok(())
    }
}

/// Reports every edge between the disjoint independent sets `a` and `b`,
/// each once, and returns how many there were. Independence of `a` and `b`
/// is the caller's responsibility. No cross edges costs exactly one query.
pub fn enumerate_bipartite<F>(
    s: &mut OracleSession<'_>,
    a: &[Vertex],
    b: &[Vertex],
    mut sink: F,
) -> Result<u64>
where
    F: FnMut(Edge),
{
    let mut cursor = BipartiteCursor::default();
    let mut scratch = Vec::with_capacity(a.len() + b.len());
    let mut count = 0;
    while let Some(e) = cursor.step(s, &mut scratch, a, b)? {
        sink(e);
        count += 1;
    }
    Ok(count)
}

/// Places `u` into the first part that stays independent with it, or opens a
/// new part. Every rejecting part yields one edge from `u` into that part.
fn color_vertex<F>(
    s: &mut OracleSession<'_>,
    scratch: &mut Vec<Vertex>,
    parts: &mut Vec<Vec<Vertex>>,
    u: Vertex,
    mut found: F,
) -> Result<()>
where
    F: FnMut(Edge),
{
    for part in parts.iter_mut() {
        if query_union(s, scratch, part, &[u])? {
            part.push(u);
            return Ok(());
        }
        let w = neighbor_in_known(s, scratch, u, part)?;
        found(normalize(u, w));
    }
    parts.push(vec![u]);
    Ok(())
}

/// Returns pairwise disjoint edges whose endpoints cover every edge induced
/// on `set`. An independent `set` costs one query.
pub fn find_cover(s: &mut OracleSession<'_>, set: &[Vertex]) -> Result<Vec<Edge>> {
    let mut remaining = set.to_vec();
    let mut scratch = Vec::with_capacity(set.len());
    let mut cover = Vec::new();
    while !s.is_independent(&remaining)? {
        let e = extract_known(s, &mut scratch, &remaining)?;
        remaining.retain(|&v| v != e.0 && v != e.1);
        cover.push(e);
    }
    Ok(cover)
}

/// Endpoints of a cover, in cover order with the smaller endpoint first.
pub fn cover_vertices(cover: &[Edge]) -> Vec<Vertex> {
    cover.iter().flat_map(|&(u, v)| [u, v]).collect()
}

/// Greedy coloring of `vertices` into independent parts. Returns the parts
/// and the edges found from rejected placements.
pub fn greedy_color(
    s: &mut OracleSession<'_>,
    vertices: &[Vertex],
) -> Result<(Vec<Vec<Vertex>>, Vec<Edge>)> {
    let mut parts = Vec::new();
    let mut found = Vec::new();
    let mut scratch = Vec::new();
    for &u in vertices {
        color_vertex(s, &mut scratch, &mut parts, u, |e| found.push(e))?;
    }
    found.sort_unstable();
    found.dedup();
    Ok((parts, found))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    CoverBuild,
    Coloring,
    CrossEnum,
    Done,
}

/// Resumable enumeration of the edges induced on a vertex set.
///
/// The stream holds no session; pass the same session to every
/// [`EdgeStream::next_edge`] call.
#[derive(Debug)]
pub struct EdgeStream {
    phase: Phase,
    input: Vec<Vertex>,
    remaining: Vec<Vertex>,
    cover: Vec<Edge>,
    to_color: Vec<Vertex>,
    next_to_color: usize,
    parts: Vec<Vec<Vertex>>,
    pair: (usize, usize),
    cursor: Option<BipartiteCursor>,
    ready: VecDeque<Edge>,
    discoveries: HashMap<Edge, u8>,
    emitted: u64,
    scratch: Vec<Vertex>,
}

/// Starts a lazy enumeration of the edges induced on `set`. No query is made
/// until the first call to [`EdgeStream::next_edge`].
pub fn enumerate_edges(set: Vec<Vertex>) -> EdgeStream {
    EdgeStream::new(set)
}

impl EdgeStream {
    pub fn new(mut set: Vec<Vertex>) -> Self {
        if !set.windows(2).all(|w| w[0] < w[1]) {
            set.sort_unstable();
            set.dedup();
        }
        EdgeStream {
            phase: Phase::CoverBuild,
            remaining: Vec::new(),
            input: set,
            cover: Vec::new(),
            to_color: Vec::new(),
            next_to_color: 0,
            parts: Vec::new(),
            pair: (0, 1),
            cursor: None,
            ready: VecDeque::new(),
            discoveries: HashMap::new(),
            emitted: 0,
            scratch: Vec::new(),
        }
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    /// Number of distinct edges reported so far.
    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    /// The disjoint edges found by the cover phase so far.
    pub fn cover(&self) -> &[Edge] {
        &self.cover
    }

    /// The independent parts built by the coloring phase (the last part is
    /// `A \ V1` once the cross phase has started).
    pub fn parts(&self) -> &[Vec<Vertex>] {
        &self.parts
    }

    /// How many times each edge has been discovered across the phases.
    pub fn discovery_counts(&self) -> &HashMap<Edge, u8> {
        &self.discoveries
    }

    fn discover(&mut self, e: Edge) {
        match self.discoveries.entry(e) {
            Entry::Occupied(mut o) => *o.get_mut() += 1,
            Entry::Vacant(v) => {
                v.insert(1);
                self.ready.push_back(e);
            }
        }
    }

    /// Next not-yet-reported edge, or `None` once every induced edge has
    /// been reported.
    pub fn next_edge(&mut self, s: &mut OracleSession<'_>) -> Result<Option<Edge>> {
        loop {
            if let Some(e) = self.ready.pop_front() {
                self.emitted += 1;
                return Ok(Some(e));
            }
            match self.phase {
                Phase::CoverBuild => {
                    // the remainder is only materialized once an edge is found
                    let pending = if self.cover.is_empty() {
                        &self.input
                    } else {
                        &self.remaining
                    };
                    if s.is_independent(pending)? {
                        self.to_color = cover_vertices(&self.cover);
                        self.remaining = Vec::new();
                        self.phase = Phase::Coloring;
                    } else {
                        if self.cover.is_empty() {
                            self.remaining = self.input.clone();
                        }
                        let e = extract_known(s, &mut self.scratch, &self.remaining)?;
                        self.remaining.retain(|&v| v != e.0 && v != e.1);
                        self.cover.push(e);
                        self.discover(e);
                    }
                }
                Phase::Coloring => {
                    if self.next_to_color == self.to_color.len() {
                        let mut covered = self.to_color.clone();
                        covered.sort_unstable();
                        let rest: Vec<Vertex> = self
                            .input
                            .iter()
                            .copied()
                            .filter(|v| covered.binary_search(v).is_err())
                            .collect();
                        if !rest.is_empty() && !self.parts.is_empty() {
                            self.parts.push(rest);
                        }
                        self.phase = Phase::CrossEnum;
                        continue;
                    }
                    let u = self.to_color[self.next_to_color];
                    self.next_to_color += 1;
                    let mut found = Vec::new();
                    color_vertex(s, &mut self.scratch, &mut self.parts, u, |e| found.push(e))?;
                    for e in found {
                        self.discover(e);
                    }
                }
                Phase::CrossEnum => {
                    let (i, j) = self.pair;
                    if j >= self.parts.len() {
                        self.phase = Phase::Done;
                        continue;
                    }
                    let cursor = self.cursor.get_or_insert_with(BipartiteCursor::default);
                    match cursor.step(s, &mut self.scratch, &self.parts[i], &self.parts[j])? {
                        Some(e) => self.discover(e),
                        None => {
                            self.cursor = None;
                            self.pair = if i + 1 < j { (i + 1, j) } else { (0, j + 1) };
                        }
                    }
                }
                Phase::Done => return Ok(None),
            }
        }
    }

    /// Drains the stream.
    pub fn collect_all(&mut self, s: &mut OracleSession<'_>) -> Result<Vec<Edge>> {
        let mut out = Vec::new();
        while let Some(e) = self.next_edge(s)? {
            out.push(e);
        }
        Ok(out)
    }
}
