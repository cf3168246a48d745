//! Immutable simple undirected graphs and their plain-text format.
//!
//! Vertices are `0..n`. Adjacency lists are sorted and duplicate-free, so the
//! neighbor at a given position is well defined; the oracle layer relies on
//! that when it draws a uniform neighbor by index.

use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type Vertex = u32;

/// An undirected edge stored with `0 < 1`.
pub type Edge = (Vertex, Vertex);

#[inline]
pub fn normalize(u: Vertex, v: Vertex) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    m: u64,
}

impl Graph {
    /// Builds a graph on `n` vertices. Repeated pairs, in either orientation,
    /// collapse into a single edge.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        if n > Vertex::MAX as usize {
            return Err(Error::Domain(format!("vertex count {n} exceeds u32 ids")));
        }
        let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w as usize >= n {
                    return Err(Error::OutOfRange { vertex: w as u64, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        let mut half_degree_sum = 0u64;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            list.shrink_to_fit();
            half_degree_sum += list.len() as u64;
        }
        Ok(Graph {
            adj,
            m: half_degree_sum / 2,
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn m(&self) -> u64 {
        self.m
    }

    #[inline]
    pub fn degree(&self, u: Vertex) -> usize {
        self.adj[u as usize].len()
    }

    #[inline]
    pub fn neighbors(&self, u: Vertex) -> &[Vertex] {
        &self.adj[u as usize]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges as `(u, v)` with `u < v`, in increasing order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = u as Vertex;
            list.iter().copied().filter(move |&v| u < v).map(move |v| (u, v))
        })
    }

    /// Brute-force list of the edges with both endpoints in `set`, sorted.
    /// Ground truth for tests and experiments; it does not go through any oracle.
    pub fn induced_edges(&self, set: &[Vertex]) -> Vec<Edge> {
        let mut member = vec![false; self.n()];
        for &v in set {
            member[v as usize] = true;
        }
        let mut out = Vec::new();
        for u in 0..self.n() {
            if !member[u] {
                continue;
            }
            for &v in &self.adj[u] {
                if (u as Vertex) < v && member[v as usize] {
                    out.push((u as Vertex, v));
                }
            }
        }
        out
    }

    /// Parses the text format: a header line `n m` followed by `m` lines `u v`.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line_no, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let (n, m) = parse_pair::<usize>(header, line_no)?;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let (line_no, line) = lines.next().ok_or(Error::Parse {
                line: line_no,
                message: format!("expected {m} edge lines"),
            })?;
            edges.push(parse_pair::<Vertex>(line, line_no)?);
        }
        Graph::new(n, edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(16 + 12 * self.m as usize);
        let _ = writeln!(out, "{} {}", self.n(), self.m);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

fn parse_pair<T: std::str::FromStr>(line: &str, line_no: usize) -> Result<(T, T)> {
    let mut it = line.split_whitespace();
    let mut next = || {
        it.next()
            .and_then(|tok| tok.parse::<T>().ok())
            .ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("expected two integers, got {line:?}"),
            })
    };
    let a = next()?;
    let b = next()?;
    Ok((a, b))
}
