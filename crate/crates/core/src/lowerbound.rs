//! Hard instances for edge estimation and the machinery to test them.
//!
//! A string over `{A, K, L, H}` describes a graph: a clique on the `K`
//! positions plus a complete bipartite graph between the `L` and `H`
//! positions. A hard pair consists of a string with only `A` and `K` and a
//! copy in which a few `A` positions became `L` or `H`. The two graphs
//! differ in edge count by `n_l * n_h`, yet few queries tell them apart.
//!
//! [`SimulatedOracle`] answers graph queries using only queries on the
//! string, which is what bounds the information an algorithm collects.
//! [`coupled_distinguish`] runs an algorithm on both graphs with identical
//! randomness and reports whether the answer sequences ever differ.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error, Result};
use crate::graph::{Graph, Vertex};
use crate::oracle::{Answer, NeighborAnswer, OracleBackend, OracleSession, QueryLedger};

/// Largest accuracy parameter for which hard pairs are defined.
pub const MAX_LB_EPSILON: f64 = 1.0 / 11.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    A,
    K,
    L,
    H,
}

impl Symbol {
    pub const ALL: [Symbol; 4] = [Symbol::A, Symbol::K, Symbol::L, Symbol::H];

    pub fn dual(self) -> Symbol {
        match self {
            Symbol::L => Symbol::H,
            Symbol::H => Symbol::L,
            s => s,
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    pub fn from_char(c: char) -> Option<Symbol> {
        match c {
            'A' => Some(Symbol::A),
            'K' => Some(Symbol::K),
            'L' => Some(Symbol::L),
            'H' => Some(Symbol::H),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::A => 'A',
            Symbol::K => 'K',
            Symbol::L => 'L',
            Symbol::H => 'H',
        }
    }
}

/// A string over `{A, K, L, H}` with per-symbol position lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledString {
    labels: Vec<Symbol>,
    positions: [Vec<Vertex>; 4],
    // rank of each position inside its symbol's position list
    rank: Vec<u32>,
}

impl LabeledString {
    pub fn new(labels: Vec<Symbol>) -> Self {
        let mut positions: [Vec<Vertex>; 4] = Default::default();
        let mut rank = Vec::with_capacity(labels.len());
        for (i, &s) in labels.iter().enumerate() {
            rank.push(positions[s.index()].len() as u32);
            positions[s.index()].push(i as Vertex);
        }
        LabeledString {
            labels,
            positions,
            rank,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        text.chars()
            .enumerate()
            .map(|(i, c)| {
                Symbol::from_char(c).ok_or_else(|| domain(format!("bad symbol {c:?} at {i}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(LabeledString::new)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn symbol(&self, i: Vertex) -> Symbol {
        self.labels[i as usize]
    }

    pub fn labels(&self) -> &[Symbol] {
        &self.labels
    }

    pub fn count(&self, s: Symbol) -> usize {
        self.positions[s.index()].len()
    }

    pub fn positions(&self, s: Symbol) -> &[Vertex] {
        &self.positions[s.index()]
    }

    /// `|U_i|`: zero for `A`, otherwise the number of other positions
    /// holding the dual symbol.
    pub fn neighbor_count(&self, i: Vertex) -> usize {
        match self.symbol(i) {
            Symbol::A => 0,
            Symbol::K => self.count(Symbol::K) - 1,
            s => self.count(s.dual()),
        }
    }

    /// The `j`-th member of `U_i` in increasing order.
    fn neighbor_at(&self, i: Vertex, j: usize) -> Vertex {
        match self.symbol(i) {
            Symbol::K => {
                let skip = (j >= self.rank[i as usize] as usize) as usize;
                self.positions(Symbol::K)[j + skip]
            }
            s => self.positions(s.dual())[j],
        }
    }
}

impl fmt::Display for LabeledString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.labels.iter().try_for_each(|s| f.write_char(s.as_char()))
    }
}

/// Answer to a full string query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FullAnswer {
    pub symbol: Symbol,
    pub degree: u64,
    pub neighbor: Option<Vertex>,
}

/// Symbol of position `i`, `|U_i|` and a uniform member of `U_i`.
pub fn string_full_query(s: &LabeledString, i: Vertex, rng: &mut ChaCha8Rng) -> Result<FullAnswer> {
    if i as usize >= s.len() {
        return Err(Error::OutOfRange {
            vertex: i as u64,
            n: s.len(),
        });
    }
    let degree = s.neighbor_count(i);
    let neighbor = (degree > 0).then(|| s.neighbor_at(i, rng.gen_range(0..degree)));
    Ok(FullAnswer {
        symbol: s.symbol(i),
        degree: degree as u64,
        neighbor,
    })
}

/// Clique on the `K` positions plus all `L`-`H` pairs.
pub fn reduction_graph(s: &LabeledString) -> Graph {
    let k = s.positions(Symbol::K);
    let l = s.positions(Symbol::L);
    let h = s.positions(Symbol::H);
    let mut edges = Vec::with_capacity(k.len() * k.len().saturating_sub(1) / 2 + l.len() * h.len());
    for (a, &u) in k.iter().enumerate() {
        for &v in &k[a + 1..] {
            edges.push((u, v));
        }
    }
    for &u in l {
        for &v in h {
            edges.push((u, v));
        }
    }
    Graph::new(s.len(), edges).expect("positions are in range and distinct")
}

/// Parameters of a hard pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LbParams {
    pub n: usize,
    pub n_k: usize,
    pub epsilon: f64,
    /// `n_k^2 / (2n)`, so that `sqrt(2 n d) = n_k`.
    pub d: f64,
    pub n_h: usize,
    pub n_ell: usize,
    /// `n_h == 1`, equivalently `d <= 1 / (eps^(2/3) n^(1/3))`.
    pub sparse_regime: bool,
}

impl LbParams {
    /// `R = min(n_k, sqrt(n / (eps n_k))) / 20`.
    pub fn r(&self) -> f64 {
        let (n, nk) = (self.n as f64, self.n_k as f64);
        nk.min((n / (self.epsilon * nk)).sqrt()) / 20.0
    }

    pub fn m1(&self) -> u64 {
        let k = self.n_k as u64;
        k * k.saturating_sub(1) / 2
    }

    pub fn m2(&self) -> u64 {
        self.m1() + (self.n_ell * self.n_h) as u64
    }
}

/// Smallest integer `x >= 1` with `x^4 >= target`.
fn ceil_fourth_root(target: f64) -> usize {
    let mut x = target.powf(0.25).ceil().max(1.0);
    while x > 1.0 && (x - 1.0).powi(4) >= target {
        x -= 1.0;
    }
    while x.powi(4) < target {
        x += 1.0;
    }
    x as usize
}

/// `d = n_k^2/(2n)`, `n_h = ceil(sqrt(eps) n^(1/4) d^(3/4))` and
/// `n_l = ceil(sqrt(eps) n^(3/4) d^(1/4))` when `n_h >= 2`, else
/// `ceil(eps n d)`. The fourth roots are evaluated as `x^4 >= ...` so that
/// exact powers do not round up spuriously.
pub fn lb_params(n: usize, n_k: usize, epsilon: f64) -> Result<LbParams> {
    if !(epsilon > 0.0 && epsilon <= MAX_LB_EPSILON) {
        return Err(domain(format!("epsilon must lie in (0, 1/11], got {epsilon}")));
    }
    if n_k < 1 || 2 * n_k > n {
        return Err(domain(format!("need 1 <= n_k <= n/2, got n_k={n_k}, n={n}")));
    }
    let (nf, nk) = (n as f64, n_k as f64);
    let d = nk * nk / (2.0 * nf);
    let eps2 = epsilon * epsilon;
    let n_h = ceil_fourth_root(eps2 * nf * d.powi(3));
    let n_ell = if n_h >= 2 {
        ceil_fourth_root(eps2 * nf.powi(3) * d)
    } else {
        (epsilon * nf * d).ceil() as usize
    };
    Ok(LbParams {
        n,
        n_k,
        epsilon,
        d,
        n_h,
        n_ell,
        sparse_regime: n_h == 1,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HardInstancePair {
    pub s1: LabeledString,
    pub s2: LabeledString,
    pub params: LbParams,
    pub k_set: Vec<Vertex>,
    pub h_set: Vec<Vertex>,
    pub l_set: Vec<Vertex>,
}

impl HardInstancePair {
    /// Builds the pair from explicit sets, which must be disjoint.
    pub fn from_sets(
        params: LbParams,
        mut k_set: Vec<Vertex>,
        mut h_set: Vec<Vertex>,
        mut l_set: Vec<Vertex>,
    ) -> Result<Self> {
        let n = params.n;
        let mut l1 = vec![Symbol::A; n];
        for &i in &k_set {
            *l1.get_mut(i as usize).ok_or(Error::OutOfRange { vertex: i as u64, n })? = Symbol::K;
        }
        let mut l2 = l1.clone();
        for (set, sym) in [(&h_set, Symbol::H), (&l_set, Symbol::L)] {
            for &i in set.iter() {
                let slot = l2.get_mut(i as usize).ok_or(Error::OutOfRange { vertex: i as u64, n })?;
                if *slot != Symbol::A {
                    return Err(domain(format!("position {i} assigned twice")));
                }
                *slot = sym;
            }
        }
        k_set.sort_unstable();
        h_set.sort_unstable();
        l_set.sort_unstable();
        let s1 = LabeledString::new(l1);
        if s1.count(Symbol::K) != k_set.len() {
            return Err(domain("repeated position in the clique set"));
        }
        Ok(HardInstancePair {
            s1,
            s2: LabeledString::new(l2),
            params,
            k_set,
            h_set,
            l_set,
        })
    }

    pub fn graphs(&self) -> (Graph, Graph) {
        (reduction_graph(&self.s1), reduction_graph(&self.s2))
    }

    /// Flat `key=value` description for a sidecar file next to the graphs.
    pub fn metadata(&self, seed: u64) -> String {
        let p = &self.params;
        let mut out = String::new();
        let _ = writeln!(out, "n={}", p.n);
        let _ = writeln!(out, "n_k={}", p.n_k);
        let _ = writeln!(out, "n_h={}", p.n_h);
        let _ = writeln!(out, "n_ell={}", p.n_ell);
        let _ = writeln!(out, "n_a={}", p.n - p.n_k - p.n_h - p.n_ell);
        let _ = writeln!(out, "d={:.9}", p.d);
        let _ = writeln!(out, "d_rule=n_k^2/(2n)");
        let _ = writeln!(out, "epsilon={:.9}", p.epsilon);
        let _ = writeln!(out, "sparse_regime={}", p.sparse_regime);
        let _ = writeln!(out, "m1={}", p.m1());
        let _ = writeln!(out, "m2={}", p.m2());
        let _ = writeln!(out, "seed={seed}");
        out
    }
}

/// Draws a hard pair: a uniform clique set, then uniform `H` and `L` sets
/// among the remaining positions.
pub fn draw_hard_pair(
    rng: &mut ChaCha8Rng,
    n: usize,
    n_k: usize,
    epsilon: f64,
) -> Result<HardInstancePair> {
    if n < 16 {
        return Err(domain(format!("hard pairs need n >= 16, got {n}")));
    }
    let params = lb_params(n, n_k, epsilon)?;
    let used = params.n_k + params.n_h + params.n_ell;
    if used >= n {
        return Err(domain(format!(
            "n_k + n_h + n_ell = {used} leaves no unlabeled position among {n}"
        )));
    }
    // a uniform ordered sample: its prefixes are uniform nested subsets
    let picked: Vec<Vertex> = sample(rng, n, used).iter().map(|i| i as Vertex).collect();
    let (k_set, rest) = picked.split_at(params.n_k);
    let (h_set, l_set) = rest.split_at(params.n_h);
    HardInstancePair::from_sets(params, k_set.to_vec(), h_set.to_vec(), l_set.to_vec())
}

/// Hard pair sized for a target edge count: `n_k = floor(sqrt(2m))` with
/// accuracy `3 eps`, so that `m2 >= (1 + 3 eps) m1`.
pub fn draw_pair_for_edges(
    rng: &mut ChaCha8Rng,
    n: usize,
    m: u64,
    epsilon: f64,
) -> Result<HardInstancePair> {
    let n_k = ((2 * m) as f64).sqrt().floor() as usize;
    draw_hard_pair(rng, n, n_k, 3.0 * epsilon)
}

/// A graph query as issued by an algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphQuery {
    Degree(Vertex),
    Neighbor(Vertex),
    Independent(Vec<Vertex>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StringQuery {
    Full(Vertex),
    Light(Vertex),
}

/// Simulation record of one graph query.
#[derive(Debug, Clone, PartialEq)]
pub struct SimStep {
    pub query: GraphQuery,
    pub string_queries: Vec<StringQuery>,
    pub answer: Answer,
    /// Positions holding `K` that the string queries touched, either as the
    /// queried index or as a returned index.
    pub k_involved: u32,
}

impl SimStep {
    pub fn m_t(&self) -> usize {
        self.string_queries.len()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SimulationTrace {
    pub steps: Vec<SimStep>,
    /// Symbols learned so far, by position.
    pub revealed: HashMap<Vertex, Symbol>,
    /// When false, only the revealed map and counters are kept.
    pub keep_steps: bool,
    pub total_string_queries: u64,
    pub max_k_involved: u32,
}

impl SimulationTrace {
    pub fn new(keep_steps: bool) -> Self {
        SimulationTrace {
            keep_steps,
            ..Default::default()
        }
    }

    fn push(&mut self, step: SimStep) {
        self.total_string_queries += step.string_queries.len() as u64;
        self.max_k_involved = self.max_k_involved.max(step.k_involved);
        if self.keep_steps {
            self.steps.push(step);
        }
    }
}

/// Answers graph queries about `reduction_graph(s)` through string queries.
pub struct SimulatedOracle<'a> {
    s: &'a LabeledString,
    trace: &'a mut SimulationTrace,
    order: Vec<Vertex>,
}

impl<'a> SimulatedOracle<'a> {
    pub fn new(s: &'a LabeledString, trace: &'a mut SimulationTrace) -> Self {
        SimulatedOracle {
            s,
            trace,
            order: Vec::new(),
        }
    }

    fn full(&mut self, u: Vertex, rng: &mut ChaCha8Rng) -> (FullAnswer, u32) {
        let a = string_full_query(self.s, u, rng).expect("session checks the range");
        self.trace.revealed.insert(u, a.symbol);
        let mut k = (a.symbol == Symbol::K) as u32;
        if let Some(v) = a.neighbor {
            let sym = a.symbol.dual();
            self.trace.revealed.insert(v, sym);
            k += (sym == Symbol::K) as u32;
        }
        (a, k)
    }
}

impl OracleBackend for SimulatedOracle<'_> {
    fn vertex_count(&self) -> usize {
        self.s.len()
    }

    fn degree(&mut self, u: Vertex) -> u64 {
        // only the first two entries of the full query are needed here
        let symbol = self.s.symbol(u);
        let degree = self.s.neighbor_count(u) as u64;
        self.trace.revealed.insert(u, symbol);
        self.trace.push(SimStep {
            query: GraphQuery::Degree(u),
            string_queries: vec![StringQuery::Full(u)],
            answer: Answer::Degree(degree),
            k_involved: (symbol == Symbol::K) as u32,
        });
        degree
    }

    fn random_neighbor(&mut self, u: Vertex, rng: &mut ChaCha8Rng) -> NeighborAnswer {
        let (a, k) = self.full(u, rng);
        let ans = a.neighbor.map_or(NeighborAnswer::NoNeighbor, NeighborAnswer::Vertex);
        self.trace.push(SimStep {
            query: GraphQuery::Neighbor(u),
            string_queries: vec![StringQuery::Full(u)],
            answer: Answer::Neighbor(ans),
            k_involved: k,
        });
        ans
    }

    fn is_independent(&mut self, set: &[Vertex], rng: &mut ChaCha8Rng) -> bool {
        self.order.clear();
        self.order.extend_from_slice(set);
        // full Fisher-Yates so the draws do not depend on the string
        for i in (1..self.order.len()).rev() {
            let j = rng.gen_range(0..=i);
            self.order.swap(i, j);
        }
        let mut queries = Vec::new();
        let (mut k, mut l, mut h) = (0u32, false, false);
        let mut independent = true;
        for &v in &self.order {
            let sym = match self.trace.revealed.get(&v) {
                Some(&sym) => sym,
                None => {
                    queries.push(StringQuery::Light(v));
                    let sym = self.s.symbol(v);
                    self.trace.revealed.insert(v, sym);
                    sym
                }
            };
            match sym {
                Symbol::K => k += 1,
                Symbol::L => l = true,
                Symbol::H => h = true,
                Symbol::A => {}
            }
            if k >= 2 || (l && h) {
                independent = false;
                break;
            }
        }
        self.trace.push(SimStep {
            query: GraphQuery::Independent(if self.trace.keep_steps {
                set.to_vec()
            } else {
                Vec::new()
            }),
            string_queries: queries,
            answer: Answer::Independent(independent),
            k_involved: k,
        });
        independent
    }
}

/// Result of running one algorithm on both strings of a pair.
#[derive(Debug)]
pub struct CoupledRun<T> {
    pub first: Result<T>,
    pub second: Result<T>,
    /// The two answer sequences differ somewhere.
    pub diverged: bool,
    /// Index of the first differing answer.
    pub divergence_index: Option<usize>,
    pub ledger1: QueryLedger,
    pub ledger2: QueryLedger,
    pub trace1: SimulationTrace,
    pub trace2: SimulationTrace,
}

fn run_on<T, F>(
    s: &LabeledString,
    seed: u64,
    budget: Option<u64>,
    keep_steps: bool,
    algorithm: &mut F,
) -> (Result<T>, QueryLedger, Vec<Answer>, SimulationTrace)
where
    F: FnMut(&mut OracleSession<'_>) -> Result<T>,
{
    let mut trace = SimulationTrace::new(keep_steps);
    let (out, ledger, transcript) = {
        let backend = SimulatedOracle::new(s, &mut trace);
        let mut session = OracleSession::with_backend(Box::new(backend), seed).with_budget(budget);
        session.record_transcript();
        let out = algorithm(&mut session);
        let ledger = session.ledger();
        (out, ledger, session.take_transcript().unwrap_or_default())
    };
    (out, ledger, transcript, trace)
}

/// Runs `algorithm` on the reduction graphs of both strings with the same
/// seed, so both runs draw identical random numbers until their answers
/// differ. Budget exhaustion is reported in the outputs, not raised.
pub fn coupled_distinguish<T, F>(
    mut algorithm: F,
    pair: &HardInstancePair,
    master_seed: u64,
    budget: Option<u64>,
    keep_steps: bool,
) -> CoupledRun<T>
where
    F: FnMut(&mut OracleSession<'_>) -> Result<T>,
{
    let (first, ledger1, t1, trace1) = run_on(&pair.s1, master_seed, budget, keep_steps, &mut algorithm);
    let (second, ledger2, t2, trace2) = run_on(&pair.s2, master_seed, budget, keep_steps, &mut algorithm);
    let divergence_index = t1
        .iter()
        .zip(&t2)
        .position(|(a, b)| a != b)
        .or_else(|| (t1.len() != t2.len()).then(|| t1.len().min(t2.len())));
    CoupledRun {
        first,
        second,
        diverged: divergence_index.is_some(),
        divergence_index,
        ledger1,
        ledger2,
        trace1,
        trace2,
    }
}

/// Whether a trace satisfies either distinguishing predicate: a full query
/// on an `L`/`H` position that returned an index, or light queries that
/// revealed both an `H` and an `L`.
pub fn trace_distinguishes(trace: &SimulationTrace, s: &LabeledString) -> bool {
    let mut light_l = false;
    let mut light_h = false;
    for step in &trace.steps {
        for q in &step.string_queries {
            match *q {
                StringQuery::Full(u) => {
                    let sym = s.symbol(u);
                    if matches!(sym, Symbol::L | Symbol::H) && s.neighbor_count(u) > 0 {
                        return true;
                    }
                }
                StringQuery::Light(u) => match s.symbol(u) {
                    Symbol::L => light_l = true,
                    Symbol::H => light_h = true,
                    _ => {}
                },
            }
        }
        if light_l && light_h {
            return true;
        }
    }
    false
}
