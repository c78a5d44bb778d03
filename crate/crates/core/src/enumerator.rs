//! Backtracking construction of every uniform Kirchhoff graph up to a
//! multiplicity bound.
//!
//! The search places an anchor vertex at the origin, gives it each nonzero cut
//! from the list Λ (all integer points of `Row(R)` with entries in
//! `[-m_max, m_max]`), and then repeatedly takes the first vertex of the to-do
//! list: a vertex whose current cut is already in `Row(R)` is accepted as is,
//! otherwise each cut of Λ is tried in turn by adding the edges that make up
//! the difference. A branch dies when an edge vector would exceed `m_max`
//! copies or a vertex would land at a negative coordinate sum. An empty to-do
//! list is a candidate graph; candidates that are Kirchhoff and uniform are
//! kept, deduplicated by canonical form.
//!
//! Each anchor cut roots an independent subtree, see [`search_anchor_branch`].

use alloc::collections::{BTreeSet, VecDeque};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};

use crate::exactalg::{enumerate_bounded_cuts, is_zero_vec, RowSystem};
use crate::vgraph::{canonicalize, is_kirchhoff, Coord, VectorGraph};

/// Order in which the cut list Λ is tried. The output set does not depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CutOrder {
    #[default]
    Lexicographic,
    ReverseLexicographic,
    /// Ascending sum of absolute entries, ties lexicographic.
    SmallestFirst,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub m_max: u32,
    pub prune_negative_sum: bool,
    pub cut_order: CutOrder,
    /// Total node budget across all branches; `None` for unlimited.
    pub node_limit: Option<u64>,
}

impl SearchConfig {
    pub fn new(m_max: u32) -> Self {
        SearchConfig {
            m_max,
            prune_negative_sum: true,
            cut_order: CutOrder::default(),
            node_limit: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    pub nodes: u64,
    pub multiplicity_prunes: u64,
    pub coordinate_sum_prunes: u64,
    /// Leaves with an empty to-do list (before the Kirchhoff/uniform filter and dedup).
    pub candidates: u64,
    /// Distinct graphs kept.
    pub graphs_found: u64,
    pub backtracks: u64,
}

impl SearchStats {
    pub fn merge(&mut self, other: &SearchStats) {
        self.nodes += other.nodes;
        self.multiplicity_prunes += other.multiplicity_prunes;
        self.coordinate_sum_prunes += other.coordinate_sum_prunes;
        self.candidates += other.candidates;
        self.graphs_found += other.graphs_found;
        self.backtracks += other.backtracks;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("m_max must be at least 1")]
    InvalidConfig,
    #[error("node limit reached after {} nodes; result is incomplete", .0.stats.nodes)]
    NodeLimitExceeded(alloc::boxed::Box<Enumeration>),
}

/// Output of a search: canonical graphs in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub graphs: BTreeSet<VectorGraph>,
    pub stats: SearchStats,
    pub complete: bool,
}

/// Why an assignment was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum AssignError {
    #[error("edge vector {vec_index} would exceed the multiplicity bound")]
    MultiplicityExceeded { vec_index: usize },
    #[error("a new vertex would have negative coordinate sum")]
    NegativeSum,
}

/// Result of [`PartialGraph::visit_next`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Visit {
    /// The to-do list is exhausted: every vertex cut lies in `Row(R)`.
    Complete,
    /// This vertex needs a cut from Λ.
    Pending(u32),
}

/// Undo record for one [`PartialGraph::assign_cut`].
#[derive(Debug, Clone)]
pub struct Mark {
    vertices: usize,
    trail: usize,
    todo: VecDeque<u32>,
}

#[derive(Debug, Clone, Copy)]
struct TrailEntry {
    tail: u32,
    head: u32,
    vec_index: u32,
    copies: u32,
}

/// The graph under construction: interned vertices, per-vertex out-edge
/// counts and cuts, per-vector totals, and the to-do list.
#[derive(Debug, Clone)]
pub struct PartialGraph {
    sys: Arc<RowSystem>,
    n: usize,
    k: usize,
    m_max: u32,
    prune_negative_sum: bool,
    columns: Vec<i64>,
    coords: Vec<i64>,
    out: Vec<u32>,
    cut: Vec<i64>,
    counts: Vec<u32>,
    todo: VecDeque<u32>,
    trail: Vec<TrailEntry>,
}

impl PartialGraph {
    /// A lone anchor vertex (id 0) at the origin.
    pub fn anchored(sys: Arc<RowSystem>, config: &SearchConfig) -> Self {
        let (n, k) = (sys.n(), sys.k());
        let columns = (0..n).flat_map(|i| sys.column(i).to_vec()).collect();
        PartialGraph {
            sys,
            n,
            k,
            m_max: config.m_max,
            prune_negative_sum: config.prune_negative_sum,
            columns,
            coords: vec![0; k],
            out: vec![0; n],
            cut: vec![0; n],
            counts: vec![0; n],
            todo: VecDeque::new(),
            trail: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.coords.len() / self.k
    }

    pub fn coord(&self, v: u32) -> Coord {
        Coord(self.coord_slice(v).to_vec())
    }

    fn coord_slice(&self, v: u32) -> &[i64] {
        let v = v as usize;
        &self.coords[v * self.k..(v + 1) * self.k]
    }

    pub fn vertex_id(&self, c: &[i64]) -> Option<u32> {
        self.coords.chunks_exact(self.k).position(|x| x == c).map(|p| p as u32)
    }

    pub fn cut_at(&self, v: u32) -> &[i64] {
        let v = v as usize;
        &self.cut[v * self.n..(v + 1) * self.n]
    }

    pub fn vector_counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn todo(&self) -> &VecDeque<u32> {
        &self.todo
    }

    pub fn edge_total(&self) -> u64 {
        self.counts.iter().map(|&c| u64::from(c)).sum()
    }

    fn intern(&mut self, c: &[i64]) -> u32 {
        if let Some(id) = self.vertex_id(c) {
            return id;
        }
        self.coords.extend_from_slice(c);
        self.out.extend(core::iter::repeat(0).take(self.n));
        self.cut.extend(core::iter::repeat(0).take(self.n));
        (self.vertex_count() - 1) as u32
    }

    fn column(&self, i: usize) -> &[i64] {
        &self.columns[i * self.k..(i + 1) * self.k]
    }

    /// Gives vertex `v` the cut `target` by adding `|δ_i|` copies of `s_i`
    /// leaving `v` (δ_i > 0) or entering it (δ_i < 0), where
    /// `δ = target - λ(v)`. On success `v` leaves the to-do list, and every
    /// other endpoint of a new edge whose cut is outside `Row(R)` is appended
    /// to it if absent. On failure nothing changes.
    pub fn assign_cut(&mut self, v: u32, target: &[i64]) -> Result<Mark, AssignError> {
        let n = self.n;
        let delta: Vec<i64> = target.iter().zip(self.cut_at(v)).map(|(t, c)| t - c).collect();
        for (i, d) in delta.iter().enumerate() {
            if u64::from(self.counts[i]) + d.unsigned_abs() > u64::from(self.m_max) {
                return Err(AssignError::MultiplicityExceeded { vec_index: i });
            }
        }
        let base = self.coord(v);
        let mut neighbours: Vec<(usize, Coord)> = Vec::new();
        for (i, &d) in delta.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let w = if d > 0 { base.offset(self.column(i)) } else { base.minus(self.column(i)) };
            if self.prune_negative_sum && w.coordinate_sum() < 0 {
                return Err(AssignError::NegativeSum);
            }
            neighbours.push((i, w));
        }

        let mark = Mark {
            vertices: self.vertex_count(),
            trail: self.trail.len(),
            todo: self.todo.clone(),
        };
        let mut touched = Vec::with_capacity(neighbours.len());
        for (i, w) in neighbours {
            let w = self.intern(&w);
            let d = delta[i];
            let copies = d.unsigned_abs() as u32;
            let (tail, head) = if d > 0 { (v, w) } else { (w, v) };
            self.apply(TrailEntry {
                tail,
                head,
                vec_index: i as u32,
                copies,
            });
            touched.push(w);
        }
        debug_assert_eq!(self.cut_at(v), target);
        self.todo.retain(|&x| x != v);
        for w in touched {
            if !self.todo.contains(&w) && !self.sys.row_space_contains(&self.cut[w as usize * n..(w as usize + 1) * n]) {
                self.todo.push_back(w);
            }
        }
        Ok(mark)
    }

    fn apply(&mut self, e: TrailEntry) {
        let (n, i) = (self.n, e.vec_index as usize);
        let c = i64::from(e.copies);
        self.out[e.tail as usize * n + i] += e.copies;
        self.cut[e.tail as usize * n + i] += c;
        self.cut[e.head as usize * n + i] -= c;
        self.counts[i] += e.copies;
        self.trail.push(e);
    }

    /// Reverts every change made since `mark` was taken.
    pub fn undo(&mut self, mark: Mark) {
        let n = self.n;
        while self.trail.len() > mark.trail {
            let e = self.trail.pop().expect("trail entry");
            let i = e.vec_index as usize;
            let c = i64::from(e.copies);
            self.out[e.tail as usize * n + i] -= e.copies;
            self.cut[e.tail as usize * n + i] -= c;
            self.cut[e.head as usize * n + i] += c;
            self.counts[i] -= e.copies;
        }
        self.coords.truncate(mark.vertices * self.k);
        self.out.truncate(mark.vertices * n);
        self.cut.truncate(mark.vertices * n);
        self.todo = mark.todo;
    }

    /// Pops vertices off the front of the to-do list until one whose cut is
    /// outside `Row(R)` is found.
    pub fn visit_next(&mut self) -> Visit {
        while let Some(v) = self.todo.pop_front() {
            if !self.sys.row_space_contains(self.cut_at(v)) {
                return Visit::Pending(v);
            }
        }
        Visit::Complete
    }

    /// Snapshot of the edges built so far (not canonicalized).
    pub fn to_graph(&self) -> VectorGraph {
        let n = self.n;
        let mut edges = Vec::new();
        for v in 0..self.vertex_count() {
            for i in 0..n {
                let c = self.out[v * n + i];
                if c > 0 {
                    edges.push((self.coord(v as u32), i, c));
                }
            }
        }
        VectorGraph::from_tails(self.sys.clone(), edges).expect("consistent partial graph")
    }

    fn set_todo(&mut self, todo: VecDeque<u32>) {
        self.todo = todo;
    }
}

/// The cut list Λ: integer points of `Row(R)` with entries in
/// `[-m_max, m_max]`, in the configured order.
///
/// The zero cut stays in the list: a pending vertex may need edges added just
/// to balance it (the centre of a crossing). It is never used at the anchor.
pub fn cut_list(sys: &RowSystem, config: &SearchConfig) -> Vec<Vec<i64>> {
    let mut cuts = enumerate_bounded_cuts(sys, config.m_max);
    match config.cut_order {
        CutOrder::Lexicographic => {}
        CutOrder::ReverseLexicographic => cuts.reverse(),
        CutOrder::SmallestFirst => cuts.sort_by_key(|c| (c.iter().map(|x| x.abs()).sum::<i64>(), c.clone())),
    }
    cuts
}

/// Shared node counter for a run, possibly spanning several workers.
#[derive(Debug, Default)]
pub struct NodeBudget {
    used: AtomicU64,
    limit: Option<u64>,
}

impl NodeBudget {
    pub fn new(limit: Option<u64>) -> Self {
        NodeBudget {
            used: AtomicU64::new(0),
            limit,
        }
    }

    /// Takes one node; false once the limit has been reached.
    fn take(&self) -> bool {
        let used = self.used.fetch_add(1, Ordering::Relaxed);
        self.limit.is_none_or(|l| used < l)
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }
}

struct Searcher<'a> {
    cuts: &'a [Vec<i64>],
    budget: &'a NodeBudget,
    stats: SearchStats,
    found: BTreeSet<VectorGraph>,
    truncated: bool,
}

impl Searcher<'_> {
    fn dfs(&mut self, p: &mut PartialGraph) {
        if self.truncated || !self.budget.take() {
            self.truncated = true;
            return;
        }
        self.stats.nodes += 1;
        let saved = p.todo.clone();
        match p.visit_next() {
            Visit::Complete => self.emit(p),
            Visit::Pending(v) => {
                for t in self.cuts {
                    match p.assign_cut(v, t) {
                        Ok(mark) => {
                            self.dfs(p);
                            p.undo(mark);
                        }
                        Err(AssignError::MultiplicityExceeded { .. }) => self.stats.multiplicity_prunes += 1,
                        Err(AssignError::NegativeSum) => self.stats.coordinate_sum_prunes += 1,
                    }
                    if self.truncated {
                        break;
                    }
                }
                self.stats.backtracks += 1;
            }
        }
        p.set_todo(saved);
    }

    fn emit(&mut self, p: &PartialGraph) {
        self.stats.candidates += 1;
        let counts = p.vector_counts();
        if counts[0] == 0 || counts.iter().any(|&c| c != counts[0]) {
            return;
        }
        let g = canonicalize(&p.to_graph());
        if self.found.contains(&g) {
            return;
        }
        if is_kirchhoff(&g).is_ok() {
            self.found.insert(g);
        }
    }
}

/// Explores the subtree rooted at anchor cut `cuts[branch]`; a zero anchor
/// cut is an empty branch.
///
/// `cuts` must be the list from [`cut_list`] for the same config. Branches
/// are independent, so callers may run them on separate workers and union the
/// results.
pub fn search_anchor_branch(
    sys: &Arc<RowSystem>,
    config: &SearchConfig,
    cuts: &[Vec<i64>],
    branch: usize,
    budget: &NodeBudget,
) -> Enumeration {
    let mut s = Searcher {
        cuts,
        budget,
        stats: SearchStats::default(),
        found: BTreeSet::new(),
        truncated: false,
    };
    let mut p = PartialGraph::anchored(sys.clone(), config);
    match p.assign_cut(0, &cuts[branch]) {
        _ if is_zero_vec(&cuts[branch]) => {}
        Ok(_) => s.dfs(&mut p),
        Err(AssignError::MultiplicityExceeded { .. }) => s.stats.multiplicity_prunes += 1,
        Err(AssignError::NegativeSum) => s.stats.coordinate_sum_prunes += 1,
    }
    s.stats.graphs_found = s.found.len() as u64;
    Enumeration {
        graphs: s.found,
        stats: s.stats,
        complete: !s.truncated,
    }
}

/// Unions per-branch results; `graphs_found` is recomputed after dedup.
pub fn merge_branches<I: IntoIterator<Item = Enumeration>>(parts: I) -> Enumeration {
    let mut all = Enumeration {
        graphs: BTreeSet::new(),
        stats: SearchStats::default(),
        complete: true,
    };
    for part in parts {
        all.stats.merge(&part.stats);
        all.complete &= part.complete;
        all.graphs.extend(part.graphs);
    }
    all.stats.graphs_found = all.graphs.len() as u64;
    all
}

pub fn validate_config(config: &SearchConfig) -> Result<(), SearchError> {
    if config.m_max == 0 {
        Err(SearchError::InvalidConfig)
    } else {
        Ok(())
    }
}

/// Turns a merged result into the public contract: incomplete runs become
/// [`SearchError::NodeLimitExceeded`] carrying what was found.
pub fn finish(result: Enumeration) -> Result<Enumeration, SearchError> {
    if result.complete {
        Ok(result)
    } else {
        Err(SearchError::NodeLimitExceeded(alloc::boxed::Box::new(result)))
    }
}

/// Every nonempty uniform Kirchhoff graph with multiplicity at most
/// `config.m_max`, up to translation, on the current thread.
pub fn enumerate_kirchhoff(sys: &Arc<RowSystem>, config: &SearchConfig) -> Result<Enumeration, SearchError> {
    validate_config(config)?;
    let cuts = cut_list(sys, config);
    let budget = NodeBudget::new(config.node_limit);
    let parts = (0..cuts.len()).map(|b| search_anchor_branch(sys, config, &cuts, b, &budget));
    finish(merge_branches(parts))
}

/// Smallest `m <= m_limit` at which a nonempty Kirchhoff graph exists.
pub fn min_multiplicity(sys: &Arc<RowSystem>, m_limit: u32) -> Result<Option<u32>, SearchError> {
    for m in 1..=m_limit {
        if !enumerate_kirchhoff(sys, &SearchConfig::new(m))?.graphs.is_empty() {
            return Ok(Some(m));
        }
    }
    Ok(None)
}
