//! Vector graphs embedded in the integer lattice.
//!
//! An edge with vector index `i` and tail `u` always has head `u + R[:, i]`, so
//! an edge is identified by `(tail, vec_index)` and a graph is a multiset of
//! those keys. Vertices are the endpoints of edges; there are no isolated
//! vertices.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::Deref;

use crate::exactalg::{is_zero_vec, span_rank, RowSystem};

/// A lattice point in `Z^k`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Coord(pub Vec<i64>);

impl Coord {
    pub fn origin(k: usize) -> Self {
        Coord(vec![0; k])
    }

    pub fn offset(&self, delta: &[i64]) -> Coord {
        Coord(self.0.iter().zip(delta).map(|(a, b)| a + b).collect())
    }

    pub fn minus(&self, delta: &[i64]) -> Coord {
        Coord(self.0.iter().zip(delta).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Coord {
        Coord(self.0.iter().map(|a| -a).collect())
    }

    pub fn coordinate_sum(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl Deref for Coord {
    type Target = [i64];
    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for Coord {
    fn from(v: Vec<i64>) -> Self {
        Coord(v)
    }
}

impl From<&[i64]> for Coord {
    fn from(v: &[i64]) -> Self {
        Coord(v.to_vec())
    }
}

impl fmt::Debug for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One directed edge carrying edge vector `vec_index`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeInstance {
    pub tail: Coord,
    pub head: Coord,
    pub vec_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("vertex {0} is not in the graph")]
    VertexNotFound(Coord),
    #[error("edge vector index {0} out of range")]
    BadVectorIndex(usize),
    #[error("coordinate has length {found}, expected {expected}")]
    BadDimension { expected: usize, found: usize },
    #[error("edge {tail} -> {head} is not a translate of edge vector {vec_index}")]
    Inconsistent { tail: Coord, head: Coord, vec_index: usize },
    #[error("graphs belong to different row systems")]
    SystemMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WalkError {
    #[error("walk does not return to its start")]
    NotClosed,
    #[error("walk repeats vertex {0} or is empty")]
    NotACycle(Coord),
    #[error("edge {0:?} (copy {1}) is not in the graph")]
    EdgeNotInGraph(EdgeInstance, u32),
    #[error("step {0} does not start at the current vertex")]
    Discontinuous(usize),
}

/// A finite multiset of vector edges on lattice vertices.
#[derive(Clone)]
pub struct VectorGraph {
    sys: Arc<RowSystem>,
    edges: BTreeMap<(Coord, usize), u32>,
}

impl VectorGraph {
    /// The empty (trivial) graph.
    pub fn empty(sys: Arc<RowSystem>) -> Self {
        VectorGraph {
            sys,
            edges: BTreeMap::new(),
        }
    }

    /// Builds a graph from `(tail, vec_index, count)` triples; zero counts are dropped.
    pub fn from_tails<I>(sys: Arc<RowSystem>, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Coord, usize, u32)>,
    {
        let mut g = VectorGraph::empty(sys);
        for (tail, vec_index, count) in edges {
            g.insert(tail, vec_index, count)?;
        }
        Ok(g)
    }

    /// Builds a graph from explicit edge instances, checking `head - tail = R[:, i]`.
    pub fn from_instances<I>(sys: Arc<RowSystem>, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (EdgeInstance, u32)>,
    {
        let mut g = VectorGraph::empty(sys);
        for (e, count) in edges {
            if e.vec_index >= g.sys.n() {
                return Err(GraphError::BadVectorIndex(e.vec_index));
            }
            if e.head.len() != e.tail.len() || e.tail.offset(g.sys.column(e.vec_index)) != e.head {
                return Err(GraphError::Inconsistent {
                    tail: e.tail,
                    head: e.head,
                    vec_index: e.vec_index,
                });
            }
            g.insert(e.tail, e.vec_index, count)?;
        }
        Ok(g)
    }

    pub fn insert(&mut self, tail: Coord, vec_index: usize, count: u32) -> Result<(), GraphError> {
        if vec_index >= self.sys.n() {
            return Err(GraphError::BadVectorIndex(vec_index));
        }
        if tail.len() != self.sys.k() {
            return Err(GraphError::BadDimension {
                expected: self.sys.k(),
                found: tail.len(),
            });
        }
        if count > 0 {
            *self.edges.entry((tail, vec_index)).or_insert(0) += count;
        }
        Ok(())
    }

    /// Removes `count` copies; returns false (and leaves the graph alone) if
    /// fewer are present.
    pub fn remove(&mut self, tail: &Coord, vec_index: usize, count: u32) -> bool {
        let key = (tail.clone(), vec_index);
        match self.edges.get_mut(&key) {
            Some(c) if *c > count => {
                *c -= count;
                true
            }
            Some(c) if *c == count => {
                self.edges.remove(&key);
                true
            }
            None if count == 0 => true,
            _ => false,
        }
    }

    pub fn system(&self) -> &Arc<RowSystem> {
        &self.sys
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Number of copies of the edge `(tail, vec_index)`.
    pub fn count(&self, tail: &Coord, vec_index: usize) -> u32 {
        // avoids cloning the key on the hot lookup path
        self.edges
            .range((tail.clone(), vec_index)..=(tail.clone(), vec_index))
            .next()
            .map_or(0, |(_, &c)| c)
    }

    /// Total number of edges, counting copies.
    pub fn edge_count(&self) -> u64 {
        self.edges.values().map(|&c| u64::from(c)).sum()
    }

    /// Distinct `(tail, vec_index, count)` entries in `(tail, vec_index)` order.
    pub fn tails(&self) -> impl Iterator<Item = (&Coord, usize, u32)> + '_ {
        self.edges.iter().map(|((t, i), &c)| (t, *i, c))
    }

    /// Distinct edges with their copy counts, ordered by `(tail, vec_index, head)`.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeInstance, u32)> + '_ {
        self.edges.iter().map(|((t, i), &c)| {
            (
                EdgeInstance {
                    tail: t.clone(),
                    head: t.offset(self.sys.column(*i)),
                    vec_index: *i,
                },
                c,
            )
        })
    }

    pub fn head_of(&self, tail: &Coord, vec_index: usize) -> Coord {
        tail.offset(self.sys.column(vec_index))
    }

    /// Sorted vertex set.
    pub fn vertices(&self) -> Vec<Coord> {
        let mut set = BTreeSet::new();
        for (t, i) in self.edges.keys() {
            set.insert(t.clone());
            set.insert(self.head_of(t, *i));
        }
        set.into_iter().collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices().len()
    }

    pub fn translated(&self, delta: &[i64]) -> VectorGraph {
        VectorGraph {
            sys: self.sys.clone(),
            edges: self
                .edges
                .iter()
                .map(|((t, i), &c)| ((t.offset(delta), *i), c))
                .collect(),
        }
    }

    /// Vertex cuts of every vertex, keyed by vertex.
    pub fn all_cuts(&self) -> BTreeMap<Coord, Vec<i64>> {
        let n = self.sys.n();
        let mut cuts: BTreeMap<Coord, Vec<i64>> = BTreeMap::new();
        for ((t, i), &c) in &self.edges {
            cuts.entry(t.clone()).or_insert_with(|| vec![0; n])[*i] += i64::from(c);
            cuts.entry(self.head_of(t, *i)).or_insert_with(|| vec![0; n])[*i] -= i64::from(c);
        }
        cuts
    }

    /// Lexicographically smallest vertex; the anchor of a canonical graph.
    pub fn min_vertex(&self) -> Option<Coord> {
        self.edges
            .keys()
            .flat_map(|(t, i)| [t.clone(), self.head_of(t, *i)])
            .min()
    }

    /// Per-axis `(min, max)` over all vertices.
    pub fn bounding_box(&self) -> Option<(Coord, Coord)> {
        let verts = self.vertices();
        let first = verts.first()?;
        let mut lo = first.clone();
        let mut hi = first.clone();
        for v in &verts {
            for d in 0..v.len() {
                lo.0[d] = lo.0[d].min(v[d]);
                hi.0[d] = hi.0[d].max(v[d]);
            }
        }
        Some((lo, hi))
    }

    fn same_system(&self, other: &VectorGraph) -> bool {
        Arc::ptr_eq(&self.sys, &other.sys) || self.sys == other.sys
    }
}

impl PartialEq for VectorGraph {
    fn eq(&self, other: &Self) -> bool {
        self.edges == other.edges && self.same_system(other)
    }
}

impl Eq for VectorGraph {}

impl PartialOrd for VectorGraph {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VectorGraph {
    fn cmp(&self, other: &Self) -> Ordering {
        self.edges.cmp(&other.edges).then_with(|| {
            if Arc::ptr_eq(&self.sys, &other.sys) {
                Ordering::Equal
            } else {
                self.sys.cmp(&other.sys)
            }
        })
    }
}

impl fmt::Debug for VectorGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("VectorGraph{")?;
        for (i, ((t, v), c)) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t:?}+s{}", v + 1)?;
            if *c > 1 {
                write!(f, "x{c}")?;
            }
        }
        f.write_str("}")
    }
}

/// λ(v): copies of each edge vector leaving `v` minus copies entering it.
pub fn vertex_cut(g: &VectorGraph, v: &Coord) -> Result<Vec<i64>, GraphError> {
    let n = g.sys.n();
    let mut cut = vec![0i64; n];
    let mut incident = false;
    for (i, slot) in cut.iter_mut().enumerate() {
        let out = g.count(v, i);
        let inc = g.count(&v.minus(g.sys.column(i)), i);
        incident |= out > 0 || inc > 0;
        *slot = i64::from(out) - i64::from(inc);
    }
    if incident {
        Ok(cut)
    } else {
        Err(GraphError::VertexNotFound(v.clone()))
    }
}

/// One step of a walk: a particular copy of an edge, traversed in whichever
/// direction leaves the current vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkStep {
    pub edge: EdgeInstance,
    pub copy: u32,
}

/// An alternating vertex/edge sequence given by its start vertex and steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub start: Coord,
    pub steps: Vec<WalkStep>,
}

impl Walk {
    /// Vertex sequence `v0, v1, ..., vL`.
    pub fn vertices(&self) -> Vec<Coord> {
        let mut out = vec![self.start.clone()];
        let mut cur = self.start.clone();
        for s in &self.steps {
            cur = if cur == s.edge.tail {
                s.edge.head.clone()
            } else {
                s.edge.tail.clone()
            };
            out.push(cur.clone());
        }
        out
    }
}

/// χ(C): signed traversal counts of each edge vector along a cycle.
pub fn cycle_vector(g: &VectorGraph, walk: &Walk) -> Result<Vec<i64>, WalkError> {
    let mut chi = vec![0i64; g.sys.n()];
    let mut cur = walk.start.clone();
    let mut seen = BTreeSet::new();
    if walk.steps.is_empty() {
        return Err(WalkError::NotACycle(cur));
    }
    for (idx, step) in walk.steps.iter().enumerate() {
        let e = &step.edge;
        let valid = e.vec_index < g.sys.n()
            && e.tail.len() == g.sys.k()
            && g.head_of(&e.tail, e.vec_index) == e.head
            && g.count(&e.tail, e.vec_index) > step.copy;
        if !valid {
            return Err(WalkError::EdgeNotInGraph(e.clone(), step.copy));
        }
        if idx > 0 && !seen.insert(cur.clone()) {
            return Err(WalkError::NotACycle(cur));
        }
        if cur == e.tail {
            chi[e.vec_index] += 1;
            cur = e.head.clone();
        } else if cur == e.head {
            chi[e.vec_index] -= 1;
            cur = e.tail.clone();
        } else {
            return Err(WalkError::Discontinuous(idx));
        }
        if cur == walk.start && idx + 1 < walk.steps.len() {
            return Err(WalkError::NotACycle(cur));
        }
    }
    if cur != walk.start {
        return Err(WalkError::NotClosed);
    }
    Ok(chi)
}

/// Fundamental cycles of a breadth-first spanning forest.
///
/// Vertices are visited in sorted order and every copy of a parallel edge is
/// a separate multigraph edge, so the result is deterministic. Each cycle
/// starts at the tail of its non-tree edge and traverses that edge forward.
pub fn cycle_basis(g: &VectorGraph) -> Vec<Walk> {
    let verts = g.vertices();
    let index: BTreeMap<&Coord, usize> = verts.iter().enumerate().map(|(i, v)| (v, i)).collect();

    struct Half {
        tail: usize,
        head: usize,
        edge: EdgeInstance,
        copy: u32,
    }
    let mut all = Vec::new();
    for (e, count) in g.edges() {
        let (t, h) = (index[&e.tail], index[&e.head]);
        for copy in 0..count {
            all.push(Half {
                tail: t,
                head: h,
                edge: e.clone(),
                copy,
            });
        }
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); verts.len()];
    for (id, h) in all.iter().enumerate() {
        adj[h.tail].push(id);
        adj[h.head].push(id);
    }

    // parent edge id and depth for each vertex
    let mut parent: Vec<Option<usize>> = vec![None; verts.len()];
    let mut depth: Vec<usize> = vec![usize::MAX; verts.len()];
    let mut in_tree = vec![false; all.len()];
    for root in 0..verts.len() {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &id in &adj[v] {
                let w = if all[id].tail == v { all[id].head } else { all[id].tail };
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    parent[w] = Some(id);
                    in_tree[id] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let other = |id: usize, v: usize| if all[id].tail == v { all[id].head } else { all[id].tail };

    let mut cycles = Vec::new();
    for (id, h) in all.iter().enumerate() {
        if in_tree[id] {
            continue;
        }
        // head .. lca, then lca .. tail
        let (mut a, mut b) = (h.head, h.tail);
        let mut up_from_head = Vec::new();
        let mut up_from_tail = Vec::new();
        while a != b {
            if depth[a] >= depth[b] {
                let pe = parent[a].expect("non-root");
                up_from_head.push(pe);
                a = other(pe, a);
            } else {
                let pe = parent[b].expect("non-root");
                up_from_tail.push(pe);
                b = other(pe, b);
            }
        }
        let mut steps = vec![WalkStep {
            edge: h.edge.clone(),
            copy: h.copy,
        }];
        for &pe in up_from_head.iter().chain(up_from_tail.iter().rev()) {
            steps.push(WalkStep {
                edge: all[pe].edge.clone(),
                copy: all[pe].copy,
            });
        }
        cycles.push(Walk {
            start: verts[h.tail].clone(),
            steps,
        });
    }
    cycles
}

/// Cycle vectors of the fundamental cycles.
pub fn fundamental_cycle_vectors(g: &VectorGraph) -> Vec<Vec<i64>> {
    cycle_basis(g)
        .iter()
        .map(|w| cycle_vector(g, w).expect("fundamental cycles are cycles of g"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KirchhoffVerdict {
    Ok,
    BadVertex { vertex: Coord, cut: Vec<i64> },
    BadCycle { cycle: Vec<i64> },
    CycleSpaceDeficient { found: usize, required: usize },
    Trivial,
}

impl KirchhoffVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, KirchhoffVerdict::Ok)
    }
}

/// Checks both Kirchhoff conditions: every vertex cut in `Row(R)`, and the
/// fundamental cycle vectors lie in `Null(R)` and span it.
pub fn is_kirchhoff(g: &VectorGraph) -> KirchhoffVerdict {
    if g.is_empty() {
        return KirchhoffVerdict::Trivial;
    }
    for (vertex, cut) in g.all_cuts() {
        if !g.sys.row_space_contains(&cut) {
            return KirchhoffVerdict::BadVertex { vertex, cut };
        }
    }
    let chis = fundamental_cycle_vectors(g);
    if let Some(bad) = chis.iter().find(|c| !g.sys.null_space_contains(c)) {
        return KirchhoffVerdict::BadCycle { cycle: bad.clone() };
    }
    let required = g.sys.n() - g.sys.k();
    let found = span_rank(&chis);
    if found != required {
        return KirchhoffVerdict::CycleSpaceDeficient { found, required };
    }
    KirchhoffVerdict::Ok
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multiplicity {
    pub counts: Vec<u32>,
    pub uniform: bool,
    /// Common count, when uniform.
    pub m: Option<u32>,
}

pub fn multiplicity(g: &VectorGraph) -> Multiplicity {
    let mut counts = vec![0u32; g.sys.n()];
    for ((_, i), &c) in &g.edges {
        counts[*i] += c;
    }
    let uniform = counts.windows(2).all(|w| w[0] == w[1]);
    let m = uniform.then(|| counts[0]);
    Multiplicity { counts, uniform, m }
}

/// Every pair of edge vectors shares some cycle on which both are nonzero.
///
/// Tested on the rational span of the fundamental cycle vectors: a pair is
/// covered iff neither coordinate vanishes identically on the span.
pub fn is_vector_2_connected(g: &VectorGraph) -> bool {
    let chis = fundamental_cycle_vectors(g);
    let n = g.sys.n();
    (0..n).all(|i| chis.iter().any(|c| c[i] != 0))
}

/// Point reflection through the origin followed by edge reversal, canonicalized.
pub fn chiral(g: &VectorGraph) -> VectorGraph {
    let reflected = VectorGraph {
        sys: g.sys.clone(),
        edges: g
            .edges
            .iter()
            .map(|((t, i), &c)| ((g.head_of(t, *i).neg(), *i), c))
            .collect(),
    };
    canonicalize(&reflected)
}

pub fn is_self_chiral(g: &VectorGraph) -> bool {
    chiral(g) == canonicalize(g)
}

/// Translates `g` so its lexicographically smallest vertex is the origin.
pub fn canonicalize(g: &VectorGraph) -> VectorGraph {
    match g.min_vertex() {
        Some(min) if !is_zero_vec(&min) => g.translated(&min.neg()),
        _ => g.clone(),
    }
}

pub fn equals_up_to_translation(a: &VectorGraph, b: &VectorGraph) -> Result<bool, GraphError> {
    if !a.same_system(b) {
        return Err(GraphError::SystemMismatch);
    }
    Ok(canonicalize(a) == canonicalize(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{build_row_system, in_null_space, RationalMatrix};

    fn sys(rows: &[[i64; 4]]) -> Arc<RowSystem> {
        Arc::new(build_row_system(&RationalMatrix::from_integer_rows(rows).unwrap()).unwrap())
    }

    fn r1() -> Arc<RowSystem> {
        sys(&[[2, 0, 1, 1], [0, 2, 1, -1]])
    }

    fn tri() -> Arc<RowSystem> {
        Arc::new(
            build_row_system(&RationalMatrix::from_integer_rows(&[[1, 0, 1], [0, 1, 1]]).unwrap()).unwrap(),
        )
    }

    fn c(x: &[i64]) -> Coord {
        Coord(x.to_vec())
    }

    fn graph(s: &Arc<RowSystem>, edges: &[(&[i64], usize, u32)]) -> VectorGraph {
        VectorGraph::from_tails(s.clone(), edges.iter().map(|(t, i, n)| (c(t), *i, *n))).unwrap()
    }

    fn step(g: &VectorGraph, tail: &[i64], i: usize, copy: u32) -> WalkStep {
        WalkStep {
            edge: EdgeInstance {
                tail: c(tail),
                head: g.head_of(&c(tail), i),
                vec_index: i,
            },
            copy,
        }
    }

    #[test]
    fn cuts_of_single_edge() {
        let s = r1();
        let g = graph(&s, &[(&[0, 0], 0, 1)]);
        assert_eq!(vertex_cut(&g, &c(&[0, 0])).unwrap(), vec![1, 0, 0, 0]);
        assert_eq!(vertex_cut(&g, &c(&[2, 0])).unwrap(), vec![-1, 0, 0, 0]);
        assert_eq!(
            vertex_cut(&g, &c(&[5, 5])),
            Err(GraphError::VertexNotFound(c(&[5, 5])))
        );
    }

    #[test]
    fn cut_with_pass_through() {
        let s = r1();
        let g = graph(&s, &[(&[-2, 0], 0, 1), (&[0, 0], 0, 1), (&[0, 0], 1, 1)]);
        assert_eq!(vertex_cut(&g, &c(&[0, 0])).unwrap(), vec![0, 1, 0, 0]);
    }

    #[test]
    fn rejects_inconsistent_instances() {
        let s = r1();
        let bad = EdgeInstance {
            tail: c(&[0, 0]),
            head: c(&[1, 0]),
            vec_index: 0,
        };
        assert!(matches!(
            VectorGraph::from_instances(s, [(bad, 1)]),
            Err(GraphError::Inconsistent { .. })
        ));
    }

    #[test]
    fn cycle_vector_examples() {
        let s = r1();
        // s3 then s4 forward from the origin, s1 back
        let g = graph(&s, &[(&[0, 0], 2, 1), (&[1, 1], 3, 1), (&[0, 0], 0, 1)]);
        let walk = Walk {
            start: c(&[0, 0]),
            steps: vec![step(&g, &[0, 0], 2, 0), step(&g, &[1, 1], 3, 0), step(&g, &[0, 0], 0, 0)],
        };
        let chi = cycle_vector(&g, &walk).unwrap();
        assert_eq!(chi, vec![-1, 0, 1, 1]);
        assert_eq!(in_null_space(&chi, &s), Ok(true));

        let back_forth = Walk {
            start: c(&[0, 0]),
            steps: vec![step(&g, &[0, 0], 0, 0), step(&g, &[0, 0], 0, 0)],
        };
        assert_eq!(cycle_vector(&g, &back_forth).unwrap(), vec![0, 0, 0, 0]);

        let t = tri();
        let tg = graph(&t, &[(&[0, 0], 0, 1), (&[1, 0], 1, 1), (&[0, 0], 2, 1)]);
        let walk = Walk {
            start: c(&[0, 0]),
            steps: vec![step(&tg, &[0, 0], 0, 0), step(&tg, &[1, 0], 1, 0), step(&tg, &[0, 0], 2, 0)],
        };
        assert_eq!(cycle_vector(&tg, &walk).unwrap(), vec![1, 1, -1]);
    }

    #[test]
    fn cycle_vector_errors() {
        let s = r1();
        let g = graph(&s, &[(&[0, 0], 2, 1), (&[1, 1], 3, 1), (&[0, 0], 0, 1)]);
        let open = Walk {
            start: c(&[0, 0]),
            steps: vec![step(&g, &[0, 0], 2, 0)],
        };
        assert_eq!(cycle_vector(&g, &open), Err(WalkError::NotClosed));
        let missing = Walk {
            start: c(&[0, 0]),
            steps: vec![step(&g, &[0, 0], 1, 0)],
        };
        assert!(matches!(cycle_vector(&g, &missing), Err(WalkError::EdgeNotInGraph(..))));
        let second_copy = Walk {
            start: c(&[0, 0]),
            steps: vec![step(&g, &[0, 0], 2, 1)],
        };
        assert!(matches!(cycle_vector(&g, &second_copy), Err(WalkError::EdgeNotInGraph(..))));
        // figure-eight through the origin twice
        let fig8 = Walk {
            start: c(&[0, 0]),
            steps: vec![
                step(&g, &[0, 0], 2, 0),
                step(&g, &[1, 1], 3, 0),
                step(&g, &[0, 0], 0, 0),
                step(&g, &[0, 0], 2, 0),
                step(&g, &[1, 1], 3, 0),
                step(&g, &[0, 0], 0, 0),
            ],
        };
        assert!(matches!(cycle_vector(&g, &fig8), Err(WalkError::NotACycle(_))));
    }

    #[test]
    fn cycle_basis_shapes() {
        let s = r1();
        let path = graph(&s, &[(&[0, 0], 0, 1), (&[2, 0], 1, 1)]);
        assert!(cycle_basis(&path).is_empty());

        let t = tri();
        let tg = graph(&t, &[(&[0, 0], 0, 1), (&[1, 0], 1, 1), (&[0, 0], 2, 1)]);
        let basis = cycle_basis(&tg);
        assert_eq!(basis.len(), 1);
        let chi = cycle_vector(&tg, &basis[0]).unwrap();
        assert!(chi == vec![1, 1, -1] || chi == vec![-1, -1, 1]);

        let doubled = graph(&s, &[(&[0, 0], 0, 2)]);
        let basis = cycle_basis(&doubled);
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].steps[0].copy, 1);
        assert_eq!(basis[0].steps[1].copy, 0);
        assert_eq!(cycle_vector(&doubled, &basis[0]).unwrap(), vec![0, 0, 0, 0]);
    }

    #[test]
    fn verdicts_on_small_graphs() {
        let s = r1();
        assert_eq!(is_kirchhoff(&VectorGraph::empty(s.clone())), KirchhoffVerdict::Trivial);
        let single = graph(&s, &[(&[0, 0], 0, 1)]);
        assert_eq!(
            is_kirchhoff(&single),
            KirchhoffVerdict::BadVertex {
                vertex: c(&[0, 0]),
                cut: vec![1, 0, 0, 0]
            }
        );
        let t = tri();
        let tg = graph(&t, &[(&[0, 0], 0, 1), (&[1, 0], 1, 1), (&[0, 0], 2, 1)]);
        assert_eq!(is_kirchhoff(&tg), KirchhoffVerdict::Ok);
        assert!(is_vector_2_connected(&tg));
        assert!(!is_vector_2_connected(&single));
        assert!(!is_vector_2_connected(&VectorGraph::empty(s)));
    }

    #[test]
    fn multiplicity_counts() {
        let s = r1();
        let e = multiplicity(&VectorGraph::empty(s.clone()));
        assert_eq!(e.counts, vec![0; 4]);
        assert!(e.uniform);
        assert_eq!(e.m, Some(0));
        let g = graph(&s, &[(&[0, 0], 0, 1), (&[0, 0], 1, 1)]);
        let m = multiplicity(&g);
        assert_eq!(m.counts, vec![1, 1, 0, 0]);
        assert!(!m.uniform);
        assert_eq!(m.m, None);
    }

    #[test]
    fn canonical_forms() {
        let s = r1();
        let g = graph(&s, &[(&[0, 0], 2, 1), (&[1, 1], 3, 1), (&[0, 0], 0, 1)]);
        assert_eq!(canonicalize(&g), g);
        let moved = g.translated(&[3, -1]);
        assert_ne!(moved, g);
        assert_eq!(canonicalize(&moved), g);
        assert_eq!(equals_up_to_translation(&g, &moved), Ok(true));
        let e = VectorGraph::empty(s.clone());
        assert_eq!(equals_up_to_translation(&e, &e), Ok(true));
        assert_eq!(
            equals_up_to_translation(&g, &VectorGraph::empty(tri())),
            Err(GraphError::SystemMismatch)
        );
    }

    #[test]
    fn chiral_basics() {
        let s = r1();
        let e = VectorGraph::empty(s.clone());
        assert_eq!(chiral(&e), e);
        let g = graph(&s, &[(&[0, 0], 2, 1), (&[1, 1], 3, 2), (&[0, 0], 0, 1)]);
        let ch = chiral(&g);
        assert_eq!(multiplicity(&ch), multiplicity(&g));
        assert_eq!(ch.vertex_count(), g.vertex_count());
        assert_eq!(chiral(&ch), canonicalize(&g));
    }
}
