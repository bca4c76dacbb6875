//! Partial 2-tree recognition and completion to a spanning 2-tree.
//!
//! Recognition repeatedly eliminates the lowest-numbered vertex of degree at
//! most two, joining the two neighbours of an eliminated degree-2 vertex by a
//! fill edge. A graph is a partial 2-tree exactly when this empties it. When
//! it gets stuck, the remaining kernel has minimum degree three and a
//! `K4`-minor certificate is extracted from it.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, VecDeque};

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::graph::{Graph, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpError {
    #[error("graph is not a partial 2-tree")]
    NotPartialTwoTree,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph needs at least {0} vertices")]
    TooSmall(usize),
    #[error("{{{0}, {1}}} is not an edge of the 2-tree")]
    NotHostEdge(usize, usize),
}

/// Four pairwise adjacent, connected, disjoint branch sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct K4MinorCertificate {
    pub branch_sets: [VertexSet; 4],
}

impl K4MinorCertificate {
    /// Checks the certificate against `g`: disjoint non-empty sets, each
    /// inducing a connected subgraph, every pair joined by an edge.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let mut owner = vec![usize::MAX; g.n()];
        for (i, set) in self.branch_sets.iter().enumerate() {
            if set.is_empty() {
                return false;
            }
            for &v in set {
                if v >= g.n() || owner[v] != usize::MAX {
                    return false;
                }
                owner[v] = i;
            }
        }
        for (i, set) in self.branch_sets.iter().enumerate() {
            let start = *set.iter().next().unwrap();
            let mut seen = VertexSet::from([start]);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in g.neighbors(u) {
                    if owner[w] == i && seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            if seen.len() != set.len() {
                return false;
            }
        }
        let mut joined = [[false; 4]; 4];
        for (u, v) in g.edges() {
            let (a, b) = (owner[u], owner[v]);
            if a != usize::MAX && b != usize::MAX && a != b {
                joined[a][b] = true;
                joined[b][a] = true;
            }
        }
        (0..4).all(|a| (0..4).all(|b| a == b || joined[a][b]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recognition {
    /// Accepted; the full order in which vertices were eliminated.
    PartialTwoTree { elimination_order: Vec<usize> },
    Rejected(K4MinorCertificate),
}

impl Recognition {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Recognition::PartialTwoTree { .. })
    }
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Working state of the degree-≤2 elimination. Original neighbours are read
/// straight from the graph; fill edges get a per-vertex min-heap. Entries of
/// eliminated vertices are skipped lazily and live degrees are counted
/// separately, so hubs never get rescanned.
struct Eliminator<'g> {
    g: &'g Graph,
    // live degree, or GONE once eliminated
    deg: Vec<u32>,
    // first possibly-live position in the sorted original neighbour list
    cursor: Vec<u32>,
    fill_adj: Vec<BinaryHeap<Reverse<u32>>>,
    fill: FxHashSet<(usize, usize)>,
    alive: usize,
    // min-heap of candidates; stale entries are skipped when popped
    eligible: BinaryHeap<Reverse<u32>>,
    // fill edge -> the eliminated vertex that created it (certificates only)
    via: Option<FxHashMap<(usize, usize), usize>>,
}

const GONE: u32 = u32::MAX;

impl<'g> Eliminator<'g> {
    fn new(g: &'g Graph, track_fill: bool) -> Eliminator<'g> {
        let n = g.n();
        assert!(n < GONE as usize, "graph too large");
        let deg: Vec<u32> = (0..n).map(|v| g.degree(v) as u32).collect();
        let eligible = (0..n as u32).filter(|&v| deg[v as usize] <= 2).map(Reverse).collect();
        Eliminator {
            g,
            deg,
            cursor: vec![0; n],
            fill_adj: (0..n).map(|_| BinaryHeap::new()).collect(),
            fill: FxHashSet::default(),
            alive: n,
            eligible,
            via: track_fill.then(FxHashMap::default),
        }
    }

    fn removed(&self, v: usize) -> bool {
        self.deg[v] == GONE
    }

    fn has_edge(&self, a: usize, b: usize) -> bool {
        self.g.has_edge(a, b)
            || (!self.fill_adj[a].is_empty() && !self.fill_adj[b].is_empty() && self.fill.contains(&key(a, b)))
    }

    fn live_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let fill = self.fill_adj[v].iter().map(|r| r.0 as usize);
        self.g.neighbors(v)[self.cursor[v] as usize..]
            .iter()
            .copied()
            .chain(fill)
            .filter(|&w| !self.removed(w))
    }

    /// Lowest-numbered live neighbour of `u`.
    fn lowest_neighbor(&mut self, u: usize) -> Option<usize> {
        let orig = self.g.neighbors(u);
        let mut c = self.cursor[u] as usize;
        while c < orig.len() && self.deg[orig[c]] == GONE {
            c += 1;
        }
        self.cursor[u] = c as u32;
        let heap = &mut self.fill_adj[u];
        while let Some(&Reverse(w)) = heap.peek() {
            if self.deg[w as usize] != GONE {
                break;
            }
            heap.pop();
        }
        let a = orig.get(c).copied();
        let b = heap.peek().map(|r| r.0 as usize);
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }

    /// Eliminates `v`, returning its neighbours at that moment in ascending order.
    fn eliminate(&mut self, v: usize) -> SmallVec<[usize; 2]> {
        let mut nbrs: SmallVec<[usize; 2]> = self.live_neighbors(v).collect();
        nbrs.sort_unstable();
        debug_assert!(nbrs.len() <= 2);
        self.fill_adj[v] = BinaryHeap::new();
        self.deg[v] = GONE;
        self.alive -= 1;
        for &u in &nbrs {
            self.deg[u] -= 1;
        }
        if let [a, b] = nbrs[..] {
            if !self.has_edge(a, b) {
                self.fill.insert(key(a, b));
                self.fill_adj[a].push(Reverse(b as u32));
                self.fill_adj[b].push(Reverse(a as u32));
                self.deg[a] += 1;
                self.deg[b] += 1;
                if let Some(via) = &mut self.via {
                    via.insert(key(a, b), v);
                }
            }
        }
        for &u in &nbrs {
            if self.deg[u] <= 2 {
                self.eligible.push(Reverse(u as u32));
            }
        }
        nbrs
    }

    fn next(&mut self) -> Option<usize> {
        while let Some(&Reverse(v)) = self.eligible.peek() {
            if self.deg[v as usize] <= 2 {
                return Some(v as usize);
            }
            self.eligible.pop();
        }
        None
    }

    /// Interior vertices of a path in the input graph realising the current
    /// working edge `a -> b`, in order from `a`.
    fn witness(&self, a: usize, b: usize) -> Vec<usize> {
        let mut out = Vec::new();
        // explicit stack: (from, to) pairs still to expand, or a vertex to emit
        enum Item {
            Expand(usize, usize),
            Emit(usize),
        }
        let mut stack = vec![Item::Expand(a, b)];
        while let Some(item) = stack.pop() {
            match item {
                Item::Emit(v) => out.push(v),
                Item::Expand(x, y) => {
                    let via = self.via.as_ref().expect("fill edges tracked");
                    if let Some(&v) = via.get(&key(x, y)) {
                        stack.push(Item::Expand(v, y));
                        stack.push(Item::Emit(v));
                        stack.push(Item::Expand(x, v));
                    }
                }
            }
        }
        out
    }
}

/// True iff `g` is a partial 2-tree (treewidth at most two).
pub fn is_partial_two_tree(g: &Graph) -> bool {
    let mut el = Eliminator::new(g, false);
    while let Some(v) = el.next() {
        el.eliminate(v);
    }
    el.alive == 0
}

/// Decides partial-2-tree membership. On rejection a `K4`-minor certificate
/// for `g` is returned.
pub fn recognize_partial_two_tree(g: &Graph) -> Recognition {
    let mut el = Eliminator::new(g, true);
    let mut order = Vec::with_capacity(g.n());
    while let Some(v) = el.next() {
        el.eliminate(v);
        order.push(v);
    }
    if el.alive == 0 {
        return Recognition::PartialTwoTree { elimination_order: order };
    }
    let cert = certificate_from_kernel(g, &el);
    debug_assert!(cert.is_valid_for(g));
    Recognition::Rejected(cert)
}

/// The kernel left by a stuck elimination is a topological minor of `g`:
/// each kernel edge is realised by a path of `g` whose interior consists of
/// eliminated vertices, and these paths are internally disjoint. Deleting
/// kernel edges while the kernel stays non-series-parallel leaves a
/// subdivision of `K4`, which lifts to a subdivision of `K4` in `g`.
fn certificate_from_kernel(g: &Graph, el: &Eliminator) -> K4MinorCertificate {
    let mut kernel_edges: Vec<(usize, usize)> = (0..g.n())
        .filter(|&v| !el.removed(v))
        .flat_map(|u| el.live_neighbors(u).filter(move |&w| u < w).map(move |w| (u, w)))
        .collect();
    kernel_edges.sort_unstable();
    let kept = minimize_edges(g.n(), kernel_edges);

    // lift to g
    let mut sub_adj: FxHashMap<usize, Vec<usize>> = FxHashMap::default();
    for &(a, b) in &kept {
        let mut walk = vec![a];
        walk.extend(el.witness(a, b));
        walk.push(b);
        for w in walk.windows(2) {
            sub_adj.entry(w[0]).or_default().push(w[1]);
            sub_adj.entry(w[1]).or_default().push(w[0]);
        }
    }
    let mut branch: Vec<usize> = sub_adj
        .iter()
        .filter(|(_, nb)| nb.len() == 3)
        .map(|(&v, _)| v)
        .collect();
    branch.sort_unstable();
    assert_eq!(branch.len(), 4, "minimal non-series-parallel subgraph must subdivide K4");

    let mut sets: [VertexSet; 4] = Default::default();
    for (i, &b) in branch.iter().enumerate() {
        sets[i].insert(b);
    }
    // Walk each subdivided edge from its lower branch vertex and give its
    // interior to that branch set.
    for (i, &b) in branch.iter().enumerate() {
        for &first in &sub_adj[&b] {
            let mut prev = b;
            let mut cur = first;
            let mut interior = Vec::new();
            while !branch.contains(&cur) {
                interior.push(cur);
                let next = sub_adj[&cur].iter().copied().find(|&x| x != prev).unwrap();
                prev = cur;
                cur = next;
            }
            if b < cur {
                sets[i].extend(interior);
            }
        }
    }
    K4MinorCertificate { branch_sets: sets }
}

/// Deletes edges (in shrinking blocks, then one at a time) while the
/// remaining edge set still fails to be series-parallel.
fn minimize_edges(n: usize, mut kept: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
    let still_bad = |edges: &[(usize, usize)]| {
        let g = Graph::from_edges(n, edges).expect("kernel edges are simple");
        !is_partial_two_tree(&g)
    };
    let mut chunk = (kept.len() / 2).max(1);
    loop {
        let mut i = 0;
        while i < kept.len() {
            let end = (i + chunk).min(kept.len());
            let candidate: Vec<_> = kept[..i].iter().chain(&kept[end..]).copied().collect();
            if still_bad(&candidate) {
                kept = candidate;
            } else {
                i = end;
            }
        }
        if chunk == 1 {
            return kept;
        }
        chunk = (chunk / 2).max(1);
    }
}

/// A spanning 2-tree `T(G)` containing `G`, with each host edge flagged as
/// real (present in `G`) or virtual.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "EmbeddingRepr", try_from = "EmbeddingRepr")]
pub struct TwoTreeEmbedding {
    pub host: Graph,
    /// Parallel to `host.edges()`.
    pub real: Vec<bool>,
    /// The first `n - 2` eliminated vertices; the two remaining form `base_edge`.
    pub elimination_order: Vec<usize>,
    pub base_edge: (usize, usize),
}

#[derive(Serialize, Deserialize)]
struct EdgeRepr {
    u: usize,
    v: usize,
    real: bool,
}

#[derive(Serialize, Deserialize)]
struct EmbeddingRepr {
    n: usize,
    edges: Vec<EdgeRepr>,
    elimination_order: Vec<usize>,
    base_edge: (usize, usize),
}

impl From<TwoTreeEmbedding> for EmbeddingRepr {
    fn from(e: TwoTreeEmbedding) -> Self {
        EmbeddingRepr {
            n: e.host.n(),
            edges: e
                .host
                .edges()
                .zip(&e.real)
                .map(|((u, v), &real)| EdgeRepr { u, v, real })
                .collect(),
            elimination_order: e.elimination_order,
            base_edge: e.base_edge,
        }
    }
}

impl TryFrom<EmbeddingRepr> for TwoTreeEmbedding {
    type Error = crate::graph::GraphError;

    fn try_from(r: EmbeddingRepr) -> Result<Self, Self::Error> {
        let mut edges: Vec<_> = r.edges.iter().map(|e| (key(e.u, e.v), e.real)).collect();
        edges.sort_unstable();
        let host = Graph::from_edges(r.n, &edges.iter().map(|e| e.0).collect::<Vec<_>>())?;
        Ok(TwoTreeEmbedding {
            host,
            real: edges.iter().map(|e| e.1).collect(),
            elimination_order: r.elimination_order,
            base_edge: r.base_edge,
        })
    }
}

impl TwoTreeEmbedding {
    pub fn n(&self) -> usize {
        self.host.n()
    }

    /// Whether the host edge `{u, v}` is an edge of the input graph.
    pub fn is_real(&self, u: usize, v: usize) -> Option<bool> {
        let (a, b) = key(u, v);
        let start: usize = (0..a).map(|x| self.host.neighbors(x).iter().filter(|&&y| y > x).count()).sum();
        let offset = self.host.neighbors(a).iter().filter(|&&y| y > a).position(|&y| y == b)?;
        Some(self.real[start + offset])
    }

    /// Rank of each vertex in the elimination (base vertices last).
    pub fn rank(&self) -> Vec<usize> {
        let mut rank = vec![usize::MAX; self.n()];
        for (i, &v) in self.elimination_order.iter().enumerate() {
            rank[v] = i;
        }
        let k = self.elimination_order.len();
        rank[self.base_edge.0] = k;
        rank[self.base_edge.1] = k + 1;
        rank
    }

    /// For each eliminated vertex, its two host neighbours eliminated later.
    pub fn attachments(&self) -> Vec<(usize, [usize; 2])> {
        let rank = self.rank();
        self.elimination_order
            .iter()
            .map(|&v| {
                let later: Vec<usize> = self
                    .host
                    .neighbors(v)
                    .iter()
                    .copied()
                    .filter(|&w| rank[w] > rank[v])
                    .collect();
                assert_eq!(later.len(), 2, "vertex {v} must attach to exactly one host edge");
                (v, [later[0], later[1]])
            })
            .collect()
    }
}

/// Completes a connected partial 2-tree to a spanning 2-tree. Deterministic:
/// the lowest-numbered eligible vertex is always eliminated first, and a
/// vertex with a single remaining neighbour `u` is attached to `u` and the
/// lowest-numbered other neighbour of `u`.
pub fn complete_to_two_tree(g: &Graph) -> Result<TwoTreeEmbedding, SpError> {
    if g.n() < 2 {
        return Err(SpError::TooSmall(2));
    }
    if !g.is_connected() {
        return Err(SpError::Disconnected);
    }
    let mut el = Eliminator::new(g, false);
    let mut host_edges = Vec::with_capacity(2 * g.n() - 3);
    let mut order = Vec::with_capacity(g.n() - 2);
    while el.alive > 2 {
        let v = el.next().ok_or(SpError::NotPartialTwoTree)?;
        let nbrs = el.eliminate(v);
        match nbrs[..] {
            [a, b] => {
                host_edges.push(key(v, a));
                host_edges.push(key(v, b));
            }
            [u] => {
                let w = el.lowest_neighbor(u).expect("connected graph keeps u attached");
                host_edges.push(key(v, u));
                host_edges.push(key(v, w));
            }
            _ => unreachable!("isolated vertex in a connected graph with three or more vertices"),
        }
        order.push(v);
    }
    let rest: Vec<usize> = (0..g.n()).filter(|&v| !el.removed(v)).collect();
    let base = (rest[0], rest[1]);
    host_edges.push(base);
    let host = Graph::assemble(g.n(), &host_edges);
    let real = host.edges().map(|(u, v)| g.has_edge(u, v)).collect();
    Ok(TwoTreeEmbedding {
        host,
        real,
        elimination_order: order,
        base_edge: base,
    })
}

/// True iff `t` is a 2-tree: a single edge, or it has a degree-2 vertex with
/// adjacent neighbours whose removal leaves a 2-tree.
pub fn is_two_tree(t: &Graph) -> bool {
    let n = t.n();
    if n < 2 || t.m() != 2 * n - 3 {
        return false;
    }
    let mut adj: Vec<BTreeSet<usize>> =
        (0..n).map(|v| t.neighbors(v).iter().copied().collect()).collect();
    let mut stack: Vec<usize> = (0..n).filter(|&v| adj[v].len() == 2).collect();
    let mut alive = n;
    let mut gone = vec![false; n];
    while alive > 2 {
        let Some(v) = stack.pop() else { return false };
        if gone[v] || adj[v].len() != 2 {
            continue;
        }
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        if !adj[nb[0]].contains(&nb[1]) {
            return false;
        }
        gone[v] = true;
        alive -= 1;
        adj[v].clear();
        for &u in &nb {
            adj[u].remove(&v);
            if adj[u].len() == 2 {
                stack.push(u);
            }
        }
    }
    let rest: Vec<usize> = (0..n).filter(|&v| !gone[v]).collect();
    adj[rest[0]].contains(&rest[1])
}

/// Checks that `e` is a 2-tree on `V(G)` whose real flags mark exactly
/// `E(G)`, and that its elimination order is a valid 2-tree construction.
pub fn validate_embedding(e: &TwoTreeEmbedding, g: &Graph) -> bool {
    let n = g.n();
    if e.host.n() != n || e.real.len() != e.host.m() || !is_two_tree(&e.host) {
        return false;
    }
    let flags_exact = e.host.edges().zip(&e.real).all(|((u, v), &r)| r == g.has_edge(u, v));
    let covered = e.real.iter().filter(|&&r| r).count() == g.m();
    if !flags_exact || !covered {
        return false;
    }
    // the order must be a permutation ending in the base edge
    if e.elimination_order.len() + 2 != n || !e.host.has_edge(e.base_edge.0, e.base_edge.1) {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in e.elimination_order.iter().chain([&e.base_edge.0, &e.base_edge.1]) {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    let rank = e.rank();
    e.elimination_order.iter().all(|&v| {
        let later: Vec<usize> =
            e.host.neighbors(v).iter().copied().filter(|&w| rank[w] > rank[v]).collect();
        later.len() == 2 && e.host.has_edge(later[0], later[1])
    })
}

/// `C_{{x,y},z}`: the part of `G` inside the `{x,y}`-bridge of the host
/// containing `z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub anchor: (usize, usize),
    pub direction: usize,
    pub vertices: VertexSet,
    pub interior: VertexSet,
}

impl Component {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

fn common_neighbors(g: &Graph, x: usize, y: usize) -> Vec<usize> {
    let (a, b) = (g.neighbors(x), g.neighbors(y));
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// All components generated by the virtual edge `{x, y}`, one per common
/// host neighbour `z`, ordered by `z`.
pub fn components_of_virtual_edge(
    e: &TwoTreeEmbedding,
    x: usize,
    y: usize,
) -> Result<Vec<Component>, SpError> {
    if !e.host.has_edge(x, y) {
        return Err(SpError::NotHostEdge(x, y));
    }
    let anchor = key(x, y);
    Ok(common_neighbors(&e.host, x, y)
        .into_iter()
        .map(|z| {
            let mut interior = VertexSet::from([z]);
            let mut queue = VecDeque::from([z]);
            while let Some(u) = queue.pop_front() {
                for &w in e.host.neighbors(u) {
                    if w != x && w != y && interior.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            let mut vertices = interior.clone();
            vertices.insert(x);
            vertices.insert(y);
            Component { anchor, direction: z, vertices, interior }
        })
        .collect())
}

/// All host triangles as sorted triples, in lexicographic order.
pub fn virtual_triangles(e: &TwoTreeEmbedding) -> Result<Vec<[usize; 3]>, SpError> {
    if e.n() < 3 {
        return Err(SpError::TooSmall(3));
    }
    let mut out = Vec::with_capacity(e.n() - 2);
    for (a, b) in e.host.edges() {
        for c in common_neighbors(&e.host, a, b) {
            if c > b {
                out.push([a, b, c]);
            }
        }
    }
    Ok(out)
}
