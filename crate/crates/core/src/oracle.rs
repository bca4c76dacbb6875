//! Exhaustive ground truth for small graphs: every longest path, the
//! Gallai set by intersection, Hamiltonicity, exact treewidth and
//! isomorphism. Vertex sets are `u64` bitmasks, so no query accepts more
//! than 64 vertices, and the default cap is far lower.

use std::collections::VecDeque;

use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::path::Path;

pub const DEFAULT_CAP: usize = 14;
pub const MAX_CAP: usize = 64;
/// Exact treewidth allocates one byte per vertex subset.
pub const TREEWIDTH_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has {n} vertices, above the oracle cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("u, v, w must be distinct vertices of the graph")]
    BadVertices,
    #[error("p must be at least 2")]
    BadP,
}

fn check_cap(g: &Graph, cap: usize) -> Result<(), OracleError> {
    let cap = cap.min(MAX_CAP);
    if g.n() > cap {
        return Err(OracleError::CapExceeded { n: g.n(), cap });
    }
    Ok(())
}

fn adjacency_masks(g: &Graph) -> Vec<u64> {
    (0..g.n()).map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w)).collect()
}

fn mask_of(vertices: &[usize]) -> u64 {
    vertices.iter().fold(0u64, |m, &v| m | 1 << v)
}

fn mask_to_set(mut m: u64) -> VertexSet {
    let mut s = VertexSet::new();
    while m != 0 {
        s.insert(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    s
}

/// `𝓛(G)`: every longest path once, in canonical orientation, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LongestPathSet {
    #[serde(rename = "L")]
    pub length: usize,
    pub paths: Vec<Path>,
    #[serde(skip)]
    masks: Vec<u64>,
}

impl LongestPathSet {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Vertex set of path `i` as a bitmask.
    pub fn mask(&self, i: usize) -> u64 {
        self.masks[i]
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    /// Intersection of all longest paths.
    pub fn common_vertices(&self) -> VertexSet {
        mask_to_set(self.masks.iter().fold(u64::MAX, |a, &m| a & m))
    }

    /// Indices of the longest paths avoiding every vertex of `w`.
    pub fn avoiding(&self, w: &[usize]) -> Vec<usize> {
        let m = mask_of(w);
        (0..self.len()).filter(|&i| self.masks[i] & m == 0).collect()
    }

    /// `W ∩ P ≠ ∅` for every longest path `P`.
    pub fn is_gallai_set(&self, w: &[usize]) -> bool {
        let m = mask_of(w);
        self.masks.iter().all(|&p| p & m != 0)
    }
}

struct Search<'a> {
    adj: &'a [u64],
    best: usize,
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Vertices reachable from `v` without touching `visited`.
    fn reachable(&self, v: usize, visited: u64) -> u32 {
        let mut seen = 1u64 << v;
        let mut frontier = seen;
        while frontier != 0 {
            let u = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adj[u] & !visited & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen.count_ones() - 1
    }

    fn extend(&mut self, path: &mut Vec<usize>, visited: u64) {
        let v = *path.last().unwrap();
        let len = path.len() - 1;
        if len + (self.reachable(v, visited) as usize) < self.best {
            return;
        }
        if len > self.best {
            self.best = len;
            self.found.clear();
        }
        if len == self.best && (len == 0 || path[0] < v) {
            self.found.push(path.clone());
        }
        let mut next = self.adj[v] & !visited;
        while next != 0 {
            let w = next.trailing_zeros() as usize;
            next &= next - 1;
            path.push(w);
            self.extend(path, visited | 1 << w);
            path.pop();
        }
    }
}

pub fn enumerate_longest_paths(g: &Graph) -> Result<LongestPathSet, OracleError> {
    enumerate_longest_paths_with_cap(g, DEFAULT_CAP)
}

/// Depth-first search from every start vertex, pruned by the number of
/// unvisited vertices still reachable from the current end.
pub fn enumerate_longest_paths_with_cap(g: &Graph, cap: usize) -> Result<LongestPathSet, OracleError> {
    check_cap(g, cap)?;
    let adj = adjacency_masks(g);
    let per_start: Vec<(usize, Vec<Vec<usize>>)> = (0..g.n())
        .into_par_iter()
        .map(|s| {
            let mut search = Search { adj: &adj, best: 0, found: Vec::new() };
            search.extend(&mut vec![s], 1 << s);
            (search.best, search.found)
        })
        .collect();
    let length = per_start.iter().map(|r| r.0).max().unwrap_or(0);
    let mut paths: Vec<Path> = per_start
        .into_iter()
        .filter(|r| r.0 == length)
        .flat_map(|r| r.1)
        .map(Path::from_vec_unchecked)
        .collect();
    paths.sort();
    let masks = paths.iter().map(|p| mask_of(p.vertices())).collect();
    Ok(LongestPathSet { length, paths, masks })
}

pub fn gallai_set_bruteforce(g: &Graph) -> Result<VertexSet, OracleError> {
    Ok(enumerate_longest_paths(g)?.common_vertices())
}

/// The containment and betweenness subfamilies of `𝓛` for three vertices,
/// as sorted indices into the path list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LpClassification {
    pub u: usize,
    pub v: usize,
    pub w: usize,
    pub uv: Vec<usize>,
    pub u_not_v: Vec<usize>,
    pub not_u_v: Vec<usize>,
    pub not_u_not_v: Vec<usize>,
    pub uvw: Vec<usize>,
    pub uv_not_w: Vec<usize>,
    pub u_not_v_not_w: Vec<usize>,
    /// All three on the path with `v` between `u` and `w`.
    pub v_between: Vec<usize>,
}

pub fn classify_longest_paths(
    lps: &LongestPathSet,
    u: usize,
    v: usize,
    w: usize,
) -> Result<LpClassification, OracleError> {
    if u == v || v == w || u == w || [u, v, w].iter().any(|&x| x >= MAX_CAP) {
        return Err(OracleError::BadVertices);
    }
    let has = |i: usize, x: usize| lps.masks[i] >> x & 1 == 1;
    let pick = |f: &dyn Fn(usize) -> bool| (0..lps.len()).filter(|&i| f(i)).collect::<Vec<_>>();
    Ok(LpClassification {
        u,
        v,
        w,
        uv: pick(&|i| has(i, u) && has(i, v)),
        u_not_v: pick(&|i| has(i, u) && !has(i, v)),
        not_u_v: pick(&|i| !has(i, u) && has(i, v)),
        not_u_not_v: pick(&|i| !has(i, u) && !has(i, v)),
        uvw: pick(&|i| has(i, u) && has(i, v) && has(i, w)),
        uv_not_w: pick(&|i| has(i, u) && has(i, v) && !has(i, w)),
        u_not_v_not_w: pick(&|i| has(i, u) && !has(i, v) && !has(i, w)),
        v_between: pick(&|i| {
            let p = &lps.paths[i];
            match (p.position(u), p.position(v), p.position(w)) {
                (Some(a), Some(b), Some(c)) => (a < b && b < c) || (c < b && b < a),
                _ => false,
            }
        }),
    })
}

/// Whether some at most `p` longest paths have no common vertex, searched
/// over the distinct intersection masks reachable with `k` paths for
/// `k = 1, ..., p` (a repeated path never changes the mask).
fn some_small_family_is_disjoint(masks: &[u64], p: usize) -> bool {
    let distinct: FxHashSet<u64> = masks.iter().copied().collect();
    if distinct.contains(&0) {
        return true;
    }
    let mut level = distinct.clone();
    for _ in 1..p {
        let mut next = FxHashSet::default();
        for &m in &level {
            for &q in &distinct {
                let x = m & q;
                if x == 0 {
                    return true;
                }
                next.insert(x);
            }
        }
        if next == level {
            break;
        }
        level = next;
    }
    false
}

/// Every `p` longest paths share a vertex. Vacuously true with fewer than
/// `p` longest paths.
pub fn p_wise_common_vertex(g: &Graph, p: usize) -> Result<bool, OracleError> {
    if p < 2 {
        return Err(OracleError::BadP);
    }
    let lps = enumerate_longest_paths(g)?;
    Ok(lps.len() < p || !some_small_family_is_disjoint(&lps.masks, p))
}

/// Any two longest paths meet.
pub fn pairwise_intersection_holds(g: &Graph) -> Result<bool, OracleError> {
    check_cap(g, DEFAULT_CAP)?;
    if !g.is_connected() {
        return Err(OracleError::Disconnected);
    }
    p_wise_common_vertex(g, 2)
}

struct Hamilton<'a> {
    adj: &'a [u64],
    full: u64,
    close_at: Option<usize>,
}

impl Hamilton<'_> {
    fn extend(&self, v: usize, visited: u64) -> bool {
        if visited == self.full {
            return self.close_at.is_none_or(|s| self.adj[v] >> s & 1 == 1);
        }
        // every unvisited vertex needs a neighbour that is unvisited or an end
        let open = !visited & self.full;
        let ends = (1u64 << v) | self.close_at.map_or(0, |s| 1 << s);
        let mut rest = open;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.adj[u] & (open | ends) == 0 {
                return false;
            }
        }
        let mut next = self.adj[v] & open;
        while next != 0 {
            let w = next.trailing_zeros() as usize;
            next &= next - 1;
            if self.extend(w, visited | 1 << w) {
                return true;
            }
        }
        false
    }
}

/// Backtracking search for a Hamiltonian cycle. Graphs with fewer than
/// three vertices have none.
pub fn hamiltonian_cycle_exists(g: &Graph) -> Result<bool, OracleError> {
    check_cap(g, DEFAULT_CAP)?;
    let n = g.n();
    if n < 3 {
        return Ok(false);
    }
    let adj = adjacency_masks(g);
    let h = Hamilton { adj: &adj, full: full_mask(n), close_at: Some(0) };
    Ok(h.extend(0, 1))
}

pub fn hamiltonian_path_exists(g: &Graph) -> Result<bool, OracleError> {
    check_cap(g, DEFAULT_CAP)?;
    let adj = adjacency_masks(g);
    let h = Hamilton { adj: &adj, full: full_mask(g.n()), close_at: None };
    Ok((0..g.n()).any(|s| h.extend(s, 1 << s)))
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Exact treewidth by dynamic programming over vertex subsets:
/// `TW(S) = min over v in S of max(TW(S - v), Q(S - v, v))`, where
/// `Q(S, v)` counts vertices outside `S + v` reachable from `v` through `S`.
pub fn exact_treewidth(g: &Graph) -> Result<usize, OracleError> {
    check_cap(g, TREEWIDTH_CAP)?;
    let n = g.n();
    if n == 0 {
        return Ok(0);
    }
    let adj = adjacency_masks(g);
    let full = full_mask(n);
    let q = |s: u64, v: usize| -> u32 {
        // flood from v through s; count the boundary outside s + v
        let mut inside = 1u64 << v;
        let mut frontier = inside;
        let mut boundary = 0u64;
        while frontier != 0 {
            let u = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let nb = adj[u] & !inside;
            let through = nb & s;
            boundary |= nb & !s;
            inside |= through;
            frontier |= through;
        }
        (boundary & !(1u64 << v)).count_ones()
    };
    let mut tw = vec![u8::MAX; 1usize << n];
    tw[0] = 0;
    for s in 1..=full {
        let mut best = u8::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = s & !(1 << v);
            let cand = (tw[without as usize]).max(q(without, v) as u8);
            best = best.min(cand);
        }
        tw[s as usize] = best;
    }
    Ok(tw[full as usize] as usize)
}

/// Backtracking isomorphism test with degree-based candidate filtering.
pub fn are_isomorphic(g: &Graph, h: &Graph) -> Result<bool, OracleError> {
    check_cap(g, MAX_CAP)?;
    if g.n() != h.n() || g.m() != h.m() {
        return Ok(false);
    }
    let mut dg: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    let mut dh: Vec<usize> = (0..h.n()).map(|v| h.degree(v)).collect();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return Ok(false);
    }
    // map g's vertices in BFS order so each new vertex has mapped neighbours
    let mut order = Vec::with_capacity(g.n());
    let mut seen = vec![false; g.n()];
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    fn place(g: &Graph, h: &Graph, order: &[usize], k: usize, map: &mut [usize], used: &mut [bool]) -> bool {
        if k == order.len() {
            return true;
        }
        let v = order[k];
        for c in 0..h.n() {
            if used[c] || h.degree(c) != g.degree(v) {
                continue;
            }
            let fits = order[..k].iter().all(|&u| g.has_edge(u, v) == h.has_edge(map[u], c));
            if fits {
                map[v] = c;
                used[c] = true;
                if place(g, h, order, k + 1, map, used) {
                    return true;
                }
                used[c] = false;
            }
        }
        false
    }
    let mut map = vec![usize::MAX; g.n()];
    let mut used = vec![false; h.n()];
    Ok(place(g, h, &order, 0, &mut map, &mut used))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{named_graph, NamedGraph};

    fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges).unwrap()
    }

    #[test]
    fn small_path_sets() {
        let p4 = named_graph(&NamedGraph::Path(4));
        let lps = enumerate_longest_paths(&p4).unwrap();
        assert_eq!((lps.length, lps.len()), (3, 1));
        let tri = named_graph(&NamedGraph::Triangle);
        let lps = enumerate_longest_paths(&tri).unwrap();
        assert_eq!((lps.length, lps.len()), (2, 3));
        let k1 = graph(1, &[]);
        let lps = enumerate_longest_paths(&k1).unwrap();
        assert_eq!((lps.length, lps.len()), (0, 1));
        assert!(lps.paths.iter().all(|p| p.first() <= p.last()));
    }

    #[test]
    fn classification_examples() {
        let tri = named_graph(&NamedGraph::Triangle);
        let lps = enumerate_longest_paths(&tri).unwrap();
        let c = classify_longest_paths(&lps, 0, 1, 2).unwrap();
        assert_eq!(c.uvw.len(), 3);
        assert!(c.u_not_v.is_empty());
        let p4 = named_graph(&NamedGraph::Path(4));
        let lps = enumerate_longest_paths(&p4).unwrap();
        assert_eq!(classify_longest_paths(&lps, 0, 1, 2).unwrap().v_between, vec![0]);
        assert_eq!(classify_longest_paths(&lps, 0, 0, 2), Err(OracleError::BadVertices));
    }

    #[test]
    fn hamiltonicity() {
        let c5 = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]);
        assert!(hamiltonian_cycle_exists(&c5).unwrap());
        let star = named_graph(&NamedGraph::Star(3));
        assert!(!hamiltonian_cycle_exists(&star).unwrap());
        assert!(!hamiltonian_path_exists(&star).unwrap());
        assert!(hamiltonian_path_exists(&named_graph(&NamedGraph::Path(6))).unwrap());
    }

    #[test]
    fn treewidth_examples() {
        assert_eq!(exact_treewidth(&named_graph(&NamedGraph::Path(6))).unwrap(), 1);
        assert_eq!(exact_treewidth(&named_graph(&NamedGraph::K4)).unwrap(), 3);
        assert_eq!(exact_treewidth(&named_graph(&NamedGraph::Triangle)).unwrap(), 2);
        assert_eq!(exact_treewidth(&graph(1, &[])).unwrap(), 0);
        let c6 = graph(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]);
        assert_eq!(exact_treewidth(&c6).unwrap(), 2);
    }

    #[test]
    fn p_wise_queries() {
        let tri = named_graph(&NamedGraph::Triangle);
        assert!(p_wise_common_vertex(&tri, 5).unwrap());
        assert_eq!(p_wise_common_vertex(&tri, 1), Err(OracleError::BadP));
        let two_edges = graph(4, &[(0, 1), (2, 3)]);
        assert_eq!(pairwise_intersection_holds(&two_edges), Err(OracleError::Disconnected));
        assert!(!p_wise_common_vertex(&two_edges, 2).unwrap());
    }

    #[test]
    fn disjoint_family_search_matches_subset_enumeration() {
        let masks = [0b0011u64, 0b0110, 0b1100, 0b1001];
        // every pair meets except opposite ones
        assert!(some_small_family_is_disjoint(&masks, 2));
        let masks = [0b0111u64, 0b1110, 0b1101, 0b1011];
        assert!(!some_small_family_is_disjoint(&masks, 2));
        assert!(!some_small_family_is_disjoint(&masks, 3));
        assert!(some_small_family_is_disjoint(&masks, 4));
    }

    #[test]
    fn isomorphism() {
        let a = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let b = graph(4, &[(2, 0), (0, 3), (3, 1)]);
        let star = graph(4, &[(0, 1), (0, 2), (0, 3)]);
        assert!(are_isomorphic(&a, &b).unwrap());
        assert!(!are_isomorphic(&a, &star).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let big = named_graph(&NamedGraph::Path(20));
        assert_eq!(
            enumerate_longest_paths(&big),
            Err(OracleError::CapExceeded { n: 20, cap: DEFAULT_CAP })
        );
        assert!(enumerate_longest_paths_with_cap(&big, 20).is_ok());
    }
}
