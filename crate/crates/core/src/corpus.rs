//! Deterministic graph generators and the named graphs.
//!
//! All randomness comes from [`SplitMix64`], written out here so that other
//! implementations can reproduce the corpus exactly:
//!
//! ```text
//! next():   state += 0x9E3779B97F4A7C15
//!           z = state
//!           z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!           z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!           return z ^ (z >> 31)                  (all arithmetic mod 2^64)
//! below(k): (next() * k) >> 64                    (128-bit product)
//! chance(p): (next() >> 11) * 2^-53 < p
//! ```
//!
//! The generator is seeded with `state = seed`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::sp::{is_partial_two_tree, is_two_tree};

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `0..k`; `k` must be positive.
    pub fn below(&mut self, k: usize) -> usize {
        debug_assert!(k > 0);
        ((self.next_u64() as u128 * k as u128) >> 64) as usize
    }

    pub fn chance(&mut self, p: f64) -> bool {
        ((self.next_u64() >> 11) as f64) * (1.0 / (1u64 << 53) as f64) < p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Tree,
    Cactus,
    Outerplanar,
    TwoTree,
    SeriesParallel,
    RandomConnected,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Tree,
        Family::Cactus,
        Family::Outerplanar,
        Family::TwoTree,
        Family::SeriesParallel,
        Family::RandomConnected,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Tree => "tree",
            Family::Cactus => "cactus",
            Family::Outerplanar => "outerplanar",
            Family::TwoTree => "two_tree",
            Family::SeriesParallel => "series_parallel",
            Family::RandomConnected => "random_connected",
        }
    }

    /// Default density knob: edge deletion probability for the
    /// series-parallel and outerplanar families, extra-edge probability for
    /// `random_connected`; ignored elsewhere.
    pub fn default_density(self) -> f64 {
        match self {
            Family::SeriesParallel | Family::Outerplanar | Family::RandomConnected => 0.3,
            _ => 0.0,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| CorpusError::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("unknown named graph {0:?}")]
    UnknownName(String),
    #[error("infeasible generator request: {0}")]
    Infeasible(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    pub density: f64,
}

impl GenSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> GenSpec {
        GenSpec { family, n, seed, density: family.default_density() }
    }

    pub fn with_density(mut self, density: f64) -> GenSpec {
        self.density = density;
        self
    }
}

fn from_edges(n: usize, edges: &[(usize, usize)]) -> Graph {
    debug_assert!(Graph::from_edges(n, edges).is_ok());
    Graph::assemble(n, edges)
}

fn random_tree_edges(n: usize, rng: &mut SplitMix64) -> Vec<(usize, usize)> {
    (1..n).map(|i| (rng.below(i), i)).collect()
}

fn two_tree_edges(n: usize, rng: &mut SplitMix64) -> Vec<(usize, usize)> {
    if n < 2 {
        return Vec::new();
    }
    let mut edges = vec![(0, 1)];
    for i in 2..n {
        let (a, b) = edges[rng.below(edges.len())];
        edges.push((a, i));
        edges.push((b, i));
    }
    edges
}

fn cactus_edges(n: usize, rng: &mut SplitMix64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let mut next = 1;
    while next < n {
        let anchor = rng.below(next);
        let longest = (n - next + 1).min(6);
        if longest >= 3 && rng.chance(0.6) {
            let len = 3 + rng.below(longest - 2);
            let mut prev = anchor;
            for v in next..next + len - 1 {
                edges.push((prev, v));
                prev = v;
            }
            edges.push((prev, anchor));
            next += len - 1;
        } else {
            edges.push((anchor, next));
            next += 1;
        }
    }
    edges
}

/// Chords of a random triangulation of the polygon `0, 1, ..., n-1`.
fn triangulation_chords(n: usize, rng: &mut SplitMix64) -> Vec<(usize, usize)> {
    let mut chords = Vec::new();
    let mut stack = vec![(0, n - 1)];
    while let Some((lo, hi)) = stack.pop() {
        if hi - lo < 2 {
            continue;
        }
        let apex = lo + 1 + rng.below(hi - lo - 1);
        if apex - lo >= 2 {
            chords.push((lo, apex));
        }
        if hi - apex >= 2 {
            chords.push((apex, hi));
        }
        stack.push((apex, hi));
        stack.push((lo, apex));
    }
    chords
}

fn outerplanar_edges(n: usize, density: f64, rng: &mut SplitMix64) -> Vec<(usize, usize)> {
    match n {
        1 => return Vec::new(),
        2 => return vec![(0, 1)],
        _ => {}
    }
    let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    edges.push((0, n - 1));
    for chord in triangulation_chords(n, rng) {
        if !rng.chance(density) {
            edges.push(chord);
        }
    }
    edges
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Random 2-tree; each edge is then dropped with probability `density`.
/// Dropped edges needed for connectivity are restored in edge order.
fn series_parallel_edges(n: usize, density: f64, rng: &mut SplitMix64) -> Vec<(usize, usize)> {
    let all = two_tree_edges(n, rng);
    let mut keep: Vec<bool> = all.iter().map(|_| !rng.chance(density)).collect();
    let mut parent: Vec<usize> = (0..n).collect();
    for (i, &(u, v)) in all.iter().enumerate() {
        if keep[i] {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            parent[a] = b;
        }
    }
    for (i, &(u, v)) in all.iter().enumerate() {
        if !keep[i] {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a] = b;
                keep[i] = true;
            }
        }
    }
    all.into_iter().zip(keep).filter(|&(_, k)| k).map(|(e, _)| e).collect()
}

fn random_connected_edges(n: usize, density: f64, rng: &mut SplitMix64) -> Vec<(usize, usize)> {
    let mut edges = random_tree_edges(n, rng);
    let mut present = std::collections::HashSet::new();
    for &(u, v) in &edges {
        present.insert((u, v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !present.contains(&(u, v)) && rng.chance(density) {
                edges.push((u, v));
            }
        }
    }
    edges
}

/// Generates a connected graph of the requested family. Deterministic in
/// `(family, n, seed, density)`.
pub fn generate(spec: &GenSpec) -> Result<Graph, CorpusError> {
    if spec.n == 0 {
        return Err(CorpusError::Infeasible("n must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&spec.density) {
        return Err(CorpusError::Infeasible(format!("density {} outside [0, 1]", spec.density)));
    }
    let mut rng = SplitMix64::new(spec.seed);
    let n = spec.n;
    let edges = match spec.family {
        Family::Tree => random_tree_edges(n, &mut rng),
        Family::Cactus => cactus_edges(n, &mut rng),
        Family::Outerplanar => outerplanar_edges(n, spec.density, &mut rng),
        Family::TwoTree => two_tree_edges(n, &mut rng),
        Family::SeriesParallel => series_parallel_edges(n, spec.density, &mut rng),
        Family::RandomConnected => random_connected_edges(n, spec.density, &mut rng),
    };
    Ok(from_edges(n, &edges))
}

/// Membership test used to validate generator output. Outerplanarity is
/// checked against the generator's polygon layout (cycle `0..n-1` present,
/// remaining edges pairwise non-crossing chords).
pub fn is_family_member(family: Family, g: &Graph) -> bool {
    if !g.is_connected() {
        return false;
    }
    let n = g.n();
    match family {
        Family::Tree => g.m() + 1 == n,
        Family::Cactus => is_cactus(g),
        Family::Outerplanar => is_polygon_outerplanar(g),
        Family::TwoTree => n == 1 || is_two_tree(g),
        Family::SeriesParallel => is_partial_two_tree(g),
        Family::RandomConnected => true,
    }
}

/// Every edge lies on at most one cycle.
fn is_cactus(g: &Graph) -> bool {
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    let mut covered = vec![false; n]; // tree edge (v, parent[v]) already on a cycle
    depth[0] = 0;
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![0];
    while let Some(u) = stack.pop() {
        order.push(u);
        for &w in g.neighbors(u) {
            if depth[w] == usize::MAX {
                depth[w] = depth[u] + 1;
                parent[w] = u;
                stack.push(w);
            }
        }
    }
    // Any spanning tree works: each non-tree edge closes one fundamental
    // cycle, and a cactus is exactly a graph where these cycles are
    // edge-disjoint.
    for (u, v) in g.edges() {
        if parent[u] == v || parent[v] == u {
            continue;
        }
        let (mut a, mut b) = (u, v);
        while a != b {
            if depth[a] < depth[b] {
                std::mem::swap(&mut a, &mut b);
            }
            if covered[a] {
                return false;
            }
            covered[a] = true;
            a = parent[a];
        }
    }
    true
}

fn is_polygon_outerplanar(g: &Graph) -> bool {
    let n = g.n();
    if n <= 3 {
        return true;
    }
    if !(0..n).all(|i| g.has_edge(i, (i + 1) % n)) {
        return false;
    }
    let chords: Vec<(usize, usize)> =
        g.edges().filter(|&(u, v)| v - u != 1 && !(u == 0 && v == n - 1)).collect();
    for (i, &(a, b)) in chords.iter().enumerate() {
        for &(c, d) in &chords[i + 1..] {
            let inside = |x: usize| a < x && x < b;
            let shares = a == c || a == d || b == c || b == d;
            if !shares && inside(c) != inside(d) {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NamedGraph {
    Petersen,
    /// Petersen with vertex 0 split into three leaves.
    Wvz,
    K4,
    Triangle,
    /// Path on `k` vertices.
    Path(usize),
    /// `K_{1,k}` with centre 0.
    Star(usize),
}

impl FromStr for NamedGraph {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || CorpusError::UnknownName(s.to_string());
        let sized = |rest: &str| rest.parse::<usize>().ok().filter(|&k| k >= 1).ok_or_else(unknown);
        match s {
            "petersen" => Ok(NamedGraph::Petersen),
            "wvz" => Ok(NamedGraph::Wvz),
            "k4" => Ok(NamedGraph::K4),
            "triangle" => Ok(NamedGraph::Triangle),
            _ => {
                if let Some(rest) = s.strip_prefix("path:") {
                    Ok(NamedGraph::Path(sized(rest)?))
                } else if let Some(rest) = s.strip_prefix("star:") {
                    Ok(NamedGraph::Star(sized(rest)?))
                } else {
                    Err(unknown())
                }
            }
        }
    }
}

fn petersen() -> Graph {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push((i, (i + 1) % 5)); // outer cycle
        edges.push((i, i + 5)); // spokes
        edges.push((5 + i, 5 + (i + 2) % 5)); // inner pentagram
    }
    Graph::from_edges(10, &edges).expect("Petersen edges are distinct")
}

/// Replaces `v` by one new leaf per incident edge. Surviving vertices keep
/// their relative order; the leaves take the highest ids, in the order of
/// `v`'s sorted neighbours.
pub fn split_vertex_into_leaves(g: &Graph, v: usize) -> Graph {
    let (rest, map) = g.delete_vertex(v).expect("vertex in range");
    let mut new_id = vec![usize::MAX; g.n()];
    for (i, &old) in map.iter().enumerate() {
        new_id[old] = i;
    }
    let mut edges: Vec<(usize, usize)> = rest.edges().collect();
    let base = rest.n();
    for (k, &w) in g.neighbors(v).iter().enumerate() {
        edges.push((new_id[w], base + k));
    }
    Graph::from_edges(base + g.degree(v), &edges).expect("split graph is simple")
}

pub fn named_graph(name: &NamedGraph) -> Graph {
    match *name {
        NamedGraph::Petersen => petersen(),
        NamedGraph::Wvz => split_vertex_into_leaves(&petersen(), 0),
        NamedGraph::K4 => {
            Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
        }
        NamedGraph::Triangle => Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap(),
        NamedGraph::Path(k) => {
            let edges: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
            Graph::from_edges(k, &edges).unwrap()
        }
        NamedGraph::Star(k) => {
            let edges: Vec<_> = (1..=k).map(|i| (0, i)).collect();
            Graph::from_edges(k + 1, &edges).unwrap()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // first outputs for seed 1234567, from the published reference implementation
        let mut r = SplitMix64::new(1234567);
        assert_eq!(r.next_u64(), 6457827717110365317);
        assert_eq!(r.next_u64(), 3203168211198807973);
        assert_eq!(r.next_u64(), 9817491932198370423);
    }

    #[test]
    fn small_cases() {
        for family in Family::ALL {
            let g = generate(&GenSpec::new(family, 1, 5)).unwrap();
            assert_eq!((g.n(), g.m()), (1, 0), "{family}");
        }
        assert!(generate(&GenSpec::new(Family::Tree, 0, 1)).is_err());
        assert!(generate(&GenSpec::new(Family::Tree, 3, 1).with_density(1.5)).is_err());
    }

    #[test]
    fn two_tree_edge_count() {
        for n in 2..20 {
            let g = generate(&GenSpec::new(Family::TwoTree, n, n as u64)).unwrap();
            assert_eq!(g.m(), 2 * n - 3);
        }
    }

    #[test]
    fn outputs_are_family_members() {
        for family in Family::ALL {
            for n in [1, 2, 5, 8, 12] {
                for seed in 0..100 {
                    let g = generate(&GenSpec::new(family, n, seed)).unwrap();
                    assert_eq!(g.n(), n);
                    assert!(is_family_member(family, &g), "{family} n={n} seed={seed}");
                }
            }
        }
        for seed in 0..500 {
            let g = generate(&GenSpec::new(Family::SeriesParallel, 12, seed)).unwrap();
            assert!(is_partial_two_tree(&g) && g.is_connected());
        }
    }

    #[test]
    fn deterministic_output() {
        let spec = GenSpec::new(Family::SeriesParallel, 40, 99);
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        let other = GenSpec::new(Family::SeriesParallel, 40, 100);
        assert_ne!(generate(&spec).unwrap(), generate(&other).unwrap());
    }

    #[test]
    fn membership_checks_reject_outsiders() {
        let k4 = named_graph(&NamedGraph::K4);
        assert!(!is_family_member(Family::SeriesParallel, &k4));
        assert!(!is_family_member(Family::Tree, &k4));
        assert!(!is_family_member(Family::Cactus, &k4));
        let crossing = Graph::from_edges(
            4,
            &[(0, 1), (1, 2), (2, 3), (0, 3), (0, 2), (1, 3)],
        )
        .unwrap();
        assert!(!is_family_member(Family::Outerplanar, &crossing));
        // two triangles sharing a vertex: cactus; sharing an edge: not
        let bowtie = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        assert!(is_family_member(Family::Cactus, &bowtie));
        let diamond = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert!(!is_family_member(Family::Cactus, &diamond));
    }

    #[test]
    fn named_graphs() {
        let p = named_graph(&NamedGraph::Petersen);
        assert_eq!((p.n(), p.m()), (10, 15));
        assert!((0..10).all(|v| p.degree(v) == 3));

        let w = named_graph(&NamedGraph::Wvz);
        assert_eq!((w.n(), w.m()), (12, 15));
        assert_eq!((0..12).filter(|&v| w.degree(v) == 1).count(), 3);
        assert!(w.is_connected());

        assert_eq!("path:5".parse::<NamedGraph>().unwrap(), NamedGraph::Path(5));
        assert_eq!("star:3".parse::<NamedGraph>().unwrap(), NamedGraph::Star(3));
        assert!("path:0".parse::<NamedGraph>().is_err());
        assert!("cube".parse::<NamedGraph>().is_err());
        let s = named_graph(&NamedGraph::Star(3));
        assert_eq!(s.degree(0), 3);
    }
}
