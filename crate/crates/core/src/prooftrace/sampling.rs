//! Random configurations for the surgery and tail-structure checks, and
//! the exhaustive search for surgery configurations on pairs of longest
//! paths.

use std::collections::VecDeque;

use serde::Serialize;

use crate::corpus::SplitMix64;
use crate::graph::Graph;
use crate::oracle::LongestPathSet;
use crate::path::Path;
use crate::sp::{virtual_triangles, TwoTreeEmbedding};

use super::structure::SidePaths;
use super::surgery::{surgery_shared_vertex, surgery_two_tails, SurgeryWitness};

/// Self-avoiding random walk from `start` of at most `max_len` edges that
/// never enters `forbidden`.
pub fn random_walk(g: &Graph, rng: &mut SplitMix64, start: usize, max_len: usize, forbidden: &[usize]) -> Path {
    let mut seen = vec![false; g.n()];
    for &f in forbidden {
        seen[f] = true;
    }
    seen[start] = true;
    let target = rng.below(max_len + 1);
    let mut walk = vec![start];
    while walk.len() <= target {
        let here = *walk.last().unwrap();
        let open: Vec<usize> = g.neighbors(here).iter().copied().filter(|&w| !seen[w]).collect();
        if open.is_empty() {
            break;
        }
        let next = open[rng.below(open.len())];
        seen[next] = true;
        walk.push(next);
    }
    Path::new(walk).expect("walk is self-avoiding")
}

/// A path from some vertex of `sources` to some vertex of `targets` whose
/// other vertices avoid `blocked`. Neighbours are explored in random order.
pub fn connecting_path(
    g: &Graph,
    rng: &mut SplitMix64,
    sources: &[usize],
    targets: &[usize],
    blocked: &[usize],
) -> Option<Path> {
    let n = g.n();
    let (mut is_target, mut is_blocked) = (vec![false; n], vec![false; n]);
    for &t in targets {
        is_target[t] = true;
    }
    for &b in blocked {
        is_blocked[b] = true;
    }
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for &s in sources {
        if parent[s] == usize::MAX {
            parent[s] = s;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        if is_target[u] {
            let mut rev = vec![u];
            while parent[*rev.last().unwrap()] != *rev.last().unwrap() {
                rev.push(parent[*rev.last().unwrap()]);
            }
            rev.reverse();
            return Some(Path::new(rev).expect("BFS tree path"));
        }
        if is_blocked[u] && parent[u] != u {
            continue;
        }
        let mut next: Vec<usize> = g.neighbors(u).to_vec();
        for i in (1..next.len()).rev() {
            next.swap(i, rng.below(i + 1));
        }
        for w in next {
            if parent[w] == usize::MAX && (!is_blocked[w] || is_target[w]) {
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoTailsConfig {
    pub p1: Path,
    pub r1: Path,
    pub p2: Path,
    pub r2: Path,
    pub conn: Path,
}

impl TwoTailsConfig {
    pub fn run(&self) -> Result<SurgeryWitness, super::SurgeryError> {
        surgery_two_tails(&self.p1, &self.r1, &self.p2, &self.r2, &self.conn)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SharedVertexConfig {
    pub p1: Path,
    pub p2: Path,
    pub z: usize,
    pub r1: Path,
    pub r2: Path,
    pub conn: Path,
}

impl SharedVertexConfig {
    pub fn run(&self) -> Result<SurgeryWitness, super::SurgeryError> {
        surgery_shared_vertex(&self.p1, &self.p2, self.z, &self.r1, &self.r2, &self.conn)
    }
}

fn union(a: &Path, b: &Path) -> Vec<usize> {
    let mut v: Vec<usize> = a.vertices().iter().chain(b.vertices()).copied().collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Longest tail of `p` at its `from_end` side whose vertices avoid `other`.
fn clear_tail(p: &Path, from_end: bool, other: &Path) -> Option<Path> {
    let oriented = if from_end { p.reversed() } else { p.clone() };
    let k = oriented.vertices().iter().take_while(|&&v| !other.contains(v)).count();
    (k > 0).then(|| oriented.segment(0, k - 1))
}

/// Longest subpath of `p` leaving `z` forwards or backwards that meets
/// `other` only in `z`.
fn clear_arm(p: &Path, z: usize, forward: bool, other: &Path) -> Option<Path> {
    let oriented = if forward { p.clone() } else { p.reversed() };
    let i = oriented.position(z)?;
    let k = oriented.vertices()[i + 1..].iter().take_while(|&&v| !other.contains(v)).count();
    (k > 0).then(|| oriented.segment(i, i + k))
}

/// Random prefix of `r`, which keeps a tail starting at an endpoint a tail.
fn shorten(rng: &mut SplitMix64, r: &Path) -> Path {
    r.segment(0, rng.below(r.len() + 1))
}

/// A random two-tail configuration on `p1`, `p2`, or `None` when the
/// sampled tails admit no connecting path.
pub fn sample_two_tails(g: &Graph, rng: &mut SplitMix64, p1: &Path, p2: &Path) -> Option<TwoTailsConfig> {
    let t1 = clear_tail(p1, rng.chance(0.5), p2)?;
    let t2 = clear_tail(p2, rng.chance(0.5), p1)?;
    let r1 = shorten(rng, &t1);
    let r2 = shorten(rng, &t2);
    let conn = connecting_path(g, rng, r1.vertices(), r2.vertices(), &union(p1, p2))?;
    Some(TwoTailsConfig { p1: p1.clone(), r1, p2: p2.clone(), r2, conn })
}

/// A random shared-vertex configuration on `p1`, `p2`.
pub fn sample_shared_vertex(g: &Graph, rng: &mut SplitMix64, p1: &Path, p2: &Path) -> Option<SharedVertexConfig> {
    let common: Vec<usize> = p1.vertices().iter().copied().filter(|&v| p2.contains(v)).collect();
    if common.is_empty() {
        return None;
    }
    let z = common[rng.below(common.len())];
    let a1 = clear_arm(p1, z, rng.chance(0.5), p2)?;
    let a2 = clear_arm(p2, z, rng.chance(0.5), p1)?;
    let r1 = a1.segment(0, 1 + rng.below(a1.len()));
    let r2 = a2.segment(0, 1 + rng.below(a2.len()));
    let (s, t): (Vec<usize>, Vec<usize>) = (r1.vertices()[1..].to_vec(), r2.vertices()[1..].to_vec());
    let conn = connecting_path(g, rng, &s, &t, &union(p1, p2))?;
    Some(SharedVertexConfig { p1: p1.clone(), p2: p2.clone(), z, r1, r2, conn })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    /// Path pairs with tail or arm choices examined.
    pub examined: usize,
    /// Configurations whose preconditions all held, with the surgery output.
    pub satisfiable: Vec<SurgeryWitness>,
}

/// For every ordered pair of longest paths, tries every maximal tail pair
/// and every maximal arm pair at every shared vertex, looking for a
/// connecting path that would make a surgery applicable. Maximal choices
/// suffice: shrinking a tail or an arm only tightens the preconditions.
pub fn both_longest_search(g: &Graph, lps: &LongestPathSet, max_pairs: usize) -> SearchOutcome {
    let mut out = SearchOutcome::default();
    let mut rng = SplitMix64::new(0);
    let paths = &lps.paths;
    let mut budget = max_pairs;
    'pairs: for p1 in paths {
        for p2 in paths {
            if budget == 0 {
                break 'pairs;
            }
            budget -= 1;
            let blocked = union(p1, p2);
            for e1 in [false, true] {
                for e2 in [false, true] {
                    let (Some(r1), Some(r2)) = (clear_tail(p1, e1, p2), clear_tail(p2, e2, p1)) else {
                        continue;
                    };
                    out.examined += 1;
                    if let Some(conn) = connecting_path(g, &mut rng, r1.vertices(), r2.vertices(), &blocked) {
                        if let Ok(w) = surgery_two_tails(p1, &r1, p2, &r2, &conn) {
                            out.satisfiable.push(w);
                        }
                    }
                }
            }
            for &z in p1.vertices().iter().filter(|&&v| p2.contains(v)) {
                for f1 in [false, true] {
                    for f2 in [false, true] {
                        let (Some(r1), Some(r2)) = (clear_arm(p1, z, f1, p2), clear_arm(p2, z, f2, p1)) else {
                            continue;
                        };
                        out.examined += 1;
                        let (s, t) = (&r1.vertices()[1..], &r2.vertices()[1..]);
                        if let Some(conn) = connecting_path(g, &mut rng, s, t, &blocked) {
                            if let Ok(w) = surgery_shared_vertex(p1, p2, z, &r1, &r2, &conn) {
                                out.satisfiable.push(w);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// A random virtual triangle with a random tail at each corner and,
/// sometimes, a pair of side paths. `None` only when there is no triangle.
pub fn sample_triangle_tails(
    emb: &TwoTreeEmbedding,
    g: &Graph,
    rng: &mut SplitMix64,
) -> Option<([usize; 3], [Path; 3], Option<SidePaths>)> {
    let tris = virtual_triangles(emb).ok()?;
    let mut t = tris[rng.below(tris.len())];
    for i in (1..3).rev() {
        t.swap(i, rng.below(i + 1));
    }
    let tails = [0, 1, 2].map(|i| {
        let others: Vec<usize> = t.iter().copied().filter(|&x| x != t[i]).collect();
        random_walk(g, rng, t[i], g.n(), &others)
    });
    let clean = |s: &Path| t.iter().all(|&x| s.is_endpoint(x) || !s.contains(x));
    let side = if rng.chance(0.5) {
        let s1 = connecting_path(g, rng, &[t[0]], &[t[1]], &[t[2]]);
        let s2 = connecting_path(g, rng, &[t[1]], &[t[2]], &[t[0]]);
        match (s1, s2) {
            (Some(s1), Some(s2)) if clean(&s1) && clean(&s2) => Some(SidePaths { s1, s2 }),
            _ => None,
        }
    } else {
        None
    };
    Some((t, tails, side))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{generate, Family, GenSpec};
    use crate::oracle::enumerate_longest_paths;

    #[test]
    fn sampled_two_tails_satisfy_the_inequality() {
        let mut rng = SplitMix64::new(7);
        let mut done = 0;
        for seed in 0..200 {
            let g = generate(&GenSpec::new(Family::RandomConnected, 10, seed)).unwrap();
            let (s1, s2) = (rng.below(g.n()), rng.below(g.n()));
            let p1 = random_walk(&g, &mut rng, s1, 6, &[]);
            let p2 = random_walk(&g, &mut rng, s2, 6, &[]);
            if let Some(cfg) = sample_two_tails(&g, &mut rng, &p1, &p2) {
                let w = cfg.run().unwrap();
                assert!(w.claim_holds());
                assert!(w.outputs.iter().all(|q| q.is_valid_in(&g)));
                done += 1;
            }
        }
        assert!(done > 20, "{done}");
    }

    #[test]
    fn no_surgery_on_two_longest_paths() {
        let mut examined = 0;
        for seed in 0..30 {
            let g = generate(&GenSpec::new(Family::RandomConnected, 9, seed)).unwrap();
            let lps = enumerate_longest_paths(&g).unwrap();
            let out = both_longest_search(&g, &lps, 400);
            examined += out.examined;
            assert!(out.satisfiable.is_empty(), "seed {seed}: {:?}", out.satisfiable[0]);
        }
        assert!(examined > 100, "{examined}");
    }
}
