//! Replays every longest path through the nice decomposition and compares
//! the resulting configurations with the marked table entries.

use spgallai::corpus::{generate, Family, GenSpec};
use spgallai::decomposition::{decomposition_from_embedding, make_nice, NiceTreeDecomposition, NodeKind};
use spgallai::dp::{mark_contributing_configs, run_forward_dp, PathConfiguration, SlotState};
use spgallai::oracle::enumerate_longest_paths;
use spgallai::sp::complete_to_two_tree;
use spgallai::{Graph, Path};

fn forgotten_below(ntd: &NiceTreeDecomposition) -> Vec<Vec<usize>> {
    let mut below: Vec<Vec<usize>> = vec![Vec::new(); ntd.len()];
    for (u, node) in ntd.nodes.iter().enumerate() {
        let mut acc: Vec<usize> = node.children.indices().flat_map(|c| below[c].clone()).collect();
        if let NodeKind::Forget(v) = node.kind {
            acc.push(v);
        }
        below[u] = acc;
    }
    below
}

/// The configuration `p` induces at node `u`: edges consumed below `u` are
/// those whose first-forgotten endpoint is forgotten below `u`.
fn replay(p: &Path, ntd: &NiceTreeDecomposition, forget_rank: &[usize], below: &[usize], u: usize) -> PathConfiguration {
    let n = forget_rank.len();
    let done: Vec<bool> = (0..n).map(|v| below.contains(&v)).collect();
    let mut adj = vec![Vec::new(); n];
    for w in p.vertices().windows(2) {
        let first = if forget_rank[w[0]] < forget_rank[w[1]] { w[0] } else { w[1] };
        if done[first] {
            adj[w[0]].push(w[1]);
            adj[w[1]].push(w[0]);
        }
    }
    let bag: Vec<usize> = ntd.nodes[u].bag.to_vec();
    let states = bag
        .iter()
        .map(|&v| match adj[v].len() {
            0 => SlotState::Off,
            2 => SlotState::Mid,
            _ => {
                let (mut prev, mut cur) = (v, adj[v][0]);
                while adj[cur].len() == 2 {
                    let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
                    prev = cur;
                    cur = next;
                }
                if bag.contains(&cur) {
                    SlotState::EndPaired(cur)
                } else {
                    SlotState::EndExternal
                }
            }
        })
        .collect();
    let externals_used = below.iter().filter(|&&v| adj[v].len() == 1).count() as u8;
    PathConfiguration { bag, states, externals_used }
}

fn check(g: &Graph) {
    let emb = complete_to_two_tree(g).unwrap();
    let ntd = make_nice(&decomposition_from_embedding(&emb).unwrap()).unwrap();
    let dp = run_forward_dp(&ntd, g).unwrap();
    let marking = mark_contributing_configs(&dp);
    let lps = enumerate_longest_paths(g).unwrap();
    assert_eq!(dp.longest_path_length(), lps.length);
    let forget_rank = ntd.forget_nodes(g.n());
    let below = forgotten_below(&ntd);
    for u in 0..ntd.len() {
        let marked = marking.marked_configs(&dp, u);
        let mut traced: Vec<PathConfiguration> = Vec::new();
        for p in &lps.paths {
            let cfg = replay(p, &ntd, &forget_rank, &below[u], u);
            assert!(marking.is_marked(&dp, u, &cfg), "node {u}: {p:?} gives unmarked {cfg:?}");
            if !traced.contains(&cfg) {
                traced.push(cfg);
            }
        }
        for m in &marked {
            assert!(traced.contains(m), "node {u}: marked {m:?} lies on no longest path");
        }
    }
}

#[test]
fn marked_entries_are_exactly_the_longest_path_traces() {
    for seed in 0..150 {
        let density = [0.0, 0.3, 0.6][seed as usize % 3];
        let spec = GenSpec::new(Family::SeriesParallel, 2 + seed as usize % 9, seed).with_density(density);
        check(&generate(&spec).unwrap());
    }
    for family in [Family::Tree, Family::Cactus, Family::Outerplanar, Family::TwoTree] {
        for seed in 0..20 {
            check(&generate(&GenSpec::new(family, 3 + seed as usize % 8, seed)).unwrap());
        }
    }
}
