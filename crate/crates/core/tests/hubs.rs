//! Inputs with very high degree vertices must still be handled in about
//! linear time by the elimination.

use std::time::{Duration, Instant};

use spgallai::gallai::gallai_fast;
use spgallai::sp::{complete_to_two_tree, validate_embedding};
use spgallai::Graph;

const N: usize = 100_000;

fn quick(g: &Graph) {
    let start = Instant::now();
    let emb = complete_to_two_tree(g).unwrap();
    assert!(validate_embedding(&emb, g));
    gallai_fast(g).unwrap();
    assert!(start.elapsed() < Duration::from_secs(10), "took {:?}", start.elapsed());
}

#[test]
fn star() {
    let edges: Vec<_> = (1..N).map(|v| (0, v)).collect();
    quick(&Graph::from_edges(N, &edges).unwrap());
}

#[test]
fn fan() {
    let mut edges: Vec<_> = (1..N).map(|v| (0, v)).collect();
    edges.extend((2..N).map(|v| (v - 1, v)));
    quick(&Graph::from_edges(N, &edges).unwrap());
}

#[test]
fn two_hubs_with_fill_edges_and_pendants() {
    // hub u = 0 and w = 1; for each i a path u - a_i - b_i - w with the a_i
    // numbered lowest, then pendant leaves on u that are eliminated while
    // u still carries one fill edge per path
    let k = N / 4;
    let a = |i: usize| 2 + i;
    let leaf = |i: usize| 2 + k + i;
    let b = |i: usize| 2 + 2 * k + i;
    let mut edges = Vec::new();
    for i in 0..k {
        edges.extend([(0, a(i)), (a(i), b(i)), (b(i), 1), (0, leaf(i))]);
    }
    quick(&Graph::from_edges(2 + 3 * k, &edges).unwrap());
}
