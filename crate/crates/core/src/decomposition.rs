//! Tree decompositions: the width-2 decomposition read off a 2-tree
//! embedding, a generic one from an elimination order, and the conversion
//! to a nice decomposition with an empty root bag.

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::graph::Graph;
use crate::sp::TwoTreeEmbedding;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("embedding is not a valid 2-tree construction: {0}")]
    InvalidEmbedding(String),
    #[error("invalid elimination order")]
    InvalidOrder,
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),
}

/// A sorted vertex list; bags of width-2 decompositions are stored inline.
pub type Bag = SmallVec<[usize; 3]>;

/// A rooted tree decomposition. Bags are sorted vertex lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    pub bags: Vec<Bag>,
    /// `None` exactly at the root.
    pub parent: Vec<Option<usize>>,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn root(&self) -> Option<usize> {
        self.parent.iter().position(Option::is_none)
    }

    fn children(&self) -> Children {
        let k = self.bags.len();
        let mut start = vec![0usize; k + 1];
        for &p in self.parent.iter().flatten() {
            start[p + 1] += 1;
        }
        for i in 0..k {
            start[i + 1] += start[i];
        }
        let mut next = start.clone();
        let mut list = vec![0usize; start[k]];
        for (i, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                list[next[p]] = i;
                next[p] += 1;
            }
        }
        Children { start, list }
    }

    /// Checks that `parent` describes a single rooted tree and that bags are
    /// sorted without repeats. Returns the children lists.
    fn check_tree(&self) -> Result<(usize, Children), DecompositionError> {
        let bad = |m: &str| DecompositionError::InvalidDecomposition(m.to_string());
        let k = self.bags.len();
        if k == 0 || self.parent.len() != k {
            return Err(bad("bag and parent arrays disagree or are empty"));
        }
        if self.bags.iter().any(|b| b.windows(2).any(|w| w[0] >= w[1])) {
            return Err(bad("bags must be sorted and repeat-free"));
        }
        let roots: Vec<usize> = (0..k).filter(|&i| self.parent[i].is_none()).collect();
        if roots.len() != 1 || self.parent.iter().flatten().any(|&p| p >= k) {
            return Err(bad("parent array must have exactly one root"));
        }
        let root = roots[0];
        let children = self.children();
        let mut seen = vec![false; k];
        let mut stack = vec![root];
        let mut count = 0;
        while let Some(t) = stack.pop() {
            if std::mem::replace(&mut seen[t], true) {
                return Err(bad("cycle in parent array"));
            }
            count += 1;
            stack.extend(children.of(t));
        }
        if count != k {
            return Err(bad("parent array is not connected"));
        }
        Ok((root, children))
    }
}

/// Children lists of a rooted tree, packed: the children of `t` are
/// `list[start[t]..start[t + 1]]` in ascending order.
struct Children {
    start: Vec<usize>,
    list: Vec<usize>,
}

impl Children {
    fn of(&self, t: usize) -> &[usize] {
        &self.list[self.start[t]..self.start[t + 1]]
    }
}

/// Bags of every node where `v` occurs form a connected subtree, checked by
/// counting: `#nodes - #tree edges inside the occurrence set == 1`.
fn occurrences_connected(n: usize, bags: &[Bag], edges: &[(usize, usize)]) -> bool {
    let mut nodes = vec![0usize; n];
    let mut inner = vec![0usize; n];
    for bag in bags {
        for &v in bag {
            nodes[v] += 1;
        }
    }
    for &(a, b) in edges {
        // both bags sorted: merge-intersect
        let (x, y) = (&bags[a], &bags[b]);
        let (mut i, mut j) = (0, 0);
        while i < x.len() && j < y.len() {
            match x[i].cmp(&y[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    inner[x[i]] += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    (0..n).all(|v| nodes[v] == 0 || nodes[v] == inner[v] + 1)
}

fn bags_cover(g: &Graph, bags: &[Bag]) -> bool {
    let n = g.n();
    if bags.iter().flatten().any(|&v| v >= n) {
        return false;
    }
    let mut seen = vec![false; n];
    let mut edge_covered = rustc_hash::FxHashSet::default();
    for bag in bags {
        for (i, &a) in bag.iter().enumerate() {
            seen[a] = true;
            for &b in &bag[i + 1..] {
                edge_covered.insert((a, b));
            }
        }
    }
    seen.iter().all(|&s| s) && g.edges().all(|e| edge_covered.contains(&e))
}

/// The three decomposition axioms against `g`, plus tree well-formedness.
pub fn validate_decomposition(td: &TreeDecomposition, g: &Graph) -> bool {
    if td.check_tree().is_err() || !bags_cover(g, &td.bags) {
        return false;
    }
    let edges: Vec<(usize, usize)> =
        td.parent.iter().enumerate().filter_map(|(i, p)| p.map(|p| (i, p))).collect();
    occurrences_connected(g.n(), &td.bags, &edges)
}

fn sorted3(a: usize, b: usize, c: usize) -> Bag {
    let mut v = SmallVec::from_buf([a, b, c]);
    v.sort_unstable();
    v
}

/// One bag per host triangle (the base edge alone when `n = 2`). The bag of
/// an eliminated vertex `v` with attachment edge `{a, b}` hangs below the bag
/// of whichever of `a`, `b` was eliminated first; the result is rooted at the
/// lexicographically smallest bag.
pub fn decomposition_from_embedding(
    e: &TwoTreeEmbedding,
) -> Result<TreeDecomposition, DecompositionError> {
    let n = e.n();
    let invalid = |m: String| DecompositionError::InvalidEmbedding(m);
    if n < 2 || e.elimination_order.len() + 2 != n {
        return Err(invalid(format!("order has {} entries for {n} vertices", e.elimination_order.len())));
    }
    let (b0, b1) = e.base_edge;
    if b0 >= n || b1 >= n || b0 == b1 || !e.host.has_edge(b0, b1) {
        return Err(invalid("base edge is not a host edge".into()));
    }
    if n == 2 {
        let bag = SmallVec::from_slice(&[b0.min(b1), b0.max(b1)]);
        return Ok(TreeDecomposition { bags: vec![bag], parent: vec![None] });
    }
    let mut rank = vec![usize::MAX; n];
    for (i, &v) in e.elimination_order.iter().enumerate() {
        if v >= n || rank[v] != usize::MAX {
            return Err(invalid(format!("vertex {v} repeats or is out of range")));
        }
        rank[v] = i;
    }
    let k = n - 2;
    if rank[b0] != usize::MAX || rank[b1] != usize::MAX {
        return Err(invalid("base vertex also eliminated".into()));
    }
    rank[b0] = k;
    rank[b1] = k + 1;
    let mut bags = Vec::with_capacity(k);
    let mut neighbour_parent = Vec::with_capacity(k);
    for (i, &v) in e.elimination_order.iter().enumerate() {
        let mut later = e.host.neighbors(v).iter().copied().filter(|&w| rank[w] > i);
        let (Some(a), Some(b), None) = (later.next(), later.next(), later.next()) else {
            return Err(invalid(format!("vertex {v} does not attach to exactly one edge")));
        };
        if !e.host.has_edge(a, b) {
            return Err(invalid(format!("attachment {{{a}, {b}}} of {v} is not an edge")));
        }
        bags.push(sorted3(v, a, b));
        let first = if rank[a] < rank[b] { a } else { b };
        neighbour_parent.push(if rank[first] < k { Some(rank[first]) } else { None });
    }
    // bags whose attachment is the base edge hang below the last eliminated
    // bag; then the parent pointers on the way up from the chosen root are
    // reversed
    let last = k - 1;
    let mut parent: Vec<Option<usize>> = neighbour_parent
        .iter()
        .enumerate()
        .map(|(i, p)| if i == last { None } else { Some(p.unwrap_or(last)) })
        .collect();
    let root = (0..k).min_by(|&x, &y| bags[x].cmp(&bags[y])).expect("k >= 1");
    let (mut prev, mut cur) = (None, root);
    while let Some(up) = parent[cur] {
        parent[cur] = prev;
        prev = Some(cur);
        cur = up;
    }
    parent[cur] = prev;
    Ok(TreeDecomposition { bags, parent })
}

/// Decomposition induced by eliminating vertices of `g` in `order` (with
/// fill edges). Works for any graph; used to test the dynamic program on
/// graphs of larger width.
pub fn decomposition_from_elimination_order(
    g: &Graph,
    order: &[usize],
) -> Result<TreeDecomposition, DecompositionError> {
    let n = g.n();
    let mut rank = vec![usize::MAX; n];
    if order.len() != n {
        return Err(DecompositionError::InvalidOrder);
    }
    for (i, &v) in order.iter().enumerate() {
        if v >= n || rank[v] != usize::MAX {
            return Err(DecompositionError::InvalidOrder);
        }
        rank[v] = i;
    }
    let mut adj: Vec<std::collections::BTreeSet<usize>> =
        (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut bags = Vec::with_capacity(n);
    let mut parent = vec![None; n];
    for (i, &v) in order.iter().enumerate() {
        let later: Vec<usize> = adj[v].iter().copied().filter(|&w| rank[w] > i).collect();
        for (x, &a) in later.iter().enumerate() {
            for &b in &later[x + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        let mut bag: Bag = later.iter().copied().collect();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        parent[i] = later.iter().map(|&w| rank[w]).min();
    }
    // disconnected graphs give a forest; hang every extra root under the last bag
    for i in 0..n - 1 {
        if parent[i].is_none() {
            parent[i] = Some(n - 1);
        }
    }
    Ok(TreeDecomposition { bags, parent })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "vertex", rename_all = "snake_case")]
pub enum NodeKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

/// Up to two child indices, stored inline as `u32` to keep nodes small.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct ChildList([u32; 2]);

const NO_CHILD: u32 = u32::MAX;

impl ChildList {
    /// Panics on more than two children or an index that does not fit in `u32`.
    pub fn new(children: &[usize]) -> ChildList {
        assert!(children.len() <= 2, "nice nodes have at most two children");
        let mut ids = [NO_CHILD; 2];
        for (slot, &c) in ids.iter_mut().zip(children) {
            *slot = u32::try_from(c).ok().filter(|&c| c != NO_CHILD).expect("child index fits in u32");
        }
        ChildList(ids)
    }

    pub fn get(&self, j: usize) -> usize {
        self[j] as usize
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.iter().map(|&c| c as usize)
    }
}

impl std::ops::Deref for ChildList {
    type Target = [u32];

    fn deref(&self) -> &[u32] {
        let len = self.0.iter().take_while(|&&c| c != NO_CHILD).count();
        &self.0[..len]
    }
}

impl std::fmt::Debug for ChildList {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

impl Serialize for ChildList {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ChildList {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: SmallVec<[usize; 2]> = Deserialize::deserialize(d)?;
        if v.len() > 2 || v.iter().any(|&c| c >= NO_CHILD as usize) {
            return Err(serde::de::Error::custom("at most two child indices below 2^32 - 1"));
        }
        Ok(ChildList::new(&v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NiceNode {
    #[serde(flatten)]
    pub kind: NodeKind,
    pub bag: Bag,
    pub children: ChildList,
}

/// Nodes are stored children-first: every child index is smaller than its
/// parent's, and the root is the last node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
}

impl NiceTreeDecomposition {
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Index of the unique `Forget(v)` node for every vertex.
    pub fn forget_nodes(&self, n: usize) -> Vec<usize> {
        let mut at = vec![usize::MAX; n];
        for (i, node) in self.nodes.iter().enumerate() {
            if let NodeKind::Forget(v) = node.kind {
                assert_eq!(at[v], usize::MAX, "vertex {v} forgotten twice");
                at[v] = i;
            }
        }
        at
    }
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> usize {
    let common = a.iter().filter(|x| b.binary_search(x).is_ok()).count();
    a.len() + b.len() - 2 * common
}

struct NiceBuilder {
    nodes: Vec<NiceNode>,
}

impl NiceBuilder {
    fn push(&mut self, kind: NodeKind, bag: Bag, children: &[usize]) -> usize {
        self.nodes.push(NiceNode { kind, bag, children: ChildList::new(children) });
        self.nodes.len() - 1
    }

    /// Walks from node `idx` (bag `from`) to bag `to`: departing vertices are
    /// forgotten in ascending order, then arriving ones introduced.
    fn transition(&mut self, mut idx: usize, from: &[usize], to: &[usize]) -> usize {
        let mut bag = Bag::from_slice(from);
        for &v in from {
            if to.binary_search(&v).is_err() {
                bag.retain(|x| *x != v);
                idx = self.push(NodeKind::Forget(v), bag.clone(), &[idx]);
            }
        }
        for &v in to {
            if from.binary_search(&v).is_err() {
                let pos = bag.binary_search(&v).unwrap_err();
                bag.insert(pos, v);
                idx = self.push(NodeKind::Introduce(v), bag.clone(), &[idx]);
            }
        }
        idx
    }
}

/// Converts `td` into a nice decomposition of the same width. Multiple
/// children are combined by a left-leaning chain of binary joins, and a
/// forget chain down to the empty bag is appended above the root.
pub fn make_nice(td: &TreeDecomposition) -> Result<NiceTreeDecomposition, DecompositionError> {
    let (root, children) = td.check_tree()?;
    let mut total = td.bags[root].len();
    for t in 0..td.bags.len() {
        let ch = children.of(t);
        total += match ch.len() {
            0 => 1 + td.bags[t].len(),
            k => k - 1 + ch.iter().map(|&c| symmetric_difference(&td.bags[c], &td.bags[t])).sum::<usize>(),
        };
    }
    let mut b = NiceBuilder { nodes: Vec::with_capacity(total) };
    let mut built = vec![usize::MAX; td.bags.len()];
    // post-order via an explicit stack
    let mut stack = vec![(root, false)];
    while let Some((t, expanded)) = stack.pop() {
        if !expanded {
            stack.push((t, true));
            for &c in children.of(t).iter().rev() {
                stack.push((c, false));
            }
            continue;
        }
        let bag = &td.bags[t];
        let mut current = None;
        for &c in children.of(t) {
            let up = b.transition(built[c], &td.bags[c], bag);
            current = Some(match current {
                None => up,
                Some(left) => b.push(NodeKind::Join, bag.clone(), &[left, up]),
            });
        }
        built[t] = match current {
            Some(idx) => idx,
            None => {
                let leaf = b.push(NodeKind::Leaf, Bag::new(), &[]);
                b.transition(leaf, &[], bag)
            }
        };
    }
    let top = b.transition(built[root], &td.bags[root], &[]);
    debug_assert_eq!(b.nodes.len(), total);
    Ok(NiceTreeDecomposition { root: top, nodes: b.nodes })
}

/// Checks every nice-decomposition invariant against `g`: node kinds agree
/// with their bags and children, the root bag is empty, each vertex is
/// forgotten exactly once, occurrences are connected, and every vertex and
/// edge of `g` lies in some bag.
pub fn validate_nice(ntd: &NiceTreeDecomposition, g: &Graph) -> bool {
    let k = ntd.nodes.len();
    if k == 0 || ntd.root >= k || !ntd.nodes[ntd.root].bag.is_empty() {
        return false;
    }
    let mut parent_count = vec![0usize; k];
    let mut edges = Vec::with_capacity(k);
    for (i, node) in ntd.nodes.iter().enumerate() {
        if node.bag.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        for c in node.children.indices() {
            if c >= k {
                return false;
            }
            parent_count[c] += 1;
            edges.push((c, i));
        }
        let child_bag = |j: usize| &ntd.nodes[node.children.get(j)].bag;
        let ok = match node.kind {
            NodeKind::Leaf => node.children.is_empty() && node.bag.is_empty(),
            NodeKind::Introduce(v) => {
                node.children.len() == 1 && {
                    let c = child_bag(0);
                    c.binary_search(&v).is_err()
                        && node.bag.len() == c.len() + 1
                        && node.bag.iter().filter(|&&x| x != v).eq(c.iter())
                        && node.bag.binary_search(&v).is_ok()
                }
            }
            NodeKind::Forget(v) => {
                node.children.len() == 1 && {
                    let c = child_bag(0);
                    c.binary_search(&v).is_ok()
                        && c.len() == node.bag.len() + 1
                        && c.iter().filter(|&&x| x != v).eq(node.bag.iter())
                }
            }
            NodeKind::Join => {
                node.children.len() == 2 && *child_bag(0) == node.bag && *child_bag(1) == node.bag
            }
        };
        if !ok {
            return false;
        }
    }
    // a tree: root has no parent, everything else exactly one, all reachable
    if parent_count[ntd.root] != 0
        || (0..k).any(|i| i != ntd.root && parent_count[i] != 1)
        || edges.len() != k - 1
    {
        return false;
    }
    let mut seen = vec![false; k];
    let mut stack = vec![ntd.root];
    let mut reached = 0;
    while let Some(t) = stack.pop() {
        if std::mem::replace(&mut seen[t], true) {
            return false;
        }
        reached += 1;
        stack.extend(ntd.nodes[t].children.indices());
    }
    if reached != k {
        return false;
    }
    let mut forgets = vec![0usize; g.n()];
    for node in &ntd.nodes {
        if let NodeKind::Forget(v) = node.kind {
            if v >= g.n() {
                return false;
            }
            forgets[v] += 1;
        }
    }
    let bags: Vec<Bag> = ntd.nodes.iter().map(|n| n.bag.clone()).collect();
    forgets.iter().all(|&f| f == 1)
        && bags_cover(g, &bags)
        && occurrences_connected(g.n(), &bags, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{generate, Family, GenSpec};
    use crate::sp::complete_to_two_tree;

    fn nice_for(g: &Graph) -> NiceTreeDecomposition {
        let e = complete_to_two_tree(g).unwrap();
        let td = decomposition_from_embedding(&e).unwrap();
        assert!(validate_decomposition(&td, g));
        make_nice(&td).unwrap()
    }

    #[test]
    fn single_edge() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let e = complete_to_two_tree(&g).unwrap();
        let td = decomposition_from_embedding(&e).unwrap();
        assert_eq!(td.bags, vec![Bag::from_slice(&[0, 1])]);
        assert_eq!(td.width(), 1);
        let ntd = make_nice(&td).unwrap();
        let kinds: Vec<NodeKind> = ntd.nodes.iter().map(|n| n.kind).collect();
        assert_eq!(
            kinds,
            vec![
                NodeKind::Leaf,
                NodeKind::Introduce(0),
                NodeKind::Introduce(1),
                NodeKind::Forget(0),
                NodeKind::Forget(1)
            ]
        );
        assert!(validate_nice(&ntd, &g));
    }

    #[test]
    fn p3_single_bag() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let td = decomposition_from_embedding(&complete_to_two_tree(&g).unwrap()).unwrap();
        assert_eq!(td.bags, vec![Bag::from_slice(&[0, 1, 2])]);
        assert_eq!(td.width(), 2);
    }

    #[test]
    fn degree_three_bag_needs_a_join() {
        // three triangles hanging off the edge {0,1} of a central triangle... as a fan
        let g = Graph::from_edges(
            6,
            &[(0, 1), (1, 2), (0, 2), (0, 3), (2, 3), (1, 4), (2, 4), (0, 5), (1, 5)],
        )
        .unwrap();
        let ntd = nice_for(&g);
        assert!(validate_nice(&ntd, &g));
        assert!(ntd.nodes.iter().any(|n| n.kind == NodeKind::Join));
    }

    #[test]
    fn random_series_parallel_graphs() {
        for seed in 0..100 {
            for n in [2, 3, 7, 20, 50] {
                let g = generate(&GenSpec::new(Family::SeriesParallel, n, seed)).unwrap();
                let ntd = nice_for(&g);
                assert!(validate_nice(&ntd, &g), "seed {seed} n {n}");
                assert!(ntd.width() <= 2);
                assert!(ntd.len() <= 20 * n);
                assert!(ntd.nodes[ntd.root].bag.is_empty());
                assert!(ntd.nodes.iter().enumerate().all(|(i, x)| x.children.indices().all(|c| c < i)));
            }
        }
    }

    #[test]
    fn mutations_fail_validation() {
        let g = generate(&GenSpec::new(Family::TwoTree, 12, 3)).unwrap();
        let ntd = nice_for(&g);
        assert!(validate_nice(&ntd, &g));

        let mut extra = g.edges().collect::<Vec<_>>();
        let missing = (0..12)
            .flat_map(|a| (a + 1..12).map(move |b| (a, b)))
            .find(|&(a, b)| !g.has_edge(a, b) && !ntd.nodes.iter().any(|x| x.bag.contains(&a) && x.bag.contains(&b)))
            .unwrap();
        extra.push(missing);
        let bigger = Graph::from_edges(12, &extra).unwrap();
        assert!(!validate_nice(&ntd, &bigger));

        let mut rooted = ntd.clone();
        let below = rooted.nodes[rooted.root].children.get(0);
        rooted.root = below;
        assert!(!validate_nice(&rooted, &g));

        let mut wrong = ntd.clone();
        let f = wrong.nodes.iter().position(|x| matches!(x.kind, NodeKind::Forget(_))).unwrap();
        wrong.nodes[f].kind = NodeKind::Forget(11);
        assert!(!validate_nice(&wrong, &g));
    }

    #[test]
    fn elimination_order_decomposition_for_k4() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let td = decomposition_from_elimination_order(&g, &[0, 1, 2, 3]).unwrap();
        assert!(validate_decomposition(&td, &g));
        assert_eq!(td.width(), 3);
        let ntd = make_nice(&td).unwrap();
        assert!(validate_nice(&ntd, &g));
        assert!(decomposition_from_elimination_order(&g, &[0, 1, 1, 3]).is_err());
    }

    #[test]
    fn json_shape() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let ntd = nice_for(&g);
        let text = serde_json::to_string(&ntd.nodes[1]).unwrap();
        assert_eq!(text, r#"{"kind":"introduce","vertex":0,"bag":[0],"children":[0]}"#);
        let back: NiceTreeDecomposition = serde_json::from_str(&serde_json::to_string(&ntd).unwrap()).unwrap();
        assert_eq!(back, ntd);
    }
}
