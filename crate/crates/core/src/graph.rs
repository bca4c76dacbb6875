//! Undirected simple graphs on dense vertex ids `0..n`, plus the edge-list
//! text format used throughout the crate.
//!
//! The text format is line oriented: a header `n m` followed by exactly `m`
//! lines `u v`. Lines whose first non-blank character is `#` are comments and
//! blank lines are ignored. Self-loops, duplicate edges and ids `>= n` are
//! rejected with the offending line number.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A set of vertex ids, ordered so that printing and comparisons are stable.
pub type VertexSet = BTreeSet<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing header line `n m`")]
    MissingHeader,
    #[error("malformed line {0:?}")]
    Malformed(String),
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("header declares {declared} edges but {found} were listed")]
    EdgeCountMismatch { declared: usize, found: usize },
}

/// Undirected simple graph with sorted adjacency lists, stored compactly:
/// the neighbours of `v` are `targets[offsets[v]..offsets[v + 1]]`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = GraphError;

    fn try_from(r: GraphRepr) -> Result<Self, Self::Error> {
        Graph::from_edges(r.n, &r.edges)
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr {
            n: g.n(),
            edges: g.edges().collect(),
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Position and cause of the first invalid edge, in input order.
fn first_bad_edge(n: usize, edges: &[(usize, usize)]) -> Option<(usize, GraphError)> {
    let mut seen = rustc_hash::FxHashSet::default();
    for (i, &(u, v)) in edges.iter().enumerate() {
        for x in [u, v] {
            if x >= n {
                return Some((i, GraphError::VertexOutOfRange { vertex: x, n }));
            }
        }
        if u == v {
            return Some((i, GraphError::SelfLoop(u)));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Some((i, GraphError::DuplicateEdge(u.min(v), u.max(v))));
        }
    }
    None
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Graph {
        Graph {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        Graph::checked(n, edges).map_err(|(_, e)| e)
    }

    /// Builds the graph, or reports the index of the first offending edge.
    fn checked(n: usize, edges: &[(usize, usize)]) -> Result<Graph, (usize, GraphError)> {
        let simple = edges.iter().all(|&(u, v)| u < n && v < n && u != v);
        if simple {
            let g = Graph::assemble(n, edges);
            let dup = (0..n).any(|v| g.neighbors(v).windows(2).any(|w| w[0] == w[1]));
            if !dup {
                return Ok(g);
            }
        }
        Err(first_bad_edge(n, edges).expect("some edge is invalid"))
    }

    /// Counting sort into adjacency arrays; assumes every edge is valid.
    pub(crate) fn assemble(n: usize, edges: &[(usize, usize)]) -> Graph {
        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in edges {
            offsets[u + 1] += 1;
            offsets[v + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0usize; 2 * edges.len()];
        for &(u, v) in edges {
            targets[fill[u]] = v;
            fill[u] += 1;
            targets[fill[v]] = u;
            fill[v] += 1;
        }
        for v in 0..n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Graph { offsets, targets }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges as `(min, max)` pairs in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &w in self.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    }

    /// Connected components, each sorted ascending, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut head = 0;
            while head < comp.len() {
                let u = comp[head];
                head += 1;
                for &w in self.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Subgraph induced by `vertices`. The i-th vertex of the result is
    /// `vertices[i]` (returned as the id map).
    pub fn induced_subgraph(&self, vertices: &[usize]) -> (Graph, Vec<usize>) {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &w in self.neighbors(v) {
                let j = index[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        let h = Graph::assemble(vertices.len(), &edges);
        (h, vertices.to_vec())
    }

    /// `G - v`. Ids above `v` shift down by one; the returned map sends each
    /// new id to its old id. Fails when `v` is out of range or `G = K1`.
    pub fn delete_vertex(&self, v: usize) -> Result<(Graph, Vec<usize>), GraphError> {
        if v >= self.n() {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n() });
        }
        if self.n() == 1 {
            return Err(GraphError::Empty);
        }
        let keep: Vec<usize> = (0..self.n()).filter(|&u| u != v).collect();
        Ok(self.induced_subgraph(&keep))
    }

    /// Serializes in the edge-list format with edges sorted by `(min, max)`.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.m());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

fn parse_pair(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    if it.next().is_some() {
        return None;
    }
    Some((a, b))
}

/// Parses the edge-list text format.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(ParseError {
        line: 1,
        kind: ParseErrorKind::MissingHeader,
    })?;
    let err = |line, kind| ParseError { line, kind };
    let (n, m) = parse_pair(header)
        .ok_or_else(|| err(header_line, ParseErrorKind::Malformed(header.to_string())))?;
    if n == 0 {
        return Err(err(header_line, ParseErrorKind::EmptyGraph));
    }

    let to_parse_error = |(i, e): (usize, GraphError), lines_of: &[usize]| {
        let kind = match e {
            GraphError::SelfLoop(x) => ParseErrorKind::SelfLoop(x),
            GraphError::DuplicateEdge(a, b) => ParseErrorKind::DuplicateEdge(a, b),
            GraphError::VertexOutOfRange { vertex, n } => ParseErrorKind::VertexOutOfRange { vertex, n },
            GraphError::Empty => ParseErrorKind::EmptyGraph,
        };
        err(lines_of[i], kind)
    };
    let mut edges = Vec::with_capacity(m.min(1 << 20));
    let mut lines_of = Vec::with_capacity(m.min(1 << 20));
    let mut last_line = header_line;
    for (line, text) in lines {
        last_line = line;
        let pair = parse_pair(text).filter(|_| edges.len() < m);
        let Some(pair) = pair else {
            // an invalid edge on an earlier line takes precedence
            if let Some(bad) = first_bad_edge(n, &edges) {
                return Err(to_parse_error(bad, &lines_of));
            }
            let kind = if edges.len() == m {
                ParseErrorKind::EdgeCountMismatch { declared: m, found: m + 1 }
            } else {
                ParseErrorKind::Malformed(text.to_string())
            };
            return Err(err(line, kind));
        };
        edges.push(pair);
        lines_of.push(line);
    }
    let g = Graph::checked(n, &edges).map_err(|bad| to_parse_error(bad, &lines_of))?;
    if edges.len() != m {
        return Err(err(last_line, ParseErrorKind::EdgeCountMismatch { declared: m, found: edges.len() }));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn parses_single_edge_and_single_vertex() {
        let g = parse_edge_list("2 1\n0 1").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1)]);

        let k1 = parse_edge_list("1 0\n").unwrap();
        assert_eq!(k1.n(), 1);
        assert_eq!(k1.m(), 0);
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let g = parse_edge_list("# a triangle\n3 3\n\n0 1\n# middle\n1 2\n2 0\n").unwrap();
        assert_eq!(g.m(), 3);
        assert!(g.has_edge(0, 2));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = parse_edge_list("3 2\n0 1\n1 1\n").unwrap_err();
        assert_eq!(e, ParseError { line: 3, kind: ParseErrorKind::SelfLoop(1) });

        let e = parse_edge_list("3 2\n0 1\n1 0\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(matches!(e.kind, ParseErrorKind::DuplicateEdge(0, 1)));

        let e = parse_edge_list("3 1\n0 3\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::VertexOutOfRange { vertex: 3, n: 3 });

        let e = parse_edge_list("3 1\n0 x\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Malformed(_)));

        let e = parse_edge_list("0 0\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::EmptyGraph);

        let e = parse_edge_list("3 2\n0 1\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::EdgeCountMismatch { declared: 2, found: 1 });

        let e = parse_edge_list("3 1\n0 1\n1 2\n").unwrap_err();
        assert_eq!(e.line, 3);

        assert_eq!(parse_edge_list("").unwrap_err().kind, ParseErrorKind::MissingHeader);
    }

    #[test]
    fn serializer_sorts_edges() {
        let g = Graph::from_edges(4, &[(3, 2), (1, 0), (2, 0)]).unwrap();
        assert_eq!(g.to_edge_list(), "4 3\n0 1\n0 2\n2 3\n");
    }

    #[test]
    fn connectivity() {
        assert!(Graph::empty(1).is_connected());
        assert!(!Graph::empty(2).is_connected());
        assert!(path_graph(5).is_connected());
        assert_eq!(Graph::empty(3).components().len(), 3);
    }

    #[test]
    fn delete_vertex_compacts_ids() {
        let p3 = path_graph(3);
        let (h, map) = p3.delete_vertex(0).unwrap();
        assert_eq!(h, path_graph(2));
        assert_eq!(map, vec![1, 2]);

        let (h, _) = p3.delete_vertex(1).unwrap();
        assert_eq!(h.n(), 2);
        assert_eq!(h.m(), 0);
        assert!(!h.is_connected());
        // the original is untouched
        assert_eq!(p3.m(), 2);

        assert!(p3.delete_vertex(3).is_err());
        assert!(Graph::empty(1).delete_vertex(0).is_err());
    }

    #[test]
    fn json_round_trip_rejects_bad_edges() {
        let g = path_graph(4);
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"n":4,"edges":[[0,1],[1,2],[2,3]]}"#);
        assert_eq!(serde_json::from_str::<Graph>(&s).unwrap(), g);
        assert!(serde_json::from_str::<Graph>(r#"{"n":2,"edges":[[0,0]]}"#).is_err());
    }
}
