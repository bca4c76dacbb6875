//! Paths as vertex sequences and the small vocabulary built on them:
//! splitting at cut vertices, bridge paths, and restriction to a vertex set.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("a path needs at least one vertex")]
    Empty,
    #[error("vertex {0} repeats on the path")]
    RepeatedVertex(usize),
    #[error("cut vertex {0} is not on the path")]
    CutNotOnPath(usize),
    #[error("vertex {0} is not an endpoint of the path")]
    NotAnEndpoint(usize),
    #[error("start vertex {0} lies on the target path")]
    StartOnTarget(usize),
    #[error("the paths do not intersect")]
    Disjoint,
}

/// A simple path, stored as its vertex sequence. The length is the number
/// of edges. Adjacency is only checked against a graph on demand.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Path(Vec<usize>);

impl TryFrom<Vec<usize>> for Path {
    type Error = PathError;

    fn try_from(v: Vec<usize>) -> Result<Self, Self::Error> {
        Path::new(v)
    }
}

impl From<Path> for Vec<usize> {
    fn from(p: Path) -> Self {
        p.0
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ">")
    }
}

impl Path {
    pub fn new(vertices: Vec<usize>) -> Result<Path, PathError> {
        if vertices.is_empty() {
            return Err(PathError::Empty);
        }
        let mut seen = VertexSet::new();
        for &v in &vertices {
            if !seen.insert(v) {
                return Err(PathError::RepeatedVertex(v));
            }
        }
        Ok(Path(vertices))
    }

    pub fn single(v: usize) -> Path {
        Path(vec![v])
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    /// True for a one-vertex path. (A path is never empty.)
    pub fn is_trivial(&self) -> bool {
        self.0.len() == 1
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        self.0[self.0.len() - 1]
    }

    pub fn is_endpoint(&self, v: usize) -> bool {
        self.first() == v || self.last() == v
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.0.iter().position(|&x| x == v)
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.0.iter().copied().collect()
    }

    pub fn intersects(&self, other: &Path) -> bool {
        self.0.iter().any(|&v| other.contains(v))
    }

    pub fn reversed(&self) -> Path {
        let mut v = self.0.clone();
        v.reverse();
        Path(v)
    }

    /// The orientation with the smaller endpoint first; a path and its
    /// reverse share one canonical form.
    pub fn canonical(&self) -> Path {
        if self.first() > self.last() {
            self.reversed()
        } else {
            self.clone()
        }
    }

    /// Inclusive subpath between positions `i` and `j`; reversed when `i > j`.
    pub fn segment(&self, i: usize, j: usize) -> Path {
        if i <= j {
            Path(self.0[i..=j].to_vec())
        } else {
            let mut v = self.0[j..=i].to_vec();
            v.reverse();
            Path(v)
        }
    }

    /// Every consecutive pair is an edge of `g` and every vertex is in range.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        self.0.iter().all(|&v| v < g.n()) && self.0.windows(2).all(|w| g.has_edge(w[0], w[1]))
    }

    /// Concatenates `self` and `other` where `self.last() == other.first()`.
    /// Fails if the result would repeat a vertex.
    pub fn join(&self, other: &Path) -> Result<Path, PathError> {
        debug_assert_eq!(self.last(), other.first());
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0[1..]);
        Path::new(v)
    }

    pub(crate) fn from_vec_unchecked(v: Vec<usize>) -> Path {
        debug_assert!(Path::new(v.clone()).is_ok());
        Path(v)
    }
}

/// Splits `p` at every cut vertex. Consecutive pieces share exactly their
/// cut vertex; a cut at an endpoint yields a one-vertex piece there.
pub fn split_path_at(p: &Path, cut_vertices: &VertexSet) -> Result<Vec<Path>, PathError> {
    let mut cuts = Vec::with_capacity(cut_vertices.len());
    for &c in cut_vertices {
        cuts.push(p.position(c).ok_or(PathError::CutNotOnPath(c))?);
    }
    cuts.sort_unstable();
    let mut pieces = Vec::with_capacity(cuts.len() + 1);
    let mut start = 0;
    for c in cuts {
        pieces.push(p.segment(start, c));
        start = c;
    }
    pieces.push(p.segment(start, p.0.len() - 1));
    Ok(pieces)
}

/// The bridge path from endpoint `x` of `p` to `q`: the prefix of `p`
/// starting at `x` up to and including its first vertex on `q`.
pub fn bridge_path(p: &Path, q: &Path, x: usize) -> Result<Path, PathError> {
    if !p.is_endpoint(x) {
        return Err(PathError::NotAnEndpoint(x));
    }
    if q.contains(x) {
        return Err(PathError::StartOnTarget(x));
    }
    let oriented = if p.first() == x { p.clone() } else { p.reversed() };
    let hit = oriented.0.iter().position(|&v| q.contains(v)).ok_or(PathError::Disjoint)?;
    Ok(oriented.segment(0, hit))
}

/// Maximal runs of consecutive vertices of `p` lying in `h`, in path order.
pub fn induced_subpaths(p: &Path, h: &VertexSet) -> Vec<Path> {
    let mut out = Vec::new();
    let mut run: Vec<usize> = Vec::new();
    for &v in &p.0 {
        if h.contains(&v) {
            run.push(v);
        } else if !run.is_empty() {
            out.push(Path(std::mem::take(&mut run)));
        }
    }
    if !run.is_empty() {
        out.push(Path(run));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(v: &[usize]) -> Path {
        Path::new(v.to_vec()).unwrap()
    }

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn construction_rejects_repeats() {
        assert_eq!(Path::new(vec![]), Err(PathError::Empty));
        assert_eq!(Path::new(vec![0, 1, 0]), Err(PathError::RepeatedVertex(0)));
        assert_eq!(p(&[3]).len(), 0);
        assert_eq!(p(&[4, 1, 2]).canonical(), p(&[2, 1, 4]));
    }

    #[test]
    fn split_examples() {
        let q = p(&[0, 1, 2, 3]);
        assert_eq!(split_path_at(&q, &set(&[1])).unwrap(), vec![p(&[0, 1]), p(&[1, 2, 3])]);
        assert_eq!(split_path_at(&q, &set(&[0])).unwrap(), vec![p(&[0]), q.clone()]);
        let pieces = split_path_at(&p(&[0, 1, 2, 3, 4]), &set(&[1, 3])).unwrap();
        assert_eq!(pieces.iter().map(Path::len).collect::<Vec<_>>(), vec![1, 2, 1]);
        assert_eq!(split_path_at(&q, &set(&[7])), Err(PathError::CutNotOnPath(7)));
    }

    #[test]
    fn bridge_examples() {
        assert_eq!(bridge_path(&p(&[0, 1, 2]), &p(&[2, 3]), 0).unwrap(), p(&[0, 1, 2]));
        assert_eq!(bridge_path(&p(&[0, 1, 2]), &p(&[1, 3]), 0).unwrap(), p(&[0, 1]));
        assert_eq!(bridge_path(&p(&[0, 1, 2]), &p(&[1, 3]), 2).unwrap(), p(&[2, 1]));
        assert_eq!(bridge_path(&p(&[0, 1, 2]), &p(&[1, 3]), 1), Err(PathError::NotAnEndpoint(1)));
        assert_eq!(bridge_path(&p(&[0, 1, 2]), &p(&[0, 3]), 0), Err(PathError::StartOnTarget(0)));
        assert_eq!(bridge_path(&p(&[0, 1, 2]), &p(&[5, 3]), 0), Err(PathError::Disjoint));
    }

    #[test]
    fn induced_examples() {
        let q = p(&[0, 1, 2, 3]);
        assert_eq!(induced_subpaths(&q, &set(&[0, 1, 3])), vec![p(&[0, 1]), p(&[3])]);
        assert_eq!(induced_subpaths(&q, &set(&[0, 1, 2, 3, 9])), vec![q.clone()]);
        assert!(induced_subpaths(&q, &set(&[7])).is_empty());
    }

    fn arb_path() -> impl Strategy<Value = Path> {
        (1usize..12)
            .prop_flat_map(|len| Just((0..len).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|v| Path::new(v).unwrap())
    }

    proptest! {
        #[test]
        fn split_pieces_reassemble(path in arb_path(), mask in any::<u16>()) {
            let cuts: VertexSet = path.vertices().iter().copied()
                .filter(|&v| mask >> (v % 16) & 1 == 1).collect();
            let pieces = split_path_at(&path, &cuts).unwrap();
            prop_assert_eq!(pieces.iter().map(Path::len).sum::<usize>(), path.len());
            let mut joined = pieces[0].clone();
            for w in pieces.windows(2) {
                prop_assert_eq!(w[0].last(), w[1].first());
                prop_assert!(cuts.contains(&w[0].last()));
                let shared: Vec<_> = w[0].vertices().iter().filter(|&&v| w[1].contains(v)).collect();
                prop_assert_eq!(shared.len(), 1);
            }
            for piece in &pieces[1..] {
                joined = joined.join(piece).unwrap();
            }
            prop_assert_eq!(joined, path);
        }

        #[test]
        fn bridge_matches_linear_scan(path in arb_path(), mask in any::<u16>()) {
            let x = path.first();
            let target: Vec<usize> = path.vertices()[1..].iter().copied()
                .filter(|&v| mask >> (v % 16) & 1 == 1).collect();
            prop_assume!(!target.is_empty());
            let q = Path::new(target.clone()).unwrap();
            let b = bridge_path(&path, &q, x).unwrap();
            // oracle: first position after 0 holding a target vertex
            let hit = (1..path.vertices().len()).find(|&i| target.contains(&path.vertices()[i])).unwrap();
            prop_assert_eq!(b.len(), hit);
            prop_assert!(q.contains(b.last()));
            prop_assert!(b.vertices()[..b.len()].iter().all(|&v| !q.contains(v)));
        }
    }
}
