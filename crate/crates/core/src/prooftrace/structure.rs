//! Checks on paths hanging off a virtual triangle. In a series-parallel
//! graph at most one pair of such tails can meet, and a meeting pair stays
//! inside one component of their shared virtual edge.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::path::Path;
use crate::sp::{components_of_virtual_edge, Component, TwoTreeEmbedding};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("{0:?} is not a virtual triangle")]
    NotATriangle([usize; 3]),
    #[error("tail {0} is not a path of the graph")]
    InvalidTail(usize),
    #[error("tail {0} does not end at its triangle vertex")]
    TailNotAnchored(usize),
    #[error("tail {0} meets another triangle vertex")]
    TailMeetsTriangle(usize),
    #[error("side path {0} is not a path of the graph")]
    InvalidSidePath(usize),
    #[error("side path {0} does not join two triangle vertices as required")]
    SidePathEndpoints(usize),
    #[error("structure violated, counterexample: {0}")]
    Counterexample(String),
}

/// `s1` joins `v_i` to `v_j`, `s2` joins `v_j` to `v_k`; both touch the
/// triangle only at their ends.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SidePaths {
    pub s1: Path,
    pub s2: Path,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailReport {
    /// Index pairs `(i, j)` of tails that share a vertex.
    pub intersecting: Vec<(usize, usize)>,
    /// For a meeting pair, the component of their virtual edge (away from
    /// the third vertex) containing both tails.
    pub component: Option<Component>,
    /// Outcome of the side-path check when side paths were supplied.
    pub side_paths_disjoint: Option<bool>,
}

#[derive(Serialize)]
struct Dump<'a> {
    triangle: [usize; 3],
    tails: [&'a Path; 3],
    side: Option<&'a SidePaths>,
    reason: &'a str,
    edges: Vec<(usize, usize)>,
}

fn counterexample(
    g: &Graph,
    triangle: [usize; 3],
    tails: [&Path; 3],
    side: Option<&SidePaths>,
    reason: &str,
) -> StructureError {
    let dump = Dump { triangle, tails, side, reason, edges: g.edges().collect() };
    StructureError::Counterexample(serde_json::to_string(&dump).expect("dump serializes"))
}

fn touches_only(p: &Path, triangle: &[usize; 3], allowed: &[usize]) -> bool {
    triangle.iter().all(|t| allowed.contains(t) || !p.contains(*t))
}

pub fn validate_triangle_tails(
    emb: &TwoTreeEmbedding,
    g: &Graph,
    triangle: [usize; 3],
    tails: [&Path; 3],
    side: Option<&SidePaths>,
) -> Result<TailReport, StructureError> {
    let [a, b, c] = triangle;
    if !(emb.host.has_edge(a, b) && emb.host.has_edge(b, c) && emb.host.has_edge(a, c)) {
        return Err(StructureError::NotATriangle(triangle));
    }
    for (i, r) in tails.iter().enumerate() {
        if !r.is_valid_in(g) {
            return Err(StructureError::InvalidTail(i));
        }
        if !r.is_endpoint(triangle[i]) {
            return Err(StructureError::TailNotAnchored(i));
        }
        if !touches_only(r, &triangle, &[triangle[i]]) {
            return Err(StructureError::TailMeetsTriangle(i));
        }
    }

    let mut intersecting = Vec::new();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if tails[i].intersects(tails[j]) {
            intersecting.push((i, j));
        }
    }
    if intersecting.len() > 1 {
        return Err(counterexample(g, triangle, tails, side, "more than one pair of tails meets"));
    }
    let component = match intersecting.first() {
        None => None,
        Some(&(i, j)) => {
            let k = 3 - i - j;
            let comps = components_of_virtual_edge(emb, triangle[i], triangle[j])
                .expect("triangle edges are host edges");
            let found = comps.into_iter().find(|comp| {
                comp.direction != triangle[k]
                    && tails[i].vertices().iter().chain(tails[j].vertices()).all(|v| comp.vertices.contains(v))
            });
            match found {
                Some(comp) => Some(comp),
                None => {
                    return Err(counterexample(g, triangle, tails, side, "meeting tails leave every component"))
                }
            }
        }
    };

    let side_paths_disjoint = match side {
        None => None,
        Some(sp) => Some(check_side_paths(g, triangle, tails, sp)?),
    };
    if side_paths_disjoint == Some(false) {
        return Err(counterexample(g, triangle, tails, side, "side paths meet a tail or each other"));
    }
    Ok(TailReport { intersecting, component, side_paths_disjoint })
}

/// With `s1` from `v_i` to `v_j` and `s2` from `v_j` to `v_k`: the tail at
/// `v_i` misses `s2`, and `s1`, `s2` share only `v_j`.
fn check_side_paths(
    g: &Graph,
    triangle: [usize; 3],
    tails: [&Path; 3],
    sp: &SidePaths,
) -> Result<bool, StructureError> {
    for (idx, s) in [&sp.s1, &sp.s2].into_iter().enumerate() {
        if !s.is_valid_in(g) {
            return Err(StructureError::InvalidSidePath(idx + 1));
        }
    }
    let ends = |s: &Path| -> Option<(usize, usize)> {
        let i = triangle.iter().position(|&t| t == s.first())?;
        let j = triangle.iter().position(|&t| t == s.last())?;
        (i != j && touches_only(s, &triangle, &[s.first(), s.last()])).then_some((i, j))
    };
    let (e1, e2) = (
        ends(&sp.s1).ok_or(StructureError::SidePathEndpoints(1))?,
        ends(&sp.s2).ok_or(StructureError::SidePathEndpoints(2))?,
    );
    let j = [e1.0, e1.1]
        .into_iter()
        .find(|&t| t == e2.0 || t == e2.1)
        .ok_or(StructureError::SidePathEndpoints(2))?;
    let i = if e1.0 == j { e1.1 } else { e1.0 };
    if i == e2.0 || i == e2.1 {
        return Err(StructureError::SidePathEndpoints(2));
    }
    let vj = triangle[j];
    let tail_clear = !tails[i].intersects(&sp.s2);
    let sides_clear = sp.s1.vertices().iter().all(|&v| v == vj || !sp.s2.contains(v));
    Ok(tail_clear && sides_clear)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sp::complete_to_two_tree;

    fn p(v: &[usize]) -> Path {
        Path::new(v.to_vec()).unwrap()
    }

    #[test]
    fn p3_trivial_tails() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let emb = complete_to_two_tree(&g).unwrap();
        let r = validate_triangle_tails(&emb, &g, [0, 1, 2], [&p(&[0]), &p(&[1]), &p(&[2])], None).unwrap();
        assert!(r.intersecting.is_empty());
        assert_eq!(r.component, None);
    }

    /// Triangle 0,1,2 with a 4-cycle 0-3-4-1 hanging off edge {0,1}.
    fn hanging_square() -> Graph {
        Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (4, 1)]).unwrap()
    }

    #[test]
    fn one_meeting_pair_lies_in_a_component() {
        let g = hanging_square();
        let emb = complete_to_two_tree(&g).unwrap();
        let r = validate_triangle_tails(&emb, &g, [0, 1, 2], [&p(&[0, 3, 4]), &p(&[1, 4]), &p(&[2])], None)
            .unwrap();
        assert_eq!(r.intersecting, vec![(0, 1)]);
        let comp = r.component.unwrap();
        assert_eq!(comp.anchor, (0, 1));
        assert!([3, 4].iter().all(|v| comp.interior.contains(v)));
    }

    #[test]
    fn side_paths_checked() {
        let g = hanging_square();
        let emb = complete_to_two_tree(&g).unwrap();
        let side = SidePaths { s1: p(&[2, 0]), s2: p(&[0, 3, 4, 1]) };
        let r = validate_triangle_tails(&emb, &g, [0, 1, 2], [&p(&[0]), &p(&[1]), &p(&[2])], Some(&side)).unwrap();
        assert_eq!(r.side_paths_disjoint, Some(true));
        let bad = SidePaths { s1: p(&[2, 1]), s2: p(&[1, 2]) };
        assert_eq!(
            validate_triangle_tails(&emb, &g, [0, 1, 2], [&p(&[0]), &p(&[1]), &p(&[2])], Some(&bad)),
            Err(StructureError::SidePathEndpoints(2))
        );
    }

    #[test]
    fn precondition_errors() {
        let g = hanging_square();
        let emb = complete_to_two_tree(&g).unwrap();
        let ok = [p(&[0]), p(&[1]), p(&[2])];
        assert!(matches!(
            validate_triangle_tails(&emb, &g, [0, 3, 4], [&ok[0], &ok[1], &ok[2]], None),
            Err(StructureError::NotATriangle(_))
        ));
        assert_eq!(
            validate_triangle_tails(&emb, &g, [0, 1, 2], [&p(&[3, 0]), &p(&[1, 0]), &ok[2]], None),
            Err(StructureError::TailMeetsTriangle(1))
        );
        assert_eq!(
            validate_triangle_tails(&emb, &g, [0, 1, 2], [&p(&[3]), &ok[1], &ok[2]], None),
            Err(StructureError::TailNotAnchored(0))
        );
    }
}
