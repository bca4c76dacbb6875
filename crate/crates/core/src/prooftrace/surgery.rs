//! Path surgery: given two paths joined by a connecting path that only
//! touches them in prescribed pieces, build paths that beat at least one
//! of the inputs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::path::Path;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error("r{which} is not a subpath of p{which}")]
    NotASubpath { which: usize },
    #[error("r{which} is not a tail of p{which}")]
    NotATail { which: usize },
    #[error("tail r{which} meets the other path")]
    TailMeetsOtherPath { which: usize },
    #[error("r{which} meets the other path outside the shared vertex")]
    SubpathMeetsOtherPath { which: usize },
    #[error("the connecting path misses p{which}")]
    ConnMissesPath { which: usize },
    #[error("the connecting path meets p{which} outside r{which}")]
    ConnOutsideTail { which: usize },
    #[error("the shared vertex is not on both paths")]
    SharedVertexMissing,
    #[error("r{which} does not end at the shared vertex")]
    NotAnchoredAtShared { which: usize },
    #[error("the connecting path passes through the shared vertex")]
    SharedVertexOnConn,
    #[error("no pieces of p2 were given")]
    EmptyPieces,
    #[error("piece {index} ends neither at the shared vertex nor at an endpoint of p2")]
    PieceNotAnchored { index: usize },
    #[error("pieces {0} and {1} share interior vertices")]
    PiecesOverlap(usize, usize),
    #[error("the connecting path has no clean pair of hits")]
    NoCleanPair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurgeryKind {
    TwoTails,
    SharedVertex,
    CorollaryDispatch,
}

/// Inputs and outputs of one surgery. `x` and `y` are the hits on `p1` and
/// `p2` joined by `link`, a piece of the connecting path whose interior
/// avoids both inputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryWitness {
    pub kind: SurgeryKind,
    pub via: Option<SurgeryKind>,
    pub p1: Path,
    pub p2: Path,
    pub shared: Option<usize>,
    pub x: usize,
    pub y: usize,
    pub link: Path,
    pub outputs: Vec<Path>,
    /// For single-output surgeries, which input (1 or 2) the output beats.
    pub beats: Option<usize>,
}

impl SurgeryWitness {
    /// The length claim: two outputs beat the inputs in total, a single
    /// output beats the input named by `beats`.
    pub fn claim_holds(&self) -> bool {
        match (self.outputs.as_slice(), self.beats) {
            ([q1, q2], None) => q1.len() + q2.len() > self.p1.len() + self.p2.len(),
            ([q], Some(1)) => q.len() > self.p1.len(),
            ([q], Some(2)) => q.len() > self.p2.len(),
            _ => false,
        }
    }
}

/// Position interval of `r` inside `p` as `(pos of r.first(), pos of r.last())`.
fn locate(p: &Path, r: &Path) -> Option<(usize, usize)> {
    let i = p.position(r.first())?;
    let j = p.position(r.last())?;
    (p.segment(i, j) == *r).then_some((i, j))
}

fn check_conn(conn: &Path, p: &Path, allowed: &[usize], which: usize) -> Result<(), SurgeryError> {
    let mut hit = false;
    for &v in conn.vertices() {
        if p.contains(v) {
            if !allowed.contains(&v) {
                return Err(SurgeryError::ConnOutsideTail { which });
            }
            hit = true;
        }
    }
    if hit {
        Ok(())
    } else {
        Err(SurgeryError::ConnMissesPath { which })
    }
}

/// Positions `(i, j)` on `conn` of a hit on `p1` and a hit on `p2` with no
/// hit of either path strictly between them. The first such pair wins.
fn clean_pair(conn: &Path, p1: &Path, p2: &Path) -> Option<(usize, usize)> {
    let mut last: Option<(usize, u8)> = None;
    for (k, &v) in conn.vertices().iter().enumerate() {
        let side = if p1.contains(v) {
            1
        } else if p2.contains(v) {
            2
        } else {
            continue;
        };
        if let Some((prev, prev_side)) = last {
            if prev_side != side {
                return Some(if side == 2 { (prev, k) } else { (k, prev) });
            }
        }
        last = Some((k, side));
    }
    None
}

fn concat(parts: &[&[usize]]) -> Path {
    let v: Vec<usize> = parts.iter().flat_map(|s| s.iter().copied()).collect();
    Path::new(v).expect("surgery output repeats a vertex")
}

/// Orientation of `p` in which the subpath at positions `(i, j)` is a
/// suffix, with the suffix start index; `None` unless it is a tail.
fn tail_as_suffix(p: &Path, (i, j): (usize, usize)) -> Option<(Path, usize)> {
    let (lo, hi) = (i.min(j), i.max(j));
    if hi == p.len() {
        Some((p.clone(), lo))
    } else if lo == 0 {
        Some((p.reversed(), p.len() - hi))
    } else {
        None
    }
}

/// Two paths with disjoint tails `r1`, `r2` and a connecting path meeting
/// `p1` only in `r1` and `p2` only in `r2`. Returns `Q1`, `Q2` with
/// `|Q1| + |Q2| > |p1| + |p2|`.
pub fn surgery_two_tails(
    p1: &Path,
    r1: &Path,
    p2: &Path,
    r2: &Path,
    conn: &Path,
) -> Result<SurgeryWitness, SurgeryError> {
    let at1 = locate(p1, r1).ok_or(SurgeryError::NotASubpath { which: 1 })?;
    let at2 = locate(p2, r2).ok_or(SurgeryError::NotASubpath { which: 2 })?;
    let (a, _) = tail_as_suffix(p1, at1).ok_or(SurgeryError::NotATail { which: 1 })?;
    let (b, _) = tail_as_suffix(p2, at2).ok_or(SurgeryError::NotATail { which: 2 })?;
    if r1.intersects(p2) {
        return Err(SurgeryError::TailMeetsOtherPath { which: 1 });
    }
    if r2.intersects(p1) {
        return Err(SurgeryError::TailMeetsOtherPath { which: 2 });
    }
    check_conn(conn, p1, r1.vertices(), 1)?;
    check_conn(conn, p2, r2.vertices(), 2)?;
    let (ix, iy) = clean_pair(conn, p1, p2).ok_or(SurgeryError::NoCleanPair)?;
    let link = conn.segment(ix, iy);
    let (x, y) = (link.first(), link.last());
    let i = a.position(x).expect("x lies on p1");
    let j = b.position(y).expect("y lies on p2");
    let (av, bv, lv) = (a.vertices(), b.vertices(), link.vertices());
    let back = link.reversed();
    let q1 = concat(&[&av[..i], lv, &bv[j + 1..]]);
    let q2 = concat(&[&bv[..j], back.vertices(), &av[i + 1..]]);
    let witness = SurgeryWitness {
        kind: SurgeryKind::TwoTails,
        via: None,
        p1: p1.clone(),
        p2: p2.clone(),
        shared: None,
        x,
        y,
        link,
        outputs: vec![q1, q2],
        beats: None,
    };
    assert!(witness.claim_holds(), "two-tail surgery lost length: {witness:?}");
    Ok(witness)
}

fn anchored_subpath(p: &Path, r: &Path, z: usize, which: usize) -> Result<(), SurgeryError> {
    locate(p, r).ok_or(SurgeryError::NotASubpath { which })?;
    if !r.is_endpoint(z) {
        return Err(SurgeryError::NotAnchoredAtShared { which });
    }
    Ok(())
}

fn meets_outside(r: &Path, p: &Path, z: usize) -> bool {
    r.vertices().iter().any(|&v| v != z && p.contains(v))
}

/// `p1`, `p2` sharing `z`, subpaths `r1`, `r2` hanging off `z`, and a
/// connecting path avoiding `z`. Returns one path strictly longer than
/// `p2` when `|z..x| >= |z..y|`, else one strictly longer than `p1`.
pub fn surgery_shared_vertex(
    p1: &Path,
    p2: &Path,
    z: usize,
    r1: &Path,
    r2: &Path,
    conn: &Path,
) -> Result<SurgeryWitness, SurgeryError> {
    if !p1.contains(z) || !p2.contains(z) {
        return Err(SurgeryError::SharedVertexMissing);
    }
    anchored_subpath(p1, r1, z, 1)?;
    anchored_subpath(p2, r2, z, 2)?;
    if meets_outside(r1, p2, z) {
        return Err(SurgeryError::SubpathMeetsOtherPath { which: 1 });
    }
    if meets_outside(r2, p1, z) {
        return Err(SurgeryError::SubpathMeetsOtherPath { which: 2 });
    }
    if conn.contains(z) {
        return Err(SurgeryError::SharedVertexOnConn);
    }
    check_conn(conn, p1, r1.vertices(), 1)?;
    check_conn(conn, p2, r2.vertices(), 2)?;
    let (ix, iy) = clean_pair(conn, p1, p2).ok_or(SurgeryError::NoCleanPair)?;
    let link = conn.segment(ix, iy);
    let (x, y) = (link.first(), link.last());

    let orient = |p: &Path, t: usize| {
        if p.position(z) < p.position(t) {
            p.clone()
        } else {
            p.reversed()
        }
    };
    let a = orient(p1, x);
    let b = orient(p2, y);
    let (zp, i) = (a.position(z).unwrap(), a.position(x).unwrap());
    let (zq, j) = (b.position(z).unwrap(), b.position(y).unwrap());
    let (av, bv) = (a.vertices(), b.vertices());
    let (out, beats) = if i - zp >= j - zq {
        (concat(&[&bv[..=zq], &av[zp + 1..i], link.vertices(), &bv[j + 1..]]), 2)
    } else {
        let back = link.reversed();
        (concat(&[&av[..=zp], &bv[zq + 1..j], back.vertices(), &av[i + 1..]]), 1)
    };
    let witness = SurgeryWitness {
        kind: SurgeryKind::SharedVertex,
        via: None,
        p1: p1.clone(),
        p2: p2.clone(),
        shared: Some(z),
        x,
        y,
        link,
        outputs: vec![out],
        beats: Some(beats),
    };
    assert!(witness.claim_holds(), "shared-vertex surgery lost length: {witness:?}");
    Ok(witness)
}

/// The mixed case: `r1` is a tail of `p1` starting at `z`, and `p2` only
/// offers a union of internally disjoint pieces. Hands the piece hit by
/// the connecting path to whichever surgery applies.
pub fn surgery_corollary(
    p1: &Path,
    p2: &Path,
    z: usize,
    r1: &Path,
    r2_pieces: &[Path],
    conn: &Path,
) -> Result<SurgeryWitness, SurgeryError> {
    if !p1.contains(z) || !p2.contains(z) {
        return Err(SurgeryError::SharedVertexMissing);
    }
    let at1 = locate(p1, r1).ok_or(SurgeryError::NotASubpath { which: 1 })?;
    tail_as_suffix(p1, at1).ok_or(SurgeryError::NotATail { which: 1 })?;
    if !r1.is_endpoint(z) {
        return Err(SurgeryError::NotAnchoredAtShared { which: 1 });
    }
    if r2_pieces.is_empty() {
        return Err(SurgeryError::EmptyPieces);
    }
    let mut spans = Vec::with_capacity(r2_pieces.len());
    for (index, piece) in r2_pieces.iter().enumerate() {
        let (i, j) = locate(p2, piece).ok_or(SurgeryError::NotASubpath { which: 2 })?;
        let anchored = [piece.first(), piece.last()]
            .iter()
            .any(|&e| e == z || e == p2.first() || e == p2.last());
        if !anchored {
            return Err(SurgeryError::PieceNotAnchored { index });
        }
        spans.push((i.min(j), i.max(j)));
    }
    for k in 0..spans.len() {
        for l in k + 1..spans.len() {
            let (a, b) = (spans[k], spans[l]);
            if a.0.max(b.0) < a.1.min(b.1) {
                return Err(SurgeryError::PiecesOverlap(k, l));
            }
        }
    }
    if meets_outside(r1, p2, z) {
        return Err(SurgeryError::SubpathMeetsOtherPath { which: 1 });
    }
    if r2_pieces.iter().any(|piece| meets_outside(piece, p1, z)) {
        return Err(SurgeryError::SubpathMeetsOtherPath { which: 2 });
    }
    if conn.contains(z) {
        return Err(SurgeryError::SharedVertexOnConn);
    }
    check_conn(conn, p1, r1.vertices(), 1)?;
    let union: Vec<usize> = r2_pieces.iter().flat_map(|p| p.vertices().iter().copied()).collect();
    check_conn(conn, p2, &union, 2)?;
    let (ix, iy) = clean_pair(conn, p1, p2).ok_or(SurgeryError::NoCleanPair)?;
    let link = conn.segment(ix, iy);
    let y = link.last();
    let piece = r2_pieces.iter().find(|p| p.contains(y)).expect("y lies in some piece");

    let mut inner = if piece.contains(z) {
        surgery_shared_vertex(p1, p2, z, r1, piece, &link)?
    } else {
        let zr = r1.position(z).unwrap();
        let trimmed = if zr == 0 { r1.segment(1, r1.len()) } else { r1.segment(0, zr - 1) };
        surgery_two_tails(p1, &trimmed, p2, piece, &link)?
    };
    inner.via = Some(inner.kind);
    inner.kind = SurgeryKind::CorollaryDispatch;
    inner.shared = Some(z);
    Ok(inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn p(v: &[usize]) -> Path {
        Path::new(v.to_vec()).unwrap()
    }

    /// Two 4-edge paths 0..4 and 5..9 with a bridge 4-10-9 between their
    /// last vertices.
    fn h_graph() -> Graph {
        let mut e: Vec<(usize, usize)> = (0..4).map(|i| (i, i + 1)).collect();
        e.extend((5..9).map(|i| (i, i + 1)));
        e.extend([(4, 10), (10, 9)]);
        Graph::from_edges(11, &e).unwrap()
    }

    #[test]
    fn two_tails_on_h_graph() {
        let g = h_graph();
        let (p1, p2) = (p(&[0, 1, 2, 3, 4]), p(&[5, 6, 7, 8, 9]));
        let w = surgery_two_tails(&p1, &p(&[3, 4]), &p2, &p(&[9]), &p(&[4, 10, 9])).unwrap();
        let total: usize = w.outputs.iter().map(Path::len).sum();
        assert!(total >= 9 && total > 8);
        assert!(w.outputs.iter().all(|q| q.is_valid_in(&g)));
        assert_eq!(w.outputs[0], p(&[0, 1, 2, 3, 4, 10, 9]));
        assert_eq!(w.outputs[1], p(&[5, 6, 7, 8, 9, 10, 4]));
    }

    #[test]
    fn two_tails_precondition_errors() {
        let (p1, p2) = (p(&[0, 1, 2, 3, 4]), p(&[5, 6, 7, 8, 9]));
        let conn = p(&[4, 10, 9]);
        let crossing = p(&[0, 1, 2, 3, 4, 6]);
        assert_eq!(
            surgery_two_tails(&crossing, &p(&[4, 6]), &p2, &p(&[9]), &conn),
            Err(SurgeryError::TailMeetsOtherPath { which: 1 })
        );
        assert_eq!(
            surgery_two_tails(&p1, &p(&[1, 2]), &p2, &p(&[9]), &conn),
            Err(SurgeryError::NotATail { which: 1 })
        );
        assert_eq!(
            surgery_two_tails(&p1, &p(&[4, 2]), &p2, &p(&[9]), &conn),
            Err(SurgeryError::NotASubpath { which: 1 })
        );
        assert_eq!(
            surgery_two_tails(&p1, &p(&[4]), &p2, &p(&[9]), &p(&[3, 4, 10, 9])),
            Err(SurgeryError::ConnOutsideTail { which: 1 })
        );
        assert_eq!(
            surgery_two_tails(&p1, &p(&[4]), &p2, &p(&[9]), &p(&[10, 9])),
            Err(SurgeryError::ConnMissesPath { which: 1 })
        );
    }

    /// Paths 0-1-2-3 and 4-1-5-6 share vertex 1; vertex 7 links 3 and 6.
    fn theta() -> (Graph, Path, Path) {
        let g = Graph::from_edges(8, &[(0, 1), (1, 2), (2, 3), (4, 1), (1, 5), (5, 6), (3, 7), (7, 6)])
            .unwrap();
        (g, p(&[0, 1, 2, 3]), p(&[4, 1, 5, 6]))
    }

    #[test]
    fn shared_vertex_tie_beats_p2() {
        let (g, p1, p2) = theta();
        let w = surgery_shared_vertex(&p1, &p2, 1, &p(&[1, 2, 3]), &p(&[1, 5, 6]), &p(&[3, 7, 6]))
            .unwrap();
        assert_eq!(w.beats, Some(2));
        assert!(w.outputs[0].len() > p2.len());
        assert!(w.outputs[0].is_valid_in(&g));
    }

    #[test]
    fn shared_vertex_short_side_beats_p1() {
        let g = Graph::from_edges(8, &[(0, 1), (1, 2), (4, 1), (1, 5), (5, 6), (2, 7), (7, 6), (6, 3)])
            .unwrap();
        let (p1, p2) = (p(&[0, 1, 2]), p(&[4, 1, 5, 6, 3]));
        let w = surgery_shared_vertex(&p1, &p2, 1, &p(&[1, 2]), &p(&[1, 5, 6]), &p(&[2, 7, 6]))
            .unwrap();
        assert_eq!(w.beats, Some(1));
        assert!(w.outputs[0].len() > p1.len());
        assert!(w.outputs[0].is_valid_in(&g));
    }

    #[test]
    fn shared_vertex_rejects_z_on_conn() {
        let (_, p1, p2) = theta();
        assert_eq!(
            surgery_shared_vertex(&p1, &p2, 1, &p(&[1, 2, 3]), &p(&[1, 5, 6]), &p(&[3, 2, 1, 5])),
            Err(SurgeryError::SharedVertexOnConn)
        );
        assert_eq!(
            surgery_shared_vertex(&p1, &p2, 2, &p(&[1, 2, 3]), &p(&[1, 5, 6]), &p(&[3, 7, 6])),
            Err(SurgeryError::SharedVertexMissing)
        );
    }

    #[test]
    fn corollary_dispatches_both_ways() {
        let (g, p1, p2) = theta();
        let shared = surgery_corollary(&p1, &p2, 1, &p(&[1, 2, 3]), &[p(&[1, 5, 6])], &p(&[3, 7, 6]))
            .unwrap();
        assert_eq!((shared.kind, shared.via), (SurgeryKind::CorollaryDispatch, Some(SurgeryKind::SharedVertex)));
        assert!(shared.claim_holds() && shared.outputs[0].is_valid_in(&g));

        let split = surgery_corollary(&p1, &p2, 1, &p(&[1, 2, 3]), &[p(&[6])], &p(&[3, 7, 6])).unwrap();
        assert_eq!(split.via, Some(SurgeryKind::TwoTails));
        assert!(split.claim_holds() && split.outputs.iter().all(|q| q.is_valid_in(&g)));

        assert_eq!(
            surgery_corollary(&p1, &p2, 1, &p(&[1, 2, 3]), &[p(&[1, 5, 6])], &p(&[7])),
            Err(SurgeryError::ConnMissesPath { which: 1 })
        );
    }
}
