//! Gallai vertices of connected series-parallel graphs: the vertex-deletion
//! algorithm, the single-pass marking algorithm, and the brute-force oracle
//! behind one report type.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomposition::{decomposition_from_embedding, make_nice};
use crate::dp::{mark_contributing_configs, run_forward_dp, vertices_on_every_realization};
use crate::graph::Graph;
use crate::oracle::{enumerate_longest_paths, OracleError};
use crate::sp::{complete_to_two_tree, SpError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GallaiError {
    #[error("graph is not series-parallel")]
    NotSeriesParallel,
    #[error("graph is disconnected")]
    Disconnected,
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("reports disagree: {detail}\n{dump}")]
    Mismatch { detail: String, dump: String },
    #[error("no reports to merge")]
    NothingToMerge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Naive,
    Fast,
    Oracle,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Naive => "naive",
            Algorithm::Fast => "fast",
            Algorithm::Oracle => "oracle",
        })
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naive" => Ok(Algorithm::Naive),
            "fast" => Ok(Algorithm::Fast),
            "oracle" => Ok(Algorithm::Oracle),
            _ => Err(format!("unknown algorithm {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GallaiReport {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "L")]
    pub length: usize,
    pub gallai: Vec<usize>,
    pub algo: Algorithm,
    pub millis: f64,
}

fn check_input(g: &Graph) -> Result<(), GallaiError> {
    if !g.is_connected() {
        return Err(GallaiError::Disconnected);
    }
    Ok(())
}

fn sp_error(e: SpError) -> GallaiError {
    match e {
        SpError::Disconnected => GallaiError::Disconnected,
        _ => GallaiError::NotSeriesParallel,
    }
}

/// `L(G)` of a connected series-parallel graph through the full pipeline.
pub fn longest_path_length_sp(g: &Graph) -> Result<usize, GallaiError> {
    check_input(g)?;
    if g.n() == 1 {
        return Ok(0);
    }
    let emb = complete_to_two_tree(g).map_err(sp_error)?;
    let td = decomposition_from_embedding(&emb).expect("completion yields a valid embedding");
    let ntd = make_nice(&td).expect("embedding decomposition is a tree");
    let dp = run_forward_dp(&ntd, g).expect("width-2 decomposition of g");
    Ok(dp.longest_path_length())
}

/// Longest path length of a possibly disconnected series-parallel graph,
/// with `-1` for the empty graph.
fn longest_over_components(g: &Graph) -> Result<i64, GallaiError> {
    let mut best = -1i64;
    for comp in g.components() {
        let (h, _) = g.induced_subgraph(&comp);
        best = best.max(longest_path_length_sp(&h)? as i64);
    }
    Ok(best)
}

/// `v` is a Gallai vertex iff `L(G - v) < L(G)`. The `n` deletions run in
/// parallel.
pub fn gallai_naive(g: &Graph) -> Result<GallaiReport, GallaiError> {
    let start = Instant::now();
    let length = longest_path_length_sp(g)?;
    let flags: Vec<bool> = (0..g.n())
        .into_par_iter()
        .map(|v| -> Result<bool, GallaiError> {
            let without = match g.delete_vertex(v) {
                Ok((h, _)) => longest_over_components(&h)?,
                Err(_) => -1,
            };
            Ok(without < length as i64)
        })
        .collect::<Result<_, _>>()?;
    Ok(GallaiReport {
        n: g.n(),
        m: g.m(),
        length,
        gallai: (0..g.n()).filter(|&v| flags[v]).collect(),
        algo: Algorithm::Naive,
        millis: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// One forward pass and one marking pass. A vertex is reported when every
/// marked predecessor at its forget node gives it at least one path edge.
pub fn gallai_fast(g: &Graph) -> Result<GallaiReport, GallaiError> {
    let start = Instant::now();
    check_input(g)?;
    let (length, gallai) = if g.n() == 1 {
        (0, vec![0])
    } else {
        let emb = complete_to_two_tree(g).map_err(sp_error)?;
        let td = decomposition_from_embedding(&emb).expect("completion yields a valid embedding");
        let ntd = make_nice(&td).expect("embedding decomposition is a tree");
        let dp = run_forward_dp(&ntd, g).expect("width-2 decomposition of g");
        let marking = mark_contributing_configs(&dp);
        (dp.longest_path_length(), vertices_on_every_realization(&dp, &marking, g.n()))
    };
    Ok(GallaiReport {
        n: g.n(),
        m: g.m(),
        length,
        gallai,
        algo: Algorithm::Fast,
        millis: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Intersection of the exhaustively enumerated longest paths.
pub fn gallai_oracle(g: &Graph) -> Result<GallaiReport, GallaiError> {
    let start = Instant::now();
    let lps = enumerate_longest_paths(g)?;
    Ok(GallaiReport {
        n: g.n(),
        m: g.m(),
        length: lps.length,
        gallai: lps.common_vertices().into_iter().collect(),
        algo: Algorithm::Oracle,
        millis: start.elapsed().as_secs_f64() * 1e3,
    })
}

pub fn gallai(g: &Graph, algo: Algorithm) -> Result<GallaiReport, GallaiError> {
    match algo {
        Algorithm::Naive => gallai_naive(g),
        Algorithm::Fast => gallai_fast(g),
        Algorithm::Oracle => gallai_oracle(g),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MergedReport {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "L")]
    pub length: usize,
    pub gallai: Vec<usize>,
    pub algos: Vec<Algorithm>,
    pub millis: Vec<f64>,
}

/// Consolidates reports for the same graph, failing with a reproducer dump
/// of `g` when any two disagree on `L` or on the Gallai set.
pub fn gallai_report_merge(g: &Graph, reports: &[GallaiReport]) -> Result<MergedReport, GallaiError> {
    let first = reports.first().ok_or(GallaiError::NothingToMerge)?;
    for r in &reports[1..] {
        if (r.n, r.m, r.length, &r.gallai) != (first.n, first.m, first.length, &first.gallai) {
            return Err(GallaiError::Mismatch {
                detail: format!(
                    "{}: L={} {:?} vs {}: L={} {:?}",
                    first.algo, first.length, first.gallai, r.algo, r.length, r.gallai
                ),
                dump: g.to_edge_list(),
            });
        }
    }
    Ok(MergedReport {
        n: first.n,
        m: first.m,
        length: first.length,
        gallai: first.gallai.clone(),
        algos: reports.iter().map(|r| r.algo).collect(),
        millis: reports.iter().map(|r| r.millis).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{named_graph, NamedGraph};

    #[test]
    fn named_examples() {
        let p5 = named_graph(&NamedGraph::Path(5));
        let star = named_graph(&NamedGraph::Star(3));
        let tri = named_graph(&NamedGraph::Triangle);
        for algo in [Algorithm::Naive, Algorithm::Fast, Algorithm::Oracle] {
            assert_eq!(gallai(&p5, algo).unwrap().gallai, vec![0, 1, 2, 3, 4], "{algo}");
            assert_eq!(gallai(&star, algo).unwrap().gallai, vec![0], "{algo}");
            assert_eq!(gallai(&tri, algo).unwrap().gallai, vec![0, 1, 2], "{algo}");
            let k1 = Graph::from_edges(1, &[]).unwrap();
            let r = gallai(&k1, algo).unwrap();
            assert_eq!((r.length, r.gallai), (0, vec![0]), "{algo}");
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let k4 = named_graph(&NamedGraph::K4);
        assert_eq!(gallai_fast(&k4).unwrap_err(), GallaiError::NotSeriesParallel);
        assert_eq!(gallai_naive(&k4).unwrap_err(), GallaiError::NotSeriesParallel);
        let split = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(gallai_fast(&split).unwrap_err(), GallaiError::Disconnected);
    }

    #[test]
    fn merge_detects_corruption() {
        let p5 = named_graph(&NamedGraph::Path(5));
        let a = gallai_naive(&p5).unwrap();
        let b = gallai_fast(&p5).unwrap();
        let merged = gallai_report_merge(&p5, &[a.clone(), b.clone()]).unwrap();
        assert_eq!(merged.algos, vec![Algorithm::Naive, Algorithm::Fast]);
        let mut bad = b;
        bad.gallai.pop();
        match gallai_report_merge(&p5, &[a, bad]) {
            Err(GallaiError::Mismatch { dump, .. }) => assert!(dump.starts_with("5 4\n")),
            other => panic!("expected mismatch, got {other:?}"),
        }
        assert_eq!(gallai_report_merge(&p5, &[]).unwrap_err(), GallaiError::NothingToMerge);
    }

    #[test]
    fn report_json_field_names() {
        let r = gallai_fast(&named_graph(&NamedGraph::Star(3))).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for key in ["n", "m", "L", "gallai", "algo", "millis"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["algo"], "fast");
    }
}
