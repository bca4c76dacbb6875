//! The triangle, edge and shrinking-component argument run against the
//! enumerated set of longest paths. Each step records the checks it passed
//! so a trace can be re-verified from scratch.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::oracle::{enumerate_longest_paths_with_cap, LongestPathSet, OracleError, DEFAULT_CAP};
use crate::sp::{complete_to_two_tree, components_of_virtual_edge, virtual_triangles, Component, SpError, TwoTreeEmbedding};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("graph is not series-parallel")]
    NotSeriesParallel,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is trivial")]
    Trivial,
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("stale input: {0}")]
    StaleInput(String),
    #[error("triangle {0:?} is not a Gallai set")]
    NotGallaiTriangle([usize; 3]),
    #[error("no candidate found: {0}")]
    NoCandidate(String),
    #[error("step {step}: {reason}")]
    Invalid { step: usize, reason: String },
}

fn sp_error(e: SpError) -> TraceError {
    match e {
        SpError::Disconnected => TraceError::Disconnected,
        _ => TraceError::NotSeriesParallel,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    TriangleFound,
    EdgeSelected,
    ComponentIterated,
    VertexFound,
}

/// One longest-path check a step relies on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Check {
    /// Longest path number `path` avoids the previous triangle and lies in
    /// the interior of the step's component.
    AvoidingPath { path: usize },
    /// Every longest path meets `vertices`.
    GallaiSet { vertices: Vec<usize> },
    /// All `pairs` required pairs of longest paths meet in the interior of
    /// the step's component.
    PairsMeetInInterior { pairs: usize },
    /// Component vertex count went from `before` to `after`.
    StrictlySmaller { before: usize, after: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub kind: StepKind,
    pub triangle: Option<[usize; 3]>,
    pub edge: Option<(usize, usize)>,
    pub component: Option<Component>,
    pub vertex: Option<usize>,
    pub justification: Vec<Check>,
}

impl TraceStep {
    fn vertex_found(v: usize) -> TraceStep {
        TraceStep {
            kind: StepKind::VertexFound,
            triangle: None,
            edge: None,
            component: None,
            vertex: Some(v),
            justification: vec![Check::GallaiSet { vertices: vec![v] }],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofTrace {
    pub steps: Vec<TraceStep>,
    pub final_vertex: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Vertex(usize),
    Edge { edge: (usize, usize), component: Component },
}

fn mask(vs: &VertexSet) -> u64 {
    vs.iter().fold(0, |m, &v| m | 1 << v)
}

fn sorted_pair(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn sorted_triple(mut t: [usize; 3]) -> [usize; 3] {
    t.sort_unstable();
    t
}

/// Number of required pairs when every pair from `L_{u not v} x L_{v not u}`,
/// `L_{u not v} x L_{uv}` and `L_{v not u} x L_{uv}` meets inside
/// `interior`; `None` as soon as one pair does not.
pub fn pair_condition(lps: &LongestPathSet, (u, v): (usize, usize), interior: &VertexSet) -> Option<usize> {
    let (mu, mv, inner) = (1u64 << u, 1u64 << v, mask(interior));
    let mut classes: [Vec<u64>; 3] = Default::default();
    for &m in lps.masks() {
        match (m & mu != 0, m & mv != 0) {
            (true, false) => classes[0].push(m),
            (false, true) => classes[1].push(m),
            (true, true) => classes[2].push(m),
            (false, false) => {}
        }
    }
    let pairs = classes[0].len() * classes[1].len()
        + classes[0].len() * classes[2].len()
        + classes[1].len() * classes[2].len();
    for c in &mut classes {
        c.sort_unstable();
        c.dedup();
    }
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        for &p in &classes[a] {
            if classes[b].iter().any(|&q| p & q & inner == 0) {
                return None;
            }
        }
    }
    Some(pairs)
}

/// Summed distance from the middle of each longest path; smaller is more
/// central.
fn off_centre(lps: &LongestPathSet, v: usize) -> usize {
    lps.paths
        .iter()
        .filter_map(|p| p.position(v).map(|i| (2 * i).abs_diff(p.len())))
        .sum()
}

/// Among the candidates that meet every longest path, the most central one,
/// lowest id on ties.
fn choose_vertex(lps: &LongestPathSet, candidates: &[usize]) -> Option<usize> {
    candidates
        .iter()
        .copied()
        .filter(|&c| lps.is_gallai_set(&[c]))
        .min_by_key(|&c| (off_centre(lps, c), c))
}

fn check_lps(g: &Graph, lps: &LongestPathSet) -> Result<(), TraceError> {
    if lps.is_empty() || lps.paths.iter().any(|p| p.len() != lps.length || !p.is_valid_in(g)) {
        return Err(TraceError::StaleInput("longest path set does not match the graph".into()));
    }
    Ok(())
}

fn triangle_edges([a, b, c]: [usize; 3]) -> [(usize, usize, usize); 3] {
    [(a, b, c), (a, c, b), (b, c, a)]
}

/// Walks from the lowest virtual triangle towards longest paths that avoid
/// it until every longest path meets the current triangle. One step per
/// triangle visited.
pub fn find_gallai_triangle(
    g: &Graph,
    emb: &TwoTreeEmbedding,
    lps: &LongestPathSet,
) -> Result<([usize; 3], Vec<TraceStep>), TraceError> {
    if g.n() < 3 {
        return Err(TraceError::Trivial);
    }
    check_lps(g, lps)?;
    let mut tri = virtual_triangles(emb).map_err(sp_error)?[0];
    let mut steps = vec![TraceStep {
        kind: StepKind::TriangleFound,
        triangle: Some(tri),
        edge: None,
        component: None,
        vertex: None,
        justification: Vec::new(),
    }];
    let mut current: Option<Component> = None;
    loop {
        let avoiding = lps.avoiding(&tri);
        let Some(&path) = avoiding.first() else {
            steps.last_mut().unwrap().justification.push(Check::GallaiSet { vertices: tri.to_vec() });
            return Ok((tri, steps));
        };
        let pm = lps.mask(path);
        let mut next = None;
        'search: for (x, y, k) in triangle_edges(tri) {
            for comp in components_of_virtual_edge(emb, x, y).map_err(sp_error)? {
                if comp.direction != k && pm & !mask(&comp.interior) == 0 {
                    next = Some(comp);
                    break 'search;
                }
            }
        }
        let comp = next.ok_or_else(|| TraceError::NoCandidate(format!("path {path} lies in no component")))?;
        let mut justification = vec![Check::AvoidingPath { path }];
        if let Some(prev) = &current {
            if !(comp.vertices.is_subset(&prev.vertices) && comp.len() < prev.len()) {
                return Err(TraceError::NoCandidate("triangle walk stopped shrinking".into()));
            }
            justification.push(Check::StrictlySmaller { before: prev.len(), after: comp.len() });
        }
        tri = sorted_triple([comp.anchor.0, comp.anchor.1, comp.direction]);
        steps.push(TraceStep {
            kind: StepKind::TriangleFound,
            triangle: Some(tri),
            edge: Some(comp.anchor),
            component: Some(comp.clone()),
            vertex: None,
            justification,
        });
        current = Some(comp);
    }
}

/// A Gallai vertex of the triangle if there is one, otherwise the first
/// Gallai edge of the triangle with a component in which all required pairs
/// of longest paths meet.
pub fn select_gallai_edge(
    emb: &TwoTreeEmbedding,
    triangle: [usize; 3],
    lps: &LongestPathSet,
) -> Result<(Outcome, TraceStep), TraceError> {
    if !lps.is_gallai_set(&triangle) {
        return Err(TraceError::NotGallaiTriangle(triangle));
    }
    if let Some(v) = choose_vertex(lps, &triangle) {
        return Ok((Outcome::Vertex(v), TraceStep::vertex_found(v)));
    }
    let tri = sorted_triple(triangle);
    let mut edges: Vec<(usize, usize)> = triangle_edges(tri).iter().map(|&(x, y, _)| (x, y)).collect();
    edges.sort_unstable();
    for (u, v) in edges {
        if !lps.is_gallai_set(&[u, v]) {
            continue;
        }
        for comp in components_of_virtual_edge(emb, u, v).map_err(sp_error)? {
            if let Some(pairs) = pair_condition(lps, (u, v), &comp.interior) {
                let step = TraceStep {
                    kind: StepKind::EdgeSelected,
                    triangle: Some(tri),
                    edge: Some((u, v)),
                    component: Some(comp.clone()),
                    vertex: None,
                    justification: vec![
                        Check::GallaiSet { vertices: vec![u, v] },
                        Check::PairsMeetInInterior { pairs },
                    ],
                };
                return Ok((Outcome::Edge { edge: (u, v), component: comp }, step));
            }
        }
    }
    Err(TraceError::NoCandidate(format!("no edge of {tri:?} has a suitable component")))
}

/// One shrinking step: a Gallai vertex among `u`, `v` and the apex `w` of
/// `c`, or an edge `{u,w}` / `{v,w}` with a strictly smaller component that
/// keeps the pair property.
pub fn iterate_component(
    emb: &TwoTreeEmbedding,
    edge: (usize, usize),
    c: &Component,
    lps: &LongestPathSet,
) -> Result<(Outcome, TraceStep), TraceError> {
    let (u, v) = edge;
    if sorted_pair(u, v) != c.anchor {
        return Err(TraceError::StaleInput("component is not generated by the edge".into()));
    }
    if !lps.is_gallai_set(&[u, v]) || pair_condition(lps, edge, &c.interior).is_none() {
        return Err(TraceError::StaleInput("edge and component lack the pair property".into()));
    }
    let w = c.direction;
    if let Some(x) = choose_vertex(lps, &[u, v, w]) {
        return Ok((Outcome::Vertex(x), TraceStep::vertex_found(x)));
    }
    let mut candidates = [sorted_pair(u, w), sorted_pair(v, w)];
    candidates.sort_unstable();
    for f in candidates {
        if !lps.is_gallai_set(&[f.0, f.1]) {
            continue;
        }
        for comp in components_of_virtual_edge(emb, f.0, f.1).map_err(sp_error)? {
            if comp.len() >= c.len() || !comp.vertices.is_subset(&c.vertices) {
                continue;
            }
            if let Some(pairs) = pair_condition(lps, f, &comp.interior) {
                let step = TraceStep {
                    kind: StepKind::ComponentIterated,
                    triangle: Some(sorted_triple([u, v, w])),
                    edge: Some(f),
                    component: Some(comp.clone()),
                    vertex: None,
                    justification: vec![
                        Check::GallaiSet { vertices: vec![f.0, f.1] },
                        Check::PairsMeetInInterior { pairs },
                        Check::StrictlySmaller { before: c.len(), after: comp.len() },
                    ],
                };
                return Ok((Outcome::Edge { edge: f, component: comp }, step));
            }
        }
    }
    Err(TraceError::NoCandidate(format!("no smaller component below {edge:?}")))
}

pub fn run_trace(g: &Graph) -> Result<ProofTrace, TraceError> {
    run_trace_with_cap(g, DEFAULT_CAP)
}

/// Full pipeline: embed, enumerate longest paths, find a Gallai triangle,
/// pick an edge and shrink until a Gallai vertex appears.
pub fn run_trace_with_cap(g: &Graph, cap: usize) -> Result<ProofTrace, TraceError> {
    if !g.is_connected() {
        return Err(TraceError::Disconnected);
    }
    if g.n() == 1 {
        return Ok(ProofTrace { steps: vec![TraceStep::vertex_found(0)], final_vertex: 0 });
    }
    let emb = complete_to_two_tree(g).map_err(sp_error)?;
    let lps = enumerate_longest_paths_with_cap(g, cap)?;
    if g.n() == 2 {
        let v = choose_vertex(&lps, &[0, 1]).expect("an edge meets its own longest path");
        return Ok(ProofTrace { steps: vec![TraceStep::vertex_found(v)], final_vertex: v });
    }
    let (tri, mut steps) = find_gallai_triangle(g, &emb, &lps)?;
    let (mut outcome, step) = select_gallai_edge(&emb, tri, &lps)?;
    steps.push(step);
    for _ in 0..g.n() {
        match outcome {
            Outcome::Vertex(v) => return Ok(ProofTrace { steps, final_vertex: v }),
            Outcome::Edge { edge, component } => {
                let (next, step) = iterate_component(&emb, edge, &component, &lps)?;
                steps.push(step);
                outcome = next;
            }
        }
    }
    Err(TraceError::NoCandidate("component chain did not terminate".into()))
}

struct Verifier<'a> {
    emb: Option<TwoTreeEmbedding>,
    lps: &'a LongestPathSet,
    index: usize,
}

impl Verifier<'_> {
    fn fail<T>(&self, reason: impl Into<String>) -> Result<T, TraceError> {
        Err(TraceError::Invalid { step: self.index, reason: reason.into() })
    }

    fn ensure(&self, ok: bool, reason: &str) -> Result<(), TraceError> {
        if ok {
            Ok(())
        } else {
            self.fail(reason)
        }
    }

    fn emb(&self) -> Result<&TwoTreeEmbedding, TraceError> {
        match &self.emb {
            Some(e) => Ok(e),
            None => self.fail("graph has no triangles"),
        }
    }

    fn is_triangle(&self, [a, b, c]: [usize; 3]) -> Result<bool, TraceError> {
        let h = &self.emb()?.host;
        Ok(h.has_edge(a, b) && h.has_edge(b, c) && h.has_edge(a, c))
    }

    /// The stored component must be exactly the one the host generates.
    fn genuine(&self, c: &Component) -> Result<(), TraceError> {
        let real = components_of_virtual_edge(self.emb()?, c.anchor.0, c.anchor.1)
            .map_err(|_| TraceError::Invalid { step: self.index, reason: "anchor is not a virtual edge".into() })?;
        self.ensure(real.iter().any(|r| r == c), "component does not match the host")
    }

    fn recheck(&self, step: &TraceStep, check: &Check, prev: Option<&Component>) -> Result<(), TraceError> {
        match check {
            Check::AvoidingPath { path } => {
                let comp = step.component.as_ref();
                let ok = *path < self.lps.len()
                    && comp.is_some_and(|c| self.lps.paths[*path].vertices().iter().all(|v| c.interior.contains(v)));
                self.ensure(ok, "avoiding path is not inside the component")
            }
            Check::GallaiSet { vertices } => {
                self.ensure(self.lps.is_gallai_set(vertices), "claimed Gallai set misses a longest path")
            }
            Check::PairsMeetInInterior { pairs } => {
                let (Some(edge), Some(c)) = (step.edge, step.component.as_ref()) else {
                    return self.fail("pair check without edge and component");
                };
                self.ensure(pair_condition(self.lps, edge, &c.interior) == Some(*pairs), "pair check fails")
            }
            Check::StrictlySmaller { before, after } => {
                let (Some(p), Some(c)) = (prev, step.component.as_ref()) else {
                    return self.fail("size check without two components");
                };
                self.ensure(
                    *before == p.len() && *after == c.len() && after < before && c.vertices.is_subset(&p.vertices),
                    "component did not shrink",
                )
            }
        }
    }
}

/// Re-checks every step of `trace` against `g` and its longest paths.
pub fn verify_trace(g: &Graph, trace: &ProofTrace, lps: &LongestPathSet) -> Result<(), TraceError> {
    let emb = if g.n() >= 3 { Some(complete_to_two_tree(g).map_err(sp_error)?) } else { None };
    let mut vf = Verifier { emb, lps, index: 0 };
    if g.n() > 1 {
        check_lps(g, lps)?;
    }
    let steps = &trace.steps;
    let Some(last) = steps.last() else {
        return vf.fail("empty trace");
    };
    vf.index = steps.len() - 1;
    vf.ensure(last.kind == StepKind::VertexFound, "trace does not end with a vertex")?;
    vf.ensure(last.vertex == Some(trace.final_vertex), "final vertex differs from the last step")?;
    vf.ensure(
        (g.n() == 1 && trace.final_vertex == 0) || lps.common_vertices().contains(&trace.final_vertex),
        "final vertex is not on every longest path",
    )?;

    let mut triangle: Option<[usize; 3]> = None;
    let mut triangle_is_gallai = false;
    let mut chain: Option<Component> = None;
    let mut edge: Option<(usize, usize)> = None;
    for (i, step) in steps.iter().enumerate() {
        vf.index = i;
        let prev = chain.as_ref();
        for check in &step.justification {
            vf.recheck(step, check, prev)?;
        }
        let gallai = |vs: &[usize]| step.justification.contains(&Check::GallaiSet { vertices: vs.to_vec() });
        match step.kind {
            StepKind::TriangleFound => {
                vf.ensure(edge.is_none(), "triangle step after the edge phase")?;
                let Some(t) = step.triangle else { return vf.fail("missing triangle") };
                vf.ensure(vf.is_triangle(t)?, "not a virtual triangle")?;
                match (triangle, &step.component, step.edge) {
                    (None, None, None) => {}
                    (Some(before), Some(c), Some(e)) => {
                        vf.genuine(c)?;
                        let inside = |t: &[usize; 3], x: usize| t.contains(&x);
                        vf.ensure(
                            e == c.anchor && inside(&before, e.0) && inside(&before, e.1),
                            "move edge is not on the previous triangle",
                        )?;
                        vf.ensure(sorted_triple([e.0, e.1, c.direction]) == t, "triangle is not edge plus apex")?;
                        let avoid = step.justification.iter().find_map(|c| match c {
                            Check::AvoidingPath { path } => Some(*path),
                            _ => None,
                        });
                        let ok = avoid.is_some_and(|p| lps.mask(p) & before.iter().fold(0, |m, &v| m | 1u64 << v) == 0);
                        vf.ensure(ok, "no longest path avoids the previous triangle")?;
                        if chain.is_some() {
                            vf.ensure(
                                step.justification.iter().any(|c| matches!(c, Check::StrictlySmaller { .. })),
                                "missing size check",
                            )?;
                        }
                        chain = Some(c.clone());
                    }
                    _ => return vf.fail("malformed triangle step"),
                }
                triangle = Some(t);
                triangle_is_gallai = gallai(&t);
            }
            StepKind::EdgeSelected => {
                let (Some(t), Some(e), Some(c)) = (triangle, step.edge, &step.component) else {
                    return vf.fail("edge step without triangle, edge or component");
                };
                vf.ensure(triangle_is_gallai, "triangle phase did not end at a Gallai triangle")?;
                vf.ensure(edge.is_none() && t.contains(&e.0) && t.contains(&e.1), "edge not on the final triangle")?;
                vf.genuine(c)?;
                vf.ensure(c.anchor == e && gallai(&[e.0, e.1]), "edge is not a Gallai edge")?;
                vf.ensure(
                    step.justification.iter().any(|c| matches!(c, Check::PairsMeetInInterior { .. })),
                    "missing pair check",
                )?;
                edge = Some(e);
                chain = Some(c.clone());
            }
            StepKind::ComponentIterated => {
                let (Some(e), Some(prev_c), Some(f), Some(c)) = (edge, prev, step.edge, &step.component) else {
                    return vf.fail("iteration without a previous edge");
                };
                let apex = prev_c.direction;
                vf.ensure(
                    f != e && [e.0, e.1].iter().any(|&x| sorted_pair(x, apex) == f),
                    "edge is not incident to the previous edge and apex",
                )?;
                vf.genuine(c)?;
                vf.ensure(c.anchor == f && gallai(&[f.0, f.1]), "edge is not a Gallai edge")?;
                for needed in ["pair", "size"] {
                    let present = step.justification.iter().any(|c| match c {
                        Check::PairsMeetInInterior { .. } => needed == "pair",
                        Check::StrictlySmaller { .. } => needed == "size",
                        _ => false,
                    });
                    vf.ensure(present, "missing pair or size check")?;
                }
                edge = Some(f);
                chain = Some(c.clone());
            }
            StepKind::VertexFound => {
                vf.ensure(i + 1 == steps.len(), "vertex step before the end")?;
                let Some(v) = step.vertex else { return vf.fail("missing vertex") };
                vf.ensure(gallai(&[v]), "vertex is not a Gallai vertex")?;
                let context: Vec<usize> = match (edge, prev, triangle) {
                    (Some(e), Some(c), _) => vec![e.0, e.1, c.direction],
                    (None, _, Some(t)) => {
                        vf.ensure(triangle_is_gallai, "triangle phase did not end at a Gallai triangle")?;
                        t.to_vec()
                    }
                    _ => (0..g.n()).collect(),
                };
                vf.ensure(g.n() <= 2 || context.contains(&v), "vertex is not on the current triangle")?;
            }
        }
    }
    Ok(())
}
