use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;
use spgallai::corpus::{generate, named_graph, GenSpec, NamedGraph};
use spgallai::decomposition::{
    decomposition_from_elimination_order, decomposition_from_embedding, make_nice, NiceTreeDecomposition, NodeKind,
};
use spgallai::dp::{extract_longest_path, run_forward_dp};
use spgallai::gallai::{gallai, GallaiError};
use spgallai::oracle::{
    classify_longest_paths, enumerate_longest_paths_with_cap, exact_treewidth, hamiltonian_cycle_exists,
    hamiltonian_path_exists, p_wise_common_vertex, pairwise_intersection_holds, LongestPathSet, OracleError,
};
use spgallai::prooftrace::{run_trace_with_cap, verify_trace, ProofTrace, StepKind, TraceError};
use spgallai::sp::{complete_to_two_tree, recognize_partial_two_tree, Recognition, SpError};
use spgallai::{Graph, Path};

use crate::args::{Cli, Command, Format, GenArgs, OracleOpts, OracleQuery};
use crate::output::{braces, emit, join, read_graph};
use crate::{bench, verify, Failure};

pub fn run(cli: Cli) -> Result<(), Failure> {
    let f = cli.format;
    match cli.command {
        Command::Recognize(input) => recognize(f, &read_graph(&input)?),
        Command::Embed(input) => embed(f, &read_graph(&input)?),
        Command::Decompose(input) => decompose(f, &read_graph(&input)?),
        Command::Lp { input, path, dump_tables } => lp(f, &read_graph(&input)?, path, dump_tables),
        Command::Gallai { input, algo, verify_theorem } => {
            let g = read_graph(&input)?;
            let report = gallai(&g, algo.into()).map_err(gallai_failure)?;
            emit(f, &report, || {
                format!(
                    "L {}\ngallai {}\nalgo {}\ntime {:.3} ms\n",
                    report.length,
                    braces(&report.gallai),
                    report.algo,
                    report.millis
                )
            });
            if verify_theorem && report.gallai.is_empty() {
                return Err(Failure::Verification("no vertex lies on every longest path".into()));
            }
            Ok(())
        }
        Command::Oracle { query } => oracle(f, query),
        Command::Trace { input, verify, cap } => trace(f, &read_graph(&input)?, verify, cap),
        Command::Gen(args) => gen(f, &args),
        Command::Verify(args) => verify::run(f, &args),
        Command::Bench(args) => bench::run(f, &args),
    }
}

fn sp_failure(e: SpError) -> Failure {
    Failure::Input(e.to_string())
}

fn gallai_failure(e: GallaiError) -> Failure {
    match e {
        GallaiError::Mismatch { .. } => Failure::Verification(e.to_string()),
        GallaiError::Oracle(o) => oracle_failure(o),
        _ => Failure::Input(e.to_string()),
    }
}

fn oracle_failure(e: OracleError) -> Failure {
    match e {
        OracleError::BadP | OracleError::BadVertices => Failure::Usage(e.to_string()),
        _ => Failure::Input(e.to_string()),
    }
}

fn recognize(f: Format, g: &Graph) -> Result<(), Failure> {
    match recognize_partial_two_tree(g) {
        Recognition::PartialTwoTree { elimination_order } => {
            let out = json!({ "n": g.n(), "m": g.m(), "accepted": true, "elimination_order": elimination_order });
            emit(f, &out, || format!("accepted: partial 2-tree\nelimination order {}\n", join(&elimination_order)));
        }
        Recognition::Rejected(cert) => {
            let out = json!({ "n": g.n(), "m": g.m(), "accepted": false, "certificate": cert });
            emit(f, &out, || {
                let sets: Vec<String> = cert.branch_sets.iter().map(braces).collect();
                format!("rejected: K4 minor with branch sets {}\n", sets.join(" "))
            });
        }
    }
    Ok(())
}

fn embed(f: Format, g: &Graph) -> Result<(), Failure> {
    let emb = complete_to_two_tree(g).map_err(sp_failure)?;
    emit(f, &emb, || {
        let mut s = format!(
            "base edge {} {}\nelimination order {}\n",
            emb.base_edge.0,
            emb.base_edge.1,
            join(&emb.elimination_order)
        );
        for ((u, v), &real) in emb.host.edges().zip(&emb.real) {
            let _ = writeln!(s, "{u} {v} {}", if real { "real" } else { "virtual" });
        }
        s
    });
    Ok(())
}

/// The pipeline's decomposition for connected graphs with two or more
/// vertices; otherwise one built from the recognizer's elimination order.
fn nice_decomposition(g: &Graph) -> Result<NiceTreeDecomposition, Failure> {
    let td = if g.n() >= 2 && g.is_connected() {
        let emb = complete_to_two_tree(g).map_err(sp_failure)?;
        decomposition_from_embedding(&emb).expect("completion is a valid embedding")
    } else {
        let Recognition::PartialTwoTree { elimination_order } = recognize_partial_two_tree(g) else {
            return Err(sp_failure(SpError::NotPartialTwoTree));
        };
        decomposition_from_elimination_order(g, &elimination_order).expect("order covers every vertex")
    };
    Ok(make_nice(&td).expect("decomposition is a tree"))
}

fn decompose(f: Format, g: &Graph) -> Result<(), Failure> {
    let ntd = nice_decomposition(g)?;
    emit(f, &ntd, || {
        let mut s = format!("width {}\nnodes {}\nroot {}\n", ntd.width(), ntd.len(), ntd.root);
        for (i, node) in ntd.nodes.iter().enumerate() {
            let kind = match node.kind {
                NodeKind::Leaf => "leaf".to_string(),
                NodeKind::Introduce(v) => format!("introduce {v}"),
                NodeKind::Forget(v) => format!("forget {v}"),
                NodeKind::Join => "join".to_string(),
            };
            let _ = writeln!(s, "{i}: {kind} bag {} children {}", braces(&node.bag), braces(&*node.children));
        }
        s
    });
    Ok(())
}

#[derive(Serialize)]
struct LpOutput {
    n: usize,
    m: usize,
    #[serde(rename = "L")]
    length: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<Path>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tables: Option<Vec<usize>>,
}

fn lp(f: Format, g: &Graph, want_path: bool, dump_tables: bool) -> Result<(), Failure> {
    if !g.is_connected() {
        return Err(sp_failure(SpError::Disconnected));
    }
    let mut out = LpOutput { n: g.n(), m: g.m(), length: 0, path: None, tables: None };
    if g.n() == 1 {
        out.path = want_path.then(|| Path::single(0));
        out.tables = dump_tables.then(Vec::new);
    } else {
        let ntd = nice_decomposition(g)?;
        let dp = run_forward_dp(&ntd, g).expect("width-2 decomposition of the graph");
        out.length = dp.longest_path_length();
        if want_path {
            out.path = Some(extract_longest_path(&dp, g).expect("connected graph with an edge"));
        }
        out.tables = dump_tables.then(|| dp.table_sizes());
    }
    emit(f, &out, || {
        let mut s = format!("L {}\n", out.length);
        if let Some(p) = &out.path {
            let _ = writeln!(s, "path {}", join(p.vertices()));
        }
        if let Some(t) = &out.tables {
            let max = t.iter().max().copied().unwrap_or(0);
            let total: usize = t.iter().sum();
            let _ = writeln!(s, "tables {} nodes, {total} configurations, largest {max}", t.len());
        }
        s
    });
    Ok(())
}

fn enumerate(opts: &OracleOpts) -> Result<(Graph, LongestPathSet), Failure> {
    let g = read_graph(&opts.input)?;
    let lps = enumerate_longest_paths_with_cap(&g, opts.cap).map_err(oracle_failure)?;
    Ok((g, lps))
}

fn path_lines(lps: &LongestPathSet) -> String {
    lps.paths.iter().map(|p| format!("path {}\n", join(p.vertices()))).collect()
}

fn oracle(f: Format, query: OracleQuery) -> Result<(), Failure> {
    match query {
        OracleQuery::Longest(opts) => {
            let (g, lps) = enumerate(&opts)?;
            let mut out = json!({ "n": g.n(), "m": g.m(), "L": lps.length, "count": lps.len() });
            if opts.dump_paths {
                out["paths"] = json!(lps.paths);
            }
            emit(f, &out, || {
                let mut s = format!("L {}\nlongest paths {}\n", lps.length, lps.len());
                if opts.dump_paths {
                    s += &path_lines(&lps);
                }
                s
            });
        }
        OracleQuery::Gallai(opts) => {
            let (g, lps) = enumerate(&opts)?;
            let common: Vec<usize> = lps.common_vertices().into_iter().collect();
            let mut out = json!({ "n": g.n(), "m": g.m(), "L": lps.length, "count": lps.len(), "gallai": common });
            if opts.dump_paths {
                out["paths"] = json!(lps.paths);
            }
            emit(f, &out, || {
                let mut s = format!("L {}\nlongest paths {}\ngallai {}\n", lps.length, lps.len(), braces(&common));
                if opts.dump_paths {
                    s += &path_lines(&lps);
                }
                s
            });
        }
        OracleQuery::Classify { opts, u, v, w } => {
            let (_, lps) = enumerate(&opts)?;
            let c = classify_longest_paths(&lps, u, v, w).map_err(oracle_failure)?;
            let mut out = json!({ "L": lps.length, "count": lps.len(), "classification": c });
            if opts.dump_paths {
                out["paths"] = json!(lps.paths);
            }
            emit(f, &out, || {
                let rows = [
                    ("uv", &c.uv),
                    ("u_not_v", &c.u_not_v),
                    ("not_u_v", &c.not_u_v),
                    ("not_u_not_v", &c.not_u_not_v),
                    ("uvw", &c.uvw),
                    ("uv_not_w", &c.uv_not_w),
                    ("u_not_v_not_w", &c.u_not_v_not_w),
                    ("v_between", &c.v_between),
                ];
                let mut s = format!("L {}\nlongest paths {}\n", lps.length, lps.len());
                for (name, ids) in rows {
                    let _ = writeln!(s, "{name} {}", braces(ids.iter()));
                }
                if opts.dump_paths {
                    s += &path_lines(&lps);
                }
                s
            });
        }
        OracleQuery::Pairwise(input) => {
            let holds = pairwise_intersection_holds(&read_graph(&input)?).map_err(oracle_failure)?;
            emit(f, &json!({ "pairwise_intersecting": holds }), || format!("pairwise intersecting {holds}\n"));
        }
        OracleQuery::Pwise { input, p } => {
            let holds = p_wise_common_vertex(&read_graph(&input)?, p).map_err(oracle_failure)?;
            emit(f, &json!({ "p": p, "holds": holds }), || format!("every {p} longest paths meet: {holds}\n"));
        }
        OracleQuery::Hamiltonian(input) => {
            let g = read_graph(&input)?;
            let path = hamiltonian_path_exists(&g).map_err(oracle_failure)?;
            let cycle = hamiltonian_cycle_exists(&g).map_err(oracle_failure)?;
            emit(f, &json!({ "path": path, "cycle": cycle }), || {
                format!("hamiltonian path {path}\nhamiltonian cycle {cycle}\n")
            });
        }
        OracleQuery::Treewidth(input) => {
            let tw = exact_treewidth(&read_graph(&input)?).map_err(oracle_failure)?;
            emit(f, &json!({ "treewidth": tw }), || format!("treewidth {tw}\n"));
        }
    }
    Ok(())
}

fn trace_failure(e: TraceError) -> Failure {
    match e {
        TraceError::NotSeriesParallel | TraceError::Disconnected | TraceError::Trivial => {
            Failure::Input(e.to_string())
        }
        TraceError::Oracle(o) => oracle_failure(o),
        _ => Failure::Verification(e.to_string()),
    }
}

fn trace_text(t: &ProofTrace) -> String {
    let mut s = String::new();
    for (i, step) in t.steps.iter().enumerate() {
        let what = match step.kind {
            StepKind::TriangleFound => "triangle_found",
            StepKind::EdgeSelected => "edge_selected",
            StepKind::ComponentIterated => "component_iterated",
            StepKind::VertexFound => "vertex_found",
        };
        let _ = write!(s, "{i}: {what}");
        if let Some(t) = step.triangle {
            let _ = write!(s, " triangle {}", braces(t));
        }
        if let Some((a, b)) = step.edge {
            let _ = write!(s, " edge {a} {b}");
        }
        if let Some(c) = &step.component {
            let _ = write!(s, " component {} of {} {}", braces(&c.vertices), c.anchor.0, c.anchor.1);
        }
        if let Some(v) = step.vertex {
            let _ = write!(s, " vertex {v}");
        }
        s.push('\n');
    }
    let _ = writeln!(s, "final vertex {}", t.final_vertex);
    s
}

fn trace(f: Format, g: &Graph, verify: bool, cap: usize) -> Result<(), Failure> {
    let t = run_trace_with_cap(g, cap).map_err(trace_failure)?;
    emit(f, &t, || trace_text(&t));
    if verify {
        let lps = enumerate_longest_paths_with_cap(g, cap).map_err(oracle_failure)?;
        verify_trace(g, &t, &lps).map_err(|e| Failure::Verification(format!("trace rejected: {e}")))?;
    }
    Ok(())
}

fn gen(f: Format, args: &GenArgs) -> Result<(), Failure> {
    let g = match (&args.name, args.family) {
        (Some(name), _) => {
            let name: NamedGraph = name.parse().map_err(|e| Failure::Usage(format!("{e}")))?;
            named_graph(&name)
        }
        (None, Some(family)) => {
            let n = args.n.ok_or_else(|| Failure::Usage("--family needs --n".into()))?;
            let mut spec = GenSpec::new(family.into(), n, args.seed);
            if let Some(d) = args.density {
                if !(0.0..=1.0).contains(&d) {
                    return Err(Failure::Usage(format!("density {d} is outside [0, 1]")));
                }
                spec = spec.with_density(d);
            }
            generate(&spec).map_err(|e| Failure::Usage(e.to_string()))?
        }
        (None, None) => return Err(Failure::Usage("give --family or --name".into())),
    };
    emit(f, &g, || g.to_edge_list());
    Ok(())
}
