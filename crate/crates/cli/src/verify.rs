//! Batch check of the main theorem and the three Gallai algorithms on a
//! seeded stream of random graphs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use spgallai::corpus::{generate, Family, GenSpec, SplitMix64};
use spgallai::gallai::{gallai_fast, gallai_naive};
use spgallai::oracle::enumerate_longest_paths_with_cap;
use spgallai::prooftrace::run_trace_with_cap;
use spgallai::Graph;

use crate::args::{Format, VerifyArgs};
use crate::output::emit;
use crate::Failure;

#[derive(Serialize)]
struct Row {
    n: usize,
    graphs: usize,
    passed: usize,
}

#[derive(Serialize, Clone)]
struct FailureRecord {
    index: usize,
    n: usize,
    seed: u64,
    reason: String,
}

#[derive(Serialize)]
struct Summary {
    family: String,
    count: usize,
    max_n: usize,
    seed: u64,
    passed: usize,
    failed: usize,
    by_n: Vec<Row>,
    failures: Vec<FailureRecord>,
    dump: Option<String>,
}

/// The graphs are fixed by `seed` alone, whatever the thread count.
fn instances(args: &VerifyArgs) -> Vec<(usize, u64)> {
    let mut rng = SplitMix64::new(args.seed);
    (0..args.count).map(|_| (1 + rng.below(args.max_n), rng.next_u64())).collect()
}

fn check(g: &Graph, cap: usize) -> Result<(), String> {
    let fast = gallai_fast(g).map_err(|e| format!("fast: {e}"))?;
    let naive = gallai_naive(g).map_err(|e| format!("naive: {e}"))?;
    if (naive.length, &naive.gallai) != (fast.length, &fast.gallai) {
        return Err(format!(
            "naive (L {}, {:?}) and fast (L {}, {:?}) disagree",
            naive.length, naive.gallai, fast.length, fast.gallai
        ));
    }
    if g.n() > cap {
        return Ok(());
    }
    let lps = enumerate_longest_paths_with_cap(g, cap).map_err(|e| format!("oracle: {e}"))?;
    let oracle: Vec<usize> = lps.common_vertices().into_iter().collect();
    if oracle.is_empty() {
        return Err("no vertex lies on every longest path".into());
    }
    if lps.length != fast.length {
        return Err(format!("dynamic program gives L {} but the oracle gives {}", fast.length, lps.length));
    }
    if oracle != fast.gallai {
        return Err(format!("oracle Gallai set {oracle:?} differs from {:?}", fast.gallai));
    }
    let trace = run_trace_with_cap(g, cap).map_err(|e| format!("trace: {e}"))?;
    if !oracle.contains(&trace.final_vertex) {
        return Err(format!("trace ends at {} outside the Gallai set", trace.final_vertex));
    }
    Ok(())
}

pub fn run(f: Format, args: &VerifyArgs) -> Result<(), Failure> {
    let family: Family = args.family.into();
    if family == Family::RandomConnected {
        return Err(Failure::Usage("random_connected graphs need not be series-parallel".into()));
    }
    if args.max_n == 0 {
        return Err(Failure::Usage("--max-n must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Usage(format!("cannot start {} threads: {e}", args.jobs.unwrap_or(0))))?;
    let cases = instances(args);
    let outcomes: Vec<Result<(), String>> = pool.install(|| {
        cases
            .par_iter()
            .map(|&(n, seed)| {
                let g = generate(&GenSpec::new(family, n, seed)).map_err(|e| e.to_string())?;
                check(&g, args.cap)
            })
            .collect()
    });

    let mut by_n: BTreeMap<usize, Row> = BTreeMap::new();
    let mut failures = Vec::new();
    for (index, (&(n, seed), outcome)) in cases.iter().zip(&outcomes).enumerate() {
        let row = by_n.entry(n).or_insert(Row { n, graphs: 0, passed: 0 });
        row.graphs += 1;
        match outcome {
            Ok(()) => row.passed += 1,
            Err(reason) => failures.push(FailureRecord { index, n, seed, reason: reason.clone() }),
        }
    }
    let dump = match failures.first() {
        Some(first) => Some(write_reproducer(args, family, first)?),
        None => None,
    };
    let summary = Summary {
        family: family.name().to_string(),
        count: args.count,
        max_n: args.max_n,
        seed: args.seed,
        passed: args.count - failures.len(),
        failed: failures.len(),
        by_n: by_n.into_values().collect(),
        failures,
        dump,
    };
    emit(f, &summary, || text(&summary));
    if summary.failed > 0 {
        return Err(Failure::Verification(format!(
            "{} of {} graphs failed; first reproducer in {}",
            summary.failed,
            summary.count,
            summary.dump.as_deref().unwrap_or("?")
        )));
    }
    Ok(())
}

fn write_reproducer(args: &VerifyArgs, family: Family, first: &FailureRecord) -> Result<String, Failure> {
    let g = generate(&GenSpec::new(family, first.n, first.seed)).ok();
    let mut s = format!(
        "# spgallai gen --family {} --n {} --seed {}\n# {}\n",
        family.name(),
        first.n,
        first.seed,
        first.reason.replace('\n', "\n# ")
    );
    if let Some(g) = g {
        s += &g.to_edge_list();
    }
    std::fs::write(&args.dump, s)
        .map_err(|e| Failure::Verification(format!("cannot write {}: {e}", args.dump.display())))?;
    Ok(args.dump.display().to_string())
}

fn text(s: &Summary) -> String {
    let mut out = format!("{:>4} {:>7} {:>7}\n", "n", "graphs", "passed");
    for row in &s.by_n {
        let _ = writeln!(out, "{:>4} {:>7} {:>7}", row.n, row.graphs, row.passed);
    }
    let _ = writeln!(out, "{} {}: {} passed, {} failed", s.count, s.family, s.passed, s.failed);
    for f in s.failures.iter().take(10) {
        let _ = writeln!(out, "graph {} (n {}, seed {}): {}", f.index, f.n, f.seed, f.reason);
    }
    out
}
