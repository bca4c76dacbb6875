//! Timing of the naive and fast Gallai algorithms over growing graphs.
//!
//! Each measurement is preceded by one untimed warm-up run and reports the
//! fastest of `reps` timed runs. Stdout carries only the CSV (or JSON);
//! growth ratios go to stderr in text mode.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use spgallai::corpus::{generate, Family, GenSpec};
use spgallai::gallai::{gallai_fast, gallai_naive, GallaiError, GallaiReport};
use spgallai::Graph;

use crate::args::{BenchArgs, Format};
use crate::output::emit;
use crate::Failure;

/// Largest accepted growth of the fast algorithm per tenfold size increase.
pub const FAST_DECADE_LIMIT: f64 = 15.0;

#[derive(Serialize)]
struct Row {
    size: usize,
    millis_naive: Option<f64>,
    millis_fast: f64,
}

#[derive(Serialize)]
struct Ratio {
    from: usize,
    to: usize,
    ratio: f64,
}

#[derive(Serialize)]
struct Report {
    seed: u64,
    rows: Vec<Row>,
    fast_ratios: Vec<Ratio>,
    naive_ratios: Vec<Ratio>,
}

fn best_millis(
    g: &Graph,
    reps: usize,
    budget_secs: f64,
    run: fn(&Graph) -> Result<GallaiReport, GallaiError>,
) -> Result<f64, Failure> {
    let mut best = f64::INFINITY;
    for i in 0..=reps {
        let start = Instant::now();
        run(g).map_err(|e| Failure::Input(e.to_string()))?;
        let secs = start.elapsed().as_secs_f64();
        if secs > budget_secs {
            return Err(Failure::Verification(format!(
                "a run on {} vertices took {secs:.1} s, over the {budget_secs} s budget",
                g.n()
            )));
        }
        if i > 0 {
            best = best.min(secs * 1e3);
        }
    }
    Ok(best)
}

/// Ratios between consecutive sizes that differ by exactly a factor of ten.
fn decade_ratios(rows: &[Row], pick: impl Fn(&Row) -> Option<f64>) -> Vec<Ratio> {
    rows.windows(2)
        .filter(|w| w[1].size == 10 * w[0].size)
        .filter_map(|w| {
            let (a, b) = (pick(&w[0])?, pick(&w[1])?);
            Some(Ratio { from: w[0].size, to: w[1].size, ratio: b / a })
        })
        .collect()
}

pub fn run(f: Format, args: &BenchArgs) -> Result<(), Failure> {
    if args.sizes.is_empty() || args.sizes.windows(2).any(|w| w[0] >= w[1]) || args.sizes[0] == 0 {
        return Err(Failure::Usage("--sizes must be positive and strictly ascending".into()));
    }
    if args.reps == 0 {
        return Err(Failure::Usage("--reps must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Usage(format!("cannot start threads: {e}")))?;
    let graphs: Vec<Graph> = pool.install(|| {
        args.sizes
            .par_iter()
            .map(|&n| generate(&GenSpec::new(Family::SeriesParallel, n, args.seed)).expect("valid spec"))
            .collect()
    });

    let mut rows = Vec::with_capacity(graphs.len());
    for g in &graphs {
        let millis_naive = if g.n() <= args.naive_max {
            Some(best_millis(g, args.reps, args.budget_secs, gallai_naive)?)
        } else {
            None
        };
        let millis_fast = best_millis(g, args.reps, args.budget_secs, gallai_fast)?;
        rows.push(Row { size: g.n(), millis_naive, millis_fast });
    }
    let report = Report {
        seed: args.seed,
        fast_ratios: decade_ratios(&rows, |r| Some(r.millis_fast)),
        naive_ratios: decade_ratios(&rows, |r| r.millis_naive),
        rows,
    };
    emit(f, &report, || csv(&report.rows));
    if f == Format::Text {
        for (label, ratios) in [("fast", &report.fast_ratios), ("naive", &report.naive_ratios)] {
            for r in ratios {
                eprintln!("{label} ratio {} -> {}: {:.1}", r.from, r.to, r.ratio);
            }
        }
    }
    if let Some(r) = report.fast_ratios.iter().find(|r| r.ratio > FAST_DECADE_LIMIT) {
        return Err(Failure::Verification(format!(
            "fast algorithm grew {:.1}x from {} to {} vertices (limit {FAST_DECADE_LIMIT}x)",
            r.ratio, r.from, r.to
        )));
    }
    Ok(())
}

fn csv(rows: &[Row]) -> String {
    let mut s = String::from("size,millis_naive,millis_fast\n");
    for r in rows {
        let naive = r.millis_naive.map(|x| format!("{x:.3}")).unwrap_or_default();
        let _ = writeln!(s, "{},{naive},{:.3}", r.size, r.millis_fast);
    }
    s
}
