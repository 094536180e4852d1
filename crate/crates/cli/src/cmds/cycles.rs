//! `cycles`: cycle frequency of `G(n, alpha/n)` against the analytic
//! expected-cycle count, plus complex-component frequency against its
//! upper bound.

use anyhow::Result;
use cutstream::dist::{self, CycleDetector};
use cutstream::graph::classify_components;
use cutstream::{rng, MultiGraph};
use rayon::prelude::*;

use crate::common::{build_tag, csv_writer, fmt_f64, ns, CommonArgs};

#[derive(Debug, clap::Args)]
pub struct Args {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Comma-separated alpha grid.
    #[arg(long, default_value = "0.05,0.1,0.2", value_delimiter = ',')]
    pub alphas: Vec<f64>,
}

/// Cells with fewer observed events than this are reported but not held to
/// the flatness corridor.
const MIN_EVENTS: u64 = 20;

pub fn run(args: Args) -> Result<bool> {
    let c = &args.common;
    let n = c.n.unwrap_or(10_000);
    let trials = c.trials.unwrap_or(100_000) as u64;

    let mut writer = csv_writer(&c.out)?;
    writer.write_record([
        "build",
        "seed",
        "alpha",
        "n",
        "trials",
        "cycle_hits",
        "cycle_pr",
        "analytic_expected",
        "pr_over_expected",
        "pr_over_alpha3",
        "complex_hits",
        "complex_pr",
        "complex_bound",
        "binding",
    ])?;

    let mut scaled = Vec::new();
    let mut all_ok = true;
    for (i, &alpha) in args.alphas.iter().enumerate() {
        let (cycle_hits, complex_hits): (u64, u64) = (0..trials)
            .into_par_iter()
            .map_init(
                || (CycleDetector::new(n), Vec::new()),
                |(det, buf), t| {
                    let mut r = rng::trial(c.seed, ns::CYCLES + i as u64, t);
                    dist::sample_gnp_edges_into(n, alpha, &mut r, buf).unwrap();
                    let cycle = det.has_cycle(buf.iter().copied());
                    // Complex components are much rarer than cycles; only
                    // cyclic samples can contain one.
                    let complex = cycle && {
                        let g = MultiGraph::from_edges(n, buf.iter().copied()).unwrap();
                        classify_components(&g).complex > 0
                    };
                    (cycle as u64, complex as u64)
                },
            )
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

        let pr = cycle_hits as f64 / trials as f64;
        let analytic = dist::expected_cycle_count(n, alpha);
        let complex_pr = complex_hits as f64 / trials as f64;
        let complex_bound = alpha * alpha * (n as f64).ln().powi(4) / n as f64;
        let binding = cycle_hits >= MIN_EVENTS;
        if binding {
            scaled.push(pr / alpha.powi(3));
            if (pr / analytic - 1.0).abs() > 0.5 {
                all_ok = false;
            }
        }
        if complex_pr > complex_bound {
            all_ok = false;
        }
        writer.write_record([
            build_tag().to_string(),
            c.seed.to_string(),
            fmt_f64(alpha),
            n.to_string(),
            trials.to_string(),
            cycle_hits.to_string(),
            fmt_f64(pr),
            fmt_f64(analytic),
            fmt_f64(if analytic > 0.0 { pr / analytic } else { 0.0 }),
            fmt_f64(pr / alpha.powi(3)),
            complex_hits.to_string(),
            fmt_f64(complex_pr),
            fmt_f64(complex_bound),
            binding.to_string(),
        ])?;
    }
    if scaled.len() >= 2 {
        let max = scaled.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
        if max / min > 3.0 {
            all_ok = false;
        }
    }
    writer.flush()?;
    Ok(all_ok)
}
