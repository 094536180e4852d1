//! `run`: drives a named streaming algorithm over generated streams and
//! reports its output and peak serialized state size per trial.

use anyhow::{bail, Result};
use clap::ValueEnum;
use cutstream::dist::{self, HardDistParams, StreamOrder};
use cutstream::stream::{
    run as run_stream, EdgeCount, FiniteStateAutomaton, RandomWalkTester, ReservoirMaxCut,
    RunReport, StreamAlgorithm, StreamOutput,
};
use cutstream::{rng, Edge};

use crate::common::{build_tag, csv_writer, fmt_f64, ns, CommonArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgName {
    EdgeCount,
    WalkTester,
    Reservoir,
    EdgeParity,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Which algorithm to run.
    #[arg(long, value_enum)]
    pub alg: AlgName,
    /// Stream ordering fed to the algorithm.
    #[arg(long, default_value = "canonical")]
    pub ordering: String,
    /// Declared space budget in bits (overruns are flagged, not fatal).
    #[arg(long, default_value_t = 1 << 20)]
    pub budget_bits: u64,
    /// Walker count (walk-tester only; defaults to ceil(sqrt n)).
    #[arg(long)]
    pub walkers: Option<usize>,
    /// Walk length (walk-tester only; defaults to ceil(ln^2 n)).
    #[arg(long)]
    pub walk_len: Option<usize>,
    /// Reservoir size (reservoir only).
    #[arg(long, default_value_t = 12)]
    pub sample_size: usize,
    /// Stream length for i.i.d. orderings (defaults to ell * n).
    #[arg(long)]
    pub length: Option<usize>,
}

pub fn run(args: Args) -> Result<bool> {
    let c = &args.common;
    let n = c.n.unwrap_or(100);
    let alpha = c.alpha.unwrap_or(0.5);
    let eps = c.eps.unwrap_or(0.3);
    let trials = c.trials.unwrap_or(20) as u64;
    let order: StreamOrder = args.ordering.parse()?;
    let params = match c.k {
        Some(k) => HardDistParams::with_k(n, alpha, eps, k)?,
        None => HardDistParams::new(n, alpha, eps, c.c_phase.unwrap_or(8.0))?,
    };
    let labels = c.case.labels();

    let mut writer = csv_writer(&c.out)?;
    writer.write_record([
        "build",
        "seed",
        "algorithm",
        "trial",
        "case",
        "ordering",
        "n",
        "alpha",
        "eps",
        "k",
        "stream_len",
        "output_kind",
        "output",
        "peak_bits",
        "budget_bits",
        "budget_exceeded",
    ])?;

    for (slot, &label) in labels.iter().enumerate() {
        for trial in 0..trials {
            let mut r = rng::trial(c.seed, ns::RUN + slot as u64, trial);
            let edges: Vec<Edge> = match order {
                StreamOrder::Canonical | StreamOrder::Uniform => {
                    let inst = dist::sample_hard(&params, label, &mut r)?;
                    match order {
                        StreamOrder::Canonical => dist::canonical_stream(&inst, trial).edges,
                        _ => dist::uniform_stream(&inst, trial).edges,
                    }
                }
                StreamOrder::Iid => {
                    let length = args.length.unwrap_or(c.ell.unwrap_or(1) * n);
                    if length == 0 {
                        bail!("i.i.d. streams need a positive --length");
                    }
                    dist::iid_stream(&params, label, length, trial)?.edges
                }
            };
            let report: RunReport = match args.alg {
                AlgName::EdgeCount => {
                    run_stream(&EdgeCount, n, args.budget_bits, &edges, &mut r)?
                }
                AlgName::WalkTester => {
                    let defaults = RandomWalkTester::with_defaults(n);
                    let tester = RandomWalkTester {
                        walkers: args.walkers.unwrap_or(defaults.walkers),
                        walk_len: args.walk_len.unwrap_or(defaults.walk_len),
                        parity_cap: defaults.parity_cap,
                    };
                    run_stream(&tester, n, args.budget_bits, &edges, &mut r)?
                }
                AlgName::Reservoir => {
                    let alg = ReservoirMaxCut::new(args.sample_size)?;
                    run_stream(&alg, n, args.budget_bits, &edges, &mut r)?
                }
                AlgName::EdgeParity => {
                    let alg = FiniteStateAutomaton::edge_count_mod(2)?;
                    run_stream(&alg, n, args.budget_bits, &edges, &mut r)?
                }
            };
            let (kind, value) = match report.output {
                StreamOutput::Estimate(v) => ("estimate", fmt_f64(v)),
                StreamOutput::Decision(l) => ("decision", l.to_string()),
            };
            let name = match args.alg {
                AlgName::EdgeCount => EdgeCount.name(),
                AlgName::WalkTester => "random-walk-tester",
                AlgName::Reservoir => "reservoir-maxcut",
                AlgName::EdgeParity => "edge-count-mod",
            };
            writer.write_record([
                build_tag().to_string(),
                c.seed.to_string(),
                name.to_string(),
                trial.to_string(),
                label.to_string(),
                order.to_string(),
                n.to_string(),
                fmt_f64(params.alpha),
                fmt_f64(params.epsilon),
                params.k.to_string(),
                edges.len().to_string(),
                kind.to_string(),
                value,
                report.peak_state_bits.to_string(),
                report.budget_bits.to_string(),
                report.budget_exceeded.to_string(),
            ])?;
        }
    }
    writer.flush()?;
    Ok(true)
}
