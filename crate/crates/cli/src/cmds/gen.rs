//! `gen`: writes instance edge-lists or stream files, byte-deterministic
//! given the seed.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use cutstream::dist::{self, HardDistParams, StreamOrder};
use cutstream::graph;
use cutstream::{rng, Label};

use crate::common::{ns, CaseFilter, CommonArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Instance,
    Stream,
    /// Hypermatching gadget graph (uses --n and --t).
    Gadget,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    #[command(flatten)]
    pub common: CommonArgs,
    /// What to write: an instance edge-list or an ordered stream.
    #[arg(long, value_enum, default_value_t = Kind::Instance)]
    pub kind: Kind,
    /// Stream ordering (stream kind only).
    #[arg(long, default_value = "canonical")]
    pub ordering: String,
    /// Stream length for i.i.d. orderings (defaults to ell * n).
    #[arg(long)]
    pub length: Option<usize>,
    /// Output file (required; `--out` names the CSV elsewhere, this names
    /// the generated artifact).
    #[arg(long)]
    pub path: PathBuf,
}

pub fn run(args: Args) -> Result<bool> {
    let c = &args.common;
    let n = c.n.unwrap_or(100);
    let alpha = c.alpha.unwrap_or(0.5);
    let eps = c.eps.unwrap_or(0.3);
    let label = match c.case {
        CaseFilter::Yes | CaseFilter::Both => Label::Yes,
        CaseFilter::No => Label::No,
    };
    let file = File::create(&args.path)
        .with_context(|| format!("creating {}", args.path.display()))?;
    let mut out = BufWriter::new(file);

    if args.kind == Kind::Gadget {
        let t = c.t.unwrap_or(2);
        let mut r = rng::substream(c.seed, ns::GEN);
        let inst = dist::sample_bhh(c.n.unwrap_or(24), t, label, &mut r)?;
        let gadget = cutstream::reduce::bhh_build(&inst)?;
        graph::write_edge_list(&gadget.graph, &mut out)?;
        return Ok(true);
    }

    let params = match c.k {
        Some(k) => HardDistParams::with_k(n, alpha, eps, k)?,
        None => HardDistParams::new(n, alpha, eps, c.c_phase.unwrap_or(8.0))?,
    };
    match args.kind {
        Kind::Gadget => unreachable!(),
        Kind::Instance => {
            let mut r = rng::substream(c.seed, ns::GEN);
            let inst = dist::sample_hard(&params, label, &mut r)?;
            graph::write_edge_list(&inst.union, &mut out)?;
        }
        Kind::Stream => {
            let order: StreamOrder = args.ordering.parse()?;
            let stream = match order {
                StreamOrder::Canonical => {
                    let mut r = rng::substream(c.seed, ns::GEN);
                    let inst = dist::sample_hard(&params, label, &mut r)?;
                    dist::canonical_stream(&inst, c.seed)
                }
                StreamOrder::Uniform => {
                    let mut r = rng::substream(c.seed, 0);
                    let inst = dist::sample_hard(&params, label, &mut r)?;
                    dist::uniform_stream(&inst, c.seed)
                }
                StreamOrder::Iid => {
                    let length = args.length.unwrap_or(c.ell.unwrap_or(1) * n);
                    if length == 0 {
                        bail!("i.i.d. streams need a positive --length");
                    }
                    dist::iid_stream(&params, label, length, c.seed)?
                }
            };
            dist::write_stream(&stream, &mut out)?;
        }
    }
    Ok(true)
}
