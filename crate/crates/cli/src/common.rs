//! Shared flags, CSV plumbing and the build tag every row carries.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use cutstream::Label;

/// Flags shared by the experiment subcommands. Fields a subcommand does not
/// use are ignored by it; unset fields fall back to per-command defaults.
#[derive(Debug, Args, Clone)]
pub struct CommonArgs {
    /// Vertex count.
    #[arg(long)]
    pub n: Option<usize>,
    /// Phase density alpha (edge probability alpha/n).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Gap parameter epsilon.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Hyperedge arity.
    #[arg(long)]
    pub t: Option<usize>,
    /// Samples multiplier for i.i.d. streams.
    #[arg(long)]
    pub ell: Option<usize>,
    /// Override the phase count (c-phase is back-derived).
    #[arg(long)]
    pub k: Option<usize>,
    /// Phase-count constant C.
    #[arg(long = "c-phase")]
    pub c_phase: Option<f64>,
    /// Trial count.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Master seed; all randomness derives from it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Restrict to one case or run both.
    #[arg(long, value_enum, default_value_t = CaseFilter::Both)]
    pub case: CaseFilter,
    /// CSV output path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseFilter {
    Yes,
    No,
    Both,
}

impl CaseFilter {
    pub fn labels(self) -> Vec<Label> {
        match self {
            CaseFilter::Yes => vec![Label::Yes],
            CaseFilter::No => vec![Label::No],
            CaseFilter::Both => vec![Label::Yes, Label::No],
        }
    }
}

/// Substream namespace bases, one block per subcommand so no two commands
/// ever share a generator stream for the same master seed.
pub mod ns {
    pub const GEN: u64 = 0x01;
    pub const GAP: u64 = 0x10;
    pub const CYCLES: u64 = 0x20;
    pub const ORDERING_HIST: u64 = 0x30;
    pub const ORDERING_COLLISION: u64 = 0x38;
    pub const FOURIER: u64 = 0x40;
    pub const ADV_CURVE: u64 = 0x50;
    pub const ADV_PLANTED: u64 = 0x58;
    pub const ADV_TABLES: u64 = 0x60;
    pub const ADV_PROTOCOL: u64 = 0x68;
    pub const ADV_THRESHOLD: u64 = 0x6F;
    pub const BHH: u64 = 0x70;
    pub const IID_DUP: u64 = 0x80;
    pub const IID_PQ: u64 = 0x88;
    pub const IID_LENGTH: u64 = 0x89;
    pub const RUN: u64 = 0x90;
}

/// Build identifier echoed in every CSV row; overridable at compile time.
pub fn build_tag() -> &'static str {
    option_env!("CUTSTREAM_BUILD_TAG").unwrap_or(concat!("cutstream-", env!("CARGO_PKG_VERSION")))
}

pub fn csv_writer(out: &Option<PathBuf>) -> Result<csv::Writer<Box<dyn Write>>> {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        ),
        None => Box::new(io::stdout()),
    };
    Ok(csv::WriterBuilder::new().from_writer(sink))
}

/// Formats floats compactly but deterministically.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.10}")
}
