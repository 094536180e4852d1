//! Generators, oracles and streaming algorithms for max-cut hardness experiments.
//!
//! The crate is organised around five subsystems:
//!
//! * [`graph`]: multigraphs, bipartitions, GF(2) incidence algebra and exact
//!   small-instance oracles (max-cut by exhaustive search, bipartiteness,
//!   component classification).
//! * [`dist`]: the random objects, namely `G(n, alpha/n)` graphs, the phased
//!   YES/NO hard distribution, stream orderings, and boolean
//!   hidden-hypermatching and hidden-partition instances.
//! * [`stream`]: bounded-space single-pass algorithms with honest state-size
//!   accounting, plus a generic finite-state automaton runner.
//! * [`reduce`]: the hypermatching-to-max-cut gadget and the two-party
//!   protocol built from algorithm-state distributions.
//! * [`fourier`]: exact boolean Fourier analysis on indicator sets, the
//!   `p_M` distribution and its transform identity, total-variation bounds
//!   and the supporting distribution identities.
//!
//! All sampling is driven by explicitly seeded ChaCha streams (see [`rng`]),
//! so every experiment is reproducible from `(seed, stream)` pairs.

pub mod dist;
pub mod fourier;
pub mod graph;
pub mod reduce;
pub mod rng;
pub mod stream;

use std::fmt;
use std::str::FromStr;

/// An undirected edge as a pair of 0-based vertex ids.
///
/// Pairs are normalised to `u < v` by every constructor in the crate; raw
/// tuples produced by generators follow the same convention.
pub type Edge = (u32, u32);

/// YES/NO case label, shared by instance distributions and deciders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Yes,
    No,
}

impl Label {
    pub fn flip(self) -> Self {
        match self {
            Label::Yes => Label::No,
            Label::No => Label::Yes,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Yes => write!(f, "yes"),
            Label::No => write!(f, "no"),
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "yes" | "y" => Ok(Label::Yes),
            "no" | "n" => Ok(Label::No),
            other => Err(Error::InvalidParameter(format!(
                "unknown case label `{other}` (expected yes|no)"
            ))),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{what} = {value} exceeds the exact-computation limit {limit}")]
    SizeLimit {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("undefined transition from state {state} on edge ({u}, {v})")]
    UndefinedTransition { state: usize, u: u32, v: u32 },
    #[error("malformed {what}: {detail}")]
    Format { what: &'static str, detail: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use graph::{BitVector, Bipartition, IncidenceMatrix, MultiGraph};
