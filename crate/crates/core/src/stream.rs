//! Bounded-space single-pass algorithms with honest state accounting.
//!
//! A [`StreamAlgorithm`] folds `process` over the edge stream; the runner
//! measures the serialized state size after every step and flags budget
//! overruns without stopping the run. Coin tosses come from the explicit
//! generator and are not counted as state.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{max_cut_exact, BitVector, MultiGraph};
use crate::{Edge, Error, Label, Result};

/// Exact and empirical state tables become infeasible past this many states.
pub const MAX_AUTOMATON_STATES: usize = 1 << 12;

/// Largest reservoir whose sample graph (at most `2s` distinct vertices)
/// still fits the exact max-cut search.
pub const MAX_RESERVOIR_EDGES: usize = crate::graph::MAX_EXACT_VERTICES / 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StreamOutput {
    Estimate(f64),
    Decision(Label),
}

impl StreamOutput {
    pub fn estimate(&self) -> Option<f64> {
        match self {
            StreamOutput::Estimate(v) => Some(*v),
            _ => None,
        }
    }

    pub fn decision(&self) -> Option<Label> {
        match self {
            StreamOutput::Decision(l) => Some(*l),
            _ => None,
        }
    }
}

/// Single-pass streaming algorithm contract.
pub trait StreamAlgorithm {
    type State;

    fn name(&self) -> &'static str;

    /// Fresh state for an `n`-vertex stream. `budget_bits` is the declared
    /// space budget; algorithms may size internal truncation from it.
    fn init(&self, n: usize, budget_bits: u64, rng: &mut ChaCha8Rng) -> Self::State;

    fn process(&self, state: &mut Self::State, edge: Edge, rng: &mut ChaCha8Rng) -> Result<()>;

    fn finish(&self, state: &Self::State) -> StreamOutput;

    /// Serialized size of the state in bits (counts content, not allocator
    /// bookkeeping).
    fn state_bits(&self, state: &Self::State) -> u64;
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub output: StreamOutput,
    pub peak_state_bits: u64,
    pub budget_bits: u64,
    /// Budget overrun is measured, not enforced: the run continues.
    pub budget_exceeded: bool,
}

/// Folds the algorithm over the stream and reports the output together with
/// the peak serialized state size.
pub fn run<A: StreamAlgorithm>(
    alg: &A,
    n: usize,
    budget_bits: u64,
    edges: &[Edge],
    rng: &mut ChaCha8Rng,
) -> Result<RunReport> {
    let mut state = alg.init(n, budget_bits, rng);
    let mut peak = alg.state_bits(&state);
    for &e in edges {
        alg.process(&mut state, e, rng)?;
        peak = peak.max(alg.state_bits(&state));
    }
    Ok(RunReport {
        output: alg.finish(&state),
        peak_state_bits: peak,
        budget_bits,
        budget_exceeded: peak > budget_bits,
    })
}

fn bit_length(x: u64) -> u64 {
    64 - x.leading_zeros() as u64
}

fn ceil_log2(x: usize) -> u64 {
    (usize::BITS - x.saturating_sub(1).leading_zeros()) as u64
}

// ---------------------------------------------------------------------------
// Edge counter
// ---------------------------------------------------------------------------

/// Counts edges and outputs `m/2`, a 2-approximation of the max cut since
/// the optimum always lies in `[m/2, m]`.
#[derive(Debug, Clone, Copy, Default)]
pub struct EdgeCount;

impl StreamAlgorithm for EdgeCount {
    type State = u64;

    fn name(&self) -> &'static str {
        "edge-count"
    }

    fn init(&self, _n: usize, _budget_bits: u64, _rng: &mut ChaCha8Rng) -> u64 {
        0
    }

    fn process(&self, state: &mut u64, _edge: Edge, _rng: &mut ChaCha8Rng) -> Result<()> {
        *state += 1;
        Ok(())
    }

    fn finish(&self, state: &u64) -> StreamOutput {
        StreamOutput::Estimate(*state as f64 / 2.0)
    }

    fn state_bits(&self, state: &u64) -> u64 {
        bit_length(*state)
    }
}

// ---------------------------------------------------------------------------
// Random-walk bipartiteness tester
// ---------------------------------------------------------------------------

/// Bipartiteness tester for i.i.d. edge streams: walkers start at uniform
/// vertices and advance whenever a stream edge incident on their current
/// vertex arrives; a vertex reached at both an even and an odd number of
/// steps is odd-cycle evidence.
///
/// One-sided by construction: on a bipartite input the two parity sets of a
/// walker live on opposite sides and can never intersect, under any stream.
/// Meaningful detection wants streams of at least order `L log n * n`
/// samples.
#[derive(Debug, Clone)]
pub struct RandomWalkTester {
    pub walkers: usize,
    pub walk_len: usize,
    /// Entries kept per parity set; `None` stores them exactly. Truncation
    /// only suppresses detections, never creates false rejections.
    pub parity_cap: Option<usize>,
}

impl RandomWalkTester {
    pub fn new(walkers: usize, walk_len: usize) -> Self {
        RandomWalkTester {
            walkers,
            walk_len,
            parity_cap: None,
        }
    }

    /// `sqrt(n)` walkers of length `ln^2 n`, parity sets truncated to the
    /// walk length.
    pub fn with_defaults(n: usize) -> Self {
        let walkers = (n as f64).sqrt().ceil() as usize;
        let walk_len = ((n.max(2) as f64).ln().powi(2)).ceil() as usize;
        RandomWalkTester {
            walkers: walkers.max(1),
            walk_len: walk_len.max(1),
            parity_cap: Some(walk_len.max(1)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Walker {
    pub position: u32,
    pub steps: u32,
    pub even: BTreeSet<u32>,
    pub odd: BTreeSet<u32>,
    pub overflow: bool,
}

#[derive(Debug, Clone)]
pub struct WalkState {
    pub walkers: Vec<Walker>,
    pub odd_evidence: bool,
    n: usize,
}

impl StreamAlgorithm for RandomWalkTester {
    type State = WalkState;

    fn name(&self) -> &'static str {
        "random-walk-tester"
    }

    fn init(&self, n: usize, _budget_bits: u64, rng: &mut ChaCha8Rng) -> WalkState {
        let walkers = (0..self.walkers)
            .map(|_| {
                let position = if n == 0 { 0 } else { rng.random_range(0..n as u32) };
                let mut even = BTreeSet::new();
                even.insert(position);
                Walker {
                    position,
                    steps: 0,
                    even,
                    odd: BTreeSet::new(),
                    overflow: false,
                }
            })
            .collect();
        WalkState {
            walkers,
            odd_evidence: false,
            n,
        }
    }

    fn process(&self, state: &mut WalkState, (u, v): Edge, _rng: &mut ChaCha8Rng) -> Result<()> {
        for walker in &mut state.walkers {
            if walker.steps as usize >= self.walk_len {
                continue;
            }
            let next = if walker.position == u {
                v
            } else if walker.position == v {
                u
            } else {
                continue;
            };
            walker.position = next;
            walker.steps += 1;
            let (own, other) = if walker.steps % 2 == 0 {
                (&mut walker.even, &walker.odd)
            } else {
                (&mut walker.odd, &walker.even)
            };
            if other.contains(&next) {
                state.odd_evidence = true;
            }
            match self.parity_cap {
                Some(cap) if own.len() >= cap && !own.contains(&next) => walker.overflow = true,
                _ => {
                    own.insert(next);
                }
            }
        }
        Ok(())
    }

    fn finish(&self, state: &WalkState) -> StreamOutput {
        StreamOutput::Decision(if state.odd_evidence {
            Label::No
        } else {
            Label::Yes
        })
    }

    fn state_bits(&self, state: &WalkState) -> u64 {
        let vertex_bits = ceil_log2(state.n.max(2));
        let step_bits = ceil_log2(self.walk_len + 1);
        state
            .walkers
            .iter()
            .map(|w| {
                vertex_bits
                    + step_bits
                    + (w.even.len() + w.odd.len()) as u64 * vertex_bits
                    + 1
            })
            .sum()
    }
}

// ---------------------------------------------------------------------------
// Reservoir max-cut estimator
// ---------------------------------------------------------------------------

/// Uniform reservoir of `s` edges; the estimate is the exact max cut of the
/// sample scaled by `m/s`. A simplified stand-in for a cut-preserving
/// summary, sized so the exact search stays feasible.
#[derive(Debug, Clone, Copy)]
pub struct ReservoirMaxCut {
    sample_size: usize,
}

impl ReservoirMaxCut {
    pub fn new(sample_size: usize) -> Result<Self> {
        if sample_size == 0 || sample_size > MAX_RESERVOIR_EDGES {
            return Err(Error::SizeLimit {
                what: "reservoir sample size",
                value: sample_size,
                limit: MAX_RESERVOIR_EDGES,
            });
        }
        Ok(ReservoirMaxCut { sample_size })
    }

    pub fn sample_size(&self) -> usize {
        self.sample_size
    }
}

#[derive(Debug, Clone)]
pub struct ReservoirState {
    pub reservoir: Vec<Edge>,
    pub seen: u64,
    n: usize,
}

impl StreamAlgorithm for ReservoirMaxCut {
    type State = ReservoirState;

    fn name(&self) -> &'static str {
        "reservoir-maxcut"
    }

    fn init(&self, n: usize, _budget_bits: u64, _rng: &mut ChaCha8Rng) -> ReservoirState {
        ReservoirState {
            reservoir: Vec::with_capacity(self.sample_size),
            seen: 0,
            n,
        }
    }

    fn process(&self, state: &mut ReservoirState, edge: Edge, rng: &mut ChaCha8Rng) -> Result<()> {
        state.seen += 1;
        if state.reservoir.len() < self.sample_size {
            state.reservoir.push(edge);
        } else {
            let j = rng.random_range(0..state.seen);
            if (j as usize) < self.sample_size {
                state.reservoir[j as usize] = edge;
            }
        }
        Ok(())
    }

    fn finish(&self, state: &ReservoirState) -> StreamOutput {
        if state.reservoir.is_empty() {
            return StreamOutput::Estimate(0.0);
        }
        // Relabel sample endpoints compactly; at most 2s <= 24 of them.
        let mut vertices: Vec<u32> = state
            .reservoir
            .iter()
            .flat_map(|&(u, v)| [u, v])
            .collect();
        vertices.sort_unstable();
        vertices.dedup();
        let index = |x: u32| vertices.binary_search(&x).unwrap() as u32;
        let mut g = MultiGraph::new(vertices.len());
        for &(u, v) in &state.reservoir {
            g.add_edge(index(u), index(v)).expect("relabeled edge is valid");
        }
        let (opt, _) = max_cut_exact(&g).expect("sample fits the exact-search limit");
        let scale = state.seen as f64 / state.reservoir.len() as f64;
        StreamOutput::Estimate(opt as f64 * scale)
    }

    fn state_bits(&self, state: &ReservoirState) -> u64 {
        bit_length(state.seen) + state.reservoir.len() as u64 * 2 * ceil_log2(state.n.max(2))
    }
}

// ---------------------------------------------------------------------------
// Finite-state automaton
// ---------------------------------------------------------------------------

type StepFn = Arc<dyn Fn(usize, Edge) -> Option<usize> + Send + Sync>;
type OutputFn = Arc<dyn Fn(usize) -> StreamOutput + Send + Sync>;

/// Explicit automaton over at most [`MAX_AUTOMATON_STATES`] states; the
/// object whose per-phase state distributions the reduction machinery
/// estimates. State 0 is the initial state.
#[derive(Clone)]
pub struct FiniteStateAutomaton {
    name: &'static str,
    num_states: usize,
    step_fn: StepFn,
    output_fn: OutputFn,
}

impl std::fmt::Debug for FiniteStateAutomaton {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteStateAutomaton")
            .field("name", &self.name)
            .field("num_states", &self.num_states)
            .finish()
    }
}

impl FiniteStateAutomaton {
    pub fn from_fn(
        name: &'static str,
        num_states: usize,
        step: impl Fn(usize, Edge) -> Option<usize> + Send + Sync + 'static,
        output: impl Fn(usize) -> StreamOutput + Send + Sync + 'static,
    ) -> Result<Self> {
        if num_states == 0 || num_states > MAX_AUTOMATON_STATES {
            return Err(Error::SizeLimit {
                what: "automaton state count",
                value: num_states,
                limit: MAX_AUTOMATON_STATES,
            });
        }
        Ok(FiniteStateAutomaton {
            name,
            num_states,
            step_fn: Arc::new(step),
            output_fn: Arc::new(output),
        })
    }

    /// Automaton from an explicit transition table; transitions absent from
    /// the table are undefined and surface as errors when hit.
    pub fn from_table(
        name: &'static str,
        num_states: usize,
        table: HashMap<(usize, Edge), usize>,
        output: impl Fn(usize) -> StreamOutput + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::from_fn(
            name,
            num_states,
            move |state, edge| table.get(&(state, edge)).copied(),
            output,
        )
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn step(&self, state: usize, edge: Edge) -> Result<usize> {
        match (self.step_fn)(state, edge) {
            Some(next) if next < self.num_states => Ok(next),
            Some(next) => Err(Error::InvalidParameter(format!(
                "automaton `{}` stepped to state {next} outside 0..{}",
                self.name, self.num_states
            ))),
            None => Err(Error::UndefinedTransition {
                state,
                u: edge.0,
                v: edge.1,
            }),
        }
    }

    /// One state, never moves.
    pub fn constant() -> Self {
        Self::from_fn("constant", 1, |_, _| Some(0), |_| StreamOutput::Estimate(0.0))
            .expect("1 state is within the cap")
    }

    /// Edge counter modulo `modulus`.
    pub fn edge_count_mod(modulus: usize) -> Result<Self> {
        Self::from_fn(
            "edge-count-mod",
            modulus,
            move |s, _| Some((s + 1) % modulus),
            |s| StreamOutput::Estimate(s as f64),
        )
    }

    /// Tracks the parity of edges crossing a fixed candidate bipartition,
    /// i.e. the cut value modulo 2.
    pub fn cut_parity(candidate: BitVector) -> Self {
        Self::from_fn(
            "cut-parity",
            2,
            move |s, (u, v)| {
                let crosses = candidate.get(u as usize) != candidate.get(v as usize);
                Some(s ^ crosses as usize)
            },
            |s| StreamOutput::Estimate(s as f64),
        )
        .expect("2 states is within the cap")
    }

    /// Saturating counter of edges that do not cross a fixed bipartition.
    pub fn noncrossing_counter(candidate: BitVector, cap: usize) -> Result<Self> {
        Self::from_fn(
            "noncrossing-counter",
            cap + 1,
            move |s, (u, v)| {
                let crosses = candidate.get(u as usize) != candidate.get(v as usize);
                Some(if crosses { s } else { (s + 1).min(cap) })
            },
            |s| StreamOutput::Estimate(s as f64),
        )
    }

    /// Presence bitmask of up to 12 fixed vertex pairs.
    pub fn edge_probe(pairs: Vec<Edge>) -> Result<Self> {
        if pairs.len() > 12 {
            return Err(Error::SizeLimit {
                what: "probe pair count",
                value: pairs.len(),
                limit: 12,
            });
        }
        let states = 1usize << pairs.len();
        let normalized: Vec<Edge> = pairs
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        Self::from_fn(
            "edge-probe",
            states,
            move |s, (u, v)| {
                let key = (u.min(v), u.max(v));
                let mut next = s;
                for (i, &p) in normalized.iter().enumerate() {
                    if p == key {
                        next |= 1 << i;
                    }
                }
                Some(next)
            },
            |s| StreamOutput::Estimate(s as f64),
        )
    }
}

impl StreamAlgorithm for FiniteStateAutomaton {
    type State = usize;

    fn name(&self) -> &'static str {
        self.name
    }

    fn init(&self, _n: usize, _budget_bits: u64, _rng: &mut ChaCha8Rng) -> usize {
        0
    }

    fn process(&self, state: &mut usize, edge: Edge, _rng: &mut ChaCha8Rng) -> Result<()> {
        *state = self.step(*state, edge)?;
        Ok(())
    }

    fn finish(&self, state: &usize) -> StreamOutput {
        (self.output_fn)(*state)
    }

    fn state_bits(&self, _state: &usize) -> u64 {
        ceil_log2(self.num_states)
    }
}
