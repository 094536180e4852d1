//! Constructive reductions: the hidden-hypermatching gadget that turns
//! parity promises into max-cut gaps, and the two-party protocol that
//! extracts a distinguishing phase from any finite-state stream algorithm.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::dist::{sample_gnp_edges_into, sample_phases, BhhInstance, BhpInstance, HardDistParams};
use crate::fourier::{tvd, DiscreteDistribution};
use crate::graph::{
    classify_components, non_bipartite_component_count, BitVector, Bipartition, IncidenceMatrix,
    MultiGraph,
};
use crate::stream::{FiniteStateAutomaton, MAX_AUTOMATON_STATES};
use crate::{Edge, Error, Label, Result};

// ---------------------------------------------------------------------------
// Hypermatching gadget
// ---------------------------------------------------------------------------

/// Gadget vertices for index `i`: a block of four.
#[inline]
fn va(i: u32) -> u32 {
    4 * i
}
#[inline]
fn vb(i: u32) -> u32 {
    4 * i + 1
}
#[inline]
fn vc(i: u32) -> u32 {
    4 * i + 2
}
#[inline]
fn vd(i: u32) -> u32 {
    4 * i + 3
}

fn norm(u: u32, v: u32) -> Edge {
    (u.min(v), u.max(v))
}

/// Alice's edges: per index `i`, `(a_i, b_i)`, `(c_i, d_i)` and the parity
/// edge `(a_i, d_i)` for `x_i = 0` or `(a_i, c_i)` for `x_i = 1`, giving an
/// internal `a_i .. d_i` path of length `1 + x_i`.
pub fn bhh_alice_edges(x: &BitVector) -> Vec<Edge> {
    let mut edges = Vec::with_capacity(3 * x.dimension());
    for i in 0..x.dimension() as u32 {
        edges.push(norm(va(i), vb(i)));
        edges.push(norm(vc(i), vd(i)));
        if x.get(i as usize) {
            edges.push(norm(va(i), vc(i)));
        } else {
            edges.push(norm(va(i), vd(i)));
        }
    }
    edges
}

/// Bob's edges: per hyperedge `{j_1 < .. < j_t}`, chain edges
/// `(d_(j_(s-1)), a_(j_s))` and a closing edge back into the first block,
/// `(d_(j_t), a_(j_1))` for `w_i = 0` or `(d_(j_t), b_(j_1))` for
/// `w_i = 1`. Closing through `b` lengthens the hyperedge cycle by one, so
/// its total length is `2t + w_i + sum_s x_(j_s)`.
pub fn bhh_bob_edges(blocks: &[Vec<u32>], w: &BitVector) -> Vec<Edge> {
    assert_eq!(blocks.len(), w.dimension(), "one parity bit per hyperedge");
    let mut edges = Vec::new();
    for (i, block) in blocks.iter().enumerate() {
        debug_assert!(block.windows(2).all(|b| b[0] < b[1]), "blocks sorted");
        for s in 1..block.len() {
            edges.push(norm(vd(block[s - 1]), va(block[s])));
        }
        let first = block[0];
        let last = *block.last().expect("blocks are nonempty");
        if w.get(i) {
            edges.push(norm(vd(last), vb(first)));
        } else {
            edges.push(norm(vd(last), va(first)));
        }
    }
    edges
}

/// The max-cut instance built from a hypermatching instance: `4n` vertices,
/// `4n` edges, one unicyclic component per hyperedge.
#[derive(Debug, Clone)]
pub struct GadgetGraph {
    pub base_n: usize,
    pub t: usize,
    pub alice_edges: Vec<Edge>,
    pub bob_edges: Vec<Edge>,
    pub graph: MultiGraph,
}

impl GadgetGraph {
    pub fn m(&self) -> u64 {
        self.graph.m()
    }

    /// The fixed adversarial stream order: Alice's edges then Bob's, each
    /// segment in construction order.
    pub fn adversarial_stream(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.alice_edges.len() + self.bob_edges.len());
        out.extend_from_slice(&self.alice_edges);
        out.extend_from_slice(&self.bob_edges);
        out
    }

    /// Exact max cut in closed form: every component is unicyclic, and a
    /// component loses exactly one edge iff its cycle is odd. No exhaustive
    /// search at any size.
    pub fn max_cut(&self) -> u64 {
        let counts = classify_components(&self.graph);
        assert_eq!(
            counts.complex, 0,
            "gadget components are cycles with pendant trees"
        );
        self.graph.m() - non_bipartite_component_count(&self.graph) as u64
    }
}

pub fn bhh_build(inst: &BhhInstance) -> Result<GadgetGraph> {
    let alice_edges = bhh_alice_edges(&inst.x);
    let bob_edges = bhh_bob_edges(&inst.blocks, &inst.w);
    let mut graph = MultiGraph::new(4 * inst.n);
    for &(u, v) in alice_edges.iter().chain(&bob_edges) {
        graph.add_edge(u, v)?;
    }
    Ok(GadgetGraph {
        base_n: inst.n,
        t: inst.t,
        alice_edges,
        bob_edges,
        graph,
    })
}

/// YES iff the estimate is strictly larger than `(1 - 1/(4t)) * 4n`.
pub fn bhh_decide(estimate: f64, n: usize, t: usize) -> Label {
    let threshold = 4.0 * n as f64 - n as f64 / t as f64;
    if estimate > threshold {
        Label::Yes
    } else {
        Label::No
    }
}

// ---------------------------------------------------------------------------
// Algorithm-state distributions
// ---------------------------------------------------------------------------

/// Empirical distribution of an automaton's state after a number of phases.
#[derive(Debug, Clone)]
pub struct StateDistribution {
    pub phase: usize,
    pub label: Label,
    pub dist: DiscreteDistribution,
}

/// Empirical state distribution after phases `1..=phase` over fresh instance
/// draws presented in canonical order (each phase uniformly shuffled).
pub fn estimate_state_distribution(
    aut: &FiniteStateAutomaton,
    params: &HardDistParams,
    label: Label,
    phase: usize,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<StateDistribution> {
    if phase > params.k {
        return Err(Error::InvalidParameter(format!(
            "phase {phase} beyond k = {}",
            params.k
        )));
    }
    let mut counts = vec![0u64; aut.num_states()];
    let mut scratch = Vec::new();
    for _ in 0..trials {
        let (_, phases) = sample_phases(params, label, phase, None, rng)?;
        let mut state = 0usize;
        for edges in phases {
            scratch.clear();
            scratch.extend(edges);
            scratch.shuffle(rng);
            for &e in &scratch {
                state = aut.step(state, e)?;
            }
        }
        counts[state] += 1;
    }
    Ok(StateDistribution {
        phase,
        label,
        dist: DiscreteDistribution::from_counts(&counts)?,
    })
}

/// State distributions after every phase `0..=k` for both cases, plus the
/// per-phase total variation distances between them.
#[derive(Debug, Clone)]
pub struct StateCurves {
    pub yes: Vec<DiscreteDistribution>,
    pub no: Vec<DiscreteDistribution>,
    pub tvds: Vec<f64>,
}

pub fn state_distribution_curves(
    aut: &FiniteStateAutomaton,
    params: &HardDistParams,
    trials: usize,
    planted: Option<&Bipartition>,
    rng: &mut ChaCha8Rng,
) -> Result<StateCurves> {
    if aut.num_states() > MAX_AUTOMATON_STATES {
        return Err(Error::SizeLimit {
            what: "automaton state count",
            value: aut.num_states(),
            limit: MAX_AUTOMATON_STATES,
        });
    }
    let k = params.k;
    let states = aut.num_states();
    let mut counts = [
        vec![vec![0u64; states]; k + 1],
        vec![vec![0u64; states]; k + 1],
    ];
    let mut scratch = Vec::new();
    for (slot, label) in [(0, Label::Yes), (1, Label::No)] {
        for _ in 0..trials {
            let (_, phases) = sample_phases(params, label, k, planted, rng)?;
            let mut state = 0usize;
            counts[slot][0][state] += 1;
            for (j, edges) in phases.into_iter().enumerate() {
                scratch.clear();
                scratch.extend(edges);
                scratch.shuffle(rng);
                for &e in &scratch {
                    state = aut.step(state, e)?;
                }
                counts[slot][j + 1][state] += 1;
            }
        }
    }
    let yes: Vec<DiscreteDistribution> = counts[0]
        .iter()
        .map(|c| DiscreteDistribution::from_counts(c))
        .collect::<Result<_>>()?;
    let no: Vec<DiscreteDistribution> = counts[1]
        .iter()
        .map(|c| DiscreteDistribution::from_counts(c))
        .collect::<Result<_>>()?;
    let tvds = yes
        .iter()
        .zip(&no)
        .map(|(a, b)| tvd(a, b))
        .collect::<Result<_>>()?;
    Ok(StateCurves { yes, no, tvds })
}

// ---------------------------------------------------------------------------
// Informative index
// ---------------------------------------------------------------------------

/// Outcome of the informative-index search over a TVD curve.
#[derive(Debug, Clone)]
pub struct InformativeIndexReport {
    /// `tvds[j]` estimates the case separation after phase `j`.
    pub tvds: Vec<f64>,
    pub j_star: usize,
    /// Increment at the chosen index, `tvds[j*+1] - tvds[j*]`.
    pub delta: f64,
    /// Largest single-phase increment anywhere on the curve.
    pub max_increment: f64,
    /// Selection constant: the final observed separation.
    pub c_dist: f64,
}

/// Hybrid-argument selection: with `C` the final separation, the chosen
/// index is the smallest `j` with `tvd(j+1) >= C (j+1) / k`, which forces
/// an increment of at least `C / k` there.
pub fn select_informative_index(tvds: &[f64]) -> InformativeIndexReport {
    assert!(tvds.len() >= 2, "need at least one phase");
    let k = tvds.len() - 1;
    let c_dist = tvds[k];
    let mut j_star = k - 1;
    for j in 0..k {
        if tvds[j + 1] >= c_dist * (j + 1) as f64 / k as f64 {
            j_star = j;
            break;
        }
    }
    let delta = tvds[j_star + 1] - tvds[j_star];
    let max_increment = (0..k)
        .map(|j| tvds[j + 1] - tvds[j])
        .fold(f64::NEG_INFINITY, f64::max);
    InformativeIndexReport {
        tvds: tvds.to_vec(),
        j_star,
        delta,
        max_increment,
        c_dist,
    }
}

pub fn find_informative_index(
    aut: &FiniteStateAutomaton,
    params: &HardDistParams,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<InformativeIndexReport> {
    let curves = state_distribution_curves(aut, params, trials, None, rng)?;
    Ok(select_informative_index(&curves.tvds))
}

// ---------------------------------------------------------------------------
// Two-party protocol
// ---------------------------------------------------------------------------

/// Reference state tables for the protocol's likelihood test.
///
/// `yes` estimates the state after `j* + 1` YES phases; `no` estimates one
/// NO-thinned step taken from the YES state at `j*`. Both tables carry
/// additive smoothing `1 / (trials * states)` so unseen states tie (and the
/// tie breaks to NO).
#[derive(Debug, Clone)]
pub struct ReferenceTables {
    pub j_star: usize,
    pub yes: DiscreteDistribution,
    pub no: DiscreteDistribution,
    pub trials: usize,
}

impl ReferenceTables {
    /// Estimated separation between the two tables.
    pub fn separation(&self) -> Result<f64> {
        tvd(&self.yes, &self.no)
    }
}

pub fn estimate_reference_tables(
    aut: &FiniteStateAutomaton,
    params: &HardDistParams,
    j_star: usize,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<ReferenceTables> {
    if j_star + 1 > params.k {
        return Err(Error::InvalidParameter(format!(
            "informative index {j_star} beyond k - 1 = {}",
            params.k - 1
        )));
    }
    let states = aut.num_states();
    let pseudo = 1.0 / (trials.max(1) as f64 * states as f64);
    let mut yes_counts = vec![0u64; states];
    let mut no_counts = vec![0u64; states];
    let mut scratch = Vec::new();
    let mut buf = Vec::new();
    for (label_is_yes, counts) in [(true, &mut yes_counts), (false, &mut no_counts)] {
        for _ in 0..trials {
            // The YES table extends the prefix by one more phase of the
            // same hidden bipartition; the NO table leaves the prefix after
            // j* phases and takes one half-thinned fresh graph.
            let prefix_len = if label_is_yes { j_star + 1 } else { j_star };
            let (_, phases) = sample_phases(params, Label::Yes, prefix_len, None, rng)?;
            let mut state = 0usize;
            for edges in phases {
                scratch.clear();
                scratch.extend(edges);
                scratch.shuffle(rng);
                for &e in &scratch {
                    state = aut.step(state, e)?;
                }
            }
            if !label_is_yes {
                sample_gnp_edges_into(params.n, params.alpha, rng, &mut buf)?;
                scratch.clear();
                scratch.extend(buf.iter().filter(|_| rng.random_bool(0.5)));
                scratch.shuffle(rng);
                for &e in &scratch {
                    state = aut.step(state, e)?;
                }
            }
            counts[state] += 1;
        }
    }
    Ok(ReferenceTables {
        j_star,
        yes: DiscreteDistribution::from_counts_smoothed(&yes_counts, pseudo)?,
        no: DiscreteDistribution::from_counts_smoothed(&no_counts, pseudo)?,
        trials,
    })
}

/// Alice's half of the protocol: simulate `j_star` YES phases from her own
/// string and fresh randomness. Reads nothing of Bob's input.
pub fn alice_simulate(
    aut: &FiniteStateAutomaton,
    n: usize,
    alpha: f64,
    x: &BitVector,
    j_star: usize,
    rng: &mut ChaCha8Rng,
) -> Result<usize> {
    let mut state = 0usize;
    let mut buf = Vec::new();
    for _ in 0..j_star {
        sample_gnp_edges_into(n, alpha, rng, &mut buf)?;
        let mut kept: Vec<Edge> = buf
            .iter()
            .copied()
            .filter(|&(u, v)| x.get(u as usize) != x.get(v as usize))
            .collect();
        kept.shuffle(rng);
        for &e in &kept {
            state = aut.step(state, e)?;
        }
    }
    Ok(state)
}

/// Bob's derived edge set: the rows of his incidence matrix whose parity
/// bit is one.
pub fn bob_derived_edges(matrix: &IncidenceMatrix, w: &BitVector) -> Result<Vec<Edge>> {
    if w.dimension() != matrix.r() {
        return Err(Error::DimensionMismatch {
            expected: matrix.r(),
            got: w.dimension(),
        });
    }
    Ok(w.iter_ones().map(|e| matrix.rows()[e]).collect())
}

/// Bob's half: one more phase on the derived edge set, starting from the
/// state Alice sent. Reads nothing of Alice's string.
pub fn bob_step(
    aut: &FiniteStateAutomaton,
    state: usize,
    matrix: &IncidenceMatrix,
    w: &BitVector,
    rng: &mut ChaCha8Rng,
) -> Result<usize> {
    let mut edges = bob_derived_edges(matrix, w)?;
    edges.shuffle(rng);
    let mut state = state;
    for &e in &edges {
        state = aut.step(state, e)?;
    }
    Ok(state)
}

/// Runs the full protocol on a hidden-partition instance and returns the
/// likelihood-test verdict: YES iff the YES table gives the observed state
/// strictly more mass.
pub fn dbhp_protocol_run(
    aut: &FiniteStateAutomaton,
    inst: &BhpInstance,
    tables: &ReferenceTables,
    rng: &mut ChaCha8Rng,
) -> Result<Label> {
    let sent = alice_simulate(aut, inst.n, inst.alpha, &inst.x, tables.j_star, rng)?;
    let observed = bob_step(aut, sent, &inst.matrix, &inst.w, rng)?;
    Ok(if tables.yes.prob(observed) > tables.no.prob(observed) {
        Label::Yes
    } else {
        Label::No
    })
}

// ---------------------------------------------------------------------------
// Advantage estimation
// ---------------------------------------------------------------------------

/// Empirical advantage over random guessing with a conservative binomial
/// confidence radius (`1/sqrt(trials)`, two sigma at worst case).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdvantageEstimate {
    pub advantage: f64,
    pub radius: f64,
    pub trials: usize,
}

/// Runs `trials` rounds of `(truth, guess)` and reports `Pr[correct] - 1/2`.
pub fn advantage_estimate(
    trials: usize,
    rng: &mut ChaCha8Rng,
    mut run_one: impl FnMut(&mut ChaCha8Rng) -> Result<(Label, Label)>,
) -> Result<AdvantageEstimate> {
    let mut correct = 0usize;
    for _ in 0..trials {
        let (truth, guess) = run_one(rng)?;
        if truth == guess {
            correct += 1;
        }
    }
    Ok(AdvantageEstimate {
        advantage: correct as f64 / trials.max(1) as f64 - 0.5,
        radius: 1.0 / (trials.max(1) as f64).sqrt(),
        trials,
    })
}
