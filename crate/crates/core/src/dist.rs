//! Random objects: `G(n, alpha/n)` graphs, the phased YES/NO hard
//! distribution over multigraphs, stream orderings, boolean
//! hidden-hypermatching and hidden-partition instances, and the tail-bound
//! and cycle-count analytics used to check them.

use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::graph::{parse_field, BitVector, Bipartition, IncidenceMatrix, MultiGraph};
use crate::{rng, Edge, Error, Label, Result};

const NS_CANONICAL: u64 = 0xC1;
const NS_UNIFORM: u64 = 0xC2;
const NS_IID: u64 = 0xC3;

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

/// Parameters of the phased hard distribution.
///
/// The phase count is `k = ceil(c_phase / (alpha * epsilon^2))`, so an
/// instance carries about `k * alpha * n / 4` edges in expectation.
#[derive(Debug, Clone, PartialEq)]
pub struct HardDistParams {
    pub n: usize,
    pub alpha: f64,
    pub epsilon: f64,
    pub c_phase: f64,
    pub k: usize,
}

impl HardDistParams {
    pub fn new(n: usize, alpha: f64, epsilon: f64, c_phase: f64) -> Result<Self> {
        Self::validate_base(n, alpha, epsilon)?;
        if c_phase <= 0.0 || !c_phase.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "c_phase must be positive, got {c_phase}"
            )));
        }
        let k = (c_phase / (alpha * epsilon * epsilon)).ceil() as usize;
        debug_assert!(k >= 1);
        Ok(HardDistParams {
            n,
            alpha,
            epsilon,
            c_phase,
            k,
        })
    }

    /// Fixes the phase count directly; `c_phase` is back-derived so that the
    /// ceiling identity still holds.
    pub fn with_k(n: usize, alpha: f64, epsilon: f64, k: usize) -> Result<Self> {
        Self::validate_base(n, alpha, epsilon)?;
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        Ok(HardDistParams {
            n,
            alpha,
            epsilon,
            c_phase: k as f64 * alpha * epsilon * epsilon,
            k,
        })
    }

    /// Phase count scaled for an i.i.d.-sample stream of `ell * n` edges:
    /// `k = ceil(c_phase * ell / (alpha * epsilon^2))`.
    pub fn with_ell(n: usize, alpha: f64, epsilon: f64, c_phase: f64, ell: usize) -> Result<Self> {
        if ell == 0 {
            return Err(Error::InvalidParameter("ell must be at least 1".into()));
        }
        Self::new(n, alpha, epsilon, c_phase * ell as f64)
    }

    fn validate_base(n: usize, alpha: f64, epsilon: f64) -> Result<()> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "n must be at least 2, got {n}"
            )));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0, 1], got {alpha}"
            )));
        }
        if alpha * (n as f64) < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "alpha * n must be at least 1, got {}",
                alpha * n as f64
            )));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in (0, 1), got {epsilon}"
            )));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Erdos-Renyi sampling
// ---------------------------------------------------------------------------

/// Samples `G(n, alpha/n)`: every pair present independently with
/// probability `alpha/n`. Runs in expected `O(m)` time via geometric skips
/// over the pair index space.
pub fn sample_gnp<R: Rng + ?Sized>(n: usize, alpha: f64, rng: &mut R) -> Result<MultiGraph> {
    let mut edges = Vec::new();
    sample_gnp_edges_into(n, alpha, rng, &mut edges)?;
    MultiGraph::from_edges(n, edges)
}

/// Allocation-free core of [`sample_gnp`]: clears `out` and fills it with
/// the sampled edges in sorted pair order.
pub fn sample_gnp_edges_into<R: Rng + ?Sized>(
    n: usize,
    alpha: f64,
    rng: &mut R,
    out: &mut Vec<Edge>,
) -> Result<()> {
    out.clear();
    if !alpha.is_finite() || alpha < 0.0 || alpha > n as f64 {
        return Err(Error::InvalidParameter(format!(
            "edge probability alpha/n = {}/{n} outside [0, 1]",
            alpha
        )));
    }
    if n < 2 {
        return Ok(());
    }
    let p = alpha / n as f64;
    if p <= 0.0 {
        return Ok(());
    }
    if p >= 1.0 {
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                out.push((u, v));
            }
        }
        return Ok(());
    }
    let total = (n as u64 * (n as u64 - 1)) / 2;
    let ln_q = (-p).ln_1p();
    let mut idx: u64 = 0;
    loop {
        let u: f64 = rng.random();
        let skip = (u.ln() / ln_q) as u64;
        idx = idx.saturating_add(skip);
        if idx >= total {
            break;
        }
        out.push(pair_from_index(idx, n as u64));
        idx += 1;
    }
    Ok(())
}

/// Pair `(u, v)`, `u < v`, at linear index `idx` in the lexicographic order
/// of the `C(n, 2)` vertex pairs.
pub(crate) fn pair_from_index(idx: u64, n: u64) -> (u32, u32) {
    debug_assert!(idx < n * (n - 1) / 2);
    let offset = |u: u64| u * (2 * n - u - 1) / 2;
    let a = (2 * n - 1) as f64;
    let disc = (a * a - 8.0 * idx as f64).max(0.0);
    let mut u = ((a - disc.sqrt()) / 2.0) as u64;
    u = u.min(n - 2);
    while offset(u + 1) <= idx {
        u += 1;
    }
    while offset(u) > idx {
        u -= 1;
    }
    let v = u + 1 + (idx - offset(u));
    (u as u32, v as u32)
}

// ---------------------------------------------------------------------------
// Phased hard distribution
// ---------------------------------------------------------------------------

/// A sample from the phased distribution: `k` phase edge-sets, the hidden
/// bipartition in the YES case, and the multiset union.
///
/// Invariants: every YES edge crosses the hidden bipartition; each phase is
/// a simple graph; union multiplicity of an edge equals the number of phases
/// containing it.
#[derive(Debug, Clone)]
pub struct PhasedInstance {
    pub params: HardDistParams,
    pub label: Label,
    /// Present iff the label is YES.
    pub hidden: Option<Bipartition>,
    pub phases: Vec<Vec<Edge>>,
    pub union: MultiGraph,
}

impl PhasedInstance {
    pub fn k(&self) -> usize {
        self.phases.len()
    }

    pub fn phase_sizes(&self) -> Vec<usize> {
        self.phases.iter().map(Vec::len).collect()
    }

    pub fn from_phases(
        params: HardDistParams,
        label: Label,
        hidden: Option<Bipartition>,
        phases: Vec<Vec<Edge>>,
    ) -> Result<Self> {
        let mut union = MultiGraph::new(params.n);
        for phase in &phases {
            for &(u, v) in phase {
                union.add_edge(u, v)?;
            }
        }
        Ok(PhasedInstance {
            params,
            label,
            hidden,
            phases,
            union,
        })
    }
}

/// Samples the first `phases` phase edge-sets of an instance.
///
/// YES: a hidden bipartition is drawn (or the planted one used) and each
/// phase keeps the edges of a fresh `G(n, alpha/n)` that cross it. NO: each
/// phase keeps every edge of a fresh `G(n, alpha/n)` independently with
/// probability 1/2.
pub fn sample_phases<R: Rng + ?Sized>(
    params: &HardDistParams,
    label: Label,
    phases: usize,
    planted: Option<&Bipartition>,
    rng: &mut R,
) -> Result<(Option<Bipartition>, Vec<Vec<Edge>>)> {
    let hidden = match label {
        Label::Yes => Some(match planted {
            Some(r) => {
                if r.dimension() != params.n {
                    return Err(Error::DimensionMismatch {
                        expected: params.n,
                        got: r.dimension(),
                    });
                }
                r.clone()
            }
            None => Bipartition::random(params.n, rng),
        }),
        Label::No => None,
    };
    let mut out = Vec::with_capacity(phases);
    let mut buf = Vec::new();
    for _ in 0..phases {
        sample_gnp_edges_into(params.n, params.alpha, rng, &mut buf)?;
        let kept: Vec<Edge> = match &hidden {
            Some(r) => buf.iter().copied().filter(|&(u, v)| r.crosses(u, v)).collect(),
            None => buf.iter().copied().filter(|_| rng.random_bool(0.5)).collect(),
        };
        out.push(kept);
    }
    Ok((hidden, out))
}

/// Samples a full instance of the hard distribution.
pub fn sample_hard<R: Rng + ?Sized>(
    params: &HardDistParams,
    label: Label,
    rng: &mut R,
) -> Result<PhasedInstance> {
    let (hidden, phases) = sample_phases(params, label, params.k, None, rng)?;
    PhasedInstance::from_phases(params.clone(), label, hidden, phases)
}

// ---------------------------------------------------------------------------
// Stream orderings
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamOrder {
    Canonical,
    Uniform,
    Iid,
}

impl fmt::Display for StreamOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StreamOrder::Canonical => write!(f, "canonical"),
            StreamOrder::Uniform => write!(f, "uniform"),
            StreamOrder::Iid => write!(f, "iid"),
        }
    }
}

impl FromStr for StreamOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "canonical" => Ok(StreamOrder::Canonical),
            "uniform" => Ok(StreamOrder::Uniform),
            "iid" => Ok(StreamOrder::Iid),
            other => Err(Error::InvalidParameter(format!(
                "unknown ordering `{other}` (expected canonical|uniform|iid)"
            ))),
        }
    }
}

/// Finite ordered edge sequence with its ordering tag and provenance.
///
/// Canonical and uniform streams are permutations of the source union
/// multiset; i.i.d. streams may repeat edges arbitrarily.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeStream {
    pub n: usize,
    pub order: StreamOrder,
    pub label: Label,
    /// Seed of the substream that produced the ordering (and, for i.i.d.
    /// streams, the draws).
    pub source_seed: u64,
    pub edges: Vec<Edge>,
}

impl EdgeStream {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Phases in order, each independently uniformly shuffled.
pub fn canonical_stream(inst: &PhasedInstance, seed: u64) -> EdgeStream {
    let mut rng = rng::substream(seed, NS_CANONICAL);
    let mut edges = Vec::with_capacity(inst.union.m() as usize);
    for phase in &inst.phases {
        let mut phase = phase.clone();
        phase.shuffle(&mut rng);
        edges.extend(phase);
    }
    EdgeStream {
        n: inst.params.n,
        order: StreamOrder::Canonical,
        label: inst.label,
        source_seed: seed,
        edges,
    }
}

/// Uniformly random permutation of the union multiset.
pub fn uniform_stream(inst: &PhasedInstance, seed: u64) -> EdgeStream {
    let mut rng = rng::substream(seed, NS_UNIFORM);
    let mut edges: Vec<Edge> = inst.union.edges_expanded().collect();
    edges.shuffle(&mut rng);
    EdgeStream {
        n: inst.params.n,
        order: StreamOrder::Uniform,
        label: inst.label,
        source_seed: seed,
        edges,
    }
}

/// `length` i.i.d. uniform draws from the underlying edge set: the complete
/// bipartite graph over a fresh random bipartition in the YES case, the
/// complete graph in the NO case.
pub fn iid_stream(
    params: &HardDistParams,
    label: Label,
    length: usize,
    seed: u64,
) -> Result<EdgeStream> {
    let mut rng = rng::substream(seed, NS_IID);
    let n = params.n;
    let mut edges = Vec::with_capacity(length);
    match label {
        Label::Yes => {
            let r = Bipartition::random(n, &mut rng);
            let mut p = Vec::new();
            let mut q = Vec::new();
            for u in 0..n as u32 {
                if r.on_q(u) {
                    q.push(u);
                } else {
                    p.push(u);
                }
            }
            if p.is_empty() || q.is_empty() {
                return Err(Error::Empty("bipartition side has no vertices"));
            }
            for _ in 0..length {
                let a = p[rng.random_range(0..p.len())];
                let b = q[rng.random_range(0..q.len())];
                edges.push((a.min(b), a.max(b)));
            }
        }
        Label::No => {
            if n < 2 {
                return Err(Error::Empty("complete graph has no edges"));
            }
            let total = (n as u64 * (n as u64 - 1)) / 2;
            for _ in 0..length {
                let idx = rng.random_range(0..total);
                edges.push(pair_from_index(idx, n as u64));
            }
        }
    }
    Ok(EdgeStream {
        n,
        order: StreamOrder::Iid,
        label,
        source_seed: seed,
        edges,
    })
}

/// Per-phase sample counts for an i.i.d.-sample stream.
///
/// YES: `T_i ~ Binomial(|P||Q|, alpha/n)` for a fresh random bipartition.
/// NO: each phase first thins the complete graph by 1/2, then draws
/// `T_i ~ Binomial(|E'_i|, alpha/n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IidStreamParams {
    pub ell: usize,
    pub per_phase: Vec<u64>,
}

impl IidStreamParams {
    pub fn total(&self) -> u64 {
        self.per_phase.iter().sum()
    }
}

/// Draws per-phase counts and the corresponding i.i.d. sample blocks.
///
/// Block `i` holds `T_i` uniform draws from the underlying edge set (the
/// complete bipartite graph over one shared random bipartition in the YES
/// case, the complete graph in the NO case).
pub fn iid_phased_blocks<R: Rng + ?Sized>(
    params: &HardDistParams,
    ell: usize,
    label: Label,
    rng: &mut R,
) -> Result<(IidStreamParams, Vec<Vec<Edge>>)> {
    let n = params.n;
    if n < 2 {
        return Err(Error::Empty("complete graph has no edges"));
    }
    let p_edge = params.alpha / n as f64;
    let pairs = (n as u64 * (n as u64 - 1)) / 2;
    let mut counts = Vec::with_capacity(params.k);
    let mut blocks = Vec::with_capacity(params.k);
    match label {
        Label::Yes => {
            let r = Bipartition::random(n, rng);
            let (p_side, q_side) = r.side_sizes();
            if p_side == 0 || q_side == 0 {
                return Err(Error::Empty("bipartition side has no vertices"));
            }
            let mut p = Vec::new();
            let mut q = Vec::new();
            for u in 0..n as u32 {
                if r.on_q(u) {
                    q.push(u);
                } else {
                    p.push(u);
                }
            }
            let universe = (p.len() as u64) * (q.len() as u64);
            let binom = binomial(universe, p_edge)?;
            for _ in 0..params.k {
                let t = binom.sample(rng);
                counts.push(t);
                let mut block = Vec::with_capacity(t as usize);
                for _ in 0..t {
                    let a = p[rng.random_range(0..p.len())];
                    let b = q[rng.random_range(0..q.len())];
                    block.push((a.min(b), a.max(b)));
                }
                blocks.push(block);
            }
        }
        Label::No => {
            let thin = binomial(pairs, 0.5)?;
            for _ in 0..params.k {
                let kept = thin.sample(rng);
                let t = binomial(kept, p_edge)?.sample(rng);
                counts.push(t);
                let mut block = Vec::with_capacity(t as usize);
                for _ in 0..t {
                    let idx = rng.random_range(0..pairs);
                    block.push(pair_from_index(idx, n as u64));
                }
                blocks.push(block);
            }
        }
    }
    Ok((IidStreamParams { ell, per_phase: counts }, blocks))
}

fn binomial(n: u64, p: f64) -> Result<Binomial> {
    Binomial::new(n, p)
        .map_err(|e| Error::InvalidParameter(format!("binomial({n}, {p}): {e}")))
}

// ---------------------------------------------------------------------------
// Collision statistics
// ---------------------------------------------------------------------------

/// Fraction of sampled uniform permutations of the union multiset that place
/// two copies of some duplicate edge within `window` positions (default
/// window `4 * alpha * n`).
///
/// Only the slots of the duplicate copies matter, and under a uniform
/// permutation those are a uniform sample of distinct positions, so the
/// permutation is never materialized. Cross-checked against a full shuffle
/// in tests.
pub fn collision_fraction<R: Rng + ?Sized>(
    inst: &PhasedInstance,
    window: Option<usize>,
    trials: usize,
    rng: &mut R,
) -> f64 {
    let m = inst.union.m() as usize;
    let window = window
        .unwrap_or_else(|| (4.0 * inst.params.alpha * inst.params.n as f64).round() as usize);
    let dups: Vec<usize> = inst
        .union
        .edge_multiplicities()
        .filter(|&(_, c)| c >= 2)
        .map(|(_, c)| c as usize)
        .collect();
    if dups.is_empty() || trials == 0 || m == 0 {
        return 0.0;
    }
    let copies: usize = dups.iter().sum();
    let mut positions: Vec<usize> = Vec::with_capacity(copies);
    let mut used: HashSet<usize> = HashSet::with_capacity(copies * 2);
    let mut hits = 0usize;
    for _ in 0..trials {
        positions.clear();
        if copies * 4 >= m {
            let mut slots: Vec<usize> = (0..m).collect();
            let (chosen, _) = slots.partial_shuffle(rng, copies);
            positions.extend_from_slice(chosen);
        } else {
            used.clear();
            while positions.len() < copies {
                let p = rng.random_range(0..m);
                if used.insert(p) {
                    positions.push(p);
                }
            }
        }
        let mut offset = 0;
        let mut collided = false;
        for &c in &dups {
            let group = &mut positions[offset..offset + c];
            group.sort_unstable();
            if group.windows(2).any(|w| w[1] - w[0] <= window) {
                collided = true;
                break;
            }
            offset += c;
        }
        if collided {
            hits += 1;
        }
    }
    hits as f64 / trials as f64
}

// ---------------------------------------------------------------------------
// Boolean hidden hypermatching
// ---------------------------------------------------------------------------

/// Instance of the hidden-hypermatching communication problem: Alice's bit
/// string, a perfect partition of `[n]` into blocks of size `t`, and Bob's
/// parity vector (all block parities match in the YES case, all differ in
/// the NO case).
#[derive(Debug, Clone)]
pub struct BhhInstance {
    pub n: usize,
    pub t: usize,
    pub x: BitVector,
    /// Disjoint blocks covering `[n]`, each sorted ascending.
    pub blocks: Vec<Vec<u32>>,
    pub w: BitVector,
    pub label: Label,
}

impl BhhInstance {
    /// Parity of `x` over each block (the vector `Mx`).
    pub fn hyperedge_parities(&self) -> BitVector {
        BitVector::from_fn(self.blocks.len(), |i| {
            self.blocks[i]
                .iter()
                .fold(false, |acc, &j| acc ^ self.x.get(j as usize))
        })
    }
}

pub fn sample_bhh<R: Rng + ?Sized>(
    n: usize,
    t: usize,
    label: Label,
    rng: &mut R,
) -> Result<BhhInstance> {
    if t == 0 || n == 0 || !n.is_multiple_of(t) {
        return Err(Error::InvalidParameter(format!(
            "hyperedge arity {t} must divide n = {n}"
        )));
    }
    let x = BitVector::random(n, rng);
    let mut perm: Vec<u32> = (0..n as u32).collect();
    perm.shuffle(rng);
    let blocks: Vec<Vec<u32>> = perm
        .chunks(t)
        .map(|c| {
            let mut b = c.to_vec();
            b.sort_unstable();
            b
        })
        .collect();
    let mut inst = BhhInstance {
        n,
        t,
        x,
        blocks,
        w: BitVector::zeros(n / t),
        label,
    };
    let mut w = inst.hyperedge_parities();
    if label == Label::No {
        w.flip_all();
    }
    inst.w = w;
    Ok(inst)
}

// ---------------------------------------------------------------------------
// Boolean hidden partition
// ---------------------------------------------------------------------------

/// Instance of the distributional hidden-partition problem: Alice's uniform
/// string, Bob's `G(n, alpha/n)` graph with incidence matrix `M`, and the
/// edge parities `w = Mx` (YES) or uniform (NO).
#[derive(Debug, Clone)]
pub struct BhpInstance {
    pub n: usize,
    pub alpha: f64,
    pub x: BitVector,
    pub graph: MultiGraph,
    pub matrix: IncidenceMatrix,
    pub w: BitVector,
    pub label: Label,
}

pub fn sample_bhp<R: Rng + ?Sized>(
    n: usize,
    alpha: f64,
    label: Label,
    rng: &mut R,
) -> Result<BhpInstance> {
    if alpha <= 0.0 || alpha.is_nan() || alpha >= n as f64 {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, n), got {alpha}"
        )));
    }
    let x = BitVector::random(n, rng);
    let graph = sample_gnp(n, alpha, rng)?;
    let matrix = graph.incidence();
    let w = match label {
        Label::Yes => matrix.apply(&x)?,
        Label::No => BitVector::random(matrix.r(), rng),
    };
    Ok(BhpInstance {
        n,
        alpha,
        x,
        graph,
        matrix,
        w,
        label,
    })
}

// ---------------------------------------------------------------------------
// Tail bounds and cycle analytics
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailSide {
    Upper,
    Lower,
}

/// Chernoff tail bound for a sum of independent Bernoulli variables with
/// mean `mu`: `exp(-delta^2 / (2 mu + 2 delta))` above the mean,
/// `exp(-delta^2 / (2 mu))` below it.
pub fn chernoff_tail(mu: f64, delta: f64, side: TailSide) -> Result<f64> {
    if mu <= 0.0 || !mu.is_finite() || delta < 0.0 || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "chernoff_tail needs mu > 0 and delta >= 0, got mu = {mu}, delta = {delta}"
        )));
    }
    let exponent = match side {
        TailSide::Upper => -(delta * delta) / (2.0 * mu + 2.0 * delta),
        TailSide::Lower => -(delta * delta) / (2.0 * mu),
    };
    Ok(exponent.exp())
}

/// Number of connected unicyclic graphs on `k` labeled vertices:
/// `(k-1)!/2 * sum_{j=0}^{k-3} k^j / j!`.
pub fn unicyclic_graph_count(k: usize) -> Result<u128> {
    if !(3..=25).contains(&k) {
        return Err(Error::SizeLimit {
            what: "unicyclic count argument",
            value: k,
            limit: 25,
        });
    }
    let mut sum: u128 = 0;
    for j in 0..=(k - 3) {
        // (k-1)!/j! * k^j, exact in u128 for k <= 25
        let mut term: u128 = 1;
        for i in (j + 1)..k {
            term *= i as u128;
        }
        term *= (k as u128).pow(j as u32);
        sum += term;
    }
    Ok(sum / 2)
}

/// Expected number of cycles in `G(n, alpha/n)`:
/// `sum_{j=3}^{n} C(n, j) * (j-1)!/2 * (alpha/n)^j`.
pub fn expected_cycle_count(n: usize, alpha: f64) -> f64 {
    if n < 3 || alpha <= 0.0 {
        return 0.0;
    }
    let nf = n as f64;
    let mut sum = 0.0;
    // term_j = alpha^j / (2 j) * prod_{i=0}^{j-1} (n - i)/n
    let mut falling = (1.0 - 1.0 / nf) * (1.0 - 2.0 / nf); // j = 3 prefix over i = 1, 2
    let mut alpha_pow = alpha * alpha * alpha;
    for j in 3..=n {
        let term = alpha_pow / (2.0 * j as f64) * falling;
        sum += term;
        if term < sum * 1e-18 {
            break;
        }
        falling *= 1.0 - j as f64 / nf;
        alpha_pow *= alpha;
    }
    sum
}

/// Reusable cycle detector: union-find with epoch stamping so consecutive
/// calls on graphs over the same vertex range need no reallocation.
pub struct CycleDetector {
    parent: Vec<u32>,
    epoch: Vec<u32>,
    current: u32,
}

impl CycleDetector {
    pub fn new(n: usize) -> Self {
        CycleDetector {
            parent: vec![0; n],
            epoch: vec![0; n],
            current: 0,
        }
    }

    /// True when the edge multiset contains a cycle (a repeated edge counts).
    pub fn has_cycle(&mut self, edges: impl IntoIterator<Item = Edge>) -> bool {
        self.current = self.current.wrapping_add(1);
        if self.current == 0 {
            self.epoch.fill(0);
            self.current = 1;
        }
        for (u, v) in edges {
            let ru = self.find(u);
            let rv = self.find(v);
            if ru == rv {
                return true;
            }
            self.parent[ru as usize] = rv;
        }
        false
    }

    fn find(&mut self, mut x: u32) -> u32 {
        if self.epoch[x as usize] != self.current {
            self.epoch[x as usize] = self.current;
            self.parent[x as usize] = x;
            return x;
        }
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            let gp = self.parent[p as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
        x
    }
}

// ---------------------------------------------------------------------------
// Stream text format
// ---------------------------------------------------------------------------

/// Writes the stream format: header `n length ordering_tag case_label seed`,
/// then one edge per line (1-based).
pub fn write_stream(s: &EdgeStream, w: &mut impl Write) -> Result<()> {
    writeln!(
        w,
        "{} {} {} {} {}",
        s.n,
        s.edges.len(),
        s.order,
        s.label,
        s.source_seed
    )?;
    for &(u, v) in &s.edges {
        writeln!(w, "{} {}", u + 1, v + 1)?;
    }
    Ok(())
}

pub fn read_stream(r: impl BufRead) -> Result<EdgeStream> {
    let mut lines = r.lines();
    let header = lines.next().ok_or(Error::Format {
        what: "stream file",
        detail: "missing header line".into(),
    })??;
    let mut it = header.split_whitespace();
    let n: usize = parse_field(it.next(), "stream file", "n")?;
    let length: usize = parse_field(it.next(), "stream file", "length")?;
    let order: StreamOrder = it
        .next()
        .ok_or(Error::Format {
            what: "stream file",
            detail: "missing ordering tag".into(),
        })?
        .parse()?;
    let label: Label = it
        .next()
        .ok_or(Error::Format {
            what: "stream file",
            detail: "missing case label".into(),
        })?
        .parse()?;
    let seed: u64 = parse_field(it.next(), "stream file", "seed")?;
    let mut edges = Vec::with_capacity(length);
    for line in lines {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut it = trimmed.split_whitespace();
        let u: u32 = parse_field(it.next(), "stream file", "u")?;
        let v: u32 = parse_field(it.next(), "stream file", "v")?;
        if u == 0 || v == 0 || u as usize > n || v as usize > n {
            return Err(Error::Format {
                what: "stream file",
                detail: format!("edge ({u}, {v}) out of range"),
            });
        }
        let (u, v) = (u - 1, v - 1);
        edges.push((u.min(v), u.max(v)));
    }
    if edges.len() != length {
        return Err(Error::Format {
            what: "stream file",
            detail: format!("header says length {length}, found {}", edges.len()),
        });
    }
    Ok(EdgeStream {
        n,
        order,
        label,
        source_seed: seed,
        edges,
    })
}

pub fn stream_string(s: &EdgeStream) -> String {
    let mut buf = Vec::new();
    write_stream(s, &mut buf).expect("write to Vec cannot fail");
    String::from_utf8(buf).expect("stream text is ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{self, cut_value};
    use crate::rng;

    fn params(n: usize, alpha: f64, epsilon: f64, c: f64) -> HardDistParams {
        HardDistParams::new(n, alpha, epsilon, c).unwrap()
    }

    #[test]
    fn phase_count_rounds_up() {
        let p = params(100, 0.5, 0.5, 8.0);
        assert_eq!(p.k, 64);
        let p = HardDistParams::with_k(100, 0.5, 0.5, 7).unwrap();
        assert_eq!(p.k, 7);
        // The back-derived constant keeps the ceiling identity intact.
        assert_eq!(HardDistParams::new(100, 0.5, 0.5, p.c_phase).unwrap().k, 7);
        assert!(HardDistParams::new(100, 0.0, 0.5, 8.0).is_err());
        assert!(HardDistParams::new(100, 0.5, 1.5, 8.0).is_err());
        assert!(HardDistParams::new(100, 0.001, 0.5, 8.0).is_err());
    }

    #[test]
    fn gnp_extremes() {
        let mut rng = rng::master(1);
        let g = sample_gnp(50, 0.0, &mut rng).unwrap();
        assert_eq!(g.m(), 0);
        let g = sample_gnp(6, 6.0, &mut rng).unwrap();
        assert_eq!(g.m(), 15);
        assert!(sample_gnp(5, 10.0, &mut rng).is_err());
    }

    #[test]
    fn gnp_edge_count_matches_binomial_moments() {
        // m ~ Binomial(C(n,2), alpha/n), so E[m] = alpha (n-1)/2 = 2499.75
        // at n = 10^4 and Var[m] = C(n,2) p (1-p).
        let n = 10_000usize;
        let alpha = 0.5;
        let trials = 1000;
        let counts: Vec<f64> = (0..trials)
            .map(|t| {
                let mut rng = rng::trial(20, 1, t);
                sample_gnp(n, alpha, &mut rng).unwrap().m() as f64
            })
            .collect();
        let expect = alpha * (n as f64 - 1.0) / 2.0;
        let p = alpha / n as f64;
        let variance = (n * (n - 1) / 2) as f64 * p * (1.0 - p);

        let mean = counts.iter().sum::<f64>() / trials as f64;
        let sigma_mean = (variance / trials as f64).sqrt();
        assert!(
            (mean - expect).abs() <= 3.0 * sigma_mean,
            "mean {mean} vs {expect} (3 sigma = {})",
            3.0 * sigma_mean
        );

        let sample_var =
            counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
        // The sample variance of Binomial counts concentrates with
        // relative sigma about sqrt(2/trials).
        let sigma_var = variance * (2.0 / trials as f64).sqrt();
        assert!(
            (sample_var - variance).abs() <= 3.0 * sigma_var,
            "variance {sample_var} vs {variance} (3 sigma = {sigma_var})"
        );
    }

    #[test]
    fn pair_indexing_is_a_bijection() {
        let n = 9u64;
        let mut seen = HashSet::new();
        for idx in 0..n * (n - 1) / 2 {
            let (u, v) = pair_from_index(idx, n);
            assert!(u < v && (v as u64) < n);
            assert!(seen.insert((u, v)));
        }
        assert_eq!(seen.len() as u64, n * (n - 1) / 2);
    }

    #[test]
    fn yes_instances_are_bipartite_with_full_cut() {
        let p = params(100, 0.5, 0.5, 4.0);
        let mut rng = rng::master(5);
        let inst = sample_hard(&p, Label::Yes, &mut rng).unwrap();
        let r = inst.hidden.as_ref().unwrap();
        assert_eq!(cut_value(&inst.union, r).unwrap(), inst.union.m());
        let witness = graph::is_bipartite(&inst.union).expect("YES union is bipartite");
        // The certificate matches the hidden bipartition up to a flip per
        // component, on every non-isolated vertex.
        let (labels, count) = crate::graph::component_labels(&inst.union);
        let mut agreement: Vec<Option<bool>> = vec![None; count];
        let mut degree = vec![0u32; p.n];
        for ((u, v), c) in inst.union.edge_multiplicities() {
            degree[u as usize] += c;
            degree[v as usize] += c;
        }
        for u in 0..p.n {
            if degree[u] == 0 {
                continue;
            }
            let agrees = witness.on_q(u as u32) == r.on_q(u as u32);
            match agreement[labels[u]] {
                None => agreement[labels[u]] = Some(agrees),
                Some(prev) => assert_eq!(prev, agrees, "component-wise flip broken at {u}"),
            }
        }
    }

    #[test]
    fn phases_are_simple_and_union_multiplicity_is_bounded() {
        let p = params(30, 0.9, 0.5, 2.0);
        let mut rng = rng::master(9);
        for label in [Label::Yes, Label::No] {
            let inst = sample_hard(&p, label, &mut rng).unwrap();
            for phase in &inst.phases {
                let set: HashSet<Edge> = phase.iter().copied().collect();
                assert_eq!(set.len(), phase.len(), "phase has a duplicate edge");
            }
            for (_, c) in inst.union.edge_multiplicities() {
                assert!((c as usize) <= inst.k());
            }
        }
    }

    #[test]
    fn per_phase_sizes_stay_below_alpha_n() {
        let p = params(10_000, 0.2, 0.5, 1.0);
        let mut rng = rng::master(11);
        let inst = sample_hard(&p, Label::No, &mut rng).unwrap();
        let bound = (p.alpha * p.n as f64) as usize;
        for size in inst.phase_sizes() {
            assert!(size <= bound, "phase size {size} above alpha n = {bound}");
        }
    }

    #[test]
    fn canonical_stream_respects_phases() {
        let p = params(30, 0.9, 0.5, 2.0);
        let mut rng = rng::master(13);
        let inst = sample_hard(&p, Label::No, &mut rng).unwrap();
        let stream = canonical_stream(&inst, 77);
        assert_eq!(stream.len() as u64, inst.union.m());
        let mut offset = 0;
        for phase in &inst.phases {
            let segment: HashSet<Edge> =
                stream.edges[offset..offset + phase.len()].iter().copied().collect();
            let expect: HashSet<Edge> = phase.iter().copied().collect();
            assert_eq!(segment, expect, "phase boundary not preserved");
            assert_eq!(segment.len(), phase.len(), "duplicate within a phase segment");
            offset += phase.len();
        }
    }

    #[test]
    fn canonical_single_phase_is_a_shuffle() {
        let p = HardDistParams::with_k(10, 1.0, 0.5, 1).unwrap();
        let mut rng = rng::master(15);
        let inst = sample_hard(&p, Label::No, &mut rng).unwrap();
        let stream = canonical_stream(&inst, 3);
        let mut sorted = stream.edges.clone();
        sorted.sort_unstable();
        let mut expect: Vec<Edge> = inst.union.edges_expanded().collect();
        expect.sort_unstable();
        assert_eq!(sorted, expect);
    }

    #[test]
    fn uniform_stream_singleton() {
        let p = HardDistParams::with_k(4, 1.0, 0.5, 1).unwrap();
        let inst = PhasedInstance::from_phases(p, Label::No, None, vec![vec![(0, 3)]]).unwrap();
        let stream = uniform_stream(&inst, 1);
        assert_eq!(stream.edges, vec![(0, 3)]);
    }

    #[test]
    fn uniform_stream_permutations_equiprobable() {
        let p = HardDistParams::with_k(4, 1.0, 0.5, 1).unwrap();
        let edges = vec![(0, 1), (1, 2), (2, 3)];
        let inst =
            PhasedInstance::from_phases(p, Label::No, None, vec![edges.clone()]).unwrap();
        let perm_index = |stream: &EdgeStream| -> usize {
            let order: Vec<usize> = stream
                .edges
                .iter()
                .map(|e| edges.iter().position(|f| f == e).unwrap())
                .collect();
            // Lehmer code over 3 items.
            let mut rank = 0;
            rank += order[0] * 2;
            rank += (order[1] > order[2]) as usize;
            rank
        };
        let trials = 6000;
        let mut counts = [0usize; 6];
        for t in 0..trials {
            counts[perm_index(&uniform_stream(&inst, t))] += 1;
        }
        let expect = trials as f64 / 6.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expect).powi(2) / expect)
            .sum();
        assert!(chi2 < 20.5, "chi-square {chi2} over 6 permutations");
    }

    #[test]
    fn collision_fraction_trivial_cases() {
        let p = HardDistParams::with_k(4, 1.0, 0.5, 1).unwrap();
        let simple =
            PhasedInstance::from_phases(p.clone(), Label::No, None, vec![vec![(0, 1), (2, 3)]])
                .unwrap();
        let mut rng = rng::master(1);
        assert_eq!(collision_fraction(&simple, None, 100, &mut rng), 0.0);

        let dup = PhasedInstance::from_phases(
            p,
            Label::No,
            None,
            vec![vec![(0, 1)], vec![(0, 1)]],
        )
        .unwrap();
        assert_eq!(collision_fraction(&dup, Some(2), 100, &mut rng), 1.0);
    }

    #[test]
    fn collision_fraction_matches_materialized_shuffle() {
        // Same statistic computed by actually shuffling the multiset.
        let p = HardDistParams::with_k(8, 1.0, 0.5, 2).unwrap();
        let phases = vec![
            vec![(0, 1), (2, 3), (4, 5), (6, 7), (1, 2)],
            vec![(0, 1), (2, 3), (3, 4)],
        ];
        let inst = PhasedInstance::from_phases(p, Label::No, None, phases).unwrap();
        let window = 2;
        let mut rng = rng::master(21);
        let fast = collision_fraction(&inst, Some(window), 40_000, &mut rng);

        let mut slow_hits = 0usize;
        let trials = 40_000;
        let mut rng = rng::master(22);
        let all: Vec<Edge> = inst.union.edges_expanded().collect();
        for _ in 0..trials {
            let mut perm = all.clone();
            perm.shuffle(&mut rng);
            let mut collided = false;
            for (edge, c) in inst.union.edge_multiplicities() {
                if c < 2 {
                    continue;
                }
                let mut pos: Vec<usize> = perm
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e == edge)
                    .map(|(i, _)| i)
                    .collect();
                pos.sort_unstable();
                if pos.windows(2).any(|w| w[1] - w[0] <= window) {
                    collided = true;
                    break;
                }
            }
            if collided {
                slow_hits += 1;
            }
        }
        let slow = slow_hits as f64 / trials as f64;
        assert!(
            (fast - slow).abs() < 0.015,
            "position sampling {fast} vs shuffle {slow}"
        );
    }

    #[test]
    fn iid_stream_single_edge_is_constant() {
        let p = HardDistParams::with_k(2, 0.5, 0.5, 1).unwrap();
        let stream = iid_stream(&p, Label::No, 25, 4).unwrap();
        assert!(stream.edges.iter().all(|&e| e == (0, 1)));
    }

    #[test]
    fn iid_stream_frequencies_are_uniform() {
        // Chi-square statistic over all pairs of K_n concentrates around its
        // degrees of freedom under uniform sampling.
        let n = 100;
        let p = params(n, 0.5, 0.5, 8.0);
        let length = 100_000;
        let stream = iid_stream(&p, Label::No, length, 8).unwrap();
        let cells = n * (n - 1) / 2;
        let mut counts = vec![0u64; cells];
        for &(u, v) in &stream.edges {
            let idx = (u as u64) * (2 * n as u64 - u as u64 - 1) / 2 + (v - u - 1) as u64;
            counts[idx as usize] += 1;
        }
        let expect = length as f64 / cells as f64;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expect).powi(2) / expect)
            .sum();
        let df = (cells - 1) as f64;
        assert!(
            (chi2 - df).abs() <= 3.0 * (2.0 * df).sqrt(),
            "chi-square {chi2} vs df {df}"
        );
    }

    #[test]
    fn iid_blocks_have_binomial_sizes() {
        let p = params(100, 0.5, 0.5, 2.0);
        let mut rng = rng::master(31);
        let (counts, blocks) = iid_phased_blocks(&p, 1, Label::Yes, &mut rng).unwrap();
        assert_eq!(counts.per_phase.len(), p.k);
        assert_eq!(blocks.len(), p.k);
        for (c, b) in counts.per_phase.iter().zip(&blocks) {
            assert_eq!(*c as usize, b.len());
        }
        assert_eq!(counts.total(), blocks.iter().map(|b| b.len() as u64).sum());
    }

    #[test]
    fn bhh_parities_match_label() {
        let mut rng = rng::master(41);
        let yes = sample_bhh(24, 3, Label::Yes, &mut rng).unwrap();
        assert_eq!(yes.hyperedge_parities(), yes.w);
        let no = sample_bhh(24, 3, Label::No, &mut rng).unwrap();
        let mut flipped = no.hyperedge_parities();
        flipped.flip_all();
        assert_eq!(flipped, no.w);
        assert!(sample_bhh(10, 3, Label::Yes, &mut rng).is_err());
    }

    #[test]
    fn bhh_arity_two_is_a_perfect_matching() {
        let mut rng = rng::master(43);
        let inst = sample_bhh(12, 2, Label::Yes, &mut rng).unwrap();
        let mut seen = HashSet::new();
        for block in &inst.blocks {
            assert_eq!(block.len(), 2);
            for &v in block {
                assert!(seen.insert(v), "vertex {v} in two matching edges");
            }
        }
        assert_eq!(seen.len(), 12);
    }

    #[test]
    fn bhp_yes_weight_equals_cut() {
        let mut rng = rng::master(47);
        let inst = sample_bhp(40, 3.0, Label::Yes, &mut rng).unwrap();
        let x = Bipartition::from_bits(inst.x.clone());
        assert_eq!(
            inst.w.weight() as u64,
            cut_value(&inst.graph, &x).unwrap()
        );
        // x = 0 maps to w = 0 by the same identity.
        let zero = inst.matrix.apply(&BitVector::zeros(40)).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn bhp_no_parities_look_uniform_and_independent() {
        let mut ones = 0u64;
        let mut coords = 0u64;
        let mut joint = [0u64; 4];
        let mut pairs = 0u64;
        for t in 0..10_000 {
            let mut rng = rng::trial(51, 2, t);
            let inst = sample_bhp(6, 2.0, Label::No, &mut rng).unwrap();
            let r = inst.matrix.r();
            coords += r as u64;
            ones += inst.w.weight() as u64;
            if r >= 2 {
                pairs += 1;
                let idx = (inst.w.get(0) as usize) << 1 | inst.w.get(1) as usize;
                joint[idx] += 1;
            }
        }
        let dev = (ones as f64 - coords as f64 / 2.0).abs();
        assert!(dev <= 3.0 * (coords as f64 / 4.0).sqrt());
        let expect = pairs as f64 / 4.0;
        let chi2: f64 = joint
            .iter()
            .map(|&c| (c as f64 - expect).powi(2) / expect)
            .sum();
        assert!(chi2 < 16.3, "pairwise chi-square {chi2}"); // df 3, p ~ 0.001
    }

    #[test]
    fn chernoff_examples() {
        assert_eq!(
            chernoff_tail(100.0, 0.0, TailSide::Upper).unwrap(),
            1.0
        );
        assert_eq!(
            chernoff_tail(100.0, 0.0, TailSide::Lower).unwrap(),
            1.0
        );
        let lower = chernoff_tail(100.0, 20.0, TailSide::Lower).unwrap();
        assert!((lower - 0.1353352832366127).abs() < 1e-15); // e^{-2}
        let upper = chernoff_tail(100.0, 20.0, TailSide::Upper).unwrap();
        assert!((upper - 0.18887560283756183).abs() < 1e-15); // e^{-5/3}
        assert!(chernoff_tail(0.0, 1.0, TailSide::Upper).is_err());
        assert!(chernoff_tail(1.0, -1.0, TailSide::Upper).is_err());
    }

    #[test]
    fn unicyclic_counts_match_enumeration() {
        assert_eq!(unicyclic_graph_count(3).unwrap(), 1);
        assert_eq!(unicyclic_graph_count(4).unwrap(), 15);

        // Brute force: all labeled graphs on 4 vertices, connected with
        // exactly 4 edges.
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let mut count = 0;
        for mask in 0u32..64 {
            if mask.count_ones() != 4 {
                continue;
            }
            let edges: Vec<Edge> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| (mask >> i) & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = MultiGraph::from_edges(4, edges).unwrap();
            if g.component_count() == 1 {
                count += 1;
            }
        }
        assert_eq!(count, 15);
    }

    #[test]
    fn expected_cycle_count_small_case() {
        // n = 4: C(4,3) * 1 * p^3 + C(4,4) * 3 * p^4 with p = alpha/4.
        let alpha = 0.8;
        let p: f64 = alpha / 4.0;
        let expect = 4.0 * p.powi(3) + 3.0 * p.powi(4);
        let got = expected_cycle_count(4, alpha);
        assert!((got - expect).abs() < 1e-15, "{got} vs {expect}");
        assert_eq!(expected_cycle_count(2, 0.5), 0.0);
    }

    #[test]
    fn cycle_detector_agrees_with_classification() {
        let mut det = CycleDetector::new(6);
        assert!(!det.has_cycle([(0, 1), (1, 2), (3, 4)]));
        assert!(det.has_cycle([(0, 1), (1, 2), (0, 2)]));
        assert!(det.has_cycle([(0, 1), (0, 1)])); // parallel edge is a cycle
        assert!(!det.has_cycle([(0, 5)]));
    }

    #[test]
    fn stream_file_round_trips() {
        let stream = EdgeStream {
            n: 5,
            order: StreamOrder::Canonical,
            label: Label::Yes,
            source_seed: 99,
            edges: vec![(0, 4), (1, 2), (0, 4)],
        };
        let text = stream_string(&stream);
        assert!(text.starts_with("5 3 canonical yes 99\n"));
        let back = read_stream(text.as_bytes()).unwrap();
        assert_eq!(back, stream);
    }
}
