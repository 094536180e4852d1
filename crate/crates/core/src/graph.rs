//! Multigraphs, bipartitions and GF(2) incidence algebra, with exact
//! small-instance oracles.
//!
//! Vertices are 0-based `u32` ids internally; the text formats use 1-based
//! labels. Edge multisets are stored as sorted pairs with multiplicity
//! counts, and parallel edges contribute their full multiplicity to cuts
//! and component edge counts. Self-loops are rejected at construction.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};

use num_rational::Ratio;
use rand::Rng;

use crate::{Edge, Error, Result};

/// Exhaustive max-cut enumerates `2^(n-1)` bipartitions; beyond this vertex
/// count we refuse rather than degrade silently.
pub const MAX_EXACT_VERTICES: usize = 24;

// ---------------------------------------------------------------------------
// BitVector
// ---------------------------------------------------------------------------

/// Element of {0,1}^d with XOR as the group operation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    dim: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(dim: usize) -> Self {
        BitVector {
            dim,
            words: vec![0; dim.div_ceil(64)],
        }
    }

    pub fn ones(dim: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.flip_all();
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut v = Self::zeros(dim);
        for i in 0..dim {
            if f(i) {
                v.set(i, true);
            }
        }
        v
    }

    /// Low `dim` bits of `mask`, bit `i` giving coordinate `i`.
    pub fn from_mask(dim: usize, mask: u64) -> Self {
        assert!(dim <= 64);
        Self::from_fn(dim, |i| (mask >> i) & 1 == 1)
    }

    /// Inverse of [`BitVector::from_mask`]; `None` when `dim > 64`.
    pub fn to_mask(&self) -> Option<u64> {
        if self.dim > 64 {
            return None;
        }
        Some(self.words.first().copied().unwrap_or(0))
    }

    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let mut v = Self::zeros(dim);
        for w in &mut v.words {
            *w = rng.random();
        }
        v.clear_tail();
        v
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.dim, "bit index {i} out of range {}", self.dim);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        assert!(i < self.dim, "bit index {i} out of range {}", self.dim);
        let (w, o) = (i / 64, i % 64);
        if b {
            self.words[w] |= 1 << o;
        } else {
            self.words[w] &= !(1 << o);
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.dim);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn flip_all(&mut self) {
        for w in &mut self.words {
            *w = !*w;
        }
        self.clear_tail();
    }

    /// XOR accumulate; dimensions must agree.
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.dim, other.dim, "XOR of mismatched dimensions");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Inner product modulo 2.
    pub fn parity_dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.dim, other.dim);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ ((a & b).count_ones() & 1))
            == 1
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim).filter(|&i| self.get(i))
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn clear_tail(&mut self) {
        let used = self.dim % 64;
        if used != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << used) - 1;
            }
        }
        if self.dim == 0 {
            self.words.clear();
        }
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        for i in 0..self.dim {
            write!(f, "{}", if self.get(i) { 1 } else { 0 })?;
        }
        write!(f, ")")
    }
}

// ---------------------------------------------------------------------------
// Bipartition
// ---------------------------------------------------------------------------

/// Vertex bipartition encoded as a bit string: bit 0 puts a vertex in P,
/// bit 1 in Q.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Bipartition {
    bits: BitVector,
}

impl Bipartition {
    pub fn from_bits(bits: BitVector) -> Self {
        Bipartition { bits }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Bipartition {
            bits: BitVector::random(n, rng),
        }
    }

    pub fn dimension(&self) -> usize {
        self.bits.dimension()
    }

    /// True when the vertex is on the Q side.
    #[inline]
    pub fn on_q(&self, u: u32) -> bool {
        self.bits.get(u as usize)
    }

    /// True when the edge `{u, v}` crosses the bipartition.
    #[inline]
    pub fn crosses(&self, u: u32, v: u32) -> bool {
        self.on_q(u) != self.on_q(v)
    }

    pub fn bits(&self) -> &BitVector {
        &self.bits
    }

    pub fn side_sizes(&self) -> (usize, usize) {
        let q = self.bits.weight();
        (self.bits.dimension() - q, q)
    }
}

// ---------------------------------------------------------------------------
// MultiGraph
// ---------------------------------------------------------------------------

/// Labeled vertex set `[n]` with an edge multiset.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiGraph {
    n: usize,
    edges: BTreeMap<Edge, u32>,
    m: u64,
}

impl MultiGraph {
    pub fn new(n: usize) -> Self {
        MultiGraph {
            n,
            edges: BTreeMap::new(),
            m: 0,
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut g = Self::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: u32, v: u32) -> Result<()> {
        self.add_edge_with_multiplicity(u, v, 1)
    }

    pub fn add_edge_with_multiplicity(&mut self, u: u32, v: u32, count: u32) -> Result<()> {
        if u == v {
            return Err(Error::InvalidParameter(format!("self-loop at vertex {u}")));
        }
        if (u as usize) >= self.n || (v as usize) >= self.n {
            return Err(Error::InvalidParameter(format!(
                "edge ({u}, {v}) out of range for n = {}",
                self.n
            )));
        }
        if count == 0 {
            return Ok(());
        }
        let key = (u.min(v), u.max(v));
        *self.edges.entry(key).or_insert(0) += count;
        self.m += count as u64;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total edge count with multiplicity.
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn distinct_edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn multiplicity(&self, u: u32, v: u32) -> u32 {
        self.edges
            .get(&(u.min(v), u.max(v)))
            .copied()
            .unwrap_or(0)
    }

    pub fn is_simple(&self) -> bool {
        self.edges.values().all(|&c| c == 1)
    }

    /// Distinct edges with their multiplicities, in sorted pair order.
    pub fn edge_multiplicities(&self) -> impl Iterator<Item = (Edge, u32)> + '_ {
        self.edges.iter().map(|(&e, &c)| (e, c))
    }

    /// Every edge repeated `multiplicity` times, in sorted pair order.
    pub fn edges_expanded(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges
            .iter()
            .flat_map(|(&e, &c)| std::iter::repeat_n(e, c as usize))
    }

    /// Adjacency lists `(neighbor, multiplicity)` over distinct edges.
    pub fn adjacency(&self) -> Vec<Vec<(u32, u32)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (&(u, v), &c) in &self.edges {
            adj[u as usize].push((v, c));
            adj[v as usize].push((u, c));
        }
        adj
    }

    /// Incidence matrix over the expanded edge list (sorted pair order,
    /// parallel edges as separate rows).
    pub fn incidence(&self) -> IncidenceMatrix {
        IncidenceMatrix {
            n: self.n,
            rows: self.edges_expanded().collect(),
        }
    }

    pub fn component_count(&self) -> usize {
        component_labels(self).1
    }
}

/// Per-vertex component ids and the number of components.
pub(crate) fn component_labels(g: &MultiGraph) -> (Vec<usize>, usize) {
    let adj = g.adjacency();
    let mut label = vec![usize::MAX; g.n];
    let mut next = 0;
    let mut queue = Vec::new();
    for start in 0..g.n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = next;
        queue.push(start as u32);
        while let Some(u) = queue.pop() {
            for &(v, _) in &adj[u as usize] {
                if label[v as usize] == usize::MAX {
                    label[v as usize] = next;
                    queue.push(v);
                }
            }
        }
        next += 1;
    }
    (label, next)
}

// ---------------------------------------------------------------------------
// Cut oracles
// ---------------------------------------------------------------------------

/// Number of edges (with multiplicity) crossing the bipartition.
pub fn cut_value(g: &MultiGraph, x: &Bipartition) -> Result<u64> {
    if x.dimension() != g.n {
        return Err(Error::DimensionMismatch {
            expected: g.n,
            got: x.dimension(),
        });
    }
    Ok(g.edge_multiplicities()
        .filter(|&((u, v), _)| x.crosses(u, v))
        .map(|(_, c)| c as u64)
        .sum())
}

/// Exact max-cut by exhaustive search over `2^(n-1)` bipartitions
/// (vertex 0 fixed on side P). Ties break to the lexicographically
/// smallest witness.
pub fn max_cut_exact(g: &MultiGraph) -> Result<(u64, Bipartition)> {
    let n = g.n;
    if n > MAX_EXACT_VERTICES {
        return Err(Error::SizeLimit {
            what: "vertex count",
            value: n,
            limit: MAX_EXACT_VERTICES,
        });
    }
    if n <= 1 {
        return Ok((0, Bipartition::from_bits(BitVector::zeros(n))));
    }

    let adj = g.adjacency();
    // Gray-code walk: flipping one vertex updates the cut in O(deg).
    let mut side = vec![false; n];
    let mut cut: i64 = 0;
    let mut best: i64 = 0;
    let mut best_mask: u32 = 0;
    let mut mask: u32 = 0;
    let width = n - 1;
    let steps: u32 = 1 << width;
    for i in 1..steps {
        let bit = i.trailing_zeros() as usize;
        let v = bit + 1;
        let mut delta: i64 = 0;
        for &(u, c) in &adj[v] {
            if side[u as usize] == side[v] {
                delta += c as i64;
            } else {
                delta -= c as i64;
            }
        }
        side[v] = !side[v];
        cut += delta;
        mask ^= 1 << bit;
        if cut > best || (cut == best && lex_key(mask, width) < lex_key(best_mask, width)) {
            best = cut;
            best_mask = mask;
        }
    }

    let witness = Bipartition::from_bits(BitVector::from_fn(n, |i| {
        i > 0 && (best_mask >> (i - 1)) & 1 == 1
    }));
    Ok((best as u64, witness))
}

/// Key under which numeric order equals lexicographic order of the
/// witness string `x_1 .. x_(n-1)` (bit 0 of `mask` is `x_1`).
fn lex_key(mask: u32, width: usize) -> u32 {
    debug_assert!((1..=32).contains(&width));
    mask.reverse_bits() >> (32 - width)
}

/// A 2-coloring with every edge bichromatic, if one exists.
///
/// Isolated vertices land on side P. Parallel edges cannot create an odd
/// cycle, so multiplicity is irrelevant here.
pub fn is_bipartite(g: &MultiGraph) -> Option<Bipartition> {
    let adj = g.adjacency();
    let mut color: Vec<Option<bool>> = vec![None; g.n];
    let mut queue = std::collections::VecDeque::new();
    for start in 0..g.n {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        queue.push_back(start as u32);
        while let Some(u) = queue.pop_front() {
            let cu = color[u as usize].unwrap();
            for &(v, _) in &adj[u as usize] {
                match color[v as usize] {
                    None => {
                        color[v as usize] = Some(!cu);
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(Bipartition::from_bits(BitVector::from_fn(g.n, |i| {
        color[i].unwrap_or(false)
    })))
}

/// Number of connected components containing an odd cycle.
pub fn non_bipartite_component_count(g: &MultiGraph) -> usize {
    let adj = g.adjacency();
    let mut color: Vec<Option<bool>> = vec![None; g.n];
    let mut queue = std::collections::VecDeque::new();
    let mut odd = 0;
    for start in 0..g.n {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        queue.push_back(start as u32);
        let mut conflict = false;
        while let Some(u) = queue.pop_front() {
            let cu = color[u as usize].unwrap();
            for &(v, _) in &adj[u as usize] {
                match color[v as usize] {
                    None => {
                        color[v as usize] = Some(!cu);
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => conflict = true,
                    Some(_) => {}
                }
            }
        }
        if conflict {
            odd += 1;
        }
    }
    odd
}

/// Fraction of edges any bipartite subgraph must miss: `1 - maxcut/m`.
///
/// Always at most 1/2 since the max cut is at least `m/2`.
pub fn beta_distance(g: &MultiGraph) -> Result<Ratio<u64>> {
    if g.m == 0 {
        return Err(Error::Empty("graph has no edges"));
    }
    let (opt, _) = max_cut_exact(g)?;
    Ok(Ratio::new(g.m - opt, g.m))
}

/// Connected-component census: a component with `|C| - 1` induced edges is a
/// tree, with exactly `|C|` a unicyclic component, with more a complex one.
/// Multiplicity counts as distinct edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ComponentCounts {
    pub trees: usize,
    pub unicyclic: usize,
    pub complex: usize,
    /// Vertex count of the largest component.
    pub largest: usize,
}

impl ComponentCounts {
    pub fn total(&self) -> usize {
        self.trees + self.unicyclic + self.complex
    }
}

pub fn classify_components(g: &MultiGraph) -> ComponentCounts {
    let (label, count) = component_labels(g);
    let mut vertices = vec![0u64; count];
    let mut edges = vec![0u64; count];
    for l in &label {
        vertices[*l] += 1;
    }
    for (&(u, _), &c) in &g.edges {
        edges[label[u as usize]] += c as u64;
    }
    let mut out = ComponentCounts::default();
    for i in 0..count {
        out.largest = out.largest.max(vertices[i] as usize);
        if edges[i] + 1 == vertices[i] {
            out.trees += 1;
        } else if edges[i] == vertices[i] {
            out.unicyclic += 1;
        } else {
            out.complex += 1;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Incidence matrix
// ---------------------------------------------------------------------------

/// Edge incidence matrix over GF(2): one row per edge with ones at its two
/// endpoints. Row order fixes the edge-index correspondence for parity
/// vectors; it follows the insertion order of the edge list.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IncidenceMatrix {
    n: usize,
    rows: Vec<Edge>,
}

impl IncidenceMatrix {
    pub fn from_edges(n: usize, rows: Vec<Edge>) -> Result<Self> {
        for &(u, v) in &rows {
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at vertex {u}")));
            }
            if (u as usize) >= n || (v as usize) >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
        }
        Ok(IncidenceMatrix { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of rows (edges).
    pub fn r(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Edge] {
        &self.rows
    }

    /// `Mx` over GF(2): coordinate `e = {u, v}` is `x_u XOR x_v`, i.e. set
    /// iff the edge crosses the bipartition encoded by `x`.
    pub fn apply(&self, x: &BitVector) -> Result<BitVector> {
        if x.dimension() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.dimension(),
            });
        }
        Ok(BitVector::from_fn(self.rows.len(), |e| {
            let (u, v) = self.rows[e];
            x.get(u as usize) != x.get(v as usize)
        }))
    }

    /// `M^T s` over GF(2): coordinate `u` is the parity of the degree of `u`
    /// in the subgraph of edges selected by `s`.
    pub fn apply_transpose(&self, s: &BitVector) -> Result<BitVector> {
        if s.dimension() != self.rows.len() {
            return Err(Error::DimensionMismatch {
                expected: self.rows.len(),
                got: s.dimension(),
            });
        }
        let mut out = BitVector::zeros(self.n);
        for e in s.iter_ones() {
            let (u, v) = self.rows[e];
            out.flip(u as usize);
            out.flip(v as usize);
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Edge-list text format
// ---------------------------------------------------------------------------

/// Writes the shared edge-list format: `n m` on the first line, then one
/// `u v` line per edge (1-based), duplicates encoding multiplicity.
pub fn write_edge_list(g: &MultiGraph, w: &mut impl Write) -> Result<()> {
    writeln!(w, "{} {}", g.n(), g.m())?;
    for (u, v) in g.edges_expanded() {
        writeln!(w, "{} {}", u + 1, v + 1)?;
    }
    Ok(())
}

pub fn read_edge_list(r: impl BufRead) -> Result<MultiGraph> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or(Error::Format {
            what: "edge list",
            detail: "missing header line".into(),
        })??;
    let mut it = header.split_whitespace();
    let n: usize = parse_field(it.next(), "edge list", "n")?;
    let m: u64 = parse_field(it.next(), "edge list", "m")?;
    let mut g = MultiGraph::new(n);
    for line in lines {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut it = trimmed.split_whitespace();
        let u: u32 = parse_field(it.next(), "edge list", "u")?;
        let v: u32 = parse_field(it.next(), "edge list", "v")?;
        if u == 0 || v == 0 {
            return Err(Error::Format {
                what: "edge list",
                detail: "vertex labels are 1-based".into(),
            });
        }
        g.add_edge(u - 1, v - 1)?;
    }
    if g.m() != m {
        return Err(Error::Format {
            what: "edge list",
            detail: format!("header says m = {m}, found {}", g.m()),
        });
    }
    Ok(g)
}

pub fn edge_list_string(g: &MultiGraph) -> String {
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf).expect("write to Vec cannot fail");
    String::from_utf8(buf).expect("edge list is ASCII")
}

pub(crate) fn parse_field<T: std::str::FromStr>(
    tok: Option<&str>,
    what: &'static str,
    name: &str,
) -> Result<T> {
    tok.ok_or_else(|| Error::Format {
        what,
        detail: format!("missing field `{name}`"),
    })?
    .parse()
    .map_err(|_| Error::Format {
        what,
        detail: format!("field `{name}` is not a valid number"),
    })
}
