//! Exact small-n boolean Fourier analysis and distribution identities.
//!
//! Works over indicator sets `A` of `{0,1}^n` with the normalization
//! `f_hat(v) = 2^-n * sum_x f(x) (-1)^(x.v)`, the induced distribution
//! `p_M(z) = |{x in A : Mx = z}| / |A|` for an edge incidence matrix `M`,
//! and total-variation identities over explicit probability tables.
//! Everything here is exact up to f64 rounding; enumeration caps are hard
//! errors rather than silent sampling.

use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::dist::sample_gnp;
use crate::graph::{BitVector, IncidenceMatrix};
use crate::{Error, Result};

/// Fourier tables hold `2^n` coefficients; beyond this we refuse.
pub const MAX_FOURIER_DIM: usize = 20;
/// Solution enumeration walks `2^r` selections; beyond this we refuse.
pub const MAX_SOLUTION_EDGES: usize = 20;

const PROB_SUM_TOL: f64 = 1e-9;

// ---------------------------------------------------------------------------
// Indicator sets
// ---------------------------------------------------------------------------

/// Nonempty subset of `{0,1}^n` with a membership table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorSet {
    n: usize,
    bits: Vec<bool>,
    size: usize,
}

impl IndicatorSet {
    pub fn from_bools(n: usize, bits: Vec<bool>) -> Result<Self> {
        if n > MAX_FOURIER_DIM {
            return Err(Error::SizeLimit {
                what: "indicator dimension",
                value: n,
                limit: MAX_FOURIER_DIM,
            });
        }
        if bits.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                got: bits.len(),
            });
        }
        let size = bits.iter().filter(|&&b| b).count();
        if size == 0 {
            return Err(Error::Empty("indicator set"));
        }
        Ok(IndicatorSet { n, bits, size })
    }

    pub fn from_predicate(n: usize, pred: impl Fn(usize) -> bool) -> Result<Self> {
        if n > MAX_FOURIER_DIM {
            return Err(Error::SizeLimit {
                what: "indicator dimension",
                value: n,
                limit: MAX_FOURIER_DIM,
            });
        }
        Self::from_bools(n, (0..1usize << n).map(pred).collect())
    }

    pub fn full(n: usize) -> Result<Self> {
        Self::from_predicate(n, |_| true)
    }

    /// Uniformly random nonempty subset (every mask kept with probability
    /// 1/2, resampled while empty).
    pub fn random_nonempty<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        loop {
            let bits: Vec<bool> = (0..1usize << n).map(|_| rng.random_bool(0.5)).collect();
            if bits.iter().any(|&b| b) {
                return Self::from_bools(n, bits);
            }
        }
    }

    /// Uniformly random subset of exactly `size` elements.
    pub fn random_with_size<R: Rng + ?Sized>(n: usize, size: usize, rng: &mut R) -> Result<Self> {
        let space = 1usize << n;
        if size == 0 || size > space {
            return Err(Error::InvalidParameter(format!(
                "subset size {size} out of range for 2^{n}"
            )));
        }
        let mut masks: Vec<usize> = (0..space).collect();
        let (chosen, _) = masks.partial_shuffle(rng, size);
        let mut bits = vec![false; space];
        for &m in chosen.iter() {
            bits[m] = true;
        }
        Self::from_bools(n, bits)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn contains(&self, mask: usize) -> bool {
        self.bits[mask]
    }

    /// `c' = n - log2 |A|`, the effective message length of the set.
    pub fn c_prime(&self) -> f64 {
        self.n as f64 - (self.size as f64).log2()
    }
}

// ---------------------------------------------------------------------------
// Walsh-Hadamard transform
// ---------------------------------------------------------------------------

/// In-place butterfly; length must be a power of two.
pub(crate) fn wht_inplace(a: &mut [f64]) {
    debug_assert!(a.len().is_power_of_two() || a.len() <= 1);
    let n = a.len();
    let mut h = 1;
    while h < n {
        let mut i = 0;
        while i < n {
            for j in i..i + h {
                let x = a[j];
                let y = a[j + h];
                a[j] = x + y;
                a[j + h] = x - y;
            }
            i += 2 * h;
        }
        h *= 2;
    }
}

/// Fourier coefficients of a set indicator, all `2^n` of them.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierTable {
    n: usize,
    coeffs: Vec<f64>,
}

impl FourierTable {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn coeff(&self, v: usize) -> f64 {
        self.coeffs[v]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `sum_v f_hat(v)^2`; Parseval makes it `2^-n sum_x f(x)^2`.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }
}

/// Exact Fourier table of the indicator of `A`; `f_hat(0) = |A| / 2^n`.
pub fn indicator_fourier(a: &IndicatorSet) -> FourierTable {
    let mut table: Vec<f64> = (0..1usize << a.n())
        .map(|x| a.contains(x) as u8 as f64)
        .collect();
    wht_inplace(&mut table);
    let scale = 1.0 / (1usize << a.n()) as f64;
    for c in &mut table {
        *c *= scale;
    }
    FourierTable {
        n: a.n(),
        coeffs: table,
    }
}

// ---------------------------------------------------------------------------
// Discrete distributions and total variation distance
// ---------------------------------------------------------------------------

/// Explicit probability table over a small finite outcome space.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    probs: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Empty("probability table"));
        }
        if probs.iter().any(|&p| p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidParameter(
                "probability table has a negative or non-finite entry".into(),
            ));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidParameter(format!(
                "probability table sums to {sum}, not 1"
            )));
        }
        Ok(DiscreteDistribution { probs })
    }

    pub fn uniform(len: usize) -> Self {
        DiscreteDistribution {
            probs: vec![1.0 / len as f64; len.max(1)],
        }
    }

    pub fn point_mass(len: usize, at: usize) -> Self {
        let mut probs = vec![0.0; len.max(1)];
        probs[at] = 1.0;
        DiscreteDistribution { probs }
    }

    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::Empty("count table"));
        }
        Ok(DiscreteDistribution {
            probs: counts.iter().map(|&c| c as f64 / total as f64).collect(),
        })
    }

    /// Counts with `pseudo` added to every cell before normalizing.
    pub fn from_counts_smoothed(counts: &[u64], pseudo: f64) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 && pseudo <= 0.0 {
            return Err(Error::Empty("count table"));
        }
        let denom = total as f64 + pseudo * counts.len() as f64;
        Ok(DiscreteDistribution {
            probs: counts.iter().map(|&c| (c as f64 + pseudo) / denom).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    #[inline]
    pub fn prob(&self, i: usize) -> f64 {
        self.probs[i]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// Total variation distance: half the l1 distance between the tables.
pub fn tvd(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    Ok(p.probs
        .iter()
        .zip(&q.probs)
        .map(|(a, b)| (a - b).abs())
        .sum::<f64>()
        / 2.0)
}

/// The event-maximization form `max_A (p(A) - q(A))`, for cross-checking the
/// half-l1 definition on small spaces.
pub fn tvd_by_events(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    Ok(p.probs
        .iter()
        .zip(&q.probs)
        .map(|(a, b)| (a - b).max(0.0))
        .sum())
}

// ---------------------------------------------------------------------------
// The p_M distribution and its Fourier identity
// ---------------------------------------------------------------------------

/// `p_M(z) = |{x in A : Mx = z}| / |A|`, exact by enumeration of `A`.
pub fn p_m_exact(a: &IndicatorSet, m: &IncidenceMatrix) -> Result<DiscreteDistribution> {
    if m.n() != a.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            got: m.n(),
        });
    }
    let r = m.r();
    if r > MAX_FOURIER_DIM {
        return Err(Error::SizeLimit {
            what: "edge count",
            value: r,
            limit: MAX_FOURIER_DIM,
        });
    }
    let rows = m.rows();
    let mut counts = vec![0u64; 1 << r];
    for x in 0..1usize << a.n() {
        if !a.contains(x) {
            continue;
        }
        let mut z = 0usize;
        for (e, &(u, v)) in rows.iter().enumerate() {
            z |= (((x >> u) ^ (x >> v)) & 1) << e;
        }
        counts[z] += 1;
    }
    DiscreteDistribution::from_counts(&counts)
}

/// `M^T s` as an n-bit mask, for every `s` in `{0,1}^r`.
fn transpose_images(m: &IncidenceMatrix) -> Vec<u32> {
    let row_mask: Vec<u32> = m.rows().iter().map(|&(u, v)| (1 << u) | (1 << v)).collect();
    let mut images = vec![0u32; 1 << m.r()];
    for s in 1..images.len() {
        let low = s.trailing_zeros() as usize;
        images[s] = images[s & (s - 1)] ^ row_mask[low];
    }
    images
}

/// Max absolute error of `p_M_hat(s) = 2^n / (|A| 2^r) * f_hat(M^T s)` over
/// all `s`. The identity is exact, so only rounding shows up.
pub fn fourier_identity_check(a: &IndicatorSet, m: &IncidenceMatrix) -> Result<f64> {
    let p = p_m_exact(a, m)?;
    let r = m.r();
    let mut p_hat: Vec<f64> = p.probs().to_vec();
    wht_inplace(&mut p_hat);
    let rn = (1usize << r) as f64;
    for c in &mut p_hat {
        *c /= rn;
    }
    let f_hat = indicator_fourier(a);
    let images = transpose_images(m);
    let scale = (1usize << a.n()) as f64 / (a.size() as f64 * rn);
    let mut worst: f64 = 0.0;
    for s in 0..1usize << r {
        let rhs = scale * f_hat.coeff(images[s] as usize);
        worst = worst.max((p_hat[s] - rhs).abs());
    }
    Ok(worst)
}

/// The three quantities of the distance-to-uniform chain:
/// `lhs = tvd(p_M, U_r)^2`, `mid = 2^r * ||p_M - U_r||_2^2`, and
/// `rhs = 2^(2n)/|A|^2 * sum_{s != 0} f_hat(M^T s)^2`.
///
/// Cauchy-Schwarz gives `lhs <= mid`; Parseval makes `mid = rhs` exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TvdChain {
    pub lhs: f64,
    pub mid: f64,
    pub rhs: f64,
}

pub fn tvd_bound_chain(a: &IndicatorSet, m: &IncidenceMatrix) -> Result<TvdChain> {
    let p = p_m_exact(a, m)?;
    let r = m.r();
    let u = 1.0 / (1usize << r) as f64;
    let lhs = tvd(&p, &DiscreteDistribution::uniform(1 << r))?.powi(2);
    let mid = (1usize << r) as f64
        * p.probs().iter().map(|&x| (x - u) * (x - u)).sum::<f64>();
    let f_hat = indicator_fourier(a);
    let images = transpose_images(m);
    let norm = (1usize << a.n()) as f64 / a.size() as f64;
    let rhs = norm
        * norm
        * images[1..]
            .iter()
            .map(|&v| {
                let c = f_hat.coeff(v as usize);
                c * c
            })
            .sum::<f64>();
    Ok(TvdChain { lhs, mid, rhs })
}

/// Average of `tvd(p_M, U_r)^2` over random `G(n, alpha/n)` incidence
/// matrices.
pub fn mean_distance_to_uniform<R: Rng + ?Sized>(
    a: &IndicatorSet,
    alpha: f64,
    trials: usize,
    rng: &mut R,
) -> Result<f64> {
    let mut total = 0.0;
    for _ in 0..trials {
        let g = sample_gnp(a.n(), alpha, rng)?;
        let m = g.incidence();
        if m.r() > MAX_FOURIER_DIM {
            return Err(Error::SizeLimit {
                what: "edge count",
                value: m.r(),
                limit: MAX_FOURIER_DIM,
            });
        }
        let p = p_m_exact(a, &m)?;
        total += tvd(&p, &DiscreteDistribution::uniform(1 << m.r()))?.powi(2);
    }
    Ok(total / trials.max(1) as f64)
}

// ---------------------------------------------------------------------------
// Weight-class mass bound
// ---------------------------------------------------------------------------

/// Normalized Fourier mass at weight `ell` together with its bound
/// `(4 sqrt 2 c' / ell)^ell`, valid for `1 <= ell <= 4 c'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightMass {
    pub mass: f64,
    pub bound: f64,
}

pub fn weight_mass_check(a: &IndicatorSet, ell: usize) -> Result<WeightMass> {
    let c_prime = a.c_prime();
    if ell < 1 || (ell as f64) > 4.0 * c_prime {
        return Err(Error::InvalidParameter(format!(
            "weight class {ell} outside [1, 4c'] with c' = {c_prime:.4}"
        )));
    }
    let f_hat = indicator_fourier(a);
    let norm = (1usize << a.n()) as f64 / a.size() as f64;
    let mass = norm
        * norm
        * (0..1usize << a.n())
            .filter(|v| v.count_ones() as usize == ell)
            .map(|v| {
                let c = f_hat.coeff(v);
                c * c
            })
            .sum::<f64>();
    let bound = (4.0 * std::f64::consts::SQRT_2 * c_prime / ell as f64).powi(ell as i32);
    Ok(WeightMass { mass, bound })
}

// ---------------------------------------------------------------------------
// Solutions of M^T s = v
// ---------------------------------------------------------------------------

/// One solution of `M^T s = v`: the edge-selection mask and whether the
/// selected subgraph is a union of edge-disjoint paths (no cycle).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GfSolution {
    pub mask: u32,
    pub path_type: bool,
}

/// Enumerates all `s` with `M^T s = v` by walking `{0,1}^r`.
///
/// Every solution's selected subgraph has odd degree exactly on the support
/// of `v`, hence decomposes into paths pairing the ones of `v` plus cycles;
/// `path_type` marks the cycle-free ones. Odd-weight `v` admits no solution.
pub fn solutions_of(m: &IncidenceMatrix, v: &BitVector) -> Result<Vec<GfSolution>> {
    if v.dimension() != m.n() {
        return Err(Error::DimensionMismatch {
            expected: m.n(),
            got: v.dimension(),
        });
    }
    if m.r() > MAX_SOLUTION_EDGES {
        return Err(Error::SizeLimit {
            what: "edge count",
            value: m.r(),
            limit: MAX_SOLUTION_EDGES,
        });
    }
    if m.n() > 32 {
        return Err(Error::SizeLimit {
            what: "vertex count",
            value: m.n(),
            limit: 32,
        });
    }
    let target: u32 = v.iter_ones().fold(0, |acc, i| acc | (1 << i));
    let images = transpose_images(m);
    let mut out = Vec::new();
    for (s, &img) in images.iter().enumerate() {
        if img != target {
            continue;
        }
        debug_assert_eq!(odd_degree_mask(m, s as u32), target);
        out.push(GfSolution {
            mask: s as u32,
            path_type: selection_is_acyclic(m, s as u32),
        });
    }
    Ok(out)
}

/// Number of nonzero path-type solutions of `M^T s = v`.
pub fn count_path_solutions(m: &IncidenceMatrix, v: &BitVector) -> Result<u64> {
    Ok(solutions_of(m, v)?
        .iter()
        .filter(|s| s.mask != 0 && s.path_type)
        .count() as u64)
}

fn odd_degree_mask(m: &IncidenceMatrix, s: u32) -> u32 {
    let mut acc = 0u32;
    for (e, &(u, v)) in m.rows().iter().enumerate() {
        if (s >> e) & 1 == 1 {
            acc ^= (1 << u) | (1 << v);
        }
    }
    acc
}

fn selection_is_acyclic(m: &IncidenceMatrix, s: u32) -> bool {
    let mut parent: Vec<u32> = (0..m.n() as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            let p = parent[x as usize];
            parent[x as usize] = parent[p as usize];
            x = parent[x as usize];
        }
        x
    }
    for (e, &(u, v)) in m.rows().iter().enumerate() {
        if (s >> e) & 1 == 0 {
            continue;
        }
        let ru = find(&mut parent, u);
        let rv = find(&mut parent, v);
        if ru == rv {
            return false;
        }
        parent[ru as usize] = rv;
    }
    true
}

/// Mean number of path-type solutions of `M^T s = v` for a fixed `v` of even
/// weight `ell` (the lowest `ell` coordinates), over random `G(n, alpha/n)`.
pub fn representation_count_mc<R: Rng + ?Sized>(
    n: usize,
    alpha: f64,
    ell: usize,
    trials: usize,
    rng: &mut R,
) -> Result<f64> {
    if !ell.is_multiple_of(2) || ell < 2 || ell > n {
        return Err(Error::InvalidParameter(format!(
            "representation counts need even 2 <= ell <= n, got {ell}"
        )));
    }
    let v = BitVector::from_fn(n, |i| i < ell);
    let mut total = 0u64;
    for _ in 0..trials {
        let g = sample_gnp(n, alpha, rng)?;
        total += count_path_solutions(&g.incidence(), &v)?;
    }
    Ok(total as f64 / trials.max(1) as f64)
}

// ---------------------------------------------------------------------------
// Likelihood test, conditional TVD, post-processing
// ---------------------------------------------------------------------------

/// Exact advantage over random guessing of the rule "YES iff p(w) > q(w)"
/// on the equal-prior mixture, together with `tvd(p, q) / 2`. With ties
/// resolved against YES the two are equal.
pub fn likelihood_test_advantage(
    p: &DiscreteDistribution,
    q: &DiscreteDistribution,
) -> Result<(f64, f64)> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    let correct: f64 = p
        .probs()
        .iter()
        .zip(q.probs())
        .map(|(&a, &b)| if a > b { a } else { b } / 2.0)
        .sum();
    Ok((correct - 0.5, tvd(p, q)? / 2.0))
}

/// Joint distribution over a product space, row-major in `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    nx: usize,
    ny: usize,
    probs: Vec<f64>,
}

impl JointDistribution {
    pub fn new(nx: usize, ny: usize, probs: Vec<f64>) -> Result<Self> {
        if nx == 0 || ny == 0 || probs.len() != nx * ny {
            return Err(Error::DimensionMismatch {
                expected: nx * ny,
                got: probs.len(),
            });
        }
        if probs.iter().any(|&p| p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidParameter(
                "joint table has a negative or non-finite entry".into(),
            ));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidParameter(format!(
                "joint table sums to {sum}, not 1"
            )));
        }
        Ok(JointDistribution { nx, ny, probs })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    #[inline]
    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.probs[x * self.ny + y]
    }

    pub fn x_marginal(&self) -> Vec<f64> {
        (0..self.nx)
            .map(|x| (0..self.ny).map(|y| self.prob(x, y)).sum())
            .collect()
    }
}

/// Checks `tvd((X,Y1), (X,Y2)) = E_X[tvd(Y1|X, Y2|X)]` for two joints with
/// a common X-marginal; returns `(lhs, rhs)`.
pub fn conditional_tvd_check(
    a: &JointDistribution,
    b: &JointDistribution,
) -> Result<(f64, f64)> {
    if a.nx != b.nx || a.ny != b.ny {
        return Err(Error::DimensionMismatch {
            expected: a.nx * a.ny,
            got: b.nx * b.ny,
        });
    }
    let ma = a.x_marginal();
    let mb = b.x_marginal();
    if ma
        .iter()
        .zip(&mb)
        .any(|(x, y)| (x - y).abs() > 1e-12)
    {
        return Err(Error::InvalidParameter(
            "joint distributions must share the X-marginal".into(),
        ));
    }
    let lhs: f64 = a
        .probs
        .iter()
        .zip(&b.probs)
        .map(|(x, y)| (x - y).abs())
        .sum::<f64>()
        / 2.0;
    let mut rhs = 0.0;
    for (x, &px) in ma.iter().enumerate() {
        if px <= 0.0 {
            continue;
        }
        let cond: f64 = (0..a.ny)
            .map(|y| (a.prob(x, y) / px - b.prob(x, y) / px).abs())
            .sum::<f64>()
            / 2.0;
        rhs += px * cond;
    }
    Ok((lhs, rhs))
}

/// Checks the data-processing inequality
/// `tvd(f(X, W), f(Y, W)) <= tvd(X, Y)` for `W` independent of both;
/// returns `(lhs, rhs)`. `f` is a table indexed `[x or y][w]`.
pub fn postprocessing_check(
    x: &DiscreteDistribution,
    y: &DiscreteDistribution,
    w: &DiscreteDistribution,
    f: &[Vec<usize>],
) -> Result<(f64, f64)> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    if f.len() != x.len() || f.iter().any(|row| row.len() != w.len()) {
        return Err(Error::DimensionMismatch {
            expected: x.len() * w.len(),
            got: f.iter().map(Vec::len).sum(),
        });
    }
    let out_size = f
        .iter()
        .flat_map(|row| row.iter())
        .max()
        .map(|&m| m + 1)
        .unwrap_or(1);
    let push = |d: &DiscreteDistribution| -> Vec<f64> {
        let mut out = vec![0.0; out_size];
        for (i, row) in f.iter().enumerate() {
            for (j, &o) in row.iter().enumerate() {
                out[o] += d.prob(i) * w.prob(j);
            }
        }
        out
    };
    let px = push(x);
    let py = push(y);
    let lhs = px
        .iter()
        .zip(&py)
        .map(|(a, b)| (a - b).abs())
        .sum::<f64>()
        / 2.0;
    Ok((lhs, tvd(x, y)?))
}

// ---------------------------------------------------------------------------
// Indicator bitmask file
// ---------------------------------------------------------------------------

/// Writes `n` on the first line, then `2^n` membership bits one per line.
pub fn write_indicator(a: &IndicatorSet, w: &mut impl Write) -> Result<()> {
    writeln!(w, "{}", a.n())?;
    for mask in 0..1usize << a.n() {
        writeln!(w, "{}", a.contains(mask) as u8)?;
    }
    Ok(())
}

/// Reads the bitmask format: `n`, then either `2^n` single-bit lines or a
/// packed hex string (4 masks per character, highest bit first).
pub fn read_indicator(r: impl BufRead) -> Result<IndicatorSet> {
    let mut tokens = Vec::new();
    for line in r.lines() {
        let line = line?;
        for tok in line.split_whitespace() {
            tokens.push(tok.to_string());
        }
    }
    let mut it = tokens.into_iter();
    let n: usize = it
        .next()
        .ok_or(Error::Format {
            what: "indicator file",
            detail: "missing dimension".into(),
        })?
        .parse()
        .map_err(|_| Error::Format {
            what: "indicator file",
            detail: "dimension is not a number".into(),
        })?;
    if n > MAX_FOURIER_DIM {
        return Err(Error::SizeLimit {
            what: "indicator dimension",
            value: n,
            limit: MAX_FOURIER_DIM,
        });
    }
    let rest: Vec<String> = it.collect();
    let space = 1usize << n;
    let is_bits = rest.len() == space && rest.iter().all(|t| t == "0" || t == "1");
    let bits = if is_bits {
        rest.iter().map(|t| t == "1").collect()
    } else {
        let hex: String = rest.concat();
        if hex.len() * 4 != space {
            return Err(Error::Format {
                what: "indicator file",
                detail: format!(
                    "expected {space} bit lines or {} hex characters, got {} tokens",
                    space / 4,
                    rest.len()
                ),
            });
        }
        let mut bits = Vec::with_capacity(space);
        for ch in hex.chars() {
            let nibble = ch.to_digit(16).ok_or_else(|| Error::Format {
                what: "indicator file",
                detail: format!("invalid hex character `{ch}`"),
            })?;
            for k in (0..4).rev() {
                bits.push((nibble >> k) & 1 == 1);
            }
        }
        bits
    };
    IndicatorSet::from_bools(n, bits)
}

pub fn indicator_string(a: &IndicatorSet) -> String {
    let mut buf = Vec::new();
    write_indicator(a, &mut buf).expect("write to Vec cannot fail");
    String::from_utf8(buf).expect("indicator text is ASCII")
}
