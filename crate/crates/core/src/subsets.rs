//! Maximal norms of subset sums `|sum_{j in A} t_j|` over nonempty `A`.
//!
//! For `N <= 20` terms every subset is enumerated. Sums are assembled from
//! two half-tables (`2^ceil(N/2)` and `2^floor(N/2)` entries), each entry built
//! by appending its highest term to a smaller entry, so every subset sum is
//! reproducible bit for bit regardless of thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{BoundMethod, BoundPair, SamplingOptions};
use crate::error::{FrameError, Result};
use crate::spaces::NormedSpace;

pub const DEFAULT_SUBSET_LIMIT: usize = 20;

/// Relative slack under which two subset values count as tied.
const TIE_TOL: f64 = 1e-12;

/// Exhaustive or sampled subset search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubsetMode {
    Exact { limit: usize },
    Sampled(SamplingOptions),
}

impl Default for SubsetMode {
    fn default() -> Self {
        SubsetMode::Exact { limit: DEFAULT_SUBSET_LIMIT }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetSup {
    pub value: BoundPair,
    /// Zero-based indices of a maximizing subset: smallest size first, then
    /// lexicographically smallest.
    pub witness: Vec<usize>,
    /// `tail[k]` is the maximum over subsets whose smallest index is `>= k`;
    /// `tail[N] = 0`. Empty in sampled mode.
    pub tail: Vec<f64>,
}

/// `true` when subset `a` precedes `b` (smaller size, then lexicographic).
fn precedes(a: u64, b: u64) -> bool {
    let (ca, cb) = (a.count_ones(), b.count_ones());
    if ca != cb {
        return ca < cb;
    }
    let diff = a ^ b;
    diff != 0 && a & (diff & diff.wrapping_neg()) != 0
}

fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

fn half_table(terms: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    let mut table = vec![vec![0.0; dim]; 1 << terms.len()];
    for mask in 1usize..table.len() {
        let top = usize::BITS - 1 - mask.leading_zeros();
        let prev = mask ^ (1 << top);
        let mut s = table[prev].clone();
        for (x, t) in s.iter_mut().zip(&terms[top as usize]) {
            *x += t;
        }
        table[mask] = s;
    }
    table
}

/// Enumerates all nonempty subsets.
pub fn subset_sup_exact(space: &NormedSpace, terms: &[Vec<f64>], limit: usize) -> Result<SubsetSup> {
    let n = terms.len();
    if n > limit.min(30) {
        return Err(FrameError::DimensionTooLarge { what: "number of terms", size: n, limit: limit.min(30) });
    }
    if n == 0 {
        return Err(FrameError::EmptyInput("subset enumeration needs at least one term"));
    }
    let dim = space.dim();
    let low_bits = n.div_ceil(2);
    let low = half_table(&terms[..low_bits], dim);
    let high = half_table(&terms[low_bits..], dim);
    let low_mask = (1u64 << low_bits) - 1;

    let value_of = |mask: u64, buf: &mut Vec<f64>| {
        let (l, h) = ((mask & low_mask) as usize, (mask >> low_bits) as usize);
        for ((b, x), y) in buf.iter_mut().zip(&low[l]).zip(&high[h]) {
            *b = x + y;
        }
        space.norm_of(buf)
    };

    // every subset value, laid out by mask; chunks follow the high half-table
    let chunk = 1usize << low_bits;
    let mut values = vec![0.0_f64; chunk * high.len()];
    values.par_chunks_mut(chunk).enumerate().for_each(|(h, out)| {
        let mut buf = vec![0.0; dim];
        for (l, v) in out.iter_mut().enumerate() {
            let mask = l as u64 | ((h as u64) << low_bits);
            if mask != 0 {
                *v = value_of(mask, &mut buf);
            }
        }
    });

    let mut by_min = vec![0.0_f64; n];
    for (mask, &v) in values.iter().enumerate().skip(1) {
        let m = mask.trailing_zeros() as usize;
        if v > by_min[m] {
            by_min[m] = v;
        }
    }
    let mut tail = vec![0.0_f64; n + 1];
    for k in (0..n).rev() {
        tail[k] = tail[k + 1].max(by_min[k]);
    }
    let best = tail[0];
    let cutoff = best - TIE_TOL * best.max(1.0);

    // preferred subset among the (near) maximizers
    let mut witness: Option<u64> = None;
    for (mask, &v) in values.iter().enumerate().skip(1) {
        let mask = mask as u64;
        if v >= cutoff && witness.is_none_or(|w| precedes(mask, w)) {
            witness = Some(mask);
        }
    }
    let witness = witness.unwrap_or(1);

    Ok(SubsetSup { value: BoundPair::exact(best, BoundMethod::Enumeration), witness: mask_indices(witness), tail })
}

/// Random subsets plus every prefix for the lower bound; the triangle
/// inequality `sum_j |t_j|` for the upper bound.
pub fn subset_sup_sampled(space: &NormedSpace, terms: &[Vec<f64>], opts: &SamplingOptions) -> Result<SubsetSup> {
    let n = terms.len();
    if n == 0 {
        return Err(FrameError::EmptyInput("subset search needs at least one term"));
    }
    let dim = space.dim();
    let mut candidates: Vec<Vec<bool>> = (1..=n).map(|k| (0..n).map(|j| j < k).collect()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.probes.max(1) * n {
        candidates.push((0..n).map(|_| rng.random_bool(0.5)).collect());
    }
    let mut best = -1.0;
    let mut witness = Vec::new();
    for sel in &candidates {
        let mut s = vec![0.0; dim];
        let mut idx = Vec::new();
        for (j, &on) in sel.iter().enumerate() {
            if on {
                idx.push(j);
                for (x, t) in s.iter_mut().zip(&terms[j]) {
                    *x += t;
                }
            }
        }
        if idx.is_empty() {
            continue;
        }
        let v = space.norm_of(&s);
        if v > best {
            best = v;
            witness = idx;
        }
    }
    let upper: f64 = terms.iter().map(|t| space.norm_of(t)).sum();
    Ok(SubsetSup {
        value: BoundPair::new(best, BoundMethod::Sampled, upper.max(best), BoundMethod::PrefixSum),
        witness,
        tail: Vec::new(),
    })
}

pub fn subset_sup(space: &NormedSpace, terms: &[Vec<f64>], mode: SubsetMode) -> Result<SubsetSup> {
    match mode {
        SubsetMode::Exact { limit } => subset_sup_exact(space, terms, limit),
        SubsetMode::Sampled(opts) => subset_sup_sampled(space, terms, &opts),
    }
}
