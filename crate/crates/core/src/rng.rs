//! Deterministic, splittable randomness and the sampling distributions used
//! by the samplers.
//!
//! The generator is counter-based: an engine is a 64-bit key plus a draw
//! counter, and every output is a hash of `(key, counter)`. Substreams are
//! derived by hashing the parent key with a path element, so a substream is a
//! pure function of `(master_seed, path)` and is independent of how many
//! draws the parent has made. This is what makes parallel code reproducible:
//! each task derives its own substream and the result does not depend on the
//! worker count.
//!
//! The mixing functions are SplitMix64-style finalizers (64-bit outputs of
//! full period per key). This is a statistical, non-cryptographic generator;
//! it passes the distribution suites shipped with this crate but must not be
//! used for secrets.

use std::collections::HashMap;
use std::fmt;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const ROOT_SALT: u64 = 0x6A09_E667_F3BC_C909;
const FORK_SPACE: u64 = 0x8000_0000_0000_0000;

/// SplitMix64 finalizer.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stafford "variant 13" finalizer; used for key derivation so that
/// substream keys and output streams go through different mixers.
#[inline]
fn mix64v(mut z: u64) -> u64 {
    z = (z ^ (z >> 31)).wrapping_mul(0x7FB5_D329_728E_A185);
    z = (z ^ (z >> 27)).wrapping_mul(0x81DA_DEF4_BC2D_D44D);
    z ^ (z >> 33)
}

/// Error cases for the distribution constructors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RngError {
    /// `uniform_int` called with an empty range `a > b`.
    EmptyRange { lo: u64, hi: u64 },
    /// A probability outside its valid interval.
    InvalidProbability(f64),
    /// A size parameter that must be positive was zero.
    ZeroSize,
    /// `skip_offset` requires the current age to be at least 1.
    ZeroSkipIndex,
    /// Hypergeometric parameters must satisfy `draws <= total` and `type1 <= total`.
    InvalidHypergeometric { draws: u64, type1: u64, total: u64 },
    /// Sampling without replacement needs `sample_size <= population`.
    SampleExceedsPopulation { sample_size: usize, population: usize },
    /// Sampling from an empty population.
    EmptyPopulation,
}

impl fmt::Display for RngError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RngError::EmptyRange { lo, hi } => write!(f, "empty range: [{lo}, {hi}]"),
            RngError::InvalidProbability(p) => write!(f, "probability {p} outside valid interval"),
            RngError::ZeroSize => write!(f, "size parameter must be positive"),
            RngError::ZeroSkipIndex => write!(f, "skip offset index must be at least 1"),
            RngError::InvalidHypergeometric { draws, type1, total } => {
                write!(f, "hypergeometric parameters out of range: H({draws}, {type1}, {total})")
            }
            RngError::SampleExceedsPopulation { sample_size, population } => {
                write!(f, "cannot draw {sample_size} distinct elements from {population}")
            }
            RngError::EmptyPopulation => write!(f, "population must be non-empty"),
        }
    }
}

impl std::error::Error for RngError {}

/// Number of elements skipped past the current age by a single-element
/// reservoir step; always at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SkipOffset(u64);

impl SkipOffset {
    pub fn get(self) -> u64 {
        self.0
    }
}

/// Deterministic splittable random engine.
///
/// Two engines derived with the same master seed and substream path produce
/// identical output sequences. `substream` derives a child purely from the
/// key; `fork` derives a child from the key and the current draw counter,
/// which gives a per-call fresh stream while staying reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomEngine {
    key: u64,
    counter: u64,
}

impl RandomEngine {
    pub fn new(master_seed: u64) -> Self {
        RandomEngine { key: mix64v(master_seed ^ ROOT_SALT), counter: 0 }
    }

    /// Derives the substream identified by `path`. Pure in the engine's key:
    /// the parent's draw counter does not influence the child.
    pub fn substream(&self, path: u64) -> Self {
        RandomEngine { key: mix64(self.key ^ mix64v(path.wrapping_add(GOLDEN))), counter: 0 }
    }

    /// Derives the substream at a multi-element path.
    pub fn substream_path(&self, path: &[u64]) -> Self {
        let mut engine = self.clone();
        for &p in path {
            engine = engine.substream(p);
        }
        engine
    }

    /// Derives a fresh child stream and advances this engine, so repeated
    /// forks yield distinct, reproducible children.
    pub fn fork(&mut self) -> Self {
        let ticket = self.counter;
        self.counter = self.counter.wrapping_add(1);
        self.substream(FORK_SPACE | ticket)
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform draw from `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        const DEN: f64 = (1u64 << 53) as f64;
        (self.next_u64() >> 11) as f64 / DEN
    }

    /// Uniform integer in the inclusive range `[a, b]`.
    ///
    /// Uses widening multiplication with rejection, so every value in the
    /// range is exactly equally likely.
    pub fn uniform_int(&mut self, a: u64, b: u64) -> Result<u64, RngError> {
        if a > b {
            return Err(RngError::EmptyRange { lo: a, hi: b });
        }
        let span = b.wrapping_sub(a).wrapping_add(1);
        if span == 0 {
            // Full 64-bit range.
            return Ok(self.next_u64());
        }
        let mut m = (self.next_u64() as u128) * (span as u128);
        let mut low = m as u64;
        if low < span {
            let threshold = span.wrapping_neg() % span;
            while low < threshold {
                m = (self.next_u64() as u128) * (span as u128);
                low = m as u64;
            }
        }
        Ok(a + (m >> 64) as u64)
    }

    /// Bernoulli draw: `true` (heads) with probability `p`, `0 < p <= 1`.
    pub fn coin_flip(&mut self, p: f64) -> Result<bool, RngError> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(RngError::InvalidProbability(p));
        }
        Ok(self.next_f64() < p)
    }

    /// Uniform permutation of the index set `0..s`.
    pub fn random_permutation(&mut self, s: usize) -> Result<Vec<usize>, RngError> {
        if s == 0 {
            return Err(RngError::ZeroSize);
        }
        let mut perm: Vec<usize> = (0..s).collect();
        // Fisher-Yates.
        for j in (1..s).rev() {
            let r = self.uniform_int(0, j as u64)? as usize;
            perm.swap(j, r);
        }
        Ok(perm)
    }

    /// Distance to the next sampled age after age `i` in a single-element
    /// reservoir walk: `P(Skip(i) <= k) = k / (i + k)`.
    pub fn skip_offset(&mut self, i: u64) -> Result<SkipOffset, RngError> {
        if i == 0 {
            return Err(RngError::ZeroSkipIndex);
        }
        // Open-interval uniform; values at the closed ends would degenerate
        // the inverse transform.
        let mut u = self.next_f64();
        while u <= 0.0 || u >= 1.0 - f64::EPSILON {
            u = self.next_f64();
        }
        Ok(SkipOffset(skip_from_uniform(u, i)))
    }

    /// Hypergeometric draw `H(draws, type1, total)`: the number of type-1
    /// balls obtained when drawing `draws` balls without replacement from an
    /// urn of `total` balls of which `type1` are type 1.
    ///
    /// Exact inversion of the CDF; the probability mass is walked from the
    /// lower end of the support with the term recurrence kept in log space.
    pub fn hypergeometric(&mut self, draws: u64, type1: u64, total: u64) -> Result<u64, RngError> {
        if draws > total || type1 > total {
            return Err(RngError::InvalidHypergeometric { draws, type1, total });
        }
        let k_min = draws.saturating_sub(total - type1);
        let k_max = draws.min(type1);
        if k_min == k_max {
            return Ok(k_min);
        }
        let u = self.next_f64();
        let (p, q, r) = (draws as f64, type1 as f64, total as f64);
        let k0 = k_min as f64;
        let mut ln_pmf = ln_choose(q, k0) + ln_choose(r - q, p - k0) - ln_choose(r, p);
        let mut cdf = ln_pmf.exp();
        let mut k = k_min;
        while k < k_max && cdf < u {
            let kf = k as f64;
            ln_pmf += (q - kf).ln() + (p - kf).ln() - (kf + 1.0).ln() - (r - q - p + kf + 1.0).ln();
            cdf += ln_pmf.exp();
            k += 1;
        }
        Ok(k)
    }

    /// Binomial draw `B(n, p)` by exact CDF inversion, with the probability
    /// terms kept in log space so large `n` cannot underflow the walk.
    pub fn binomial(&mut self, n: u64, p: f64) -> Result<u64, RngError> {
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return Err(RngError::InvalidProbability(p));
        }
        if n == 0 || p == 0.0 {
            return Ok(0);
        }
        if p == 1.0 {
            return Ok(n);
        }
        let u = self.next_f64();
        let nf = n as f64;
        let ln_p = p.ln();
        let ln_q = (1.0 - p).ln();
        let mut ln_pmf = nf * ln_q;
        let mut cdf = ln_pmf.exp();
        let mut k = 0u64;
        while k < n && cdf < u {
            let kf = k as f64;
            ln_pmf += (nf - kf).ln() + ln_p - (kf + 1.0).ln() - ln_q;
            cdf += ln_pmf.exp();
            k += 1;
        }
        Ok(k)
    }

    /// Ordered sample of `s` distinct indices from `0..n`, uniform over all
    /// `s`-permutations. Sparse Fisher-Yates over a map of displaced
    /// positions, so the cost is proportional to `s` rather than `n`.
    pub fn static_swor(&mut self, s: usize, n: usize) -> Result<Vec<usize>, RngError> {
        if s > n {
            return Err(RngError::SampleExceedsPopulation { sample_size: s, population: n });
        }
        let mut displaced: HashMap<usize, usize> = HashMap::with_capacity(2 * s);
        let mut out = Vec::with_capacity(s);
        for j in 0..s {
            let r = self.uniform_int(j as u64, (n - 1) as u64)? as usize;
            let picked = *displaced.get(&r).unwrap_or(&r);
            let at_j = *displaced.get(&j).unwrap_or(&j);
            out.push(picked);
            displaced.insert(r, at_j);
        }
        Ok(out)
    }

    /// Sample of `s` indices from `0..n` with replacement (independent
    /// uniform draws).
    pub fn static_swr(&mut self, s: usize, n: usize) -> Result<Vec<usize>, RngError> {
        if n == 0 {
            return Err(RngError::EmptyPopulation);
        }
        (0..s).map(|_| Ok(self.uniform_int(0, (n - 1) as u64)? as usize)).collect()
    }
}

/// Inverse-CDF step for the skip distribution: smallest `k >= 1` with
/// `k / (i + k) >= u`, i.e. `ceil(u * i / (1 - u))` clamped to at least 1.
pub fn skip_from_uniform(u: f64, i: u64) -> u64 {
    debug_assert!(u > 0.0 && u < 1.0);
    let k = (u * i as f64 / (1.0 - u)).ceil() as u64;
    k.max(1)
}

/// `ln C(n, k)` for real-valued arguments via the log-gamma function.
pub(crate) fn ln_choose(n: f64, k: f64) -> f64 {
    use statrs::function::gamma::ln_gamma;
    ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
}
