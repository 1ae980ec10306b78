//! Statistical helpers for the verification suites: chi-square
//! goodness-of-fit, two-sample comparison, exact reference PMFs, and the
//! sigma bands used by frequency checks.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Chi-square statistic of observed counts against expected counts.
/// `expected` must be strictly positive and of the same length.
pub fn chi_square_stat(observed: &[u64], expected: &[f64]) -> f64 {
    assert_eq!(observed.len(), expected.len());
    observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| {
            debug_assert!(e > 0.0);
            let d = o as f64 - e;
            d * d / e
        })
        .sum()
}

/// Upper-tail p-value of a chi-square statistic at `df` degrees of freedom.
pub fn chi_square_pvalue(stat: f64, df: f64) -> f64 {
    if df <= 0.0 {
        return 1.0;
    }
    let dist = ChiSquared::new(df).expect("positive degrees of freedom");
    1.0 - dist.cdf(stat)
}

/// Goodness-of-fit test of counts against a probability vector. Cells with
/// expected count below `min_expected` are pooled into their neighbor so the
/// chi-square approximation stays valid. Returns `(stat, df, p_value)`.
pub fn goodness_of_fit(observed: &[u64], probs: &[f64], min_expected: f64) -> (f64, f64, f64) {
    assert_eq!(observed.len(), probs.len());
    let n: u64 = observed.iter().sum();
    let mut obs_pooled: Vec<f64> = Vec::new();
    let mut exp_pooled: Vec<f64> = Vec::new();
    let mut acc_o = 0.0;
    let mut acc_e = 0.0;
    for (&o, &p) in observed.iter().zip(probs) {
        acc_o += o as f64;
        acc_e += n as f64 * p;
        if acc_e >= min_expected {
            obs_pooled.push(acc_o);
            exp_pooled.push(acc_e);
            acc_o = 0.0;
            acc_e = 0.0;
        }
    }
    if acc_e > 0.0 || acc_o > 0.0 {
        // Fold the remainder into the last cell.
        match exp_pooled.last_mut() {
            Some(last_e) => {
                *last_e += acc_e;
                *obs_pooled.last_mut().unwrap() += acc_o;
            }
            None => {
                exp_pooled.push(acc_e);
                obs_pooled.push(acc_o);
            }
        }
    }
    let stat: f64 = obs_pooled
        .iter()
        .zip(&exp_pooled)
        .map(|(&o, &e)| (o - e) * (o - e) / e)
        .sum();
    let df = (exp_pooled.len().max(2) - 1) as f64;
    (stat, df, chi_square_pvalue(stat, df))
}

/// Two-sample chi-square homogeneity test over shared cells.
/// Returns `(stat, df, p_value)`.
pub fn two_sample_chi_square(a: &[u64], b: &[u64]) -> (f64, f64, f64) {
    assert_eq!(a.len(), b.len());
    let na: f64 = a.iter().sum::<u64>() as f64;
    let nb: f64 = b.iter().sum::<u64>() as f64;
    let total = na + nb;
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (&oa, &ob) in a.iter().zip(b) {
        let pooled = (oa + ob) as f64;
        if pooled == 0.0 {
            continue;
        }
        cells += 1;
        let ea = na * pooled / total;
        let eb = nb * pooled / total;
        stat += (oa as f64 - ea).powi(2) / ea + (ob as f64 - eb).powi(2) / eb;
    }
    let df = (cells.max(2) - 1) as f64;
    (stat, df, chi_square_pvalue(stat, df))
}

/// Total variation distance between two probability vectors.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len());
    0.5 * p.iter().zip(q).map(|(&x, &y)| (x - y).abs()).sum::<f64>()
}

/// 3-sigma band for a binomial count over `n` trials at probability `p`.
pub fn three_sigma_count(n: u64, p: f64) -> f64 {
    3.0 * (n as f64 * p * (1.0 - p)).sqrt()
}

/// Exact integer binomial coefficient, for small reference PMFs.
fn choose_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    acc
}

/// Exact hypergeometric PMF `H(draws, type1, total)` over `0..=min(draws, type1)`,
/// computed from integer binomial coefficients.
pub fn hypergeometric_pmf(draws: u64, type1: u64, total: u64) -> Vec<f64> {
    let denom = choose_u128(total, draws) as f64;
    (0..=draws.min(type1))
        .map(|k| {
            (choose_u128(type1, k) as f64) * (choose_u128(total - type1, draws - k) as f64) / denom
        })
        .collect()
}

/// Exact binomial PMF `B(n, p)` over `0..=n`.
pub fn binomial_pmf(n: u64, p: f64) -> Vec<f64> {
    (0..=n)
        .map(|k| {
            choose_u128(n, k) as f64 * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
        })
        .collect()
}

/// Harmonic number `H_n = sum_{i=1..n} 1/i`.
pub fn harmonic(n: u64) -> f64 {
    (1..=n).map(|i| 1.0 / i as f64).sum()
}
