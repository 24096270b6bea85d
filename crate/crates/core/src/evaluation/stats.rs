//! Exact two-sided Wilcoxon tests for small samples.
//!
//! Ranks are midranks, doubled so that the null distribution of the rank sum
//! can be tabulated over integers.

use std::cmp::Ordering;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest sample size for which exact p-values are computed.
pub const MAX_EXACT_N: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WilcoxonVariant {
    /// Signed-rank test on per-seed differences.
    #[default]
    Paired,
    /// Rank-sum test treating the samples as independent.
    Unpaired,
}

impl FromStr for WilcoxonVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paired" => Ok(Self::Paired),
            "unpaired" => Ok(Self::Unpaired),
            _ => Err(Error::InvalidParameter(format!(
                "wilcoxon variant `{s}`; expected paired or unpaired"
            ))),
        }
    }
}

impl WilcoxonVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Paired => "paired",
            Self::Unpaired => "unpaired",
        }
    }

    pub fn p_value(self, a: &[f64], b: &[f64]) -> Result<f64> {
        match self {
            Self::Paired => wilcoxon_signed_rank(a, b),
            Self::Unpaired => wilcoxon_rank_sum(a, b),
        }
    }
}

/// Midranks of `values` (1-based), times two.
fn doubled_midranks(values: &[f64]) -> Vec<u64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap_or(Ordering::Equal));
    let mut ranks = vec![0u64; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // Positions i..=j share rank (i+1 + j+1)/2.
        let doubled = (i + j + 2) as u64;
        for &k in &order[i..=j] {
            ranks[k] = doubled;
        }
        i = j + 1;
    }
    ranks
}

/// `P(|S - mean| >= |observed - mean|)` given counts of each value of `S`.
fn two_sided(counts: &[f64], observed: u64, mean2: u64) -> f64 {
    // Work with 2 * (s - mean) to stay in integers: `mean2` is twice the mean.
    let dev = (2 * observed).abs_diff(mean2);
    let total: f64 = counts.iter().sum();
    let tail: f64 = counts
        .iter()
        .enumerate()
        .filter(|(s, _)| (2 * *s as u64).abs_diff(mean2) >= dev)
        .map(|(_, c)| c)
        .sum();
    (tail / total).min(1.0)
}

/// Exact paired signed-rank test. Zero differences are dropped; if none
/// remain, `p = 1`.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(format!(
            "paired samples differ in length: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.len() > MAX_EXACT_N {
        return Err(Error::InvalidArgument(format!(
            "exact test supports at most {MAX_EXACT_N} pairs, got {}",
            a.len()
        )));
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).filter(|d| *d != 0.0).collect();
    if diffs.is_empty() {
        return Ok(1.0);
    }
    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = doubled_midranks(&abs);
    let max: u64 = ranks.iter().sum();
    // counts[s] = number of sign assignments whose positive doubled-rank sum is s.
    let mut counts = vec![0.0f64; max as usize + 1];
    counts[0] = 1.0;
    let mut reach = 0usize;
    for &r in &ranks {
        let r = r as usize;
        for s in (0..=reach).rev() {
            if counts[s] > 0.0 {
                counts[s + r] += counts[s];
            }
        }
        reach += r;
    }
    let observed: u64 = diffs.iter().zip(&ranks).filter(|(d, _)| **d > 0.0).map(|(_, r)| r).sum();
    Ok(two_sided(&counts, observed, max))
}

/// Exact rank-sum test for two independent samples, midranks for ties.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidArgument("rank-sum test needs two non-empty samples".into()));
    }
    if a.len() + b.len() > 2 * MAX_EXACT_N {
        return Err(Error::InvalidArgument(format!(
            "exact test supports at most {} observations",
            2 * MAX_EXACT_N
        )));
    }
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = doubled_midranks(&pooled);
    let n1 = a.len();
    let max: u64 = ranks.iter().sum();
    // dp[k][s] = number of k-subsets with doubled-rank sum s.
    let mut dp = vec![vec![0.0f64; max as usize + 1]; n1 + 1];
    dp[0][0] = 1.0;
    for &r in &ranks {
        let r = r as usize;
        for k in (0..n1).rev() {
            let (lo, hi) = dp.split_at_mut(k + 1);
            for s in (0..=max as usize - r).rev() {
                if lo[k][s] > 0.0 {
                    hi[0][s + r] += lo[k][s];
                }
            }
        }
    }
    let observed: u64 = ranks[..n1].iter().sum();
    // Mean of the subset sum is n1 * max / N; compare on the doubled scale.
    let n = pooled.len() as u64;
    let counts = &dp[n1];
    let dev = |s: u64| (s * n).abs_diff(n1 as u64 * max);
    let obs_dev = dev(observed);
    let total: f64 = counts.iter().sum();
    let tail: f64 = counts
        .iter()
        .enumerate()
        .filter(|(s, _)| dev(*s as u64) >= obs_dev)
        .map(|(_, c)| c)
        .sum();
    Ok((tail / total).min(1.0))
}
