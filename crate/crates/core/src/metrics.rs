//! Curation quality of a list measured against the ideal order.
//!
//! Both arguments are strict permutations of the same post ids, so the rank
//! correlations need no tie handling.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::PostId;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsSample {
    pub round: u64,
    pub t_ideal_rank: usize,
    pub kendall_tau: f64,
    pub spearman_rho: f64,
}

impl MetricsSample {
    /// All three metrics for `real` against `ideal`. The correlations are
    /// reported as 1 for single-post lists.
    pub fn measure(round: u64, real: &[PostId], ideal: &[PostId]) -> Result<Self> {
        let t_ideal_rank = t_ideal_rank(real, ideal)?;
        let (kendall_tau, spearman_rho) = if real.len() < 2 {
            (1.0, 1.0)
        } else {
            (kendall_tau(real, ideal)?, spearman_rho(real, ideal)?)
        };
        Ok(Self {
            round,
            t_ideal_rank,
            kendall_tau,
            spearman_rho,
        })
    }
}

/// `positions[post]` for `order`, after checking both orders hold the same ids.
fn positions(order: &[PostId], other: &[PostId]) -> Result<Vec<usize>> {
    if order.len() != other.len() {
        return Err(Error::OrderMismatch(format!(
            "lengths {} and {}",
            order.len(),
            other.len()
        )));
    }
    let n = order.len();
    let mut pos = vec![usize::MAX; n];
    for (i, &p) in order.iter().enumerate() {
        if p >= n || pos[p] != usize::MAX {
            return Err(Error::OrderMismatch(format!("bad or repeated id {p}")));
        }
        pos[p] = i;
    }
    let mut seen = vec![false; n];
    for &p in other {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::OrderMismatch(format!("bad or repeated id {p}")));
        }
    }
    Ok(pos)
}

/// Length of the longest common prefix of the two orders.
pub fn t_ideal_rank(real: &[PostId], ideal: &[PostId]) -> Result<usize> {
    positions(real, ideal)?;
    Ok(real.iter().zip(ideal).take_while(|(r, i)| r == i).count())
}

/// `(concordant - discordant) / (P (P - 1) / 2)` over all post pairs.
pub fn kendall_tau(real: &[PostId], ideal: &[PostId]) -> Result<f64> {
    let real_pos = positions(real, ideal)?;
    let n = real.len();
    if n < 2 {
        return Err(Error::TooFewPosts(n));
    }
    // walking the ideal order, pair (i, j) with i < j is concordant when the
    // real list also has ideal[i] above ideal[j]
    let mut balance: i64 = 0;
    for i in 0..n {
        let pi = real_pos[ideal[i]];
        for &later in &ideal[i + 1..] {
            balance += if pi < real_pos[later] { 1 } else { -1 };
        }
    }
    let pairs = (n * (n - 1) / 2) as f64;
    Ok(balance as f64 / pairs)
}

/// `1 - 6 sum(d^2) / (P (P^2 - 1))` with `d` the per-post rank difference.
pub fn spearman_rho(real: &[PostId], ideal: &[PostId]) -> Result<f64> {
    let real_pos = positions(real, ideal)?;
    let n = real.len();
    if n < 2 {
        return Err(Error::TooFewPosts(n));
    }
    let sum_d2: u128 = ideal
        .iter()
        .enumerate()
        .map(|(rank, &post)| {
            let d = rank.abs_diff(real_pos[post]) as u128;
            d * d
        })
        .sum();
    let n = n as u128;
    Ok(1.0 - (6 * sum_d2) as f64 / (n * (n * n - 1)) as f64)
}

/// Ideal position minus final position of `target`; positive when the post
/// ended up higher than it deserves.
pub fn selfish_gain(final_order: &[PostId], ideal: &[PostId], target: PostId) -> Result<i64> {
    let find = |order: &[PostId], name: &str| {
        order
            .iter()
            .position(|&p| p == target)
            .ok_or_else(|| Error::OrderMismatch(format!("post {target} missing from {name} order")))
    };
    let ideal_pos = find(ideal, "ideal")?;
    let final_pos = find(final_order, "final")?;
    Ok(ideal_pos as i64 - final_pos as i64)
}
