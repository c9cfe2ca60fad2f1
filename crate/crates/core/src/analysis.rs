//! Closed-form convergence prediction for equal-stake honest play.
//!
//! With every player holding the same stake, the list ends in the ideal order
//! exactly when each player has time to cast all `P` votes at full voting
//! power: a full-weight vote costs `a + b`, so full power comes back after
//! `ceil((a + b) / regen)` rounds, and the last of the `P` votes lands by round
//! `(P - 1) * ceil((a + b) / regen)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SystemParams;

/// Ratios within this relative distance of an integer are snapped to it
/// before taking the ceiling.
pub const CEIL_SNAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// The final list equals the ideal order (`t = P`).
    ConvergesFully,
    /// Some instance ends with the wrong top post.
    NotOneConverges,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    UnequalSteemPower,
    InsufficientRounds,
    SufficientRounds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergencePrediction {
    pub verdict: Verdict,
    pub reason: Reason,
    /// Rounds needed to get back to full power after a full-weight vote.
    pub threshold: u64,
    /// Smallest round count that lets every player cast all votes.
    pub required_rounds: u64,
}

/// `ceil((a + b) / regen)`, snapping near-integer ratios first.
pub fn regen_threshold(vote_scale: f64, vote_offset: f64, regen: f64) -> Result<u64> {
    if !(regen.is_finite() && regen > 0.0) {
        return Err(Error::config(format!("regen must be > 0 (got {regen})")));
    }
    let ratio = (vote_scale + vote_offset) / regen;
    if !ratio.is_finite() || ratio < 0.0 {
        return Err(Error::config(format!("invalid cost/regen ratio {ratio}")));
    }
    let nearest = ratio.round();
    let snapped = if (ratio - nearest).abs() <= CEIL_SNAP * nearest.max(1.0) {
        nearest
    } else {
        ratio.ceil()
    };
    Ok(snapped as u64)
}

/// Classifies a configuration into one of the three convergence cases.
pub fn predict(params: &SystemParams, steem_powers: &[f64]) -> Result<ConvergencePrediction> {
    let threshold = regen_threshold(params.vote_scale, params.vote_offset, params.regen)?;
    let budget = (params.num_posts as u128 - 1) * threshold as u128;
    let required_rounds = u64::try_from(budget + 1).unwrap_or(u64::MAX);
    let equal = steem_powers.windows(2).all(|w| w[0] == w[1]);
    let (verdict, reason) = if !equal {
        (Verdict::NotOneConverges, Reason::UnequalSteemPower)
    } else if params.num_rounds as u128 > budget {
        // R - 1 >= (P - 1) * threshold
        (Verdict::ConvergesFully, Reason::SufficientRounds)
    } else {
        (Verdict::NotOneConverges, Reason::InsufficientRounds)
    };
    Ok(ConvergencePrediction {
        verdict,
        reason,
        threshold,
        required_rounds,
    })
}
