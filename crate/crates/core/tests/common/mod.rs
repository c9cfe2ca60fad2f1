//! Test-only oracles. Nothing here calls into the metric implementations it
//! is used to check.
#![allow(dead_code)]

use curation_core::analysis::{predict, Verdict};
use curation_core::engine::EngineState;
use curation_core::instance::{stream_rng, unit_f64};
use curation_core::metrics::t_ideal_rank;
use curation_core::model::{ideal_order, LikabilityMatrix, PostId, SystemParams};
use curation_core::strategy::{
    Attention, HonestMode, HonestPolicyConfig, PlayerPolicy, Policy, PolicyDecision,
};
use rand_chacha::ChaCha8Rng;
use rand_core::RngCore;

/// Every permutation of `0..n`, lexicographic.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

fn rank_of(order: &[PostId], post: PostId) -> usize {
    order.iter().position(|&p| p == post).unwrap()
}

/// Pair counting over unordered post-id pairs.
pub fn brute_kendall(real: &[PostId], ideal: &[PostId]) -> f64 {
    let n = real.len();
    let (mut conc, mut disc) = (0i64, 0i64);
    for a in 0..n {
        for b in a + 1..n {
            let di = rank_of(ideal, a) as i64 - rank_of(ideal, b) as i64;
            let dr = rank_of(real, a) as i64 - rank_of(real, b) as i64;
            if di * dr > 0 {
                conc += 1;
            } else {
                disc += 1;
            }
        }
    }
    (conc - disc) as f64 / (n * (n - 1) / 2) as f64
}

/// Pearson correlation of the two rank vectors.
pub fn brute_spearman(real: &[PostId], ideal: &[PostId]) -> f64 {
    let n = real.len();
    let x: Vec<f64> = (0..n).map(|p| rank_of(ideal, p) as f64).collect();
    let y: Vec<f64> = (0..n).map(|p| rank_of(real, p) as f64).collect();
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let cov: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let vy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    cov / (vx * vy).sqrt()
}

pub fn honest_policies(m: &LikabilityMatrix, config: HonestPolicyConfig) -> Vec<PlayerPolicy> {
    (0..m.num_players())
        .map(|i| PlayerPolicy::Honest {
            config,
            likabilities: m.row(i).to_vec(),
        })
        .collect()
}

/// Runs every round and returns the final state.
pub fn simulate(
    params: &SystemParams,
    steem_powers: &[f64],
    initial_order: Vec<PostId>,
    policies: &[PlayerPolicy],
) -> EngineState {
    let mut state = EngineState::init(params.clone(), steem_powers, initial_order, 0).unwrap();
    for _ in 0..params.num_rounds {
        state.run_round(policies).unwrap();
    }
    state
}

pub const FULL_POWER: HonestPolicyConfig = HonestPolicyConfig {
    mode: HonestMode::FullPowerOnly,
    attention: Attention::SkipVoted,
};

/// A small equal-stake configuration for the convergence sweep.
#[derive(Debug, Clone)]
pub struct SmallConfig {
    pub params: SystemParams,
    pub steem_power: f64,
}

/// Draws a config with `P <= 8`, `N <= 12` and threshold `<= 25`. The round
/// count lands within two thresholds of the convergence bound so both
/// predictions occur.
pub fn random_small_config(rng: &mut ChaCha8Rng) -> SmallConfig {
    let below = |rng: &mut ChaCha8Rng, n: u64| (rng.next_u64() % n) as usize;
    let num_posts = 2 + below(rng, 7);
    let num_players = 1 + below(rng, 12);
    let attention_span = 1 + below(rng, num_posts as u64);
    let vote_scale = 0.01 + 0.39 * unit_f64(rng);
    let vote_offset = 0.05 * unit_f64(rng);
    let threshold = 1 + below(rng, 25) as u64;
    // ratio strictly inside (threshold - 1, threshold)
    let ratio = threshold as f64 - (0.05 + 0.9 * unit_f64(rng));
    let regen = (vote_scale + vote_offset) / ratio.max(0.05);
    let bound = (num_posts as u64 - 1) * threshold + 1;
    let lo = bound.saturating_sub(2 * threshold).max(1);
    let num_rounds = lo + rng.next_u64() % (bound + 2 * threshold - lo + 1);
    SmallConfig {
        params: SystemParams {
            num_players,
            num_rounds,
            num_posts,
            attention_span,
            vote_scale,
            vote_offset,
            regen,
        },
        steem_power: [1.0, 2.0, 0.5][below(rng, 3)],
    }
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, p: usize) -> LikabilityMatrix {
    LikabilityMatrix::new(n, p, (0..n * p).map(|_| unit_f64(rng)).collect()).unwrap()
}

pub fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        v.swap(i, (rng.next_u64() % (i as u64 + 1)) as usize);
    }
    v
}

pub fn test_rng(seed: u64) -> ChaCha8Rng {
    stream_rng(seed, 99)
}

/// An instance with unequal stake whose honest run ends with the wrong post
/// on top.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub params: SystemParams,
    pub steem_powers: Vec<f64>,
    pub likabilities: LikabilityMatrix,
    pub final_order: Vec<PostId>,
    pub ideal: Vec<PostId>,
}

/// Odometer over `base^len` digit vectors.
fn next_digits(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Exhaustive search over `N, P <= 4`, stakes in {1, 2} and likabilities on
/// the 0.25 grid, smallest sizes first. Only instances with a unique ideal top
/// post count.
pub fn find_unequal_stake_counterexample() -> Option<Counterexample> {
    const GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
    for size in 4..=8 {
        for n in 2..=4usize {
            let p = size - n;
            if !(2..=4).contains(&p) {
                continue;
            }
            let threshold = 3u64;
            let params = SystemParams {
                num_players: n,
                num_rounds: (p as u64 - 1) * threshold + 1,
                num_posts: p,
                attention_span: p,
                vote_scale: 1.0 / 50.0,
                vote_offset: 1e-4,
                regen: (1.0 / 50.0 + 1e-4) / 2.5,
            };
            for stake_bits in 1..(1u32 << n) - 1 {
                let sp: Vec<f64> = (0..n)
                    .map(|i| if stake_bits >> i & 1 == 1 { 2.0 } else { 1.0 })
                    .collect();
                let mut digits = vec![0usize; n * p];
                loop {
                    let m = LikabilityMatrix::new(n, p, digits.iter().map(|&d| GRID[d]).collect())
                        .unwrap();
                    let scores = m.ideal_scores();
                    let ideal = ideal_order(&m);
                    if scores[ideal[0]] > scores[ideal[1]] {
                        let state = simulate(
                            &params,
                            &sp,
                            (0..p).collect(),
                            &honest_policies(&m, FULL_POWER),
                        );
                        if state.feed.order()[0] != ideal[0] {
                            assert_eq!(
                                predict(&params, &sp).unwrap().verdict,
                                Verdict::NotOneConverges
                            );
                            return Some(Counterexample {
                                params,
                                steem_powers: sp,
                                likabilities: m,
                                final_order: state.feed.order().to_vec(),
                                ideal,
                            });
                        }
                    }
                    if !next_digits(&mut digits, GRID.len()) {
                        break;
                    }
                }
            }
        }
    }
    None
}

/// Equal-stake, too-few-rounds instance (same grid search) ending with the
/// wrong top post.
pub fn find_insufficient_rounds_counterexample(
) -> Option<(SystemParams, LikabilityMatrix, Vec<PostId>)> {
    const GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
    for n in 1..=3usize {
        for p in 2..=3usize {
            let params = SystemParams {
                num_players: n,
                num_rounds: 1,
                num_posts: p,
                attention_span: p,
                vote_scale: 1.0 / 50.0,
                vote_offset: 1e-4,
                regen: 0.01,
            };
            assert_eq!(
                predict(&params, &vec![1.0; n]).unwrap().verdict,
                Verdict::NotOneConverges
            );
            let mut digits = vec![0usize; n * p];
            loop {
                let m =
                    LikabilityMatrix::new(n, p, digits.iter().map(|&d| GRID[d]).collect()).unwrap();
                let scores = m.ideal_scores();
                let ideal = ideal_order(&m);
                if scores[ideal[0]] > scores[ideal[1]] {
                    let state = simulate(
                        &params,
                        &vec![1.0; n],
                        (0..p).collect(),
                        &honest_policies(&m, FULL_POWER),
                    );
                    if t_ideal_rank(state.feed.order(), &ideal).unwrap() == 0 {
                        return Some((params, m, state.feed.order().to_vec()));
                    }
                }
                if !next_digits(&mut digits, GRID.len()) {
                    break;
                }
            }
        }
    }
    None
}

/// Counts of what the invariant stepper saw.
#[derive(Debug, Default, Clone, Copy)]
pub struct InvariantStats {
    pub accepted: usize,
    pub rejected: usize,
}

/// Runs `state` for its remaining rounds, applying each decision (plus a
/// deliberate duplicate vote now and then) and checking every invariant after
/// every operation.
pub fn run_checked(
    state: &mut EngineState,
    policies: &[PlayerPolicy],
    rng: &mut ChaCha8Rng,
) -> Result<InvariantStats, String> {
    let mut stats = InvariantStats::default();
    let sp0: Vec<f64> = state.players.iter().map(|p| p.steem_power()).collect();
    let p = state.params.num_posts;
    let n = state.players.len();
    let mut ledger = vec![vec![0u32; p]; n];
    while state.round() < state.params.num_rounds {
        state.regenerate();
        check_state(state, &sp0, None)?;
        for i in 0..n {
            let mut votes = Vec::new();
            if let PolicyDecision::Cast(v) = policies[i].decide(&state.view(i)) {
                votes.push(v);
            }
            if let Some(&last) = votes.first() {
                if rng.next_u64().is_multiple_of(8) {
                    votes.push(last);
                }
            }
            for vote in votes {
                let before = state.clone();
                let vp_before = state.players[i].voting_power();
                let out = state.handle_vote(i, vote).map_err(|e| e.to_string())?;
                if out.accepted {
                    stats.accepted += 1;
                    ledger[i][vote.post] += 1;
                    if ledger[i][vote.post] > 1 {
                        return Err(format!("player {i} voted post {} twice", vote.post));
                    }
                    let sp = state.players[i].steem_power();
                    let cost = before.params.vote_scale * vp_before * vote.weight
                        + before.params.vote_offset;
                    if out.score_delta != sp * cost {
                        return Err(format!(
                            "delta {} != SP * cost {}",
                            out.score_delta,
                            sp * cost
                        ));
                    }
                    if vp_before - cost >= 0.0 {
                        let spent = vp_before - out.vp_after;
                        if (out.score_delta - sp * spent).abs() > 1e-12 {
                            return Err(format!(
                                "delta {} != SP * VP spent {}",
                                out.score_delta,
                                sp * spent
                            ));
                        }
                    } else if out.vp_after != 0.0 {
                        return Err("VP not floored at 0".into());
                    }
                } else {
                    stats.rejected += 1;
                    if *state != before {
                        return Err("rejected vote changed the state".into());
                    }
                }
                check_state(state, &sp0, Some(&before))?;
            }
        }
        state.feed.round += 1;
    }
    for (i, player) in state.players.iter().enumerate() {
        if player.votes_cast() > p {
            return Err(format!("player {i} cast {} votes", player.votes_cast()));
        }
        let voted: Vec<usize> = player.voted_posts().collect();
        let expected: Vec<usize> = (0..p).filter(|&j| ledger[i][j] == 1).collect();
        if voted != expected {
            return Err(format!("player {i} voted set mismatch"));
        }
    }
    Ok(stats)
}

fn check_state(
    state: &EngineState,
    sp0: &[f64],
    before: Option<&EngineState>,
) -> Result<(), String> {
    for (i, p) in state.players.iter().enumerate() {
        if !(0.0..=1.0).contains(&p.voting_power()) {
            return Err(format!("player {i} VP {}", p.voting_power()));
        }
        if p.steem_power() != sp0[i] {
            return Err(format!("player {i} SP changed"));
        }
    }
    let order = state.feed.order();
    let mut seen = vec![false; order.len()];
    for &post in order {
        if post >= seen.len() || std::mem::replace(&mut seen[post], true) {
            return Err("order is not a permutation".into());
        }
    }
    if !state.feed.is_sorted() {
        return Err("order not sorted by score".into());
    }
    if let Some(b) = before {
        for (post, (now, then)) in state.feed.scores().iter().zip(b.feed.scores()).enumerate() {
            if now < then {
                return Err(format!("score of post {post} decreased"));
            }
        }
    }
    Ok(())
}
