//! The feed functionality: holds the list and every player's voting
//! resources, activates players once per round and applies their votes.

use crate::error::{Error, Result};
use crate::metrics::MetricsSample;
use crate::model::{
    check_permutation, FeedState, PlayerId, PlayerState, PostId, SystemParams, Vote,
};
use crate::strategy::{Policy, PolicyDecision, View};

#[derive(Debug, Clone, PartialEq)]
pub struct EngineState {
    pub params: SystemParams,
    pub feed: FeedState,
    pub players: Vec<PlayerState>,
    pub rng_seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoteOutcome {
    pub accepted: bool,
    pub score_delta: f64,
    pub vp_after: f64,
}

impl EngineState {
    /// Zero scores, full voting power, nobody has voted, round 0.
    pub fn init(
        params: SystemParams,
        steem_powers: &[f64],
        initial_order: Vec<PostId>,
        rng_seed: u64,
    ) -> Result<Self> {
        params.validate()?;
        if steem_powers.len() != params.num_players {
            return Err(Error::config(format!(
                "{} steem power values for {} players",
                steem_powers.len(),
                params.num_players
            )));
        }
        if let Some(bad) = steem_powers.iter().find(|s| !(s.is_finite() && **s >= 0.0)) {
            return Err(Error::config(format!("invalid steem power {bad}")));
        }
        check_permutation(&initial_order, params.num_posts)?;
        let players = steem_powers
            .iter()
            .map(|&sp| PlayerState::new(sp, params.num_posts))
            .collect();
        Ok(Self {
            feed: FeedState::new(initial_order)?,
            params,
            players,
            rng_seed,
        })
    }

    pub fn round(&self) -> u64 {
        self.feed.round
    }

    /// Adds `regen` to every player's voting power, capped at 1.
    pub fn regenerate(&mut self) {
        let regen = self.params.regen;
        for p in &mut self.players {
            p.voting_power = (p.voting_power + regen).min(1.0);
        }
    }

    /// The first `min(A, P)` posts with their positions, top first.
    pub fn visible_prefix(&self) -> Vec<(PostId, usize)> {
        let span = self.params.attention_span.min(self.params.num_posts);
        self.feed.order()[..span]
            .iter()
            .enumerate()
            .map(|(pos, &post)| (post, pos))
            .collect()
    }

    pub fn view(&self, player_id: PlayerId) -> View<'_> {
        View {
            player_id,
            player: &self.players[player_id],
            feed: &self.feed,
            attention_span: self.params.attention_span,
            round: self.feed.round,
        }
    }

    /// Applies one vote.
    ///
    /// The cost `a * VP * w + b` uses the pre-vote voting power. The post's
    /// score grows by `SP * cost` and the player's voting power drops by the
    /// cost, floored at 0. A second vote by the same player on the same post is
    /// rejected and leaves the state untouched.
    pub fn handle_vote(&mut self, player_id: PlayerId, vote: Vote) -> Result<VoteOutcome> {
        let num_posts = self.params.num_posts;
        if vote.post >= num_posts {
            return Err(Error::InvalidPost {
                post: vote.post,
                num_posts,
            });
        }
        if !(0.0..=1.0).contains(&vote.weight) {
            return Err(Error::config(format!(
                "vote weight {} outside [0, 1]",
                vote.weight
            )));
        }
        let num_players = self.players.len();
        let player = self
            .players
            .get_mut(player_id)
            .ok_or(Error::InvalidPlayer {
                player: player_id,
                num_players,
            })?;
        if player.has_voted(vote.post) {
            return Ok(VoteOutcome {
                accepted: false,
                score_delta: 0.0,
                vp_after: player.voting_power,
            });
        }
        let cost =
            self.params.vote_scale * player.voting_power * vote.weight + self.params.vote_offset;
        let delta = player.steem_power() * cost;
        player.voting_power = (player.voting_power - cost).max(0.0);
        player.mark_voted(vote.post, self.feed.round);
        let vp_after = player.voting_power;
        self.feed.bump(vote.post, delta);
        Ok(VoteOutcome {
            accepted: true,
            score_delta: delta,
            vp_after,
        })
    }

    /// One round: regenerate, then activate players in ascending id order.
    /// Each vote is applied before the next player looks at the list.
    pub fn run_round<P: Policy>(&mut self, policies: &[P]) -> Result<()> {
        if policies.len() != self.players.len() {
            return Err(Error::config(format!(
                "{} policies for {} players",
                policies.len(),
                self.players.len()
            )));
        }
        self.regenerate();
        for (player_id, policy) in policies.iter().enumerate() {
            if let PolicyDecision::Cast(vote) = policy.decide(&self.view(player_id)) {
                self.handle_vote(player_id, vote)?;
            }
        }
        self.feed.round += 1;
        Ok(())
    }

    pub fn sample(&self, ideal: &[PostId]) -> Result<MetricsSample> {
        MetricsSample::measure(self.round(), self.feed.order(), ideal)
    }
}

/// Runs all `num_rounds` rounds from a fresh state.
///
/// A sample is taken at round 0, at every multiple of `sample_every` and at the
/// final round.
pub fn run<P: Policy>(
    params: &SystemParams,
    steem_powers: &[f64],
    initial_order: &[PostId],
    ideal: &[PostId],
    policies: &[P],
    sample_every: u64,
    seed: u64,
) -> Result<(EngineState, Vec<MetricsSample>)> {
    if sample_every == 0 {
        return Err(Error::config("sample_every must be at least 1"));
    }
    let mut state = EngineState::init(params.clone(), steem_powers, initial_order.to_vec(), seed)?;
    check_permutation(ideal, params.num_posts)?;
    let mut samples = vec![state.sample(ideal)?];
    for _ in 0..params.num_rounds {
        state.run_round(policies)?;
        let r = state.round();
        if r % sample_every == 0 || r == params.num_rounds {
            samples.push(state.sample(ideal)?);
        }
    }
    Ok((state, samples))
}
