//! Player policies. The engine hands each activated player a [`View`] of the
//! list and applies whatever [`PolicyDecision`] comes back.

use serde::{Deserialize, Serialize};

use crate::model::{FeedState, PlayerId, PlayerState, PostId, Vote};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolicyDecision {
    Abstain,
    Cast(Vote),
}

/// When an honest player is willing to vote.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HonestMode {
    /// Vote only with voting power exactly 1.
    #[default]
    FullPowerOnly,
    /// Vote on every activation that has a candidate.
    Eager,
    /// Vote only with voting power exactly 1 and at least `gap` rounds after
    /// the previous vote.
    Paced { gap: u64 },
}

/// Which part of the list an honest player looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Attention {
    /// The top `A` posts she has not voted on yet. Posts already voted on are
    /// scrolled past and do not use up attention.
    #[default]
    SkipVoted,
    /// The top `A` posts of the list, voted or not.
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct HonestPolicyConfig {
    pub mode: HonestMode,
    #[serde(default)]
    pub attention: Attention,
}

/// What an activated player gets to see.
#[derive(Debug, Clone, Copy)]
pub struct View<'a> {
    pub player_id: PlayerId,
    pub player: &'a PlayerState,
    pub feed: &'a FeedState,
    pub attention_span: usize,
    /// Index of the round in progress.
    pub round: u64,
}

impl<'a> View<'a> {
    /// `(post, position)` for the first `min(A, P)` entries of the list.
    pub fn prefix(&self) -> impl Iterator<Item = (PostId, usize)> + 'a {
        let order = self.feed.order();
        order
            .iter()
            .take(self.attention_span.min(order.len()))
            .enumerate()
            .map(|(pos, &post)| (post, pos))
    }

    /// `(post, position)` for the first `A` posts this player has not voted
    /// on, top first.
    pub fn unvoted_prefix(&self) -> impl Iterator<Item = (PostId, usize)> + 'a {
        let player = self.player;
        self.feed
            .order()
            .iter()
            .enumerate()
            .filter(move |(_, &post)| !player.has_voted(post))
            .take(self.attention_span)
            .map(|(pos, &post)| (post, pos))
    }
}

/// The interface the engine drives. Implementations must be pure functions of
/// the view.
pub trait Policy {
    fn decide(&self, view: &View<'_>) -> PolicyDecision;
}

/// Votes the most liked unvoted post in sight, with weight equal to its
/// likability. Likability ties go to the lowest post id.
pub fn honest_decide(
    view: &View<'_>,
    likabilities: &[f64],
    config: HonestPolicyConfig,
) -> PolicyDecision {
    let ready = match config.mode {
        HonestMode::Eager => true,
        HonestMode::FullPowerOnly => view.player.voting_power() == 1.0,
        HonestMode::Paced { gap } => {
            view.player.voting_power() == 1.0
                && view
                    .player
                    .last_vote_round()
                    .is_none_or(|last| view.round - last >= gap)
        }
    };
    if !ready {
        return PolicyDecision::Abstain;
    }
    let best = match config.attention {
        Attention::SkipVoted => argmax_liked(view.unvoted_prefix(), likabilities),
        Attention::Fixed => argmax_liked(
            view.prefix().filter(|(p, _)| !view.player.has_voted(*p)),
            likabilities,
        ),
    };
    match best {
        Some(post) => PolicyDecision::Cast(Vote {
            post,
            weight: likabilities[post],
        }),
        None => PolicyDecision::Abstain,
    }
}

fn argmax_liked(
    candidates: impl Iterator<Item = (PostId, usize)>,
    likabilities: &[f64],
) -> Option<PostId> {
    candidates
        .map(|(post, _)| post)
        .fold(None, |best: Option<PostId>, post| match best {
            Some(b)
                if likabilities[b] > likabilities[post]
                    || (likabilities[b] == likabilities[post] && b < post) =>
            {
                Some(b)
            }
            _ => Some(post),
        })
}

/// Ring member: one full-weight, full-power vote for the target post, wherever
/// it sits in the list, and nothing else.
pub fn selfish_decide(view: &View<'_>, target: PostId) -> PolicyDecision {
    if !view.player.has_voted(target) && view.player.voting_power() == 1.0 {
        PolicyDecision::Cast(Vote {
            post: target,
            weight: 1.0,
        })
    } else {
        PolicyDecision::Abstain
    }
}

/// The policies a scenario can assign to a player.
#[derive(Debug, Clone, PartialEq)]
pub enum PlayerPolicy {
    Honest {
        config: HonestPolicyConfig,
        likabilities: Vec<f64>,
    },
    Selfish {
        target: PostId,
    },
    Idle,
}

impl Policy for PlayerPolicy {
    fn decide(&self, view: &View<'_>) -> PolicyDecision {
        match self {
            PlayerPolicy::Honest {
                config,
                likabilities,
            } => honest_decide(view, likabilities, *config),
            PlayerPolicy::Selfish { target } => selfish_decide(view, *target),
            PlayerPolicy::Idle => PolicyDecision::Abstain,
        }
    }
}
