//! Domain types shared by the engine, the strategies and the metrics, plus the
//! ideal score / ideal order of a likability matrix.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type PostId = usize;
pub type PlayerId = usize;

/// Mechanism constants for one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub num_players: usize,
    /// Zero is accepted and gives an empty run.
    pub num_rounds: u64,
    pub num_posts: usize,
    /// How many list positions a player inspects before voting.
    pub attention_span: usize,
    /// Multiplier of `VP * w` in the vote cost.
    pub vote_scale: f64,
    /// Flat part of the vote cost.
    pub vote_offset: f64,
    /// Voting power recovered per round, as a fraction of full power.
    pub regen: f64,
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        if self.num_players == 0 {
            return Err(Error::config("num_players must be at least 1"));
        }
        if self.num_posts == 0 {
            return Err(Error::config("num_posts must be at least 1"));
        }
        if self.attention_span == 0 || self.attention_span > self.num_posts {
            return Err(Error::config(format!(
                "attention_span must be in 1..={} (got {})",
                self.num_posts, self.attention_span
            )));
        }
        if !(self.vote_scale.is_finite() && self.vote_scale > 0.0) {
            return Err(Error::config("vote_scale must be finite and > 0"));
        }
        if !(self.vote_offset.is_finite() && self.vote_offset >= 0.0) {
            return Err(Error::config("vote_offset must be finite and >= 0"));
        }
        if !(self.regen.is_finite() && self.regen > 0.0) {
            return Err(Error::config("regen must be finite and > 0"));
        }
        Ok(())
    }
}

/// Per-(player, post) likability values, stored player-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LikabilityMatrix {
    num_players: usize,
    num_posts: usize,
    values: Vec<f64>,
}

impl LikabilityMatrix {
    pub fn new(num_players: usize, num_posts: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != num_players * num_posts {
            return Err(Error::config(format!(
                "likability matrix needs {} entries, got {}",
                num_players * num_posts,
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::config(format!("likability {bad} outside [0, 1]")));
        }
        Ok(Self {
            num_players,
            num_posts,
            values,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let num_posts = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != num_posts) {
            return Err(Error::config("likability rows have different lengths"));
        }
        Self::new(rows.len(), num_posts, rows.concat())
    }

    pub fn num_players(&self) -> usize {
        self.num_players
    }

    pub fn num_posts(&self) -> usize {
        self.num_posts
    }

    pub fn get(&self, player: PlayerId, post: PostId) -> f64 {
        self.values[player * self.num_posts + post]
    }

    pub fn row(&self, player: PlayerId) -> &[f64] {
        &self.values[player * self.num_posts..(player + 1) * self.num_posts]
    }

    pub fn column(&self, post: PostId) -> impl Iterator<Item = f64> + '_ {
        (0..self.num_players).map(move |i| self.get(i, post))
    }

    /// Ideal score of every post, indexed by post id.
    pub fn ideal_scores(&self) -> Vec<f64> {
        (0..self.num_posts)
            .map(|j| ideal_score(&self.column(j).collect::<Vec<_>>()))
            .collect()
    }
}

/// Sum of a post's likabilities over all players.
///
/// Values are summed in ascending order so the result does not depend on the
/// order in which players are listed.
pub fn ideal_score(likabilities: &[f64]) -> f64 {
    let mut sorted = likabilities.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.iter().sum()
}

/// Posts by decreasing ideal score, ties broken by ascending post id.
pub fn ideal_order(matrix: &LikabilityMatrix) -> Vec<PostId> {
    let scores = matrix.ideal_scores();
    let mut order: Vec<PostId> = (0..matrix.num_posts()).collect();
    order.sort_by(|&x, &y| scores[y].total_cmp(&scores[x]).then(x.cmp(&y)));
    order
}

/// Checks that `order` is a permutation of `0..n`.
pub fn check_permutation(order: &[PostId], n: usize) -> Result<()> {
    if order.len() != n {
        return Err(Error::config(format!(
            "order has {} entries, expected {n}",
            order.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in order {
        if p >= n {
            return Err(Error::InvalidPost {
                post: p,
                num_posts: n,
            });
        }
        if std::mem::replace(&mut seen[p], true) {
            return Err(Error::config(format!("post {p} appears twice in order")));
        }
    }
    Ok(())
}

/// One player's voting resources and the posts she has already voted on.
#[derive(Debug, Clone, PartialEq)]
pub struct PlayerState {
    steem_power: f64,
    pub(crate) voting_power: f64,
    voted: Vec<bool>,
    votes_cast: usize,
    last_vote_round: Option<u64>,
}

impl PlayerState {
    pub fn new(steem_power: f64, num_posts: usize) -> Self {
        Self {
            steem_power,
            voting_power: 1.0,
            voted: vec![false; num_posts],
            votes_cast: 0,
            last_vote_round: None,
        }
    }

    pub fn steem_power(&self) -> f64 {
        self.steem_power
    }

    pub fn voting_power(&self) -> f64 {
        self.voting_power
    }

    pub fn has_voted(&self, post: PostId) -> bool {
        self.voted[post]
    }

    pub fn votes_cast(&self) -> usize {
        self.votes_cast
    }

    pub fn voted_posts(&self) -> impl Iterator<Item = PostId> + '_ {
        self.voted
            .iter()
            .enumerate()
            .filter_map(|(p, &v)| v.then_some(p))
    }

    /// Round of this player's most recent accepted vote.
    pub fn last_vote_round(&self) -> Option<u64> {
        self.last_vote_round
    }

    pub(crate) fn mark_voted(&mut self, post: PostId, round: u64) {
        self.voted[post] = true;
        self.votes_cast += 1;
        self.last_vote_round = Some(round);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vote {
    pub post: PostId,
    pub weight: f64,
}

/// The scored post list. Index 0 of `order` is the top of the list.
#[derive(Debug, Clone, PartialEq)]
pub struct FeedState {
    scores: Vec<f64>,
    order: Vec<PostId>,
    position: Vec<usize>,
    pub round: u64,
}

impl FeedState {
    /// A zero-score list in the given order.
    pub fn new(initial_order: Vec<PostId>) -> Result<Self> {
        check_permutation(&initial_order, initial_order.len())?;
        let n = initial_order.len();
        let mut feed = Self {
            scores: vec![0.0; n],
            order: initial_order,
            position: vec![0; n],
            round: 0,
        };
        feed.reindex();
        Ok(feed)
    }

    /// Builds a list from explicit scores and order, then sorts it.
    pub fn with_scores(scores: Vec<f64>, order: Vec<PostId>) -> Result<Self> {
        if scores.len() != order.len() {
            return Err(Error::config("scores and order differ in length"));
        }
        if scores.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(Error::config("scores must be finite and >= 0"));
        }
        check_permutation(&order, order.len())?;
        let n = order.len();
        let mut feed = Self {
            scores,
            order,
            position: vec![0; n],
            round: 0,
        };
        feed.reorder();
        Ok(feed)
    }

    pub fn num_posts(&self) -> usize {
        self.order.len()
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn order(&self) -> &[PostId] {
        &self.order
    }

    pub fn position_of(&self, post: PostId) -> usize {
        self.position[post]
    }

    /// Stable sort by score, highest first. Equal scores keep their current
    /// relative order.
    pub fn reorder(&mut self) {
        let scores = &self.scores;
        self.order.sort_by(|&x, &y| scores[y].total_cmp(&scores[x]));
        self.reindex();
    }

    /// Adds `delta >= 0` to one post and restores the sort order.
    ///
    /// Only the bumped post can be out of place, so it is moved up past every
    /// post with a strictly lower score. This gives the same list as
    /// [`FeedState::reorder`].
    pub(crate) fn bump(&mut self, post: PostId, delta: f64) {
        debug_assert!(delta >= 0.0);
        self.scores[post] += delta;
        let score = self.scores[post];
        let mut pos = self.position[post];
        while pos > 0 && self.scores[self.order[pos - 1]] < score {
            let above = self.order[pos - 1];
            self.order[pos] = above;
            self.position[above] = pos;
            pos -= 1;
        }
        self.order[pos] = post;
        self.position[post] = pos;
    }

    pub fn is_sorted(&self) -> bool {
        self.order
            .windows(2)
            .all(|w| self.scores[w[0]] >= self.scores[w[1]])
    }

    fn reindex(&mut self) {
        for (pos, &post) in self.order.iter().enumerate() {
            self.position[post] = pos;
        }
    }
}
