//! Seeded problem instances.
//!
//! Likabilities come from ChaCha8 (`rand_chacha`) seeded with
//! `ChaCha8Rng::seed_from_u64(seed)` on stream [`LIKABILITY_STREAM`]. Each value
//! is `(next_u64() >> 11) * 2^-53`, drawn player-major: all posts of player 0,
//! then all posts of player 1, and so on. Golden outputs depend on this exact
//! procedure.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::model::{ideal_order, LikabilityMatrix, PostId};

pub const LIKABILITY_STREAM: u64 = 0;

/// Uniform draw in `[0, 1)` with 53 random bits.
pub fn unit_f64(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Likabilities, starting list and stakes for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub likabilities: LikabilityMatrix,
    pub initial_order: Vec<PostId>,
    pub steem_powers: Vec<f64>,
    pub ideal: Vec<PostId>,
}

/// Draws a uniform likability matrix. When `zero_post` is given, that post's
/// column is zeroed after drawing, so the other columns do not depend on it.
pub fn uniform_likabilities(
    seed: u64,
    num_players: usize,
    num_posts: usize,
    zero_post: Option<PostId>,
) -> Result<LikabilityMatrix> {
    let mut rng = stream_rng(seed, LIKABILITY_STREAM);
    let mut values = Vec::with_capacity(num_players * num_posts);
    for _ in 0..num_players {
        for post in 0..num_posts {
            let v = unit_f64(&mut rng);
            values.push(if Some(post) == zero_post { 0.0 } else { v });
        }
    }
    LikabilityMatrix::new(num_players, num_posts, values)
}

/// Ascending post ids, with `last` (if any) moved to the bottom.
pub fn initial_order(num_posts: usize, last: Option<PostId>) -> Result<Vec<PostId>> {
    if let Some(t) = last {
        if t >= num_posts {
            return Err(Error::InvalidPost { post: t, num_posts });
        }
    }
    let mut order: Vec<PostId> = (0..num_posts).filter(|&p| Some(p) != last).collect();
    order.extend(last);
    Ok(order)
}

impl Instance {
    pub fn new(
        likabilities: LikabilityMatrix,
        initial_order: Vec<PostId>,
        steem_powers: Vec<f64>,
    ) -> Self {
        let ideal = ideal_order(&likabilities);
        Self {
            likabilities,
            initial_order,
            steem_powers,
            ideal,
        }
    }
}
