//! Experiment orchestration: instance generation, the two reference
//! scenarios and custom config runs.

use std::ops::RangeInclusive;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{predict, ConvergencePrediction, Reason, Verdict};
use crate::config::{HonestModeName, ScenarioConfig, SelfishConfig, SteemPowerSpec};
use crate::engine::{run, EngineState};
use crate::error::{Error, Result};
use crate::instance::{initial_order, uniform_likabilities, Instance};
use crate::metrics::{selfish_gain, MetricsSample};
use crate::model::SystemParams;
use crate::strategy::{Attention, PlayerPolicy};

/// Scenario A round budget, vote cost and regeneration (3-second blocks, five
/// days to full power).
pub const SCENARIO_A_ROUNDS: u64 = 200_000;
pub const SCENARIO_A_REGEN: f64 = 3.0 / (5.0 * 24.0 * 60.0 * 60.0);
/// Scenario B regenerates sixty times faster.
pub const SCENARIO_B_REGEN: f64 = 3.0 / (5.0 * 24.0 * 60.0);
pub const SCENARIO_B_ROUNDS: u64 = 5_000;
pub const SCENARIO_B_HONEST: usize = 100;
pub const SCENARIO_B_POSTS: usize = 100;
pub const VOTE_SCALE: f64 = 1.0 / 50.0;
pub const VOTE_OFFSET: f64 = 1e-4;
pub const ATTENTION_SPAN: usize = 10;

/// Likabilities, starting list and stakes for a config.
///
/// Every player gets a uniform likability for every post, drawn player-major
/// from the config seed. With a ring configured, the target post is liked by
/// nobody and starts at the bottom of the list; all other posts start in
/// ascending id order.
pub fn generate_instance(config: &ScenarioConfig) -> Result<Instance> {
    config.validate()?;
    let p = &config.params;
    let target = config.selfish.map(|s| s.target_post);
    let likabilities = uniform_likabilities(config.seed, p.num_players, p.num_posts, target)?;
    Ok(Instance::new(
        likabilities,
        initial_order(p.num_posts, target)?,
        config.steem_powers()?,
    ))
}

/// Honest policies for the first `N - ring_size` players, ring members after.
pub fn build_policies(config: &ScenarioConfig, instance: &Instance) -> Result<Vec<PlayerPolicy>> {
    let honest = config.honest_policy()?;
    let n = config.params.num_players;
    let first_selfish = n - config.ring_size();
    Ok((0..n)
        .map(|i| match config.selfish {
            Some(SelfishConfig { target_post, .. }) if i >= first_selfish => {
                PlayerPolicy::Selfish {
                    target: target_post,
                }
            }
            _ => PlayerPolicy::Honest {
                config: honest,
                likabilities: instance.likabilities.row(i).to_vec(),
            },
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub config: ScenarioConfig,
    pub prediction: ConvergencePrediction,
    pub final_sample: MetricsSample,
    pub selfish_gain: Option<i64>,
    pub samples: Vec<MetricsSample>,
}

/// A finished run together with its report.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: RunReport,
    pub instance: Instance,
    pub state: EngineState,
}

pub fn run_config(config: &ScenarioConfig) -> Result<RunOutcome> {
    let instance = generate_instance(config)?;
    let policies = build_policies(config, &instance)?;
    let prediction = predict(&config.params, &instance.steem_powers)?;
    let (state, samples) = run(
        &config.params,
        &instance.steem_powers,
        &instance.initial_order,
        &instance.ideal,
        &policies,
        config.effective_sample_every(),
        config.seed,
    )?;
    let final_sample = *samples.last().expect("run always samples round 0");
    let gain = config
        .selfish
        .map(|s| selfish_gain(state.feed.order(), &instance.ideal, s.target_post))
        .transpose()?;
    Ok(RunOutcome {
        report: RunReport {
            config: config.clone(),
            prediction,
            final_sample,
            selfish_gain: gain,
            samples,
        },
        instance,
        state,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioAVariant {
    /// 270 players, 70 posts: enough rounds for every vote at full power.
    Sufficient,
    /// 300 players, 100 posts: not enough rounds.
    Insufficient,
}

impl std::str::FromStr for ScenarioAVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sufficient" => Ok(Self::Sufficient),
            "insufficient" => Ok(Self::Insufficient),
            _ => Err(Error::parse(format!(
                "unknown variant {s:?} (expected sufficient or insufficient)"
            ))),
        }
    }
}

pub fn scenario_a_config(
    variant: ScenarioAVariant,
    seed: u64,
    output_path: PathBuf,
) -> ScenarioConfig {
    let (num_players, num_posts) = match variant {
        ScenarioAVariant::Sufficient => (270, 70),
        ScenarioAVariant::Insufficient => (300, 100),
    };
    ScenarioConfig {
        params: SystemParams {
            num_players,
            num_rounds: SCENARIO_A_ROUNDS,
            num_posts,
            attention_span: ATTENTION_SPAN,
            vote_scale: VOTE_SCALE,
            vote_offset: VOTE_OFFSET,
            regen: SCENARIO_A_REGEN,
        },
        seed,
        steem_power: SteemPowerSpec::Uniform(1.0),
        honest_mode: HonestModeName::Paced,
        attention: Attention::SkipVoted,
        selfish: None,
        sample_every: None,
        output_path,
    }
}

/// Checks that the reference parameters land on the intended side of the
/// convergence bound.
pub fn check_scenario_a_prediction(
    variant: ScenarioAVariant,
    prediction: &ConvergencePrediction,
) -> Result<()> {
    let expected = match variant {
        ScenarioAVariant::Sufficient => Reason::SufficientRounds,
        ScenarioAVariant::Insufficient => Reason::InsufficientRounds,
    };
    if prediction.reason != expected {
        return Err(Error::config(format!(
            "scenario A {variant:?} parameters predicted {:?}, expected {expected:?}",
            prediction.reason
        )));
    }
    Ok(())
}

pub fn run_scenario_a(
    variant: ScenarioAVariant,
    seed: u64,
    sample_every: Option<u64>,
) -> Result<RunOutcome> {
    let mut config = scenario_a_config(variant, seed, PathBuf::new());
    config.sample_every = sample_every;
    let prediction = predict(&config.params, &config.steem_powers()?)?;
    check_scenario_a_prediction(variant, &prediction)?;
    run_config(&config)
}

/// One Scenario B run with `ring_size` selfish players on top of the honest
/// ones. The target is the last post id.
pub fn scenario_b_config(ring_size: usize, seed: u64) -> ScenarioConfig {
    ScenarioConfig {
        params: SystemParams {
            num_players: SCENARIO_B_HONEST + ring_size,
            num_rounds: SCENARIO_B_ROUNDS,
            num_posts: SCENARIO_B_POSTS,
            attention_span: ATTENTION_SPAN,
            vote_scale: VOTE_SCALE,
            vote_offset: VOTE_OFFSET,
            regen: SCENARIO_B_REGEN,
        },
        seed,
        steem_power: SteemPowerSpec::Uniform(1.0),
        honest_mode: HonestModeName::Paced,
        attention: Attention::SkipVoted,
        selfish: Some(SelfishConfig {
            ring_size,
            target_post: SCENARIO_B_POSTS - 1,
        }),
        sample_every: None,
        output_path: PathBuf::new(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepRow {
    pub ring_size: usize,
    pub selfish_gain: i64,
    pub t_ideal_rank: usize,
}

/// Runs Scenario B for every ring size in `ring_sizes`, in parallel. Rows come
/// back in ring-size order.
pub fn run_scenario_b(ring_sizes: RangeInclusive<usize>, seed: u64) -> Result<Vec<SweepRow>> {
    ring_sizes
        .into_par_iter()
        .map(|k| {
            let mut config = scenario_b_config(k, seed);
            // only the final list matters for the sweep
            config.sample_every = Some(config.params.num_rounds);
            let out = run_config(&config)?;
            if out.report.prediction.verdict != Verdict::ConvergesFully {
                return Err(Error::config(format!(
                    "scenario B parameters do not leave enough rounds: {:?}",
                    out.report.prediction
                )));
            }
            Ok(SweepRow {
                ring_size: k,
                selfish_gain: out.report.selfish_gain.unwrap_or(0),
                t_ideal_rank: out.report.final_sample.t_ideal_rank,
            })
        })
        .collect()
}

/// Parses `"1..100"` or `"1..=100"` (both inclusive) or a single `"7"`.
pub fn parse_ring_range(text: &str) -> Result<RangeInclusive<usize>> {
    let text = text.trim();
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|e| Error::parse(format!("ring range {text:?}: {e}")))
    };
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (num(lo)?, num(hi.strip_prefix('=').unwrap_or(hi))?),
        None => {
            let k = num(text)?;
            (k, k)
        }
    };
    if lo > hi {
        return Err(Error::parse(format!("empty ring range {text:?}")));
    }
    Ok(lo..=hi)
}
