//! Scenario configuration files.
//!
//! A config is a TOML document. Real-valued parameters may be written either
//! as numbers or as fraction strings such as `"3/432000"`:
//!
//! ```toml
//! seed = 1
//! honest_mode = "paced"        # paced | full-power-only | eager
//! attention = "skip-voted"     # skip-voted | fixed (optional)
//! steem_power = 1.0            # or one value per player: [1.0, 2.0, ...]
//! sample_every = 400           # optional, defaults to max(1, R / 500)
//! output_path = "out/run"
//!
//! [params]
//! num_players = 270
//! num_rounds = 200000
//! num_posts = 70
//! attention_span = 10
//! vote_scale = "1/50"
//! vote_offset = 1e-4
//! regen = "3/432000"
//!
//! [selfish]                    # optional
//! ring_size = 10
//! target_post = 69
//! ```
//!
//! Ring members are the last `ring_size` player ids.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize};

use crate::analysis::regen_threshold;
use crate::error::{Error, Result};
use crate::model::{PostId, SystemParams};
use crate::strategy::{Attention, HonestMode, HonestPolicyConfig};

/// Parses a decimal number or a `p/q` fraction of two decimals.
pub fn parse_real(text: &str) -> Result<f64> {
    let text = text.trim();
    let value = match text.split_once('/') {
        Some((num, den)) => {
            let num = parse_decimal(num)?;
            let den = parse_decimal(den)?;
            if den == 0.0 {
                return Err(Error::parse(format!("zero denominator in {text:?}")));
            }
            num / den
        }
        None => parse_decimal(text)?,
    };
    if !value.is_finite() {
        return Err(Error::parse(format!("{text:?} is not finite")));
    }
    Ok(value)
}

fn parse_decimal(text: &str) -> Result<f64> {
    let text = text.trim();
    // f64::from_str also takes "inf" and "NaN"
    if text.is_empty()
        || !text
            .chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'))
    {
        return Err(Error::parse(format!("not a number: {text:?}")));
    }
    text.parse::<f64>()
        .map_err(|e| Error::parse(format!("{text:?}: {e}")))
}

fn real<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(i64),
        Float(f64),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Int(i) => Ok(i as f64),
        Raw::Float(f) => Ok(f),
        Raw::Text(s) => parse_real(&s).map_err(serde::de::Error::custom),
    }
}

/// Mirror of [`SystemParams`] that accepts fraction strings for the reals.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsFile {
    num_players: usize,
    num_rounds: u64,
    num_posts: usize,
    attention_span: usize,
    #[serde(deserialize_with = "real")]
    vote_scale: f64,
    #[serde(deserialize_with = "real")]
    vote_offset: f64,
    #[serde(deserialize_with = "real")]
    regen: f64,
}

impl From<ParamsFile> for SystemParams {
    fn from(p: ParamsFile) -> Self {
        SystemParams {
            num_players: p.num_players,
            num_rounds: p.num_rounds,
            num_posts: p.num_posts,
            attention_span: p.attention_span,
            vote_scale: p.vote_scale,
            vote_offset: p.vote_offset,
            regen: p.regen,
        }
    }
}

impl From<&SystemParams> for ParamsFile {
    fn from(p: &SystemParams) -> Self {
        ParamsFile {
            num_players: p.num_players,
            num_rounds: p.num_rounds,
            num_posts: p.num_posts,
            attention_span: p.attention_span,
            vote_scale: p.vote_scale,
            vote_offset: p.vote_offset,
            regen: p.regen,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SteemPowerSpec {
    Uniform(f64),
    Explicit(Vec<f64>),
}

impl SteemPowerSpec {
    pub fn resolve(&self, num_players: usize) -> Result<Vec<f64>> {
        match self {
            SteemPowerSpec::Uniform(v) => Ok(vec![*v; num_players]),
            SteemPowerSpec::Explicit(vs) if vs.len() == num_players => Ok(vs.clone()),
            SteemPowerSpec::Explicit(vs) => Err(Error::config(format!(
                "steem_power lists {} values for {num_players} players",
                vs.len()
            ))),
        }
    }
}

/// Honest player behaviour as named in config files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HonestModeName {
    /// Full power, one vote per regeneration threshold.
    #[default]
    Paced,
    FullPowerOnly,
    Eager,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelfishConfig {
    pub ring_size: usize,
    pub target_post: PostId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub params: SystemParams,
    pub seed: u64,
    pub steem_power: SteemPowerSpec,
    pub honest_mode: HonestModeName,
    pub attention: Attention,
    pub selfish: Option<SelfishConfig>,
    pub sample_every: Option<u64>,
    pub output_path: PathBuf,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct ConfigFile {
    seed: u64,
    #[serde(default)]
    honest_mode: HonestModeName,
    #[serde(default)]
    attention: Attention,
    steem_power: SteemPowerSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sample_every: Option<u64>,
    output_path: PathBuf,
    params: ParamsFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    selfish: Option<SelfishConfig>,
}

impl From<ConfigFile> for ScenarioConfig {
    fn from(f: ConfigFile) -> Self {
        ScenarioConfig {
            params: f.params.into(),
            seed: f.seed,
            steem_power: f.steem_power,
            honest_mode: f.honest_mode,
            attention: f.attention,
            selfish: f.selfish,
            sample_every: f.sample_every,
            output_path: f.output_path,
        }
    }
}

impl From<&ScenarioConfig> for ConfigFile {
    fn from(c: &ScenarioConfig) -> Self {
        ConfigFile {
            seed: c.seed,
            honest_mode: c.honest_mode,
            attention: c.attention,
            steem_power: c.steem_power.clone(),
            sample_every: c.sample_every,
            output_path: c.output_path.clone(),
            params: (&c.params).into(),
            selfish: c.selfish,
        }
    }
}

impl ScenarioConfig {
    /// Parses and validates a config document.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| Error::parse(e.to_string()))?;
        let config = ScenarioConfig::from(file);
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// The config as a TOML document that parses back to `self`.
    pub fn to_toml_string(&self) -> String {
        toml::to_string(&ConfigFile::from(self)).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        let sps = self.steem_powers()?;
        if let Some(bad) = sps.iter().find(|s| !(s.is_finite() && **s >= 0.0)) {
            return Err(Error::config(format!("invalid steem power {bad}")));
        }
        if let Some(s) = &self.selfish {
            if s.ring_size > self.params.num_players {
                return Err(Error::config(format!(
                    "ring_size {} exceeds num_players {}",
                    s.ring_size, self.params.num_players
                )));
            }
            if s.target_post >= self.params.num_posts {
                return Err(Error::InvalidPost {
                    post: s.target_post,
                    num_posts: self.params.num_posts,
                });
            }
        }
        if self.sample_every == Some(0) {
            return Err(Error::config("sample_every must be at least 1"));
        }
        Ok(())
    }

    pub fn steem_powers(&self) -> Result<Vec<f64>> {
        self.steem_power.resolve(self.params.num_players)
    }

    /// `sample_every`, or `max(1, R / 500)` when unset.
    pub fn effective_sample_every(&self) -> u64 {
        self.sample_every
            .unwrap_or((self.params.num_rounds / 500).max(1))
    }

    pub fn ring_size(&self) -> usize {
        self.selfish.map_or(0, |s| s.ring_size)
    }

    /// Policy settings for the honest players of this config.
    pub fn honest_policy(&self) -> Result<HonestPolicyConfig> {
        let mode = match self.honest_mode {
            HonestModeName::FullPowerOnly => HonestMode::FullPowerOnly,
            HonestModeName::Eager => HonestMode::Eager,
            HonestModeName::Paced => HonestMode::Paced {
                gap: regen_threshold(
                    self.params.vote_scale,
                    self.params.vote_offset,
                    self.params.regen,
                )?,
            },
        };
        Ok(HonestPolicyConfig {
            mode,
            attention: self.attention,
        })
    }
}
