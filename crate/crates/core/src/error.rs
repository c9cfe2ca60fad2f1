use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter set, instance, or config violates a structural invariant.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid post id {post} (list has {num_posts} posts)")]
    InvalidPost { post: usize, num_posts: usize },

    #[error("invalid player id {player} ({num_players} players)")]
    InvalidPlayer { player: usize, num_players: usize },

    /// Two orders handed to a metric do not contain the same post ids.
    #[error("orders are not permutations of the same post set: {0}")]
    OrderMismatch(String),

    #[error("rank correlation needs at least 2 posts, got {0}")]
    TooFewPosts(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad input rather than by I/O or a broken
    /// internal invariant.
    pub fn is_config(&self) -> bool {
        !matches!(self, Error::Io { .. } | Error::OrderMismatch(_))
    }
}
