//! Domain types and the per-cluster metrics.

mod cluster;
mod config;
mod diversity;
mod event;
mod keywords;
mod temporal;
mod tweet;

pub use cluster::{cluster_pair_distance, tweet_cluster_distance, Cluster, Member};
pub use config::{ConfigError, EngineConfig, OverlapWeighting};
pub use diversity::user_diversity;
pub use event::Event;
pub use keywords::{top_keywords, Stoplist};
pub(crate) use temporal::deadline_for;
pub use temporal::{expiry_deadline, update_lambda, LambdaState};
pub use tweet::{normalize, tokenize, truncate_chars, Tweet, MAX_TWEET_BYTES, MAX_TWEET_CHARS};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("tweet text is empty")]
    EmptyText,
    #[error("tweet text has {chars} characters, limit is {MAX_TWEET_CHARS}")]
    TextTooLong { chars: usize },
    #[error("tweet {field} is empty")]
    EmptyField { field: &'static str },
    #[error("user diversity needs at least one user with a positive count")]
    NoUsers,
}
