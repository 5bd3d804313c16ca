//! Single-pass event detection over streams of short, informal text messages.
//!
//! Messages are grouped incrementally by a compression distance
//! `C(xy) / (C(x) + C(y))`, where `C` is the size of a raw DEFLATE stream.
//! Each cluster keeps a bounded window of its most recent members, an
//! exponential inter-arrival estimate that decides when it goes quiet, and the
//! Shannon entropy of its per-user message counts. A cluster whose user
//! diversity crosses a threshold is promoted to an [`Event`].
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the synthetic
//! stream generator, wall-clock benchmarking and the command line live in the
//! `eventide` companion crate.
//!
//! ```
//! use eventide_core::{Engine, EngineConfig, Tweet};
//!
//! let mut engine = Engine::new(EngineConfig::default()).unwrap();
//! let tweet = Tweet::new("1", "alice", 100, "earthquake felt in the city center").unwrap();
//! let step = engine.process_tweet(tweet).unwrap();
//! assert_eq!(step.outcome.cluster_id(), 1);
//! ```

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod compression;
pub mod engine;
pub mod evaluation;
pub mod model;

pub use compression::{
    compress, compressed_size, pair_distance, Algorithm, CompressionError, CompressorSpec,
    SizeCache, SizedText,
};
pub use engine::{
    CandidateScore, Counters, Engine, EngineError, EventRecord, EventSink, ProcessOutcome,
    ScoringPool, Sequential, Step,
};
pub use evaluation::{
    f1_score, match_events, objective_score, throughput_report, Degenerate, EvaluationError,
    GroundTruth, MatchOutcome, MatchPolicy, MatchedPair, PlantedEvent, ThroughputInput,
    ThroughputReport,
};
pub use model::{
    cluster_pair_distance, expiry_deadline, top_keywords, tweet_cluster_distance, update_lambda,
    user_diversity, Cluster, ConfigError, EngineConfig, Event, LambdaState, Member, ModelError,
    OverlapWeighting, Stoplist, Tweet,
};
