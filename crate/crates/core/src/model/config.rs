use thiserror::Error;

use crate::compression::{CompressionError, CompressorSpec};

/// How candidate clusters are scored against an incoming tweet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum OverlapWeighting {
    /// Number of distinct tweet tokens present in the cluster window.
    #[default]
    DistinctTokens,
    /// Sum of the window frequencies of the shared tokens.
    WindowFrequency,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("cluster_limit must be at least 1")]
    ClusterLimit,
    #[error("tweet_limit must be at least 1")]
    TweetLimit,
    #[error("distance_threshold must lie in (0, 1.5), got {0}")]
    DistanceThreshold(f64),
    #[error("diversity_threshold must be a non-negative number of bits, got {0}")]
    DiversityThreshold(f64),
    #[error("default_timeout must be positive")]
    DefaultTimeout,
    #[error("timeout_multiplier must be positive and finite, got {0}")]
    TimeoutMultiplier(f64),
    #[error("keyword_count must be at least 1")]
    KeywordCount,
    #[error(transparent)]
    Compressor(#[from] CompressionError),
}

/// Every tunable of the detector. Defaults are the published parameters.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EngineConfig {
    /// `k`: candidate clusters compared per tweet.
    pub cluster_limit: usize,
    /// `l`: most recent members used for tweet-to-cluster distance.
    pub tweet_limit: usize,
    /// `D_t`: a tweet joins a cluster only at distance `<=` this.
    pub distance_threshold: f64,
    /// `H_t`: user diversity in bits at which a cluster becomes an event.
    pub diversity_threshold: f64,
    pub compressor: CompressorSpec,
    /// Gaps needed before the mean gap drives expiry.
    pub min_inter_arrival_samples: u64,
    /// Seconds of silence tolerated when the mean gap is not usable.
    pub default_timeout: u64,
    pub timeout_multiplier: f64,
    /// Seconds a tweet may lag behind the newest timestamp seen.
    pub allowed_disorder: u64,
    pub overlap_weighting: OverlapWeighting,
    /// Terms kept as an event's description.
    pub keyword_count: usize,
    /// Entries in the per-engine `C(x)` memo.
    pub size_cache_capacity: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            cluster_limit: 100,
            tweet_limit: 1000,
            distance_threshold: 0.8,
            diversity_threshold: 5.0,
            compressor: CompressorSpec::default(),
            min_inter_arrival_samples: 2,
            default_timeout: 3600,
            timeout_multiplier: 1.0,
            allowed_disorder: 0,
            overlap_weighting: OverlapWeighting::DistinctTokens,
            keyword_count: 5,
            size_cache_capacity: 1 << 16,
        }
    }
}

impl EngineConfig {
    /// Entropy is always measured in bits.
    pub const ENTROPY_LOG_BASE: u32 = 2;

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.cluster_limit == 0 {
            return Err(ConfigError::ClusterLimit);
        }
        if self.tweet_limit == 0 {
            return Err(ConfigError::TweetLimit);
        }
        let d = self.distance_threshold;
        if !(d > 0.0 && d < 1.5) {
            return Err(ConfigError::DistanceThreshold(d));
        }
        let h = self.diversity_threshold;
        if !(h >= 0.0 && h.is_finite()) {
            return Err(ConfigError::DiversityThreshold(h));
        }
        if self.default_timeout == 0 {
            return Err(ConfigError::DefaultTimeout);
        }
        let m = self.timeout_multiplier;
        if !(m > 0.0 && m.is_finite()) {
            return Err(ConfigError::TimeoutMultiplier(m));
        }
        if self.keyword_count == 0 {
            return Err(ConfigError::KeywordCount);
        }
        self.compressor.validate()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = EngineConfig::default();
        assert_eq!(c.validate(), Ok(()));
        assert_eq!((c.cluster_limit, c.tweet_limit), (100, 1000));
        assert_eq!((c.distance_threshold, c.diversity_threshold), (0.8, 5.0));
    }

    #[test]
    fn rejects_out_of_range() {
        let bad = |f: fn(&mut EngineConfig)| {
            let mut c = EngineConfig::default();
            f(&mut c);
            c.validate().unwrap_err()
        };
        assert_eq!(bad(|c| c.cluster_limit = 0), ConfigError::ClusterLimit);
        assert_eq!(bad(|c| c.tweet_limit = 0), ConfigError::TweetLimit);
        assert_eq!(bad(|c| c.distance_threshold = 1.5), ConfigError::DistanceThreshold(1.5));
        assert_eq!(bad(|c| c.distance_threshold = 0.0), ConfigError::DistanceThreshold(0.0));
        assert_eq!(bad(|c| c.diversity_threshold = -1.0), ConfigError::DiversityThreshold(-1.0));
        assert_eq!(bad(|c| c.default_timeout = 0), ConfigError::DefaultTimeout);
        assert!(matches!(bad(|c| c.compressor.level = 42), ConfigError::Compressor(_)));
    }
}
