//! Scoring detected events against planted ground truth, the clustering
//! objective, and throughput arithmetic.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::time::Duration;

use thiserror::Error;

use crate::compression::CompressorSpec;
use crate::model::{cluster_pair_distance, Cluster, Event};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvaluationError {
    #[error("jaccard_min must lie in [0, 1], got {0}")]
    JaccardMin(f64),
    #[error("throughput needs at least one processed tweet")]
    NoTweets,
    #[error("wall time is below timer resolution")]
    ZeroWallTime,
    #[error("objective needs at least one non-empty cluster")]
    NoClusters,
}

/// One planted event of a synthetic stream.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PlantedEvent {
    pub event_id: String,
    pub start_ts: u64,
    pub end_ts: u64,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GroundTruth {
    pub events: Vec<PlantedEvent>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MatchPolicy {
    /// Minimum member-id Jaccard for a detected event to match a planted one.
    pub jaccard_min: f64,
    /// Several detected events (sub-events) may match the same planted one.
    pub allow_many_to_one: bool,
}

impl Default for MatchPolicy {
    fn default() -> Self {
        Self {
            jaccard_min: 0.5,
            allow_many_to_one: true,
        }
    }
}

impl MatchPolicy {
    pub fn validate(&self) -> Result<(), EvaluationError> {
        if (0.0..=1.0).contains(&self.jaccard_min) {
            Ok(())
        } else {
            Err(EvaluationError::JaccardMin(self.jaccard_min))
        }
    }
}

/// Why precision or recall could not be computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Degenerate {
    /// No planted events: recall is undefined and reported as 0.
    NoTruth,
    /// No detected events: precision is undefined and reported as 0.
    NoDetections,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MatchedPair {
    pub detected: u64,
    pub truth: String,
    pub jaccard: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MatchOutcome {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Sorted by detected event id, then truth id.
    pub pairs: Vec<MatchedPair>,
    pub unmatched_detected: Vec<u64>,
    pub missed_truth: Vec<String>,
    pub degenerate: Vec<Degenerate>,
}

/// Harmonic mean of precision and recall, 0 when both are 0.
pub fn f1_score(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

fn jaccard(a: &BTreeSet<&str>, b: &BTreeSet<&str>) -> f64 {
    let inter = a.intersection(b).count();
    let union = a.len() + b.len() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

/// Matches detected events to planted ones by member-id Jaccard.
///
/// Precision is the share of detected events matching some planted event,
/// recall the share of planted events matched by at least one detection.
/// With `allow_many_to_one` off, pairs are taken greedily by descending
/// Jaccard so each planted event is claimed at most once.
pub fn match_events(
    detected: &[Event],
    truth: &GroundTruth,
    policy: &MatchPolicy,
) -> Result<MatchOutcome, EvaluationError> {
    policy.validate()?;
    let detected_sets: BTreeMap<u64, BTreeSet<&str>> = detected
        .iter()
        .map(|e| (e.event_id, e.members.iter().map(String::as_str).collect()))
        .collect();
    let truth_sets: BTreeMap<&str, BTreeSet<&str>> = truth
        .events
        .iter()
        .map(|t| (t.event_id.as_str(), t.members.iter().map(String::as_str).collect()))
        .collect();

    let mut eligible: Vec<(u64, &str, f64)> = Vec::new();
    for (&d, dset) in &detected_sets {
        for (&t, tset) in &truth_sets {
            let j = jaccard(dset, tset);
            if j >= policy.jaccard_min && j > 0.0 {
                eligible.push((d, t, j));
            }
        }
    }

    let mut pairs: Vec<(u64, &str, f64)> = if policy.allow_many_to_one {
        // Each detection keeps its best truth match (ties to the lowest id).
        let mut best: BTreeMap<u64, (&str, f64)> = BTreeMap::new();
        for &(d, t, j) in &eligible {
            match best.get(&d) {
                Some(&(_, bj)) if bj >= j => {}
                _ => {
                    best.insert(d, (t, j));
                }
            }
        }
        best.into_iter().map(|(d, (t, j))| (d, t, j)).collect()
    } else {
        eligible.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.0.cmp(&b.0)).then(a.1.cmp(b.1)));
        let mut used_d = BTreeSet::new();
        let mut used_t = BTreeSet::new();
        let mut chosen = Vec::new();
        for (d, t, j) in eligible {
            if !used_d.contains(&d) && !used_t.contains(t) {
                used_d.insert(d);
                used_t.insert(t);
                chosen.push((d, t, j));
            }
        }
        chosen
    };
    pairs.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(b.1)));

    let matched_d: BTreeSet<u64> = pairs.iter().map(|p| p.0).collect();
    let matched_t: BTreeSet<&str> = pairs.iter().map(|p| p.1).collect();
    let mut degenerate = Vec::new();
    let precision = if detected_sets.is_empty() {
        degenerate.push(Degenerate::NoDetections);
        0.0
    } else {
        matched_d.len() as f64 / detected_sets.len() as f64
    };
    let recall = if truth_sets.is_empty() {
        degenerate.push(Degenerate::NoTruth);
        0.0
    } else {
        matched_t.len() as f64 / truth_sets.len() as f64
    };

    Ok(MatchOutcome {
        precision,
        recall,
        f1: f1_score(precision, recall),
        pairs: pairs
            .iter()
            .map(|&(d, t, j)| MatchedPair {
                detected: d,
                truth: t.into(),
                jaccard: j,
            })
            .collect(),
        unmatched_detected: detected_sets.keys().copied().filter(|d| !matched_d.contains(d)).collect(),
        missed_truth: truth_sets
            .keys()
            .filter(|t| !matched_t.contains(*t))
            .map(|t| String::from(*t))
            .collect(),
        degenerate,
    })
}

/// `Σ_e (Σ_{j≠e} D(e, e_j) + H(e))` over a clustering, where `D` between
/// clusters is the largest cross-window pair distance and `H` the user
/// diversity in bits.
pub fn objective_score(clusters: &[Cluster], spec: &CompressorSpec) -> Result<f64, EvaluationError> {
    if clusters.is_empty() || clusters.iter().any(Cluster::is_empty) {
        return Err(EvaluationError::NoClusters);
    }
    let mut total = 0.0;
    for (i, e) in clusters.iter().enumerate() {
        let spread: f64 = clusters
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, other)| cluster_pair_distance(e, other, spec))
            .sum();
        total += spread + e.diversity();
    }
    Ok(total)
}

/// Processing speed in the units of a per-day throughput table.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThroughputReport {
    pub tweets: u64,
    pub processing_minutes: f64,
    /// Tweets per minute of stream time, when the stream spans any time.
    pub collection_rate: Option<f64>,
    pub processing_rate: f64,
    pub mean_distance_calls: f64,
    pub max_distance_calls: u64,
    /// `k · l`, the per-tweet ceiling on distance computations.
    pub distance_call_bound: u64,
}

impl ThroughputReport {
    pub fn within_bound(&self) -> bool {
        self.max_distance_calls <= self.distance_call_bound
    }
}

/// Input to [`throughput_report`], taken from engine counters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ThroughputInput {
    pub tweets_processed: u64,
    pub distance_calls: u64,
    pub max_distance_calls_per_tweet: u64,
    pub cluster_limit: u64,
    pub tweet_limit: u64,
    /// Seconds between the first and last tweet timestamps.
    pub stream_span_secs: u64,
}

pub fn throughput_report(input: &ThroughputInput, wall_time: Duration) -> Result<ThroughputReport, EvaluationError> {
    if input.tweets_processed == 0 {
        return Err(EvaluationError::NoTweets);
    }
    if wall_time.is_zero() {
        return Err(EvaluationError::ZeroWallTime);
    }
    let minutes = wall_time.as_secs_f64() / 60.0;
    let tweets = input.tweets_processed as f64;
    Ok(ThroughputReport {
        tweets: input.tweets_processed,
        processing_minutes: minutes,
        collection_rate: (input.stream_span_secs > 0).then(|| tweets / (input.stream_span_secs as f64 / 60.0)),
        processing_rate: tweets / minutes,
        mean_distance_calls: input.distance_calls as f64 / tweets,
        max_distance_calls: input.max_distance_calls_per_tweet,
        distance_call_bound: input.cluster_limit.saturating_mul(input.tweet_limit),
    })
}
