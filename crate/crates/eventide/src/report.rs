//! Detection reports and run manifests.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use eventide_core::{
    match_events, Counters, Degenerate, EngineConfig, EvaluationError, Event, GroundTruth, MatchPolicy, MatchedPair,
    ThroughputReport,
};
use serde::{Deserialize, Serialize};

use crate::detect::DetectSummary;
use crate::stream::ReadStats;

/// Quality of one run against its ground truth, plus cost figures when the
/// run's manifest is available.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub detected: u64,
    pub truth: u64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub degenerate: Vec<Degenerate>,
    pub matched: Vec<MatchedPair>,
    pub unmatched_detected: Vec<u64>,
    pub missed_truth: Vec<String>,
    pub throughput: Option<ThroughputReport>,
    pub peak_active_clusters: Option<u64>,
    pub warnings: Vec<String>,
}

impl DetectionReport {
    pub fn evaluate(detected: &[Event], truth: &GroundTruth, policy: &MatchPolicy) -> Result<Self, EvaluationError> {
        let outcome = match_events(detected, truth, policy)?;
        let mut warnings = Vec::new();
        let truth_ids: BTreeSet<&str> =
            truth.events.iter().flat_map(|e| e.members.iter().map(String::as_str)).collect();
        let shares_ids = detected
            .iter()
            .any(|e| e.members.iter().any(|m| truth_ids.contains(m.as_str())));
        if !detected.is_empty() && !truth_ids.is_empty() && !shares_ids {
            warnings.push("no detected member id occurs in the ground truth; are both from the same stream?".into());
        }
        Ok(Self {
            detected: detected.len() as u64,
            truth: truth.events.len() as u64,
            precision: outcome.precision,
            recall: outcome.recall,
            f1: outcome.f1,
            degenerate: outcome.degenerate,
            matched: outcome.pairs,
            unmatched_detected: outcome.unmatched_detected,
            missed_truth: outcome.missed_truth,
            throughput: None,
            peak_active_clusters: None,
            warnings,
        })
    }

    pub fn with_run(mut self, manifest: &RunManifest) -> Self {
        match manifest.summary.throughput(&manifest.config) {
            Ok(t) => self.throughput = Some(t),
            Err(e) => self.warnings.push(format!("no throughput figures: {e}")),
        }
        self.peak_active_clusters = Some(manifest.summary.counters.peak_active_clusters);
        self
    }

    /// `key value` lines, one per field.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| writeln!(out, "{k} {v}").unwrap();
        kv("detected", self.detected.to_string());
        kv("truth", self.truth.to_string());
        kv("precision", format!("{:.6}", self.precision));
        kv("recall", format!("{:.6}", self.recall));
        kv("f1", format!("{:.6}", self.f1));
        kv(
            "degenerate",
            list(self.degenerate.iter().map(|d| match d {
                Degenerate::NoTruth => "no-truth".to_string(),
                Degenerate::NoDetections => "no-detections".to_string(),
            })),
        );
        kv("matched", list(self.matched.iter().map(|p| format!("{}:{}:{:.4}", p.detected, p.truth, p.jaccard))));
        kv("unmatched_detected", list(self.unmatched_detected.iter().map(u64::to_string)));
        kv("missed_truth", list(self.missed_truth.iter().cloned()));
        if let Some(t) = &self.throughput {
            kv("tweets", t.tweets.to_string());
            kv("processing_minutes", format!("{:.4}", t.processing_minutes));
            kv("processing_rate", format!("{:.2}", t.processing_rate));
            kv("collection_rate", t.collection_rate.map_or("-".into(), |r| format!("{r:.2}")));
            kv("mean_distance_calls", format!("{:.3}", t.mean_distance_calls));
            kv("max_distance_calls", t.max_distance_calls.to_string());
            kv("distance_call_bound", t.distance_call_bound.to_string());
        }
        if let Some(p) = self.peak_active_clusters {
            kv("peak_active_clusters", p.to_string());
        }
        for w in &self.warnings {
            kv("warning", w.clone());
        }
        out
    }
}

fn list(items: impl Iterator<Item = String>) -> String {
    let joined: Vec<String> = items.collect();
    if joined.is_empty() {
        "-".into()
    } else {
        joined.join(",")
    }
}

/// Table II style line: tweets, minutes, collection and processing rates.
pub fn throughput_table(label: &str, t: &ThroughputReport) -> String {
    format!(
        "{:<14} {:>10} {:>12} {:>16} {:>16}\n{:<14} {:>10} {:>12.2} {:>16} {:>16.2}\n",
        "run",
        "tweets",
        "minutes",
        "collection/min",
        "processing/min",
        label,
        t.tweets,
        t.processing_minutes,
        t.collection_rate.map_or("-".to_string(), |r| format!("{r:.2}")),
        t.processing_rate,
    )
}

/// Everything needed to audit or replay a detect run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: EngineConfig,
    pub inputs: Vec<String>,
    pub seed: Option<u64>,
    pub threads: usize,
    pub started_unix_ms: u64,
    pub finished_unix_ms: u64,
    pub summary: DetectSummary,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn counters(&self) -> &Counters {
        &self.summary.counters
    }

    pub fn read_stats(&self) -> ReadStats {
        self.summary.read
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifests always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use eventide_core::PlantedEvent;

    fn event(id: u64, members: &[&str]) -> Event {
        Event {
            event_id: id,
            cluster_id: id,
            first_tweet_id: members[0].into(),
            first_tweet_ts: 0,
            keywords: vec![],
            tweet_count: members.len() as u64,
            unique_users: members.len() as u64,
            diversity_at_promotion: 5.0,
            promoted_at: 0,
            closed_at: Some(9),
            members: members.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn truth(events: &[(&str, &[&str])]) -> GroundTruth {
        GroundTruth {
            events: events
                .iter()
                .map(|(id, m)| PlantedEvent {
                    event_id: id.to_string(),
                    start_ts: 0,
                    end_ts: 9,
                    members: m.iter().map(|s| s.to_string()).collect(),
                })
                .collect(),
        }
    }

    #[test]
    fn perfect_and_half() {
        let t = truth(&[("a", &["1", "2", "3"]), ("b", &["7", "8"])]);
        let perfect = DetectionReport::evaluate(
            &[event(1, &["1", "2", "3"]), event(2, &["7", "8"])],
            &t,
            &MatchPolicy::default(),
        )
        .unwrap();
        assert_eq!(perfect.f1, 1.0);
        let half = DetectionReport::evaluate(&[event(1, &["1", "2", "3"])], &t, &MatchPolicy::default()).unwrap();
        assert_eq!((half.precision, half.recall), (1.0, 0.5));
        let text = half.to_text();
        assert!(text.contains("recall 0.500000\n"));
        assert!(text.contains("missed_truth b\n"));
        assert!(text.contains("matched 1:a:1.0000\n"));
    }

    #[test]
    fn foreign_ids_warn() {
        let t = truth(&[("a", &["1", "2"])]);
        let r = DetectionReport::evaluate(&[event(1, &["x", "y"])], &t, &MatchPolicy::default()).unwrap();
        assert_eq!(r.f1, 0.0);
        assert_eq!(r.warnings.len(), 1);
        assert!(r.to_text().contains("warning "));
    }

    #[test]
    fn json_mirrors_fields() {
        let t = truth(&[("a", &["1", "2"])]);
        let r = DetectionReport::evaluate(&[event(4, &["1", "2"])], &t, &MatchPolicy::default()).unwrap();
        let json: serde_json::Value = serde_json::to_value(&r).unwrap();
        for key in ["precision", "recall", "f1", "matched", "unmatched_detected", "missed_truth", "throughput"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        let back: DetectionReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, r);
    }
}
