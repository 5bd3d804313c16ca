//! Replays a stream file through the engine.

use std::io::{self, BufRead};
use std::time::{Duration, Instant};

use eventide_core::{
    throughput_report, Counters, Engine, EngineConfig, EngineError, EvaluationError, EventRecord, EventSink,
    ScoringPool, ThroughputInput, ThroughputReport,
};
use serde::{Deserialize, Serialize};

use crate::stream::{ReadStats, StreamReader};

/// What happened during one pass over a stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectSummary {
    pub read: ReadStats,
    /// Valid lines the engine refused because they arrived too late.
    pub out_of_order: u64,
    pub counters: Counters,
    pub first_ts: Option<u64>,
    pub last_ts: Option<u64>,
    pub wall_seconds: f64,
    /// The first rejected lines, `line N: reason`.
    pub diagnostics: Vec<String>,
}

impl DetectSummary {
    pub fn rejected(&self) -> u64 {
        self.read.rejected + self.out_of_order
    }

    pub fn stream_span_secs(&self) -> u64 {
        match (self.first_ts, self.last_ts) {
            (Some(a), Some(b)) => b.saturating_sub(a),
            _ => 0,
        }
    }

    pub fn throughput(&self, config: &EngineConfig) -> Result<ThroughputReport, EvaluationError> {
        let input = ThroughputInput {
            tweets_processed: self.counters.tweets_processed,
            distance_calls: self.counters.distance_calls,
            max_distance_calls_per_tweet: self.counters.max_distance_calls_per_tweet,
            cluster_limit: config.cluster_limit as u64,
            tweet_limit: config.tweet_limit as u64,
            stream_span_secs: self.stream_span_secs(),
        };
        throughput_report(&input, Duration::from_secs_f64(self.wall_seconds))
    }
}

const KEPT_DIAGNOSTICS: usize = 20;

/// Feeds every valid line of `input` to `engine`, then closes the remaining
/// events. Bad and out-of-order lines are counted and skipped.
///
/// Wall time covers parsing and clustering, not the caller's setup.
pub fn detect<R, P, S>(input: R, engine: &mut Engine, pool: &P, sink: &mut S) -> io::Result<DetectSummary>
where
    R: BufRead,
    P: ScoringPool,
    S: EventSink + ?Sized,
{
    let started = Instant::now();
    let mut reader = StreamReader::new(input);
    let mut out_of_order = 0;
    let mut late = Vec::new();
    let mut first_ts = None;
    let mut last_ts = None;
    for tweet in reader.by_ref() {
        let tweet = tweet?;
        let ts = tweet.timestamp;
        let id = tweet.id.clone();
        match engine.feed(tweet, pool, sink) {
            Ok(_) => {
                first_ts.get_or_insert(ts);
                last_ts = Some(last_ts.map_or(ts, |l: u64| l.max(ts)));
            }
            Err(EngineError::OutOfOrder { .. }) => {
                out_of_order += 1;
                if late.len() < KEPT_DIAGNOSTICS {
                    late.push(format!("tweet {id}: timestamp {ts} is behind the stream clock"));
                }
            }
            Err(e) => return Err(io::Error::other(e)),
        }
    }
    for event in engine.finalize() {
        sink.emit(EventRecord::Closed(event));
    }
    let wall_seconds = started.elapsed().as_secs_f64();
    let mut diagnostics: Vec<String> = reader.errors().iter().take(KEPT_DIAGNOSTICS).map(|e| e.to_string()).collect();
    diagnostics.extend(late);
    Ok(DetectSummary {
        read: reader.stats(),
        out_of_order,
        counters: *engine.counters(),
        first_ts,
        last_ts,
        wall_seconds,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::events::final_events;
    use eventide_core::Sequential;

    #[test]
    fn counts_and_closes() {
        let input = "\
{\"id\":\"1\",\"user\":\"a\",\"ts\":10,\"text\":\"hello there world\"}
garbage
{\"id\":\"2\",\"user\":\"b\",\"ts\":12,\"text\":\"hello there world\"}
{\"id\":\"3\",\"user\":\"c\",\"ts\":5,\"text\":\"too late for this\"}
";
        let config = EngineConfig { diversity_threshold: 1.0, ..EngineConfig::default() };
        let mut engine = Engine::new(config.clone()).unwrap();
        let mut sink: Vec<EventRecord> = Vec::new();
        let summary = detect(input.as_bytes(), &mut engine, &Sequential, &mut sink).unwrap();
        assert_eq!(summary.read.valid, 3);
        assert_eq!(summary.read.rejected, 1);
        assert_eq!(summary.out_of_order, 1);
        assert_eq!(summary.rejected(), 2);
        assert_eq!(summary.counters.tweets_processed, 2);
        assert_eq!(summary.stream_span_secs(), 2);
        assert_eq!(summary.diagnostics.len(), 2);
        assert!(summary.diagnostics[0].starts_with("line 2:"));
        let events = final_events(&sink);
        assert_eq!(events.len(), 1);
        assert_eq!(events[0].members, ["1", "2"]);
        assert_eq!(events[0].closed_at, Some(12));
    }

    #[test]
    fn empty_stream() {
        let mut engine = Engine::new(EngineConfig::default()).unwrap();
        let mut sink: Vec<EventRecord> = Vec::new();
        let summary = detect(&b""[..], &mut engine, &Sequential, &mut sink).unwrap();
        assert!(sink.is_empty());
        assert_eq!(summary.counters, Counters::default());
        assert!(summary.throughput(&EngineConfig::default()).is_err());
    }
}
