//! The single-pass streaming clusterer.
//!
//! For every tweet, in stream order:
//!
//! 1. clusters whose expiry deadline has passed are removed, and those that
//!    were events are closed;
//! 2. up to `k` candidate clusters sharing a token with the tweet are pulled
//!    from the inverted index, ranked by overlap;
//! 3. the candidate with the smallest tweet-to-cluster distance at or under
//!    `D_t` receives the tweet, otherwise the tweet seeds a new cluster;
//! 4. a cluster whose user diversity reaches `H_t` is promoted, once.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

use crate::compression::{CompressionError, SizeCache, SizedText};
use crate::model::{deadline_for, top_keywords, Cluster, ConfigError, EngineConfig, Event, Member, OverlapWeighting, Stoplist, Tweet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("tweet at {timestamp} is older than the stream clock {clock} (allowed disorder {allowed}s)")]
    OutOfOrder { timestamp: u64, clock: u64, allowed: u64 },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Compression(#[from] CompressionError),
}

/// Where a tweet ended up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProcessOutcome {
    Assigned(u64),
    Created(u64),
}

impl ProcessOutcome {
    pub fn cluster_id(self) -> u64 {
        match self {
            ProcessOutcome::Assigned(id) | ProcessOutcome::Created(id) => id,
        }
    }
}

/// Everything that happened while processing one tweet.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub outcome: ProcessOutcome,
    /// Events closed by the eviction sweep that ran before assignment.
    pub closed: Vec<Event>,
    /// Promotion notice, if this tweet pushed its cluster over `H_t`.
    pub promotion: Option<Event>,
    pub candidates: u32,
    pub distance_calls: u32,
}

impl Step {
    pub fn emit_into<S: EventSink + ?Sized>(self, sink: &mut S) {
        for event in self.closed {
            sink.emit(EventRecord::Closed(event));
        }
        if let Some(event) = self.promotion {
            sink.emit(EventRecord::Promoted(event));
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum EventRecord {
    Promoted(Event),
    Closed(Event),
}

impl EventRecord {
    pub fn event(&self) -> &Event {
        match self {
            EventRecord::Promoted(e) | EventRecord::Closed(e) => e,
        }
    }
}

/// Receives promotion notices and closed events as they happen.
pub trait EventSink {
    fn emit(&mut self, record: EventRecord);
}

impl EventSink for Vec<EventRecord> {
    fn emit(&mut self, record: EventRecord) {
        self.push(record);
    }
}

/// Runs the per-candidate distance scans of one tweet.
///
/// Implementations may evaluate the jobs in any order or in parallel, but must
/// return the results indexed like the inputs.
pub trait ScoringPool {
    fn score_all<F>(&self, jobs: usize, score: F) -> Vec<(Option<f64>, u32)>
    where
        F: Fn(usize) -> (Option<f64>, u32) + Sync + Send;
}

/// Evaluates candidates one after the other on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl ScoringPool for Sequential {
    fn score_all<F>(&self, jobs: usize, score: F) -> Vec<(Option<f64>, u32)>
    where
        F: Fn(usize) -> (Option<f64>, u32) + Sync + Send,
    {
        (0..jobs).map(score).collect()
    }
}

/// A cluster sharing at least one token with the incoming tweet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CandidateScore {
    pub cluster_id: u64,
    pub overlap: u64,
    pub recency: u64,
}

impl CandidateScore {
    /// Overlap descending, then most recently updated, then lowest id.
    fn rank(&self, other: &Self) -> Ordering {
        other
            .overlap
            .cmp(&self.overlap)
            .then(other.recency.cmp(&self.recency))
            .then(self.cluster_id.cmp(&other.cluster_id))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Counters {
    pub tweets_processed: u64,
    pub assigned: u64,
    pub created: u64,
    pub clusters_created: u64,
    pub clusters_evicted: u64,
    pub events_promoted: u64,
    pub events_closed: u64,
    pub rejected_out_of_order: u64,
    pub candidates_scored: u64,
    pub distance_calls: u64,
    pub max_distance_calls_per_tweet: u64,
    pub peak_active_clusters: u64,
}

/// Expiry time with a total order so it can key a `BTreeSet`.
#[derive(Debug, Clone, Copy)]
struct Deadline(f64);

impl PartialEq for Deadline {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Deadline {}
impl PartialOrd for Deadline {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Deadline {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Engine state plus the configuration it runs under.
#[derive(Debug, Clone)]
pub struct Engine {
    config: EngineConfig,
    stoplist: Stoplist,
    clusters: BTreeMap<u64, Cluster>,
    index: BTreeMap<String, BTreeSet<u64>>,
    deadlines: BTreeSet<(Deadline, u64)>,
    deadline_of: BTreeMap<u64, Deadline>,
    cache: SizeCache,
    clock: Option<u64>,
    next_cluster_id: u64,
    next_event_id: u64,
    counters: Counters,
}

impl Engine {
    pub fn new(config: EngineConfig) -> Result<Self, ConfigError> {
        Self::with_stoplist(config, Stoplist::builtin())
    }

    pub fn with_stoplist(config: EngineConfig, stoplist: Stoplist) -> Result<Self, ConfigError> {
        config.validate()?;
        Ok(Self {
            cache: SizeCache::new(config.size_cache_capacity),
            config,
            stoplist,
            clusters: BTreeMap::new(),
            index: BTreeMap::new(),
            deadlines: BTreeSet::new(),
            deadline_of: BTreeMap::new(),
            clock: None,
            next_cluster_id: 1,
            next_event_id: 1,
            counters: Counters::default(),
        })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn counters(&self) -> &Counters {
        &self.counters
    }

    /// Timestamp of the newest tweet processed so far.
    pub fn clock(&self) -> Option<u64> {
        self.clock
    }

    pub fn active_clusters(&self) -> usize {
        self.clusters.len()
    }

    pub fn clusters(&self) -> impl Iterator<Item = &Cluster> {
        self.clusters.values()
    }

    pub fn cluster(&self, id: u64) -> Option<&Cluster> {
        self.clusters.get(&id)
    }

    pub fn index(&self) -> &BTreeMap<String, BTreeSet<u64>> {
        &self.index
    }

    /// The inverted index as it would look if rebuilt from the active
    /// clusters' windows.
    pub fn rebuilt_index(&self) -> BTreeMap<String, BTreeSet<u64>> {
        let mut index: BTreeMap<String, BTreeSet<u64>> = BTreeMap::new();
        for cluster in self.clusters.values() {
            for token in cluster.token_counts().keys() {
                index.entry(token.clone()).or_default().insert(cluster.id());
            }
        }
        index
    }

    /// Ranked candidate clusters for `tweet`, at most `cluster_limit` of them.
    pub fn candidate_clusters(&self, tweet: &Tweet) -> Vec<CandidateScore> {
        let mut distinct: Vec<&str> = tweet.tokens().iter().map(String::as_str).collect();
        distinct.sort_unstable();
        distinct.dedup();

        let mut overlap: BTreeMap<u64, u64> = BTreeMap::new();
        for token in distinct {
            let Some(posting) = self.index.get(token) else { continue };
            for &id in posting {
                let weight = match self.config.overlap_weighting {
                    OverlapWeighting::DistinctTokens => 1,
                    OverlapWeighting::WindowFrequency => {
                        self.clusters[&id].token_counts().get(token).copied().unwrap_or(0) as u64
                    }
                };
                *overlap.entry(id).or_insert(0) += weight;
            }
        }
        let mut ranked: Vec<CandidateScore> = overlap
            .into_iter()
            .filter(|&(_, o)| o >= 1)
            .map(|(id, o)| CandidateScore {
                cluster_id: id,
                overlap: o,
                recency: self.clusters[&id].last_updated(),
            })
            .collect();
        ranked.sort_by(CandidateScore::rank);
        ranked.truncate(self.config.cluster_limit);
        ranked
    }

    pub fn process_tweet(&mut self, tweet: Tweet) -> Result<Step, EngineError> {
        self.process_tweet_with(tweet, &Sequential)
    }

    /// Processes one tweet, scoring candidates through `pool`.
    ///
    /// The result is identical for every pool: only the per-candidate scans
    /// are delegated, the argmin and all mutations happen here in rank order.
    pub fn process_tweet_with<P: ScoringPool>(&mut self, tweet: Tweet, pool: &P) -> Result<Step, EngineError> {
        let ts = tweet.timestamp;
        if let Some(clock) = self.clock {
            if ts.saturating_add(self.config.allowed_disorder) < clock {
                self.counters.rejected_out_of_order += 1;
                return Err(EngineError::OutOfOrder {
                    timestamp: ts,
                    clock,
                    allowed: self.config.allowed_disorder,
                });
            }
        }
        let spec = self.config.compressor;
        let text = SizedText::cached(tweet.normalized().as_bytes(), &spec, &mut self.cache)?;

        let now = self.clock.map_or(ts, |c| c.max(ts));
        self.clock = Some(now);
        let closed = self.evict_inactive(now);

        let candidates = self.candidate_clusters(&tweet);
        let threshold = self.config.distance_threshold;
        let scores = {
            let clusters = &self.clusters;
            let text = &text;
            let candidates = &candidates;
            pool.score_all(candidates.len(), move |i| {
                clusters[&candidates[i].cluster_id].distance_within(text, &spec, threshold)
            })
        };
        let mut calls = 0u32;
        let mut best: Option<(u64, f64)> = None;
        for (candidate, (distance, n)) in candidates.iter().zip(&scores) {
            calls += n;
            if let Some(d) = *distance {
                if best.is_none_or(|(_, b)| d < b) {
                    best = Some((candidate.cluster_id, d));
                }
            }
        }

        let member = Member::new(&tweet, text);
        let (outcome, promotion) = match best {
            Some((id, _)) => {
                let promotion = self.assign(id, member, now);
                self.counters.assigned += 1;
                (ProcessOutcome::Assigned(id), promotion)
            }
            None => {
                let id = self.create(member);
                self.counters.created += 1;
                (ProcessOutcome::Created(id), None)
            }
        };

        let c = &mut self.counters;
        c.tweets_processed += 1;
        c.candidates_scored += candidates.len() as u64;
        c.distance_calls += calls as u64;
        c.max_distance_calls_per_tweet = c.max_distance_calls_per_tweet.max(calls as u64);
        c.peak_active_clusters = c.peak_active_clusters.max(self.clusters.len() as u64);

        Ok(Step {
            outcome,
            closed,
            promotion,
            candidates: candidates.len() as u32,
            distance_calls: calls,
        })
    }

    /// Processes `tweet` and forwards every resulting record to `sink`.
    pub fn feed<P: ScoringPool, S: EventSink + ?Sized>(
        &mut self,
        tweet: Tweet,
        pool: &P,
        sink: &mut S,
    ) -> Result<ProcessOutcome, EngineError> {
        let step = self.process_tweet_with(tweet, pool)?;
        let outcome = step.outcome;
        step.emit_into(sink);
        Ok(outcome)
    }

    fn create(&mut self, member: Member) -> u64 {
        let id = self.next_cluster_id;
        self.next_cluster_id += 1;
        let cluster = Cluster::seed(id, member, self.config.tweet_limit);
        for token in cluster.token_counts().keys() {
            self.index.entry(token.clone()).or_default().insert(id);
        }
        self.set_deadline(id, deadline_for(cluster.lambda(), &self.config));
        self.clusters.insert(id, cluster);
        self.counters.clusters_created += 1;
        id
    }

    fn assign(&mut self, id: u64, member: Member, now: u64) -> Option<Event> {
        let cluster = self.clusters.get_mut(&id).expect("candidate is active");
        let change = cluster.insert_tracked(member);
        let deadline = deadline_for(cluster.lambda(), &self.config);
        let promote = !cluster.is_event() && cluster.diversity() >= self.config.diversity_threshold;
        if promote {
            cluster.mark_event(self.next_event_id, now);
            self.next_event_id += 1;
            self.counters.events_promoted += 1;
        }

        for token in change.entered {
            self.index.entry(token).or_default().insert(id);
        }
        for token in change.left {
            self.unindex(&token, id);
        }
        self.set_deadline(id, deadline);

        promote.then(|| self.snapshot(&self.clusters[&id], None))
    }

    fn unindex(&mut self, token: &str, id: u64) {
        if let Some(posting) = self.index.get_mut(token) {
            posting.remove(&id);
            if posting.is_empty() {
                self.index.remove(token);
            }
        }
    }

    fn set_deadline(&mut self, id: u64, deadline: f64) {
        let deadline = Deadline(deadline);
        if let Some(old) = self.deadline_of.insert(id, deadline) {
            self.deadlines.remove(&(old, id));
        }
        self.deadlines.insert((deadline, id));
    }

    fn remove_cluster(&mut self, id: u64) -> Cluster {
        let cluster = self.clusters.remove(&id).expect("cluster is active");
        if let Some(deadline) = self.deadline_of.remove(&id) {
            self.deadlines.remove(&(deadline, id));
        }
        for token in cluster.token_counts().keys() {
            self.unindex(token, id);
        }
        cluster
    }

    fn snapshot(&self, cluster: &Cluster, closed_at: Option<u64>) -> Event {
        let mark = cluster.event_mark().expect("only event clusters are snapshotted");
        let (first_id, first_ts) = cluster.first_tweet();
        Event {
            event_id: mark.event_id,
            cluster_id: cluster.id(),
            first_tweet_id: first_id.into(),
            first_tweet_ts: first_ts,
            keywords: top_keywords(cluster, self.config.keyword_count, &self.stoplist),
            tweet_count: cluster.len(),
            unique_users: cluster.unique_users() as u64,
            diversity_at_promotion: mark.diversity,
            promoted_at: mark.promoted_at,
            closed_at,
            members: cluster.member_ids().to_vec(),
        }
    }

    /// Removes every cluster whose expiry deadline lies strictly before
    /// `now`. Event clusters come back as closed events, in deadline order.
    pub fn evict_inactive(&mut self, now: u64) -> Vec<Event> {
        let mut closed = Vec::new();
        while let Some(&(deadline, id)) = self.deadlines.first() {
            if deadline.0 >= now as f64 {
                break;
            }
            let cluster = self.remove_cluster(id);
            self.counters.clusters_evicted += 1;
            if cluster.is_event() {
                self.counters.events_closed += 1;
                closed.push(self.snapshot(&cluster, Some(now)));
            }
        }
        closed
    }

    /// Closes all remaining event clusters at the current clock and empties
    /// the engine. Counters survive.
    pub fn finalize(&mut self) -> Vec<Event> {
        let now = self.clock.unwrap_or(0);
        let clusters = core::mem::take(&mut self.clusters);
        self.index.clear();
        self.deadlines.clear();
        self.deadline_of.clear();
        let closed: Vec<Event> = clusters
            .values()
            .filter(|c| c.is_event())
            .map(|c| self.snapshot(c, Some(now)))
            .collect();
        self.counters.events_closed += closed.len() as u64;
        closed
    }

    /// Stream time at which cluster `id` expires.
    pub fn deadline(&self, id: u64) -> Option<f64> {
        self.deadline_of.get(&id).map(|d| d.0)
    }
}
