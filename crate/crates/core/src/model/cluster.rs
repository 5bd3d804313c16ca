use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;

use super::diversity::user_diversity;
use super::temporal::{update_lambda, LambdaState};
use super::{EngineConfig, Tweet};
use crate::compression::{CompressionError, CompressorSpec, SizedText};

/// A cluster member as kept in the recent-tweet window.
#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub id: String,
    pub user: String,
    pub timestamp: u64,
    pub text: SizedText,
    pub tokens: Vec<String>,
}

impl Member {
    pub fn new(tweet: &Tweet, text: SizedText) -> Self {
        Self {
            id: tweet.id.clone(),
            user: tweet.user.clone(),
            timestamp: tweet.timestamp,
            text,
            tokens: tweet.tokens().to_vec(),
        }
    }

    pub fn from_tweet(tweet: &Tweet, spec: &CompressorSpec) -> Result<Self, CompressionError> {
        Ok(Self::new(tweet, SizedText::new(tweet.normalized().as_bytes(), spec)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct EventMark {
    pub event_id: u64,
    pub promoted_at: u64,
    pub diversity: f64,
}

/// Tokens whose window presence changed after an insertion.
#[derive(Debug, Default)]
pub(crate) struct WindowChange {
    pub entered: Vec<String>,
    pub left: Vec<String>,
}

/// A live candidate event.
///
/// Only the `tweet_limit` most recent members are kept for distance
/// computations and token statistics. Counts, user statistics and member ids
/// cover every tweet the cluster ever received.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    id: u64,
    tweet_limit: usize,
    window: VecDeque<Member>,
    total: u64,
    user_counts: BTreeMap<String, u64>,
    diversity: f64,
    lambda: LambdaState,
    event: Option<EventMark>,
    created_at: u64,
    last_updated: u64,
    token_counts: BTreeMap<String, u32>,
    first: (String, u64),
    member_ids: Vec<String>,
}

impl Cluster {
    /// Starts a cluster with `member` as its only tweet.
    pub fn seed(id: u64, member: Member, tweet_limit: usize) -> Self {
        assert!(tweet_limit >= 1, "tweet_limit must be positive");
        let ts = member.timestamp;
        let mut cluster = Self {
            id,
            tweet_limit,
            window: VecDeque::new(),
            total: 0,
            user_counts: BTreeMap::new(),
            diversity: 0.0,
            lambda: LambdaState::start(ts),
            event: None,
            created_at: ts,
            last_updated: ts,
            token_counts: BTreeMap::new(),
            first: (member.id.clone(), ts),
            member_ids: Vec::new(),
        };
        cluster.absorb(member);
        cluster
    }

    /// Builds a cluster from tweets in arrival order.
    pub fn from_tweets(id: u64, tweets: &[Tweet], config: &EngineConfig) -> Result<Self, CompressionError> {
        let mut members = tweets.iter().map(|t| Member::from_tweet(t, &config.compressor));
        let first = members.next().ok_or(CompressionError::EmptyText)??;
        let mut cluster = Self::seed(id, first, config.tweet_limit);
        for member in members {
            cluster.insert(member?);
        }
        Ok(cluster)
    }

    /// Adds a member and refreshes every derived statistic.
    pub fn insert(&mut self, member: Member) {
        self.lambda = update_lambda(self.lambda, member.timestamp);
        self.absorb(member);
    }

    pub(crate) fn absorb(&mut self, member: Member) -> WindowChange {
        let mut change = WindowChange::default();
        self.total += 1;
        *self.user_counts.entry(member.user.clone()).or_insert(0) += 1;
        self.diversity = user_diversity(self.user_counts.values().copied())
            .expect("cluster has at least one member");
        self.last_updated = self.last_updated.max(member.timestamp);
        if member.timestamp < self.first.1 {
            self.first = (member.id.clone(), member.timestamp);
        }
        self.member_ids.push(member.id.clone());

        for token in &member.tokens {
            let count = self.token_counts.entry(token.clone()).or_insert(0);
            if *count == 0 {
                change.entered.push(token.clone());
            }
            *count += 1;
        }
        // Window stays sorted by timestamp, ties in arrival order.
        let at = self.window.partition_point(|m| m.timestamp <= member.timestamp);
        self.window.insert(at, member);
        if self.window.len() > self.tweet_limit {
            let gone = self.window.pop_front().expect("window is non-empty");
            for token in &gone.tokens {
                if let Some(count) = self.token_counts.get_mut(token) {
                    *count -= 1;
                    if *count == 0 {
                        self.token_counts.remove(token);
                        change.left.push(token.clone());
                    }
                }
            }
        }
        change.entered.retain(|t| self.token_counts.contains_key(t));
        change.left.retain(|t| !change.entered.contains(t));
        change.entered.sort_unstable();
        change.entered.dedup();
        change.left.sort_unstable();
        change.left.dedup();
        change
    }

    pub(crate) fn insert_tracked(&mut self, member: Member) -> WindowChange {
        self.lambda = update_lambda(self.lambda, member.timestamp);
        self.absorb(member)
    }

    pub(crate) fn mark_event(&mut self, event_id: u64, now: u64) -> bool {
        if self.event.is_some() {
            return false;
        }
        self.event = Some(EventMark {
            event_id,
            promoted_at: now,
            diversity: self.diversity,
        });
        true
    }

    pub(crate) fn event_mark(&self) -> Option<&EventMark> {
        self.event.as_ref()
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn tweet_limit(&self) -> usize {
        self.tweet_limit
    }

    /// Recent members, oldest first.
    pub fn window(&self) -> impl DoubleEndedIterator<Item = &Member> + ExactSizeIterator {
        self.window.iter()
    }

    /// Total tweets ever assigned, `n`.
    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn user_counts(&self) -> &BTreeMap<String, u64> {
        &self.user_counts
    }

    pub fn unique_users(&self) -> usize {
        self.user_counts.len()
    }

    /// Current `H(c)` in bits.
    pub fn diversity(&self) -> f64 {
        self.diversity
    }

    pub fn lambda(&self) -> &LambdaState {
        &self.lambda
    }

    pub fn is_event(&self) -> bool {
        self.event.is_some()
    }

    pub fn event_id(&self) -> Option<u64> {
        self.event.map(|e| e.event_id)
    }

    pub fn created_at(&self) -> u64 {
        self.created_at
    }

    pub fn last_updated(&self) -> u64 {
        self.last_updated
    }

    /// Token frequencies over the recent-tweet window.
    pub fn token_counts(&self) -> &BTreeMap<String, u32> {
        &self.token_counts
    }

    /// Id and timestamp of the earliest member.
    pub fn first_tweet(&self) -> (&str, u64) {
        (&self.first.0, self.first.1)
    }

    /// Every member id, in arrival order.
    pub fn member_ids(&self) -> &[String] {
        &self.member_ids
    }

    /// Maximum of `f` over the window, newest member first.
    pub fn max_over_window<F: FnMut(&Member) -> f64>(&self, mut f: F) -> f64 {
        self.window.iter().rev().map(&mut f).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Like [`tweet_cluster_distance`] but stops as soon as one member is
    /// farther than `cutoff`. Returns the distance when it is `<= cutoff`,
    /// plus the number of pair distances computed.
    pub(crate) fn distance_within(
        &self,
        tweet: &SizedText,
        spec: &CompressorSpec,
        cutoff: f64,
    ) -> (Option<f64>, u32) {
        let mut calls = 0;
        let mut max = f64::NEG_INFINITY;
        for member in self.window.iter().rev() {
            calls += 1;
            let d = tweet.distance_to(&member.text, spec);
            if d > cutoff {
                return (None, calls);
            }
            max = max.max(d);
        }
        (Some(max), calls)
    }
}

/// Distance from a tweet to a cluster: the largest pair distance between the
/// tweet and any member of the recent-tweet window.
pub fn tweet_cluster_distance(tweet: &SizedText, cluster: &Cluster, spec: &CompressorSpec) -> f64 {
    cluster.max_over_window(|m| tweet.distance_to(&m.text, spec))
}

/// Largest pair distance across the two recent-tweet windows, members of `a`
/// first in each concatenation.
pub fn cluster_pair_distance(a: &Cluster, b: &Cluster, spec: &CompressorSpec) -> f64 {
    a.max_over_window(|x| b.max_over_window(|y| x.text.distance_to(&y.text, spec)))
}
