use alloc::string::String;
use alloc::vec::Vec;

/// A cluster promoted to an event.
///
/// Promotion notices carry `closed_at: None`; the record written when the
/// cluster goes inactive or the stream ends carries the close time and the
/// final statistics.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Event {
    pub event_id: u64,
    pub cluster_id: u64,
    pub first_tweet_id: String,
    pub first_tweet_ts: u64,
    pub keywords: Vec<String>,
    pub tweet_count: u64,
    pub unique_users: u64,
    pub diversity_at_promotion: f64,
    pub promoted_at: u64,
    pub closed_at: Option<u64>,
    pub members: Vec<String>,
}

impl Event {
    pub fn is_closed(&self) -> bool {
        self.closed_at.is_some()
    }
}
