use std::collections::BTreeSet;

use eventide_core::{Engine, EngineConfig, Event, Tweet};
use proptest::prelude::*;

const WORDS: &[&str] = &["quake", "storm", "coast", "city", "fire", "game", "vote", "rally", "news", "alert"];

#[derive(Debug, Clone)]
struct Post {
    gap: u64,
    user: u8,
    words: Vec<usize>,
}

fn post() -> impl Strategy<Value = Post> {
    (0u64..8, 0u8..12, prop::collection::vec(0..WORDS.len(), 2..6)).prop_map(|(gap, user, words)| Post { gap, user, words })
}

fn tweets(posts: &[Post]) -> Vec<Tweet> {
    let mut ts = 1_000;
    posts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            ts += p.gap;
            let text: Vec<&str> = p.words.iter().map(|&w| WORDS[w]).collect();
            Tweet::new(format!("t{i}"), format!("u{}", p.user), ts, text.join(" ")).unwrap()
        })
        .collect()
}

fn config(k: usize, l: usize, dt: f64, ht: f64) -> EngineConfig {
    EngineConfig {
        cluster_limit: k,
        tweet_limit: l,
        distance_threshold: dt,
        diversity_threshold: ht,
        default_timeout: 30,
        ..EngineConfig::default()
    }
}

fn run(config: &EngineConfig, tweets: &[Tweet]) -> (Vec<Event>, Vec<Event>) {
    let mut engine = Engine::new(config.clone()).unwrap();
    let mut promoted = Vec::new();
    let mut closed = Vec::new();
    for t in tweets {
        let step = engine.process_tweet(t.clone()).unwrap();
        closed.extend(step.closed);
        promoted.extend(step.promotion);
    }
    closed.extend(engine.finalize());
    (promoted, closed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partition_window_index_and_bound(
        posts in prop::collection::vec(post(), 1..80),
        k in 1usize..5,
        l in 1usize..5,
        dt in 0.5f64..1.0,
    ) {
        let tweets = tweets(&posts);
        let config = config(k, l, dt, 1.5);
        let mut engine = Engine::new(config).unwrap();
        let mut timestamps = std::collections::BTreeMap::new();
        let mut order = std::collections::BTreeMap::new();
        for (i, t) in tweets.iter().enumerate() {
            timestamps.insert(t.id.clone(), t.timestamp);
            order.insert(t.id.clone(), i);
            let step = engine.process_tweet(t.clone()).unwrap();
            prop_assert!(step.candidates as usize <= k);
            prop_assert!(step.distance_calls as usize <= k * l);

            let mut seen = BTreeSet::new();
            for c in engine.clusters() {
                for id in c.member_ids() {
                    prop_assert!(seen.insert(id.clone()), "{} is in two clusters", id);
                }
                prop_assert_eq!(c.window().len() as u64, c.len().min(l as u64));
                let mut members: Vec<&String> = c.member_ids().iter().collect();
                members.sort_by_key(|id| (timestamps[*id], order[*id]));
                let newest: Vec<&String> = members.iter().rev().take(l).rev().copied().collect();
                let window: Vec<&String> = c.window().map(|m| &m.id).collect();
                prop_assert_eq!(window, newest);
            }
            prop_assert!(seen.contains(&t.id));
            prop_assert_eq!(engine.index(), &engine.rebuilt_index());
        }
        let c = engine.counters();
        prop_assert_eq!(c.tweets_processed, tweets.len() as u64);
        prop_assert_eq!(c.assigned + c.created, c.tweets_processed);
        prop_assert_eq!(c.created, c.clusters_created);
    }

    #[test]
    fn replay_is_identical(posts in prop::collection::vec(post(), 1..60)) {
        let tweets = tweets(&posts);
        let config = config(3, 4, 0.8, 1.0);
        prop_assert_eq!(run(&config, &tweets), run(&config, &tweets));
    }

    #[test]
    fn every_promotion_closes_once(posts in prop::collection::vec(post(), 1..80)) {
        let tweets = tweets(&posts);
        let (promoted, closed) = run(&config(4, 4, 0.9, 1.0), &tweets);
        let opened: Vec<u64> = promoted.iter().map(|e| e.event_id).collect();
        let mut shut: Vec<u64> = closed.iter().map(|e| e.event_id).collect();
        shut.sort_unstable();
        prop_assert_eq!(opened, shut);
        for e in &closed {
            prop_assert!(e.closed_at.unwrap() >= e.promoted_at);
            prop_assert!(e.diversity_at_promotion >= 1.0);
        }
    }
}
