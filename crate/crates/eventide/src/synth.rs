//! Deterministic synthetic streams with planted events.
//!
//! A stream mixes three kinds of traffic:
//!
//! * planted events: paraphrases of a small phrase pool posted by a fixed
//!   number of distinct users inside a time window;
//! * fans: the same machinery with a single user, a burst of near-identical
//!   posts that looks like an event by volume but has no user diversity;
//! * background chatter: random words from a Zipf-weighted pseudo-word
//!   vocabulary, posted by users drawn from a skewed population.
//!
//! Everything is derived from the spec's seed, so a spec always produces the
//! same bytes.

use std::collections::BTreeSet;

use eventide_core::model::{truncate_chars, MAX_TWEET_CHARS};
use eventide_core::{GroundTruth, PlantedEvent};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stream::StreamRecord;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("{field} must be non-negative and finite, got {value}")]
    Negative { field: String, value: f64 },
    #[error("{field} must be at least {min}")]
    TooSmall { field: String, min: u64 },
    #[error("{field}: {reason}")]
    Inconsistent { field: String, reason: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Arrival {
    /// Sorted uniform draws over the window: a Poisson process conditioned
    /// on the tweet count.
    #[default]
    Poisson,
    /// Evenly spaced, `duration_s / (tweet_count - 1)` apart (integer
    /// division).
    Regular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlantedKind {
    /// A real event; listed in the ground truth.
    #[default]
    Event,
    /// A single-user burst; listed as a decoy, never as ground truth.
    Fan,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantedSpec {
    pub event_id: String,
    pub start_ts: u64,
    pub duration_s: u64,
    pub tweet_count: u64,
    pub unique_users: u64,
    /// Template phrases. Generated from pseudo-words when empty.
    #[serde(default)]
    pub phrases: Vec<String>,
    /// Per-token probability of a swap, drop or typo.
    pub noise_rate: f64,
    #[serde(default)]
    pub arrival: Arrival,
    #[serde(default)]
    pub kind: PlantedKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackgroundSpec {
    /// Chatter tweets per second over `[origin_ts, origin_ts + span_s)`.
    pub rate: f64,
    pub span_s: u64,
    pub vocabulary_size: usize,
    pub user_population: usize,
    /// Zipf exponent of how often each user posts.
    pub user_skew: f64,
    /// Zipf exponent of word frequencies.
    #[serde(default = "default_word_skew")]
    pub word_skew: f64,
    #[serde(default = "default_min_words")]
    pub min_words: usize,
    #[serde(default = "default_max_words")]
    pub max_words: usize,
    /// Pad every chatter text with more words and cut it to exactly this
    /// many characters.
    #[serde(default)]
    pub fill_chars: Option<usize>,
}

fn default_word_skew() -> f64 {
    1.0
}
fn default_min_words() -> usize {
    5
}
fn default_max_words() -> usize {
    14
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub seed: u64,
    pub origin_ts: u64,
    #[serde(default)]
    pub events: Vec<PlantedSpec>,
    pub background: BackgroundSpec,
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<(), SpecError> {
        let non_negative = |field: String, value: f64| {
            if value >= 0.0 && value.is_finite() {
                Ok(())
            } else {
                Err(SpecError::Negative { field, value })
            }
        };
        let bg = &self.background;
        non_negative("background.rate".into(), bg.rate)?;
        non_negative("background.user_skew".into(), bg.user_skew)?;
        non_negative("background.word_skew".into(), bg.word_skew)?;
        if bg.vocabulary_size < 1 {
            return Err(SpecError::TooSmall {
                field: "background.vocabulary_size".into(),
                min: 1,
            });
        }
        if bg.user_population < 1 {
            return Err(SpecError::TooSmall {
                field: "background.user_population".into(),
                min: 1,
            });
        }
        if bg.min_words < 1 || bg.max_words < bg.min_words {
            return Err(SpecError::Inconsistent {
                field: "background.min_words".into(),
                reason: "need 1 <= min_words <= max_words",
            });
        }
        if bg.rate > 0.0 && bg.span_s == 0 {
            return Err(SpecError::Inconsistent {
                field: "background.span_s".into(),
                reason: "chatter needs a positive span",
            });
        }
        let mut ids = BTreeSet::new();
        for (i, e) in self.events.iter().enumerate() {
            let field = |name: &str| format!("events[{i}].{name}");
            non_negative(field("noise_rate"), e.noise_rate)?;
            if e.noise_rate > 1.0 {
                return Err(SpecError::Inconsistent {
                    field: field("noise_rate"),
                    reason: "is a probability",
                });
            }
            if e.tweet_count < 1 {
                return Err(SpecError::TooSmall {
                    field: field("tweet_count"),
                    min: 1,
                });
            }
            if e.unique_users < 1 {
                return Err(SpecError::TooSmall {
                    field: field("unique_users"),
                    min: 1,
                });
            }
            if e.unique_users > e.tweet_count {
                return Err(SpecError::Inconsistent {
                    field: field("unique_users"),
                    reason: "exceeds tweet_count",
                });
            }
            if e.kind == PlantedKind::Fan && e.unique_users != 1 {
                return Err(SpecError::Inconsistent {
                    field: field("unique_users"),
                    reason: "a fan burst has exactly one user",
                });
            }
            if e.phrases.iter().any(|p| p.split_whitespace().next().is_none()) {
                return Err(SpecError::Inconsistent {
                    field: field("phrases"),
                    reason: "phrases must contain a word",
                });
            }
            if !ids.insert(e.event_id.as_str()) {
                return Err(SpecError::Inconsistent {
                    field: field("event_id"),
                    reason: "duplicate id",
                });
            }
            if e.event_id.is_empty() || e.event_id.contains(char::is_whitespace) {
                return Err(SpecError::Inconsistent {
                    field: field("event_id"),
                    reason: "must be a non-empty word",
                });
            }
        }
        Ok(())
    }
}

/// A generated stream with its answer key.
#[derive(Debug, Clone, PartialEq)]
pub struct Synthetic {
    /// Sorted by timestamp.
    pub records: Vec<StreamRecord>,
    pub truth: GroundTruth,
    /// Fan bursts, which a detector must not report.
    pub decoys: GroundTruth,
}

const CONSONANTS: &[&str] = &["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "ch", "sh"];
const VOWELS: &[&str] = &["a", "e", "i", "o", "u", "ai", "ou"];

fn pseudo_word(rng: &mut ChaCha8Rng) -> String {
    let syllables = rng.random_range(2..=4);
    (0..syllables)
        .map(|_| {
            let c = CONSONANTS.choose(rng).unwrap();
            let v = VOWELS.choose(rng).unwrap();
            format!("{c}{v}")
        })
        .collect()
}

fn vocabulary(rng: &mut ChaCha8Rng, size: usize) -> Vec<String> {
    let mut seen = BTreeSet::new();
    let mut words = Vec::with_capacity(size);
    while words.len() < size {
        let w = pseudo_word(rng);
        if seen.insert(w.clone()) {
            words.push(w);
        }
    }
    words
}

/// Zipf rank in `0..n`.
fn zipf_index(rng: &mut ChaCha8Rng, dist: &Option<Zipf<f64>>, n: usize) -> usize {
    match dist {
        Some(z) => (z.sample(rng) as usize).clamp(1, n) - 1,
        None => rng.random_range(0..n),
    }
}

fn zipf(n: usize, skew: f64) -> Option<Zipf<f64>> {
    (skew > 0.0 && n > 1).then(|| Zipf::new(n as f64, skew).expect("validated zipf parameters"))
}

fn typo(word: &str, rng: &mut ChaCha8Rng) -> String {
    let mut chars: Vec<char> = word.chars().collect();
    let at = rng.random_range(0..chars.len());
    match rng.random_range(0..3) {
        0 => chars[at] = (b'a' + rng.random_range(0..26u8)) as char,
        1 => {
            let c = chars[at];
            chars.insert(at, c);
        }
        _ if chars.len() > 1 => {
            chars.remove(at);
        }
        _ => chars.push('z'),
    }
    chars.into_iter().collect()
}

/// Applies token-level swap, drop and typo noise. Never returns an empty
/// token list.
pub fn paraphrase(phrase: &str, rate: f64, rng: &mut ChaCha8Rng) -> String {
    let mut words: Vec<String> = phrase.split_whitespace().map(str::to_string).collect();
    let mut i = 0;
    while i < words.len() {
        if rng.random_bool(rate) {
            match rng.random_range(0..3) {
                0 if i + 1 < words.len() => words.swap(i, i + 1),
                1 if words.len() > 1 => {
                    words.remove(i);
                    continue;
                }
                _ => words[i] = typo(&words[i], rng),
            }
        }
        i += 1;
    }
    words.join(" ")
}

fn planted_phrases(rng: &mut ChaCha8Rng, vocab: &[String]) -> Vec<String> {
    let topic: Vec<String> = (0..5).map(|_| pseudo_word(rng)).collect();
    (0..3)
        .map(|_| {
            let mut words = topic.clone();
            words.shuffle(rng);
            words.insert(rng.random_range(0..=words.len()), vocab.choose(rng).unwrap().clone());
            words.join(" ")
        })
        .collect()
}

fn arrival_times(spec: &PlantedSpec, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let n = spec.tweet_count;
    match spec.arrival {
        Arrival::Regular if n > 1 => (0..n).map(|i| spec.start_ts + i * spec.duration_s / (n - 1)).collect(),
        Arrival::Regular => vec![spec.start_ts],
        Arrival::Poisson => {
            let mut ts: Vec<u64> = (0..n).map(|_| spec.start_ts + rng.random_range(0..=spec.duration_s)).collect();
            ts.sort_unstable();
            ts
        }
    }
}

fn clip(text: String) -> String {
    let (kept, _) = truncate_chars(&text, MAX_TWEET_CHARS);
    kept.trim_end().to_string()
}

struct Draft {
    ts: u64,
    tiebreak: u64,
    user: String,
    text: String,
    group: Option<usize>,
}

/// Builds the stream described by `spec`.
pub fn generate_stream(spec: &SyntheticSpec) -> Result<Synthetic, SpecError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let bg = &spec.background;
    let vocab = vocabulary(&mut rng, bg.vocabulary_size);
    let word_dist = zipf(vocab.len(), bg.word_skew);
    let user_dist = zipf(bg.user_population, bg.user_skew);
    let user_name = |i: usize| format!("u{i:06}");

    let mut drafts = Vec::new();

    for (g, event) in spec.events.iter().enumerate() {
        // Each planted group gets its own stream so edits to one do not
        // reshuffle the others.
        let mut erng = ChaCha8Rng::seed_from_u64(spec.seed ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(g as u64 + 1)));
        let phrases = if event.phrases.is_empty() {
            planted_phrases(&mut erng, &vocab)
        } else {
            event.phrases.clone()
        };
        let mut users = BTreeSet::new();
        let wanted = (event.unique_users as usize).min(bg.user_population);
        while users.len() < wanted {
            users.insert(erng.random_range(0..bg.user_population));
        }
        let users: Vec<usize> = users.into_iter().collect();
        let mut authors: Vec<usize> = users.clone();
        while authors.len() < event.tweet_count as usize {
            authors.push(*users.choose(&mut erng).unwrap());
        }
        authors.shuffle(&mut erng);

        for (ts, author) in arrival_times(event, &mut erng).into_iter().zip(authors) {
            let phrase = phrases.choose(&mut erng).unwrap();
            drafts.push(Draft {
                ts,
                tiebreak: erng.random(),
                user: user_name(author),
                text: clip(paraphrase(phrase, event.noise_rate, &mut erng)),
                group: Some(g),
            });
        }
    }

    let chatter = (bg.rate * bg.span_s as f64).round() as u64;
    for _ in 0..chatter {
        let ts = spec.origin_ts + rng.random_range(0..bg.span_s);
        let n_words = rng.random_range(bg.min_words..=bg.max_words);
        let mut words: Vec<&str> = (0..n_words)
            .map(|_| vocab[zipf_index(&mut rng, &word_dist, vocab.len())].as_str())
            .collect();
        let text = match bg.fill_chars {
            Some(target) => {
                let mut text = words.join(" ");
                while text.chars().count() < target {
                    let w = &vocab[zipf_index(&mut rng, &word_dist, vocab.len())];
                    text.push(' ');
                    text.push_str(w);
                }
                let (kept, _) = truncate_chars(&text, target.min(MAX_TWEET_CHARS));
                kept.to_string()
            }
            None => {
                words.truncate(n_words);
                clip(words.join(" "))
            }
        };
        drafts.push(Draft {
            ts,
            tiebreak: rng.random(),
            user: user_name(zipf_index(&mut rng, &user_dist, bg.user_population)),
            text,
            group: None,
        });
    }

    drafts.sort_by(|a, b| a.ts.cmp(&b.ts).then(a.tiebreak.cmp(&b.tiebreak)));

    let width = drafts.len().max(1).to_string().len().max(8);
    let mut members: Vec<Vec<String>> = vec![Vec::new(); spec.events.len()];
    let mut span: Vec<(u64, u64)> = vec![(u64::MAX, 0); spec.events.len()];
    let records: Vec<StreamRecord> = drafts
        .into_iter()
        .enumerate()
        .map(|(i, d)| {
            let id = format!("{:0width$}", i + 1);
            if let Some(g) = d.group {
                members[g].push(id.clone());
                span[g] = (span[g].0.min(d.ts), span[g].1.max(d.ts));
            }
            StreamRecord {
                id,
                user: d.user,
                ts: d.ts,
                text: d.text,
            }
        })
        .collect();

    let mut truth = GroundTruth::default();
    let mut decoys = GroundTruth::default();
    for ((event, members), (start, end)) in spec.events.iter().zip(members).zip(span) {
        let planted = PlantedEvent {
            event_id: event.event_id.clone(),
            start_ts: start,
            end_ts: end,
            members,
        };
        match event.kind {
            PlantedKind::Event => truth.events.push(planted),
            PlantedKind::Fan => decoys.events.push(planted),
        }
    }
    Ok(Synthetic { records, truth, decoys })
}

/// Named specs used by the tests, the benchmarks and `eventide synth`.
pub mod fixtures {
    use super::*;

    pub const NAMES: &[&str] = &["easy-1", "easy", "fan", "throughput"];

    pub fn by_name(name: &str, seed: u64) -> Option<SyntheticSpec> {
        match name {
            "easy-1" => Some(easy_1(seed)),
            "easy" => Some(easy(seed)),
            "fan" => Some(fan(seed)),
            "throughput" => Some(throughput(100_000, seed)),
            _ => None,
        }
    }

    const ORIGIN: u64 = 1_334_102_400;

    fn chatter(rate: f64, span_s: u64) -> BackgroundSpec {
        BackgroundSpec {
            rate,
            span_s,
            vocabulary_size: 5_000,
            user_population: 20_000,
            user_skew: 1.1,
            word_skew: 1.0,
            min_words: 5,
            max_words: 14,
            fill_chars: None,
        }
    }

    /// One 50-tweet, 40-user event over a minute plus 500 chatter tweets.
    pub fn easy_1(seed: u64) -> SyntheticSpec {
        SyntheticSpec {
            seed,
            origin_ts: ORIGIN,
            events: vec![PlantedSpec {
                event_id: "e1".into(),
                start_ts: ORIGIN + 200,
                duration_s: 60,
                tweet_count: 50,
                unique_users: 40,
                phrases: vec![],
                noise_rate: 0.1,
                arrival: Arrival::Poisson,
                kind: PlantedKind::Event,
            }],
            background: chatter(1.0, 500),
        }
    }

    pub const EASY_POOLS: [&[&str]; 5] = [
        &[
            "strong earthquake of magnitude 8.6 hits off the west coast of aceh indonesia, tsunami warning issued",
            "breaking: strong earthquake of magnitude 8.6 hits off the west coast of aceh indonesia, tsunami warning",
            "strong earthquake of magnitude 8.6 hits off the west coast of aceh indonesia. tsunami warning issued now",
        ],
        &[
            "two explosions near the boston marathon finish line, many runners and spectators injured",
            "breaking: two explosions near the boston marathon finish line, many runners and spectators injured",
            "two explosions near the boston marathon finish line, many runners and spectators injured. pray for boston",
        ],
        &[
            "hurricane sandy makes landfall near atlantic city new jersey with 80 mph winds and storm surge",
            "hurricane sandy makes landfall near atlantic city, new jersey with 80 mph winds and a huge storm surge",
            "update: hurricane sandy makes landfall near atlantic city new jersey with 80 mph winds and storm surge",
        ],
        &[
            "spain beats italy 4-0 to win the euro 2012 final in kiev and retain the european title",
            "spain beats italy 4-0 to win the euro 2012 final in kiev and retain the title! what a team",
            "wow, spain beats italy 4-0 to win the euro 2012 final in kiev and retain the european title",
        ],
        &[
            "curiosity rover lands safely on mars, nasa confirms touchdown inside gale crater",
            "nasa curiosity rover lands safely on mars, nasa confirms touchdown inside gale crater",
            "curiosity rover lands safely on mars! nasa confirms touchdown inside gale crater, first images soon",
        ],
    ];

    /// Five events of 40 to 60 distinct users, chatter at ten times the
    /// combined event volume.
    pub fn easy(seed: u64) -> SyntheticSpec {
        let users = [40u64, 45, 50, 55, 60];
        let mut events = Vec::new();
        let mut volume = 0;
        for (i, (pool, users)) in EASY_POOLS.iter().zip(users).enumerate() {
            let tweet_count = users + users / 2;
            volume += tweet_count;
            events.push(PlantedSpec {
                event_id: format!("e{}", i + 1),
                start_ts: ORIGIN + 600 + 1_500 * i as u64,
                duration_s: 3 * (tweet_count - 1),
                tweet_count,
                unique_users: users,
                phrases: pool.iter().map(|s| s.to_string()).collect(),
                noise_rate: 0.1,
                arrival: Arrival::Regular,
                kind: PlantedKind::Event,
            });
        }
        let span_s = 600 + 1_500 * 5;
        SyntheticSpec {
            seed,
            origin_ts: ORIGIN,
            events,
            background: chatter((10 * volume) as f64 / span_s as f64, span_s),
        }
    }

    /// A 50-tweet single-user burst among chatter.
    pub fn fan(seed: u64) -> SyntheticSpec {
        SyntheticSpec {
            seed,
            origin_ts: ORIGIN,
            events: vec![PlantedSpec {
                event_id: "fan1".into(),
                start_ts: ORIGIN + 300,
                duration_s: 4 * 49,
                tweet_count: 50,
                unique_users: 1,
                phrases: vec![
                    "omg @justinbieber follow me please i love you so much #beliebers".into(),
                    "@justinbieber please follow me i love you so so much #beliebers".into(),
                ],
                noise_rate: 0.1,
                arrival: Arrival::Regular,
                kind: PlantedKind::Fan,
            }],
            background: chatter(1.0, 1_000),
        }
    }

    /// `tweets` chatter texts of exactly 140 characters over one day, with
    /// twenty planted events on top.
    pub fn throughput(tweets: u64, seed: u64) -> SyntheticSpec {
        let day = 86_400;
        let events: Vec<PlantedSpec> = (0..20)
            .map(|i| PlantedSpec {
                event_id: format!("t{}", i + 1),
                start_ts: ORIGIN + 3_600 + 4_000 * i,
                duration_s: 8 * 149,
                tweet_count: 150,
                unique_users: 100,
                phrases: vec![],
                noise_rate: 0.1,
                arrival: Arrival::Regular,
                kind: PlantedKind::Event,
            })
            .collect();
        let planted: u64 = events.iter().map(|e| e.tweet_count).sum();
        let mut background = chatter(tweets.saturating_sub(planted) as f64 / day as f64, day);
        background.fill_chars = Some(MAX_TWEET_CHARS);
        SyntheticSpec {
            seed,
            origin_ts: ORIGIN,
            events,
            background,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn easy_1_counts() {
        let s = generate_stream(&fixtures::easy_1(7)).unwrap();
        assert_eq!(s.records.len(), 550);
        assert_eq!(s.truth.events.len(), 1);
        assert_eq!(s.truth.events[0].members.len(), 50);
        assert!(s.decoys.events.is_empty());
        let users: BTreeSet<&str> = s
            .records
            .iter()
            .filter(|r| s.truth.events[0].members.contains(&r.id))
            .map(|r| r.user.as_str())
            .collect();
        assert_eq!(users.len(), 40);
    }

    #[test]
    fn same_seed_same_stream() {
        let a = generate_stream(&fixtures::easy(3)).unwrap();
        let b = generate_stream(&fixtures::easy(3)).unwrap();
        assert_eq!(a, b);
        let c = generate_stream(&fixtures::easy(4)).unwrap();
        assert_ne!(a.records, c.records);
    }

    #[test]
    fn ordered_and_leak_free() {
        let s = generate_stream(&fixtures::easy(11)).unwrap();
        assert!(s.records.windows(2).all(|w| w[0].ts <= w[1].ts));
        let planted: BTreeSet<&str> = s.truth.events.iter().flat_map(|e| e.members.iter().map(String::as_str)).collect();
        let total: usize = s.truth.events.iter().map(|e| e.members.len()).sum();
        assert_eq!(planted.len(), total);
        let expected: u64 = fixtures::easy(11).events.iter().map(|e| e.tweet_count).sum();
        assert_eq!(total as u64, expected);
        assert!(s.records.iter().all(|r| !r.text.trim().is_empty()));
        for e in &s.truth.events {
            for id in &e.members {
                let r = s.records.iter().find(|r| &r.id == id).unwrap();
                assert!((e.start_ts..=e.end_ts).contains(&r.ts));
            }
        }
    }

    #[test]
    fn fan_is_a_single_user_decoy() {
        let s = generate_stream(&fixtures::fan(5)).unwrap();
        assert!(s.truth.events.is_empty());
        let fan = &s.decoys.events[0];
        assert_eq!(fan.members.len(), 50);
        let users: BTreeSet<&str> = s
            .records
            .iter()
            .filter(|r| fan.members.contains(&r.id))
            .map(|r| r.user.as_str())
            .collect();
        assert_eq!(users.len(), 1);
    }

    #[test]
    fn paraphrase_never_empties() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..2_000 {
            let out = paraphrase("one two", 1.0, &mut rng);
            assert!(!out.trim().is_empty());
            let out = paraphrase("solo", 1.0, &mut rng);
            assert!(!out.trim().is_empty());
        }
    }

    #[test]
    fn regular_arrivals_are_even() {
        let spec = PlantedSpec {
            event_id: "x".into(),
            start_ts: 100,
            duration_s: 30,
            tweet_count: 11,
            unique_users: 3,
            phrases: vec![],
            noise_rate: 0.0,
            arrival: Arrival::Regular,
            kind: PlantedKind::Event,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let ts = arrival_times(&spec, &mut rng);
        assert_eq!(ts.first(), Some(&100));
        assert_eq!(ts.last(), Some(&130));
        assert!(ts.windows(2).all(|w| w[1] - w[0] == 3));
    }

    #[test]
    fn burst_with_zero_duration_is_allowed() {
        let mut spec = fixtures::easy_1(1);
        spec.events[0].duration_s = 0;
        let s = generate_stream(&spec).unwrap();
        let e = &s.truth.events[0];
        assert_eq!(e.start_ts, e.end_ts);
    }

    #[test]
    fn validation_names_the_field() {
        let mut spec = fixtures::easy_1(1);
        spec.background.rate = -2.0;
        let err = generate_stream(&spec).unwrap_err();
        assert!(err.to_string().contains("background.rate"), "{err}");
        let mut spec = fixtures::easy_1(1);
        spec.events[0].noise_rate = -0.1;
        assert!(spec.validate().unwrap_err().to_string().contains("events[0].noise_rate"));
        let mut spec = fixtures::easy_1(1);
        spec.events[0].unique_users = 0;
        assert!(matches!(spec.validate(), Err(SpecError::TooSmall { .. })));
        let mut spec = fixtures::fan(1);
        spec.events[0].unique_users = 2;
        spec.events[0].tweet_count = 50;
        assert!(spec.validate().is_err());
    }

    #[test]
    fn throughput_texts_are_full_length() {
        let s = generate_stream(&fixtures::throughput(3_000, 2)).unwrap();
        let chatter: Vec<_> = s
            .records
            .iter()
            .filter(|r| !s.truth.events.iter().any(|e| e.members.contains(&r.id)))
            .collect();
        assert!(chatter.iter().all(|r| r.text.chars().count() == 140));
        assert_eq!(s.records.len(), 3_000);
    }
}
