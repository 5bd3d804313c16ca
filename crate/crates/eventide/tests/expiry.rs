//! How the expiry rule treats bursty arrivals.
//!
//! With expiry after one mean gap of silence, any gap longer than the mean
//! so far ends a cluster. Evenly spaced events survive; Poisson-like ones
//! fragment early, while their first few integer-second gaps are small. A
//! larger timeout multiplier restores them.

use eventide::synth::{fixtures, generate_stream, Arrival};
use eventide_core::{match_events, Engine, EngineConfig, MatchPolicy, Tweet};

fn f1_with(multiplier: f64, seed: u64) -> f64 {
    let mut spec = fixtures::easy(seed);
    for e in &mut spec.events {
        e.arrival = Arrival::Poisson;
    }
    let stream = generate_stream(&spec).unwrap();
    let config = EngineConfig {
        timeout_multiplier: multiplier,
        ..EngineConfig::default()
    };
    let mut engine = Engine::new(config).unwrap();
    let mut events = Vec::new();
    for r in &stream.records {
        let tweet = Tweet::new(r.id.clone(), r.user.clone(), r.ts, r.text.clone()).unwrap();
        events.extend(engine.process_tweet(tweet).unwrap().closed);
    }
    events.extend(engine.finalize());
    match_events(&events, &stream.truth, &MatchPolicy::default()).unwrap().f1
}

#[test]
fn poisson_bursts_need_a_longer_timeout() {
    let strict = f1_with(1.0, 5);
    let lenient = f1_with(10.0, 5);
    assert!(strict < 0.5, "strict {strict}");
    assert!(lenient >= 0.8, "lenient {lenient}");
}
