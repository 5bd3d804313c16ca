//! Exponential inter-arrival model of a cluster.
//!
//! Gaps between consecutive member arrivals are treated as draws from an
//! exponential distribution. The maximum-likelihood rate is `1 / x̄`, so the
//! state only needs the number of gaps and their sum.

use super::{Cluster, EngineConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LambdaState {
    /// Number of observed gaps (one less than the arrivals seen).
    pub samples: u64,
    /// Sum of all observed gaps, in seconds.
    pub gap_sum: u64,
    pub last_arrival: u64,
}

impl LambdaState {
    /// State after the first arrival: no gaps yet.
    pub fn start(first_arrival: u64) -> Self {
        Self {
            samples: 0,
            gap_sum: 0,
            last_arrival: first_arrival,
        }
    }

    /// Mean inter-arrival gap `x̄`, if any gap has been observed.
    pub fn mean_gap(&self) -> Option<f64> {
        (self.samples > 0).then(|| self.gap_sum as f64 / self.samples as f64)
    }

    /// `λ_MLE = 1 / x̄`. `None` until a positive mean is available.
    pub fn rate(&self) -> Option<f64> {
        self.mean_gap().filter(|&m| m > 0.0).map(|m| 1.0 / m)
    }
}

/// Folds one more arrival into the running estimate.
///
/// Arrivals earlier than the last one (allowed only with a disorder slack)
/// count as a zero gap and leave `last_arrival` where it was.
pub fn update_lambda(state: LambdaState, new_arrival: u64) -> LambdaState {
    let gap = new_arrival.saturating_sub(state.last_arrival);
    LambdaState {
        samples: state.samples + 1,
        gap_sum: state.gap_sum + gap,
        last_arrival: state.last_arrival.max(new_arrival),
    }
}

/// Stream time after which `cluster` counts as inactive.
///
/// `last_arrival + timeout_multiplier · x̄` once enough gaps were seen and the
/// mean is positive, `last_arrival + default_timeout` otherwise.
pub fn expiry_deadline(cluster: &Cluster, config: &EngineConfig) -> f64 {
    deadline_for(cluster.lambda(), config)
}

pub(crate) fn deadline_for(state: &LambdaState, config: &EngineConfig) -> f64 {
    let timeout = match state.mean_gap() {
        Some(mean) if state.samples >= config.min_inter_arrival_samples && mean > 0.0 => {
            config.timeout_multiplier * mean
        }
        _ => config.default_timeout as f64,
    };
    state.last_arrival as f64 + timeout
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn run(first: u64, gaps: &[u64]) -> LambdaState {
        let mut state = LambdaState::start(first);
        let mut t = first;
        for g in gaps {
            t += g;
            state = update_lambda(state, t);
        }
        state
    }

    fn log_likelihood(rate: f64, gaps: &[u64]) -> f64 {
        gaps.iter().map(|&x| libm::log(rate) - x as f64 * rate).sum()
    }

    #[test]
    fn mean_of_two_four_six() {
        let s = run(10, &[2, 4, 6]);
        assert_eq!(s.mean_gap(), Some(4.0));
        assert_eq!(s.rate(), Some(0.25));
        assert_eq!(s.samples, 3);
        assert_eq!(s.last_arrival, 22);
    }

    #[test]
    fn single_gap() {
        let s = run(0, &[5]);
        assert_eq!(s.mean_gap(), Some(5.0));
        assert_eq!(s.rate(), Some(0.2));
    }

    #[test]
    fn no_gap_yet() {
        let s = LambdaState::start(100);
        assert_eq!(s.mean_gap(), None);
        assert_eq!(s.rate(), None);
        let config = EngineConfig::default();
        assert_eq!(deadline_for(&s, &config), 3700.0);
    }

    #[test]
    fn deadline_uses_mean_gap() {
        let config = EngineConfig::default();
        let s = LambdaState {
            samples: 3,
            gap_sum: 12,
            last_arrival: 100,
        };
        assert_eq!(deadline_for(&s, &config), 104.0);

        let scaled = EngineConfig {
            timeout_multiplier: 2.0,
            ..EngineConfig::default()
        };
        let s = LambdaState {
            samples: 2,
            gap_sum: 20,
            last_arrival: 0,
        };
        assert_eq!(deadline_for(&s, &scaled), 20.0);
    }

    #[test]
    fn too_few_samples_or_zero_mean_use_default() {
        let config = EngineConfig::default();
        let one_gap = run(100, &[5]);
        assert_eq!(deadline_for(&one_gap, &config), 105.0 + 3600.0);
        let zeros = run(100, &[0, 0, 0]);
        assert_eq!(zeros.mean_gap(), Some(0.0));
        assert_eq!(zeros.rate(), None);
        assert_eq!(deadline_for(&zeros, &config), 3700.0);
    }

    #[test]
    fn late_arrival_counts_as_zero_gap() {
        let s = update_lambda(LambdaState::start(50), 40);
        assert_eq!(s.samples, 1);
        assert_eq!(s.gap_sum, 0);
        assert_eq!(s.last_arrival, 50);
    }

    proptest! {
        #[test]
        fn closed_form_maximizes_likelihood(gaps in prop::collection::vec(1u64..=600, 1..40)) {
            let s = run(1_000, &gaps);
            let batch = gaps.iter().sum::<u64>() as f64 / gaps.len() as f64;
            prop_assert!((s.mean_gap().unwrap() - batch).abs() < 1e-9);
            let mle = s.rate().unwrap();
            let best = log_likelihood(mle, &gaps);
            let max_rate = 2.0 / batch;
            let grid: Vec<f64> = (1..=1_000).map(|i| max_rate * i as f64 / 1_000.0).collect();
            for rate in grid {
                prop_assert!(log_likelihood(rate, &gaps) <= best + 1e-9);
            }
        }
    }
}
