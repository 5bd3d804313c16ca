//! Parallel candidate scoring on a rayon thread pool.

use eventide_core::ScoringPool;
use rayon::prelude::*;

/// Scores the candidates of one tweet on a dedicated rayon pool.
///
/// Results come back in candidate order, so the engine's choice is the same
/// as with [`eventide_core::Sequential`].
pub struct RayonPool {
    pool: rayon::ThreadPool,
}

impl RayonPool {
    /// `threads == 0` lets rayon pick one thread per core.
    pub fn new(threads: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .thread_name(|i| format!("eventide-score-{i}"))
            .build()?;
        Ok(Self { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl ScoringPool for RayonPool {
    fn score_all<F>(&self, jobs: usize, score: F) -> Vec<(Option<f64>, u32)>
    where
        F: Fn(usize) -> (Option<f64>, u32) + Sync + Send,
    {
        if jobs < 2 {
            return (0..jobs).map(score).collect();
        }
        self.pool.install(|| (0..jobs).into_par_iter().map(&score).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use eventide_core::Sequential;

    #[test]
    fn keeps_input_order() {
        let pool = RayonPool::new(4).unwrap();
        let score = |i: usize| (Some(i as f64 / 7.0), i as u32);
        assert_eq!(pool.score_all(500, score), Sequential.score_all(500, score));
        assert!(pool.score_all(0, score).is_empty());
    }
}
