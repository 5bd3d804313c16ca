//! Compressor speed and ratio on a corpus of short texts.

use std::fmt::Write as _;
use std::time::Instant;

use eventide_core::{compressed_size, CompressionError, CompressorSpec};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("the corpus has no texts")]
    EmptyCorpus,
    #[error(transparent)]
    Compression(#[from] CompressionError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub algorithm: String,
    pub level: u8,
    pub texts: u64,
    /// Mean of compressed size over original size.
    pub mean_ratio: f64,
    pub texts_per_sec: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("{:<12} {:>5} {:>8} {:>10} {:>14}\n", "algorithm", "level", "texts", "mean_ratio", "texts_per_sec");
        for r in &self.rows {
            writeln!(
                out,
                "{:<12} {:>5} {:>8} {:>10.4} {:>14.0}",
                r.algorithm, r.level, r.texts, r.mean_ratio, r.texts_per_sec
            )
            .unwrap();
        }
        out
    }
}

/// Compresses every text once per spec. Empty texts are skipped.
pub fn compressor_benchmark(corpus: &[String], specs: &[CompressorSpec]) -> Result<BenchReport, BenchError> {
    let texts: Vec<&[u8]> = corpus.iter().map(|t| t.as_bytes()).filter(|t| !t.is_empty()).collect();
    if texts.is_empty() {
        return Err(BenchError::EmptyCorpus);
    }
    let mut rows = Vec::with_capacity(specs.len());
    for spec in specs {
        spec.validate()?;
        let started = Instant::now();
        let mut ratio_sum = 0.0;
        for text in &texts {
            ratio_sum += compressed_size(text, spec)? as f64 / text.len() as f64;
        }
        let secs = started.elapsed().as_secs_f64().max(1e-9);
        rows.push(BenchRow {
            algorithm: spec.algorithm.name().to_string(),
            level: spec.level,
            texts: texts.len() as u64,
            mean_ratio: ratio_sum / texts.len() as f64,
            texts_per_sec: texts.len() as f64 / secs,
        });
    }
    Ok(BenchReport { rows })
}
