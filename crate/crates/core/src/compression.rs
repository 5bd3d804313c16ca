//! Compressed sizes and the pairwise compression distance.
//!
//! `D(x, y) = C(xy) / (C(x) + C(y))`, with `xy` always the first argument
//! followed by the second. Lower values mean the two texts share more
//! structure; a text against itself lands near 0.5 and two unrelated texts
//! land near 1.0.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;
use core::fmt;
use core::ops::RangeInclusive;

use thiserror::Error;

/// Errors raised by the compression layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompressionError {
    #[error("compression distance is undefined for empty text")]
    EmptyText,
    #[error("compressor {0} is not built into this binary")]
    Unavailable(Algorithm),
    #[error("level {level} is outside {min}..={max} for {algorithm}")]
    LevelOutOfRange {
        algorithm: Algorithm,
        level: u8,
        min: u8,
        max: u8,
    },
    #[error("the engine requires a deterministic compressor")]
    NonDeterministic,
}

/// Compression algorithm backing `C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Algorithm {
    /// Raw DEFLATE stream, no container. Always available.
    DeflateRaw,
    /// DEFLATE inside a gzip member (10 byte header, 8 byte trailer).
    Gzip,
    /// LZ4 block format, a fast single-speed LZ.
    LzFast,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::DeflateRaw, Algorithm::Gzip, Algorithm::LzFast];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::DeflateRaw => "deflate-raw",
            Algorithm::Gzip => "gzip",
            Algorithm::LzFast => "lz-fast",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.name() == name)
    }

    pub fn is_available(self) -> bool {
        match self {
            Algorithm::DeflateRaw => true,
            Algorithm::Gzip => cfg!(feature = "gzip"),
            Algorithm::LzFast => cfg!(feature = "lz-fast"),
        }
    }

    /// Valid compression levels. LZ4 block mode has a single speed.
    pub fn levels(self) -> RangeInclusive<u8> {
        match self {
            Algorithm::DeflateRaw | Algorithm::Gzip => 0..=10,
            Algorithm::LzFast => 1..=1,
        }
    }

    /// The "best compression" level of the algorithm.
    pub fn default_level(self) -> u8 {
        match self {
            Algorithm::DeflateRaw | Algorithm::Gzip => 9,
            Algorithm::LzFast => 1,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which compressor computes `C(x)` and at what level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CompressorSpec {
    pub algorithm: Algorithm,
    pub level: u8,
    pub deterministic: bool,
}

impl Default for CompressorSpec {
    fn default() -> Self {
        Self::new(Algorithm::DeflateRaw)
    }
}

impl CompressorSpec {
    pub fn new(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            level: algorithm.default_level(),
            deterministic: true,
        }
    }

    pub fn with_level(mut self, level: u8) -> Self {
        self.level = level;
        self
    }

    pub fn validate(&self) -> Result<(), CompressionError> {
        if !self.algorithm.is_available() {
            return Err(CompressionError::Unavailable(self.algorithm));
        }
        let range = self.algorithm.levels();
        if !range.contains(&self.level) {
            return Err(CompressionError::LevelOutOfRange {
                algorithm: self.algorithm,
                level: self.level,
                min: *range.start(),
                max: *range.end(),
            });
        }
        if !self.deterministic {
            return Err(CompressionError::NonDeterministic);
        }
        Ok(())
    }
}

/// Compresses `data` under `spec` and returns the compressed bytes.
pub fn compress(data: &[u8], spec: &CompressorSpec) -> Result<Vec<u8>, CompressionError> {
    spec.validate()?;
    Ok(compress_unchecked(data, spec))
}

fn compress_unchecked(data: &[u8], spec: &CompressorSpec) -> Vec<u8> {
    match spec.algorithm {
        Algorithm::DeflateRaw => miniz_oxide::deflate::compress_to_vec(data, spec.level),
        #[cfg(feature = "gzip")]
        Algorithm::Gzip => gzip_member(data, spec.level),
        #[cfg(feature = "lz-fast")]
        Algorithm::LzFast => lz4_flex::block::compress(data),
        #[allow(unreachable_patterns)]
        _ => unreachable!("validated specs only name built-in algorithms"),
    }
}

#[cfg(feature = "gzip")]
fn gzip_member(data: &[u8], level: u8) -> Vec<u8> {
    let xfl = match level {
        9.. => 2,
        0..=1 => 4,
        _ => 0,
    };
    // mtime is zeroed so the output only depends on the input.
    let mut out = Vec::with_capacity(data.len() + 32);
    out.extend_from_slice(&[0x1f, 0x8b, 8, 0, 0, 0, 0, 0, xfl, 255]);
    out.extend_from_slice(&miniz_oxide::deflate::compress_to_vec(data, level));
    out.extend_from_slice(&crc32fast::hash(data).to_le_bytes());
    out.extend_from_slice(&(data.len() as u32).to_le_bytes());
    out
}

fn size_of_compressed(data: &[u8], spec: &CompressorSpec) -> usize {
    compress_unchecked(data, spec).len()
}

/// `C(x)`: length in bytes of `text` compressed under `spec`.
pub fn compressed_size(text: &[u8], spec: &CompressorSpec) -> Result<usize, CompressionError> {
    if text.is_empty() {
        return Err(CompressionError::EmptyText);
    }
    spec.validate()?;
    Ok(size_of_compressed(text, spec))
}

/// A text together with its standalone compressed size.
///
/// Holding `C(x)` next to the bytes means each text is compressed alone
/// exactly once, however many pairs it takes part in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizedText {
    bytes: Box<[u8]>,
    size: u32,
}

impl SizedText {
    pub fn new(text: &[u8], spec: &CompressorSpec) -> Result<Self, CompressionError> {
        let size = compressed_size(text, spec)?;
        Ok(Self {
            bytes: text.into(),
            size: size as u32,
        })
    }

    /// Builds a sized text through `cache`.
    pub fn cached(
        text: &[u8],
        spec: &CompressorSpec,
        cache: &mut SizeCache,
    ) -> Result<Self, CompressionError> {
        let size = cache.size_of(text, spec)?;
        Ok(Self {
            bytes: text.into(),
            size: size as u32,
        })
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn compressed_size(&self) -> usize {
        self.size as usize
    }

    /// `D(self, other)`. Only `C(self · other)` is computed.
    pub fn distance_to(&self, other: &SizedText, spec: &CompressorSpec) -> f64 {
        let mut joined = Vec::with_capacity(self.bytes.len() + other.bytes.len());
        joined.extend_from_slice(&self.bytes);
        joined.extend_from_slice(&other.bytes);
        let joint = size_of_compressed(&joined, spec);
        joint as f64 / (self.size as f64 + other.size as f64)
    }
}

/// Bounded memo of `C(x)` keyed by the full text bytes.
///
/// Oldest entries are dropped first once `capacity` is reached. Every lookup
/// returns exactly what a fresh compression would, so eviction only affects
/// cost. One cache must only ever be used with one [`CompressorSpec`];
/// switching specs clears it.
#[derive(Debug, Clone)]
pub struct SizeCache {
    capacity: usize,
    spec: Option<CompressorSpec>,
    sizes: BTreeMap<Box<[u8]>, u32>,
    order: VecDeque<Box<[u8]>>,
    hits: u64,
    misses: u64,
}

impl SizeCache {
    pub fn new(capacity: usize) -> Self {
        Self {
            capacity,
            spec: None,
            sizes: BTreeMap::new(),
            order: VecDeque::new(),
            hits: 0,
            misses: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    /// (hits, misses) since creation.
    pub fn stats(&self) -> (u64, u64) {
        (self.hits, self.misses)
    }

    pub fn clear(&mut self) {
        self.sizes.clear();
        self.order.clear();
    }

    pub fn size_of(&mut self, text: &[u8], spec: &CompressorSpec) -> Result<usize, CompressionError> {
        if text.is_empty() {
            return Err(CompressionError::EmptyText);
        }
        if self.spec.as_ref() != Some(spec) {
            spec.validate()?;
            self.clear();
            self.spec = Some(*spec);
        }
        if let Some(&size) = self.sizes.get(text) {
            self.hits += 1;
            return Ok(size as usize);
        }
        self.misses += 1;
        let size = size_of_compressed(text, spec);
        if self.capacity > 0 {
            while self.sizes.len() >= self.capacity {
                match self.order.pop_front() {
                    Some(old) => {
                        self.sizes.remove(&old);
                    }
                    None => break,
                }
            }
            let key: Box<[u8]> = text.into();
            self.order.push_back(key.clone());
            self.sizes.insert(key, size as u32);
        }
        Ok(size)
    }
}

/// `D(x, y) = C(xy) / (C(x) + C(y))`, optionally memoising `C(x)` and `C(y)`.
pub fn pair_distance(
    x: &[u8],
    y: &[u8],
    spec: &CompressorSpec,
    cache: Option<&mut SizeCache>,
) -> Result<f64, CompressionError> {
    let (sx, sy) = match cache {
        Some(cache) => (SizedText::cached(x, spec, cache)?, SizedText::cached(y, spec, cache)?),
        None => (SizedText::new(x, spec)?, SizedText::new(y, spec)?),
    };
    Ok(sx.distance_to(&sy, spec))
}
