use alloc::string::String;
use alloc::vec::Vec;

use unicode_normalization::UnicodeNormalization;

use super::ModelError;

/// Logical length limit, counted in Unicode scalar values.
pub const MAX_TWEET_CHARS: usize = 140;
/// 140 scalar values of at most four UTF-8 bytes each.
pub const MAX_TWEET_BYTES: usize = MAX_TWEET_CHARS * 4;

/// One timestamped, user-attributed message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tweet {
    pub id: String,
    pub user: String,
    /// Seconds since the epoch.
    pub timestamp: u64,
    text: String,
    normalized: String,
    tokens: Vec<String>,
}

impl Tweet {
    pub fn new(
        id: impl Into<String>,
        user: impl Into<String>,
        timestamp: u64,
        text: impl Into<String>,
    ) -> Result<Self, ModelError> {
        let id = id.into();
        let user = user.into();
        let text = text.into();
        if id.is_empty() {
            return Err(ModelError::EmptyField { field: "id" });
        }
        if user.is_empty() {
            return Err(ModelError::EmptyField { field: "user" });
        }
        if text.trim().is_empty() {
            return Err(ModelError::EmptyText);
        }
        let chars = text.chars().count();
        if chars > MAX_TWEET_CHARS {
            return Err(ModelError::TextTooLong { chars });
        }
        let normalized = normalize(&text);
        let tokens = tokenize(&normalized);
        Ok(Self {
            id,
            user,
            timestamp,
            text,
            normalized,
            tokens,
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    /// NFC-normalized, lowercased text. This is what gets compressed.
    pub fn normalized(&self) -> &str {
        &self.normalized
    }

    /// Tokens in order of appearance, duplicates kept.
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }
}

/// NFC normalization followed by lowercasing.
pub fn normalize(text: &str) -> String {
    let composed: String = text.nfc().collect();
    composed.to_lowercase()
}

/// Splits normalized text into tokens.
///
/// A token is a run of alphanumeric characters, optionally led by a single
/// `#` or `@`. Tokens shorter than two characters are dropped, which also
/// drops a bare `#` or `@`.
pub fn tokenize(normalized: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut flush = |current: &mut String| {
        if current.chars().count() >= 2 && current.chars().any(char::is_alphanumeric) {
            tokens.push(core::mem::take(current));
        } else {
            current.clear();
        }
    };
    for c in normalized.chars() {
        if c.is_alphanumeric() || ((c == '#' || c == '@') && current.is_empty()) {
            current.push(c);
        } else {
            flush(&mut current);
            if c == '#' || c == '@' {
                current.push(c);
            }
        }
    }
    flush(&mut current);
    tokens
}

/// Cuts `text` to at most `limit` Unicode scalar values.
///
/// Returns the kept prefix and whether anything was removed.
pub fn truncate_chars(text: &str, limit: usize) -> (&str, bool) {
    match text.char_indices().nth(limit) {
        Some((cut, _)) => (&text[..cut], true),
        None => (text, false),
    }
}
