//! Line-delimited tweet streams and ground-truth files.
//!
//! A stream is UTF-8 text with one JSON object per line carrying exactly the
//! keys `id`, `user`, `ts` and `text`. Blank lines and lines starting with
//! `#` are skipped. A ground-truth file has one planted event per line:
//! `event_id start_ts end_ts id1,id2,...`.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use eventide_core::model::{truncate_chars, MAX_TWEET_CHARS};
use eventide_core::{GroundTruth, ModelError, PlantedEvent, Tweet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One stream line, before validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StreamRecord {
    pub id: String,
    pub user: String,
    pub ts: u64,
    pub text: String,
}

impl StreamRecord {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }
}

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("line {line}: {source}")]
    Malformed {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: ModelError,
    },
}

impl RecordError {
    pub fn line(&self) -> usize {
        match self {
            RecordError::Malformed { line, .. } | RecordError::Invalid { line, .. } => *line,
        }
    }
}

/// A validated tweet and whether its text had to be cut to 140 characters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub tweet: Tweet,
    pub truncated: bool,
}

/// Parses one stream line. `Ok(None)` for comments and blank lines.
pub fn parse_record(line: &str, line_no: usize) -> Result<Option<Parsed>, RecordError> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let record: StreamRecord =
        serde_json::from_str(trimmed).map_err(|source| RecordError::Malformed { line: line_no, source })?;
    let (text, truncated) = truncate_chars(&record.text, MAX_TWEET_CHARS);
    let tweet = Tweet::new(record.id, record.user, record.ts, text)
        .map_err(|source| RecordError::Invalid { line: line_no, source })?;
    Ok(Some(Parsed { tweet, truncated }))
}

/// Tallies of a pass over a stream.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadStats {
    pub lines: u64,
    pub valid: u64,
    pub rejected: u64,
    pub truncated: u64,
}

/// Iterates the tweets of a stream, counting rather than stopping on bad
/// lines. Read errors end the iteration with `Err`.
pub struct StreamReader<R> {
    inner: R,
    line_no: usize,
    buf: String,
    stats: ReadStats,
    errors: Vec<RecordError>,
    keep_errors: usize,
}

impl<R: BufRead> StreamReader<R> {
    pub fn new(inner: R) -> Self {
        Self {
            inner,
            line_no: 0,
            buf: String::new(),
            stats: ReadStats::default(),
            errors: Vec::new(),
            keep_errors: 100,
        }
    }

    pub fn stats(&self) -> ReadStats {
        self.stats
    }

    /// The first rejected lines, for diagnostics.
    pub fn errors(&self) -> &[RecordError] {
        &self.errors
    }
}

impl<R: BufRead> Iterator for StreamReader<R> {
    type Item = io::Result<Tweet>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.buf.clear();
            match self.inner.read_line(&mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => return Some(Err(e)),
            }
            self.line_no += 1;
            self.stats.lines += 1;
            match parse_record(&self.buf, self.line_no) {
                Ok(None) => continue,
                Ok(Some(parsed)) => {
                    self.stats.valid += 1;
                    self.stats.truncated += parsed.truncated as u64;
                    return Some(Ok(parsed.tweet));
                }
                Err(e) => {
                    self.stats.rejected += 1;
                    if self.errors.len() < self.keep_errors {
                        self.errors.push(e);
                    }
                }
            }
        }
    }
}

pub fn write_stream<W: Write>(mut out: W, records: &[StreamRecord]) -> io::Result<()> {
    for r in records {
        writeln!(out, "{}", r.to_line())?;
    }
    out.flush()
}

#[derive(Debug, Error)]
pub enum TruthError {
    #[error("ground truth line {line}: {reason}")]
    Malformed { line: usize, reason: &'static str },
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub fn truth_line(event: &PlantedEvent) -> String {
    let mut line = String::new();
    write!(line, "{} {} {} {}", event.event_id, event.start_ts, event.end_ts, event.members.join(",")).unwrap();
    line
}

pub fn write_truth<W: Write>(mut out: W, truth: &GroundTruth) -> io::Result<()> {
    for event in &truth.events {
        writeln!(out, "{}", truth_line(event))?;
    }
    out.flush()
}

pub fn read_truth<R: BufRead>(input: R) -> Result<GroundTruth, TruthError> {
    let mut events = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let malformed = |reason| TruthError::Malformed { line: line_no, reason };
        let event_id = fields.next().ok_or(malformed("missing event id"))?.to_string();
        let start_ts = fields
            .next()
            .and_then(|f| f.parse().ok())
            .ok_or(malformed("bad start_ts"))?;
        let end_ts = fields.next().and_then(|f| f.parse().ok()).ok_or(malformed("bad end_ts"))?;
        let members = match fields.next() {
            Some(ids) => ids.split(',').filter(|s| !s.is_empty()).map(str::to_string).collect(),
            None => Vec::new(),
        };
        if fields.next().is_some() {
            return Err(malformed("trailing fields"));
        }
        events.push(PlantedEvent {
            event_id,
            start_ts,
            end_ts,
            members,
        });
    }
    Ok(GroundTruth { events })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_the_declared_format() {
        let line = r#"{"id":"1","user":"u9","ts":1334102400,"text":"earthquake in aceh"}"#;
        let parsed = parse_record(line, 1).unwrap().unwrap();
        assert_eq!(parsed.tweet.id, "1");
        assert_eq!(parsed.tweet.user, "u9");
        assert_eq!(parsed.tweet.timestamp, 1_334_102_400);
        assert_eq!(parsed.tweet.text(), "earthquake in aceh");
        assert!(!parsed.truncated);
    }

    #[test]
    fn rejects_bad_lines_with_line_numbers() {
        let missing_user = r#"{"id":"1","ts":5,"text":"hello world"}"#;
        assert_eq!(parse_record(missing_user, 7).unwrap_err().line(), 7);
        let string_ts = r#"{"id":"1","user":"a","ts":"soon","text":"hello world"}"#;
        assert!(matches!(parse_record(string_ts, 2), Err(RecordError::Malformed { .. })));
        let empty = r#"{"id":"1","user":"a","ts":5,"text":"  "}"#;
        assert!(matches!(
            parse_record(empty, 3),
            Err(RecordError::Invalid {
                source: ModelError::EmptyText,
                ..
            })
        ));
        let extra = r#"{"id":"1","user":"a","ts":5,"text":"hi there","lang":"en"}"#;
        assert!(parse_record(extra, 4).is_err());
        assert!(parse_record("not json", 5).is_err());
    }

    #[test]
    fn truncates_long_text() {
        let text = "x".repeat(200);
        let line = StreamRecord {
            id: "1".into(),
            user: "a".into(),
            ts: 0,
            text,
        }
        .to_line();
        let parsed = parse_record(&line, 1).unwrap().unwrap();
        assert!(parsed.truncated);
        assert_eq!(parsed.tweet.text().chars().count(), 140);
    }

    #[test]
    fn reader_skips_comments_and_counts_rejects() {
        let input = "# header\n\
            {\"id\":\"1\",\"user\":\"a\",\"ts\":1,\"text\":\"first one\"}\n\
            {\"id\":\"2\",\"ts\":2,\"text\":\"no user\"}\n\
            \n\
            {\"id\":\"3\",\"user\":\"c\",\"ts\":3,\"text\":\"third one\"}\n";
        let mut reader = StreamReader::new(input.as_bytes());
        let ids: Vec<String> = reader.by_ref().map(|t| t.unwrap().id).collect();
        assert_eq!(ids, ["1", "3"]);
        let stats = reader.stats();
        assert_eq!((stats.lines, stats.valid, stats.rejected), (5, 2, 1));
        assert_eq!(reader.errors()[0].line(), 3);
    }

    #[test]
    fn truth_file_round_trip() {
        let truth = GroundTruth {
            events: vec![
                PlantedEvent {
                    event_id: "quake".into(),
                    start_ts: 10,
                    end_ts: 70,
                    members: vec!["00000001".into(), "00000004".into()],
                },
                PlantedEvent {
                    event_id: "empty".into(),
                    start_ts: 5,
                    end_ts: 5,
                    members: vec![],
                },
            ],
        };
        let mut buf = Vec::new();
        write_truth(&mut buf, &truth).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap().lines().next(), Some("quake 10 70 00000001,00000004"));
        assert_eq!(read_truth(buf.as_slice()).unwrap(), truth);
        assert!(matches!(read_truth("e1 x 5 a".as_bytes()), Err(TruthError::Malformed { line: 1, .. })));
    }

    proptest! {
        #[test]
        fn records_round_trip(
            id in "[a-z0-9]{1,12}",
            user in "[A-Za-z0-9_]{1,15}",
            ts in 0u64..4_000_000_000,
            text in "[^\u{0}-\u{1f}]{1,140}",
        ) {
            prop_assume!(!text.trim().is_empty());
            let record = StreamRecord { id, user, ts, text };
            let line = record.to_line();
            let back: StreamRecord = serde_json::from_str(&line).unwrap();
            prop_assert_eq!(&back, &record);
            let parsed = parse_record(&line, 1).unwrap().unwrap();
            prop_assert_eq!(parsed.tweet.text(), record.text.as_str());
        }
    }
}
