//! The events file: one JSON object per line, a promotion notice or a closed
//! event, tagged by `kind`.

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};

use eventide_core::{Event, EventRecord, EventSink};
use thiserror::Error;

/// Streams records to a writer as they are emitted.
///
/// [`EventSink::emit`] cannot fail, so the first write error is kept and
/// reported by [`EventsWriter::finish`]; later records are dropped.
pub struct EventsWriter<W: Write> {
    out: W,
    written: u64,
    error: Option<io::Error>,
}

impl<W: Write> EventsWriter<W> {
    pub fn new(out: W) -> Self {
        Self {
            out,
            written: 0,
            error: None,
        }
    }

    pub fn written(&self) -> u64 {
        self.written
    }

    pub fn finish(mut self) -> io::Result<W> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

impl<W: Write> EventSink for EventsWriter<W> {
    fn emit(&mut self, record: EventRecord) {
        if self.error.is_some() {
            return;
        }
        let line = serde_json::to_string(&record).expect("event records always serialize");
        match writeln!(self.out, "{line}") {
            Ok(()) => self.written += 1,
            Err(e) => self.error = Some(e),
        }
    }
}

#[derive(Debug, Error)]
pub enum EventsError {
    #[error("events file line {line}: {source}")]
    Malformed {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub fn read_events<R: BufRead>(input: R) -> Result<Vec<EventRecord>, EventsError> {
    let mut records = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|source| EventsError::Malformed { line: i + 1, source })?;
        records.push(record);
    }
    Ok(records)
}

/// The final state of every event in `records`: its closed record when there
/// is one, otherwise its latest promotion notice. Ordered by event id.
pub fn final_events(records: &[EventRecord]) -> Vec<Event> {
    let mut latest: BTreeMap<u64, &Event> = BTreeMap::new();
    for record in records {
        let event = record.event();
        match latest.get(&event.event_id) {
            Some(seen) if seen.is_closed() && !event.is_closed() => {}
            _ => {
                latest.insert(event.event_id, event);
            }
        }
    }
    latest.into_values().cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn event(id: u64, closed_at: Option<u64>) -> Event {
        Event {
            event_id: id,
            cluster_id: 10 + id,
            first_tweet_id: "7".into(),
            first_tweet_ts: 100,
            keywords: vec!["quake".into(), "aceh".into()],
            tweet_count: 40,
            unique_users: 33,
            diversity_at_promotion: 5.0443,
            promoted_at: 160,
            closed_at,
            members: vec!["7".into(), "9".into()],
        }
    }

    #[test]
    fn round_trip_and_final_state() {
        let records = vec![
            EventRecord::Promoted(event(1, None)),
            EventRecord::Promoted(event(2, None)),
            EventRecord::Closed(event(1, Some(300))),
        ];
        let mut writer = EventsWriter::new(Vec::new());
        for r in records.clone() {
            writer.emit(r);
        }
        assert_eq!(writer.written(), 3);
        let bytes = writer.finish().unwrap();
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert!(text.lines().next().unwrap().starts_with(r#"{"kind":"promoted","event_id":1,"#));
        let back = read_events(bytes.as_slice()).unwrap();
        assert_eq!(back, records);
        let finals = final_events(&back);
        assert_eq!(finals.len(), 2);
        assert_eq!(finals[0].closed_at, Some(300));
        assert_eq!(finals[1].closed_at, None);
    }

    #[test]
    fn bad_line_is_reported() {
        let err = read_events("{\"kind\":\"promoted\"}\n".as_bytes()).unwrap_err();
        assert!(matches!(err, EventsError::Malformed { line: 1, .. }));
    }
}
