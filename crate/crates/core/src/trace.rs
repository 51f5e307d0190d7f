//! Search trace events and sinks.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

/// A value chosen by a decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Decided {
    Bool(bool),
    Color(String),
}

/// What a thrown ball carries, in trace form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Carried {
    /// Vertex ids of a colouring conflict set.
    Ids(Vec<usize>),
    /// A clause as DIMACS literals.
    Clause(Vec<i64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThrowOrigin {
    /// A failed edge check.
    Check,
    /// Conflict analysis chose a backjump target.
    Analysis,
    /// Search resumed after a reported solution.
    Enumerate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Event {
    Decide {
        var: usize,
        value: Decided,
        level: usize,
    },
    Propagate {
        var: usize,
        value: bool,
        level: [u32; 2],
        reasons: Vec<usize>,
    },
    /// Variables (or vertices) of the constraint that failed.
    Conflict { vars: Vec<usize> },
    Throw {
        target: usize,
        origin: ThrowOrigin,
        jump: usize,
        #[serde(flatten)]
        payload: Carried,
    },
    Catch { level: usize },
    Learn {
        tag: usize,
        clause: Vec<i64>,
        persisted: bool,
    },
    Solution,
    Unsat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub seq: u64,
    #[serde(flatten)]
    pub event: Event,
}

/// Receives trace events in order.
pub trait TraceSink {
    fn record(&mut self, event: TraceEvent);
}

impl TraceSink for Vec<TraceEvent> {
    fn record(&mut self, event: TraceEvent) {
        self.push(event);
    }
}

/// Writes one JSON object per line, flushing after each event.
pub struct JsonlTrace<W: Write> {
    out: W,
    error: Option<io::Error>,
}

impl<W: Write> JsonlTrace<W> {
    pub fn new(out: W) -> Self {
        JsonlTrace { out, error: None }
    }

    /// The first write error, if any occurred.
    pub fn finish(self) -> io::Result<W> {
        match self.error {
            Some(e) => Err(e),
            None => Ok(self.out),
        }
    }
}

impl<W: Write> TraceSink for JsonlTrace<W> {
    fn record(&mut self, event: TraceEvent) {
        if self.error.is_some() {
            return;
        }
        let res = serde_json::to_writer(&mut self.out, &event)
            .map_err(io::Error::from)
            .and_then(|_| self.out.write_all(b"\n"))
            .and_then(|_| self.out.flush());
        if let Err(e) = res {
            self.error = Some(e);
        }
    }
}

/// Numbers events and forwards them to an optional sink.
#[derive(Default)]
pub(crate) struct Tracer<'t> {
    sink: Option<&'t mut dyn TraceSink>,
    seq: u64,
}

impl<'t> Tracer<'t> {
    pub(crate) fn new(sink: Option<&'t mut dyn TraceSink>) -> Self {
        Tracer { sink, seq: 0 }
    }

    pub(crate) fn emit(&mut self, event: Event) {
        if let Some(sink) = self.sink.as_mut() {
            sink.record(TraceEvent {
                seq: self.seq,
                event,
            });
            self.seq += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn throw_serializes_flat() {
        let ev = TraceEvent {
            seq: 4,
            event: Event::Throw {
                target: 3,
                origin: ThrowOrigin::Analysis,
                jump: 3,
                payload: Carried::Ids(vec![2, 3]),
            },
        };
        let line = serde_json::to_string(&ev).unwrap();
        assert_eq!(
            line,
            r#"{"seq":4,"kind":"throw","target":3,"origin":"analysis","jump":3,"ids":[2,3]}"#
        );
        let back: TraceEvent = serde_json::from_str(&line).unwrap();
        assert_eq!(back, ev);
    }

    #[test]
    fn jsonl_writes_one_line_per_event() {
        let mut sink = JsonlTrace::new(Vec::new());
        let mut t = Tracer::new(Some(&mut sink));
        t.emit(Event::Solution);
        t.emit(Event::Unsat);
        let out = String::from_utf8(sink.finish().unwrap()).unwrap();
        assert_eq!(out, "{\"seq\":0,\"kind\":\"solution\"}\n{\"seq\":1,\"kind\":\"unsat\"}\n");
    }
}
