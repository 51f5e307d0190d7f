//! Graph colouring with conflict-directed backjumping.
//!
//! Each vertex gets a handler frame keyed by its id. Edge checks suspend
//! until both endpoints are coloured; a failed check throws
//! `ball(max, {min, max})`, which is always caught by the frame of the vertex
//! just coloured. That frame folds the ball's ids into its conflict set and
//! either tries its next colour or, once out of colours, throws the merged set
//! (minus itself) to the most recently coloured vertex it mentions.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::engine::{Ball, Domain, Engine, FrameKey};
use crate::stats::SearchStats;
use crate::trace::{Carried, Decided, Event, ThrowOrigin, TraceSink, Tracer};

#[derive(Debug, thiserror::Error)]
pub enum InstanceError {
    #[error("instance has no vertices")]
    NoVertices,
    #[error("instance has no colours")]
    NoColors,
    #[error("colour {0:?} is listed twice")]
    DuplicateColor(String),
    #[error("edge ({0}, {0}) is a self-loop")]
    SelfLoop(usize),
    #[error("edge ({a}, {b}) has an endpoint outside 1..={vertices}")]
    EdgeOutOfRange { a: usize, b: usize, vertices: usize },
    #[error("invalid instance JSON: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Deserialize, Serialize)]
struct RawInstance {
    colors: Vec<String>,
    vertices: usize,
    edges: Vec<[usize; 2]>,
}

/// A validated colouring problem. Vertex ids are `1..=vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringInstance {
    vertices: usize,
    colors: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl ColoringInstance {
    pub fn new<S: Into<String>>(
        vertices: usize,
        colors: impl IntoIterator<Item = S>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, InstanceError> {
        let colors: Vec<String> = colors.into_iter().map(Into::into).collect();
        let edges: Vec<(usize, usize)> = edges.into_iter().collect();
        if vertices == 0 {
            return Err(InstanceError::NoVertices);
        }
        if colors.is_empty() {
            return Err(InstanceError::NoColors);
        }
        let mut seen = BTreeSet::new();
        for c in &colors {
            if !seen.insert(c.as_str()) {
                return Err(InstanceError::DuplicateColor(c.clone()));
            }
        }
        for &(a, b) in &edges {
            if a == 0 || b == 0 || a > vertices || b > vertices {
                return Err(InstanceError::EdgeOutOfRange { a, b, vertices });
            }
            if a == b {
                return Err(InstanceError::SelfLoop(a));
            }
        }
        Ok(ColoringInstance {
            vertices,
            colors,
            edges,
        })
    }

    /// Parses `{"colors": [...], "vertices": n, "edges": [[a, b], ...]}`.
    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        let raw: RawInstance = serde_json::from_str(text)?;
        Self::new(
            raw.vertices,
            raw.colors,
            raw.edges.into_iter().map(|[a, b]| (a, b)),
        )
    }

    pub fn to_json(&self) -> String {
        let raw = RawInstance {
            colors: self.colors.clone(),
            vertices: self.vertices,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        };
        serde_json::to_string(&raw).expect("instance serializes")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn colors(&self) -> &[String] {
        &self.colors
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// True when `assignment[v - 1]` differs across every edge.
    pub fn is_proper(&self, assignment: &[String]) -> bool {
        assignment.len() == self.vertices
            && self
                .edges
                .iter()
                .all(|&(a, b)| assignment[a - 1] != assignment[b - 1])
    }
}

/// Union of the vertex ids involved in the conflicts seen at one frame.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ConflictSet(BTreeSet<usize>);

impl ConflictSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn merge(&self, other: &ConflictSet) -> ConflictSet {
        ConflictSet(self.0.union(&other.0).copied().collect())
    }

    pub fn without(&self, id: usize) -> ConflictSet {
        let mut s = self.0.clone();
        s.remove(&id);
        ConflictSet(s)
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.0.contains(&id)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.0.iter().copied().collect()
    }
}

impl FromIterator<usize> for ConflictSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        ConflictSet(iter.into_iter().collect())
    }
}

impl fmt::Display for ConflictSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, id) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{id}")?;
        }
        write!(f, "}}")
    }
}

/// Disequality between two vertices, checked once both are coloured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeCheck {
    pub x: usize,
    pub y: usize,
}

/// Frame-local state for one vertex.
#[derive(Debug, Clone, Default)]
pub struct VertexFrame {
    /// Index of the next colour to try.
    pub next_color: usize,
    pub conflicts: ConflictSet,
}

#[derive(Debug)]
pub struct ColoringDomain;

impl Domain for ColoringDomain {
    type Value = usize;
    type Watcher = EdgeCheck;
    type Payload = ConflictSet;
    type Acc = VertexFrame;
    type Stored = ();
}

pub type ColoringEngine = Engine<ColoringDomain>;

/// Runs an edge check if both endpoints are coloured, otherwise suspends it
/// on whichever endpoints are still uncoloured.
pub fn post_edge_check(engine: &mut ColoringEngine, check: EdgeCheck) -> Result<(), Ball<ConflictSet>> {
    let slots: Vec<usize> = [check.x, check.y]
        .into_iter()
        .map(|id| id - 1)
        .filter(|&s| !engine.is_bound(s))
        .collect();
    if !slots.is_empty() {
        engine.register(check, &slots);
        return Ok(());
    }
    let cx = engine.value(check.x - 1);
    let cy = engine.value(check.y - 1);
    if cx == cy {
        let (lo, hi) = (check.x.min(check.y), check.x.max(check.y));
        Err(Ball::new(hi, [lo, hi].into_iter().collect()))
    } else {
        Ok(())
    }
}

/// Outcome of folding a caught conflict into a frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConflictStep {
    /// Colours remain; retry with the merged set as the frame's accumulator.
    Continue(ConflictSet),
    /// Out of colours; backjump with this ball.
    Backjump(Ball<ConflictSet>),
    /// Out of colours and nothing earlier to blame.
    Unsatisfiable,
}

/// Merges a caught conflict set into the frame's accumulator and decides
/// whether to retry or backjump.
pub fn update_conflict<T>(rest: &[T], caught: &ConflictSet, acc: &ConflictSet, id: usize) -> ConflictStep {
    let merged = caught.merge(acc);
    if !rest.is_empty() {
        return ConflictStep::Continue(merged);
    }
    let remaining = merged.without(id);
    match remaining.max() {
        Some(target) => ConflictStep::Backjump(Ball::new(target, remaining)),
        None => ConflictStep::Unsatisfiable,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringSolution {
    /// Colour label of vertex `v` at index `v - 1`.
    pub assignment: Vec<String>,
    /// Counters at the moment the solution was found.
    pub stats: SearchStats,
}

impl ColoringSolution {
    pub fn color_of(&self, vertex: usize) -> &str {
        &self.assignment[vertex - 1]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringOutcome {
    pub solution: Option<ColoringSolution>,
    pub stats: SearchStats,
}

/// A ball as it was raised, with the colouring in force at that moment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RaisedBall {
    pub ball: Ball<ConflictSet>,
    pub origin: ThrowOrigin,
    /// Colour index per vertex (`None` when uncoloured).
    pub assignment: Vec<Option<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Fresh,
    Found,
    Done,
}

/// Resumable backjumping search; yields solutions one at a time.
pub struct ColoringSearch<'a, 't> {
    instance: &'a ColoringInstance,
    engine: ColoringEngine,
    stats: SearchStats,
    tracer: Tracer<'t>,
    state: State,
    raised: Option<Vec<RaisedBall>>,
}

impl<'a, 't> ColoringSearch<'a, 't> {
    pub fn new(instance: &'a ColoringInstance) -> Self {
        ColoringSearch {
            instance,
            engine: Engine::new(instance.vertex_count()),
            stats: SearchStats::default(),
            tracer: Tracer::default(),
            state: State::Fresh,
            raised: None,
        }
    }

    pub fn with_trace(mut self, sink: &'t mut dyn TraceSink) -> Self {
        self.tracer = Tracer::new(Some(sink));
        self
    }

    /// Records every raised ball together with the colouring at raise time.
    pub fn record_balls(mut self) -> Self {
        self.raised = Some(Vec::new());
        self
    }

    pub fn raised_balls(&self) -> &[RaisedBall] {
        self.raised.as_deref().unwrap_or(&[])
    }

    pub fn stats(&self) -> SearchStats {
        self.stats
    }

    pub fn next_solution(&mut self) -> Option<ColoringSolution> {
        let pending = match self.state {
            State::Done => return None,
            State::Fresh => {
                for &(x, y) in self.instance.edges() {
                    // Nothing is coloured yet, so every check suspends.
                    post_edge_check(&mut self.engine, EdgeCheck { x, y })
                        .expect("checks cannot fail before colouring");
                }
                None
            }
            State::Found => {
                let all: ConflictSet = (1..=self.instance.vertex_count()).collect();
                let target = all.max().expect("at least one vertex");
                Some((Ball::new(target, all), ThrowOrigin::Enumerate))
            }
        };
        let found = self.search(pending);
        self.state = if found.is_some() { State::Found } else { State::Done };
        found
    }

    fn search(&mut self, mut pending: Option<(Ball<ConflictSet>, ThrowOrigin)>) -> Option<ColoringSolution> {
        let instance = self.instance;
        let n = instance.vertex_count();
        let colors = instance.colors();
        loop {
            if let Some((ball, origin)) = pending.take() {
                match self.throw(ball, origin) {
                    ConflictStep::Continue(merged) => {
                        self.engine.top_frame_mut().expect("catching frame").acc.conflicts = merged;
                    }
                    ConflictStep::Backjump(next) => {
                        pending = Some((next, ThrowOrigin::Analysis));
                        continue;
                    }
                    ConflictStep::Unsatisfiable => {
                        self.tracer.emit(Event::Unsat);
                        return None;
                    }
                }
            } else {
                let next_id = self.engine.top_frame().map_or(1, |f| f.key + 1);
                if next_id > n {
                    self.tracer.emit(Event::Solution);
                    let assignment = self
                        .engine
                        .values()
                        .iter()
                        .map(|c| colors[c.expect("all vertices coloured")].clone())
                        .collect();
                    return Some(ColoringSolution {
                        assignment,
                        stats: self.stats,
                    });
                }
                self.engine.push_frame(next_id, VertexFrame::default());
            }

            let frame = self.engine.top_frame_mut().expect("vertex frame");
            let color = frame.acc.next_color;
            frame.acc.next_color += 1;
            let id = frame.key;
            self.engine.bind(id - 1, color);
            self.stats.decisions += 1;
            self.tracer.emit(Event::Decide {
                var: id,
                value: Decided::Color(colors[color].clone()),
                level: id,
            });
            if let Err(ball) = self.engine.drain(post_edge_check) {
                self.tracer.emit(Event::Conflict {
                    vars: ball.payload.to_vec(),
                });
                pending = Some((ball, ThrowOrigin::Check));
            }
        }
    }

    /// Raises a ball, lets the target frame catch it, and folds it in.
    fn throw(&mut self, ball: Ball<ConflictSet>, origin: ThrowOrigin) -> ConflictStep {
        let from: FrameKey = self.engine.top_frame().map_or(0, |f| f.key);
        let jump = from - ball.target;
        self.stats.throws += 1;
        if origin == ThrowOrigin::Analysis {
            self.stats.jumps += jump as u64;
        }
        self.tracer.emit(Event::Throw {
            target: ball.target,
            origin,
            jump,
            payload: Carried::Ids(ball.payload.to_vec()),
        });
        if let Some(raised) = self.raised.as_mut() {
            raised.push(RaisedBall {
                ball: ball.clone(),
                origin,
                assignment: self.engine.values().to_vec(),
            });
        }
        let caught = self.engine.raise(ball);
        self.tracer.emit(Event::Catch { level: caught.key });
        let frame = self.engine.top_frame().expect("catching frame");
        let rest = &self.instance.colors()[frame.acc.next_color..];
        update_conflict(rest, &caught.payload, &frame.acc.conflicts, frame.key)
    }
}

impl Iterator for ColoringSearch<'_, '_> {
    type Item = ColoringSolution;

    fn next(&mut self) -> Option<ColoringSolution> {
        self.next_solution()
    }
}

/// First solution (if any) and the counters of the run.
pub fn solve(instance: &ColoringInstance) -> ColoringOutcome {
    let mut search = ColoringSearch::new(instance);
    let solution = search.next_solution();
    ColoringOutcome {
        solution,
        stats: search.stats(),
    }
}

/// Every solution, in search order.
pub fn enumerate(instance: &ColoringInstance) -> ColoringSearch<'_, 'static> {
    ColoringSearch::new(instance)
}
