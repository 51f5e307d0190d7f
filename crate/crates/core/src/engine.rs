//! Trail and handler-frame engine.
//!
//! Both solvers are written against this engine, which reproduces the
//! control that `catch/throw` gives a Prolog program:
//!
//! * a variable store whose bindings are recorded on a trail,
//! * a registry of suspended watchers that wake when a variable they are
//!   suspended on becomes bound,
//! * a stack of handler [`Frame`]s, each keyed by a [`FrameKey`], and
//! * [`Engine::raise`], which unwinds to the frame whose key matches the
//!   ball's target, rewinding every binding and watcher mutation made since
//!   that frame was pushed, and hands the (copied) payload back.
//!
//! A [`PersistentStore`] sits beside the trail and is never touched by a
//! rewind; this is where learnt clauses survive backjumps.

use std::collections::VecDeque;
use std::fmt;

/// Identifies a handler frame: a vertex id for colouring, a decision level for SAT.
pub type FrameKey = usize;

/// Index of a variable slot in the store.
pub type VarSlot = usize;

/// Index of a watcher in the registry.
pub type WatcherId = usize;

/// The types a particular search plugs into the engine.
pub trait Domain {
    /// What a variable is bound to.
    type Value: Clone + fmt::Debug + PartialEq;
    /// State of a suspended watcher.
    type Watcher: Clone + fmt::Debug + PartialEq;
    /// Data carried by a thrown ball.
    type Payload: Clone + fmt::Debug;
    /// Per-frame data that lives outside the trail.
    type Acc: fmt::Debug;
    /// Contents of the persistent store.
    type Stored: Clone + fmt::Debug + Default;
}

/// A thrown term: where to unwind to and what to carry there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball<P> {
    pub target: FrameKey,
    pub payload: P,
}

impl<P> Ball<P> {
    pub fn new(target: FrameKey, payload: P) -> Self {
        Ball { target, payload }
    }
}

/// One undoable mutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrailEntry {
    /// A variable went from unbound to bound.
    Bind { var: VarSlot },
    /// A watcher was appended to the registry and suspended.
    Register { watcher: WatcherId },
    /// The suspension list of `var` was taken when `var` was bound.
    Detach { var: VarSlot, suspended: Vec<WatcherId> },
    /// A watcher moved from suspended to woken.
    Wake { watcher: WatcherId },
}

/// Order in which woken watchers run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WakeOrder {
    /// Watchers woken by a binding run before any watcher that was already
    /// pending, in registration order. This is what coroutining does in a
    /// Prolog system: goals woken by a unification run at the next call.
    #[default]
    DepthFirst,
    /// A single global queue in wake order.
    Fifo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WatcherStatus {
    Suspended,
    Woken,
}

#[derive(Debug, Clone, PartialEq)]
struct WatcherSlot<W> {
    state: W,
    on: Vec<VarSlot>,
    status: WatcherStatus,
}

/// A handler frame.
#[derive(Debug)]
pub struct Frame<A> {
    pub key: FrameKey,
    pub mark: usize,
    pub acc: A,
}

/// Learnt data that outlives every rewind.
#[derive(Debug, Clone, Default)]
pub struct PersistentStore<S> {
    contents: S,
}

impl<S: Clone> PersistentStore<S> {
    pub fn get(&self) -> &S {
        &self.contents
    }

    pub fn put(&mut self, contents: S) {
        self.contents = contents;
    }

    pub fn get_mut(&mut self) -> &mut S {
        &mut self.contents
    }
}

/// Result of a caught ball.
#[derive(Debug, Clone)]
pub struct Caught<P> {
    /// Key of the frame that caught the ball (now on top of the stack).
    pub key: FrameKey,
    pub payload: P,
    /// Frames popped above the catching frame.
    pub popped: usize,
    /// Trail entries undone.
    pub undone: usize,
    /// Key of the frame that was on top when the ball was raised.
    pub raised_from: FrameKey,
}

/// Raised when no frame matches a ball's target.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("uncaught ball targeting frame {target}")]
pub struct UncaughtBall {
    pub target: FrameKey,
}

/// Deep copy of the rewindable state, for round-trip checks.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineSnapshot<V, W> {
    pub values: Vec<Option<V>>,
    pub suspended: Vec<Vec<WatcherId>>,
    pub watchers: Vec<(W, Vec<VarSlot>, WatcherStatus)>,
}

pub struct Engine<D: Domain> {
    values: Vec<Option<D::Value>>,
    suspended: Vec<Vec<WatcherId>>,
    watchers: Vec<WatcherSlot<D::Watcher>>,
    trail: Vec<TrailEntry>,
    frames: Vec<Frame<D::Acc>>,
    queue: VecDeque<WatcherId>,
    order: WakeOrder,
    store: PersistentStore<D::Stored>,
}

impl<D: Domain> fmt::Debug for Engine<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Engine")
            .field("vars", &self.values.len())
            .field("watchers", &self.watchers.len())
            .field("trail", &self.trail.len())
            .field("frames", &self.frame_keys())
            .field("queue", &self.queue)
            .finish()
    }
}

impl<D: Domain> Engine<D> {
    pub fn new(var_count: usize) -> Self {
        Self::with_order(var_count, WakeOrder::default())
    }

    pub fn with_order(var_count: usize, order: WakeOrder) -> Self {
        Engine {
            values: vec![None; var_count],
            suspended: vec![Vec::new(); var_count],
            watchers: Vec::new(),
            trail: Vec::new(),
            frames: Vec::new(),
            queue: VecDeque::new(),
            order,
            store: PersistentStore::default(),
        }
    }

    pub fn var_count(&self) -> usize {
        self.values.len()
    }

    pub fn wake_order(&self) -> WakeOrder {
        self.order
    }

    pub fn value(&self, var: VarSlot) -> Option<&D::Value> {
        self.values[var].as_ref()
    }

    pub fn is_bound(&self, var: VarSlot) -> bool {
        self.values[var].is_some()
    }

    pub fn values(&self) -> &[Option<D::Value>] {
        &self.values
    }

    /// Binds an unbound variable and wakes every watcher suspended on it.
    ///
    /// Binding a variable that is already bound is a solver bug and panics.
    pub fn bind(&mut self, var: VarSlot, value: D::Value) {
        assert!(
            self.values[var].is_none(),
            "variable slot {var} is already bound"
        );
        self.values[var] = Some(value);
        self.trail.push(TrailEntry::Bind { var });

        let suspended = std::mem::take(&mut self.suspended[var]);
        if suspended.is_empty() {
            return;
        }
        let mut woken = Vec::new();
        for &id in &suspended {
            if self.watchers[id].status == WatcherStatus::Suspended {
                self.watchers[id].status = WatcherStatus::Woken;
                woken.push(id);
            }
        }
        self.trail.push(TrailEntry::Detach { var, suspended });
        for &id in &woken {
            self.trail.push(TrailEntry::Wake { watcher: id });
        }
        match self.order {
            WakeOrder::Fifo => self.queue.extend(woken),
            WakeOrder::DepthFirst => {
                for id in woken.into_iter().rev() {
                    self.queue.push_front(id);
                }
            }
        }
    }

    /// Suspends a watcher on the given (unbound) variables.
    pub fn register(&mut self, state: D::Watcher, on: &[VarSlot]) -> WatcherId {
        debug_assert!(on.iter().all(|&v| self.values[v].is_none()));
        let id = self.watchers.len();
        for &v in on {
            self.suspended[v].push(id);
        }
        self.watchers.push(WatcherSlot {
            state,
            on: on.to_vec(),
            status: WatcherStatus::Suspended,
        });
        self.trail.push(TrailEntry::Register { watcher: id });
        id
    }

    pub fn watcher(&self, id: WatcherId) -> &D::Watcher {
        &self.watchers[id].state
    }

    /// Watchers currently suspended, with the variables they wait on.
    pub fn suspended_watchers(&self) -> impl Iterator<Item = (WatcherId, &D::Watcher, &[VarSlot])> {
        self.watchers
            .iter()
            .enumerate()
            .filter(|(_, w)| w.status == WatcherStatus::Suspended)
            .map(|(id, w)| (id, &w.state, w.on.as_slice()))
    }

    pub fn queue_len(&self) -> usize {
        self.queue.len()
    }

    /// Runs woken watchers until the queue is empty or one of them fails.
    ///
    /// On failure the remaining queue is dropped; the woken flags it held are
    /// trailed, so the rewind that follows re-suspends those watchers.
    pub fn drain<E>(
        &mut self,
        mut run: impl FnMut(&mut Self, D::Watcher) -> Result<(), E>,
    ) -> Result<(), E> {
        while let Some(id) = self.queue.pop_front() {
            let state = self.watchers[id].state.clone();
            if let Err(e) = run(self, state) {
                self.queue.clear();
                return Err(e);
            }
        }
        Ok(())
    }

    pub fn trail(&self) -> &[TrailEntry] {
        &self.trail
    }

    pub fn trail_len(&self) -> usize {
        self.trail.len()
    }

    /// Undoes trail entries down to `mark`. Returns how many were undone.
    fn rewind(&mut self, mark: usize) -> usize {
        let undone = self.trail.len().saturating_sub(mark);
        while self.trail.len() > mark {
            match self.trail.pop().expect("trail entry") {
                TrailEntry::Bind { var } => self.values[var] = None,
                TrailEntry::Register { watcher } => {
                    let slot = self.watchers.pop().expect("registered watcher");
                    debug_assert_eq!(self.watchers.len(), watcher);
                    for v in slot.on {
                        let last = self.suspended[v].pop();
                        debug_assert_eq!(last, Some(watcher));
                    }
                }
                TrailEntry::Detach { var, suspended } => {
                    debug_assert!(self.suspended[var].is_empty());
                    self.suspended[var] = suspended;
                }
                TrailEntry::Wake { watcher } => {
                    self.watchers[watcher].status = WatcherStatus::Suspended;
                }
            }
        }
        self.queue.clear();
        undone
    }

    /// Pushes a handler frame at the current trail position.
    ///
    /// Keys must strictly increase up the stack.
    pub fn push_frame(&mut self, key: FrameKey, acc: D::Acc) {
        if let Some(top) = self.frames.last() {
            assert!(
                key > top.key,
                "frame key {key} must exceed the key of the frame below ({})",
                top.key
            );
        }
        debug_assert!(self.queue.is_empty(), "frame pushed with pending watchers");
        self.frames.push(Frame {
            key,
            mark: self.trail.len(),
            acc,
        });
    }

    /// Pops the top frame, undoing everything done since it was pushed.
    pub fn pop_frame(&mut self) -> Option<Frame<D::Acc>> {
        let frame = self.frames.pop()?;
        self.rewind(frame.mark);
        Some(frame)
    }

    /// Undoes everything done since the top frame was pushed, keeping the frame.
    pub fn rewind_top(&mut self) -> usize {
        let mark = self.frames.last().map_or(0, |f| f.mark);
        self.rewind(mark)
    }

    pub fn top_frame(&self) -> Option<&Frame<D::Acc>> {
        self.frames.last()
    }

    pub fn top_frame_mut(&mut self) -> Option<&mut Frame<D::Acc>> {
        self.frames.last_mut()
    }

    pub fn frames(&self) -> &[Frame<D::Acc>] {
        &self.frames
    }

    pub fn frame_keys(&self) -> Vec<FrameKey> {
        self.frames.iter().map(|f| f.key).collect()
    }

    pub fn depth(&self) -> usize {
        self.frames.len()
    }

    /// Unwinds to the frame keyed `ball.target`.
    ///
    /// Frames above it are popped, the trail is rewound to the catching
    /// frame's mark, the wake queue is cleared, and the payload is returned.
    /// The catching frame stays on top of the stack.
    pub fn try_raise(&mut self, ball: Ball<D::Payload>) -> Result<Caught<D::Payload>, UncaughtBall> {
        let Some(pos) = self.frames.iter().rposition(|f| f.key == ball.target) else {
            return Err(UncaughtBall {
                target: ball.target,
            });
        };
        let raised_from = self.frames.last().map_or(0, |f| f.key);
        let popped = self.frames.len() - pos - 1;
        self.frames.truncate(pos + 1);
        let undone = self.rewind(self.frames[pos].mark);
        Ok(Caught {
            key: ball.target,
            payload: ball.payload,
            popped,
            undone,
            raised_from,
        })
    }

    /// Like [`Engine::try_raise`], but a ball nobody catches is a bug.
    pub fn raise(&mut self, ball: Ball<D::Payload>) -> Caught<D::Payload> {
        match self.try_raise(ball) {
            Ok(caught) => caught,
            Err(e) => panic!("{e}"),
        }
    }

    pub fn store_get(&self) -> &D::Stored {
        self.store.get()
    }

    pub fn store_put(&mut self, contents: D::Stored) {
        self.store.put(contents);
    }

    /// In-place access, for appending without copying the whole store.
    pub fn store_mut(&mut self) -> &mut D::Stored {
        self.store.get_mut()
    }

    pub fn snapshot(&self) -> EngineSnapshot<D::Value, D::Watcher> {
        EngineSnapshot {
            values: self.values.clone(),
            suspended: self.suspended.clone(),
            watchers: self
                .watchers
                .iter()
                .map(|w| (w.state.clone(), w.on.clone(), w.status))
                .collect(),
        }
    }
}
