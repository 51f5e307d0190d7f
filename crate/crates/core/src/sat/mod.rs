//! CDCL SAT solving on the catch/throw engine.
//!
//! Every decision opens a frame keyed by its decision level. A conflict is
//! analysed into a learnt clause and a backjump level; the clause travels
//! in a ball to the frame of that level, which undoes everything since it
//! was opened (its own decision included), records the clause in the
//! persistent store and re-watches the stored clauses whose watchers the
//! unwinding removed. Search then carries on at the next level number.
//!
//! [`Strategy::None`] instead runs plain chronological backtracking over
//! the same propagators, trying `true` and then `false` for each variable.

mod analysis;
mod graph;
mod watch;

use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use serde::Serialize;

use crate::cnf::{CnfInstance, InstanceError, Lit, Model};
use crate::engine::{Ball, Domain};
use crate::stats::SearchStats;
use crate::trace::{Carried, Decided, Event, ThrowOrigin, TraceSink, Tracer};

pub use analysis::{analyse_conflict, backjump_level, construct_clause, first_uip, Analysis, NodeSource};
pub use graph::{export_dot, ImplicationGraph};
pub use watch::{
    propagated_level, set_watch, unit_assign, wake, watch_clause, ClauseWatcher, Conflict, IdMap,
    SatEngine,
};

/// A decision level and the order of assignment within it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Level {
    pub major: u32,
    pub sub: u32,
}

impl Level {
    pub const fn new(major: u32, sub: u32) -> Level {
        Level { major, sub }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.major, self.sub)
    }
}

/// Why a variable holds its value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImpNode {
    pub level: Level,
    pub var: u32,
    pub value: bool,
    /// Variables whose assignments forced this one; empty for decisions
    /// and for facts from unit clauses.
    pub reasons: Vec<u32>,
}

impl ImpNode {
    pub fn decision(var: u32, value: bool, level: u32) -> ImpNode {
        ImpNode {
            level: Level::new(level, 0),
            var,
            value,
            reasons: Vec::new(),
        }
    }
}

/// A clause in the persistent store, tagged with the level number search
/// continued at after it was learnt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LearntClause {
    pub tag: u32,
    pub lits: Rc<[Lit]>,
}

/// Per-frame bookkeeping. Frame 0 has no decision.
#[derive(Debug, Clone, Default)]
pub struct DecisionFrame {
    pub decision: Option<(u32, bool)>,
    /// The opposite value has been tried (plain backtracking only).
    pub flipped: bool,
}

#[derive(Debug)]
pub struct SatDomain;

impl Domain for SatDomain {
    type Value = ImpNode;
    type Watcher = ClauseWatcher;
    type Payload = Vec<Lit>;
    type Acc = DecisionFrame;
    type Stored = Vec<LearntClause>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// No learning: chronological backtracking.
    None,
    /// Learn the negated decisions behind the conflict.
    LastUip,
    /// Learn the cut at the implication point nearest the conflict.
    #[default]
    FirstUip,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::None, Strategy::LastUip, Strategy::FirstUip];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::None => "none",
            Strategy::LastUip => "last-uip",
            Strategy::FirstUip => "first-uip",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Strategy, String> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| format!("unknown strategy {s:?} (expected none, last-uip or first-uip)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverOptions {
    pub strategy: Strategy,
    /// Learnt clauses with fewer literals than this are kept for
    /// reinstatement after later backjumps.
    pub k: usize,
    /// Decisions to make first, in order. Entries whose variable is
    /// already bound when their turn comes are skipped.
    pub decision_script: Vec<(u32, bool)>,
    /// Check the propagator and implication-graph invariants whenever
    /// propagation settles.
    pub audit: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            strategy: Strategy::default(),
            k: 8,
            decision_script: Vec::new(),
            audit: false,
        }
    }
}

impl SolverOptions {
    pub fn with_strategy(strategy: Strategy) -> Self {
        SolverOptions {
            strategy,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatStatus {
    Sat(Model),
    Unsat,
}

impl SatStatus {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatStatus::Sat(_))
    }

    pub fn model(&self) -> Option<&Model> {
        match self {
            SatStatus::Sat(m) => Some(m),
            SatStatus::Unsat => None,
        }
    }
}

/// Invariant checks made at each point where propagation settled.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub quiescences: u64,
    pub watchers_checked: u64,
    pub nodes_checked: u64,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct SatOutcome {
    pub status: SatStatus,
    pub stats: SearchStats,
    /// The implication graph of the first conflict, if there was one.
    pub conflict_graph: Option<ImplicationGraph>,
    pub audit: Option<AuditReport>,
}

/// A clause produced by conflict analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LearntRecord {
    pub tag: u32,
    pub lits: Vec<Lit>,
    pub persisted: bool,
}

/// A ball thrown after conflict analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThrowRecord {
    pub target: u32,
    /// Level of the frame on top when the ball was raised.
    pub from: u32,
    pub clause: Vec<Lit>,
    /// Distinct decision levels of the clause's literals, ascending.
    pub levels: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Fresh,
    Found,
    Done,
}

fn dimacs(lits: &[Lit]) -> Vec<i64> {
    lits.iter().map(|l| l.to_dimacs()).collect()
}

fn note_assign(stats: &mut SearchStats, tracer: &mut Tracer<'_>, n: &ImpNode) {
    stats.propagations += 1;
    tracer.emit(Event::Propagate {
        var: n.var as usize,
        value: n.value,
        level: [n.level.major, n.level.sub],
        reasons: n.reasons.iter().map(|&r| r as usize).collect(),
    });
}

/// Resumable solver; yields models one at a time.
pub struct SatSearch<'a, 't> {
    instance: &'a CnfInstance,
    options: SolverOptions,
    ids: IdMap,
    engine: SatEngine,
    stats: SearchStats,
    tracer: Tracer<'t>,
    state: State,
    next_level: u32,
    script_pos: usize,
    conflict_graph: Option<ImplicationGraph>,
    audit: Option<AuditReport>,
    recording: bool,
    learnt_log: Vec<LearntRecord>,
    throw_log: Vec<ThrowRecord>,
}

impl<'a, 't> SatSearch<'a, 't> {
    pub fn new(instance: &'a CnfInstance, options: SolverOptions) -> Result<Self, InstanceError> {
        instance.validate()?;
        let audit = options.audit.then(AuditReport::default);
        Ok(SatSearch {
            instance,
            ids: IdMap::new(instance.var_count),
            engine: SatEngine::new(instance.var_count as usize),
            options,
            stats: SearchStats::default(),
            tracer: Tracer::default(),
            state: State::Fresh,
            next_level: 1,
            script_pos: 0,
            conflict_graph: None,
            audit,
            recording: false,
            learnt_log: Vec::new(),
            throw_log: Vec::new(),
        })
    }

    pub fn with_trace(mut self, sink: &'t mut dyn TraceSink) -> Self {
        self.tracer = Tracer::new(Some(sink));
        self
    }

    /// Keeps every learnt clause and analysis ball for inspection.
    pub fn record(mut self) -> Self {
        self.recording = true;
        self
    }

    pub fn stats(&self) -> SearchStats {
        self.stats
    }

    pub fn conflict_graph(&self) -> Option<&ImplicationGraph> {
        self.conflict_graph.as_ref()
    }

    pub fn audit_report(&self) -> Option<&AuditReport> {
        self.audit.as_ref()
    }

    pub fn learnt_log(&self) -> &[LearntRecord] {
        &self.learnt_log
    }

    pub fn throw_log(&self) -> &[ThrowRecord] {
        &self.throw_log
    }

    /// The persistent learnt-clause store, oldest first.
    pub fn learnt_store(&self) -> &[LearntClause] {
        self.engine.store_get()
    }

    pub fn engine(&self) -> &SatEngine {
        &self.engine
    }

    pub fn into_outcome(mut self) -> SatOutcome {
        let status = match self.next_model() {
            Some(m) => SatStatus::Sat(m),
            None => SatStatus::Unsat,
        };
        SatOutcome {
            status,
            stats: self.stats,
            conflict_graph: self.conflict_graph,
            audit: self.audit,
        }
    }

    pub fn next_model(&mut self) -> Option<Model> {
        let found = match self.state {
            State::Done => return None,
            State::Fresh => self.setup(),
            State::Found => self.resume(),
        };
        self.state = if found.is_some() { State::Found } else { State::Done };
        found
    }

    fn setup(&mut self) -> Option<Model> {
        if self.instance.has_empty_clause {
            self.tracer.emit(Event::Unsat);
            return None;
        }
        let mut failed = None;
        for c in &self.instance.clauses {
            let lits = self.ids.unground(c);
            if let Err(conflict) = self.watch(lits) {
                failed = Some(conflict);
                break;
            }
        }
        self.run(failed)
    }

    fn resume(&mut self) -> Option<Model> {
        if self.options.strategy == Strategy::None {
            return self.run_plain(None, true);
        }
        let mut decisions: Vec<&ImpNode> = self
            .engine
            .values()
            .iter()
            .flatten()
            .filter(|n| n.reasons.is_empty() && n.level.major > 0)
            .collect();
        decisions.sort_by_key(|n| n.level);
        let blocking: Rc<[Lit]> = decisions.iter().map(|n| Lit::new(n.var, !n.value)).collect();
        if blocking.is_empty() {
            self.tracer.emit(Event::Unsat);
            return None;
        }
        while self.engine.pop_frame().is_some() {}
        self.engine.store_mut().push(LearntClause {
            tag: 0,
            lits: blocking.clone(),
        });
        // Clauses learnt in recoveries above level 0 went with the frames.
        let mut again = vec![blocking];
        again.extend(
            self.engine
                .store_get()
                .iter()
                .rev()
                .filter(|c| c.tag >= 2)
                .map(|c| c.lits.clone()),
        );
        let failed = again.into_iter().find_map(|c| self.watch(c).err());
        self.run(failed)
    }

    fn run(&mut self, failed: Option<Conflict>) -> Option<Model> {
        match self.options.strategy {
            Strategy::None => self.run_plain(failed, false),
            Strategy::LastUip | Strategy::FirstUip => self.run_learning(failed),
        }
    }

    /// Watches a clause and propagates to a fixpoint.
    fn watch(&mut self, lits: Rc<[Lit]>) -> Result<(), Conflict> {
        let stats = &mut self.stats;
        let tracer = &mut self.tracer;
        watch_clause(&mut self.engine, lits, &mut |n| note_assign(stats, tracer, n))?;
        self.propagate()
    }

    fn propagate(&mut self) -> Result<(), Conflict> {
        let stats = &mut self.stats;
        let tracer = &mut self.tracer;
        self.engine
            .drain(|e, w| wake(e, w, &mut |n| note_assign(stats, tracer, n)))
    }

    fn next_decision(&mut self) -> Option<(u32, bool)> {
        while let Some(&(var, value)) = self.options.decision_script.get(self.script_pos) {
            self.script_pos += 1;
            if !self.engine.is_bound(self.ids.slot(var)) {
                return Some((var, value));
            }
        }
        (0..self.engine.var_count())
            .find(|&s| !self.engine.is_bound(s))
            .map(|s| (self.ids.var(s), true))
    }

    fn decide(&mut self, var: u32, value: bool) {
        let level = self.next_level;
        self.engine.push_frame(
            level as usize,
            DecisionFrame {
                decision: Some((var, value)),
                flipped: false,
            },
        );
        self.next_level = level + 1;
        self.bind_decision(var, value, level);
    }

    fn bind_decision(&mut self, var: u32, value: bool, level: u32) {
        self.engine
            .bind(self.ids.slot(var), ImpNode::decision(var, value, level));
        self.stats.decisions += 1;
        self.tracer.emit(Event::Decide {
            var: var as usize,
            value: Decided::Bool(value),
            level: level as usize,
        });
    }

    /// Called once propagation has settled without conflict. Opens the
    /// level-0 frame if needed, then decides or reports a model.
    fn settle(&mut self) -> Option<Model> {
        self.audit_point();
        if self.engine.depth() == 0 {
            self.engine.push_frame(0, DecisionFrame::default());
            self.next_level = 1;
        }
        match self.next_decision() {
            Some((var, value)) => {
                self.decide(var, value);
                None
            }
            None => {
                self.tracer.emit(Event::Solution);
                let values = self
                    .engine
                    .values()
                    .iter()
                    .map(|n| n.as_ref().expect("every variable assigned").value)
                    .collect();
                Some(Model::new(values))
            }
        }
    }

    fn note_conflict(&mut self, conflict: &Conflict) {
        self.tracer.emit(Event::Conflict {
            vars: conflict.whys.iter().map(|&v| v as usize).collect(),
        });
        if self.conflict_graph.is_none() {
            self.conflict_graph = Some(ImplicationGraph::capture(&self.engine, &conflict.whys));
        }
    }

    fn run_learning(&mut self, mut pending: Option<Conflict>) -> Option<Model> {
        loop {
            let conflict = match pending.take() {
                Some(c) => Some(c),
                None => self.propagate().err(),
            };
            match conflict {
                Some(c) => match self.learn_and_jump(c) {
                    Ok(next) => pending = next,
                    Err(()) => {
                        self.tracer.emit(Event::Unsat);
                        return None;
                    }
                },
                None => {
                    if let Some(model) = self.settle() {
                        return Some(model);
                    }
                }
            }
        }
    }

    /// Analyses a conflict, throws the learnt clause to its backjump level
    /// and recovers there. Returns a conflict raised during recovery, or
    /// `Err` if the formula is unsatisfiable.
    fn learn_and_jump(&mut self, conflict: Conflict) -> Result<Option<Conflict>, ()> {
        self.note_conflict(&conflict);
        let analysis = match self.options.strategy {
            Strategy::FirstUip => first_uip(&self.engine, &conflict.whys),
            _ => analyse_conflict(&self.engine, &conflict.whys),
        };
        let Analysis::Backjump {
            target,
            clause,
            levels,
        } = analysis
        else {
            return Err(());
        };
        let from = self.engine.top_frame().map_or(0, |f| f.key as u32);
        let jump = from - target;
        self.stats.throws += 1;
        self.stats.jumps += u64::from(jump);
        self.tracer.emit(Event::Throw {
            target: target as usize,
            origin: ThrowOrigin::Analysis,
            jump: jump as usize,
            payload: Carried::Clause(dimacs(&clause)),
        });
        if self.recording {
            self.throw_log.push(ThrowRecord {
                target,
                from,
                clause: clause.clone(),
                levels,
            });
        }
        let caught = self.engine.raise(Ball::new(target as usize, clause));
        self.tracer.emit(Event::Catch { level: caught.key });
        Ok(self.recover(caught.key as u32, caught.payload).err())
    }

    /// Recovery at the frame for `level`: the frame is closed, the clause
    /// is stored (if short enough) and watched, and stored clauses whose
    /// watchers were unwound are watched again.
    fn recover(&mut self, level: u32, clause: Vec<Lit>) -> Result<(), Conflict> {
        self.engine.pop_frame();
        self.next_level = level + 1;
        let tag = level + 1;
        let persisted = clause.len() < self.options.k;
        self.stats.learnt_count += 1;
        self.stats.max_learnt_size = self.stats.max_learnt_size.max(clause.len() as u64);
        self.tracer.emit(Event::Learn {
            tag: tag as usize,
            clause: dimacs(&clause),
            persisted,
        });
        if self.recording {
            self.learnt_log.push(LearntRecord {
                tag,
                lits: clause.clone(),
                persisted,
            });
        }
        let lits = self.ids.unground(&clause);
        let mut again = Vec::new();
        if persisted {
            self.engine.store_mut().push(LearntClause { tag, lits });
        } else {
            again.push(lits);
        }
        again.extend(
            self.engine
                .store_get()
                .iter()
                .rev()
                .filter(|c| c.tag >= level)
                .map(|c| c.lits.clone()),
        );
        for lits in again {
            self.watch(lits)?;
        }
        Ok(())
    }

    fn run_plain(&mut self, mut pending: Option<Conflict>, mut failing: bool) -> Option<Model> {
        loop {
            if let Some(c) = pending.take() {
                self.note_conflict(&c);
                failing = true;
            }
            if failing {
                if !self.backtrack() {
                    self.tracer.emit(Event::Unsat);
                    return None;
                }
                failing = false;
            }
            match self.propagate() {
                Err(c) => pending = Some(c),
                Ok(()) => {
                    if let Some(model) = self.settle() {
                        return Some(model);
                    }
                }
            }
        }
    }

    /// Undoes decisions newest first until one can take its other value.
    fn backtrack(&mut self) -> bool {
        loop {
            let Some(top) = self.engine.top_frame() else {
                return false;
            };
            let Some((var, value)) = top.acc.decision else {
                return false;
            };
            let level = top.key as u32;
            if !top.acc.flipped {
                self.engine.rewind_top();
                self.engine.top_frame_mut().expect("frame").acc.flipped = true;
                self.next_level = level + 1;
                self.bind_decision(var, !value, level);
                return true;
            }
            self.engine.pop_frame();
        }
    }

    fn audit_point(&mut self) {
        let Some(report) = self.audit.as_mut() else {
            return;
        };
        report.quiescences += 1;
        let engine = &self.engine;
        let bound = |v: u32| engine.value(v as usize - 1);
        for (id, w, _) in engine.suspended_watchers() {
            report.watchers_checked += 1;
            for i in [w.a, w.b] {
                if bound(w.lits[i].var).is_some() {
                    report
                        .violations
                        .push(format!("watcher {id} suspended on bound x{}", w.lits[i].var));
                }
            }
            let mut passed: Vec<u32> = (0..w.next)
                .filter(|&i| i != w.a && i != w.b)
                .map(|i| w.lits[i].var)
                .collect();
            for i in (0..w.next).filter(|&i| i != w.a && i != w.b) {
                let l = w.lits[i];
                if bound(l.var).is_none_or(|n| n.value == l.polarity) {
                    report
                        .violations
                        .push(format!("watcher {id} passed over x{} which is not false", l.var));
                }
            }
            let mut whys = w.whys.clone();
            passed.sort_unstable();
            whys.sort_unstable();
            if passed != whys {
                report
                    .violations
                    .push(format!("watcher {id} reasons {whys:?} differ from passed literals {passed:?}"));
            }
        }
        for n in engine.values().iter().flatten() {
            report.nodes_checked += 1;
            let ok = if n.reasons.is_empty() {
                (n.level.major > 0 && n.level.sub == 0) || (n.level.major == 0 && n.level.sub > 0)
            } else if n.reasons.iter().all(|&r| bound(r).is_some()) {
                n.level == propagated_level(engine, &n.reasons)
            } else {
                false
            };
            if !ok {
                report
                    .violations
                    .push(format!("x{} at {} breaks the level law", n.var, n.level));
            }
        }
    }
}

impl Iterator for SatSearch<'_, '_> {
    type Item = Model;

    fn next(&mut self) -> Option<Model> {
        self.next_model()
    }
}

/// Solves to the first model.
pub fn solve(instance: &CnfInstance, options: SolverOptions) -> Result<SatOutcome, InstanceError> {
    Ok(SatSearch::new(instance, options)?.into_outcome())
}

/// Every model, each reported once. Learning strategies block each model
/// by its decisions and restart from level 0 keeping what was learnt;
/// plain backtracking simply continues.
pub fn enumerate_models<'a>(
    instance: &'a CnfInstance,
    options: SolverOptions,
) -> Result<SatSearch<'a, 'static>, InstanceError> {
    SatSearch::new(instance, options)
}
