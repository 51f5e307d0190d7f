//! Watched-literal propagators that record why each variable was bound.
//!
//! A clause is watched on two literals; the remaining literals form a
//! suffix that is walked left to right as watched literals get falsified.
//! The reasons (variable ids) of the falsified literals passed over are
//! accumulated, most recent first, so that a unit propagation or a
//! conflict can name its antecedents.

use std::rc::Rc;

use crate::cnf::Lit;
use crate::engine::{Engine, VarSlot};

use super::{ImpNode, Level, SatDomain};

pub type SatEngine = Engine<SatDomain>;

/// Suspended state of one clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseWatcher {
    pub lits: Rc<[Lit]>,
    /// Index of the first watched literal.
    pub a: usize,
    /// Index of the second watched literal.
    pub b: usize,
    /// Start of the unwalked suffix.
    pub next: usize,
    /// Variables of literals already falsified, most recent first.
    pub whys: Vec<u32>,
}

/// A clause all of whose literals are false. `whys` lists the variables of
/// its literals, the last one examined first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conflict {
    pub whys: Vec<u32>,
}

/// Maps variable ids to engine slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdMap {
    var_count: u32,
}

impl IdMap {
    pub fn new(var_count: u32) -> IdMap {
        IdMap { var_count }
    }

    pub fn slot(&self, var: u32) -> VarSlot {
        assert!(var >= 1 && var <= self.var_count, "variable {var} not in map");
        var as VarSlot - 1
    }

    pub fn var(&self, slot: VarSlot) -> u32 {
        assert!(slot < self.var_count as usize, "slot {slot} not in map");
        slot as u32 + 1
    }

    /// Rebuilds a stored clause over the live variables.
    pub fn unground(&self, lits: &[Lit]) -> Rc<[Lit]> {
        for l in lits {
            self.slot(l.var);
        }
        lits.into()
    }
}

fn node(engine: &SatEngine, var: u32) -> Option<&ImpNode> {
    engine.value(var as usize - 1)
}

/// Starts watching a clause. May propagate or report a conflict at once.
pub fn watch_clause(
    engine: &mut SatEngine,
    lits: Rc<[Lit]>,
    assigned: &mut dyn FnMut(&ImpNode),
) -> Result<(), Conflict> {
    assert!(!lits.is_empty(), "cannot watch an empty clause");
    set_watch(engine, lits, 0, 1, Vec::new(), assigned)
}

/// Walks the suffix starting at `next`, with `other` the literal still
/// watched. Suspends once two unbound literals are found.
pub fn set_watch(
    engine: &mut SatEngine,
    lits: Rc<[Lit]>,
    mut other: usize,
    mut next: usize,
    mut whys: Vec<u32>,
    assigned: &mut dyn FnMut(&ImpNode),
) -> Result<(), Conflict> {
    loop {
        if next == lits.len() {
            let lit = lits[other];
            return match node(engine, lit.var) {
                Some(n) if n.value != lit.polarity => {
                    whys.insert(0, lit.var);
                    Err(Conflict { whys })
                }
                Some(_) => Ok(()),
                None => {
                    unit_assign(engine, lit, whys, assigned);
                    Ok(())
                }
            };
        }
        let (a, b) = (other, next);
        next += 1;
        let (va, vb) = (lits[a].var, lits[b].var);
        let (fired, kept) = if node(engine, va).is_some() {
            (a, b)
        } else if node(engine, vb).is_some() {
            (b, a)
        } else {
            let on = [va as usize - 1, vb as usize - 1];
            engine.register(ClauseWatcher { lits, a, b, next, whys }, &on);
            return Ok(());
        };
        if !update_watch(engine, &lits, fired, &mut whys) {
            return Ok(());
        }
        other = kept;
    }
}

/// Handles the bound literal at `fired`. Returns false if it satisfies the
/// clause; otherwise records its variable as a reason and returns true.
fn update_watch(engine: &SatEngine, lits: &[Lit], fired: usize, whys: &mut Vec<u32>) -> bool {
    let lit = lits[fired];
    let n = node(engine, lit.var).expect("fired literal is bound");
    if n.value == lit.polarity {
        return false;
    }
    whys.insert(0, lit.var);
    true
}

/// Resumes a woken watcher.
pub fn wake(
    engine: &mut SatEngine,
    w: ClauseWatcher,
    assigned: &mut dyn FnMut(&ImpNode),
) -> Result<(), Conflict> {
    let ClauseWatcher { lits, a, b, next, mut whys } = w;
    let (fired, kept) = if node(engine, lits[a].var).is_some() {
        (a, b)
    } else {
        (b, a)
    };
    if !update_watch(engine, &lits, fired, &mut whys) {
        return Ok(());
    }
    set_watch(engine, lits, kept, next, whys, assigned)
}

/// Level a propagation driven by `whys` receives: the greatest reason level
/// (never below `(0, 0)`) with its sublevel incremented.
pub fn propagated_level(engine: &SatEngine, whys: &[u32]) -> Level {
    let max = whys
        .iter()
        .map(|&v| node(engine, v).expect("reason is bound").level)
        .fold(Level::new(0, 0), Level::max);
    Level::new(max.major, max.sub + 1)
}

/// Binds `lit`'s variable so that `lit` holds, explained by `whys`.
pub fn unit_assign(
    engine: &mut SatEngine,
    lit: Lit,
    whys: Vec<u32>,
    assigned: &mut dyn FnMut(&ImpNode),
) {
    let level = propagated_level(engine, &whys);
    let imp = ImpNode {
        level,
        var: lit.var,
        value: lit.polarity,
        reasons: whys,
    };
    let slot = lit.var as usize - 1;
    engine.bind(slot, imp);
    assigned(engine.value(slot).expect("just bound"));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clause(lits: &[i64]) -> Rc<[Lit]> {
        lits.iter().map(|&l| Lit::from_dimacs(l)).collect()
    }

    fn decide(engine: &mut SatEngine, var: u32, value: bool, level: u32) {
        engine.bind(var as usize - 1, ImpNode::decision(var, value, level));
    }

    fn drain(engine: &mut SatEngine) -> Result<(), Conflict> {
        engine.drain(|e, w| wake(e, w, &mut |_| {}))
    }

    #[test]
    fn fresh_clause_watches_first_two() {
        let mut e = SatEngine::new(3);
        watch_clause(&mut e, clause(&[1, -2, 3]), &mut |_| {}).unwrap();
        let (_, w, on) = e.suspended_watchers().next().unwrap();
        assert_eq!(on, &[0, 1]);
        assert_eq!((w.a, w.b, w.next), (0, 1, 2));
        assert!(w.whys.is_empty());
    }

    #[test]
    fn unit_input_clause_lands_at_level_zero_one() {
        let mut e = SatEngine::new(1);
        watch_clause(&mut e, clause(&[1]), &mut |_| {}).unwrap();
        let n = e.value(0).unwrap();
        assert_eq!(n.level, Level::new(0, 1));
        assert!(n.value);
        assert!(n.reasons.is_empty());
    }

    #[test]
    fn falsified_clause_reports_every_reason() {
        let mut e = SatEngine::new(2);
        decide(&mut e, 1, false, 1);
        decide(&mut e, 2, true, 2);
        let c = watch_clause(&mut e, clause(&[1, -2]), &mut |_| {}).unwrap_err();
        assert_eq!(c.whys, vec![2, 1]);
    }

    #[test]
    fn satisfied_terminal_literal_is_a_no_op() {
        let mut e = SatEngine::new(1);
        decide(&mut e, 1, true, 1);
        watch_clause(&mut e, clause(&[1]), &mut |_| {}).unwrap();
        assert_eq!(e.trail_len(), 1);
    }

    #[test]
    fn walk_moves_one_literal_deeper() {
        // (-x or z or -y) with x := true.
        let mut e = SatEngine::new(3);
        watch_clause(&mut e, clause(&[-1, 3, -2]), &mut |_| {}).unwrap();
        decide(&mut e, 1, true, 1);
        drain(&mut e).unwrap();
        let (_, w, on) = e.suspended_watchers().next().unwrap();
        assert_eq!(on, &[2, 1]);
        assert_eq!(w.whys, vec![1]);
        // y := true leaves z as the last literal: propagate z.
        decide(&mut e, 2, true, 2);
        drain(&mut e).unwrap();
        let z = e.value(2).unwrap();
        assert!(z.value);
        assert_eq!(z.reasons, vec![2, 1]);
        assert_eq!(z.level, Level::new(2, 1));
    }

    #[test]
    fn satisfied_watch_retires() {
        let mut e = SatEngine::new(2);
        watch_clause(&mut e, clause(&[1, 2]), &mut |_| {}).unwrap();
        decide(&mut e, 1, true, 1);
        drain(&mut e).unwrap();
        assert_eq!(e.suspended_watchers().count(), 0);
        assert!(!e.is_bound(1));
    }

    #[test]
    fn idmap_is_a_bijection() {
        let m = IdMap::new(4);
        for v in 1..=4 {
            assert_eq!(m.var(m.slot(v)), v);
        }
    }
}
