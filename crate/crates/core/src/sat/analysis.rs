//! Turning a conflict into a learnt clause and a backjump level.

use std::collections::HashSet;

use crate::cnf::Lit;

use super::watch::SatEngine;
use super::ImpNode;

/// Anything that can look up the implication node of a bound variable.
pub trait NodeSource {
    fn node(&self, var: u32) -> &ImpNode;
}

impl NodeSource for SatEngine {
    fn node(&self, var: u32) -> &ImpNode {
        self.value(var as usize - 1)
            .unwrap_or_else(|| panic!("x{var} has no implication node"))
    }
}

/// Result of analysing a conflict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Analysis {
    /// Every antecedent sits at level 0: the formula is unsatisfiable.
    Unsat,
    Backjump {
        target: u32,
        clause: Vec<Lit>,
        /// Distinct decision levels of the clause's literals, ascending.
        levels: Vec<u32>,
    },
}

/// Depth-first walk from the conflict to the leaves of the implication
/// graph. Each leaf contributes its negated literal and its decision level.
///
/// Nodes already visited are skipped, which only removes repeats: the first
/// visit of a node already emitted all of the leaves below it.
pub fn construct_clause(src: &impl NodeSource, whys: &[u32]) -> (Vec<Lit>, Vec<u32>) {
    let mut lits = Vec::new();
    let mut levels = Vec::new();
    let mut seen = HashSet::new();
    let mut stack: Vec<u32> = whys.iter().rev().copied().collect();
    while let Some(var) = stack.pop() {
        if !seen.insert(var) {
            continue;
        }
        let n = src.node(var);
        if n.reasons.is_empty() {
            lits.push(Lit::new(n.var, !n.value));
            levels.push(n.level.major);
        } else {
            stack.extend(n.reasons.iter().rev());
        }
    }
    (lits, levels)
}

/// Level to resume at given the clause's decision levels: the largest level
/// below the maximum, or the only level if there is one. `None` means the
/// only level is 0.
pub fn backjump_level(levels: &[u32]) -> Option<u32> {
    let mut sorted = levels.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    match sorted.as_slice() {
        [] | [0] => None,
        [only] => Some(*only),
        [.., second, _] => Some(*second),
    }
}

fn finish(clause: Vec<Lit>, levels: &[u32]) -> Analysis {
    let mut distinct = levels.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    match backjump_level(&distinct) {
        None => Analysis::Unsat,
        Some(target) => Analysis::Backjump {
            target,
            clause,
            levels: distinct,
        },
    }
}

/// Learns the clause made of the negated decisions (and level-0 facts)
/// behind the conflict.
pub fn analyse_conflict(src: &impl NodeSource, whys: &[u32]) -> Analysis {
    let (lits, levels) = construct_clause(src, whys);
    let mut clause: Vec<Lit> = Vec::with_capacity(lits.len());
    for l in lits {
        if !clause.iter().any(|c| c.var == l.var) {
            clause.push(l);
        }
    }
    finish(clause, &levels)
}

/// Learns the clause cut at the implication point nearest the conflict.
///
/// A frontier starts at the conflict's antecedents. The node with the
/// greatest level and sublevel (the first one on ties) is replaced by its
/// reasons until a single node remains at the highest decision level.
pub fn first_uip(src: &impl NodeSource, whys: &[u32]) -> Analysis {
    let mut frontier: Vec<u32> = Vec::new();
    for &v in whys {
        if !frontier.contains(&v) {
            frontier.push(v);
        }
    }
    let top = frontier.iter().map(|&v| src.node(v).level.major).max();
    let Some(top) = top.filter(|&m| m > 0) else {
        return Analysis::Unsat;
    };
    loop {
        let at_top = frontier
            .iter()
            .filter(|&&v| src.node(v).level.major == top)
            .count();
        if at_top <= 1 {
            break;
        }
        let mut pick = 0;
        for (i, &v) in frontier.iter().enumerate() {
            if src.node(v).level > src.node(frontier[pick]).level {
                pick = i;
            }
        }
        let n = src.node(frontier[pick]);
        if n.reasons.is_empty() {
            break;
        }
        let fresh: Vec<u32> = n
            .reasons
            .iter()
            .copied()
            .filter(|r| !frontier.contains(r))
            .collect();
        frontier.splice(pick..=pick, fresh);
    }
    let clause: Vec<Lit> = frontier
        .iter()
        .map(|&v| {
            let n = src.node(v);
            Lit::new(n.var, !n.value)
        })
        .collect();
    let levels: Vec<u32> = frontier.iter().map(|&v| src.node(v).level.major).collect();
    finish(clause, &levels)
}
