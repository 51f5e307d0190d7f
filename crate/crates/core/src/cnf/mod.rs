//! CNF data model, DIMACS I/O, random 3-SAT generation and brute-force oracles.

mod dimacs;
mod generate;
mod oracle;

use std::fmt;

pub use dimacs::{emit_dimacs, parse_dimacs, DimacsError};
pub use generate::gen_random_3sat;
pub use oracle::{brute_force, entails, OracleError, ORACLE_VAR_LIMIT};

/// A variable together with the polarity it occurs with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    /// 1-based variable id.
    pub var: u32,
    /// True for a positive occurrence.
    pub polarity: bool,
}

impl Lit {
    pub fn new(var: u32, polarity: bool) -> Lit {
        debug_assert!(var >= 1, "variable ids start at 1");
        Lit { var, polarity }
    }

    pub fn pos(var: u32) -> Lit {
        Lit::new(var, true)
    }

    pub fn neg(var: u32) -> Lit {
        Lit::new(var, false)
    }

    pub fn negate(self) -> Lit {
        Lit {
            var: self.var,
            polarity: !self.polarity,
        }
    }

    /// Signed DIMACS form.
    pub fn to_dimacs(self) -> i64 {
        if self.polarity {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }

    /// From a non-zero signed DIMACS literal.
    pub fn from_dimacs(lit: i64) -> Lit {
        assert!(lit != 0, "0 is a clause terminator, not a literal");
        Lit::new(lit.unsigned_abs() as u32, lit > 0)
    }

    /// Whether this literal holds under `value` for its variable.
    pub fn holds(self, value: bool) -> bool {
        self.polarity == value
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

pub type Clause = Vec<Lit>;

/// A formula in conjunctive normal form over variables `1..=var_count`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CnfInstance {
    pub var_count: u32,
    /// Non-empty clauses, each over distinct variables.
    pub clauses: Vec<Clause>,
    /// The input contained an empty clause, so the formula is unsatisfiable.
    pub has_empty_clause: bool,
    /// Tautological clauses dropped while reading.
    pub dropped_tautologies: usize,
}

impl CnfInstance {
    /// Builds an instance from DIMACS-style integer clauses, collapsing
    /// duplicate literals and dropping tautologies.
    pub fn from_dimacs_clauses<I, C>(var_count: u32, clauses: I) -> CnfInstance
    where
        I: IntoIterator<Item = C>,
        C: IntoIterator<Item = i64>,
    {
        let mut inst = CnfInstance {
            var_count,
            ..CnfInstance::default()
        };
        for c in clauses {
            inst.add_clause(c.into_iter().map(Lit::from_dimacs));
        }
        inst
    }

    /// Adds a clause, normalising it. Literal ranges are not checked here.
    pub fn add_clause(&mut self, lits: impl IntoIterator<Item = Lit>) {
        match normalize_clause(lits) {
            Normalized::Clause(c) if c.is_empty() => self.has_empty_clause = true,
            Normalized::Clause(c) => self.clauses.push(c),
            Normalized::Tautology => self.dropped_tautologies += 1,
        }
    }

    /// Number of clauses as written by [`emit_dimacs`].
    pub fn clause_count(&self) -> usize {
        self.clauses.len() + usize::from(self.has_empty_clause)
    }

    /// Checks that every literal mentions a variable in range.
    pub fn validate(&self) -> Result<(), InstanceError> {
        for c in &self.clauses {
            if c.is_empty() {
                return Err(InstanceError::EmptyClause);
            }
            for l in c {
                if l.var == 0 || l.var > self.var_count {
                    return Err(InstanceError::VarOutOfRange {
                        var: l.var,
                        var_count: self.var_count,
                    });
                }
            }
            for (i, a) in c.iter().enumerate() {
                if c[i + 1..].iter().any(|b| b.var == a.var) {
                    return Err(InstanceError::RepeatedVar(a.var));
                }
            }
        }
        Ok(())
    }

    /// Whether `model` satisfies every clause.
    pub fn is_satisfied_by(&self, model: &Model) -> bool {
        !self.has_empty_clause
            && self
                .clauses
                .iter()
                .all(|c| c.iter().any(|l| l.holds(model.value(l.var))))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("variable {var} is outside 1..={var_count}")]
    VarOutOfRange { var: u32, var_count: u32 },
    #[error("clause mentions variable {0} more than once")]
    RepeatedVar(u32),
    #[error("clause list contains an empty clause")]
    EmptyClause,
}

enum Normalized {
    Clause(Clause),
    Tautology,
}

fn normalize_clause(lits: impl IntoIterator<Item = Lit>) -> Normalized {
    let mut out: Clause = Vec::new();
    for l in lits {
        match out.iter().find(|o| o.var == l.var) {
            Some(o) if o.polarity == l.polarity => {}
            Some(_) => return Normalized::Tautology,
            None => out.push(l),
        }
    }
    Normalized::Clause(out)
}

/// A total assignment; `values[v - 1]` is the value of variable `v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Model {
    pub values: Vec<bool>,
}

impl Model {
    pub fn new(values: Vec<bool>) -> Model {
        Model { values }
    }

    pub fn value(&self, var: u32) -> bool {
        self.values[var as usize - 1]
    }

    /// DIMACS-style signed literals, one per variable.
    pub fn to_dimacs(&self) -> Vec<i64> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| if v { i as i64 + 1 } else { -(i as i64 + 1) })
            .collect()
    }
}
