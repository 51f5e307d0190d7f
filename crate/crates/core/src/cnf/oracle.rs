//! Exhaustive oracles used as ground truth in tests.

use super::{CnfInstance, Lit, Model};

/// Largest variable count the oracles accept.
pub const ORACLE_VAR_LIMIT: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("{0} variables exceed the brute-force limit of {ORACLE_VAR_LIMIT}")]
    TooManyVars(u32),
    #[error("literal {0} is outside the instance's variables")]
    LiteralOutOfRange(i64),
}

/// First model in lexicographic order (variable 1 most significant,
/// false before true), or `None` if the formula is unsatisfiable.
pub fn brute_force(inst: &CnfInstance) -> Result<Option<Model>, OracleError> {
    let n = inst.var_count;
    if n > ORACLE_VAR_LIMIT {
        return Err(OracleError::TooManyVars(n));
    }
    if inst.has_empty_clause {
        return Ok(None);
    }
    // Variable v maps to bit n - v, so counting upward is lexicographic.
    let masks: Vec<(u32, u32)> = inst
        .clauses
        .iter()
        .map(|c| {
            c.iter().fold((0u32, 0u32), |(pos, neg), l| {
                let bit = 1u32 << (n - l.var);
                if l.polarity {
                    (pos | bit, neg)
                } else {
                    (pos, neg | bit)
                }
            })
        })
        .collect();
    for a in 0u32..(1u32 << n) {
        if masks.iter().all(|&(pos, neg)| a & pos != 0 || !a & neg != 0) {
            let values = (1..=n).map(|v| a & (1 << (n - v)) != 0).collect();
            return Ok(Some(Model::new(values)));
        }
    }
    Ok(None)
}

/// Whether every model of `inst` satisfies `clause`.
pub fn entails(inst: &CnfInstance, clause: &[Lit]) -> Result<bool, OracleError> {
    if let Some(l) = clause.iter().find(|l| l.var == 0 || l.var > inst.var_count) {
        return Err(OracleError::LiteralOutOfRange(l.to_dimacs()));
    }
    let mut with_negation = inst.clone();
    for l in clause {
        with_negation.clauses.push(vec![l.negate()]);
    }
    Ok(brute_force(&with_negation)?.is_none())
}
