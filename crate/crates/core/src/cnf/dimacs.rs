use std::fmt::Write as _;

use super::{CnfInstance, Lit};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DimacsError {
    #[error("missing `p cnf <vars> <clauses>` header")]
    MissingHeader,
    #[error("line {line}: malformed header")]
    BadHeader { line: usize },
    #[error("line {line}: invalid token {token:?}")]
    BadToken { line: usize, token: String },
    #[error("line {line}: literal {lit} is outside 1..={var_count}")]
    LiteralOutOfRange { line: usize, lit: i64, var_count: u32 },
    #[error("header declares {declared} clauses but {actual} were read")]
    ClauseCountMismatch { declared: usize, actual: usize },
}

/// Parses DIMACS CNF.
///
/// `c` lines may appear anywhere before or between clauses and clauses may
/// span lines. A `%` line ends the input (SATLIB trailer). A lone `0` that
/// arrives after every declared clause has been read is ignored; before
/// that it is an empty clause, which marks the instance unsatisfiable.
pub fn parse_dimacs(text: &str) -> Result<CnfInstance, DimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut inst = CnfInstance::default();
    let mut read = 0usize;
    let mut pending: Vec<Lit> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::BadHeader { line: line_no });
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["p", "cnf", v, c] => v.parse::<u32>().ok().zip(c.parse::<usize>().ok()),
                _ => None,
            };
            let (vars, clauses) = parsed.ok_or(DimacsError::BadHeader { line: line_no })?;
            inst.var_count = vars;
            header = Some((vars, clauses));
            continue;
        }
        let Some((var_count, declared)) = header else {
            return Err(DimacsError::MissingHeader);
        };
        for tok in line.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| DimacsError::BadToken {
                line: line_no,
                token: tok.to_string(),
            })?;
            if lit == 0 {
                if pending.is_empty() && read >= declared {
                    continue;
                }
                inst.add_clause(pending.drain(..));
                read += 1;
            } else {
                if lit.unsigned_abs() > var_count as u64 {
                    return Err(DimacsError::LiteralOutOfRange {
                        line: line_no,
                        lit,
                        var_count,
                    });
                }
                pending.push(Lit::from_dimacs(lit));
            }
        }
    }

    let Some((_, declared)) = header else {
        return Err(DimacsError::MissingHeader);
    };
    if !pending.is_empty() {
        // Final clause without a terminating 0.
        inst.add_clause(pending.drain(..));
        read += 1;
    }
    if read != declared {
        return Err(DimacsError::ClauseCountMismatch {
            declared,
            actual: read,
        });
    }
    Ok(inst)
}

/// Writes canonical DIMACS: header, then one clause per line.
pub fn emit_dimacs(inst: &CnfInstance) -> String {
    let mut out = String::new();
    writeln!(out, "p cnf {} {}", inst.var_count, inst.clause_count()).unwrap();
    for c in &inst.clauses {
        for l in c {
            write!(out, "{} ", l.to_dimacs()).unwrap();
        }
        out.push_str("0\n");
    }
    if inst.has_empty_clause {
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_basic_file() {
        let inst = parse_dimacs("p cnf 3 2\n1 -2 0\n2 3 0\n").unwrap();
        assert_eq!(inst.var_count, 3);
        assert_eq!(
            inst.clauses,
            vec![vec![Lit::pos(1), Lit::neg(2)], vec![Lit::pos(2), Lit::pos(3)]]
        );
    }

    #[test]
    fn ignores_comments_and_satlib_trailer() {
        let inst = parse_dimacs("c hi\np cnf 1 1\n1 0\n%\n0\n").unwrap();
        assert_eq!(inst.var_count, 1);
        assert_eq!(inst.clauses, vec![vec![Lit::pos(1)]]);
    }

    #[test]
    fn clauses_may_span_lines() {
        let inst = parse_dimacs("p cnf 3 2\n1 -2\n c between\n 3 0 2\n0\n").unwrap();
        assert_eq!(inst.clauses.len(), 2);
        assert_eq!(inst.clauses[0], vec![Lit::pos(1), Lit::neg(2), Lit::pos(3)]);
    }

    #[test]
    fn literal_out_of_range() {
        assert!(matches!(
            parse_dimacs("p cnf 2 1\n3 0\n"),
            Err(DimacsError::LiteralOutOfRange { lit: 3, .. })
        ));
    }

    #[test]
    fn missing_header() {
        assert_eq!(parse_dimacs("1 2 0\n"), Err(DimacsError::MissingHeader));
        assert_eq!(parse_dimacs("c only\n"), Err(DimacsError::MissingHeader));
    }

    #[test]
    fn clause_count_checked() {
        assert_eq!(
            parse_dimacs("p cnf 2 3\n1 0\n2 0\n"),
            Err(DimacsError::ClauseCountMismatch {
                declared: 3,
                actual: 2
            })
        );
    }

    #[test]
    fn empty_clause_marks_unsat() {
        let inst = parse_dimacs("p cnf 2 2\n1 0\n0\n").unwrap();
        assert!(inst.has_empty_clause);
        assert_eq!(inst.clauses.len(), 1);
        assert_eq!(emit_dimacs(&inst), "p cnf 2 2\n1 0\n0\n");
    }

    #[test]
    fn bad_token() {
        assert!(matches!(
            parse_dimacs("p cnf 2 1\n1 x 0\n"),
            Err(DimacsError::BadToken { .. })
        ));
    }

    #[test]
    fn emit_canonical() {
        let inst = CnfInstance::from_dimacs_clauses(2, [vec![1, -2]]);
        assert_eq!(emit_dimacs(&inst), "p cnf 2 1\n1 -2 0\n");
        assert_eq!(emit_dimacs(&CnfInstance::default()), "p cnf 0 0\n");
    }
}
