use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use thiserror::Error;

use super::{CnfFormula, Lit};

#[derive(Debug, Error)]
pub enum DimacsError {
    #[error("line {line}: malformed header {text:?} (expected \"p cnf <vars> <clauses>\")")]
    BadHeader { line: usize, text: String },
    #[error("line {line}: clause data before the \"p cnf\" header")]
    MissingHeader { line: usize },
    #[error("line {line}: duplicate header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: invalid literal {token:?}")]
    BadLiteral { line: usize, token: String },
    #[error("line {line}: literal {lit} exceeds declared variable count {num_vars}")]
    LiteralOutOfRange { line: usize, lit: i64, num_vars: u32 },
    #[error("line {line}: last clause is missing its terminating 0")]
    MissingTerminator { line: usize },
    #[error("header declares {declared} clauses but {found} were read")]
    ClauseCount { declared: usize, found: usize },
    #[error("empty input: no \"p cnf\" header")]
    Empty,
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Writes `p cnf <vars> <clauses>` followed by one 0-terminated clause per
/// line, in insertion order.
pub fn write_dimacs<W: Write>(f: &CnfFormula, mut w: W) -> io::Result<()> {
    writeln!(w, "p cnf {} {}", f.num_vars(), f.len())?;
    let mut line = String::new();
    for c in f.clauses() {
        line.clear();
        for l in c {
            write!(line, "{} ", l.to_dimacs()).expect("formatting into a String");
        }
        line.push_str("0\n");
        w.write_all(line.as_bytes())?;
    }
    w.flush()
}

pub fn to_dimacs_string(f: &CnfFormula) -> String {
    let mut buf = Vec::new();
    write_dimacs(f, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("DIMACS output is ASCII")
}

/// Parses DIMACS CNF. Comment lines start with `c`; clauses may span lines.
pub fn parse_dimacs<R: BufRead>(r: R) -> Result<CnfFormula, DimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut f = CnfFormula::default();
    let mut pending: Vec<Lit> = Vec::new();
    let mut read = 0usize;
    let mut lineno = 0;
    let mut last_clause_line = 0;
    for line in r.lines() {
        let line = line?;
        lineno += 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with('c') || text.starts_with('%') {
            continue;
        }
        if text.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::DuplicateHeader { line: lineno });
            }
            header = Some(parse_header(text).ok_or_else(|| DimacsError::BadHeader {
                line: lineno,
                text: text.to_string(),
            })?);
            f = CnfFormula::new(header.unwrap().0);
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(DimacsError::MissingHeader { line: lineno });
        };
        for token in text.split_ascii_whitespace() {
            let value: i64 = token.parse().map_err(|_| DimacsError::BadLiteral {
                line: lineno,
                token: token.to_string(),
            })?;
            if value == 0 {
                // a dropped tautology still counts against the header
                f.add_clause(&pending);
                pending.clear();
                read += 1;
                continue;
            }
            if value.unsigned_abs() > u64::from(num_vars) {
                return Err(DimacsError::LiteralOutOfRange {
                    line: lineno,
                    lit: value,
                    num_vars,
                });
            }
            pending.push(Lit::from_dimacs(value as i32).expect("non-zero"));
            last_clause_line = lineno;
        }
    }
    let Some((_, declared)) = header else {
        return Err(DimacsError::Empty);
    };
    if !pending.is_empty() {
        return Err(DimacsError::MissingTerminator {
            line: last_clause_line,
        });
    }
    if read != declared {
        return Err(DimacsError::ClauseCount {
            declared,
            found: read,
        });
    }
    Ok(f)
}

fn parse_header(text: &str) -> Option<(u32, usize)> {
    let mut it = text.split_ascii_whitespace();
    if it.next()? != "p" || it.next()? != "cnf" {
        return None;
    }
    let vars = it.next()?.parse().ok()?;
    let clauses = it.next()?.parse().ok()?;
    if it.next().is_some() {
        return None;
    }
    Some((vars, clauses))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::formula_from_dimacs;

    fn parse(s: &str) -> Result<CnfFormula, DimacsError> {
        parse_dimacs(s.as_bytes())
    }

    #[test]
    fn writes_exact_bytes() {
        let f = formula_from_dimacs(2, &[&[1, -2]]);
        assert_eq!(to_dimacs_string(&f), "p cnf 2 1\n1 -2 0\n");
        assert_eq!(to_dimacs_string(&CnfFormula::default()), "p cnf 0 0\n");
        let g = formula_from_dimacs(1, &[&[]]);
        assert_eq!(to_dimacs_string(&g), "p cnf 1 1\n0\n");
    }

    #[test]
    fn parses_comments_and_multiline_clauses() {
        let f = parse("c hello\np cnf 3 2\n1 -2\n 3 0 -1 0\n").unwrap();
        assert_eq!(f, formula_from_dimacs(3, &[&[1, -2, 3], &[-1]]));
    }

    #[test]
    fn round_trip() {
        let f = formula_from_dimacs(5, &[&[1, -2], &[], &[5, 4, 3], &[-5]]);
        assert_eq!(parse(&to_dimacs_string(&f)).unwrap(), f);
    }

    #[test]
    fn errors_name_lines() {
        assert!(matches!(
            parse("p cnf x 1\n"),
            Err(DimacsError::BadHeader { line: 1, .. })
        ));
        assert!(matches!(
            parse("c\np cnf 2 1\n1 3 0\n"),
            Err(DimacsError::LiteralOutOfRange { line: 3, lit: 3, .. })
        ));
        assert!(matches!(
            parse("p cnf 2 1\n1 2\n"),
            Err(DimacsError::MissingTerminator { line: 2 })
        ));
        assert!(matches!(
            parse("1 2 0\n"),
            Err(DimacsError::MissingHeader { line: 1 })
        ));
        assert!(matches!(
            parse("p cnf 2 2\n1 2 0\n"),
            Err(DimacsError::ClauseCount { declared: 2, found: 1 })
        ));
        assert!(matches!(
            parse("p cnf 2 1\n1 a 0\n"),
            Err(DimacsError::BadLiteral { line: 2, .. })
        ));
        assert!(matches!(parse(""), Err(DimacsError::Empty)));
    }
}
