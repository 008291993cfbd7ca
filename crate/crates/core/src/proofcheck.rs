//! Checking RUP and DRUP refutations.
//!
//! A certificate is a list of clause additions, optionally interleaved with
//! deletions. An added clause `(l_1 | ... | l_m)` is accepted when asserting
//! `-l_1, ..., -l_m` on top of the current clause database propagates to a
//! conflict. The certificate refutes the formula when every addition is
//! accepted and the last one is the empty clause.
//!
//! The checker never backtracks: it keeps the database's top-level
//! propagation fixpoint and only undoes the temporary assumptions of each
//! step.

use std::collections::HashMap;
use std::fmt;
use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::cnf::propagate::{ClauseId, Propagator};
use crate::cnf::{Clause, CnfFormula, Lit};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ProofLine {
    Add(Vec<Lit>),
    Delete(Vec<Lit>),
}

impl ProofLine {
    pub fn lits(&self) -> &[Lit] {
        match self {
            ProofLine::Add(c) | ProofLine::Delete(c) => c,
        }
    }

    pub fn is_delete(&self) -> bool {
        matches!(self, ProofLine::Delete(_))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Certificate {
    pub lines: Vec<ProofLine>,
}

impl Certificate {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, lits: impl Into<Vec<Lit>>) {
        self.lines.push(ProofLine::Add(lits.into()));
    }

    pub fn delete(&mut self, lits: impl Into<Vec<Lit>>) {
        self.lines.push(ProofLine::Delete(lits.into()));
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn has_deletions(&self) -> bool {
        self.lines.iter().any(ProofLine::is_delete)
    }

    pub fn num_adds(&self) -> usize {
        self.lines.iter().filter(|l| !l.is_delete()).count()
    }
}

impl FromIterator<ProofLine> for Certificate {
    fn from_iter<I: IntoIterator<Item = ProofLine>>(iter: I) -> Self {
        Certificate {
            lines: iter.into_iter().collect(),
        }
    }
}

/// Drops every deletion, turning a DRUP certificate into a RUP one.
pub fn strip_deletions(cert: &Certificate) -> Certificate {
    cert.lines
        .iter()
        .filter(|l| !l.is_delete())
        .cloned()
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    /// Additions only.
    Rup,
    /// Additions and deletions.
    Drup,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RejectReason {
    /// Propagation reached a fixpoint without conflict.
    NotRup,
    /// The last addition is not the empty clause.
    FinalNotEmpty,
    /// The certificate adds no clause at all.
    NoAdditions,
    /// A deletion line in a RUP certificate.
    DeleteInRupMode,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RejectReason::NotRup => "not RUP: propagation reached a fixpoint without conflict",
            RejectReason::FinalNotEmpty => "final added clause is not empty",
            RejectReason::NoAdditions => "certificate adds no clauses",
            RejectReason::DeleteInRupMode => "deletion line in RUP mode",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    /// `line` is 1-based; 0 when the certificate is empty.
    Rejected { line: usize, reason: RejectReason },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accepted => f.write_str("Accepted"),
            Verdict::Rejected { line, reason } => write!(f, "Rejected at line {line}: {reason}"),
        }
    }
}

struct Checker {
    prop: Propagator,
    // sorted literal set -> live clause ids with that set
    index: HashMap<Vec<Lit>, Vec<ClauseId>>,
}

impl Checker {
    fn new(f: &CnfFormula) -> Self {
        let mut prop = Propagator::from_formula(f);
        let mut index: HashMap<Vec<Lit>, Vec<ClauseId>> = HashMap::new();
        for id in 0..prop.num_clauses() {
            index.entry(sorted(prop.clause(id))).or_default().push(id);
        }
        if !prop.is_refuted() {
            prop.propagate();
        }
        Checker { prop, index }
    }

    fn is_rup(&mut self, lits: &[Lit]) -> bool {
        if self.prop.is_refuted() {
            return true;
        }
        for l in lits {
            self.prop.grow(l.var().index());
        }
        self.prop.new_level();
        let mut conflict = false;
        for &l in lits {
            match self.prop.value(l) {
                Some(true) => {
                    conflict = true;
                    break;
                }
                Some(false) => {}
                None => self.prop.assign(!l, None),
            }
        }
        if !conflict {
            conflict = self.prop.propagate().is_some();
        }
        self.prop.backtrack(0);
        conflict
    }

    fn insert(&mut self, lits: &[Lit]) {
        let Some(clause) = Clause::new(lits.iter().copied()) else {
            return;
        };
        let key = clause.sorted_key();
        let id = self.prop.add_clause(clause.lits().to_vec());
        self.index.entry(key).or_default().push(id);
        if !self.prop.is_refuted() {
            self.prop.propagate();
        }
    }

    fn remove(&mut self, lits: &[Lit], line: usize) {
        let key = match Clause::new(lits.iter().copied()) {
            Some(c) => c.sorted_key(),
            None => {
                log::warn!("line {line}: deleting a tautology, ignored");
                return;
            }
        };
        let Some(id) = self.index.get_mut(&key).and_then(Vec::pop) else {
            log::warn!("line {line}: deleted clause is not in the database");
            return;
        };
        let is_reason = self
            .prop
            .clause(id)
            .iter()
            .any(|l| self.prop.reason(l.var()) == Some(id));
        self.prop.delete(id);
        if is_reason || self.prop.is_refuted() {
            self.prop.reset();
        }
    }
}

fn sorted(lits: &[Lit]) -> Vec<Lit> {
    let mut v = lits.to_vec();
    v.sort_unstable();
    v
}

/// Checks `cert` against `f`.
pub fn check(f: &CnfFormula, cert: &Certificate, mode: CheckMode) -> Verdict {
    let mut checker = Checker::new(f);
    let mut last_add = None;
    for (i, line) in cert.lines.iter().enumerate() {
        let line_no = i + 1;
        match line {
            ProofLine::Add(lits) => {
                if !checker.is_rup(lits) {
                    return Verdict::Rejected {
                        line: line_no,
                        reason: RejectReason::NotRup,
                    };
                }
                checker.insert(lits);
                last_add = Some((line_no, lits.is_empty()));
            }
            ProofLine::Delete(lits) => {
                if mode == CheckMode::Rup {
                    return Verdict::Rejected {
                        line: line_no,
                        reason: RejectReason::DeleteInRupMode,
                    };
                }
                checker.remove(lits, line_no);
            }
        }
    }
    match last_add {
        None => Verdict::Rejected {
            line: cert.len(),
            reason: RejectReason::NoAdditions,
        },
        Some((line, false)) => Verdict::Rejected {
            line,
            reason: RejectReason::FinalNotEmpty,
        },
        Some((_, true)) => Verdict::Accepted,
    }
}

#[derive(Debug, Error)]
pub enum DrupError {
    #[error("line {line}: invalid literal {token:?}")]
    BadLiteral { line: usize, token: String },
    #[error("line {line}: clause is missing its terminating 0")]
    MissingTerminator { line: usize },
    #[error("line {line}: data after the terminating 0")]
    TrailingData { line: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Parses the DRUP text format: one 0-terminated clause per line, deletions
/// prefixed with `d`. Blank lines and `c` comments are skipped.
pub fn parse_drup<R: BufRead>(r: R) -> Result<Certificate, DrupError> {
    let mut cert = Certificate::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        let mut text = line.trim();
        if text.is_empty() || text.starts_with('c') {
            continue;
        }
        let delete = match text.strip_prefix('d') {
            Some(rest) if rest.is_empty() || rest.starts_with(char::is_whitespace) => {
                text = rest;
                true
            }
            _ => false,
        };
        let mut lits = Vec::new();
        let mut terminated = false;
        for token in text.split_ascii_whitespace() {
            if terminated {
                return Err(DrupError::TrailingData { line: line_no });
            }
            let value: i32 = token.parse().map_err(|_| DrupError::BadLiteral {
                line: line_no,
                token: token.to_string(),
            })?;
            match Lit::from_dimacs(value) {
                Some(l) => lits.push(l),
                None => terminated = true,
            }
        }
        if !terminated {
            return Err(DrupError::MissingTerminator { line: line_no });
        }
        cert.lines.push(if delete {
            ProofLine::Delete(lits)
        } else {
            ProofLine::Add(lits)
        });
    }
    Ok(cert)
}

pub fn write_drup<W: Write>(cert: &Certificate, mut w: W) -> io::Result<()> {
    use std::fmt::Write as _;
    let mut buf = String::new();
    for line in &cert.lines {
        buf.clear();
        if line.is_delete() {
            buf.push_str("d ");
        }
        for l in line.lits() {
            write!(buf, "{} ", l.to_dimacs()).expect("formatting into a String");
        }
        buf.push_str("0\n");
        w.write_all(buf.as_bytes())?;
    }
    w.flush()
}

pub fn to_drup_string(cert: &Certificate) -> String {
    let mut buf = Vec::new();
    write_drup(cert, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("DRUP output is ASCII")
}
