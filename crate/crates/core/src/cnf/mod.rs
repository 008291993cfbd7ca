//! Clause database, literals and the text formats around them.

mod dimacs;
mod model;
pub(crate) mod propagate;
mod varmap;

use std::fmt;
use std::ops::Not;

pub use dimacs::{parse_dimacs, to_dimacs_string, write_dimacs, DimacsError};
pub use model::{
    decode_model, parse_solver_output, parse_value_lines, DecodeError, Model, OutputError,
    SolverAnswer,
};
pub use propagate::{unit_propagate, Assignment, Propagation};
pub use varmap::{parse_map, write_map, MapError, Symbol, VarMap};

/// A propositional variable, numbered from 1 as in DIMACS.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    /// Panics if `index` is 0.
    pub fn new(index: u32) -> Var {
        assert!(index > 0, "variables are numbered from 1");
        Var(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }

    pub(crate) fn slot(self) -> usize {
        self.0 as usize - 1
    }

    pub fn pos(self) -> Lit {
        Lit(self.0 as i32)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Lit {
        Lit(-(self.0 as i32))
    }

    pub fn lit(self, positive: bool) -> Lit {
        if positive {
            self.pos()
        } else {
            self.neg()
        }
    }
}

/// A literal in DIMACS convention: `v` or `-v`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(i32);

impl Lit {
    /// `None` for 0.
    pub fn from_dimacs(value: i32) -> Option<Lit> {
        (value != 0 && value != i32::MIN).then_some(Lit(value))
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }

    pub fn var(self) -> Var {
        Var(self.0.unsigned_abs())
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    /// Dense index: `2(v-1)` for `v`, `2(v-1)+1` for `-v`.
    pub(crate) fn code(self) -> usize {
        self.var().slot() * 2 + usize::from(self.0 < 0)
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A disjunction of distinct literals. The empty clause is false.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    /// Drops repeated literals (keeping first occurrences). Returns `None`
    /// for a tautology.
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Option<Clause> {
        let mut out: Vec<Lit> = Vec::new();
        for l in lits {
            if out.contains(&!l) {
                return None;
            }
            if !out.contains(&l) {
                out.push(l);
            }
        }
        Some(Clause { lits: out })
    }

    /// Clause from DIMACS integers; panics on 0.
    pub fn from_dimacs(values: &[i32]) -> Option<Clause> {
        Clause::new(
            values
                .iter()
                .map(|&v| Lit::from_dimacs(v).expect("0 is not a literal")),
        )
    }

    pub fn empty() -> Clause {
        Clause::default()
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    /// Order-insensitive key used for set comparisons.
    pub fn sorted_key(&self) -> Vec<Lit> {
        let mut k = self.lits.clone();
        k.sort_unstable();
        k
    }
}

impl AsRef<[Lit]> for Clause {
    fn as_ref(&self) -> &[Lit] {
        &self.lits
    }
}

/// Normalizes `lits` in place: removes duplicates, keeps first occurrences.
/// Returns false for a tautology.
fn normalize(lits: &mut Vec<Lit>) -> bool {
    if lits.len() <= 8 {
        let mut i = 0;
        while i < lits.len() {
            let l = lits[i];
            if lits[..i].contains(&!l) {
                return false;
            }
            if lits[..i].contains(&l) {
                lits.remove(i);
            } else {
                i += 1;
            }
        }
        return true;
    }
    let mut seen = std::collections::HashSet::with_capacity(lits.len());
    for &l in lits.iter() {
        if seen.contains(&!l) {
            return false;
        }
        seen.insert(l);
    }
    let mut kept = std::collections::HashSet::with_capacity(lits.len());
    lits.retain(|l| kept.insert(*l));
    true
}

/// A CNF formula: clauses in insertion order over variables `1..=num_vars`.
///
/// Clauses live in one flat literal buffer so formulas with tens of millions
/// of clauses stay compact.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: u32,
    lits: Vec<Lit>,
    // clause i occupies lits[ends[i-1]..ends[i]]
    ends: Vec<u32>,
}

impl CnfFormula {
    pub fn new(num_vars: u32) -> CnfFormula {
        CnfFormula {
            num_vars,
            ..CnfFormula::default()
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    /// Raises the declared variable count; never lowers it.
    pub fn ensure_vars(&mut self, n: u32) {
        self.num_vars = self.num_vars.max(n);
    }

    pub fn len(&self) -> usize {
        self.ends.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ends.is_empty()
    }

    pub fn num_lits(&self) -> usize {
        self.lits.len()
    }

    /// Adds a clause after removing duplicate literals. Tautologies are
    /// dropped and `false` is returned. Variables beyond `num_vars` raise it.
    pub fn add_clause(&mut self, lits: &[Lit]) -> bool {
        let mut buf = lits.to_vec();
        if !normalize(&mut buf) {
            log::debug!("dropping tautological clause {:?}", lits);
            return false;
        }
        self.push_normalized(&buf);
        true
    }

    pub(crate) fn push_normalized(&mut self, lits: &[Lit]) {
        for l in lits {
            self.num_vars = self.num_vars.max(l.var().index());
        }
        self.lits.extend_from_slice(lits);
        self.ends
            .push(u32::try_from(self.lits.len()).expect("formula exceeds 2^32 literals"));
    }

    pub fn clause(&self, i: usize) -> &[Lit] {
        let start = if i == 0 { 0 } else { self.ends[i - 1] as usize };
        &self.lits[start..self.ends[i] as usize]
    }

    pub fn clauses(&self) -> impl ExactSizeIterator<Item = &[Lit]> + '_ {
        (0..self.len()).map(move |i| self.clause(i))
    }

    /// True iff `values[v-1]` satisfies every clause.
    pub fn is_satisfied_by(&self, values: &[bool]) -> bool {
        self.clauses().all(|c| {
            c.iter().any(|l| {
                values
                    .get(l.var().slot())
                    .is_some_and(|&b| b == l.is_positive())
            })
        })
    }

    /// The first clause falsified by `values`, if any.
    pub fn first_falsified(&self, values: &[bool]) -> Option<usize> {
        self.clauses().position(|c| {
            !c.iter().any(|l| {
                values
                    .get(l.var().slot())
                    .is_some_and(|&b| b == l.is_positive())
            })
        })
    }
}

impl<C: AsRef<[Lit]>> FromIterator<C> for CnfFormula {
    fn from_iter<I: IntoIterator<Item = C>>(iter: I) -> Self {
        let mut f = CnfFormula::default();
        for c in iter {
            f.add_clause(c.as_ref());
        }
        f
    }
}

/// Convenience: build a formula from DIMACS integer clauses.
pub fn formula_from_dimacs(num_vars: u32, clauses: &[&[i32]]) -> CnfFormula {
    let mut f = CnfFormula::new(num_vars);
    for c in clauses {
        let lits: Vec<Lit> = c
            .iter()
            .map(|&v| Lit::from_dimacs(v).expect("0 is not a literal"))
            .collect();
        f.add_clause(&lits);
    }
    f
}
