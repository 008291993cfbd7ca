//! Unit propagation with two watched literals.
//!
//! [`Propagator`] is the shared engine behind [`unit_propagate`], the proof
//! checker and the solver. It keeps a trail with decision levels so callers
//! can assert temporary literals and undo them again.

use super::{CnfFormula, Lit, Var};

pub(crate) type ClauseId = usize;

#[derive(Debug)]
struct Stored {
    lits: Vec<Lit>,
    deleted: bool,
}

#[derive(Debug, Default)]
pub(crate) struct Propagator {
    clauses: Vec<Stored>,
    // watches[code(l)]: clauses currently watching literal l
    watches: Vec<Vec<ClauseId>>,
    values: Vec<Option<bool>>,
    levels: Vec<u32>,
    reasons: Vec<Option<ClauseId>>,
    positions: Vec<usize>,
    trail: Vec<Lit>,
    level_starts: Vec<usize>,
    qhead: usize,
    // set once a conflict is forced at level 0
    refuted: bool,
}

impl Propagator {
    pub fn new(num_vars: u32) -> Self {
        let mut p = Propagator::default();
        p.grow(num_vars);
        p
    }

    pub fn from_formula(f: &CnfFormula) -> Self {
        let mut p = Propagator::new(f.num_vars());
        p.clauses.reserve(f.len());
        for c in f.clauses() {
            p.add_clause(c.to_vec());
        }
        p
    }

    pub fn grow(&mut self, num_vars: u32) {
        let n = num_vars as usize;
        if n > self.values.len() {
            self.values.resize(n, None);
            self.levels.resize(n, 0);
            self.reasons.resize(n, None);
            self.positions.resize(n, 0);
            self.watches.resize(2 * n, Vec::new());
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.values.len() as u32
    }

    pub fn value(&self, l: Lit) -> Option<bool> {
        self.values[l.var().slot()].map(|b| b == l.is_positive())
    }

    pub fn var_value(&self, v: Var) -> Option<bool> {
        self.values[v.slot()]
    }

    pub fn var_level(&self, v: Var) -> u32 {
        self.levels[v.slot()]
    }

    pub fn reason(&self, v: Var) -> Option<ClauseId> {
        self.reasons[v.slot()]
    }

    pub fn trail(&self) -> &[Lit] {
        &self.trail
    }

    pub fn level(&self) -> u32 {
        self.level_starts.len() as u32
    }

    pub fn is_refuted(&self) -> bool {
        self.refuted
    }

    pub fn clause(&self, id: ClauseId) -> &[Lit] {
        &self.clauses[id].lits
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Trail index where decision level `level` (>= 1) begins.
    pub fn level_start(&self, level: u32) -> usize {
        self.level_starts[level as usize - 1]
    }

    pub fn new_level(&mut self) {
        self.level_starts.push(self.trail.len());
    }

    /// Assigns `l` true. The literal must be unassigned.
    pub fn assign(&mut self, l: Lit, reason: Option<ClauseId>) {
        let v = l.var().slot();
        debug_assert!(self.values[v].is_none());
        self.values[v] = Some(l.is_positive());
        self.levels[v] = self.level();
        self.reasons[v] = reason;
        self.positions[v] = self.trail.len();
        self.trail.push(l);
    }

    /// Undoes every assignment above `level`.
    pub fn backtrack(&mut self, level: u32) {
        if level >= self.level() {
            return;
        }
        let start = self.level_starts[level as usize];
        for l in self.trail.drain(start..) {
            let v = l.var().slot();
            self.values[v] = None;
            self.reasons[v] = None;
        }
        self.level_starts.truncate(level as usize);
        self.qhead = self.qhead.min(start);
    }

    /// Adds a clause in the current state and returns its id.
    ///
    /// Watches prefer non-false literals, then false ones assigned latest, so
    /// the invariant survives backtracking. A clause that is unit under the
    /// current assignment has its literal enqueued; a clause falsified at level
    /// 0 marks the database refuted. Conflicts above level 0 are left for the
    /// caller (the solver only adds clauses after backjumping).
    pub fn add_clause(&mut self, mut lits: Vec<Lit>) -> ClauseId {
        for l in &lits {
            let v = l.var().index();
            if v > self.num_vars() {
                self.grow(v);
            }
        }
        let id = self.clauses.len();
        if lits.len() >= 2 {
            let rank = |p: &Propagator, l: Lit| -> (u8, usize) {
                match p.value(l) {
                    Some(false) => (1, usize::MAX - p.trail_pos(l.var())),
                    _ => (0, 0),
                }
            };
            for w in 0..2 {
                let best = (w..lits.len())
                    .min_by_key(|&i| rank(self, lits[i]))
                    .expect("non-empty");
                lits.swap(w, best);
            }
            self.watches[lits[0].code()].push(id);
            self.watches[lits[1].code()].push(id);
        }
        let first = lits.first().copied();
        let second_false = lits.get(1).is_none_or(|&l| self.value(l) == Some(false));
        self.clauses.push(Stored {
            lits,
            deleted: false,
        });
        match first {
            None => self.refuted = true,
            Some(l) if second_false => match self.value(l) {
                None => self.assign(l, Some(id)),
                Some(false) if self.level() == 0 => self.refuted = true,
                _ => {}
            },
            _ => {}
        }
        id
    }

    fn trail_pos(&self, v: Var) -> usize {
        self.positions[v.slot()]
    }

    /// Marks a clause deleted. Watch lists are cleaned lazily.
    pub fn delete(&mut self, id: ClauseId) {
        self.clauses[id].deleted = true;
    }

    /// Clears every assignment and re-derives the level-0 trail from the live
    /// clauses.
    pub fn reset(&mut self) -> Option<ClauseId> {
        self.backtrack(0);
        for l in self.trail.drain(..) {
            let v = l.var().slot();
            self.values[v] = None;
            self.reasons[v] = None;
        }
        self.qhead = 0;
        self.refuted = false;
        for id in 0..self.clauses.len() {
            let c = &self.clauses[id];
            if c.deleted {
                continue;
            }
            match c.lits.len() {
                0 => self.refuted = true,
                1 => {
                    let l = c.lits[0];
                    match self.value(l) {
                        None => self.assign(l, Some(id)),
                        Some(false) => self.refuted = true,
                        Some(true) => {}
                    }
                }
                _ => {}
            }
        }
        if self.refuted {
            return None;
        }
        let conflict = self.propagate();
        if conflict.is_some() {
            self.refuted = true;
        }
        conflict
    }

    /// Propagates to fixpoint. Returns the id of a falsified clause on
    /// conflict. A conflict at level 0 also marks the database refuted.
    pub fn propagate(&mut self) -> Option<ClauseId> {
        while self.qhead < self.trail.len() {
            let falsified = !self.trail[self.qhead];
            self.qhead += 1;
            let mut watchers = std::mem::take(&mut self.watches[falsified.code()]);
            let mut keep = 0;
            let mut conflict = None;
            let mut i = 0;
            while i < watchers.len() {
                let id = watchers[i];
                i += 1;
                if self.clauses[id].deleted {
                    continue;
                }
                let lits = &mut self.clauses[id].lits;
                if lits[0] == falsified {
                    lits.swap(0, 1);
                }
                let other = lits[0];
                let other_val = self.values[other.var().slot()].map(|b| b == other.is_positive());
                if other_val == Some(true) {
                    watchers[keep] = id;
                    keep += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..lits.len() {
                    let cand = lits[k];
                    let val = self.values[cand.var().slot()];
                    if val != Some(!cand.is_positive()) {
                        lits.swap(1, k);
                        self.watches[cand.code()].push(id);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                watchers[keep] = id;
                keep += 1;
                match other_val {
                    None => self.assign(other, Some(id)),
                    _ => {
                        conflict = Some(id);
                        while i < watchers.len() {
                            watchers[keep] = watchers[i];
                            keep += 1;
                            i += 1;
                        }
                    }
                }
            }
            watchers.truncate(keep);
            // new watchers may have been pushed for `falsified` itself only
            // if a clause contains it twice, which normalization rules out
            let pushed = std::mem::replace(&mut self.watches[falsified.code()], watchers);
            self.watches[falsified.code()].extend(pushed);
            if conflict.is_some() {
                self.qhead = self.trail.len();
                if self.level() == 0 {
                    self.refuted = true;
                }
                return conflict;
            }
        }
        None
    }
}

/// A partial assignment, indexed by variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    pub fn value(&self, v: Var) -> Option<bool> {
        self.values.get(v.slot()).copied().flatten()
    }

    pub fn lit_value(&self, l: Lit) -> Option<bool> {
        self.value(l.var()).map(|b| b == l.is_positive())
    }

    pub fn assigned(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|b| (Var::new(i as u32 + 1), b)))
    }

    pub fn num_assigned(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }
}

/// Outcome of [`unit_propagate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Propagation {
    /// The empty clause was derived.
    Conflict,
    /// No more units. `simplified` holds the clauses not yet satisfied, with
    /// their false literals removed, in their original order.
    Fixpoint {
        assignment: Assignment,
        simplified: CnfFormula,
    },
}

impl Propagation {
    pub fn is_conflict(&self) -> bool {
        matches!(self, Propagation::Conflict)
    }
}

/// Asserts `assumptions` and every unit clause, repeatedly, until a fixpoint
/// or the empty clause.
pub fn unit_propagate(f: &CnfFormula, assumptions: &[Lit]) -> Propagation {
    let mut p = Propagator::from_formula(f);
    if p.is_refuted() {
        return Propagation::Conflict;
    }
    for &a in assumptions {
        if a.var().index() > p.num_vars() {
            p.grow(a.var().index());
        }
        match p.value(a) {
            None => p.assign(a, None),
            Some(false) => return Propagation::Conflict,
            Some(true) => {}
        }
    }
    if p.propagate().is_some() {
        return Propagation::Conflict;
    }
    let assignment = Assignment {
        values: p.values.clone(),
    };
    let mut simplified = CnfFormula::new(f.num_vars());
    let mut buf = Vec::new();
    for c in f.clauses() {
        if c.iter().any(|&l| assignment.lit_value(l) == Some(true)) {
            continue;
        }
        buf.clear();
        buf.extend(c.iter().copied().filter(|&l| assignment.lit_value(l).is_none()));
        simplified.push_normalized(&buf);
    }
    Propagation::Fixpoint {
        assignment,
        simplified,
    }
}
