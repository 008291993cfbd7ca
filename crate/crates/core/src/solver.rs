//! A small complete SAT solver and an adapter for external ones.
//!
//! [`solve`] is conflict-driven: every conflict is analysed to its first
//! unique implication point and the resulting clause is learned. Learned
//! clauses are RUP with respect to the clauses present when they are
//! derived, so recording them in order, followed by the empty clause, gives
//! a certificate that [`crate::proofcheck::check`] accepts.
//!
//! Branching takes the lowest-index unassigned variable and tries `true`
//! first. There are no restarts and no clause-database reduction; the solver
//! is meant for desk-scale instances and reproducible certificates.

use std::fs;
use std::io::{BufReader, Read};
use std::path::Path;
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use crate::cnf::propagate::{ClauseId, Propagator};
use crate::cnf::{parse_solver_output, write_dimacs, CnfFormula, Lit, Model, SolverAnswer, Var};
use crate::proofcheck::{parse_drup, Certificate};

/// Environment variable through which external solvers learn where to write
/// their DRUP proof.
pub const DRUP_PATH_ENV: &str = "EDP_DRUP_PATH";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_conflicts: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_conflicts: Some(1_000_000),
            max_time: None,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            max_conflicts: None,
            max_time: None,
        }
    }

    pub fn conflicts(n: u64) -> Self {
        Budget {
            max_conflicts: Some(n),
            max_time: None,
        }
    }

    pub fn seconds(secs: f64) -> Self {
        Budget {
            max_conflicts: None,
            max_time: Some(Duration::from_secs_f64(secs)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    /// A model that satisfies every clause.
    Sat(Model),
    Unsat(Option<Certificate>),
    Unknown(String),
}

impl SolveOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveOutcome::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SolveOutcome::Unsat(_))
    }
}

/// What the solver records while refuting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProofMode {
    None,
    /// Learned clauses and the final empty clause.
    Rup,
    /// As `Rup`, plus deletions of learned clauses once they are satisfied
    /// at the top level.
    Drup,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub decisions: u64,
    pub conflicts: u64,
    pub learned: u64,
}

/// Solves `f` within `budget`; with `emit_cert`, UNSAT answers carry a RUP
/// certificate.
pub fn solve(f: &CnfFormula, budget: Budget, emit_cert: bool) -> SolveOutcome {
    let mode = if emit_cert {
        ProofMode::Rup
    } else {
        ProofMode::None
    };
    solve_with(f, budget, mode).0
}

pub fn solve_with(f: &CnfFormula, budget: Budget, mode: ProofMode) -> (SolveOutcome, SolveStats) {
    let mut s = Search::new(f, mode);
    let outcome = s.run(budget);
    if let SolveOutcome::Sat(model) = &outcome {
        assert!(
            f.is_satisfied_by(model.values()),
            "solver produced a non-model"
        );
    }
    (outcome, s.stats)
}

struct Search {
    prop: Propagator,
    num_vars: u32,
    mode: ProofMode,
    cert: Certificate,
    learned: Vec<ClauseId>,
    // no variable below this index is unassigned
    cursor: u32,
    seen: Vec<bool>,
    stats: SolveStats,
}

impl Search {
    fn new(f: &CnfFormula, mode: ProofMode) -> Self {
        let prop = Propagator::from_formula(f);
        Search {
            num_vars: f.num_vars(),
            seen: vec![false; f.num_vars() as usize],
            prop,
            mode,
            cert: Certificate::new(),
            learned: Vec::new(),
            cursor: 1,
            stats: SolveStats::default(),
        }
    }

    fn unsat(&mut self) -> SolveOutcome {
        if self.mode == ProofMode::None {
            return SolveOutcome::Unsat(None);
        }
        self.cert.add(Vec::new());
        SolveOutcome::Unsat(Some(std::mem::take(&mut self.cert)))
    }

    fn run(&mut self, budget: Budget) -> SolveOutcome {
        let start = Instant::now();
        if self.prop.is_refuted() || self.prop.propagate().is_some() {
            return self.unsat();
        }
        loop {
            if let Some(conflict) = self.prop.propagate() {
                self.stats.conflicts += 1;
                if self.prop.level() == 0 {
                    return self.unsat();
                }
                let (learnt, level) = self.analyze(conflict);
                self.backjump(level);
                if self.mode != ProofMode::None {
                    self.cert.add(learnt.clone());
                }
                let unit = learnt.len() == 1;
                let id = self.prop.add_clause(learnt);
                self.learned.push(id);
                self.stats.learned += 1;
                if unit && self.mode == ProofMode::Drup {
                    if self.prop.propagate().is_some() {
                        return self.unsat();
                    }
                    self.drop_satisfied();
                }
                if budget.max_conflicts.is_some_and(|m| self.stats.conflicts >= m) {
                    return SolveOutcome::Unknown(format!(
                        "conflict budget of {} exhausted",
                        self.stats.conflicts
                    ));
                }
                if budget.max_time.is_some_and(|t| start.elapsed() >= t) {
                    return SolveOutcome::Unknown("time limit reached".to_string());
                }
                continue;
            }
            match self.next_unassigned() {
                None => {
                    let values = (1..=self.num_vars)
                        .map(|v| self.prop.var_value(Var::new(v)).expect("total"))
                        .collect();
                    return SolveOutcome::Sat(Model::new(values));
                }
                Some(v) => {
                    self.stats.decisions += 1;
                    self.prop.new_level();
                    self.prop.assign(v.pos(), None);
                }
            }
        }
    }

    fn next_unassigned(&mut self) -> Option<Var> {
        while self.cursor <= self.num_vars {
            let v = Var::new(self.cursor);
            if self.prop.var_value(v).is_none() {
                return Some(v);
            }
            self.cursor += 1;
        }
        None
    }

    fn backjump(&mut self, level: u32) {
        if level < self.prop.level() {
            let start = self.prop.level_start(level + 1);
            if let Some(min) = self.prop.trail()[start..].iter().map(|l| l.var().index()).min() {
                self.cursor = self.cursor.min(min);
            }
            self.prop.backtrack(level);
        }
    }

    /// First-UIP learning. Returns the learned clause, asserting literal
    /// first, and the level to jump back to.
    fn analyze(&mut self, conflict: ClauseId) -> (Vec<Lit>, u32) {
        let current = self.prop.level();
        let mut learnt = vec![Lit::from_dimacs(1).expect("placeholder")];
        let mut pending = 0usize;
        let mut clause = conflict;
        let mut pivot: Option<Var> = None;
        let mut idx = self.prop.trail().len();
        loop {
            for &q in self.prop.clause(clause) {
                let v = q.var();
                if Some(v) == pivot || self.seen[v.slot()] {
                    continue;
                }
                let lvl = self.prop.var_level(v);
                if lvl == 0 {
                    continue;
                }
                self.seen[v.slot()] = true;
                if lvl == current {
                    pending += 1;
                } else {
                    learnt.push(q);
                }
            }
            let p = loop {
                idx -= 1;
                let l = self.prop.trail()[idx];
                if self.seen[l.var().slot()] {
                    break l;
                }
            };
            self.seen[p.var().slot()] = false;
            pending -= 1;
            if pending == 0 {
                learnt[0] = !p;
                break;
            }
            pivot = Some(p.var());
            clause = self.prop.reason(p.var()).expect("implied literal has a reason");
        }
        for l in &learnt[1..] {
            self.seen[l.var().slot()] = false;
        }
        let level = learnt[1..]
            .iter()
            .map(|l| self.prop.var_level(l.var()))
            .max()
            .unwrap_or(0);
        (learnt, level)
    }

    /// Deletes learned clauses satisfied at the top level, except those that
    /// justify a top-level assignment.
    fn drop_satisfied(&mut self) {
        debug_assert_eq!(self.prop.level(), 0);
        let mut kept = Vec::with_capacity(self.learned.len());
        for &id in &self.learned {
            let lits = self.prop.clause(id);
            let satisfied = lits.iter().any(|&l| self.prop.value(l) == Some(true));
            let is_reason = lits.iter().any(|l| self.prop.reason(l.var()) == Some(id));
            if satisfied && !is_reason {
                self.cert.delete(lits.to_vec());
                self.prop.delete(id);
            } else {
                kept.push(id);
            }
        }
        self.learned = kept;
    }
}

/// Runs `solver_cmd` (split on whitespace) on `f` written as DIMACS in
/// `workdir`, with the DIMACS path as the last argument.
///
/// The solver learns where to put a DRUP proof from [`DRUP_PATH_ENV`]; a
/// non-empty proof found there after an UNSAT answer is returned with it.
/// SAT models are checked against `f`, with unmentioned variables false.
pub fn solve_external(
    f: &CnfFormula,
    solver_cmd: &str,
    workdir: &Path,
    timeout: Option<Duration>,
) -> SolveOutcome {
    match run_external(f, solver_cmd, workdir, timeout) {
        Ok(outcome) => outcome,
        Err(reason) => SolveOutcome::Unknown(reason),
    }
}

fn run_external(
    f: &CnfFormula,
    solver_cmd: &str,
    workdir: &Path,
    timeout: Option<Duration>,
) -> Result<SolveOutcome, String> {
    let mut words = solver_cmd.split_whitespace();
    let program = words.next().ok_or("empty solver command")?;
    let cnf = tempfile::Builder::new()
        .prefix("edp-")
        .suffix(".cnf")
        .tempfile_in(workdir)
        .map_err(|e| format!("cannot create DIMACS file in {}: {e}", workdir.display()))?;
    write_dimacs(f, std::io::BufWriter::new(cnf.as_file()))
        .map_err(|e| format!("cannot write {}: {e}", cnf.path().display()))?;
    let proof = tempfile::Builder::new()
        .prefix("edp-")
        .suffix(".drup")
        .tempfile_in(workdir)
        .map_err(|e| format!("cannot create proof file in {}: {e}", workdir.display()))?;

    let mut child = Command::new(program)
        .args(words)
        .arg(cnf.path())
        .env(DRUP_PATH_ENV, proof.path())
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| format!("cannot start {program:?}: {e}"))?;
    let drain = |mut r: Box<dyn Read + Send>| {
        thread::spawn(move || {
            let mut s = String::new();
            let _ = r.read_to_string(&mut s);
            s
        })
    };
    let out = drain(Box::new(child.stdout.take().expect("piped")));
    let err = drain(Box::new(child.stderr.take().expect("piped")));

    let started = Instant::now();
    let status = loop {
        match child.try_wait() {
            Ok(Some(status)) => break status,
            Ok(None) => {}
            Err(e) => return Err(format!("waiting for {program:?}: {e}")),
        }
        if timeout.is_some_and(|t| started.elapsed() >= t) {
            let _ = child.kill();
            let _ = child.wait();
            return Err("timeout".to_string());
        }
        thread::sleep(Duration::from_millis(10));
    };
    let stdout = out.join().unwrap_or_default();
    let stderr = err.join().unwrap_or_default();
    log::debug!("{program} exited with {status}");

    let answer = parse_solver_output(&stdout).map_err(|e| format!("bad solver output: {e}"))?;
    match answer {
        SolverAnswer::Sat(mut model) => {
            model.extend_to(f.num_vars());
            match f.first_falsified(model.values()) {
                None => Ok(SolveOutcome::Sat(model)),
                Some(i) => Err(format!("solver model falsifies clause {}", i + 1)),
            }
        }
        SolverAnswer::Unsat => {
            let cert = match fs::metadata(proof.path()) {
                Ok(m) if m.len() > 0 => {
                    let file = fs::File::open(proof.path()).map_err(|e| e.to_string())?;
                    Some(parse_drup(BufReader::new(file)).map_err(|e| format!("bad proof: {e}"))?)
                }
                _ => None,
            };
            Ok(SolveOutcome::Unsat(cert))
        }
        SolverAnswer::Unknown if status.success() => Ok(SolveOutcome::Unknown(
            "solver reported no result".to_string(),
        )),
        SolverAnswer::Unknown => Err(format!(
            "solver exited with {status} and no result: {}",
            stderr.trim()
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::formula_from_dimacs;
    use crate::proofcheck::{check, CheckMode, Verdict};

    #[test]
    fn contradictory_units() {
        let f = formula_from_dimacs(1, &[&[1], &[-1]]);
        match solve(&f, Budget::default(), true) {
            SolveOutcome::Unsat(Some(c)) => assert_eq!(c, [crate::proofcheck::ProofLine::Add(vec![])].into_iter().collect()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_formula_is_sat() {
        let f = CnfFormula::new(3);
        assert_eq!(
            solve(&f, Budget::default(), false),
            SolveOutcome::Sat(Model::new(vec![true, true, true]))
        );
    }

    #[test]
    fn pigeonhole_three_into_two() {
        // p(i,h) = 2*(i-1) + h
        let mut clauses: Vec<Vec<i32>> = (0..3).map(|i| vec![2 * i + 1, 2 * i + 2]).collect();
        for h in 1..=2 {
            for i in 0..3 {
                for j in i + 1..3 {
                    clauses.push(vec![-(2 * i + h), -(2 * j + h)]);
                }
            }
        }
        let refs: Vec<&[i32]> = clauses.iter().map(Vec::as_slice).collect();
        let f = formula_from_dimacs(6, &refs);
        for mode in [ProofMode::Rup, ProofMode::Drup] {
            let (out, _) = solve_with(&f, Budget::default(), mode);
            let SolveOutcome::Unsat(Some(cert)) = out else {
                panic!("expected UNSAT");
            };
            let check_mode = if mode == ProofMode::Rup {
                CheckMode::Rup
            } else {
                CheckMode::Drup
            };
            assert_eq!(check(&f, &cert, check_mode), Verdict::Accepted);
        }
    }

    #[test]
    fn budget_exhaustion_is_unknown() {
        let mut clauses: Vec<Vec<i32>> = (0..5).map(|i| (1..=4).map(|h| 4 * i + h).collect()).collect();
        for h in 1..=4 {
            for i in 0..5 {
                for j in i + 1..5 {
                    clauses.push(vec![-(4 * i + h), -(4 * j + h)]);
                }
            }
        }
        let refs: Vec<&[i32]> = clauses.iter().map(Vec::as_slice).collect();
        let f = formula_from_dimacs(20, &refs);
        assert!(matches!(
            solve(&f, Budget::conflicts(3), false),
            SolveOutcome::Unknown(_)
        ));
        assert!(solve(&f, Budget::default(), false).is_unsat());
    }

    #[cfg(unix)]
    #[test]
    fn failing_command_is_unknown() {
        let dir = tempfile::tempdir().unwrap();
        let f = formula_from_dimacs(1, &[&[1]]);
        assert!(matches!(
            solve_external(&f, "false", dir.path(), None),
            SolveOutcome::Unknown(_)
        ));
        assert!(matches!(
            solve_external(&f, "/nonexistent/solver", dir.path(), None),
            SolveOutcome::Unknown(_)
        ));
    }
}
