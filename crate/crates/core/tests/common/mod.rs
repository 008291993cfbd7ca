//! Reference implementations that share no code with the library's
//! propagation, solving or checking.
#![allow(dead_code)]

use edp_core::cnf::{CnfFormula, Lit};
use rand::Rng;

/// Depth-first enumeration of total assignments in variable order. A clause
/// is checked as soon as its largest variable is assigned.
pub struct Enumerator {
    num_vars: usize,
    // clauses grouped by their largest variable (0-based)
    by_last: Vec<Vec<Vec<(usize, bool)>>>,
    has_empty: bool,
}

impl Enumerator {
    pub fn new(f: &CnfFormula) -> Self {
        let n = f.num_vars() as usize;
        let mut by_last = vec![Vec::new(); n];
        let mut has_empty = false;
        for c in f.clauses() {
            if c.is_empty() {
                has_empty = true;
                continue;
            }
            let lits: Vec<(usize, bool)> = c
                .iter()
                .map(|l| (l.var().index() as usize - 1, l.is_positive()))
                .collect();
            let last = lits.iter().map(|&(v, _)| v).max().unwrap();
            by_last[last].push(lits);
        }
        Enumerator {
            num_vars: n,
            by_last,
            has_empty,
        }
    }

    /// Calls `visit` on every model agreeing with `fixed` (a prefix of forced
    /// values); stops early when `visit` returns false.
    pub fn for_each_model(&self, fixed: &[bool], mut visit: impl FnMut(&[bool]) -> bool) {
        if self.has_empty {
            return;
        }
        let mut values = vec![false; self.num_vars];
        self.go(0, fixed, &mut values, &mut visit);
    }

    fn go(
        &self,
        v: usize,
        fixed: &[bool],
        values: &mut Vec<bool>,
        visit: &mut impl FnMut(&[bool]) -> bool,
    ) -> bool {
        if v == self.num_vars {
            return visit(values);
        }
        let choices: &[bool] = if v < fixed.len() {
            if fixed[v] {
                &[true]
            } else {
                &[false]
            }
        } else {
            &[false, true]
        };
        for &b in choices {
            values[v] = b;
            let ok = self.by_last[v]
                .iter()
                .all(|c| c.iter().any(|&(u, pos)| values[u] == pos));
            if ok && !self.go(v + 1, fixed, values, visit) {
                return false;
            }
        }
        true
    }

    pub fn count_models(&self, fixed: &[bool]) -> usize {
        let mut n = 0;
        self.for_each_model(fixed, |_| {
            n += 1;
            true
        });
        n
    }

    pub fn find_model(&self, fixed: &[bool]) -> Option<Vec<bool>> {
        let mut found = None;
        self.for_each_model(fixed, |m| {
            found = Some(m.to_vec());
            false
        });
        found
    }
}

pub fn is_sat_brute(f: &CnfFormula) -> bool {
    Enumerator::new(f).find_model(&[]).is_some()
}

/// Bits of `x` as a 0/1 input prefix of length `n`, lowest bit first.
pub fn bits(x: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| x >> i & 1 == 1).collect()
}

/// Reverse unit propagation by repeated full rescans.
pub fn naive_rup(db: &[Vec<Lit>], clause: &[Lit], num_vars: usize) -> bool {
    let mut val: Vec<Option<bool>> = vec![None; num_vars + 1];
    for &l in clause {
        let v = l.var().index() as usize;
        match val[v] {
            Some(b) if b == l.is_positive() => return true,
            _ => val[v] = Some(!l.is_positive()),
        }
    }
    loop {
        let mut changed = false;
        for c in db {
            let mut unassigned = None;
            let mut free = 0;
            let mut sat = false;
            for &l in c {
                match val[l.var().index() as usize] {
                    Some(b) if b == l.is_positive() => {
                        sat = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        free += 1;
                        unassigned = Some(l);
                    }
                }
            }
            if sat {
                continue;
            }
            match free {
                0 => return true,
                1 => {
                    let l = unassigned.unwrap();
                    val[l.var().index() as usize] = Some(l.is_positive());
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return false;
        }
    }
}

/// Uniform random k-CNF without repeated variables in a clause.
pub fn random_kcnf(rng: &mut impl Rng, num_vars: u32, num_clauses: usize, k: usize) -> CnfFormula {
    let mut f = CnfFormula::new(num_vars);
    for _ in 0..num_clauses {
        let mut c: Vec<Lit> = Vec::with_capacity(k);
        while c.len() < k {
            let v = rng.gen_range(1..=num_vars as i32);
            if c.iter().any(|l| l.var().index() as i32 == v) {
                continue;
            }
            let v = if rng.gen_bool(0.5) { v } else { -v };
            c.push(Lit::from_dimacs(v).unwrap());
        }
        f.add_clause(&c);
    }
    f
}
