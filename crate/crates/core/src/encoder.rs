//! CNF encodings of bounded discrepancy.
//!
//! The building block is the sequential counter over inputs `p_1..p_m`:
//! counter `s^k_j` holds iff at least `k` of `p_1..p_j` are true, defined by
//!
//! ```text
//! s^k_j <-> s^k_{j-1} | (s^{k-1}_{j-1} & p_j)
//! ```
//!
//! in four clause families, emitted in this order:
//!
//! ```text
//! (1) -s^k_j | s^k_{j-1} | s^{k-1}_{j-1}
//! (2) -s^k_j | s^k_{j-1} | p_j
//! (3) -s^k_{j-1} | s^k_j
//! (4) -s^{k-1}_{j-1} | -p_j | s^k_j
//! ```
//!
//! with `s^0_j = true` and `s^k_j = false` for `j < k` folded in as
//! constants. A block of length `m` keeps every prefix of its 0/1 inputs
//! within `C` of balanced by additionally fixing `s^k_j = true` for
//! `j > 2k-2+C` and `s^k_j = false` for `j < 2k-C`; after folding those
//! constants and propagating units, only counters with `2k-C <= j <= 2k-2+C`
//! survive, which keeps a block below `C*m` counters and `4*C*m` clauses.
//!
//! A discrepancy-`C` encoding of length `n` conjoins one such block per step
//! `d <= n/(C+1)` over `p_d, p_2d, ...`; shorter progressions are always
//! bounded. All blocks share the inputs `P(i)`, which are variables `1..=n`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::cnf::{unit_propagate, CnfFormula, Lit, Propagation, Var, VarMap};
use crate::seqcore::gcd;

/// Pivot commonly fixed to `+1` for `C = 2`: 60 is colossally abundant, so
/// it sits on many progressions.
pub const DEFAULT_PIVOT: u32 = 60;

/// Which sequences the formula admits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Any sequence of discrepancy at most `C`.
    Edp,
    /// Multiplicative sequences.
    Mult,
    /// Completely multiplicative sequences.
    CMult,
    /// Any sequence whose first `m` elements are completely multiplicative.
    HybridPrefix(u32),
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Edp => f.write_str("edp"),
            Variant::Mult => f.write_str("mult"),
            Variant::CMult => f.write_str("cmult"),
            Variant::HybridPrefix(m) => write!(f, "hybrid({m})"),
        }
    }
}

/// Everything that determines an encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodeConfig {
    /// Discrepancy bound `C`.
    pub bound: u32,
    /// Sequence length `n`.
    pub len: u32,
    pub variant: Variant,
    /// Drop the last input of every progression whose remaining prefix has
    /// the parity that makes the last element irrelevant.
    pub parity: bool,
    /// Fix `x_l = +1`, breaking the `x -> -x` symmetry.
    pub pivot: Option<u32>,
    /// Completely multiplicative only: encode the `d = 1` block alone, which
    /// suffices because a completely multiplicative sequence has the same
    /// prefix sums (up to sign) along every progression.
    pub cmult_d1: bool,
}

impl EncodeConfig {
    fn plain(bound: u32, len: u32, variant: Variant) -> Self {
        EncodeConfig {
            bound,
            len,
            variant,
            parity: false,
            pivot: None,
            cmult_d1: false,
        }
    }

    pub fn edp(bound: u32, len: u32) -> Self {
        Self::plain(bound, len, Variant::Edp)
    }

    pub fn mult(bound: u32, len: u32) -> Self {
        Self::plain(bound, len, Variant::Mult)
    }

    pub fn cmult(bound: u32, len: u32) -> Self {
        Self::plain(bound, len, Variant::CMult)
    }

    pub fn hybrid(bound: u32, len: u32, prefix: u32) -> Self {
        Self::plain(bound, len, Variant::HybridPrefix(prefix))
    }

    pub fn with_parity(mut self) -> Self {
        self.parity = true;
        self
    }

    pub fn with_pivot(mut self, l: u32) -> Self {
        self.pivot = Some(l);
        self
    }

    pub fn with_cmult_d1(mut self) -> Self {
        self.cmult_d1 = true;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.bound == 0 {
            return Err(ConfigError::ZeroBound);
        }
        if self.len == 0 {
            return Err(ConfigError::ZeroLength);
        }
        if let Variant::HybridPrefix(m) = self.variant {
            if m == 0 || m > self.len {
                return Err(ConfigError::PrefixOutOfRange { m, n: self.len });
            }
        }
        if self.cmult_d1 && self.variant != Variant::CMult {
            return Err(ConfigError::CmultD1Variant(self.variant));
        }
        if let Some(l) = self.pivot {
            if l == 0 || l > self.len {
                return Err(ConfigError::PivotOutOfRange { l, n: self.len });
            }
            if self.variant != Variant::Edp {
                return Err(ConfigError::PivotVariant(self.variant));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("discrepancy bound C must be at least 1")]
    ZeroBound,
    #[error("sequence length n must be at least 1")]
    ZeroLength,
    #[error("multiplicative prefix m={m} must satisfy 1 <= m <= n={n}")]
    PrefixOutOfRange { m: u32, n: u32 },
    #[error("the d=1-only optimisation requires the cmult variant, not {0}")]
    CmultD1Variant(Variant),
    #[error("symmetry pivot l={l} must satisfy 1 <= l <= n={n}")]
    PivotOutOfRange { l: u32, n: u32 },
    #[error("symmetry breaking is unsound for the {0} variant: negation does not preserve multiplicativity")]
    PivotVariant(Variant),
}

/// Size report for an encoding.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EncodeStats {
    pub input_vars: u32,
    pub aux_vars: u32,
    pub clauses: usize,
    /// `(d, clauses)` for every progression block emitted.
    pub block_clauses: Vec<(u32, usize)>,
    /// Multiplicativity clauses (including the `x_1 = +1` unit).
    pub mult_clauses: usize,
}

impl EncodeStats {
    pub fn total_vars(&self) -> u32 {
        self.input_vars + self.aux_vars
    }
}

#[derive(Clone, Debug)]
pub struct EncodeResult {
    pub formula: CnfFormula,
    pub map: VarMap,
    pub stats: EncodeStats,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Term {
    Const(bool),
    Input(u32),
    Counter(u32, u32),
}

#[derive(Clone, Copy)]
enum BlockKind {
    Counter,
    Bounded(u32),
}

impl BlockKind {
    /// `s^k_j` after substituting every constant the block fixes.
    fn counter(self, k: u32, j: u32) -> Term {
        if k == 0 {
            return Term::Const(true);
        }
        if j < k {
            return Term::Const(false);
        }
        if let BlockKind::Bounded(c) = self {
            let (k, j, c) = (i64::from(k), i64::from(j), i64::from(c));
            if j < 2 * k - c {
                return Term::Const(false);
            }
            if j > 2 * k - 2 + c {
                return Term::Const(true);
            }
        }
        Term::Counter(k, j)
    }

    /// Values of `k` at position `j` whose clauses are not all satisfied by
    /// constants. Outside this window every clause of every family folds to
    /// true.
    fn window(self, j: u32, m: u32) -> std::ops::RangeInclusive<u32> {
        match self {
            BlockKind::Counter => 1..=m,
            BlockKind::Bounded(c) => {
                let lo = if j > c { (j - c) / 2 + 1 } else { 1 };
                let hi = j.min((j + c).div_ceil(2)).min(m);
                lo..=hi
            }
        }
    }
}

/// Clauses of one family instance, as `(term, positive)` pairs.
fn family(fam: usize, kind: BlockKind, k: u32, j: u32) -> [(Term, bool); 3] {
    let s = |k, j| kind.counter(k, j);
    let p = Term::Input(j);
    let none = (Term::Const(false), true);
    match fam {
        0 => [(s(k, j), false), (s(k, j - 1), true), (s(k - 1, j - 1), true)],
        1 => [(s(k, j), false), (s(k, j - 1), true), (p, true)],
        2 => [(s(k, j - 1), false), (s(k, j), true), none],
        _ => [(s(k - 1, j - 1), false), (p, false), (s(k, j), true)],
    }
}

/// Builds a block over `inputs` and appends it to `out`. Counters get
/// symbols `S(d, k, j)` and are allocated in `map` only if they survive
/// simplification. Returns the number of clauses appended.
fn build_block(
    kind: BlockKind,
    inputs: &[Var],
    d: u32,
    map: &mut VarMap,
    out: &mut CnfFormula,
) -> usize {
    let m = u32::try_from(inputs.len()).expect("block too long");
    assert!(m >= 1, "a block needs at least one input");

    // local numbering: inputs 1..=m, counters from m+1 in first-use order
    let mut local_ids: HashMap<(u32, u32), u32> = HashMap::new();
    let mut local_syms: Vec<(u32, u32)> = Vec::new();
    let mut local = CnfFormula::new(m);
    let mut buf: Vec<Lit> = Vec::with_capacity(3);
    for fam in 0..4 {
        for j in 1..=m {
            for k in kind.window(j, m) {
                buf.clear();
                let mut satisfied = false;
                for (term, positive) in family(fam, kind, k, j) {
                    let var = match term {
                        Term::Const(b) => {
                            if b == positive {
                                satisfied = true;
                                break;
                            }
                            continue;
                        }
                        Term::Input(j) => j,
                        Term::Counter(k, j) => *local_ids.entry((k, j)).or_insert_with(|| {
                            local_syms.push((k, j));
                            m + local_syms.len() as u32
                        }),
                    };
                    buf.push(Var::new(var).lit(positive));
                }
                if !satisfied {
                    local.add_clause(&buf);
                }
            }
        }
    }
    drop(local_ids);

    let (assignment, simplified) = match unit_propagate(&local, &[]) {
        Propagation::Fixpoint {
            assignment,
            simplified,
        } => (assignment, simplified),
        Propagation::Conflict => unreachable!("a counter block admits every balanced input"),
    };

    let mut global: Vec<Option<Var>> = vec![None; local_syms.len()];
    let before = out.len();
    for clause in simplified.clauses() {
        buf.clear();
        for &l in clause {
            let v = l.var().index();
            let g = if v <= m {
                inputs[v as usize - 1]
            } else {
                let slot = (v - m - 1) as usize;
                *global[slot].get_or_insert_with(|| {
                    let (k, j) = local_syms[slot];
                    map.counter(d, k, j)
                })
            };
            buf.push(g.lit(l.is_positive()));
        }
        out.push_normalized(&buf);
    }
    // propagation never fixes an input of a satisfiable block, but keep the
    // encoding faithful if it ever does
    for (v, b) in assignment.assigned() {
        if v.index() <= m {
            out.push_normalized(&[inputs[v.index() as usize - 1].lit(b)]);
        }
    }
    out.ensure_vars(map.len());
    out.len() - before
}

/// The plain sequential counter over `inputs` (no bound applied).
pub fn sinz_block(inputs: &[Var], d: u32, map: &mut VarMap, out: &mut CnfFormula) -> usize {
    build_block(BlockKind::Counter, inputs, d, map, out)
}

/// The simplified block stating that `inputs`, read as a ±1 sequence, has
/// every prefix sum within `[-bound, bound]`.
pub fn cbound_block(
    inputs: &[Var],
    bound: u32,
    d: u32,
    map: &mut VarMap,
    out: &mut CnfFormula,
) -> usize {
    assert!(bound >= 1, "bound must be positive");
    build_block(BlockKind::Bounded(bound), inputs, d, map, out)
}

/// `x_{jk} = x_j * x_k` over inputs `P(j), P(k), P(jk)`.
pub fn prod_clauses(j: u32, k: u32) -> [[Lit; 3]; 4] {
    let (pj, pk, pjk) = (Var::new(j), Var::new(k), Var::new(j * k));
    [
        [pj.neg(), pk.neg(), pjk.pos()],
        [pj.pos(), pk.pos(), pjk.pos()],
        [pj.neg(), pk.pos(), pjk.neg()],
        [pj.pos(), pk.neg(), pjk.neg()],
    ]
}

fn smallest_prime_factor(i: u32) -> u32 {
    let mut p = 2;
    while p * p <= i {
        if i.is_multiple_of(p) {
            return p;
        }
        p += 1;
    }
    i
}

/// Complete multiplicativity at position `i`: nothing for primes, `x_i = +1`
/// for perfect squares (including 1), otherwise the product constraint with
/// the smallest prime factor of `i`.
pub fn cmult_clauses(i: u32) -> Vec<Vec<Lit>> {
    assert!(i >= 1);
    let r = i.isqrt();
    if r * r == i {
        return vec![vec![Var::new(i).pos()]];
    }
    let p = smallest_prime_factor(i);
    if p == i {
        return Vec::new();
    }
    prod_clauses(p, i / p).iter().map(|c| c.to_vec()).collect()
}

/// Length of the progression block for step `d`, after the parity cut.
fn block_len(cfg: &EncodeConfig, d: u32) -> u32 {
    let m = cfg.len / d;
    if cfg.parity && m % 2 == cfg.bound % 2 {
        // the kept prefix m-1 has the parity that leaves room for any last
        // element
        m - 1
    } else {
        m
    }
}

/// Builds the formula for `cfg`.
///
/// Clause order: progression blocks by increasing `d`, then the
/// multiplicativity clauses, then the symmetry unit. The output is
/// deterministic for a given configuration.
pub fn encode(cfg: &EncodeConfig) -> Result<EncodeResult, ConfigError> {
    cfg.validate()?;
    let n = cfg.len;
    let mut map = VarMap::with_inputs(n);
    let mut formula = CnfFormula::new(n);
    let mut stats = EncodeStats {
        input_vars: n,
        ..EncodeStats::default()
    };

    let max_d = n / (cfg.bound + 1);
    let max_d = if cfg.cmult_d1 { max_d.min(1) } else { max_d };
    let mut inputs = Vec::new();
    for d in 1..=max_d {
        let m = block_len(cfg, d);
        if m == 0 {
            continue;
        }
        inputs.clear();
        inputs.extend((1..=m).map(|i| map.input(i * d)));
        let emitted = cbound_block(&inputs, cfg.bound, d, &mut map, &mut formula);
        stats.block_clauses.push((d, emitted));
    }

    let before = formula.len();
    match cfg.variant {
        Variant::Edp => {}
        Variant::Mult => {
            formula.add_clause(&[Var::new(1).pos()]);
            for j in 2..=n {
                if j * (j + 1) > n {
                    break;
                }
                for k in j + 1..=n / j {
                    if gcd(j as usize, k as usize) == 1 {
                        for c in prod_clauses(j, k) {
                            formula.add_clause(&c);
                        }
                    }
                }
            }
        }
        Variant::CMult => {
            for i in 1..=n {
                for c in cmult_clauses(i) {
                    formula.add_clause(&c);
                }
            }
        }
        Variant::HybridPrefix(m) => {
            for i in 1..=m {
                for c in cmult_clauses(i) {
                    formula.add_clause(&c);
                }
            }
        }
    }
    stats.mult_clauses = formula.len() - before;

    if let Some(l) = cfg.pivot {
        formula.add_clause(&[map.input(l).pos()]);
    }

    stats.aux_vars = map.num_counters();
    stats.clauses = formula.len();
    formula.ensure_vars(map.len());
    debug_assert_eq!(formula.num_vars(), map.len());
    Ok(EncodeResult {
        formula,
        map,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{to_dimacs_string, Symbol};
    use std::collections::BTreeSet;

    /// Renders a clause with symbolic names, sorted, e.g. `-s2_2 s1_1`.
    fn render(map: &VarMap, c: &[Lit]) -> String {
        let mut parts: Vec<String> = c
            .iter()
            .map(|l| {
                let name = match map.symbol(l.var()).unwrap() {
                    Symbol::P(i) => format!("p{i}"),
                    Symbol::S { k, j, .. } => format!("s{k}_{j}"),
                };
                if l.is_positive() {
                    name
                } else {
                    format!("-{name}")
                }
            })
            .collect();
        parts.sort();
        parts.join(" ")
    }

    fn block(kind: u32, m: u32) -> (CnfFormula, VarMap) {
        let mut map = VarMap::with_inputs(m);
        let mut f = CnfFormula::new(m);
        let inputs: Vec<Var> = (1..=m).map(Var::new).collect();
        if kind == 0 {
            sinz_block(&inputs, 1, &mut map, &mut f);
        } else {
            cbound_block(&inputs, kind, 1, &mut map, &mut f);
        }
        (f, map)
    }

    #[test]
    fn single_input_counter_is_an_equivalence() {
        let (f, map) = block(0, 1);
        let got: BTreeSet<String> = f.clauses().map(|c| render(&map, c)).collect();
        let want: BTreeSet<String> = ["-s1_1 p1", "-p1 s1_1"].iter().map(|s| s.to_string()).collect();
        assert_eq!(got, want);
        assert_eq!(f.len(), 2);
    }

    /// The 26 clauses of the bound-2 block over five inputs, written by hand.
    const FIVE_TWO: [&str; 26] = [
        // family (1)
        "-s2_2 s1_1",
        "-s2_3 s1_2 s2_2",
        "-s3_4 s2_3",
        "-s3_5 s2_4 s3_4",
        // family (2)
        "-s1_1 p1",
        "-s1_2 p2 s1_1",
        "p3 s1_2",
        "-s2_2 p2",
        "-s2_3 p3 s2_2",
        "-s2_4 p4 s2_3",
        "p5 s2_4",
        "-s3_4 p4",
        "-s3_5 p5 s3_4",
        // family (3)
        "-s1_1 s1_2",
        "-s2_2 s2_3",
        "-s2_3 s2_4",
        "-s3_4 s3_5",
        // family (4)
        "-p1 s1_1",
        "-p2 s1_2",
        "-p2 -s1_1 s2_2",
        "-p3 -s1_2 s2_3",
        "-p4 s2_4",
        "-p3 -s2_2",
        "-p4 -s2_3 s3_4",
        "-p5 -s2_4 s3_5",
        "-p5 -s3_4",
    ];

    #[test]
    fn five_inputs_bound_two_golden_set() {
        let (f, map) = block(2, 5);
        assert_eq!(f.len(), 26);
        let got: BTreeSet<String> = f.clauses().map(|c| render(&map, c)).collect();
        let want: BTreeSet<String> = FIVE_TWO
            .iter()
            .map(|s| {
                let mut parts: Vec<&str> = s.split(' ').collect();
                parts.sort();
                parts.join(" ")
            })
            .collect();
        assert_eq!(got, want);
        let counters: BTreeSet<(u32, u32)> = map
            .iter()
            .filter_map(|(_, s)| match s {
                Symbol::S { k, j, .. } => Some((k, j)),
                Symbol::P(_) => None,
            })
            .collect();
        let expected: BTreeSet<(u32, u32)> =
            [(1, 1), (1, 2), (2, 2), (2, 3), (2, 4), (3, 4), (3, 5)].into();
        assert_eq!(counters, expected);
    }

    #[test]
    fn window_matches_full_scan() {
        // same clauses whether or not k is restricted to the window
        for c in 1..=4 {
            for m in 1..=40 {
                let kind = BlockKind::Bounded(c);
                let mut windowed = Vec::new();
                let mut full = Vec::new();
                for fam in 0..4 {
                    for j in 1..=m {
                        for k in 1..=m + 1 {
                            let cl = family(fam, kind, k, j);
                            let sat = cl.iter().any(|(t, p)| *t == Term::Const(*p));
                            if !sat {
                                full.push(cl);
                                if kind.window(j, m).contains(&k) {
                                    windowed.push(cl);
                                }
                            }
                        }
                    }
                }
                assert_eq!(windowed, full, "C={c} m={m}");
            }
        }
    }

    #[test]
    fn size_bound_small() {
        for c in 1..=4 {
            for m in 1..=60u32 {
                let (f, map) = block(c, m);
                if (c, m) == (1, 1) {
                    // s1_1 <-> p1: the one block where the bound is tight
                    assert_eq!(map.num_counters(), 1);
                } else {
                    assert!(map.num_counters() < c * m, "C={c} m={m}");
                }
                assert!(f.len() < (4 * c * m) as usize, "C={c} m={m}");
            }
        }
    }

    #[test]
    fn prod_clauses_for_two_three() {
        let cl = prod_clauses(2, 3);
        let ints: Vec<Vec<i32>> = cl
            .iter()
            .map(|c| c.iter().map(|l| l.to_dimacs()).collect())
            .collect();
        assert_eq!(
            ints,
            vec![
                vec![-2, -3, 6],
                vec![2, 3, 6],
                vec![-2, 3, -6],
                vec![2, -3, -6]
            ]
        );
    }

    #[test]
    fn prod_clauses_truth_table() {
        let cl = prod_clauses(2, 3);
        for bits in 0..8u32 {
            let vals = [bits & 1 == 1, bits & 2 == 2, bits & 4 == 4];
            let value = |l: &Lit| {
                let v = match l.var().index() {
                    2 => vals[0],
                    3 => vals[1],
                    _ => vals[2],
                };
                v == l.is_positive()
            };
            let sat = cl.iter().all(|c| c.iter().any(value));
            let sign = |b: bool| if b { 1 } else { -1 };
            assert_eq!(sat, sign(vals[2]) == sign(vals[0]) * sign(vals[1]));
        }
    }

    #[test]
    fn square_product_degenerates() {
        let mut f = CnfFormula::new(4);
        for c in prod_clauses(2, 2) {
            f.add_clause(&c);
        }
        // two tautologies are dropped; what remains forces p4
        assert_eq!(f.len(), 2);
        assert_eq!(f.clause(0), &[Var::new(2).neg(), Var::new(4).pos()]);
        assert_eq!(f.clause(1), &[Var::new(2).pos(), Var::new(4).pos()]);
    }

    #[test]
    fn cmult_cases() {
        assert!(cmult_clauses(7).is_empty());
        assert_eq!(cmult_clauses(9), vec![vec![Var::new(9).pos()]]);
        assert_eq!(cmult_clauses(1), vec![vec![Var::new(1).pos()]]);
        let twelve: Vec<Vec<Lit>> = prod_clauses(2, 6).iter().map(|c| c.to_vec()).collect();
        assert_eq!(cmult_clauses(12), twelve);
    }

    #[test]
    fn config_validation() {
        assert_eq!(
            encode(&EncodeConfig::mult(2, 10).with_pivot(3)).unwrap_err(),
            ConfigError::PivotVariant(Variant::Mult)
        );
        assert_eq!(
            encode(&EncodeConfig::edp(2, 10).with_pivot(11)).unwrap_err(),
            ConfigError::PivotOutOfRange { l: 11, n: 10 }
        );
        assert_eq!(
            encode(&EncodeConfig::edp(2, 10).with_cmult_d1()).unwrap_err(),
            ConfigError::CmultD1Variant(Variant::Edp)
        );
        assert_eq!(
            encode(&EncodeConfig::hybrid(2, 10, 11)).unwrap_err(),
            ConfigError::PrefixOutOfRange { m: 11, n: 10 }
        );
        assert_eq!(encode(&EncodeConfig::edp(0, 10)).unwrap_err(), ConfigError::ZeroBound);
        assert_eq!(encode(&EncodeConfig::edp(1, 0)).unwrap_err(), ConfigError::ZeroLength);
        let msg = ConfigError::PivotVariant(Variant::CMult).to_string();
        assert!(msg.contains("cmult"));
    }

    #[test]
    fn stats_are_consistent() {
        let r = encode(&EncodeConfig::cmult(2, 40).with_parity()).unwrap();
        assert_eq!(r.stats.input_vars, 40);
        assert_eq!(r.stats.total_vars(), r.formula.num_vars());
        assert_eq!(r.stats.clauses, r.formula.len());
        let blocks: usize = r.stats.block_clauses.iter().map(|(_, c)| c).sum();
        assert_eq!(blocks + r.stats.mult_clauses, r.stats.clauses);
        assert_eq!(r.stats.block_clauses.len(), 40 / 3);
    }

    #[test]
    fn pivot_unit_is_last() {
        let r = encode(&EncodeConfig::edp(2, 100).with_parity().with_pivot(60)).unwrap();
        let last = r.formula.clause(r.formula.len() - 1);
        assert_eq!(last, &[Var::new(60).pos()]);
    }

    #[test]
    fn parity_cut_follows_bound_parity() {
        let cfg = EncodeConfig::edp(2, 12).with_parity();
        // m = 12 even, C even: the 12th element is free
        assert_eq!(block_len(&cfg, 1), 11);
        // m = 3 odd: keep all
        assert_eq!(block_len(&cfg, 4), 3);
        let cfg = EncodeConfig::edp(1, 12).with_parity();
        assert_eq!(block_len(&cfg, 1), 12);
        assert_eq!(block_len(&cfg, 4), 2);
    }

    #[test]
    fn deterministic_output() {
        let cfg = EncodeConfig::mult(2, 150).with_parity();
        let a = to_dimacs_string(&encode(&cfg).unwrap().formula);
        let b = to_dimacs_string(&encode(&cfg).unwrap().formula);
        assert_eq!(a, b);
    }

    #[test]
    fn disc2_1160_sizes() {
        let r = encode(&EncodeConfig::edp(2, 1160).with_parity().with_pivot(DEFAULT_PIVOT)).unwrap();
        assert_eq!(r.stats.total_vars(), 11824);
        // 41884 block clauses plus the pivot unit
        assert_eq!(r.stats.clauses, 41885);
        let r = encode(&EncodeConfig::edp(2, 1161).with_parity().with_pivot(DEFAULT_PIVOT)).unwrap();
        assert_eq!(r.stats.total_vars(), 11847);
        assert_eq!(r.stats.clauses, 41971);
    }
}
