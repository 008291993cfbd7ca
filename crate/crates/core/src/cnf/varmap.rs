use std::collections::HashMap;
use std::fmt;
use std::io::{self, BufRead, Write};

use thiserror::Error;

use super::Var;

/// What a solver variable stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    /// Input proposition `p_i`: true encodes `x_i = +1`.
    P(u32),
    /// Counter proposition `s^k_j` of the block over the progression with
    /// difference `d`: at least `k` of the block's first `j` inputs are true.
    S { d: u32, k: u32, j: u32 },
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::P(i) => write!(f, "P {i}"),
            Symbol::S { d, k, j } => write!(f, "S {d} {k} {j}"),
        }
    }
}

/// Bijection between symbols and variables.
///
/// Input propositions `P(1)..P(n)` always occupy variables `1..=n`, so the
/// first `n` values of a model spell out the sequence. Counter variables
/// follow in allocation order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarMap {
    // backward[v - 1] is the symbol of variable v
    backward: Vec<Symbol>,
    counters: HashMap<(u32, u32, u32), Var>,
    inputs: u32,
}

impl VarMap {
    /// A map with `P(1)..P(n)` pre-allocated as variables `1..=n`.
    pub fn with_inputs(n: u32) -> VarMap {
        VarMap {
            backward: (1..=n).map(Symbol::P).collect(),
            counters: HashMap::new(),
            inputs: n,
        }
    }

    pub fn num_inputs(&self) -> u32 {
        self.inputs
    }

    /// Number of allocated variables.
    pub fn len(&self) -> u32 {
        self.backward.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.backward.is_empty()
    }

    pub fn num_counters(&self) -> u32 {
        self.len() - self.inputs
    }

    /// `P(i)`; panics if `i` is not an allocated input.
    pub fn input(&self, i: u32) -> Var {
        assert!(
            (1..=self.inputs).contains(&i),
            "P({i}) outside 1..={}",
            self.inputs
        );
        Var::new(i)
    }

    pub fn get(&self, sym: Symbol) -> Option<Var> {
        match sym {
            Symbol::P(i) => (1..=self.inputs).contains(&i).then(|| Var::new(i)),
            Symbol::S { d, k, j } => self.counters.get(&(d, k, j)).copied(),
        }
    }

    /// The variable for a counter symbol, allocating it on first use.
    pub fn counter(&mut self, d: u32, k: u32, j: u32) -> Var {
        let next = Var::new(self.len() + 1);
        let backward = &mut self.backward;
        *self.counters.entry((d, k, j)).or_insert_with(|| {
            backward.push(Symbol::S { d, k, j });
            next
        })
    }

    pub fn symbol(&self, v: Var) -> Option<Symbol> {
        self.backward.get(v.slot()).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, Symbol)> + '_ {
        self.backward
            .iter()
            .enumerate()
            .map(|(i, s)| (Var::new(i as u32 + 1), *s))
    }
}

/// One line per variable: `<index> P <i>` or `<index> S <d> <k> <j>`.
pub fn write_map<W: Write>(map: &VarMap, mut w: W) -> io::Result<()> {
    for (v, sym) in map.iter() {
        writeln!(w, "{} {}", v.index(), sym)?;
    }
    w.flush()
}

#[derive(Debug, Error)]
pub enum MapError {
    #[error("line {line}: malformed map entry {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: expected variable {expected}, found {found}")]
    OutOfOrder {
        line: usize,
        expected: u32,
        found: u32,
    },
    #[error("line {line}: input P({i}) must be variable {i}")]
    MisplacedInput { line: usize, i: u32 },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Reads a map written by [`write_map`].
pub fn parse_map<R: BufRead>(r: R) -> Result<VarMap, MapError> {
    let mut map = VarMap::default();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') || text.starts_with('c') {
            continue;
        }
        let malformed = || MapError::Malformed {
            line: lineno,
            text: text.to_string(),
        };
        let fields: Vec<&str> = text.split_ascii_whitespace().collect();
        let nums = |range: std::ops::Range<usize>| -> Result<Vec<u32>, MapError> {
            fields[range]
                .iter()
                .map(|f| f.parse::<u32>().map_err(|_| malformed()))
                .collect()
        };
        let index: u32 = fields
            .first()
            .and_then(|f| f.parse().ok())
            .ok_or_else(malformed)?;
        let expected = map.len() + 1;
        if index != expected {
            return Err(MapError::OutOfOrder {
                line: lineno,
                expected,
                found: index,
            });
        }
        match (fields.get(1).copied(), fields.len()) {
            (Some("P"), 3) => {
                let i = nums(2..3)?[0];
                if i != index || map.num_counters() > 0 {
                    return Err(MapError::MisplacedInput { line: lineno, i });
                }
                map.backward.push(Symbol::P(i));
                map.inputs += 1;
            }
            (Some("S"), 5) => {
                let v = nums(2..5)?;
                map.counter(v[0], v[1], v[2]);
            }
            _ => return Err(malformed()),
        }
    }
    Ok(map)
}
