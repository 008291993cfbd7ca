use thiserror::Error;

use super::{Lit, Symbol, Var, VarMap};
use crate::seqcore::{Sign, SignSeq};

/// A total assignment over variables `1..=len`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Model {
    values: Vec<bool>,
}

impl Model {
    pub fn new(values: Vec<bool>) -> Model {
        Model { values }
    }

    /// Builds a model from literals; variables not mentioned below the
    /// largest one are false.
    pub fn from_lits(lits: impl IntoIterator<Item = Lit>) -> Model {
        let mut values = Vec::new();
        for l in lits {
            let i = l.var().slot();
            if i >= values.len() {
                values.resize(i + 1, false);
            }
            values[i] = l.is_positive();
        }
        Model { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, v: Var) -> Option<bool> {
        self.values.get(v.slot()).copied()
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    /// Pads with false up to `n` variables.
    pub fn extend_to(&mut self, n: u32) {
        if self.values.len() < n as usize {
            self.values.resize(n as usize, false);
        }
    }

    /// Literals true under the model, in variable order.
    pub fn lits(&self) -> impl Iterator<Item = Lit> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &b)| Var::new(i as u32 + 1).lit(b))
    }
}

/// What a SAT-competition style solver reported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolverAnswer {
    Sat(Model),
    Unsat,
    Unknown,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OutputError {
    #[error("line {line}: variable {var} assigned both ways")]
    Contradiction { line: usize, var: u32 },
    #[error("line {line}: invalid value {token:?}")]
    BadValue { line: usize, token: String },
}

/// Collects the model from `v` lines, stopping at the terminating 0.
pub fn parse_value_lines(text: &str) -> Result<Model, OutputError> {
    let mut lits: Vec<Lit> = Vec::new();
    let mut seen: Vec<Option<bool>> = Vec::new();
    'lines: for (n, line) in text.lines().enumerate() {
        let Some(rest) = line.strip_prefix('v') else {
            continue;
        };
        for token in rest.split_ascii_whitespace() {
            let value: i32 = token.parse().map_err(|_| OutputError::BadValue {
                line: n + 1,
                token: token.to_string(),
            })?;
            let Some(l) = Lit::from_dimacs(value) else {
                break 'lines;
            };
            let i = l.var().slot();
            if i >= seen.len() {
                seen.resize(i + 1, None);
            }
            match seen[i] {
                Some(b) if b != l.is_positive() => {
                    return Err(OutputError::Contradiction {
                        line: n + 1,
                        var: l.var().index(),
                    })
                }
                _ => seen[i] = Some(l.is_positive()),
            }
            lits.push(l);
        }
    }
    Ok(Model::from_lits(lits))
}

/// Parses solver output in the competition format: an `s` status line and
/// `v` value lines. No status line means [`SolverAnswer::Unknown`].
pub fn parse_solver_output(text: &str) -> Result<SolverAnswer, OutputError> {
    let status = text.lines().find_map(|l| {
        l.strip_prefix("s ")
            .or_else(|| l.strip_prefix("s\t"))
            .map(str::trim)
    });
    match status {
        Some("SATISFIABLE") => Ok(SolverAnswer::Sat(parse_value_lines(text)?)),
        Some("UNSATISFIABLE") => Ok(SolverAnswer::Unsat),
        _ => Ok(SolverAnswer::Unknown),
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecodeError {
    #[error("model does not assign input P({0})")]
    MissingInput(u32),
}

/// Reads `x_1..x_n` off a model: `x_i = +1` iff `P(i)` is true.
pub fn decode_model(model: &Model, map: &VarMap, n: u32) -> Result<SignSeq, DecodeError> {
    (1..=n)
        .map(|i| {
            let v = map.get(Symbol::P(i)).ok_or(DecodeError::MissingInput(i))?;
            model
                .value(v)
                .map(Sign::from_bool)
                .ok_or(DecodeError::MissingInput(i))
        })
        .collect()
}
