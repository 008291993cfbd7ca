//! SAT encodings of Erdős-discrepancy problems over ±1 sequences.
//!
//! The crate turns "is there a ±1 sequence of length `n` whose discrepancy
//! is at most `C`?" (optionally restricted to multiplicative or completely
//! multiplicative sequences) into CNF, solves small instances itself or hands
//! large ones to an external solver, decodes witnesses back into sequences and
//! checks RUP/DRUP refutations.
//!
//! * [`seqcore`]: sequences, discrepancy, multiplicativity, brute-force oracle.
//! * [`cnf`]: literals, formulas, unit propagation, DIMACS and model I/O.
//! * [`encoder`]: sequential counters, bounded-prefix blocks, full encodings.
//! * [`solver`]: a small CDCL solver with certificates; external solver runs.
//! * [`proofcheck`]: RUP/DRUP certificate checking and the DRUP text format.
//!
//! ```
//! use edp_core::encoder::{encode, EncodeConfig};
//! use edp_core::solver::{solve, Budget, SolveOutcome};
//!
//! let enc = encode(&EncodeConfig::edp(1, 12)).unwrap();
//! assert!(matches!(solve(&enc.formula, Budget::default(), false), SolveOutcome::Unsat(_)));
//! ```

pub mod cnf;
pub mod encoder;
pub mod proofcheck;
pub mod seqcore;
pub mod solver;

// The README and the guide under `book/`; their code blocks run as doctests.
#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/discrepancy.md")]
    mod discrepancy {}
    #[doc = include_str!("../../../book/src/sequential-counter.md")]
    mod sequential_counter {}
    #[doc = include_str!("../../../book/src/encoding.md")]
    mod encoding {}
    #[doc = include_str!("../../../book/src/multiplicativity.md")]
    mod multiplicativity {}
    #[doc = include_str!("../../../book/src/certificates.md")]
    mod certificates {}
}
