//! Finite ±1 sequences and the quantities the encoders are built around:
//! discrepancy along homogeneous progressions, C-boundedness of plain
//! prefixes, and (complete) multiplicativity.
//!
//! Every public index is 1-based: `seq.get(1)` is the first element.

use std::fmt;
use std::ops::Neg;

use thiserror::Error;

/// One element of a ±1 sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `+1` or `-1`.
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    /// Boolean image used by the encoders: `+1` is true.
    pub fn to_bool(self) -> bool {
        self == Sign::Plus
    }

    pub fn from_bool(b: bool) -> Sign {
        if b {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// A finite ±1 sequence `x_1, ..., x_n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SignSeq {
    elems: Vec<Sign>,
}

impl SignSeq {
    pub fn new(elems: Vec<Sign>) -> Self {
        SignSeq { elems }
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        bits.into_iter().map(Sign::from_bool).collect()
    }

    /// Builds a sequence from `+1`/`-1` integers. Panics on any other value.
    pub fn from_values(values: &[i64]) -> Self {
        values
            .iter()
            .map(|&v| match v {
                1 => Sign::Plus,
                -1 => Sign::Minus,
                other => panic!("not a ±1 value: {other}"),
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// `x_i` for `1 <= i <= len`.
    pub fn get(&self, i: usize) -> Option<Sign> {
        i.checked_sub(1).and_then(|i| self.elems.get(i).copied())
    }

    pub fn as_slice(&self) -> &[Sign] {
        &self.elems
    }

    pub fn iter(&self) -> impl Iterator<Item = Sign> + '_ {
        self.elems.iter().copied()
    }

    pub fn push(&mut self, s: Sign) {
        self.elems.push(s);
    }

    /// The first `len` elements.
    pub fn prefix(&self, len: usize) -> SignSeq {
        SignSeq::new(self.elems[..len.min(self.len())].to_vec())
    }

    /// Pointwise negation `-x_1, ..., -x_n`.
    pub fn negated(&self) -> SignSeq {
        self.iter().map(|s| -s).collect()
    }

    /// The 0/1 image `b_i = (x_i + 1) / 2`.
    pub fn to_bools(&self) -> Vec<bool> {
        self.iter().map(Sign::to_bool).collect()
    }
}

impl FromIterator<Sign> for SignSeq {
    fn from_iter<I: IntoIterator<Item = Sign>>(iter: I) -> Self {
        SignSeq::new(iter.into_iter().collect())
    }
}

/// Discrepancy: the largest `|x_d + x_2d + ... + x_kd|` over all steps `d`
/// and all lengths `k` with `kd <= n`.
pub fn discrepancy(s: &SignSeq) -> u64 {
    let xs = s.as_slice();
    let n = xs.len();
    let mut best = 0u64;
    for d in 1..=n {
        let mut sum = 0i64;
        for i in (d..=n).step_by(d) {
            sum += xs[i - 1].value();
            best = best.max(sum.unsigned_abs());
        }
    }
    best
}

/// True iff every plain prefix sum lies in `[-c, c]`.
pub fn is_c_bounded(s: &SignSeq, c: u64) -> bool {
    let mut sum = 0i64;
    s.iter().all(|x| {
        sum += x.value();
        sum.unsigned_abs() <= c
    })
}

/// The strongest multiplicativity class a sequence belongs to.
///
/// Classes are ordered by inclusion, so `CompletelyMultiplicative >
/// Multiplicative > Unconstrained` and `a >= b` reads "a is at least as
/// constrained as b".
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SeqClass {
    Unconstrained,
    Multiplicative,
    CompletelyMultiplicative,
}

impl SeqClass {
    pub fn name(self) -> &'static str {
        match self {
            SeqClass::Unconstrained => "unconstrained",
            SeqClass::Multiplicative => "multiplicative",
            SeqClass::CompletelyMultiplicative => "completely-multiplicative",
        }
    }

    /// Membership test for this class (not just the strongest one).
    pub fn contains(self, s: &SignSeq) -> bool {
        classify(s) >= self
    }
}

impl fmt::Display for SeqClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Classifies `s`. Both multiplicative classes require `x_1 = +1`.
pub fn classify(s: &SignSeq) -> SeqClass {
    let n = s.len();
    if n == 0 {
        return SeqClass::CompletelyMultiplicative;
    }
    if s.get(1) != Some(Sign::Plus) {
        return SeqClass::Unconstrained;
    }
    let x = |i: usize| s.as_slice()[i - 1];
    let mut complete = true;
    let mut coprime = true;
    'outer: for j in 2..=n {
        if j * j > n {
            break;
        }
        for k in j..=n / j {
            if x(j * k) != x(j) * x(k) {
                complete = false;
                if gcd(j, k) == 1 {
                    coprime = false;
                    break 'outer;
                }
            }
        }
    }
    if complete {
        SeqClass::CompletelyMultiplicative
    } else if coprime {
        SeqClass::Multiplicative
    } else {
        SeqClass::Unconstrained
    }
}

/// Smallest prime factor for every `i <= n` (entry 0 and 1 are 0).
pub(crate) fn smallest_prime_factors(n: usize) -> Vec<usize> {
    let mut spf = vec![0usize; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            for m in (i..=n).step_by(i) {
                if spf[m] == 0 {
                    spf[m] = i;
                }
            }
        }
    }
    spf
}

/// Result of [`oracle_max_length`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleResult {
    /// The longest sequence in the class has exactly this length.
    Exact(usize),
    /// A witness of length `cap` exists; the true maximum is at least this.
    AtLeast(usize),
}

impl fmt::Display for OracleResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleResult::Exact(n) => write!(f, "{n}"),
            OracleResult::AtLeast(n) => write!(f, ">={n}"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("cap must be positive")]
    ZeroCap,
    #[error("bound C must be positive")]
    ZeroBound,
}

/// How position `i` gets its value during the oracle search.
#[derive(Clone, Copy)]
enum Slot {
    Free,
    One,
    Product(usize, usize),
}

fn slots(class: SeqClass, cap: usize) -> Vec<Slot> {
    let spf = smallest_prime_factors(cap);
    let mut out = vec![Slot::Free; cap + 1];
    if class == SeqClass::Unconstrained {
        return out;
    }
    out[1] = Slot::One;
    for i in 2..=cap {
        let p = spf[i];
        if p == i {
            continue;
        }
        out[i] = match class {
            SeqClass::CompletelyMultiplicative => Slot::Product(p, i / p),
            _ => {
                // split off the full power of the smallest prime
                let mut q = p;
                while (i / q).is_multiple_of(p) {
                    q *= p;
                }
                if q == i {
                    Slot::Free
                } else {
                    Slot::Product(q, i / q)
                }
            }
        };
    }
    out
}

struct Search<'a> {
    bound: i64,
    cap: usize,
    slots: &'a [Slot],
    xs: Vec<i64>,
    // sums[d] = x_d + x_2d + ... up to the current length
    sums: Vec<i64>,
    best: usize,
}

impl Search<'_> {
    fn try_push(&mut self, v: i64) -> bool {
        let i = self.xs.len() + 1;
        self.xs.push(v);
        let mut ok = true;
        let mut touched = 0;
        for d in 1..=i {
            if i.is_multiple_of(d) {
                self.sums[d] += v;
                touched = d;
                if self.sums[d].abs() > self.bound {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            self.undo(touched);
        }
        ok
    }

    fn undo(&mut self, upto: usize) {
        let i = self.xs.len();
        let v = self.xs.pop().expect("undo on empty");
        for d in 1..=upto {
            if i.is_multiple_of(d) {
                self.sums[d] -= v;
            }
        }
    }

    /// Returns true once a length-`cap` witness has been found.
    fn extend(&mut self) -> bool {
        let len = self.xs.len();
        self.best = self.best.max(len);
        if len == self.cap {
            return true;
        }
        let i = len + 1;
        let choices: &[i64] = match self.slots[i] {
            Slot::Free => &[1, -1],
            Slot::One => &[1],
            Slot::Product(a, b) => {
                if self.xs[a - 1] * self.xs[b - 1] == 1 {
                    &[1]
                } else {
                    &[-1]
                }
            }
        };
        for &v in choices {
            if self.try_push(v) {
                if self.extend() {
                    return true;
                }
                self.undo(i);
            }
        }
        false
    }
}

/// Longest length of a sequence in `class` with discrepancy at most `bound`,
/// by depth-first extension with pruning. Only free positions branch
/// (primes for completely multiplicative, prime powers for multiplicative),
/// trying `+1` before `-1`.
pub fn oracle_max_length(
    bound: u64,
    class: SeqClass,
    cap: usize,
) -> Result<OracleResult, OracleError> {
    if cap == 0 {
        return Err(OracleError::ZeroCap);
    }
    if bound == 0 {
        return Err(OracleError::ZeroBound);
    }
    let slots = slots(class, cap);
    let mut search = Search {
        bound: bound as i64,
        cap,
        slots: &slots,
        xs: Vec::with_capacity(cap),
        sums: vec![0; cap + 1],
        best: 0,
    };
    if search.extend() {
        Ok(OracleResult::AtLeast(cap))
    } else {
        Ok(OracleResult::Exact(search.best))
    }
}

/// Text layouts for sequence files.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeqFormat {
    /// `+` and `-` glyphs; all whitespace is insignificant.
    PmGlyphs,
    /// Comma-separated `+1` / `-1` tokens.
    SignedCsv,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseSeqError {
    #[error("line {line}, column {column}: unexpected {found:?}")]
    UnknownGlyph {
        line: usize,
        column: usize,
        found: String,
    },
}

/// Glyphs per line in rendered `PmGlyphs` output.
const GLYPHS_PER_LINE: usize = 30;

/// Parses a sequence. Lines whose first non-blank character is `#` are
/// comments.
pub fn parse_seq(text: &str, format: SeqFormat) -> Result<SignSeq, ParseSeqError> {
    let mut out = SignSeq::default();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim_start().starts_with('#') {
            continue;
        }
        match format {
            SeqFormat::PmGlyphs => {
                for (col, ch) in line.char_indices() {
                    match ch {
                        '+' => out.push(Sign::Plus),
                        '-' => out.push(Sign::Minus),
                        c if c.is_whitespace() => {}
                        c => {
                            return Err(ParseSeqError::UnknownGlyph {
                                line: lineno + 1,
                                column: col + 1,
                                found: c.to_string(),
                            })
                        }
                    }
                }
            }
            SeqFormat::SignedCsv => {
                let mut col = 0;
                for field in line.split(',') {
                    let token = field.trim();
                    let offset = field.len() - field.trim_start().len();
                    match token {
                        "+1" => out.push(Sign::Plus),
                        "-1" => out.push(Sign::Minus),
                        // tolerate a trailing comma and blank lines
                        "" => {}
                        other => {
                            return Err(ParseSeqError::UnknownGlyph {
                                line: lineno + 1,
                                column: col + offset + 1,
                                found: other.to_string(),
                            })
                        }
                    }
                    col += field.len() + 1;
                }
            }
        }
    }
    Ok(out)
}

/// Canonical rendering: glyphs separated by single spaces, thirty per line;
/// CSV on a single line. Non-empty output ends with a newline.
pub fn render_seq(s: &SignSeq, format: SeqFormat) -> String {
    if s.is_empty() {
        return String::new();
    }
    let mut out = String::with_capacity(s.len() * 3);
    match format {
        SeqFormat::PmGlyphs => {
            for (n, chunk) in s.as_slice().chunks(GLYPHS_PER_LINE).enumerate() {
                if n > 0 {
                    out.push('\n');
                }
                let line: Vec<&str> = chunk
                    .iter()
                    .map(|x| if *x == Sign::Plus { "+" } else { "-" })
                    .collect();
                out.push_str(&line.join(" "));
            }
        }
        SeqFormat::SignedCsv => {
            let fields: Vec<&str> = s
                .iter()
                .map(|x| if x == Sign::Plus { "+1" } else { "-1" })
                .collect();
            out.push_str(&fields.join(","));
        }
    }
    out.push('\n');
    out
}

/// Picks the format from content: any comma or digit means CSV.
pub fn detect_format(text: &str) -> SeqFormat {
    let body = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(str::chars);
    for c in body {
        if c == ',' || c.is_ascii_digit() {
            return SeqFormat::SignedCsv;
        }
    }
    SeqFormat::PmGlyphs
}
