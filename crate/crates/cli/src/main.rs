//! `edp`: encode, solve, decode and verify discrepancy problems.
//!
//! Exit codes: 0 success (and UNKNOWN), 10 SAT, 20 UNSAT, 30 rejected
//! (proof or sequence), 1 usage error, 2 I/O or parse error.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use edp_core::cnf::{
    decode_model, parse_dimacs, parse_map, parse_value_lines, write_dimacs, write_map, CnfFormula,
    Model,
};
use edp_core::encoder::{encode, EncodeConfig, DEFAULT_PIVOT};
use edp_core::proofcheck::{check, parse_drup, strip_deletions, write_drup, CheckMode, Verdict};
use edp_core::seqcore::{
    classify, detect_format, discrepancy, is_c_bounded, oracle_max_length, parse_seq, render_seq,
    SeqClass, SeqFormat,
};
use edp_core::solver::{solve_external, solve_with, Budget, ProofMode, SolveOutcome, DRUP_PATH_ENV};

const EXIT_SAT: u8 = 10;
const EXIT_UNSAT: u8 = 20;
const EXIT_REJECTED: u8 = 30;
const EXIT_USAGE: u8 = 1;
const EXIT_IO: u8 = 2;

#[derive(Parser)]
#[command(name = "edp", version, about = "SAT encodings of bounded-discrepancy ±1 sequences")]
struct Cli {
    /// More progress output on stderr (repeat for debug output).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the CNF for a discrepancy problem.
    Encode(EncodeArgs),
    /// Solve a DIMACS file with the built-in solver or an external one.
    Solve(SolveArgs),
    /// Report discrepancy and class of a sequence file.
    CheckSeq(CheckSeqArgs),
    /// Turn a solver model into a sequence.
    Decode(DecodeArgs),
    /// Check a RUP/DRUP refutation of a DIMACS file.
    VerifyProof(VerifyArgs),
    /// Longest sequence of a class with bounded discrepancy, by search.
    Oracle(OracleArgs),
    /// Reproduce rows of the table of maximal lengths.
    Summary(SummaryArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Edp,
    Mult,
    Cmult,
    Hybrid,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Any,
    Mult,
    Cmult,
}

impl From<ClassArg> for SeqClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Any => SeqClass::Unconstrained,
            ClassArg::Mult => SeqClass::Multiplicative,
            ClassArg::Cmult => SeqClass::CompletelyMultiplicative,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Pm,
    Csv,
}

impl From<FormatArg> for SeqFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Pm => SeqFormat::PmGlyphs,
            FormatArg::Csv => SeqFormat::SignedCsv,
        }
    }
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long, value_enum)]
    variant: VariantArg,
    /// Discrepancy bound.
    #[arg(short = 'C')]
    bound: u32,
    /// Sequence length.
    #[arg(short = 'n')]
    len: u32,
    /// Completely multiplicative prefix length (hybrid only).
    #[arg(long)]
    prefix: Option<u32>,
    /// Drop progression tails that cannot matter.
    #[arg(long)]
    parity: bool,
    /// Fix x_l = +1 to break the sign symmetry (edp only).
    #[arg(long, value_name = "L")]
    fix: Option<u32>,
    /// Only the d = 1 block (cmult only).
    #[arg(long)]
    cmult_d1: bool,
    /// DIMACS output; `-` for stdout.
    #[arg(short, long, default_value = "-")]
    output: PathBuf,
    /// Variable map output.
    #[arg(long)]
    map: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// DIMACS input; `-` for stdin.
    #[arg(long)]
    cnf: PathBuf,
    /// External solver command; without a value, $EDP_SOLVER.
    #[arg(long, value_name = "CMD", num_args = 0..=1, default_missing_value = "")]
    external: Option<String>,
    /// Conflict budget of the built-in solver.
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Where to write the refutation (defaults to $EDP_DRUP_PATH when set).
    #[arg(long)]
    cert: Option<PathBuf>,
    /// Record deletions in the built-in solver's refutation.
    #[arg(long)]
    drup: bool,
    /// Directory for the external solver's files.
    #[arg(long)]
    workdir: Option<PathBuf>,
}

#[derive(Args)]
struct CheckSeqArgs {
    /// Sequence file; `-` for stdin.
    #[arg(long)]
    file: PathBuf,
    /// Discrepancy bound to check against.
    #[arg(short = 'C')]
    bound: Option<u64>,
    /// Input format; detected when omitted.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    cnf_map: PathBuf,
    /// Solver output with `v` lines; `-` for stdin.
    #[arg(long)]
    model: PathBuf,
    #[arg(short = 'n')]
    len: u32,
    #[arg(long, value_enum, default_value = "pm")]
    format: FormatArg,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    cnf: PathBuf,
    #[arg(long)]
    proof: PathBuf,
    /// Check as RUP, ignoring deletion lines.
    #[arg(long)]
    rup: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(short = 'C')]
    bound: u64,
    #[arg(long, value_enum)]
    class: ClassArg,
    #[arg(long)]
    cap: usize,
}

#[derive(Args)]
struct SummaryArgs {
    /// Also confirm the discrepancy 2 and 3 rows (hours of compute).
    #[arg(long)]
    long: bool,
    /// External solver for the long rows; without a value, $EDP_SOLVER.
    #[arg(long, value_name = "CMD", num_args = 0..=1, default_missing_value = "")]
    external: Option<String>,
    /// Per-instance limit in seconds for the long rows.
    #[arg(long)]
    timeout: Option<f64>,
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn io(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_IO,
            message: message.into(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn open_input(flag: &str, path: &Path) -> Result<Box<dyn BufRead>, Failure> {
    if path.as_os_str() == "-" {
        return Ok(Box::new(BufReader::new(io::stdin())));
    }
    let f = File::open(path).map_err(|e| Failure::io(format!("{flag} {}: {e}", path.display())))?;
    Ok(Box::new(BufReader::new(f)))
}

fn read_text(flag: &str, path: &Path) -> Result<String, Failure> {
    let mut s = String::new();
    open_input(flag, path)?
        .read_to_string(&mut s)
        .map_err(|e| Failure::io(format!("{flag} {}: {e}", path.display())))?;
    Ok(s)
}

fn create_output(flag: &str, path: &Path) -> Result<Box<dyn Write>, Failure> {
    if path.as_os_str() == "-" {
        return Ok(Box::new(BufWriter::new(io::stdout().lock())));
    }
    let f = File::create(path).map_err(|e| Failure::io(format!("{flag} {}: {e}", path.display())))?;
    Ok(Box::new(BufWriter::new(f)))
}

fn load_cnf(flag: &str, path: &Path) -> Result<CnfFormula, Failure> {
    parse_dimacs(open_input(flag, path)?)
        .map_err(|e| Failure::io(format!("{flag} {}: {e}", path.display())))
}

fn external_command(value: Option<String>) -> Result<Option<String>, Failure> {
    match value {
        None => Ok(None),
        Some(cmd) if !cmd.is_empty() => Ok(Some(cmd)),
        Some(_) => match std::env::var("EDP_SOLVER") {
            Ok(cmd) if !cmd.trim().is_empty() => Ok(Some(cmd)),
            _ => Err(Failure::usage("--external: no command given and EDP_SOLVER is not set")),
        },
    }
}

fn encode_config(a: &EncodeArgs) -> Result<EncodeConfig, Failure> {
    let mut cfg = match (a.variant, a.prefix) {
        (VariantArg::Edp, None) => EncodeConfig::edp(a.bound, a.len),
        (VariantArg::Mult, None) => EncodeConfig::mult(a.bound, a.len),
        (VariantArg::Cmult, None) => EncodeConfig::cmult(a.bound, a.len),
        (VariantArg::Hybrid, Some(m)) => EncodeConfig::hybrid(a.bound, a.len, m),
        (VariantArg::Hybrid, None) => return Err(Failure::usage("--prefix is required with --variant hybrid")),
        (_, Some(_)) => return Err(Failure::usage("--prefix only applies to --variant hybrid")),
    };
    cfg.parity = a.parity;
    cfg.pivot = a.fix;
    cfg.cmult_d1 = a.cmult_d1;
    cfg.validate()
        .map_err(|e| Failure::usage(format!("invalid encoding flags: {e}")))?;
    Ok(cfg)
}

fn cmd_encode(a: EncodeArgs) -> Outcome {
    let cfg = encode_config(&a)?;
    let start = Instant::now();
    let r = encode(&cfg).map_err(|e| Failure::usage(e.to_string()))?;
    log::info!("encoded {} in {:.2?}", cfg.variant, start.elapsed());
    let mut out = create_output("-o", &a.output)?;
    write_dimacs(&r.formula, &mut out)
        .map_err(|e| Failure::io(format!("-o {}: {e}", a.output.display())))?;
    if let Some(path) = &a.map {
        write_map(&r.map, create_output("--map", path)?)
            .map_err(|e| Failure::io(format!("--map {}: {e}", path.display())))?;
    }
    let stats = format!("vars={} clauses={}", r.stats.total_vars(), r.stats.clauses);
    if a.output.as_os_str() == "-" {
        eprintln!("{stats}");
    } else {
        println!("{stats}");
    }
    Ok(0)
}

fn print_model(model: &Model) {
    let stdout = io::stdout();
    let mut w = BufWriter::new(stdout.lock());
    let lits: Vec<String> = model.lits().map(|l| l.to_dimacs().to_string()).collect();
    let _ = writeln!(w, "s SATISFIABLE");
    for chunk in lits.chunks(10) {
        let _ = writeln!(w, "v {}", chunk.join(" "));
    }
    let _ = writeln!(w, "v 0");
}

fn cmd_solve(a: SolveArgs) -> Outcome {
    let f = load_cnf("--cnf", &a.cnf)?;
    let external = external_command(a.external)?;
    let timeout = a.timeout.map(Duration::from_secs_f64);
    let cert_path = a
        .cert
        .clone()
        .or_else(|| std::env::var_os(DRUP_PATH_ENV).map(PathBuf::from));
    let start = Instant::now();
    let outcome = match &external {
        Some(cmd) => {
            let dir = a.workdir.clone().unwrap_or_else(std::env::temp_dir);
            solve_external(&f, cmd, &dir, timeout)
        }
        None => {
            let mode = match (&cert_path, a.drup) {
                (None, _) => ProofMode::None,
                (Some(_), false) => ProofMode::Rup,
                (Some(_), true) => ProofMode::Drup,
            };
            let budget = Budget {
                max_conflicts: Some(a.budget),
                max_time: timeout,
            };
            let (outcome, stats) = solve_with(&f, budget, mode);
            log::info!(
                "decisions={} conflicts={} learned={}",
                stats.decisions,
                stats.conflicts,
                stats.learned
            );
            outcome
        }
    };
    log::info!("solved in {:.2?}", start.elapsed());
    match outcome {
        SolveOutcome::Sat(model) => {
            print_model(&model);
            Ok(EXIT_SAT)
        }
        SolveOutcome::Unsat(cert) => {
            match (cert, &cert_path) {
                (Some(cert), Some(path)) => {
                    write_drup(&cert, create_output("--cert", path)?)
                        .map_err(|e| Failure::io(format!("--cert {}: {e}", path.display())))?;
                }
                (None, Some(path)) if a.cert.is_some() => {
                    log::warn!("solver produced no proof; {} not written", path.display());
                }
                _ => {}
            }
            println!("s UNSATISFIABLE");
            Ok(EXIT_UNSAT)
        }
        SolveOutcome::Unknown(reason) => {
            println!("s UNKNOWN");
            println!("c {reason}");
            Ok(0)
        }
    }
}

fn cmd_check_seq(a: CheckSeqArgs) -> Outcome {
    let text = read_text("--file", &a.file)?;
    let format = a.format.map_or_else(|| detect_format(&text), SeqFormat::from);
    let s = parse_seq(&text, format)
        .map_err(|e| Failure::io(format!("--file {}: {e}", a.file.display())))?;
    let d = discrepancy(&s);
    let mut line = format!(
        "length={} discrepancy={} class={}",
        s.len(),
        d,
        classify(&s).name()
    );
    if let Some(c) = a.bound {
        if c == 0 {
            return Err(Failure::usage("-C must be positive"));
        }
        line.push_str(&format!(" c_bounded={}", is_c_bounded(&s, c)));
    }
    println!("{line}");
    match a.bound {
        Some(c) if d > c => Ok(EXIT_REJECTED),
        _ => Ok(0),
    }
}

fn cmd_decode(a: DecodeArgs) -> Outcome {
    let map = parse_map(open_input("--cnf-map", &a.cnf_map)?)
        .map_err(|e| Failure::io(format!("--cnf-map {}: {e}", a.cnf_map.display())))?;
    let text = read_text("--model", &a.model)?;
    if text.lines().any(|l| l.trim() == "s UNSATISFIABLE") {
        return Err(Failure::io(format!("--model {}: solver reported UNSAT", a.model.display())));
    }
    let model = parse_value_lines(&text)
        .map_err(|e| Failure::io(format!("--model {}: {e}", a.model.display())))?;
    let s = decode_model(&model, &map, a.len)
        .map_err(|e| Failure::io(format!("--model {}: {e}", a.model.display())))?;
    print!("{}", render_seq(&s, a.format.into()));
    Ok(0)
}

fn cmd_verify(a: VerifyArgs) -> Outcome {
    let f = load_cnf("--cnf", &a.cnf)?;
    let cert = parse_drup(open_input("--proof", &a.proof)?)
        .map_err(|e| Failure::io(format!("--proof {}: {e}", a.proof.display())))?;
    let start = Instant::now();
    let verdict = if a.rup {
        check(&f, &strip_deletions(&cert), CheckMode::Rup)
    } else {
        check(&f, &cert, CheckMode::Drup)
    };
    log::info!("checked {} lines in {:.2?}", cert.len(), start.elapsed());
    println!("{verdict}");
    Ok(match verdict {
        Verdict::Accepted => 0,
        Verdict::Rejected { .. } => EXIT_REJECTED,
    })
}

fn cmd_oracle(a: OracleArgs) -> Outcome {
    let r = oracle_max_length(a.bound, a.class.into(), a.cap)
        .map_err(|e| Failure::usage(format!("oracle: {e}")))?;
    println!("{r}");
    Ok(0)
}

/// `C` and the last satisfiable length per class, with the instance builder.
type LongRow = (u32, &'static str, u32, fn(u32, u32) -> EncodeConfig);

fn long_rows() -> Vec<LongRow> {
    vec![
        (2, "completely-multiplicative", 246, |c, n| {
            EncodeConfig::cmult(c, n).with_parity().with_cmult_d1()
        }),
        (2, "multiplicative", 344, |c, n| EncodeConfig::mult(c, n).with_parity()),
        (2, "unconstrained", 1160, |c, n| {
            EncodeConfig::edp(c, n).with_parity().with_pivot(DEFAULT_PIVOT)
        }),
        (3, "completely-multiplicative", 127645, |c, n| {
            EncodeConfig::cmult(c, n).with_parity().with_cmult_d1()
        }),
        (3, "multiplicative", 127645, |c, n| EncodeConfig::mult(c, n).with_parity()),
    ]
}

fn cmd_summary(a: SummaryArgs) -> Outcome {
    let external = external_command(a.external)?;
    if a.long && external.is_none() {
        return Err(Failure::usage("--long needs --external (or --external with EDP_SOLVER set)"));
    }
    let mut row = vec!["C=1".to_string()];
    for (name, class) in [
        ("completely-multiplicative", SeqClass::CompletelyMultiplicative),
        ("multiplicative", SeqClass::Multiplicative),
        ("unconstrained", SeqClass::Unconstrained),
    ] {
        let r = oracle_max_length(1, class, 20).map_err(|e| Failure::usage(e.to_string()))?;
        row.push(format!("{name}={r}"));
    }
    println!("{}", row.join(" "));
    let Some(cmd) = external.filter(|_| a.long) else {
        return Ok(0);
    };
    let timeout = a.timeout.map(Duration::from_secs_f64);
    let dir = std::env::temp_dir();
    let run = |cfg: EncodeConfig| -> Result<SolveOutcome, Failure> {
        let r = encode(&cfg).map_err(|e| Failure::usage(e.to_string()))?;
        let start = Instant::now();
        let out = solve_external(&r.formula, &cmd, &dir, timeout);
        eprintln!("c {} C={} n={}: {:.1?}", cfg.variant, cfg.bound, cfg.len, start.elapsed());
        Ok(out)
    };
    let word = |o: &SolveOutcome| match o {
        SolveOutcome::Sat(_) => "SAT".to_string(),
        SolveOutcome::Unsat(_) => "UNSAT".to_string(),
        SolveOutcome::Unknown(r) => format!("UNKNOWN({r})"),
    };
    for (c, name, last, build) in long_rows() {
        let sat = run(build(c, last))?;
        let unsat = run(build(c, last + 1))?;
        let confirmed = sat.is_sat() && unsat.is_unsat();
        println!(
            "C={c} {name}={last} n={last}:{} n={}:{} {}",
            word(&sat),
            last + 1,
            word(&unsat),
            if confirmed { "confirmed" } else { "unconfirmed" }
        );
    }
    let hybrid = EncodeConfig::hybrid(3, 130_000, 127_600).with_parity();
    let out = run(hybrid)?;
    println!("C=3 unconstrained>130000 hybrid(127600):{}", word(&out));
    Ok(0)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Encode(a) => cmd_encode(a),
        Command::Solve(a) => cmd_solve(a),
        Command::CheckSeq(a) => cmd_check_seq(a),
        Command::Decode(a) => cmd_decode(a),
        Command::VerifyProof(a) => cmd_verify(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Summary(a) => cmd_summary(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("edp: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
