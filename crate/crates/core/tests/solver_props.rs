mod common;

use common::{is_sat_brute, naive_rup, random_kcnf};
use edp_core::cnf::{decode_model, CnfFormula, Lit};
use edp_core::encoder::{encode, EncodeConfig};
use edp_core::proofcheck::{
    check, parse_drup, strip_deletions, to_drup_string, CheckMode, ProofLine, RejectReason,
    Verdict,
};
use edp_core::seqcore::{classify, discrepancy, SeqClass};
use edp_core::solver::{solve, solve_with, Budget, ProofMode, SolveOutcome};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_formula(rng: &mut ChaCha8Rng) -> CnfFormula {
    let n = rng.gen_range(3..=20);
    let ratio = rng.gen_range(3.0..7.0);
    let k = rng.gen_range(2..=3);
    random_kcnf(rng, n, (f64::from(n) * ratio) as usize, k)
}

#[test]
fn solver_agrees_with_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut sat, mut unsat) = (0, 0);
    for _ in 0..400 {
        let f = random_formula(&mut rng);
        let expected = is_sat_brute(&f);
        match solve(&f, Budget::default(), true) {
            SolveOutcome::Sat(m) => {
                assert!(expected);
                assert!(f.is_satisfied_by(m.values()));
                sat += 1;
            }
            SolveOutcome::Unsat(Some(cert)) => {
                assert!(!expected);
                assert_eq!(check(&f, &cert, CheckMode::Rup), Verdict::Accepted);
                unsat += 1;
            }
            other => panic!("{other:?}"),
        }
    }
    assert!(sat > 50 && unsat > 50, "sat={sat} unsat={unsat}");
}

/// Replays a RUP certificate with the naive oracle; returns the first Add
/// (0-based) that is not RUP.
fn first_non_rup(f: &CnfFormula, lines: &[ProofLine]) -> Option<usize> {
    let mut db: Vec<Vec<Lit>> = f.clauses().map(<[Lit]>::to_vec).collect();
    let vars = f.num_vars() as usize;
    for (i, line) in lines.iter().enumerate() {
        if let ProofLine::Add(c) = line {
            if !naive_rup(&db, c, vars) {
                return Some(i);
            }
            db.push(c.clone());
        }
    }
    None
}

#[test]
fn mutated_certificates_are_rejected_where_they_break() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut mutated = 0;
    while mutated < 100 {
        let f = random_formula(&mut rng);
        let SolveOutcome::Unsat(Some(cert)) = solve(&f, Budget::default(), true) else {
            continue;
        };
        assert_eq!(first_non_rup(&f, &cert.lines), None);
        let mut bad = cert.clone();
        let i = rng.gen_range(0..bad.lines.len());
        let ProofLine::Add(c) = &mut bad.lines[i] else {
            continue;
        };
        if c.is_empty() {
            continue;
        }
        let j = rng.gen_range(0..c.len());
        c[j] = !c[j];
        let verdict = check(&f, &bad, CheckMode::Rup);
        match first_non_rup(&f, &bad.lines) {
            Some(line) => assert_eq!(
                verdict,
                Verdict::Rejected {
                    line: line + 1,
                    reason: RejectReason::NotRup
                }
            ),
            None => assert_eq!(verdict, Verdict::Accepted),
        }
        mutated += 1;
    }
}

#[test]
fn drup_certificates_round_trip_and_strip() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (mut certs, mut with_deletions) = (0, 0);
    while certs < 200 {
        let f = random_formula(&mut rng);
        let (SolveOutcome::Unsat(Some(cert)), _) = solve_with(&f, Budget::default(), ProofMode::Drup) else {
            continue;
        };
        certs += 1;
        if cert.has_deletions() {
            with_deletions += 1;
        }
        let text = to_drup_string(&cert);
        assert_eq!(parse_drup(text.as_bytes()).unwrap(), cert);
        assert_eq!(check(&f, &cert, CheckMode::Drup), Verdict::Accepted);
        assert_eq!(check(&f, &strip_deletions(&cert), CheckMode::Rup), Verdict::Accepted);
    }
    assert!(with_deletions > 0);
}

#[test]
fn discrepancy_one_bound() {
    let r = encode(&EncodeConfig::edp(1, 11)).unwrap();
    let SolveOutcome::Sat(m) = solve(&r.formula, Budget::default(), false) else {
        panic!("edp(1,11) must be satisfiable");
    };
    let s = decode_model(&m, &r.map, 11).unwrap();
    assert!(discrepancy(&s) <= 1);

    let r = encode(&EncodeConfig::edp(1, 12)).unwrap();
    let SolveOutcome::Unsat(Some(cert)) = solve(&r.formula, Budget::default(), true) else {
        panic!("edp(1,12) must be unsatisfiable");
    };
    assert_eq!(check(&r.formula, &cert, CheckMode::Rup), Verdict::Accepted);
}

#[test]
fn cmult_model_decodes_to_completely_multiplicative() {
    let n = 500;
    let r = encode(&EncodeConfig::cmult(3, n)).unwrap();
    let SolveOutcome::Sat(m) = solve(&r.formula, Budget::default(), false) else {
        panic!("CMult(3, 500) must be satisfiable");
    };
    let s = decode_model(&m, &r.map, n).unwrap();
    assert_eq!(classify(&s), SeqClass::CompletelyMultiplicative);
    assert!(discrepancy(&s) <= 3);
}

#[test]
fn mult_model_decodes_to_multiplicative() {
    let n = 300;
    let r = encode(&EncodeConfig::mult(2, n)).unwrap();
    let SolveOutcome::Sat(m) = solve(&r.formula, Budget::default(), false) else {
        panic!("Mult(2, 300) must be satisfiable");
    };
    let s = decode_model(&m, &r.map, n).unwrap();
    assert!(classify(&s) >= SeqClass::Multiplicative);
    assert!(discrepancy(&s) <= 2);
}

#[test]
fn multiplicative_bounds_for_discrepancy_two() {
    for (cfg, last_sat) in [(EncodeConfig::cmult as fn(u32, u32) -> EncodeConfig, 246), (EncodeConfig::mult, 344)] {
        let sat = cfg(2, last_sat);
        assert!(solve(&encode(&sat).unwrap().formula, Budget::default(), false).is_sat());
        let unsat = encode(&cfg(2, last_sat + 1)).unwrap().formula;
        let SolveOutcome::Unsat(Some(cert)) = solve(&unsat, Budget::default(), true) else {
            panic!("length {} must be impossible", last_sat + 1);
        };
        assert_eq!(check(&unsat, &cert, CheckMode::Rup), Verdict::Accepted);
    }
}
