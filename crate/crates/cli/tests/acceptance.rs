//! The nine acceptance criteria, one test each. Every test prints a single
//! `PASS`/`FAIL` line before asserting.
//!
//! Run with `cargo test -p sqadd-cli --test acceptance -- --nocapture --test-threads 1`.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sqadd_cli::{Payload, Report, TheoremReport};
use sqadd_core::multfn::{
    check_functional_equation, check_multiplicativity, make_family, FamilySpec, FamilyTag,
};
use sqadd_core::rational::Q;
use sqadd_core::repr::{brute_k_squares, dubouis_predict};
use sqadd_core::solver::{exception_witness, reduced_instance, replay, Knowledge, Outcome, Step};
use sqadd_core::{Atom, Poly};

fn report(criterion: u32, name: &str, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("[{verdict}] criterion {criterion}: {name}: {detail}");
    assert!(ok, "criterion {criterion} ({name}) failed: {detail}");
}

/// Runs the binary with `--format json` and returns the exit status and
/// parsed report.
fn sqadd(args: &[&str]) -> (i32, Option<Report>, Duration) {
    let start = Instant::now();
    let output = Command::new(env!("CARGO_BIN_EXE_sqadd"))
        .args(args)
        .args(["--format", "json"])
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();
    let parsed = serde_json::from_slice(&output.stdout).ok();
    (output.status.code().unwrap_or(-1), parsed, elapsed)
}

fn int(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn path(spec: &[(u64, bool)]) -> Vec<(Atom, bool)> {
    spec.iter().map(|&(n, nz)| (Atom(n), nz)).collect()
}

fn deduce(bound: &str) -> sqadd_cli::DeduceReport {
    let (status, report, _) = sqadd(&["deduce", "--bound", bound]);
    assert_eq!(status, 0);
    match report.expect("json report").payload {
        Payload::Deduce(d) => *d,
        other => panic!("unexpected payload {other:?}"),
    }
}

fn theorem(bound: &str) -> (i32, TheoremReport, Duration) {
    let (status, report, elapsed) = sqadd(&["check-theorem", "--bound", bound]);
    match report.expect("json report").payload {
        Payload::Theorem(t) => (status, *t, elapsed),
        other => panic!("unexpected payload {other:?}"),
    }
}

#[test]
fn criterion_1_closed_form_matches_oracle() {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    for k in 4..=12 {
        for n in 1..=5000 {
            if dubouis_predict(n, k).unwrap() != brute_k_squares(n, k) {
                mismatches.push((n, k));
            }
        }
    }
    let elapsed = start.elapsed();
    report(
        1,
        "closed-form exceptions vs brute force, n <= 5000, k = 4..12",
        mismatches.is_empty() && elapsed < Duration::from_secs(60),
        &format!("{} mismatches in {:.2?}", mismatches.len(), elapsed),
    );
}

#[test]
fn criterion_2_nonzero_branch_derivation() {
    let d = deduce("100");
    let leaf = d
        .tree
        .leaves()
        .into_iter()
        .find(|l| l.path == path(&[(5, true)]))
        .expect("f5 != 0 leaf");
    let k = replay(&leaf.ledger).unwrap();
    let split = leaf
        .ledger
        .steps
        .iter()
        .position(|s| {
            matches!(
                s,
                Step::Assume {
                    atom: Atom(5),
                    nonzero: true,
                    ..
                }
            )
        })
        .expect("split on f5");
    let before = replay(&sqadd_core::solver::DerivationLedger {
        steps: leaf.ledger.steps[..split].to_vec(),
    })
    .unwrap();
    let pinned_after_split = [2, 3, 5]
        .iter()
        .all(|&n| before.constant_value(n).is_none());
    let values = [2, 3, 5]
        .iter()
        .all(|&n| k.constant_value(n) == Some(int(n as i64)));
    let table = (1..=21).all(|n| k.constant_value(n) == Some(int(n as i64)));
    report(
        2,
        "f5 != 0 branch derives f(2)=2, f(3)=3, f(5)=5 and f(n)=n for n <= 21",
        pinned_after_split && values && table,
        &format!("open before split: {pinned_after_split}, values: {values}, table to 21: {table}"),
    );
}

#[test]
fn criterion_3_zero_branch_derivation() {
    let d = deduce("100");
    let z0 = d.tree.ledger_to(&path(&[(5, false)])).unwrap();
    let k = replay(&z0).unwrap();
    let vanish = [2, 17, 19, 25]
        .iter()
        .all(|&n| k.constant_value(n) == Some(int(0)));
    let f3f11: Poly = "f3*f11".parse().unwrap();
    let node = d.tree.node(&path(&[(5, false)])).unwrap();
    let stuck_on_f3f11 = matches!(&node.outcome, Outcome::Branch { stuck, .. }
        if stuck.iter().any(|c| c.poly.monic() == f3f11));
    let sub = replay(&d.tree.ledger_to(&path(&[(5, false), (3, false)])).unwrap()).unwrap();
    let n99 = reduced_instance(&sub, 99, 2, 97).monic();
    let f99 = n99 == "f9*f11".parse::<Poly>().unwrap();
    report(
        3,
        "f5 = 0 branch: f(2)=f(17)=f(19)=f(25)=0, f3*f11 = 0, and n = 99 gives f9*f11 = 0 under f3 = 0",
        vanish && stuck_on_f3f11 && f99,
        &format!("zeros: {vanish}, f3*f11 pending: {stuck_on_f3f11}, n=99 instance: {n99}"),
    );
}

#[test]
fn criterion_4_theorem_reproduction() {
    let (status, t, elapsed) = theorem("100");
    let matched: BTreeSet<FamilyTag> = t.matched.iter().copied().collect();
    let all = FamilyTag::THEOREM.iter().all(|tag| matched.contains(tag));
    let f3f9_leaf = t
        .leaves
        .iter()
        .any(|l| l.free_atoms == vec![Atom(3), Atom(9)]);
    let identity_leaf = t.leaves.iter().any(|l| {
        l.instances.iter().any(|i| {
            i.family
                .as_ref()
                .is_some_and(|f| f.tag == FamilyTag::Identity)
        })
    });
    let ok = status == 0
        && all
        && t.missed.is_empty()
        && f3f9_leaf
        && identity_leaf
        && t.contradiction_leaves == 0
        && elapsed < Duration::from_secs(120);
    report(
        4,
        "check-theorem --bound 100 matches all five families",
        ok,
        &format!(
            "exit {status}, matched {:?}, missed {:?}, free f3/f9 leaf {f3f9_leaf}, contradictions {}, {:.2?}",
            t.matched, t.missed, t.contradiction_leaves, elapsed
        ),
    );
}

#[test]
fn criterion_5_families_verify_to_2000() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut draw = || {
        let mut num = 0i64;
        while num == 0 {
            num = rng.random_range(-30..=30);
        }
        Q::new(num.into(), rng.random_range(1i64..=7).into())
    };
    let mut failures = Vec::new();
    let mut checked = 0;
    for tag in FamilyTag::THEOREM {
        for _ in 0..10 {
            let spec = match tag {
                FamilyTag::Case3 => FamilySpec::case3(draw(), draw()),
                FamilyTag::Case4 => FamilySpec::case4(draw()),
                FamilyTag::Case5 => FamilySpec::case5(draw()),
                other => FamilySpec::plain(other),
            };
            let f = make_family(&spec, 2000).unwrap();
            let eq = check_functional_equation(&f, 2000).unwrap();
            let mult = check_multiplicativity(&f.tabulate()).unwrap();
            if !eq.is_empty() || !mult.is_empty() {
                failures.push(spec.to_string());
            }
            checked += 1;
        }
    }
    report(
        5,
        "five families x 10 parameter draws, bound 2000",
        failures.is_empty(),
        &format!("{checked} checks, failures {failures:?}"),
    );
}

#[test]
fn criterion_6_exception_witnesses() {
    let state = Knowledge::seeded(100, &[]);
    let identity = make_family(&FamilySpec::identity(), 100).unwrap();
    let expected = [
        (29, "f(2)·f(17) = f(5) + f(29)"),
        (41, "f(3)·f(17) = f(10) + f(41)"),
        (32, "f(8)·f(5) = f(8) + f(32)"),
        (24, "f(24) = f(3)·f(8)"),
        (56, "f(56) = f(7)·f(8)"),
    ];
    let mut bad = Vec::new();
    for (n, text) in expected {
        let w = exception_witness(n, &state).unwrap();
        if w.identity() != text || !w.holds(&identity).unwrap() {
            bad.push(n);
        }
    }
    report(
        6,
        "witness identities for 29, 41, 32, 24, 56",
        bad.is_empty(),
        &format!("bad: {bad:?}"),
    );
}

#[test]
fn criterion_7_square_is_rejected() {
    let (status, r, _) = sqadd(&["verify", "--family", "square", "--bound", "100"]);
    let first = match r.map(|r| r.payload) {
        Some(Payload::Verify(v)) => v.equation_violations.first().cloned(),
        _ => None,
    };
    let at_four = first
        .as_ref()
        .is_some_and(|v| v.n == 4 && v.lhs == int(16) && v.rhs == int(8));
    report(
        7,
        "f(n) = n^2 violates at n = 4 (16 vs 8), exit 2",
        at_four && status == 2,
        &format!("exit {status}, first violation {first:?}"),
    );
}

#[test]
fn criterion_8_f3_only_is_computed() {
    let (_, t, _) = theorem("100");
    let finding = t.extras.iter().find(|e| {
        e.family
            .as_ref()
            .is_some_and(|f| f.tag == FamilyTag::CaseF3Only)
    });
    let recorded = match (&t.f3_only, finding) {
        (Some(check), Some(finding)) => {
            check.bound == 2000
                && finding.kind == "extra_family"
                && finding.passes_verification == check.passes
        }
        _ => false,
    };
    // independent recomputation of the outcome the report claims
    let f = make_family(&FamilySpec::case_f3_only(int(7)), 2000).unwrap();
    let recomputed = check_functional_equation(&f, 2000).unwrap().is_empty()
        && check_multiplicativity(&f.tabulate()).unwrap().is_empty();
    let consistent = t.f3_only.as_ref().is_some_and(|c| c.passes == recomputed);
    report(
        8,
        "check-theorem records the f(3)-only family and its verification at 2000",
        recorded && consistent,
        &format!(
            "recorded: {recorded}, report says passes = {:?}, recomputed = {recomputed}",
            t.f3_only.as_ref().map(|c| c.passes)
        ),
    );
}

#[test]
fn criterion_9_ledgers_replay() {
    let mut mismatched = Vec::new();
    let mut count = 0;
    for bound in ["100", "200"] {
        let d = deduce(bound);
        for leaf in d.tree.leaves() {
            count += 1;
            let k = replay(&leaf.ledger);
            let same = match (leaf.outcome, &k) {
                (Outcome::Solution(s), Ok(k)) => {
                    k.table() == s.table && k.free_atoms() == s.free_atoms
                }
                (Outcome::Contradiction { step, .. }, Ok(k)) => k.contradiction == Some(*step),
                _ => false,
            };
            if !same {
                mismatched.push(format!("{bound}: {}", leaf.describe_path()));
            }
        }
    }
    report(
        9,
        "replaying each leaf ledger reproduces its table",
        mismatched.is_empty(),
        &format!("{count} leaves, mismatches {mismatched:?}"),
    );
}
