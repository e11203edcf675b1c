use std::process::Command;

use sqadd_cli::{run, Command as Cmd, Format, Payload, Report, RunConfig};
use sqadd_core::rational::q_frac;

fn sqadd(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sqadd"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn config(command: Cmd) -> RunConfig {
    RunConfig {
        command,
        format: Format::Json,
        out: None,
    }
}

fn round_trip(report: &Report) {
    let text = report.to_json().unwrap();
    let back: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(&back, report);
}

#[test]
fn json_reports_round_trip() {
    let commands = [
        Cmd::Dubouis { k: 4, limit: 100 },
        Cmd::Splits { n: 33 },
        Cmd::Verify {
            family: "case3".parse().unwrap(),
            y: Some(q_frac(-3, 2)),
            w: Some(q_frac(7, 1)),
            v: None,
            bound: 300,
            jobs: 2,
        },
        Cmd::Verify {
            family: "square".parse().unwrap(),
            y: None,
            w: None,
            v: None,
            bound: 30,
            jobs: 1,
        },
        Cmd::Deduce {
            bound: 60,
            pivots: vec![],
        },
        Cmd::CheckTheorem {
            bound: 60,
            verify_bound: 200,
            seed: 1,
            jobs: 2,
        },
    ];
    for command in commands {
        let c = config(command);
        c.validate().unwrap();
        round_trip(&run(&c).unwrap());
    }
}

#[test]
fn envelope_is_shared() {
    for args in [
        &["splits", "--n", "7"][..],
        &["dubouis", "--k", "5", "--limit", "40"],
    ] {
        let (status, stdout, _) = sqadd(&[args, &["--format", "json"]].concat());
        assert_eq!(status, 0);
        let value: serde_json::Value = serde_json::from_str(&stdout).unwrap();
        for key in ["config", "payload", "timing", "version"] {
            assert!(value.get(key).is_some(), "{key} missing");
        }
    }
}

#[test]
fn dubouis_lists_the_sixteen_exceptions() {
    let (status, stdout, _) = sqadd(&["dubouis", "--k", "4", "--limit", "100", "--format", "json"]);
    assert_eq!(status, 0);
    let report: Report = serde_json::from_str(&stdout).unwrap();
    let Payload::Exceptions {
        exceptions, oracle, ..
    } = report.payload
    else {
        panic!()
    };
    assert_eq!(
        exceptions,
        vec![1, 2, 3, 5, 6, 8, 9, 11, 14, 17, 24, 29, 32, 41, 56, 96]
    );
    assert!(oracle.mismatches.is_empty());
}

#[test]
fn exit_statuses() {
    assert_eq!(
        sqadd(&["verify", "--family", "identity", "--bound", "2000"]).0,
        0
    );
    assert_eq!(
        sqadd(&["verify", "--family", "square", "--bound", "50"]).0,
        2
    );
    assert_eq!(sqadd(&["--help"]).0, 0);
    assert_eq!(sqadd(&["--version"]).0, 0);
    assert_eq!(sqadd(&["nonsense"]).0, 1);
    assert_eq!(sqadd(&["verify", "--family", "nonsense"]).0, 1);
}

#[test]
fn invalid_parameters_name_the_constraint() {
    let cases: [(&[&str], &str); 6] = [
        (
            &["verify", "--family", "case3", "--y", "0", "--w", "1"],
            "y must be nonzero",
        ),
        (&["verify", "--family", "case4"], "missing parameter w"),
        (
            &["verify", "--family", "identity", "--v", "2"],
            "takes no parameter v",
        ),
        (&["deduce", "--bound", "3"], "at least 4"),
        (&["deduce", "--pivots", "f6"], "not a prime power"),
        (
            &["dubouis", "--k", "3", "--limit", "10"],
            "k must be at least 4",
        ),
    ];
    for (args, needle) in cases {
        let (status, _, stderr) = sqadd(args);
        assert_eq!(status, 1, "{args:?}");
        assert!(stderr.contains(needle), "{args:?}: {stderr}");
    }
}

#[test]
fn out_writes_a_file() {
    let path = std::env::temp_dir().join(format!("sqadd-out-{}.json", std::process::id()));
    let (status, stdout, _) = sqadd(&[
        "splits",
        "--n",
        "50",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(status, 0);
    assert!(stdout.is_empty());
    let report: Report = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    let Payload::Splits { splits, .. } = report.payload else {
        panic!()
    };
    let pairs: Vec<(u64, u64)> = splits.iter().map(|f| (f.s, f.t)).collect();
    assert_eq!(pairs, vec![(5, 45), (10, 40), (13, 37), (18, 32), (25, 25)]);
}

#[test]
fn text_reports_cite_identities() {
    let (status, stdout, _) = sqadd(&["deduce", "--bound", "60"]);
    assert_eq!(status, 0);
    assert!(stdout.contains("f(1^2+1^2+2^2+2^2) = f(2) f(5) = f(2) + f(8)"));
    assert!(stdout.contains("case f5 = 0:"));
}

#[test]
fn custom_pivots_are_honoured() {
    let (status, stdout, _) = sqadd(&[
        "deduce", "--bound", "60", "--pivots", "f3,f5", "--format", "json",
    ]);
    assert_eq!(status, 0);
    let report: Report = serde_json::from_str(&stdout).unwrap();
    let Payload::Deduce(d) = report.payload else {
        panic!()
    };
    assert_eq!(d.pivots, vec![sqadd_core::Atom(3), sqadd_core::Atom(5)]);
    assert!(d.leaves.iter().all(|l| l.replay_matches));
}
