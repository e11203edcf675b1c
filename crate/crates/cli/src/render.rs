//! Plain-text report bodies.

use std::fmt::Write;

use sqadd_core::multfn::ViolationSite;
use sqadd_core::rational::format_q;
use sqadd_core::solver::{CaseTree, Outcome};
use sqadd_core::Atom;

use crate::theorem::{FamilyCheck, TheoremReport};
use crate::{DeduceReport, Payload, VerifyReport};

fn path_text(path: &[(Atom, bool)]) -> String {
    if path.is_empty() {
        return "root".into();
    }
    path.iter()
        .map(|(a, nz)| {
            if *nz {
                format!("{a}!=0")
            } else {
                format!("{a}=0")
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn atoms_text(atoms: &[Atom]) -> String {
    let names: Vec<String> = atoms.iter().map(Atom::to_string).collect();
    format!("{{{}}}", names.join(", "))
}

pub fn payload(out: &mut String, payload: &Payload) {
    match payload {
        Payload::Exceptions {
            k,
            limit,
            exceptions,
            oracle,
        } => {
            let list: Vec<String> = exceptions.iter().map(u64::to_string).collect();
            let _ = writeln!(
                out,
                "not a sum of {k} nonzero squares, n <= {limit} ({}):",
                exceptions.len()
            );
            let _ = writeln!(out, "  {}", list.join(", "));
            if oracle.mismatches.is_empty() {
                let _ = writeln!(
                    out,
                    "brute-force oracle agrees for n <= {}",
                    oracle.checked_up_to
                );
            } else {
                let _ = writeln!(
                    out,
                    "brute-force oracle DISAGREES at {:?}",
                    oracle.mismatches
                );
            }
        }
        Payload::Splits { n, splits } => {
            let _ = writeln!(out, "{n} has {} four-splits:", splits.len());
            for s in splits {
                let _ = writeln!(out, "  {n} = {} + {}", s.s, s.t);
            }
        }
        Payload::Verify(v) => verify(out, v),
        Payload::Deduce(d) => deduce(out, d),
        Payload::Theorem(t) => theorem(out, t),
    }
}

fn verify(out: &mut String, v: &VerifyReport) {
    let _ = writeln!(out, "family {} up to {}", v.family, v.bound);
    let _ = writeln!(
        out,
        "  equation violations: {}",
        v.equation_violations.len()
    );
    let _ = writeln!(
        out,
        "  multiplicativity violations: {}",
        v.multiplicativity_violations.len()
    );
    for viol in v
        .equation_violations
        .iter()
        .chain(&v.multiplicativity_violations)
        .take(10)
    {
        let _ = writeln!(
            out,
            "  n = {}, {}: lhs {} != rhs {}",
            viol.n,
            site_text(&viol.site),
            format_q(&viol.lhs),
            format_q(&viol.rhs)
        );
    }
}

fn site_text(site: &ViolationSite) -> String {
    match site {
        ViolationSite::Split { s, t } => format!("f({s}) + f({t})"),
        ViolationSite::Coprime { m, m2 } => format!("f({m}) f({m2})"),
    }
}

fn tree(out: &mut String, node: &CaseTree, indent: usize) {
    let pad = " ".repeat(indent);
    for step in &node.steps {
        let _ = writeln!(out, "{pad}{step}");
    }
    match &node.outcome {
        Outcome::Branch {
            atom,
            stuck,
            zero,
            nonzero,
        } => {
            let polys: Vec<String> = stuck.iter().map(|c| format!("{} = 0", c.poly)).collect();
            let _ = writeln!(out, "{pad}stuck on: {}", polys.join("; "));
            let _ = writeln!(out, "{pad}case {atom} = 0:");
            tree(out, zero, indent + 2);
            let _ = writeln!(out, "{pad}case {atom} != 0:");
            tree(out, nonzero, indent + 2);
        }
        Outcome::Solution(s) => {
            let _ = writeln!(
                out,
                "{pad}=> solution, free atoms {}",
                atoms_text(&s.free_atoms)
            );
            let shown: Vec<String> = s
                .table
                .iter()
                .take(30)
                .map(|(n, p)| format!("f({n})={p}"))
                .collect();
            let _ = writeln!(out, "{pad}   {}", shown.join(" "));
        }
        Outcome::Contradiction { step, detail } => {
            let _ = writeln!(out, "{pad}=> contradiction at step {step}: {detail}");
        }
        Outcome::Incomplete { depth, pending } => {
            let _ = writeln!(
                out,
                "{pad}=> incomplete at depth {depth}, {} constraints pending",
                pending.len()
            );
        }
    }
}

fn deduce(out: &mut String, d: &DeduceReport) {
    let _ = writeln!(
        out,
        "deduction up to {} with pivots {}",
        d.bound,
        atoms_text(&d.pivots)
    );
    tree(out, &d.tree, 2);
    let _ = writeln!(out, "leaves:");
    for l in &d.leaves {
        let _ = writeln!(
            out,
            "  [{}] {}, free {}, {} steps, replay {}",
            path_text(&l.path),
            l.outcome,
            atoms_text(&l.free_atoms),
            l.ledger_steps,
            if l.replay_matches { "ok" } else { "MISMATCH" }
        );
    }
}

fn check_text(c: &FamilyCheck) -> String {
    let verdict = if c.passes { "passes" } else { "FAILS" };
    let mut s = format!("{verdict} to {}", c.bound);
    if let Some(v) = &c.first_violation {
        let _ = write!(
            s,
            " (first violation at n = {}: {} != {})",
            v.n,
            format_q(&v.lhs),
            format_q(&v.rhs)
        );
    }
    s
}

fn theorem(out: &mut String, t: &TheoremReport) {
    let _ = writeln!(
        out,
        "leaves of the deduction up to {} (verification to {}):",
        t.bound, t.verify_bound
    );
    for leaf in &t.leaves {
        let _ = writeln!(
            out,
            "  [{}] {}, free {}",
            path_text(&leaf.path),
            leaf.outcome,
            atoms_text(&leaf.free_atoms)
        );
        for i in &leaf.instances {
            let name = i
                .family
                .as_ref()
                .map_or("unnamed".to_string(), ToString::to_string);
            let _ = writeln!(
                out,
                "    zero {} -> {name}: {}",
                atoms_text(&i.zero_atoms),
                check_text(&i.check)
            );
        }
    }
    let names = |tags: &[sqadd_core::FamilyTag]| {
        tags.iter().map(|t| t.name()).collect::<Vec<_>>().join(", ")
    };
    let _ = writeln!(out, "matched: {}", names(&t.matched));
    let _ = writeln!(
        out,
        "missed: {}",
        if t.missed.is_empty() {
            "none".into()
        } else {
            names(&t.missed)
        }
    );
    let _ = writeln!(
        out,
        "contradiction leaves: {}, incomplete leaves: {}",
        t.contradiction_leaves, t.incomplete_leaves
    );
    let _ = writeln!(
        out,
        "ledger replay: {}",
        if t.replay_ok { "ok" } else { "MISMATCH" }
    );
    for e in &t.extras {
        let name = e
            .family
            .as_ref()
            .map_or("unnamed".to_string(), ToString::to_string);
        let _ = writeln!(
            out,
            "finding: {} [{}] {name}, verification {} to {}",
            e.kind,
            path_text(&e.path),
            if e.passes_verification {
                "passes"
            } else {
                "fails"
            },
            e.verified_to
        );
    }
    match &t.f3_only {
        Some(c) => {
            let _ = writeln!(out, "f(3)-only function: {}", check_text(c));
        }
        None => {
            let _ = writeln!(out, "f(3)-only function: not produced by any leaf");
        }
    }
}
