//! Matching case-tree leaves against the known solution families.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use sqadd_core::multfn::{
    check_functional_equation, check_multiplicativity, identify_family, make_family, FamilySpec,
    FamilyTag, Violation,
};
use sqadd_core::rational::Q;
use sqadd_core::solver::{Outcome, SolutionFamily};
use sqadd_core::Atom;

use crate::{deduce, verify_family, CliError};

/// Free atoms beyond this many are not enumerated pattern by pattern.
const MAX_PATTERN_ATOMS: usize = 10;

/// Verification of one concrete function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCheck {
    /// `None` when the table matched no named family and was checked as is.
    pub family: Option<FamilySpec>,
    pub bound: u64,
    pub equation_violations: usize,
    pub multiplicativity_violations: usize,
    pub first_violation: Option<Violation>,
    pub passes: bool,
}

/// One zero/nonzero pattern of a leaf's free atoms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceMatch {
    pub zero_atoms: Vec<Atom>,
    pub nonzero_atoms: Vec<Atom>,
    pub family: Option<FamilySpec>,
    /// The named family, built independently, has the same table as the leaf.
    pub agrees_with_leaf: bool,
    pub check: FamilyCheck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafMatch {
    pub path: Vec<(Atom, bool)>,
    pub outcome: String,
    pub free_atoms: Vec<Atom>,
    pub instances: Vec<InstanceMatch>,
}

/// A leaf or family outside the five-family list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    /// `extra_family` or `extra_leaf`.
    pub kind: String,
    pub path: Vec<(Atom, bool)>,
    pub family: Option<FamilySpec>,
    pub passes_verification: bool,
    pub verified_to: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub bound: u64,
    pub verify_bound: u64,
    pub seed: u64,
    pub leaves: Vec<LeafMatch>,
    pub matched: Vec<FamilyTag>,
    pub missed: Vec<FamilyTag>,
    pub extras: Vec<Finding>,
    pub contradiction_leaves: usize,
    pub incomplete_leaves: usize,
    pub replay_ok: bool,
    /// Verification of the `f(3)`-only function when some leaf produces it.
    pub f3_only: Option<FamilyCheck>,
}

impl TheoremReport {
    /// No family missed, no leaf left incomplete, every ledger replays, and
    /// every instance of a listed family verifies.
    pub fn is_clean(&self) -> bool {
        self.missed.is_empty()
            && self.incomplete_leaves == 0
            && self.replay_ok
            && self.leaves.iter().flat_map(|l| &l.instances).all(|i| {
                i.agrees_with_leaf
                    && !i
                        .family
                        .as_ref()
                        .is_some_and(|f| FamilyTag::THEOREM.contains(&f.tag) && !i.check.passes)
            })
    }
}

fn nonzero_sample(rng: &mut ChaCha8Rng) -> Q {
    let mut num = 0i64;
    while num == 0 {
        num = rng.random_range(-9..=9);
    }
    Q::new(num.into(), rng.random_range(1i64..=5).into())
}

impl FamilyCheck {
    fn new(
        family: Option<FamilySpec>,
        bound: u64,
        equation: &[Violation],
        multiplicative: &[Violation],
    ) -> Self {
        FamilyCheck {
            family,
            bound,
            equation_violations: equation.len(),
            multiplicativity_violations: multiplicative.len(),
            first_violation: equation.iter().chain(multiplicative).min().cloned(),
            passes: equation.is_empty() && multiplicative.is_empty(),
        }
    }
}

fn instances(
    solution: &SolutionFamily,
    rng: &mut ChaCha8Rng,
    verify_bound: u64,
    jobs: usize,
) -> Result<Vec<InstanceMatch>, CliError> {
    let required: BTreeSet<Atom> = solution.nonzero_free().into_iter().collect();
    let optional: Vec<Atom> = solution
        .free_atoms
        .iter()
        .copied()
        .filter(|a| !required.contains(a))
        .collect();
    if optional.len() > MAX_PATTERN_ATOMS {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for mask in 0u32..(1 << optional.len()) {
        let zero: Vec<Atom> = optional
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, a)| *a)
            .collect();
        let mut point = BTreeMap::new();
        for a in &solution.free_atoms {
            let value = if zero.contains(a) {
                Q::from_integer(0.into())
            } else {
                nonzero_sample(rng)
            };
            point.insert(*a, value);
        }
        let Some(table) = solution.instantiate(&point) else {
            continue;
        };
        let family = identify_family(&table);
        let (agrees_with_leaf, check) = match &family {
            Some(spec) => {
                let rebuilt = make_family(spec, solution.bound)?.tabulate();
                let report = verify_family(spec, verify_bound, jobs)?;
                let check = FamilyCheck::new(
                    Some(spec.clone()),
                    verify_bound,
                    &report.equation_violations,
                    &report.multiplicativity_violations,
                );
                (rebuilt == table, check)
            }
            // unnamed tables are only known up to the deduction bound
            None => {
                let equation = check_functional_equation(&table, solution.bound)?;
                let multiplicative = check_multiplicativity(&table)?;
                (
                    true,
                    FamilyCheck::new(None, solution.bound, &equation, &multiplicative),
                )
            }
        };
        out.push(InstanceMatch {
            nonzero_atoms: solution
                .free_atoms
                .iter()
                .copied()
                .filter(|a| !zero.contains(a))
                .collect(),
            zero_atoms: zero,
            family,
            agrees_with_leaf,
            check,
        });
    }
    Ok(out)
}

/// Deduces at `bound` with the default pivots, instantiates every solution
/// leaf on each zero/nonzero pattern of its free atoms, names the resulting
/// functions, and verifies them up to `verify_bound`.
pub fn check_theorem(
    bound: u64,
    verify_bound: u64,
    seed: u64,
    jobs: usize,
) -> Result<TheoremReport, CliError> {
    let deduced = deduce(bound, &[])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut leaves = Vec::new();
    let mut extras = Vec::new();
    let mut found: BTreeSet<FamilyTag> = BTreeSet::new();
    let mut f3_only = None;
    for leaf in deduced.tree.leaves() {
        let Outcome::Solution(solution) = leaf.outcome else {
            leaves.push(LeafMatch {
                path: leaf.path.clone(),
                outcome: deduced_outcome(leaf.outcome),
                free_atoms: Vec::new(),
                instances: Vec::new(),
            });
            continue;
        };
        let matches = instances(solution, &mut rng, verify_bound, jobs)?;
        let mut named_theorem_family = false;
        for m in &matches {
            match &m.family {
                Some(spec) if FamilyTag::THEOREM.contains(&spec.tag) => {
                    found.insert(spec.tag);
                    named_theorem_family = true;
                }
                family => {
                    if family
                        .as_ref()
                        .is_some_and(|f| f.tag == FamilyTag::CaseF3Only)
                        && f3_only.is_none()
                    {
                        f3_only = Some(m.check.clone());
                    }
                    extras.push(Finding {
                        kind: "extra_family".into(),
                        path: leaf.path.clone(),
                        family: family.clone(),
                        passes_verification: m.check.passes,
                        verified_to: m.check.bound,
                    });
                }
            }
        }
        if !named_theorem_family {
            extras.push(Finding {
                kind: "extra_leaf".into(),
                path: leaf.path.clone(),
                family: None,
                passes_verification: matches.iter().all(|m| m.check.passes),
                verified_to: verify_bound,
            });
        }
        leaves.push(LeafMatch {
            path: leaf.path.clone(),
            outcome: "solution".into(),
            free_atoms: solution.free_atoms.clone(),
            instances: matches,
        });
    }
    let count = |kind: &str| deduced.leaves.iter().filter(|l| l.outcome == kind).count();
    Ok(TheoremReport {
        bound,
        verify_bound,
        seed,
        matched: found.iter().copied().collect(),
        missed: FamilyTag::THEOREM
            .into_iter()
            .filter(|t| !found.contains(t))
            .collect(),
        extras,
        contradiction_leaves: count("contradiction"),
        incomplete_leaves: count("incomplete"),
        replay_ok: deduced.leaves.iter().all(|l| l.replay_matches),
        f3_only,
        leaves,
    })
}

fn deduced_outcome(outcome: &Outcome) -> String {
    match outcome {
        Outcome::Solution(_) => "solution",
        Outcome::Contradiction { .. } => "contradiction",
        Outcome::Incomplete { .. } => "incomplete",
        Outcome::Branch { .. } => "branch",
    }
    .into()
}
