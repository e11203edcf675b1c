//! Case splitting and the classification tree.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::constraint::Constraint;
use super::knowledge::{DerivationLedger, Knowledge, Step};
use super::propagate::{propagate, Status, VisitOrder};
use crate::error::{Error, Result};
use crate::multfn::ValueTable;
use crate::poly::{Atom, Poly};
use crate::rational::Q;

/// Splits `state` into `pivot = 0` and `pivot != 0`. Both children carry a
/// copy of the parent ledger followed by their assumption.
pub fn branch(state: &Knowledge, pivot: Atom) -> Result<(Knowledge, Knowledge)> {
    if state.is_decided(pivot) {
        return Err(Error::DecidedPivot { atom: pivot });
    }
    let mut zero = state.clone();
    let retired: Vec<_> = zero
        .pending
        .values()
        .filter(|c| c.poly.contains(pivot) && c.poly.substitute(pivot, &Poly::zero()).is_zero())
        .map(|c| c.id)
        .collect();
    zero.apply(Step::Assume {
        atom: pivot,
        nonzero: false,
        retired,
    })
    .map_err(|_| Error::DecidedPivot { atom: pivot })?;
    let mut nonzero = state.clone();
    nonzero
        .apply(Step::Assume {
            atom: pivot,
            nonzero: true,
            retired: Vec::new(),
        })
        .map_err(|_| Error::DecidedPivot { atom: pivot })?;
    Ok((zero, nonzero))
}

/// A leaf with no pending constraints: every function obtained by choosing
/// values for `free_atoms` (nonzero where required) satisfies all instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionFamily {
    pub bound: u64,
    pub free_atoms: Vec<Atom>,
    /// Atoms asserted nonzero on the path; a subset of `free_atoms` unless
    /// they were later pinned to a nonzero constant.
    pub nonzero: Vec<Atom>,
    /// Conditions left over besides the table itself; empty for complete
    /// leaves.
    pub residual_constraints: Vec<Poly>,
    /// `n -> f(n)` over the free atoms.
    #[serde(with = "super::entries")]
    pub table: BTreeMap<u64, Poly>,
}

impl SolutionFamily {
    fn from_knowledge(k: &Knowledge) -> Self {
        SolutionFamily {
            bound: k.bound,
            free_atoms: k.free_atoms(),
            nonzero: k.nonzero.iter().copied().collect(),
            residual_constraints: k.pending.values().map(|c| c.poly.clone()).collect(),
            table: k.table(),
        }
    }

    /// Atoms that must be nonzero and are still free.
    pub fn nonzero_free(&self) -> Vec<Atom> {
        self.nonzero
            .iter()
            .copied()
            .filter(|a| self.free_atoms.contains(a))
            .collect()
    }

    /// Concrete values for a choice of the free atoms; `None` when the choice
    /// misses an atom, breaks a nonzero requirement, or a residual constraint.
    pub fn instantiate(&self, point: &BTreeMap<Atom, Q>) -> Option<ValueTable> {
        if self.free_atoms.iter().any(|a| !point.contains_key(a)) {
            return None;
        }
        if self.nonzero_free().iter().any(|a| point[a].is_zero()) {
            return None;
        }
        for r in &self.residual_constraints {
            if !r.evaluate(point)?.is_zero() {
                return None;
            }
        }
        let values = self
            .table
            .values()
            .map(|p| p.evaluate(point))
            .collect::<Option<Vec<Q>>>()?;
        Some(ValueTable::new(values))
    }

    /// The table when no atom is free.
    pub fn constant_table(&self) -> Option<ValueTable> {
        self.free_atoms
            .is_empty()
            .then(|| self.instantiate(&BTreeMap::new()))
            .flatten()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Branch {
        atom: Atom,
        /// Pending constraints at the moment of the split.
        stuck: Vec<Constraint>,
        zero: Box<CaseTree>,
        nonzero: Box<CaseTree>,
    },
    Solution(SolutionFamily),
    Contradiction {
        /// Index of the R5 step in this leaf's full ledger.
        step: usize,
        detail: String,
    },
    /// Depth limit reached with constraints still pending.
    Incomplete {
        depth: usize,
        pending: Vec<Constraint>,
    },
}

/// A node of the case tree with the ledger steps taken at that node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseTree {
    pub steps: Vec<Step>,
    pub outcome: Outcome,
}

/// One root-to-leaf path.
#[derive(Clone, Debug)]
pub struct Leaf<'a> {
    /// `(atom, nonzero?)` for each split taken.
    pub path: Vec<(Atom, bool)>,
    pub ledger: DerivationLedger,
    pub outcome: &'a Outcome,
}

impl Leaf<'_> {
    pub fn solution(&self) -> Option<&SolutionFamily> {
        match self.outcome {
            Outcome::Solution(s) => Some(s),
            _ => None,
        }
    }

    pub fn describe_path(&self) -> String {
        if self.path.is_empty() {
            return "root".into();
        }
        self.path
            .iter()
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
}

impl CaseTree {
    pub fn leaves(&self) -> Vec<Leaf<'_>> {
        let mut out = Vec::new();
        self.collect(Vec::new(), Vec::new(), &mut out);
        out
    }

    fn collect<'a>(
        &'a self,
        path: Vec<(Atom, bool)>,
        mut steps: Vec<Step>,
        out: &mut Vec<Leaf<'a>>,
    ) {
        steps.extend(self.steps.iter().cloned());
        match &self.outcome {
            Outcome::Branch {
                atom,
                zero,
                nonzero,
                ..
            } => {
                let mut zp = path.clone();
                zp.push((*atom, false));
                zero.collect(zp, steps.clone(), out);
                let mut np = path;
                np.push((*atom, true));
                nonzero.collect(np, steps, out);
            }
            outcome => out.push(Leaf {
                path,
                ledger: DerivationLedger { steps },
                outcome,
            }),
        }
    }

    /// The subtree reached by following `path` from here.
    pub fn node(&self, path: &[(Atom, bool)]) -> Option<&CaseTree> {
        let Some(((atom, nz), rest)) = path.split_first() else {
            return Some(self);
        };
        match &self.outcome {
            Outcome::Branch {
                atom: a,
                zero,
                nonzero,
                ..
            } if a == atom => {
                if *nz {
                    nonzero.node(rest)
                } else {
                    zero.node(rest)
                }
            }
            _ => None,
        }
    }

    /// Ledger from the root through the node at `path`.
    pub fn ledger_to(&self, path: &[(Atom, bool)]) -> Option<DerivationLedger> {
        let mut steps = self.steps.clone();
        let mut node = self;
        for (atom, nz) in path {
            match &node.outcome {
                Outcome::Branch {
                    atom: a,
                    zero,
                    nonzero,
                    ..
                } if a == atom => {
                    node = if *nz { nonzero } else { zero };
                    steps.extend(node.steps.iter().cloned());
                }
                _ => return None,
            }
        }
        Some(DerivationLedger { steps })
    }

    pub fn count(&self, pred: impl Fn(&Outcome) -> bool + Copy) -> usize {
        self.leaves().iter().filter(|l| pred(l.outcome)).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyConfig {
    pub bound: u64,
    pub pivot_order: Vec<Atom>,
    pub depth_limit: usize,
    pub order: VisitOrder,
}

impl ClassifyConfig {
    pub fn default_pivots() -> Vec<Atom> {
        vec![Atom(5), Atom(3), Atom(11), Atom(9)]
    }

    pub fn new(bound: u64) -> Self {
        ClassifyConfig {
            bound,
            pivot_order: Self::default_pivots(),
            depth_limit: 8,
            order: VisitOrder::Ascending,
        }
    }
}

/// The split atom: the first pivot that is undecided and occurs in a pending
/// constraint, else the atom occurring in the most pending constraints
/// (smallest on ties).
fn choose_pivot(k: &Knowledge, pivots: &[Atom]) -> Option<Atom> {
    let mut counts: BTreeMap<Atom, usize> = BTreeMap::new();
    for c in k.pending.values() {
        for a in c.poly.atoms() {
            *counts.entry(a).or_default() += 1;
        }
    }
    if let Some(p) = pivots
        .iter()
        .find(|p| !k.is_decided(**p) && counts.contains_key(p))
    {
        return Some(*p);
    }
    counts
        .into_iter()
        .filter(|(a, _)| !k.is_decided(*a))
        .max_by(|(a, x), (b, y)| x.cmp(y).then(b.cmp(a)))
        .map(|(a, _)| a)
}

/// Builds the case tree depth-first from the seeded state at `config.bound`.
pub fn classify(config: &ClassifyConfig) -> Result<CaseTree> {
    let root = Knowledge::seeded(config.bound, &config.pivot_order);
    grow(root, 0, 0, config)
}

fn grow(mut k: Knowledge, from: usize, depth: usize, config: &ClassifyConfig) -> Result<CaseTree> {
    let status = propagate(&mut k, config.order)?;
    let outcome = match status {
        Status::Contradiction => {
            let step = k.contradiction.expect("contradiction recorded");
            Outcome::Contradiction {
                step,
                detail: k.ledger.steps[step].to_string(),
            }
        }
        Status::Stable if k.pending.is_empty() => {
            Outcome::Solution(SolutionFamily::from_knowledge(&k))
        }
        Status::Stable if depth >= config.depth_limit => Outcome::Incomplete {
            depth,
            pending: k.pending.values().cloned().collect(),
        },
        Status::Stable => {
            let atom =
                choose_pivot(&k, &config.pivot_order).expect("pending constraints mention an atom");
            let stuck = k.pending.values().cloned().collect();
            let here = k.ledger.len();
            let (zero, nonzero) = branch(&k, atom)?;
            let zero = grow(zero, here, depth + 1, config)?;
            let nonzero = grow(nonzero, here, depth + 1, config)?;
            Outcome::Branch {
                atom,
                stuck,
                zero: Box::new(zero),
                nonzero: Box::new(nonzero),
            }
        }
    };
    Ok(CaseTree {
        steps: k.ledger.steps[from..].to_vec(),
        outcome,
    })
}
