//! Solver state, ledger steps, and the step semantics shared by derivation
//! and replay.
//!
//! Every change to a [`Knowledge`] goes through [`Knowledge::apply`], which
//! re-checks the step's premises and recomputes its conclusion. The search in
//! `propagate` only decides which step to take next, so replaying a ledger
//! runs exactly the same checks as producing it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::combine::{monic_set, reduced_echelon};
use super::constraint::{generate_constraints, value_poly, Constraint, ConstraintId, Origin};
use crate::multfn::FactorSieve;
use crate::poly::{Atom, Monomial, Poly};

/// One deduction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Step {
    /// Load every instance up to `bound`; identically-zero instances are
    /// retired on the spot.
    Seed {
        bound: u64,
        protected: Vec<Atom>,
        generated: usize,
        retired: usize,
    },
    /// Substitution and linear solving: `constraint` is `c*atom + p` with `c`
    /// rational, so `atom = -p/c`; the value is substituted everywhere and
    /// constraints that become `0` are retired.
    Resolve {
        constraint: ConstraintId,
        atom: Atom,
        value: Poly,
        retired: Vec<ConstraintId>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cite: Option<String>,
    },
    /// Cancellation: divide by a product of atoms known to be nonzero.
    Cancel {
        constraint: ConstraintId,
        factor: Poly,
        result: Poly,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cite: Option<String>,
    },
    /// Zero product: a single term whose atoms are all nonzero but `atom`.
    ZeroFactor {
        constraint: ConstraintId,
        atom: Atom,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cite: Option<String>,
    },
    /// `constraint` is the same equation as `of` up to a rational factor.
    Duplicate {
        constraint: ConstraintId,
        of: ConstraintId,
    },
    /// Replace all pending constraints by the reduced echelon basis of their
    /// span, monomials taken as columns.
    Combine {
        inputs: Vec<ConstraintId>,
        outputs: Vec<Constraint>,
    },
    /// Case split assumption.
    Assume {
        atom: Atom,
        nonzero: bool,
        retired: Vec<ConstraintId>,
    },
    /// A nonzero constant constrained to zero, or a nonzero atom resolved to zero.
    Contradiction {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        constraint: Option<ConstraintId>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        atom: Option<Atom>,
    },
}

impl Step {
    pub fn rule_name(&self) -> &'static str {
        match self {
            Step::Seed { .. } => "seed",
            Step::Resolve { .. } => "R2 resolve",
            Step::Cancel { .. } => "R3 cancel",
            Step::ZeroFactor { .. } => "R4 zero-product",
            Step::Duplicate { .. } => "duplicate",
            Step::Combine { .. } => "linear combination",
            Step::Assume { .. } => "case split",
            Step::Contradiction { .. } => "R5 contradiction",
        }
    }

    pub fn cite(&self) -> Option<&str> {
        match self {
            Step::Resolve { cite, .. }
            | Step::Cancel { cite, .. }
            | Step::ZeroFactor { cite, .. } => cite.as_deref(),
            _ => None,
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Seed {
                bound,
                protected,
                generated,
                retired,
            } => {
                let names: Vec<String> = protected.iter().map(Atom::to_string).collect();
                write!(
                    f,
                    "seed: bound {bound}, {generated} instances, {retired} identically zero; protected [{}]",
                    names.join(", ")
                )
            }
            Step::Resolve {
                constraint,
                atom,
                value,
                retired,
                ..
            } => {
                write!(f, "R2: #{constraint} gives {atom} = {value}")?;
                if !retired.is_empty() {
                    write!(f, " (retires {} constraints)", retired.len())?;
                }
                Ok(())
            }
            Step::Cancel {
                constraint,
                factor,
                result,
                ..
            } => {
                write!(
                    f,
                    "R3: #{constraint} divided by nonzero {factor}: {result} = 0"
                )
            }
            Step::ZeroFactor {
                constraint, atom, ..
            } => {
                write!(f, "R4: #{constraint} is a product with the only undecided factor {atom}: {atom} = 0")
            }
            Step::Duplicate { constraint, of } => write!(f, "#{constraint} duplicates #{of}"),
            Step::Combine { inputs, outputs } => {
                write!(
                    f,
                    "combine {} constraints into {} independent rows",
                    inputs.len(),
                    outputs.len()
                )
            }
            Step::Assume { atom, nonzero, .. } => {
                if *nonzero {
                    write!(f, "case: {atom} != 0")
                } else {
                    write!(f, "case: {atom} = 0")
                }
            }
            Step::Contradiction { constraint, atom } => match (constraint, atom) {
                (Some(c), _) => write!(f, "R5: #{c} reduces to a nonzero constant"),
                (None, Some(a)) => write!(f, "R5: {a} was assumed nonzero but resolves to 0"),
                (None, None) => write!(f, "R5: contradiction"),
            },
        }?;
        if let Some(cite) = self.cite() {
            write!(f, "   [{cite}]")?;
        }
        Ok(())
    }
}

/// Ordered record of every step applied to a [`Knowledge`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationLedger {
    pub steps: Vec<Step>,
}

impl DerivationLedger {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// One line per step.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, step) in self.steps.iter().enumerate() {
            out.push_str(&format!("{i:>5}  {step}\n"));
        }
        out
    }
}

/// A step whose premises do not hold in the current state.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("ledger step {step}: {reason}")]
pub struct Divergence {
    pub step: usize,
    pub reason: String,
}

/// Running solver state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Knowledge {
    pub bound: u64,
    /// Atoms that may only be resolved to a rational constant.
    pub protected: BTreeSet<Atom>,
    /// `n -> f(n)` for `n = 1` and every eliminated atom, written over the
    /// atoms still unresolved.
    #[serde(with = "super::entries")]
    pub resolved: BTreeMap<u64, Poly>,
    pub nonzero: BTreeSet<Atom>,
    pub pending: BTreeMap<ConstraintId, Constraint>,
    pub next_id: ConstraintId,
    /// Ledger index of the contradiction step, once one has fired.
    pub contradiction: Option<usize>,
    pub ledger: DerivationLedger,
}

impl Default for Knowledge {
    fn default() -> Self {
        Knowledge {
            bound: 0,
            protected: BTreeSet::new(),
            resolved: [(1, Poly::one())].into(),
            nonzero: BTreeSet::new(),
            pending: BTreeMap::new(),
            next_id: 0,
            contradiction: None,
            ledger: DerivationLedger::default(),
        }
    }
}

impl Knowledge {
    /// Empty state: only `f(1) = 1`.
    pub fn new() -> Self {
        Self::default()
    }

    /// State holding every instance up to `bound`, with `protected` atoms.
    pub fn seeded(bound: u64, protected: &[Atom]) -> Self {
        let mut k = Knowledge::new();
        let generated = generate_constraints(bound);
        let retired = generated.iter().filter(|c| c.poly.is_zero()).count();
        k.apply(Step::Seed {
            bound,
            protected: protected.to_vec(),
            generated: generated.len(),
            retired,
        })
        .expect("seed step is always valid");
        k
    }

    pub fn value(&self, a: Atom) -> Option<&Poly> {
        self.resolved.get(&a.n())
    }

    pub fn is_resolved(&self, a: Atom) -> bool {
        self.resolved.contains_key(&a.n())
    }

    pub fn is_decided(&self, a: Atom) -> bool {
        self.is_resolved(a) || self.nonzero.contains(&a)
    }

    pub fn is_protected(&self, a: Atom) -> bool {
        self.protected.contains(&a) || self.nonzero.contains(&a)
    }

    /// Expression for `f(n)`, `1 ≤ n ≤ bound`, over unresolved atoms.
    pub fn expression(&self, sieve: &FactorSieve, n: u64) -> Poly {
        let mut acc = Poly::one();
        for pp in sieve.prime_power_parts(n) {
            let part = self
                .resolved
                .get(&pp)
                .cloned()
                .unwrap_or_else(|| Poly::atom(Atom(pp)));
            acc = &acc * &part;
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    /// `n -> f(n)` for every `1 ≤ n ≤ bound`.
    pub fn table(&self) -> BTreeMap<u64, Poly> {
        let sieve = FactorSieve::new(self.bound.max(1));
        (1..=self.bound)
            .map(|n| (n, self.expression(&sieve, n)))
            .collect()
    }

    /// Prime powers up to the bound that are still unknown.
    pub fn free_atoms(&self) -> Vec<Atom> {
        let sieve = FactorSieve::new(self.bound.max(1));
        sieve
            .prime_powers()
            .filter(|pp| !self.resolved.contains_key(pp))
            .map(Atom)
            .collect()
    }

    /// Rewrites an arbitrary polynomial with the current resolutions.
    pub fn reduce(&self, poly: &Poly) -> Poly {
        let mut out = poly.clone();
        for atom in poly.atoms() {
            if let Some(v) = self.value(atom) {
                out = out.substitute(atom, v);
            }
        }
        out
    }

    fn fail(&self, reason: impl Into<String>) -> Divergence {
        Divergence {
            step: self.ledger.len(),
            reason: reason.into(),
        }
    }

    fn pending_poly(&self, id: ConstraintId) -> Result<&Poly, Divergence> {
        self.pending
            .get(&id)
            .map(|c| &c.poly)
            .ok_or_else(|| self.fail(format!("constraint #{id} is not pending")))
    }

    /// Sets `atom := value`, rewrites everything, and returns the ids of the
    /// pending constraints that became identically zero.
    fn eliminate(&mut self, atom: Atom, value: &Poly) -> Vec<ConstraintId> {
        for v in self.resolved.values_mut() {
            if v.contains(atom) {
                *v = v.substitute(atom, value);
            }
        }
        self.resolved.insert(atom.n(), value.clone());
        let mut retired = Vec::new();
        for (id, c) in self.pending.iter_mut() {
            if c.poly.contains(atom) {
                c.poly = c.poly.substitute(atom, value);
                if c.poly.is_zero() {
                    retired.push(*id);
                }
            }
        }
        for id in &retired {
            self.pending.remove(id);
        }
        retired
    }

    /// Checks `step` against the current state, performs it, and appends it
    /// to the ledger.
    pub fn apply(&mut self, step: Step) -> Result<(), Divergence> {
        if self.contradiction.is_some() {
            return Err(self.fail("state is already contradictory"));
        }
        match &step {
            Step::Seed {
                bound,
                protected,
                generated,
                retired,
            } => {
                if !self.ledger.is_empty() {
                    return Err(self.fail("seed must be the first step"));
                }
                let all = generate_constraints(*bound);
                let zero = all.iter().filter(|c| c.poly.is_zero()).count();
                if all.len() != *generated || zero != *retired {
                    return Err(self.fail(format!(
                        "seed mismatch: {} generated / {} retired, ledger says {generated} / {retired}",
                        all.len(),
                        zero
                    )));
                }
                self.bound = *bound;
                self.protected = protected.iter().copied().collect();
                self.next_id = all.len() as ConstraintId;
                self.pending = all
                    .into_iter()
                    .filter(|c| !c.poly.is_zero())
                    .map(|c| (c.id, c))
                    .collect();
            }
            Step::Resolve {
                constraint,
                atom,
                value,
                retired,
                ..
            } => {
                let poly = self.pending_poly(*constraint)?;
                let c = poly
                    .linear_coefficient(*atom)
                    .ok_or_else(|| self.fail(format!("#{constraint} is not linear in {atom}")))?;
                let rest = poly - &Poly::atom(*atom).scale(&c);
                let computed = rest.scale(&(-c.recip()));
                if &computed != value {
                    return Err(self.fail(format!(
                        "{atom} resolves to {computed}, ledger says {value}"
                    )));
                }
                if self.is_protected(*atom) && computed.as_constant().is_none() {
                    return Err(self.fail(format!(
                        "{atom} is protected and {computed} is not constant"
                    )));
                }
                self.pending.remove(constraint);
                let done = self.eliminate(*atom, &computed);
                if &done != retired {
                    return Err(self.fail(format!("retired {done:?}, ledger says {retired:?}")));
                }
            }
            Step::Cancel {
                constraint,
                factor,
                result,
                ..
            } => {
                let poly = self.pending_poly(*constraint)?;
                let divisor =
                    single_monomial(factor).ok_or_else(|| self.fail("factor is not a monomial"))?;
                if divisor.is_one() {
                    return Err(self.fail("empty cancellation"));
                }
                if let Some((a, _)) = divisor
                    .powers()
                    .iter()
                    .find(|(a, _)| !self.nonzero.contains(a))
                {
                    return Err(self.fail(format!("{a} is not known to be nonzero")));
                }
                let quotient = poly
                    .div_monomial(&divisor)
                    .ok_or_else(|| self.fail(format!("{factor} does not divide #{constraint}")))?;
                if &quotient != result {
                    return Err(self.fail(format!("quotient is {quotient}, ledger says {result}")));
                }
                self.pending
                    .get_mut(constraint)
                    .expect("checked above")
                    .poly = quotient;
            }
            Step::ZeroFactor {
                constraint, atom, ..
            } => {
                let poly = self.pending_poly(*constraint)?;
                let (m, _) = match poly.terms().collect::<Vec<_>>().as_slice() {
                    [(m, c)] if !m.is_one() => ((*m).clone(), (*c).clone()),
                    _ => return Err(self.fail(format!("#{constraint} is not a single product"))),
                };
                let undecided: Vec<Atom> = m
                    .powers()
                    .iter()
                    .map(|&(a, _)| a)
                    .filter(|a| !self.nonzero.contains(a))
                    .collect();
                if undecided != [*atom] {
                    return Err(self.fail(format!("#{constraint} does not isolate {atom}")));
                }
                self.pending
                    .get_mut(constraint)
                    .expect("checked above")
                    .poly = Poly::atom(*atom);
            }
            Step::Duplicate { constraint, of } => {
                if constraint == of {
                    return Err(self.fail("constraint duplicates itself"));
                }
                let a = self.pending_poly(*constraint)?.monic();
                let b = self.pending_poly(*of)?.monic();
                if a != b {
                    return Err(self.fail(format!("#{constraint} and #{of} differ")));
                }
                self.pending.remove(constraint);
            }
            Step::Combine { inputs, outputs } => {
                let ids: Vec<ConstraintId> = self.pending.keys().copied().collect();
                if &ids != inputs {
                    return Err(self.fail("combination inputs differ from the pending set"));
                }
                let polys: Vec<Poly> = self.pending.values().map(|c| c.poly.clone()).collect();
                let rows = reduced_echelon(&polys, &self.protected_set());
                let index = self.ledger.len();
                let expected: Vec<Constraint> = rows
                    .into_iter()
                    .enumerate()
                    .map(|(i, poly)| Constraint {
                        id: self.next_id + i as ConstraintId,
                        poly,
                        origin: Origin::Combination { step: index },
                    })
                    .collect();
                if &expected != outputs {
                    return Err(self.fail("combination rows differ"));
                }
                self.next_id += expected.len() as ConstraintId;
                self.pending = expected.into_iter().map(|c| (c.id, c)).collect();
            }
            Step::Assume {
                atom,
                nonzero,
                retired,
            } => {
                if self.is_decided(*atom) {
                    return Err(self.fail(format!("{atom} is already decided")));
                }
                if atom.n() < 2 || atom.n() > self.bound {
                    return Err(self.fail(format!("{atom} is outside the bound")));
                }
                if *nonzero {
                    if !retired.is_empty() {
                        return Err(self.fail("nonzero assumption retires nothing"));
                    }
                    self.nonzero.insert(*atom);
                } else {
                    let done = self.eliminate(*atom, &Poly::zero());
                    if &done != retired {
                        return Err(self.fail(format!("retired {done:?}, ledger says {retired:?}")));
                    }
                }
            }
            Step::Contradiction { constraint, atom } => {
                let holds = match (constraint, atom) {
                    (Some(id), _) => self.pending_poly(*id)?.is_nonzero_constant(),
                    (None, Some(a)) => {
                        self.nonzero.contains(a) && self.value(*a).is_some_and(Poly::is_zero)
                    }
                    (None, None) => false,
                };
                if !holds {
                    return Err(self.fail("no contradiction at this point"));
                }
                self.contradiction = Some(self.ledger.len());
            }
        }
        self.ledger.steps.push(step);
        Ok(())
    }

    /// Protected atoms plus nonzero ones.
    pub fn protected_set(&self) -> BTreeSet<Atom> {
        self.protected.union(&self.nonzero).copied().collect()
    }

    /// Whether the pending set is already its own reduced echelon basis.
    pub fn pending_is_reduced(&self) -> bool {
        let polys: Vec<Poly> = self.pending.values().map(|c| c.poly.clone()).collect();
        let rows = reduced_echelon(&polys, &self.protected_set());
        monic_set(&rows) == monic_set(&polys)
    }

    /// Nonzero atoms that have been resolved to zero.
    pub fn violated_nonzero(&self) -> Option<Atom> {
        self.nonzero
            .iter()
            .copied()
            .find(|a| self.value(*a).is_some_and(Poly::is_zero))
    }
}

fn single_monomial(p: &Poly) -> Option<Monomial> {
    match p.terms().collect::<Vec<_>>().as_slice() {
        [(m, c)] if num_traits::One::is_one(*c) => Some((*m).clone()),
        _ => None,
    }
}

/// Rebuilds the state a ledger describes, re-checking every step.
pub fn replay(ledger: &DerivationLedger) -> Result<Knowledge, Divergence> {
    let mut k = Knowledge::new();
    for step in &ledger.steps {
        k.apply(step.clone())?;
    }
    Ok(k)
}

/// `f(n) - f(s) - f(t)` rewritten with the current resolutions.
pub fn reduced_instance(k: &Knowledge, n: u64, s: u64, t: u64) -> Poly {
    let sieve = FactorSieve::new(n.max(2));
    let raw = &(&value_poly(&sieve, n) - &value_poly(&sieve, s)) - &value_poly(&sieve, t);
    k.reduce(&raw)
}

impl Knowledge {
    pub fn is_contradictory(&self) -> bool {
        self.contradiction.is_some()
    }

    pub fn constant_value(&self, n: u64) -> Option<crate::rational::Q> {
        let sieve = FactorSieve::new(self.bound.max(n).max(2));
        self.expression(&sieve, n).as_constant()
    }
}
