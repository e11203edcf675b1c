//! Fixed-point propagation over a [`Knowledge`].

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use super::cite::cite_equation;
use super::combine::{monic_set, reduced_echelon};
use super::constraint::{Constraint, ConstraintId, Origin};
use super::knowledge::{Divergence, Knowledge, Step};
use crate::error::Error;
use crate::poly::{Atom, Monomial, Poly};

/// Order in which pending constraints are visited on each pass.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VisitOrder {
    #[default]
    Ascending,
    Shuffled {
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    /// No rule applies; `pending` may still be nonempty.
    Stable,
    /// An R5 step fired; `Knowledge::contradiction` names it.
    Contradiction,
}

pub const MAX_PASSES: usize = 10_000;

fn cite(origin: &Origin) -> Option<String> {
    match *origin {
        Origin::Equation { n, s, t } => cite_equation(n, s, t),
        _ => None,
    }
}

/// The next local step for one constraint, if any rule applies.
fn local_step(k: &Knowledge, c: &Constraint) -> Option<Step> {
    let poly = &c.poly;
    if poly.is_nonzero_constant() {
        return Some(Step::Contradiction {
            constraint: Some(c.id),
            atom: None,
        });
    }

    // R3: strip atoms known to be nonzero from the monomial content
    let content = poly.monomial_content();
    let nonzero_part = Monomial::from_powers(
        content
            .powers()
            .iter()
            .copied()
            .filter(|(a, _)| k.nonzero.contains(a)),
    );
    if !nonzero_part.is_one() {
        let result = poly.div_monomial(&nonzero_part).expect("content divides");
        return Some(Step::Cancel {
            constraint: c.id,
            factor: Poly::monomial(nonzero_part, num_traits::One::one()),
            result,
            cite: cite(&c.origin),
        });
    }

    // R4: a single product with exactly one undecided factor
    if poly.len() == 1 {
        let (m, _) = poly.terms().next().expect("one term");
        let atoms: Vec<Atom> = m.powers().iter().map(|&(a, _)| a).collect();
        if let [only] = atoms.as_slice() {
            // linear single terms are left to R2
            if m.degree() > 1 {
                return Some(Step::ZeroFactor {
                    constraint: c.id,
                    atom: *only,
                    cite: cite(&c.origin),
                });
            }
        }
    }

    // R2: solve for a linearly occurring atom; prefer unprotected, then larger n
    let mut best: Option<(bool, Atom, Poly)> = None;
    for atom in poly.linear_atoms() {
        let coeff = poly.linear_coefficient(atom).expect("linear atom");
        let rest = poly - &Poly::atom(atom).scale(&coeff);
        let value = rest.scale(&(-coeff.recip()));
        let protected = k.is_protected(atom);
        if protected && value.as_constant().is_none() {
            continue;
        }
        let rank = (!protected, atom);
        if best.as_ref().is_none_or(|(p, a, _)| rank > (*p, *a)) {
            best = Some((!protected, atom, value));
        }
    }
    best.map(|(_, atom, value)| {
        let retired = retired_by(k, c.id, atom, &value);
        Step::Resolve {
            constraint: c.id,
            atom,
            value,
            retired,
            cite: cite(&c.origin),
        }
    })
}

/// Ids of pending constraints that vanish once `atom := value`.
fn retired_by(k: &Knowledge, used: ConstraintId, atom: Atom, value: &Poly) -> Vec<ConstraintId> {
    k.pending
        .values()
        .filter(|c| {
            c.id != used && c.poly.contains(atom) && c.poly.substitute(atom, value).is_zero()
        })
        .map(|c| c.id)
        .collect()
}

fn duplicate_step(k: &Knowledge) -> Option<Step> {
    let mut seen: BTreeMap<Poly, ConstraintId> = BTreeMap::new();
    for c in k.pending.values() {
        let key = c.poly.monic();
        if let Some(&of) = seen.get(&key) {
            return Some(Step::Duplicate {
                constraint: c.id,
                of,
            });
        }
        seen.insert(key, c.id);
    }
    None
}

fn combine_step(k: &Knowledge) -> Option<Step> {
    let polys: Vec<Poly> = k.pending.values().map(|c| c.poly.clone()).collect();
    let rows = reduced_echelon(&polys, &k.protected_set());
    if monic_set(&rows) == monic_set(&polys) {
        return None;
    }
    let index = k.ledger.len();
    let outputs = rows
        .into_iter()
        .enumerate()
        .map(|(i, poly)| Constraint {
            id: k.next_id + i as ConstraintId,
            poly,
            origin: Origin::Combination { step: index },
        })
        .collect();
    Some(Step::Combine {
        inputs: k.pending.keys().copied().collect(),
        outputs,
    })
}

fn apply(k: &mut Knowledge, step: Step) {
    if let Err(Divergence { step, reason }) = k.apply(step) {
        panic!("propagation produced an invalid step {step}: {reason}");
    }
}

/// Applies R1–R5, duplicate removal, and linear combination until nothing
/// changes or a contradiction fires.
pub fn propagate(k: &mut Knowledge, order: VisitOrder) -> Result<Status, Error> {
    let mut rng = match order {
        VisitOrder::Ascending => None,
        VisitOrder::Shuffled { seed } => Some(StdRng::seed_from_u64(seed)),
    };
    for _ in 0..MAX_PASSES {
        if k.is_contradictory() {
            return Ok(Status::Contradiction);
        }
        let mut progress = false;
        let mut ids: Vec<ConstraintId> = k.pending.keys().copied().collect();
        if let Some(rng) = rng.as_mut() {
            ids.shuffle(rng);
        }
        for id in ids {
            while let Some(c) = k.pending.get(&id) {
                let Some(step) = local_step(k, c) else { break };
                let resolves = matches!(step, Step::Resolve { .. });
                apply(k, step);
                progress = true;
                if k.is_contradictory() {
                    return Ok(Status::Contradiction);
                }
                if resolves {
                    if let Some(atom) = k.violated_nonzero() {
                        apply(
                            k,
                            Step::Contradiction {
                                constraint: None,
                                atom: Some(atom),
                            },
                        );
                        return Ok(Status::Contradiction);
                    }
                }
            }
        }
        if progress {
            continue;
        }
        if let Some(step) = duplicate_step(k) {
            apply(k, step);
            continue;
        }
        if let Some(step) = combine_step(k) {
            apply(k, step);
            continue;
        }
        return Ok(Status::Stable);
    }
    Err(Error::PropagationLimit { limit: MAX_PASSES })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    /// A state holding exactly the given constraints.
    fn state_with(polys: &[&str], nonzero: &[u64], protected: &[u64]) -> Knowledge {
        let mut k = Knowledge::new();
        k.bound = 100;
        k.protected = protected.iter().map(|&n| Atom(n)).collect();
        k.nonzero = nonzero.iter().map(|&n| Atom(n)).collect();
        for (i, p) in polys.iter().enumerate() {
            let id = i as ConstraintId;
            k.pending.insert(
                id,
                Constraint {
                    id,
                    poly: p.parse().unwrap(),
                    origin: Origin::Combination { step: 0 },
                },
            );
        }
        k.next_id = polys.len() as ConstraintId;
        k
    }

    fn constant(k: &Knowledge, n: u64) -> Option<crate::rational::Q> {
        k.value(Atom(n)).and_then(Poly::as_constant)
    }

    #[test]
    fn nonzero_cancellation_gives_x_equals_two() {
        // x z = 2 z with z != 0
        let mut k = state_with(&["f2*f5 - 2*f5"], &[5], &[5]);
        assert_eq!(
            propagate(&mut k, VisitOrder::Ascending).unwrap(),
            Status::Stable
        );
        assert_eq!(constant(&k, 2), Some(q(2)));
        assert!(k.pending.is_empty());
    }

    #[test]
    fn y_and_z_from_two_relations() {
        // 2y = 1 + z, y z = z (1 + x), x = 2, z != 0
        let mut k = state_with(
            &["2*f3 - 1 - f5", "f3*f5 - f5 - f2*f5", "f2 - 2"],
            &[5],
            &[3, 5],
        );
        assert_eq!(
            propagate(&mut k, VisitOrder::Ascending).unwrap(),
            Status::Stable
        );
        assert_eq!(constant(&k, 3), Some(q(3)));
        assert_eq!(constant(&k, 5), Some(q(5)));
    }

    #[test]
    fn x_vanishes_when_z_is_zero() {
        // z = 0, 2 x y = x, y x = -2 x
        let mut k = state_with(&["f5", "2*f2*f3 - f2", "f2*f3 + 2*f2"], &[], &[3, 5]);
        assert_eq!(
            propagate(&mut k, VisitOrder::Ascending).unwrap(),
            Status::Stable
        );
        assert_eq!(constant(&k, 2), Some(q(0)));
        assert_eq!(constant(&k, 5), Some(q(0)));
        assert!(k
            .ledger
            .steps
            .iter()
            .any(|s| matches!(s, Step::Combine { .. })));
    }

    #[test]
    fn nonzero_constant_is_a_contradiction() {
        let mut k = state_with(&["f2 - 1", "f2 - 3"], &[], &[]);
        assert_eq!(
            propagate(&mut k, VisitOrder::Ascending).unwrap(),
            Status::Contradiction
        );
        assert!(matches!(
            k.ledger.steps.last(),
            Some(Step::Contradiction { .. })
        ));
    }

    #[test]
    fn nonzero_atom_resolved_to_zero_is_a_contradiction() {
        let mut k = state_with(&["f3*f11"], &[3, 11], &[]);
        // f3 f11 = 0 with both nonzero cancels down to 1 = 0
        assert_eq!(
            propagate(&mut k, VisitOrder::Ascending).unwrap(),
            Status::Contradiction
        );
        let mut k = state_with(&["2*f7"], &[7], &[]);
        assert_eq!(
            propagate(&mut k, VisitOrder::Ascending).unwrap(),
            Status::Contradiction
        );
    }

    #[test]
    fn zero_product_with_one_undecided_factor() {
        let mut k = state_with(&["3*f3*f11^2"], &[3], &[3, 11]);
        assert_eq!(
            propagate(&mut k, VisitOrder::Ascending).unwrap(),
            Status::Stable
        );
        assert_eq!(constant(&k, 11), Some(q(0)));
    }

    #[test]
    fn stuck_product_stays_pending() {
        let mut k = state_with(&["f9*f11"], &[], &[9, 11]);
        assert_eq!(
            propagate(&mut k, VisitOrder::Ascending).unwrap(),
            Status::Stable
        );
        assert_eq!(k.pending.len(), 1);
    }
}
