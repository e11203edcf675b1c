use serde::{Deserialize, Serialize};

use crate::multfn::FactorSieve;
use crate::poly::{Atom, Monomial, Poly};
use crate::rational::Q;
use crate::repr::four_splits;

pub type ConstraintId = u64;

/// Where a constraint came from; enough to rebuild it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Origin {
    /// `f(n) - f(s) - f(t)` with `n = s + t`.
    Equation { n: u64, s: u64, t: u64 },
    /// `f(m·m2) - f(m)·f(m2)` for coprime `m < m2`.
    Multiplicative { m: u64, m2: u64 },
    /// A row of the linear combination done at ledger step `step`.
    Combination { step: usize },
}

impl Origin {
    /// The integer whose instance produced this constraint, if any.
    pub fn instance(&self) -> Option<u64> {
        match *self {
            Origin::Equation { n, .. } => Some(n),
            Origin::Multiplicative { m, m2 } => Some(m * m2),
            Origin::Combination { .. } => None,
        }
    }
}

impl std::fmt::Display for Origin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Origin::Equation { n, s, t } => write!(f, "equation n={n} split ({s},{t})"),
            Origin::Multiplicative { m, m2 } => write!(f, "multiplicativity ({m},{m2})"),
            Origin::Combination { step } => write!(f, "combination at step {step}"),
        }
    }
}

/// Asserts `poly = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub id: ConstraintId,
    pub poly: Poly,
    pub origin: Origin,
}

/// `f(n)` written over prime-power atoms: the product of `f(p^e)` over the
/// prime-power parts of `n`.
pub fn value_poly(sieve: &FactorSieve, n: u64) -> Poly {
    let parts = sieve.prime_power_parts(n);
    Poly::monomial(
        Monomial::from_powers(parts.into_iter().map(|pp| (Atom(pp), 1))),
        Q::from_integer(1.into()),
    )
}

/// Every equation instance and coprime multiplicativity instance up to
/// `bound`, in ascending `n`; for each `n` the splits come first.
///
/// Multiplicativity instances are identically zero once values are written
/// over prime powers; they are still emitted so the ledger accounts for them.
pub fn generate_constraints(bound: u64) -> Vec<Constraint> {
    let sieve = FactorSieve::new(bound.max(2));
    let mut out = Vec::new();
    let mut next = 0;
    for n in 2..=bound {
        let lhs = value_poly(&sieve, n);
        for split in four_splits(n) {
            let rhs = &value_poly(&sieve, split.s) + &value_poly(&sieve, split.t);
            out.push(Constraint {
                id: next,
                poly: &lhs - &rhs,
                origin: Origin::Equation {
                    n,
                    s: split.s,
                    t: split.t,
                },
            });
            next += 1;
        }
        for m in 2..n {
            let m2 = n / m;
            if m >= m2 {
                break;
            }
            if n % m != 0 || num_integer::gcd(m, m2) != 1 {
                continue;
            }
            let rhs = &value_poly(&sieve, m) * &value_poly(&sieve, m2);
            out.push(Constraint {
                id: next,
                poly: &lhs - &rhs,
                origin: Origin::Multiplicative { m, m2 },
            });
            next += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn has(constraints: &[Constraint], text: &str) -> bool {
        let target: Poly = text.parse().unwrap();
        constraints.iter().any(|c| c.poly == target)
    }

    #[test]
    fn derivation_chain_instances_are_generated() {
        assert!(has(&generate_constraints(4), "f4 - 2*f2"));
        assert!(has(&generate_constraints(10), "f2*f5 - f2 - f8"));
        assert!(has(&generate_constraints(10), "f2*f5 - 2*f5"));
        assert!(has(&generate_constraints(34), "f2*f17 - f5 - f29"));
    }

    #[test]
    fn multiplicativity_instances_vanish() {
        let all = generate_constraints(60);
        let mult: Vec<_> = all
            .iter()
            .filter(|c| matches!(c.origin, Origin::Multiplicative { .. }))
            .collect();
        assert!(mult
            .iter()
            .any(|c| c.origin == Origin::Multiplicative { m: 4, m2: 15 }));
        assert!(mult.iter().all(|c| c.poly.is_zero()));
    }

    #[test]
    fn one_constraint_per_split() {
        let all = generate_constraints(33);
        let at33: Vec<_> = all
            .iter()
            .filter(|c| matches!(c.origin, Origin::Equation { n: 33, .. }))
            .map(|c| c.origin.clone())
            .collect();
        assert_eq!(
            at33,
            vec![
                Origin::Equation { n: 33, s: 8, t: 25 },
                Origin::Equation {
                    n: 33,
                    s: 13,
                    t: 20
                }
            ]
        );
        assert!(all.windows(2).all(|w| w[0].id + 1 == w[1].id));
    }
}
