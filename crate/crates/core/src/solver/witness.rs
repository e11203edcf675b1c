//! Identities that pin `f(n)` for integers with no four-square split.

use serde::{Deserialize, Serialize};

use super::knowledge::Knowledge;
use crate::error::{Error, Result};
use crate::multfn::ArithmeticFn;
use crate::rational::Q;
use crate::repr::four_splits;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessKind {
    /// The equation instance `n = s + t`, with `f(n)` expanded by
    /// multiplicativity.
    Equation { n: u64, s: u64, t: u64 },
    /// `f(m·m2) = f(m)·f(m2)` for coprime `m, m2`.
    Multiplicative { m: u64, m2: u64 },
}

/// `sum of products of f-values = sum of products of f-values`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub target: u64,
    pub kind: WitnessKind,
    pub lhs: Vec<Vec<u64>>,
    pub rhs: Vec<Vec<u64>>,
}

fn render_side(side: &[Vec<u64>]) -> String {
    side.iter()
        .map(|product| {
            product
                .iter()
                .map(|n| format!("f({n})"))
                .collect::<Vec<_>>()
                .join("·")
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

impl Witness {
    /// Text form, e.g. `f(3)·f(17) = f(10) + f(41)`.
    pub fn identity(&self) -> String {
        format!("{} = {}", render_side(&self.lhs), render_side(&self.rhs))
    }

    /// Largest argument the identity touches.
    pub fn reach(&self) -> u64 {
        let instance = match self.kind {
            WitnessKind::Equation { n, .. } => n,
            WitnessKind::Multiplicative { m, m2 } => m * m2,
        };
        self.lhs
            .iter()
            .chain(&self.rhs)
            .flatten()
            .copied()
            .chain([instance])
            .max()
            .unwrap_or(0)
    }

    fn side<F: ArithmeticFn + ?Sized>(f: &F, side: &[Vec<u64>]) -> Result<Q> {
        let mut total = Q::from_integer(0.into());
        for product in side {
            let mut term = Q::from_integer(1.into());
            for &n in product {
                term *= f.value(n)?;
            }
            total += term;
        }
        Ok(total)
    }

    /// Whether both sides agree under `f`.
    pub fn holds<F: ArithmeticFn + ?Sized>(&self, f: &F) -> Result<bool> {
        Ok(Self::side(f, &self.lhs)? == Self::side(f, &self.rhs)?)
    }
}

/// `(g, m)` with `n = g·4^m` and `g` not divisible by 4.
fn strip_fours(mut n: u64) -> (u64, u32) {
    let mut m = 0;
    while n.is_multiple_of(4) {
        n /= 4;
        m += 1;
    }
    (n, m)
}

/// The identity that determines `f(n)` for an integer that is not a sum of
/// four nonzero squares.
///
/// `29` and `41` come from equation instances at `34` and `51`; `2·4^m` from
/// the instance `5·2·4^(m-1) = 2·4^(m-1) + 2·4^m` (for `m = 0`, from
/// `10 = 5 + 5`); `6·4^m` and `14·4^m` from multiplicativity. The state must
/// have been seeded with a bound that reaches the identity.
pub fn exception_witness(n: u64, state: &Knowledge) -> Result<Witness> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    if n >= 2 && !four_splits(n).is_empty() {
        return Err(Error::Representable { n });
    }
    if [1, 3, 5, 9, 11, 17].contains(&n) {
        return Err(Error::DirectInstance { n, via: 2 * n });
    }
    let eq = |n, s, t| WitnessKind::Equation { n, s, t };
    let witness = match (n, strip_fours(n)) {
        (29, _) => Witness {
            target: n,
            kind: eq(34, 5, 29),
            lhs: vec![vec![2, 17]],
            rhs: vec![vec![5], vec![29]],
        },
        (41, _) => Witness {
            target: n,
            kind: eq(51, 10, 41),
            lhs: vec![vec![3, 17]],
            rhs: vec![vec![10], vec![41]],
        },
        (2, _) => Witness {
            target: n,
            kind: eq(10, 5, 5),
            lhs: vec![vec![2, 5]],
            rhs: vec![vec![5], vec![5]],
        },
        (_, (2, _)) => {
            let prev = n / 4;
            Witness {
                target: n,
                kind: eq(5 * prev, prev, n),
                lhs: vec![vec![prev, 5]],
                rhs: vec![vec![prev], vec![n]],
            }
        }
        (_, (g @ (6 | 14), _)) => {
            let m = g / 2;
            Witness {
                target: n,
                kind: WitnessKind::Multiplicative { m, m2: n / m },
                lhs: vec![vec![n]],
                rhs: vec![vec![m, n / m]],
            }
        }
        _ => return Err(Error::NotAnException { n }),
    };
    if witness.reach() > state.bound {
        return Err(Error::WitnessBeyondBound {
            n,
            needed: witness.reach(),
            bound: state.bound,
        });
    }
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multfn::{make_family, FamilySpec};

    #[test]
    fn classical_identities() {
        let k = Knowledge::seeded(60, &[]);
        assert_eq!(
            exception_witness(41, &k).unwrap().identity(),
            "f(3)·f(17) = f(10) + f(41)"
        );
        assert_eq!(
            exception_witness(29, &k).unwrap().identity(),
            "f(2)·f(17) = f(5) + f(29)"
        );
        assert_eq!(
            exception_witness(32, &k).unwrap().identity(),
            "f(8)·f(5) = f(8) + f(32)"
        );
        assert_eq!(
            exception_witness(24, &k).unwrap().identity(),
            "f(24) = f(3)·f(8)"
        );
        assert_eq!(
            exception_witness(56, &k).unwrap().identity(),
            "f(56) = f(7)·f(8)"
        );
        assert_eq!(
            exception_witness(6, &k).unwrap().identity(),
            "f(6) = f(3)·f(2)"
        );
        assert_eq!(
            exception_witness(2, &k).unwrap().identity(),
            "f(2)·f(5) = f(5) + f(5)"
        );
    }

    #[test]
    fn rejections() {
        let k = Knowledge::seeded(200, &[]);
        assert_eq!(
            exception_witness(12, &k).unwrap_err(),
            Error::Representable { n: 12 }
        );
        assert_eq!(
            exception_witness(17, &k).unwrap_err(),
            Error::DirectInstance { n: 17, via: 34 }
        );
        assert_eq!(
            exception_witness(3, &k).unwrap_err(),
            Error::DirectInstance { n: 3, via: 6 }
        );
        let small = Knowledge::seeded(40, &[]);
        assert!(matches!(
            exception_witness(41, &small),
            Err(Error::WitnessBeyondBound { .. })
        ));
        assert!(matches!(
            exception_witness(128, &small),
            Err(Error::WitnessBeyondBound { .. })
        ));
    }

    #[test]
    fn identities_hold_for_identity_function() {
        let k = Knowledge::seeded(200, &[]);
        let f = make_family(&FamilySpec::identity(), 200).unwrap();
        for n in [2, 6, 8, 14, 24, 29, 32, 41, 56, 96, 128] {
            assert!(
                exception_witness(n, &k).unwrap().holds(&f).unwrap(),
                "n = {n}"
            );
        }
    }
}
