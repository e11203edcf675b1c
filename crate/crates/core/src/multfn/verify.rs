//! Checks of the functional equation and of multiplicativity.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{ArithmeticFn, ValueTable};
use crate::error::{Error, Result};
use crate::rational::{serde_q, Q};
use crate::repr::{four_splits, FourSplit};

/// Where a check failed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationSite {
    /// `f(s + t) ≠ f(s) + f(t)`.
    Split { s: u64, t: u64 },
    /// `f(m·m2) ≠ f(m)·f(m2)` for coprime `m < m2`.
    Coprime { m: u64, m2: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    pub n: u64,
    pub site: ViolationSite,
    #[serde(with = "serde_q")]
    pub lhs: Q,
    #[serde(with = "serde_q")]
    pub rhs: Q,
}

fn check_range<F: ArithmeticFn + ?Sized>(
    f: &F,
    range: impl Iterator<Item = u64>,
) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    for n in range {
        let splits = four_splits(n);
        if splits.is_empty() {
            continue;
        }
        let lhs = f.value(n)?;
        for FourSplit { s, t } in splits {
            let rhs = f.value(s)? + f.value(t)?;
            if lhs != rhs {
                out.push(Violation {
                    n,
                    site: ViolationSite::Split { s, t },
                    lhs: lhs.clone(),
                    rhs,
                });
            }
        }
    }
    Ok(out)
}

/// Every `n ≤ bound` and split `(s, t)` of `n` where `f(n) ≠ f(s) + f(t)`.
pub fn check_functional_equation<F: ArithmeticFn + ?Sized>(
    f: &F,
    bound: u64,
) -> Result<Vec<Violation>> {
    if bound > f.bound() {
        return Err(Error::OutOfBound {
            n: bound,
            bound: f.bound(),
        });
    }
    check_range(f, 2..=bound)
}

/// [`check_functional_equation`] over `jobs` interleaved slices of `2..=bound`,
/// merged and sorted.
pub fn check_functional_equation_parallel<F: ArithmeticFn + Sync + ?Sized>(
    f: &F,
    bound: u64,
    jobs: usize,
) -> Result<Vec<Violation>> {
    if bound > f.bound() {
        return Err(Error::OutOfBound {
            n: bound,
            bound: f.bound(),
        });
    }
    let jobs = jobs.max(1) as u64;
    if jobs == 1 {
        return check_range(f, 2..=bound);
    }
    let parts: Vec<Result<Vec<Violation>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|j| scope.spawn(move || check_range(f, (2 + j..=bound).step_by(jobs as usize))))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verification worker panicked"))
            .collect()
    });
    let mut out = Vec::new();
    for part in parts {
        out.extend(part?);
    }
    out.sort();
    Ok(out)
}

/// Every coprime `2 ≤ m < m2` with `m·m2 ≤ bound` where the table is not
/// multiplicative.
pub fn check_multiplicativity(values: &ValueTable) -> Result<Vec<Violation>> {
    if values.get(1) != Some(&Q::from_integer(1.into())) {
        return Err(Error::BadUnitValue);
    }
    let bound = values.bound();
    let mut out = Vec::new();
    for m in 2..=bound {
        if m * (m + 1) > bound {
            break;
        }
        for m2 in m + 1..=bound / m {
            if m.gcd(&m2) != 1 {
                continue;
            }
            let lhs = values.value(m * m2)?;
            let rhs = values.value(m)? * values.value(m2)?;
            if lhs != rhs {
                out.push(Violation {
                    n: m * m2,
                    site: ViolationSite::Coprime { m, m2 },
                    lhs,
                    rhs,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multfn::{make_family, FamilySpec, FamilyTag};
    use crate::rational::q;

    #[test]
    fn identity_satisfies_equation() {
        let f = make_family(&FamilySpec::identity(), 200).unwrap();
        assert!(check_functional_equation(&f, 200).unwrap().is_empty());
        assert!(check_multiplicativity(&f.tabulate()).unwrap().is_empty());
    }

    #[test]
    fn square_fails_at_four() {
        let f = make_family(&FamilySpec::plain(FamilyTag::Square), 10).unwrap();
        let v = check_functional_equation(&f, 10).unwrap();
        assert_eq!(
            v[0],
            Violation {
                n: 4,
                site: ViolationSite::Split { s: 2, t: 2 },
                lhs: q(16),
                rhs: q(8)
            }
        );
    }

    #[test]
    fn case3_up_to_500() {
        let f = make_family(&FamilySpec::case3(q(7), q(-2)), 500).unwrap();
        assert!(check_functional_equation(&f, 500).unwrap().is_empty());
        // n = 99 = 2 + 97
        assert_eq!(f.evaluate(99).unwrap(), q(0));
        assert_eq!(f.evaluate(2).unwrap() + f.evaluate(97).unwrap(), q(0));
    }

    #[test]
    fn multiplicativity_violation() {
        let table = ValueTable::new(vec![q(1), q(1), q(1), q(0), q(0), q(5)]);
        let v = check_multiplicativity(&table).unwrap();
        assert_eq!(
            v,
            vec![Violation {
                n: 6,
                site: ViolationSite::Coprime { m: 2, m2: 3 },
                lhs: q(5),
                rhs: q(1)
            }]
        );
        let bad = ValueTable::new(vec![q(2), q(1)]);
        assert_eq!(
            check_multiplicativity(&bad).unwrap_err(),
            Error::BadUnitValue
        );
    }

    #[test]
    fn case4_is_multiplicative() {
        let f = make_family(&FamilySpec::case4(q(3)), 100).unwrap();
        assert!(check_multiplicativity(&f.tabulate()).unwrap().is_empty());
    }

    #[test]
    fn parallel_matches_serial() {
        let f = make_family(&FamilySpec::plain(FamilyTag::Square), 300).unwrap();
        let serial = check_functional_equation(&f, 300).unwrap();
        for jobs in [1, 3, 8] {
            assert_eq!(
                check_functional_equation_parallel(&f, 300, jobs).unwrap(),
                serial
            );
        }
    }

    #[test]
    fn bound_beyond_function_is_rejected() {
        let f = make_family(&FamilySpec::identity(), 50).unwrap();
        assert!(check_functional_equation(&f, 51).is_err());
    }
}
