//! Multiplicative functions stored by their prime-power values.

mod sieve;
mod verify;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{q_u64, serde_q_opt, Q};

pub use sieve::FactorSieve;
pub use verify::{
    check_functional_equation, check_functional_equation_parallel, check_multiplicativity,
    Violation, ViolationSite,
};

/// Anything that can report `f(n)` for `1 ≤ n ≤ bound`.
pub trait ArithmeticFn {
    fn bound(&self) -> u64;
    fn value(&self, n: u64) -> Result<Q>;
}

/// A multiplicative function known on the prime powers up to `bound`.
#[derive(Clone, Debug)]
pub struct MultFn {
    bound: u64,
    prime_power_values: BTreeMap<u64, Q>,
    sieve: Arc<FactorSieve>,
}

impl MultFn {
    /// Builds `f` from a rule `(p, e) -> f(p^e)` applied to every prime power.
    pub fn from_prime_powers(bound: u64, mut rule: impl FnMut(u64, u32) -> Q) -> Self {
        let sieve = Arc::new(FactorSieve::new(bound));
        let prime_power_values = sieve
            .prime_powers()
            .map(|pp| {
                let (p, e) = sieve.factorize(pp)[0];
                (pp, rule(p, e))
            })
            .collect();
        MultFn {
            bound,
            prime_power_values,
            sieve,
        }
    }

    /// Zero on every prime power except those listed.
    pub fn supported_on(bound: u64, support: &[(u64, Q)]) -> Self {
        let lookup: BTreeMap<u64, Q> = support.iter().cloned().collect();
        Self::from_prime_powers(bound, |p, e| {
            lookup.get(&p.pow(e)).cloned().unwrap_or_else(Q::zero)
        })
    }

    pub fn prime_power_values(&self) -> &BTreeMap<u64, Q> {
        &self.prime_power_values
    }

    pub fn sieve(&self) -> &FactorSieve {
        &self.sieve
    }

    pub fn evaluate(&self, n: u64) -> Result<Q> {
        if n == 0 {
            return Err(Error::ZeroArgument);
        }
        if n > self.bound {
            return Err(Error::OutOfBound {
                n,
                bound: self.bound,
            });
        }
        let mut acc = Q::one();
        for part in self.sieve.prime_power_parts(n) {
            acc *= &self.prime_power_values[&part];
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc)
    }

    pub fn tabulate(&self) -> ValueTable {
        ValueTable::from_fn(self.bound, |n| self.evaluate(n).expect("n within bound"))
    }
}

impl ArithmeticFn for MultFn {
    fn bound(&self) -> u64 {
        self.bound
    }

    fn value(&self, n: u64) -> Result<Q> {
        self.evaluate(n)
    }
}

/// Flat table `n -> f(n)` for `1 ≤ n ≤ bound`, with no structure assumed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueTable {
    values: Vec<Q>,
}

impl ValueTable {
    /// `values[0]` is `f(1)`.
    pub fn new(values: Vec<Q>) -> Self {
        ValueTable { values }
    }

    pub fn from_fn(bound: u64, mut f: impl FnMut(u64) -> Q) -> Self {
        ValueTable {
            values: (1..=bound).map(&mut f).collect(),
        }
    }

    pub fn get(&self, n: u64) -> Option<&Q> {
        n.checked_sub(1).and_then(|i| self.values.get(i as usize))
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &Q)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| (i as u64 + 1, v))
    }
}

impl ArithmeticFn for ValueTable {
    fn bound(&self) -> u64 {
        self.values.len() as u64
    }

    fn value(&self, n: u64) -> Result<Q> {
        if n == 0 {
            return Err(Error::ZeroArgument);
        }
        self.get(n).cloned().ok_or(Error::OutOfBound {
            n,
            bound: self.values.len() as u64,
        })
    }
}

/// Solution families of the functional equation, plus two extras:
/// `CaseF3Only` (support {3}, not in the published list) and `Square`
/// (`f(n) = n²`, a known non-solution used as a falsification control).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyTag {
    Identity,
    Zero,
    Case3,
    Case4,
    Case5,
    CaseF3Only,
    Square,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 7] = [
        FamilyTag::Identity,
        FamilyTag::Zero,
        FamilyTag::Case3,
        FamilyTag::Case4,
        FamilyTag::Case5,
        FamilyTag::CaseF3Only,
        FamilyTag::Square,
    ];

    /// The five families of the classification theorem.
    pub const THEOREM: [FamilyTag; 5] = [
        FamilyTag::Identity,
        FamilyTag::Zero,
        FamilyTag::Case3,
        FamilyTag::Case4,
        FamilyTag::Case5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::Identity => "identity",
            FamilyTag::Zero => "zero",
            FamilyTag::Case3 => "case3",
            FamilyTag::Case4 => "case4",
            FamilyTag::Case5 => "case5",
            FamilyTag::CaseF3Only => "case_f3_only",
            FamilyTag::Square => "square",
        }
    }

    /// Parameter names this family requires.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            FamilyTag::Case3 => &["y", "w"],
            FamilyTag::Case4 => &["w"],
            FamilyTag::Case5 => &["v"],
            FamilyTag::CaseF3Only => &["y"],
            _ => &[],
        }
    }

    pub fn is_experimental(self) -> bool {
        matches!(self, FamilyTag::CaseF3Only)
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FamilyTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = FamilyTag::ALL.iter().map(|t| t.name()).collect();
                format!("unknown family {s:?}; expected one of {}", names.join(", "))
            })
    }
}

/// A family tag with its parameters `y = f(3)`, `w = f(9)`, `v = f(11)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub tag: FamilyTag,
    #[serde(with = "serde_q_opt", default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Q>,
    #[serde(with = "serde_q_opt", default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Q>,
    #[serde(with = "serde_q_opt", default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Q>,
}

impl FamilySpec {
    pub fn plain(tag: FamilyTag) -> Self {
        FamilySpec {
            tag,
            y: None,
            w: None,
            v: None,
        }
    }

    pub fn identity() -> Self {
        Self::plain(FamilyTag::Identity)
    }

    pub fn zero() -> Self {
        Self::plain(FamilyTag::Zero)
    }

    pub fn case3(y: Q, w: Q) -> Self {
        FamilySpec {
            y: Some(y),
            w: Some(w),
            ..Self::plain(FamilyTag::Case3)
        }
    }

    pub fn case4(w: Q) -> Self {
        FamilySpec {
            w: Some(w),
            ..Self::plain(FamilyTag::Case4)
        }
    }

    pub fn case5(v: Q) -> Self {
        FamilySpec {
            v: Some(v),
            ..Self::plain(FamilyTag::Case5)
        }
    }

    pub fn case_f3_only(y: Q) -> Self {
        FamilySpec {
            y: Some(y),
            ..Self::plain(FamilyTag::CaseF3Only)
        }
    }

    fn param(&self, name: &'static str) -> Option<&Q> {
        match name {
            "y" => self.y.as_ref(),
            "w" => self.w.as_ref(),
            "v" => self.v.as_ref(),
            _ => None,
        }
    }

    /// Checks that exactly the required parameters are present and nonzero.
    pub fn validate(&self) -> Result<()> {
        let family = self.tag.name();
        let required = self.tag.parameters();
        for name in ["y", "w", "v"] {
            match (required.contains(&name), self.param(name)) {
                (true, None) => {
                    return Err(Error::MissingParameter {
                        family,
                        param: name,
                    })
                }
                (true, Some(v)) if v.is_zero() => {
                    return Err(Error::ZeroParameter {
                        family,
                        param: name,
                    })
                }
                (false, Some(_)) => {
                    return Err(Error::UnexpectedParameter {
                        family,
                        param: name,
                    })
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// The `(n, f(n))` prime-power support of a sparse family.
    fn support(&self) -> Vec<(u64, Q)> {
        let mut out = Vec::new();
        if let Some(y) = &self.y {
            out.push((3, y.clone()));
        }
        if let Some(w) = &self.w {
            out.push((9, w.clone()));
        }
        if let Some(v) = &self.v {
            out.push((11, v.clone()));
        }
        out
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag)?;
        for (name, value) in [("y", &self.y), ("w", &self.w), ("v", &self.v)] {
            if let Some(v) = value {
                write!(f, " {name}={}", crate::rational::format_q(v))?;
            }
        }
        Ok(())
    }
}

pub fn make_family(spec: &FamilySpec, bound: u64) -> Result<MultFn> {
    spec.validate()?;
    Ok(match spec.tag {
        FamilyTag::Identity => MultFn::from_prime_powers(bound, |p, e| q_u64(p.pow(e))),
        FamilyTag::Square => MultFn::from_prime_powers(bound, |p, e| q_u64(p.pow(2 * e))),
        FamilyTag::Zero => MultFn::supported_on(bound, &[]),
        FamilyTag::Case3 | FamilyTag::Case4 | FamilyTag::Case5 | FamilyTag::CaseF3Only => {
            MultFn::supported_on(bound, &spec.support())
        }
    })
}

/// Names the family a concrete table belongs to, if any.
///
/// Sparse families are recognized by their support among `n ≥ 2`: exactly
/// `{3, 9}`, `{9}`, `{11}`, `{3}`, or empty. Values are not cross-checked
/// against multiplicativity here.
pub fn identify_family(table: &ValueTable) -> Option<FamilySpec> {
    if table.get(1).is_none_or(|v| !v.is_one()) {
        return None;
    }
    if table.iter().all(|(n, v)| *v == q_u64(n)) {
        return Some(FamilySpec::identity());
    }
    let support: Vec<u64> = table
        .iter()
        .filter(|(n, v)| *n >= 2 && !v.is_zero())
        .map(|(n, _)| n)
        .collect();
    let at = |n: u64| table.get(n).cloned().expect("support entry");
    match support.as_slice() {
        [] => Some(FamilySpec::zero()),
        [3, 9] => Some(FamilySpec::case3(at(3), at(9))),
        [9] => Some(FamilySpec::case4(at(9))),
        [11] => Some(FamilySpec::case5(at(11))),
        [3] => Some(FamilySpec::case_f3_only(at(3))),
        _ => None,
    }
}
