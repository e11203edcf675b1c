//! Representations of integers as sums of nonzero squares.
//!
//! Two-square membership is read from a table built once per process; the
//! k-square criterion has a closed form ([`dubouis_predict`]) and a
//! brute-force oracle ([`SquareOracle`]) that never looks at the closed form.

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bound of the shared two-square membership table.
pub const TWO_SQUARE_TABLE_BOUND: u64 = 1 << 16;

/// `n = a² + b²` with `1 ≤ a ≤ b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SquarePair {
    pub a: u64,
    pub b: u64,
}

impl SquarePair {
    pub fn value(&self) -> u64 {
        self.a * self.a + self.b * self.b
    }
}

/// `n = s + t` with `s ≤ t`, both sums of two nonzero squares.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FourSplit {
    pub s: u64,
    pub t: u64,
}

impl FourSplit {
    pub fn n(&self) -> u64 {
        self.s + self.t
    }
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// All `(a, b)` with `1 ≤ a ≤ b` and `a² + b² = n`, ascending in `a`.
pub fn two_square_reps(n: u64) -> Vec<SquarePair> {
    let mut reps = Vec::new();
    let mut a = 1;
    while 2 * a * a <= n {
        let rest = n - a * a;
        let b = isqrt(rest);
        if b * b == rest {
            reps.push(SquarePair { a, b });
        }
        a += 1;
    }
    reps
}

/// Precomputed membership table for sums of two nonzero squares.
#[derive(Clone, Debug)]
pub struct TwoSquareTable {
    member: Vec<bool>,
}

impl TwoSquareTable {
    pub fn new(bound: u64) -> Self {
        let mut member = vec![false; bound as usize + 1];
        let mut a = 1u64;
        while 2 * a * a <= bound {
            let mut b = a;
            while a * a + b * b <= bound {
                member[(a * a + b * b) as usize] = true;
                b += 1;
            }
            a += 1;
        }
        TwoSquareTable { member }
    }

    pub fn bound(&self) -> u64 {
        self.member.len() as u64 - 1
    }

    pub fn contains(&self, n: u64) -> bool {
        match self.member.get(n as usize) {
            Some(&m) => m,
            None => !two_square_reps(n).is_empty(),
        }
    }
}

fn shared_table() -> &'static TwoSquareTable {
    static TABLE: OnceLock<TwoSquareTable> = OnceLock::new();
    TABLE.get_or_init(|| TwoSquareTable::new(TWO_SQUARE_TABLE_BOUND))
}

pub fn is_two_square(n: u64) -> bool {
    shared_table().contains(n)
}

/// All splits `n = s + t`, `s ≤ t`, ascending in `s`. Empty exactly when `n`
/// is not a sum of four nonzero squares.
pub fn four_splits(n: u64) -> Vec<FourSplit> {
    let local;
    let table = if n <= TWO_SQUARE_TABLE_BOUND {
        shared_table()
    } else {
        local = TwoSquareTable::new(n);
        &local
    };
    (2..=n / 2)
        .filter(|&s| table.contains(s) && table.contains(n - s))
        .map(|s| FourSplit { s, t: n - s })
        .collect()
}

/// Memoized search for `n` as a sum of exactly `k` nonzero squares.
///
/// Squares are chosen in non-increasing order; the state is `(n, k, cap)`
/// where `cap` bounds the next root. The cache persists across queries.
#[derive(Debug, Default)]
pub struct SquareOracle {
    memo: HashMap<(u64, u32, u64), bool>,
}

impl SquareOracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn represents(&mut self, n: u64, k: u32) -> bool {
        self.search(n, k, isqrt(n))
    }

    fn search(&mut self, n: u64, k: u32, cap: u64) -> bool {
        if k == 0 {
            return n == 0;
        }
        if n < k as u64 {
            return false;
        }
        // every remaining root is at least 1, so the next root is at most isqrt(n - (k - 1))
        let cap = cap.min(isqrt(n - (k as u64 - 1)));
        if cap == 0 || n > k as u64 * cap * cap {
            return false;
        }
        if k == 1 {
            return cap * cap == n;
        }
        if let Some(&hit) = self.memo.get(&(n, k, cap)) {
            return hit;
        }
        let mut found = false;
        for a in (1..=cap).rev() {
            if self.search(n - a * a, k - 1, a) {
                found = true;
                break;
            }
        }
        self.memo.insert((n, k, cap), found);
        found
    }
}

/// One-shot form of [`SquareOracle::represents`].
pub fn brute_k_squares(n: u64, k: u32) -> bool {
    SquareOracle::new().represents(n, k)
}

/// Integers that are not sums of `k` nonzero squares, as a finite list plus
/// seeds `g` standing for the families `g·4^m`, `m ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionSpec {
    pub k: u32,
    pub finite_exceptions: BTreeSet<u64>,
    pub geometric_seeds: BTreeSet<u64>,
}

impl ExceptionSpec {
    pub fn for_k(k: u32) -> Result<Self> {
        let k64 = k as u64;
        let (finite, seeds): (BTreeSet<u64>, BTreeSet<u64>) = match k {
            0..=3 => return Err(Error::NoClosedForm { k }),
            4 => ([1, 3, 5, 9, 11, 17, 29, 41].into(), [2, 6, 14].into()),
            _ => {
                let mut finite: BTreeSet<u64> = (1..k64).collect();
                finite.extend([1, 2, 4, 5, 7, 10, 13].iter().map(|d| k64 + d));
                if k == 5 {
                    finite.insert(33);
                }
                (finite, BTreeSet::new())
            }
        };
        Ok(ExceptionSpec {
            k,
            finite_exceptions: finite,
            geometric_seeds: seeds,
        })
    }

    pub fn excludes(&self, n: u64) -> bool {
        if self.finite_exceptions.contains(&n) {
            return true;
        }
        if self.geometric_seeds.is_empty() || n == 0 {
            return false;
        }
        let mut residue = n;
        loop {
            if self.geometric_seeds.contains(&residue) {
                return true;
            }
            if !residue.is_multiple_of(4) {
                return false;
            }
            residue /= 4;
        }
    }
}

/// Whether `n` is a sum of `k ≥ 4` nonzero squares, by the closed-form
/// exception lists.
pub fn dubouis_predict(n: u64, k: u32) -> Result<bool> {
    Ok(!ExceptionSpec::for_k(k)?.excludes(n))
}

pub fn exceptions_up_to(k: u32, limit: u64) -> Result<Vec<u64>> {
    let spec = ExceptionSpec::for_k(k)?;
    Ok((1..=limit).filter(|&n| spec.excludes(n)).collect())
}
