//! Oracles written independently of the library code under test.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

pub type Q = BigRational;

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `table[k][n]`: `n` is a sum of exactly `k` positive squares.
pub fn k_square_table(max_k: usize, limit: usize) -> Vec<Vec<bool>> {
    let mut table = vec![vec![false; limit + 1]; max_k + 1];
    table[0][0] = true;
    for k in 1..=max_k {
        for n in 1..=limit {
            let mut x = 1;
            while x * x <= n {
                if table[k - 1][n - x * x] {
                    table[k][n] = true;
                    break;
                }
                x += 1;
            }
        }
    }
    table
}

/// Sorted, deduplicated `a² + b²` with `a, b ≥ 1`, up to `limit`.
pub fn two_square_values(limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut a = 1;
    while 2 * a * a <= limit {
        let mut b = a;
        while a * a + b * b <= limit {
            out.push(a * a + b * b);
            b += 1;
        }
        a += 1;
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Prime factorization by trial division.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Evaluates the multiplicative function given on prime powers by `rule`.
pub fn eval_multiplicative(n: u64, rule: &impl Fn(u64, u32) -> Q) -> Q {
    factor(n)
        .into_iter()
        .fold(int(1), |acc, (p, e)| acc * rule(p, e))
}

/// Every `(n, s, t)` with `s, t` sums of two positive squares and
/// `n = s + t ≤ limit` where `f(n) ≠ f(s) + f(t)`.
pub fn equation_failures(values: &BTreeMap<u64, Q>, limit: u64) -> Vec<(u64, u64, u64)> {
    let sums = two_square_values(limit);
    let mut out = Vec::new();
    for (i, &s) in sums.iter().enumerate() {
        for &t in &sums[i..] {
            if s + t > limit {
                break;
            }
            if values[&(s + t)] != &values[&s] + &values[&t] {
                out.push((s + t, s, t));
            }
        }
    }
    out
}

pub fn random_nonzero(rng: &mut impl Rng) -> Q {
    let mut num = 0i64;
    while num == 0 {
        num = rng.random_range(-50..=50);
    }
    Q::new(num.into(), rng.random_range(1i64..=12).into())
}
