//! Sparse multivariate polynomials over exact rationals.
//!
//! Unknowns are [`Atom`]s, one per integer `n` whose value `f(n)` has not been
//! pinned down. Terms live in a `BTreeMap` keyed by [`Monomial`], so two equal
//! polynomials always have identical term sequences and identical text.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{format_q, parse_q, Q};

/// The unknown value `f(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(pub u64);

impl Atom {
    pub fn n(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}", self.0)
    }
}

impl FromStr for Atom {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits = s
            .trim()
            .strip_prefix('f')
            .ok_or_else(|| format!("atom {s:?} must look like f<n>"))?;
        let n: u64 = digits
            .parse()
            .map_err(|e| format!("atom {s:?} must look like f<n>: {e}"))?;
        if n < 2 {
            return Err(format!("atom {s:?}: n must be at least 2"));
        }
        Ok(Atom(n))
    }
}

impl Serialize for Atom {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Atom {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Product of atom powers, sorted by atom with positive exponents.
///
/// Ordered by total degree first, then by the sorted power list, so the
/// constant monomial is the smallest.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Atom, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn atom(a: Atom) -> Self {
        Monomial(vec![(a, 1)])
    }

    pub fn from_powers(powers: impl IntoIterator<Item = (Atom, u32)>) -> Self {
        let mut acc: BTreeMap<Atom, u32> = BTreeMap::new();
        for (a, e) in powers {
            if e > 0 {
                *acc.entry(a).or_default() += e;
            }
        }
        Monomial(acc.into_iter().collect())
    }

    pub fn powers(&self) -> &[(Atom, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, a: Atom) -> u32 {
        self.0
            .binary_search_by_key(&a, |&(x, _)| x)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    /// The single atom of a degree-one monomial.
    pub fn as_linear(&self) -> Option<Atom> {
        match self.0.as_slice() {
            [(a, 1)] => Some(*a),
            _ => None,
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = self.0[i];
            let (b, eb) = other.0[j];
            match a.cmp(&b) {
                Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(a, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 == a {
                let d = other.0[j].1;
                if d > e {
                    return None;
                }
                if e > d {
                    out.push((a, e - d));
                }
                j += 1;
            } else if j < other.0.len() && other.0[j].0 < a {
                return None;
            } else {
                out.push((a, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|&(a, e)| {
                    let f = other.exponent(a);
                    (f > 0).then(|| (a, e.min(f)))
                })
                .collect(),
        )
    }

    pub fn without(&self, a: Atom) -> Monomial {
        Monomial(self.0.iter().copied().filter(|&(x, _)| x != a).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (a, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{a}")?;
            } else {
                write!(f, "{a}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Polynomial with no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn atom(a: Atom) -> Self {
        Poly::monomial(Monomial::atom(a), Q::one())
    }

    pub fn monomial(m: Monomial, c: Q) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Q> {
        self.terms.get(m)
    }

    /// The value of a constant polynomial (zero included).
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_nonzero_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms.contains_key(&Monomial::one())
    }

    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.terms
            .keys()
            .flat_map(|m| m.powers().iter().map(|&(a, _)| a))
            .collect()
    }

    pub fn contains(&self, a: Atom) -> bool {
        self.terms.keys().any(|m| m.exponent(a) > 0)
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Scaled so the leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
            None => Poly::zero(),
        }
    }

    /// Coefficient `c` when `a` occurs only in the single term `c*a`.
    pub fn linear_coefficient(&self, a: Atom) -> Option<Q> {
        let mut found = None;
        for (m, c) in &self.terms {
            let e = m.exponent(a);
            if e == 0 {
                continue;
            }
            if m.as_linear() == Some(a) && found.is_none() {
                found = Some(c.clone());
            } else {
                return None;
            }
        }
        found
    }

    /// Atoms that could be isolated by dividing through by a rational.
    pub fn linear_atoms(&self) -> Vec<Atom> {
        self.atoms()
            .into_iter()
            .filter(|&a| self.linear_coefficient(a).is_some())
            .collect()
    }

    /// Greatest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut iter = self.terms.keys();
        let Some(first) = iter.next() else {
            return Monomial::one();
        };
        iter.fold(first.clone(), |g, m| g.gcd(m))
    }

    pub fn div_monomial(&self, d: &Monomial) -> Option<Poly> {
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            out.insert(m.div(d)?, c.clone());
        }
        Some(Poly { terms: out })
    }

    pub fn mul_monomial(&self, d: &Monomial) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(d), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Replaces `a` by `value` everywhere.
    pub fn substitute(&self, a: Atom, value: &Poly) -> Poly {
        if !self.contains(a) {
            return self.clone();
        }
        let mut powers: Vec<Poly> = vec![Poly::one()];
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(a) as usize;
            if e == 0 {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            while powers.len() <= e {
                let next = &powers[powers.len() - 1] * value;
                powers.push(next);
            }
            let rest = m.without(a);
            for (vm, vc) in &powers[e].terms {
                out.add_term(rest.mul(vm), c * vc);
            }
        }
        out
    }

    /// Evaluates at a point; `None` when some atom has no value.
    pub fn evaluate(&self, point: &BTreeMap<Atom, Q>) -> Option<Q> {
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for &(a, e) in m.powers() {
                let v = point.get(&a)?;
                for _ in 0..e {
                    term *= v;
                }
            }
            total += term;
        }
        Some(total)
    }
}

impl From<Atom> for Poly {
    fn from(a: Atom) -> Self {
        Poly::atom(a)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for Poly {
    /// Highest terms first, e.g. `2*f2*f5 - f2 - f8`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = c.abs();
            if m.is_one() {
                write!(f, "{}", format_q(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_q(&abs))?;
            }
        }
        Ok(())
    }
}

impl FromStr for Poly {
    type Err = String;

    /// Inverse of `Display`; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err("empty polynomial".into());
        }
        let mut out = Poly::zero();
        let mut rest = compact.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let negative = match rest.as_bytes()[0] {
                b'-' => {
                    rest = &rest[1..];
                    true
                }
                b'+' if !first => {
                    rest = &rest[1..];
                    false
                }
                _ if first => false,
                _ => return Err(format!("expected sign in {s:?}")),
            };
            first = false;
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let term = &rest[..end];
            rest = &rest[end..];
            if term.is_empty() {
                return Err(format!("empty term in {s:?}"));
            }
            let mut coeff = Q::one();
            let mut powers = Vec::new();
            for factor in term.split('*') {
                if factor.starts_with('f') {
                    let (atom, exp) = match factor.split_once('^') {
                        Some((a, e)) => (a, e.parse::<u32>().map_err(|e| e.to_string())?),
                        None => (factor, 1),
                    };
                    powers.push((atom.parse::<Atom>()?, exp));
                } else {
                    coeff *= parse_q(factor)?;
                }
            }
            if negative {
                coeff = -coeff;
            }
            out.add_term(Monomial::from_powers(powers), coeff);
        }
        Ok(out)
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
