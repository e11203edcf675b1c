//! Linear combination of constraints, treating each monomial as a column.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::poly::{Atom, Monomial, Poly};
use crate::rational::Q;

/// Column order: higher degree first; among equal degree, monomials with fewer
/// protected atoms first, then larger monomials first. The constant column is
/// always last, so a row whose pivot is a linear atom only carries linear and
/// constant terms after it.
fn column_key(
    m: &Monomial,
    protected: &BTreeSet<Atom>,
) -> (Reverse<u32>, usize, Reverse<Monomial>) {
    let guarded = m
        .powers()
        .iter()
        .filter(|(a, _)| protected.contains(a))
        .count();
    (Reverse(m.degree()), guarded, Reverse(m.clone()))
}

/// Reduced row echelon form of the span of `polys`.
///
/// Output rows have leading coefficient 1 on their pivot column, no two rows
/// share a pivot column, pivot columns appear in no other row, and rows are
/// listed by pivot column. Zero rows are dropped. The result depends only on
/// the span, not on the order of the input.
pub fn reduced_echelon(polys: &[Poly], protected: &BTreeSet<Atom>) -> Vec<Poly> {
    let monomials: BTreeSet<&Monomial> = polys
        .iter()
        .flat_map(|p| p.terms().map(|(m, _)| m))
        .collect();
    let mut columns: Vec<&Monomial> = monomials.into_iter().collect();
    columns.sort_by_cached_key(|m| column_key(m, protected));
    let index: BTreeMap<&Monomial, usize> =
        columns.iter().enumerate().map(|(i, m)| (*m, i)).collect();

    let mut rows: Vec<BTreeMap<usize, Q>> = polys
        .iter()
        .map(|p| p.terms().map(|(m, c)| (index[m], c.clone())).collect())
        .filter(|r: &BTreeMap<usize, Q>| !r.is_empty())
        .collect();

    let mut pivots: Vec<(usize, BTreeMap<usize, Q>)> = Vec::new();
    for col in 0..columns.len() {
        let Some(pos) = rows.iter().position(|r| r.contains_key(&col)) else {
            continue;
        };
        let mut pivot = rows.swap_remove(pos);
        let inv = pivot[&col].recip();
        for v in pivot.values_mut() {
            *v *= &inv;
        }
        for r in rows.iter_mut().chain(pivots.iter_mut().map(|(_, r)| r)) {
            if let Some(factor) = r.get(&col).cloned() {
                subtract_scaled(r, &pivot, &factor);
            }
        }
        rows.retain(|r| !r.is_empty());
        pivots.push((col, pivot));
    }
    debug_assert!(rows.is_empty());

    pivots
        .into_iter()
        .map(|(_, row)| Poly::from_terms(row.into_iter().map(|(i, c)| (columns[i].clone(), c))))
        .collect()
}

fn subtract_scaled(row: &mut BTreeMap<usize, Q>, pivot: &BTreeMap<usize, Q>, factor: &Q) {
    for (col, v) in pivot {
        let entry = row.entry(*col).or_insert_with(Q::zero);
        *entry -= v * factor;
        if entry.is_zero() {
            row.remove(col);
        }
    }
}

/// The polys normalized to leading coefficient one, as a set.
pub fn monic_set<'a>(polys: impl IntoIterator<Item = &'a Poly>) -> BTreeSet<String> {
    polys
        .into_iter()
        .map(|p| {
            let m = p.monic();
            debug_assert!(m.is_zero() || m.leading().is_some_and(|(_, c)| c.is_one()));
            m.to_string()
        })
        .collect()
}
