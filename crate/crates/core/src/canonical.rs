//! Bar-invariant lifts of PBW elements.
//!
//! Given the bar involution on a PBW basis, `bar(pbw_m) = sum_k A[m][k] pbw_k`
//! with `A` unitriangular for some order, the canonical element for `m` is the
//! unique bar-invariant `pbw_m + sum beta_k pbw_k` with every `beta_k` in
//! `v^-1 Z[v^-1]`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::arith::RationalFunc;
use crate::error::{Error, Result};

pub type Rows<K> = BTreeMap<K, BTreeMap<K, RationalFunc>>;

/// A linear order in which every row of `rows` only reaches later keys.
///
/// Ties are broken by the order of `keys`, so the result is deterministic.
pub fn topological_order<K: Ord + Clone + std::fmt::Display>(keys: &[K], rows: &Rows<K>) -> Result<Vec<K>> {
    let pos: BTreeMap<&K, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut indeg = vec![0usize; keys.len()];
    for (m, row) in rows {
        for k in row.keys() {
            if k != m {
                let j = *pos.get(k).ok_or_else(|| Error::Internal(format!("{k} is not a basis key")))?;
                indeg[j] += 1;
            }
        }
    }
    let mut ready: BTreeSet<usize> = (0..keys.len()).filter(|&i| indeg[i] == 0).collect();
    let mut out = Vec::with_capacity(keys.len());
    while let Some(i) = ready.pop_first() {
        out.push(keys[i].clone());
        if let Some(row) = rows.get(&keys[i]) {
            for k in row.keys() {
                if *k != keys[i] {
                    let j = pos[k];
                    indeg[j] -= 1;
                    if indeg[j] == 0 {
                        ready.insert(j);
                    }
                }
            }
        }
    }
    if out.len() != keys.len() {
        return Err(Error::Internal("bar matrix is not triangular in any order".into()));
    }
    Ok(out)
}

/// Coefficients `beta` of the canonical element for `target` in the PBW basis.
///
/// With `even` set the off-diagonal entries must also lie in `v^-2 Z[v^-2]`.
pub fn bar_invariant_lift<K: Ord + Clone + std::fmt::Display>(
    order: &[K],
    rows: &Rows<K>,
    target: &K,
    even: bool,
) -> Result<BTreeMap<K, RationalFunc>> {
    let start = order.iter().position(|k| k == target).ok_or_else(|| Error::Internal(format!("{target} not in order")))?;
    let pos: BTreeMap<&K, usize> = order.iter().enumerate().map(|(i, k)| (k, i)).collect();
    for (m, row) in rows {
        for (k, c) in row {
            if (k == m && !c.is_one()) || pos[k] < pos[m] {
                return Err(Error::Internal(format!("bar matrix entry ({m}, {k}) breaks unitriangularity")));
            }
        }
    }
    let mut beta: BTreeMap<K, RationalFunc> = BTreeMap::new();
    beta.insert(target.clone(), RationalFunc::one());
    for nu in &order[start + 1..] {
        let mut r = RationalFunc::zero();
        for (mu, b) in &beta {
            if let Some(a) = rows.get(mu).and_then(|row| row.get(nu)) {
                r += &(&b.bar() * a);
            }
        }
        if r.is_zero() {
            continue;
        }
        let l = r.to_laurent().ok_or_else(|| Error::Internal(format!("bar recursion at {nu} is not Laurent: {r}")))?;
        let neg = l.negative_part();
        // r must equal beta - bar(beta)
        if &neg - &neg.bar() != l {
            return Err(Error::Internal(format!("bar recursion at {nu}: {r} is not anti-invariant")));
        }
        if !neg.is_integral() {
            return Err(Error::Internal(format!("canonical coefficient at {nu} is not integral: {neg}")));
        }
        if even && neg.terms().keys().any(|e| e % 2 != 0) {
            return Err(Error::Internal(format!("canonical coefficient at {nu} has odd powers of v: {neg}")));
        }
        if !neg.is_zero() {
            beta.insert(nu.clone(), RationalFunc::from_laurent(&neg));
        }
    }
    Ok(beta)
}

/// Whether `c` lies in `v^-1 Z[v^-1]` (or `v^-2 Z[v^-2]` when `even`).
pub fn in_negative_ideal(c: &RationalFunc, even: bool) -> bool {
    match c.to_laurent() {
        Some(l) => {
            l.is_integral()
                && l.terms().keys().all(|&e| e < 0 && (!even || e % 2 == 0))
                && l.terms().values().all(|x| !x.is_zero())
        }
        None => false,
    }
}
