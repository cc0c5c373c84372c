//! Partitions, multipartitions and the statistics attached to them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::{phi, IntPoly, Rat, RationalFunc};
use crate::error::{Error, Result};

/// Largest weight accepted by [`enumerate_partitions`] unless overridden.
pub const DEFAULT_PARTITION_BOUND: u32 = 30;

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Build from parts in any order; zero parts are dropped.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    /// Build from parts that must already be weakly decreasing and positive.
    pub fn from_parts(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!("{parts:?} is not a partition")));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The one-row partition `(r)`.
    pub fn row(r: u32) -> Self {
        Partition::new(vec![r])
    }

    /// The one-column partition `(1^m)`.
    pub fn column(m: u32) -> Self {
        Partition(vec![1; m as usize])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `i`-th part, 0-based; zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let top = self.part(0);
        Partition((1..=top).map(|i| self.0.iter().filter(|&&p| p >= i).count() as u32).collect())
    }

    pub fn multiplicity(&self, r: u32) -> u32 {
        self.0.iter().filter(|&&p| p == r).count() as u32
    }

    /// Map part-size to multiplicity.
    pub fn multiplicities(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for &p in &self.0 {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    /// `n(lambda) = sum (i - 1) lambda_i`.
    pub fn n_stat(&self) -> u64 {
        self.0.iter().enumerate().map(|(i, &p)| i as u64 * p as u64).sum()
    }

    /// Order of the centraliser of a permutation of cycle type `lambda`.
    pub fn z_stat(&self) -> BigInt {
        let mut z = BigInt::one();
        for (r, m) in self.multiplicities() {
            for k in 1..=m {
                z *= BigInt::from(k) * BigInt::from(r);
            }
        }
        z
    }

    /// `z_lambda * prod_r (1 - t^r)^{-m_r}`.
    pub fn z_t(&self) -> RationalFunc {
        let mut den = IntPoly::one();
        for &p in &self.0 {
            den = &den * &(&IntPoly::one() - &IntPoly::monomial(Rat::one(), p as usize));
        }
        RationalFunc::new(IntPoly::constant(Rat::from_integer(self.z_stat())), den)
            .expect("nonzero denominator")
    }

    /// `b_lambda(t) = prod_r phi_{m_r}(t)`.
    pub fn b_t(&self) -> IntPoly {
        self.multiplicities().values().fold(IntPoly::one(), |acc, &m| &acc * &phi(m as usize))
    }

    pub fn stats(&self) -> PartitionStats {
        PartitionStats {
            n_stat: self.n_stat(),
            z_stat: self.z_stat(),
            z_t: self.z_t(),
            b_t: self.b_t(),
            length: self.len(),
            weight: self.weight(),
            multiplicities: self.multiplicities(),
        }
    }

    /// Dominance order; only defined between partitions of equal weight.
    pub fn dominance_leq(&self, other: &Partition) -> Result<bool> {
        let (a, b) = (self.weight(), other.weight());
        if a != b {
            return Err(Error::WeightMismatch(a, b));
        }
        Ok(self.dominated_by(other))
    }

    /// Dominance comparison assuming equal weights.
    pub(crate) fn dominated_by(&self, other: &Partition) -> bool {
        let (mut s, mut t) = (0u32, 0u32);
        for i in 0..self.len().max(other.len()) {
            s += self.part(i);
            t += other.part(i);
            if s > t {
                return false;
            }
        }
        true
    }

    /// `dim Hom(M_lambda, M_mu) = sum_{i,j} min(lambda_i, mu_j)`.
    pub fn hom_dim(&self, other: &Partition) -> u64 {
        self.0.iter().flat_map(|&a| other.0.iter().map(move |&b| a.min(b) as u64)).sum()
    }

    /// `a_lambda(T) = T^{2n(lambda) + |lambda|} b_lambda(T^{-1})`, the order of `Aut(M_lambda)`.
    pub fn aut_poly(&self) -> IntPoly {
        let deg = 2 * self.n_stat() as usize + self.weight() as usize;
        reflected_phi_product(deg, self.multiplicities().values().copied())
    }

    /// Parts of both, merged.
    pub fn union(&self, other: &Partition) -> Partition {
        Partition::new(self.0.iter().chain(other.0.iter()).copied().collect())
    }

    /// Part-wise sum.
    pub fn sum(&self, other: &Partition) -> Partition {
        Partition((0..self.len().max(other.len())).map(|i| self.part(i) + other.part(i)).collect())
    }

    /// `(lambda union mu, lambda + mu)`, checking `(lambda union mu)' = lambda' + mu'`.
    pub fn union_and_sum(&self, other: &Partition) -> Result<(Partition, Partition)> {
        let u = self.union(other);
        if u.conjugate() != self.conjugate().sum(&other.conjugate()) {
            return Err(Error::Internal(format!("union/sum duality fails for {self} and {other}")));
        }
        Ok((u, self.sum(other)))
    }
}

// T^deg * prod_k phi_{m_k}(T^{-1}) as a polynomial in T.
fn reflected_phi_product(deg: usize, mults: impl Iterator<Item = u32>) -> IntPoly {
    let mut acc = IntPoly::one();
    let mut used = 0usize;
    for m in mults {
        for k in 1..=m as usize {
            acc = &acc * &(&IntPoly::monomial(Rat::one(), k) - &IntPoly::one());
            used += k;
        }
    }
    acc.shift(deg - used)
}

/// Everything [`Partition::stats`] reports.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionStats {
    pub n_stat: u64,
    pub z_stat: BigInt,
    pub z_t: RationalFunc,
    pub b_t: IntPoly,
    pub length: usize,
    pub weight: u32,
    pub multiplicities: BTreeMap<u32, u32>,
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Comma-separated parts in any order; `""`, `"0"` and `"()"` give the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad part {p:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Partition::new(parts))
    }
}

/// All partitions of `d` in decreasing lexicographic order, up to the default bound.
pub fn enumerate_partitions(d: u32) -> Result<Vec<Partition>> {
    enumerate_partitions_bounded(d, DEFAULT_PARTITION_BOUND)
}

pub fn enumerate_partitions_bounded(d: u32, bound: u32) -> Result<Vec<Partition>> {
    if d > bound {
        return Err(Error::BoundExceeded(format!("partitions of {d} (bound {bound})")));
    }
    Ok(partitions(d))
}

/// All partitions of `d`, decreasing lexicographic order.
pub fn partitions(d: u32) -> Vec<Partition> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(d, d, &mut Vec::new(), &mut out);
    out
}

/// Dimension vector of a representation of the cyclic quiver.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimensionVector(pub Vec<u32>);

impl DimensionVector {
    pub fn zero(n: usize) -> Self {
        DimensionVector(vec![0; n])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Entry at vertex `i`, 1-based.
    pub fn at(&self, i: usize) -> u32 {
        self.0[i - 1]
    }

    pub fn add(&self, other: &DimensionVector) -> DimensionVector {
        DimensionVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &DimensionVector) -> Option<DimensionVector> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<_>>().map(DimensionVector)
    }

    pub fn as_i64(&self) -> Vec<i64> {
        self.0.iter().map(|&x| x as i64).collect()
    }
}

/// Dimension vector of `M_(i;l)`: the `l` vertices `i, i+1, ..., i+l-1` taken mod `n`.
pub fn indec_dim_vector(i: usize, l: u32, n: usize) -> Result<DimensionVector> {
    if n == 0 || i == 0 || i > n {
        return Err(Error::InvalidArgument(format!("vertex {i} out of range 1..={n}")));
    }
    let mut d = vec![0u32; n];
    for k in 0..l as usize {
        d[(i - 1 + k) % n] += 1;
    }
    Ok(DimensionVector(d))
}

/// An `n`-tuple of partitions; component `i` lists the lengths of the
/// indecomposable summands with socle at vertex `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiPartition(Vec<Partition>);

/// Where a multipartition sits relative to the centre.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Periodicity {
    Aperiodic,
    CompletelyPeriodic,
    Neither,
}

impl MultiPartition {
    pub fn new(components: Vec<Partition>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument("a multipartition needs at least one component".into()));
        }
        Ok(MultiPartition(components))
    }

    pub fn empty(n: usize) -> Self {
        MultiPartition(vec![Partition::empty(); n])
    }

    /// From a single partition, as a rank-one multipartition.
    pub fn from_partition(p: Partition) -> Self {
        MultiPartition(vec![p])
    }

    /// One part (or none, for zero) per vertex: the single-row index `u_(m_1 ... m_n)`.
    pub fn from_rows(rows: &[u32]) -> Self {
        MultiPartition(rows.iter().map(|&r| Partition::new(vec![r])).collect())
    }

    /// The indecomposable `M_(i;l)` in rank `n`.
    pub fn indecomposable(i: usize, l: u32, n: usize) -> Self {
        let mut m = Self::empty(n);
        m.0[i - 1] = Partition::row(l);
        m
    }

    /// The semisimple module with the given multiplicity at each vertex.
    pub fn semisimple(d: &DimensionVector) -> Self {
        MultiPartition(d.0.iter().map(|&k| Partition::column(k)).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[Partition] {
        &self.0
    }

    /// Component at vertex `i`, 1-based.
    pub fn component(&self, i: usize) -> &Partition {
        &self.0[i - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|p| p.is_empty())
    }

    /// Total dimension `sum |lambda^i|`.
    pub fn size(&self) -> u32 {
        self.0.iter().map(|p| p.weight()).sum()
    }

    /// `(vertex, length)` for every indecomposable summand, 1-based vertices.
    pub fn summands(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().enumerate().flat_map(|(i, p)| p.parts().iter().map(move |&l| (i + 1, l)))
    }

    pub fn dim_vector(&self) -> DimensionVector {
        let n = self.rank();
        let mut d = vec![0u32; n];
        for (i, l) in self.summands() {
            for k in 0..l as usize {
                d[(i - 1 + k) % n] += 1;
            }
        }
        DimensionVector(d)
    }

    /// Multiplicity of `M_(i;l)` as a summand.
    pub fn multiplicity(&self, i: usize, l: u32) -> u32 {
        self.component(i).multiplicity(l)
    }

    /// `dim Hom(M_self, M_other)`.
    pub fn hom_dim(&self, other: &MultiPartition) -> Result<u64> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch(self.rank(), other.rank()));
        }
        let n = self.rank() as i64;
        let mut total = 0u64;
        for (i, l) in self.summands() {
            for (j, m) in other.summands() {
                total += hom_count(i as i64, l as i64, j as i64, m as i64, n);
            }
        }
        Ok(total)
    }

    /// `a(T) = T^h prod_{(i;l)} phi_{m_(i;l)}(T^{-1})` with `h = dim End`.
    pub fn aut_poly(&self) -> IntPoly {
        let h = self.hom_dim(self).expect("same rank") as usize;
        let mults = self.0.iter().flat_map(|p| p.multiplicities().into_values().collect::<Vec<_>>());
        reflected_phi_product(h, mults)
    }

    pub fn periodicity(&self) -> Periodicity {
        if self.0.windows(2).all(|w| w[0] == w[1]) {
            return Periodicity::CompletelyPeriodic;
        }
        let sizes: std::collections::BTreeSet<u32> =
            self.0.iter().flat_map(|p| p.parts().iter().copied()).collect();
        if sizes.iter().all(|&r| self.0.iter().any(|p| p.multiplicity(r) == 0)) {
            Periodicity::Aperiodic
        } else {
            Periodicity::Neither
        }
    }

    /// Componentwise union: the direct sum of the modules.
    pub fn direct_sum(&self, other: &MultiPartition) -> Result<MultiPartition> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch(self.rank(), other.rank()));
        }
        Ok(MultiPartition(self.0.iter().zip(&other.0).map(|(a, b)| a.union(b)).collect()))
    }
}

// |{ max(0, l-m) <= r < l : r = j - i mod n }|
fn hom_count(i: i64, l: i64, j: i64, m: i64, n: i64) -> u64 {
    let lo = (l - m).max(0);
    let target = (j - i).rem_euclid(n);
    (lo..l).filter(|r| r.rem_euclid(n) == target).count() as u64
}

impl fmt::Display for MultiPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comps: Vec<String> = self
            .0
            .iter()
            .map(|p| {
                if p.is_empty() {
                    "0".to_string()
                } else {
                    p.parts().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
                }
            })
            .collect();
        write!(f, "({})", comps.join(";"))
    }
}

impl fmt::Debug for MultiPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for MultiPartition {
    type Err = Error;

    /// Semicolon-separated partitions, e.g. `"2,1;0;1"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let comps = s.split(';').map(Partition::from_str).collect::<Result<Vec<_>>>()?;
        MultiPartition::new(comps)
    }
}

/// All dimension vectors of rank `n` with total dimension `t`.
pub fn compositions_of(t: u32, n: usize) -> Vec<DimensionVector> {
    fn go(left: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<DimensionVector>) {
        if slots == 1 {
            cur.push(left);
            out.push(DimensionVector(cur.clone()));
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k);
            go(left - k, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(t, n, &mut Vec::new(), &mut out);
    }
    out
}

/// All rank-`n` multipartitions with dimension vector `d`, in a fixed order.
pub fn multipartitions_with_dim(d: &DimensionVector) -> Vec<MultiPartition> {
    let n = d.rank();
    let total = d.total();
    let mut out = Vec::new();
    let mut cur: Vec<Partition> = Vec::with_capacity(n);
    fn go(
        k: usize,
        rest: u32,
        n: usize,
        d: &DimensionVector,
        acc: &mut Vec<u32>,
        cur: &mut Vec<Partition>,
        out: &mut Vec<MultiPartition>,
    ) {
        if k == n {
            if rest == 0 && acc == &d.0 {
                out.push(MultiPartition(cur.clone()));
            }
            return;
        }
        for w in (0..=rest).rev() {
            for p in partitions(w) {
                // add the summands of p placed at vertex k+1
                let mut ok = true;
                for &l in p.parts() {
                    for s in 0..l as usize {
                        acc[(k + s) % n] += 1;
                    }
                }
                if acc.iter().zip(&d.0).any(|(a, b)| a > b) {
                    ok = false;
                }
                if ok {
                    cur.push(p.clone());
                    go(k + 1, rest - w, n, d, acc, cur, out);
                    cur.pop();
                }
                for &l in p.parts() {
                    for s in 0..l as usize {
                        acc[(k + s) % n] -= 1;
                    }
                }
            }
        }
    }
    let mut acc = vec![0u32; n];
    go(0, total, n, d, &mut acc, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::{Signed, Zero};

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec())
    }

    fn mp(s: &str) -> MultiPartition {
        s.parse().unwrap()
    }

    // Euler's pentagonal recurrence, independent of the enumerator.
    fn partition_count(n: usize) -> i64 {
        let mut pc = vec![0i64; n + 1];
        pc[0] = 1;
        for m in 1..=n {
            let mut k = 1i64;
            loop {
                let g1 = (k * (3 * k - 1) / 2) as usize;
                if g1 > m {
                    break;
                }
                let sign = if k % 2 == 1 { 1 } else { -1 };
                pc[m] += sign * pc[m - g1];
                let g2 = (k * (3 * k + 1) / 2) as usize;
                if g2 <= m {
                    pc[m] += sign * pc[m - g2];
                }
                k += 1;
            }
        }
        pc[n]
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(p(&[4, 3, 1]).conjugate(), p(&[3, 2, 2, 1]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
        assert_eq!(p(&[2, 2]).conjugate(), p(&[2, 2]));
    }

    #[test]
    fn dominance_examples() {
        assert!(p(&[2, 2]).dominance_leq(&p(&[3, 1])).unwrap());
        assert!(p(&[3, 1]).dominance_leq(&p(&[3, 1])).unwrap());
        assert!(!p(&[3, 1, 1, 1]).dominance_leq(&p(&[2, 2, 2])).unwrap());
        assert!(!p(&[2, 2, 2]).dominance_leq(&p(&[3, 1, 1, 1])).unwrap());
        assert_eq!(p(&[2]).dominance_leq(&p(&[1])), Err(Error::WeightMismatch(2, 1)));
    }

    #[test]
    fn stats_examples() {
        assert_eq!(p(&[1, 1, 1]).z_stat(), BigInt::from(6));
        let e = Partition::empty().stats();
        assert_eq!((e.n_stat, e.z_stat, e.b_t), (0, BigInt::from(1), IntPoly::one()));
        let s = p(&[2, 1]).stats();
        assert_eq!(s.n_stat, 1);
        assert_eq!(s.z_stat, BigInt::from(2));
        let expected = RationalFunc::new(
            IntPoly::from_int(2),
            &IntPoly::from_ints(&[1, 0, -1]) * &IntPoly::from_ints(&[1, -1]),
        )
        .unwrap();
        assert_eq!(s.z_t, expected);
    }

    #[test]
    fn aut_poly_examples() {
        assert_eq!(p(&[1]).aut_poly(), IntPoly::from_ints(&[-1, 1]));
        assert_eq!(p(&[1, 1]).aut_poly(), IntPoly::from_ints(&[0, 1, -1, -1, 1]));
        assert_eq!(p(&[2]).aut_poly(), IntPoly::from_ints(&[0, -1, 1]));
        for d in 0..=8 {
            for l in partitions(d) {
                let a = l.aut_poly();
                assert!(a.is_monic() || l.is_empty());
                assert_eq!(a.degree(), Some(2 * l.n_stat() as usize + d as usize));
            }
        }
    }

    #[test]
    fn hom_dim_examples() {
        assert_eq!(p(&[2]).hom_dim(&p(&[1])), 1);
        assert_eq!(Partition::empty().hom_dim(&p(&[3, 2])), 0);
        // 2 + 1 + 1 + 1 = 2n((2,1)) + 3
        assert_eq!(p(&[2, 1]).hom_dim(&p(&[2, 1])), 5);
    }

    #[test]
    fn union_and_sum_examples() {
        assert_eq!(p(&[2, 1]).union_and_sum(&p(&[1])).unwrap(), (p(&[2, 1, 1]), p(&[3, 1])));
        let l = p(&[3, 1]);
        assert_eq!(l.union_and_sum(&Partition::empty()).unwrap(), (l.clone(), l));
        assert_eq!(p(&[2]).union_and_sum(&p(&[2])).unwrap(), (p(&[2, 2]), p(&[4])));
    }

    #[test]
    fn enumeration() {
        assert_eq!(enumerate_partitions(0).unwrap(), vec![Partition::empty()]);
        let four = enumerate_partitions(4).unwrap();
        assert_eq!(four, vec![p(&[4]), p(&[3, 1]), p(&[2, 2]), p(&[2, 1, 1]), p(&[1, 1, 1, 1])]);
        for d in 0..=20 {
            assert_eq!(partitions(d).len() as i64, partition_count(d as usize));
        }
        assert_eq!(enumerate_partitions(10).unwrap().len(), 42);
        assert!(matches!(enumerate_partitions(31), Err(Error::BoundExceeded(_))));
    }

    #[test]
    fn indecomposable_dimensions() {
        for n in 1..5 {
            assert_eq!(indec_dim_vector(1, n as u32, n).unwrap(), DimensionVector(vec![1; n]));
        }
        assert_eq!(indec_dim_vector(1, 1, 2).unwrap(), DimensionVector(vec![1, 0]));
        assert_eq!(indec_dim_vector(2, 3, 2).unwrap(), DimensionVector(vec![1, 2]));
        assert!(indec_dim_vector(3, 1, 2).is_err());
    }

    #[test]
    fn hom_dim_n_examples() {
        let m = MultiPartition::indecomposable(1, 2, 2);
        assert_eq!(m.hom_dim(&m).unwrap(), 1);
        assert_eq!(mp("2").hom_dim(&mp("1")).unwrap(), 1);
        assert_eq!(mp("1;0").hom_dim(&mp("0;1")).unwrap(), 0);
        assert_eq!(mp("1;0;0").hom_dim(&mp("0;0;1")).unwrap(), 0);
        assert!(mp("1").hom_dim(&mp("1;0")).is_err());
        for d in 0..=8 {
            for a in partitions(d) {
                let ma = MultiPartition::from_partition(a.clone());
                assert_eq!(ma.aut_poly(), a.aut_poly());
                for b in partitions(d.min(4)) {
                    let mb = MultiPartition::from_partition(b.clone());
                    assert_eq!(ma.hom_dim(&mb).unwrap(), a.hom_dim(&b));
                }
            }
        }
    }

    #[test]
    fn aut_poly_n_examples() {
        assert_eq!(mp("1,1").aut_poly(), IntPoly::from_ints(&[0, 1, -1, -1, 1]));
        assert_eq!(mp("0;1;0").aut_poly(), IntPoly::from_ints(&[-1, 1]));
        for r in 1..4 {
            // T^{2r}(1 - T^{-1})^2
            let expected = IntPoly::from_ints(&[1, -2, 1]).shift(2 * r as usize - 2);
            assert_eq!(MultiPartition::from_rows(&[r, r]).aut_poly(), expected);
        }
    }

    #[test]
    fn periodicity_examples() {
        assert_eq!(mp("1;0").periodicity(), Periodicity::Aperiodic);
        assert_eq!(mp("3;3").periodicity(), Periodicity::CompletelyPeriodic);
        assert_eq!(mp("1;1;0").periodicity(), Periodicity::Aperiodic);
        assert_eq!(mp("0").periodicity(), Periodicity::CompletelyPeriodic);
        assert_eq!(mp("2,1;1").periodicity(), Periodicity::Neither);
    }

    #[test]
    fn multipartitions_by_dimension() {
        let d = DimensionVector(vec![1, 1]);
        let all = multipartitions_with_dim(&d);
        // (1;1), (2;0), (0;2)
        assert_eq!(all.len(), 3);
        for m in &all {
            assert_eq!(m.dim_vector(), d);
        }
        let d = DimensionVector(vec![2, 1, 1]);
        for m in multipartitions_with_dim(&d) {
            assert_eq!(m.dim_vector(), d);
        }
    }

    #[test]
    fn conjugation_and_dominance_laws() {
        for d in 0..=12 {
            for l in partitions(d) {
                assert_eq!(l.conjugate().conjugate(), l);
            }
        }
        for d in 0..=10 {
            let ps = partitions(d);
            for a in &ps {
                for b in &ps {
                    assert_eq!(a.dominated_by(b), b.conjugate().dominated_by(&a.conjugate()));
                }
                let two_n = 2 * a.n_stat() + d as u64;
                assert_eq!(a.hom_dim(a), two_n);
            }
        }
    }

    #[test]
    fn inverse_centraliser_sums() {
        for d in 0..=12u32 {
            let mut s = BigRational::zero();
            let mut signed = BigRational::zero();
            for l in partitions(d) {
                let inv = BigRational::new(BigInt::one(), l.z_stat());
                if l.len() % 2 == 0 {
                    signed += &inv;
                } else {
                    signed -= &inv;
                }
                s += inv;
            }
            assert!(s.is_one());
            let expected = match d {
                0 => BigRational::one(),
                1 => -BigRational::one(),
                _ => BigRational::zero(),
            };
            assert_eq!(signed, expected);
            assert!(!s.is_negative());
        }
    }

    #[test]
    fn union_sum_duality() {
        for a in 0..=8u32 {
            for b in 0..=(8 - a) {
                for l in partitions(a) {
                    for m in partitions(b) {
                        assert_eq!(l.union(&m).conjugate(), l.conjugate().sum(&m.conjugate()));
                    }
                }
            }
        }
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("1,3".parse::<Partition>().unwrap(), p(&[3, 1]));
        assert_eq!("".parse::<Partition>().unwrap(), Partition::empty());
        assert_eq!(p(&[2, 1]).to_string(), "(2,1)");
        let m = mp("2,1;0");
        assert_eq!(m.to_string(), "(2,1;0)");
        assert_eq!(m.to_string().parse::<MultiPartition>().unwrap(), m);
        assert_eq!(serde_json::to_string(&m).unwrap(), "[[2,1],[]]");
    }
}
