//! Generic Hall polynomials for nilpotent representations of the cyclic quiver.
//!
//! The only products computed directly are right multiplications `u_a * u_S`
//! by a semisimple `S`: every submodule isomorphic to `S` lies in the socle,
//! so the count is a Schubert-cell count inside the socle, filtered by the
//! lengths of the summands the socle vectors come from.  Products of the
//! socle layers `E_m = u_{L_r} ... u_{L_1}` are unitriangular over the basis,
//! so `u_b = sum A_{b,c} E_c` and `u_a * u_b = sum A_{b,c} (u_a * u_{L_r} * ... * u_{L_1})`.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Arc, OnceLock, RwLock};


use crate::arith::{gauss_binomial, IntPoly, Rat};
use crate::error::{Error, Result};
use crate::partitions::{multipartitions_with_dim, DimensionVector, MultiPartition, Partition};

/// Linear combination of basis elements `u_m` with coefficients in `Z[q]`.
pub type Expansion = BTreeMap<MultiPartition, IntPoly>;

/// How the right multiplication by a semisimple module is evaluated.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SemisimpleRule {
    /// Schubert-cell count in the socle; valid for every rank.
    Cyclic,
    /// The closed formula `F^xi_{lambda (1^m)} = q^{n(xi)-n(lambda)-n(1^m)} prod [xi'_i - xi'_{i+1}, xi'_i - lambda'_i]_{q^-1}`; rank one only.
    Classical,
}

struct LayerData {
    basis: Vec<MultiPartition>,
    // u_{basis[i]} = sum_j inv[i][j] E_{basis[j]}
    inv_rows: Vec<Expansion>,
}

type Cache<K, V> = RwLock<HashMap<K, Arc<V>>>;

/// Memoizing Hall-polynomial calculator for one rank.
pub struct HallEngine {
    n: usize,
    rule: SemisimpleRule,
    cap: AtomicU32,
    rmul: Cache<(MultiPartition, DimensionVector), Expansion>,
    layers: Cache<DimensionVector, LayerData>,
    products: Cache<(MultiPartition, MultiPartition), Expansion>,
}

/// Default total-dimension cap for a given rank.
pub fn default_cap(n: usize) -> u32 {
    match n {
        1 => 12,
        2 => 6,
        _ => 4,
    }
}

fn add_to(e: &mut Expansion, k: &MultiPartition, c: &IntPoly) {
    if c.is_zero() {
        return;
    }
    match e.get_mut(k) {
        Some(x) => {
            *x += c;
            if x.is_zero() {
                e.remove(k);
            }
        }
        None => {
            e.insert(k.clone(), c.clone());
        }
    }
}

fn gauss_cached(r: u32, a: u32) -> IntPoly {
    static G: OnceLock<RwLock<HashMap<(u32, u32), IntPoly>>> = OnceLock::new();
    let g = G.get_or_init(Default::default);
    if let Some(p) = g.read().unwrap().get(&(r, a)) {
        return p.clone();
    }
    let p = gauss_binomial(r as usize, a as usize).expect("a <= r");
    g.write().unwrap().insert((r, a), p.clone());
    p
}

/// Socle layers `L_1` (the socle) up to `L_r` (the top) as dimension vectors.
pub fn socle_layers(m: &MultiPartition) -> Vec<DimensionVector> {
    let n = m.rank();
    let depth = m.summands().map(|(_, l)| l).max().unwrap_or(0);
    (1..=depth)
        .map(|k| {
            let mut d = vec![0u32; n];
            for (i, l) in m.summands() {
                if l >= k {
                    d[(i - 1 + k as usize - 1) % n] += 1;
                }
            }
            DimensionVector(d)
        })
        .collect()
}

// Sum over k of dim soc^k, taken far enough that every module of this size is exhausted.
fn socle_key(m: &MultiPartition) -> u64 {
    let total = m.size() as u64;
    let layers = socle_layers(m);
    let mut acc = 0u64;
    let mut cum = 0u64;
    for k in 0..total as usize {
        if let Some(l) = layers.get(k) {
            cum += l.total() as u64;
        }
        acc += cum;
    }
    acc
}

impl HallEngine {
    pub fn new(n: usize, rule: SemisimpleRule) -> Self {
        assert!(n >= 1, "rank must be positive");
        assert!(rule == SemisimpleRule::Cyclic || n == 1, "closed formula is rank one only");
        HallEngine {
            n,
            rule,
            cap: AtomicU32::new(default_cap(n)),
            rmul: Default::default(),
            layers: Default::default(),
            products: Default::default(),
        }
    }

    /// The process-wide engine for rank `n` using socle counts.
    pub fn shared(n: usize) -> Arc<HallEngine> {
        static ENGINES: OnceLock<RwLock<HashMap<usize, Arc<HallEngine>>>> = OnceLock::new();
        let e = ENGINES.get_or_init(Default::default);
        if let Some(x) = e.read().unwrap().get(&n) {
            return x.clone();
        }
        e.write().unwrap().entry(n).or_insert_with(|| Arc::new(HallEngine::new(n, SemisimpleRule::Cyclic))).clone()
    }

    /// The process-wide rank-one engine using the closed formula.
    pub fn classical() -> Arc<HallEngine> {
        static E: OnceLock<Arc<HallEngine>> = OnceLock::new();
        E.get_or_init(|| Arc::new(HallEngine::new(1, SemisimpleRule::Classical))).clone()
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn rule(&self) -> SemisimpleRule {
        self.rule
    }

    pub fn cap(&self) -> u32 {
        self.cap.load(Ordering::Relaxed)
    }

    pub fn set_cap(&self, cap: u32) {
        self.cap.store(cap, Ordering::Relaxed);
    }

    fn check_rank(&self, m: &MultiPartition) -> Result<()> {
        if m.rank() != self.n {
            return Err(Error::RankMismatch(m.rank(), self.n));
        }
        Ok(())
    }

    fn check_cap(&self, total: u32, what: impl FnOnce() -> String) -> Result<()> {
        let cap = self.cap();
        if total > cap {
            return Err(Error::BoundExceeded(format!("{} needs total dimension {total} > cap {cap}", what())));
        }
        Ok(())
    }

    /// `u_alpha * u_S` for the semisimple `S` of dimension vector `s`.
    pub fn rmul_semisimple(&self, alpha: &MultiPartition, s: &DimensionVector) -> Result<Arc<Expansion>> {
        self.check_rank(alpha)?;
        let key = (alpha.clone(), s.clone());
        if let Some(x) = self.rmul.read().unwrap().get(&key) {
            return Ok(x.clone());
        }
        let out = match self.rule {
            SemisimpleRule::Cyclic => self.rmul_cyclic(alpha, s),
            SemisimpleRule::Classical => rmul_classical(alpha.component(1), s.0[0]),
        }?;
        let arc = Arc::new(out);
        self.rmul.write().unwrap().insert(key, arc.clone());
        Ok(arc)
    }

    fn rmul_cyclic(&self, alpha: &MultiPartition, s: &DimensionVector) -> Result<Expansion> {
        let n = self.n;
        // At vertex v the new socle vectors extend summands of alpha with socle v+1
        // (sizes >= 1) or are new simples (size 0).
        let mut per_vertex: Vec<Vec<BTreeMap<u32, u32>>> = Vec::with_capacity(n);
        for v in 0..n {
            let source = alpha.components()[(v + 1) % n].multiplicities();
            per_vertex.push(choose_extensions(&source, s.0[v]));
        }
        let mut out = Expansion::new();
        let mut idx = vec![0usize; n];
        if per_vertex.iter().any(|c| c.is_empty()) {
            return Ok(out);
        }
        loop {
            let choice: Vec<&BTreeMap<u32, u32>> = (0..n).map(|v| &per_vertex[v][idx[v]]).collect();
            let mut comps: Vec<Vec<u32>> = alpha.components().iter().map(|p| p.parts().to_vec()).collect();
            for (v, ch) in choice.iter().enumerate() {
                let src = (v + 1) % n;
                for (&size, &k) in ch.iter() {
                    if size == 0 {
                        continue;
                    }
                    for _ in 0..k {
                        let pos = comps[src].iter().position(|&x| x == size).expect("chosen part exists");
                        comps[src].remove(pos);
                    }
                }
            }
            for (v, ch) in choice.iter().enumerate() {
                for (&size, &k) in ch.iter() {
                    comps[v].extend(std::iter::repeat(size + 1).take(k as usize));
                }
            }
            let xi = MultiPartition::new(comps.into_iter().map(Partition::new).collect())?;
            let mut coeff = IntPoly::one();
            for (v, ch) in choice.iter().enumerate() {
                coeff = &coeff * &socle_count(xi.component(v + 1), ch);
            }
            add_to(&mut out, &xi, &coeff);
            // next choice
            let mut v = 0;
            loop {
                if v == n {
                    return Ok(out);
                }
                idx[v] += 1;
                if idx[v] < per_vertex[v].len() {
                    break;
                }
                idx[v] = 0;
                v += 1;
            }
        }
    }

    fn rmul_expansion(&self, x: &Expansion, s: &DimensionVector) -> Result<Expansion> {
        let mut out = Expansion::new();
        for (a, c) in x {
            for (xi, f) in self.rmul_semisimple(a, s)?.iter() {
                add_to(&mut out, xi, &(c * f));
            }
        }
        Ok(out)
    }

    /// `E_m = u_{L_r} ... u_{L_1}`, the product of the socle layers of `m`.
    pub fn layer_product(&self, m: &MultiPartition) -> Result<Expansion> {
        self.check_rank(m)?;
        let layers = socle_layers(m);
        let mut x = Expansion::from([(MultiPartition::empty(self.n), IntPoly::one())]);
        for l in layers.iter().rev() {
            x = self.rmul_expansion(&x, l)?;
        }
        Ok(x)
    }

    fn layer_data(&self, d: &DimensionVector) -> Result<Arc<LayerData>> {
        if let Some(x) = self.layers.read().unwrap().get(d) {
            return Ok(x.clone());
        }
        let mut basis = multipartitions_with_dim(d);
        basis.sort_by_cached_key(|m| (socle_key(m), m.clone()));
        let index: HashMap<MultiPartition, usize> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let size = basis.len();
        let mut e: Vec<Vec<IntPoly>> = vec![vec![IntPoly::zero(); size]; size];
        for (i, m) in basis.iter().enumerate() {
            for (xi, c) in self.layer_product(m)? {
                let j = *index.get(&xi).ok_or_else(|| Error::Internal(format!("{xi} outside dimension {d:?}")))?;
                if j < i || (j == i && !c.is_one()) {
                    return Err(Error::Internal(format!("socle layer product of {m} is not unitriangular at {xi}")));
                }
                e[i][j] = c;
            }
        }
        let mut inv: Vec<Vec<IntPoly>> = vec![vec![IntPoly::zero(); size]; size];
        for i in (0..size).rev() {
            inv[i][i] = IntPoly::one();
            for j in i + 1..size {
                let mut acc = IntPoly::zero();
                for k in i + 1..=j {
                    if !e[i][k].is_zero() && !inv[k][j].is_zero() {
                        acc += &(&e[i][k] * &inv[k][j]);
                    }
                }
                inv[i][j] = -acc;
            }
        }
        let inv_rows = inv
            .into_iter()
            .map(|row| {
                row.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (basis[j].clone(), c)).collect()
            })
            .collect();
        let data = Arc::new(LayerData { basis, inv_rows });
        self.layers.write().unwrap().insert(d.clone(), data.clone());
        Ok(data)
    }

    /// Untwisted product `u_a * u_b = sum_xi F^xi_{a b}(q) u_xi` (`a` the quotient, `b` the submodule).
    pub fn product(&self, a: &MultiPartition, b: &MultiPartition) -> Result<Arc<Expansion>> {
        self.check_rank(a)?;
        self.check_rank(b)?;
        self.check_cap(a.size() + b.size(), || format!("product u{a} * u{b}"))?;
        let key = (a.clone(), b.clone());
        if let Some(x) = self.products.read().unwrap().get(&key) {
            return Ok(x.clone());
        }
        let db = b.dim_vector();
        let out = if b.components().iter().all(|p| p.parts().iter().all(|&x| x == 1)) {
            (*self.rmul_semisimple(a, &db)?).clone()
        } else {
            let data = self.layer_data(&db)?;
            let pos = data.basis.iter().position(|m| m == b).expect("basis is complete");
            let mut out = Expansion::new();
            for (c, coef) in &data.inv_rows[pos] {
                let mut x = Expansion::from([(a.clone(), IntPoly::one())]);
                for l in socle_layers(c).iter().rev() {
                    x = self.rmul_expansion(&x, l)?;
                }
                for (xi, f) in x {
                    add_to(&mut out, &xi, &(coef * &f));
                }
            }
            out
        };
        for (xi, f) in &out {
            if !f.is_integral() {
                return Err(Error::Internal(format!("F^{xi}_{a}{b} = {f} is not an integer polynomial")));
            }
        }
        let arc = Arc::new(out);
        self.products.write().unwrap().insert(key, arc.clone());
        Ok(arc)
    }

    /// `F^xi_{a b}(q)`; zero unless the dimension vectors add up.
    pub fn hall_polynomial(&self, a: &MultiPartition, b: &MultiPartition, xi: &MultiPartition) -> Result<IntPoly> {
        self.check_rank(xi)?;
        if a.dim_vector().add(&b.dim_vector()) != xi.dim_vector() {
            self.check_rank(a)?;
            self.check_rank(b)?;
            return Ok(IntPoly::zero());
        }
        Ok(self.product(a, b)?.get(xi).cloned().unwrap_or_else(IntPoly::zero))
    }

    /// Every `(a, b, F^xi_{a b})` with nonzero Hall polynomial.
    pub fn decompositions(&self, xi: &MultiPartition) -> Result<Vec<(MultiPartition, MultiPartition, IntPoly)>> {
        self.check_rank(xi)?;
        let d = xi.dim_vector();
        let mut out = Vec::new();
        for db in sub_dimension_vectors(&d) {
            let da = d.checked_sub(&db).expect("sub vector");
            for b in multipartitions_with_dim(&db) {
                for a in multipartitions_with_dim(&da) {
                    if let Some(f) = self.product(&a, &b)?.get(xi) {
                        out.push((a.clone(), b.clone(), f.clone()));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// All dimension vectors `e` with `0 <= e <= d` componentwise.
pub fn sub_dimension_vectors(d: &DimensionVector) -> Vec<DimensionVector> {
    let mut out = vec![Vec::new()];
    for &x in &d.0 {
        out = out.into_iter().flat_map(|v: Vec<u32>| (0..=x).map(move |k| {
            let mut w = v.clone();
            w.push(k);
            w
        })).collect();
    }
    out.into_iter().map(DimensionVector).collect()
}

// Sub-multisets of `source` (size -> multiplicity) plus any number of zeros, of total count `k`.
fn choose_extensions(source: &BTreeMap<u32, u32>, k: u32) -> Vec<BTreeMap<u32, u32>> {
    let items: Vec<(u32, u32)> = source.iter().map(|(&a, &b)| (a, b)).collect();
    let mut out = Vec::new();
    fn go(items: &[(u32, u32)], i: usize, left: u32, cur: &mut BTreeMap<u32, u32>, out: &mut Vec<BTreeMap<u32, u32>>) {
        if i == items.len() {
            let mut c = cur.clone();
            if left > 0 {
                c.insert(0, left);
            }
            out.push(c);
            return;
        }
        let (size, mult) = items[i];
        for take in 0..=mult.min(left) {
            if take > 0 {
                cur.insert(size, take);
            }
            go(items, i + 1, left - take, cur, out);
            cur.remove(&size);
        }
    }
    go(&items, 0, k, &mut BTreeMap::new(), &mut out);
    out
}

// Subspaces U of the socle at one vertex meeting the length filtration as
// prescribed: `chosen` maps (length - 1) to the number of summands of that
// length whose socle is absorbed.
fn socle_count(xi_comp: &Partition, chosen: &BTreeMap<u32, u32>) -> IntPoly {
    let m = xi_comp.multiplicities();
    let b: BTreeMap<u32, u32> = chosen.iter().map(|(&s, &k)| (s + 1, k)).collect();
    let mut coeff = IntPoly::one();
    let mut deeper_m = 0u32;
    let mut deeper_b = 0u32;
    for (&l, &ml) in m.iter().rev() {
        let bl = b.get(&l).copied().unwrap_or(0);
        if bl > 0 {
            let shift = (bl * (deeper_m - deeper_b)) as usize;
            coeff = &coeff * &gauss_cached(ml, bl).shift(shift);
        }
        deeper_m += ml;
        deeper_b += bl;
    }
    coeff
}

fn rmul_classical(lambda: &Partition, m: u32) -> Result<Expansion> {
    let source = lambda.multiplicities();
    let mut out = Expansion::new();
    let lc = lambda.conjugate();
    let col = Partition::column(m);
    for ch in choose_extensions(&source, m) {
        let mut parts = lambda.parts().to_vec();
        for (&size, &k) in &ch {
            for _ in 0..k {
                if size > 0 {
                    let pos = parts.iter().position(|&x| x == size).unwrap();
                    parts.remove(pos);
                }
                parts.push(size + 1);
            }
        }
        let xi = Partition::new(parts);
        let xc = xi.conjugate();
        // q^{e} prod_i [a_i, b_i]_{q^-1} = q^{e - sum b_i (a_i - b_i)} prod_i [a_i, b_i]_q
        let mut e = xi.n_stat() as i64 - lambda.n_stat() as i64 - col.n_stat() as i64;
        let mut coeff = IntPoly::one();
        for i in 0..xc.len() {
            let a = xc.part(i) - xc.part(i + 1);
            let b = xc.part(i) - lc.part(i);
            if b > a {
                return Err(Error::Internal(format!("{xi} / {lambda} is not a vertical strip")));
            }
            coeff = &coeff * &gauss_cached(a, b);
            e -= (b * (a - b)) as i64;
        }
        if e < 0 {
            return Err(Error::Internal(format!("negative power of q in F^{xi}_{lambda},(1^{m})")));
        }
        add_to(&mut out, &MultiPartition::from_partition(xi), &coeff.shift(e as usize));
    }
    Ok(out)
}

/// Evaluate a polynomial in `q` at an integer.
pub fn eval_at(p: &IntPoly, q: u64) -> Rat {
    p.eval(&Rat::from_integer(q.into()))
}
