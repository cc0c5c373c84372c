//! The generic Ringel-Hall algebra `H_n` of the cyclic quiver with `n` vertices,
//! extended by the group algebra of `Z^n / (delta)`.
//!
//! Arrows run `i -> i-1`, so `<d, e> = sum d_i e_i - sum d_i e_{i-1}`.  Basis
//! elements are `u_m K_a`; products carry the twist `v^{<m, m'> + (a, dim m')}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::One;
use serde_json::{json, Value};

use crate::arith::{Rat, RationalFunc};
use crate::canonical::{bar_invariant_lift, in_negative_ideal, topological_order, Rows};
use crate::error::{Error, Result};
use crate::hall_classical::{q_to_v, render_terms, v_pow};
use crate::hall_engine::{socle_layers, HallEngine};
use crate::linalg::{invert, solve, Matrix};
use crate::partitions::{compositions_of, multipartitions_with_dim, partitions, DimensionVector, MultiPartition, Partition};
use crate::symfunc::{self, Basis, SymFunc};

fn check_rank(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::RankMismatch(a, b));
    }
    Ok(())
}

fn euler_raw(d: &[i64], e: &[i64]) -> i64 {
    let n = d.len();
    (0..n).map(|i| d[i] * e[i] - d[i] * e[(i + n - 1) % n]).sum()
}

fn sym_raw(d: &[i64], e: &[i64]) -> i64 {
    euler_raw(d, e) + euler_raw(e, d)
}

/// The Euler form `<d, e>`.
pub fn euler_form(d: &DimensionVector, e: &DimensionVector) -> Result<i64> {
    check_rank(d.rank(), e.rank())?;
    Ok(euler_raw(&d.as_i64(), &e.as_i64()))
}

/// The symmetrized form `(d, e) = <d, e> + <e, d>`.
pub fn sym_form(d: &DimensionVector, e: &DimensionVector) -> Result<i64> {
    check_rank(d.rank(), e.rank())?;
    Ok(sym_raw(&d.as_i64(), &e.as_i64()))
}

/// A class in `Z^n / (delta)`, stored with last coordinate zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KClass(Vec<i64>);

impl KClass {
    pub fn new(mut v: Vec<i64>) -> Self {
        if let Some(&last) = v.last() {
            for x in &mut v {
                *x -= last;
            }
        }
        KClass(v)
    }

    pub fn zero(n: usize) -> Self {
        KClass(vec![0; n])
    }

    pub fn from_dim(d: &DimensionVector) -> Self {
        KClass::new(d.as_i64())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, o: &KClass) -> KClass {
        KClass::new(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> KClass {
        KClass::new(self.0.iter().map(|a| -a).collect())
    }

    /// `(self, o)`; independent of representatives since `delta` spans the radical.
    pub fn pair(&self, o: &KClass) -> i64 {
        sym_raw(&self.0, &o.0)
    }

    pub fn pair_dim(&self, d: &DimensionVector) -> i64 {
        sym_raw(&self.0, &d.as_i64())
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", s.join(","))
    }
}

impl fmt::Debug for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub type Key = (MultiPartition, KClass);

fn add_term<K: Ord + Clone>(m: &mut BTreeMap<K, RationalFunc>, k: &K, c: &RationalFunc) {
    if c.is_zero() {
        return;
    }
    match m.get_mut(k) {
        Some(x) => {
            *x += c;
            if x.is_zero() {
                m.remove(k);
            }
        }
        None => {
            m.insert(k.clone(), c.clone());
        }
    }
}

fn engine(n: usize) -> Arc<HallEngine> {
    HallEngine::shared(n)
}

/// `a_m(v^2)`.
pub fn aut_v(m: &MultiPartition) -> RationalFunc {
    q_to_v(&m.aut_poly())
}

fn h(m: &MultiPartition) -> i64 {
    m.hom_dim(m).expect("same rank") as i64
}

/// A finite combination `sum c u_m K_a` with `c` in `Q(v)`.
#[derive(Clone, PartialEq, Eq)]
pub struct HallElementN {
    n: usize,
    terms: BTreeMap<Key, RationalFunc>,
}

impl HallElementN {
    pub fn zero(n: usize) -> Self {
        HallElementN { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::basis(MultiPartition::empty(n))
    }

    pub fn basis(m: MultiPartition) -> Self {
        let n = m.rank();
        Self::basis_k(m, KClass::zero(n))
    }

    pub fn basis_k(m: MultiPartition, k: KClass) -> Self {
        let n = m.rank();
        HallElementN { n, terms: BTreeMap::from([((m, k), RationalFunc::one())]) }
    }

    pub fn k_elem(k: KClass) -> Self {
        Self::basis_k(MultiPartition::empty(k.rank()), k)
    }

    /// The simple `u_i`, vertices numbered from 1.
    pub fn simple(i: usize, n: usize) -> Self {
        Self::basis(MultiPartition::indecomposable(i, 1, n))
    }

    pub fn from_terms<I: IntoIterator<Item = (Key, RationalFunc)>>(n: usize, it: I) -> Self {
        let mut terms = BTreeMap::new();
        for (k, c) in it {
            add_term(&mut terms, &k, &c);
        }
        HallElementN { n, terms }
    }

    /// K-free element from `u`-coefficients.
    pub fn from_u<I: IntoIterator<Item = (MultiPartition, RationalFunc)>>(n: usize, it: I) -> Self {
        Self::from_terms(n, it.into_iter().map(|(m, c)| ((m, KClass::zero(n)), c)))
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Key, RationalFunc> {
        &self.terms
    }

    /// Coefficient of `u_m` (with `K_0`).
    pub fn coeff(&self, m: &MultiPartition) -> RationalFunc {
        self.coeff_k(m, &KClass::zero(self.n))
    }

    pub fn coeff_k(&self, m: &MultiPartition, k: &KClass) -> RationalFunc {
        self.terms.get(&(m.clone(), k.clone())).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_k_free(&self) -> bool {
        self.terms.keys().all(|(_, k)| k.is_zero())
    }

    /// The dimension vectors carrying nonzero terms.
    pub fn degrees(&self) -> Vec<DimensionVector> {
        let mut d: Vec<DimensionVector> = self.terms.keys().map(|(m, _)| m.dim_vector()).collect();
        d.sort();
        d.dedup();
        d
    }

    pub fn homogeneous_part(&self, d: &DimensionVector) -> Self {
        HallElementN {
            n: self.n,
            terms: self.terms.iter().filter(|((m, _), _)| &m.dim_vector() == d).map(|(k, c)| (k.clone(), c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &RationalFunc) -> Self {
        Self::from_terms(self.n, self.terms.iter().map(|(k, x)| (k.clone(), x * c)))
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &o.terms {
            add_term(&mut terms, k, c);
        }
        HallElementN { n: self.n, terms }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&RationalFunc::from_int(-1)))
    }

    pub fn multiply(&self, o: &Self) -> Result<Self> {
        check_rank(self.n, o.n)?;
        let e = engine(self.n);
        let mut terms = BTreeMap::new();
        for ((a, ka), ca) in &self.terms {
            for ((b, kb), cb) in &o.terms {
                let db = b.dim_vector();
                let tw = euler_raw(&a.dim_vector().as_i64(), &db.as_i64()) + ka.pair_dim(&db);
                let c = &(ca * cb) * &v_pow(tw);
                let k = ka.add(kb);
                if a.is_zero() || b.is_zero() {
                    let xi = if a.is_zero() { b } else { a };
                    add_term(&mut terms, &(xi.clone(), k), &c);
                    continue;
                }
                for (xi, f) in e.product(a, b)?.iter() {
                    add_term(&mut terms, &(xi.clone(), k.clone()), &(&c * &q_to_v(f)));
                }
            }
        }
        Ok(HallElementN { n: self.n, terms })
    }

    /// `Delta(u_X K_a) = sum v^{<M,N>} F^X_{MN} a_M a_N / a_X  u_M K_{N+a} (x) u_N K_a`.
    pub fn coproduct(&self) -> Result<HallTensorN> {
        let e = engine(self.n);
        let mut terms = BTreeMap::new();
        for ((x, ka), c) in &self.terms {
            let ax = aut_v(x);
            for (m, nn, f) in e.decompositions(x)? {
                let dn = nn.dim_vector();
                let tw = euler_raw(&m.dim_vector().as_i64(), &dn.as_i64());
                let coef = &(&(&(c * &q_to_v(&f)) * &aut_v(&m)) * &aut_v(&nn)) * &v_pow(tw);
                let coef = coef.checked_div(&ax)?;
                let left = (m, KClass::from_dim(&dn).add(ka));
                let right = (nn, ka.clone());
                add_term(&mut terms, &(left, right), &coef);
            }
        }
        Ok(HallTensorN { n: self.n, terms })
    }

    /// Coordinates in the PBW basis `ũ_m K_a`.
    pub fn pbw_coefficients(&self) -> BTreeMap<Key, RationalFunc> {
        self.terms.iter().map(|(k, c)| (k.clone(), c * &v_pow(-(h(&k.0) - k.0.size() as i64)))).collect()
    }

    pub fn from_pbw_coefficients(n: usize, coeffs: &BTreeMap<Key, RationalFunc>) -> Self {
        Self::from_terms(n, coeffs.iter().map(|(k, c)| (k.clone(), c * &v_pow(h(&k.0) - k.0.size() as i64))))
    }

    /// Rendered in the `ũ` basis, in the same style as `Display`.
    pub fn display_pbw(&self) -> String {
        let c = self.pbw_coefficients();
        render_terms(c.iter().rev().map(|(k, c)| (key_name("ũ", k), c)))
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|((m, k), c)| json!({ "mpart": m, "k": k.coords(), "coeff": c.to_json() }))
            .collect();
        json!({ "n": self.n, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| Error::Parse("missing \"n\"".into()))? as usize;
        let arr = v.get("terms").and_then(Value::as_array).ok_or_else(|| Error::Parse("missing \"terms\"".into()))?;
        let mut terms = BTreeMap::new();
        for t in arr {
            let comps: Vec<Vec<u32>> = serde_json::from_value(t.get("mpart").cloned().unwrap_or(Value::Null))?;
            let m = MultiPartition::new(comps.into_iter().map(|p| Partition::new(p.into_iter().filter(|&x| x > 0).collect())).collect())?;
            check_rank(m.rank(), n)?;
            let k = match t.get("k") {
                Some(k) => KClass::new(serde_json::from_value(k.clone())?),
                None => KClass::zero(n),
            };
            check_rank(k.rank(), n)?;
            let c = RationalFunc::from_json(t.get("coeff").ok_or_else(|| Error::Parse("missing \"coeff\"".into()))?)?;
            add_term(&mut terms, &(m, k), &c);
        }
        Ok(HallElementN { n, terms })
    }
}

fn key_name(sym: &str, (m, k): &Key) -> String {
    if k.is_zero() {
        format!("{sym}{m}")
    } else {
        format!("{sym}{m}K{k}")
    }
}

impl fmt::Display for HallElementN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_terms(self.terms.iter().rev().map(|(k, c)| (key_name("u", k), c))))
    }
}

impl fmt::Debug for HallElementN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An element of `H_n (x) H_n`.
#[derive(Clone, PartialEq, Eq)]
pub struct HallTensorN {
    n: usize,
    terms: BTreeMap<(Key, Key), RationalFunc>,
}

impl HallTensorN {
    pub fn pure(x: &HallElementN, y: &HallElementN) -> Self {
        let mut terms = BTreeMap::new();
        for (a, ca) in &x.terms {
            for (b, cb) in &y.terms {
                add_term(&mut terms, &(a.clone(), b.clone()), &(ca * cb));
            }
        }
        HallTensorN { n: x.n, terms }
    }

    pub fn terms(&self) -> &BTreeMap<(Key, Key), RationalFunc> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &o.terms {
            add_term(&mut terms, k, c);
        }
        HallTensorN { n: self.n, terms }
    }

    fn product(&self, o: &Self, twisted: bool) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for ((a, b), c1) in &self.terms {
            let ea = HallElementN::basis_k(a.0.clone(), a.1.clone());
            let eb = HallElementN::basis_k(b.0.clone(), b.1.clone());
            for ((c, d), c2) in &o.terms {
                let mut coef = c1 * c2;
                if twisted {
                    coef = &coef * &v_pow(sym_raw(&b.0.dim_vector().as_i64(), &c.0.dim_vector().as_i64()));
                }
                let ac = ea.multiply(&HallElementN::basis_k(c.0.clone(), c.1.clone()))?;
                let bd = eb.multiply(&HallElementN::basis_k(d.0.clone(), d.1.clone()))?;
                for (x, cx) in &ac.terms {
                    for (y, cy) in &bd.terms {
                        add_term(&mut terms, &(x.clone(), y.clone()), &(&coef * &(cx * cy)));
                    }
                }
            }
        }
        Ok(HallTensorN { n: self.n, terms })
    }

    /// Componentwise product `(a (x) b)(c (x) d) = ac (x) bd`.
    pub fn multiply(&self, o: &Self) -> Result<Self> {
        self.product(o, false)
    }

    /// Green's twisted product `(a (x) b)(c (x) d) = v^{([b],[c])} ac (x) bd`.
    pub fn multiply_twisted(&self, o: &Self) -> Result<Self> {
        self.product(o, true)
    }

    /// Drop every `K` factor.
    pub fn strip_k(&self) -> Self {
        let z = KClass::zero(self.n);
        let mut terms = BTreeMap::new();
        for ((a, b), c) in &self.terms {
            add_term(&mut terms, &((a.0.clone(), z.clone()), (b.0.clone(), z.clone())), c);
        }
        HallTensorN { n: self.n, terms }
    }

    pub fn pair_with(&self, x: &HallElementN, y: &HallElementN) -> RationalFunc {
        let mut s = RationalFunc::zero();
        for ((a, b), c) in &self.terms {
            let pa = pairing_n(&HallElementN::basis_k(a.0.clone(), a.1.clone()), x).expect("same rank");
            if pa.is_zero() {
                continue;
            }
            let pb = pairing_n(&HallElementN::basis_k(b.0.clone(), b.1.clone()), y).expect("same rank");
            s += &(&(c * &pa) * &pb);
        }
        s
    }
}

impl fmt::Display for HallTensorN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_terms(
            self.terms.iter().rev().map(|((a, b), c)| (format!("{}⊗{}", key_name("u", a), key_name("u", b)), c)),
        ))
    }
}

impl fmt::Debug for HallTensorN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `<u_M K_a, u_N K_b> = delta_{MN} v^{(a,b) + 2 dim M} / a_M`.
pub fn pairing_n(x: &HallElementN, y: &HallElementN) -> Result<RationalFunc> {
    check_rank(x.n, y.n)?;
    let mut s = RationalFunc::zero();
    for ((m, ka), c) in &x.terms {
        for ((m2, kb), d) in y.terms.range((m.clone(), KClass(vec![i64::MIN; x.n]))..) {
            if m2 != m {
                break;
            }
            s += &(&(c * d) * &basis_pairing(m, ka, kb));
        }
    }
    Ok(s)
}

fn basis_pairing(m: &MultiPartition, a: &KClass, b: &KClass) -> RationalFunc {
    let num = v_pow(a.pair(b) + 2 * m.size() as i64);
    num.checked_div(&aut_v(m)).expect("a_M is nonzero")
}

/// `<u_m, u_m>`.
pub fn norm_n(m: &MultiPartition) -> RationalFunc {
    basis_pairing(m, &KClass::zero(m.rank()), &KClass::zero(m.rank()))
}

/// `ũ_m = v^{h_mm - |m|} u_m`.
pub fn pbw_n(m: &MultiPartition) -> HallElementN {
    HallElementN::basis(m.clone()).scale(&v_pow(h(m) - m.size() as i64))
}

/// The centre generator `x_r` of degree `r delta`.
pub fn central_x(n: usize, r: u32) -> HallElementN {
    let target = DimensionVector(vec![r; n]);
    let sign = v_pow(-2 * (r as i64) * n as i64);
    let sign = if (r as usize * n) % 2 == 1 { sign.scale(&Rat::from_integer((-1).into())) } else { sign };
    let mut terms = Vec::new();
    for c in compositions_of(r * n as u32, n) {
        let m = MultiPartition::from_rows(&c.0);
        if m.dim_vector() != target {
            continue;
        }
        let mut coef = &sign * &aut_v(&m);
        if h(&m) % 2 == 1 {
            coef = -coef;
        }
        terms.push((m, coef));
    }
    HallElementN::from_u(n, terms)
}

/// `x_lambda = prod x_{lambda_i}`.
pub fn central_x_lambda(n: usize, lambda: &Partition) -> Result<HallElementN> {
    let mut out = HallElementN::one(n);
    for &r in lambda.parts() {
        out = out.multiply(&central_x(n, r))?;
    }
    Ok(out)
}

/// The adjoint of left multiplication by `u_i`: `<e_i'(x), y> = <x, u_i y>`.
pub fn e_prime(i: usize, x: &HallElementN) -> Result<HallElementN> {
    let n = x.n;
    if i == 0 || i > n {
        return Err(Error::InvalidArgument(format!("vertex {i} out of range 1..={n}")));
    }
    if !x.is_k_free() {
        return Err(Error::InvalidArgument("e_i' is defined here on K-free elements".into()));
    }
    let ui = HallElementN::simple(i, n);
    let mut out = HallElementN::zero(n);
    for d in x.degrees() {
        if d.0[i - 1] == 0 {
            continue;
        }
        let mut dd = d.0.clone();
        dd[i - 1] -= 1;
        let part = x.homogeneous_part(&d);
        for mu in multipartitions_with_dim(&DimensionVector(dd)) {
            let p = pairing_n(&part, &ui.multiply(&HallElementN::basis(mu.clone()))?)?;
            if !p.is_zero() {
                out = out.add(&HallElementN::from_u(n, [(mu.clone(), p.checked_div(&norm_n(&mu))?)]));
            }
        }
    }
    Ok(out)
}

struct BarDataN {
    basis: Vec<MultiPartition>,
    // bar(ũ_mu) = sum rows[mu][nu] ũ_nu
    rows: Rows<MultiPartition>,
    order: Vec<MultiPartition>,
}

type DimCache<T> = OnceLock<RwLock<HashMap<DimensionVector, Arc<T>>>>;

fn cached<T>(cache: &'static DimCache<T>, d: &DimensionVector, build: impl FnOnce() -> Result<T>) -> Result<Arc<T>> {
    let c = cache.get_or_init(Default::default);
    if let Some(x) = c.read().unwrap().get(d) {
        return Ok(x.clone());
    }
    let x = Arc::new(build()?);
    c.write().unwrap().insert(d.clone(), x.clone());
    Ok(x)
}

/// `Ẽ_m = ũ_{L_r} ... ũ_{L_1}` in PBW coordinates: a bar-invariant element
/// whose expansion is unitriangular.
pub fn pbw_layer_product(m: &MultiPartition) -> Result<BTreeMap<MultiPartition, RationalFunc>> {
    let layers = socle_layers(m);
    // twist of the ordered product L_r, ..., L_1 plus the PBW scalings of the factors
    let mut s = 0i64;
    for (a, la) in layers.iter().enumerate() {
        s += la.0.iter().map(|&x| (x * x) as i64 - x as i64).sum::<i64>();
        for lb in &layers[..a] {
            s += euler_raw(&la.as_i64(), &lb.as_i64());
        }
    }
    let mut out = BTreeMap::new();
    for (xi, f) in engine(m.rank()).layer_product(m)? {
        let c = &q_to_v(&f) * &v_pow(s - (h(&xi) - xi.size() as i64));
        out.insert(xi, c);
    }
    match out.get(m) {
        Some(c) if c.is_one() => Ok(out),
        other => Err(Error::Internal(format!("Ẽ{m} has diagonal coefficient {other:?}, expected 1"))),
    }
}

fn bar_data(n: usize, d: &DimensionVector) -> Result<Arc<BarDataN>> {
    static CACHE: DimCache<BarDataN> = OnceLock::new();
    check_rank(d.rank(), n)?;
    cached(&CACHE, d, || {
        let basis = multipartitions_with_dim(d);
        let idx: HashMap<&MultiPartition, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let size = basis.len();
        let mut t: Matrix<RationalFunc> = vec![vec![RationalFunc::zero(); size]; size];
        for (i, m) in basis.iter().enumerate() {
            for (xi, c) in pbw_layer_product(m)? {
                t[i][idx[&xi]] = c;
            }
        }
        let tinv = invert(&t)?;
        // bar(ũ_mu) = sum_l bar(T^-1)[mu][l] Ẽ_l = sum bar(T^-1)[mu][l] T[l][nu] ũ_nu
        let mut rows = Rows::new();
        for (i, mu) in basis.iter().enumerate() {
            let mut row = BTreeMap::new();
            for (l, tl) in t.iter().enumerate() {
                if tinv[i][l].is_zero() {
                    continue;
                }
                let b = tinv[i][l].bar();
                for (j, c) in tl.iter().enumerate() {
                    if !c.is_zero() {
                        add_term(&mut row, &basis[j], &(&b * c));
                    }
                }
            }
            rows.insert(mu.clone(), row);
        }
        let order = topological_order(&basis, &rows)?;
        Ok(BarDataN { basis, rows, order })
    })
}

/// Matrix of the bar involution on the PBW basis of one degree.
pub fn pbw_bar_matrix_n(n: usize, d: &DimensionVector) -> Result<Rows<MultiPartition>> {
    Ok(bar_data(n, d)?.rows.clone())
}

/// The bar involution: `v -> v^-1`, fixing each semisimple `ũ_S`, and `K_a -> K_{-a}`.
pub fn bar_n(x: &HallElementN) -> Result<HallElementN> {
    let mut out = HallElementN::zero(x.n);
    for (k, c) in x.pbw_coefficients() {
        let data = bar_data(x.n, &k.0.dim_vector())?;
        let cb = c.bar();
        let kb = k.1.neg();
        for (nu, a) in &data.rows[&k.0] {
            let term = HallElementN::from_pbw_coefficients(x.n, &BTreeMap::from([((nu.clone(), kb.clone()), &cb * a)]));
            out = out.add(&term);
        }
    }
    Ok(out)
}

/// The canonical basis element: bar-invariant, `ũ_m` plus `v^-1 Z[v^-1]`-multiples of other `ũ`.
pub fn canonical_basis_n(m: &MultiPartition) -> Result<HallElementN> {
    let data = bar_data(m.rank(), &m.dim_vector())?;
    let beta = bar_invariant_lift(&data.order, &data.rows, m, false)?;
    let n = m.rank();
    Ok(HallElementN::from_pbw_coefficients(n, &beta.into_iter().map(|(k, c)| ((k, KClass::zero(n)), c)).collect()))
}

/// Whether the off-diagonal PBW coefficients of `b` lie in `v^-2 Z[v^-2]`.
pub fn has_even_shape(m: &MultiPartition, b: &HallElementN) -> bool {
    b.pbw_coefficients().iter().all(|((k, _), c)| k == m || in_negative_ideal(c, true))
}

struct DualData {
    basis: Vec<MultiPartition>,
    // rows of the dual basis in u coordinates
    dual: Matrix<RationalFunc>,
}

fn dual_data(n: usize, d: &DimensionVector) -> Result<Arc<DualData>> {
    static CACHE: DimCache<DualData> = OnceLock::new();
    check_rank(d.rank(), n)?;
    cached(&CACHE, d, || {
        let basis = bar_data(n, d)?.basis.clone();
        let b: Matrix<RationalFunc> = basis
            .iter()
            .map(|l| canonical_basis_n(l).map(|x| basis.iter().map(|p| x.coeff(p)).collect()))
            .collect::<Result<_>>()?;
        // D N B^T = I, so D = (B^T)^{-1} N^{-1}
        let size = basis.len();
        let bt: Matrix<RationalFunc> = (0..size).map(|i| (0..size).map(|j| b[j][i].clone()).collect()).collect();
        let mut dual = invert(&bt)?;
        for row in &mut dual {
            for (j, c) in row.iter_mut().enumerate() {
                if !c.is_zero() {
                    *c = c.checked_div(&norm_n(&basis[j]))?;
                }
            }
        }
        Ok(DualData { basis, dual })
    })
}

/// The element `b*_m` with `<b*_m, b_l> = delta_{ml}`.
pub fn dual_canonical_basis_n(m: &MultiPartition) -> Result<HallElementN> {
    let data = dual_data(m.rank(), &m.dim_vector())?;
    let i = data.basis.iter().position(|p| p == m).expect("basis is complete");
    Ok(HallElementN::from_u(m.rank(), data.basis.iter().cloned().zip(data.dual[i].iter().cloned())))
}

/// Orthogonal projection onto the centre, spanned in degree `r delta` by the `x_lambda` with `|lambda| = r`.
pub fn center_project(x: &HallElementN, max_deg: u32) -> Result<HallElementN> {
    let n = x.n;
    if !x.is_k_free() {
        return Err(Error::InvalidArgument("projection is defined here on K-free elements".into()));
    }
    let mut out = HallElementN::zero(n);
    for d in x.degrees() {
        let r = d.0[0];
        if d.0.iter().any(|&c| c != r) || r == 0 {
            if r == 0 && d.total() == 0 {
                out = out.add(&x.homogeneous_part(&d));
            }
            continue;
        }
        if r > max_deg {
            return Err(Error::BoundExceeded(format!("centre projection in degree {r} delta exceeds {max_deg}")));
        }
        let part = x.homogeneous_part(&d);
        let xs: Vec<HallElementN> = partitions(r).iter().map(|l| central_x_lambda(n, l)).collect::<Result<_>>()?;
        let gram: Matrix<RationalFunc> =
            xs.iter().map(|a| xs.iter().map(|b| pairing_n(a, b)).collect::<Result<_>>()).collect::<Result<_>>()?;
        let rhs: Vec<RationalFunc> = xs.iter().map(|a| pairing_n(a, &part)).collect::<Result<_>>()?;
        let c = solve(&gram, &rhs)?;
        for (xl, cl) in xs.iter().zip(&c) {
            out = out.add(&xl.scale(cl));
        }
    }
    Ok(out)
}

/// `Phi_n: t -> v^{-2n}, c_lambda(t) -> x_lambda`.
pub fn phi_n(n: usize, f: &SymFunc) -> Result<HallElementN> {
    let c = f.convert(Basis::C)?;
    let mut out = HallElementN::zero(n);
    for (l, coef) in c.terms() {
        let coef = coef.subst(&Rat::one(), -2 * n as i64)?;
        out = out.add(&central_x_lambda(n, l)?.scale(&coef));
    }
    Ok(out)
}

/// Outcome of comparing two sides of one conjectured equality.
#[derive(Clone, Debug, PartialEq)]
pub enum Side {
    Equal,
    /// left minus right
    Differs(HallElementN),
    Failed(String),
}

impl Side {
    fn compare(l: Result<HallElementN>, r: Result<HallElementN>) -> Side {
        match (l, r) {
            (Ok(a), Ok(b)) => {
                if a == b {
                    Side::Equal
                } else {
                    Side::Differs(a.sub(&b))
                }
            }
            (Err(e), _) | (_, Err(e)) => Side::Failed(e.to_string()),
        }
    }

    pub fn is_equal(&self) -> bool {
        matches!(self, Side::Equal)
    }

    pub fn to_json(&self) -> Value {
        match self {
            Side::Equal => json!("equal"),
            Side::Differs(d) => json!({ "diff": d.to_json(), "display": d.to_string() }),
            Side::Failed(e) => json!({ "error": e }),
        }
    }
}

/// Both sides of `b*_(l,...,l) = Phi_n(S_l(t))` and `pi(b_(l,...,l)) = Phi_n(s_l)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjectureReport {
    pub lambda: Partition,
    pub n: usize,
    pub dual_side: Side,
    pub projection_side: Side,
}

impl ConjectureReport {
    pub fn to_json(&self) -> Value {
        json!({
            "lambda": self.lambda,
            "n": self.n,
            "dual_side": self.dual_side.to_json(),
            "projection_side": self.projection_side.to_json(),
        })
    }
}

pub fn conjecture_report(lambda: &Partition, n: usize) -> ConjectureReport {
    let m = MultiPartition::new(vec![lambda.clone(); n]).expect("n >= 1");
    let r = lambda.weight();
    let dual_side = Side::compare(dual_canonical_basis_n(&m), symfunc::dual_schur(lambda).and_then(|f| phi_n(n, &f)));
    let projection_side = Side::compare(
        canonical_basis_n(&m).and_then(|b| center_project(&b, r)),
        symfunc::schur(lambda).and_then(|f| phi_n(n, &f)),
    );
    ConjectureReport { lambda: lambda.clone(), n, dual_side, projection_side }
}
