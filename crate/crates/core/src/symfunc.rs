//! The graded Hopf algebra of symmetric functions with coefficients in `Q(t)`.
//!
//! Elements carry a basis tag; the power sums `p` are the internal working
//! basis (products concatenate, the pairing is diagonal).  Every other basis
//! is reached through memoized expansions of its elements in `p`, and the way
//! back uses the pairings: coordinates in a basis are pairings against the
//! dual basis.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::arith::{IntPoly, Rat, RationalFunc};
use crate::error::{Error, Result};
use crate::linalg;
use crate::partitions::{partitions, Partition};

pub type Terms = BTreeMap<Partition, RationalFunc>;

const DEFAULT_DEGREE_CAP: u32 = 12;
static DEGREE_CAP: AtomicU32 = AtomicU32::new(DEFAULT_DEGREE_CAP);

/// Largest degree for which non-`p` expansions are built.
pub fn degree_cap() -> u32 {
    DEGREE_CAP.load(Ordering::Relaxed)
}

pub fn set_degree_cap(d: u32) {
    DEGREE_CAP.store(d, Ordering::Relaxed);
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Basis {
    /// power sums
    P,
    /// elementary
    E,
    /// complete
    H,
    /// monomial
    M,
    /// Schur
    S,
    /// Hall-Littlewood `P_lambda(t)`
    HL,
    /// cyclic `c_lambda(t)`
    C,
    /// dual Schur `S_lambda(t)`
    Sdual,
}

impl Basis {
    pub const ALL: [Basis; 8] =
        [Basis::P, Basis::E, Basis::H, Basis::M, Basis::S, Basis::HL, Basis::C, Basis::Sdual];

    pub fn name(self) -> &'static str {
        match self {
            Basis::P => "p",
            Basis::E => "e",
            Basis::H => "h",
            Basis::M => "m",
            Basis::S => "s",
            Basis::HL => "HL",
            Basis::C => "c",
            Basis::Sdual => "Sdual",
        }
    }

    /// Whether the basis elements themselves involve `t`.
    pub fn depends_on_t(self) -> bool {
        matches!(self, Basis::HL | Basis::C | Basis::Sdual)
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Basis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Basis::ALL
            .iter()
            .copied()
            .find(|b| b.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown basis {s:?}")))
    }
}

fn add_term(terms: &mut Terms, k: &Partition, c: &RationalFunc) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(k) {
        Some(x) => {
            *x += c;
            if x.is_zero() {
                terms.remove(k);
            }
        }
        None => {
            terms.insert(k.clone(), c.clone());
        }
    }
}

fn add_scaled(acc: &mut Terms, src: &Terms, c: &RationalFunc) {
    if c.is_zero() {
        return;
    }
    for (k, v) in src {
        add_term(acc, k, &(v * c));
    }
}

// Product in the p basis: p_lambda p_mu = p_{lambda union mu}.
fn p_product(a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (ka, va) in a {
        for (kb, vb) in b {
            add_term(&mut out, &ka.union(kb), &(va * vb));
        }
    }
    out
}

fn z_rat(l: &Partition) -> Rat {
    Rat::from_integer(l.z_stat())
}

fn z_t_cached(l: &Partition) -> RationalFunc {
    static Z: OnceLock<RwLock<HashMap<Partition, RationalFunc>>> = OnceLock::new();
    let z = Z.get_or_init(Default::default);
    if let Some(v) = z.read().unwrap().get(l) {
        return v.clone();
    }
    let v = l.z_t();
    z.write().unwrap().insert(l.clone(), v.clone());
    v
}

// Sum over the common support of f_mu g_mu w_mu.
fn pair_terms(f: &Terms, g: &Terms, deformed: bool) -> RationalFunc {
    let (small, big) = if f.len() <= g.len() { (f, g) } else { (g, f) };
    let mut acc = RationalFunc::zero();
    for (k, a) in small {
        if let Some(b) = big.get(k) {
            let w = if deformed { &(a * b) * &z_t_cached(k) } else { (a * b).scale(&z_rat(k)) };
            acc += &w;
        }
    }
    acc
}

// omega(p_lambda) = (-1)^{|lambda| - l(lambda)} p_lambda
fn omega_terms(f: &Terms) -> Terms {
    f.iter()
        .map(|(k, v)| {
            let odd = (k.weight() as usize - k.len()) % 2 == 1;
            (k.clone(), if odd { -v } else { v.clone() })
        })
        .collect()
}

// p-expansion of e_n, h_n or c_n(t).
fn generator_p(kind: Basis, n: u32) -> Terms {
    let mut out = Terms::new();
    for l in partitions(n) {
        let c = match kind {
            Basis::H => RationalFunc::from_rat(z_rat(&l).recip()),
            Basis::E => {
                let s = if (n as usize - l.len()) % 2 == 0 { Rat::one() } else { -Rat::one() };
                RationalFunc::from_rat(s / z_rat(&l))
            }
            Basis::C => z_t_cached(&l).inv().expect("z_t is nonzero"),
            Basis::P => {
                if l.len() == 1 {
                    RationalFunc::one()
                } else {
                    RationalFunc::zero()
                }
            }
            _ => unreachable!("not a multiplicative basis"),
        };
        add_term(&mut out, &l, &c);
    }
    out
}

type ExpansionCache = RwLock<HashMap<(Basis, Partition), Arc<Terms>>>;

fn cache() -> &'static ExpansionCache {
    static CACHE: OnceLock<ExpansionCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn cache_get(b: Basis, l: &Partition) -> Option<Arc<Terms>> {
    cache().read().unwrap().get(&(b, l.clone())).cloned()
}

fn cache_put(b: Basis, l: Partition, t: Terms) -> Arc<Terms> {
    let arc = Arc::new(t);
    cache().write().unwrap().entry((b, l)).or_insert(arc).clone()
}

fn check_cap(d: u32) -> Result<()> {
    let cap = degree_cap();
    if d > cap {
        return Err(Error::BoundExceeded(format!("symmetric function degree {d} exceeds cap {cap}")));
    }
    Ok(())
}

/// The expansion of a basis element in power sums.
pub fn p_expansion(b: Basis, l: &Partition) -> Result<Arc<Terms>> {
    if b == Basis::P {
        return Ok(Arc::new(Terms::from([(l.clone(), RationalFunc::one())])));
    }
    check_cap(l.weight())?;
    if let Some(t) = cache_get(b, l) {
        return Ok(t);
    }
    let terms = match b {
        Basis::E | Basis::H | Basis::C => {
            if l.len() <= 1 {
                generator_p(b, l.weight())
            } else {
                let mut acc = Terms::from([(Partition::empty(), RationalFunc::one())]);
                for &r in l.parts() {
                    acc = p_product(&acc, p_expansion(b, &Partition::row(r))?.as_ref());
                }
                acc
            }
        }
        Basis::S => schur_p(l)?,
        Basis::Sdual => {
            let det = jacobi_trudi(l.parts());
            monomials_to_p(Basis::C, &det)?
        }
        Basis::M => {
            build_monomial_degree(l.weight())?;
            return cache_get(b, l).ok_or_else(|| Error::Internal("monomial table".into()));
        }
        Basis::HL => {
            build_hall_littlewood_degree(l.weight())?;
            return cache_get(b, l).ok_or_else(|| Error::Internal("Hall-Littlewood table".into()));
        }
        Basis::P => unreachable!(),
    };
    Ok(cache_put(b, l.clone(), terms))
}

/// `det(a_{idx_i - i + j})` expanded as a signed sum of generator monomials,
/// with `a_0 = 1` and `a_k = 0` for `k < 0`.
fn jacobi_trudi(idx: &[u32]) -> BTreeMap<Partition, BigInt> {
    let l = idx.len();
    // state: used-column mask -> (monomial as sorted indices -> coefficient)
    let mut states: HashMap<u32, BTreeMap<Vec<u32>, BigInt>> = HashMap::new();
    states.insert(0, BTreeMap::from([(Vec::new(), BigInt::one())]));
    for (i, &lam) in idx.iter().enumerate() {
        let mut next: HashMap<u32, BTreeMap<Vec<u32>, BigInt>> = HashMap::new();
        for (mask, polys) in &states {
            for j in 0..l {
                if mask & (1 << j) != 0 {
                    continue;
                }
                let k = lam as i64 - i as i64 + j as i64;
                if k < 0 {
                    continue;
                }
                let inversions = (mask >> (j + 1)).count_ones();
                let target = next.entry(mask | (1 << j)).or_default();
                for (mono, c) in polys {
                    let mut m = mono.clone();
                    if k > 0 {
                        let pos = m.partition_point(|&x| x >= k as u32);
                        m.insert(pos, k as u32);
                    }
                    let e = target.entry(m).or_insert_with(BigInt::zero);
                    if inversions % 2 == 1 {
                        *e -= c;
                    } else {
                        *e += c;
                    }
                }
            }
        }
        states = next;
    }
    let full = if l == 0 { 0 } else { (1u32 << l) - 1 };
    states
        .remove(&full)
        .unwrap_or_default()
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(m, c)| (Partition::new(m), c))
        .collect()
}

fn monomials_to_p(b: Basis, mono: &BTreeMap<Partition, BigInt>) -> Result<Terms> {
    let mut out = Terms::new();
    for (m, c) in mono {
        add_scaled(&mut out, p_expansion(b, m)?.as_ref(), &RationalFunc::from_bigint(c.clone()));
    }
    Ok(out)
}

// Both Jacobi-Trudi determinants, checked against each other.
fn schur_p(l: &Partition) -> Result<Terms> {
    let via_h = monomials_to_p(Basis::H, &jacobi_trudi(l.parts()))?;
    let via_e = monomials_to_p(Basis::E, &jacobi_trudi(l.conjugate().parts()))?;
    if via_h != via_e {
        return Err(Error::Internal(format!("Jacobi-Trudi determinants disagree for s{l}")));
    }
    Ok(via_h)
}

// Coefficient of X^lambda in p_mu: assignments of the parts of mu to the
// rows of lambda filling each row exactly.
fn dominant_coefficient(mu: &Partition, lambda: &Partition) -> BigInt {
    fn go(parts: &[u32], k: usize, rest: &mut Vec<u32>, memo: &mut HashMap<(usize, Vec<u32>), BigInt>) -> BigInt {
        if k == parts.len() {
            return if rest.iter().all(|&x| x == 0) { BigInt::one() } else { BigInt::zero() };
        }
        if let Some(v) = memo.get(&(k, rest.clone())) {
            return v.clone();
        }
        let mut total = BigInt::zero();
        for i in 0..rest.len() {
            if rest[i] >= parts[k] {
                rest[i] -= parts[k];
                total += go(parts, k + 1, rest, memo);
                rest[i] += parts[k];
            }
        }
        memo.insert((k, rest.clone()), total.clone());
        total
    }
    go(mu.parts(), 0, &mut lambda.parts().to_vec(), &mut HashMap::new())
}

fn build_monomial_degree(d: u32) -> Result<()> {
    let ps = partitions(d);
    // p_mu = sum_lambda R[mu][lambda] m_lambda
    let r: linalg::Matrix<Rat> = ps
        .iter()
        .map(|mu| ps.iter().map(|l| Rat::from_integer(dominant_coefficient(mu, l))).collect())
        .collect();
    let rinv = linalg::invert(&r)?;
    for (i, l) in ps.iter().enumerate() {
        let mut t = Terms::new();
        for (j, mu) in ps.iter().enumerate() {
            add_term(&mut t, mu, &RationalFunc::from_rat(rinv[i][j].clone()));
        }
        cache_put(Basis::M, l.clone(), t);
    }
    Ok(())
}

/// Hall-Littlewood functions of degree `d` in the `e_{mu'}` basis and in `p`.
fn hall_littlewood_table(d: u32, order: &[Partition], against_all_previous: bool) -> Result<Vec<(Partition, Terms, Terms)>> {
    let mut done: Vec<(Partition, Terms, Terms)> = Vec::new();
    for lam in order {
        let lc = lam.conjugate();
        let e_lam = p_expansion(Basis::E, &lc)?;
        let mut p_terms: Terms = (*e_lam).clone();
        let mut e_terms = Terms::from([(lc.clone(), RationalFunc::one())]);
        for (nu, nu_e, nu_p) in &done {
            if !against_all_previous && !(nu.dominated_by(lam) && nu != lam) {
                continue;
            }
            let b_nu = RationalFunc::from_poly(nu.b_t());
            let coef = &pair_terms(&e_lam, nu_p, true) * &b_nu;
            if coef.is_zero() {
                continue;
            }
            let neg = -&coef;
            add_scaled(&mut p_terms, nu_p, &neg);
            add_scaled(&mut e_terms, nu_e, &neg);
        }
        for (mu, beta) in &e_terms {
            let ok = beta.to_poly().is_some_and(|p| p.is_integral());
            if !ok {
                return Err(Error::Internal(format!("P{lam}: coefficient of e{mu} is {beta}, not in Z[t]")));
            }
            let mu_c = mu.conjugate();
            if !mu_c.dominated_by(lam) {
                return Err(Error::Internal(format!("P{lam}: e{mu} lies outside the dominance order ideal")));
            }
        }
        let norm = pair_terms(&p_terms, &p_terms, true);
        let expected = RationalFunc::from_poly(lam.b_t()).inv()?;
        if norm != expected {
            return Err(Error::Internal(format!("P{lam} has norm {norm}, expected {expected}")));
        }
        done.push((lam.clone(), e_terms, p_terms));
    }
    let _ = d;
    Ok(done)
}

fn build_hall_littlewood_degree(d: u32) -> Result<()> {
    check_cap(d)?;
    let order: Vec<Partition> = partitions(d).into_iter().rev().collect();
    for (lam, e_terms, p_terms) in hall_littlewood_table(d, &order, false)? {
        cache_put(Basis::HL, lam.clone(), p_terms);
        hl_e_cache().write().unwrap().insert(lam, Arc::new(e_terms));
    }
    Ok(())
}

fn hl_e_cache() -> &'static RwLock<HashMap<Partition, Arc<Terms>>> {
    static C: OnceLock<RwLock<HashMap<Partition, Arc<Terms>>>> = OnceLock::new();
    C.get_or_init(Default::default)
}

/// Recompute the degree-`d` Hall-Littlewood functions with a different linear
/// extension of dominance (decreasing lexicographic order of conjugates),
/// orthogonalising against every earlier function, and compare.
pub fn hall_littlewood_order_independent(d: u32) -> Result<bool> {
    let mut order = partitions(d);
    order.sort_by(|a, b| b.conjugate().cmp(&a.conjugate()));
    let alt = hall_littlewood_table(d, &order, true)?;
    for (lam, _, p_terms) in alt {
        if *p_expansion(Basis::HL, &lam)? != p_terms {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A finite linear combination of basis elements of one basis.
#[derive(Clone, PartialEq, Eq)]
pub struct SymFunc {
    basis: Basis,
    terms: Terms,
}

impl SymFunc {
    pub fn zero(basis: Basis) -> Self {
        SymFunc { basis, terms: Terms::new() }
    }

    pub fn one(basis: Basis) -> Self {
        Self::basis_element(basis, Partition::empty())
    }

    pub fn basis_element(basis: Basis, l: Partition) -> Self {
        SymFunc { basis, terms: Terms::from([(l, RationalFunc::one())]) }
    }

    /// Degree-`n` generator: `p_n`, `e_n`, `h_n`, `c_n(t)`, ... (the basis element of the one-row partition).
    pub fn generator(basis: Basis, n: u32) -> Self {
        Self::basis_element(basis, Partition::row(n))
    }

    pub fn from_terms<I: IntoIterator<Item = (Partition, RationalFunc)>>(basis: Basis, it: I) -> Self {
        let mut terms = Terms::new();
        for (k, c) in it {
            add_term(&mut terms, &k, &c);
        }
        SymFunc { basis, terms }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn coeff(&self, l: &Partition) -> RationalFunc {
        self.terms.get(l).cloned().unwrap_or_else(RationalFunc::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest degree present.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.weight()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut w = self.terms.keys().map(|k| k.weight());
        match w.next() {
            None => true,
            Some(d) => w.all(|x| x == d),
        }
    }

    pub fn scale(&self, c: &RationalFunc) -> SymFunc {
        let mut terms = Terms::new();
        add_scaled(&mut terms, &self.terms, c);
        SymFunc { basis: self.basis, terms }
    }

    pub fn neg(&self) -> SymFunc {
        self.scale(&RationalFunc::from_int(-1))
    }

    /// Sum; the result is in the basis of `self`.
    pub fn plus(&self, other: &SymFunc) -> Result<SymFunc> {
        let o = other.convert(self.basis)?;
        let mut terms = self.terms.clone();
        add_scaled(&mut terms, &o.terms, &RationalFunc::one());
        Ok(SymFunc { basis: self.basis, terms })
    }

    pub fn minus(&self, other: &SymFunc) -> Result<SymFunc> {
        self.plus(&other.neg())
    }

    pub fn to_p(&self) -> Result<SymFunc> {
        if self.basis == Basis::P {
            return Ok(self.clone());
        }
        let mut terms = Terms::new();
        for (l, c) in &self.terms {
            add_scaled(&mut terms, p_expansion(self.basis, l)?.as_ref(), c);
        }
        Ok(SymFunc { basis: Basis::P, terms })
    }

    /// Re-express in another basis.
    pub fn convert(&self, target: Basis) -> Result<SymFunc> {
        if target == self.basis {
            return Ok(self.clone());
        }
        let p = self.to_p()?;
        if target == Basis::P {
            return Ok(p);
        }
        let mut by_degree: BTreeMap<u32, Terms> = BTreeMap::new();
        for (k, v) in p.terms {
            by_degree.entry(k.weight()).or_default().insert(k, v);
        }
        let mut out = Terms::new();
        for (d, f) in by_degree {
            check_cap(d)?;
            let f_omega = if target == Basis::E { omega_terms(&f) } else { Terms::new() };
            for l in partitions(d) {
                let c = match target {
                    Basis::H => pair_terms(&f, p_expansion(Basis::M, &l)?.as_ref(), false),
                    Basis::C => pair_terms(&f, p_expansion(Basis::M, &l)?.as_ref(), true),
                    Basis::M => pair_terms(&f, p_expansion(Basis::H, &l)?.as_ref(), false),
                    Basis::S => pair_terms(&f, p_expansion(Basis::S, &l)?.as_ref(), false),
                    Basis::Sdual => pair_terms(&f, p_expansion(Basis::S, &l)?.as_ref(), true),
                    Basis::HL => {
                        let b = RationalFunc::from_poly(l.b_t());
                        &pair_terms(&f, p_expansion(Basis::HL, &l)?.as_ref(), true) * &b
                    }
                    Basis::E => pair_terms(&f_omega, p_expansion(Basis::M, &l)?.as_ref(), false),
                    Basis::P => unreachable!(),
                };
                add_term(&mut out, &l, &c);
            }
        }
        Ok(SymFunc { basis: target, terms: out })
    }

    /// Product, returned in the `p` basis.
    pub fn multiply(&self, other: &SymFunc) -> Result<SymFunc> {
        Ok(SymFunc { basis: Basis::P, terms: p_product(&self.to_p()?.terms, &other.to_p()?.terms) })
    }

    /// Coproduct, returned in `p ⊗ p`.
    pub fn coproduct(&self) -> Result<SymFuncTensor> {
        let p = self.to_p()?;
        let mut out = TensorTerms::new();
        for (l, c) in &p.terms {
            for (a, b, m) in split_multiset(l) {
                add_tensor_term(&mut out, (a, b), &c.scale(&Rat::from_integer(m)));
            }
        }
        Ok(SymFuncTensor { left: Basis::P, right: Basis::P, terms: out })
    }

    /// Antipode `S(p_lambda) = (-1)^{l(lambda)} p_lambda`, returned in `p`.
    pub fn antipode(&self) -> Result<SymFunc> {
        let p = self.to_p()?;
        let terms = p
            .terms
            .into_iter()
            .map(|(k, v)| {
                let odd = k.len() % 2 == 1;
                (k, if odd { -v } else { v })
            })
            .collect();
        Ok(SymFunc { basis: Basis::P, terms })
    }

    /// The degree-zero coefficient.
    pub fn counit(&self) -> RationalFunc {
        self.coeff(&Partition::empty())
    }

    /// The involution `e_n <-> h_n`, returned in `p`.
    pub fn omega(&self) -> Result<SymFunc> {
        Ok(SymFunc { basis: Basis::P, terms: omega_terms(&self.to_p()?.terms) })
    }

    /// Evaluate the coefficients at `t = c`.  Elements in a `t`-dependent
    /// basis are first rewritten in `p`.
    pub fn eval_t(&self, c: &Rat) -> Result<SymFunc> {
        let src = if self.basis.depends_on_t() { self.to_p()? } else { self.clone() };
        let mut terms = Terms::new();
        for (k, v) in &src.terms {
            add_term(&mut terms, k, &RationalFunc::from_rat(v.eval(c)?));
        }
        Ok(SymFunc { basis: src.basis, terms })
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(k, c)| json!({ "part": k, "coeff": c.to_json() }))
            .collect();
        json!({ "basis": self.basis.name(), "deg": self.degree().unwrap_or(0), "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<SymFunc> {
        let basis: Basis = v
            .get("basis")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("missing \"basis\"".into()))?
            .parse()?;
        let arr = v.get("terms").and_then(Value::as_array).ok_or_else(|| Error::Parse("missing \"terms\"".into()))?;
        let mut terms = Terms::new();
        for t in arr {
            let part: Vec<u32> = serde_json::from_value(t.get("part").cloned().unwrap_or(Value::Null))?;
            let coeff = RationalFunc::from_json(t.get("coeff").ok_or_else(|| Error::Parse("missing \"coeff\"".into()))?)?;
            add_term(&mut terms, &Partition::new(part), &coeff);
        }
        Ok(SymFunc { basis, terms })
    }
}

fn fmt_coeff(c: &RationalFunc) -> String {
    let s = c.display_asc("t");
    if c.num().terms().count() > 1 || !c.is_laurent() && !c.is_polynomial() {
        format!("({s})")
    } else {
        s
    }
}

impl fmt::Display for SymFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if c.is_one() {
                write!(f, "{}{}", self.basis, k)?;
            } else {
                write!(f, "{}*{}{}", fmt_coeff(c), self.basis, k)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SymFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// All ways of splitting the parts of l into two sub-multisets, with multiplicity.
fn split_multiset(l: &Partition) -> Vec<(Partition, Partition, BigInt)> {
    let mults: Vec<(u32, u32)> = l.multiplicities().into_iter().collect();
    let mut out = vec![(Vec::new(), Vec::new(), BigInt::one())];
    for (r, m) in mults {
        let mut next = Vec::new();
        for (a, b, c) in &out {
            for k in 0..=m {
                let mut a2: Vec<u32> = a.clone();
                let mut b2: Vec<u32> = b.clone();
                a2.extend(std::iter::repeat(r).take(k as usize));
                b2.extend(std::iter::repeat(r).take((m - k) as usize));
                next.push((a2, b2, c * binomial(m, k)));
            }
        }
        out = next;
    }
    out.into_iter().map(|(a, b, c)| (Partition::new(a), Partition::new(b), c)).collect()
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

pub type TensorTerms = BTreeMap<(Partition, Partition), RationalFunc>;

fn add_tensor_term(t: &mut TensorTerms, k: (Partition, Partition), c: &RationalFunc) {
    if c.is_zero() {
        return;
    }
    let e = t.entry(k.clone()).or_insert_with(RationalFunc::zero);
    *e += c;
    if e.is_zero() {
        t.remove(&k);
    }
}

/// An element of `Lambda[t] ⊗ Lambda[t]`, each side with its own basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymFuncTensor {
    left: Basis,
    right: Basis,
    terms: TensorTerms,
}

impl SymFuncTensor {
    pub fn from_terms(left: Basis, right: Basis, terms: TensorTerms) -> Self {
        let mut t = TensorTerms::new();
        for (k, c) in terms {
            add_tensor_term(&mut t, k, &c);
        }
        SymFuncTensor { left, right, terms: t }
    }

    /// `f ⊗ g`.
    pub fn pure(f: &SymFunc, g: &SymFunc) -> Self {
        let mut t = TensorTerms::new();
        for (a, x) in f.terms() {
            for (b, y) in g.terms() {
                add_tensor_term(&mut t, (a.clone(), b.clone()), &(x * y));
            }
        }
        SymFuncTensor { left: f.basis(), right: g.basis(), terms: t }
    }

    pub fn bases(&self) -> (Basis, Basis) {
        (self.left, self.right)
    }

    pub fn terms(&self) -> &TensorTerms {
        &self.terms
    }

    pub fn coeff(&self, a: &Partition, b: &Partition) -> RationalFunc {
        self.terms.get(&(a.clone(), b.clone())).cloned().unwrap_or_else(RationalFunc::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Re-express both tensor factors.
    pub fn convert(&self, left: Basis, right: Basis) -> Result<SymFuncTensor> {
        let mut out = TensorTerms::new();
        let mut by_left: BTreeMap<Partition, Terms> = BTreeMap::new();
        for ((a, b), c) in &self.terms {
            by_left.entry(a.clone()).or_default().insert(b.clone(), c.clone());
        }
        for (a, rights) in by_left {
            let l = SymFunc::basis_element(self.left, a).convert(left)?;
            let r = SymFunc { basis: self.right, terms: rights }.convert(right)?;
            for (x, cx) in l.terms() {
                for (y, cy) in r.terms() {
                    add_tensor_term(&mut out, (x.clone(), y.clone()), &(cx * cy));
                }
            }
        }
        Ok(SymFuncTensor { left, right, terms: out })
    }

    /// Componentwise product in `p ⊗ p`.
    pub fn multiply(&self, other: &SymFuncTensor) -> Result<SymFuncTensor> {
        let a = self.convert(Basis::P, Basis::P)?;
        let b = other.convert(Basis::P, Basis::P)?;
        let mut out = TensorTerms::new();
        for ((x1, y1), c1) in &a.terms {
            for ((x2, y2), c2) in &b.terms {
                add_tensor_term(&mut out, (x1.union(x2), y1.union(y2)), &(c1 * c2));
            }
        }
        Ok(SymFuncTensor { left: Basis::P, right: Basis::P, terms: out })
    }

    /// `<self, f ⊗ g>` using the `t`-deformed pairing on each factor (or the
    /// undeformed one when `deformed` is false).
    pub fn pair_with(&self, f: &SymFunc, g: &SymFunc, deformed: bool) -> Result<RationalFunc> {
        let a = self.convert(Basis::P, Basis::P)?;
        let fp = f.to_p()?;
        let gp = g.to_p()?;
        let mut acc = RationalFunc::zero();
        for ((x, y), c) in &a.terms {
            let (Some(fx), Some(gy)) = (fp.terms.get(x), gp.terms.get(y)) else { continue };
            let w = |k: &Partition| if deformed { z_t_cached(k) } else { RationalFunc::from_rat(z_rat(k)) };
            acc += &(&(c * &(fx * gy)) * &(&w(x) * &w(y)));
        }
        Ok(acc)
    }
}

/// `<f, g>_t` with `<p_lambda, p_mu>_t = delta z_lambda(t)`.
pub fn pairing_t(f: &SymFunc, g: &SymFunc) -> Result<RationalFunc> {
    Ok(pair_terms(&f.to_p()?.terms, &g.to_p()?.terms, true))
}

/// The undeformed pairing `<p_lambda, p_mu> = delta z_lambda` (the `t = 0` form).
pub fn pairing(f: &SymFunc, g: &SymFunc) -> Result<RationalFunc> {
    Ok(pair_terms(&f.to_p()?.terms, &g.to_p()?.terms, false))
}

/// `s_lambda` in the `e` basis, from `det(e_{lambda'_i - i + j})`; the
/// `h`-determinant is computed as well and must agree.
pub fn schur(l: &Partition) -> Result<SymFunc> {
    p_expansion(Basis::S, l)?;
    let det = jacobi_trudi(l.conjugate().parts());
    Ok(SymFunc::from_terms(Basis::E, det.into_iter().map(|(k, c)| (k, RationalFunc::from_bigint(c)))))
}

/// `S_lambda(t) = det(c_{lambda_i - i + j}(t))`, in the `c` basis.
pub fn dual_schur(l: &Partition) -> Result<SymFunc> {
    check_cap(l.weight())?;
    let det = jacobi_trudi(l.parts());
    Ok(SymFunc::from_terms(Basis::C, det.into_iter().map(|(k, c)| (k, RationalFunc::from_bigint(c)))))
}

/// `c_r(t)`, in the `c` basis.
pub fn cyclic_c(r: u32) -> SymFunc {
    SymFunc::generator(Basis::C, r)
}

/// `P_lambda(t)` in the `e` basis: `e_{lambda'} + sum_{mu < lambda} beta(t) e_{mu'}`.
pub fn hall_littlewood(l: &Partition) -> Result<SymFunc> {
    p_expansion(Basis::HL, l)?;
    let e = hl_e_cache().read().unwrap().get(l).cloned().ok_or_else(|| Error::Internal("Hall-Littlewood table".into()))?;
    Ok(SymFunc { basis: Basis::E, terms: (*e).clone() })
}

/// `K_{lambda mu}(t)`: the coefficient of `P_mu(t)` in `s_lambda`.
pub fn kostka_foulkes(l: &Partition, mu: &Partition) -> Result<IntPoly> {
    if l.weight() != mu.weight() {
        return Err(Error::WeightMismatch(l.weight(), mu.weight()));
    }
    let s = p_expansion(Basis::S, l)?;
    let p = p_expansion(Basis::HL, mu)?;
    let k = &pair_terms(&s, &p, true) * &RationalFunc::from_poly(mu.b_t());
    let poly = k
        .to_poly()
        .filter(|p| p.is_integral())
        .ok_or_else(|| Error::Internal(format!("K{l}{mu} = {k} is not in Z[t]")))?;
    let ok = if l == mu {
        poly.is_one()
    } else if mu.dominated_by(l) {
        poly.coeff(0).is_zero()
    } else {
        poly.is_zero()
    };
    if !ok {
        return Err(Error::Internal(format!("K{l}{mu} = {poly} violates triangularity")));
    }
    Ok(poly)
}

/// Kostka number: the coefficient of `m_mu` in `s_lambda`.
pub fn kostka_number(l: &Partition, mu: &Partition) -> Result<BigInt> {
    let c = pair_terms(p_expansion(Basis::S, l)?.as_ref(), p_expansion(Basis::H, mu)?.as_ref(), false);
    c.as_constant()
        .filter(|c| c.is_integer())
        .map(|c| c.to_integer())
        .ok_or_else(|| Error::Internal(format!("Kostka number K{l}{mu} = {c}")))
}

/// `c^xi_{lambda mu}`: the coefficient of `s_xi` in `s_lambda s_mu`.
pub fn littlewood_richardson(l: &Partition, mu: &Partition, xi: &Partition) -> Result<i64> {
    if l.weight() + mu.weight() != xi.weight() {
        return Err(Error::WeightMismatch(l.weight() + mu.weight(), xi.weight()));
    }
    let prod = p_product(p_expansion(Basis::S, l)?.as_ref(), p_expansion(Basis::S, mu)?.as_ref());
    let c = pair_terms(&prod, p_expansion(Basis::S, xi)?.as_ref(), false);
    c.as_constant()
        .filter(|c| c.is_integer() && !num_traits::Signed::is_negative(c))
        .and_then(|c| c.to_integer().to_i64())
        .ok_or_else(|| Error::Internal(format!("Littlewood-Richardson coefficient {c}")))
}

/// Exponent vector -> coefficient.
pub type MultiPoly = BTreeMap<Vec<u32>, RationalFunc>;

/// The image of `f` in `Q(t)[X_1, ..., X_N]`.
pub fn expand_in_monomials(f: &SymFunc, n_vars: usize) -> Result<MultiPoly> {
    // Lossless exactly when every monomial function in the support has at most n_vars parts.
    let longest = f.convert(Basis::M)?.terms.keys().map(|k| k.len()).max().unwrap_or(0);
    if n_vars < longest {
        return Err(Error::InvalidArgument(format!(
            "{n_vars} variables lose the monomial functions of length {longest}"
        )));
    }
    let p = f.to_p()?;
    let power_sum = |r: u32| -> MultiPoly {
        (0..n_vars)
            .map(|i| {
                let mut e = vec![0u32; n_vars];
                e[i] = r;
                (e, RationalFunc::one())
            })
            .collect()
    };
    let mul = |a: &MultiPoly, b: &MultiPoly| -> MultiPoly {
        let mut out = MultiPoly::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let v = out.entry(e.clone()).or_insert_with(RationalFunc::zero);
                *v += &(ca * cb);
                if v.is_zero() {
                    out.remove(&e);
                }
            }
        }
        out
    };
    let mut out = MultiPoly::new();
    for (l, c) in &p.terms {
        let mut acc: MultiPoly = MultiPoly::from([(vec![0u32; n_vars], c.clone())]);
        for &r in l.parts() {
            acc = mul(&acc, &power_sum(r));
        }
        for (e, v) in acc {
            let slot = out.entry(e.clone()).or_insert_with(RationalFunc::zero);
            *slot += &v;
            if slot.is_zero() {
                out.remove(&e);
            }
        }
    }
    Ok(out)
}

/// Given `y_1, y_2, ...`, the `x_0 = 1, x_1, ...` with `n x_n = sum_{a=1}^n y_a x_{n-a}`
/// (coefficients of `exp(sum y_n T^n / n)`).
pub fn genfn_exp(ys: &[RationalFunc]) -> Vec<RationalFunc> {
    let mut xs = vec![RationalFunc::one()];
    for n in 1..=ys.len() {
        let mut acc = RationalFunc::zero();
        for a in 1..=n {
            acc += &(&ys[a - 1] * &xs[n - a]);
        }
        xs.push(acc.scale(&Rat::new(BigInt::one(), BigInt::from(n))));
    }
    xs
}

/// Inverse of [`genfn_exp`]: from `x_0 = 1, x_1, ...` recover `y_1, y_2, ...`.
pub fn genfn_log(xs: &[RationalFunc]) -> Result<Vec<RationalFunc>> {
    if xs.first().map_or(true, |x| !x.is_one()) {
        return Err(Error::InvalidArgument("series must start with 1".into()));
    }
    let mut ys: Vec<RationalFunc> = Vec::new();
    for n in 1..xs.len() {
        let mut acc = xs[n].scale(&Rat::from_integer(BigInt::from(n)));
        for a in 1..n {
            acc -= &(&ys[a - 1] * &xs[n - a]);
        }
        ys.push(acc);
    }
    Ok(ys)
}
