//! The generic Hall algebra of nilpotent `k[T]`-modules over `Q(v)`, `q = v^2`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::arith::{IntPoly, LaurentPoly, Rat, RationalFunc};
use crate::canonical::{bar_invariant_lift, in_negative_ideal, Rows};
use crate::error::{Error, Result};
use crate::hall_engine::HallEngine;
use crate::linalg::{invert, Matrix};
use crate::partitions::{partitions, MultiPartition, Partition};
use crate::symfunc::{self, Basis, SymFunc};

/// `v^k`.
pub fn v_pow(k: i64) -> RationalFunc {
    RationalFunc::monomial(Rat::one(), k)
}

/// `p(q)` as a function of `v`, with `q = v^2`.
pub fn q_to_v(p: &IntPoly) -> RationalFunc {
    RationalFunc::from_poly(p.clone()).subst(&Rat::one(), 2).expect("valid substitution")
}

/// An element `f(v) = g(v^2)`, rewritten as `g(t^-1)`; fails on odd powers of `v`.
pub fn even_v_to_t(c: &RationalFunc) -> Result<RationalFunc> {
    let halve = |p: &IntPoly| -> Result<IntPoly> {
        let mut cs = Vec::new();
        for (k, a) in p.terms() {
            if k % 2 != 0 {
                return Err(Error::InvalidArgument(format!("coefficient {c} is not a function of v^2")));
            }
            if cs.len() <= k / 2 {
                cs.resize(k / 2 + 1, Rat::zero());
            }
            cs[k / 2] = a.clone();
        }
        Ok(IntPoly::from_coeffs(cs))
    };
    let s = RationalFunc::new(halve(c.num())?, halve(c.den())?)?;
    s.subst(&Rat::one(), -1)
}

/// Laurent coefficient in `q = v^2`, if it has one.
pub fn v_to_q_laurent(c: &RationalFunc) -> Option<LaurentPoly> {
    let l = c.to_laurent()?;
    if l.terms().keys().any(|e| e % 2 != 0) {
        return None;
    }
    Some(LaurentPoly::from_terms(l.terms().iter().map(|(e, a)| (e / 2, a.clone()))))
}

fn engine() -> Arc<HallEngine> {
    HallEngine::classical()
}

fn mp(p: &Partition) -> MultiPartition {
    MultiPartition::from_partition(p.clone())
}

/// `F^xi_{lambda mu}(T)`, checked against the symmetry, support and leading-term laws.
pub fn hall_polynomial(lambda: &Partition, mu: &Partition, xi: &Partition) -> Result<IntPoly> {
    if lambda.weight() + mu.weight() != xi.weight() {
        return Ok(IntPoly::zero());
    }
    let e = engine();
    let f = e.hall_polynomial(&mp(lambda), &mp(mu), &mp(xi))?;
    let g = e.hall_polynomial(&mp(mu), &mp(lambda), &mp(xi))?;
    if f != g {
        return Err(Error::Internal(format!("F^{xi}_{lambda}{mu} = {f} but F^{xi}_{mu}{lambda} = {g}")));
    }
    if !f.is_zero() {
        let lo = lambda.union(mu);
        let hi = lambda.sum(mu);
        if !lo.dominance_leq(xi)? || !xi.dominance_leq(&hi)? {
            return Err(Error::Internal(format!("F^{xi}_{lambda}{mu} = {f} outside {lo} <= xi <= {hi}")));
        }
    }
    let top = xi.n_stat() as i64 - lambda.n_stat() as i64 - mu.n_stat() as i64;
    if let Some(d) = f.degree() {
        if (d as i64) > top {
            return Err(Error::Internal(format!("deg F^{xi}_{lambda}{mu} = {d} exceeds {top}")));
        }
    }
    if xi.weight() <= symfunc::degree_cap() {
        let c = symfunc::littlewood_richardson(lambda, mu, xi)?;
        let lead = if top >= 0 { f.coeff(top as usize) } else { Rat::zero() };
        if lead != Rat::from_integer(c.into()) {
            return Err(Error::Internal(format!("F^{xi}_{lambda}{mu} = {f} has top coefficient {lead}, expected c = {c}")));
        }
    }
    Ok(f)
}

/// A finite combination `sum c_lambda u_lambda` with `c_lambda` in `Q(v)`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct HallElement1 {
    terms: BTreeMap<Partition, RationalFunc>,
}

fn add_term<K: Ord + Clone>(terms: &mut BTreeMap<K, RationalFunc>, k: &K, c: &RationalFunc) {
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

/// Which basis a coefficient list refers to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HallBasis {
    /// `u_lambda`
    U,
    /// `ũ_lambda = v^{2n(lambda)} u_lambda`
    Pbw,
    /// `b_lambda`
    Canonical,
}

impl HallBasis {
    pub fn name(self) -> &'static str {
        match self {
            HallBasis::U => "u",
            HallBasis::Pbw => "pbw",
            HallBasis::Canonical => "canonical",
        }
    }
}

impl std::str::FromStr for HallBasis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "u" => Ok(HallBasis::U),
            "pbw" => Ok(HallBasis::Pbw),
            "canonical" => Ok(HallBasis::Canonical),
            _ => Err(Error::Parse(format!("unknown Hall basis {s:?}"))),
        }
    }
}

impl HallElement1 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::basis(Partition::empty())
    }

    /// `u_lambda`
    pub fn basis(lambda: Partition) -> Self {
        Self::from_terms([(lambda, RationalFunc::one())])
    }

    pub fn from_terms<I: IntoIterator<Item = (Partition, RationalFunc)>>(it: I) -> Self {
        let mut terms = BTreeMap::new();
        for (k, c) in it {
            add_term(&mut terms, &k, &c);
        }
        HallElement1 { terms }
    }

    pub fn terms(&self) -> &BTreeMap<Partition, RationalFunc> {
        &self.terms
    }

    pub fn coeff(&self, lambda: &Partition) -> RationalFunc {
        self.terms.get(lambda).cloned().unwrap_or_else(RationalFunc::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|p| p.weight()).collect();
        d.dedup();
        d.sort_unstable();
        d.dedup();
        d
    }

    fn homogeneous_part(&self, d: u32) -> HallElement1 {
        HallElement1 { terms: self.terms.iter().filter(|(k, _)| k.weight() == d).map(|(k, c)| (k.clone(), c.clone())).collect() }
    }

    pub fn scale(&self, c: &RationalFunc) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, x)| (k.clone(), x * c)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            add_term(&mut terms, k, c);
        }
        HallElement1 { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&RationalFunc::from_int(-1)))
    }

    /// Bilinear extension of `u_lambda u_mu = sum F^xi_{lambda mu}(v^2) u_xi`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        let e = engine();
        let mut terms = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let c = ca * cb;
                for (xi, f) in e.product(&mp(a), &mp(b))?.iter() {
                    add_term(&mut terms, xi.component(1), &(&c * &q_to_v(f)));
                }
            }
        }
        Ok(HallElement1 { terms })
    }

    /// `Delta(u_xi) = sum F^xi_{lambda mu}(v^2) a_lambda a_mu / a_xi u_lambda (x) u_mu`.
    pub fn coproduct(&self) -> Result<HallTensor1> {
        let e = engine();
        let mut terms = BTreeMap::new();
        for (xi, c) in &self.terms {
            let axi = q_to_v(&xi.aut_poly());
            for (a, b, f) in e.decompositions(&mp(xi))? {
                let (a, b) = (a.component(1).clone(), b.component(1).clone());
                let k = &(&q_to_v(&f) * &(&q_to_v(&a.aut_poly()) * &q_to_v(&b.aut_poly()))) / &axi;
                add_term(&mut terms, &(a, b), &(c * &k));
            }
        }
        Ok(HallTensor1 { terms })
    }

    /// `ũ_lambda` coordinates, `u` coordinates, or `b_lambda` coordinates.
    pub fn coefficients_in(&self, basis: HallBasis) -> Result<BTreeMap<Partition, RationalFunc>> {
        match basis {
            HallBasis::U => Ok(self.terms.clone()),
            HallBasis::Pbw => Ok(self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c * &v_pow(-2 * k.n_stat() as i64)))
                .collect()),
            HallBasis::Canonical => {
                let mut out = BTreeMap::new();
                for d in self.degrees() {
                    let data = canonical_data(d)?;
                    let row = self.homogeneous_part(d);
                    for (j, lam) in data.basis.iter().enumerate() {
                        let mut s = RationalFunc::zero();
                        for (i, xi) in data.basis.iter().enumerate() {
                            if let Some(c) = row.terms.get(xi) {
                                if !data.inv[i][j].is_zero() {
                                    s += &(c * &data.inv[i][j]);
                                }
                            }
                        }
                        add_term(&mut out, lam, &s);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Inverse of `coefficients_in`.
    pub fn from_coefficients(basis: HallBasis, coeffs: &BTreeMap<Partition, RationalFunc>) -> Result<Self> {
        let mut out = HallElement1::zero();
        for (k, c) in coeffs {
            let e = match basis {
                HallBasis::U => HallElement1::basis(k.clone()),
                HallBasis::Pbw => pbw(k),
                HallBasis::Canonical => canonical_basis(k)?,
            };
            out = out.add(&e.scale(c));
        }
        Ok(out)
    }

    /// Render in the chosen basis; coefficients in `q` when possible, else in `v`.
    pub fn display_in(&self, basis: HallBasis) -> Result<String> {
        let coeffs = self.coefficients_in(basis)?;
        let sym = match basis {
            HallBasis::U => "u",
            HallBasis::Pbw => "ũ",
            HallBasis::Canonical => "b",
        };
        Ok(render_terms(coeffs.iter().rev().map(|(k, c)| (format!("{sym}{k}"), c))))
    }

    pub fn to_json(&self) -> Value {
        self.to_json_in(HallBasis::U).expect("u coordinates always exist")
    }

    pub fn to_json_in(&self, basis: HallBasis) -> Result<Value> {
        let coeffs = self.coefficients_in(basis)?;
        let deg = self.degrees().last().copied().unwrap_or(0);
        let terms: Vec<Value> = coeffs.iter().map(|(k, c)| json!({ "part": k, "coeff": c.to_json() })).collect();
        Ok(json!({ "basis": basis.name(), "deg": deg, "terms": terms }))
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let basis: HallBasis = v.get("basis").and_then(Value::as_str).unwrap_or("u").parse()?;
        let arr = v.get("terms").and_then(Value::as_array).ok_or_else(|| Error::Parse("missing \"terms\"".into()))?;
        let mut coeffs = BTreeMap::new();
        for t in arr {
            let part: Vec<u32> = serde_json::from_value(t.get("part").cloned().unwrap_or(Value::Null))?;
            let c = RationalFunc::from_json(t.get("coeff").ok_or_else(|| Error::Parse("missing \"coeff\"".into()))?)?;
            add_term(&mut coeffs, &Partition::new(part), &c);
        }
        Self::from_coefficients(basis, &coeffs)
    }
}

/// Coefficient string in `q` when it is a Laurent polynomial in `v^2`, otherwise in `v`.
pub fn coeff_string(c: &RationalFunc) -> String {
    match v_to_q_laurent(c) {
        Some(l) => l.display_desc("q"),
        None => c.display_desc("v"),
    }
}

pub(crate) fn render_terms<'a, I: Iterator<Item = (String, &'a RationalFunc)>>(it: I) -> String {
    let mut out = String::new();
    for (name, c) in it {
        let s = coeff_string(c);
        let single = v_to_q_laurent(c).map(|l| l.terms().len() == 1).unwrap_or(false)
            || c.to_laurent().map(|l| l.terms().len() == 1).unwrap_or(false);
        let (neg, body) = if s == "1" {
            (false, String::new())
        } else if s == "-1" {
            (true, String::new())
        } else if single {
            match s.strip_prefix('-') {
                Some(r) => (true, r.to_string()),
                None => (false, s),
            }
        } else {
            (false, format!("({s})"))
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
        out.push_str(&name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for HallElement1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_terms(self.terms.iter().rev().map(|(k, c)| (format!("u{k}"), c))))
    }
}

impl fmt::Debug for HallElement1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Element of `H_1 (x) H_1`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct HallTensor1 {
    terms: BTreeMap<(Partition, Partition), RationalFunc>,
}

impl HallTensor1 {
    pub fn from_terms<I: IntoIterator<Item = ((Partition, Partition), RationalFunc)>>(it: I) -> Self {
        let mut terms = BTreeMap::new();
        for (k, c) in it {
            add_term(&mut terms, &k, &c);
        }
        HallTensor1 { terms }
    }

    pub fn pure(x: &HallElement1, y: &HallElement1) -> Self {
        Self::from_terms(
            x.terms.iter().flat_map(|(a, ca)| y.terms.iter().map(move |(b, cb)| ((a.clone(), b.clone()), ca * cb))),
        )
    }

    pub fn terms(&self) -> &BTreeMap<(Partition, Partition), RationalFunc> {
        &self.terms
    }

    pub fn coeff(&self, a: &Partition, b: &Partition) -> RationalFunc {
        self.terms.get(&(a.clone(), b.clone())).cloned().unwrap_or_else(RationalFunc::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Componentwise product; untwisted since the Euler form vanishes.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for ((a, b), c) in &self.terms {
            for ((x, y), d) in &other.terms {
                let l = HallElement1::basis(a.clone()).multiply(&HallElement1::basis(x.clone()))?;
                let r = HallElement1::basis(b.clone()).multiply(&HallElement1::basis(y.clone()))?;
                let cd = c * d;
                for (p, cp) in &l.terms {
                    for (s, cs) in &r.terms {
                        add_term(&mut terms, &(p.clone(), s.clone()), &(&cd * &(cp * cs)));
                    }
                }
            }
        }
        Ok(HallTensor1 { terms })
    }

    /// `<self, x (x) y>` using the pairing on each factor.
    pub fn pair_with(&self, x: &HallElement1, y: &HallElement1) -> RationalFunc {
        let mut s = RationalFunc::zero();
        for ((a, b), c) in &self.terms {
            if let (Some(ca), Some(cb)) = (x.terms.get(a), y.terms.get(b)) {
                s += &(&(c * ca) * &(cb * &(&norm(a) * &norm(b))));
            }
        }
        s
    }
}

impl fmt::Display for HallTensor1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_terms(self.terms.iter().rev().map(|((a, b), c)| (format!("u{a}⊗u{b}"), c))))
    }
}

impl fmt::Debug for HallTensor1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `<u_lambda, u_lambda> = v^{2|lambda|} / a_lambda(v^2)`.
pub fn norm(lambda: &Partition) -> RationalFunc {
    &v_pow(2 * lambda.weight() as i64) / &q_to_v(&lambda.aut_poly())
}

/// The diagonal form `<u_lambda, u_mu> = delta / (v^{4n(lambda)} b_lambda(v^-2))`.
pub fn pairing(x: &HallElement1, y: &HallElement1) -> RationalFunc {
    let mut s = RationalFunc::zero();
    for (k, c) in &x.terms {
        if let Some(d) = y.terms.get(k) {
            s += &(&(c * d) * &norm(k));
        }
    }
    s
}

/// `ũ_lambda = v^{2n(lambda)} u_lambda`.
pub fn pbw(lambda: &Partition) -> HallElement1 {
    HallElement1::from_terms([(lambda.clone(), v_pow(2 * lambda.n_stat() as i64))])
}

/// `Phi_1`: `t -> v^-2`, `t^{n(lambda)} P_lambda(t) -> u_lambda`.
pub fn phi1(f: &SymFunc) -> Result<HallElement1> {
    let hl = f.convert(Basis::HL)?;
    Ok(HallElement1::from_terms(hl.terms().iter().map(|(l, c)| {
        let c = c.subst(&Rat::one(), -2).expect("valid substitution");
        (l.clone(), &c * &v_pow(2 * l.n_stat() as i64))
    })))
}

/// Inverse of `phi1`, landing in the Hall-Littlewood basis.
pub fn phi1_inv(x: &HallElement1) -> Result<SymFunc> {
    let mut terms = Vec::new();
    for (l, c) in &x.terms {
        let g = even_v_to_t(c)?;
        terms.push((l.clone(), &g * &RationalFunc::monomial(Rat::one(), l.n_stat() as i64)));
    }
    Ok(SymFunc::from_terms(Basis::HL, terms))
}

struct BarData {
    basis: Vec<Partition>,
    // rows: Phi_1(e_{lambda'}) in u coordinates
    m: Matrix<RationalFunc>,
    inv: Matrix<RationalFunc>,
}

type DegreeCache<T> = OnceLock<RwLock<HashMap<u32, Arc<T>>>>;

fn cached<T>(cache: &'static DegreeCache<T>, d: u32, build: impl FnOnce() -> Result<T>) -> Result<Arc<T>> {
    let c = cache.get_or_init(Default::default);
    if let Some(x) = c.read().unwrap().get(&d) {
        return Ok(x.clone());
    }
    let x = Arc::new(build()?);
    c.write().unwrap().insert(d, x.clone());
    Ok(x)
}

fn bar_data(d: u32) -> Result<Arc<BarData>> {
    static CACHE: DegreeCache<BarData> = OnceLock::new();
    cached(&CACHE, d, || {
        let basis = partitions(d);
        let e = engine();
        let mut m = vec![vec![RationalFunc::zero(); basis.len()]; basis.len()];
        for (i, lam) in basis.iter().enumerate() {
            // Phi_1(e_{lambda'}) = prod_i ũ_(1^{lambda'_i}) = v^{2n(lambda)} E_lambda
            let scale = v_pow(2 * lam.n_stat() as i64);
            for (xi, f) in e.layer_product(&mp(lam))? {
                let j = basis.iter().position(|p| p == xi.component(1)).expect("same degree");
                m[i][j] = &scale * &q_to_v(&f);
            }
        }
        let inv = invert(&m)?;
        Ok(BarData { basis, m, inv })
    })
}

/// The bar involution: `v -> v^-1` on coefficients in the basis `Phi_1(e_{lambda'})`.
pub fn bar(x: &HallElement1) -> Result<HallElement1> {
    let mut out = HallElement1::zero();
    for d in x.degrees() {
        let data = bar_data(d)?;
        let n = data.basis.len();
        let part = x.homogeneous_part(d);
        let row: Vec<RationalFunc> = data.basis.iter().map(|p| part.coeff(p)).collect();
        for j in 0..n {
            // coefficient of Phi_1(e_{basis[j]'})
            let mut c = RationalFunc::zero();
            for i in 0..n {
                if !row[i].is_zero() && !data.inv[i][j].is_zero() {
                    c += &(&row[i] * &data.inv[i][j]);
                }
            }
            if c.is_zero() {
                continue;
            }
            let cb = c.bar();
            for k in 0..n {
                if !data.m[j][k].is_zero() {
                    out = out.add(&HallElement1::from_terms([(data.basis[k].clone(), &cb * &data.m[j][k])]));
                }
            }
        }
    }
    Ok(out)
}

/// `b_lambda := Phi_1(s_lambda)`, asserted equal to the bar-invariant lift of `ũ_lambda`.
pub fn canonical_basis(lambda: &Partition) -> Result<HallElement1> {
    let a = phi1(&symfunc::schur(lambda)?)?;
    let b = canonical_basis_via_bar(lambda)?;
    if a != b {
        return Err(Error::Internal(format!("canonical basis for {lambda}: Phi_1(s) = {a} but bar recursion gives {b}")));
    }
    Ok(a)
}

/// Bar matrix on the PBW basis: `bar(ũ_mu) = sum A[mu][nu] ũ_nu`.
pub fn pbw_bar_matrix(d: u32) -> Result<Arc<Rows<Partition>>> {
    static CACHE: DegreeCache<Rows<Partition>> = OnceLock::new();
    cached(&CACHE, d, || {
        let mut rows = Rows::new();
        for mu in partitions(d) {
            let b = bar(&pbw(&mu))?;
            rows.insert(mu.clone(), b.coefficients_in(HallBasis::Pbw)?);
        }
        Ok(rows)
    })
}

/// Route (ii): solve `b = bar(b)` with `b - ũ_lambda` in `v^-2 Z[v^-2]`-span of the `ũ_nu`.
pub fn canonical_basis_via_bar(lambda: &Partition) -> Result<HallElement1> {
    let d = lambda.weight();
    let rows = pbw_bar_matrix(d)?;
    // decreasing lexicographic order refines dominance from the top
    let order = partitions(d);
    let beta = bar_invariant_lift(&order, &rows, lambda, true)?;
    HallElement1::from_coefficients(HallBasis::Pbw, &beta)
}

struct CanonData {
    basis: Vec<Partition>,
    inv: Matrix<RationalFunc>,
}

fn canonical_data(d: u32) -> Result<Arc<CanonData>> {
    static CACHE: DegreeCache<CanonData> = OnceLock::new();
    cached(&CACHE, d, || {
        let basis = partitions(d);
        let m: Matrix<RationalFunc> = basis
            .iter()
            .map(|l| canonical_basis(l).map(|b| basis.iter().map(|p| b.coeff(p)).collect()))
            .collect::<Result<_>>()?;
        Ok(CanonData { inv: invert(&m)?, basis })
    })
}

/// `b*_lambda := Phi_1(S_lambda(t))`, asserted dual to the canonical basis.
pub fn dual_canonical_basis(lambda: &Partition) -> Result<HallElement1> {
    let b = phi1(&symfunc::dual_schur(lambda)?)?;
    for mu in partitions(lambda.weight()) {
        let p = pairing(&b, &canonical_basis(&mu)?);
        let expect = if mu == *lambda { RationalFunc::one() } else { RationalFunc::zero() };
        if p != expect {
            return Err(Error::Internal(format!("<b*_{lambda}, b_{mu}> = {p}")));
        }
    }
    Ok(b)
}

/// Whether every off-diagonal PBW coefficient of `b` lies in `v^-2 Z[v^-2]`.
pub fn has_canonical_shape(lambda: &Partition, b: &HallElement1) -> Result<bool> {
    let c = b.coefficients_in(HallBasis::Pbw)?;
    Ok(c.iter().all(|(k, x)| if k == lambda { x.is_one() } else { in_negative_ideal(x, true) }))
}

#[cfg(test)]
mod tests;
