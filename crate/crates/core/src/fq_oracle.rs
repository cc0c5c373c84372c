//! Brute-force ground truth over prime fields.
//!
//! Representations are stored with one matrix per arrow `a_k: k -> k-1`.
//! Everything here is exhaustive enumeration, so it only scales to tiny
//! modules, but it shares no code with the Hall engine.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::arith::{IntPoly, Rat};
use crate::error::{Error, Result};
use crate::linalg;
use crate::partitions::{DimensionVector, MultiPartition, Partition};

/// Primes used as evaluation points, in order.
pub const PRIMES: [u32; 11] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31];

static FIELD_BOUND: AtomicU32 = AtomicU32::new(13);
static ENUMERATION_BOUND: AtomicU32 = AtomicU32::new(8);
static AUTOMORPHISM_BOUND: AtomicU32 = AtomicU32::new(5);

pub fn field_bound() -> u32 {
    FIELD_BOUND.load(Ordering::Relaxed)
}

pub fn set_field_bound(q: u32) {
    FIELD_BOUND.store(q, Ordering::Relaxed);
}

pub fn enumeration_bound() -> u32 {
    ENUMERATION_BOUND.load(Ordering::Relaxed)
}

pub fn set_enumeration_bound(d: u32) {
    ENUMERATION_BOUND.store(d, Ordering::Relaxed);
}

pub fn automorphism_bound() -> u32 {
    AUTOMORPHISM_BOUND.load(Ordering::Relaxed)
}

pub fn set_automorphism_bound(d: u32) {
    AUTOMORPHISM_BOUND.store(d, Ordering::Relaxed);
}

/// Dense matrix over `F_q`, stored by rows.
pub type FMat = Vec<Vec<u32>>;

fn zeros(r: usize, c: usize) -> FMat {
    vec![vec![0; c]; r]
}

fn identity(d: usize) -> FMat {
    (0..d).map(|i| (0..d).map(|j| u32::from(i == j)).collect()).collect()
}

fn mat_mul(a: &FMat, b: &FMat, cols_b: usize, q: u32) -> FMat {
    let mut out = zeros(a.len(), cols_b);
    for (i, row) in a.iter().enumerate() {
        for (k, &x) in row.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for j in 0..cols_b {
                out[i][j] = (out[i][j] + x * b[k][j]) % q;
            }
        }
    }
    out
}

fn inv_mod(x: u32, q: u32) -> u32 {
    // q is prime
    let mut r = 1u64;
    let mut b = x as u64 % q as u64;
    let mut e = q as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % q as u64;
        }
        b = b * b % q as u64;
        e >>= 1;
    }
    r as u32
}

/// Reduced row echelon form of the given rows; zero rows dropped.
pub fn rref(rows: &[Vec<u32>], cols: usize, q: u32) -> FMat {
    let mut m: FMat = rows.to_vec();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        let inv = inv_mod(m[r][c], q);
        for x in m[r].iter_mut() {
            *x = *x * inv % q;
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + (q - f) * m[r][j]) % q;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

fn rank(m: &FMat, cols: usize, q: u32) -> usize {
    rref(m, cols, q).len()
}

fn transpose(m: &FMat, rows: usize, cols: usize) -> FMat {
    (0..cols).map(|j| (0..rows).map(|i| m[i][j]).collect()).collect()
}

fn pivots(b: &FMat) -> Vec<usize> {
    b.iter().map(|r| r.iter().position(|&x| x != 0).expect("nonzero row")).collect()
}

// Reduce `w` modulo the row space of the RREF basis `b`.
fn reduce(w: &[u32], b: &FMat, piv: &[usize], q: u32) -> Vec<u32> {
    let mut w = w.to_vec();
    for (row, &p) in b.iter().zip(piv) {
        let f = w[p];
        if f != 0 {
            for (x, &y) in w.iter_mut().zip(row) {
                *x = (*x + (q - f) * y) % q;
            }
        }
    }
    w
}

/// Basis of the null space `{x : m x = 0}`, in RREF.
fn null_space(m: &FMat, cols: usize, q: u32) -> FMat {
    let r = rref(m, cols, q);
    let piv = pivots(&r);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    let mut out = Vec::new();
    for &f in &free {
        let mut x = vec![0u32; cols];
        x[f] = 1;
        for (row, &p) in r.iter().zip(&piv) {
            x[p] = (q - row[f]) % q;
        }
        out.push(x);
    }
    rref(&out, cols, q)
}

fn is_prime(q: u32) -> bool {
    q >= 2 && (2..q).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

fn check_field(q: u32) -> Result<()> {
    if !is_prime(q) {
        return Err(Error::InvalidArgument(format!("{q} is not prime")));
    }
    if q > field_bound() {
        return Err(Error::BoundExceeded(format!("field size {q} exceeds field bound {}", field_bound())));
    }
    Ok(())
}

/// A nilpotent representation of the cyclic quiver over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FqRep {
    n: usize,
    q: u32,
    dims: DimensionVector,
    // arrows[k]: vertex k -> vertex k-1 (0-based), a dims[k-1] x dims[k] matrix
    arrows: Vec<FMat>,
}

impl FqRep {
    pub fn new(q: u32, dims: DimensionVector, arrows: Vec<FMat>) -> Result<Self> {
        let n = dims.rank();
        if n == 0 || arrows.len() != n {
            return Err(Error::InvalidArgument("need one matrix per arrow".into()));
        }
        if !is_prime(q) {
            return Err(Error::InvalidArgument(format!("{q} is not prime")));
        }
        for (k, a) in arrows.iter().enumerate() {
            let rows = dims.0[(k + n - 1) % n] as usize;
            let cols = dims.0[k] as usize;
            if a.len() != rows || a.iter().any(|r| r.len() != cols || r.iter().any(|&x| x >= q)) {
                return Err(Error::InvalidArgument(format!("arrow {} has the wrong shape", k + 1)));
            }
        }
        Ok(FqRep { n, q, dims, arrows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    /// Matrix of the arrow `a_i: i -> i-1`, 1-based.
    pub fn arrow(&self, i: usize) -> &FMat {
        &self.arrows[i - 1]
    }

    fn d(&self, v: usize) -> usize {
        self.dims.0[v % self.n] as usize
    }

    fn prev(&self, v: usize) -> usize {
        (v + self.n - 1) % self.n
    }

    /// Composite of the `l` arrows starting at vertex `v + l` and ending at `v` (0-based).
    fn path(&self, v: usize, l: usize) -> FMat {
        let mut m = identity(self.d(v));
        for s in 1..=l {
            let k = (v + s) % self.n;
            m = mat_mul(&m, &self.arrows[k], self.d(k), self.q);
        }
        m
    }

    pub fn is_nilpotent(&self) -> bool {
        let total = self.dims.total() as usize;
        (0..self.n).all(|v| self.path(v, total).iter().all(|r| r.iter().all(|&x| x == 0)))
    }

    pub fn direct_sum(&self, other: &FqRep) -> Result<FqRep> {
        if self.n != other.n || self.q != other.q {
            return Err(Error::InvalidArgument("direct sum needs the same quiver and field".into()));
        }
        let n = self.n;
        let dims = self.dims.add(&other.dims);
        let arrows = (0..n)
            .map(|k| {
                let p = (k + n - 1) % n;
                let (r1, c1) = (self.d(p), self.d(k));
                let (r2, c2) = (other.d(p), other.d(k));
                let mut m = zeros(r1 + r2, c1 + c2);
                for i in 0..r1 {
                    m[i][..c1].copy_from_slice(&self.arrows[k][i]);
                }
                for i in 0..r2 {
                    m[r1 + i][c1..].copy_from_slice(&other.arrows[k][i]);
                }
                m
            })
            .collect();
        Ok(FqRep { n, q: self.q, dims, arrows })
    }

    /// The isomorphic representation `g_{k-1} A_k g_k^{-1}`; `g` holds one invertible matrix per vertex.
    pub fn change_basis(&self, g: &[FMat]) -> Result<FqRep> {
        let n = self.n;
        let mut ginv = Vec::with_capacity(n);
        for (v, m) in g.iter().enumerate() {
            let d = self.d(v);
            ginv.push(invert_mod(m, d, self.q).ok_or_else(|| Error::InvalidArgument(format!("matrix at vertex {} is singular", v + 1)))?);
        }
        let arrows = (0..n)
            .map(|k| {
                let p = self.prev(k);
                let t = mat_mul(&g[p], &self.arrows[k], self.d(k), self.q);
                mat_mul(&t, &ginv[k], self.d(k), self.q)
            })
            .collect();
        Ok(FqRep { n, q: self.q, dims: self.dims.clone(), arrows })
    }
}

fn invert_mod(m: &FMat, d: usize, q: u32) -> Option<FMat> {
    let aug: FMat = m.iter().enumerate().map(|(i, r)| {
        let mut row = r.clone();
        row.extend((0..d).map(|j| u32::from(i == j)));
        row
    }).collect();
    let r = rref(&aug, 2 * d, q);
    if r.len() < d || (0..d).any(|i| r[i][i] != 1) {
        return None;
    }
    Some(r.into_iter().map(|row| row[d..].to_vec()).collect())
}

fn check_total(m: &MultiPartition, bound: u32, what: &str) -> Result<()> {
    if m.size() > bound {
        return Err(Error::BoundExceeded(format!("{what} of {m} needs total dimension {} > {bound}", m.size())));
    }
    Ok(())
}

/// Block normal form of `M_lambda`.
pub fn rep_from_multipartition(m: &MultiPartition, q: u32) -> Result<FqRep> {
    check_field(q)?;
    check_total(m, enumeration_bound(), "representation")?;
    let n = m.rank();
    let dims = m.dim_vector();
    let mut next = vec![0usize; n];
    let mut arrows: Vec<FMat> = (0..n).map(|k| zeros(dims.0[(k + n - 1) % n] as usize, dims.0[k] as usize)).collect();
    for (i, l) in m.summands() {
        let mut below: Option<usize> = None;
        for j in 0..l as usize {
            let v = (i - 1 + j) % n;
            let idx = next[v];
            next[v] += 1;
            if let Some(b) = below {
                arrows[v][b][idx] = 1;
            }
            below = Some(idx);
        }
    }
    FqRep::new(q, dims, arrows)
}

/// Isomorphism type read off from the ranks of all paths.
pub fn iso_type(rep: &FqRep) -> Result<MultiPartition> {
    let n = rep.n;
    let total = rep.dims.total() as usize;
    // r[v][l] = rank of the length-l path ending at v
    let r: Vec<Vec<i64>> = (0..n)
        .map(|v| (0..=total + 1).map(|l| rank(&rep.path(v, l), rep.d(v + l), rep.q) as i64).collect())
        .collect();
    if (0..n).any(|v| r[v][total] != 0) {
        return Err(Error::NonNilpotent);
    }
    // D(v,l) = #summands of length > l whose top sits at v + l
    let dd = |v: usize, l: usize| r[v % n][l] - r[v % n][l + 1];
    let mut comps = vec![Vec::new(); n];
    for v in 0..n {
        for l in 0..total {
            let k = dd(v, l) - dd(v + n - 1, l + 1);
            if k < 0 {
                return Err(Error::Internal("path ranks are inconsistent".into()));
            }
            comps[v].extend(std::iter::repeat(l as u32 + 1).take(k as usize));
        }
    }
    MultiPartition::new(comps.into_iter().map(Partition::new).collect())
}

// All RREF bases of e-dimensional subspaces of F_q^d.
fn for_each_subspace(d: usize, e: usize, q: u32, f: &mut dyn FnMut(&FMat) -> Result<()>) -> Result<()> {
    fn choose(d: usize, e: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == e {
            out.push(cur.clone());
            return;
        }
        for c in start..d {
            cur.push(c);
            choose(d, e, c + 1, cur, out);
            cur.pop();
        }
    }
    let mut pivot_sets = Vec::new();
    choose(d, e, 0, &mut Vec::new(), &mut pivot_sets);
    for piv in pivot_sets {
        let free: Vec<(usize, usize)> = (0..e)
            .flat_map(|r| {
                let piv = piv.clone();
                (piv[r] + 1..d).filter(move |c| !piv.contains(c)).map(move |c| (r, c))
            })
            .collect();
        let mut b = zeros(e, d);
        for (r, &p) in piv.iter().enumerate() {
            b[r][p] = 1;
        }
        let mut digits = vec![0u32; free.len()];
        loop {
            for (k, &(r, c)) in free.iter().enumerate() {
                b[r][c] = digits[k];
            }
            f(&b)?;
            let mut k = 0;
            while k < digits.len() {
                digits[k] += 1;
                if digits[k] < q {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
            if k == digits.len() {
                break;
            }
        }
    }
    Ok(())
}

// A(U_k) inside U_{k-1}?
fn arrow_preserves(rep: &FqRep, k: usize, src: &FMat, dst: &FMat) -> bool {
    let q = rep.q;
    let a = &rep.arrows[k];
    let piv = pivots(dst);
    src.iter().all(|u| {
        let w: Vec<u32> = a.iter().map(|row| row.iter().zip(u).fold(0, |s, (&x, &y)| (s + x * y) % q)).collect();
        reduce(&w, dst, &piv, q).iter().all(|&x| x == 0)
    })
}

/// Calls `f` with the per-vertex RREF bases of every subrepresentation of dimension `e`.
pub fn for_each_submodule(rep: &FqRep, e: &DimensionVector, f: &mut dyn FnMut(&[FMat]) -> Result<()>) -> Result<()> {
    let n = rep.n;
    if e.rank() != n {
        return Err(Error::RankMismatch(e.rank(), n));
    }
    if (0..n).any(|v| e.0[v] as usize > rep.d(v)) {
        return Ok(());
    }
    fn go(rep: &FqRep, e: &DimensionVector, v: usize, chosen: &mut Vec<FMat>, f: &mut dyn FnMut(&[FMat]) -> Result<()>) -> Result<()> {
        let n = rep.n;
        if v == n {
            return f(chosen);
        }
        for_each_subspace(rep.d(v), e.0[v] as usize, rep.q, &mut |b| {
            chosen.push(b.clone());
            // arrows whose ends are both chosen now and which touch v
            let ok = (0..n).all(|k| {
                let p = (k + n - 1) % n;
                if (k != v && p != v) || k > v || p > v {
                    return true;
                }
                arrow_preserves(rep, k, &chosen[k], &chosen[p])
            });
            let res = if ok { go(rep, e, v + 1, chosen, f) } else { Ok(()) };
            chosen.pop();
            res
        })
    }
    go(rep, e, 0, &mut Vec::new(), f)
}

/// The subrepresentation on `u` and the quotient by it.
pub fn sub_and_quotient(rep: &FqRep, u: &[FMat]) -> Result<(FqRep, FqRep)> {
    let n = rep.n;
    let q = rep.q;
    let piv: Vec<Vec<usize>> = u.iter().map(pivots).collect();
    let comp: Vec<Vec<usize>> = (0..n).map(|v| (0..rep.d(v)).filter(|c| !piv[v].contains(c)).collect()).collect();
    let apply = |k: usize, x: &[u32]| -> Vec<u32> {
        rep.arrows[k].iter().map(|row| row.iter().zip(x).fold(0, |s, (&a, &b)| (s + a * b) % q)).collect()
    };
    let mut sub_arrows = Vec::with_capacity(n);
    let mut quo_arrows = Vec::with_capacity(n);
    for k in 0..n {
        let p = (k + n - 1) % n;
        // columns: images of basis vectors of U_k in coordinates of U_p
        let mut s = zeros(u[p].len(), u[k].len());
        for (j, b) in u[k].iter().enumerate() {
            let w = apply(k, b);
            for (i, &pp) in piv[p].iter().enumerate() {
                s[i][j] = w[pp];
            }
        }
        sub_arrows.push(s);
        let mut t = zeros(comp[p].len(), comp[k].len());
        for (j, &c) in comp[k].iter().enumerate() {
            let mut x = vec![0u32; rep.d(k)];
            x[c] = 1;
            let w = reduce(&apply(k, &x), &u[p], &piv[p], q);
            for (i, &cc) in comp[p].iter().enumerate() {
                t[i][j] = w[cc];
            }
        }
        quo_arrows.push(t);
    }
    let sd = DimensionVector(u.iter().map(|b| b.len() as u32).collect());
    let qd = DimensionVector(comp.iter().map(|c| c.len() as u32).collect());
    Ok((FqRep::new(q, sd, sub_arrows)?, FqRep::new(q, qd, quo_arrows)?))
}

/// `|{U <= M_xi : U ~ M_mu, M_xi / U ~ M_lambda}|` over `F_q`.
pub fn count_hall_number(lambda: &MultiPartition, mu: &MultiPartition, xi: &MultiPartition, q: u32) -> Result<u64> {
    let n = xi.rank();
    if lambda.rank() != n || mu.rank() != n {
        return Err(Error::RankMismatch(lambda.rank().max(mu.rank()), n));
    }
    if lambda.dim_vector().add(&mu.dim_vector()) != xi.dim_vector() {
        return Ok(0);
    }
    let x = rep_from_multipartition(xi, q)?;
    let mut count = 0u64;
    for_each_submodule(&x, &mu.dim_vector(), &mut |u| {
        let (s, quo) = sub_and_quotient(&x, u)?;
        if iso_type(&s)? == *mu && iso_type(&quo)? == *lambda {
            count += 1;
        }
        Ok(())
    })?;
    Ok(count)
}

/// Basis of `Hom(a, b)`: each element holds one `dims_b[v] x dims_a[v]` matrix per vertex.
pub fn hom_basis(a: &FqRep, b: &FqRep) -> Result<Vec<Vec<FMat>>> {
    if a.n != b.n || a.q != b.q {
        return Err(Error::InvalidArgument("Hom needs the same quiver and field".into()));
    }
    let n = a.n;
    let q = a.q;
    let mut offset = vec![0usize; n + 1];
    for v in 0..n {
        offset[v + 1] = offset[v] + b.d(v) * a.d(v);
    }
    let vars = offset[n];
    let var = |v: usize, i: usize, j: usize| offset[v] + i * a.d(v) + j;
    // phi_{k-1} A_k - B_k phi_k = 0
    let mut eqs: FMat = Vec::new();
    for k in 0..n {
        let p = (k + n - 1) % n;
        for i in 0..b.d(p) {
            for j in 0..a.d(k) {
                let mut row = vec![0u32; vars];
                for s in 0..a.d(p) {
                    let c = a.arrows[k][s][j];
                    if c != 0 {
                        let x = var(p, i, s);
                        row[x] = (row[x] + c) % q;
                    }
                }
                for s in 0..b.d(k) {
                    let c = b.arrows[k][i][s];
                    if c != 0 {
                        let x = var(k, s, j);
                        row[x] = (row[x] + q - c) % q;
                    }
                }
                eqs.push(row);
            }
        }
    }
    let ns = null_space(&eqs, vars, q);
    Ok(ns
        .into_iter()
        .map(|x| {
            (0..n)
                .map(|v| (0..b.d(v)).map(|i| (0..a.d(v)).map(|j| x[var(v, i, j)]).collect()).collect())
                .collect()
        })
        .collect())
}

// Calls `f` on every linear combination of `basis`.
fn for_each_combination(basis: &[Vec<FMat>], template: &[FMat], q: u32, f: &mut dyn FnMut(&[FMat])) {
    let mut coef = vec![0u32; basis.len()];
    let mut cur: Vec<FMat> = template.to_vec();
    loop {
        for (v, m) in cur.iter_mut().enumerate() {
            for (i, row) in m.iter_mut().enumerate() {
                for (j, x) in row.iter_mut().enumerate() {
                    *x = basis.iter().zip(&coef).fold(0, |s, (b, &c)| (s + c * b[v][i][j]) % q);
                }
            }
        }
        f(&cur);
        let mut k = 0;
        while k < coef.len() {
            coef[k] += 1;
            if coef[k] < q {
                break;
            }
            coef[k] = 0;
            k += 1;
        }
        if k == coef.len() {
            return;
        }
    }
}

fn gl_order(d: u32, q: u32) -> u128 {
    let qd = (q as u128).pow(d);
    (0..d).map(|i| qd - (q as u128).pow(i)).product()
}

/// `|Aut(M_lambda)|` over `F_q`.
///
/// Either all endomorphisms are enumerated or the orbit of the arrow tuple
/// under change of basis is explored, whichever is smaller; then
/// `|Aut| = |prod GL(d_i)| / |orbit|`.
pub fn count_automorphisms(m: &MultiPartition, q: u32) -> Result<u128> {
    check_total(m, automorphism_bound(), "automorphism count")?;
    let rep = rep_from_multipartition(m, q)?;
    let basis = hom_basis(&rep, &rep)?;
    let h = basis.len() as u32;
    let sq: u32 = rep.dims.0.iter().map(|d| d * d).sum();
    if h <= sq - h {
        Ok(count_invertible(&rep, &basis))
    } else {
        let orbit = orbit_size(&rep);
        let g: u128 = rep.dims.0.iter().map(|&d| gl_order(d, q)).product();
        if g % orbit != 0 {
            return Err(Error::Internal("orbit size does not divide the group order".into()));
        }
        Ok(g / orbit)
    }
}

fn flat_invertible(block: &[u8], d: usize, q: u32, scratch: &mut Vec<u32>) -> bool {
    scratch.clear();
    scratch.extend(block.iter().map(|&x| x as u32));
    for c in 0..d {
        let Some(p) = (c..d).find(|&r| scratch[r * d + c] != 0) else { return false };
        if p != c {
            for j in 0..d {
                scratch.swap(c * d + j, p * d + j);
            }
        }
        let inv = inv_mod(scratch[c * d + c], q);
        for r in c + 1..d {
            let f = scratch[r * d + c] * inv % q;
            if f != 0 {
                for j in c..d {
                    scratch[r * d + j] = (scratch[r * d + j] + (q - f) * scratch[c * d + j]) % q;
                }
            }
        }
    }
    true
}

// Odometer over all endomorphisms; stepping a digit always adds its basis vector once.
fn count_invertible(rep: &FqRep, basis: &[Vec<FMat>]) -> u128 {
    let q = rep.q;
    let flat: Vec<Vec<u8>> =
        basis.iter().map(|phi| phi.iter().flat_map(|m| m.iter().flatten().map(|&x| x as u8)).collect()).collect();
    let len: usize = rep.dims.0.iter().map(|&d| (d * d) as usize).sum();
    let mut cur = vec![0u8; len];
    let mut coef = vec![0u32; basis.len()];
    let mut scratch = Vec::new();
    let mut count = 0u128;
    loop {
        let mut off = 0;
        let mut ok = true;
        for &d in &rep.dims.0 {
            let d = d as usize;
            if !flat_invertible(&cur[off..off + d * d], d, q, &mut scratch) {
                ok = false;
                break;
            }
            off += d * d;
        }
        if ok {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == coef.len() {
                return count;
            }
            for (x, &b) in cur.iter_mut().zip(&flat[k]) {
                *x = ((*x as u32 + b as u32) % q) as u8;
            }
            coef[k] += 1;
            if coef[k] < q {
                break;
            }
            coef[k] = 0;
            k += 1;
        }
    }
}

// Breadth-first search over the orbit using transvections and one diagonal generator per vertex.
fn orbit_size(rep: &FqRep) -> u128 {
    let n = rep.n;
    let q = rep.q;
    let gen_elem = (1..q).find(|&g| (1..q - 1).all(|e| (g as u64).pow(e) % q as u64 != 1)).unwrap_or(1);
    let gen_inv = inv_mod(gen_elem, q);
    // flat layout: arrow k occupies rows d[k-1], cols d[k]
    let shape: Vec<(usize, usize)> = (0..n).map(|k| (rep.d(k + n - 1), rep.d(k))).collect();
    let mut offset = vec![0usize; n + 1];
    for k in 0..n {
        offset[k + 1] = offset[k] + shape[k].0 * shape[k].1;
    }
    let start: Vec<u8> = rep.arrows.iter().flat_map(|m| m.iter().flatten().map(|&x| x as u8)).collect();
    let add_row = |s: &mut [u8], k: usize, dst: usize, src: usize, f: u32| {
        let (_, c) = shape[k];
        for j in 0..c {
            let a = offset[k] + dst * c + j;
            let b = offset[k] + src * c + j;
            s[a] = ((s[a] as u32 + f * s[b] as u32) % q) as u8;
        }
    };
    let add_col = |s: &mut [u8], k: usize, dst: usize, src: usize, f: u32| {
        let (r, c) = shape[k];
        for i in 0..r {
            let a = offset[k] + i * c + dst;
            let b = offset[k] + i * c + src;
            s[a] = ((s[a] as u32 + f * s[b] as u32) % q) as u8;
        }
    };
    let scale_row = |s: &mut [u8], k: usize, row: usize, f: u32| {
        let (_, c) = shape[k];
        for j in 0..c {
            let a = offset[k] + row * c + j;
            s[a] = ((s[a] as u32 * f) % q) as u8;
        }
    };
    let scale_col = |s: &mut [u8], k: usize, col: usize, f: u32| {
        let (r, c) = shape[k];
        for i in 0..r {
            let a = offset[k] + i * c + col;
            s[a] = ((s[a] as u32 * f) % q) as u8;
        }
    };
    // g = I + E_ab at vertex v: the arrow into v (index v+1) gets g A, the arrow out of v (index v) gets A g^{-1}
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(state) = queue.pop_front() {
        for v in 0..n {
            let d = rep.d(v);
            let into = (v + 1) % n;
            for a in 0..d {
                for b in 0..d {
                    if a == b {
                        continue;
                    }
                    let mut next = state.clone();
                    add_row(&mut next, into, a, b, 1);
                    // (I - E_ab) on the right: column b minus column a
                    add_col(&mut next, v, b, a, q - 1);
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
            if d > 0 && q > 2 {
                let mut next = state.clone();
                scale_row(&mut next, into, 0, gen_elem);
                scale_col(&mut next, v, 0, gen_inv);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    seen.len() as u128
}

fn canonical_images(rep_src: &FqRep, phi: &[FMat], dst_dims: &DimensionVector, q: u32) -> Vec<FMat> {
    phi.iter()
        .enumerate()
        .map(|(v, m)| rref(&transpose(m, dst_dims.0[v] as usize, rep_src.d(v)), dst_dims.0[v] as usize, q))
        .collect()
}

fn canonical_kernels(rep_src: &FqRep, phi: &[FMat], q: u32) -> Vec<FMat> {
    phi.iter().enumerate().map(|(v, m)| null_space(m, rep_src.d(v), q)).collect()
}

/// Short exact sequences `0 -> N -> X -> M -> 0` counted as pairs `(f, g)` with `im f = ker g`.
pub fn count_exact_sequences(m: &MultiPartition, nn: &MultiPartition, x: &MultiPartition, q: u32) -> Result<u64> {
    if m.dim_vector().add(&nn.dim_vector()) != x.dim_vector() {
        return Ok(0);
    }
    let rx = rep_from_multipartition(x, q)?;
    let rm = rep_from_multipartition(m, q)?;
    let rn = rep_from_multipartition(nn, q)?;
    let n = rx.n;
    let mut kernels: HashMap<Vec<FMat>, u64> = HashMap::new();
    let g_basis = hom_basis(&rx, &rm)?;
    let template: Vec<FMat> = (0..n).map(|v| zeros(rm.d(v), rx.d(v))).collect();
    for_each_combination(&g_basis, &template, q, &mut |g| {
        if g.iter().enumerate().all(|(v, mat)| rank(mat, rx.d(v), q) == rm.d(v)) {
            *kernels.entry(canonical_kernels(&rx, g, q)).or_default() += 1;
        }
    });
    let f_basis = hom_basis(&rn, &rx)?;
    let template: Vec<FMat> = (0..n).map(|v| zeros(rx.d(v), rn.d(v))).collect();
    let mut total = 0u64;
    for_each_combination(&f_basis, &template, q, &mut |f| {
        if f.iter().enumerate().all(|(v, mat)| rank(mat, rn.d(v), q) == rn.d(v)) {
            total += kernels.get(&canonical_images(&rn, f, &rx.dims, q)).copied().unwrap_or(0);
        }
    });
    Ok(total)
}

/// Injective homomorphisms `N -> X`.
pub fn count_injections(nn: &MultiPartition, x: &MultiPartition, q: u32) -> Result<u64> {
    let rx = rep_from_multipartition(x, q)?;
    let rn = rep_from_multipartition(nn, q)?;
    let basis = hom_basis(&rn, &rx)?;
    let template: Vec<FMat> = (0..rx.n).map(|v| zeros(rx.d(v), rn.d(v))).collect();
    let mut total = 0u64;
    for_each_combination(&basis, &template, q, &mut |f| {
        if f.iter().enumerate().all(|(v, mat)| rank(mat, rn.d(v), q) == rn.d(v)) {
            total += 1;
        }
    });
    Ok(total)
}

/// Polynomial through the given points, which must have integer coefficients.
pub fn lagrange(points: &[(u32, u64)]) -> Result<IntPoly> {
    let k = points.len();
    let m: linalg::Matrix<Rat> = points
        .iter()
        .map(|&(x, _)| (0..k).map(|j| Rat::from_integer((x as i64).pow(j as u32).into())).collect())
        .collect();
    let b: Vec<Rat> = points.iter().map(|&(_, y)| Rat::from_integer((y as i64).into())).collect();
    let c = linalg::solve(&m, &b)?;
    let p = IntPoly::from_coeffs(c);
    if !p.is_integral() {
        return Err(Error::Internal(format!("interpolated polynomial {p} is not integral")));
    }
    Ok(p)
}

/// Degree bound `floor((h_xi,xi - h_lambda,lambda - h_mu,mu) / 2)`, clamped at zero.
pub fn degree_bound(lambda: &MultiPartition, mu: &MultiPartition, xi: &MultiPartition) -> Result<u32> {
    let h = |m: &MultiPartition| m.hom_dim(m).map(|x| x as i64);
    let d = h(xi)? - h(lambda)? - h(mu)?;
    Ok((d.max(0) / 2) as u32)
}

/// Hall polynomial recovered from brute-force counts at the first primes.
pub fn interpolate_hall_polynomial_n(lambda: &MultiPartition, mu: &MultiPartition, xi: &MultiPartition) -> Result<IntPoly> {
    if lambda.dim_vector().add(&mu.dim_vector()) != xi.dim_vector() {
        if lambda.rank() != xi.rank() || mu.rank() != xi.rank() {
            return Err(Error::RankMismatch(lambda.rank().max(mu.rank()), xi.rank()));
        }
        return Ok(IntPoly::zero());
    }
    let d = degree_bound(lambda, mu, xi)? as usize;
    let bound = field_bound();
    let primes: Vec<u32> = PRIMES.iter().copied().filter(|&p| p <= bound).collect();
    if primes.len() < d + 2 {
        return Err(Error::BoundExceeded(format!(
            "F^{xi}_{lambda},{mu} has degree bound {d}, needing {} primes up to the field bound {bound}",
            d + 2
        )));
    }
    let mut points = Vec::with_capacity(d + 1);
    for &p in &primes[..=d] {
        points.push((p, count_hall_number(lambda, mu, xi, p)?));
    }
    let poly = lagrange(&points)?;
    let held = primes[d + 1];
    let expect = count_hall_number(lambda, mu, xi, held)?;
    if poly.eval(&Rat::from_integer(held.into())) != Rat::from_integer(expect.into()) {
        return Err(Error::Internal(format!("F^{xi}_{lambda},{mu}: interpolant {poly} disagrees with the count {expect} at q = {held}")));
    }
    Ok(poly)
}

/// Environment variable overriding the cache directory.
pub const CACHE_DIR_ENV: &str = "HALLSYM_CACHE_DIR";

pub fn default_cache_dir() -> PathBuf {
    std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".hallsym-cache"))
}

#[derive(Serialize, Deserialize, Default)]
struct CacheFile {
    polynomials: BTreeMap<String, Vec<String>>,
}

/// JSON-backed store of interpolated Hall polynomials keyed by `(n, lambda, mu, xi)`.
pub struct InterpolationCache {
    path: PathBuf,
    map: RwLock<BTreeMap<String, IntPoly>>,
}

fn cache_key(lambda: &MultiPartition, mu: &MultiPartition, xi: &MultiPartition) -> String {
    format!("{}|{lambda}|{mu}|{xi}", xi.rank())
}

impl InterpolationCache {
    pub fn open(dir: &Path) -> Result<Self> {
        let path = dir.join("hall_polynomials.json");
        let mut map = BTreeMap::new();
        if path.exists() {
            let file: CacheFile = serde_json::from_str(&std::fs::read_to_string(&path)?)?;
            for (k, cs) in file.polynomials {
                let coeffs = cs.iter().map(|c| crate::arith::parse_rat(c)).collect::<Result<Vec<_>>>()?;
                map.insert(k, IntPoly::from_coeffs(coeffs));
            }
        }
        Ok(InterpolationCache { path, map: RwLock::new(map) })
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, lambda: &MultiPartition, mu: &MultiPartition, xi: &MultiPartition) -> Option<IntPoly> {
        self.map.read().unwrap().get(&cache_key(lambda, mu, xi)).cloned()
    }

    pub fn get_or_compute(&self, lambda: &MultiPartition, mu: &MultiPartition, xi: &MultiPartition) -> Result<IntPoly> {
        if let Some(p) = self.get(lambda, mu, xi) {
            return Ok(p);
        }
        let p = interpolate_hall_polynomial_n(lambda, mu, xi)?;
        self.map.write().unwrap().insert(cache_key(lambda, mu, xi), p.clone());
        Ok(p)
    }

    pub fn save(&self) -> Result<()> {
        if let Some(dir) = self.path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        let file = CacheFile {
            polynomials: self
                .map
                .read()
                .unwrap()
                .iter()
                .map(|(k, p)| (k.clone(), p.coeffs().iter().map(crate::arith::rat_to_string).collect()))
                .collect(),
        };
        std::fs::write(&self.path, serde_json::to_string_pretty(&file)?)?;
        Ok(())
    }
}

/// Every triple `(lambda, mu, xi)` of rank `n` with `1 <= |xi| <= max_total` and both factors nonzero.
pub fn hall_triples(n: usize, max_total: u32) -> Vec<(MultiPartition, MultiPartition, MultiPartition)> {
    use crate::partitions::{compositions_of, multipartitions_with_dim};
    let mut out = Vec::new();
    for t in 1..=max_total {
        for d in compositions_of(t, n) {
            for xi in multipartitions_with_dim(&d) {
                for db in crate::hall_engine::sub_dimension_vectors(&d) {
                    if db.total() == 0 || db == d {
                        continue;
                    }
                    let da = d.checked_sub(&db).unwrap();
                    for mu in multipartitions_with_dim(&db) {
                        for lambda in multipartitions_with_dim(&da) {
                            out.push((lambda, mu.clone(), xi.clone()));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Outcome of warming the cache.
#[derive(Debug, Default, Clone, PartialEq, Eq, Serialize)]
pub struct WarmReport {
    pub computed: usize,
    pub skipped: Vec<String>,
}

/// Interpolate every reachable Hall polynomial up to `max_total` into `cache`.
pub fn cache_warm(cache: &InterpolationCache, n: usize, max_total: u32) -> Result<WarmReport> {
    use rayon::prelude::*;
    let triples = hall_triples(n, max_total);
    let results: Vec<(String, Result<IntPoly>)> = triples
        .par_iter()
        .map(|(l, m, x)| (cache_key(l, m, x), cache.get_or_compute(l, m, x)))
        .collect();
    let mut report = WarmReport::default();
    for (k, r) in results {
        match r {
            Ok(_) => report.computed += 1,
            Err(Error::BoundExceeded(_)) => report.skipped.push(k),
            Err(e) => return Err(e),
        }
    }
    cache.save()?;
    Ok(report)
}

#[cfg(test)]
mod tests;
