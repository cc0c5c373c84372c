//! Named invariant suites, shared by `hallsym verify` and the acceptance run.
//!
//! Every suite is exhaustive over its stated range and reports each failed
//! check by name. Computation errors count as failures.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::{int, phi, IntPoly, Rat, RationalFunc};
use crate::error::{Error, Result};
use crate::fq_oracle::{self, count_automorphisms, count_exact_sequences, count_hall_number, count_injections};
use crate::hall_classical::{self as hc, v_pow, HallElement1};
use crate::hall_cyclic::{self as hn, HallElementN, HallTensorN, KClass};
use crate::hall_engine::HallEngine;
use crate::partitions::{compositions_of, multipartitions_with_dim, partitions, DimensionVector, MultiPartition, Partition};
use crate::symfunc::{self as sf, Basis, SymFunc};

pub const SUITES: &[&str] = &["partitions", "symfunc", "hall-classical", "canonical", "oracle", "hall-cyclic"];

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: String,
    pub checks: usize,
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.name,
            "passed": self.passed(),
            "checks": self.checks,
            "failures": self.failures,
        })
    }
}

#[derive(Default)]
struct Checker {
    checks: usize,
    failures: Vec<String>,
}

impl Checker {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn eq<T: PartialEq + Display>(&mut self, got: &T, want: &T, what: impl FnOnce() -> String) {
        self.checks += 1;
        if got != want {
            self.failures.push(format!("{}: got {got}, expected {want}", what()));
        }
    }

    // runs a group; an error aborts the group and is recorded
    fn group(&mut self, label: &str, f: impl FnOnce(&mut Checker) -> Result<()>) {
        if let Err(e) = f(self) {
            self.checks += 1;
            self.failures.push(format!("{label}: {e}"));
        }
    }
}

/// Runs one suite by name.
pub fn run_suite(name: &str) -> Result<SuiteReport> {
    let f: fn(&mut Checker) = match name {
        "partitions" => partitions_suite,
        "symfunc" => symfunc_suite,
        "hall-classical" => hall_classical_suite,
        "canonical" => canonical_suite,
        "oracle" => oracle_suite,
        "hall-cyclic" => hall_cyclic_suite,
        _ => return Err(Error::InvalidArgument(format!("unknown suite {name:?}; known: {}", SUITES.join(", ")))),
    };
    let start = Instant::now();
    let mut c = Checker::default();
    f(&mut c);
    Ok(SuiteReport { name: name.to_string(), checks: c.checks, failures: c.failures, elapsed: start.elapsed() })
}

/// Runs every suite, fanned out across threads, reported in `SUITES` order.
pub fn run_all() -> Vec<SuiteReport> {
    SUITES.par_iter().map(|s| run_suite(s).expect("known suite")).collect()
}

fn rf(n: i64) -> RationalFunc {
    RationalFunc::from_int(n)
}

fn t_pow(k: i64) -> RationalFunc {
    RationalFunc::monomial(Rat::one(), k)
}

fn sign(a: u32) -> RationalFunc {
    rf(if a % 2 == 0 { 1 } else { -1 })
}

fn elem(b: Basis, l: &Partition) -> SymFunc {
    SymFunc::basis_element(b, l.clone())
}

fn upto(d: u32) -> Vec<Partition> {
    (0..=d).flat_map(partitions).collect()
}

fn same_sym(a: &SymFunc, b: &SymFunc) -> Result<bool> {
    Ok(a.to_p()? == b.to_p()?)
}

type Triple = BTreeMap<(Partition, Partition, Partition), RationalFunc>;

fn add3(m: &mut Triple, k: (Partition, Partition, Partition), c: RationalFunc) {
    let e = m.entry(k.clone()).or_default();
    *e += &c;
    if e.is_zero() {
        m.remove(&k);
    }
}

// Euler's pentagonal recurrence
fn partition_counts(n: usize) -> Vec<i64> {
    let mut pc = vec![0i64; n + 1];
    pc[0] = 1;
    for m in 1..=n {
        let mut k = 1i64;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let s = if k % 2 == 1 { 1 } else { -1 };
            pc[m] += s * pc[m - g1];
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= m {
                pc[m] += s * pc[m - g2];
            }
            k += 1;
        }
    }
    pc
}

fn partitions_suite(c: &mut Checker) {
    let counts = partition_counts(12);
    for d in 0..=12u32 {
        let ps = partitions(d);
        c.eq(&(ps.len() as i64), &counts[d as usize], || format!("p({d})"));
        let mut s = Rat::zero();
        let mut signed = Rat::zero();
        for l in &ps {
            c.check(&l.conjugate().conjugate() == l, || format!("conjugate involution at {l}"));
            let inv = Rat::new(BigInt::one(), l.z_stat());
            if l.len() % 2 == 1 {
                signed -= &inv;
            } else {
                signed += &inv;
            }
            s += inv;
        }
        c.check(s.is_one(), || format!("sum 1/z over weight {d}"));
        // the empty partition alone gives 1 at weight 0
        let want = match d {
            0 => Rat::one(),
            1 => -Rat::one(),
            _ => Rat::zero(),
        };
        c.check(signed == want, || format!("signed sum 1/z over weight {d}"));
    }
    for d in 0..=10u32 {
        let ps = partitions(d);
        for a in &ps {
            for b in &ps {
                c.check(a.dominated_by(b) == b.conjugate().dominated_by(&a.conjugate()), || format!("dominance anti-isomorphism {a} {b}"));
            }
            let mins: u64 = a.parts().iter().flat_map(|&x| a.parts().iter().map(move |&y| x.min(y) as u64)).sum();
            c.eq(&mins, &(2 * a.n_stat() + d as u64), || format!("sum of minima at {a}"));
        }
    }
    for d in 0..=8u32 {
        for da in 0..=d {
            for a in partitions(da) {
                for b in partitions(d - da) {
                    c.eq(&a.union(&b).conjugate(), &a.conjugate().sum(&b.conjugate()), || format!("(union)' at {a} {b}"));
                }
            }
        }
        for l in partitions(d) {
            c.eq(&MultiPartition::from_partition(l.clone()).aut_poly(), &l.aut_poly(), || format!("aut_poly_n at {l}"));
        }
    }
}

fn symfunc_suite(c: &mut Checker) {
    c.group("schur table", |c| {
        // sign, e-partition pairs
        let table: Vec<(&[u32], Vec<(i64, &[u32])>)> = vec![
            (&[1], vec![(1, &[1])]),
            (&[1, 1], vec![(1, &[2])]),
            (&[2], vec![(1, &[1, 1]), (-1, &[2])]),
            (&[1, 1, 1], vec![(1, &[3])]),
            (&[2, 1], vec![(1, &[2, 1]), (-1, &[3])]),
            (&[3], vec![(1, &[1, 1, 1]), (-2, &[2, 1]), (1, &[3])]),
            (&[1, 1, 1, 1], vec![(1, &[4])]),
            (&[2, 1, 1], vec![(1, &[3, 1]), (-1, &[4])]),
            (&[2, 2], vec![(1, &[2, 2]), (-1, &[3, 1])]),
            (&[3, 1], vec![(1, &[2, 1, 1]), (-1, &[2, 2]), (-1, &[3, 1]), (1, &[4])]),
            (&[4], vec![(1, &[1, 1, 1, 1]), (-3, &[2, 1, 1]), (1, &[2, 2]), (2, &[3, 1]), (-1, &[4])]),
        ];
        for (l, exp) in table {
            let l = Partition::new(l.to_vec());
            let want = SymFunc::from_terms(Basis::E, exp.iter().map(|(k, p)| (Partition::new(p.to_vec()), rf(*k))));
            c.eq(&sf::schur(&l)?, &want, || format!("s_{l} via schur"));
            c.eq(&elem(Basis::S, &l).convert(Basis::E)?, &want, || format!("s_{l} via convert"));
        }
        Ok(())
    });
    c.group("hopf axioms", |c| {
        for d in 0..=6u32 {
            for f in partitions(d) {
                let fs = elem(Basis::S, &f);
                let df = fs.coproduct()?;
                for da in 0..=d {
                    for g in partitions(da) {
                        for h in partitions(d - da) {
                            let (gs, hh) = (elem(Basis::H, &g), elem(Basis::HL, &h));
                            let gh = gs.multiply(&hh)?;
                            c.eq(&sf::pairing_t(&fs, &gh)?, &df.pair_with(&gs, &hh, true)?, || format!("<s{f}, h{g} P{h}>_t"));
                            c.eq(&sf::pairing(&fs, &gh)?, &df.pair_with(&gs, &hh, false)?, || format!("<s{f}, h{g} P{h}>"));
                        }
                    }
                }
                c.eq(&sf::pairing_t(&fs, &SymFunc::one(Basis::P))?, &fs.counit(), || format!("<s{f}, 1>"));
                let sfs = fs.antipode()?;
                for g in partitions(d) {
                    let gh = elem(Basis::HL, &g);
                    c.eq(&sf::pairing_t(&sfs, &gh)?, &sf::pairing_t(&fs, &gh.antipode()?)?, || format!("<S s{f}, P{g}>"));
                }
                // coassociativity on the p-coordinates of the coproduct
                let (mut left, mut right) = (Triple::new(), Triple::new());
                for ((a, b), k) in df.terms() {
                    for ((a1, a2), k1) in elem(Basis::P, a).coproduct()?.terms() {
                        add3(&mut left, (a1.clone(), a2.clone(), b.clone()), k * k1);
                    }
                    for ((b1, b2), k2) in elem(Basis::P, b).coproduct()?.terms() {
                        add3(&mut right, (a.clone(), b1.clone(), b2.clone()), k * k2);
                    }
                }
                c.check(left == right, || format!("coassociativity at s{f}"));
                // m (S ⊗ id) Δ = ε
                let mut acc = SymFunc::zero(Basis::P);
                for ((a, b), k) in df.terms() {
                    acc = acc.plus(&elem(Basis::P, a).antipode()?.multiply(&elem(Basis::P, b))?.scale(k))?;
                }
                let unit = SymFunc::one(Basis::P).scale(&fs.counit());
                c.check(same_sym(&acc, &unit)?, || format!("antipode law at s{f}"));
            }
        }
        for a in upto(6) {
            for b in upto(6 - a.weight()) {
                let (x, y) = (elem(Basis::S, &a), elem(Basis::E, &b));
                let lhs = x.multiply(&y)?.coproduct()?;
                let rhs = x.coproduct()?.multiply(&y.coproduct()?)?;
                c.check(lhs == rhs, || format!("bialgebra at s{a} e{b}"));
            }
        }
        Ok(())
    });
    c.group("generator relations", |c| {
        for n in 1..=8u32 {
            let mut acc = SymFunc::zero(Basis::P);
            for a in 0..=n {
                let x = SymFunc::generator(Basis::E, a).multiply(&SymFunc::generator(Basis::H, n - a))?;
                acc = acc.plus(&x.scale(&sign(a)))?;
            }
            c.check(acc.is_zero(), || format!("H(T)E(-T) = 1 in degree {n}"));
        }
        for n in 1..=6u32 {
            let tn = t_pow(n as i64);
            let lhs = SymFunc::generator(Basis::H, n).scale(&(&rf(1) - &tn));
            let mut rhs = SymFunc::zero(Basis::P);
            for a in 1..=n {
                let x = SymFunc::generator(Basis::H, n - a).multiply(&sf::cyclic_c(a))?.scale(&t_pow((n - a) as i64));
                rhs = rhs.plus(&x)?;
            }
            c.check(same_sym(&lhs, &rhs)?, || format!("(1 - t^n) h_{n} recurrence"));
            let lhs = SymFunc::generator(Basis::E, n).scale(&(&tn - &rf(1)));
            let mut rhs = SymFunc::zero(Basis::P);
            for a in 1..=n {
                rhs = rhs.plus(&SymFunc::generator(Basis::E, n - a).multiply(&sf::cyclic_c(a))?.scale(&sign(a)))?;
            }
            c.check(same_sym(&lhs, &rhs)?, || format!("(t^n - 1) e_{n} recurrence"));
        }
        Ok(())
    });
    c.group("pairings", |c| {
        for n in 1..=6u32 {
            let want = RationalFunc::from_poly(phi(n as usize)).inv()?;
            let (e, h, cc) = (SymFunc::generator(Basis::E, n), SymFunc::generator(Basis::H, n), sf::cyclic_c(n));
            c.eq(&sf::pairing_t(&e, &e)?, &want, || format!("<e{n}, e{n}>_t"));
            c.eq(&sf::pairing_t(&h, &h)?, &want, || format!("<h{n}, h{n}>_t"));
            c.eq(&sf::pairing_t(&cc, &cc)?, &(&rf(1) - &RationalFunc::t()), || format!("<c{n}, c{n}>_t"));
        }
        for d in 0..=6 {
            let ps = partitions(d);
            for a in &ps {
                for b in &ps {
                    let delta = if a == b { rf(1) } else { rf(0) };
                    c.eq(&sf::pairing(&elem(Basis::H, a), &elem(Basis::M, b))?, &delta, || format!("<h{a}, m{b}>"));
                    c.eq(&sf::pairing_t(&elem(Basis::C, a), &elem(Basis::M, b))?, &delta, || format!("<c{a}, m{b}>_t"));
                }
            }
        }
        Ok(())
    });
    c.group("hall-littlewood", |c| {
        for d in 0..=6u32 {
            for l in partitions(d) {
                let hl = sf::hall_littlewood(&l)?;
                c.check(same_sym(&hl.eval_t(&int(0))?, &elem(Basis::S, &l))?, || format!("P{l}(0) = s{l}"));
                c.check(same_sym(&hl.eval_t(&int(1))?, &elem(Basis::M, &l))?, || format!("P{l}(1) = m{l}"));
                let norm = RationalFunc::from_poly(l.b_t()).inv()?;
                c.eq(&sf::pairing_t(&hl, &hl)?, &norm, || format!("<P{l}, P{l}>_t"));
                // m = e_{l'} + lower, integral
                let m = elem(Basis::M, &l).convert(Basis::E)?;
                c.check(m.coeff(&l.conjugate()).is_one(), || format!("m{l} leading e-term"));
                for (k, x) in m.terms() {
                    let ok = k.conjugate().dominated_by(&l) && x.as_constant().is_some_and(|x| x.is_integer());
                    c.check(ok, || format!("m{l} has e{k} with {x}"));
                }
            }
        }
        for r in 1..=6u32 {
            let mut h = SymFunc::zero(Basis::HL);
            let mut pr = SymFunc::zero(Basis::HL);
            for l in partitions(r) {
                let tn = t_pow(l.n_stat() as i64);
                h = h.plus(&elem(Basis::HL, &l).scale(&tn))?;
                let mut k = tn;
                for i in 1..l.len() as i64 {
                    k = &k * &(&rf(1) - &t_pow(-i));
                }
                pr = pr.plus(&elem(Basis::HL, &l).scale(&k))?;
            }
            c.eq(&SymFunc::generator(Basis::H, r).convert(Basis::HL)?, &h, || format!("h_{r} in P"));
            c.eq(&SymFunc::generator(Basis::P, r).convert(Basis::HL)?, &pr, || format!("p_{r} in P"));
            c.eq(&SymFunc::generator(Basis::E, r).convert(Basis::HL)?, &elem(Basis::HL, &Partition::column(r)), || format!("e_{r} in P"));
            let cr = elem(Basis::HL, &Partition::row(r)).scale(&(&rf(1) - &RationalFunc::t()));
            c.eq(&sf::cyclic_c(r).convert(Basis::HL)?, &cr, || format!("c_{r} in P"));
        }
        Ok(())
    });
}

fn u1(l: &Partition) -> HallElement1 {
    HallElement1::basis(l.clone())
}

fn t_to_v(c: &RationalFunc) -> Result<RationalFunc> {
    c.subst(&Rat::one(), -2)
}

// (1 - q)(1 - q^2)...(1 - q^{k-1}) with q = v^2
fn falling(k: usize) -> RationalFunc {
    let mut c = RationalFunc::one();
    for i in 1..k {
        c = &c * &(&RationalFunc::one() - &v_pow(2 * i as i64));
    }
    c
}

fn hall_classical_suite(c: &mut Checker) {
    c.group("ringel-hall laws", |c| {
        for d in 0..=5u32 {
            for da in 0..=d {
                for db in 0..=d - da {
                    for a in partitions(da) {
                        for b in partitions(db) {
                            let ab = u1(&a).multiply(&u1(&b))?;
                            for x in partitions(d - da - db) {
                                let l = ab.multiply(&u1(&x))?;
                                let r = u1(&a).multiply(&u1(&b).multiply(&u1(&x))?)?;
                                c.check(l == r, || format!("associativity ({a} {b}) {x}"));
                            }
                        }
                    }
                }
            }
            for xi in partitions(d) {
                let dx = u1(&xi).coproduct()?;
                let (mut left, mut right) = (Triple::new(), Triple::new());
                for ((a, b), k) in dx.terms() {
                    for ((a1, a2), k1) in u1(a).coproduct()?.terms() {
                        add3(&mut left, (a1.clone(), a2.clone(), b.clone()), k * k1);
                    }
                    for ((b1, b2), k2) in u1(b).coproduct()?.terms() {
                        add3(&mut right, (a.clone(), b1.clone(), b2.clone()), k * k2);
                    }
                }
                c.check(left == right, || format!("coassociativity at {xi}"));
                for dy in 0..=d {
                    for y in partitions(dy) {
                        for z in partitions(d - dy) {
                            let l = hc::pairing(&u1(&xi), &u1(&y).multiply(&u1(&z))?);
                            c.eq(&l, &dx.pair_with(&u1(&y), &u1(&z)), || format!("adjunction {xi} {y} {z}"));
                        }
                    }
                }
            }
        }
        for x in upto(4) {
            for y in upto(4 - x.weight()) {
                let lhs = u1(&x).multiply(&u1(&y))?.coproduct()?;
                let rhs = u1(&x).coproduct()?.multiply(&u1(&y).coproduct()?)?;
                c.check(lhs == rhs, || format!("bialgebra {x} {y}"));
            }
        }
        Ok(())
    });
    c.group("phi1", |c| {
        let hl = |l: &Partition| elem(Basis::HL, l);
        for d in 0..=5u32 {
            for a in partitions(d) {
                let fa = hl(&a);
                let pa = hc::phi1(&fa)?;
                let dfa = fa.coproduct()?.convert(Basis::HL, Basis::HL)?;
                let mut img = Vec::new();
                for ((x, y), k) in dfa.terms() {
                    let scale = v_pow(2 * (x.n_stat() + y.n_stat()) as i64);
                    img.push(((x.clone(), y.clone()), &t_to_v(k)? * &scale));
                }
                c.check(pa.coproduct()? == hc::HallTensor1::from_terms(img), || format!("Phi1 coproduct at P{a}"));
                for b in partitions(d) {
                    let lhs = hc::pairing(&pa, &hc::phi1(&hl(&b))?);
                    c.eq(&lhs, &t_to_v(&sf::pairing_t(&fa, &hl(&b))?)?, || format!("Phi1 pairing {a} {b}"));
                }
                for b in upto(5 - d) {
                    let fb = hl(&b);
                    let lhs = pa.multiply(&hc::phi1(&fb)?)?;
                    c.check(lhs == hc::phi1(&fa.multiply(&fb)?)?, || format!("Phi1 product {a} {b}"));
                }
            }
        }
        for r in 1..=6u32 {
            let want = HallElement1::from_terms(partitions(r).into_iter().map(|l| {
                let k = falling(l.len());
                (l, k)
            }));
            c.check(hc::phi1(&SymFunc::generator(Basis::P, r))? == want, || format!("Phi1(p_{r})"));
            let col = Partition::column(r);
            c.check(hc::phi1(&SymFunc::generator(Basis::E, r))? == u1(&col).scale(&v_pow((r * (r - 1)) as i64)), || format!("Phi1(e_{r})"));
            let h = HallElement1::from_terms(partitions(r).into_iter().map(|l| (l, RationalFunc::one())));
            c.check(hc::phi1(&SymFunc::generator(Basis::H, r))? == h, || format!("Phi1(h_{r})"));
            let x = u1(&Partition::row(r)).scale(&(&RationalFunc::one() - &v_pow(-2)));
            c.check(hc::phi1(&sf::cyclic_c(r))? == x, || format!("Phi1(c_{r})"));
        }
        for d in 0..=6u32 {
            for l in partitions(d) {
                let img = hc::phi1(&sf::hall_littlewood(&l)?)?;
                c.check(img == hc::pbw(&l), || format!("Phi1(P_{l})"));
                c.check(hc::phi1_inv(&img)? == sf::hall_littlewood(&l)?.convert(Basis::HL)?, || format!("Phi1 inverse at {l}"));
            }
        }
        Ok(())
    });
    c.group("x_lambda leading terms", |c| {
        let x = |r: u32| u1(&Partition::row(r)).scale(&(&RationalFunc::one() - &v_pow(-2)));
        for d in 1..=6u32 {
            for l in partitions(d) {
                let mut prod = HallElement1::one();
                for &r in l.parts() {
                    prod = prod.multiply(&x(r))?;
                }
                let lead = &hc::q_to_v(&IntPoly::monomial(Rat::one(), l.n_stat() as usize))
                    * &RationalFunc::from_poly(l.b_t()).subst(&Rat::one(), -2)?;
                c.eq(&prod.coeff(&l), &lead, || format!("x_{l} leading coefficient"));
                for mu in prod.terms().keys() {
                    c.check(l.dominance_leq(mu)?, || format!("x_{l} has term {mu}"));
                }
            }
        }
        Ok(())
    });
    c.group("hall polynomials", |c| {
        for d in 0..=7u32 {
            for dl in 0..=d {
                for l in partitions(dl) {
                    for m in partitions(d - dl) {
                        let (lo, hi) = (l.union(&m), l.sum(&m));
                        let prod = if d <= 6 { Some(sf::hall_littlewood(&l)?.multiply(&sf::hall_littlewood(&m)?)?.convert(Basis::HL)?) } else { None };
                        for xi in partitions(d) {
                            let f = hc::hall_polynomial(&l, &m, &xi)?;
                            let lr = sf::littlewood_richardson(&l, &m, &xi)?;
                            let top = xi.n_stat() as i64 - l.n_stat() as i64 - m.n_stat() as i64;
                            if let Some(prod) = &prod {
                                let want = &RationalFunc::from_poly(f.clone()).subst(&Rat::one(), -1)? * &t_pow(top);
                                c.eq(&prod.coeff(&xi), &want, || format!("P_{l} P_{m} at P_{xi}"));
                            }
                            if f.is_zero() {
                                c.check(lr == 0, || format!("F^{xi}_{l},{m} = 0 but c = {lr}"));
                                continue;
                            }
                            c.check(lo.dominance_leq(&xi)? && xi.dominance_leq(&hi)?, || format!("support of F^{xi}_{l},{m}"));
                            c.check(f.degree().unwrap_or(0) as i64 <= top, || format!("degree of F^{xi}_{l},{m}"));
                            c.check(top >= 0 && f.coeff(top as usize) == Rat::from_integer(lr.into()), || format!("top coefficient of F^{xi}_{l},{m}"));
                        }
                    }
                }
            }
        }
        Ok(())
    });
}

fn canonical_suite(c: &mut Checker) {
    c.group("rank one", |c| {
        for d in 0..=6u32 {
            for l in partitions(d) {
                let b = hc::canonical_basis(&l)?;
                c.check(b == hc::canonical_basis_via_bar(&l)?, || format!("b_{l}: routes differ"));
                c.check(hc::has_canonical_shape(&l, &b)?, || format!("b_{l}: shape"));
                c.check(hc::bar(&b)? == b, || format!("b_{l}: not bar invariant"));
                let dual = hc::dual_canonical_basis(&l)?;
                for m in partitions(d) {
                    let p = hc::pairing(&dual, &hc::canonical_basis(&m)?);
                    c.check(if m == l { p.is_one() } else { p.is_zero() }, || format!("<b*_{l}, b_{m}> = {p}"));
                }
            }
        }
        Ok(())
    });
    c.group("rank two", |c| {
        for t in 1..=4u32 {
            for d in compositions_of(t, 2) {
                let basis = multipartitions_with_dim(&d);
                for m in &basis {
                    let b = hn::canonical_basis_n(m)?;
                    c.check(hn::bar_n(&b)? == b, || format!("b_{m}: not bar invariant"));
                    let k = b.pbw_coefficients();
                    c.check(k.get(&(m.clone(), KClass::zero(2))).is_some_and(|x| x.is_one()), || format!("b_{m}: leading term"));
                    for ((key, _), x) in &k {
                        c.check(key == m || crate::canonical::in_negative_ideal(x, false), || format!("b_{m} at {key}: {x}"));
                    }
                    let dual = hn::dual_canonical_basis_n(m)?;
                    for l in &basis {
                        let p = hn::pairing_n(&dual, &hn::canonical_basis_n(l)?)?;
                        c.check(if l == m { p.is_one() } else { p.is_zero() }, || format!("<b*_{m}, b_{l}> = {p}"));
                    }
                }
            }
        }
        Ok(())
    });
}

fn all_up_to(n: usize, max_total: u32) -> Vec<MultiPartition> {
    (1..=max_total).flat_map(|t| compositions_of(t, n)).flat_map(|d| multipartitions_with_dim(&d)).collect()
}

fn qpow(q: u32, e: u64) -> u128 {
    (q as u128).pow(e as u32)
}

fn oracle_suite(c: &mut Checker) {
    c.group("hall polynomials vs counts", |c| {
        let e = HallEngine::classical();
        let triples = fq_oracle::hall_triples(1, 5);
        let bad: Vec<String> = triples
            .par_iter()
            .flat_map_iter(|(l, m, x)| {
                let f = e.hall_polynomial(l, m, x);
                [2u32, 3].into_iter().filter_map(move |q| {
                    let f = match &f {
                        Ok(f) => f.eval(&Rat::from_integer(q.into())),
                        Err(err) => return Some(err.to_string()),
                    };
                    match count_hall_number(l, m, x, q) {
                        Ok(k) if f == Rat::from_integer(k.into()) => None,
                        Ok(k) => Some(format!("F^{x}_{l},{m}({q}) = {f} but {k} counted")),
                        Err(err) => Some(err.to_string()),
                    }
                })
            })
            .collect();
        c.checks += 2 * triples.len();
        c.failures.extend(bad);
        Ok(())
    });
    c.group("riedtmann", |c| {
        for n in 1..=2usize {
            for q in [2u32, 3] {
                // group by (M, N) so the Ext classes can be summed over X
                let mut by_pair: BTreeMap<(MultiPartition, MultiPartition), Vec<MultiPartition>> = BTreeMap::new();
                for (l, m, x) in fq_oracle::hall_triples(n, 4) {
                    by_pair.entry((l, m)).or_default().push(x);
                }
                let results: Vec<Result<Vec<String>>> = by_pair
                    .par_iter()
                    .map(|((mm, nn), xs)| {
                        let mut bad = Vec::new();
                        let am = count_automorphisms(mm, q)?;
                        let an = count_automorphisms(nn, q)?;
                        let hom = mm.hom_dim(nn)?;
                        let ext = hom as i64 - hn::euler_form(&mm.dim_vector(), &nn.dim_vector())?;
                        let mut ext_total = 0u128;
                        for x in xs {
                            let f = count_hall_number(mm, nn, x, q)? as u128;
                            let e = count_exact_sequences(mm, nn, x, q)? as u128;
                            if e != f * am * an {
                                bad.push(format!("E^{x}_{mm},{nn} = {e} != F a_M a_N at q={q}"));
                            }
                            // |Ext^1(M,N)_X| = E |Hom(M,N)| / a_X
                            let ax = count_automorphisms(x, q)?;
                            let num = e * qpow(q, hom);
                            if num % ax != 0 {
                                bad.push(format!("|Ext(M,N)_X| not integral at {mm} {nn} {x} q={q}"));
                            }
                            ext_total += num / ax;
                        }
                        if ext < 0 || ext_total != qpow(q, ext as u64) {
                            bad.push(format!("sum of |Ext({mm},{nn})_X| = {ext_total}, expected {q}^{ext}"));
                        }
                        Ok(bad)
                    })
                    .collect();
                for r in results {
                    c.checks += 1;
                    match r {
                        Ok(b) => c.failures.extend(b),
                        Err(e) => c.failures.push(e.to_string()),
                    }
                }
            }
        }
        for x in all_up_to(2, 3) {
            for nn in all_up_to(2, 3) {
                let Some(dm) = x.dim_vector().checked_sub(&nn.dim_vector()) else { continue };
                let mut total = 0u128;
                for m in multipartitions_with_dim(&dm) {
                    total += count_hall_number(&m, &nn, &x, 2)? as u128;
                }
                let inj = count_injections(&nn, &x, 2)? as u128;
                c.eq(&inj, &(total * count_automorphisms(&nn, 2)?), || format!("injections of {nn} into {x}"));
            }
        }
        Ok(())
    });
    c.group("automorphisms", |c| {
        for n in 1..=3usize {
            let mods = all_up_to(n, 5);
            let bad: Vec<String> = mods
                .par_iter()
                .flat_map_iter(|m| {
                    [2u32, 3].into_iter().filter_map(move |q| {
                        let want = m.aut_poly().eval(&Rat::from_integer(q.into()));
                        match count_automorphisms(m, q) {
                            Ok(k) if Rat::from_integer(k.into()) == want => None,
                            Ok(k) => Some(format!("|Aut {m}|({q}) = {k}, aut_poly gives {want}")),
                            Err(e) => Some(e.to_string()),
                        }
                    })
                })
                .collect();
            c.checks += 2 * mods.len();
            c.failures.extend(bad);
        }
        Ok(())
    });
}

fn all_of_total(t: u32, n: usize) -> Vec<MultiPartition> {
    compositions_of(t, n).iter().flat_map(multipartitions_with_dim).collect()
}

fn un(m: &MultiPartition) -> HallElementN {
    HallElementN::basis(m.clone())
}

fn hall_cyclic_suite(c: &mut Checker) {
    HallEngine::shared(3).set_cap(6);
    c.group("euler form", |c| {
        for n in 2..=3usize {
            for a in all_up_to(n, 4) {
                for b in all_up_to(n, 4) {
                    let ext = a.hom_dim(&b)? as i64 - hn::euler_form(&a.dim_vector(), &b.dim_vector())?;
                    c.check(ext >= 0, || format!("negative Ext dimension for {a}, {b}"));
                }
            }
        }
        Ok(())
    });
    c.group("associativity", |c| {
        for n in [2usize, 3] {
            for t in 2..=5u32 {
                for ta in 1..t {
                    for tb in 1..=t - ta {
                        let tc = t - ta - tb;
                        for a in all_of_total(ta, n) {
                            for b in all_of_total(tb, n) {
                                let ab = un(&a).multiply(&un(&b))?;
                                for x in all_of_total(tc, n) {
                                    let l = ab.multiply(&un(&x))?;
                                    let r = un(&a).multiply(&un(&b).multiply(&un(&x))?)?;
                                    c.check(l == r, || format!("n={n}: ({a} {b}) {x}"));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    });
    c.group("bialgebra and pairing", |c| {
        let n = 2;
        let elems: Vec<MultiPartition> = (0..=4).flat_map(|t| all_of_total(t, n)).collect();
        for x in &elems {
            for y in &elems {
                if x.size() + y.size() > 4 {
                    continue;
                }
                let dxy = un(x).multiply(&un(y))?.coproduct()?;
                let (dx, dy) = (un(x).coproduct()?, un(y).coproduct()?);
                c.check(dxy == dx.multiply(&dy)?, || format!("bialgebra {x} {y}"));
                c.check(dxy.strip_k() == dx.strip_k().multiply_twisted(&dy.strip_k())?, || format!("twisted bialgebra {x} {y}"));
            }
        }
        for t in 0..=4u32 {
            for x in all_of_total(t, n) {
                let dx = un(&x).coproduct()?;
                for ty in 0..=t {
                    for y in all_of_total(ty, n) {
                        for z in all_of_total(t - ty, n) {
                            let l = hn::pairing_n(&un(&x), &un(&y).multiply(&un(&z))?)?;
                            c.eq(&l, &dx.pair_with(&un(&y), &un(&z)), || format!("adjunction {x} {y} {z}"));
                        }
                    }
                }
            }
        }
        Ok(())
    });
    c.group("centre", |c| {
        for (n, r) in [(2usize, 1u32), (3, 1), (2, 2)] {
            let x = hn::central_x(n, r);
            for i in 1..=n {
                let ui = HallElementN::simple(i, n);
                c.check(x.multiply(&ui)? == ui.multiply(&x)?, || format!("x_{r} u_{i} = u_{i} x_{r} at n={n}"));
            }
        }
        for n in [2usize, 3] {
            for i in 1..=n {
                c.check(hn::e_prime(i, &hn::central_x(n, 1))?.is_zero(), || format!("e'_{i}(x_1) at n={n}"));
            }
        }
        let n = 2;
        let x = |r: u32| if r == 0 { HallElementN::one(n) } else { hn::central_x(n, r) };
        for r in 1..=2u32 {
            let mut want = HallTensorN::pure(&x(0), &x(r));
            for a in 1..=r {
                want = want.add(&HallTensorN::pure(&x(a), &x(r - a)));
            }
            c.check(x(r).coproduct()? == want, || format!("coproduct of x_{r}"));
        }
        for (n, r) in [(1usize, 1u32), (1, 3), (2, 1), (2, 2), (3, 1), (3, 2)] {
            let x = hn::central_x(n, r);
            let want = &RationalFunc::one() - &v_pow(-2 * n as i64);
            c.eq(&hn::pairing_n(&x, &x)?, &want, || format!("<x_{r}, x_{r}> at n={n}"));
        }
        let x1 = hn::central_x(2, 1);
        for i in 1..=2 {
            let mut d = vec![1u32; 2];
            d[i - 1] = 0;
            for m in multipartitions_with_dim(&DimensionVector(d)) {
                let y = HallElementN::simple(i, 2).multiply(&un(&m))?;
                c.check(hn::pairing_n(&x1, &y)?.is_zero(), || format!("<x_1, u_{i} u_{m}>"));
            }
        }
        for (n, r) in [(1usize, 1u32), (1, 2), (2, 1), (2, 2), (3, 1), (3, 2)] {
            let x = hn::central_x(n, r);
            let rr = MultiPartition::new(vec![Partition::row(r); n])?;
            let beta = (&RationalFunc::one() - &v_pow(-2)).pow(n as i32)?;
            c.eq(&x.coeff(&rr), &beta, || format!("x_{r} leading coefficient at n={n}"));
            let rel = below(&DimensionVector(vec![r; n]))?;
            for ((k, _), _) in x.terms() {
                c.check(*k == rr || rel[k].contains(&rr), || format!("x_{r} at n={n}: {k} is not above {rr}"));
            }
            if n == 2 && r == 1 {
                for m in multipartitions_with_dim(&DimensionVector(vec![r; n])) {
                    if m != rr && !rel[&rr].contains(&m) {
                        continue;
                    }
                    let p = hn::pairing_n(&x, &hn::canonical_basis_n(&m)?)?;
                    c.check(if m == rr { p.is_one() } else { p.is_zero() }, || format!("<x_1, b_{m}> = {p}"));
                }
            }
        }
        Ok(())
    });
    c.group("bar involution", |c| {
        let n = 3;
        let elems: Vec<MultiPartition> = (1..=2).flat_map(|t| all_of_total(t, n)).collect();
        for x in &elems {
            for y in &elems {
                let lhs = hn::bar_n(&un(x).multiply(&un(y))?)?;
                let rhs = hn::bar_n(&un(x))?.multiply(&hn::bar_n(&un(y))?)?;
                c.check(lhs == rhs, || format!("bar({x} {y})"));
            }
        }
        Ok(())
    });
}

/// The order on multipartitions of one dimension vector in which `mu < lambda`
/// when `ũ_mu` occurs in the layer product for `lambda`, closed transitively.
pub fn below(d: &DimensionVector) -> Result<BTreeMap<MultiPartition, BTreeSet<MultiPartition>>> {
    let basis = multipartitions_with_dim(d);
    let mut rel: BTreeMap<MultiPartition, BTreeSet<MultiPartition>> = BTreeMap::new();
    for m in &basis {
        let row = hn::pbw_layer_product(m)?;
        rel.insert(m.clone(), row.keys().filter(|k| *k != m).cloned().collect());
    }
    loop {
        let mut changed = false;
        for m in &basis {
            let add: BTreeSet<MultiPartition> = rel[m].iter().flat_map(|k| rel[k].iter().cloned()).collect();
            let s = rel.get_mut(m).expect("key present");
            let before = s.len();
            s.extend(add);
            changed |= s.len() != before;
        }
        if !changed {
            return Ok(rel);
        }
    }
}
