//! Acceptance run: one line per criterion, then the conjecture reports.
//!
//! Runs without the libtest harness so the lines always show.

use std::time::{Duration, Instant};

use hallsym::arith::{Rat, RationalFunc};
use hallsym::fq_oracle::count_hall_number;
use hallsym::hall_classical::{self as hc, v_pow, HallBasis, HallElement1};
use hallsym::hall_cyclic::{self as hn, HallElementN};
use hallsym::partitions::{partitions, MultiPartition, Partition};
use hallsym::symfunc::{self as sf, Basis, SymFunc};
use hallsym::verify;
use num_traits::One;
use rayon::prelude::*;

type Outcome = Result<String, String>;

struct Run {
    failed: usize,
}

impl Run {
    fn criterion(&mut self, id: &str, title: &str, budget: Duration, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let res = f();
        let took = start.elapsed();
        let (ok, detail) = match res {
            Ok(d) if took <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over the {}s budget", budget.as_secs())),
            Err(e) => (false, e),
        };
        if !ok {
            self.failed += 1;
        }
        let status = if ok { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {status} [{:.1}s] {title}: {detail}", took.as_secs_f64());
    }
}

// collects failures, keeping the first few for the report line
#[derive(Default)]
struct Tally {
    checks: usize,
    bad: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.bad.push(what());
        }
    }

    fn finish(self, summary: impl FnOnce(usize) -> String) -> Outcome {
        if self.bad.is_empty() {
            Ok(summary(self.checks))
        } else {
            let shown: Vec<_> = self.bad.iter().take(3).cloned().collect();
            Err(format!("{} of {} checks failed: {}", self.bad.len(), self.checks, shown.join("; ")))
        }
    }
}

fn sec(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn p(s: &str) -> Partition {
    s.parse().unwrap()
}

fn rf(n: i64) -> RationalFunc {
    RationalFunc::from_int(n)
}

fn t_pow(k: i64) -> RationalFunc {
    RationalFunc::monomial(Rat::one(), k)
}

fn elem(b: Basis, l: &Partition) -> SymFunc {
    SymFunc::basis_element(b, l.clone())
}

// (1 - t)(1 - t^2)...(1 - t^m)
fn phi(m: u32) -> RationalFunc {
    (1..=m as i64).fold(rf(1), |acc, i| &acc * &(&rf(1) - &t_pow(i)))
}

fn n_of(l: &Partition) -> i64 {
    l.parts().iter().enumerate().map(|(i, &x)| i as i64 * x as i64).sum()
}

// b_l(t) = prod over part sizes of phi_{m_i}(t)
fn b_of(l: &Partition) -> RationalFunc {
    let mut mult = std::collections::BTreeMap::new();
    for &x in l.parts() {
        *mult.entry(x).or_insert(0u32) += 1;
    }
    mult.values().fold(rf(1), |acc, &m| &acc * &phi(m))
}

fn same(a: &SymFunc, b: &SymFunc) -> bool {
    a.to_p().unwrap() == b.to_p().unwrap()
}

fn e_combo(terms: &[(i64, &str)]) -> SymFunc {
    SymFunc::from_terms(Basis::E, terms.iter().map(|(c, l)| (p(l), rf(*c))))
}

fn schur_table() -> Outcome {
    let table: Vec<(&str, Vec<(i64, &str)>)> = vec![
        ("1", vec![(1, "1")]),
        ("1,1", vec![(1, "2")]),
        ("2", vec![(1, "1,1"), (-1, "2")]),
        ("1,1,1", vec![(1, "3")]),
        ("2,1", vec![(1, "2,1"), (-1, "3")]),
        ("3", vec![(1, "1,1,1"), (-2, "2,1"), (1, "3")]),
        ("1,1,1,1", vec![(1, "4")]),
        ("2,1,1", vec![(1, "3,1"), (-1, "4")]),
        ("2,2", vec![(1, "2,2"), (-1, "3,1")]),
        ("3,1", vec![(1, "2,1,1"), (-1, "2,2"), (-1, "3,1"), (1, "4")]),
        ("4", vec![(1, "1,1,1,1"), (-3, "2,1,1"), (1, "2,2"), (2, "3,1"), (-1, "4")]),
    ];
    let mut t = Tally::default();
    for (l, exp) in &table {
        let want = e_combo(exp);
        let l = p(l);
        t.check(sf::schur(&l).map_err(|e| e.to_string())? == want, || format!("schur({l})"));
        t.check(elem(Basis::S, &l).convert(Basis::E).map_err(|e| e.to_string())? == want, || format!("convert s{l}"));
    }
    t.finish(|_| format!("{} expansions reproduced by schur and by convert", table.len()))
}

fn pairing_identities() -> Outcome {
    let mut t = Tally::default();
    for n in 1..=6u32 {
        let want = phi(n).inv().unwrap();
        let (e, h, c) = (SymFunc::generator(Basis::E, n), SymFunc::generator(Basis::H, n), sf::cyclic_c(n));
        t.check(sf::pairing_t(&e, &e).unwrap() == want, || format!("<e{n},e{n}>_t"));
        t.check(sf::pairing_t(&h, &h).unwrap() == want, || format!("<h{n},h{n}>_t"));
        t.check(sf::pairing_t(&c, &c).unwrap() == &rf(1) - &t_pow(1), || format!("<c{n},c{n}>_t"));
    }
    for d in 0..=6 {
        let ps = partitions(d);
        for a in &ps {
            for b in &ps {
                let delta = if a == b { rf(1) } else { rf(0) };
                t.check(sf::pairing(&elem(Basis::H, a), &elem(Basis::M, b)).unwrap() == delta, || format!("<h{a},m{b}>"));
                t.check(sf::pairing_t(&elem(Basis::C, a), &elem(Basis::M, b)).unwrap() == delta, || format!("<c{a},m{b}>_t"));
            }
        }
    }
    t.finish(|k| format!("{k} identities, n <= 6 and weights <= 6"))
}

fn hall_littlewood() -> Outcome {
    let mut t = Tally::default();
    for d in 0..=6u32 {
        for l in partitions(d) {
            let hl = sf::hall_littlewood(&l).unwrap();
            t.check(same(&hl.eval_t(&Rat::from_integer(0.into())).unwrap(), &elem(Basis::S, &l)), || format!("P{l}(0)"));
            t.check(same(&hl.eval_t(&Rat::one()).unwrap(), &elem(Basis::M, &l)), || format!("P{l}(1)"));
            t.check(sf::pairing_t(&hl, &hl).unwrap() == b_of(&l).inv().unwrap(), || format!("norm of P{l}"));
        }
    }
    for r in 1..=6u32 {
        let hl = |l: &Partition| elem(Basis::HL, l);
        let mut h = SymFunc::zero(Basis::HL);
        let mut pr = SymFunc::zero(Basis::HL);
        for l in partitions(r) {
            h = h.plus(&hl(&l).scale(&t_pow(n_of(&l)))).unwrap();
            let c = (1..l.len() as i64).fold(t_pow(n_of(&l)), |acc, k| &acc * &(&rf(1) - &t_pow(-k)));
            pr = pr.plus(&hl(&l).scale(&c)).unwrap();
        }
        let e = hl(&Partition::column(r));
        let c = hl(&Partition::row(r)).scale(&(&rf(1) - &t_pow(1)));
        t.check(same(&SymFunc::generator(Basis::E, r), &e), || format!("e_{r}"));
        t.check(same(&sf::cyclic_c(r), &c), || format!("c_{r}"));
        t.check(same(&SymFunc::generator(Basis::H, r), &h), || format!("h_{r}"));
        t.check(same(&SymFunc::generator(Basis::P, r), &pr), || format!("p_{r}"));
    }
    t.finish(|k| format!("{k} checks: specialisations, norms and the e, c, h, p expansions to degree 6"))
}

fn oracle_equivalence() -> Outcome {
    let mut triples = Vec::new();
    for d in 1..=5u32 {
        for dl in 1..d {
            for l in partitions(dl) {
                for m in partitions(d - dl) {
                    for x in partitions(d) {
                        triples.push((l.clone(), m.clone(), x));
                    }
                }
            }
        }
    }
    let bad: Vec<String> = triples
        .par_iter()
        .flat_map_iter(|(l, m, x)| {
            let f = hc::hall_polynomial(l, m, x).unwrap();
            let (ml, mm, mx) = [l, m, x].map(|y| MultiPartition::from_partition(y.clone())).into();
            [2u32, 3].into_iter().filter_map(move |q| {
                let k = count_hall_number(&ml, &mm, &mx, q).unwrap();
                let v = f.eval(&Rat::from_integer(q.into()));
                (v != Rat::from_integer(k.into())).then(|| format!("F^{x}_{l},{m}({q}) = {v}, counted {k}"))
            })
        })
        .collect();
    if bad.is_empty() {
        Ok(format!("{} triples with |xi| <= 5 agree with F_2 and F_3 counts", triples.len()))
    } else {
        Err(format!("{} mismatches: {}", bad.len(), bad[..bad.len().min(3)].join("; ")))
    }
}

fn degree_law() -> Outcome {
    let mut t = Tally::default();
    let mut nonzero = 0;
    for d in 0..=7u32 {
        for dl in 0..=d {
            for l in partitions(dl) {
                for m in partitions(d - dl) {
                    for x in partitions(d) {
                        let f = hc::hall_polynomial(&l, &m, &x).unwrap();
                        let c = sf::littlewood_richardson(&l, &m, &x).unwrap();
                        let top = n_of(&x) - n_of(&l) - n_of(&m);
                        if f.is_zero() {
                            t.check(c == 0, || format!("F^{x}_{l},{m} = 0 but c = {c}"));
                            continue;
                        }
                        nonzero += 1;
                        t.check(f.degree().unwrap() as i64 <= top, || format!("deg F^{x}_{l},{m}"));
                        t.check(f.coeff(top as usize) == Rat::from_integer(c.into()), || format!("top of F^{x}_{l},{m}"));
                    }
                }
            }
        }
    }
    t.finish(|k| format!("{k} checks over |xi| <= 7, {nonzero} nonzero Hall polynomials"))
}

fn t_to_v(c: &RationalFunc) -> RationalFunc {
    c.subst(&Rat::one(), -2).unwrap()
}

fn hall_theorem() -> Outcome {
    let mut t = Tally::default();
    let hl = |l: &Partition| elem(Basis::HL, l);
    for d in 0..=5u32 {
        for a in partitions(d) {
            let fa = hl(&a);
            let pa = hc::phi1(&fa).unwrap();
            let mut img = Vec::new();
            for ((x, y), c) in fa.coproduct().unwrap().convert(Basis::HL, Basis::HL).unwrap().terms() {
                img.push(((x.clone(), y.clone()), &t_to_v(c) * &v_pow(2 * (n_of(x) + n_of(y)))));
            }
            t.check(pa.coproduct().unwrap() == hc::HallTensor1::from_terms(img), || format!("coproduct at P{a}"));
            for b in partitions(d) {
                let lhs = hc::pairing(&pa, &hc::phi1(&hl(&b)).unwrap());
                t.check(lhs == t_to_v(&sf::pairing_t(&fa, &hl(&b)).unwrap()), || format!("pairing {a} {b}"));
            }
            for b in (0..=5 - d).flat_map(partitions) {
                let fb = hl(&b);
                let lhs = pa.multiply(&hc::phi1(&fb).unwrap()).unwrap();
                t.check(lhs == hc::phi1(&fa.multiply(&fb).unwrap()).unwrap(), || format!("product {a} {b}"));
            }
        }
    }
    let u = |l: &Partition| HallElement1::basis(l.clone());
    for r in 1..=6u32 {
        // Phi_1(p_r) = sum (1 - q)...(1 - q^{l-1}) u_l
        let pr = HallElement1::from_terms(partitions(r).into_iter().map(|l| {
            let c = (1..l.len() as i64).fold(rf(1), |acc, k| &acc * &(&rf(1) - &v_pow(2 * k)));
            (l, c)
        }));
        t.check(hc::phi1(&SymFunc::generator(Basis::P, r)).unwrap() == pr, || format!("p_{r}"));
        let col = Partition::column(r);
        t.check(hc::phi1(&SymFunc::generator(Basis::E, r)).unwrap() == u(&col).scale(&v_pow(2 * n_of(&col))), || format!("e_{r}"));
        let h = HallElement1::from_terms(partitions(r).into_iter().map(|l| (l, rf(1))));
        t.check(hc::phi1(&SymFunc::generator(Basis::H, r)).unwrap() == h, || format!("h_{r}"));
        let c = u(&Partition::row(r)).scale(&(&rf(1) - &v_pow(-2)));
        t.check(hc::phi1(&sf::cyclic_c(r)).unwrap() == c, || format!("c_{r}"));
    }
    for d in 0..=6u32 {
        for l in partitions(d) {
            let img = hc::phi1(&sf::hall_littlewood(&l).unwrap()).unwrap();
            t.check(img == u(&l).scale(&v_pow(2 * n_of(&l))), || format!("P_{l}"));
        }
    }
    t.finish(|k| format!("{k} checks: product, coproduct, pairing to degree 5; images to degree 6"))
}

// u-form and ũ-form as printed, in the crate's rendering
const CANONICAL_TABLE: [(&str, &str, &str); 11] = [
    ("1", "u(1)", "ũ(1)"),
    ("1,1", "qu(1,1)", "ũ(1,1)"),
    ("2", "u(2) + u(1,1)", "ũ(2) + q^-1ũ(1,1)"),
    ("1,1,1", "q^3u(1,1,1)", "ũ(1,1,1)"),
    ("2,1", "qu(2,1) + (q^2 + q)u(1,1,1)", "ũ(2,1) + (q^-1 + q^-2)ũ(1,1,1)"),
    ("3", "u(3) + u(2,1) + u(1,1,1)", "ũ(3) + q^-1ũ(2,1) + q^-3ũ(1,1,1)"),
    ("1,1,1,1", "q^6u(1,1,1,1)", "ũ(1,1,1,1)"),
    ("2,1,1", "q^3u(2,1,1) + (q^5 + q^4 + q^3)u(1,1,1,1)", "ũ(2,1,1) + (q^-1 + q^-2 + q^-3)ũ(1,1,1,1)"),
    ("2,2", "q^2u(2,2) + u(2,1,1) + (q^4 + q^2)u(1,1,1,1)", "ũ(2,2) + q^-3ũ(2,1,1) + (q^-2 + q^-4)ũ(1,1,1,1)"),
    (
        "3,1",
        "qu(3,1) + qu(2,2) + (q^2 + q)u(2,1,1) + (q^3 + q^2 + q)u(1,1,1,1)",
        "ũ(3,1) + q^-1ũ(2,2) + (q^-1 + q^-2)ũ(2,1,1) + (q^-3 + q^-4 + q^-5)ũ(1,1,1,1)",
    ),
    (
        "4",
        "u(4) + u(3,1) + u(2,2) + u(2,1,1) + u(1,1,1,1)",
        "ũ(4) + q^-1ũ(3,1) + q^-2ũ(2,2) + q^-3ũ(2,1,1) + q^-6ũ(1,1,1,1)",
    ),
];

// The printed b_(2,2) has coefficient 1 on u(2,1,1); K_{(2,2),(2,1,1)}(t) = t
// and bar invariance both force q^2.
const B22_CORRECTED: (&str, &str) =
    ("q^2u(2,2) + q^2u(2,1,1) + (q^4 + q^2)u(1,1,1,1)", "ũ(2,2) + q^-1ũ(2,1,1) + (q^-2 + q^-4)ũ(1,1,1,1)");

fn canonical_table() -> Outcome {
    let mut t = Tally::default();
    let mut verbatim = 0;
    for (l, uf, pf) in CANONICAL_TABLE {
        let l = p(l);
        let b = hc::canonical_basis(&l).unwrap();
        let (gu, gp) = (b.display_in(HallBasis::U).unwrap(), b.display_in(HallBasis::Pbw).unwrap());
        if gu == uf && gp == pf {
            verbatim += 1;
            continue;
        }
        let (cu, cp) = B22_CORRECTED;
        t.check(l == p("2,2") && gu == cu && gp == cp, || format!("b{l} = {gu} = {gp}"));
        // the printed element is not bar invariant
        let printed = HallElement1::basis(p("2,2"))
            .scale(&v_pow(4))
            .add(&HallElement1::basis(p("2,1,1")))
            .add(&HallElement1::basis(p("1,1,1,1")).scale(&(&v_pow(8) + &v_pow(4))));
        t.check(hc::bar(&printed).unwrap() != printed, || "printed b(2,2) is bar invariant".into());
    }
    for d in 0..=6u32 {
        for l in partitions(d) {
            let via_schur = hc::phi1(&elem(Basis::S, &l)).unwrap();
            t.check(via_schur == hc::canonical_basis_via_bar(&l).unwrap(), || format!("routes differ at {l}"));
        }
    }
    t.finish(|_| {
        format!(
            "{verbatim} of {} table entries verbatim in both forms, b(2,2) matches the corrected {} ; Phi1(s) = bar recursion to degree 6",
            CANONICAL_TABLE.len(),
            B22_CORRECTED.0
        )
    })
}

fn ab(i: i64, j: i32) -> RationalFunc {
    let beta = &rf(1) - &v_pow(-2);
    &v_pow(-2 * i) * &beta.pow(j).unwrap()
}

fn usum(n: usize, c: RationalFunc, parts: &[&str]) -> HallElementN {
    HallElementN::from_u(n, parts.iter().map(|s| (s.parse::<MultiPartition>().unwrap(), c.clone())))
}

fn centre() -> Outcome {
    let mut t = Tally::default();
    let x21 = usum(2, -ab(1, 1), &["2;0", "0;2"]).add(&usum(2, ab(0, 2), &["1;1"]));
    // printed with beta^2 u_(11) as last term, which has degree delta; u_(22) is the only reading of degree 2 delta
    let x22 = usum(2, ab(2, 1), &["4;0", "0;4"]).add(&usum(2, -ab(1, 2), &["3;1", "1;3"])).add(&usum(2, ab(0, 2), &["2;2"]));
    let x31 = usum(3, ab(2, 1), &["3;0;0", "0;3;0", "0;0;3"])
        .add(&usum(3, -ab(1, 2), &["1;2;0", "0;1;2", "2;0;1"]))
        .add(&usum(3, ab(0, 3), &["1;1;1"]));
    let x32 = usum(3, ab(4, 1), &["6;0;0", "0;6;0", "0;0;6"])
        .add(&usum(3, -ab(3, 2), &["1;5;0", "0;1;5", "5;0;1"]))
        .add(&usum(3, -ab(3, 2), &["4;2;0", "0;4;2", "2;0;4"]))
        .add(&usum(3, ab(2, 3), &["4;1;1", "1;4;1", "1;1;4"]))
        .add(&usum(3, ab(2, 2), &["3;3;0", "0;3;3", "3;0;3"]))
        .add(&usum(3, -ab(1, 3), &["1;2;3", "3;1;2", "2;3;1"]))
        .add(&usum(3, ab(0, 3), &["2;2;2"]));
    for (n, r, want) in [(2, 1, &x21), (2, 2, &x22), (3, 1, &x31), (3, 2, &x32)] {
        t.check(&hn::central_x(n, r) == want, || format!("x_({n},{r})"));
    }
    for (n, r) in [(2usize, 1u32), (3, 1), (2, 2)] {
        let x = hn::central_x(n, r);
        for i in 1..=n {
            let ui = HallElementN::simple(i, n);
            t.check(x.multiply(&ui).unwrap() == ui.multiply(&x).unwrap(), || format!("x_{r} u_{i} at n={n}"));
        }
    }
    for n in [2usize, 3] {
        for i in 1..=n {
            t.check(hn::e_prime(i, &hn::central_x(n, 1)).unwrap().is_zero(), || format!("e'_{i}(x_1) at n={n}"));
        }
    }
    let mut norms = Vec::new();
    for (n, r) in [(2usize, 1u32), (2, 2), (3, 1), (3, 2)] {
        let x = hn::central_x(n, r);
        let got = hn::pairing_n(&x, &x).unwrap();
        let want = &rf(1) - &v_pow(-2 * n as i64);
        let printed = &rf(1) - &v_pow(2 * n as i64);
        t.check(got == want, || format!("<x_{r},x_{r}> at n={n} is {}", got.display_desc("v")));
        t.check(got != printed, || format!("<x_{r},x_{r}> at n={n} equals 1 - v^(2n)"));
        norms.push(format!("n={n},r={r}"));
    }
    t.finish(|_| {
        format!(
            "x_(2,1), x_(3,1), x_(3,2) as displayed, x_(2,2) with u_(22) for the misprinted u_(11); centrality and e' kernels hold; <x_r,x_r> = 1 - v^(-2n) at {} (the displayed 1 - v^(2n) is off by the sign of the exponent)",
            norms.join(" ")
        )
    })
}

fn rank_two_canonical() -> Outcome {
    let mut t = Tally::default();
    let u = |s: &str| HallElementN::basis(s.parse().unwrap());
    let mp = |s: &str| s.parse::<MultiPartition>().unwrap();
    t.check(hn::canonical_basis_n(&mp("1;1")).unwrap() == u("1;1"), || "b_(1,1)".into());
    let b20 = u("2;0").add(&u("1;1")).scale(&v_pow(-1));
    t.check(hn::canonical_basis_n(&mp("2;0")).unwrap() == b20, || "b_(2,0)".into());
    let x1 = hn::central_x(2, 1);
    t.check(hn::dual_canonical_basis_n(&mp("1;1")).unwrap() == x1, || "b*_(1,1) = x_1".into());
    let s1 = sf::dual_schur(&Partition::row(1)).unwrap();
    t.check(hn::phi_n(2, &s1).unwrap() == x1, || "Phi_2(S_(1)) = x_1".into());
    let rep = hn::conjecture_report(&Partition::row(1), 2);
    t.check(rep.dual_side.is_equal() && rep.projection_side.is_equal(), || format!("conjecture report {}", rep.to_json()));
    t.finish(|_| "b_(2,0) = v^-1(u_(20) + u_(11)), b_(1,1) = u_(11), b*_(1,1) = x_1 = Phi_2(S_(1)); report ((1),2) EQUAL on both sides".into())
}

fn property_suites() -> Outcome {
    let reports = verify::run_all();
    let mut lines = Vec::new();
    let mut bad = Vec::new();
    for r in &reports {
        lines.push(format!("{} {} checks", r.name, r.checks));
        for f in r.failures.iter().take(2) {
            bad.push(format!("{}: {f}", r.name));
        }
    }
    if bad.is_empty() {
        Ok(format!("all suites green ({})", lines.join(", ")))
    } else {
        Err(bad.join("; "))
    }
}

fn main() {
    let mut run = Run { failed: 0 };
    run.criterion("1", "Schur table", sec(1), schur_table);
    run.criterion("2", "pairing identities", sec(10), pairing_identities);
    run.criterion("3", "Hall-Littlewood functions", sec(30), hall_littlewood);
    run.criterion("4", "Hall polynomials vs F_q counts", sec(300), oracle_equivalence);
    run.criterion("5", "degree and leading-term law", sec(120), degree_law);
    run.criterion("6", "Hall's theorem", sec(60), hall_theorem);
    run.criterion("7", "canonical basis table", sec(60), canonical_table);
    run.criterion("8", "centre elements", sec(600), centre);
    run.criterion("9", "rank-two canonical data", sec(120), rank_two_canonical);
    run.criterion("10", "property suites", sec(900), property_suites);

    // the conjecture is open; these are reports, not criteria
    for (l, n) in [("2", 2usize), ("1,1", 2), ("1", 3)] {
        let rep = hn::conjecture_report(&p(l), n);
        let word = |s: &hn::Side| match s {
            hn::Side::Equal => "EQUAL".to_string(),
            hn::Side::Differs(d) => format!("DIFFERS by {d}"),
            hn::Side::Failed(e) => format!("not computed: {e}"),
        };
        println!("conjecture ({l}) n={n}: dual side {}, projection side {}", word(&rep.dual_side), word(&rep.projection_side));
    }

    if run.failed > 0 {
        println!("{} criteria failed", run.failed);
        std::process::exit(1);
    }
}
