use super::*;
use crate::symfunc::{cyclic_c, hall_littlewood};

fn p(s: &str) -> Partition {
    s.parse().unwrap()
}

fn u(s: &str) -> HallElement1 {
    HallElement1::basis(p(s))
}

fn q_poly(c: &[i64]) -> RationalFunc {
    q_to_v(&IntPoly::from_ints(c))
}

#[test]
fn hall_polynomial_examples() {
    for a in 1..=4u32 {
        for b in 1..=4u32 {
            assert!(hall_polynomial(&Partition::row(a), &Partition::row(b), &Partition::row(a + b)).unwrap().is_one());
        }
    }
    let f = hall_polynomial(&p("1"), &p("1"), &p("1,1")).unwrap();
    assert_eq!(f.display_desc("T"), "T + 1");
    assert_eq!(hall_polynomial(&p("2"), &p("1,1"), &p("2,1,1")).unwrap(), IntPoly::from_ints(&[0, 0, 1]));
    assert!(hall_polynomial(&p("2"), &p("1"), &p("2,2")).unwrap().is_zero());
}

#[test]
fn multiply_examples() {
    let x = u("2").multiply(&u("1,1")).unwrap();
    assert_eq!(x, u("3,1").add(&u("2,1,1").scale(&v_pow(4))));
    assert_eq!(HallElement1::one().multiply(&x).unwrap(), x);
    let y = u("1").multiply(&u("1")).unwrap();
    assert_eq!(y, u("2").add(&u("1,1").scale(&q_poly(&[1, 1]))));
    assert_eq!(y.to_string(), "u(2) + (q + 1)u(1,1)");
}

#[test]
fn coproduct_examples() {
    let one_minus = &RationalFunc::one() - &v_pow(-2);
    for r in 1..=4 {
        let d = HallElement1::basis(Partition::row(r)).coproduct().unwrap();
        let mut expect = vec![((Partition::row(r), Partition::empty()), RationalFunc::one()), ((Partition::empty(), Partition::row(r)), RationalFunc::one())];
        for a in 1..r {
            expect.push(((Partition::row(a), Partition::row(r - a)), one_minus.clone()));
        }
        assert_eq!(d, HallTensor1::from_terms(expect), "r = {r}");
    }
    let d = HallElement1::one().coproduct().unwrap();
    assert_eq!(d, HallTensor1::pure(&HallElement1::one(), &HallElement1::one()));
    let d = u("1,1").coproduct().unwrap();
    // F a_(1) a_(1) / a_(1,1) = (q+1)(q-1)^2 / ((q^2-q)(q^2-1)) = q^-1
    assert_eq!(d.coeff(&p("1"), &p("1")), v_pow(-2));
}

#[test]
fn pairing_examples() {
    let one = RationalFunc::one();
    assert_eq!(pairing(&u("1"), &u("1")), &one / &(&one - &v_pow(-2)));
    assert!(pairing(&u("2"), &u("1,1")).is_zero());
    let expect = &one / &(&v_pow(4) * &(&(&one - &v_pow(-2)) * &(&one - &v_pow(-4))));
    assert_eq!(pairing(&u("1,1"), &u("1,1")), expect);
    // v^{2|l|}/a_l(v^2) agrees with 1/(v^{4n} b_l(v^-2))
    for d in 0..=6 {
        for l in partitions(d) {
            let b = RationalFunc::from_poly(l.b_t()).subst(&Rat::one(), -2).unwrap();
            let other = &one / &(&v_pow(4 * l.n_stat() as i64) * &b);
            assert_eq!(norm(&l), other, "{l}");
        }
    }
}

#[test]
fn pbw_examples() {
    assert_eq!(pbw(&p("1")), u("1"));
    assert_eq!(pbw(&p("1,1")), u("1,1").scale(&v_pow(2)));
    assert_eq!(pbw(&p("2,1")), u("2,1").scale(&v_pow(2)));
}

#[test]
fn phi1_images() {
    for r in 1..=5u32 {
        let e = phi1(&SymFunc::generator(Basis::E, r)).unwrap();
        assert_eq!(e, HallElement1::basis(Partition::column(r)).scale(&v_pow((r * (r - 1)) as i64)));
        let h = phi1(&SymFunc::generator(Basis::H, r)).unwrap();
        assert_eq!(h, HallElement1::from_terms(partitions(r).into_iter().map(|l| (l, RationalFunc::one()))));
        let c = phi1(&cyclic_c(r)).unwrap();
        assert_eq!(c, HallElement1::basis(Partition::row(r)).scale(&(&RationalFunc::one() - &v_pow(-2))));
    }
    for d in 0..=5 {
        for l in partitions(d) {
            let x = phi1(&hall_littlewood(&l).unwrap()).unwrap();
            assert_eq!(x, pbw(&l));
            let back = phi1_inv(&x).unwrap();
            assert_eq!(back.convert(Basis::E).unwrap(), hall_littlewood(&l).unwrap().convert(Basis::E).unwrap());
        }
    }
    assert!(phi1_inv(&u("1").scale(&v_pow(1))).is_err());
}

#[test]
fn bar_examples() {
    for r in 1..=4 {
        let x = pbw(&Partition::column(r));
        assert_eq!(bar(&x).unwrap(), x);
    }
    let x = u("1").scale(&v_pow(1));
    assert_eq!(bar(&x).unwrap(), u("1").scale(&v_pow(-1)));
    let q = v_pow(2);
    let qi = v_pow(-2);
    assert_eq!(bar(&pbw(&p("2"))).unwrap(), pbw(&p("2")).add(&pbw(&p("1,1")).scale(&(&qi - &q))));
    for d in 1..=5 {
        for l in partitions(d) {
            let x = pbw(&l).scale(&RationalFunc::from_poly(IntPoly::from_ints(&[1, 2, 0, -1])));
            assert_eq!(bar(&bar(&x).unwrap()).unwrap(), x);
        }
    }
}

#[test]
fn bar_is_multiplicative() {
    for a in [p("2"), p("1,1"), p("2,1")] {
        for b in [p("2"), p("1"), p("3")] {
            let x = pbw(&a).scale(&v_pow(3));
            let y = pbw(&b);
            let lhs = bar(&x.multiply(&y).unwrap()).unwrap();
            let rhs = bar(&x).unwrap().multiply(&bar(&y).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "{a} {b}");
        }
    }
}

#[test]
fn canonical_examples() {
    assert_eq!(canonical_basis(&p("2")).unwrap(), u("2").add(&u("1,1")));
    // K_{(2,2),(2,1,1)}(t) = t forces q^2 on u(2,1,1)
    let expect = u("2,2").scale(&q_poly(&[0, 0, 1])).add(&u("2,1,1").scale(&q_poly(&[0, 0, 1]))).add(&u("1,1,1,1").scale(&q_poly(&[0, 0, 1, 0, 1])));
    assert_eq!(canonical_basis(&p("2,2")).unwrap(), expect);
    for r in 1..=4 {
        assert_eq!(canonical_basis(&Partition::column(r)).unwrap(), pbw(&Partition::column(r)));
    }
    for d in 0..=5 {
        for l in partitions(d) {
            let b = canonical_basis(&l).unwrap();
            assert!(has_canonical_shape(&l, &b).unwrap());
            assert_eq!(bar(&b).unwrap(), b);
            dual_canonical_basis(&l).unwrap();
        }
    }
}

#[test]
fn canonical_display_forms() {
    let b = canonical_basis(&p("3,1")).unwrap();
    assert_eq!(b.display_in(HallBasis::U).unwrap(), "qu(3,1) + qu(2,2) + (q^2 + q)u(2,1,1) + (q^3 + q^2 + q)u(1,1,1,1)");
    assert_eq!(
        b.display_in(HallBasis::Pbw).unwrap(),
        "ũ(3,1) + q^-1ũ(2,2) + (q^-1 + q^-2)ũ(2,1,1) + (q^-3 + q^-4 + q^-5)ũ(1,1,1,1)"
    );
    let c = b.coefficients_in(HallBasis::Canonical).unwrap();
    assert_eq!(c.len(), 1);
    assert!(c[&p("3,1")].is_one());
}

#[test]
fn json_round_trip() {
    let x = canonical_basis(&p("2,1")).unwrap().add(&u("1").scale(&v_pow(-3)));
    for b in [HallBasis::U, HallBasis::Pbw, HallBasis::Canonical] {
        let j = x.to_json_in(b).unwrap();
        assert_eq!(HallElement1::from_json(&j).unwrap(), x);
    }
}

#[test]
fn small_hopf_laws() {
    let elems: Vec<HallElement1> = (1..=2).flat_map(partitions).map(HallElement1::basis).collect();
    for x in &elems {
        for y in &elems {
            assert_eq!(x.multiply(y).unwrap(), y.multiply(x).unwrap());
            let lhs = x.multiply(y).unwrap().coproduct().unwrap();
            let rhs = x.coproduct().unwrap().multiply(&y.coproduct().unwrap()).unwrap();
            assert_eq!(lhs, rhs, "{x} {y}");
            for z in &elems {
                let l = pairing(x, &y.multiply(z).unwrap());
                let r = x.coproduct().unwrap().pair_with(y, z);
                assert_eq!(l, r);
            }
        }
    }
}
