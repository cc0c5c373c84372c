use std::collections::{BTreeMap, BTreeSet};

use hallsym::arith::RationalFunc;
use hallsym::hall_classical::{self, v_pow};
use hallsym::hall_cyclic::*;
use hallsym::hall_engine::HallEngine;
use hallsym::partitions::{compositions_of, multipartitions_with_dim, partitions, DimensionVector, MultiPartition};

fn all_of_total(t: u32, n: usize) -> Vec<MultiPartition> {
    compositions_of(t, n).iter().flat_map(multipartitions_with_dim).collect()
}

fn u(m: &MultiPartition) -> HallElementN {
    HallElementN::basis(m.clone())
}

#[test]
fn associativity_to_total_dim_5() {
    HallEngine::shared(3).set_cap(5);
    for n in [2usize, 3] {
        for t in 0..=5u32 {
            for ta in 0..=t {
                for tb in 0..=t - ta {
                    let tc = t - ta - tb;
                    // the unit factors are trivial
                    if [ta, tb, tc].iter().filter(|&&x| x > 0).count() < 2 {
                        continue;
                    }
                    for a in all_of_total(ta, n) {
                        for b in all_of_total(tb, n) {
                            let ab = u(&a).multiply(&u(&b)).unwrap();
                            for c in all_of_total(tc, n) {
                                let l = ab.multiply(&u(&c)).unwrap();
                                let r = u(&a).multiply(&u(&b).multiply(&u(&c)).unwrap()).unwrap();
                                assert_eq!(l, r, "n={n} ({a} {b}) {c}");
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn rank_one_matches_classical_product() {
    for d in 0..=4u32 {
        for dl in 0..=d {
            for l in partitions(dl) {
                for m in partitions(d - dl) {
                    let c = hall_classical::HallElement1::basis(l.clone()).multiply(&hall_classical::HallElement1::basis(m.clone())).unwrap();
                    let x = u(&MultiPartition::from_partition(l.clone())).multiply(&u(&MultiPartition::from_partition(m.clone()))).unwrap();
                    let lift = HallElementN::from_u(1, c.terms().iter().map(|(p, k)| (MultiPartition::from_partition(p.clone()), k.clone())));
                    assert_eq!(x, lift);
                }
            }
        }
    }
}

#[test]
fn bialgebra_to_total_dim_4() {
    let n = 2;
    let elems: Vec<MultiPartition> = (0..=4).flat_map(|t| all_of_total(t, n)).collect();
    for x in &elems {
        for y in &elems {
            if x.size() + y.size() > 4 {
                continue;
            }
            let (ux, uy) = (u(x), u(y));
            let dxy = ux.multiply(&uy).unwrap().coproduct().unwrap();
            let (dx, dy) = (ux.coproduct().unwrap(), uy.coproduct().unwrap());
            // with the K factors the tensor square is an ordinary algebra
            assert_eq!(dxy, dx.multiply(&dy).unwrap(), "{x} {y}");
            // dropping them needs Green's twist
            assert_eq!(dxy.strip_k(), dx.strip_k().multiply_twisted(&dy.strip_k()).unwrap(), "{x} {y} twisted");
        }
    }
}

#[test]
fn hopf_pairing_adjunction_to_total_dim_4() {
    let n = 2;
    for t in 0..=4u32 {
        for x in all_of_total(t, n) {
            let dx = u(&x).coproduct().unwrap();
            for ty in 0..=t {
                for y in all_of_total(ty, n) {
                    for z in all_of_total(t - ty, n) {
                        let l = pairing_n(&u(&x), &u(&y).multiply(&u(&z)).unwrap()).unwrap();
                        assert_eq!(l, dx.pair_with(&u(&y), &u(&z)), "{x} {y} {z}");
                    }
                }
            }
        }
    }
}

#[test]
fn centre_elements_are_central() {
    for (n, r) in [(2usize, 1u32), (3, 1), (2, 2)] {
        let x = central_x(n, r);
        for i in 1..=n {
            let ui = HallElementN::simple(i, n);
            assert_eq!(x.multiply(&ui).unwrap(), ui.multiply(&x).unwrap(), "n={n} r={r} i={i}");
        }
    }
    for n in [2usize, 3] {
        for i in 1..=n {
            assert!(e_prime(i, &central_x(n, 1)).unwrap().is_zero());
        }
    }
}

#[test]
fn centre_coproduct() {
    let n = 2;
    let x = |r: u32| if r == 0 { HallElementN::one(n) } else { central_x(n, r) };
    for r in 1..=2u32 {
        let mut expect = HallTensorN::pure(&x(0), &x(r));
        for a in 1..=r {
            expect = expect.add(&HallTensorN::pure(&x(a), &x(r - a)));
        }
        assert_eq!(x(r).coproduct().unwrap(), expect, "r={r}");
    }
}

#[test]
fn centre_norms() {
    // <c_r, c_r>_t = 1 - t and Phi_n sends t to v^{-2n}
    for (n, r) in [(1usize, 1u32), (1, 3), (2, 1), (2, 2), (3, 1), (3, 2)] {
        let x = central_x(n, r);
        let expect = &RationalFunc::one() - &v_pow(-2 * n as i64);
        assert_eq!(pairing_n(&x, &x).unwrap(), expect, "n={n} r={r}");
    }
}

#[test]
fn centre_is_orthogonal_to_simple_multiples() {
    let n = 2;
    let x = central_x(n, 1);
    for i in 1..=n {
        let mut d = vec![1u32; n];
        d[i - 1] = 0;
        for m in multipartitions_with_dim(&DimensionVector(d)) {
            let y = HallElementN::simple(i, n).multiply(&u(&m)).unwrap();
            assert!(pairing_n(&x, &y).unwrap().is_zero());
        }
    }
}

// mu < lambda when ũ_mu occurs in Ẽ_lambda, closed transitively
fn below(d: &DimensionVector) -> BTreeMap<MultiPartition, BTreeSet<MultiPartition>> {
    let basis = multipartitions_with_dim(d);
    let mut rel: BTreeMap<MultiPartition, BTreeSet<MultiPartition>> = BTreeMap::new();
    for m in &basis {
        let row = pbw_layer_product(m).unwrap();
        rel.insert(m.clone(), row.keys().filter(|k| *k != m).cloned().collect());
    }
    loop {
        let mut changed = false;
        for m in &basis {
            let mut add = BTreeSet::new();
            for k in &rel[m] {
                add.extend(rel[k].iter().cloned());
            }
            let s = rel.get_mut(m).unwrap();
            let before = s.len();
            s.extend(add);
            changed |= s.len() != before;
        }
        if !changed {
            return rel;
        }
    }
}

#[test]
fn centre_leading_terms() {
    HallEngine::shared(3).set_cap(6);
    for (n, r) in [(1usize, 1u32), (1, 2), (2, 1), (2, 2), (3, 1), (3, 2)] {
        let x = central_x(n, r);
        let rr = MultiPartition::new(vec![hallsym::partitions::Partition::row(r); n]).unwrap();
        let beta = &RationalFunc::one() - &v_pow(-2);
        assert_eq!(x.coeff(&rr), beta.pow(n as i32).unwrap());
        let rel = below(&DimensionVector(vec![r; n]));
        for (k, _) in x.terms().keys().map(|k| (k.0.clone(), ())) {
            if k != rr {
                assert!(rel[&k].contains(&rr), "n={n} r={r}: {k} is not above {rr}");
            }
        }
    }
}

#[test]
fn centre_pairs_with_lower_canonical_elements() {
    let n = 2;
    let d = DimensionVector(vec![1, 1]);
    let rel = below(&d);
    let rr: MultiPartition = "1;1".parse().unwrap();
    let x = central_x(n, 1);
    for m in multipartitions_with_dim(&d) {
        if m != rr && !rel[&rr].contains(&m) {
            continue;
        }
        let p = pairing_n(&x, &canonical_basis_n(&m).unwrap()).unwrap();
        let expect = if m == rr { RationalFunc::one() } else { RationalFunc::zero() };
        assert_eq!(p, expect, "{m}");
    }
}

#[test]
fn canonical_bases_rank_two_to_total_dim_4() {
    let n = 2;
    for t in 1..=4u32 {
        for d in compositions_of(t, n) {
            for m in multipartitions_with_dim(&d) {
                let b = canonical_basis_n(&m).unwrap();
                assert_eq!(bar_n(&b).unwrap(), b, "{m}");
                let c = b.pbw_coefficients();
                assert!(c[&(m.clone(), KClass::zero(n))].is_one());
                for ((k, _), x) in &c {
                    if *k != m {
                        assert!(hallsym::canonical::in_negative_ideal(x, false), "b{m} at {k}: {x}");
                    }
                }
                let dual = dual_canonical_basis_n(&m).unwrap();
                for l in multipartitions_with_dim(&d) {
                    let p = pairing_n(&dual, &canonical_basis_n(&l).unwrap()).unwrap();
                    assert_eq!(p.is_one(), l == m);
                    assert!(l == m || p.is_zero());
                }
            }
        }
    }
}

#[test]
fn bar_is_multiplicative_rank_three() {
    let n = 3;
    let elems: Vec<MultiPartition> = (1..=2).flat_map(|t| all_of_total(t, n)).collect();
    for x in &elems {
        for y in &elems {
            let lhs = bar_n(&u(x).multiply(&u(y)).unwrap()).unwrap();
            let rhs = bar_n(&u(x)).unwrap().multiply(&bar_n(&u(y)).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "{x} {y}");
        }
    }
}
