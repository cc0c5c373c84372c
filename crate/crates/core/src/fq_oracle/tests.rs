use super::*;
use crate::hall_engine::HallEngine;
use crate::partitions::{compositions_of, multipartitions_with_dim};
use proptest::prelude::*;

fn mp(s: &str) -> MultiPartition {
    s.parse().unwrap()
}

fn all_up_to(n: usize, max_total: u32) -> Vec<MultiPartition> {
    (1..=max_total).flat_map(|t| compositions_of(t, n)).flat_map(|d| multipartitions_with_dim(&d)).collect()
}

#[test]
fn normal_forms() {
    let r = rep_from_multipartition(&mp("2"), 2).unwrap();
    assert_eq!(r.arrow(1), &vec![vec![0, 1], vec![0, 0]]);
    let r = rep_from_multipartition(&mp("1;0"), 5).unwrap();
    assert_eq!(r.dims(), &DimensionVector(vec![1, 0]));
    assert!(r.arrow(1).iter().flatten().all(|&x| x == 0));
    assert!(r.arrow(2).iter().flatten().all(|&x| x == 0));
    assert!(matches!(rep_from_multipartition(&mp("9"), 2), Err(Error::BoundExceeded(_))));
    assert!(matches!(rep_from_multipartition(&mp("1"), 17), Err(Error::BoundExceeded(_))));
    assert!(rep_from_multipartition(&mp("1"), 4).is_err());
}

#[test]
fn iso_type_round_trip() {
    for n in 1..=3 {
        for m in all_up_to(n, 5) {
            for q in [2, 3] {
                let r = rep_from_multipartition(&m, q).unwrap();
                assert!(r.is_nilpotent());
                assert_eq!(iso_type(&r).unwrap(), m);
            }
        }
    }
}

#[test]
fn jordan_block_and_non_nilpotent() {
    for r in 1..=5 {
        let rep = rep_from_multipartition(&MultiPartition::from_rows(&[r]), 3).unwrap();
        assert_eq!(iso_type(&rep).unwrap(), MultiPartition::from_rows(&[r]));
    }
    let bad = FqRep::new(2, DimensionVector(vec![1]), vec![vec![vec![1]]]).unwrap();
    assert!(!bad.is_nilpotent());
    assert!(matches!(iso_type(&bad), Err(Error::NonNilpotent)));
}

fn random_invertible(d: usize, q: u32, seed: &mut u64) -> FMat {
    loop {
        let m: FMat = (0..d)
            .map(|_| {
                (0..d)
                    .map(|_| {
                        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                        ((*seed >> 33) % q as u64) as u32
                    })
                    .collect()
            })
            .collect();
        if rank(&m, d, q) == d {
            return m;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn iso_type_is_basis_independent(idx in 0usize..200, seed in any::<u64>(), q in prop::sample::select(vec![2u32, 3, 5])) {
        let mods = all_up_to(2, 5);
        let m = &mods[idx % mods.len()];
        let r = rep_from_multipartition(m, q).unwrap();
        let mut s = seed;
        let g: Vec<FMat> = (0..2).map(|v| random_invertible(r.dims().0[v] as usize, q, &mut s)).collect();
        let r2 = r.change_basis(&g).unwrap();
        prop_assert_eq!(iso_type(&r2).unwrap(), m.clone());
    }

    #[test]
    fn iso_type_of_direct_sum(i in 0usize..200, j in 0usize..200) {
        let mods = all_up_to(3, 3);
        let a = &mods[i % mods.len()];
        let b = &mods[j % mods.len()];
        let r = rep_from_multipartition(a, 2).unwrap().direct_sum(&rep_from_multipartition(b, 2).unwrap()).unwrap();
        prop_assert_eq!(iso_type(&r).unwrap(), a.direct_sum(b).unwrap());
    }
}

#[test]
fn hall_number_examples() {
    assert_eq!(count_hall_number(&mp("1"), &mp("1"), &mp("2"), 2).unwrap(), 1);
    assert_eq!(count_hall_number(&mp("1"), &mp("1"), &mp("1,1"), 3).unwrap(), 4);
    assert_eq!(count_hall_number(&mp("1"), &mp("1"), &mp("3"), 3).unwrap(), 0);
    // simples have no proper nonzero submodules
    let s = mp("1;0");
    let z = MultiPartition::empty(2);
    assert_eq!(count_hall_number(&s, &z, &s, 2).unwrap(), 1);
    assert_eq!(count_hall_number(&z, &s, &s, 2).unwrap(), 1);
    assert_eq!(count_hall_number(&mp("0;1"), &z, &s, 2).unwrap(), 0);
}

#[test]
fn automorphism_examples() {
    assert_eq!(count_automorphisms(&mp("1"), 5).unwrap(), 4);
    assert_eq!(count_automorphisms(&mp("1,1"), 2).unwrap(), 6);
    assert_eq!(count_automorphisms(&mp("1;1"), 2).unwrap(), 1);
    assert!(matches!(count_automorphisms(&mp("6"), 2), Err(Error::BoundExceeded(_))));
}

#[test]
fn automorphisms_match_aut_poly() {
    for n in 1..=3 {
        let max = if n == 1 { 5 } else { 4 };
        for m in all_up_to(n, max) {
            for q in [2, 3] {
                let expect = m.aut_poly().eval(&Rat::from_integer(q.into()));
                assert_eq!(Rat::from_integer(count_automorphisms(&m, q).unwrap().into()), expect, "{m} q={q}");
            }
        }
    }
}

#[test]
fn hall_numbers_match_engine_small() {
    for n in 1..=2 {
        let e = HallEngine::shared(n);
        for (l, m, x) in hall_triples(n, 4) {
            let f = e.hall_polynomial(&l, &m, &x).unwrap();
            for q in [2, 3] {
                let c = count_hall_number(&l, &m, &x, q).unwrap();
                assert_eq!(f.eval(&Rat::from_integer(q.into())), Rat::from_integer(c.into()), "F^{x}_{l},{m} at {q}");
            }
        }
    }
}

#[test]
fn riedtmann_and_injections() {
    for n in 1..=2 {
        for (l, m, x) in hall_triples(n, 3) {
            for q in [2, 3] {
                let f = count_hall_number(&l, &m, &x, q).unwrap() as u128;
                let e = count_exact_sequences(&l, &m, &x, q).unwrap() as u128;
                let am = count_automorphisms(&l, q).unwrap();
                let an = count_automorphisms(&m, q).unwrap();
                assert_eq!(e, f * am * an, "{l} {m} {x} q={q}");
            }
        }
    }
    // sum over quotients of F^X_{M N} = |Inj(N, X)| / |Aut N|
    for x in all_up_to(2, 3) {
        for nn in all_up_to(2, 3) {
            let Some(dm) = x.dim_vector().checked_sub(&nn.dim_vector()) else { continue };
            let total: u64 = multipartitions_with_dim(&dm).iter().map(|m| count_hall_number(m, &nn, &x, 2).unwrap()).sum();
            let inj = count_injections(&nn, &x, 2).unwrap() as u128;
            assert_eq!(inj, total as u128 * count_automorphisms(&nn, 2).unwrap(), "{nn} in {x}");
        }
    }
}

#[test]
fn interpolation_examples() {
    let p = interpolate_hall_polynomial_n(&mp("1;0"), &mp("0;1"), &mp("1;1")).unwrap();
    assert!(p.is_one());
    let p = interpolate_hall_polynomial_n(&mp("1"), &mp("1"), &mp("1,1")).unwrap();
    assert_eq!(p, IntPoly::from_ints(&[1, 1]));
    assert!(interpolate_hall_polynomial_n(&mp("1"), &mp("1"), &mp("3")).unwrap().is_zero());
    let e = HallEngine::classical();
    for (l, m, x) in hall_triples(1, 4) {
        match interpolate_hall_polynomial_n(&l, &m, &x) {
            Ok(p) => assert_eq!(p, e.hall_polynomial(&l, &m, &x).unwrap()),
            Err(Error::BoundExceeded(_)) => assert!(degree_bound(&l, &m, &x).unwrap() + 2 > 6),
            Err(err) => panic!("{err}"),
        }
    }
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let c = InterpolationCache::open(dir.path()).unwrap();
    assert!(c.is_empty());
    let rep = cache_warm(&c, 2, 2).unwrap();
    assert!(rep.skipped.is_empty());
    assert_eq!(rep.computed, hall_triples(2, 2).len());
    let c2 = InterpolationCache::open(dir.path()).unwrap();
    assert_eq!(c2.len(), c.len());
    assert!(c2.get(&mp("1;0"), &mp("0;1"), &mp("1;1")).unwrap().is_one());
}
