mod support {
    pub mod oracle;
}

use g2rank_core::algebra::resultant::discriminant;
use g2rank_core::jacobian::{JacobianGroup, MumfordDivisor};
use g2rank_core::{Field, PolyRing, PrimeField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;
use support::oracle::Oracle;

fn random_curve(p: u64, rng: &mut ChaCha8Rng) -> JacobianGroup<PrimeField> {
    let f = PrimeField::new(p).unwrap();
    let ring = PolyRing::new(f);
    loop {
        let deg = if rng.random_bool(0.5) { 5 } else { 6 };
        let mut coeffs: Vec<u64> = (0..=deg).map(|_| rng.random_range(0..p)).collect();
        coeffs[deg] = rng.random_range(1..p);
        if deg == 6 && f.sqrt(&coeffs[6]).is_none() {
            continue;
        }
        let g = ring.from_coeffs(coeffs);
        if discriminant(&ring, &g).map(|d| d == 0).unwrap_or(true) {
            continue;
        }
        return JacobianGroup::new(f, g).unwrap();
    }
}

fn curve(p: u64, g: &[i64]) -> JacobianGroup<PrimeField> {
    let f = PrimeField::new(p).unwrap();
    let ring = PolyRing::new(f);
    JacobianGroup::new(f, ring.from_coeffs(g.iter().map(|&a| f.elem(a)).collect())).unwrap()
}

fn check_decoding(j: &JacobianGroup<PrimeField>, oracle: &Oracle) -> Vec<MumfordDivisor<u64>> {
    let elems = j.all_elements();
    assert_eq!(elems.len() as u128, j.order().unwrap());
    assert_eq!(elems.len() as u128, oracle.group_order());
    let decoded: HashSet<_> = elems.iter().map(|d| oracle.decode(d)).collect();
    assert_eq!(decoded.len(), elems.len(), "decoding is injective");
    let canonical_hits = decoded.iter().filter(|e| oracle.is_canonical(e)).count();
    assert_eq!(canonical_hits, 1, "only the identity lands in the canonical class");
    elems
}

#[test]
fn group_order_and_law_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for p in [3u64, 5, 7] {
        for _ in 0..10 {
            let j = random_curve(p, &mut rng);
            let oracle = Oracle::new(&j);
            let elems = check_decoding(&j, &oracle);
            for _ in 0..200 {
                let a = &elems[rng.random_range(0..elems.len())];
                let b = &elems[rng.random_range(0..elems.len())];
                let s = j.add(a, b);
                assert!(
                    oracle.sum_holds(&oracle.decode(a), &oracle.decode(b), &oracle.decode(&s)),
                    "p={p} g={:?} a={a:?} b={b:?} s={s:?}",
                    j.curve()
                );
                let other = &elems[rng.random_range(0..elems.len())];
                if *other != s {
                    assert!(!oracle.sum_holds(&oracle.decode(a), &oracle.decode(b), &oracle.decode(other)));
                }
            }
        }
    }
}

#[test]
fn full_addition_tables_for_quintic() {
    for (p, g) in [(3u64, vec![1, 0, 0, 0, 0, 1]), (7, vec![1, 0, 0, 0, 0, 1]), (5, vec![1, 1, 0, 0, 0, 1])] {
        let j = curve(p, &g);
        let oracle = Oracle::new(&j);
        let elems = check_decoding(&j, &oracle);
        let decoded: Vec<_> = elems.iter().map(|d| oracle.decode(d)).collect();
        for (a, da) in elems.iter().zip(&decoded) {
            for (b, db) in elems.iter().zip(&decoded) {
                assert!(oracle.sum_holds(da, db, &oracle.decode(&j.add(a, b))));
            }
        }
    }
}

#[test]
fn sextic_with_split_infinity_full_table() {
    let j = curve(5, &[2, 1, 0, 0, 1, 0, 1]);
    let oracle = Oracle::new(&j);
    let elems = check_decoding(&j, &oracle);
    for a in &elems {
        for b in &elems {
            let s = j.add(a, b);
            assert!(oracle.sum_holds(&oracle.decode(a), &oracle.decode(b), &oracle.decode(&s)));
        }
    }
}
