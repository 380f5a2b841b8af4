use super::*;
use crate::families::glue::square_gluing;
use crate::families::split::{good_split_primes, rank_one_primes};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn roots(r: [i64; 3]) -> [BigRational; 3] {
    r.map(q)
}

#[test]
fn frey_classes() {
    assert_eq!(frey_class(5), FreyClass::RankZero);
    assert_eq!(frey_class(7), FreyClass::RankOne);
    assert_eq!(frey_class(13), FreyClass::Unclassified);
    assert_eq!(frey_class(17), FreyClass::RankZero);
    assert_eq!(frey_class(23), FreyClass::RankOne);
}

#[test]
fn split_family_at_23_cubed() {
    let fam = split_family(23u64.pow(3)).unwrap();
    assert_eq!(fam.len(), 16);
    assert_eq!(rank_one_primes(23), vec![7, 11, 19, 23]);
    assert!(fam.iter().all(|m| m.predicted_rank == Some(2)));
    assert_eq!(fam.iter().filter(|m| m.is_diagonal()).count(), 4);
    assert!(split_family(342).is_err());
    let m = &fam[1];
    assert_eq!((m.d, m.m), (7, 11));
    assert_eq!(m.height, BigInt::from(1331));
}

#[test]
fn split_members_have_matching_counts() {
    let m = SplitFamilyMember::new(7, 11);
    assert!(verify_split(&m, &[13]).unwrap());
    assert!(verify_split(&m, &good_split_primes(&m, 5)).unwrap());
    let diag = SplitFamilyMember::new(7, 7);
    assert!(verify_split(&diag, &good_split_primes(&diag, 5)).unwrap());
    assert_eq!(verify_split(&m, &[7]), Err(crate::Error::BadPrime(7)));
    assert_eq!(verify_split(&m, &[3]), Err(crate::Error::BadPrime(3)));
}

#[test]
fn glue_degenerate_and_coincident() {
    assert_eq!(glue(&roots([0, 1, -1]), &roots([0, 2, -2])), Err(crate::Error::GlueDegenerate));
    assert_eq!(glue(&roots([0, 1, 1]), &roots([0, 2, 3])), Err(crate::Error::CoincidentRoots));
}

#[test]
fn glued_curve_splits_locally() {
    let spec = glue(&roots([0, 1, -1]), &roots([0, 2, -3])).unwrap();
    assert!(spec.separable);
    assert!(spec.sextic[1].is_zero() && spec.sextic[3].is_zero() && spec.sextic[5].is_zero());
    for row in split_count_check(&spec.sextic, &spec.f(), &spec.g(), &[7, 11, 13]).unwrap() {
        assert!(row.holds, "{row:?}");
    }
}

#[test]
fn glue_twist_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut checked = 0;
    while checked < 100 {
        let mut draw = || -> [BigRational; 3] { std::array::from_fn(|_| q(rng.random_range(-20..=20))) };
        let (rf, rg) = (draw(), draw());
        let Ok(base) = glue(&rf, &rg) else { continue };
        let d = loop {
            let d = rng.random_range(-10i64..=10);
            if d != 0 {
                break q(d);
            }
        };
        let scaled = glue(&rf.clone().map(|r| r * &d), &rg.clone().map(|r| r * &d)).unwrap();
        let d21 = (0..21).fold(BigRational::one(), |acc, _| acc * &d);
        for (a, b) in scaled.sextic.iter().zip(&base.sextic) {
            assert_eq!(*a, b * &d21);
        }
        checked += 1;
    }
}

#[test]
fn congruent_number_sextic_squares_the_count() {
    let sextic: Vec<BigRational> = [6, 0, -9, 0, -9, 0, 6].map(q).to_vec();
    let e = Cubic::from_i64([0, -1, 0, 1]).unwrap();
    for row in split_count_check(&sextic, &e, &e, &[7, 11, 13]).unwrap() {
        assert!(row.holds, "{row:?}");
    }
    let square = square_gluing(&roots([0, 1, -1])).unwrap();
    let ratio = &square.sextic[0] / q(6);
    assert_eq!(square.sextic, [6, 0, -9, 0, -9, 0, 6].map(|c| q(c) * &ratio).to_vec());
    assert!(crate::algebra::arith::is_square(&ratio.to_integer()).is_some());
}

#[test]
fn rank_doubling_rows() {
    let rows = rank_doubling_check(&roots([0, 1, -1]), &[q(1), q(4), q(-5), q(7)], &[7, 11, 13]).unwrap();
    assert!(rows.iter().filter(|r| r.holds.is_some()).all(|r| r.holds == Some(true)));
    let skipped: Vec<_> = rows.iter().filter(|r| r.holds.is_none()).map(|r| (r.d.clone(), r.p)).collect();
    assert_eq!(skipped, vec![(q(7), 7)]);
    let plain: Vec<_> = rows.iter().filter(|r| r.d == q(1)).map(|r| r.jacobian).collect();
    let square: Vec<_> = rows.iter().filter(|r| r.d == q(4)).map(|r| r.jacobian).collect();
    assert_eq!(plain, square);
}

#[test]
fn twist_parametrization() {
    let (l1, l2) = (q(2), q(3));
    assert!(twist_family_d(&l1, &l2, &q(1)).unwrap().d.is_zero());
    let at0 = twist_family_d(&l1, &l2, &q(0)).unwrap().d;
    assert_eq!(at0, (&l1 - &l2) * (q(1) - &l2) * &l2);
    // (2-3)(4-1)(1-3+4)(8-3) = -1 * 3 * 2 * 5
    assert_eq!(twist_family_d(&l1, &l2, &q(2)).unwrap().d, q(-30));
    assert!(twist_family_d(&l1, &l1, &q(2)).is_err());
}

#[test]
fn twist_witness_search() {
    let w = twist_witness(&q(2), &q(3), &q(2), 400).unwrap();
    assert_ne!(w.status, WitnessStatus::Degenerate);
    for (l, pt) in [(q(2), &w.f_point), (q(3), &w.g_point)] {
        if let Some(pt) = pt {
            let e = Cubic::from_roots(&[q(0), q(1), l]).quadratic_twist(&w.point.d);
            let m = Cubic::new(e.integral_monic().map(BigRational::from_integer)).unwrap();
            assert!(m.contains(pt));
            assert!(m.is_non_torsion(pt));
        }
    }
    assert_eq!(twist_witness(&q(2), &q(3), &q(1), 10).unwrap().status, WitnessStatus::Degenerate);
}

#[test]
fn freeman_satoh_examples() {
    let fs = freeman_satoh_e(FsForm::Deg5, &q(0), &q(1)).unwrap();
    assert_eq!(fs.c, q(0));
    assert_eq!(fs.e.coeffs, [-2, -10, 10, 2].map(q).to_vec());
    assert_eq!(fs.normalized, [-8, -20, 10, 1].map(BigInt::from).to_vec());
    let a = BigRational::new(4.into(), 25.into());
    let b = BigRational::new(64.into(), 15625.into());
    let fs6 = freeman_satoh_e(FsForm::Deg6, &a, &b).unwrap();
    assert_eq!(fs6.c, BigRational::new(5.into(), 2.into()));
    assert_eq!(fs6.m, 3);
    assert!(fs6.e.j_invariant().is_zero());
    assert_eq!(freeman_satoh_e(FsForm::Deg6, &a, &q(0)), Err(crate::Error::Zero));
    assert!(matches!(freeman_satoh_e(FsForm::Deg5, &q(1), &q(2)), Err(crate::Error::ExtensionOnly(_))));
}

#[test]
fn freeman_satoh_quintic_splits_where_i_is_rational() {
    let fs = freeman_satoh_e(FsForm::Deg5, &q(0), &q(1)).unwrap();
    let primes = [13u64, 17, 29, 37, 41];
    for row in split_count_check(&fs.curve_coeffs(), &fs.e, &fs.e, &primes).unwrap() {
        assert!(row.holds, "{row:?}");
    }
}

#[test]
fn rational_roots_of_cubics() {
    let c = Cubic::from_roots(&[q(0), BigRational::new(1.into(), 2.into()), q(-3)]);
    let mut r = c.rational_roots().unwrap().to_vec();
    r.sort();
    assert_eq!(r, vec![q(-3), q(0), BigRational::new(1.into(), 2.into())]);
    assert!(Cubic::from_i64([1, 0, 0, 1]).unwrap().rational_roots().is_err());
}
