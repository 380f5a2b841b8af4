//! Integer predicates: squares, squarefreeness, prime sieves.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::{Integer as _, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 1_000_000;

/// Nonnegative square root of `n` when `n` is a perfect square.
pub fn is_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn is_square_i128(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = (n as u128).sqrt() as i128;
    (r * r == n).then_some(r)
}

/// All primes `<= limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

fn trial_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(TRIAL_LIMIT))
}

/// Whether no prime square divides `n`.
///
/// Trial division covers primes up to 10^6. A remaining cofactor below 10^18
/// has at most two prime factors, so only a perfect square can spoil it;
/// beyond that only perfect powers are detected and anything else is
/// reported as unknown.
pub fn is_squarefree(n: &BigInt) -> Result<bool> {
    if n.is_zero() {
        return Err(Error::Zero);
    }
    if let Some(small) = n.abs().to_u64() {
        return is_squarefree_u64(small);
    }
    let mut m = n.abs();
    for &p in trial_primes() {
        let bp = BigInt::from(p);
        if &bp * &bp > m {
            return Ok(true);
        }
        let (q, r) = m.div_rem(&bp);
        if r.is_zero() {
            if (&q % &bp).is_zero() {
                return Ok(false);
            }
            m = q;
        }
    }
    classify_cofactor(&m, n)
}

fn classify_cofactor(m: &BigInt, original: &BigInt) -> Result<bool> {
    if m.is_one() {
        return Ok(true);
    }
    let limit = BigInt::from(TRIAL_LIMIT);
    if *m < &limit * &limit {
        return Ok(true);
    }
    if is_square(m).is_some() {
        return Ok(false);
    }
    if *m < &limit * &limit * &limit {
        return Ok(true);
    }
    let bits = m.bits() as u32;
    for k in 3..=bits / 20 {
        let r = m.nth_root(k);
        if r.pow(k) == *m {
            return Ok(false);
        }
    }
    Err(Error::SquarefreeUnknown(original.to_string()))
}

pub fn is_squarefree_u64(n: u64) -> Result<bool> {
    if n == 0 {
        return Err(Error::Zero);
    }
    let mut m = n;
    for &p in trial_primes() {
        if p * p > m {
            return Ok(true);
        }
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return Ok(false);
            }
        }
    }
    classify_cofactor(&BigInt::from(m), &BigInt::from(n))
}

/// Prime factorization by trial division, `None` past the guard.
pub fn factor_u128(mut n: u128, guard: u64) -> Option<Vec<(u128, u32)>> {
    let mut out = Vec::new();
    let mut p: u128 = 2;
    while p * p <= n {
        if p > guard as u128 {
            return None;
        }
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    Some(out)
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn squares() {
        assert_eq!(is_square(&big(9)), Some(big(3)));
        assert_eq!(is_square(&big(8)), None);
        assert_eq!(is_square(&big(0)), Some(big(0)));
        assert_eq!(is_square(&big(-4)), None);
        assert_eq!(is_square_i128(1 << 100), Some(1 << 50));
    }

    #[test]
    fn squarefree_small() {
        assert!(is_squarefree(&big(30)).unwrap());
        assert!(!is_squarefree(&big(12)).unwrap());
        assert!(is_squarefree(&big(17)).unwrap());
        assert!(is_squarefree(&big(-30)).unwrap());
        assert!(is_squarefree(&big(1)).unwrap());
        assert_eq!(is_squarefree(&big(0)), Err(Error::Zero));
    }

    #[test]
    fn squarefree_cofactors() {
        let p = BigInt::from(1_000_003u64);
        let q = BigInt::from(1_000_033u64);
        assert!(!is_squarefree(&(&p * &p)).unwrap());
        assert!(is_squarefree(&(&p * &q)).unwrap());
        assert!(!is_squarefree(&(&p * &p * &p * 6)).unwrap());
        assert!(is_squarefree(&(&p * &q * BigInt::from(30))).unwrap());
        // p^2 q with all factors beyond the trial bound cannot be decided.
        let r = BigInt::from(1_000_037u64);
        assert!(matches!(
            is_squarefree(&(&p * &p * &r)),
            Err(Error::SquarefreeUnknown(_))
        ));
    }

    #[test]
    fn squarefree_count_to_ten() {
        let c = (1..=10u64).filter(|&a| is_squarefree_u64(a).unwrap()).count();
        assert_eq!(c, 7);
    }

    #[test]
    fn sieve_matches_trial_division() {
        let naive = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
        let primes = primes_up_to(10_000);
        let want: Vec<u64> = (0..=10_000).filter(|&n| naive(n)).collect();
        assert_eq!(primes, want);
        for x in 2..200 {
            assert_eq!(primes_up_to(x), want.iter().copied().filter(|&p| p <= x).collect::<Vec<_>>());
        }
        assert_eq!(primes_up_to(10), vec![2, 3, 5, 7]);
        assert_eq!(primes_up_to(2), vec![2]);
        assert_eq!(primes_up_to(30).len(), 10);
    }

    #[test]
    fn factoring() {
        assert_eq!(factor_u128(360, 100), Some(vec![(2, 3), (3, 2), (5, 1)]));
        assert_eq!(factor_u128(1, 100), Some(vec![]));
        assert_eq!(factor_u128(1_000_003 * 1_000_033, 1000), None);
    }
}
