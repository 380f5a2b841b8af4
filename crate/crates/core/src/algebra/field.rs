//! Coefficient fields.
//!
//! Fields are passed around as small context values (`Rationals`,
//! `PrimeField`, `QuadraticExtension`) that own the arithmetic; elements are
//! plain data. This keeps prime-field elements down to a single `u64` while
//! still letting polynomial and Jacobian code be written once for every field.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::arith::is_square;
use crate::error::Error;

/// Arithmetic context for a field of characteristic zero or an odd prime.
pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_integer(&self, n: &BigInt) -> Self::Elem;
    /// Image of a rational number; `None` when the denominator is not invertible.
    fn from_rational(&self, r: &BigRational) -> Option<Self::Elem>;
    /// Zero for the rationals.
    fn characteristic(&self) -> u64;
    /// Some square root, if one exists in this field.
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_integer(&BigInt::from(n))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn pow(&self, a: &Self::Elem, mut e: u128) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn is_square(&self, a: &Self::Elem) -> bool {
        self.sqrt(a).is_some()
    }
}

/// The field of rational numbers, with `BigRational` elements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_integer(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn from_rational(&self, r: &BigRational) -> Option<BigRational> {
        Some(r.clone())
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn sqrt(&self, a: &BigRational) -> Option<BigRational> {
        // BigRational is always stored reduced with a positive denominator.
        let n = is_square(a.numer())?;
        let d = is_square(a.denom())?;
        Some(BigRational::new(n, d))
    }
}

/// Prime field `F_p` for a prime `p < 2^32`, elements are canonical residues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, Error> {
        if p >= 1 << 32 {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    /// Legendre symbol of `a`: 0, 1 or -1.
    pub fn legendre(&self, a: u64) -> i8 {
        if a == 0 {
            return 0;
        }
        if self.p == 2 {
            return 1;
        }
        if self.pow(&a, ((self.p - 1) / 2) as u128) == 1 {
            1
        } else {
            -1
        }
    }

    /// Smallest quadratic non-residue, used to build `F_{p^2}`.
    pub fn smallest_nonresidue(&self) -> Option<u64> {
        (2..self.p).find(|&a| self.legendre(a) == -1)
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        let e = (*a as i64).extended_gcd(&(self.p as i64));
        debug_assert_eq!(e.gcd, 1);
        Some(e.x.rem_euclid(self.p as i64) as u64)
    }
    fn from_integer(&self, n: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        let r = n.mod_floor(&m);
        r.to_u64().unwrap_or(0)
    }
    fn from_rational(&self, r: &BigRational) -> Option<u64> {
        let num = self.from_integer(r.numer());
        let den = self.from_integer(r.denom());
        self.div(&num, &den)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn sqrt(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return Some(0);
        }
        if self.p == 2 {
            return Some(*a);
        }
        if self.legendre(*a) != 1 {
            return None;
        }
        let z = self.smallest_nonresidue()?;
        Some(tonelli_shanks(self, a, (self.p as u128) - 1, &z))
    }
}

/// `F_{p^2} = F_p[t]/(t^2 - r)` for a fixed non-residue `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticExtension {
    base: PrimeField,
    nonresidue: u64,
    nonsquare: (u64, u64),
}

impl QuadraticExtension {
    pub fn new(base: PrimeField) -> Result<Self, Error> {
        let nonresidue = base
            .smallest_nonresidue()
            .ok_or(Error::NoNonResidue(base.modulus()))?;
        let mut ext = Self {
            base,
            nonresidue,
            nonsquare: (0, 1),
        };
        ext.nonsquare = (0..base.modulus())
            .map(|a| (a, 1))
            .find(|e| base.legendre(ext.norm(e)) == -1)
            .ok_or(Error::NoNonResidue(base.modulus()))?;
        Ok(ext)
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    pub fn embed(&self, a: u64) -> (u64, u64) {
        (a, 0)
    }

    /// Field norm down to `F_p`.
    pub fn norm(&self, a: &(u64, u64)) -> u64 {
        let f = &self.base;
        let a0 = f.mul(&a.0, &a.0);
        let a1 = f.mul(&f.mul(&a.1, &a.1), &self.nonresidue);
        f.sub(&a0, &a1)
    }

    pub fn frobenius(&self, a: &(u64, u64)) -> (u64, u64) {
        (a.0, self.base.neg(&a.1))
    }

    /// Every element, in a fixed order.
    pub fn elements(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        let p = self.base.modulus();
        (0..p).flat_map(move |b| (0..p).map(move |a| (a, b)))
    }

    pub fn order(&self) -> u128 {
        let p = self.base.modulus() as u128;
        p * p
    }
}

impl Field for QuadraticExtension {
    type Elem = (u64, u64);

    fn zero(&self) -> (u64, u64) {
        (0, 0)
    }
    fn one(&self) -> (u64, u64) {
        (1, 0)
    }
    fn add(&self, a: &(u64, u64), b: &(u64, u64)) -> (u64, u64) {
        (self.base.add(&a.0, &b.0), self.base.add(&a.1, &b.1))
    }
    fn sub(&self, a: &(u64, u64), b: &(u64, u64)) -> (u64, u64) {
        (self.base.sub(&a.0, &b.0), self.base.sub(&a.1, &b.1))
    }
    fn mul(&self, a: &(u64, u64), b: &(u64, u64)) -> (u64, u64) {
        let f = &self.base;
        let re = f.add(
            &f.mul(&a.0, &b.0),
            &f.mul(&f.mul(&a.1, &b.1), &self.nonresidue),
        );
        let im = f.add(&f.mul(&a.0, &b.1), &f.mul(&a.1, &b.0));
        (re, im)
    }
    fn neg(&self, a: &(u64, u64)) -> (u64, u64) {
        (self.base.neg(&a.0), self.base.neg(&a.1))
    }
    fn inv(&self, a: &(u64, u64)) -> Option<(u64, u64)> {
        let n = self.norm(a);
        let ni = self.base.inv(&n)?;
        let c = self.frobenius(a);
        Some((self.base.mul(&c.0, &ni), self.base.mul(&c.1, &ni)))
    }
    fn from_integer(&self, n: &BigInt) -> (u64, u64) {
        (self.base.from_integer(n), 0)
    }
    fn from_rational(&self, r: &BigRational) -> Option<(u64, u64)> {
        self.base.from_rational(r).map(|a| (a, 0))
    }
    fn characteristic(&self) -> u64 {
        self.base.modulus()
    }
    fn sqrt(&self, a: &(u64, u64)) -> Option<(u64, u64)> {
        if self.is_zero(a) {
            return Some(self.zero());
        }
        // a is a square in F_{p^2} iff its norm is a square in F_p.
        if self.base.legendre(self.norm(a)) != 1 {
            return None;
        }
        Some(tonelli_shanks(self, a, self.order() - 1, &self.nonsquare))
    }
}

/// Tonelli–Shanks in a finite field whose multiplicative group has order
/// `group_order`; `a` must be a nonzero square and `z` a non-square.
fn tonelli_shanks<F: Field>(f: &F, a: &F::Elem, group_order: u128, z: &F::Elem) -> F::Elem {
    let mut q = group_order;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut m = s;
    let mut c = f.pow(z, q);
    let mut t = f.pow(a, q);
    let mut r = f.pow(a, q.div_ceil(2));
    while !f.is_one(&t) {
        let mut i = 0u32;
        let mut t2 = t.clone();
        while !f.is_one(&t2) {
            t2 = f.square(&t2);
            i += 1;
        }
        let mut b = c.clone();
        for _ in 0..(m - i - 1) {
            b = f.square(&b);
        }
        m = i;
        c = f.square(&b);
        t = f.mul(&t, &c);
        r = f.mul(&r, &b);
    }
    r
}

/// Deterministic Miller–Rabin; the first twelve prime bases are exact for `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Render a rational as `"p"` or `"p/q"`.
pub fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `"p"` or `"p/q"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

/// Bit length of the larger of numerator and denominator.
pub fn rational_bits(r: &BigRational) -> u64 {
    r.numer().bits().max(r.denom().bits())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_rejects_composites() {
        assert!(PrimeField::new(15).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(101).is_ok());
    }

    #[test]
    fn prime_field_inverse_and_sqrt() {
        let f = PrimeField::new(101).unwrap();
        for a in 1..101u64 {
            let ai = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &ai), 1);
            let sq = f.mul(&a, &a);
            let r = f.sqrt(&sq).unwrap();
            assert_eq!(f.mul(&r, &r), sq);
        }
        assert_eq!(f.legendre(2), -1);
        assert!(f.sqrt(&2).is_none());
    }

    #[test]
    fn quadratic_extension_is_a_field() {
        for p in [3u64, 5, 7, 13] {
            let f = QuadraticExtension::new(PrimeField::new(p).unwrap()).unwrap();
            let mut squares = 0;
            for a in f.elements() {
                if f.is_zero(&a) {
                    continue;
                }
                let ai = f.inv(&a).unwrap();
                assert_eq!(f.mul(&a, &ai), f.one());
                if let Some(r) = f.sqrt(&a) {
                    assert_eq!(f.mul(&r, &r), a);
                    squares += 1;
                }
            }
            assert_eq!(squares as u128, (f.order() - 1) / 2);
            // every element of F_p is a square in F_{p^2}
            for a in 1..p {
                assert!(f.sqrt(&f.embed(a)).is_some());
            }
        }
    }

    #[test]
    fn rational_sqrt_and_parse() {
        let q = Rationals;
        let r = parse_rational("9/4").unwrap();
        assert_eq!(q.sqrt(&r), Some(parse_rational("3/2").unwrap()));
        assert_eq!(q.sqrt(&parse_rational("2").unwrap()), None);
        assert_eq!(q.sqrt(&parse_rational("-4").unwrap()), None);
        assert_eq!(rational_to_string(&parse_rational("6/-4").unwrap()), "-3/2");
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0u64..5000 {
            let naive = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime_u64(n), naive, "n = {n}");
        }
        assert!(is_prime_u64(4_294_967_291));
        assert!(!is_prime_u64(4_294_967_297));
    }
}
