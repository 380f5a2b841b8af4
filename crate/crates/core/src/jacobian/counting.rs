//! Point counts over `F_p` and `F_{p^2}`, the genus-2 group order formula,
//! and the good-reduction test.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::field::{is_prime_u64, Field, PrimeField, QuadraticExtension};
use crate::algebra::poly::{Poly, PolyRing};
use crate::algebra::resultant::discriminant;
use crate::error::{Error, Result};

/// Environment variable overriding the prime guard used by group orders.
pub const PRIME_GUARD_ENV: &str = "G2RANK_GUARD_PRIME_MAX";
const DEFAULT_PRIME_GUARD: u64 = 1000;
const FIELD_SIZE_GUARD: u128 = 1_000_000;

pub fn prime_guard() -> u64 {
    std::env::var(PRIME_GUARD_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&p| p > 0)
        .unwrap_or(DEFAULT_PRIME_GUARD)
}

/// `p` is odd, prime, keeps the degree of `g`, divides no denominator and
/// does not divide the discriminant.
pub fn good_prime_check(g: &Poly<BigRational>, p: u64) -> Result<()> {
    if p == 2 || !is_prime_u64(p) {
        return Err(Error::BadPrime(p));
    }
    let bp = BigInt::from(p);
    if g.coeffs().iter().any(|c| (c.denom() % &bp) == BigInt::from(0)) {
        return Err(Error::BadPrime(p));
    }
    let fp = PrimeField::new(p)?;
    let ring = PolyRing::new(fp);
    let gp = ring.from_coeffs(g.coeffs().iter().map(|c| fp.from_rational(c).unwrap()).collect());
    if gp.degree() != g.degree() {
        return Err(Error::BadPrime(p));
    }
    match discriminant(&ring, &gp) {
        Ok(d) if d != 0 => Ok(()),
        _ => Err(Error::BadPrime(p)),
    }
}

fn check_curve(g: &Poly<u64>, fp: PrimeField, k: u32) -> Result<()> {
    let p = fp.modulus();
    if p == 2 {
        return Err(Error::BadPrime(p));
    }
    if (p as u128).pow(k) > FIELD_SIZE_GUARD {
        return Err(Error::PrimeGuard { p, guard: FIELD_SIZE_GUARD as u64 });
    }
    if !matches!(g.degree(), Some(5) | Some(6)) {
        return Err(Error::BadPrime(p));
    }
    let ring = PolyRing::new(fp);
    if discriminant(&ring, g)? == 0 {
        return Err(Error::BadPrime(p));
    }
    Ok(())
}

/// `#C(F_{p^k})` for `Y^2 = g`, `k` in {1, 2}, points at infinity included.
pub fn count_points(g: &Poly<u64>, fp: PrimeField, k: u32) -> Result<u64> {
    check_curve(g, fp, k)?;
    let ring = PolyRing::new(fp);
    let lead = *g.leading().unwrap();
    match k {
        1 => {
            let affine: i64 = (0..fp.modulus())
                .map(|x| 1 + fp.legendre(ring.eval(g, &x)) as i64)
                .sum();
            let infinity = if g.degree() == Some(6) { 1 + fp.legendre(lead) as i64 } else { 1 };
            Ok((affine + infinity) as u64)
        }
        2 => {
            let ext = QuadraticExtension::new(fp)?;
            let ring2 = PolyRing::new(ext);
            let g2 = ring.map_into(&ring2, g, |c| ext.embed(*c));
            let affine: i64 = ext
                .elements()
                .map(|z| 1 + fp.legendre(ext.norm(&ring2.eval(&g2, &z))) as i64)
                .sum();
            // Every element of F_p is a square in F_{p^2}.
            let infinity = if g.degree() == Some(6) { 2 } else { 1 };
            Ok((affine + infinity) as u64)
        }
        _ => Err(Error::Precondition(format!("extension degree {k} not supported"))),
    }
}

/// Same count by listing every pair `(x, Y)`; quadratic in the field size.
pub fn count_points_naive(g: &Poly<u64>, fp: PrimeField, k: u32) -> Result<u64> {
    check_curve(g, fp, k)?;
    let lead = *g.leading().unwrap();
    match k {
        1 => {
            let ring = PolyRing::new(fp);
            let p = fp.modulus();
            let mut n = 0u64;
            for x in 0..p {
                let gx = ring.eval(g, &x);
                n += (0..p).filter(|y| fp.mul(y, y) == gx).count() as u64;
            }
            let infinity = match g.degree() {
                Some(6) => (0..p).filter(|s| fp.mul(s, s) == lead).count() as u64,
                _ => 1,
            };
            Ok(n + infinity)
        }
        2 => {
            let ext = QuadraticExtension::new(fp)?;
            let ring2 = PolyRing::new(ext);
            let g2 = ring2.from_coeffs(g.coeffs().iter().map(|c| ext.embed(*c)).collect());
            let mut n = 0u64;
            for x in ext.elements() {
                let gx = ring2.eval(&g2, &x);
                n += ext.elements().filter(|y| ext.mul(y, y) == gx).count() as u64;
            }
            let infinity = match g.degree() {
                Some(6) => ext.elements().filter(|s| ext.mul(s, s) == ext.embed(lead)).count() as u64,
                _ => 1,
            };
            Ok(n + infinity)
        }
        _ => Err(Error::Precondition(format!("extension degree {k} not supported"))),
    }
}

/// Integers in `[(sqrt p - 1)^4, (sqrt p + 1)^4]`.
pub fn weil_band(p: u64) -> (u128, u128) {
    // (sqrt p +- 1)^4 = p^2 + 6p + 1 +- sqrt(16 p (p+1)^2)
    let p = p as u128;
    let base = p * p + 6 * p + 1;
    let t = (16 * p * (p + 1) * (p + 1)).isqrt();
    (base - t, base + t)
}

/// `(N1^2 + N2)/2 - p`, rejected if outside the Weil band.
pub fn group_order_from_counts(n1: u64, n2: u64, p: u64) -> Result<u128> {
    let twice = (n1 as u128) * (n1 as u128) + n2 as u128;
    if !twice.is_multiple_of(2) || twice / 2 < p as u128 {
        return Err(Error::Invariant(format!("inconsistent point counts N1={n1}, N2={n2} at p={p}")));
    }
    let order = twice / 2 - p as u128;
    let (lo, hi) = weil_band(p);
    if order < lo || order > hi {
        return Err(Error::Invariant(format!("#J = {order} outside Weil band [{lo}, {hi}] at p={p}")));
    }
    Ok(order)
}

/// `#J(F_p)` for `Y^2 = g` with rational `g`, whether or not the points at
/// infinity are rational.
pub fn jacobian_order_mod(g: &Poly<BigRational>, p: u64) -> Result<u128> {
    good_prime_check(g, p)?;
    let guard = prime_guard();
    if p > guard {
        return Err(Error::PrimeGuard { p, guard });
    }
    let fp = PrimeField::new(p)?;
    let ring = PolyRing::new(fp);
    let gp = ring.from_coeffs(g.coeffs().iter().map(|c| fp.from_rational(c).unwrap()).collect());
    let n1 = count_points(&gp, fp, 1)?;
    let n2 = count_points(&gp, fp, 2)?;
    group_order_from_counts(n1, n2, p)
}
