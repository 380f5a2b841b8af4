//! Resultants and discriminants.
//!
//! The resultant follows the subresultant pseudo-remainder sequence, so for
//! integer inputs over the rationals every intermediate value is integral and
//! no fraction ever needs reducing.

use crate::algebra::field::Field;
use crate::algebra::poly::{Poly, PolyRing};
use crate::error::{Error, Result};

fn pow_i<F: Field>(f: &F, a: &F::Elem, e: i64) -> F::Elem {
    if e >= 0 {
        f.pow(a, e as u128)
    } else {
        let inv = f.inv(a).expect("nonzero base for negative power");
        f.pow(&inv, (-e) as u128)
    }
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
fn prem<F: Field>(ring: &PolyRing<F>, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    let f = ring.field();
    let delta = a.deg_i() - b.deg_i();
    let lead = b.leading().expect("nonzero divisor");
    let scaled = ring.scale(a, &f.pow(lead, (delta + 1) as u128));
    ring.rem(&scaled, b)
}

/// `Res(a, b)` for polynomials of exact degrees `deg a`, `deg b`.
pub fn resultant<F: Field>(ring: &PolyRing<F>, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> F::Elem {
    let f = ring.field();
    if a.is_zero() || b.is_zero() {
        return f.zero();
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut negate = false;
    if a.deg_i() < b.deg_i() {
        if a.deg_i() % 2 == 1 && b.deg_i() % 2 == 1 {
            negate = true;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if b.deg_i() == 0 {
        let r = f.pow(b.leading().unwrap(), a.deg_i() as u128);
        return if negate { f.neg(&r) } else { r };
    }
    let mut g = f.one();
    let mut h = f.one();
    loop {
        let (da, db) = (a.deg_i(), b.deg_i());
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            negate = !negate;
        }
        let r = prem(ring, &a, &b);
        let denom = f.mul(&g, &pow_i(f, &h, delta));
        let denom_inv = f.inv(&denom).expect("subresultant divisor is nonzero");
        a = b;
        b = ring.scale(&r, &denom_inv);
        g = a.leading().unwrap().clone();
        h = f.mul(&pow_i(f, &h, 1 - delta), &pow_i(f, &g, delta));
        match b.degree() {
            None => return f.zero(),
            Some(0) => {
                let da = a.deg_i();
                let lb = b.leading().unwrap();
                let out = f.mul(&pow_i(f, &h, 1 - da), &pow_i(f, lb, da));
                return if negate { f.neg(&out) } else { out };
            }
            Some(_) => {}
        }
    }
}

/// `disc(p) = (-1)^(n(n-1)/2) Res(p, p') / lc(p)`, with `p'` taken at its
/// formal degree `n - 1` so that the formula stays valid when the derivative
/// loses degree in positive characteristic.
pub fn discriminant<F: Field>(ring: &PolyRing<F>, p: &Poly<F::Elem>) -> Result<F::Elem> {
    let f = ring.field();
    let n = match p.degree() {
        Some(n) if n >= 1 => n as i64,
        _ => return Err(Error::DegreeTooSmall),
    };
    let lc = p.leading().unwrap();
    let dp = ring.derivative(p);
    if dp.is_zero() {
        return Ok(f.zero());
    }
    let drop = (n - 1) - dp.deg_i();
    let res = f.mul(&resultant(ring, p, &dp), &f.pow(lc, drop as u128));
    let mut d = f.div(&res, lc).expect("nonzero leading coefficient");
    if (n * (n - 1) / 2) % 2 == 1 {
        d = f.neg(&d);
    }
    Ok(d)
}

/// Discriminant of `p` regarded as a polynomial of formal degree `n >= deg p`.
///
/// Two missing leading coefficients make it vanish; one multiplies the
/// ordinary discriminant by the square of the new leading coefficient.
pub fn formal_discriminant<F: Field>(
    ring: &PolyRing<F>,
    p: &Poly<F::Elem>,
    n: usize,
) -> Result<F::Elem> {
    let f = ring.field();
    let d = p.degree().ok_or(Error::DegreeTooSmall)?;
    match n.checked_sub(d) {
        None => Err(Error::Precondition(format!("formal degree {n} below degree {d}"))),
        Some(0) => discriminant(ring, p),
        Some(1) => {
            let disc = discriminant(ring, p)?;
            Ok(f.mul(&disc, &f.square(p.leading().unwrap())))
        }
        Some(_) => Ok(f.zero()),
    }
}
