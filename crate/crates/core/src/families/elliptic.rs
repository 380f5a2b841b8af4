//! Elliptic curves `y^2 = c3 x^3 + c2 x^2 + c1 x + c0` over Q: point counts
//! mod p and the group law for monic models.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::arith::factor_u128;
use crate::algebra::field::{Field, PrimeField, Rationals};
use crate::algebra::poly::PolyRing;
use crate::algebra::resultant::discriminant;
use crate::error::{Error, Result};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cubic {
    /// `c0..c3`.
    #[serde(with = "crate::io::rational_vec")]
    pub coeffs: Vec<BigRational>,
}

impl Cubic {
    pub fn new(coeffs: [BigRational; 4]) -> Result<Self> {
        if coeffs[3].is_zero() {
            return Err(Error::DegreeTooSmall);
        }
        Ok(Cubic { coeffs: coeffs.to_vec() })
    }

    pub fn from_i64(coeffs: [i64; 4]) -> Result<Self> {
        Self::new(coeffs.map(q))
    }

    /// `(x - r0)(x - r1)(x - r2)`.
    pub fn from_roots(roots: &[BigRational; 3]) -> Self {
        let [a, b, c] = roots;
        Cubic {
            coeffs: vec![-(a * b * c), a * b + b * c + c * a, -(a + b + c), BigRational::one()],
        }
    }

    pub fn coeff(&self, i: usize) -> &BigRational {
        &self.coeffs[i]
    }

    pub fn discriminant(&self) -> BigRational {
        let ring = PolyRing::new(Rationals);
        discriminant(&ring, &ring.from_coeffs(self.coeffs.clone())).expect("cubic has degree 3")
    }

    pub fn is_nonsingular(&self) -> bool {
        !self.discriminant().is_zero()
    }

    /// The twist `d y^2 = f(x)`, written as `Y^2 = d^3 f(X / d)`.
    pub fn quadratic_twist(&self, d: &BigRational) -> Self {
        let c = &self.coeffs;
        Cubic { coeffs: vec![&c[0] * d * d * d, &c[1] * d * d, &c[2] * d, c[3].clone()] }
    }

    /// Isomorphic monic model `X^3 + b X^2 + a c X + a^2 d`, with `X = a x`, `Y = a y`.
    pub fn monic(&self) -> Self {
        let a = &self.coeffs[3];
        Cubic {
            coeffs: vec![&self.coeffs[0] * a * a, &self.coeffs[1] * a, self.coeffs[2].clone(), BigRational::one()],
        }
    }

    /// Monic model with integer coefficients, via `X -> u^2 X` for the least `u`.
    pub fn integral_monic(&self) -> [BigInt; 4] {
        let m = self.monic();
        let mut u = BigInt::one();
        // the smallest u with u^(2k) c_(3-k) integral for every k
        loop {
            let ok = (1..=3).all(|k| {
                let scaled = &m.coeffs[3 - k] * BigRational::from_integer(num_traits::pow(u.clone(), 2 * k));
                scaled.is_integer()
            });
            if ok {
                break;
            }
            u += 1;
        }
        std::array::from_fn(|i| {
            let k = 3 - i;
            (&m.coeffs[i] * BigRational::from_integer(num_traits::pow(u.clone(), 2 * k))).to_integer()
        })
    }

    pub fn j_invariant(&self) -> BigRational {
        let m = self.monic();
        let (a2, a4, a6) = (&m.coeffs[2], &m.coeffs[1], &m.coeffs[0]);
        let b2 = q(4) * a2;
        let b4 = q(2) * a4;
        let b6 = q(4) * a6;
        let b8 = q(4) * a2 * a6 - a4 * a4;
        let c4 = &b2 * &b2 - q(24) * &b4;
        let disc = -(&b2 * &b2 * &b8) - q(8) * &b4 * &b4 * &b4 - q(27) * &b6 * &b6 + q(9) * &b2 * &b4 * &b6;
        &c4 * &c4 * &c4 / disc
    }

    /// `#E(F_p)` including the point at infinity.
    pub fn count_mod(&self, p: u64) -> Result<u64> {
        if p == 2 {
            return Err(Error::BadPrime(p));
        }
        let fp = PrimeField::new(p)?;
        let reduced: Option<Vec<u64>> = self.coeffs.iter().map(|c| fp.from_rational(c)).collect();
        let c = reduced.ok_or(Error::BadPrime(p))?;
        if c[3] == 0 {
            return Err(Error::BadPrime(p));
        }
        let ring = PolyRing::new(fp);
        let poly = ring.from_coeffs(c);
        if discriminant(&ring, &poly)? == 0 {
            return Err(Error::BadPrime(p));
        }
        let affine: i64 = (0..p).map(|x| 1 + fp.legendre(ring.eval(&poly, &x)) as i64).sum();
        Ok((affine + 1) as u64)
    }

    /// Rational roots of the cubic, when it splits completely over Q.
    pub fn rational_roots(&self) -> Result<[BigRational; 3]> {
        let m = self.monic();
        let l = m.coeffs.iter().fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
        let lq = BigRational::from_integer(l);
        // the roots of L^3 m(x / L) are integers
        let ring = PolyRing::new(Rationals);
        let mut rest = ring.from_coeffs((0..4).map(|i| &m.coeffs[i] * pow_q(&lq, 3 - i)).collect());
        let mut roots = Vec::new();
        while rest.degree().unwrap_or(0) > 0 {
            let c0 = rest.coeff(0).cloned().unwrap_or_else(BigRational::zero).to_integer();
            let root = divisors(&c0)?.into_iter().find(|r| ring.eval(&rest, r).is_zero());
            let Some(r) = root else { break };
            rest = ring.div_exact(&rest, &ring.linear_root(&r)).expect("root divides");
            roots.push(r / &lq);
        }
        roots.try_into().map_err(|_| Error::Precondition("cubic does not split over Q".into()))
    }
}

fn pow_q(a: &BigRational, k: usize) -> BigRational {
    (0..k).fold(BigRational::one(), |acc, _| acc * a)
}

/// `0` and the signed divisors of `n`.
fn divisors(n: &BigInt) -> Result<Vec<BigRational>> {
    let mut out = vec![q(0)];
    if n.is_zero() {
        return Ok(out);
    }
    let too_large = || Error::Precondition(format!("cannot factor {n}"));
    let mag: u128 = n.magnitude().try_into().map_err(|_| too_large())?;
    let factors = factor_u128(mag, 10_000_000).ok_or_else(too_large)?;
    let mut divs = vec![1u128];
    for (pr, e) in factors {
        let mut next = Vec::new();
        for d in &divs {
            let mut pk = 1u128;
            for _ in 0..=e {
                next.push(d * pk);
                pk *= pr;
            }
        }
        divs = next;
    }
    for d in divs {
        let d = BigRational::from_integer(BigInt::from(d));
        out.push(-d.clone());
        out.push(d);
    }
    Ok(out)
}

/// Affine point on a monic cubic model, or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EllipticPoint {
    Infinity,
    Affine {
        #[serde(with = "crate::io::rational")]
        x: BigRational,
        #[serde(with = "crate::io::rational")]
        y: BigRational,
    },
}

impl Cubic {
    fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn contains(&self, pt: &EllipticPoint) -> bool {
        match pt {
            EllipticPoint::Infinity => true,
            EllipticPoint::Affine { x, y } => y * y == self.eval(x),
        }
    }

    /// Chord-and-tangent sum; the model must be monic.
    pub fn add(&self, a: &EllipticPoint, b: &EllipticPoint) -> EllipticPoint {
        assert!(self.coeffs[3].is_one(), "group law needs a monic model");
        let (x1, y1, x2, y2) = match (a, b) {
            (EllipticPoint::Infinity, _) => return b.clone(),
            (_, EllipticPoint::Infinity) => return a.clone(),
            (EllipticPoint::Affine { x: x1, y: y1 }, EllipticPoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let a2 = &self.coeffs[2];
        let a4 = &self.coeffs[1];
        let slope = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return EllipticPoint::Infinity;
            }
            (q(3) * x1 * x1 + q(2) * a2 * x1 + a4) / (q(2) * y1)
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let x3 = &slope * &slope - a2 - x1 - x2;
        let y3 = -(y1 + &slope * (&x3 - x1));
        EllipticPoint::Affine { x: x3, y: y3 }
    }

    pub fn mul(&self, k: u32, pt: &EllipticPoint) -> EllipticPoint {
        let mut acc = EllipticPoint::Infinity;
        for _ in 0..k {
            acc = self.add(&acc, pt);
        }
        acc
    }

    /// Non-torsion exactly when no multiple up to 12 vanishes, the largest
    /// torsion order over Q being 12.
    pub fn is_non_torsion(&self, pt: &EllipticPoint) -> bool {
        let mut acc = EllipticPoint::Infinity;
        for _ in 1..=12 {
            acc = self.add(&acc, pt);
            if acc == EllipticPoint::Infinity {
                return false;
            }
        }
        true
    }
}
