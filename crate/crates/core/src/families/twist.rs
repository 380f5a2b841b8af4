//! Twists `d(u)` along which both Legendre curves `x(x-1)(x-l1)` and
//! `x(x-1)(x-l2)` gain a point, with a naive search for witnesses.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::arith::is_square;
use crate::error::{Error, Result};
use crate::families::elliptic::{Cubic, EllipticPoint};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistFamilyPoint {
    #[serde(with = "crate::io::rational")]
    pub lambda1: BigRational,
    #[serde(with = "crate::io::rational")]
    pub lambda2: BigRational,
    #[serde(with = "crate::io::rational")]
    pub u: BigRational,
    #[serde(with = "crate::io::rational")]
    pub d: BigRational,
}

/// `(l1 - l2)(u^2 - 1)(1 - l2 + (l1 - 1) u^2)(l1 u^2 - l2)`.
pub fn twist_family_d(l1: &BigRational, l2: &BigRational, u: &BigRational) -> Result<TwistFamilyPoint> {
    if l1 == l2 {
        return Err(Error::Precondition("equal Legendre parameters give the zero family".into()));
    }
    let one = BigRational::one();
    let u2 = u * u;
    let d = (l1 - l2) * (&u2 - &one) * (&one - l2 + (l1 - &one) * &u2) * (l1 * &u2 - l2);
    Ok(TwistFamilyPoint { lambda1: l1.clone(), lambda2: l2.clone(), u: u.clone(), d })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessStatus {
    /// Both twisted curves have a point of infinite order.
    Verified,
    /// The search found no non-torsion point on at least one of them.
    Unverified,
    /// `d(u) = 0`.
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistWitness {
    pub point: TwistFamilyPoint,
    pub f_point: Option<EllipticPoint>,
    pub g_point: Option<EllipticPoint>,
    pub status: WitnessStatus,
}

fn legendre(l: &BigRational) -> Cubic {
    Cubic::from_roots(&[BigRational::zero(), BigRational::one(), l.clone()])
}

/// A non-torsion point on the monic cubic `e` with `x = a / b^2`,
/// `|a| <= bound`, `b^2 <= bound`, when `e` has integer coefficients.
pub fn search_point(e: &Cubic, bound: u64) -> Option<EllipticPoint> {
    let ints: Option<Vec<BigInt>> = e.coeffs.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect();
    let c = ints?;
    let b_max = (bound as f64).sqrt() as i64;
    for b in 1..=b_max {
        let b2 = BigInt::from(b * b);
        for a in -(bound as i64)..=(bound as i64) {
            if num_integer::Integer::gcd(&a, &b) != 1 {
                continue;
            }
            let a = BigInt::from(a);
            // b^6 f(a / b^2) = a^3 + c2 a^2 b^2 + c1 a b^4 + c0 b^6
            let v = &a * &a * &a + &c[2] * &a * &a * &b2 + &c[1] * &a * &b2 * &b2 + &c[0] * &b2 * &b2 * &b2;
            if v.is_negative() || v.is_zero() {
                continue;
            }
            if let Some(r) = is_square(&v) {
                let x = BigRational::new(a.clone(), b2.clone());
                let y = BigRational::new(r, &b2 * BigInt::from(b));
                let pt = EllipticPoint::Affine { x, y };
                if e.is_non_torsion(&pt) {
                    return Some(pt);
                }
            }
        }
    }
    None
}

/// Evaluate `d(u)` and look for non-torsion points on both twists, written
/// with integral roots `0, D, D l` scaled by the square of a common denominator.
pub fn twist_witness(l1: &BigRational, l2: &BigRational, u: &BigRational, bound: u64) -> Result<TwistWitness> {
    let point = twist_family_d(l1, l2, u)?;
    if point.d.is_zero() {
        return Ok(TwistWitness { point, f_point: None, g_point: None, status: WitnessStatus::Degenerate });
    }
    let find = |l: &BigRational| {
        let twisted = legendre(l).quadratic_twist(&point.d);
        search_point(&integral_model(&twisted), bound)
    };
    let f_point = find(l1);
    let g_point = find(l2);
    let status = if f_point.is_some() && g_point.is_some() { WitnessStatus::Verified } else { WitnessStatus::Unverified };
    Ok(TwistWitness { point, f_point, g_point, status })
}

/// Isomorphic monic model with integer coefficients.
fn integral_model(e: &Cubic) -> Cubic {
    let c = e.integral_monic();
    Cubic::new(c.map(BigRational::from_integer)).expect("monic")
}
