//! Curves `y^2 = d^3 x^6 + m^3`, whose Jacobian is isogenous to the product
//! of `y^2 = x^3 + d^3` and `y^2 = x^3 + m^3`.

use num_bigint::BigInt;
use num_integer::Roots;
use serde::{Deserialize, Serialize};

use crate::algebra::arith::primes_up_to;
use crate::error::{Error, Result};
use crate::families::elliptic::Cubic;
use crate::jacobian::{jacobian_order_mod, rational_poly};
use crate::models::WeierstrassModel;

/// Rank of `y^2 = x^3 + p^3` by congruence class, where known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreyClass {
    RankZero,
    RankOne,
    Unclassified,
}

impl FreyClass {
    pub fn rank(self) -> Option<u32> {
        match self {
            FreyClass::RankZero => Some(0),
            FreyClass::RankOne => Some(1),
            FreyClass::Unclassified => None,
        }
    }
}

/// Classification for a prime `p > 3`.
pub fn frey_class(p: u64) -> FreyClass {
    if p % 12 == 5 {
        FreyClass::RankZero
    } else if p % 4 == 3 {
        FreyClass::RankOne
    } else {
        FreyClass::Unclassified
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitFamilyMember {
    pub d: u64,
    pub m: u64,
    pub curve: WeierstrassModel,
    pub predicted_rank: Option<u32>,
    #[serde(with = "crate::io::decimal")]
    pub height: BigInt,
}

impl SplitFamilyMember {
    pub fn new(d: u64, m: u64) -> Self {
        let (d3, m3) = (BigInt::from(d).pow(3), BigInt::from(m).pow(3));
        let mut f: [BigInt; 7] = Default::default();
        f[0] = m3.clone();
        f[6] = d3.clone();
        let predicted_rank = match (frey_class(d).rank(), frey_class(m).rank()) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        SplitFamilyMember {
            d,
            m,
            curve: WeierstrassModel::new(f, [false; 4]),
            predicted_rank,
            height: d3.max(m3),
        }
    }

    pub fn is_diagonal(&self) -> bool {
        self.d == self.m
    }

    /// `y^2 = x^3 + d^3`.
    pub fn e_d(&self) -> Cubic {
        factor(self.d)
    }

    /// `y^2 = x^3 + m^3`.
    pub fn e_m(&self) -> Cubic {
        factor(self.m)
    }
}

fn factor(p: u64) -> Cubic {
    Cubic::from_i64([(p as i64).pow(3), 0, 0, 1]).expect("monic")
}

/// Primes `p` with `5 <= p <= bound` and `p = 3 mod 4`.
pub fn rank_one_primes(bound: u64) -> Vec<u64> {
    primes_up_to(bound).into_iter().filter(|&p| p > 3 && p % 4 == 3).collect()
}

/// Every ordered pair `(d, m)` of primes `p = 3 mod 4`, `p > 3`, with
/// `max(d^3, m^3) <= x`. Pairs with `d = m` are included.
pub fn split_family(x: u64) -> Result<Vec<SplitFamilyMember>> {
    if x < 343 {
        return Err(Error::Precondition(format!("X = {x} is below 343")));
    }
    let primes = rank_one_primes(x.cbrt());
    Ok(primes
        .iter()
        .flat_map(|&d| primes.iter().map(move |&m| SplitFamilyMember::new(d, m)))
        .collect())
}

/// `#J(F_p) = #E_d(F_p) #E_m(F_p)` at every prime.
pub fn verify_split(member: &SplitFamilyMember, primes: &[u64]) -> Result<bool> {
    let g: Vec<BigInt> = member.curve.f.to_vec();
    let poly = rational_poly(&g);
    for &p in primes {
        if p == 2 || (6 * member.d * member.m).is_multiple_of(p) {
            return Err(Error::BadPrime(p));
        }
        let lhs = jacobian_order_mod(&poly, p)?;
        let rhs = member.e_d().count_mod(p)? as u128 * member.e_m().count_mod(p)? as u128;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The first `count` primes not dividing `6 d m`.
pub fn good_split_primes(member: &SplitFamilyMember, count: usize) -> Vec<u64> {
    primes_up_to(1000)
        .into_iter()
        .filter(|&p| p > 3 && member.d != p && member.m != p)
        .take(count)
        .collect()
}
