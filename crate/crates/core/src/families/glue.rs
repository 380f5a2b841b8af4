//! Genus-2 curves glued from two elliptic curves with full rational
//! 2-torsion, given by their roots.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::field::Rationals;
use crate::algebra::poly::PolyRing;
use crate::algebra::resultant::discriminant;
use crate::error::{Error, Result};
use crate::families::elliptic::Cubic;
use crate::jacobian::jacobian_order_mod;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueSpec {
    #[serde(with = "crate::io::rational_vec")]
    pub roots_f: Vec<BigRational>,
    #[serde(with = "crate::io::rational_vec")]
    pub roots_g: Vec<BigRational>,
    #[serde(with = "crate::io::rational")]
    pub a1: BigRational,
    #[serde(with = "crate::io::rational")]
    pub a2: BigRational,
    #[serde(with = "crate::io::rational")]
    pub b1: BigRational,
    #[serde(with = "crate::io::rational")]
    pub b2: BigRational,
    #[serde(with = "crate::io::rational")]
    pub big_a: BigRational,
    #[serde(with = "crate::io::rational")]
    pub big_b: BigRational,
    /// Coefficients of `x^0..x^6`.
    #[serde(with = "crate::io::rational_vec")]
    pub sextic: Vec<BigRational>,
    pub separable: bool,
    /// Set when the two factors share a j-invariant, in which case the gluing
    /// may come from an isomorphism and the result need not be a Jacobian.
    pub warning: Option<String>,
}

impl GlueSpec {
    pub fn f(&self) -> Cubic {
        Cubic::from_roots(&triple(&self.roots_f))
    }

    pub fn g(&self) -> Cubic {
        Cubic::from_roots(&triple(&self.roots_g))
    }
}

fn triple(v: &[BigRational]) -> [BigRational; 3] {
    [v[0].clone(), v[1].clone(), v[2].clone()]
}

fn cubic_disc(r: &[BigRational; 3]) -> BigRational {
    let d = (&r[0] - &r[1]) * (&r[1] - &r[2]) * (&r[0] - &r[2]);
    &d * &d
}

fn distinct(r: &[BigRational; 3]) -> bool {
    r[0] != r[1] && r[1] != r[2] && r[0] != r[2]
}

/// The sextic with Jacobian isogenous to `y^2 = prod (x - roots_f)` times
/// `y^2 = prod (x - roots_g)`, root `i` of one curve matched with root `i`
/// of the other.
pub fn glue(roots_f: &[BigRational; 3], roots_g: &[BigRational; 3]) -> Result<GlueSpec> {
    if !distinct(roots_f) || !distinct(roots_g) {
        return Err(Error::CoincidentRoots);
    }
    let (al, be) = (roots_f, roots_g);
    let at = |i: usize| &al[i % 3];
    let bt = |i: usize| &be[i % 3];
    let mut a1 = BigRational::zero();
    let mut b1 = BigRational::zero();
    let mut a2 = BigRational::zero();
    let mut b2 = BigRational::zero();
    for i in 0..3 {
        let da = at(i + 2) - at(i + 1);
        let db = bt(i + 2) - bt(i + 1);
        a1 += &da * &da / &db;
        b1 += &db * &db / &da;
        a2 += at(i) * &db;
        b2 += bt(i) * &da;
    }
    if a2.is_zero() || b2.is_zero() {
        return Err(Error::GlueDegenerate);
    }
    let big_a = cubic_disc(be) * &a1 / &a2;
    let big_b = cubic_disc(al) * &b1 / &b2;
    let ring = PolyRing::new(Rationals);
    let mut prod = ring.constant(-BigRational::one());
    for i in 0..3 {
        // indices mod 3, with i - 1 written as i + 2
        let quad = &big_a * (at(i + 1) - at(i)) * (at(i) - at(i + 2));
        let cst = &big_b * (bt(i + 1) - bt(i)) * (bt(i) - bt(i + 2));
        prod = ring.mul(&prod, &ring.from_coeffs(vec![cst, BigRational::zero(), quad]));
    }
    let separable = prod.degree() == Some(6) && !discriminant(&ring, &prod)?.is_zero();
    let mut sextic = prod.into_coeffs();
    sextic.resize(7, BigRational::zero());
    let f = Cubic::from_roots(al);
    let g = Cubic::from_roots(be);
    let warning = (f.j_invariant() == g.j_invariant()).then(|| "factors share a j-invariant".to_string());
    Ok(GlueSpec { roots_f: al.to_vec(), roots_g: be.to_vec(), a1, a2, b1, b2, big_a, big_b, sextic, separable, warning })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCountRow {
    pub p: u64,
    pub jacobian: u128,
    pub product: u128,
    pub holds: bool,
}

/// `#J(F_p)` of `y^2 = sextic` against `#E1(F_p) #E2(F_p)`.
pub fn split_count_check(sextic: &[BigRational], e1: &Cubic, e2: &Cubic, primes: &[u64]) -> Result<Vec<SplitCountRow>> {
    let ring = PolyRing::new(Rationals);
    let g = ring.from_coeffs(sextic.to_vec());
    primes
        .iter()
        .map(|&p| {
            let jacobian = jacobian_order_mod(&g, p)?;
            let product = e1.count_mod(p)? as u128 * e2.count_mod(p)? as u128;
            Ok(SplitCountRow { p, jacobian, product, holds: jacobian == product })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoublingRow {
    #[serde(with = "crate::io::rational")]
    pub d: BigRational,
    pub p: u64,
    pub jacobian: Option<u128>,
    pub elliptic: Option<u128>,
    pub holds: Option<bool>,
    pub note: Option<String>,
}

/// Glue `E` to itself along a root permutation that does not come from an
/// automorphism, giving a curve with Jacobian isogenous to `E^2`.
pub fn square_gluing(roots: &[BigRational; 3]) -> Result<GlueSpec> {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
    for perm in PERMS {
        let other = perm.map(|i| roots[i].clone());
        match glue(roots, &other) {
            Ok(spec) if spec.separable => return Ok(spec),
            Ok(_) | Err(Error::GlueDegenerate) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::GlueDegenerate)
}

/// Local check that twisting the glued square of `E` by `d` squares the
/// twisted point count: `#J(C^(d))(F_p) = #E^(d)(F_p)^2`. Bad primes are
/// skipped with a note.
pub fn rank_doubling_check(roots: &[BigRational; 3], d_list: &[BigRational], primes: &[u64]) -> Result<Vec<DoublingRow>> {
    let spec = square_gluing(roots)?;
    let e = Cubic::from_roots(roots);
    let ring = PolyRing::new(Rationals);
    let mut rows = Vec::new();
    for d in d_list {
        if d.is_zero() {
            return Err(Error::Zero);
        }
        // d y^2 = glue(x) as Y^2 = d glue(x)
        let twisted = ring.from_coeffs(spec.sextic.iter().map(|c| c * d).collect());
        let ed = e.quadratic_twist(d);
        for &p in primes {
            let row = match (jacobian_order_mod(&twisted, p), ed.count_mod(p)) {
                (Ok(j), Ok(n)) => {
                    let sq = n as u128 * n as u128;
                    DoublingRow { d: d.clone(), p, jacobian: Some(j), elliptic: Some(n as u128), holds: Some(j == sq), note: None }
                }
                (Err(err), _) | (_, Err(err)) => DoublingRow {
                    d: d.clone(),
                    p,
                    jacobian: None,
                    elliptic: None,
                    holds: None,
                    note: Some(format!("skipped: {err}")),
                },
            };
            rows.push(row);
        }
    }
    Ok(rows)
}
