//! Jacobians of `Y^2 = g(x)` with `deg g` in {5, 6}, in balanced Mumford form.
//!
//! For degree 6 with a rational square root `s` of the leading coefficient,
//! a triple `(u, v, n)` stands for the class of
//! `A + n*inf_plus + (2 - deg u - n)*inf_minus - (inf_plus + inf_minus)`,
//! where `A` is the affine divisor cut out by `u` and `Y = v(x)`. `inf_plus`
//! is the point where `Y / x^3` tends to `s`. Reduced triples have
//! `deg u <= 2` and `0 <= n <= 2 - deg u`, and every class has exactly one.
//! Degree-5 models use ordinary Mumford pairs with `n = 0`.

mod counting;

pub use counting::{
    count_points, count_points_naive, good_prime_check, group_order_from_counts, jacobian_order_mod,
    prime_guard,
    weil_band, PRIME_GUARD_ENV,
};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::algebra::arith::factor_u128;
use crate::algebra::field::{rational_bits, rational_to_string, Field, PrimeField, Rationals};
use crate::algebra::poly::{Poly, PolyRing};
use crate::error::{Error, Result};

/// Reduced divisor class representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MumfordDivisor<E> {
    pub u: Poly<E>,
    pub v: Poly<E>,
    pub n: i64,
}

impl<E> MumfordDivisor<E> {
    pub fn degree(&self) -> usize {
        self.u.degree().unwrap_or(0)
    }
}

impl MumfordDivisor<BigRational> {
    /// Largest numerator or denominator bit length among the coordinates.
    pub fn max_bits(&self) -> u64 {
        self.u.coeffs().iter().chain(self.v.coeffs()).map(rational_bits).max().unwrap_or(0)
    }
}

/// Wire form `{"u":[...],"v":[...],"n":k}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorRecord {
    pub u: Vec<String>,
    pub v: Vec<String>,
    pub n: i64,
}

impl From<&MumfordDivisor<BigRational>> for DivisorRecord {
    fn from(d: &MumfordDivisor<BigRational>) -> Self {
        DivisorRecord {
            u: d.u.coeffs().iter().map(rational_to_string).collect(),
            v: d.v.coeffs().iter().map(rational_to_string).collect(),
            n: d.n,
        }
    }
}

impl From<&MumfordDivisor<u64>> for DivisorRecord {
    fn from(d: &MumfordDivisor<u64>) -> Self {
        DivisorRecord {
            u: d.u.coeffs().iter().map(|c| c.to_string()).collect(),
            v: d.v.coeffs().iter().map(|c| c.to_string()).collect(),
            n: d.n,
        }
    }
}

#[derive(Clone, Debug)]
enum Infinity<E> {
    /// Degree 5: one rational point at infinity.
    Single,
    /// Degree 6: the cubic `V+` approximating `Y` at `inf_plus`, and `V- = -V+`.
    Split { root: E, v_plus: Poly<E>, v_minus: Poly<E> },
}

/// The Jacobian of `Y^2 = g(x)` over a field of odd or zero characteristic.
#[derive(Clone, Debug)]
pub struct JacobianGroup<F: Field> {
    ring: PolyRing<F>,
    g: Poly<F::Elem>,
    infinity: Infinity<F::Elem>,
}

const REDUCTION_CAP: usize = 64;

impl<F: Field> JacobianGroup<F> {
    /// Uses the field's own square root of the leading coefficient for `inf_plus`.
    pub fn new(field: F, g: Poly<F::Elem>) -> Result<Self> {
        let root = match g.degree() {
            Some(6) => Some(
                field
                    .sqrt(g.leading().unwrap())
                    .ok_or(Error::InfinityNotRational)?,
            ),
            _ => None,
        };
        Self::build(field, g, root)
    }

    /// Degree-6 curve with a prescribed root `s` of the leading coefficient.
    pub fn with_root(field: F, g: Poly<F::Elem>, root: F::Elem) -> Result<Self> {
        if g.degree() != Some(6) || field.square(&root) != *g.leading().unwrap() {
            return Err(Error::Precondition("root does not square to the leading coefficient".into()));
        }
        Self::build(field, g, Some(root))
    }

    fn build(field: F, g: Poly<F::Elem>, root: Option<F::Elem>) -> Result<Self> {
        if field.characteristic() == 2 {
            return Err(Error::Precondition("characteristic 2".into()));
        }
        let ring = PolyRing::new(field);
        match g.degree() {
            Some(5) | Some(6) => {}
            _ => return Err(Error::InvalidModel("degree of g must be 5 or 6".into())),
        }
        if ring.gcd(&g, &ring.derivative(&g)).degree() != Some(0) {
            return Err(Error::InvalidModel("g is not squarefree".into()));
        }
        let infinity = match root {
            None => Infinity::Single,
            Some(s) => {
                let f = ring.field();
                let coeff = |i: usize| g.coeff(i).cloned().unwrap_or_else(|| f.zero());
                let two_s = f.add(&s, &s);
                let v2 = f.div(&coeff(5), &two_s).unwrap();
                let v1 = f.div(&f.sub(&coeff(4), &f.square(&v2)), &two_s).unwrap();
                let t = f.add(&f.mul(&v1, &v2), &f.mul(&v1, &v2));
                let v0 = f.div(&f.sub(&coeff(3), &t), &two_s).unwrap();
                let v_plus = ring.from_coeffs(vec![v0, v1, v2, s.clone()]);
                let v_minus = ring.neg(&v_plus);
                Infinity::Split { root: s, v_plus, v_minus }
            }
        };
        Ok(JacobianGroup { ring, g, infinity })
    }

    pub fn field(&self) -> &F {
        self.ring.field()
    }

    pub fn ring(&self) -> &PolyRing<F> {
        &self.ring
    }

    pub fn curve(&self) -> &Poly<F::Elem> {
        &self.g
    }

    pub fn has_two_rational_infinities(&self) -> bool {
        matches!(self.infinity, Infinity::Split { .. })
    }

    /// Chosen square root of the leading coefficient, when `deg g = 6`.
    pub fn infinity_root(&self) -> Option<&F::Elem> {
        match &self.infinity {
            Infinity::Split { root, .. } => Some(root),
            Infinity::Single => None,
        }
    }

    /// Cubic `V+` with `deg(g - V+^2) <= 2`.
    pub fn v_plus(&self) -> Option<&Poly<F::Elem>> {
        match &self.infinity {
            Infinity::Split { v_plus, .. } => Some(v_plus),
            Infinity::Single => None,
        }
    }

    pub fn identity(&self) -> MumfordDivisor<F::Elem> {
        let n = match self.infinity {
            Infinity::Single => 0,
            Infinity::Split { .. } => 1,
        };
        MumfordDivisor { u: self.ring.one(), v: self.ring.zero(), n }
    }

    pub fn is_identity(&self, d: &MumfordDivisor<F::Elem>) -> bool {
        *d == self.identity()
    }

    /// Whether `d` is a reduced representative on this curve.
    pub fn is_reduced(&self, d: &MumfordDivisor<F::Elem>) -> bool {
        let f = self.field();
        let k = match d.u.degree() {
            Some(k) if k <= 2 => k as i64,
            _ => return false,
        };
        if !f.is_one(d.u.leading().unwrap()) || d.v.deg_i() >= k {
            return false;
        }
        let n_ok = match self.infinity {
            Infinity::Single => d.n == 0,
            Infinity::Split { .. } => 0 <= d.n && d.n <= 2 - k,
        };
        let residue = self.ring.sub(&self.g, &self.ring.square(&d.v));
        n_ok && self.ring.rem(&residue, &d.u).is_zero()
    }

    /// The class `[inf_plus - inf_minus]`.
    pub fn infinity_class_point(&self) -> Result<MumfordDivisor<F::Elem>> {
        match self.infinity {
            Infinity::Split { .. } => Ok(MumfordDivisor { u: self.ring.one(), v: self.ring.zero(), n: 2 }),
            Infinity::Single => Err(Error::InfinityNotRational),
        }
    }

    pub fn on_curve(&self, x: &F::Elem, y: &F::Elem) -> bool {
        self.field().square(y) == self.ring.eval(&self.g, x)
    }

    /// `[P - inf_plus]` (or `[P - inf]` on a degree-5 curve).
    pub fn embed_point(&self, x: &F::Elem, y: &F::Elem) -> Result<MumfordDivisor<F::Elem>> {
        if !self.on_curve(x, y) {
            return Err(Error::NotOnCurve);
        }
        Ok(MumfordDivisor { u: self.ring.linear_root(x), v: self.ring.constant(y.clone()), n: 0 })
    }

    /// `[P - inf_minus]`; only meaningful with two points at infinity.
    pub fn embed_point_minus(&self, x: &F::Elem, y: &F::Elem) -> Result<MumfordDivisor<F::Elem>> {
        let mut d = self.embed_point(x, y)?;
        if let Infinity::Split { .. } = self.infinity {
            d.n = 1;
        }
        Ok(d)
    }

    /// The class of `P1 + P2 + n inf_plus + (-n) inf_minus - (inf_plus + inf_minus)`
    /// built directly from the points. A repeated point uses the tangent;
    /// conjugate pairs and doubled Weierstrass points are rejected.
    pub fn from_two_points(
        &self,
        p1: (&F::Elem, &F::Elem),
        p2: (&F::Elem, &F::Elem),
        n: i64,
    ) -> Result<MumfordDivisor<F::Elem>> {
        let f = self.field();
        let r = &self.ring;
        for (x, y) in [p1, p2] {
            if !self.on_curve(x, y) {
                return Err(Error::NotOnCurve);
            }
        }
        let u = r.mul(&r.linear_root(p1.0), &r.linear_root(p2.0));
        let v = if p1.0 != p2.0 {
            let dx = f.sub(p1.0, p2.0);
            let slope = f.div(&f.sub(p1.1, p2.1), &dx).unwrap();
            let c0 = f.sub(p1.1, &f.mul(&slope, p1.0));
            r.from_coeffs(vec![c0, slope])
        } else if p1.1 == p2.1 && !f.is_zero(p1.1) {
            let dg = r.eval(&r.derivative(&self.g), p1.0);
            let slope = f.div(&dg, &f.add(p1.1, p1.1)).unwrap();
            let c0 = f.sub(p1.1, &f.mul(&slope, p1.0));
            r.from_coeffs(vec![c0, slope])
        } else {
            return Err(Error::Precondition("points are conjugate or a doubled Weierstrass point".into()));
        };
        let d = MumfordDivisor { u, v, n };
        if !self.is_reduced(&d) {
            return Err(Error::Precondition(format!("weight {n} out of range for two points")));
        }
        Ok(d)
    }

    pub fn neg(&self, d: &MumfordDivisor<F::Elem>) -> MumfordDivisor<F::Elem> {
        let n = match self.infinity {
            Infinity::Single => 0,
            Infinity::Split { .. } => 2 - d.degree() as i64 - d.n,
        };
        MumfordDivisor { u: d.u.clone(), v: self.ring.neg(&d.v), n }
    }

    pub fn add(&self, a: &MumfordDivisor<F::Elem>, b: &MumfordDivisor<F::Elem>) -> MumfordDivisor<F::Elem> {
        let r = &self.ring;
        let (d1, e1, e2) = r.xgcd(&a.u, &b.u);
        let vsum = r.add(&a.v, &b.v);
        let (d, c1, c2) = if vsum.is_zero() {
            (d1.clone(), r.one(), r.zero())
        } else {
            r.xgcd(&d1, &vsum)
        };
        let s1 = r.mul(&c1, &e1);
        let s2 = r.mul(&c1, &e2);
        let u = r.div_exact(&r.mul(&a.u, &b.u), &r.square(&d)).expect("d^2 divides u1 u2");
        let t1 = r.mul(&r.mul(&s1, &a.u), &b.v);
        let t2 = r.mul(&r.mul(&s2, &b.u), &a.v);
        let t3 = r.mul(&c2, &r.add(&r.mul(&a.v, &b.v), &self.g));
        let num = r.add(&r.add(&t1, &t2), &t3);
        let v = r.rem(&r.div_exact(&num, &d).expect("d divides the composed v"), &u);
        let n = a.n + b.n + d.degree().unwrap_or(0) as i64 - self.identity().n;
        self.reduce(u, v, n)
    }

    pub fn double(&self, a: &MumfordDivisor<F::Elem>) -> MumfordDivisor<F::Elem> {
        self.add(a, a)
    }

    pub fn sub(&self, a: &MumfordDivisor<F::Elem>, b: &MumfordDivisor<F::Elem>) -> MumfordDivisor<F::Elem> {
        self.add(a, &self.neg(b))
    }

    fn reduce(&self, mut u: Poly<F::Elem>, mut v: Poly<F::Elem>, mut n: i64) -> MumfordDivisor<F::Elem> {
        let r = &self.ring;
        match &self.infinity {
            Infinity::Single => {
                while u.deg_i() > 2 {
                    let q = r.div_exact(&r.sub(&self.g, &r.square(&v)), &u).expect("u divides g - v^2");
                    u = r.monic(&q);
                    v = r.rem(&r.neg(&v), &u);
                }
                MumfordDivisor { u, v, n: 0 }
            }
            Infinity::Split { v_plus, v_minus, .. } => {
                for _ in 0..REDUCTION_CAP {
                    let k = u.deg_i();
                    if k <= 2 && 0 <= n && n <= 2 - k {
                        return MumfordDivisor { u, v, n };
                    }
                    let v_star = if k > 3 {
                        v.clone()
                    } else {
                        let target = if n < 0 { v_minus } else { v_plus };
                        r.sub(&r.add(&v, target), &r.rem(target, &u))
                    };
                    let num = r.sub(&self.g, &r.square(&v_star));
                    let q = r.div_exact(&num, &u).expect("u divides g - v*^2");
                    let pole_plus = if v_star != *v_plus {
                        r.sub(v_plus, &v_star).deg_i()
                    } else {
                        num.deg_i() - 3
                    };
                    u = r.monic(&q);
                    n = n + pole_plus - u.deg_i();
                    v = r.rem(&r.neg(&v_star), &u);
                }
                panic!("balanced reduction did not terminate");
            }
        }
    }

    /// `k * d` by double-and-add.
    pub fn mul(&self, k: &BigInt, d: &MumfordDivisor<F::Elem>) -> MumfordDivisor<F::Elem> {
        let base = if k.is_negative() { self.neg(d) } else { d.clone() };
        let mag = k.magnitude();
        let mut acc = self.identity();
        for i in (0..mag.bits()).rev() {
            acc = self.double(&acc);
            if mag.bit(i) {
                acc = self.add(&acc, &base);
            }
        }
        acc
    }

    pub fn mul_i64(&self, k: i64, d: &MumfordDivisor<F::Elem>) -> MumfordDivisor<F::Elem> {
        self.mul(&BigInt::from(k), d)
    }
}

impl JacobianGroup<Rationals> {
    /// `k * d` over Q, giving up once a coordinate exceeds `max_bits`.
    pub fn mul_guarded(
        &self,
        k: &BigInt,
        d: &MumfordDivisor<BigRational>,
        max_bits: u64,
    ) -> Option<MumfordDivisor<BigRational>> {
        let base = if k.is_negative() { self.neg(d) } else { d.clone() };
        let mag = k.magnitude();
        let mut acc = self.identity();
        for i in (0..mag.bits()).rev() {
            acc = self.double(&acc);
            if mag.bit(i) {
                acc = self.add(&acc, &base);
            }
            if acc.max_bits() > max_bits {
                return None;
            }
        }
        Some(acc)
    }

    /// Reduction to `F_p`, keeping `inf_plus` compatible with the rational choice.
    pub fn reduce_mod(&self, p: u64) -> Result<JacobianGroup<PrimeField>> {
        good_prime_check(&self.g, p)?;
        let fp = PrimeField::new(p)?;
        let g = reduce_poly(&self.g, fp).ok_or(Error::BadPrime(p))?;
        match &self.infinity {
            Infinity::Single => JacobianGroup::new(fp, g),
            Infinity::Split { root, .. } => {
                let s = fp.from_rational(root).ok_or(Error::BadPrime(p))?;
                JacobianGroup::with_root(fp, g, s)
            }
        }
    }

    /// Image of a rational divisor in `J(F_p)`; `None` when `p` divides a denominator.
    pub fn reduce_divisor(
        &self,
        d: &MumfordDivisor<BigRational>,
        target: &JacobianGroup<PrimeField>,
    ) -> Option<MumfordDivisor<u64>> {
        let fp = *target.field();
        Some(MumfordDivisor {
            u: reduce_poly(&d.u, fp)?,
            v: reduce_poly(&d.v, fp)?,
            n: d.n,
        })
    }

    /// Exact curve from integer coefficients `g0..g6`.
    pub fn from_integers(g: &[BigInt]) -> Result<Self> {
        let ring = PolyRing::new(Rationals);
        let poly = ring.from_coeffs(g.iter().map(|a| BigRational::from_integer(a.clone())).collect());
        Self::new(Rationals, poly)
    }
}

impl JacobianGroup<PrimeField> {
    pub fn prime(&self) -> u64 {
        self.field().modulus()
    }

    /// `#C(F_p)` and `#C(F_{p^2})`.
    pub fn point_counts(&self) -> Result<(u64, u64)> {
        Ok((count_points(&self.g, *self.field(), 1)?, count_points(&self.g, *self.field(), 2)?))
    }

    /// `#J(F_p) = (N1^2 + N2)/2 - p`, checked against the Weil band.
    pub fn order(&self) -> Result<u128> {
        let p = self.prime();
        let guard = prime_guard();
        if p > guard {
            return Err(Error::PrimeGuard { p, guard });
        }
        let (n1, n2) = self.point_counts()?;
        group_order_from_counts(n1, n2, p)
    }

    /// Exact order of `d`, given the group order.
    pub fn order_of_with(&self, d: &MumfordDivisor<u64>, group_order: u128) -> Result<u128> {
        let factors = factor_u128(group_order, 1_000_000).ok_or(Error::OrderUnresolved)?;
        let mut n = group_order;
        if !self.is_identity(&self.mul(&BigInt::from(n), d)) {
            return Err(Error::Invariant(format!("point order does not divide {group_order}")));
        }
        for (q, e) in factors {
            for _ in 0..e {
                let m = n / q;
                if self.is_identity(&self.mul(&BigInt::from(m), d)) {
                    n = m;
                } else {
                    break;
                }
            }
        }
        Ok(n)
    }

    pub fn order_of(&self, d: &MumfordDivisor<u64>) -> Result<u128> {
        let n = self.order()?;
        self.order_of_with(d, n)
    }

    /// Every reduced representative, by enumerating monic `u` of degree <= 2
    /// and the square roots defining `v`. Meant for small `p`.
    pub fn all_elements(&self) -> Vec<MumfordDivisor<u64>> {
        let f = *self.field();
        let p = f.modulus();
        let r = &self.ring;
        let mut out = Vec::new();
        let weights = |k: i64| -> Vec<i64> {
            match self.infinity {
                Infinity::Single => vec![0],
                Infinity::Split { .. } => (0..=2 - k).collect(),
            }
        };
        for n in weights(0) {
            out.push(MumfordDivisor { u: r.one(), v: r.zero(), n });
        }
        for a in 0..p {
            let u = r.from_coeffs(vec![a, 1]);
            for b in 0..p {
                let v = r.constant(b);
                if self.ring.rem(&r.sub(&self.g, &r.square(&v)), &u).is_zero() {
                    for n in weights(1) {
                        out.push(MumfordDivisor { u: u.clone(), v: v.clone(), n });
                    }
                }
            }
        }
        for a0 in 0..p {
            for a1 in 0..p {
                let u = r.from_coeffs(vec![a0, a1, 1]);
                for b0 in 0..p {
                    for b1 in 0..p {
                        let v = r.from_coeffs(vec![b0, b1]);
                        if r.rem(&r.sub(&self.g, &r.square(&v)), &u).is_zero() {
                            out.push(MumfordDivisor { u: u.clone(), v, n: 0 });
                        }
                    }
                }
            }
        }
        out
    }
}

/// Coefficient-wise reduction; `None` if a denominator vanishes mod `p`.
pub fn reduce_poly(a: &Poly<BigRational>, fp: PrimeField) -> Option<Poly<u64>> {
    let ring = PolyRing::new(fp);
    let coeffs: Option<Vec<u64>> = a.coeffs().iter().map(|c| fp.from_rational(c)).collect();
    Some(ring.from_coeffs(coeffs?))
}

/// `g` as a rational polynomial from integer coefficients.
pub fn rational_poly(coeffs: &[BigInt]) -> Poly<BigRational> {
    PolyRing::new(Rationals).from_coeffs(coeffs.iter().map(|a| BigRational::from_integer(a.clone())).collect())
}

/// Whether `p` divides some denominator of `a`.
pub fn denominators_divisible(a: &Poly<BigRational>, p: u64) -> bool {
    let bp = BigInt::from(p);
    a.coeffs().iter().any(|c| c.denom().is_multiple_of(&bp))
}

/// Smallest `count` odd primes of good reduction for `g`.
pub fn default_good_primes(g: &Poly<BigRational>, count: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 3u64;
    while out.len() < count && p < 100_000 {
        if crate::algebra::field::is_prime_u64(p) && good_prime_check(g, p).is_ok() {
            out.push(p);
        }
        p += 2;
    }
    out
}
