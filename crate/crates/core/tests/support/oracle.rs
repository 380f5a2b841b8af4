//! Brute-force Pic^0 for tiny fields, independent of Cantor's algorithm.
//!
//! Degree-0 classes are identified with effective degree-2 divisors via
//! `E -> E - D`, where `D` is the divisor of poles of `x`. Only the canonical
//! class has more than one effective representative, which gives
//! `#Pic^0 = #Eff_2 - p`. A sum `E1 + E2 = E3` holds exactly when some nonzero
//! `a0 + a1 x + a2 x^2 + a3 x^3 + b Y` vanishes on `E1 + E2 + iota(E3)`;
//! that is decided by a rank computation on local expansions.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use g2rank_core::algebra::{Field, Poly, PolyRing, PrimeField, QuadraticExtension};
use g2rank_core::jacobian::{JacobianGroup, MumfordDivisor};

type E2 = (u64, u64);

const ORDER: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pt {
    Affine(E2, E2),
    InfPlus,
    InfMinus,
    Inf,
}

pub type Divisor2 = [Pt; 2];

pub struct Oracle {
    pub p: u64,
    ext: QuadraticExtension,
    ring: PolyRing<QuadraticExtension>,
    g: Poly<E2>,
    degree6: bool,
    root: E2,
    pub points: Vec<Pt>,
}

impl Oracle {
    pub fn new(j: &JacobianGroup<PrimeField>) -> Self {
        let fp = *j.field();
        let ext = QuadraticExtension::new(fp).unwrap();
        let ring = PolyRing::new(ext);
        let g = ring.from_coeffs(j.curve().coeffs().iter().map(|&c| ext.embed(c)).collect());
        let degree6 = g.degree() == Some(6);
        let root = j.infinity_root().map(|&s| ext.embed(s)).unwrap_or((0, 0));
        let mut points = Vec::new();
        for x in ext.elements() {
            let gx = ring.eval(&g, &x);
            for y in ext.elements() {
                if ext.mul(&y, &y) == gx {
                    points.push(Pt::Affine(x, y));
                }
            }
        }
        if degree6 {
            points.push(Pt::InfPlus);
            points.push(Pt::InfMinus);
        } else {
            points.push(Pt::Inf);
        }
        Oracle { p: fp.modulus(), ext, ring, g, degree6, root, points }
    }

    fn frob(&self, pt: Pt) -> Pt {
        match pt {
            Pt::Affine(x, y) => Pt::Affine(self.ext.frobenius(&x), self.ext.frobenius(&y)),
            other => other,
        }
    }

    fn iota(&self, pt: Pt) -> Pt {
        match pt {
            Pt::Affine(x, y) => Pt::Affine(x, self.ext.neg(&y)),
            Pt::InfPlus => Pt::InfMinus,
            Pt::InfMinus => Pt::InfPlus,
            Pt::Inf => Pt::Inf,
        }
    }

    fn sorted(a: Pt, b: Pt) -> Divisor2 {
        if a <= b { [a, b] } else { [b, a] }
    }

    /// Every Frobenius-stable effective divisor of degree 2.
    pub fn effective_divisors(&self) -> Vec<Divisor2> {
        let mut out = HashSet::new();
        for (i, &a) in self.points.iter().enumerate() {
            for &b in &self.points[i..] {
                let d = Self::sorted(a, b);
                if Self::sorted(self.frob(a), self.frob(b)) == d {
                    out.insert(d);
                }
            }
        }
        let mut v: Vec<Divisor2> = out.into_iter().collect();
        v.sort();
        v
    }

    pub fn group_order(&self) -> u128 {
        self.effective_divisors().len() as u128 - self.p as u128
    }

    /// Effective divisor `E` with `d = [E - D]`.
    pub fn decode(&self, d: &MumfordDivisor<u64>) -> Divisor2 {
        let ext = &self.ext;
        let u = self.ring.from_coeffs(d.u.coeffs().iter().map(|&c| ext.embed(c)).collect());
        let v = self.ring.from_coeffs(d.v.coeffs().iter().map(|&c| ext.embed(c)).collect());
        let mut pts = Vec::new();
        let mut rest = u.clone();
        while rest.degree().unwrap_or(0) > 0 {
            let x = ext.elements().find(|x| ext.is_zero(&self.ring.eval(&rest, x))).expect("u splits over F_p^2");
            pts.push(Pt::Affine(x, self.ring.eval(&v, &x)));
            rest = self.ring.div_exact(&rest, &self.ring.linear_root(&x)).unwrap();
        }
        let k = pts.len() as i64;
        if self.degree6 {
            for _ in 0..d.n {
                pts.push(Pt::InfPlus);
            }
            for _ in 0..(2 - k - d.n) {
                pts.push(Pt::InfMinus);
            }
        } else {
            for _ in 0..(2 - k) {
                pts.push(Pt::Inf);
            }
        }
        assert_eq!(pts.len(), 2, "decoded divisor has degree 2");
        Self::sorted(pts[0], pts[1])
    }

    fn series_mul(&self, a: &[E2], b: &[E2]) -> Vec<E2> {
        let ext = &self.ext;
        let mut out = vec![ext.zero(); ORDER];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if i + j < ORDER {
                    out[i + j] = ext.add(&out[i + j], &ext.mul(x, y));
                }
            }
        }
        out
    }

    /// Power series square root of `h` with constant term `c0`.
    fn series_sqrt(&self, h: &[E2], c0: E2) -> Vec<E2> {
        let ext = &self.ext;
        let mut y = vec![ext.zero(); ORDER];
        y[0] = c0;
        let two_c0_inv = ext.inv(&ext.add(&c0, &c0)).unwrap();
        for k in 1..ORDER {
            let mut acc = h.get(k).copied().unwrap_or((0, 0));
            for i in 1..k {
                acc = ext.sub(&acc, &ext.mul(&y[i], &y[k - i]));
            }
            y[k] = ext.mul(&acc, &two_c0_inv);
        }
        y
    }

    /// Coefficients of `g(x0 + t)`, by Horner's rule in `t`.
    fn shifted(&self, x0: E2) -> Vec<E2> {
        let ext = &self.ext;
        let mut out = vec![ext.zero(); ORDER];
        for c in self.g.coeffs().iter().rev() {
            let mut next = vec![ext.zero(); ORDER];
            for k in 0..ORDER {
                next[k] = ext.mul(&out[k], &x0);
                if k > 0 {
                    next[k] = ext.add(&next[k], &out[k - 1]);
                }
            }
            next[0] = ext.add(&next[0], c);
            out = next;
        }
        out
    }

    /// Local expansions of `1, x, x^2, x^3, Y` (scaled to be regular) at `pt`.
    fn columns(&self, pt: Pt) -> [Vec<E2>; 5] {
        let ext = &self.ext;
        let mono = |k: usize| {
            let mut s = vec![ext.zero(); ORDER];
            s[k] = ext.one();
            s
        };
        match pt {
            Pt::Affine(x0, y0) => {
                let (x, y) = if !ext.is_zero(&y0) {
                    let mut x = vec![ext.zero(); ORDER];
                    x[0] = x0;
                    x[1] = ext.one();
                    (x, self.series_sqrt(&self.shifted(x0), y0))
                } else {
                    // parameter Y; solve g(x0 + s) = Y^2 for s
                    let gam = self.shifted(x0);
                    let g1_inv = ext.inv(&gam[1]).unwrap();
                    let mut s = vec![ext.zero(); ORDER];
                    for _ in 0..ORDER {
                        let mut rhs = mono(2);
                        let mut power = s.clone();
                        for gk in gam.iter().skip(2) {
                            power = self.series_mul(&power, &s);
                            for (r, c) in rhs.iter_mut().zip(&power) {
                                *r = ext.sub(r, &ext.mul(gk, c));
                            }
                        }
                        s = rhs.iter().map(|c| ext.mul(c, &g1_inv)).collect();
                    }
                    let mut x = s;
                    x[0] = ext.add(&x[0], &x0);
                    (x, mono(1))
                };
                let x2 = self.series_mul(&x, &x);
                let x3 = self.series_mul(&x2, &x);
                [mono(0), x, x2, x3, y]
            }
            Pt::InfPlus | Pt::InfMinus => {
                let rev: Vec<E2> = self.g.coeffs().iter().rev().copied().collect();
                let c0 = if pt == Pt::InfPlus { self.root } else { ext.neg(&self.root) };
                // t^3 F = a0 t^3 + a1 t^2 + a2 t + a3 + b W(t)
                [mono(3), mono(2), mono(1), mono(0), self.series_sqrt(&rev, c0)]
            }
            Pt::Inf => unreachable!("handled by pole orders"),
        }
    }

    /// Whether some nonzero function in L(3D) vanishes on `e` (degree 6).
    pub fn principal(&self, e: &[Pt]) -> bool {
        let ext = &self.ext;
        let mut mult: BTreeMap<Pt, usize> = BTreeMap::new();
        for &pt in e {
            *mult.entry(pt).or_default() += 1;
        }
        let mut rows: Vec<[E2; 5]> = Vec::new();
        for (&pt, &m) in &mult {
            if pt == Pt::Inf {
                // pole orders 0, 2, 4, 6, 5 for 1, x, x^2, x^3, Y
                let unit = |i: usize| {
                    let mut r = [ext.zero(); 5];
                    r[i] = ext.one();
                    r
                };
                if m >= 1 {
                    rows.push(unit(3));
                }
                if m >= 2 {
                    rows.push(unit(4));
                }
                if m >= 3 {
                    rows.push(unit(2));
                }
                if m >= 5 {
                    rows.push(unit(1));
                }
                continue;
            }
            let cols = self.columns(pt);
            for k in 0..m {
                rows.push(std::array::from_fn(|i| cols[i][k]));
            }
        }
        self.rank(rows) < 5
    }

    fn rank(&self, mut rows: Vec<[E2; 5]>) -> usize {
        let ext = &self.ext;
        let mut rank = 0;
        for col in 0..5 {
            let Some(piv) = (rank..rows.len()).find(|&r| !ext.is_zero(&rows[r][col])) else { continue };
            rows.swap(rank, piv);
            let inv = ext.inv(&rows[rank][col]).unwrap();
            for r in 0..rows.len() {
                if r != rank && !ext.is_zero(&rows[r][col]) {
                    let f = ext.mul(&rows[r][col], &inv);
                    for c in 0..5 {
                        let t = ext.mul(&f, &rows[rank][c]);
                        rows[r][c] = ext.sub(&rows[r][c], &t);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// `[E1 - D] + [E2 - D] = [E3 - D]`.
    pub fn sum_holds(&self, e1: &Divisor2, e2: &Divisor2, e3: &Divisor2) -> bool {
        let mut all = vec![e1[0], e1[1], e2[0], e2[1]];
        all.push(self.iota(e3[0]));
        all.push(self.iota(e3[1]));
        self.principal(&all)
    }

    /// Divisors in the canonical class, all of which stand for the identity.
    pub fn is_canonical(&self, e: &Divisor2) -> bool {
        self.iota(e[0]) == e[1]
    }
}
