//! Integral genus-2 models `y^2 + h(x) y = f(x)`, their heights and the
//! coefficient boxes they are counted in.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::arith::{is_square, is_squarefree};
use crate::algebra::field::{Field, PrimeField, Rationals};
use crate::algebra::poly::{Poly, PolyRing};
use crate::algebra::resultant::formal_discriminant;
use crate::error::{Error, Result};

/// Primes used to screen discriminants before falling back to exact arithmetic.
const SCREEN_PRIMES: [u64; 3] = [2_147_483_647, 2_147_483_629, 2_147_483_587];

/// `y^2 + h(x) y = f(x)` with `deg f <= 6` and `h` a 0/1 cubic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "ModelRecord", try_from = "ModelRecord")]
pub struct WeierstrassModel {
    /// `a0..a6`.
    pub f: [BigInt; 7],
    /// `h0..h3`.
    pub h: [bool; 4],
}

/// Wire form: every integer as a decimal string.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelRecord {
    pub f: Vec<String>,
    pub h: Vec<String>,
}

impl From<WeierstrassModel> for ModelRecord {
    fn from(m: WeierstrassModel) -> Self {
        ModelRecord {
            f: m.f.iter().map(|a| a.to_string()).collect(),
            h: m.h.iter().map(|&b| if b { "1" } else { "0" }.to_string()).collect(),
        }
    }
}

impl TryFrom<ModelRecord> for WeierstrassModel {
    type Error = Error;

    fn try_from(r: ModelRecord) -> Result<Self> {
        if r.f.len() > 7 || r.h.len() > 4 {
            return Err(Error::Parse(format!("f has {} and h has {} coefficients", r.f.len(), r.h.len())));
        }
        let mut f: [BigInt; 7] = Default::default();
        for (slot, s) in f.iter_mut().zip(&r.f) {
            *slot = s.trim().parse().map_err(|_| Error::Parse(s.clone()))?;
        }
        let mut h = [false; 4];
        for (slot, s) in h.iter_mut().zip(&r.h) {
            *slot = match s.trim() {
                "0" => false,
                "1" => true,
                other => return Err(Error::Parse(other.to_string())),
            };
        }
        Ok(WeierstrassModel { f, h })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvalidReason {
    DegreeTooSmall,
    DiscriminantZero,
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InvalidReason::DegreeTooSmall => "degree of 4f+h^2 below 5",
            InvalidReason::DiscriminantZero => "discriminant zero",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validity {
    pub valid: bool,
    pub reason: Option<InvalidReason>,
}

impl Validity {
    const OK: Validity = Validity { valid: true, reason: None };

    fn invalid(reason: InvalidReason) -> Self {
        Validity { valid: false, reason: Some(reason) }
    }
}

/// Rational points above `x = infinity`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InfinityType {
    /// Degree 6 with square leading coefficient; carries its positive root.
    TwoRationalPoints(#[serde(with = "crate::io::decimal")] BigInt),
    TwoConjugatePoints,
    OnePoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HeightKind {
    H1,
    H2,
}

/// `H2 = |c_k|^(20/k)` kept as the exact pair `(k, |c_k|)`; `k = 0` encodes `H2 = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct H2Value {
    pub k: u32,
    #[serde(with = "crate::io::decimal")]
    pub abs_coeff: BigInt,
}

impl H2Value {
    pub fn approx(&self) -> f64 {
        if self.k == 0 {
            return 1.0;
        }
        self.abs_coeff.to_f64().unwrap_or(f64::INFINITY).powf(20.0 / self.k as f64)
    }

    /// Whether `H2 <= x`, decided as `|c_k|^20 <= x^k`.
    pub fn at_most(&self, x: &BigInt) -> bool {
        if self.k == 0 {
            return x >= &BigInt::one();
        }
        Pow::pow(&self.abs_coeff, 20u32) <= Pow::pow(x, self.k)
    }
}

impl PartialOrd for H2Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for H2Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.k, other.k) {
            (0, 0) => Ordering::Equal,
            (0, _) => BigInt::one().cmp(&other.abs_coeff),
            (_, 0) => self.abs_coeff.cmp(&BigInt::one()),
            // a^(20/j) vs b^(20/k)  <=>  a^k vs b^j
            (j, k) => Pow::pow(&self.abs_coeff, k).cmp(&Pow::pow(&other.abs_coeff, j)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightValue {
    #[serde(with = "crate::io::decimal")]
    pub h1: BigInt,
    pub h2: Option<H2Value>,
}

/// Completed square `Y^2 = g(x)` with `Y = 2y + h(x)` and `g = 4f + h^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplifiedModel {
    /// `g0..g6`.
    pub g: [BigInt; 7],
    /// Coefficient of `x^6` in `g`, equal to `4 a6 + h3`.
    pub c: BigInt,
}

impl SimplifiedModel {
    pub fn poly(&self) -> Poly<BigRational> {
        let ring = PolyRing::new(Rationals);
        ring.from_coeffs(self.g.iter().map(|a| BigRational::from_integer(a.clone())).collect())
    }

    pub fn degree(&self) -> Option<usize> {
        self.g.iter().rposition(|a| !a.is_zero())
    }
}

impl WeierstrassModel {
    pub fn new(f: [BigInt; 7], h: [bool; 4]) -> Self {
        WeierstrassModel { f, h }
    }

    /// `f` from `a0..a6` (shorter slices are padded with zeros) and `h = 0`.
    pub fn from_i64(f: &[i64]) -> Self {
        Self::with_h(f, [false; 4])
    }

    pub fn with_h(f: &[i64], h: [bool; 4]) -> Self {
        assert!(f.len() <= 7, "at most seven coefficients");
        let mut out: [BigInt; 7] = Default::default();
        for (slot, &a) in out.iter_mut().zip(f) {
            *slot = BigInt::from(a);
        }
        WeierstrassModel { f: out, h }
    }

    /// `h` packed with `h3` as the most significant bit.
    pub fn h_mask(&self) -> u8 {
        self.h.iter().enumerate().fold(0, |acc, (i, &b)| acc | ((b as u8) << i))
    }

    pub fn h_from_mask(mask: u8) -> [bool; 4] {
        std::array::from_fn(|i| mask >> i & 1 == 1)
    }

    pub fn h_is_zero(&self) -> bool {
        self.h_mask() == 0
    }

    pub fn simplified(&self) -> SimplifiedModel {
        let g = simplified_coeffs(&self.f, self.h);
        let c = g[6].clone();
        SimplifiedModel { g, c }
    }

    /// `4 a6 + h3`, the leading coefficient of the completed square.
    pub fn c(&self) -> BigInt {
        BigInt::from(4) * &self.f[6] + BigInt::from(self.h[3] as i64)
    }

    /// `2^-12 disc(4f + h^2)`, taking `4f + h^2` at formal degree 6.
    pub fn discriminant(&self) -> Result<BigRational> {
        let s = self.simplified();
        let ring = PolyRing::new(Rationals);
        let d = formal_discriminant(&ring, &s.poly(), 6)?;
        Ok(d / BigRational::from_integer(BigInt::from(4096)))
    }

    pub fn validate(&self) -> Validity {
        let g = self.simplified().g;
        validity_of_g(&g)
    }

    pub fn is_valid(&self) -> bool {
        self.validate().valid
    }

    pub fn infinity_class(&self) -> InfinityType {
        let s = self.simplified();
        if s.c.is_zero() {
            InfinityType::OnePoint
        } else {
            match is_square(&s.c) {
                Some(r) => InfinityType::TwoRationalPoints(r),
                None => InfinityType::TwoConjugatePoints,
            }
        }
    }

    pub fn h1(&self) -> BigInt {
        self.f.iter().map(|a| a.abs()).max().unwrap_or_default()
    }

    /// Whether the model is `y^2 = x^5 + c2 x^3 + c3 x^2 + c4 x + c5`.
    pub fn is_h2_normal_form(&self) -> bool {
        self.h_is_zero() && self.f[6].is_zero() && self.f[5].is_one() && self.f[4].is_zero()
    }

    pub fn h2(&self) -> Result<H2Value> {
        if !self.is_h2_normal_form() {
            return Err(Error::NotNormalForm);
        }
        let mut best = H2Value { k: 0, abs_coeff: BigInt::one() };
        for k in 2..=5u32 {
            let ck = self.f[5 - k as usize].abs();
            if ck.is_zero() {
                continue;
            }
            let cand = H2Value { k, abs_coeff: ck };
            if cand > best {
                best = cand;
            }
        }
        Ok(best)
    }

    pub fn height(&self, kind: HeightKind) -> Result<HeightValue> {
        let h2 = match kind {
            HeightKind::H1 => None,
            HeightKind::H2 => Some(self.h2()?),
        };
        Ok(HeightValue { h1: self.h1(), h2 })
    }

    /// The twist `d y^2 = f(x)` in the integral form `Y^2 = d f(x)`, `Y = d y`.
    pub fn quadratic_twist(&self, d: &BigInt) -> Result<WeierstrassModel> {
        if d.is_zero() {
            return Err(Error::Zero);
        }
        if !self.h_is_zero() {
            return Err(Error::Precondition("twisting needs h = 0".into()));
        }
        if !is_squarefree(d)? {
            return Err(Error::Precondition(format!("{d} is not squarefree")));
        }
        Ok(WeierstrassModel {
            f: std::array::from_fn(|i| &self.f[i] * d),
            h: [false; 4],
        })
    }

    /// Key used for lexicographic enumeration order.
    pub fn key(&self) -> Option<ModelKey> {
        let mut coeffs = [0i64; 7];
        for (i, slot) in coeffs.iter_mut().enumerate() {
            *slot = self.f[6 - i].to_i64()?;
        }
        Some(ModelKey { h_mask: self.h_mask(), coeffs })
    }
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |it: Vec<String>| it.join(",");
        write!(
            out,
            "f=[{}] h=[{}]",
            join(self.f.iter().map(|a| a.to_string()).collect()),
            join(self.h.iter().map(|&b| (b as u8).to_string()).collect())
        )
    }
}

fn simplified_coeffs(f: &[BigInt; 7], h: [bool; 4]) -> [BigInt; 7] {
    let mut g: [BigInt; 7] = std::array::from_fn(|i| BigInt::from(4) * &f[i]);
    for i in 0..4 {
        for j in 0..4 {
            if h[i] && h[j] {
                g[i + j] += 1;
            }
        }
    }
    g
}

/// Validity of `Y^2 = g` from the coefficients of `g`.
pub fn validity_of_g(g: &[BigInt; 7]) -> Validity {
    let deg = g.iter().rposition(|a| !a.is_zero());
    if deg.is_none_or(|d| d < 5) {
        return Validity::invalid(InvalidReason::DegreeTooSmall);
    }
    for p in SCREEN_PRIMES {
        let f = PrimeField::new(p).expect("screen primes are prime");
        let ring = PolyRing::new(f);
        let gp = ring.from_coeffs(g.iter().map(|a| f.from_integer(a)).collect());
        if gp.degree().is_some_and(|d| d >= 5)
            && formal_discriminant(&ring, &gp, 6).is_ok_and(|d| d != 0)
        {
            return Validity::OK;
        }
    }
    let ring = PolyRing::new(Rationals);
    let gq = ring.from_coeffs(g.iter().map(|a| BigRational::from_integer(a.clone())).collect());
    match formal_discriminant(&ring, &gq, 6) {
        Ok(d) if !d.is_zero() => Validity::OK,
        _ => Validity::invalid(InvalidReason::DiscriminantZero),
    }
}

/// Validity for small coefficient vectors. A nonzero discriminant modulo a
/// screening prime settles it; otherwise the exact test decides.
pub fn validity_i64(f: &[i64; 7], h_mask: u8) -> Validity {
    let h = WeierstrassModel::h_from_mask(h_mask);
    let mut g = [0i128; 7];
    for i in 0..7 {
        g[i] = 4 * f[i] as i128;
    }
    for i in 0..4 {
        for j in 0..4 {
            if h[i] && h[j] {
                g[i + j] += 1;
            }
        }
    }
    match g.iter().rposition(|&a| a != 0) {
        Some(d) if d >= 5 => {}
        _ => return Validity::invalid(InvalidReason::DegreeTooSmall),
    }
    if SCREEN_PRIMES.iter().any(|&p| separable_mod(&g, p)) {
        return Validity::OK;
    }
    // |disc| <= 6^6 |g|_2^10, so below the product of the screening primes
    // a discriminant vanishing modulo all of them is zero.
    let norm2: i128 = g.iter().map(|a| a * a).sum();
    let bound = (norm2 as u128)
        .checked_pow(5)
        .and_then(|b| b.checked_mul(46_656));
    let modulus: u128 = SCREEN_PRIMES.iter().map(|&p| p as u128).product();
    if bound.is_some_and(|b| b < modulus) {
        return Validity::invalid(InvalidReason::DiscriminantZero);
    }
    validity_of_g(&std::array::from_fn(|i| BigInt::from(g[i])))
}

/// Whether `g mod p` has degree at least 5 and no repeated root, for `p > 6`.
fn separable_mod(g: &[i128; 7], p: u64) -> bool {
    let m = p as i128;
    let mut a: Vec<u64> = g.iter().map(|&c| c.rem_euclid(m) as u64).collect();
    trim(&mut a);
    if a.len() < 6 {
        return false;
    }
    let mut b: Vec<u64> = a.iter().enumerate().skip(1).map(|(i, &c)| mul_mod(c, i as u64, p)).collect();
    trim(&mut b);
    while !b.is_empty() {
        let r = rem_mod(&a, &b, p);
        a = b;
        b = r;
    }
    a.len() == 1
}

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Operands below `p < 2^32`, so the product fits in a `u64`.
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let e = (a as i64).extended_gcd(&(p as i64));
    e.x.rem_euclid(p as i64) as u64
}

fn rem_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = mul_mod(*r.last().unwrap(), inv, p);
        for (j, &bj) in b.iter().enumerate() {
            r[k + j] = (r[k + j] + p - mul_mod(c, bj, p)) % p;
        }
        trim(&mut r);
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoxKind {
    C1,
    C2,
    S1,
    S2,
    #[serde(rename = "s1sq")]
    S1Square,
    U11,
}

impl BoxKind {
    pub fn name(&self) -> &'static str {
        match self {
            BoxKind::C1 => "c1",
            BoxKind::C2 => "c2",
            BoxKind::S1 => "s1",
            BoxKind::S2 => "s2",
            BoxKind::S1Square => "s1sq",
            BoxKind::U11 => "u11",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "c1" => BoxKind::C1,
            "c2" => BoxKind::C2,
            "s1" => BoxKind::S1,
            "s2" => BoxKind::S2,
            "s1sq" | "s1square" => BoxKind::S1Square,
            "u11" => BoxKind::U11,
            other => return Err(Error::Parse(other.to_string())),
        })
    }

    fn allows_h(&self) -> bool {
        matches!(self, BoxKind::S1 | BoxKind::S2 | BoxKind::S1Square)
    }
}

/// All sixteen `h` values.
pub const ALL_H: u16 = 0xffff;

/// A coefficient box. `h_filter` has bit `m` set when `h` with mask `m` is
/// included; boxes without `h` ignore it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxSpec {
    pub kind: BoxKind,
    pub x: u64,
    pub y: Option<u64>,
    pub h_filter: u16,
}

/// Enumeration key: `h` mask, then `a6, ..., a0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModelKey {
    pub h_mask: u8,
    pub coeffs: [i64; 7],
}

impl ModelKey {
    pub fn model(&self) -> WeierstrassModel {
        let f: Vec<i64> = self.coeffs.iter().rev().copied().collect();
        WeierstrassModel::with_h(&f, WeierstrassModel::h_from_mask(self.h_mask))
    }

    pub fn f_ascending(&self) -> [i64; 7] {
        std::array::from_fn(|i| self.coeffs[6 - i])
    }
}

/// Largest `t` with `t^20 <= x^k`.
fn h2_coefficient_bound(x: u64, k: u32) -> i64 {
    let xk = Pow::pow(&BigInt::from(x), k);
    xk.nth_root(20).to_i64().unwrap_or(i64::MAX)
}

impl BoxSpec {
    pub fn new(kind: BoxKind, x: u64) -> Result<Self> {
        Self::with_options(kind, x, None, ALL_H)
    }

    pub fn with_options(kind: BoxKind, x: u64, y: Option<u64>, h_filter: u16) -> Result<Self> {
        if x < 1 {
            return Err(Error::Precondition("X must be at least 1".into()));
        }
        if (kind == BoxKind::S2) != y.is_some() {
            return Err(Error::Precondition("Y is required for s2 and only for s2".into()));
        }
        if y == Some(0) {
            return Err(Error::Precondition("Y must be at least 1".into()));
        }
        let h_filter = if kind.allows_h() { h_filter } else { 1 };
        if h_filter == 0 {
            return Err(Error::Precondition("empty h filter".into()));
        }
        Ok(BoxSpec { kind, x, y, h_filter })
    }

    /// Single `h` slice of an `h`-carrying box.
    pub fn slice(kind: BoxKind, x: u64, h_mask: u8) -> Result<Self> {
        Self::with_options(kind, x, None, 1 << h_mask)
    }

    pub fn h_masks(&self) -> Vec<u8> {
        (0..16u8).filter(|m| self.h_filter >> m & 1 == 1).collect()
    }

    /// Inclusive ranges for `a6, ..., a0`.
    pub fn ranges(&self) -> [(i64, i64); 7] {
        let x = self.x as i64;
        match self.kind {
            BoxKind::C1 | BoxKind::S1 | BoxKind::S1Square => [(-x, x); 7],
            BoxKind::S2 => {
                let y = self.y.unwrap_or(1) as i128;
                std::array::from_fn(|i| {
                    // position i holds a_{6-i}, bounded by X Y^i
                    let b = (x as i128).saturating_mul(y.saturating_pow(i as u32));
                    let b = b.min(i64::MAX as i128) as i64;
                    (-b, b)
                })
            }
            BoxKind::C2 => {
                let t = |k| h2_coefficient_bound(self.x, k);
                let (c2, c3, c4, c5) = (t(2), t(3), t(4), t(5));
                [(0, 0), (1, 1), (0, 0), (-c2, c2), (-c3, c3), (-c4, c4), (-c5, c5)]
            }
            BoxKind::U11 => [(1, 1), (-x, x), (-x, x), (-x, x), (-x, x), (-x, x), (1, 1)],
        }
    }

    /// Number of `(h, coefficient)` tuples before any validity filter.
    pub fn raw_size(&self) -> u128 {
        let per_h: u128 = self.ranges().iter().map(|(lo, hi)| (hi - lo + 1) as u128).product();
        per_h * self.h_masks().len() as u128
    }

    /// Leading pairs `(h mask, a6)` allowed by the square-leading condition.
    pub fn admissible_leading(&self) -> Vec<(u8, i64)> {
        let (lo, hi) = self.ranges()[0];
        let mut out = Vec::new();
        for m in self.h_masks() {
            for a6 in lo..=hi {
                if self.leading_ok(m, a6) {
                    out.push((m, a6));
                }
            }
        }
        out
    }

    fn leading_ok(&self, h_mask: u8, a6: i64) -> bool {
        if self.kind != BoxKind::S1Square {
            return true;
        }
        let c = 4 * a6 + (h_mask >> 3 & 1) as i64;
        a6 != 0 && c > 0 && is_square(&BigInt::from(c)).is_some()
    }

    /// Membership of a key, including validity.
    pub fn contains_key(&self, key: &ModelKey) -> bool {
        if self.h_filter >> key.h_mask & 1 == 0 {
            return false;
        }
        let in_range = self
            .ranges()
            .iter()
            .zip(&key.coeffs)
            .all(|((lo, hi), a)| lo <= a && a <= hi);
        in_range
            && self.leading_ok(key.h_mask, key.coeffs[0])
            && validity_i64(&key.f_ascending(), key.h_mask).valid
    }

    pub fn contains(&self, m: &WeierstrassModel) -> bool {
        m.key().is_some_and(|k| self.contains_key(&k))
    }

    /// Uniform draw from the raw tuples, restricted to admissible leading
    /// pairs for the square-leading box. May be invalid.
    pub fn sample_raw<R: Rng + ?Sized>(&self, rng: &mut R) -> ModelKey {
        let ranges = self.ranges();
        let mut coeffs = [0i64; 7];
        for (slot, (lo, hi)) in coeffs.iter_mut().zip(ranges) {
            *slot = rng.random_range(lo..=hi);
        }
        let h_mask = if self.kind == BoxKind::S1Square {
            let lead = self.admissible_leading();
            let (m, a6) = lead[rng.random_range(0..lead.len())];
            coeffs[0] = a6;
            m
        } else {
            let masks = self.h_masks();
            masks[rng.random_range(0..masks.len())]
        };
        ModelKey { h_mask, coeffs }
    }

    /// Size of the space `sample_raw` draws from.
    pub fn sample_space_size(&self) -> u128 {
        if self.kind == BoxKind::S1Square {
            let rest: u128 = self.ranges()[1..].iter().map(|(lo, hi)| (hi - lo + 1) as u128).product();
            rest * self.admissible_leading().len() as u128
        } else {
            self.raw_size()
        }
    }

    /// Valid models in enumeration order, starting after `after` if given.
    pub fn enumerate_from(&self, after: Option<ModelKey>) -> BoxEnumerator {
        BoxEnumerator::new(self.clone(), after)
    }

    pub fn enumerate(&self) -> BoxEnumerator {
        self.enumerate_from(None)
    }

    /// Smallest key in the box order, valid or not.
    pub fn first_key(&self) -> Option<ModelKey> {
        let masks = self.h_masks();
        let ranges = self.ranges();
        Some(ModelKey {
            h_mask: *masks.first()?,
            coeffs: std::array::from_fn(|i| ranges[i].0),
        })
    }
}

/// Lexicographic walk over a box, yielding only valid members.
pub struct BoxEnumerator {
    spec: BoxSpec,
    masks: Vec<u8>,
    ranges: [(i64, i64); 7],
    mask_idx: usize,
    next: Option<[i64; 7]>,
}

impl BoxEnumerator {
    fn new(spec: BoxSpec, after: Option<ModelKey>) -> Self {
        let masks = spec.h_masks();
        let ranges = spec.ranges();
        let mut e = BoxEnumerator {
            spec,
            masks,
            ranges,
            mask_idx: 0,
            next: Some(ranges.map(|r| r.0)),
        };
        if let Some(k) = after {
            e.seek_after(k);
        }
        e
    }

    fn seek_after(&mut self, key: ModelKey) {
        // Position on `key` (clamped into the box), then step past it.
        match self.masks.iter().position(|&m| m >= key.h_mask) {
            None => self.next = None,
            Some(i) if self.masks[i] > key.h_mask => {
                self.mask_idx = i;
                self.next = Some(self.ranges.map(|r| r.0));
            }
            Some(i) => {
                self.mask_idx = i;
                let mut c = key.coeffs;
                for (j, (lo, hi)) in self.ranges.iter().enumerate() {
                    if c[j] < *lo {
                        for (k, r) in self.ranges.iter().enumerate().skip(j) {
                            c[k] = r.0;
                        }
                        self.next = Some(c);
                        return;
                    }
                    if c[j] > *hi {
                        for (k, r) in self.ranges.iter().enumerate().skip(j) {
                            c[k] = r.1;
                        }
                        break;
                    }
                }
                self.next = Some(c);
                self.advance();
            }
        }
    }

    fn advance(&mut self) {
        let Some(mut c) = self.next else { return };
        for j in (0..7).rev() {
            if c[j] < self.ranges[j].1 {
                c[j] += 1;
                self.next = Some(c);
                return;
            }
            c[j] = self.ranges[j].0;
        }
        self.mask_idx += 1;
        self.next = (self.mask_idx < self.masks.len()).then(|| self.ranges.map(|r| r.0));
    }

    pub fn spec(&self) -> &BoxSpec {
        &self.spec
    }
}

impl Iterator for BoxEnumerator {
    type Item = (ModelKey, WeierstrassModel);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let c = self.next?;
            let key = ModelKey { h_mask: self.masks[self.mask_idx], coeffs: c };
            self.advance();
            if self.spec.leading_ok(key.h_mask, key.coeffs[0])
                && validity_i64(&key.f_ascending(), key.h_mask).valid
            {
                return Some((key, key.model()));
            }
        }
    }
}

/// Cubic twist helper `d^3 f(x/d)`, whose roots are `d` times those of `f`.
pub fn twist_cubic(f: &[BigRational; 4], d: &BigRational) -> [BigRational; 4] {
    std::array::from_fn(|i| {
        let e = 3 - i as i32;
        &f[i] * Pow::pow(d, e)
    })
}
