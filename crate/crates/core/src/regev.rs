//! Group-operation cost of the classical core of Regev-style factoring and
//! discrete logarithms, simulated over Jacobians mod `q`.
//!
//! Multi-scalar multiplication is done two ways: term by term with
//! double-and-add, and with Pippenger buckets. Each run records the group
//! operations it actually performs. Adding or doubling the identity only
//! copies a value, so it is not counted.

use std::collections::HashMap;
use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::field::{Field, PrimeField, Rationals};
use crate::algebra::poly::PolyRing;
use crate::error::{Error, Result};
use crate::jacobian::{JacobianGroup, MumfordDivisor};
use crate::models::WeierstrassModel;

/// Bucket tables beyond `2^MAX_WINDOW - 1` entries are refused.
pub const MAX_WINDOW: u32 = 20;

type Elem = MumfordDivisor<u64>;

/// Group operations spent by one multi-scalar multiplication.
///
/// `table_entries` is the bucket table size, allocated once per window
/// pass; it is reported separately from the per-query operation counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostLedger {
    pub additions: u64,
    pub doublings: u64,
    pub table_entries: u64,
}

impl CostLedger {
    pub fn total(&self) -> u64 {
        self.additions + self.doublings
    }
}

/// Counts operations while skipping trivial ones.
struct Counter<'a> {
    group: &'a JacobianGroup<PrimeField>,
    ledger: CostLedger,
}

impl Counter<'_> {
    fn add(&mut self, a: &Elem, b: &Elem) -> Elem {
        if self.group.is_identity(a) {
            return b.clone();
        }
        if self.group.is_identity(b) {
            return a.clone();
        }
        self.ledger.additions += 1;
        self.group.add(a, b)
    }

    fn double(&mut self, a: &Elem) -> Elem {
        if self.group.is_identity(a) {
            return a.clone();
        }
        self.ledger.doublings += 1;
        self.group.double(a)
    }
}

fn check_lengths(gens: &[Elem], z: &[BigUint]) -> Result<()> {
    if gens.len() != z.len() {
        return Err(Error::LengthMismatch { expected: gens.len(), got: z.len() });
    }
    Ok(())
}

/// `sum z_i g_i`, each term by double-and-add.
pub fn msm_naive(group: &JacobianGroup<PrimeField>, gens: &[Elem], z: &[BigUint]) -> Result<(Elem, CostLedger)> {
    check_lengths(gens, z)?;
    let mut c = Counter { group, ledger: CostLedger::default() };
    let mut total = group.identity();
    for (g, k) in gens.iter().zip(z) {
        let mut acc = group.identity();
        for i in (0..k.bits()).rev() {
            acc = c.double(&acc);
            if k.bit(i) {
                acc = c.add(&acc, g);
            }
        }
        total = c.add(&total, &acc);
    }
    Ok((total, c.ledger))
}

/// `max(1, round(log2 d))`.
pub fn default_window(d: usize) -> u32 {
    if d <= 1 {
        return 1;
    }
    ((d as f64).log2().round() as u32).max(1)
}

/// `sum z_i g_i` by Pippenger's bucket method with `window`-bit digits.
pub fn msm_pippenger(
    group: &JacobianGroup<PrimeField>,
    gens: &[Elem],
    z: &[BigUint],
    window: u32,
) -> Result<(Elem, CostLedger)> {
    check_lengths(gens, z)?;
    if window == 0 {
        return Err(Error::Precondition("window must be at least 1".into()));
    }
    if window > MAX_WINDOW {
        return Err(Error::WindowTooLarge(window));
    }
    let mut c = Counter { group, ledger: CostLedger::default() };
    let buckets = (1usize << window) - 1;
    c.ledger.table_entries = buckets as u64;
    let bits = z.iter().map(BigUint::bits).max().unwrap_or(0);
    let passes = bits.div_ceil(window as u64);
    let mut total = group.identity();
    for pass in (0..passes).rev() {
        for _ in 0..window {
            total = c.double(&total);
        }
        let mut table = vec![group.identity(); buckets];
        for (g, k) in gens.iter().zip(z) {
            let digit = digit(k, pass * window as u64, window);
            if digit > 0 {
                table[digit - 1] = c.add(&table[digit - 1], g);
            }
        }
        // sum_j j * B_j as a running suffix sum.
        let mut running = group.identity();
        let mut window_sum = group.identity();
        for b in table.iter().rev() {
            running = c.add(&running, b);
            window_sum = c.add(&window_sum, &running);
        }
        total = c.add(&total, &window_sum);
    }
    Ok((total, c.ledger))
}

fn digit(k: &BigUint, low: u64, width: u32) -> usize {
    (0..width as u64).filter(|&i| k.bit(low + i)).fold(0, |acc, i| acc | (1 << i))
}

/// Divisors reduced mod `q`, in protocol order.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub group: JacobianGroup<PrimeField>,
    pub generators: Vec<Elem>,
}

impl GeneratorSet {
    pub fn q(&self) -> u64 {
        self.group.prime()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Appends the discrete-log pair as the last two generators, base last.
    pub fn with_log_pair(mut self, target: Elem, base: Elem) -> Result<Self> {
        for d in [&target, &base] {
            if !self.group.is_reduced(d) || self.group.is_identity(d) {
                return Err(Error::Precondition("log pair must be reduced and nonidentity".into()));
            }
        }
        self.generators.push(target);
        self.generators.push(base);
        Ok(self)
    }
}

/// Reduces rational divisors on `curve` modulo `q`.
pub fn lift_and_reduce(
    curve: &JacobianGroup<Rationals>,
    points: &[MumfordDivisor<BigRational>],
    q: u64,
) -> Result<GeneratorSet> {
    let group = curve.reduce_mod(q)?;
    let mut generators = Vec::with_capacity(points.len());
    for (index, d) in points.iter().enumerate() {
        let image = curve.reduce_divisor(d, &group).ok_or(Error::DenominatorDivisible { index, q })?;
        if !group.is_reduced(&image) {
            return Err(Error::Invariant(format!("image of point {index} is not reduced mod {q}")));
        }
        if group.is_identity(&image) {
            return Err(Error::Precondition(format!("point {index} reduces to the identity mod {q}")));
        }
        generators.push(image);
    }
    Ok(GeneratorSet { group, generators })
}

/// The class written `(a, b)` on `y^2 + h y = f`, as a balanced divisor on
/// `Y^2 = 4f + h^2`.
///
/// The affine part is cut out by `a` and `y = b`. When `deg a < 2` the
/// remaining points sit at infinity, placed where `y - b` vanishes: the zero
/// order of `Y - (2b + h)` at a point at infinity is `3` minus its pole order.
pub fn from_weierstrass_pair(
    model: &WeierstrassModel,
    a: &[i64],
    b: &[i64],
) -> Result<(JacobianGroup<Rationals>, MumfordDivisor<BigRational>)> {
    let ring = PolyRing::new(Rationals);
    let jac = JacobianGroup::from_integers(&model.simplified().g)?;
    let f = ring.from_coeffs(model.f.iter().map(|c| BigRational::from_integer(c.clone())).collect());
    let h = ring.from_i64(&model.h.map(i64::from));
    let a = ring.monic(&ring.from_i64(a));
    let b = ring.from_i64(b);
    let k = a.degree().unwrap_or(0);
    if a.is_zero() || k > 2 {
        return Err(Error::Precondition("a must be nonzero of degree at most 2".into()));
    }
    let on_curve = ring.sub(&ring.add(&ring.square(&b), &ring.mul(&h, &b)), &f);
    if !ring.rem(&on_curve, &a).is_zero() {
        return Err(Error::NotOnCurve);
    }
    let big_b = ring.add(&ring.scale(&b, &BigRational::from_integer(2.into())), &h);
    let v = ring.rem(&big_b, &a);
    let n = match jac.v_plus() {
        None => 0,
        Some(v_plus) => {
            let zero_order = |target: &crate::algebra::Poly<BigRational>| {
                let diff = ring.sub(target, &big_b);
                if diff.is_zero() {
                    i64::MAX
                } else {
                    3 - diff.deg_i()
                }
            };
            let free = 2 - k as i64;
            let plus = zero_order(v_plus).min(free);
            let minus = zero_order(&ring.neg(v_plus));
            if free - plus > minus {
                return Err(Error::Precondition("y - b does not vanish at enough points at infinity".into()));
            }
            plus
        }
    };
    let d = MumfordDivisor { u: a, v, n };
    if !jac.is_reduced(&d) {
        return Err(Error::Invariant("decoded divisor is not reduced".into()));
    }
    Ok((jac, d))
}

/// `y^2 + (x^3 + x + 1) y = x^5 - x^4 - 5x^3 + 9x + 6`, of conductor 440509.
pub fn rank_four_curve() -> WeierstrassModel {
    WeierstrassModel::with_h(&[6, 9, 0, -5, -1, 1], [true, true, false, true])
}

/// Published Mumford pairs `(a, b)`, ascending coefficients, generating
/// the Jacobian of [`rank_four_curve`].
pub const RANK_FOUR_GENERATORS: [(&[i64], &[i64]); 4] = [
    (&[1], &[0, 0, 1]),
    (&[1, 1], &[0]),
    (&[2, 1], &[-4, 0, 0, -1]),
    (&[-2, 0, 1], &[1]),
];

/// The generators of [`rank_four_curve`] as divisors on its completed square.
pub fn rank_four_generators() -> Result<(JacobianGroup<Rationals>, Vec<MumfordDivisor<BigRational>>)> {
    let model = rank_four_curve();
    let mut jac = None;
    let mut out = Vec::new();
    for (a, b) in RANK_FOUR_GENERATORS {
        let (j, d) = from_weierstrass_pair(&model, a, b)?;
        jac = Some(j);
        out.push(d);
    }
    Ok((jac.expect("four generators"), out))
}

/// Integer vector `z` with the claim `sum z_i g_i = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationVector {
    pub z: Vec<i64>,
}

impl RelationVector {
    pub fn holds(&self, group: &JacobianGroup<PrimeField>, gens: &[Elem]) -> Result<bool> {
        if gens.len() != self.z.len() {
            return Err(Error::LengthMismatch { expected: gens.len(), got: self.z.len() });
        }
        let sum = gens
            .iter()
            .zip(&self.z)
            .fold(group.identity(), |acc, (g, &k)| group.add(&acc, &group.mul_i64(k, g)));
        Ok(group.is_identity(&sum))
    }
}

fn combinations(
    group: &JacobianGroup<PrimeField>,
    gens: &[Elem],
    bound: i64,
) -> Vec<(Vec<i64>, Elem)> {
    let mut out = vec![(Vec::new(), group.identity())];
    for g in gens {
        let multiples: Vec<(i64, Elem)> = (-bound..=bound).map(|k| (k, group.mul_i64(k, g))).collect();
        let mut next = Vec::with_capacity(out.len() * multiples.len());
        for (z, acc) in &out {
            for (k, m) in &multiples {
                let mut z = z.clone();
                z.push(*k);
                next.push((z, group.add(acc, m)));
            }
        }
        out = next;
    }
    out
}

/// A nonzero relation with every `|z_i| <= bound`, found by meeting in the
/// middle. Meant for toy sizes: each half enumerates `(2 bound + 1)^(d/2)`
/// combinations.
pub fn find_relation(
    group: &JacobianGroup<PrimeField>,
    gens: &[Elem],
    bound: i64,
) -> Result<Option<RelationVector>> {
    if bound < 1 {
        return Err(Error::EmptyBound);
    }
    let (left, right) = gens.split_at(gens.len() / 2);
    let mut table: HashMap<Elem, Vec<Vec<i64>>> = HashMap::new();
    for (z, e) in combinations(group, left, bound) {
        table.entry(e).or_default().push(z);
    }
    let mut best: Option<Vec<i64>> = None;
    for (zr, e) in combinations(group, right, bound) {
        let Some(lefts) = table.get(&group.neg(&e)) else { continue };
        for zl in lefts {
            let z: Vec<i64> = zl.iter().chain(&zr).copied().collect();
            if z.iter().all(|&k| k == 0) {
                continue;
            }
            let key = |v: &[i64]| (v.iter().map(|k| k.abs()).max(), v.iter().map(|k| k.abs()).sum::<i64>());
            if best.as_ref().is_none_or(|b| key(&z) < key(b)) {
                best = Some(z);
            }
        }
    }
    let Some(z) = best else { return Ok(None) };
    let rel = RelationVector { z };
    if !rel.holds(group, gens)? {
        return Err(Error::Invariant("meet-in-the-middle relation does not vanish".into()));
    }
    Ok(Some(rel))
}

/// A uniformly drawn `x` with a square `g(x)`, as `k [P - inf_plus]` for random `k`.
pub fn random_element<R: Rng + ?Sized>(group: &JacobianGroup<PrimeField>, rng: &mut R) -> Elem {
    let fp = *group.field();
    let p = fp.modulus();
    loop {
        let x = rng.random_range(0..p);
        let gx = group.ring().eval(group.curve(), &x);
        if let Some(y) = fp.sqrt(&gx) {
            let point = group.embed_point(&x, &y).expect("point lies on the curve");
            let k = rng.random_range(1..p as i64 * p as i64);
            let d = group.mul_i64(k, &point);
            if !group.is_identity(&d) {
                return d;
            }
        }
    }
}

/// Scalar below `2^bits`, uniform.
pub fn random_scalar<R: Rng + ?Sized>(bits: u64, rng: &mut R) -> BigUint {
    let mut k = BigUint::zero();
    for i in 0..bits {
        if rng.random_bool(0.5) {
            k.set_bit(i, true);
        }
    }
    k
}

/// One row of the cost table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostRow {
    pub n: u64,
    pub d: u64,
    pub additions: u64,
    pub doublings: u64,
    pub model_cost: u64,
}

/// `d + ceil(n / d)`.
pub fn model_cost(n: u64, d: u64) -> u64 {
    d + n.div_ceil(d)
}

/// Measured Pippenger cost of one query with `d` random generators and
/// random `ceil(n/d)`-bit scalars, for each `d` in the grid.
pub fn cost_report(n_bits: u64, d_grid: &[u64], group: &JacobianGroup<PrimeField>, seed: u64) -> Result<Vec<CostRow>> {
    if n_bits == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let mut rows = Vec::with_capacity(d_grid.len());
    for &d in d_grid {
        if d == 0 || d > n_bits {
            return Err(Error::Precondition(format!("d = {d} must lie in [1, {n_bits}]")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ d);
        let bits = n_bits.div_ceil(d);
        let gens: Vec<Elem> = (0..d).map(|_| random_element(group, &mut rng)).collect();
        let z: Vec<BigUint> = (0..d).map(|_| random_scalar(bits, &mut rng)).collect();
        let (sum, ledger) = msm_pippenger(group, &gens, &z, default_window(d as usize))?;
        let (check, _) = msm_naive(group, &gens, &z)?;
        if sum != check {
            return Err(Error::Invariant(format!("Pippenger and naive sums differ at d = {d}")));
        }
        rows.push(CostRow {
            n: n_bits,
            d,
            additions: ledger.additions,
            doublings: ledger.doublings,
            model_cost: model_cost(n_bits, d),
        });
    }
    Ok(rows)
}

pub fn write_cost_csv<W: Write>(rows: &[CostRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Parse(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(())
}

/// Scalars as `BigUint`, rejecting negatives.
pub fn scalars(z: &[BigInt]) -> Result<Vec<BigUint>> {
    z.iter()
        .map(|k| k.to_biguint().ok_or_else(|| Error::Precondition(format!("negative scalar {k}"))))
        .collect()
}

#[cfg(test)]
mod tests;
