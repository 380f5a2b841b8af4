//! Certificates that `alpha = [inf+ - inf-]` is torsion or not, and that
//! `alpha`, `beta` satisfy no small relation, with enough evidence to re-check.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::arith::factor_u128;
use crate::algebra::field::Rationals;
use crate::error::{Error, Result};
use crate::experiments::SamplingPlan;
use crate::jacobian::{default_good_primes, DivisorRecord, JacobianGroup, MumfordDivisor};
use crate::models::{BoxKind, BoxSpec, WeierstrassModel};

/// Largest coordinate size, in bits, tolerated during exact multiples.
pub const EXACT_BITS_GUARD: u64 = 1 << 17;
pub const DEFAULT_KAPPA: f64 = 4.0;
const MIN_TORSION_CAP: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CertificateKind {
    NonTorsion,
    TorsionOfOrder { n: u64 },
    IndependentUpTo { bound: u64 },
    RelationFound { m: i64, n: i64 },
}

/// Image of `alpha` (and `beta`, for pairs) in `J(F_p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeEvidence {
    pub p: u64,
    pub alpha_order: u128,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_order: Option<u128>,
    pub group_order: u128,
}

/// One exact computation of `m alpha + n beta` over Q.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactStep {
    pub alpha_coeff: i64,
    pub beta_coeff: i64,
    pub is_zero: bool,
    pub class: DivisorRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub curve: WeierstrassModel,
    pub kind: CertificateKind,
    pub evidence: Vec<PrimeEvidence>,
    #[serde(default)]
    pub transcript: Vec<ExactStep>,
}

impl RankCertificate {
    pub fn to_ndjson_line(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_ndjson_line(line: &str) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn is_pair(&self) -> bool {
        matches!(self.kind, CertificateKind::IndependentUpTo { .. } | CertificateKind::RelationFound { .. })
    }

    fn primes(&self) -> Vec<u64> {
        self.evidence.iter().map(|e| e.p).collect()
    }
}

/// `ceil(kappa (log H)^2)`, at least 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorsionBound {
    #[serde(with = "crate::io::decimal")]
    pub height: BigInt,
    pub kappa: f64,
    pub bound: u64,
}

impl TorsionBound {
    pub fn new(height: &BigInt, kappa: f64) -> Self {
        let log_h = ln_big(height).max(0.0);
        let bound = (kappa * log_h * log_h).ceil().max(1.0) as u64;
        TorsionBound { height: height.clone(), kappa, bound }
    }

    pub fn for_model(m: &WeierstrassModel) -> Self {
        Self::new(&m.h1(), DEFAULT_KAPPA)
    }
}

fn ln_big(n: &BigInt) -> f64 {
    n.to_f64().map_or(0.0, |v| v.abs().ln())
}

struct Setup {
    jac: JacobianGroup<Rationals>,
    alpha: MumfordDivisor<num_rational::BigRational>,
}

fn setup(m: &WeierstrassModel) -> Result<Setup> {
    let validity = m.validate();
    if !validity.valid {
        return Err(Error::InvalidModel(format!("{m}: {:?}", validity.reason)));
    }
    let jac = JacobianGroup::from_integers(&m.simplified().g)?;
    let alpha = jac.infinity_class_point()?;
    Ok(Setup { jac, alpha })
}

fn check_primes(jac: &JacobianGroup<Rationals>, primes: &[u64]) -> Result<()> {
    if primes.is_empty() {
        return Err(Error::NoGoodPrime);
    }
    for &p in primes {
        if p % 2 == 0 {
            return Err(Error::BadPrime(p));
        }
        jac.reduce_mod(p)?;
    }
    Ok(())
}

/// First four odd primes of good reduction.
pub fn default_primes(m: &WeierstrassModel) -> Vec<u64> {
    let g = crate::jacobian::rational_poly(&m.simplified().g);
    default_good_primes(&g, 4)
}

fn exact_step(
    jac: &JacobianGroup<Rationals>,
    terms: &[(i64, &MumfordDivisor<num_rational::BigRational>)],
    partial: &RankCertificate,
) -> Result<ExactStep> {
    let mut acc = jac.identity();
    for &(k, d) in terms {
        let part = jac
            .mul_guarded(&BigInt::from(k), d, EXACT_BITS_GUARD)
            .ok_or_else(|| undecided(partial, "exact multiple exceeded the size guard"))?;
        acc = jac.add(&acc, &part);
    }
    let alpha_coeff = terms.first().map_or(0, |t| t.0);
    let beta_coeff = terms.get(1).map_or(0, |t| t.0);
    Ok(ExactStep { alpha_coeff, beta_coeff, is_zero: jac.is_identity(&acc), class: DivisorRecord::from(&acc) })
}

fn undecided(partial: &RankCertificate, why: &str) -> Error {
    Error::Undecided(format!("{why}; partial evidence {}", partial.to_ndjson_line()))
}

fn prime_divisors(n: u64) -> Vec<u64> {
    factor_u128(n as u128, u64::MAX).unwrap_or_default().into_iter().map(|(q, _)| q as u64).collect()
}

/// Decide whether `alpha` is torsion using its images mod `primes`.
pub fn certify_alpha(m: &WeierstrassModel, primes: &[u64]) -> Result<RankCertificate> {
    let Setup { jac, alpha } = setup(m)?;
    check_primes(&jac, primes)?;
    let mut cert = RankCertificate {
        curve: m.clone(),
        kind: CertificateKind::NonTorsion,
        evidence: Vec::new(),
        transcript: Vec::new(),
    };
    for &p in primes {
        let jp = jac.reduce_mod(p)?;
        let image = jac.reduce_divisor(&alpha, &jp).ok_or(Error::BadPrime(p))?;
        let group_order = jp.order()?;
        let alpha_order = jp.order_of_with(&image, group_order)?;
        cert.evidence.push(PrimeEvidence { p, alpha_order, beta_order: None, group_order });
    }
    let orders: BTreeSet<u128> = cert.evidence.iter().map(|e| e.alpha_order).collect();
    if orders.len() > 1 {
        return Ok(cert);
    }
    let n = *orders.iter().next().expect("at least one prime");
    let cap = TorsionBound::for_model(m).bound.max(MIN_TORSION_CAP);
    if n > cap as u128 {
        return Err(undecided(&cert, &format!("common order {n} exceeds cap {cap}")));
    }
    let n = n as u64;
    let step = exact_step(&jac, &[(n as i64, &alpha)], &cert)?;
    let vanishes = step.is_zero;
    cert.transcript.push(step);
    if !vanishes {
        return Ok(cert);
    }
    for q in prime_divisors(n) {
        let step = exact_step(&jac, &[((n / q) as i64, &alpha)], &cert)?;
        if step.is_zero {
            return Err(Error::Invariant(format!("{}·alpha = 0 but alpha has order {n} mod p", n / q)));
        }
        cert.transcript.push(step);
    }
    cert.kind = CertificateKind::TorsionOfOrder { n };
    Ok(cert)
}

pub fn certify_alpha_default(m: &WeierstrassModel) -> Result<RankCertificate> {
    certify_alpha(m, &default_primes(m))
}

fn check_u11(m: &WeierstrassModel) -> Result<()> {
    if !m.h_is_zero() || !m.f[6].is_one() || !m.f[0].is_one() {
        return Err(Error::Precondition(format!("{m} is not in U11 (h = 0, a6 = a0 = 1)")));
    }
    Ok(())
}

/// `(i, j)` with `|i|, |j| <= bound` and `i a + j b = 0` in the group.
fn relations_mod_p(
    jp: &JacobianGroup<crate::algebra::PrimeField>,
    a: &MumfordDivisor<u64>,
    b: &MumfordDivisor<u64>,
    bound: i64,
) -> BTreeSet<(i64, i64)> {
    let mut multiples: HashMap<MumfordDivisor<u64>, Vec<i64>> = HashMap::new();
    let mut cur = jp.mul_i64(-bound, a);
    for i in -bound..=bound {
        multiples.entry(cur.clone()).or_default().push(i);
        cur = jp.add(&cur, a);
    }
    let mut out = BTreeSet::new();
    let mut cur = jp.mul_i64(bound, b);
    let neg_b = jp.neg(b);
    for j in -bound..=bound {
        // cur = -j b
        if let Some(is) = multiples.get(&cur) {
            out.extend(is.iter().map(|&i| (i, j)));
        }
        cur = jp.add(&cur, &neg_b);
    }
    out.remove(&(0, 0));
    out
}

/// Bounded independence test for `alpha` and `beta = [(0, -1) - inf+]` on a
/// curve `y^2 = x^6 + ... + 1`.
pub fn certify_pair(m: &WeierstrassModel, bound: u64, primes: &[u64]) -> Result<RankCertificate> {
    check_u11(m)?;
    if bound == 0 {
        return Err(Error::EmptyBound);
    }
    let Setup { jac, alpha } = setup(m)?;
    check_primes(&jac, primes)?;
    let zero = num_rational::BigRational::zero();
    // y = -1 on y^2 = f is Y = -2 on Y^2 = 4f
    let beta = jac.embed_point(&zero, &num_rational::BigRational::from_integer((-2).into()))?;
    let mut cert = RankCertificate {
        curve: m.clone(),
        kind: CertificateKind::IndependentUpTo { bound },
        evidence: Vec::new(),
        transcript: Vec::new(),
    };
    let b = bound as i64;
    let mut candidates: Option<BTreeSet<(i64, i64)>> = None;
    for &p in primes {
        let jp = jac.reduce_mod(p)?;
        let a_bar = jac.reduce_divisor(&alpha, &jp).ok_or(Error::BadPrime(p))?;
        let b_bar = jac.reduce_divisor(&beta, &jp).ok_or(Error::BadPrime(p))?;
        let group_order = jp.order()?;
        cert.evidence.push(PrimeEvidence {
            p,
            alpha_order: jp.order_of_with(&a_bar, group_order)?,
            beta_order: Some(jp.order_of_with(&b_bar, group_order)?),
            group_order,
        });
        let here = relations_mod_p(&jp, &a_bar, &b_bar, b);
        candidates = Some(match candidates {
            None => here,
            Some(prev) => prev.intersection(&here).copied().collect(),
        });
    }
    let mut candidates: Vec<(i64, i64)> = candidates.unwrap_or_default().into_iter().collect();
    candidates.sort_by_key(|&(i, j)| (i.abs().max(j.abs()), i.abs() + j.abs(), -i, -j));
    for (i, j) in candidates {
        let step = exact_step(&jac, &[(i, &alpha), (j, &beta)], &cert)?;
        let found = step.is_zero;
        cert.transcript.push(step);
        if found {
            cert.kind = CertificateKind::RelationFound { m: i, n: j };
            return Ok(cert);
        }
    }
    Ok(cert)
}

/// Re-derive a certificate from its curve and primes and compare field by field.
pub fn verify_certificate(cert: &RankCertificate) -> Result<()> {
    let primes = cert.primes();
    let redo = match cert.kind {
        CertificateKind::IndependentUpTo { bound } => certify_pair(&cert.curve, bound, &primes)?,
        CertificateKind::RelationFound { m, n } => {
            let bound = m.unsigned_abs().max(n.unsigned_abs());
            let redo = certify_pair(&cert.curve, bound, &primes)?;
            if redo.kind != cert.kind {
                return Err(Error::Invariant(format!("relation {m}, {n} not reproduced: {:?}", redo.kind)));
            }
            let last = cert.transcript.last().ok_or_else(|| Error::Invariant("empty transcript".into()))?;
            if (last.alpha_coeff, last.beta_coeff, last.is_zero) != (m, n, true) {
                return Err(Error::Invariant("transcript does not end in the relation".into()));
            }
            return structural_check(cert);
        }
        _ => certify_alpha(&cert.curve, &primes)?,
    };
    if redo != *cert {
        return Err(Error::Invariant(format!(
            "certificate does not reproduce: recorded {:?}, recomputed {:?}",
            cert.kind, redo.kind
        )));
    }
    structural_check(cert)
}

fn structural_check(cert: &RankCertificate) -> Result<()> {
    let bad = |why: &str| Err(Error::Invariant(why.to_string()));
    match cert.kind {
        CertificateKind::NonTorsion => {
            let orders: BTreeSet<u128> = cert.evidence.iter().map(|e| e.alpha_order).collect();
            let exact_nonzero = cert
                .transcript
                .iter()
                .any(|s| !s.is_zero && orders.contains(&(s.alpha_coeff as u128)));
            if orders.len() < 2 && !exact_nonzero {
                return bad("non-torsion needs two distinct orders or a nonzero exact multiple");
            }
        }
        CertificateKind::TorsionOfOrder { n } => {
            let zero = cert.transcript.iter().any(|s| s.is_zero && s.alpha_coeff == n as i64);
            let minimal = prime_divisors(n)
                .iter()
                .all(|q| cert.transcript.iter().any(|s| !s.is_zero && s.alpha_coeff == (n / q) as i64));
            if !zero || !minimal {
                return bad("torsion certificate lacks its exact checks");
            }
        }
        CertificateKind::IndependentUpTo { .. } => {
            if cert.transcript.iter().any(|s| s.is_zero) {
                return bad("independence certificate records a vanishing relation");
            }
        }
        CertificateKind::RelationFound { .. } => {}
    }
    Ok(())
}

/// Outcome counts of certifying `alpha` over a set of models.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionTally {
    pub x: u64,
    pub total: u64,
    pub torsion: u64,
    pub nontorsion: u64,
    pub undecided: u64,
}

impl TorsionTally {
    pub fn torsion_fraction(&self) -> f64 {
        self.fraction(self.torsion)
    }

    pub fn nontorsion_fraction(&self) -> f64 {
        self.fraction(self.nontorsion)
    }

    pub fn undecided_fraction(&self) -> f64 {
        self.fraction(self.undecided)
    }

    fn fraction(&self, k: u64) -> f64 {
        if self.total == 0 { 0.0 } else { k as f64 / self.total as f64 }
    }
}

/// Certify `alpha` on every model the plan draws from `spec` and tally outcomes.
pub fn torsion_scan(spec: &BoxSpec, primes: Option<&[u64]>, plan: &SamplingPlan) -> Result<TorsionTally> {
    if !matches!(spec.kind, BoxKind::S1Square | BoxKind::U11) {
        return Err(Error::Precondition(format!("torsion scan needs S1Square or U11, got {}", spec.kind.name())));
    }
    let models = plan.draw(spec);
    let outcomes: Vec<Option<CertificateKind>> = models
        .par_iter()
        .map(|m| {
            let cert = match primes {
                Some(ps) => certify_alpha(m, ps),
                None => certify_alpha_default(m),
            };
            cert.ok().map(|c| c.kind)
        })
        .collect();
    let mut tally = TorsionTally { x: spec.x, ..Default::default() };
    for o in outcomes {
        tally.total += 1;
        match o {
            Some(CertificateKind::TorsionOfOrder { .. }) => tally.torsion += 1,
            Some(CertificateKind::NonTorsion) => tally.nontorsion += 1,
            _ => tally.undecided += 1,
        }
    }
    Ok(tally)
}
