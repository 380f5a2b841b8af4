//! Fixtures shared by the benchmarks.

use g2rank_core::jacobian::{JacobianGroup, MumfordDivisor};
use g2rank_core::regev::{random_element, random_scalar};
use g2rank_core::{PrimeField, Rationals, WeierstrassModel};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn tengely() -> WeierstrassModel {
    WeierstrassModel::from_i64(&[28, 72, 120, 120, 75, 18, 1])
}

pub fn tengely_over_q() -> JacobianGroup<Rationals> {
    JacobianGroup::from_integers(&tengely().simplified().g).expect("tengely curve is valid")
}

pub fn tengely_mod(p: u64) -> JacobianGroup<PrimeField> {
    tengely_over_q().reduce_mod(p).expect("good prime")
}

pub fn elements(group: &JacobianGroup<PrimeField>, count: usize, seed: u64) -> Vec<MumfordDivisor<u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_element(group, &mut rng)).collect()
}

pub fn scalars(count: usize, bits: u64, seed: u64) -> Vec<BigUint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_scalar(bits, &mut rng)).collect()
}
