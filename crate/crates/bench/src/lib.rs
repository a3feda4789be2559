//! Seeded generators for benchmark-shaped instances, following the published
//! generation schemes of the two OR-Library families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqbound_core::instance::{CommonDueDates, JobInstance};

/// Common-due-date instance drawn like the Biskup-Feldman sets:
/// `p ~ U[1,20]`, `alpha ~ U[1,10]`, `beta ~ U[1,15]`.
pub fn bf_like(n: usize, seed: u64) -> JobInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = (0..n).map(|_| rng.gen_range(1..=20)).collect();
    let alpha = (0..n).map(|_| rng.gen_range(1..=10)).collect();
    let beta = (0..n).map(|_| rng.gen_range(1..=15)).collect();
    JobInstance::common_due(p, alpha, beta)
}

/// Due window of a common-due-date instance for fractions `h1 <= h2`.
pub fn due_window(inst: &JobInstance, h1: f64, h2: f64) -> CommonDueDates {
    CommonDueDates::new(inst, h1, h2).expect("fractions in [0,1] with h1 <= h2")
}

/// Weighted tardiness instance drawn like the CPW sets: `p ~ U[1,100]`,
/// `w ~ U[1,10]` and due dates uniform in
/// `[P(1 - tf - rdd/2), P(1 - tf + rdd/2)]` where `P` is the total duration.
pub fn cpw_like(n: usize, tf: f64, rdd: f64, seed: u64) -> JobInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=100)).collect();
    let w = (0..n).map(|_| rng.gen_range(1..=10)).collect();
    let total: i64 = p.iter().sum();
    let lo = (total as f64 * (1.0 - tf - rdd / 2.0)).max(0.0) as i64;
    let hi = ((total as f64 * (1.0 - tf + rdd / 2.0)) as i64).max(lo);
    let d = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
    JobInstance::tardiness(p, vec![0; n], d, w)
}
