use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CnfInstance, Lit};

/// Uniform random 3-SAT: `clauses` clauses, each over three distinct
/// variables from `1..=vars` with independent uniform polarities.
///
/// # Panics
///
/// If `vars < 3`.
pub fn gen_random_3sat(vars: u32, clauses: usize, seed: u64) -> CnfInstance {
    assert!(vars >= 3, "random 3-SAT needs at least 3 variables");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inst = CnfInstance {
        var_count: vars,
        ..CnfInstance::default()
    };
    for _ in 0..clauses {
        let clause = sample(&mut rng, vars as usize, 3)
            .into_iter()
            .map(|i| Lit::new(i as u32 + 1, rng.gen()))
            .collect();
        inst.clauses.push(clause);
    }
    inst
}
