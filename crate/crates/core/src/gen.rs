//! Seeded random instance generators.

use rand::Rng;

use crate::model::{Instance, Valuation};
use crate::rational::Rational;

/// Unweighted additive instance with integer values uniform in `[0, value_range]`.
pub fn random_additive<R: Rng>(rng: &mut R, n: usize, m: usize, value_range: u64) -> Instance {
    let rows = (0..n)
        .map(|_| {
            let values = (0..m)
                .map(|_| Rational::from(rng.random_range(0..=value_range) as i64))
                .collect();
            Valuation::Additive(values)
        })
        .collect();
    Instance::new(m, rows, None).expect("generated values are non-negative")
}

/// Additive instance with integer weights uniform in `[1, max_weight]`.
pub fn random_weighted_additive<R: Rng>(rng: &mut R, n: usize, m: usize, value_range: u64, max_weight: u64) -> Instance {
    let weights = random_weights(rng, n, max_weight);
    random_additive(rng, n, m, value_range)
        .with_weights(weights)
        .expect("generated weights are positive")
}

/// Binary additive instance with integer weights uniform in `[1, max_weight]`.
pub fn random_binary_weighted<R: Rng>(rng: &mut R, n: usize, m: usize, max_weight: u64) -> Instance {
    random_weighted_additive(rng, n, m, 1, max_weight)
}

fn random_weights<R: Rng>(rng: &mut R, n: usize, max_weight: u64) -> Vec<Rational> {
    (0..n)
        .map(|_| Rational::from(rng.random_range(1..=max_weight) as i64))
        .collect()
}

/// Unweighted instance of monotone table valuations: each subset is worth the
/// best of its one-smaller subsets plus a random step in `[0, max_step]`.
pub fn random_monotone_table<R: Rng>(rng: &mut R, n: usize, m: usize, max_step: u64) -> Instance {
    let valuations = (0..n)
        .map(|_| {
            let mut table = vec![0i64; 1usize << m];
            for mask in 1..table.len() {
                let floor = (0..m)
                    .filter(|g| mask >> g & 1 == 1)
                    .map(|g| table[mask & !(1 << g)])
                    .max()
                    .unwrap_or(0);
                table[mask] = floor + rng.random_range(0..=max_step) as i64;
            }
            Valuation::Table(table.into_iter().map(Rational::from).collect())
        })
        .collect();
    Instance::new(m, valuations, None).expect("generated tables are monotone")
}
