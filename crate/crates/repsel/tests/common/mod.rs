//! Helpers shared by the integration suites: seeded sparse matrix sampling
//! and independent brute-force oracles.
#![allow(dead_code)] // each test target uses a different subset

use num::bigint::BigInt;
use num::{BigRational, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use repsel::matrix::{CandidateSet, RepresentationMatrix};

/// Deterministic random row-stochastic matrix whose rows have at most
/// `max_support` nonzero entries, each a fraction with a small denominator.
pub fn sparse_random_matrix(seed: u64, n: usize, max_support: usize) -> RepresentationMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n)
        .map(|_| {
            let support_size = rng.random_range(1..=max_support.min(n));
            let targets = rand::seq::index::sample(&mut rng, n, support_size);
            let parts: Vec<u64> = (0..support_size).map(|_| rng.random_range(1..=7)).collect();
            let total: u64 = parts.iter().sum();
            let mut row = vec![BigRational::zero(); n];
            for (target, part) in targets.into_iter().zip(parts) {
                row[target] = BigRational::new(BigInt::from(part), BigInt::from(total));
            }
            row
        })
        .collect();
    RepresentationMatrix::new(rows, None).expect("constructed stochastic")
}

/// A random nonempty candidate set.
pub fn random_candidates(rng: &mut ChaCha8Rng, n: usize) -> CandidateSet {
    let size = rng.random_range(1..=n);
    let members = rand::seq::index::sample(rng, n, size);
    CandidateSet::new(members, n).expect("nonempty, in range")
}

/// Independent delegation oracle: walk each agent's chain for at most `n`
/// steps; landing on a self-voter credits that sink, anything else is a lost
/// vote. Returns the weights and the number of lost votes.
pub fn naive_delegation_weights(choices: &[usize]) -> (Vec<u64>, usize) {
    let n = choices.len();
    let mut weights = vec![0u64; n];
    let mut lost = 0;
    for start in 0..n {
        let mut current = start;
        let mut landed = None;
        for _ in 0..n {
            if choices[current] == current {
                landed = Some(current);
                break;
            }
            current = choices[current];
        }
        match landed {
            Some(sink) => weights[sink] += 1,
            None => lost += 1,
        }
    }
    (weights, lost)
}

/// Exhaustive minimum-majority oracle over all `2^n` coalitions.
pub fn brute_force_min_coalition(weights: &[BigRational]) -> Option<usize> {
    let n = weights.len();
    let total: BigRational = weights.iter().sum();
    if !(total > BigRational::zero()) {
        return None;
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let mut best: Option<usize> = None;
    for mask in 1u64..(1 << n) {
        let sum: BigRational = (0..n)
            .filter(|&j| mask & (1 << j) != 0)
            .map(|j| &weights[j])
            .sum();
        if &two * &sum > total {
            let size = mask.count_ones() as usize;
            best = Some(best.map_or(size, |b: usize| b.min(size)));
        }
    }
    best
}
