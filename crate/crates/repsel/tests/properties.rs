//! Property suites for the library's structural invariants: conservation
//! laws, idempotence, anonymity, block separability, and the pinned outcome
//! of the seeded monotonicity search.

mod common;

use common::sparse_random_matrix;
use num::bigint::BigInt;
use num::{BigRational, One, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use repsel::axioms::search_monotonicity_counterexample;
use repsel::generators::{generate, running_example, Family, FamilySpec};
use repsel::matrix::{CandidateSet, Fallback, RepresentationMatrix};
use repsel::mechanisms::{
    fptp_expected_weights, liquid_expected_weights, proxy_expected_weights, MechanismKind,
    ProfileSpace, TieRule, DEFAULT_GUARD,
};
use repsel::rational::ratio;

fn permutation(seed: u64, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    perm
}

/// Relabels agents: entry (i, j) moves to (perm[i], perm[j]).
fn permute_matrix(gamma: &RepresentationMatrix, perm: &[usize]) -> RepresentationMatrix {
    let n = gamma.n();
    let mut rows = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            rows[perm[i]][perm[j]] = gamma.entry(i, j).clone();
        }
    }
    RepresentationMatrix::new(rows, None).unwrap()
}

proptest! {
    #[test]
    fn vote_shares_always_sum_to_n(seed in 0u64..5000, n in 2usize..=6) {
        let gamma = sparse_random_matrix(seed, n, n);
        prop_assert_eq!(
            gamma.expected_vote_share().l1(),
            BigRational::from_integer(BigInt::from(n))
        );
    }

    #[test]
    fn profile_probabilities_conserve_mass(seed in 0u64..5000, n in 2usize..=5) {
        let gamma = sparse_random_matrix(seed, n, 3);
        let mut total = BigRational::zero();
        for profile in ProfileSpace::of_matrix(&gamma).enumerate(DEFAULT_GUARD).unwrap() {
            prop_assert!(profile.probability > BigRational::zero());
            prop_assert!(profile.probability <= BigRational::one());
            total += &profile.probability;
        }
        prop_assert!(total.is_one());
    }

    #[test]
    fn normalization_is_exact(seed in 0u64..5000, n in 2usize..=6) {
        let gamma = sparse_random_matrix(seed, n, n);
        let normalized = gamma.expected_vote_share().normalized().unwrap();
        let total: BigRational = normalized.iter().sum();
        prop_assert!(total.is_one());
    }

    #[test]
    fn projection_is_idempotent_and_tracks_abstainers(
        seed in 0u64..5000,
        n in 2usize..=6,
        candidate_seed in 0u64..1000,
    ) {
        let gamma = sparse_random_matrix(seed, n, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(candidate_seed);
        let candidates = common::random_candidates(&mut rng, n);

        let abstain = gamma.project(&candidates, Fallback::Abstain);
        let zero_mass_rows: Vec<usize> = (0..n)
            .filter(|&i| {
                !candidates.contains(i)
                    && candidates.members().iter().all(|&j| gamma.entry(i, j).is_zero())
            })
            .collect();
        prop_assert_eq!(abstain.abstainers(), zero_mass_rows.as_slice());

        let uniform = gamma.project(&candidates, Fallback::Uniform);
        prop_assert!(uniform.abstainers().is_empty());
        for i in 0..n {
            let row_sum: BigRational = uniform.row(i).iter().sum();
            prop_assert!(row_sum.is_one());
        }

        // Candidate rows are already self-indicators; projecting the
        // projected rows again changes nothing.
        for fallback in [Fallback::Abstain, Fallback::Uniform] {
            let once = gamma.project(&candidates, fallback);
            let rows: Vec<Vec<BigRational>> = (0..n).map(|i| once.row(i).to_vec()).collect();
            if rows.iter().all(|r| r.iter().sum::<BigRational>().is_one()) {
                let twice = RepresentationMatrix::new(rows, None)
                    .unwrap()
                    .project(&candidates, fallback);
                for i in 0..n {
                    prop_assert_eq!(once.row(i), twice.row(i));
                }
            }
        }
    }

    #[test]
    fn liquid_weight_is_conserved_up_to_lost_votes(seed in 0u64..2000, n in 2usize..=5) {
        let gamma = sparse_random_matrix(seed, n, 3);
        let weights = liquid_expected_weights(&gamma, DEFAULT_GUARD).unwrap();
        // Everything not lost to a cycle is conserved; a matrix without
        // self-loops can lose every vote.
        let total = weights.l1_exact().unwrap();
        prop_assert!(total <= BigRational::from_integer(BigInt::from(n)));
        prop_assert!(total >= BigRational::zero());

        // Expected lost votes computed independently, profile by profile.
        let mut expected_lost = BigRational::zero();
        for profile in ProfileSpace::of_matrix(&gamma).enumerate(DEFAULT_GUARD).unwrap() {
            let choices: Vec<usize> = profile
                .choices
                .iter()
                .map(|c| match c {
                    repsel::mechanisms::Choice::Vote(j) => *j,
                    repsel::mechanisms::Choice::Abstain => unreachable!(),
                })
                .collect();
            let (_, lost) = common::naive_delegation_weights(&choices);
            expected_lost += profile.probability * BigRational::from_integer(BigInt::from(lost));
        }
        prop_assert_eq!(total, BigRational::from_integer(BigInt::from(n)) - expected_lost);
    }

    #[test]
    fn fptp_l1_is_the_probability_a_vote_is_cast(
        seed in 0u64..2000,
        n in 2usize..=5,
        candidate_seed in 0u64..1000,
        split in proptest::bool::ANY,
    ) {
        let gamma = sparse_random_matrix(seed, n, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(candidate_seed);
        let candidates = common::random_candidates(&mut rng, n);
        let tie_rule = if split { TieRule::EqualSplit } else { TieRule::Lexicographic };
        let weights =
            fptp_expected_weights(&gamma, &candidates, tie_rule, Fallback::Abstain, DEFAULT_GUARD)
                .unwrap();
        // Candidates always cast their own vote, so the l1 norm is exactly 1.
        prop_assert!(weights.l1_exact().unwrap().is_one());
    }

    #[test]
    fn fptp_expectation_matches_per_profile_awards(
        seed in 0u64..2000,
        n in 2usize..=5,
        candidate_seed in 0u64..1000,
        split in proptest::bool::ANY,
    ) {
        // The streaming expectation must agree with folding the per-profile
        // award vectors by hand.
        let gamma = sparse_random_matrix(seed, n, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(candidate_seed);
        let candidates = common::random_candidates(&mut rng, n);
        let tie_rule = if split { TieRule::EqualSplit } else { TieRule::Lexicographic };

        let streamed =
            fptp_expected_weights(&gamma, &candidates, tie_rule, Fallback::Abstain, DEFAULT_GUARD)
                .unwrap()
                .to_rationals();

        let projected = gamma.project(&candidates, Fallback::Abstain);
        let mut folded = vec![BigRational::zero(); n];
        let mut counts = vec![0u64; n];
        for profile in ProfileSpace::of_projection(&projected).enumerate(DEFAULT_GUARD).unwrap() {
            repsel::mechanisms::tally_votes(&profile.choices, &mut counts);
            let awards = repsel::mechanisms::fptp_realized_weights(&counts, tie_rule);
            for (acc, award) in folded.iter_mut().zip(awards) {
                *acc += award * &profile.probability;
            }
        }
        prop_assert_eq!(streamed, folded);
    }

    #[test]
    fn equal_split_fptp_is_anonymous(
        seed in 0u64..1000,
        n in 2usize..=5,
        candidate_seed in 0u64..500,
        perm_seed in 0u64..500,
    ) {
        let gamma = sparse_random_matrix(seed, n, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(candidate_seed);
        let candidates = common::random_candidates(&mut rng, n);
        let perm = permutation(perm_seed, n);

        let original = fptp_expected_weights(
            &gamma,
            &candidates,
            TieRule::EqualSplit,
            Fallback::Abstain,
            DEFAULT_GUARD,
        )
        .unwrap()
        .to_rationals();

        let relabeled_candidates = CandidateSet::new(
            candidates.members().iter().map(|&j| perm[j]),
            n,
        )
        .unwrap();
        let relabeled = fptp_expected_weights(
            &permute_matrix(&gamma, &perm),
            &relabeled_candidates,
            TieRule::EqualSplit,
            Fallback::Abstain,
            DEFAULT_GUARD,
        )
        .unwrap()
        .to_rationals();

        for j in 0..n {
            prop_assert_eq!(&relabeled[perm[j]], &original[j]);
        }
    }
}

#[test]
fn lexicographic_fptp_is_anonymous_only_without_ties() {
    // Tie-free instance: the worked example at {A, B, C, E} stays anonymous
    // under any relabeling.
    let gamma = running_example();
    let candidates = CandidateSet::new([0, 1, 2, 4], 5).unwrap();
    let original = fptp_expected_weights(
        &gamma,
        &candidates,
        TieRule::Lexicographic,
        Fallback::Abstain,
        DEFAULT_GUARD,
    )
    .unwrap()
    .to_rationals();
    for perm_seed in 0..10 {
        let perm = permutation(perm_seed, 5);
        let relabeled = fptp_expected_weights(
            &permute_matrix(&gamma, &perm),
            &CandidateSet::new(candidates.members().iter().map(|&j| perm[j]), 5).unwrap(),
            TieRule::Lexicographic,
            Fallback::Abstain,
            DEFAULT_GUARD,
        )
        .unwrap()
        .to_rationals();
        for j in 0..5 {
            assert_eq!(relabeled[perm[j]], original[j]);
        }
    }

    // Tied instance: on the identity matrix both candidates self-vote, the
    // lexicographic winner is whoever has the lower index, so swapping the
    // labels moves the weight.
    let identity = generate(&FamilySpec::new(Family::Identity, 2)).unwrap();
    let both = CandidateSet::full(2);
    let weights = fptp_expected_weights(
        &identity,
        &both,
        TieRule::Lexicographic,
        Fallback::Abstain,
        DEFAULT_GUARD,
    )
    .unwrap()
    .to_rationals();
    assert_eq!(weights, vec![ratio(1, 1), ratio(0, 1)]);
    let swapped = fptp_expected_weights(
        &permute_matrix(&identity, &[1, 0]),
        &both,
        TieRule::Lexicographic,
        Fallback::Abstain,
        DEFAULT_GUARD,
    )
    .unwrap()
    .to_rationals();
    // Anonymity would require the weight to follow the label swap.
    assert_ne!(swapped, vec![ratio(0, 1), ratio(1, 1)]);
}

#[test]
fn fully_polarized_blocks_separate() {
    let blocks = FamilySpec::new(
        Family::BlockPolarized {
            blocks: vec![2, 3],
            intra_mass: ratio(1, 1),
        },
        5,
    );
    let gamma = generate(&blocks).unwrap();

    let first = RepresentationMatrix::new(
        (0..2).map(|i| gamma.row(i)[..2].to_vec()).collect(),
        None,
    )
    .unwrap();
    let second = RepresentationMatrix::new(
        (2..5).map(|i| gamma.row(i)[2..].to_vec()).collect(),
        None,
    )
    .unwrap();

    // Liquid democracy decomposes over the blocks.
    let full = liquid_expected_weights(&gamma, DEFAULT_GUARD).unwrap().to_rationals();
    let mut concatenated = liquid_expected_weights(&first, DEFAULT_GUARD)
        .unwrap()
        .to_rationals();
    concatenated.extend(liquid_expected_weights(&second, DEFAULT_GUARD).unwrap().to_rationals());
    assert_eq!(full, concatenated);

    // So does proxy voting with block-local candidates.
    let candidates = CandidateSet::new([0, 2, 3], 5).unwrap();
    let full_proxy = proxy_expected_weights(&gamma, &candidates, Fallback::Abstain).to_rationals();
    let mut expected = proxy_expected_weights(
        &first,
        &CandidateSet::new([0], 2).unwrap(),
        Fallback::Abstain,
    )
    .to_rationals();
    expected.extend(
        proxy_expected_weights(
            &second,
            &CandidateSet::new([0, 1], 3).unwrap(),
            Fallback::Abstain,
        )
        .to_rationals(),
    );
    assert_eq!(full_proxy, expected);
}

/// Regression pin: the seeded first-past-the-post search finds no
/// monotonicity counterexample under the mass-shift premise construction.
#[test]
fn pinned_fptp_monotonicity_search_outcome() {
    let witness = search_monotonicity_counterexample(
        MechanismKind::FirstPastThePost,
        5,
        10_000,
        2026,
        DEFAULT_GUARD,
    )
    .unwrap();
    assert!(witness.is_none());
}
