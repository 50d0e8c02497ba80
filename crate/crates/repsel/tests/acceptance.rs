//! Acceptance suite: end-to-end checks of the published reference values,
//! the statistical oracle equivalence, the property batteries, the axiom
//! spot checks, and the scale guard. One PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{brute_force_min_coalition, naive_delegation_weights, sparse_random_matrix};
use num::bigint::BigInt;
use num::{BigRational, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use repsel::axioms::{
    check_diversity, check_faithfulness, gamma_effectiveness, min_majority_coalition,
    proportionality_diff, sweep_epsilon_bounds, ShareBasis, SweepDomain, Verdict, Violation,
};
use repsel::generators::{generate, running_example, Family, FamilySpec};
use repsel::io::matrix_from_json_str;
use repsel::matrix::{CandidateSet, Fallback, RepresentationMatrix};
use repsel::mechanisms::{
    direct_democracy, evaluate, fptp_expected_weights, liquid_expected_weights,
    mc_expected_weights, proxy_expected_weights, sortition_expected_weights, tally_votes, Choice,
    MechanismKind, MechanismSpec, Method, ProfileSpace, TieRule, DEFAULT_GUARD,
};
use repsel::rational::{ratio, truncate_two_decimals};
use repsel::Error;

fn criterion(name: &str, body: impl FnOnce()) {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(()) => println!("acceptance {name}: PASS"),
        Err(cause) => {
            println!("acceptance {name}: FAIL");
            resume_unwind(cause);
        }
    }
}

fn abce() -> CandidateSet {
    CandidateSet::new([0, 1, 2, 4], 5).unwrap()
}

#[test]
fn criterion_1_exact_reference_values() {
    criterion("criterion 1 (exact reference values, < 5 s)", || {
        let started = Instant::now();
        let gamma = running_example();

        assert_eq!(
            gamma.expected_vote_share().shares(),
            vec![
                ratio(5, 3),
                ratio(2, 3),
                ratio(16, 15),
                ratio(1, 5),
                ratio(7, 5)
            ]
        );

        let fptp = fptp_expected_weights(
            &gamma,
            &abce(),
            TieRule::Lexicographic,
            Fallback::Abstain,
            DEFAULT_GUARD,
        )
        .unwrap();
        assert_eq!(
            fptp.to_rationals(),
            vec![
                ratio(0, 1),
                ratio(0, 1),
                ratio(1, 2),
                ratio(0, 1),
                ratio(1, 2)
            ]
        );

        let proxy = proxy_expected_weights(&gamma, &abce(), Fallback::Abstain);
        assert_eq!(
            proxy.to_rationals(),
            vec![
                ratio(1, 1),
                ratio(1, 1),
                ratio(3, 2),
                ratio(0, 1),
                ratio(3, 2)
            ]
        );

        let liquid = liquid_expected_weights(&gamma, DEFAULT_GUARD).unwrap();
        assert_eq!(
            liquid.to_rationals(),
            vec![
                ratio(89, 45),
                ratio(22, 45),
                ratio(14, 15),
                ratio(1, 5),
                ratio(7, 5)
            ]
        );

        let all_self = ProfileSpace::of_matrix(&gamma)
            .enumerate(DEFAULT_GUARD)
            .unwrap()
            .find(|p| {
                p.choices
                    .iter()
                    .enumerate()
                    .all(|(i, c)| *c == Choice::Vote(i))
            })
            .expect("all-self profile")
            .probability;
        assert_eq!(all_self, ratio(2, 45));

        for k in 1..=5i64 {
            let sortition = sortition_expected_weights(5, k as usize).unwrap();
            assert_eq!(sortition.to_rationals(), vec![ratio(k, 5); 5]);
        }

        assert!(
            started.elapsed() < Duration::from_secs(5),
            "took {:?}",
            started.elapsed()
        );
    });
}

#[test]
fn criterion_2_proportionality_table() {
    criterion("criterion 2 (proportionality table + reproduce-paper, < 10 s)", || {
        let started = Instant::now();
        let gamma = running_example();

        let eps_direct =
            proportionality_diff(&gamma, &MechanismSpec::direct(), DEFAULT_GUARD).unwrap();
        assert_eq!(eps_direct.diff, ratio(4, 25));
        assert_eq!(truncate_two_decimals(&eps_direct.diff), "0.16");

        let eps_liquid =
            proportionality_diff(&gamma, &MechanismSpec::liquid(), DEFAULT_GUARD).unwrap();
        assert_eq!(eps_liquid.diff, ratio(14, 225));
        assert_eq!(truncate_two_decimals(&eps_liquid.diff), "0.06");

        for k in 1..=5 {
            let eps =
                proportionality_diff(&gamma, &MechanismSpec::sortition(k), DEFAULT_GUARD).unwrap();
            assert_eq!(eps.diff, ratio(4, 25), "k = {k}");
            assert_eq!(truncate_two_decimals(&eps.diff), "0.16");
        }

        let fptp = sweep_epsilon_bounds(
            &gamma,
            MechanismKind::FirstPastThePost,
            SweepDomain::FixedSize(4),
            TieRule::Lexicographic,
            Fallback::Abstain,
            false,
            DEFAULT_GUARD,
        )
        .unwrap();
        assert_eq!((fptp.min_diff.clone(), fptp.max_diff.clone()), (ratio(1, 3), ratio(13, 15)));
        assert_eq!(
            format!(
                "[{}, {}]",
                truncate_two_decimals(&fptp.min_diff),
                truncate_two_decimals(&fptp.max_diff)
            ),
            "[0.33, 0.86]"
        );

        let proxy = sweep_epsilon_bounds(
            &gamma,
            MechanismKind::ProxyVoting,
            SweepDomain::FixedSize(4),
            TieRule::Lexicographic,
            Fallback::Abstain,
            false,
            DEFAULT_GUARD,
        )
        .unwrap();
        assert_eq!((proxy.min_diff.clone(), proxy.max_diff.clone()), (ratio(2, 15), ratio(1, 3)));
        assert_eq!(
            format!(
                "[{}, {}]",
                truncate_two_decimals(&proxy.min_diff),
                truncate_two_decimals(&proxy.max_diff)
            ),
            "[0.13, 0.33]"
        );

        let status = std::process::Command::new(env!("CARGO_BIN_EXE_repsel"))
            .arg("reproduce-paper")
            .output()
            .expect("binary runs");
        assert!(
            status.status.success(),
            "reproduce-paper exited with {:?}",
            status.status.code()
        );

        assert!(
            started.elapsed() < Duration::from_secs(10),
            "took {:?}",
            started.elapsed()
        );
    });
}

#[test]
fn criterion_3_monte_carlo_matches_exact_enumeration() {
    criterion("criterion 3 (Monte Carlo within 4 SE of exact)", || {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut pairs = 0usize;
        let mut within = 0usize;
        for index in 0..200u64 {
            let n = 2 + (index as usize % 5);
            let gamma = sparse_random_matrix(1000 + index, n, 3);
            let candidates = common::random_candidates(&mut rng, n);
            let seed = rng.random();

            let specs = [
                MechanismSpec::liquid(),
                MechanismSpec::fptp(candidates.clone()),
            ];
            for spec in specs {
                let exact = evaluate(&gamma, &spec, DEFAULT_GUARD)
                    .unwrap()
                    .to_f64s();
                let estimate = mc_expected_weights(
                    &gamma,
                    &spec.with_method(Method::MonteCarlo {
                        samples: 100_000,
                        seed,
                    }),
                )
                .unwrap();
                let mean = estimate.to_f64s();
                let stderr = estimate.stderr().unwrap();
                for j in 0..n {
                    pairs += 1;
                    if (mean[j] - exact[j]).abs() <= 4.0 * stderr[j] {
                        within += 1;
                    }
                }
            }
        }
        let fraction = within as f64 / pairs as f64;
        assert!(
            fraction >= 0.99,
            "only {within}/{pairs} = {fraction:.4} of (matrix, coordinate) pairs within 4 SE"
        );
        println!("  mc oracle agreement: {within}/{pairs} pairs within 4 SE");
    });
}

#[test]
fn criterion_4_property_batteries() {
    criterion("criterion 4 (property batteries)", || {
        // Validation rejects each malformed fixture with the right error.
        let nonsquare = r#"{"n": 2, "rows": [["1/2", "1/2"], ["1"]]}"#;
        assert!(matches!(
            matrix_from_json_str(nonsquare).unwrap_err(),
            Error::NonSquare { .. }
        ));
        let negative = r#"{"n": 2, "rows": [["3/2", "-1/2"], ["0", "1"]]}"#;
        assert!(matches!(
            matrix_from_json_str(negative).unwrap_err(),
            Error::NegativeEntry { row: 0, col: 1 }
        ));
        let bad_sum = r#"{"n": 3, "rows": [["1/2", "1/3", "0"], ["1", "0", "0"], ["0", "0", "1"]]}"#;
        assert!(matches!(
            matrix_from_json_str(bad_sum).unwrap_err(),
            Error::RowSumNotOne { row: 0, .. }
        ));

        // Expected vote shares always sum to n, on 100 random matrices.
        for index in 0..100u64 {
            let n = 2 + (index as usize % 7);
            let gamma = if index % 2 == 0 {
                sparse_random_matrix(index, n, n)
            } else {
                generate(
                    &FamilySpec::new(
                        Family::RandomStochastic {
                            concentration: ratio(1, 1),
                            denominator_cap: 1_000_000,
                        },
                        n,
                    )
                    .with_seed(index),
                )
                .unwrap()
            };
            assert_eq!(
                gamma.expected_vote_share().l1(),
                BigRational::from_integer(BigInt::from(n))
            );
        }

        // Liquid weight conservation per profile, exhaustively, n <= 5:
        // realized weights match an independent walk oracle and sum to
        // n minus the lost votes.
        let mut instances = vec![running_example()];
        for seed in 0..12u64 {
            let n = 2 + (seed as usize % 4);
            instances.push(sparse_random_matrix(500 + seed, n, 3));
        }
        for gamma in &instances {
            let n = gamma.n();
            for profile in ProfileSpace::of_matrix(gamma).enumerate(DEFAULT_GUARD).unwrap() {
                let choices: Vec<usize> = profile
                    .choices
                    .iter()
                    .map(|c| match c {
                        Choice::Vote(j) => *j,
                        Choice::Abstain => unreachable!(),
                    })
                    .collect();
                let weights = repsel::mechanisms::resolve_delegations(&choices);
                let (oracle, lost) = naive_delegation_weights(&choices);
                assert_eq!(weights, oracle);
                assert_eq!(weights.iter().sum::<u64>(), (n - lost) as u64);
            }
        }

        // FPTP awards total weight exactly 1 per profile once a vote is cast.
        let gamma = running_example();
        for tie_rule in [TieRule::Lexicographic, TieRule::EqualSplit] {
            for candidates in [abce(), CandidateSet::new([1, 3], 5).unwrap()] {
                let projected = gamma.project(&candidates, Fallback::Abstain);
                let mut counts = vec![0u64; 5];
                for profile in ProfileSpace::of_projection(&projected)
                    .enumerate(DEFAULT_GUARD)
                    .unwrap()
                {
                    tally_votes(&profile.choices, &mut counts);
                    let weights = repsel::mechanisms::fptp_realized_weights(&counts, tie_rule);
                    let total: BigRational = weights.iter().sum();
                    if counts.iter().any(|&c| c > 0) {
                        assert!(total.is_one());
                    } else {
                        assert!(total.is_zero());
                    }
                }
            }
        }

        // Proxy conservation: l1 equals the number of voters.
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for index in 0..40u64 {
            let n = 2 + (index as usize % 5);
            let gamma = sparse_random_matrix(2000 + index, n, 2);
            let candidates = common::random_candidates(&mut rng, n);
            let proxy = proxy_expected_weights(&gamma, &candidates, Fallback::Abstain);
            let expected =
                BigRational::from_integer(BigInt::from(n - proxy.abstainers.len()));
            assert_eq!(proxy.l1_exact().unwrap(), expected);
        }

        // Sortition with a full body is direct democracy.
        for n in 1..=6 {
            assert_eq!(
                sortition_expected_weights(n, n).unwrap().to_rationals(),
                direct_democracy(n).to_rationals()
            );
        }

        // Greedy minimum majority coalition matches exhaustive search.
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let n = rng.random_range(1..=10);
            let mut weights: Vec<BigRational> = (0..n)
                .map(|_| ratio(rng.random_range(0..6), rng.random_range(1..4)))
                .collect();
            let slot = rng.random_range(0..n);
            weights[slot] = ratio(rng.random_range(1..6), 1);
            assert_eq!(
                min_majority_coalition(&weights).ok(),
                brute_force_min_coalition(&weights)
            );
        }

        // Sweep witnesses reproduce their reported extrema.
        for (seed, kind) in [
            (1u64, MechanismKind::FirstPastThePost),
            (2, MechanismKind::ProxyVoting),
        ] {
            let gamma = sparse_random_matrix(3000 + seed, 5, 3);
            let sweep = sweep_epsilon_bounds(
                &gamma,
                kind,
                SweepDomain::AllProperSubsets,
                TieRule::Lexicographic,
                Fallback::Abstain,
                false,
                DEFAULT_GUARD,
            )
            .unwrap();
            for (witness, expected) in [
                (&sweep.min_witness, &sweep.min_diff),
                (&sweep.max_witness, &sweep.max_diff),
            ] {
                let spec = match kind {
                    MechanismKind::FirstPastThePost => MechanismSpec::fptp(witness.clone()),
                    _ => MechanismSpec::proxy(witness.clone()),
                };
                assert_eq!(
                    proportionality_diff(&gamma, &spec, DEFAULT_GUARD).unwrap().diff,
                    *expected
                );
            }
        }
    });
}

#[test]
fn criterion_5_axiom_spot_checks() {
    criterion("criterion 5 (axiom spot checks)", || {
        let gamma = running_example();
        let fptp_spec = MechanismSpec::fptp(abce());

        let diversity =
            check_diversity(&gamma, &fptp_spec, ShareBasis::Original, DEFAULT_GUARD).unwrap();
        assert_eq!(diversity.verdict, Verdict::Violated);
        let witnesses: Vec<usize> = diversity
            .violations
            .iter()
            .map(|v| match v {
                Violation::Agent { agent, .. } => *agent,
                other => panic!("unexpected witness {other:?}"),
            })
            .collect();
        assert_eq!(witnesses, vec![0, 1], "diversity witnesses are A and B");

        let faithfulness = check_faithfulness(&gamma, &fptp_spec, DEFAULT_GUARD).unwrap();
        assert_eq!(faithfulness.verdict, Verdict::Violated);
        let pairs: Vec<(usize, usize)> = faithfulness
            .violations
            .iter()
            .map(|v| match v {
                Violation::Pair { higher, lower, .. } => (*higher, *lower),
                other => panic!("unexpected witness {other:?}"),
            })
            .collect();
        assert!(pairs.contains(&(0, 2)), "witness pair (A, C), got {pairs:?}");

        for spec in [MechanismSpec::direct(), MechanismSpec::sortition(2)] {
            assert!(check_diversity(&gamma, &spec, ShareBasis::Original, DEFAULT_GUARD)
                .unwrap()
                .holds());
            assert!(check_faithfulness(&gamma, &spec, DEFAULT_GUARD).unwrap().holds());
        }

        let direct = gamma_effectiveness(&gamma, &MechanismSpec::direct(), DEFAULT_GUARD).unwrap();
        assert_eq!(direct.expected_gamma, Some(ratio(3, 1)));
        assert_eq!(direct.distribution, BTreeMap::from([(3, ratio(1, 1))]));

        let fptp = gamma_effectiveness(&gamma, &fptp_spec, DEFAULT_GUARD).unwrap();
        assert_eq!(fptp.expected_gamma, Some(ratio(1, 1)));

        let proxy =
            gamma_effectiveness(&gamma, &MechanismSpec::proxy(abce()), DEFAULT_GUARD).unwrap();
        assert_eq!(proxy.expected_gamma, Some(ratio(2, 1)));
    });
}

#[test]
fn criterion_6_scale_guard() {
    criterion("criterion 6 (n = 12 liquid enumeration < 60 s, guard trips fast)", || {
        let n = 12;
        let rows: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut row = vec![BigRational::zero(); n];
                row[i] = ratio(1, 2);
                row[(i + 1) % n] = ratio(1, 4);
                row[(i + 5) % n] = ratio(1, 4);
                row
            })
            .collect();
        let gamma = RepresentationMatrix::new(rows, None).unwrap();
        assert_eq!(ProfileSpace::of_matrix(&gamma).outcome_count(), 531_441);

        let started = Instant::now();
        let weights = liquid_expected_weights(&gamma, DEFAULT_GUARD).unwrap();
        let elapsed = started.elapsed();
        assert!(
            elapsed < Duration::from_secs(60),
            "enumeration took {elapsed:?}"
        );
        // Cycles occur with positive probability, so some weight is lost.
        let total = weights.l1_exact().unwrap();
        assert!(total < BigRational::from_integer(BigInt::from(12)));
        assert!(total > BigRational::from_integer(BigInt::from(11)));
        println!("  n = 12 liquid enumeration: {elapsed:?}, total weight {total}");

        // A larger state space fails fast instead of hanging.
        let uniform = generate(&FamilySpec::new(Family::Uniform, 12)).unwrap();
        let started = Instant::now();
        let err = liquid_expected_weights(&uniform, DEFAULT_GUARD).unwrap_err();
        assert!(matches!(err, Error::StateSpaceTooLarge { size, guard }
            if size == (12u128).pow(12) && guard == DEFAULT_GUARD));
        assert!(started.elapsed() < Duration::from_secs(1));
    });
}
