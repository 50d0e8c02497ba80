//! Liquid democracy internals: enumerate vote profiles with their exact
//! probabilities and resolve each profile's transitive delegations into
//! realized weights (cycles lose their votes).
//!
//! Run with: cargo run --example delegation_resolution

use repsel::generators::running_example;
use repsel::mechanisms::{
    default_guard, liquid_expected_weights, resolve_delegations, Choice, ProfileSpace,
};
use repsel::rational::format_rational;

fn main() {
    // Resolution on fixed delegation choices (index i delegates to choices[i];
    // self-votes are body members).
    for choices in [vec![0, 1, 2], vec![1, 1, 0], vec![1, 2, 0], vec![1, 2, 1, 3]] {
        println!(
            "delegations {choices:?} -> realized weights {:?}",
            resolve_delegations(&choices)
        );
    }

    // Every profile of the running example, with its probability.
    let gamma = running_example();
    let space = ProfileSpace::of_matrix(&gamma);
    println!(
        "\nthe example induces {} delegation profiles:",
        space.outcome_count()
    );
    for profile in space.enumerate(default_guard()).unwrap() {
        let choices: Vec<usize> = profile
            .choices
            .iter()
            .map(|c| match c {
                Choice::Vote(j) => *j,
                Choice::Abstain => unreachable!("rows are stochastic"),
            })
            .collect();
        let weights = resolve_delegations(&choices);
        println!(
            "  p = {:<5} choices {:?} -> weights {:?}",
            format_rational(&profile.probability),
            choices,
            weights
        );
    }

    let expected = liquid_expected_weights(&gamma, default_guard()).unwrap();
    println!(
        "\nexpected weights: ({})",
        expected
            .to_rationals()
            .iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .join(", ")
    );
}
