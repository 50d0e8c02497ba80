//! Sweep proportionality over candidate sets: best and worst ε for the
//! closed mechanisms, over all sets of a fixed size or over every nonempty
//! proper subset.
//!
//! Run with: cargo run --example candidate_sweeps

use repsel::axioms::{sweep_epsilon_bounds, SweepDomain};
use repsel::generators::running_example;
use repsel::matrix::Fallback;
use repsel::mechanisms::{default_guard, MechanismKind, TieRule};
use repsel::rational::{format_rational, truncate_two_decimals};

fn main() {
    let gamma = running_example();
    let guard = default_guard();
    let names = |members: &[usize]| {
        members
            .iter()
            .map(|&j| gamma.label(j))
            .collect::<Vec<_>>()
            .join(", ")
    };

    for (kind, domain) in [
        (MechanismKind::FirstPastThePost, SweepDomain::FixedSize(4)),
        (MechanismKind::ProxyVoting, SweepDomain::FixedSize(4)),
        (MechanismKind::ProxyVoting, SweepDomain::AllProperSubsets),
    ] {
        let sweep = sweep_epsilon_bounds(
            &gamma,
            kind,
            domain,
            TieRule::Lexicographic,
            Fallback::Abstain,
            false,
            guard,
        )
        .unwrap();
        println!("{kind} over {domain}:");
        println!(
            "  epsilon in [{}, {}] ≈ [{}, {}]",
            format_rational(&sweep.min_diff),
            format_rational(&sweep.max_diff),
            truncate_two_decimals(&sweep.min_diff),
            truncate_two_decimals(&sweep.max_diff)
        );
        println!(
            "  best candidates  {{{}}}\n  worst candidates {{{}}}",
            names(sweep.min_witness.members()),
            names(sweep.max_witness.members())
        );
        println!("  ({} candidate sets evaluated)\n", sweep.evaluations.len());
    }
}
