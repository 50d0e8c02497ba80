//! Generate structured matrix families — polarized blocks, power-seekers,
//! seeded random rows — and summarize their algebraic structure.
//!
//! Run with: cargo run --example matrix_families

use repsel::generators::{
    generate, matrix_stats, Family, FamilySpec, DEFAULT_DENOMINATOR_CAP,
};
use repsel::rational::{format_rational, ratio};

fn main() {
    let specs = vec![
        ("identity", FamilySpec::new(Family::Identity, 5)),
        ("uniform", FamilySpec::new(Family::Uniform, 5)),
        ("running example", FamilySpec::new(Family::RunningExample, 5)),
        (
            "two polarized blocks",
            FamilySpec::new(
                Family::BlockPolarized {
                    blocks: vec![2, 3],
                    intra_mass: ratio(9, 10),
                },
                5,
            ),
        ),
        (
            "power-seeking diagonal",
            FamilySpec::new(
                Family::PowerSeeking {
                    trace_mass: ratio(3, 4),
                },
                5,
            ),
        ),
        (
            "random rows, seed 11",
            FamilySpec::new(
                Family::RandomStochastic {
                    concentration: ratio(2, 1),
                    denominator_cap: DEFAULT_DENOMINATOR_CAP,
                },
                5,
            )
            .with_seed(11),
        ),
    ];

    for (name, spec) in specs {
        let gamma = generate(&spec).unwrap();
        let stats = matrix_stats(&gamma);
        println!(
            "{name}: trace {} rank {} components {:?}",
            format_rational(&stats.trace),
            stats.rank,
            stats.components
        );
        println!(
            "  first row: ({})",
            gamma
                .row(0)
                .iter()
                .map(format_rational)
                .collect::<Vec<_>>()
                .join(", ")
        );
    }
}
