//! Project a matrix onto a candidate set: candidates vote for themselves,
//! everyone else renormalizes onto the candidates, and voters with no mass
//! on any candidate either abstain or spread out uniformly.
//!
//! Run with: cargo run --example candidate_projection

use repsel::generators::running_example;
use repsel::matrix::{CandidateSet, Fallback};
use repsel::rational::format_rational;

fn print_rows(label: &str, rows: Vec<Vec<String>>, names: &[String]) {
    println!("{label}");
    for (name, row) in names.iter().zip(rows) {
        println!("  {:<3} {}", name, row.join("  "));
    }
}

fn main() {
    let gamma = running_example();
    let names: Vec<String> = (0..5).map(|i| gamma.label(i)).collect();
    print_rows(
        "original matrix:",
        (0..5)
            .map(|i| gamma.row(i).iter().map(format_rational).collect())
            .collect(),
        &names,
    );

    let candidates = CandidateSet::new([0, 1, 2, 4], 5).unwrap();
    let projected = gamma.project(&candidates, Fallback::Abstain);
    print_rows(
        "\nprojected on {A, B, C, E}:",
        (0..5)
            .map(|i| projected.row(i).iter().map(format_rational).collect())
            .collect(),
        &names,
    );

    // With a single candidate most voters have nowhere to go.
    let only_b = CandidateSet::new([1], 5).unwrap();
    let abstaining = gamma.project(&only_b, Fallback::Abstain);
    println!(
        "\nprojected on {{B}} with the abstain fallback: abstainers {:?}",
        abstaining
            .abstainers()
            .iter()
            .map(|&i| gamma.label(i))
            .collect::<Vec<_>>()
    );

    let uniform = gamma.project(&only_b, Fallback::Uniform);
    println!(
        "projected on {{B}} with the uniform fallback: abstainers {:?}, row A = ({})",
        uniform.abstainers(),
        uniform.row(0).iter().map(format_rational).collect::<Vec<_>>().join(", ")
    );
}
