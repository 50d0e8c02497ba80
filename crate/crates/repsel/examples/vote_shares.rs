//! Build a representation matrix, validate it, and read off expected vote
//! shares — the column sums that every mechanism is measured against.
//!
//! Run with: cargo run --example vote_shares

use repsel::io::matrix_from_json_str;
use repsel::matrix::normalize_l1;
use repsel::rational::format_rational;

fn main() {
    // Matrices can come from JSON; rationals are "p/q" strings or decimals
    // (decimals convert exactly: 0.4 becomes 2/5).
    let gamma = matrix_from_json_str(
        r#"{
            "n": 3,
            "labels": ["ann", "bob", "cyn"],
            "rows": [
                ["1/2", "1/2", 0],
                [0.25,  0.75,  0],
                [0,     "1/3", "2/3"]
            ]
        }"#,
    )
    .expect("stochastic matrix");

    let shares = gamma.expected_vote_share();
    println!("expected vote shares (column sums):");
    for (i, share) in shares.shares().iter().enumerate() {
        println!("  {:<4} {}", gamma.label(i), format_rational(share));
    }
    println!("total: {} (always equals n)", format_rational(&shares.l1()));

    let normalized = normalize_l1(shares.shares()).expect("nonzero");
    println!(
        "normalized: ({})",
        normalized
            .iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .join(", ")
    );

    // Validation pinpoints what is wrong with a malformed grid.
    let broken = matrix_from_json_str(r#"{"n": 2, "rows": [["1/2", "1/3"], [0, 1]]}"#);
    println!("malformed grid: {}", broken.unwrap_err());
}
