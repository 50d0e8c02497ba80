//! Evaluate the representation axioms — proportionality, diversity,
//! faithfulness, monotonicity, and γ-effectiveness — for mechanisms on the
//! bundled example.
//!
//! Run with: cargo run --example axiom_checks

use repsel::axioms::{
    check_diversity, check_faithfulness, check_monotonicity_pair, gamma_effectiveness,
    proportionality_diff, ShareBasis, Verdict,
};
use repsel::generators::running_example;
use repsel::matrix::{CandidateSet, RepresentationMatrix};
use repsel::mechanisms::{default_guard, MechanismSpec};
use repsel::rational::{format_rational, ratio, truncate_two_decimals};

fn main() {
    let gamma = running_example();
    let guard = default_guard();
    let fptp = MechanismSpec::fptp(CandidateSet::new([0, 1, 2, 4], 5).unwrap());

    // Proportionality: largest gap between normalized vote share and
    // normalized expected weight.
    for spec in [MechanismSpec::direct(), MechanismSpec::liquid(), fptp.clone()] {
        let report = proportionality_diff(&gamma, &spec, guard).unwrap();
        println!(
            "proportionality({}) = {} ≈ {} (worst agent: {})",
            spec.kind,
            format_rational(&report.diff),
            truncate_two_decimals(&report.diff),
            gamma.label(report.witness)
        );
    }

    // Diversity and faithfulness on fptp.
    let diversity = check_diversity(&gamma, &fptp, ShareBasis::Original, guard).unwrap();
    println!("\ndiversity(fptp at {{A,B,C,E}}): {}", diversity.verdict);
    let faithfulness = check_faithfulness(&gamma, &fptp, guard).unwrap();
    println!("faithfulness(fptp at {{A,B,C,E}}): {}", faithfulness.verdict);
    assert_eq!(faithfulness.verdict, Verdict::Violated);

    // Monotonicity for an explicit matrix pair: push B's outside mass
    // further toward A, so A's share rises and nobody else's does.
    let mut rows: Vec<Vec<_>> = (0..5).map(|i| gamma.row(i).to_vec()).collect();
    rows[1] = vec![ratio(5, 6), ratio(1, 6), ratio(0, 1), ratio(0, 1), ratio(0, 1)];
    let gamma_prime = RepresentationMatrix::new(rows, None).unwrap();
    let monotonicity =
        check_monotonicity_pair(&gamma, &gamma_prime, &fptp, 0, guard).unwrap();
    println!("monotonicity(fptp, boost A): {}", monotonicity.verdict);

    // γ-effectiveness: expected size of the smallest majority coalition.
    println!();
    for spec in [
        MechanismSpec::direct(),
        fptp.clone(),
        MechanismSpec::proxy(CandidateSet::new([0, 1, 2, 4], 5).unwrap()),
        MechanismSpec::sortition(3),
    ] {
        let report = gamma_effectiveness(&gamma, &spec, guard).unwrap();
        println!(
            "gamma-effectiveness({}) = {}",
            spec.kind,
            report
                .expected_gamma
                .map(|g| format_rational(&g))
                .unwrap_or_else(|| "undefined".into())
        );
    }
}
