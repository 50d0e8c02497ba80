//! Compute expected voting weights under all five selection mechanisms on
//! the bundled five-agent example, with each run's position on the
//! open-closed / flexible-rigid / direct-virtual axes.
//!
//! Run with: cargo run --example five_mechanisms

use repsel::generators::running_example;
use repsel::matrix::CandidateSet;
use repsel::mechanisms::{classify_mechanism, default_guard, evaluate, MechanismSpec};
use repsel::rational::format_rational;

fn main() {
    let gamma = running_example();
    let candidates = CandidateSet::new([0, 1, 2, 4], 5).unwrap();
    let guard = default_guard();

    let specs = vec![
        MechanismSpec::direct(),
        MechanismSpec::fptp(candidates.clone()),
        MechanismSpec::proxy(candidates),
        MechanismSpec::liquid(),
        MechanismSpec::sortition(2),
    ];

    for spec in specs {
        let weights = evaluate(&gamma, &spec, guard).expect("within guard");
        let classification = classify_mechanism(&spec, &weights);
        let rendered = weights
            .to_rationals()
            .iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .join(", ");
        println!("{:<10} ({rendered})", spec.kind.to_string());
        println!(
            "{:<10}   l1 = {}; {}, {}, {}",
            "",
            format_rational(&weights.l1_exact().unwrap()),
            classification.openness,
            classification.rigidity,
            classification.directness,
        );
    }
}
