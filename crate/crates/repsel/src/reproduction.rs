//! Built-in reference check: recomputes every worked number of the bundled
//! five-agent example and compares it against the published values, from the
//! expected vote shares through all five mechanisms to the proportionality
//! table with its candidate-set sweep intervals.

use num::BigRational;
use serde::Serialize;

use crate::axioms::{proportionality_diff, sweep_epsilon_bounds, SweepDomain};
use crate::generators::running_example;
use crate::matrix::{CandidateSet, Fallback};
use crate::mechanisms::{
    evaluate, MechanismKind, MechanismSpec, ProfileSpace, TieRule, DEFAULT_GUARD,
};
use crate::rational::{format_rational, ratio, truncate_two_decimals};
use crate::report::VERSION;

/// One recomputed value compared against its published counterpart.
#[derive(Debug, Clone, Serialize)]
pub struct ReferenceCheck {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReproductionReport {
    pub version: &'static str,
    pub ok: bool,
    pub checks: Vec<ReferenceCheck>,
    pub elapsed_ms: u128,
}

impl ReproductionReport {
    pub fn to_table(&self) -> String {
        let width = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(0);
        let mut out = String::new();
        for check in &self.checks {
            out.push_str(&format!(
                "{}  {:<width$}  expected {}  computed {}\n",
                if check.pass { "PASS" } else { "FAIL" },
                check.name,
                check.expected,
                check.computed,
            ));
        }
        out.push_str(&format!(
            "{}: {} of {} reference values reproduced\n",
            if self.ok { "OK" } else { "MISMATCH" },
            self.checks.iter().filter(|c| c.pass).count(),
            self.checks.len()
        ));
        out
    }
}

fn vector_string(values: &[BigRational]) -> String {
    format!(
        "({})",
        values
            .iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .join(", ")
    )
}

fn check_vector(name: &str, expected: Vec<BigRational>, computed: Vec<BigRational>) -> ReferenceCheck {
    ReferenceCheck {
        name: name.to_string(),
        expected: vector_string(&expected),
        computed: vector_string(&computed),
        pass: expected == computed,
    }
}

fn check_scalar(
    name: &str,
    expected: BigRational,
    display: &str,
    computed: BigRational,
) -> ReferenceCheck {
    let shown = truncate_two_decimals(&computed);
    ReferenceCheck {
        name: name.to_string(),
        expected: format!("{} \"{display}\"", format_rational(&expected)),
        computed: format!("{} \"{shown}\"", format_rational(&computed)),
        pass: expected == computed && display == shown,
    }
}

/// Recomputes the full worked example and reports one pass/fail line per
/// reference value.
pub fn reproduce() -> ReproductionReport {
    let started = std::time::Instant::now();
    let gamma = running_example();
    let abce = CandidateSet::new([0, 1, 2, 4], 5).expect("within range");
    let run = |spec: MechanismSpec| {
        evaluate(&gamma, &spec, DEFAULT_GUARD)
            .expect("fixture stays within the guard")
            .to_rationals()
    };
    let diff_of = |spec: MechanismSpec| {
        proportionality_diff(&gamma, &spec, DEFAULT_GUARD)
            .expect("fixture stays within the guard")
            .diff
    };

    let mut checks = vec![check_vector(
        "expected vote shares E[V]",
        vec![ratio(5, 3), ratio(2, 3), ratio(16, 15), ratio(1, 5), ratio(7, 5)],
        gamma.expected_vote_share().shares().to_vec(),
    )];

    checks.push(check_vector(
        "fptp weights at {A,B,C,E}",
        vec![ratio(0, 1), ratio(0, 1), ratio(1, 2), ratio(0, 1), ratio(1, 2)],
        run(MechanismSpec::fptp(abce.clone())),
    ));

    checks.push(check_vector(
        "proxy weights at {A,B,C,E}",
        vec![ratio(1, 1), ratio(1, 1), ratio(3, 2), ratio(0, 1), ratio(3, 2)],
        run(MechanismSpec::proxy(abce.clone())),
    ));

    checks.push(check_vector(
        "liquid weights",
        vec![
            ratio(89, 45),
            ratio(22, 45),
            ratio(14, 15),
            ratio(1, 5),
            ratio(7, 5),
        ],
        run(MechanismSpec::liquid()),
    ));

    let all_self = ProfileSpace::of_matrix(&gamma)
        .enumerate(DEFAULT_GUARD)
        .expect("12 profiles")
        .find(|p| {
            p.choices
                .iter()
                .enumerate()
                .all(|(i, c)| *c == crate::mechanisms::Choice::Vote(i))
        })
        .map(|p| p.probability)
        .expect("all-self profile exists");
    checks.push(ReferenceCheck {
        name: "all-self liquid profile probability".to_string(),
        expected: "2/45".to_string(),
        computed: format_rational(&all_self),
        pass: all_self == ratio(2, 45),
    });

    for k in 1..=5 {
        checks.push(check_vector(
            &format!("sortition weights, k = {k}"),
            vec![ratio(k, 5); 5],
            run(MechanismSpec::sortition(k as usize)),
        ));
    }

    checks.push(check_scalar(
        "epsilon: direct democracy",
        ratio(4, 25),
        "0.16",
        diff_of(MechanismSpec::direct()),
    ));
    checks.push(check_scalar(
        "epsilon: liquid democracy",
        ratio(14, 225),
        "0.06",
        diff_of(MechanismSpec::liquid()),
    ));
    for k in 1..=5 {
        checks.push(check_scalar(
            &format!("epsilon: sortition, k = {k}"),
            ratio(4, 25),
            "0.16",
            diff_of(MechanismSpec::sortition(k)),
        ));
    }

    for (kind, name, expected_min, expected_max, display) in [
        (
            MechanismKind::FirstPastThePost,
            "epsilon interval: fptp, size-4 sweep",
            ratio(1, 3),
            ratio(13, 15),
            "[0.33, 0.86]",
        ),
        (
            MechanismKind::ProxyVoting,
            "epsilon interval: proxy, size-4 sweep",
            ratio(2, 15),
            ratio(1, 3),
            "[0.13, 0.33]",
        ),
    ] {
        let sweep = sweep_epsilon_bounds(
            &gamma,
            kind,
            SweepDomain::FixedSize(4),
            TieRule::Lexicographic,
            Fallback::Abstain,
            false,
            DEFAULT_GUARD,
        )
        .expect("five subsets of size 4");
        let shown = format!(
            "[{}, {}]",
            truncate_two_decimals(&sweep.min_diff),
            truncate_two_decimals(&sweep.max_diff)
        );
        checks.push(ReferenceCheck {
            name: name.to_string(),
            expected: format!(
                "[{}, {}] \"{display}\"",
                format_rational(&expected_min),
                format_rational(&expected_max)
            ),
            computed: format!(
                "[{}, {}] \"{shown}\"",
                format_rational(&sweep.min_diff),
                format_rational(&sweep.max_diff)
            ),
            pass: sweep.min_diff == expected_min && sweep.max_diff == expected_max && shown == display,
        });
    }

    let ok = checks.iter().all(|c| c.pass);
    ReproductionReport {
        version: VERSION,
        ok,
        checks,
        elapsed_ms: started.elapsed().as_millis(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_reference_value_reproduces() {
        let report = reproduce();
        for check in &report.checks {
            assert!(check.pass, "{}: {} != {}", check.name, check.computed, check.expected);
        }
        assert!(report.ok);
        assert_eq!(report.checks.len(), 1 + 3 + 1 + 5 + 2 + 5 + 2);
    }
}
