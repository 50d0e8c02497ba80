//! Serializable result trees and their table / CSV renderings.
//!
//! Every exact fraction appears twice: as a `"p/q"` string and as a
//! two-decimal rendering truncated toward zero (`13/15` prints as `0.86`).
//! JSON output is deterministic for deterministic inputs, except for the
//! trailing `elapsed_ms` field.

use num::BigRational;
use serde::Serialize;

use crate::axioms::{
    AxiomReport, CoalitionReport, MonotonicityWitness, ProportionalityReport, SweepResult,
    Violation,
};
use crate::matrix::RepresentationMatrix;
use crate::mechanisms::{Classification, ExpectedWeightVector, MechanismSpec, Method, Weights};
use crate::rational::{format_rational, truncate_two_decimals};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Output format of the command-line reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

fn names(matrix: &RepresentationMatrix, agents: &[usize]) -> Vec<String> {
    agents.iter().map(|&j| matrix.label(j)).collect()
}

#[derive(Debug, Serialize)]
pub struct EvaluateReport {
    pub version: &'static str,
    pub mechanism: String,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidates: Option<Vec<String>>,
    pub agents: Vec<String>,
    /// `"p/q"` strings in exact mode, decimal strings in Monte Carlo mode.
    pub weights: Vec<String>,
    pub weights_display: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<Vec<f64>>,
    pub l1: String,
    pub l1_display: String,
    pub abstainers: Vec<String>,
    pub classification: [String; 3],
    pub elapsed_ms: u128,
}

impl EvaluateReport {
    pub fn new(
        matrix: &RepresentationMatrix,
        spec: &MechanismSpec,
        weights: &ExpectedWeightVector,
        classification: Classification,
        elapsed_ms: u128,
    ) -> Self {
        let (samples, seed) = match spec.method {
            Method::MonteCarlo { samples, seed } => (Some(samples), Some(seed)),
            Method::Exact => (None, None),
        };
        let rationals = weights.to_rationals();
        let (weight_strings, l1): (Vec<String>, String) = match &weights.weights {
            Weights::Exact(w) => (
                w.iter().map(format_rational).collect(),
                format_rational(&weights.l1_exact().expect("exact")),
            ),
            Weights::Estimate { mean, .. } => (
                mean.iter().map(|m| format!("{m}")).collect(),
                format!("{}", weights.l1_f64()),
            ),
        };
        let l1_rational: BigRational = rationals.iter().sum();
        Self {
            version: VERSION,
            mechanism: spec.kind.to_string(),
            method: weights.spec.method.to_string(),
            samples,
            seed,
            n: matrix.n(),
            k: spec.k,
            candidates: spec
                .candidates
                .as_ref()
                .map(|c| names(matrix, c.members())),
            agents: (0..matrix.n()).map(|i| matrix.label(i)).collect(),
            weights: weight_strings,
            weights_display: rationals.iter().map(truncate_two_decimals).collect(),
            stderr: weights.stderr().map(|s| s.to_vec()),
            l1,
            l1_display: truncate_two_decimals(&l1_rational),
            abstainers: names(matrix, &weights.abstainers),
            classification: [
                classification.openness.to_string(),
                classification.rigidity.to_string(),
                classification.directness.to_string(),
            ],
            elapsed_ms,
        }
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "mechanism       {} ({})\n",
            self.mechanism, self.method
        ));
        if let Some(k) = self.k {
            out.push_str(&format!("body size k     {k}\n"));
        }
        if let Some(candidates) = &self.candidates {
            out.push_str(&format!("candidates      {}\n", candidates.join(", ")));
        }
        out.push_str(&format!(
            "classification  {}\n",
            self.classification.join(", ")
        ));
        out.push_str(&format!(
            "abstainers      {}\n",
            if self.abstainers.is_empty() {
                "(none)".to_string()
            } else {
                self.abstainers.join(", ")
            }
        ));
        out.push_str(&format!("l1 norm         {} ≈ {}\n", self.l1, self.l1_display));
        out.push('\n');
        out.push_str(&format!("{:<5}  {:<20}  {:>5}", "agent", "weight", "~"));
        if self.stderr.is_some() {
            out.push_str("  stderr");
        }
        out.push('\n');
        for (i, agent) in self.agents.iter().enumerate() {
            out.push_str(&format!(
                "{:<5}  {:<20}  {:>5}",
                agent, self.weights[i], self.weights_display[i]
            ));
            if let Some(stderr) = &self.stderr {
                out.push_str(&format!("  {:.6}", stderr[i]));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(if self.stderr.is_some() {
            "agent,weight,display,stderr\n"
        } else {
            "agent,weight,display\n"
        });
        for (i, agent) in self.agents.iter().enumerate() {
            match &self.stderr {
                Some(stderr) => out.push_str(&format!(
                    "{agent},{},{},{}\n",
                    self.weights[i], self.weights_display[i], stderr[i]
                )),
                None => out.push_str(&format!(
                    "{agent},{},{}\n",
                    self.weights[i], self.weights_display[i]
                )),
            }
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct SweepExtremum {
    pub candidates: Vec<String>,
    pub diff: String,
    pub diff_display: String,
}

#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub version: &'static str,
    pub mechanism: String,
    pub domain: String,
    pub tie: String,
    pub fallback: String,
    pub min: SweepExtremum,
    pub max: SweepExtremum,
    pub interval_display: String,
    pub evaluations: Vec<SweepExtremum>,
    pub elapsed_ms: u128,
}

impl SweepReport {
    pub fn new(
        matrix: &RepresentationMatrix,
        mechanism: String,
        tie: String,
        fallback: String,
        sweep: &SweepResult,
        elapsed_ms: u128,
    ) -> Self {
        let extremum = |set: &crate::matrix::CandidateSet, diff: &BigRational| SweepExtremum {
            candidates: names(matrix, set.members()),
            diff: format_rational(diff),
            diff_display: truncate_two_decimals(diff),
        };
        Self {
            version: VERSION,
            mechanism,
            domain: sweep.domain.to_string(),
            tie,
            fallback,
            min: extremum(&sweep.min_witness, &sweep.min_diff),
            max: extremum(&sweep.max_witness, &sweep.max_diff),
            interval_display: format!(
                "[{}, {}]",
                truncate_two_decimals(&sweep.min_diff),
                truncate_two_decimals(&sweep.max_diff)
            ),
            evaluations: sweep
                .evaluations
                .iter()
                .map(|(set, diff)| extremum(set, diff))
                .collect(),
            elapsed_ms,
        }
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("mechanism  {}\n", self.mechanism));
        out.push_str(&format!("domain     {}\n", self.domain));
        out.push_str(&format!("tie rule   {}    fallback  {}\n", self.tie, self.fallback));
        out.push_str(&format!("interval   {}\n\n", self.interval_display));
        out.push_str(&format!(
            "min  {:<10} {:>6}  at {{{}}}\n",
            self.min.diff,
            self.min.diff_display,
            self.min.candidates.join(", ")
        ));
        out.push_str(&format!(
            "max  {:<10} {:>6}  at {{{}}}\n\n",
            self.max.diff,
            self.max.diff_display,
            self.max.candidates.join(", ")
        ));
        out.push_str("candidates            diff          ~\n");
        for eval in &self.evaluations {
            out.push_str(&format!(
                "{{{}}}{}  {:<12}  {:>5}\n",
                eval.candidates.join(", "),
                " ".repeat(18usize.saturating_sub(eval.candidates.join(", ").len())),
                eval.diff,
                eval.diff_display
            ));
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("candidates,diff,display\n");
        for eval in &self.evaluations {
            out.push_str(&format!(
                "{},{},{}\n",
                eval.candidates.join(";"),
                eval.diff,
                eval.diff_display
            ));
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct DeviationEntry {
    pub agent: String,
    pub deviation: String,
    pub deviation_display: String,
}

#[derive(Debug, Serialize)]
pub struct ProportionalityJson {
    pub diff: String,
    pub diff_display: String,
    pub witness: String,
    pub per_agent: Vec<DeviationEntry>,
}

impl ProportionalityJson {
    pub fn new(matrix: &RepresentationMatrix, report: &ProportionalityReport) -> Self {
        Self {
            diff: format_rational(&report.diff),
            diff_display: truncate_two_decimals(&report.diff),
            witness: matrix.label(report.witness),
            per_agent: report
                .per_agent_deviation
                .iter()
                .enumerate()
                .map(|(i, d)| DeviationEntry {
                    agent: matrix.label(i),
                    deviation: format_rational(d),
                    deviation_display: truncate_two_decimals(d),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationJson {
    Agent {
        agent: String,
        share: String,
        weight: String,
    },
    Pair {
        higher: String,
        lower: String,
        shares: [String; 2],
        weights: [String; 2],
    },
    WeightDrop {
        agent: String,
        before: String,
        after: String,
    },
}

impl ViolationJson {
    pub fn new(matrix: &RepresentationMatrix, violation: &Violation) -> Self {
        match violation {
            Violation::Agent {
                agent,
                share,
                weight,
            } => ViolationJson::Agent {
                agent: matrix.label(*agent),
                share: format_rational(share),
                weight: format_rational(weight),
            },
            Violation::Pair {
                higher,
                lower,
                shares,
                weights,
            } => ViolationJson::Pair {
                higher: matrix.label(*higher),
                lower: matrix.label(*lower),
                shares: [format_rational(&shares.0), format_rational(&shares.1)],
                weights: [format_rational(&weights.0), format_rational(&weights.1)],
            },
            Violation::WeightDrop {
                agent,
                before,
                after,
            } => ViolationJson::WeightDrop {
                agent: matrix.label(*agent),
                before: format_rational(before),
                after: format_rational(after),
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AxiomJson {
    pub axiom: String,
    pub verdict: String,
    pub violations: Vec<ViolationJson>,
}

impl AxiomJson {
    pub fn new(matrix: &RepresentationMatrix, report: &AxiomReport) -> Self {
        Self {
            axiom: report.axiom.to_string(),
            verdict: report.verdict.to_string(),
            violations: report
                .violations
                .iter()
                .map(|v| ViolationJson::new(matrix, v))
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CoalitionJson {
    /// `None` when every realization had zero total weight.
    pub expected: Option<String>,
    pub expected_display: Option<String>,
    /// Coalition size -> probability.
    pub distribution: std::collections::BTreeMap<usize, String>,
    pub undefined_mass: String,
}

impl CoalitionJson {
    pub fn new(report: &CoalitionReport) -> Self {
        Self {
            expected: report.expected_gamma.as_ref().map(format_rational),
            expected_display: report
                .expected_gamma
                .as_ref()
                .map(truncate_two_decimals),
            distribution: report
                .distribution
                .iter()
                .map(|(&size, p)| (size, format_rational(p)))
                .collect(),
            undefined_mass: format_rational(&report.undefined_mass),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AxiomsReport {
    pub version: &'static str,
    pub mechanism: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proportionality: Option<ProportionalityJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diversity: Option<AxiomJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub faithfulness: Option<AxiomJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_effectiveness: Option<CoalitionJson>,
    pub violated: bool,
    pub elapsed_ms: u128,
}

impl AxiomsReport {
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("mechanism  {}\n\n", self.mechanism));
        if let Some(prop) = &self.proportionality {
            out.push_str(&format!(
                "proportionality     diff {} ≈ {} (witness {})\n",
                prop.diff, prop.diff_display, prop.witness
            ));
            for entry in &prop.per_agent {
                out.push_str(&format!(
                    "  {:<5} {:<12} {:>5}\n",
                    entry.agent, entry.deviation, entry.deviation_display
                ));
            }
        }
        for report in [&self.diversity, &self.faithfulness].into_iter().flatten() {
            out.push_str(&format!("{:<19} {}\n", report.axiom, report.verdict));
            for violation in &report.violations {
                match violation {
                    ViolationJson::Agent {
                        agent,
                        share,
                        weight,
                    } => out.push_str(&format!(
                        "  {agent}: share {share} > 0 but weight {weight}\n"
                    )),
                    ViolationJson::Pair {
                        higher,
                        lower,
                        shares,
                        weights,
                    } => out.push_str(&format!(
                        "  ({higher}, {lower}): shares {} >= {} but weights {} < {}\n",
                        shares[0], shares[1], weights[0], weights[1]
                    )),
                    ViolationJson::WeightDrop {
                        agent,
                        before,
                        after,
                    } => out.push_str(&format!(
                        "  {agent}: weight dropped {before} -> {after}\n"
                    )),
                }
            }
        }
        if let Some(gamma) = &self.gamma_effectiveness {
            match (&gamma.expected, &gamma.expected_display) {
                (Some(expected), Some(display)) => out.push_str(&format!(
                    "gamma-effectiveness expected {expected} ≈ {display}\n"
                )),
                _ => out.push_str("gamma-effectiveness undefined (no majority ever forms)\n"),
            }
            for (size, p) in &gamma.distribution {
                out.push_str(&format!("  coalition of {size}: probability {p}\n"));
            }
            if gamma.undefined_mass != "0" {
                out.push_str(&format!(
                    "  no majority possible: probability {}\n",
                    gamma.undefined_mass
                ));
            }
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct MonotonicityPairReport {
    pub version: &'static str,
    pub mechanism: String,
    pub agent: String,
    pub premise_holds: bool,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_before: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_after: Option<String>,
    pub elapsed_ms: u128,
}

impl MonotonicityPairReport {
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("mechanism  {}\n", self.mechanism));
        out.push_str(&format!("agent      {}\n", self.agent));
        out.push_str(&format!(
            "premise    {}\n",
            if self.premise_holds {
                "holds (share rises, no other rises)"
            } else {
                "fails (verdict undefined)"
            }
        ));
        out.push_str(&format!("verdict    {}\n", self.verdict));
        if let (Some(before), Some(after)) = (&self.weight_before, &self.weight_after) {
            out.push_str(&format!("weight     {before} -> {after}\n"));
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct SearchWitnessJson {
    pub trial: u64,
    pub agent: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidates: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub weight_before: String,
    pub weight_after: String,
    pub gamma: Vec<Vec<String>>,
    pub gamma_prime: Vec<Vec<String>>,
}

#[derive(Debug, Serialize)]
pub struct SearchReport {
    pub version: &'static str,
    pub mechanism: String,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<SearchWitnessJson>,
    pub elapsed_ms: u128,
}

impl SearchReport {
    pub fn new(
        mechanism: String,
        n: usize,
        trials: u64,
        seed: u64,
        witness: Option<&MonotonicityWitness>,
        elapsed_ms: u128,
    ) -> Self {
        let witness = witness.map(|w| {
            let rows = |m: &RepresentationMatrix| {
                (0..m.n())
                    .map(|i| m.row(i).iter().map(format_rational).collect())
                    .collect()
            };
            SearchWitnessJson {
                trial: w.trial,
                agent: w.gamma.label(w.agent),
                candidates: w
                    .spec
                    .candidates
                    .as_ref()
                    .map(|c| names(&w.gamma, c.members())),
                k: w.spec.k,
                weight_before: format_rational(&w.weight_before),
                weight_after: format_rational(&w.weight_after),
                gamma: rows(&w.gamma),
                gamma_prime: rows(&w.gamma_prime),
            }
        });
        Self {
            version: VERSION,
            mechanism,
            n,
            trials,
            seed,
            found: witness.is_some(),
            witness,
            elapsed_ms,
        }
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "mechanism {}  n {}  trials {}  seed {}\n",
            self.mechanism, self.n, self.trials, self.seed
        ));
        match &self.witness {
            None => out.push_str("no monotonicity counterexample found\n"),
            Some(w) => {
                out.push_str(&format!(
                    "counterexample at trial {}: agent {} weight {} -> {}\n",
                    w.trial, w.agent, w.weight_before, w.weight_after
                ));
                if let Some(candidates) = &w.candidates {
                    out.push_str(&format!("candidates {{{}}}\n", candidates.join(", ")));
                }
                out.push_str("gamma:\n");
                for row in &w.gamma {
                    out.push_str(&format!("  {}\n", row.join("  ")));
                }
                out.push_str("gamma':\n");
                for row in &w.gamma_prime {
                    out.push_str(&format!("  {}\n", row.join("  ")));
                }
            }
        }
        out
    }
}

/// Renders any serializable report as pretty JSON.
pub fn to_json<T: Serialize>(report: &T) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize")
}
