//! Representation axioms: ε-proportionality (with candidate-set sweeps),
//! diversity, faithfulness, monotonicity, and γ-effectiveness.
//!
//! Every check compares a mechanism's expected weights against the expected
//! vote shares of the *original* matrix (the projected shares are available
//! as an option where noted). All verdicts are computed in exact arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::generators::{self, Family, FamilySpec};
use crate::matrix::{normalize_l1, CandidateSet, Fallback, RepresentationMatrix};
use crate::mechanisms::{
    self, evaluate, Choice, MechanismKind, MechanismSpec, ProfileSpace, TieRule,
};
use crate::{Error, Result};

/// Per-agent deviations between normalized expected vote share and
/// normalized expected voting weight; `diff` is their maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct ProportionalityReport {
    pub per_agent_deviation: Vec<BigRational>,
    pub diff: BigRational,
    /// Agent attaining `diff` (lowest index on ties).
    pub witness: usize,
}

/// Extrema of `diff` over a family of candidate sets.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub min_diff: BigRational,
    pub max_diff: BigRational,
    pub min_witness: CandidateSet,
    pub max_witness: CandidateSet,
    pub domain: SweepDomain,
    /// Every evaluated candidate set with its diff, in canonical order.
    pub evaluations: Vec<(CandidateSet, BigRational)>,
}

/// The family of candidate sets a sweep ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepDomain {
    /// All subsets of one fixed size.
    FixedSize(usize),
    /// All nonempty proper subsets, ordered by size then lexicographically.
    AllProperSubsets,
}

impl fmt::Display for SweepDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepDomain::FixedSize(size) => write!(f, "all candidate sets of size {size}"),
            SweepDomain::AllProperSubsets => write!(f, "all nonempty proper candidate sets"),
        }
    }
}

/// Distribution of the smallest majority coalition over a mechanism's
/// realized outcomes. Realizations with zero total weight cannot form a
/// majority at all and are reported as `undefined_mass`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoalitionReport {
    /// Mean coalition size over the defined mass; `None` when every
    /// realization has zero total weight.
    pub expected_gamma: Option<BigRational>,
    pub distribution: BTreeMap<usize, BigRational>,
    pub undefined_mass: BigRational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    Proportionality,
    Diversity,
    Faithfulness,
    Monotonicity,
    GammaEffectiveness,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Axiom::Proportionality => "proportionality",
            Axiom::Diversity => "diversity",
            Axiom::Faithfulness => "faithfulness",
            Axiom::Monotonicity => "monotonicity",
            Axiom::GammaEffectiveness => "gamma-effectiveness",
        };
        write!(f, "{name}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated,
    /// The axiom's premise is not met, so it makes no claim.
    Undefined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Undefined => "undefined",
        };
        write!(f, "{name}")
    }
}

/// Witness of one axiom violation.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Candidate with positive vote share but zero weight (diversity).
    Agent {
        agent: usize,
        share: BigRational,
        weight: BigRational,
    },
    /// Ordered candidate pair with share_i >= share_j but weight_i < weight_j
    /// (faithfulness).
    Pair {
        higher: usize,
        lower: usize,
        shares: (BigRational, BigRational),
        weights: (BigRational, BigRational),
    },
    /// Agent whose weight dropped although its vote share rose
    /// (monotonicity).
    WeightDrop {
        agent: usize,
        before: BigRational,
        after: BigRational,
    },
}

/// Uniform result envelope for the yes/no axioms.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub verdict: Verdict,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    fn decided(axiom: Axiom, violations: Vec<Violation>) -> Self {
        let verdict = if violations.is_empty() {
            Verdict::Holds
        } else {
            Verdict::Violated
        };
        Self {
            axiom,
            verdict,
            violations,
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// Which vote shares the diversity check compares against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShareBasis {
    /// Column sums of the original matrix.
    #[default]
    Original,
    /// Column sums of the matrix projected on the candidate set.
    Projected,
}

/// Max per-agent gap between the ℓ1-normalized vote shares of `gamma` and the
/// ℓ1-normalized weight vector.
pub fn proportionality_report(
    gamma: &RepresentationMatrix,
    weights: &[BigRational],
) -> Result<ProportionalityReport> {
    if weights.len() != gamma.n() {
        return Err(Error::DimensionMismatch {
            left: gamma.n(),
            right: weights.len(),
        });
    }
    let shares = gamma.expected_vote_share().normalized()?;
    let normalized_weights = match normalize_l1(weights) {
        Err(Error::ZeroVector) => return Err(Error::ZeroWeightVector),
        other => other?,
    };
    let per_agent_deviation: Vec<BigRational> = shares
        .iter()
        .zip(&normalized_weights)
        .map(|(s, w)| (s - w).abs())
        .collect();
    let witness = per_agent_deviation
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.cmp(b).then(j.cmp(i)))
        .map(|(i, _)| i)
        .expect("n >= 1");
    let diff = per_agent_deviation[witness].clone();
    Ok(ProportionalityReport {
        per_agent_deviation,
        diff,
        witness,
    })
}

/// Runs the mechanism and reports its proportionality against the original
/// matrix's vote shares.
pub fn proportionality_diff(
    gamma: &RepresentationMatrix,
    spec: &MechanismSpec,
    guard: u64,
) -> Result<ProportionalityReport> {
    let weights = evaluate(gamma, spec, guard)?;
    proportionality_report(gamma, &weights.to_rationals())
}

/// Evaluates `proportionality_diff` for every candidate set in the domain and
/// returns the extrema. Witnesses are the first sets attaining them, in
/// canonical order (by size for the full domain, lexicographic within a
/// size). With `skip_undefined`, candidate sets where the mechanism errors
/// out are dropped instead of failing the sweep.
pub fn sweep_epsilon_bounds(
    gamma: &RepresentationMatrix,
    kind: MechanismKind,
    domain: SweepDomain,
    tie_rule: TieRule,
    fallback: Fallback,
    skip_undefined: bool,
    guard: u64,
) -> Result<SweepResult> {
    let n = gamma.n();
    let sizes: Vec<usize> = match domain {
        SweepDomain::FixedSize(size) => {
            if size < 1 || size > n {
                return Err(Error::EmptyDomain);
            }
            vec![size]
        }
        SweepDomain::AllProperSubsets => (1..n).collect(),
    };
    let candidate_sets: Vec<CandidateSet> = sizes
        .iter()
        .flat_map(|&size| {
            (0..n)
                .combinations(size)
                .map(move |members| CandidateSet::new(members, n).expect("nonempty, in range"))
        })
        .collect();
    if candidate_sets.is_empty() {
        return Err(Error::EmptyDomain);
    }

    let spec_for = |candidates: CandidateSet| -> Result<MechanismSpec> {
        match kind {
            MechanismKind::FirstPastThePost => Ok(MechanismSpec::fptp(candidates)
                .with_tie_rule(tie_rule)
                .with_fallback(fallback)),
            MechanismKind::ProxyVoting => {
                Ok(MechanismSpec::proxy(candidates).with_fallback(fallback))
            }
            other => Err(Error::InvalidSpec(format!(
                "sweeps apply to candidate-dependent mechanisms (fptp, proxy), not {other}"
            ))),
        }
    };
    spec_for(candidate_sets[0].clone())?;

    let outcomes: Vec<Result<BigRational>> = candidate_sets
        .par_iter()
        .map(|candidates| {
            let spec = spec_for(candidates.clone())?;
            Ok(proportionality_diff(gamma, &spec, guard)?.diff)
        })
        .collect();

    let mut evaluations = Vec::with_capacity(candidate_sets.len());
    for (candidates, outcome) in candidate_sets.into_iter().zip(outcomes) {
        match outcome {
            Ok(diff) => evaluations.push((candidates, diff)),
            Err(_) if skip_undefined => {}
            Err(e) => return Err(e),
        }
    }
    if evaluations.is_empty() {
        return Err(Error::EmptyDomain);
    }

    let (mut min, mut max) = (0, 0);
    for (i, (_, diff)) in evaluations.iter().enumerate() {
        if *diff < evaluations[min].1 {
            min = i;
        }
        if *diff > evaluations[max].1 {
            max = i;
        }
    }
    Ok(SweepResult {
        min_diff: evaluations[min].1.clone(),
        max_diff: evaluations[max].1.clone(),
        min_witness: evaluations[min].0.clone(),
        max_witness: evaluations[max].0.clone(),
        domain,
        evaluations,
    })
}

/// Diversity: every candidate with positive expected vote share gets
/// positive expected weight.
pub fn check_diversity(
    gamma: &RepresentationMatrix,
    spec: &MechanismSpec,
    basis: ShareBasis,
    guard: u64,
) -> Result<AxiomReport> {
    let weights = evaluate(gamma, spec, guard)?.to_rationals();
    let candidates = spec.effective_candidates(gamma.n());
    let shares = match basis {
        ShareBasis::Original => gamma.expected_vote_share(),
        ShareBasis::Projected => gamma
            .project(&candidates, spec.fallback)
            .expected_vote_share(),
    };
    let violations = candidates
        .members()
        .iter()
        .filter(|&&j| shares[j].is_positive() && weights[j].is_zero())
        .map(|&j| Violation::Agent {
            agent: j,
            share: shares[j].clone(),
            weight: weights[j].clone(),
        })
        .collect();
    Ok(AxiomReport::decided(Axiom::Diversity, violations))
}

/// Faithfulness: a candidate with at least the vote share of another never
/// gets less weight. Checks every ordered candidate pair.
pub fn check_faithfulness(
    gamma: &RepresentationMatrix,
    spec: &MechanismSpec,
    guard: u64,
) -> Result<AxiomReport> {
    let weights = evaluate(gamma, spec, guard)?.to_rationals();
    let shares = gamma.expected_vote_share();
    let candidates = spec.effective_candidates(gamma.n());
    let mut violations = Vec::new();
    for &i in candidates.members() {
        for &j in candidates.members() {
            if i != j && shares[i] >= shares[j] && weights[i] < weights[j] {
                violations.push(Violation::Pair {
                    higher: i,
                    lower: j,
                    shares: (shares[i].clone(), shares[j].clone()),
                    weights: (weights[i].clone(), weights[j].clone()),
                });
            }
        }
    }
    Ok(AxiomReport::decided(Axiom::Faithfulness, violations))
}

/// Monotonicity for one matrix pair: if agent `j`'s expected vote share
/// strictly rises from `gamma` to `gamma_prime` while nobody else's rises,
/// `j`'s expected weight must not drop. When the premise fails the verdict is
/// [`Verdict::Undefined`] rather than a vacuous pass.
pub fn check_monotonicity_pair(
    gamma: &RepresentationMatrix,
    gamma_prime: &RepresentationMatrix,
    spec: &MechanismSpec,
    agent: usize,
    guard: u64,
) -> Result<AxiomReport> {
    if gamma.n() != gamma_prime.n() {
        return Err(Error::DimensionMismatch {
            left: gamma.n(),
            right: gamma_prime.n(),
        });
    }
    if agent >= gamma.n() {
        return Err(Error::CandidateOutOfRange {
            agent,
            n: gamma.n(),
        });
    }
    let before_shares = gamma.expected_vote_share();
    let after_shares = gamma_prime.expected_vote_share();
    let premise = after_shares[agent] > before_shares[agent]
        && (0..gamma.n()).all(|i| i == agent || after_shares[i] <= before_shares[i]);
    if !premise {
        return Ok(AxiomReport {
            axiom: Axiom::Monotonicity,
            verdict: Verdict::Undefined,
            violations: Vec::new(),
        });
    }
    let before = evaluate(gamma, spec, guard)?.to_rationals();
    let after = evaluate(gamma_prime, spec, guard)?.to_rationals();
    let violations = if after[agent] >= before[agent] {
        Vec::new()
    } else {
        vec![Violation::WeightDrop {
            agent,
            before: before[agent].clone(),
            after: after[agent].clone(),
        }]
    };
    Ok(AxiomReport::decided(Axiom::Monotonicity, violations))
}

/// A monotonicity counterexample found by random search.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityWitness {
    pub gamma: RepresentationMatrix,
    pub gamma_prime: RepresentationMatrix,
    pub agent: usize,
    pub spec: MechanismSpec,
    pub weight_before: BigRational,
    pub weight_after: BigRational,
    pub trial: u64,
}

/// Samples random matrices, shifts vote mass toward a random agent so the
/// monotonicity premise holds by construction, and checks the axiom. Returns
/// the counterexample with the smallest trial index, or `None` after
/// `trials` attempts. Deterministic in `seed`, independent of worker count.
pub fn search_monotonicity_counterexample(
    kind: MechanismKind,
    n: usize,
    trials: u64,
    seed: u64,
    guard: u64,
) -> Result<Option<MonotonicityWitness>> {
    if n == 0 {
        return Err(Error::InvalidSpec("n must be positive".into()));
    }
    let witness = (0..trials)
        .into_par_iter()
        .find_map_first(|trial| {
            monotonicity_trial(kind, n, seed, trial, guard).unwrap_or(None)
        });
    Ok(witness)
}

fn monotonicity_trial(
    kind: MechanismKind,
    n: usize,
    seed: u64,
    trial: u64,
    guard: u64,
) -> Result<Option<MonotonicityWitness>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let gamma = generators::generate(
        &FamilySpec::new(
            Family::RandomStochastic {
                concentration: BigRational::one(),
                // Small denominators keep the perturbed matrices readable.
                denominator_cap: 1000,
            },
            n,
        )
        .with_seed(rng.random()),
    )?;
    let agent = rng.random_range(0..n);

    // Scale every non-target entry of row i by beta_i in [0, 1) and give the
    // freed mass to the target column: its share strictly rises (unless the
    // row already pointed there entirely), nobody else's can rise.
    let mut rows = Vec::with_capacity(n);
    let mut strict = false;
    for i in 0..n {
        let beta = BigRational::new(BigInt::from(rng.random_range(0..16u32)), BigInt::from(16));
        let row = gamma.row(i);
        if !row[agent].is_one() {
            strict = true;
        }
        let mut new_row: Vec<BigRational> =
            row.iter().map(|entry| entry * &beta).collect();
        new_row[agent] =
            BigRational::one() - (BigRational::one() - &row[agent]) * &beta;
        rows.push(new_row);
    }
    if !strict {
        return Ok(None);
    }
    let gamma_prime = RepresentationMatrix::new(rows, None)?;

    let spec = match kind {
        MechanismKind::DirectDemocracy => MechanismSpec::direct(),
        MechanismKind::LiquidDemocracy => MechanismSpec::liquid(),
        MechanismKind::Sortition => MechanismSpec::sortition(rng.random_range(1..=n)),
        MechanismKind::FirstPastThePost | MechanismKind::ProxyVoting => {
            let mut members: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
            if !members.contains(&agent) {
                members.push(agent);
            }
            let candidates = CandidateSet::new(members, n).expect("contains the agent");
            if kind == MechanismKind::FirstPastThePost {
                MechanismSpec::fptp(candidates)
            } else {
                MechanismSpec::proxy(candidates)
            }
        }
    };

    let report = check_monotonicity_pair(&gamma, &gamma_prime, &spec, agent, guard)?;
    if report.verdict != Verdict::Violated {
        return Ok(None);
    }
    let (weight_before, weight_after) = match &report.violations[0] {
        Violation::WeightDrop { before, after, .. } => (before.clone(), after.clone()),
        other => unreachable!("monotonicity reports WeightDrop, got {other:?}"),
    };
    Ok(Some(MonotonicityWitness {
        gamma,
        gamma_prime,
        agent,
        spec,
        weight_before,
        weight_after,
        trial,
    }))
}

/// Smallest number of agents whose weights sum to strictly more than half of
/// the total. Greedy by descending weight, which is optimal for a pure
/// cardinality objective.
pub fn min_majority_coalition(weights: &[BigRational]) -> Result<usize> {
    let total: BigRational = weights.iter().sum();
    if !total.is_positive() {
        return Err(Error::ZeroTotalWeight);
    }
    let mut sorted: Vec<&BigRational> = weights.iter().collect();
    sorted.sort_by(|a, b| b.cmp(a));
    let mut acc = BigRational::zero();
    for (count, w) in sorted.iter().enumerate() {
        acc += *w;
        if BigRational::from_integer(2.into()) * &acc > total {
            return Ok(count + 1);
        }
    }
    unreachable!("the full set always exceeds half the total")
}

/// Expected size of the smallest majority coalition over the mechanism's
/// realized (random) outcomes.
pub fn gamma_effectiveness(
    gamma: &RepresentationMatrix,
    spec: &MechanismSpec,
    guard: u64,
) -> Result<CoalitionReport> {
    spec.validate(gamma.n())?;
    let n = gamma.n();
    match spec.kind {
        MechanismKind::DirectDemocracy => {
            Ok(constant_coalition(majority_of_equal_body(n)))
        }
        MechanismKind::Sortition => {
            // Every realized body is k agents with weight 1 each.
            Ok(constant_coalition(majority_of_equal_body(
                spec.k.expect("validated"),
            )))
        }
        MechanismKind::ProxyVoting => {
            let candidates = spec.candidates.as_ref().expect("validated");
            let projected = gamma.project(candidates, spec.fallback);
            let space = ProfileSpace::of_projection(&projected);
            coalition_over_profiles(space, guard, |choices, counts| {
                mechanisms::tally_votes(choices, counts);
                counts
                    .iter()
                    .map(|&c| BigRational::from_integer(BigInt::from(c)))
                    .collect()
            })
        }
        MechanismKind::FirstPastThePost => {
            let candidates = spec.candidates.as_ref().expect("validated");
            let projected = gamma.project(candidates, spec.fallback);
            let space = ProfileSpace::of_projection(&projected);
            let tie_rule = spec.tie_rule;
            coalition_over_profiles(space, guard, |choices, counts| {
                mechanisms::tally_votes(choices, counts);
                mechanisms::fptp_realized_weights(counts, tie_rule)
            })
        }
        MechanismKind::LiquidDemocracy => {
            let space = ProfileSpace::of_matrix(gamma);
            coalition_over_profiles(space, guard, |choices, _| {
                let delegations: Vec<usize> = choices
                    .iter()
                    .map(|c| match c {
                        Choice::Vote(j) => *j,
                        Choice::Abstain => unreachable!("liquid democracy has no abstentions"),
                    })
                    .collect();
                mechanisms::resolve_delegations(&delegations)
                    .into_iter()
                    .map(|w| BigRational::from_integer(BigInt::from(w)))
                    .collect()
            })
        }
    }
}

fn majority_of_equal_body(size: usize) -> usize {
    size / 2 + 1
}

fn constant_coalition(gamma_value: usize) -> CoalitionReport {
    CoalitionReport {
        expected_gamma: Some(BigRational::from_integer(BigInt::from(gamma_value))),
        distribution: BTreeMap::from([(gamma_value, BigRational::one())]),
        undefined_mass: BigRational::zero(),
    }
}

fn coalition_over_profiles(
    space: ProfileSpace,
    guard: u64,
    realized: impl Fn(&[Choice], &mut [u64]) -> Vec<BigRational>,
) -> Result<CoalitionReport> {
    let n = space.n();
    let mut distribution: BTreeMap<usize, BigRational> = BTreeMap::new();
    let mut undefined_mass = BigRational::zero();
    let mut counts = vec![0u64; n];
    for profile in space.enumerate(guard)? {
        let weights = realized(&profile.choices, &mut counts);
        match min_majority_coalition(&weights) {
            Ok(size) => {
                *distribution.entry(size).or_insert_with(BigRational::zero) +=
                    &profile.probability;
            }
            Err(Error::ZeroTotalWeight) => undefined_mass += &profile.probability,
            Err(other) => return Err(other),
        }
    }
    let defined_mass = BigRational::one() - &undefined_mass;
    let expected_gamma = if defined_mass.is_zero() {
        None
    } else {
        let weighted: BigRational = distribution
            .iter()
            .map(|(&size, p)| BigRational::from_integer(BigInt::from(size)) * p)
            .sum();
        Some(weighted / defined_mass)
    };
    Ok(CoalitionReport {
        expected_gamma,
        distribution,
        undefined_mass,
    })
}
