//! The five selection mechanisms and their expected voting-weight vectors.
//!
//! Direct democracy, proxy voting, and sortition have closed forms. Single
//! winner first-past-the-post and liquid democracy are expectations over the
//! product distribution of individual votes; they are computed either exactly,
//! by enumerating every vote profile with rational probabilities, or by seeded
//! Monte Carlo sampling when the profile space is too large.
//!
//! Exact enumeration is bounded by a guard on the number of profiles
//! (default [`DEFAULT_GUARD`], overridable per call or via the
//! `REPSEL_GUARD` environment variable); past it, [`Error::StateSpaceTooLarge`]
//! tells the caller to switch to Monte Carlo.

use std::fmt;

use num::bigint::BigInt;
use num::{BigRational, FromPrimitive, One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::matrix::{CandidateSet, Fallback, ProjectedMatrix, RepresentationMatrix};
use crate::{Error, Result};

/// Default cap on the number of profiles exact enumeration will visit.
pub const DEFAULT_GUARD: u64 = 10_000_000;

/// Samples per Monte Carlo work item; the per-item generator stream makes
/// results independent of the worker count.
const MC_BATCH: u64 = 16_384;

/// The enumeration guard: `REPSEL_GUARD` from the environment when set and
/// parseable, [`DEFAULT_GUARD`] otherwise.
pub fn default_guard() -> u64 {
    std::env::var("REPSEL_GUARD")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_GUARD)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MechanismKind {
    DirectDemocracy,
    FirstPastThePost,
    ProxyVoting,
    LiquidDemocracy,
    Sortition,
}

impl fmt::Display for MechanismKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            MechanismKind::DirectDemocracy => "direct",
            MechanismKind::FirstPastThePost => "fptp",
            MechanismKind::ProxyVoting => "proxy",
            MechanismKind::LiquidDemocracy => "liquid",
            MechanismKind::Sortition => "sortition",
        };
        write!(f, "{name}")
    }
}

/// How first-past-the-post splits a tie for the highest vote count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieRule {
    /// The lowest-index tied candidate takes the full weight.
    #[default]
    Lexicographic,
    /// Each of `t` tied candidates takes weight `1/t`.
    EqualSplit,
}

impl fmt::Display for TieRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TieRule::Lexicographic => write!(f, "lex"),
            TieRule::EqualSplit => write!(f, "split"),
        }
    }
}

/// Exact enumeration or seeded sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Exact,
    MonteCarlo {
        samples: u64,
        seed: u64,
    },
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Exact => write!(f, "exact"),
            Method::MonteCarlo { .. } => write!(f, "mc"),
        }
    }
}

/// Everything needed to run one mechanism: its kind, body size `k` (sortition
/// only; first-past-the-post is fixed at `k = 1`), candidate set (closed
/// mechanisms only), tie rule, fallback for zero-mass rows, and method.
#[derive(Debug, Clone, PartialEq)]
pub struct MechanismSpec {
    pub kind: MechanismKind,
    pub k: Option<usize>,
    pub candidates: Option<CandidateSet>,
    pub tie_rule: TieRule,
    pub fallback: Fallback,
    pub method: Method,
}

impl MechanismSpec {
    fn new(kind: MechanismKind) -> Self {
        Self {
            kind,
            k: None,
            candidates: None,
            tie_rule: TieRule::default(),
            fallback: Fallback::default(),
            method: Method::default(),
        }
    }

    pub fn direct() -> Self {
        Self::new(MechanismKind::DirectDemocracy)
    }

    pub fn fptp(candidates: CandidateSet) -> Self {
        let mut spec = Self::new(MechanismKind::FirstPastThePost);
        spec.k = Some(1);
        spec.candidates = Some(candidates);
        spec
    }

    pub fn proxy(candidates: CandidateSet) -> Self {
        let mut spec = Self::new(MechanismKind::ProxyVoting);
        spec.candidates = Some(candidates);
        spec
    }

    pub fn liquid() -> Self {
        Self::new(MechanismKind::LiquidDemocracy)
    }

    pub fn sortition(k: usize) -> Self {
        let mut spec = Self::new(MechanismKind::Sortition);
        spec.k = Some(k);
        spec
    }

    pub fn with_tie_rule(mut self, tie_rule: TieRule) -> Self {
        self.tie_rule = tie_rule;
        self
    }

    pub fn with_fallback(mut self, fallback: Fallback) -> Self {
        self.fallback = fallback;
        self
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    /// Checks the flag combination against a matrix of `n` agents.
    pub fn validate(&self, n: usize) -> Result<()> {
        if let Some(k) = self.k {
            if k < 1 || k > n {
                return Err(Error::InvalidBodySize { k, n });
            }
        }
        if let Some(c) = &self.candidates {
            if let Some(&agent) = c.members().iter().find(|&&a| a >= n) {
                return Err(Error::CandidateOutOfRange { agent, n });
            }
        }
        match self.kind {
            MechanismKind::FirstPastThePost => {
                if self.candidates.is_none() {
                    return Err(Error::InvalidSpec(
                        "first-past-the-post requires a candidate set".into(),
                    ));
                }
                if self.k.is_some_and(|k| k != 1) {
                    return Err(Error::InvalidSpec(
                        "first-past-the-post selects a single winner (k = 1)".into(),
                    ));
                }
            }
            MechanismKind::ProxyVoting => {
                if self.candidates.is_none() {
                    return Err(Error::InvalidSpec(
                        "proxy voting requires a candidate set".into(),
                    ));
                }
            }
            MechanismKind::Sortition if self.k.is_none() => {
                return Err(Error::InvalidSpec(
                    "sortition requires a body size k".into(),
                ));
            }
            _ => {}
        }
        if let Method::MonteCarlo { samples: 0, .. } = self.method {
            return Err(Error::InvalidSpec("samples must be positive".into()));
        }
        Ok(())
    }

    /// Candidate set actually used: the given one for closed mechanisms, all
    /// agents otherwise.
    pub fn effective_candidates(&self, n: usize) -> CandidateSet {
        match self.kind {
            MechanismKind::FirstPastThePost | MechanismKind::ProxyVoting => self
                .candidates
                .clone()
                .unwrap_or_else(|| CandidateSet::full(n)),
            _ => CandidateSet::full(n),
        }
    }
}

/// One realization of everyone's vote, with its exact probability under the
/// product distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct VoteProfile {
    pub choices: Vec<Choice>,
    pub probability: BigRational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Choice {
    Vote(usize),
    Abstain,
}

/// The product space of row supports of a (projected) matrix. Abstainer rows
/// have empty support and contribute a deterministic [`Choice::Abstain`].
#[derive(Debug, Clone)]
pub struct ProfileSpace {
    rows: Vec<Vec<(usize, BigRational)>>,
}

impl ProfileSpace {
    pub fn of_matrix(gamma: &RepresentationMatrix) -> Self {
        Self {
            rows: (0..gamma.n()).map(|i| support(gamma.row(i))).collect(),
        }
    }

    pub fn of_projection(projected: &ProjectedMatrix) -> Self {
        Self {
            rows: (0..projected.n())
                .map(|i| support(projected.row(i)))
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Number of distinct profiles (saturating).
    pub fn outcome_count(&self) -> u128 {
        self.rows
            .iter()
            .map(|r| r.len().max(1) as u128)
            .fold(1u128, |acc, len| acc.saturating_mul(len))
    }

    /// Streams every profile exactly once; their probabilities sum to exactly
    /// 1. Fails with [`Error::StateSpaceTooLarge`] past the guard.
    pub fn enumerate(&self, guard: u64) -> Result<Profiles<'_>> {
        let size = self.outcome_count();
        if size > guard as u128 {
            return Err(Error::StateSpaceTooLarge { size, guard });
        }
        Ok(Profiles::new(&self.rows))
    }
}

fn support(row: &[BigRational]) -> Vec<(usize, BigRational)> {
    row.iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(j, p)| (j, p.clone()))
        .collect()
}

/// Odometer over the product of row supports, keeping prefix probability
/// products so each step costs O(changed suffix).
pub struct Profiles<'a> {
    rows: &'a [Vec<(usize, BigRational)>],
    indices: Vec<usize>,
    prefix: Vec<BigRational>,
    exhausted: bool,
}

impl<'a> Profiles<'a> {
    fn new(rows: &'a [Vec<(usize, BigRational)>]) -> Self {
        let mut iter = Self {
            rows,
            indices: vec![0; rows.len()],
            prefix: vec![BigRational::one(); rows.len() + 1],
            exhausted: false,
        };
        iter.recompute_prefix(0);
        iter
    }

    fn recompute_prefix(&mut self, from: usize) {
        for i in from..self.rows.len() {
            self.prefix[i + 1] = match self.rows[i].get(self.indices[i]) {
                Some((_, p)) => &self.prefix[i] * p,
                None => self.prefix[i].clone(),
            };
        }
    }
}

impl Iterator for Profiles<'_> {
    type Item = VoteProfile;

    fn next(&mut self) -> Option<VoteProfile> {
        if self.exhausted {
            return None;
        }
        let choices = self
            .rows
            .iter()
            .zip(&self.indices)
            .map(|(row, &idx)| match row.get(idx) {
                Some(&(target, _)) => Choice::Vote(target),
                None => Choice::Abstain,
            })
            .collect();
        let probability = self.prefix[self.rows.len()].clone();

        let mut pos = self.rows.len();
        loop {
            if pos == 0 {
                self.exhausted = true;
                break;
            }
            pos -= 1;
            if self.indices[pos] + 1 < self.rows[pos].len() {
                self.indices[pos] += 1;
                self.recompute_prefix(pos);
                break;
            }
            self.indices[pos] = 0;
        }

        Some(VoteProfile {
            choices,
            probability,
        })
    }
}

/// Exact weights, or sampled means with their standard errors.
#[derive(Debug, Clone, PartialEq)]
pub enum Weights {
    Exact(Vec<BigRational>),
    Estimate { mean: Vec<f64>, stderr: Vec<f64> },
}

/// A mechanism's output: per-agent expected voting weight, the spec that
/// produced it, and the agents who cast no vote under it.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedWeightVector {
    pub weights: Weights,
    pub spec: MechanismSpec,
    pub abstainers: Vec<usize>,
}

impl ExpectedWeightVector {
    fn exact(weights: Vec<BigRational>, spec: MechanismSpec, abstainers: Vec<usize>) -> Self {
        Self {
            weights: Weights::Exact(weights),
            spec,
            abstainers,
        }
    }

    pub fn n(&self) -> usize {
        match &self.weights {
            Weights::Exact(w) => w.len(),
            Weights::Estimate { mean, .. } => mean.len(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.weights, Weights::Exact(_))
    }

    /// The weights as rationals; estimates are converted from their exact
    /// binary representation.
    pub fn to_rationals(&self) -> Vec<BigRational> {
        match &self.weights {
            Weights::Exact(w) => w.clone(),
            Weights::Estimate { mean, .. } => mean
                .iter()
                .map(|&m| BigRational::from_f64(m).unwrap_or_else(BigRational::zero))
                .collect(),
        }
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        match &self.weights {
            Weights::Exact(w) => w.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect(),
            Weights::Estimate { mean, .. } => mean.clone(),
        }
    }

    pub fn stderr(&self) -> Option<&[f64]> {
        match &self.weights {
            Weights::Exact(_) => None,
            Weights::Estimate { stderr, .. } => Some(stderr),
        }
    }

    pub fn l1_exact(&self) -> Option<BigRational> {
        match &self.weights {
            Weights::Exact(w) => Some(w.iter().sum()),
            Weights::Estimate { .. } => None,
        }
    }

    pub fn l1_f64(&self) -> f64 {
        self.to_f64s().iter().sum()
    }

    /// Agents with strictly positive weight.
    pub fn support(&self) -> Vec<usize> {
        match &self.weights {
            Weights::Exact(w) => (0..w.len()).filter(|&j| !w[j].is_zero()).collect(),
            Weights::Estimate { mean, .. } => (0..mean.len()).filter(|&j| mean[j] > 0.0).collect(),
        }
    }
}

/// Runs the mechanism described by `spec` on `gamma`.
///
/// Closed-form mechanisms (direct democracy, proxy voting, sortition) are
/// computed exactly regardless of `spec.method`.
pub fn evaluate(
    gamma: &RepresentationMatrix,
    spec: &MechanismSpec,
    guard: u64,
) -> Result<ExpectedWeightVector> {
    spec.validate(gamma.n())?;
    let n = gamma.n();
    match spec.kind {
        MechanismKind::DirectDemocracy => Ok(ExpectedWeightVector::exact(
            vec![BigRational::one(); n],
            spec.clone(),
            Vec::new(),
        )),
        MechanismKind::Sortition => {
            let k = spec.k.expect("validated");
            let share = BigRational::new(BigInt::from(k), BigInt::from(n));
            Ok(ExpectedWeightVector::exact(
                vec![share; n],
                spec.clone(),
                Vec::new(),
            ))
        }
        MechanismKind::ProxyVoting => {
            let candidates = spec.candidates.as_ref().expect("validated");
            let projected = gamma.project(candidates, spec.fallback);
            let weights = projected.expected_vote_share().shares().to_vec();
            let abstainers = projected.abstainers().to_vec();
            Ok(ExpectedWeightVector::exact(weights, spec.clone(), abstainers))
        }
        MechanismKind::FirstPastThePost => {
            let candidates = spec.candidates.as_ref().expect("validated");
            let projected = gamma.project(candidates, spec.fallback);
            match spec.method {
                Method::Exact => {
                    let weights = fptp_exact(&projected, spec.tie_rule, guard)?;
                    Ok(ExpectedWeightVector::exact(
                        weights,
                        spec.clone(),
                        projected.abstainers().to_vec(),
                    ))
                }
                Method::MonteCarlo { .. } => mc_expected_weights(gamma, spec),
            }
        }
        MechanismKind::LiquidDemocracy => match spec.method {
            Method::Exact => {
                let weights = liquid_exact(gamma, guard)?;
                Ok(ExpectedWeightVector::exact(weights, spec.clone(), Vec::new()))
            }
            Method::MonteCarlo { .. } => mc_expected_weights(gamma, spec),
        },
    }
}

/// Direct democracy: everyone is in the body with weight 1, whatever the
/// matrix says.
pub fn direct_democracy(n: usize) -> ExpectedWeightVector {
    ExpectedWeightVector::exact(
        vec![BigRational::one(); n],
        MechanismSpec::direct(),
        Vec::new(),
    )
}

/// Sortition: a uniformly random body of `k` agents, each with weight 1, so
/// every agent's expected weight is `k/n`.
pub fn sortition_expected_weights(n: usize, k: usize) -> Result<ExpectedWeightVector> {
    if k < 1 || k > n {
        return Err(Error::InvalidBodySize { k, n });
    }
    let share = BigRational::new(BigInt::from(k), BigInt::from(n));
    Ok(ExpectedWeightVector::exact(
        vec![share; n],
        MechanismSpec::sortition(k),
        Vec::new(),
    ))
}

/// One realized sortition body: a uniform `k`-subset, each member weight 1.
pub fn sortition_sample(n: usize, k: usize, rng: &mut impl Rng) -> Vec<u64> {
    let mut weights = vec![0u64; n];
    for i in rand::seq::index::sample(rng, n, k) {
        weights[i] = 1;
    }
    weights
}

/// Proxy voting: candidates hold the expected number of delegations they
/// receive, i.e. the column sums of the projected matrix.
pub fn proxy_expected_weights(
    gamma: &RepresentationMatrix,
    candidates: &CandidateSet,
    fallback: Fallback,
) -> ExpectedWeightVector {
    let projected = gamma.project(candidates, fallback);
    ExpectedWeightVector::exact(
        projected.expected_vote_share().shares().to_vec(),
        MechanismSpec::proxy(candidates.clone()).with_fallback(fallback),
        projected.abstainers().to_vec(),
    )
}

/// First-past-the-post on a candidate set: per profile, weight 1 goes to the
/// candidate with the most votes (split per `tie_rule`); the expectation is
/// taken over all profiles of the projected matrix.
pub fn fptp_expected_weights(
    gamma: &RepresentationMatrix,
    candidates: &CandidateSet,
    tie_rule: TieRule,
    fallback: Fallback,
    guard: u64,
) -> Result<ExpectedWeightVector> {
    let projected = gamma.project(candidates, fallback);
    let weights = fptp_exact(&projected, tie_rule, guard)?;
    Ok(ExpectedWeightVector::exact(
        weights,
        MechanismSpec::fptp(candidates.clone())
            .with_tie_rule(tie_rule)
            .with_fallback(fallback),
        projected.abstainers().to_vec(),
    ))
}

fn fptp_exact(
    projected: &ProjectedMatrix,
    tie_rule: TieRule,
    guard: u64,
) -> Result<Vec<BigRational>> {
    let n = projected.n();
    let space = ProfileSpace::of_projection(projected);
    let mut acc = vec![BigRational::zero(); n];
    let mut counts = vec![0u64; n];
    for profile in space.enumerate(guard)? {
        tally_votes(&profile.choices, &mut counts);
        accumulate_fptp(&counts, tie_rule, &profile.probability, &mut acc);
    }
    Ok(acc)
}

/// Vote counts per agent for one profile; abstentions cast nothing.
pub fn tally_votes(choices: &[Choice], counts: &mut [u64]) {
    counts.fill(0);
    for choice in choices {
        if let Choice::Vote(j) = choice {
            counts[*j] += 1;
        }
    }
}

/// The weight vector first-past-the-post awards for one profile's vote
/// counts: all zero when no vote was cast, otherwise total weight exactly 1.
pub fn fptp_realized_weights(counts: &[u64], tie_rule: TieRule) -> Vec<BigRational> {
    let mut weights = vec![BigRational::zero(); counts.len()];
    let top = counts.iter().copied().max().unwrap_or(0);
    if top == 0 {
        return weights;
    }
    match tie_rule {
        TieRule::Lexicographic => {
            let winner = counts.iter().position(|&c| c == top).expect("top exists");
            weights[winner] = BigRational::one();
        }
        TieRule::EqualSplit => {
            let tied = counts.iter().filter(|&&c| c == top).count();
            let share = BigRational::new(BigInt::one(), BigInt::from(tied));
            for (j, &c) in counts.iter().enumerate() {
                if c == top {
                    weights[j] = share.clone();
                }
            }
        }
    }
    weights
}

fn accumulate_fptp(
    counts: &[u64],
    tie_rule: TieRule,
    probability: &BigRational,
    acc: &mut [BigRational],
) {
    let top = counts.iter().copied().max().unwrap_or(0);
    if top == 0 {
        return;
    }
    match tie_rule {
        TieRule::Lexicographic => {
            let winner = counts.iter().position(|&c| c == top).expect("top exists");
            acc[winner] += probability;
        }
        TieRule::EqualSplit => {
            let tied = counts.iter().filter(|&&c| c == top).count();
            let share = probability / BigRational::from_integer(BigInt::from(tied));
            for (j, &c) in counts.iter().enumerate() {
                if c == top {
                    acc[j] += &share;
                }
            }
        }
    }
}

/// Liquid democracy: the expectation of [`resolve_delegations`] over all
/// profiles of the raw matrix (agent `i` self-selects with probability
/// `Γ_ii`, otherwise delegates).
pub fn liquid_expected_weights(
    gamma: &RepresentationMatrix,
    guard: u64,
) -> Result<ExpectedWeightVector> {
    let weights = liquid_exact(gamma, guard)?;
    Ok(ExpectedWeightVector::exact(
        weights,
        MechanismSpec::liquid(),
        Vec::new(),
    ))
}

fn liquid_exact(gamma: &RepresentationMatrix, guard: u64) -> Result<Vec<BigRational>> {
    let n = gamma.n();
    let space = ProfileSpace::of_matrix(gamma);
    let mut acc = vec![BigRational::zero(); n];
    let mut choices = vec![0usize; n];
    let mut memo = Vec::new();
    let mut weights = vec![0u64; n];
    for profile in space.enumerate(guard)? {
        for (i, choice) in profile.choices.iter().enumerate() {
            choices[i] = match choice {
                Choice::Vote(j) => *j,
                // Rows of a stochastic matrix always have support.
                Choice::Abstain => unreachable!("liquid democracy has no abstentions"),
            };
        }
        resolve_delegations_into(&choices, &mut memo, &mut weights);
        for (j, &w) in weights.iter().enumerate() {
            if w > 0 {
                acc[j] += &profile.probability * BigRational::from_integer(BigInt::from(w));
            }
        }
    }
    Ok(acc)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Walk {
    Unresolved,
    OnPath,
    Sink(usize),
    Lost,
}

/// Resolves one profile of transitive delegations into realized weights.
///
/// Choices form a functional graph: self-voters are sinks and become body
/// members; every agent whose delegation walk reaches a sink adds 1 to that
/// sink's weight (sinks count themselves). Walks that enter a cycle never
/// reach a representative, so cycle members *and* agents delegating into the
/// cycle are lost and weigh 0.
pub fn resolve_delegations(choices: &[usize]) -> Vec<u64> {
    let mut weights = vec![0u64; choices.len()];
    let mut memo = Vec::new();
    resolve_delegations_into(choices, &mut memo, &mut weights);
    weights
}

fn resolve_delegations_into(choices: &[usize], memo: &mut Vec<Walk>, weights: &mut [u64]) {
    let n = choices.len();
    memo.clear();
    memo.resize(n, Walk::Unresolved);
    weights.fill(0);
    let mut path = Vec::new();
    for start in 0..n {
        if memo[start] != Walk::Unresolved {
            continue;
        }
        path.clear();
        let mut current = start;
        let outcome = loop {
            match memo[current] {
                Walk::Sink(sink) => break Some(sink),
                Walk::Lost => break None,
                // Hit our own path again: a fresh cycle. The whole path is
                // lost, both the cycle and the tail walking into it.
                Walk::OnPath => break None,
                Walk::Unresolved => {
                    if choices[current] == current {
                        break Some(current);
                    }
                    memo[current] = Walk::OnPath;
                    path.push(current);
                    current = choices[current];
                }
            }
        };
        match outcome {
            Some(sink) => {
                memo[sink] = Walk::Sink(sink);
                for &agent in &path {
                    memo[agent] = Walk::Sink(sink);
                }
            }
            None => {
                for &agent in &path {
                    memo[agent] = Walk::Lost;
                }
            }
        }
    }
    for walk in memo.iter().take(n) {
        if let Walk::Sink(sink) = walk {
            weights[*sink] += 1;
        }
    }
}

/// Monte Carlo estimate for first-past-the-post or liquid democracy (the
/// only mechanisms without a closed form).
///
/// Samples are drawn in fixed-size batches, each from its own ChaCha stream
/// derived from `seed`, and reduced in batch order, so the result depends
/// only on `(seed, samples)` and not on the worker count.
pub fn mc_expected_weights(
    gamma: &RepresentationMatrix,
    spec: &MechanismSpec,
) -> Result<ExpectedWeightVector> {
    spec.validate(gamma.n())?;
    let Method::MonteCarlo { samples, seed } = spec.method else {
        return Err(Error::InvalidSpec(
            "mc_expected_weights requires a Monte Carlo method".into(),
        ));
    };
    let n = gamma.n();

    let (rows, abstainers) = match spec.kind {
        MechanismKind::LiquidDemocracy => (sample_rows_of(|i| gamma.row(i), n), Vec::new()),
        MechanismKind::FirstPastThePost => {
            let candidates = spec.candidates.as_ref().expect("validated");
            let projected = gamma.project(candidates, spec.fallback);
            (
                sample_rows_of(|i| projected.row(i), n),
                projected.abstainers().to_vec(),
            )
        }
        _ => {
            return Err(Error::InvalidSpec(format!(
                "{} has a closed form; Monte Carlo applies to fptp and liquid only",
                spec.kind
            )))
        }
    };

    let batches = samples.div_ceil(MC_BATCH);
    let tie_rule = spec.tie_rule;
    let kind = spec.kind;
    let partials: Vec<(Vec<f64>, Vec<f64>)> = (0..batches)
        .into_par_iter()
        .map(|batch| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(batch);
            let count = (samples - batch * MC_BATCH).min(MC_BATCH);
            let mut sums = vec![0.0; n];
            let mut sumsqs = vec![0.0; n];
            let mut choices = vec![usize::MAX; n];
            let mut counts = vec![0u64; n];
            let mut weights = vec![0u64; n];
            let mut memo = Vec::new();
            for _ in 0..count {
                match kind {
                    MechanismKind::LiquidDemocracy => {
                        for (i, row) in rows.iter().enumerate() {
                            choices[i] = row.sample(&mut rng).expect("stochastic row");
                        }
                        resolve_delegations_into(&choices, &mut memo, &mut weights);
                        for j in 0..n {
                            let w = weights[j] as f64;
                            sums[j] += w;
                            sumsqs[j] += w * w;
                        }
                    }
                    MechanismKind::FirstPastThePost => {
                        counts.fill(0);
                        for row in &rows {
                            if let Some(j) = row.sample(&mut rng) {
                                counts[j] += 1;
                            }
                        }
                        let top = counts.iter().copied().max().unwrap_or(0);
                        if top == 0 {
                            continue;
                        }
                        match tie_rule {
                            TieRule::Lexicographic => {
                                let winner =
                                    counts.iter().position(|&c| c == top).expect("top exists");
                                sums[winner] += 1.0;
                                sumsqs[winner] += 1.0;
                            }
                            TieRule::EqualSplit => {
                                let tied = counts.iter().filter(|&&c| c == top).count();
                                let share = 1.0 / tied as f64;
                                for j in 0..n {
                                    if counts[j] == top {
                                        sums[j] += share;
                                        sumsqs[j] += share * share;
                                    }
                                }
                            }
                        }
                    }
                    _ => unreachable!(),
                }
            }
            (sums, sumsqs)
        })
        .collect();

    let mut sums = vec![0.0; n];
    let mut sumsqs = vec![0.0; n];
    for (batch_sums, batch_sumsqs) in partials {
        for j in 0..n {
            sums[j] += batch_sums[j];
            sumsqs[j] += batch_sumsqs[j];
        }
    }
    let total = samples as f64;
    let mean: Vec<f64> = sums.iter().map(|s| s / total).collect();
    let stderr: Vec<f64> = mean
        .iter()
        .zip(&sumsqs)
        .map(|(&m, &sq)| {
            if samples < 2 {
                0.0
            } else {
                ((sq - total * m * m).max(0.0) / ((total - 1.0) * total)).sqrt()
            }
        })
        .collect();

    Ok(ExpectedWeightVector {
        weights: Weights::Estimate { mean, stderr },
        spec: spec.clone(),
        abstainers,
    })
}

/// One matrix row prepared for sampling: support targets with a cumulative
/// f64 distribution. Empty support means the agent abstains.
struct SampleRow {
    targets: Vec<usize>,
    cumulative: Vec<f64>,
}

impl SampleRow {
    fn sample(&self, rng: &mut impl Rng) -> Option<usize> {
        match self.targets.len() {
            0 => None,
            1 => Some(self.targets[0]),
            _ => {
                let u: f64 = rng.random();
                let pos = self
                    .cumulative
                    .iter()
                    .position(|&c| u < c)
                    .unwrap_or(self.targets.len() - 1);
                Some(self.targets[pos])
            }
        }
    }
}

fn sample_rows_of<'a>(row: impl Fn(usize) -> &'a [BigRational], n: usize) -> Vec<SampleRow> {
    (0..n)
        .map(|i| {
            let support = support(row(i));
            let mut acc = 0.0;
            let cumulative = support
                .iter()
                .map(|(_, p)| {
                    acc += p.to_f64().unwrap_or(0.0);
                    acc
                })
                .collect();
            SampleRow {
                targets: support.into_iter().map(|(j, _)| j).collect(),
                cumulative,
            }
        })
        .collect()
}

/// Position of a mechanism run on the three design axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub openness: Openness,
    pub rigidity: Rigidity,
    pub directness: Directness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Openness {
    /// Anyone can end up in the body (the mechanism takes the full set).
    Open,
    /// The body is drawn from a pre-selected candidate pool.
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rigidity {
    /// Body size is an input parameter.
    Rigid,
    /// Body size emerges from the votes.
    Flexible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Directness {
    /// Every cast vote lands on the body: ‖f‖₁ equals the voter count.
    Direct,
    /// Some agents are represented by someone they did not vote for.
    Virtual,
}

impl fmt::Display for Openness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            match self {
                Openness::Open => "open",
                Openness::Closed => "closed",
            }
        )
    }
}

impl fmt::Display for Rigidity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            match self {
                Rigidity::Rigid => "rigid",
                Rigidity::Flexible => "flexible",
            }
        )
    }
}

impl fmt::Display for Directness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            match self {
                Directness::Direct => "direct",
                Directness::Virtual => "virtual",
            }
        )
    }
}

/// Labels a mechanism run on the open-closed, flexible-rigid, and
/// direct-virtual axes. Directness compares the result's ℓ1 norm with the
/// number of non-abstaining voters (exactly when exact, within four standard
/// errors when estimated).
pub fn classify_mechanism(spec: &MechanismSpec, result: &ExpectedWeightVector) -> Classification {
    let openness = match spec.kind {
        MechanismKind::DirectDemocracy
        | MechanismKind::LiquidDemocracy
        | MechanismKind::Sortition => Openness::Open,
        MechanismKind::FirstPastThePost | MechanismKind::ProxyVoting => Openness::Closed,
    };
    let rigidity = match spec.kind {
        MechanismKind::FirstPastThePost | MechanismKind::Sortition => Rigidity::Rigid,
        _ => Rigidity::Flexible,
    };
    let voters = result.n() - result.abstainers.len();
    let directness = match &result.weights {
        Weights::Exact(w) => {
            let l1: BigRational = w.iter().sum();
            if l1 == BigRational::from_integer(BigInt::from(voters)) {
                Directness::Direct
            } else {
                Directness::Virtual
            }
        }
        Weights::Estimate { stderr, .. } => {
            let tolerance = 4.0 * stderr.iter().sum::<f64>() + 1e-9;
            if (result.l1_f64() - voters as f64).abs() <= tolerance {
                Directness::Direct
            } else {
                Directness::Virtual
            }
        }
    };
    Classification {
        openness,
        rigidity,
        directness,
    }
}
