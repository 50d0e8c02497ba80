//! Representation matrices, candidate sets, and candidate projections.
//!
//! The representation matrix is the single source of voter behavior: entry
//! `(i, j)` is the probability that agent `i` votes for agent `j`. All types
//! here are immutable after construction and all operations are pure, so they
//! can be shared freely across threads.

use std::collections::BTreeSet;
use std::fmt;

use num::{BigRational, One, Signed, Zero};

use crate::{Error, Result};

/// What to do with a voter whose row has zero mass on the candidate set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fallback {
    /// The vote is not cast; the agent is recorded as an abstainer.
    #[default]
    Abstain,
    /// The vote is spread uniformly over the candidates.
    Uniform,
}

impl fmt::Display for Fallback {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fallback::Abstain => write!(f, "abstain"),
            Fallback::Uniform => write!(f, "uniform"),
        }
    }
}

/// A validated row-stochastic matrix of exact rationals.
///
/// Invariants: square with `n >= 1`, every entry nonnegative, every row sums
/// to exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentationMatrix {
    n: usize,
    entries: Vec<BigRational>,
    labels: Option<Vec<String>>,
}

impl RepresentationMatrix {
    /// Validates a raw grid and wraps it. Errors identify the offending
    /// location: [`Error::NonSquare`], [`Error::NegativeEntry`], or
    /// [`Error::RowSumNotOne`].
    pub fn new(rows: Vec<Vec<BigRational>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::NonSquare {
                rows: 0,
                row: 0,
                cols: 0,
            });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NonSquare {
                    rows: n,
                    row: i,
                    cols: row.len(),
                });
            }
            for (j, entry) in row.iter().enumerate() {
                if entry.is_negative() {
                    return Err(Error::NegativeEntry { row: i, col: j });
                }
            }
            let sum: BigRational = row.iter().sum();
            if !sum.is_one() {
                return Err(Error::RowSumNotOne { row: i, sum });
            }
        }
        if let Some(ref labels) = labels {
            if labels.len() != n {
                return Err(Error::LabelCountMismatch {
                    expected: n,
                    got: labels.len(),
                });
            }
        }
        Ok(Self {
            n,
            entries: rows.into_iter().flatten().collect(),
            labels,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of agent `i`: the provided label, or the index itself.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(labels) => labels[i].clone(),
            None => i.to_string(),
        }
    }

    /// Resolves a label or a 0-based index to an agent index.
    pub fn agent_by_name(&self, name: &str) -> Option<usize> {
        if let Some(labels) = &self.labels {
            if let Some(i) = labels.iter().position(|l| l == name) {
                return Some(i);
            }
        }
        name.parse::<usize>().ok().filter(|&i| i < self.n)
    }

    /// Column sums of the matrix: the expected vote share of every agent.
    pub fn expected_vote_share(&self) -> VoteShareVector {
        VoteShareVector {
            shares: self.column_sums(),
        }
    }

    pub fn column_sums(&self) -> Vec<BigRational> {
        let mut sums = vec![BigRational::zero(); self.n];
        for i in 0..self.n {
            for (j, sum) in sums.iter_mut().enumerate() {
                *sum += self.entry(i, j);
            }
        }
        sums
    }

    /// Restricts the matrix to a candidate set: candidates vote for
    /// themselves, non-candidates redistribute their mass over the candidate
    /// columns, and rows with zero mass on the candidates follow `fallback`.
    pub fn project(&self, candidates: &CandidateSet, fallback: Fallback) -> ProjectedMatrix {
        let n = self.n;
        let mut entries = vec![BigRational::zero(); n * n];
        let mut abstainers = Vec::new();
        for i in 0..n {
            if candidates.contains(i) {
                entries[i * n + i] = BigRational::one();
                continue;
            }
            let mass: BigRational = candidates.members().iter().map(|&j| self.entry(i, j)).sum();
            if mass.is_zero() {
                match fallback {
                    Fallback::Abstain => abstainers.push(i),
                    Fallback::Uniform => {
                        let share = BigRational::new(1.into(), (candidates.m() as i64).into());
                        for &j in candidates.members() {
                            entries[i * n + j] = share.clone();
                        }
                    }
                }
            } else {
                for &j in candidates.members() {
                    entries[i * n + j] = self.entry(i, j) / &mass;
                }
            }
        }
        ProjectedMatrix {
            base: self.clone(),
            candidates: candidates.clone(),
            entries,
            abstainers,
            fallback,
        }
    }
}

/// A nonempty set of agents eligible for the representative body, kept
/// sorted and distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    members: Vec<usize>,
}

impl CandidateSet {
    pub fn new(members: impl IntoIterator<Item = usize>, n: usize) -> Result<Self> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        if members.is_empty() {
            return Err(Error::EmptyCandidateSet);
        }
        if let Some(&agent) = members.iter().find(|&&a| a >= n) {
            return Err(Error::CandidateOutOfRange { agent, n });
        }
        Ok(Self {
            members: members.into_iter().collect(),
        })
    }

    /// The full agent set `[n]`.
    pub fn full(n: usize) -> Self {
        Self {
            members: (0..n).collect(),
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Cardinality of the set.
    pub fn m(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, agent: usize) -> bool {
        self.members.binary_search(&agent).is_ok()
    }
}

/// A representation matrix rewritten for a candidate set. Candidate rows are
/// self-indicators; non-candidate rows live on candidate columns and sum to 1,
/// except abstainer rows, which are all zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectedMatrix {
    base: RepresentationMatrix,
    candidates: CandidateSet,
    entries: Vec<BigRational>,
    abstainers: Vec<usize>,
    fallback: Fallback,
}

impl ProjectedMatrix {
    pub fn n(&self) -> usize {
        self.base.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.n() + j]
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        let n = self.n();
        &self.entries[i * n..(i + 1) * n]
    }

    pub fn base(&self) -> &RepresentationMatrix {
        &self.base
    }

    pub fn candidates(&self) -> &CandidateSet {
        &self.candidates
    }

    /// Agents casting no vote, sorted. Empty under the uniform fallback.
    pub fn abstainers(&self) -> &[usize] {
        &self.abstainers
    }

    pub fn fallback(&self) -> Fallback {
        self.fallback
    }

    /// Column sums; they total `n` minus the number of abstainers.
    pub fn expected_vote_share(&self) -> VoteShareVector {
        let n = self.n();
        let mut sums = vec![BigRational::zero(); n];
        for i in 0..n {
            for (j, sum) in sums.iter_mut().enumerate() {
                *sum += self.entry(i, j);
            }
        }
        VoteShareVector { shares: sums }
    }
}

/// Per-agent expected vote shares (column sums of a matrix).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoteShareVector {
    shares: Vec<BigRational>,
}

impl VoteShareVector {
    pub fn shares(&self) -> &[BigRational] {
        &self.shares
    }

    pub fn len(&self) -> usize {
        self.shares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shares.is_empty()
    }

    pub fn l1(&self) -> BigRational {
        self.shares.iter().sum()
    }

    /// The shares divided by their total, summing to exactly 1.
    pub fn normalized(&self) -> Result<Vec<BigRational>> {
        normalize_l1(&self.shares)
    }
}

impl std::ops::Index<usize> for VoteShareVector {
    type Output = BigRational;

    fn index(&self, j: usize) -> &BigRational {
        &self.shares[j]
    }
}

/// Divides a nonnegative vector by its ℓ1 norm so it sums to exactly 1.
pub fn normalize_l1(values: &[BigRational]) -> Result<Vec<BigRational>> {
    let total: BigRational = values.iter().sum();
    if total.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(values.iter().map(|v| v / &total).collect())
}
