//! Matrix families for sweeps and counterexample searches, plus summary
//! statistics of a matrix's algebraic structure.

use num::bigint::BigInt;
use num::{BigRational, One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use crate::matrix::RepresentationMatrix;
use crate::rational::ratio;
use crate::{Error, Result};

/// Denominator bound used when rounding sampled rows to exact rationals.
pub const DEFAULT_DENOMINATOR_CAP: u64 = 1_000_000;

/// A parametrized family of representation matrices.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Identity,
    /// Every entry `1/n`.
    Uniform,
    /// The built-in five-agent worked example (requires `n = 5`).
    RunningExample,
    /// Polarized groups: each agent spreads `intra_mass` uniformly over its
    /// own block (itself included) and the rest uniformly over outsiders.
    BlockPolarized {
        blocks: Vec<usize>,
        intra_mass: BigRational,
    },
    /// Power-seeking agents: every diagonal entry is `trace_mass`, the rest
    /// of each row is uniform over the other agents.
    PowerSeeking { trace_mass: BigRational },
    /// Rows drawn independently from a symmetric Dirichlet distribution and
    /// rounded to exact rationals with denominator at most `denominator_cap`.
    /// Higher concentration gives more uniform rows.
    RandomStochastic {
        concentration: BigRational,
        denominator_cap: u64,
    },
}

/// A family plus its size and seed; the seed only matters for random
/// families. Same spec, same matrix, on every platform.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
}

impl FamilySpec {
    pub fn new(family: Family, n: usize) -> Self {
        Self { family, n, seed: 0 }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// The five-agent worked example: two parties `{A, B}` and `{C, D, E}` with
/// power-seekers A and E, partisans B and D, and moderate C.
pub fn running_example() -> RepresentationMatrix {
    let rows = vec![
        vec![ratio(1, 1), ratio(0, 1), ratio(0, 1), ratio(0, 1), ratio(0, 1)],
        vec![ratio(2, 3), ratio(1, 3), ratio(0, 1), ratio(0, 1), ratio(0, 1)],
        vec![ratio(0, 1), ratio(1, 3), ratio(2, 3), ratio(0, 1), ratio(0, 1)],
        vec![ratio(0, 1), ratio(0, 1), ratio(2, 5), ratio(1, 5), ratio(2, 5)],
        vec![ratio(0, 1), ratio(0, 1), ratio(0, 1), ratio(0, 1), ratio(1, 1)],
    ];
    let labels = ["A", "B", "C", "D", "E"].map(String::from).to_vec();
    RepresentationMatrix::new(rows, Some(labels)).expect("fixture is stochastic")
}

/// Builds the matrix described by `spec`.
pub fn generate(spec: &FamilySpec) -> Result<RepresentationMatrix> {
    let n = spec.n;
    if n == 0 {
        return Err(Error::InvalidSpec("matrix size must be positive".into()));
    }
    let rows = match &spec.family {
        Family::Identity => (0..n)
            .map(|i| indicator_row(n, i))
            .collect(),
        Family::Uniform => {
            let share = ratio(1, n as i64);
            vec![vec![share; n]; n]
        }
        Family::RunningExample => {
            if n != 5 {
                return Err(Error::InvalidSpec(format!(
                    "the running example has 5 agents, not {n}"
                )));
            }
            return Ok(running_example());
        }
        Family::BlockPolarized { blocks, intra_mass } => {
            block_polarized_rows(n, blocks, intra_mass)?
        }
        Family::PowerSeeking { trace_mass } => power_seeking_rows(n, trace_mass)?,
        Family::RandomStochastic {
            concentration,
            denominator_cap,
        } => random_rows(n, concentration, *denominator_cap, spec.seed)?,
    };
    RepresentationMatrix::new(rows, None)
}

fn indicator_row(n: usize, i: usize) -> Vec<BigRational> {
    let mut row = vec![BigRational::zero(); n];
    row[i] = BigRational::one();
    row
}

fn check_unit_interval(name: &str, value: &BigRational) -> Result<()> {
    if value.is_negative() || *value > BigRational::one() {
        return Err(Error::InvalidSpec(format!("{name} must lie in [0, 1]")));
    }
    Ok(())
}

fn block_polarized_rows(
    n: usize,
    blocks: &[usize],
    intra_mass: &BigRational,
) -> Result<Vec<Vec<BigRational>>> {
    check_unit_interval("intra_mass", intra_mass)?;
    if blocks.contains(&0) || blocks.iter().sum::<usize>() != n {
        return Err(Error::InvalidSpec(format!(
            "block sizes must be positive and sum to {n}"
        )));
    }
    // block_of[i] = (start, size) of agent i's block
    let mut block_of = Vec::with_capacity(n);
    let mut start = 0;
    for &size in blocks {
        for _ in 0..size {
            block_of.push((start, size));
        }
        start += size;
    }
    let outside = BigRational::one() - intra_mass;
    let mut rows = Vec::with_capacity(n);
    for &(start, size) in &block_of {
        if size == n && !outside.is_zero() {
            return Err(Error::InvalidSpec(
                "a single block covering all agents requires intra_mass = 1".into(),
            ));
        }
        let inside_share = intra_mass / BigRational::from_integer(BigInt::from(size));
        let outside_share = if size == n {
            BigRational::zero()
        } else {
            &outside / BigRational::from_integer(BigInt::from(n - size))
        };
        let row = (0..n)
            .map(|j| {
                if j >= start && j < start + size {
                    inside_share.clone()
                } else {
                    outside_share.clone()
                }
            })
            .collect();
        rows.push(row);
    }
    Ok(rows)
}

fn power_seeking_rows(n: usize, trace_mass: &BigRational) -> Result<Vec<Vec<BigRational>>> {
    check_unit_interval("trace_mass", trace_mass)?;
    if n == 1 && !trace_mass.is_one() {
        return Err(Error::InvalidSpec(
            "a single agent requires trace_mass = 1".into(),
        ));
    }
    let off = if n == 1 {
        BigRational::zero()
    } else {
        (BigRational::one() - trace_mass) / BigRational::from_integer(BigInt::from(n - 1))
    };
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { trace_mass.clone() } else { off.clone() })
                .collect()
        })
        .collect())
}

fn random_rows(
    n: usize,
    concentration: &BigRational,
    denominator_cap: u64,
    seed: u64,
) -> Result<Vec<Vec<BigRational>>> {
    let alpha = concentration.to_f64().unwrap_or(0.0);
    if !alpha.is_finite() || alpha <= 0.0 || denominator_cap == 0 {
        return Err(Error::InvalidSpec(
            "concentration and denominator cap must be positive".into(),
        ));
    }
    let gamma_dist = Gamma::new(alpha, 1.0)
        .map_err(|e| Error::InvalidSpec(format!("bad concentration: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n)
        .map(|_| {
            let draws: Vec<f64> = (0..n).map(|_| gamma_dist.sample(&mut rng)).collect();
            let total: f64 = draws.iter().sum();
            let simplex: Vec<f64> = if total > 0.0 {
                draws.iter().map(|x| x / total).collect()
            } else {
                vec![1.0 / n as f64; n]
            };
            round_to_simplex(&simplex, denominator_cap)
        })
        .collect();
    Ok(rows)
}

/// Rounds a point of the probability simplex to exact rationals over a common
/// denominator, using largest remainders so the row sums to exactly 1.
fn round_to_simplex(point: &[f64], cap: u64) -> Vec<BigRational> {
    let mut floors: Vec<u64> = Vec::with_capacity(point.len());
    let mut remainders: Vec<(usize, f64)> = Vec::with_capacity(point.len());
    for (i, &x) in point.iter().enumerate() {
        let scaled = (x.max(0.0) * cap as f64).min(cap as f64);
        let floor = scaled.floor();
        floors.push(floor as u64);
        remainders.push((i, scaled - floor));
    }
    let assigned: u64 = floors.iter().sum();
    let missing = cap.saturating_sub(assigned);
    remainders.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    for &(i, _) in remainders.iter().cycle().take(missing as usize) {
        floors[i] += 1;
    }
    floors
        .into_iter()
        .map(|p| BigRational::new(BigInt::from(p), BigInt::from(cap)))
        .collect()
}

/// Summary of a matrix's structure: trace, exact rank, and the connected
/// components of the symmetrized positive-entry graph.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixStats {
    pub trace: BigRational,
    pub rank: usize,
    pub components: Vec<Vec<usize>>,
}

pub fn matrix_stats(gamma: &RepresentationMatrix) -> MatrixStats {
    let n = gamma.n();
    let trace = (0..n).map(|i| gamma.entry(i, i)).sum();
    MatrixStats {
        trace,
        rank: exact_rank(gamma),
        components: support_components(gamma),
    }
}

/// Rank over the rationals by Gaussian elimination, exactly.
fn exact_rank(gamma: &RepresentationMatrix) -> usize {
    let n = gamma.n();
    let mut rows: Vec<Vec<BigRational>> = (0..n).map(|i| gamma.row(i).to_vec()).collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..n).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &pivot_row[col];
            for (entry, pivot_entry) in row.iter_mut().zip(&pivot_row).skip(col) {
                *entry -= &factor * pivot_entry;
            }
        }
        rank += 1;
        if rank == n {
            break;
        }
    }
    rank
}

fn support_components(gamma: &RepresentationMatrix) -> Vec<Vec<usize>> {
    let n = gamma.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && !gamma.entry(i, j).is_zero() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    groups.into_values().collect()
}
