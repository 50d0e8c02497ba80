//! Command-line interface: flag parsing, dispatch, and exit codes.
//!
//! Exit codes: 0 = computed, 1 = input or usage error, 2 = an axiom was
//! violated (or a counterexample found), 3 = the built-in reference values
//! did not reproduce.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::axioms::{
    check_diversity, check_faithfulness, check_monotonicity_pair, gamma_effectiveness,
    proportionality_diff, search_monotonicity_counterexample, sweep_epsilon_bounds, ShareBasis,
    SweepDomain, Verdict,
};
use crate::generators::{generate, Family, FamilySpec, DEFAULT_DENOMINATOR_CAP};
use crate::matrix::{CandidateSet, Fallback, RepresentationMatrix};
use crate::mechanisms::{
    classify_mechanism, default_guard, evaluate, MechanismKind, MechanismSpec, Method, TieRule,
};
use crate::rational::parse_rational;
use crate::report::{
    to_json, AxiomJson, AxiomsReport, CoalitionJson, EvaluateReport, Format,
    MonotonicityPairReport, ProportionalityJson, SearchReport, SweepReport, VERSION,
};
use crate::reproduction::reproduce;
use crate::{io, Error, Result};

#[derive(Parser)]
#[command(
    name = "repsel",
    version,
    about = "Expected voting weights and representation axioms for representative-body selection mechanisms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a mechanism's expected voting-weight vector
    Evaluate(EvaluateArgs),
    /// Evaluate representation axioms for a mechanism
    Axioms(AxiomsArgs),
    /// Best- and worst-case proportionality over candidate sets
    Sweep(SweepArgs),
    /// Write a matrix from a parametrized family
    Generate(GenerateArgs),
    /// Check monotonicity for one pair of matrices
    CheckMonotonicity(CheckMonotonicityArgs),
    /// Randomized search for a monotonicity counterexample
    SearchMono(SearchMonoArgs),
    /// Recompute the bundled worked example and compare against the
    /// published reference values
    ReproducePaper(ReproducePaperArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MechanismArg {
    Direct,
    Fptp,
    Proxy,
    Liquid,
    Sortition,
}

impl From<MechanismArg> for MechanismKind {
    fn from(arg: MechanismArg) -> Self {
        match arg {
            MechanismArg::Direct => MechanismKind::DirectDemocracy,
            MechanismArg::Fptp => MechanismKind::FirstPastThePost,
            MechanismArg::Proxy => MechanismKind::ProxyVoting,
            MechanismArg::Liquid => MechanismKind::LiquidDemocracy,
            MechanismArg::Sortition => MechanismKind::Sortition,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TieArg {
    Lex,
    Split,
}

impl From<TieArg> for TieRule {
    fn from(arg: TieArg) -> Self {
        match arg {
            TieArg::Lex => TieRule::Lexicographic,
            TieArg::Split => TieRule::EqualSplit,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FallbackArg {
    Abstain,
    Uniform,
}

impl From<FallbackArg> for Fallback {
    fn from(arg: FallbackArg) -> Self {
        match arg {
            FallbackArg::Abstain => Fallback::Abstain,
            FallbackArg::Uniform => Fallback::Uniform,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Exact,
    Mc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Table,
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(arg: FormatArg) -> Self {
        match arg {
            FormatArg::Table => Format::Table,
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

/// Flags shared by every mechanism-running subcommand.
#[derive(Args)]
struct MechanismFlags {
    /// Selection mechanism
    #[arg(long, value_enum)]
    mechanism: MechanismArg,

    /// Candidates as comma-separated labels or 0-based indices (fptp, proxy)
    #[arg(long, value_delimiter = ',')]
    candidates: Option<Vec<String>>,

    /// Representative-body size (sortition)
    #[arg(long)]
    k: Option<usize>,

    /// Tie rule for first-past-the-post
    #[arg(long, value_enum, default_value = "lex")]
    tie: TieArg,

    /// What a voter with zero mass on the candidates does
    #[arg(long, value_enum, default_value = "abstain")]
    fallback: FallbackArg,

    /// Exact enumeration or Monte Carlo sampling
    #[arg(long, value_enum, default_value = "exact")]
    method: MethodArg,

    /// Monte Carlo sample count
    #[arg(long, default_value_t = 100_000)]
    samples: u64,

    /// Monte Carlo seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl MechanismFlags {
    fn build_spec(&self, matrix: &RepresentationMatrix) -> Result<MechanismSpec> {
        let kind = MechanismKind::from(self.mechanism);
        let candidates = self
            .candidates
            .as_ref()
            .map(|tokens| resolve_candidates(matrix, tokens))
            .transpose()?;
        let mut spec = MechanismSpec {
            kind,
            k: self.k,
            candidates,
            tie_rule: self.tie.into(),
            fallback: self.fallback.into(),
            method: match self.method {
                MethodArg::Exact => Method::Exact,
                MethodArg::Mc => Method::MonteCarlo {
                    samples: self.samples,
                    seed: self.seed,
                },
            },
        };
        if kind == MechanismKind::FirstPastThePost && spec.k.is_none() {
            spec.k = Some(1);
        }
        spec.validate(matrix.n())?;
        Ok(spec)
    }
}

fn resolve_candidates(
    matrix: &RepresentationMatrix,
    tokens: &[String],
) -> Result<CandidateSet> {
    let members = tokens
        .iter()
        .map(|token| {
            matrix.agent_by_name(token.trim()).ok_or_else(|| {
                Error::InvalidSpec(format!("unknown agent {:?} in --candidates", token.trim()))
            })
        })
        .collect::<Result<Vec<usize>>>()?;
    CandidateSet::new(members, matrix.n())
}

#[derive(Args)]
struct EvaluateArgs {
    /// Path of the matrix JSON file
    #[arg(long)]
    matrix: PathBuf,

    #[command(flatten)]
    mechanism: MechanismFlags,

    /// Profile-count guard for exact enumeration (default: REPSEL_GUARD or 10^7)
    #[arg(long)]
    guard: Option<u64>,

    #[arg(long, value_enum, default_value = "table")]
    format: FormatArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckArg {
    Eps,
    Div,
    Faith,
    Gamma,
}

#[derive(Args)]
struct AxiomsArgs {
    #[arg(long)]
    matrix: PathBuf,

    #[command(flatten)]
    mechanism: MechanismFlags,

    /// Axioms to evaluate
    #[arg(long, value_delimiter = ',', default_value = "eps,div,faith,gamma")]
    checks: Vec<CheckArg>,

    /// Compare diversity against the original or the projected vote shares
    #[arg(long, value_enum, default_value = "original")]
    share_basis: ShareBasisArg,

    #[arg(long)]
    guard: Option<u64>,

    #[arg(long, value_enum, default_value = "table")]
    format: FormatArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ShareBasisArg {
    Original,
    Projected,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    matrix: PathBuf,

    /// Candidate-dependent mechanism to sweep
    #[arg(long, value_enum)]
    mechanism: SweepMechanismArg,

    /// Candidate-set size to sweep, or "all" for every nonempty proper subset
    /// (default: n - 1)
    #[arg(long)]
    size: Option<String>,

    #[arg(long, value_enum, default_value = "lex")]
    tie: TieArg,

    #[arg(long, value_enum, default_value = "abstain")]
    fallback: FallbackArg,

    /// Skip candidate sets where the mechanism is undefined instead of failing
    #[arg(long)]
    skip_undefined: bool,

    #[arg(long)]
    guard: Option<u64>,

    #[arg(long, value_enum, default_value = "table")]
    format: FormatArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepMechanismArg {
    Fptp,
    Proxy,
}

#[derive(Args)]
struct GenerateArgs {
    /// Matrix family
    #[arg(long, value_enum)]
    family: FamilyArg,

    /// Number of agents
    #[arg(long)]
    n: usize,

    /// Block sizes, comma separated (block family)
    #[arg(long, value_delimiter = ',')]
    blocks: Option<Vec<usize>>,

    /// Within-block mass in [0, 1] (block family)
    #[arg(long, default_value = "9/10")]
    intra: String,

    /// Diagonal mass in [0, 1] (power family)
    #[arg(long, default_value = "1/2")]
    trace_mass: String,

    /// Dirichlet concentration (random family)
    #[arg(long, default_value = "1")]
    concentration: String,

    /// Seed for random families
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output path for the matrix JSON file
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Identity,
    Uniform,
    Example,
    Block,
    Power,
    Random,
}

#[derive(Args)]
struct CheckMonotonicityArgs {
    /// The baseline matrix
    #[arg(long)]
    matrix: PathBuf,

    /// The perturbed matrix
    #[arg(long = "matrix2")]
    matrix2: PathBuf,

    #[command(flatten)]
    mechanism: MechanismFlags,

    /// Agent whose vote share rises (label or 0-based index)
    #[arg(long)]
    agent: String,

    #[arg(long)]
    guard: Option<u64>,

    #[arg(long, value_enum, default_value = "table")]
    format: FormatArg,
}

#[derive(Args)]
struct SearchMonoArgs {
    #[arg(long, value_enum)]
    mechanism: MechanismArg,

    /// Number of agents in the sampled matrices
    #[arg(long)]
    n: usize,

    /// Number of random trials
    #[arg(long, default_value_t = 10_000)]
    trials: u64,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long)]
    guard: Option<u64>,

    #[arg(long, value_enum, default_value = "table")]
    format: FormatArg,
}

#[derive(Args)]
struct ReproducePaperArgs {
    #[arg(long, value_enum, default_value = "table")]
    format: FormatArg,
}

/// Parses `argv` and runs the selected subcommand, returning the process
/// exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are not usage errors.
            let code = if err.exit_code() == 0 { 0 } else { 1 };
            let _ = err.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Axioms(args) => cmd_axioms(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Generate(args) => cmd_generate(args),
        Command::CheckMonotonicity(args) => cmd_check_monotonicity(args),
        Command::SearchMono(args) => cmd_search_mono(args),
        Command::ReproducePaper(args) => cmd_reproduce(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

fn guard_or_default(flag: Option<u64>) -> u64 {
    flag.unwrap_or_else(default_guard)
}

fn unsupported_csv() -> Error {
    Error::InvalidSpec("csv output is available for evaluate and sweep only".into())
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<i32> {
    let started = Instant::now();
    let matrix = io::load_matrix(&args.matrix)?;
    let spec = args.mechanism.build_spec(&matrix)?;
    let weights = evaluate(&matrix, &spec, guard_or_default(args.guard))?;
    let classification = classify_mechanism(&spec, &weights);
    let report = EvaluateReport::new(
        &matrix,
        &spec,
        &weights,
        classification,
        started.elapsed().as_millis(),
    );
    match args.format.into() {
        Format::Table => print!("{}", report.to_table()),
        Format::Json => println!("{}", to_json(&report)),
        Format::Csv => print!("{}", report.to_csv()),
    }
    Ok(0)
}

fn cmd_axioms(args: AxiomsArgs) -> Result<i32> {
    let started = Instant::now();
    let matrix = io::load_matrix(&args.matrix)?;
    let spec = args.mechanism.build_spec(&matrix)?;
    let guard = guard_or_default(args.guard);
    let basis = match args.share_basis {
        ShareBasisArg::Original => ShareBasis::Original,
        ShareBasisArg::Projected => ShareBasis::Projected,
    };

    let mut report = AxiomsReport {
        version: VERSION,
        mechanism: spec.kind.to_string(),
        proportionality: None,
        diversity: None,
        faithfulness: None,
        gamma_effectiveness: None,
        violated: false,
        elapsed_ms: 0,
    };
    for check in &args.checks {
        match check {
            CheckArg::Eps => {
                let prop = proportionality_diff(&matrix, &spec, guard)?;
                report.proportionality = Some(ProportionalityJson::new(&matrix, &prop));
            }
            CheckArg::Div => {
                let div = check_diversity(&matrix, &spec, basis, guard)?;
                report.violated |= div.verdict == Verdict::Violated;
                report.diversity = Some(AxiomJson::new(&matrix, &div));
            }
            CheckArg::Faith => {
                let faith = check_faithfulness(&matrix, &spec, guard)?;
                report.violated |= faith.verdict == Verdict::Violated;
                report.faithfulness = Some(AxiomJson::new(&matrix, &faith));
            }
            CheckArg::Gamma => {
                let gamma = gamma_effectiveness(&matrix, &spec, guard)?;
                report.gamma_effectiveness = Some(CoalitionJson::new(&gamma));
            }
        }
    }
    report.elapsed_ms = started.elapsed().as_millis();
    match args.format.into() {
        Format::Table => print!("{}", report.to_table()),
        Format::Json => println!("{}", to_json(&report)),
        Format::Csv => return Err(unsupported_csv()),
    }
    Ok(if report.violated { 2 } else { 0 })
}

fn cmd_sweep(args: SweepArgs) -> Result<i32> {
    let started = Instant::now();
    let matrix = io::load_matrix(&args.matrix)?;
    let kind = match args.mechanism {
        SweepMechanismArg::Fptp => MechanismKind::FirstPastThePost,
        SweepMechanismArg::Proxy => MechanismKind::ProxyVoting,
    };
    let domain = match args.size.as_deref() {
        None => SweepDomain::FixedSize(matrix.n().saturating_sub(1).max(1)),
        Some("all") => SweepDomain::AllProperSubsets,
        Some(text) => SweepDomain::FixedSize(text.parse().map_err(|_| {
            Error::InvalidSpec(format!("--size takes a positive integer or \"all\", got {text:?}"))
        })?),
    };
    let sweep = sweep_epsilon_bounds(
        &matrix,
        kind,
        domain,
        args.tie.into(),
        args.fallback.into(),
        args.skip_undefined,
        guard_or_default(args.guard),
    )?;
    let report = SweepReport::new(
        &matrix,
        kind.to_string(),
        TieRule::from(args.tie).to_string(),
        Fallback::from(args.fallback).to_string(),
        &sweep,
        started.elapsed().as_millis(),
    );
    match args.format.into() {
        Format::Table => print!("{}", report.to_table()),
        Format::Json => println!("{}", to_json(&report)),
        Format::Csv => print!("{}", report.to_csv()),
    }
    Ok(0)
}

fn cmd_generate(args: GenerateArgs) -> Result<i32> {
    let family = match args.family {
        FamilyArg::Identity => Family::Identity,
        FamilyArg::Uniform => Family::Uniform,
        FamilyArg::Example => Family::RunningExample,
        FamilyArg::Block => Family::BlockPolarized {
            blocks: args.blocks.clone().ok_or_else(|| {
                Error::InvalidSpec("--family block requires --blocks".into())
            })?,
            intra_mass: parse_rational(&args.intra)?,
        },
        FamilyArg::Power => Family::PowerSeeking {
            trace_mass: parse_rational(&args.trace_mass)?,
        },
        FamilyArg::Random => Family::RandomStochastic {
            concentration: parse_rational(&args.concentration)?,
            denominator_cap: DEFAULT_DENOMINATOR_CAP,
        },
    };
    let matrix = generate(&FamilySpec::new(family, args.n).with_seed(args.seed))?;
    io::save_matrix(&args.out, &matrix)?;
    println!("wrote {} ({} agents)", args.out.display(), matrix.n());
    Ok(0)
}

fn cmd_check_monotonicity(args: CheckMonotonicityArgs) -> Result<i32> {
    let started = Instant::now();
    let matrix = io::load_matrix(&args.matrix)?;
    let matrix2 = io::load_matrix(&args.matrix2)?;
    let spec = args.mechanism.build_spec(&matrix)?;
    let agent = matrix.agent_by_name(args.agent.trim()).ok_or_else(|| {
        Error::InvalidSpec(format!("unknown agent {:?} in --agent", args.agent.trim()))
    })?;
    let outcome =
        check_monotonicity_pair(&matrix, &matrix2, &spec, agent, guard_or_default(args.guard))?;
    let (before, after) = match outcome.violations.first() {
        Some(crate::axioms::Violation::WeightDrop { before, after, .. }) => (
            Some(crate::rational::format_rational(before)),
            Some(crate::rational::format_rational(after)),
        ),
        _ => (None, None),
    };
    let report = MonotonicityPairReport {
        version: VERSION,
        mechanism: spec.kind.to_string(),
        agent: matrix.label(agent),
        premise_holds: outcome.verdict != Verdict::Undefined,
        verdict: outcome.verdict.to_string(),
        weight_before: before,
        weight_after: after,
        elapsed_ms: started.elapsed().as_millis(),
    };
    match args.format.into() {
        Format::Table => print!("{}", report.to_table()),
        Format::Json => println!("{}", to_json(&report)),
        Format::Csv => return Err(unsupported_csv()),
    }
    Ok(if outcome.verdict == Verdict::Violated {
        2
    } else {
        0
    })
}

fn cmd_search_mono(args: SearchMonoArgs) -> Result<i32> {
    let started = Instant::now();
    let kind = MechanismKind::from(args.mechanism);
    let witness = search_monotonicity_counterexample(
        kind,
        args.n,
        args.trials,
        args.seed,
        guard_or_default(args.guard),
    )?;
    let report = SearchReport::new(
        kind.to_string(),
        args.n,
        args.trials,
        args.seed,
        witness.as_ref(),
        started.elapsed().as_millis(),
    );
    match args.format.into() {
        Format::Table => print!("{}", report.to_table()),
        Format::Json => println!("{}", to_json(&report)),
        Format::Csv => return Err(unsupported_csv()),
    }
    Ok(if witness.is_some() { 2 } else { 0 })
}

fn cmd_reproduce(args: ReproducePaperArgs) -> Result<i32> {
    let report = reproduce();
    match args.format.into() {
        Format::Table => print!("{}", report.to_table()),
        Format::Json => println!("{}", to_json(&report)),
        Format::Csv => return Err(unsupported_csv()),
    }
    Ok(if report.ok { 0 } else { 3 })
}
