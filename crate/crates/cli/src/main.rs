//! `naqc`: NAQC reports, family sweeps, thresholds, witnesses and MUBs.
//!
//! Exit codes: 0 success, 2 invalid input, 3 unsupported dimension,
//! 4 numerical failure. Verdicts are data and never change the exit code.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use naqc_core::coherence::re_bound_qubit_limit;
use naqc_core::io::{mubs_to_json, read_state, write_state, write_sweep_csv, LoadedState, Sig17};
use naqc_core::mub::validate_mubs;
use naqc_core::naqc::{
    local_unitary_maximize, naqc_optimized_in, LocalSearchOptions, Permutation, PermutationDomain,
};
use naqc_core::scan::{find_thresholds, linspace, sweep, Criterion, Family, ThresholdOptions};
use naqc_core::states::{random_bipartite, random_density, random_separable, DEFAULT_SEPARABLE_TERMS};
use naqc_core::witness::{eur_witness, Estimate, DEFAULT_R_BASIS, DEFAULT_S_BASIS};
use naqc_core::{
    bound_value, generate_mubs, naqc_averaged, naqc_fixed_permutation, naqc_optimized, BipartiteState,
    CoherenceMeasure, Error, Framework,
};

const MUB_TOL: f64 = 1e-10;

#[derive(Parser)]
#[command(name = "naqc", version, about = "Nonlocal advantage of quantum coherence for qudit states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the MUB set for prime d as JSON, or validate it.
    Mub(MubArgs),
    /// NAQC report for a bipartite state file.
    Compute(ComputeArgs),
    /// CSV sweep over a state family.
    Sweep(SweepArgs),
    /// Parameter values where a criterion switches on or off.
    Threshold(ThresholdArgs),
    /// Entropic-uncertainty estimates and, optionally, the NAQC verdict.
    Witness(WitnessArgs),
    /// Sample a random state file.
    Random(RandomArgs),
    /// Complementarity bound for prime d.
    Bound(BoundArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    L1,
    Re,
}

impl From<MeasureArg> for CoherenceMeasure {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::L1 => Self::L1,
            MeasureArg::Re => Self::RelativeEntropy,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FrameworkArg {
    Averaged,
    Optimized,
    Perm,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Isotropic,
    Rho1,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Isotropic => Self::Isotropic,
            FamilyArg::Rho1 => Self::Rho1,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimateArg {
    #[value(alias = "e_t")]
    T,
    #[value(alias = "e_m")]
    M,
    #[value(alias = "e_f")]
    F,
}

impl From<EstimateArg> for Estimate {
    fn from(e: EstimateArg) -> Self {
        match e {
            EstimateArg::T => Self::Tomographic,
            EstimateArg::M => Self::Measurement,
            EstimateArg::F => Self::Fano,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    /// Single-party density matrix; `--dims d`.
    Density,
    /// Bipartite state; `--dims dA,dB`.
    Bipartite,
    /// Mixture of `--k` random product states; `--dims dA,dB`.
    Separable,
}

#[derive(Args)]
struct MubArgs {
    #[arg(long)]
    d: usize,
    /// Print the orthonormality and unbiasedness check instead of the bases.
    #[arg(long)]
    validate: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ComputeArgs {
    #[arg(long)]
    state: PathBuf,
    #[arg(long, value_enum, default_value = "l1")]
    measure: MeasureArg,
    #[arg(long, value_enum, default_value = "optimized")]
    framework: FrameworkArg,
    /// One-based bijection for `--framework perm`, e.g. `2,3,1`.
    #[arg(long, value_delimiter = ',')]
    perm: Option<Vec<usize>>,
    /// Restrict the optimized framework to fixed-point-free permutations.
    #[arg(long)]
    derangements: bool,
    /// Also maximize over local unitaries (optimized framework only).
    #[arg(long)]
    local_unitary: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, value_enum, default_value = "l1")]
    measure: MeasureArg,
    #[arg(long, default_value_t = 101)]
    steps: usize,
    #[arg(long, default_value_t = 0.0)]
    x_min: f64,
    #[arg(long, default_value_t = 1.0)]
    x_max: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, value_enum, default_value = "l1")]
    measure: MeasureArg,
    #[arg(long, value_enum, conflicts_with = "estimate")]
    framework: Option<FrameworkArg>,
    /// Track an uncertainty estimate instead of a NAQC criterion.
    #[arg(long, value_enum)]
    estimate: Option<EstimateArg>,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 0.0)]
    x_min: f64,
    #[arg(long, default_value_t = 1.0)]
    x_max: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long)]
    state: PathBuf,
    /// Add the optimized NAQC verdict for this measure.
    #[arg(long, value_enum)]
    naqc: Option<MeasureArg>,
    /// Basis label `l ∈ 0..=d` of the first observable.
    #[arg(long, default_value_t = DEFAULT_R_BASIS)]
    r_basis: usize,
    /// Basis label `l ∈ 0..=d` of the second observable.
    #[arg(long, default_value_t = DEFAULT_S_BASIS)]
    s_basis: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RandomArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long, value_delimiter = ',', required = true)]
    dims: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_SEPARABLE_TERMS)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    d: usize,
    #[arg(long, value_enum, default_value = "l1")]
    measure: MeasureArg,
    /// Print the `d → 2` limit `3 − log₂e/2` of the general relative-entropy
    /// formula instead of the qubit bound. Diagnostic only.
    #[arg(long)]
    qubit_limit: bool,
}

/// An error with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnsupportedDimension(_) | Error::WrongDimension { .. } => 3,
            Error::NoConvergence { .. } | Error::NonFinite => 4,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self { code: 2, message: e.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn unsupported(message: impl Into<String>) -> Failure {
    Failure { code: 3, message: message.into() }
}

type CliResult<T = ()> = std::result::Result<T, Failure>;

fn output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit_json<T: Serialize>(value: &T, path: Option<&Path>) -> CliResult {
    let json = serde_json::to_string_pretty(value).map_err(|e| Failure { code: 4, message: e.to_string() })?;
    emit_text(&json, path)
}

fn emit_text(text: &str, path: Option<&Path>) -> CliResult {
    let mut w = output(path)?;
    writeln!(w, "{text}")?;
    w.flush()?;
    Ok(())
}

/// A square bipartite state with prime local dimension.
fn load_square_state(path: &Path) -> CliResult<BipartiteState> {
    let loaded = read_state(File::open(path)?)?;
    match loaded {
        LoadedState::Single(_) => Err(invalid(format!(
            "{} holds a single-party state; a bipartite state is required",
            path.display()
        ))),
        LoadedState::Bipartite(s) if s.dim_a() != s.dim_b() => Err(unsupported(format!(
            "local dimensions {}x{} differ",
            s.dim_a(),
            s.dim_b()
        ))),
        LoadedState::Bipartite(s) => Ok(s),
    }
}

fn cmd_mub(a: &MubArgs) -> CliResult {
    let set = generate_mubs(a.d)?;
    if a.validate {
        emit_json(&validate_mubs(&set, MUB_TOL), a.out.as_deref())
    } else {
        emit_text(&mubs_to_json(&set)?, a.out.as_deref())
    }
}

fn cmd_compute(a: &ComputeArgs) -> CliResult {
    let state = load_square_state(&a.state)?;
    let mubs = generate_mubs(state.dim_a())?;
    let measure = a.measure.into();
    if a.framework != FrameworkArg::Perm && a.perm.is_some() {
        return Err(invalid("--perm requires --framework perm"));
    }
    if a.framework != FrameworkArg::Optimized && (a.derangements || a.local_unitary) {
        return Err(invalid("--derangements and --local-unitary require --framework optimized"));
    }
    let domain = if a.derangements {
        PermutationDomain::Derangements
    } else {
        PermutationDomain::All
    };
    let report = match a.framework {
        FrameworkArg::Averaged => naqc_averaged(&state, &mubs, measure)?,
        FrameworkArg::Perm => {
            let one_based = a.perm.as_deref().ok_or_else(|| invalid("--framework perm needs --perm"))?;
            let perm = Permutation::from_one_based(one_based)?;
            naqc_fixed_permutation(&state, &mubs, &perm, measure)?
        }
        FrameworkArg::Optimized if a.local_unitary => {
            let opts = LocalSearchOptions {
                seed: a.seed,
                domain,
                ..Default::default()
            };
            local_unitary_maximize(&state, &mubs, measure, &opts)?.0
        }
        FrameworkArg::Optimized => naqc_optimized_in(&state, &mubs, measure, domain)?,
    };
    emit_json(&report, a.out.as_deref())
}

fn cmd_sweep(a: &SweepArgs) -> CliResult {
    let xs = linspace(a.x_min, a.x_max, a.steps)?;
    let rows = sweep(a.family.into(), a.d, a.measure.into(), &xs)?;
    let mut w = output(a.out.as_deref())?;
    write_sweep_csv(&mut w, &rows)?;
    w.flush()?;
    Ok(())
}

fn cmd_threshold(a: &ThresholdArgs) -> CliResult {
    let criterion = match (a.estimate, a.framework) {
        (Some(e), _) => Criterion::Estimate(e.into()),
        (None, None | Some(FrameworkArg::Optimized)) => Criterion::Naqc(Framework::Optimized),
        (None, Some(FrameworkArg::Averaged)) => Criterion::Naqc(Framework::Averaged),
        (None, Some(FrameworkArg::Perm)) => {
            return Err(invalid("thresholds support --framework averaged or optimized"))
        }
    };
    let opts = ThresholdOptions {
        tol: a.tol,
        x_min: a.x_min,
        x_max: a.x_max,
        ..Default::default()
    };
    let result = find_thresholds(a.family.into(), a.d, a.measure.into(), criterion, &opts)?;
    emit_json(&result, a.out.as_deref())
}

fn cmd_witness(a: &WitnessArgs) -> CliResult {
    let state = load_square_state(&a.state)?;
    let mubs = generate_mubs(state.dim_a())?;
    let mut report = eur_witness(&state, &mubs, a.r_basis, a.s_basis)?;
    if let Some(m) = a.naqc {
        let naqc = naqc_optimized(&state, &mubs, m.into())?;
        report.naqc_verdict = Some(naqc.achieved);
        report.naqc = Some(naqc);
    }
    emit_json(&report, a.out.as_deref())
}

fn cmd_random(a: &RandomArgs) -> CliResult {
    let mut w = output(a.out.as_deref())?;
    match (a.kind, a.dims.as_slice()) {
        (KindArg::Density, &[d]) => write_state(&mut w, &[d], random_density(d, a.seed)?.matrix())?,
        (KindArg::Bipartite, &[da, db]) => {
            write_state(&mut w, &[da, db], random_bipartite(da, db, a.seed)?.matrix())?
        }
        (KindArg::Separable, &[da, db]) => {
            let (_, st) = random_separable(da, db, a.k, a.seed)?;
            write_state(&mut w, &[da, db], st.matrix())?
        }
        (KindArg::Density, _) => return Err(invalid("--kind density takes --dims d")),
        _ => return Err(invalid("bipartite kinds take --dims dA,dB")),
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct BoundOutput {
    measure: CoherenceMeasure,
    d: usize,
    value: Sig17,
    qubit_limit: bool,
}

fn cmd_bound(a: &BoundArgs) -> CliResult {
    let measure: CoherenceMeasure = a.measure.into();
    let value = if a.qubit_limit {
        if a.d != 2 || !matches!(measure, CoherenceMeasure::RelativeEntropy) {
            return Err(invalid("--qubit-limit applies to --measure re --d 2"));
        }
        re_bound_qubit_limit()
    } else {
        bound_value(measure, a.d)?.value
    };
    emit_json(
        &BoundOutput {
            measure,
            d: a.d,
            value: Sig17(value),
            qubit_limit: a.qubit_limit,
        },
        None,
    )
}

/// Caps the rayon pool at `NAQC_THREADS` when set.
fn configure_threads() -> CliResult {
    let Ok(raw) = std::env::var("NAQC_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| invalid(format!("NAQC_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure { code: 4, message: e.to_string() })
}

fn run(cli: &Cli) -> CliResult {
    configure_threads()?;
    match &cli.command {
        Command::Mub(a) => cmd_mub(a),
        Command::Compute(a) => cmd_compute(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Threshold(a) => cmd_threshold(a),
        Command::Witness(a) => cmd_witness(a),
        Command::Random(a) => cmd_random(a),
        Command::Bound(a) => cmd_bound(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("naqc: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
