//! Command-line front end. [`run`] parses arguments, writes JSON (or CSV) to
//! the given writer or `--output`, and returns the process exit code.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bell::{self, BellState, Construction, PhaseMode};
use crate::dense_coding::{message_count, Codebook};
use crate::error::{Error, Result};
use crate::export::{self, BasisExport, SignatureReport, StateSignatures, EXPORT_TOLERANCE};
use crate::lelm::{self, Statistics};
use crate::linalg::{Tolerance, DEFAULT_TOLERANCE};
use crate::symmetry::{self, SymmetryLabel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Largest `d` searched exactly without an explicit `--budget`.
pub const EXACT_SEARCH_MAX_D: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "qbk", version, about = "Exchange-symmetrized qudit Bell bases")]
pub struct Cli {
    /// Absolute tolerance for numerical checks.
    #[arg(long, global = true, env = "QBK_TOLERANCE", default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Export a full basis as JSON.
    Build(BasisArgs),
    /// Check orthonormality, entanglement and exchange symmetry of a basis.
    Verify(VerifyArgs),
    /// Detection supports, codeword check and maximum distinguishable set.
    Distinguish(DistinguishArgs),
    /// Noiseless dense-coding transcript as JSON lines.
    Densecode(DensecodeArgs),
    /// Regenerate the golden basis fixtures.
    Fixtures(FixturesArgs),
    /// Odd-dimension obstruction report.
    Obstruction(ObstructionArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Dft,
    Walsh,
}

impl From<ModeArg> for PhaseMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Dft => PhaseMode::Dft,
            ModeArg::Walsh => PhaseMode::Walsh,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StatisticsArg {
    Boson,
    Fermion,
}

impl From<StatisticsArg> for Statistics {
    fn from(s: StatisticsArg) -> Self {
        match s {
            StatisticsArg::Boson => Statistics::Boson,
            StatisticsArg::Fermion => Statistics::Fermion,
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct BasisArgs {
    /// Single-particle dimension.
    #[arg(long)]
    pub d: usize,

    #[arg(long, value_enum, default_value_t = ModeArg::Dft)]
    pub phase_mode: ModeArg,

    /// Use the shift-and-phase basis instead (any d >= 2).
    #[arg(long)]
    pub canonical: bool,
}

#[derive(Clone, Debug, Args)]
pub struct VerifyArgs {
    /// Basis JSON file to check; otherwise the basis is generated.
    #[arg(long, conflicts_with_all = ["d", "canonical"])]
    pub input: Option<PathBuf>,

    #[arg(long, required_unless_present = "input")]
    pub d: Option<usize>,

    #[arg(long, value_enum, default_value_t = ModeArg::Dft)]
    pub phase_mode: ModeArg,

    #[arg(long)]
    pub canonical: bool,
}

#[derive(Clone, Debug, Args)]
pub struct DistinguishArgs {
    #[command(flatten)]
    pub basis: BasisArgs,

    #[arg(long, value_enum, default_value_t = StatisticsArg::Boson)]
    pub statistics: StatisticsArg,

    /// Node budget for the exact search; required above d = 8.
    #[arg(long)]
    pub budget: Option<u64>,

    /// Print the signature distributions as CSV instead of the JSON report.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Clone, Debug, Args)]
pub struct DensecodeArgs {
    #[arg(long)]
    pub d: usize,

    #[arg(long, value_enum, default_value_t = ModeArg::Dft)]
    pub phase_mode: ModeArg,

    #[arg(long, value_enum, default_value_t = StatisticsArg::Boson)]
    pub statistics: StatisticsArg,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Messages to send (default: every message once).
    #[arg(long, value_delimiter = ',')]
    pub messages: Option<Vec<usize>>,

    /// Shots per message.
    #[arg(long, default_value_t = 1)]
    pub shots: usize,
}

#[derive(Clone, Debug, Args)]
pub struct FixturesArgs {
    /// Directory receiving `basis_d*.json`.
    #[arg(long)]
    pub dir: PathBuf,

    /// Replace existing fixture files.
    #[arg(long)]
    pub overwrite: bool,
}

#[derive(Clone, Debug, Args)]
pub struct ObstructionArgs {
    #[arg(long)]
    pub d: usize,

    #[arg(long, default_value_t = 100)]
    pub samples: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Outcome of a command: the payload plus whether its checks passed.
struct Report {
    body: String,
    passed: bool,
}

impl Report {
    fn json(value: &impl Serialize, passed: bool) -> Result<Self> {
        let mut body = serde_json::to_string_pretty(value)?;
        body.push('\n');
        Ok(Report { body, passed })
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let written = match &cli.output {
                Some(path) => fs::write(path, &report.body).map_err(Error::from),
                None => out.write_all(report.body.as_bytes()).map_err(Error::from),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return EXIT_INTERNAL;
            }
            if report.passed {
                EXIT_OK
            } else {
                let _ = writeln!(err, "verification failed");
                EXIT_VERIFY_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidDimension(_)
        | Error::UnsupportedMode(_)
        | Error::OutOfRange { .. }
        | Error::InvalidTolerance(_)
        | Error::Usage(_)
        | Error::Format(_) => EXIT_USAGE,
        Error::DimensionMismatch { .. }
        | Error::UndecodableSignature(..)
        | Error::Inconsistent(_)
        | Error::Io(_)
        | Error::Json(_) => EXIT_INTERNAL,
    }
}

fn execute(cli: &Cli) -> Result<Report> {
    let tol = Tolerance::new(cli.tolerance)?;
    match &cli.command {
        Command::Build(args) => cmd_build(args),
        Command::Verify(args) => cmd_verify(args, tol),
        Command::Distinguish(args) => cmd_distinguish(args),
        Command::Densecode(args) => cmd_densecode(args),
        Command::Fixtures(args) => cmd_fixtures(args),
        Command::Obstruction(args) => cmd_obstruction(args),
    }
}

fn generate(args: &BasisArgs) -> Result<(Construction, Vec<BellState>)> {
    if args.canonical {
        Ok((Construction::Canonical, bell::canonical_basis(args.d)?))
    } else {
        let mode = PhaseMode::from(args.phase_mode);
        Ok((
            Construction::Symmetrized(mode),
            bell::full_basis(args.d, mode)?,
        ))
    }
}

fn cmd_build(args: &BasisArgs) -> Result<Report> {
    let (construction, states) = generate(args)?;
    Report::json(
        &BasisExport::from_states(args.d, construction, &states),
        true,
    )
}

#[derive(Debug, Serialize)]
struct StateCheck {
    c: usize,
    p: usize,
    label: SymmetryLabel,
    swap_eigenvalue: Option<i8>,
    swap_residual: f64,
    norm_residual: f64,
    entanglement_residual: f64,
}

#[derive(Debug, Serialize)]
struct Checks {
    normalization: bool,
    orthonormality: bool,
    entanglement: bool,
    /// `None` for the canonical basis, which makes no symmetry claim.
    symmetry: Option<bool>,
    /// `None` unless a file was checked.
    matches_regenerated: Option<bool>,
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    d: usize,
    mode: String,
    source: String,
    tolerance: f64,
    n_states: usize,
    normalization_residual: f64,
    orthonormality_residual: f64,
    entanglement_residual: f64,
    symmetry_counts: symmetry::SectorCounts,
    expected_counts: Option<(usize, usize)>,
    non_eigenstates: Vec<(usize, usize)>,
    checks: Checks,
    passed: bool,
    states: Vec<StateCheck>,
}

fn cmd_verify(args: &VerifyArgs, tol: Tolerance) -> Result<Report> {
    let (d, construction, states, source, regenerated) = match (&args.input, args.d) {
        (Some(path), _) => {
            let export = BasisExport::from_json(&fs::read_to_string(path)?)?;
            let construction = export.construction()?;
            let states = export.to_states()?;
            let regenerated = match construction {
                Construction::Canonical => bell::canonical_basis(export.d),
                Construction::Symmetrized(mode) => bell::full_basis(export.d, mode),
            }
            .ok();
            (
                export.d,
                construction,
                states,
                path.display().to_string(),
                regenerated,
            )
        }
        (None, Some(d)) => {
            let basis = BasisArgs {
                d,
                phase_mode: args.phase_mode,
                canonical: args.canonical,
            };
            let (construction, states) = generate(&basis)?;
            (d, construction, states, "generated".to_string(), None)
        }
        (None, None) => return Err(Error::Usage("verify needs --input or --d".into())),
    };
    // stored amplitudes only need to agree with regenerated ones to EXPORT_TOLERANCE
    let tol = if args.input.is_some() && tol.eps() < EXPORT_TOLERANCE {
        Tolerance::new(EXPORT_TOLERANCE)?
    } else {
        tol
    };

    let checks_per_state: Vec<StateCheck> = states
        .iter()
        .map(|s| {
            let class = symmetry::classify_symmetry(s, tol);
            StateCheck {
                c: s.c,
                p: s.p,
                label: class.label,
                swap_eigenvalue: class.label.eigenvalue(),
                swap_residual: class.residual,
                norm_residual: (s.norm() - 1.0).abs(),
                entanglement_residual: symmetry::entanglement_residual(s),
            }
        })
        .collect();
    let max_of = |f: fn(&StateCheck) -> f64| checks_per_state.iter().map(f).fold(0.0, f64::max);
    let normalization_residual = max_of(|s| s.norm_residual);
    let entanglement_residual = max_of(|s| s.entanglement_residual);
    let orthonormality_residual = bell::orthonormality_residual(&states);
    let counts = symmetry::count_sectors(&states, tol);
    let non_eigenstates = checks_per_state
        .iter()
        .filter(|s| s.label == SymmetryLabel::Neither)
        .map(|s| (s.c, s.p))
        .collect();

    let symmetrized = matches!(construction, Construction::Symmetrized(_));
    let expected_counts = if symmetrized {
        symmetry::symmetry_counts(d).ok()
    } else {
        None
    };
    let symmetry_ok = expected_counts.map(|(sym, anti)| {
        states.len() == d * d
            && counts.symmetric == sym
            && counts.antisymmetric == anti
            && counts.neither == 0
            && checks_per_state
                .iter()
                .all(|s| s.swap_eigenvalue == Some(symmetry::expected_eigenvalue(s.c, s.p)))
    });
    let checks = Checks {
        normalization: tol.accepts(normalization_residual),
        orthonormality: states.len() == d * d && tol.accepts(orthonormality_residual),
        entanglement: tol.accepts(entanglement_residual),
        symmetry: symmetry_ok,
        matches_regenerated: regenerated.map(|r| {
            export::max_amplitude_deviation(&states, &r).is_some_and(|x| x <= EXPORT_TOLERANCE)
        }),
    };
    let passed = checks.normalization
        && checks.orthonormality
        && checks.entanglement
        && checks.symmetry.unwrap_or(true);
    let report = VerifyReport {
        d,
        mode: export::construction_label(construction).to_string(),
        source,
        tolerance: tol.eps(),
        n_states: states.len(),
        normalization_residual,
        orthonormality_residual,
        entanglement_residual,
        symmetry_counts: counts,
        expected_counts,
        non_eigenstates,
        checks,
        passed,
        states: checks_per_state,
    };
    Report::json(&report, passed)
}

fn cmd_distinguish(args: &DistinguishArgs) -> Result<Report> {
    let d = args.basis.d;
    if d > EXACT_SEARCH_MAX_D && args.budget.is_none() {
        return Err(Error::Usage(format!(
            "d = {d} > {EXACT_SEARCH_MAX_D}: exact search needs an explicit --budget"
        )));
    }
    let statistics = Statistics::from(args.statistics);
    let (construction, states) = generate(&args.basis)?;
    let device = lelm::device_unitary(d)?;
    let distributions = states
        .iter()
        .map(|s| lelm::detection_distribution(s, &device, statistics))
        .collect::<Result<Vec<_>>>()?;

    if args.csv {
        let mut body = String::from("c,p,n1,n2,probability\n");
        for (s, dist) in states.iter().zip(&distributions) {
            for (sig, prob) in dist.nonzero() {
                let (a, b) = sig.channels();
                body.push_str(&format!("{},{},{a},{b},{prob}\n", s.c, s.p));
            }
        }
        return Ok(Report { body, passed: true });
    }

    let max_set = lelm::max_distinguishable_subset(&states, &device, statistics, args.budget)?;
    let bound = 2 * d - 1;
    let codewords = match construction {
        Construction::Symmetrized(mode) => {
            let set = lelm::codeword_set(d, mode)?;
            let check = lelm::distinguishable(&set, &device, statistics)?;
            Some(json!({
                "states": set.iter().map(BellState::tag).collect::<Vec<_>>(),
                "distinguishable": check.distinguishable,
            }))
        }
        Construction::Canonical => None,
    };
    let passed = codewords
        .as_ref()
        .is_none_or(|c| c["distinguishable"] == Value::Bool(true) && max_set.size >= bound);

    let signatures = SignatureReport {
        d,
        statistics,
        device: export::DEVICE_NAME.to_string(),
        states: states
            .iter()
            .zip(&distributions)
            .map(|(s, dist)| StateSignatures::new(s.tag(), dist))
            .collect(),
    };
    let certificate: Vec<(usize, usize, usize, usize)> = max_set
        .certificate
        .iter()
        .map(|(sig, &(c, p))| {
            let (a, b) = sig.channels();
            (a, b, c, p)
        })
        .collect();
    let report = json!({
        "d": d,
        "statistics": statistics,
        "device": export::DEVICE_NAME,
        "basis": export::construction_label(construction),
        "bound": bound,
        "codewords": codewords,
        "max_set": {
            "size": max_set.size,
            "optimal": max_set.optimal,
            "nodes_explored": max_set.nodes_explored,
            "conflict_graph_edges": max_set.conflict_graph_edges,
            "states": max_set.states,
            "certificate": certificate,
        },
        "states": signatures.states,
        "passed": passed,
    });
    Report::json(&report, passed)
}

fn cmd_densecode(args: &DensecodeArgs) -> Result<Report> {
    let book = Codebook::new(args.d, args.phase_mode.into(), args.statistics.into())?;
    let base: Vec<usize> = match &args.messages {
        Some(list) => list.clone(),
        None => (0..message_count(args.d)).collect(),
    };
    let messages: Vec<usize> = base
        .iter()
        .flat_map(|&m| std::iter::repeat_n(m, args.shots))
        .collect();
    let transcript = book.roundtrip(&messages, args.seed)?;
    let mut body = String::new();
    for entry in &transcript {
        body.push_str(&serde_json::to_string(entry)?);
        body.push('\n');
    }
    let passed = transcript.iter().all(|e| e.sent == e.decoded);
    Ok(Report { body, passed })
}

/// Fixture file names and the bases they hold.
pub fn fixture_specs() -> Vec<(&'static str, usize, PhaseMode)> {
    vec![
        ("basis_d2.json", 2, PhaseMode::Dft),
        ("basis_d4.json", 4, PhaseMode::Dft),
        ("basis_d4_walsh.json", 4, PhaseMode::Walsh),
        ("basis_d6.json", 6, PhaseMode::Dft),
    ]
}

pub fn write_fixtures(dir: &Path, overwrite: bool) -> Result<Vec<PathBuf>> {
    let specs = fixture_specs();
    if !overwrite {
        if let Some((name, ..)) = specs.iter().find(|(name, ..)| dir.join(name).exists()) {
            return Err(Error::Usage(format!(
                "{} exists; pass --overwrite to replace fixtures",
                dir.join(name).display()
            )));
        }
    }
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (name, d, mode) in specs {
        let states = bell::full_basis(d, mode)?;
        let export = BasisExport::from_states(d, Construction::Symmetrized(mode), &states);
        let mut text = serde_json::to_string_pretty(&export)?;
        text.push('\n');
        let path = dir.join(name);
        fs::write(&path, text)?;
        written.push(path);
    }
    Ok(written)
}

fn cmd_fixtures(args: &FixturesArgs) -> Result<Report> {
    let written = write_fixtures(&args.dir, args.overwrite)?;
    let files: Vec<String> = written.iter().map(|p| p.display().to_string()).collect();
    Report::json(&json!({ "written": files }), true)
}

fn cmd_obstruction(args: &ObstructionArgs) -> Result<Report> {
    let report = symmetry::odd_d_obstruction(args.d, args.samples, args.seed)?;
    let holds = report.holds(symmetry::SKEW_DET_TOLERANCE);
    Report::json(
        &json!({
            "d": report.d,
            "sym_dim": report.sym_dim,
            "needed": report.needed,
            "max_abs_det": report.max_abs_det(),
            "skew_det_samples": report.skew_det_samples,
            "holds": holds,
        }),
        holds,
    )
}
