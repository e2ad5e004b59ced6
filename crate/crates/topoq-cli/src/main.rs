//! Command-line front end: load a job description from JSON, run one of
//! the protocols or the verification suite, and emit a JSON document.
//!
//! Exit codes: 0 on success, 1 on a validation failure (bad JSON,
//! missing fields, broken promises, out-of-range tables), 2 on an
//! internal numerical inconsistency. Errors are reported on stderr as
//! `{"error":{"kind":...,"detail":...}}`. Output is deterministic:
//! the same job and seed produce byte-identical JSON.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use topoq::algorithms::{
    balanced_elements, deutsch_jozsa_with_tol, generalized_deutsch_jozsa_with_tol,
    generalized_grover, grover_single_shot, hsp_distribution, hsp_reconstruct, sample,
    AlgorithmError, DistributionJson, HSPInstance, Verdict,
};
use topoq::groupalg::{FiniteGroup, GroupSpec};
use topoq::repr::{
    classify_irrep_vs_normal_subgroup, compute_irreps, copy_on_leg_residual,
    measurement_completeness_residual, mdecomp_residual, repnorm_residual, IrrepSetJson,
    ProjectorFamily, ReprError, SubgroupAction,
};
use topoq::setalg::{
    multiply, unit, verify_classical_structure, verify_spider_catalog, FiniteSet, FunctionTable,
};
use topoq::{C64, IrrepSet64, LinearMap64};

#[derive(Parser)]
#[command(
    name = "topoq",
    about = "Finite-group query protocols as exact linear algebra",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Constant-vs-balanced test for a function into {0, 1}.
    Dj(CommonArgs),
    /// Generalized constant-vs-balanced test for a function into a group.
    Gdj(CommonArgs),
    /// Single-shot search over a function into {0, 1}.
    Grover(CommonArgs),
    /// Generalized single-shot search over a function into a group.
    Ggrover(CommonArgs),
    /// Hidden subgroup measurement, sampling, and reconstruction.
    Hsp(CommonArgs),
    /// Decompose the regular representation into irreducibles.
    Irreps(CommonArgs),
    /// Run the full identity-verification suite for a group.
    Verify(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the job JSON, or "-" for stdin.
    #[arg(long)]
    spec: String,
    /// Write the result JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Random seed; overrides the job file (default 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Sampling trials for hsp; overrides the job file (default 32).
    #[arg(long)]
    trials: Option<usize>,
    /// Numerical tolerance; overrides the job file (default 1e-9).
    #[arg(long)]
    tol: Option<f64>,
}

/// The job description as read from JSON. Command-line flags override
/// the optional fields.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct JobSpec {
    group: Option<GroupSpec>,
    /// Oracle images, one entry per domain element.
    function: Option<Vec<usize>>,
    projectors: Option<ProjectorSpec>,
    /// Per-class weights as [re, im] pairs, aligned with the irreps.
    coefficients: Option<Vec<[f64; 2]>>,
    seed: Option<u64>,
    trials: Option<usize>,
    tol: Option<f64>,
    /// Output path; "-" or absence means stdout.
    output: Option<String>,
}

/// Projector family selection for the generalized protocols.
#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum ProjectorSpec {
    /// Rank-one support on one irrep class would be ambiguous for
    /// higher dimensions, so "single" selects the full identity on the
    /// named class and zero elsewhere.
    Single { irrep: usize },
    /// The identity on every class.
    Identity,
    /// Explicit per-class matrices, row-major [re, im] entries; empty
    /// rows are not allowed, use an all-zero matrix to skip a class.
    Explicit { matrices: Vec<Vec<[f64; 2]>> },
}

#[derive(Debug)]
enum CliError {
    Validation { kind: String, detail: String },
    Internal { kind: String, detail: String },
}

impl CliError {
    fn validation(kind: &str, detail: impl Into<String>) -> Self {
        Self::Validation {
            kind: kind.into(),
            detail: detail.into(),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            Self::Validation { .. } => 1,
            Self::Internal { .. } => 2,
        }
    }

    fn kind(&self) -> &str {
        match self {
            Self::Validation { kind, .. } | Self::Internal { kind, .. } => kind,
        }
    }

    fn detail(&self) -> &str {
        match self {
            Self::Validation { detail, .. } | Self::Internal { detail, .. } => detail,
        }
    }
}

impl From<AlgorithmError> for CliError {
    fn from(e: AlgorithmError) -> Self {
        let detail = e.to_string();
        let internal = matches!(
            e,
            AlgorithmError::ZeroState
                | AlgorithmError::NegativeProbability { .. }
                | AlgorithmError::NumericalInconsistency { .. }
        );
        let kind = match &e {
            AlgorithmError::WrongCodomain { .. } => "wrong-codomain",
            AlgorithmError::DimensionMismatch { .. } => "dimension-mismatch",
            AlgorithmError::PromiseViolated { .. } => "promise-violated",
            AlgorithmError::EmptyObservations => "empty-observations",
            AlgorithmError::ZeroState => "zero-state",
            AlgorithmError::NegativeProbability { .. } => "negative-probability",
            AlgorithmError::NumericalInconsistency { .. } => "numerical-inconsistency",
            AlgorithmError::Repr(inner) => return CliError::from(inner.clone()),
            AlgorithmError::Group(_) => "group",
            AlgorithmError::Linalg(_) => "linalg",
        };
        if internal {
            Self::Internal {
                kind: kind.into(),
                detail,
            }
        } else {
            Self::Validation {
                kind: kind.into(),
                detail,
            }
        }
    }
}

impl From<ReprError> for CliError {
    fn from(e: ReprError) -> Self {
        let detail = e.to_string();
        match e {
            ReprError::DecompositionFailed { .. } | ReprError::Eigen(_) => Self::Internal {
                kind: "decomposition-failed".into(),
                detail,
            },
            _ => Self::Validation {
                kind: "representation".into(),
                detail,
            },
        }
    }
}

impl From<topoq::groupalg::GroupError> for CliError {
    fn from(e: topoq::groupalg::GroupError) -> Self {
        Self::Validation {
            kind: "group".into(),
            detail: e.to_string(),
        }
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    detail: &'a str,
}

#[derive(Serialize)]
struct ErrorDoc<'a> {
    error: ErrorBody<'a>,
}

/// Resolved run parameters after merging flags over the job file.
struct RunConfig {
    seed: u64,
    trials: usize,
    tol: f64,
    out: Option<PathBuf>,
}

fn resolve(args: &CommonArgs, spec: &JobSpec) -> RunConfig {
    let out = args.out.clone().or_else(|| {
        spec.output
            .as_deref()
            .filter(|p| *p != "-")
            .map(PathBuf::from)
    });
    RunConfig {
        seed: args.seed.or(spec.seed).unwrap_or(0),
        trials: args.trials.or(spec.trials).unwrap_or(32),
        tol: args.tol.or(spec.tol).unwrap_or(1e-9),
        out,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, run): (&CommonArgs, _) = match &cli.command {
        Command::Dj(a) => (a, run_dj as fn(&JobSpec, &RunConfig) -> Result<String, CliError>),
        Command::Gdj(a) => (a, run_gdj as _),
        Command::Grover(a) => (a, run_grover as _),
        Command::Ggrover(a) => (a, run_ggrover as _),
        Command::Hsp(a) => (a, run_hsp as _),
        Command::Irreps(a) => (a, run_irreps as _),
        Command::Verify(a) => (a, run_verify as _),
    };
    match execute(args, run) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let doc = ErrorDoc {
                error: ErrorBody {
                    kind: e.kind(),
                    detail: e.detail(),
                },
            };
            eprintln!(
                "{}",
                serde_json::to_string(&doc).expect("error document serializes")
            );
            ExitCode::from(e.exit_code())
        }
    }
}

fn execute(
    args: &CommonArgs,
    run: fn(&JobSpec, &RunConfig) -> Result<String, CliError>,
) -> Result<(), CliError> {
    let text = read_spec(&args.spec)?;
    let spec: JobSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::validation("bad-spec", format!("cannot parse job JSON: {e}")))?;
    let config = resolve(args, &spec);
    let document = run(&spec, &config)?;
    match &config.out {
        Some(path) => fs::write(path, document.as_bytes()).map_err(|e| {
            CliError::validation("io", format!("cannot write {}: {e}", path.display()))
        })?,
        None => print!("{document}"),
    }
    Ok(())
}

fn read_spec(source: &str) -> Result<String, CliError> {
    if source == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::validation("io", format!("cannot read stdin: {e}")))?;
        Ok(buf)
    } else {
        fs::read_to_string(source)
            .map_err(|e| CliError::validation("io", format!("cannot read {source}: {e}")))
    }
}

fn require_group(spec: &JobSpec) -> Result<FiniteGroup, CliError> {
    let gs = spec
        .group
        .as_ref()
        .ok_or_else(|| CliError::validation("missing-field", "this command requires \"group\""))?;
    Ok(gs.build()?)
}

fn require_function(spec: &JobSpec, cod: usize) -> Result<FunctionTable, CliError> {
    let images = spec.function.as_ref().ok_or_else(|| {
        CliError::validation("missing-field", "this command requires \"function\"")
    })?;
    FunctionTable::from_images(images.clone(), cod)
        .map_err(|e| CliError::validation("bad-function", e.to_string()))
}

/// For the boolean protocols the codomain group is fixed; a group in
/// the job file is accepted only if it is that group.
fn check_boolean_group(spec: &JobSpec) -> Result<(), CliError> {
    if let Some(gs) = &spec.group {
        let g = gs.build()?;
        if g.order() != 2 {
            return Err(CliError::validation(
                "wrong-codomain",
                format!(
                    "this command fixes the two-element codomain group, got order {}",
                    g.order()
                ),
            ));
        }
    }
    Ok(())
}

fn build_projectors(
    spec: &JobSpec,
    irreps: &IrrepSet64,
) -> Result<ProjectorFamily<f64>, CliError> {
    let ps = spec.projectors.as_ref().ok_or_else(|| {
        CliError::validation("missing-field", "this command requires \"projectors\"")
    })?;
    let family = match ps {
        ProjectorSpec::Single { irrep } => ProjectorFamily::single(irreps, *irrep)?,
        ProjectorSpec::Identity => ProjectorFamily::all_identity(irreps),
        ProjectorSpec::Explicit { matrices } => {
            if matrices.len() != irreps.len() {
                return Err(CliError::validation(
                    "bad-projectors",
                    format!(
                        "got {} projector matrices for {} irrep classes",
                        matrices.len(),
                        irreps.len()
                    ),
                ));
            }
            let mut maps = Vec::with_capacity(matrices.len());
            for (rep, entries) in irreps.irreps().iter().zip(matrices) {
                let n = rep.dim();
                if entries.len() != n * n {
                    return Err(CliError::validation(
                        "bad-projectors",
                        format!(
                            "projector for a dimension-{n} class needs {} entries, got {}",
                            n * n,
                            entries.len()
                        ),
                    ));
                }
                let complex: Vec<C64> = entries.iter().map(|[re, im]| C64::new(*re, *im)).collect();
                maps.push(
                    LinearMap64::new(n, n, complex)
                        .map_err(|e| CliError::validation("bad-projectors", e.to_string()))?,
                );
            }
            ProjectorFamily::from_matrices(maps)
        }
    };
    family.validate(irreps, f64::EPSILON.sqrt())?;
    Ok(family)
}

fn parse_coefficients(spec: &JobSpec) -> Option<Vec<C64>> {
    spec.coefficients
        .as_ref()
        .map(|cs| cs.iter().map(|[re, im]| C64::new(*re, *im)).collect())
}

fn to_document<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("result document serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct DecisionDoc {
    command: &'static str,
    seed: u64,
    tol: f64,
    success_probability: f64,
    verdict: Verdict,
}

fn run_dj(spec: &JobSpec, config: &RunConfig) -> Result<String, CliError> {
    check_boolean_group(spec)?;
    let f = require_function(spec, 2)?;
    let result = deutsch_jozsa_with_tol::<f64>(&f, config.tol)?;
    Ok(to_document(&DecisionDoc {
        command: "dj",
        seed: config.seed,
        tol: config.tol,
        success_probability: result.success_probability,
        verdict: result.verdict,
    }))
}

fn run_gdj(spec: &JobSpec, config: &RunConfig) -> Result<String, CliError> {
    let group = require_group(spec)?;
    let f = require_function(spec, group.order())?;
    let irreps = compute_irreps::<f64>(&group, config.seed)?;
    let projectors = build_projectors(spec, &irreps)?;
    let coefficients = parse_coefficients(spec);
    let result = generalized_deutsch_jozsa_with_tol(
        &f,
        &irreps,
        &projectors,
        coefficients.as_deref(),
        config.tol,
    )?;
    Ok(to_document(&DecisionDoc {
        command: "gdj",
        seed: config.seed,
        tol: config.tol,
        success_probability: result.success_probability,
        verdict: result.verdict,
    }))
}

#[derive(Serialize)]
struct SearchDoc {
    command: &'static str,
    seed: u64,
    tol: f64,
    #[serde(flatten)]
    distribution: DistributionJson,
    support: Vec<usize>,
}

fn run_grover(spec: &JobSpec, config: &RunConfig) -> Result<String, CliError> {
    check_boolean_group(spec)?;
    let f = require_function(spec, 2)?;
    let dist = grover_single_shot::<f64>(&f)?;
    Ok(to_document(&SearchDoc {
        command: "grover",
        seed: config.seed,
        tol: config.tol,
        distribution: dist.to_json(),
        support: dist.support(config.tol),
    }))
}

#[derive(Serialize)]
struct GeneralizedSearchDoc {
    command: &'static str,
    seed: u64,
    tol: f64,
    #[serde(flatten)]
    distribution: DistributionJson,
    support: Vec<usize>,
    balanced_elements: Vec<usize>,
}

fn run_ggrover(spec: &JobSpec, config: &RunConfig) -> Result<String, CliError> {
    let group = require_group(spec)?;
    let f = require_function(spec, group.order())?;
    let irreps = compute_irreps::<f64>(&group, config.seed)?;
    let projectors = build_projectors(spec, &irreps)?;
    let coefficients = parse_coefficients(spec);
    let dist = generalized_grover(&f, &irreps, &projectors, coefficients.as_deref())?;
    let balanced = balanced_elements(&f, &irreps, &projectors, config.tol)?;
    Ok(to_document(&GeneralizedSearchDoc {
        command: "ggrover",
        seed: config.seed,
        tol: config.tol,
        distribution: dist.to_json(),
        support: dist.support(config.tol),
        balanced_elements: balanced,
    }))
}

#[derive(Serialize)]
struct HspDoc {
    command: &'static str,
    seed: u64,
    trials: usize,
    tol: f64,
    hidden_subgroup: Vec<usize>,
    #[serde(flatten)]
    distribution: DistributionJson,
    counts: Vec<usize>,
    observed_classes: Vec<usize>,
    reconstructed_subgroup: Vec<usize>,
}

fn run_hsp(spec: &JobSpec, config: &RunConfig) -> Result<String, CliError> {
    let group = require_group(spec)?;
    let images = spec.function.as_ref().ok_or_else(|| {
        CliError::validation("missing-field", "this command requires \"function\"")
    })?;
    let cod = images.iter().max().map_or(1, |m| m + 1);
    let f = FunctionTable::from_images(images.clone(), cod)
        .map_err(|e| CliError::validation("bad-function", e.to_string()))?;
    let inst = HSPInstance::new(group.clone(), f)?;
    let irreps = compute_irreps::<f64>(&group, config.seed)?;
    let dist = hsp_distribution(&inst, &irreps)?;
    let counts = sample(&dist, config.seed, config.trials);
    let observed: Vec<usize> = counts
        .iter()
        .enumerate()
        .filter(|(_, &n)| n > 0)
        .map(|(i, _)| i)
        .collect();
    let reconstructed = hsp_reconstruct(&irreps, &observed)?;
    Ok(to_document(&HspDoc {
        command: "hsp",
        seed: config.seed,
        trials: config.trials,
        tol: config.tol,
        hidden_subgroup: inst.hidden().members().to_vec(),
        distribution: dist.to_json(),
        counts,
        observed_classes: observed,
        reconstructed_subgroup: reconstructed.members().to_vec(),
    }))
}

#[derive(Serialize)]
struct IrrepsDoc {
    command: &'static str,
    seed: u64,
    #[serde(flatten)]
    irreps: IrrepSetJson,
}

fn run_irreps(spec: &JobSpec, config: &RunConfig) -> Result<String, CliError> {
    let group = require_group(spec)?;
    let irreps = compute_irreps::<f64>(&group, config.seed)?;
    Ok(to_document(&IrrepsDoc {
        command: "irreps",
        seed: config.seed,
        irreps: irreps.to_json(),
    }))
}

#[derive(Serialize)]
struct VerifyDoc {
    command: &'static str,
    seed: u64,
    tol: f64,
    group_order: usize,
    all_pass: bool,
    checks: Vec<CheckDoc>,
}

#[derive(Serialize)]
struct CheckDoc {
    name: String,
    pass: bool,
    max_residual: f64,
}

fn run_verify(spec: &JobSpec, config: &RunConfig) -> Result<String, CliError> {
    let group = require_group(spec)?;
    let checks = verify_suite(&group, config.seed, config.tol)?;
    let all_pass = checks.iter().all(|c| c.pass);
    Ok(to_document(&VerifyDoc {
        command: "verify",
        seed: config.seed,
        tol: config.tol,
        group_order: group.order(),
        all_pass,
        checks,
    }))
}

/// Every identity the library guarantees for one group: the classical
/// structure axioms and spider catalog on its underlying set, the
/// normalization, completeness, reconstruction, and vertex-sliding
/// identities for its irreducibles, and the factor-or-annihilate
/// dichotomy against every normal subgroup.
fn verify_suite(group: &FiniteGroup, seed: u64, tol: f64) -> Result<Vec<CheckDoc>, CliError> {
    let mut checks = Vec::new();
    let set = FiniteSet::new(group.order());
    let strict = 1e-12f64.max(tol * 1e-3);

    let structure = verify_classical_structure(&multiply::<f64>(&set), &unit::<f64>(&set), strict)
        .map_err(|e| CliError::validation("structure", e.to_string()))?;
    for (name, check) in structure.checks() {
        checks.push(CheckDoc {
            name: format!("structure:{name}"),
            pass: check.holds,
            max_residual: check.residual,
        });
    }
    for (name, check) in verify_spider_catalog::<f64>(&set, strict) {
        checks.push(CheckDoc {
            name: format!("spider:{name}"),
            pass: check.holds,
            max_residual: check.residual,
        });
    }

    let irreps = compute_irreps::<f64>(group, seed)?;
    let dims = irreps.dims();
    let sum_of_squares: usize = dims.iter().map(|d| d * d).sum();
    checks.push(CheckDoc {
        name: format!("irrep-dimensions:{dims:?}"),
        pass: sum_of_squares == group.order(),
        max_residual: sum_of_squares.abs_diff(group.order()) as f64,
    });

    for (i, rho) in irreps.irreps().iter().enumerate() {
        let r = repnorm_residual(rho);
        checks.push(CheckDoc {
            name: format!("repnorm[{i}]"),
            pass: r <= tol,
            max_residual: r,
        });
        let r = copy_on_leg_residual(rho);
        checks.push(CheckDoc {
            name: format!("copyonleg[{i}]"),
            pass: r <= tol,
            max_residual: r,
        });
    }

    let r = measurement_completeness_residual(group, irreps.irreps())?;
    checks.push(CheckDoc {
        name: "completeness".into(),
        pass: r <= tol,
        max_residual: r,
    });
    let r = mdecomp_residual(group, irreps.irreps())?;
    checks.push(CheckDoc {
        name: "mdecomp".into(),
        pass: r <= tol,
        max_residual: r,
    });

    for h in group.normal_subgroups() {
        let label: Vec<String> = h.members().iter().map(|m| m.to_string()).collect();
        let label = label.join(",");
        for (i, rho) in irreps.irreps().iter().enumerate() {
            let (arm, residual) = match classify_irrep_vs_normal_subgroup(rho, &h, tol)? {
                SubgroupAction::FactorsThrough { residual, .. } => ("factors", residual),
                SubgroupAction::Annihilated { pairing_residual } => {
                    ("annihilated", pairing_residual)
                }
            };
            checks.push(CheckDoc {
                name: format!("classify[{i}]:h={{{label}}}:{arm}"),
                pass: residual <= tol,
                max_residual: residual,
            });
        }
    }
    Ok(checks)
}
