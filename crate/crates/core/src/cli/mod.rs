//! Command-line front end. Every command writes one JSON report
//! `{header, command, config, result}` plus a short human summary.

pub mod io;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::algebra::{construct_pure_pair, is_abelian, AlgebraSpec, CommutingPair};
use crate::channels::{self, QuantumChannel};
use crate::cloning::{
    audit_cloner, buzek_hillery_demo, buzek_hillery_pair_channel, classical_copy_channel, optimize_cloner,
    synthetic_candidates, trace_theorem, BlankStrategy, ChainVerdict, CloneCandidate, CloneSpec, CloneTolerances,
    OptimizerConfig, TheoremTrace,
};
use crate::error::{Error, Result};
use crate::matcore::vectors::basis_vector;
use crate::matcore::Complex64;
use crate::states::{bures_distance, fidelity_trace_formula, metrics, AlgebraState, StateMetrics};
use crate::tolerance::TAU_EQUAL;
use crate::verify::{self, Suite, VerifyConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "cstar-clone", version, about = "Fidelity, channels and cloning audits on finite-dimensional algebras")]
pub struct Cli {
    /// Master seed.
    #[arg(long, global = true, env = "CSTAR_CLONE_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Write the report here; the summary then goes to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// csv is available for per-sample audit records only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the seeded property suites.
    Verify(VerifyArgs),
    /// Fidelity, Bures and trace distance between two state files.
    Fidelity(FidelityArgs),
    /// Audit a channel as a cloner on the commuting pair.
    CloneAudit(AuditArgs),
    /// Search for the best constrained cloner.
    Optimize(OptimizeArgs),
    /// Run the universal qubit cloner on random inputs.
    BhDemo(BhArgs),
    /// Check the impossibility proof chain on candidates.
    TraceTheorem(TraceArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FactorArgs {
    /// Single full matrix block of this dimension.
    #[arg(long, conflicts_with = "blocks")]
    pub dim: Option<usize>,
    /// Comma-separated block dimensions.
    #[arg(long, value_delimiter = ',')]
    pub blocks: Option<Vec<usize>>,
}

impl FactorArgs {
    fn resolve(&self) -> Result<Option<AlgebraSpec>> {
        match (&self.blocks, self.dim) {
            (Some(b), _) => AlgebraSpec::new(b.clone()).map(Some),
            (None, Some(0)) => Err(Error::domain("dimension must be positive")),
            (None, Some(d)) => Ok(Some(AlgebraSpec::full(d))),
            (None, None) => Ok(None),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ToleranceArgs {
    #[arg(long, default_value_t = 1e-6)]
    pub tol_product: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol_purity: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol_marginal: f64,
}

impl ToleranceArgs {
    fn resolve(&self) -> CloneTolerances {
        CloneTolerances {
            product: self.tol_product,
            purity: self.tol_purity,
            marginal: self.tol_marginal,
        }
    }
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    Suite::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.id()).collect();
        format!("unknown suite '{s}' (expected one of: {})", names.join(", "))
    })
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    /// Trials per suite instead of the defaults.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Run only these suites (comma-separated).
    #[arg(long, value_delimiter = ',', value_parser = parse_suite)]
    pub only: Vec<Suite>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FidelityArgs {
    pub first: PathBuf,
    pub second: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Builtin {
    Identity,
    Swap,
    Classical,
    BuzekHillery,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AuditArgs {
    /// Channel JSON file.
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    pub channel: Option<PathBuf>,
    /// A built-in channel instead of a file.
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
    #[command(flatten)]
    #[serde(flatten)]
    pub factor: FactorArgs,
    /// Blank state JSON file; defaults to the first basis vector.
    #[arg(long)]
    pub blank: Option<PathBuf>,
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    /// Haar-random inputs on top of the structured families.
    #[arg(long, visible_alias = "trials", default_value_t = 16)]
    pub samples: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub tolerances: ToleranceArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OptimizeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub factor: FactorArgs,
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    #[arg(long, default_value_t = 20000)]
    pub iters: usize,
    #[arg(long, visible_alias = "trials", default_value_t = 8)]
    pub samples: usize,
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    /// Environment dimension of the search isometry.
    #[arg(long)]
    pub env_dim: Option<usize>,
    /// Drop the cloning constraints and maximize both copies' fidelity.
    #[arg(long)]
    pub no_penalty: bool,
    /// Fixed blank state JSON file.
    #[arg(long)]
    pub blank: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub tolerances: ToleranceArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BhArgs {
    #[arg(long, visible_alias = "trials", default_value_t = 100)]
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateKind {
    Synthetic,
    Classical,
    BuzekHillery,
    Identity,
    Swap,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TraceArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub factor: FactorArgs,
    #[arg(long, value_enum, default_value_t = CandidateKind::Synthetic)]
    pub candidate: CandidateKind,
    /// Channel JSON file; overrides --candidate.
    #[arg(long)]
    pub channel: Option<PathBuf>,
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    /// Number of synthetic candidates.
    #[arg(long, visible_alias = "trials", default_value_t = 10)]
    pub count: usize,
    /// Input overlap F(ψ, φ) for channel candidates.
    #[arg(long, default_value_t = 0.3)]
    pub alpha: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub tolerances: ToleranceArgs,
}

#[derive(Debug, Clone, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    /// Unix seconds; the only field that differs between identical runs.
    pub timestamp: u64,
}

impl Header {
    fn now() -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        }
    }
}

#[derive(Serialize)]
struct Report<'a, C: Serialize, R: Serialize> {
    header: Header,
    command: &'a str,
    config: Echo<'a, C>,
    result: &'a R,
}

#[derive(Serialize)]
struct Echo<'a, C: Serialize> {
    seed: u64,
    format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    algebra: Option<&'a AlgebraSpec>,
    #[serde(flatten)]
    args: &'a C,
}

/// What a command hands back for writing.
pub struct Outcome {
    pub json: String,
    pub csv: Option<String>,
    pub summary: Vec<String>,
    pub exit: i32,
}

struct Ctx {
    seed: u64,
    format: Format,
}

impl Ctx {
    fn render<C: Serialize, R: Serialize>(&self, command: &str, factor: Option<&AlgebraSpec>, args: &C, result: &R) -> String {
        io::to_json(&Report {
            header: Header::now(),
            command,
            config: Echo {
                seed: self.seed,
                format: self.format,
                algebra: factor,
                args,
            },
            result,
        })
    }
}

/// Parses `args`, runs the command and writes its output. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", io::to_json(&serde_json::json!({"error": {"code": e.code(), "message": e.to_string()}})).trim_end());
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    let outcome = dispatch(cli)?;
    let body = match cli.format {
        Format::Json => outcome.json,
        Format::Csv => match outcome.csv {
            Some(c) => c,
            None => {
                eprintln!("error: --format csv is only available for per-sample audit records (clone-audit, optimize)");
                return Ok(EXIT_USAGE);
            }
        },
    };
    let summary = outcome.summary.join("\n");
    match &cli.out {
        Some(path) => {
            io::write_text(path, &body)?;
            println!("{summary}");
            println!("report written to {}", path.display());
        }
        None => {
            print!("{body}");
            eprintln!("{summary}");
        }
    }
    Ok(outcome.exit)
}

pub fn dispatch(cli: &Cli) -> Result<Outcome> {
    let ctx = Ctx {
        seed: cli.seed,
        format: cli.format,
    };
    match &cli.command {
        Command::Verify(a) => cmd_verify(&ctx, a),
        Command::Fidelity(a) => cmd_fidelity(&ctx, a),
        Command::CloneAudit(a) => cmd_clone_audit(&ctx, a),
        Command::Optimize(a) => cmd_optimize(&ctx, a),
        Command::BhDemo(a) => cmd_bh_demo(&ctx, a),
        Command::TraceTheorem(a) => cmd_trace_theorem(&ctx, a),
    }
}

fn cmd_verify(ctx: &Ctx, a: &VerifyArgs) -> Result<Outcome> {
    let report = verify::run(&VerifyConfig {
        seed: ctx.seed,
        trials: a.trials,
        only: a.only.clone(),
    })?;
    let mut summary: Vec<String> = report
        .suites
        .iter()
        .map(|s| {
            format!(
                "{} {:<22} trials={:<5} max_defect={:.3e} tolerance={:.0e}",
                if s.passed { "PASS" } else { "FAIL" },
                s.suite,
                s.trials,
                s.max_defect,
                s.tolerance
            )
        })
        .collect();
    summary.push(format!("{} of {} suites passed", report.suites.iter().filter(|s| s.passed).count(), report.suites.len()));
    Ok(Outcome {
        json: ctx.render("verify", None, a, &report),
        csv: None,
        summary,
        exit: if report.passed { EXIT_PASS } else { EXIT_FAIL },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub trace_formula_fidelity: f64,
    pub defect: f64,
    pub tolerance: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FidelityReport {
    pub spec: AlgebraSpec,
    pub both_pure: bool,
    #[serde(flatten)]
    pub metrics: StateMetrics,
    pub bures_identity: IdentityCheck,
}

fn cmd_fidelity(ctx: &Ctx, a: &FidelityArgs) -> Result<Outcome> {
    let psi: AlgebraState = io::read_json(&a.first)?;
    let phi: AlgebraState = io::read_json(&a.second)?;
    if psi.spec() != phi.spec() {
        return Err(Error::domain(format!(
            "states live on different algebras: {:?} vs {:?}",
            psi.spec().blocks(),
            phi.spec().blocks()
        )));
    }
    let m = metrics(&psi, &phi)?;
    let mut f_alt = 0.0;
    for k in 0..psi.spec().num_blocks() {
        let (p, q) = (psi.weights()[k], phi.weights()[k]);
        if p > 0.0 && q > 0.0 {
            f_alt += (p * q).sqrt() * fidelity_trace_formula(&psi.densities()[k], &phi.densities()[k])?;
        }
    }
    let d = bures_distance(&psi, &phi)?;
    let defect = (d * d - (2.0 - 2.0 * f_alt.min(1.0))).abs();
    let report = FidelityReport {
        spec: psi.spec().clone(),
        both_pure: psi.is_pure() && phi.is_pure(),
        metrics: m,
        bures_identity: IdentityCheck {
            trace_formula_fidelity: f_alt,
            defect,
            tolerance: TAU_EQUAL,
            holds: defect <= TAU_EQUAL,
        },
    };
    let mut summary = vec![
        format!("fidelity         {:.12}", m.fidelity),
        format!("bures distance   {:.12}", m.bures_distance),
        format!("trace distance   {:.12}", m.trace_distance),
    ];
    match m.transition_probability {
        Some(t) => summary.push(format!("transition prob  {t:.12}")),
        None => summary.push("transition prob  (not both pure)".into()),
    }
    summary.push(format!("D^2 = 2 - 2F defect {defect:.3e}"));
    Ok(Outcome {
        json: ctx.render("fidelity", Some(psi.spec()), a, &report),
        csv: None,
        summary,
        exit: if report.bures_identity.holds { EXIT_PASS } else { EXIT_FAIL },
    })
}

fn default_blank(factor: &AlgebraSpec) -> Result<AlgebraState> {
    AlgebraState::pure(factor.clone(), 0, &basis_vector(factor.blocks()[0], 0))
}

fn load_blank(path: &Option<PathBuf>, factor: &AlgebraSpec) -> Result<AlgebraState> {
    match path {
        Some(p) => {
            let s: AlgebraState = io::read_json(p)?;
            if s.spec() != factor {
                return Err(Error::domain("blank state does not live on the factor algebra"));
            }
            Ok(s)
        }
        None => default_blank(factor),
    }
}

fn load_channel(path: &Path) -> Result<QuantumChannel> {
    io::read_json(path)
}

fn square_root_dim(n2: usize) -> Result<usize> {
    let n = (n2 as f64).sqrt().round() as usize;
    if n * n != n2 || n == 0 {
        return Err(Error::dim(format!("channel dimension {n2} is not the square of a factor dimension")));
    }
    Ok(n)
}

fn builtin_channel(kind: Builtin, factor: &AlgebraSpec) -> Result<QuantumChannel> {
    let n = factor.hilbert_dim();
    match kind {
        Builtin::Identity => Ok(channels::identity(n * n)),
        Builtin::Swap => Ok(channels::swap(n)),
        Builtin::Classical => classical_copy_channel(factor),
        Builtin::BuzekHillery => {
            if factor.blocks() != [2] {
                return Err(Error::domain("the universal qubit cloner needs the factor M_2"));
            }
            Ok(buzek_hillery_pair_channel())
        }
    }
}

fn audit_factor(a: &AuditArgs) -> Result<(AlgebraSpec, QuantumChannel)> {
    let given = a.factor.resolve()?;
    if let Some(path) = &a.channel {
        let channel = load_channel(path)?;
        let factor = match given {
            Some(f) => f,
            None => AlgebraSpec::full(square_root_dim(channel.in_dim())?),
        };
        return Ok((factor, channel));
    }
    let kind = a.builtin.expect("clap requires --channel or --builtin");
    let factor = match (kind, given, a.factor.dim) {
        (Builtin::Classical, _, Some(d)) if a.factor.blocks.is_none() => AlgebraSpec::diagonal(d),
        (_, Some(f), _) => f,
        (Builtin::Classical, None, _) => AlgebraSpec::diagonal(2),
        (_, None, _) => AlgebraSpec::full(2),
    };
    let channel = builtin_channel(kind, &factor)?;
    Ok((factor, channel))
}

fn cmd_clone_audit(ctx: &Ctx, a: &AuditArgs) -> Result<Outcome> {
    let (factor, channel) = audit_factor(a)?;
    let blank = load_blank(&a.blank, &factor)?;
    let spec = CloneSpec::new(factor.clone(), blank, a.epsilon, a.samples, ctx.seed)?.with_tolerances(a.tolerances.resolve());
    let report = audit_cloner(&channel, &spec)?;
    let g = &report.aggregates;
    let summary = vec![
        format!("samples                 {}", g.samples),
        format!("min clone fidelity      {:.9}", g.min_clone_fidelity),
        format!("min original fidelity   {:.9}", g.min_original_fidelity),
        format!("max product residual    {:.3e}", g.max_product_residual),
        format!("max marginal residual   {:.3e}", g.max_marginal_residual),
        format!("max purity defect       {:.3e}", g.max_purity_defect),
        format!("perfect cloner          {}", if report.verdict_perfect { "pass" } else { "fail" }),
        format!("{}-imperfect cloner  {}", a.epsilon, if report.verdict_epsilon { "pass" } else { "fail" }),
    ];
    Ok(Outcome {
        json: ctx.render("clone-audit", Some(&factor), a, &report),
        csv: Some(io::to_csv(&report.records)?),
        summary,
        exit: EXIT_PASS,
    })
}

fn cmd_optimize(ctx: &Ctx, a: &OptimizeArgs) -> Result<Outcome> {
    let factor = a.factor.resolve()?.unwrap_or_else(|| AlgebraSpec::full(2));
    let blank = match &a.blank {
        Some(_) => BlankStrategy::Fixed(load_blank(&a.blank, &factor)?),
        None => BlankStrategy::CoOptimized,
    };
    let config = OptimizerConfig {
        restarts: a.restarts,
        iters: a.iters,
        seed: ctx.seed,
        samples: a.samples,
        epsilon: a.epsilon,
        tolerances: a.tolerances.resolve(),
        env_dim: a.env_dim,
        penalties: !a.no_penalty,
        blank,
    };
    let result = optimize_cloner(&factor, &config)?;
    let s = &result.stats;
    let fmt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.9}"));
    let mut summary = vec![
        format!("restarts          {}", s.restarts),
        format!("feasible          {}", s.feasible),
        format!("best worst-case   {}", fmt(s.best_fidelity)),
        format!("mean worst-case   {}", fmt(s.mean_fidelity)),
    ];
    if let Some(b) = &result.best {
        summary.push(format!(
            "best restart {}: product {:.2e}, marginal {:.2e}, purity {:.2e}",
            b.restart, b.product_residual, b.marginal_residual, b.purity_defect
        ));
    }
    let csv = match &result.best {
        Some(b) => Some(io::to_csv(&b.audit.records)?),
        None => Some(String::new()),
    };
    Ok(Outcome {
        json: ctx.render("optimize", Some(&factor), a, &result),
        csv,
        summary,
        exit: EXIT_PASS,
    })
}

fn cmd_bh_demo(ctx: &Ctx, a: &BhArgs) -> Result<Outcome> {
    let report = buzek_hillery_demo(a.samples, ctx.seed)?;
    let summary = vec![
        format!("inputs                 {}", report.records.len()),
        format!("expected fidelity      {:.12}", report.expected_fidelity),
        format!("min / max fidelity     {:.12} / {:.12}", report.min_clone_fidelity, report.max_clone_fidelity),
        format!("min product residual   {:.6}", report.min_product_residual),
    ];
    Ok(Outcome {
        json: ctx.render("bh-demo", Some(&AlgebraSpec::full(2)), a, &report),
        csv: None,
        summary,
        exit: EXIT_PASS,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceEntry {
    pub id: String,
    pub trace: TheoremTrace,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceReport {
    pub candidate: String,
    pub consistent: usize,
    pub contradiction: usize,
    pub not_applicable: usize,
    pub traces: Vec<TraceEntry>,
}

fn cmd_trace_theorem(ctx: &Ctx, a: &TraceArgs) -> Result<Outcome> {
    let tolerances = a.tolerances.resolve();
    let given = a.factor.resolve()?;
    let kind = if a.channel.is_some() { "channel" } else { kind_name(a.candidate) };
    let mut traces = Vec::new();
    let factor = if let Some(path) = &a.channel {
        let channel = load_channel(path)?;
        let factor = match given {
            Some(f) => f,
            None => AlgebraSpec::full(square_root_dim(channel.in_dim())?),
        };
        trace_channel(&factor, &CloneCandidate::Channel(channel), a, ctx.seed, &tolerances, &mut traces)?;
        factor
    } else {
        match a.candidate {
            CandidateKind::Synthetic => {
                let factor = given.unwrap_or_else(|| AlgebraSpec::full(2));
                let pair = CommutingPair::new(factor.clone());
                let blank = default_blank(&factor)?;
                for (k, c) in synthetic_candidates(&pair, a.epsilon, a.count, ctx.seed)?.into_iter().enumerate() {
                    let trace = trace_theorem(&pair, &c.psi, &c.phi, &c.candidate, a.epsilon, &blank, &tolerances)?;
                    traces.push(TraceEntry {
                        id: format!("synthetic-{k}"),
                        trace,
                    });
                }
                factor
            }
            CandidateKind::Classical => {
                let factor = match (given, a.factor.dim) {
                    (_, Some(d)) if a.factor.blocks.is_none() => AlgebraSpec::diagonal(d),
                    (Some(f), _) => f,
                    (None, _) => AlgebraSpec::diagonal(2),
                };
                if !is_abelian(&factor) {
                    return Err(Error::domain("the classical copier needs an abelian factor"));
                }
                let pair = CommutingPair::new(factor.clone());
                let candidate = CloneCandidate::Channel(classical_copy_channel(&factor)?);
                let blank = AlgebraState::maximally_mixed(&factor);
                let one = [Complex64::new(1.0, 0.0)];
                let n = factor.num_blocks();
                for i in 0..n {
                    for j in i..n {
                        let psi = AlgebraState::pure(factor.clone(), i, &one)?;
                        let phi = AlgebraState::pure(factor.clone(), j, &one)?;
                        let trace = trace_theorem(&pair, &psi, &phi, &candidate, a.epsilon, &blank, &tolerances)?;
                        traces.push(TraceEntry {
                            id: format!("point-{i}-{j}"),
                            trace,
                        });
                    }
                }
                factor
            }
            other => {
                let factor = given.unwrap_or_else(|| AlgebraSpec::full(2));
                let builtin = match other {
                    CandidateKind::BuzekHillery => Builtin::BuzekHillery,
                    CandidateKind::Identity => Builtin::Identity,
                    _ => Builtin::Swap,
                };
                let channel = builtin_channel(builtin, &factor)?;
                trace_channel(&factor, &CloneCandidate::Channel(channel), a, ctx.seed, &tolerances, &mut traces)?;
                factor
            }
        }
    };
    let count = |v: ChainVerdict| traces.iter().filter(|t| t.trace.verdict == v).count();
    let report = TraceReport {
        candidate: kind.into(),
        consistent: count(ChainVerdict::Consistent),
        contradiction: count(ChainVerdict::Contradiction),
        not_applicable: count(ChainVerdict::NotApplicable),
        traces,
    };
    let mut summary: Vec<String> = report
        .traces
        .iter()
        .map(|t| {
            format!(
                "{:<14} F(psi,phi)={:.6} verdict={:?} first_violation={}",
                t.id,
                t.trace.input_fidelity,
                t.trace.verdict,
                t.trace.first_violation.as_deref().unwrap_or("-")
            )
        })
        .collect();
    summary.push(format!(
        "consistent {}, contradiction {}, not applicable {}",
        report.consistent, report.contradiction, report.not_applicable
    ));
    Ok(Outcome {
        json: ctx.render("trace-theorem", Some(&factor), a, &report),
        csv: None,
        summary,
        exit: EXIT_PASS,
    })
}

fn kind_name(k: CandidateKind) -> &'static str {
    match k {
        CandidateKind::Synthetic => "synthetic",
        CandidateKind::Classical => "classical",
        CandidateKind::BuzekHillery => "buzek-hillery",
        CandidateKind::Identity => "identity",
        CandidateKind::Swap => "swap",
    }
}

fn trace_channel(
    factor: &AlgebraSpec,
    candidate: &CloneCandidate,
    a: &TraceArgs,
    seed: u64,
    tolerances: &CloneTolerances,
    out: &mut Vec<TraceEntry>,
) -> Result<()> {
    let pair = CommutingPair::new(factor.clone());
    let (psi, phi) = construct_pure_pair(factor, a.alpha, seed)?;
    let blank = default_blank(factor)?;
    let trace = trace_theorem(&pair, &psi, &phi, candidate, a.epsilon, &blank, tolerances)?;
    out.push(TraceEntry {
        id: format!("overlap-{}", a.alpha),
        trace,
    });
    Ok(())
}
