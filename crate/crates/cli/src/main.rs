mod corpus;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

use lmoment::cache::load_table;
use lmoment::coeffs::{diagnostic_scan, grc_audit, ConstantsLedger, GrcAudit, ScanKind, ScanReport, DEFAULT_BETA};
use lmoment::dirichlet::QuadratureSpec;
use lmoment::halasz::{default_t_bound, lower_bound_audit, minimize, LowerBoundAudit, Sample};
use lmoment::mean_sums::{
    boxplus_partial_sum, error_exponent_scan, geometric_grid, main_term_fit, smooth_window, window_decay_audit,
    DecayAudit, ExponentScan, MainTermFit,
};
use lmoment::moments::{moment_experiment, trend_scan, MomentOptions, TRule};
use lmoment::ramare::{
    decompose, decompose_values, select_parameters, DecompositionParams, ParameterMode, ParameterSelection,
    REASSEMBLY_TOL,
};
use lmoment::{BigRational, Error, Result};

use corpus::{CorpusArgs, Kind};
use report::{write_csv, write_report};

#[derive(Parser)]
#[command(name = "lmoment", version, about = "Second-moment experiments for automorphic Dirichlet polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a coefficient table and store it in the cache directory.
    BuildCoeffs(BuildArgs),
    /// Split the coefficients up to X into prime windows.
    Decompose(DecomposeArgs),
    /// Reassemble a decomposition and compare it with the table.
    VerifyIdentity(VerifyArgs),
    /// Minimise the pretentious distance to n^{it}.
    Halasz(HalaszArgs),
    /// Second moment over [T, 2T].
    Moment(MomentArgs),
    /// Second moments along a grid of X.
    Trend(TrendArgs),
    /// Partial sums of the isobaric coefficients 1 * lambda.
    MeanSum(MeanSumArgs),
    /// Ramanujan-bound audit, prime-square scan and constants.
    Audit(AuditArgs),
}

#[derive(Debug, Clone, Default, Args)]
struct OutputArgs {
    /// JSON report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV path for the per-row data of the command.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ModeName {
    Paper,
    PaperBeta,
    Desk,
}

#[derive(Debug, Clone, Args, Serialize)]
struct ParamArgs {
    /// Parameter recipe; `desk` when P, Q and H are all given, else `paper`.
    #[arg(long, value_enum)]
    mode: Option<ModeName>,
    #[arg(long = "P")]
    p: Option<f64>,
    #[arg(long = "Q")]
    q: Option<f64>,
    #[arg(long = "H")]
    h: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_BETA)]
    beta: f64,
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
}

impl ParamArgs {
    fn mode(&self) -> Result<ParameterMode> {
        let given = [self.p, self.q, self.h].iter().filter(|v| v.is_some()).count();
        let name = match self.mode {
            Some(m) => m,
            None if given == 3 => ModeName::Desk,
            None if given == 0 => ModeName::Paper,
            None => return Err(Error::InvalidParameter("give all of --P, --Q, --H or none of them".into())),
        };
        Ok(match name {
            ModeName::Paper => ParameterMode::Paper,
            ModeName::PaperBeta => ParameterMode::PaperBeta {
                beta: self.beta,
                eps: self.eps,
            },
            ModeName::Desk => match (self.p, self.q, self.h) {
                (Some(p), Some(q), Some(h)) => ParameterMode::Desk { p, q, h },
                _ => return Err(Error::InvalidParameter("desk mode needs --P, --Q and --H".into())),
            },
        })
    }

    fn select(&self, x: u64, degree: usize) -> Result<ParameterSelection> {
        select_parameters(x as f64, degree, self.mode()?)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
struct QuadArgs {
    /// Relative change at which step halving stops.
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    #[arg(long, default_value_t = 6)]
    max_refinements: u32,
    #[arg(long)]
    base_step: Option<f64>,
}

impl QuadArgs {
    fn spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            base_step: self.base_step,
            tol_rel: self.tol,
            max_refinements: self.max_refinements,
            ..QuadratureSpec::default()
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
struct BuildArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long = "N")]
    n: usize,
    #[arg(long, value_enum, default_value_t = Kind::Standard)]
    kind: Kind,
    /// Also run the Ramanujan-bound audit against the Rankin–Selberg table.
    #[arg(long)]
    audit: bool,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
struct DecomposeArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long = "X")]
    x: u64,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
struct VerifyArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long = "X")]
    x: u64,
    #[command(flatten)]
    params: ParamArgs,
    /// Rational arithmetic; integer-valued corpora only.
    #[arg(long)]
    exact: bool,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
struct HalaszArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long = "X")]
    x: u64,
    /// Search box |t| <= t_bound; default min(X, 1000).
    #[arg(long)]
    t_bound: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    accuracy: f64,
    /// Multiply the coefficients by n^{i tau} first.
    #[arg(long)]
    twist: Option<f64>,
    /// Run the lower-bound audit with this epsilon.
    #[arg(long)]
    audit_eps: Option<f64>,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
struct MomentArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long = "X")]
    x: u64,
    #[arg(long = "T")]
    t: f64,
    #[command(flatten)]
    params: ParamArgs,
    /// Skip locating t0 and the excised integral.
    #[arg(long)]
    no_excise: bool,
    /// Also integrate over [2, T].
    #[arg(long)]
    lower: bool,
    /// Weighted moment with weight t^{-alpha} on [1, T].
    #[arg(long)]
    alpha: Option<f64>,
    /// Large-value census with threshold exponent c: |Q_j| > e^{j/H} / log^c X.
    #[arg(long)]
    census_exponent: Option<f64>,
    #[arg(long)]
    t_bound: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    accuracy: f64,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
struct TrendArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Comma-separated X grid.
    #[arg(long = "X", value_delimiter = ',', required = true)]
    xs: Vec<u64>,
    /// Fixed T; default max(16, X^{2/d}).
    #[arg(long = "T")]
    t: Option<f64>,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
struct MeanSumArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Comma-separated points for the two-method partial sum.
    #[arg(long = "X", value_delimiter = ',')]
    xs: Vec<u64>,
    /// Fit S(X) ~ c X on a geometric grid ending here, then scan the error exponent.
    #[arg(long)]
    fit_max: Option<u64>,
    #[arg(long, default_value_t = 1000)]
    fit_min: u64,
    #[arg(long, default_value_t = 8)]
    per_decade: usize,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
struct AuditArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long = "N")]
    n: usize,
    /// Comma-separated X for the prime-square scan; default a geometric grid up to N.
    #[arg(long, value_delimiter = ',')]
    scan_x: Vec<u64>,
    #[arg(long, default_value_t = DEFAULT_BETA)]
    beta: f64,
    /// Window decay audit at this X (needs --window-y).
    #[arg(long)]
    window_x: Option<f64>,
    #[arg(long)]
    window_y: Option<f64>,
    #[arg(long, default_value_t = 1)]
    window_j: u32,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            let msg = e.to_string();
            let body = msg.split("\n\nUsage:").next().unwrap_or("");
            let line = body.split_whitespace().collect::<Vec<_>>().join(" ");
            return fail("invalid_config", line.trim_start_matches("error: "), 2);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (kind, code) = classify(&e);
            fail(kind, &e.to_string(), code)
        }
    }
}

fn classify(e: &Error) -> (&'static str, u8) {
    match e {
        Error::InvalidParameter(_) | Error::TableTooShort { .. } | Error::Degenerate(_) | Error::ZeroMass => {
            ("invalid_config", 2)
        }
        Error::Cache(_) | Error::Io(_) => ("io", 1),
        _ => ("experiment_failed", 1),
    }
}

fn fail(kind: &str, message: &str, code: u8) -> ExitCode {
    let line = serde_json::json!({ "error": kind, "message": message });
    eprintln!("{line}");
    ExitCode::from(code)
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::BuildCoeffs(a) => build_coeffs(a),
        Command::Decompose(a) => decompose_cmd(a),
        Command::VerifyIdentity(a) => verify_identity(a),
        Command::Halasz(a) => halasz(a),
        Command::Moment(a) => moment(a),
        Command::Trend(a) => trend(a),
        Command::MeanSum(a) => mean_sum(a),
        Command::Audit(a) => audit(a),
    }
}

fn require(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg.into()))
    }
}

const MAX_LEN: usize = 2_000_000;

fn check_len(n: usize, what: &str) -> Result<()> {
    require((1..=MAX_LEN).contains(&n), format!("{what} must lie in 1..={MAX_LEN}, got {n}"))
}

#[derive(Serialize)]
struct BuildResult {
    provenance: String,
    degree: usize,
    length: usize,
    kind: String,
    path: String,
    hash: String,
    round_trip_exact: bool,
    grc_audit: Option<GrcAudit>,
}

fn build_coeffs(a: BuildArgs) -> Result<()> {
    a.corpus.validate()?;
    check_len(a.n, "N")?;
    require(!a.audit || a.kind == Kind::Standard, "--audit applies to standard tables")?;
    let (table, path) = a.corpus.build_and_save(a.kind, a.n)?;
    let back = load_table(&path)?;
    let grc = if a.audit {
        Some(grc_audit(&table, &a.corpus.build(Kind::RankinSelberg, a.n)?)?)
    } else {
        None
    };
    let mut warnings = Vec::new();
    if let Some(g) = &grc {
        if !g.passed() {
            warnings.push(format!("{} Ramanujan-bound violations", g.violations.len()));
        }
    }
    let result = BuildResult {
        provenance: table.provenance().to_string(),
        degree: table.degree(),
        length: table.len(),
        kind: table.kind().to_string(),
        path: path.display().to_string(),
        hash: back.hash,
        round_trip_exact: back.table == table,
        grc_audit: grc,
    };
    write_report(a.output.out.as_deref(), "build-coeffs", &a, &result, &warnings)
}

#[derive(Serialize)]
struct WindowRow {
    j: i64,
    primes: usize,
    first_prime: Option<u64>,
    last_prime: Option<u64>,
    q_l1: f64,
    f_terms: usize,
    m_max: u64,
}

#[derive(Serialize)]
struct DecomposeResult {
    provenance: String,
    selection: ParameterSelection,
    params: DecompositionParams,
    horizon: usize,
    occupied_windows: usize,
    pm_corrections: usize,
    overcount: usize,
    rough: usize,
    supports_ok: bool,
    windows: Vec<WindowRow>,
}

fn decomposition_setup(corpus: &CorpusArgs, x: u64, params: &ParamArgs) -> Result<(ParameterSelection, DecompositionParams)> {
    corpus.validate()?;
    require(x >= 16, format!("X must be at least 16, got {x}"))?;
    check_len(x as usize, "X")?;
    let selection = params.select(x, corpus.degree())?;
    let dp = selection.decomposition_params()?;
    check_len(dp.horizon(), "reassembly horizon")?;
    Ok((selection, dp))
}

fn decompose_cmd(a: DecomposeArgs) -> Result<()> {
    let (selection, params) = decomposition_setup(&a.corpus, a.x, &a.params)?;
    let table = a.corpus.load(Kind::Standard, params.horizon())?;
    let d = decompose(&table, params)?;
    let mut warnings = Vec::new();
    let supports_ok = match d.check_supports() {
        Ok(()) => true,
        Err(e) => {
            warnings.push(e.to_string());
            false
        }
    };
    let windows: Vec<WindowRow> = d
        .windows
        .iter()
        .map(|w| WindowRow {
            j: w.j,
            primes: w.q_terms.len(),
            first_prime: w.q_terms.first().map(|t| t.0),
            last_prime: w.q_terms.last().map(|t| t.0),
            q_l1: w.q_terms.iter().map(|t| t.1.norm()).sum(),
            f_terms: w.f_terms.len(),
            m_max: w.m_max,
        })
        .collect();
    if let Some(path) = &a.output.csv {
        write_csv(path, &windows)?;
    }
    let result = DecomposeResult {
        provenance: d.provenance.clone(),
        selection,
        params,
        horizon: params.horizon(),
        occupied_windows: d.occupied_windows().len(),
        pm_corrections: d.pm_corrections.len(),
        overcount: d.overcount.len(),
        rough: d.rough.len(),
        supports_ok,
        windows,
    };
    write_report(a.output.out.as_deref(), "decompose", &a, &result, &warnings)
}

#[derive(Serialize)]
struct VerifyResult {
    provenance: String,
    params: DecompositionParams,
    horizon: usize,
    exact: bool,
    max_deviation: f64,
    argmax: u64,
    tolerance: f64,
    passed: bool,
}

fn verify_identity(a: VerifyArgs) -> Result<()> {
    let (_, params) = decomposition_setup(&a.corpus, a.x, &a.params)?;
    let horizon = params.horizon();
    let table = a.corpus.load(Kind::Standard, horizon)?;
    let outcome = if a.exact {
        let values = table
            .values()
            .iter()
            .map(|v| {
                if v.im == 0.0 && v.re.fract() == 0.0 && v.re.abs() < 9e15 {
                    Ok(BigRational::from_integer((v.re as i64).into()))
                } else {
                    Err(Error::InvalidParameter(
                        "--exact needs an integer-valued corpus such as zeta-like".into(),
                    ))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        decompose_values(&values, params, table.provenance())?
            .reassemble()
            .map(|r| (r.max_deviation, r.argmax))
    } else {
        decompose(&table, params)?.reassemble().map(|r| (r.max_deviation, r.argmax))
    };
    let (max_deviation, argmax, failure) = match outcome {
        Ok((dev, n)) => (dev, n, None),
        Err(Error::Reassembly { n, deviation }) => (deviation, n, Some(Error::Reassembly { n, deviation })),
        Err(e) => return Err(e),
    };
    let result = VerifyResult {
        provenance: table.provenance().to_string(),
        params,
        horizon,
        exact: a.exact,
        max_deviation,
        argmax,
        tolerance: if a.exact { 0.0 } else { REASSEMBLY_TOL },
        passed: failure.is_none(),
    };
    write_report(a.output.out.as_deref(), "verify-identity", &a, &result, &[])?;
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct HalaszResult {
    provenance: String,
    x: u64,
    degree: usize,
    t_bound: f64,
    target_accuracy: f64,
    delta: f64,
    lipschitz: f64,
    grid_t: f64,
    grid_min: f64,
    t0: f64,
    m: f64,
    boundary: bool,
    evaluations: usize,
    samples: usize,
    lower_bound: Option<LowerBoundAudit>,
}

fn halasz(a: HalaszArgs) -> Result<()> {
    a.corpus.validate()?;
    require(a.x >= 2, "X must be at least 2")?;
    check_len(a.x as usize, "X")?;
    let mut table = a.corpus.load(Kind::Standard, a.x as usize)?;
    if let Some(tau) = a.twist {
        require(tau.is_finite(), "--twist must be finite")?;
        table = table.twisted(tau);
    }
    let t_bound = a.t_bound.unwrap_or_else(|| default_t_bound(a.x));
    let profile = minimize(&table, a.x, t_bound, a.accuracy)?;
    let lower_bound = match a.audit_eps {
        Some(eps) => Some(lower_bound_audit(&profile, profile.degree, eps)?),
        None => None,
    };
    let mut warnings = Vec::new();
    if profile.boundary {
        warnings.push(format!("minimiser within one grid step of the search boundary {t_bound}"));
    }
    if let Some(path) = &a.output.csv {
        write_csv::<Sample>(path, &profile.samples)?;
    }
    let result = HalaszResult {
        provenance: profile.provenance.clone(),
        x: profile.x,
        degree: profile.degree,
        t_bound: profile.t_bound,
        target_accuracy: profile.target_accuracy,
        delta: profile.delta,
        lipschitz: profile.lipschitz,
        grid_t: profile.grid_t,
        grid_min: profile.grid_min,
        t0: profile.t0,
        m: profile.m,
        boundary: profile.boundary,
        evaluations: profile.evaluations,
        samples: profile.samples.len(),
        lower_bound,
    };
    write_report(a.output.out.as_deref(), "halasz", &a, &result, &warnings)
}

fn moment(a: MomentArgs) -> Result<()> {
    a.corpus.validate()?;
    require(a.x >= 2, "X must be at least 2")?;
    check_len(a.x as usize, "X")?;
    let options = MomentOptions {
        lower_interval: a.lower,
        weighted_alpha: a.alpha,
        mode: a.params.mode()?,
        excise: !a.no_excise,
        halasz_t_bound: a.t_bound,
        halasz_accuracy: a.accuracy,
        census_exponent: a.census_exponent,
    };
    // the census decomposes up to X e^{1/H}
    let mut len = a.x as usize;
    if a.census_exponent.is_some() && a.x >= 16 {
        if let Ok(dp) = a.params.select(a.x, a.corpus.degree())?.decomposition_params() {
            len = len.max(dp.horizon());
        }
    }
    check_len(len, "table length")?;
    let table = a.corpus.load(Kind::Standard, len)?;
    let report = moment_experiment(&table, a.x, a.t, &a.quad.spec(), &options)?;
    if let Some(path) = &a.output.csv {
        write_csv(path, &report.census)?;
    }
    let warnings = report.warnings.clone();
    write_report(a.output.out.as_deref(), "moment", &a, &report, &warnings)
}

fn trend(a: TrendArgs) -> Result<()> {
    a.corpus.validate()?;
    let max = *a.xs.iter().max().unwrap_or(&0);
    require(a.xs.iter().all(|&x| x >= 2), "every X must be at least 2")?;
    check_len(max as usize, "X")?;
    let table = a.corpus.load(Kind::Standard, max as usize)?;
    let rule = match a.t {
        Some(t) => TRule::Fixed { t },
        None => TRule::Power { degree: table.degree() },
    };
    let report = trend_scan(&table, &a.xs, rule, &a.quad.spec())?;
    let warnings: Vec<String> = report
        .rows
        .iter()
        .filter(|r| !r.converged)
        .map(|r| format!("quadrature at X = {} did not reach the tolerance", r.x))
        .collect();
    if let Some(path) = &a.output.csv {
        write_csv(path, &report.rows)?;
    }
    write_report(a.output.out.as_deref(), "trend", &a, &report, &warnings)
}

#[derive(Serialize)]
struct SumRow {
    x: u64,
    sieve_re: f64,
    sieve_im: f64,
    floor_sum_re: f64,
    floor_sum_im: f64,
    deviation: f64,
}

#[derive(Serialize)]
struct MeanSumResult {
    provenance: String,
    sums: Vec<SumRow>,
    fit: Option<MainTermFit>,
    exponent_scan: Option<ExponentScan>,
}

fn mean_sum(a: MeanSumArgs) -> Result<()> {
    a.corpus.validate()?;
    require(!a.xs.is_empty() || a.fit_max.is_some(), "give --X points, --fit-max, or both")?;
    require(a.xs.iter().all(|&x| x >= 1), "every X must be positive")?;
    let grid = match a.fit_max {
        Some(hi) => {
            require(a.fit_min >= 2 && hi > a.fit_min, "need 2 <= --fit-min < --fit-max")?;
            require(a.per_decade >= 1, "--per-decade must be positive")?;
            geometric_grid(a.fit_min, hi, a.per_decade)
        }
        None => Vec::new(),
    };
    let n = a.xs.iter().chain(grid.iter()).copied().max().unwrap_or(1) as usize;
    check_len(n, "largest X")?;
    let table = a.corpus.load(Kind::Standard, n)?;
    let sums = a
        .xs
        .iter()
        .map(|&x| {
            let s = boxplus_partial_sum(&table, x)?;
            Ok(SumRow {
                x,
                sieve_re: s.sieve.re,
                sieve_im: s.sieve.im,
                floor_sum_re: s.floor_sum.re,
                floor_sum_im: s.floor_sum.im,
                deviation: s.deviation,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut warnings = Vec::new();
    let (fit, scan) = if grid.is_empty() {
        (None, None)
    } else {
        let fit = main_term_fit(&table, &grid)?;
        if !fit.consistent {
            warnings.push(format!(
                "fitted constant and smoothed series differ by {:e}, above the uncertainty {:e}",
                fit.gap, fit.uncertainty
            ));
        }
        let scan = error_exponent_scan(&table, &grid, &fit)?;
        (Some(fit), Some(scan))
    };
    if let Some(path) = &a.output.csv {
        match &scan {
            Some(s) => write_csv(path, &s.rows)?,
            None => write_csv(path, &sums)?,
        }
    }
    let result = MeanSumResult {
        provenance: table.provenance().to_string(),
        sums,
        fit,
        exponent_scan: scan,
    };
    write_report(a.output.out.as_deref(), "mean-sum", &a, &result, &warnings)
}

#[derive(Serialize)]
struct AuditResult {
    provenance: String,
    grc: GrcAudit,
    constants: ConstantsLedger,
    prime_square: ScanReport,
    window_decay: Option<DecayAudit>,
}

fn audit(a: AuditArgs) -> Result<()> {
    a.corpus.validate()?;
    require(a.n >= 10, "N must be at least 10")?;
    check_len(a.n, "N")?;
    require(a.scan_x.iter().all(|&x| x >= 2 && x as usize <= a.n), "scan points must lie in [2, N]")?;
    let table = a.corpus.load(Kind::Standard, a.n)?;
    let rs = a.corpus.load(Kind::RankinSelberg, a.n)?;
    let grc = grc_audit(&table, &rs)?;
    let xs: Vec<f64> = if a.scan_x.is_empty() {
        geometric_grid((a.n as u64 / 1000).max(10), a.n as u64, 4)
            .into_iter()
            .map(|x| x as f64)
            .collect()
    } else {
        a.scan_x.iter().map(|&x| x as f64).collect()
    };
    let prime_square = diagnostic_scan(&table, &ScanKind::PrimeSquare { xs })?;
    let window_decay = match (a.window_x, a.window_y) {
        (Some(x), Some(y)) => {
            let w = smooth_window(x, y)?;
            let (lo, hi) = (2.0 * x / y, 20.0 * x / y);
            let ts: Vec<f64> = (0..12).map(|k| lo * (hi / lo).powf(k as f64 / 11.0)).collect();
            Some(window_decay_audit(&w, a.window_j, &ts)?)
        }
        (None, None) => None,
        _ => return Err(Error::InvalidParameter("--window-x and --window-y go together".into())),
    };
    let mut warnings = Vec::new();
    if !grc.passed() {
        warnings.push(format!("{} Ramanujan-bound violations", grc.violations.len()));
    }
    let constants = ConstantsLedger::new(table.degree(), a.beta);
    if !constants.rho_below_kappa {
        warnings.push(format!("rho_d = {:e} is not below kappa_d = {:e}", constants.rho, constants.kappa));
    }
    if let Some(path) = &a.output.csv {
        write_csv(path, &prime_square.rows)?;
    }
    let result = AuditResult {
        provenance: table.provenance().to_string(),
        grc,
        constants,
        prime_square,
        window_decay,
    };
    write_report(a.output.out.as_deref(), "audit", &a, &result, &warnings)
}
