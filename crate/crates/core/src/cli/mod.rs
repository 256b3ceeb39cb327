//! Command-line front end.
//!
//! Settings resolve as flags > `--config` TOML file > built-in defaults.
//! Exit codes: 0 success, 1 runtime failure, 2 invalid input, 3 indeterminate
//! probe verdict under `--strict`.

pub mod dsl;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::analytic::{
    bloch_seminorm, coeff_growth_check, coeff_sum_check, hardy_norm, CoefficientFunction, Discretization,
};
use crate::error::Error;
use crate::measures::{classify_carleson, Measure, MomentMethod, MomentTable, TailGrid, DEFAULT_VANISHING_THRESHOLD};
use crate::operators::{
    apply_integral, equivalence_check, hilbert_schmidt_integral, hilbert_schmidt_sum, z_grid, HankelOperator,
    ProductMethod, DEFAULT_HS_TRUNCATION, DEFAULT_TRUNCATION,
};
use crate::probes::{self, ProbeConfig, ProbeResult, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Auto,
    Naive,
    Fft,
}

impl From<MethodArg> for ProductMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => ProductMethod::Auto,
            MethodArg::Naive => ProductMethod::Naive,
            MethodArg::Fft => ProductMethod::Fft,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentMethodArg {
    Auto,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceArg {
    /// `H^p` norm
    Hp,
    /// Bloch seminorm
    Bloch,
    /// `(Σ (n+1)^{p-2}|a_n|^p)^{1/p}`
    Coefsum,
    /// Coefficient growth against `n^{1/p-1}`
    Growth,
}

#[derive(Debug, Parser)]
#[command(name = "hardylab", version, about = "Generalized Hilbert operators on Hardy spaces")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, env = "HARDYLAB_THREADS")]
    pub threads: Option<usize>,
    /// Exit with code 3 on an indeterminate verdict.
    #[arg(long, global = true)]
    pub strict: bool,
    /// TOML file with defaults for any setting.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Print the resolved configuration as TOML and exit.
    #[arg(long, global = true)]
    pub dump_config: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Overrides for the probe grids and tolerances.
#[derive(Debug, Clone, Default, Args, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProbeArgs {
    /// Comma-separated values of `a` in (0,1).
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_grid: Option<Vec<f64>>,
    /// Comma-separated values of `s` in (0,1).
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_grid: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit_from: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope_tol: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_truncation: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<MethodArg>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProbeTarget {
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 1.0)]
    pub q: f64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub measure: String,
    #[command(flatten)]
    pub tune: ProbeArgs,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Moments μ_n of a measure.
    Moments {
        #[arg(long)]
        measure: String,
        #[arg(long)]
        n: usize,
        /// Print μ_0..=μ_n instead of μ_n alone.
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value = "auto")]
        method: MomentMethodArg,
    },
    /// Tail masses μ([t,1)).
    Tail {
        #[arg(long)]
        measure: String,
        /// Comma-separated points in [0,1).
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<f64>,
    },
    /// Carleson exponent estimate and vanishing test.
    Carleson {
        #[arg(long)]
        measure: String,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        /// Exponent for the sup constant; the fitted one if omitted.
        #[arg(long)]
        s: Option<f64>,
        #[arg(long, default_value_t = 0.5)]
        ratio: f64,
        #[arg(long, default_value_t = 40)]
        len: usize,
        #[arg(long, default_value_t = DEFAULT_VANISHING_THRESHOLD)]
        threshold: f64,
    },
    /// Coefficients of H_{μ,α}(f).
    Apply {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        measure: String,
        #[arg(long)]
        f: String,
        /// Truncation order.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
    },
    /// Integral form at one point z.
    Integral {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        measure: String,
        #[arg(long)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        re: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        im: f64,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Hankel series against the integral form on |z| <= zmax.
    Equiv {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        measure: String,
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 0.9)]
        zmax: f64,
        #[arg(long, default_value_t = 9)]
        radial: usize,
        #[arg(long, default_value_t = 16)]
        angular: usize,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Norms of a function.
    Norm {
        #[arg(long)]
        f: String,
        #[arg(long, value_enum, default_value = "hp")]
        space: SpaceArg,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Hilbert–Schmidt sum and integral tests.
    Hs {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        measure: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Growth of ‖H(f_a)‖ along a → 1.
    ProbeBounded(ProbeTarget),
    /// Decay of ‖H(f_a)‖ against the vanishing Carleson test.
    ProbeCompact(ProbeTarget),
    /// Two-sided essential-norm proxy.
    ProbeEssential(ProbeTarget),
    /// Integral sufficient condition with a growth cross-check.
    CheckSufficiency(ProbeTarget),
    /// Growth probe at α = 1/q for log-Carleson measures.
    ProbeLogBoundary {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        /// Defaults to the log-weighted density on the critical exponent.
        #[arg(long)]
        measure: Option<String>,
        #[command(flatten)]
        tune: ProbeArgs,
    },
}

/// Settings a config file may provide.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct FileConfig {
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    pub strict: bool,
    /// Truncation order for `apply`, `integral`, `equiv` and `norm`.
    pub truncation: usize,
    pub hs_truncation: usize,
    pub discretization: Discretization,
    pub probe: ProbeConfig,
}

impl Default for FileConfig {
    fn default() -> Self {
        Self {
            format: Format::Json,
            threads: None,
            strict: false,
            truncation: DEFAULT_TRUNCATION,
            hs_truncation: DEFAULT_HS_TRUNCATION,
            discretization: Discretization::default(),
            probe: ProbeConfig::default(),
        }
    }
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunConfig {
    #[serde(flatten)]
    pub settings: FileConfig,
    pub command: Command,
}

/// Invalid flags, files or DSL input (exit code 2).
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct Usage(pub String);

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn load_file_config(path: &Path) -> anyhow::Result<FileConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| usage(format!("invalid config {}: {e}", path.display())))
}

fn apply_probe_args(cfg: &mut ProbeConfig, a: &ProbeArgs) {
    if let Some(g) = &a.a_grid {
        cfg.a_grid = g.clone();
    }
    if let Some(g) = &a.s_grid {
        cfg.s_grid = g.clone();
    }
    if let Some(v) = a.fit_from {
        cfg.fit_from = v;
    }
    if let Some(v) = a.slope_tol {
        cfg.slope_tol = v;
    }
    if let Some(v) = a.min_truncation {
        cfg.min_truncation = v;
    }
    if let Some(m) = a.method {
        cfg.method = m.into();
    }
}

/// Merges flags over the config file over defaults and validates the result.
pub fn resolve(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut settings = match &cli.config {
        Some(p) => load_file_config(p)?,
        None => FileConfig::default(),
    };
    if let Some(f) = cli.format {
        settings.format = f;
    }
    if cli.threads.is_some() {
        settings.threads = cli.threads;
    }
    settings.strict |= cli.strict;
    match &cli.command {
        Command::ProbeBounded(t) | Command::ProbeCompact(t) | Command::ProbeEssential(t) | Command::CheckSufficiency(t) => {
            apply_probe_args(&mut settings.probe, &t.tune)
        }
        Command::ProbeLogBoundary { tune, .. } => apply_probe_args(&mut settings.probe, tune),
        _ => {}
    }
    if settings.threads == Some(0) {
        return Err(usage("--threads must be at least 1"));
    }
    if settings.truncation == 0 || settings.hs_truncation == 0 {
        return Err(usage("truncation orders must be positive"));
    }
    settings.probe.validate().map_err(|e| usage(format!("invalid probe settings: {e}")))?;
    Ok(RunConfig {
        settings,
        command: cli.command.clone(),
    })
}

fn parse_measure(text: &str) -> anyhow::Result<Measure> {
    dsl::parse_measure(text).map_err(|e| dsl_error("--measure", text, e))
}

fn parse_function(text: &str, n: usize) -> anyhow::Result<CoefficientFunction> {
    dsl::parse_function(text, n).map_err(|e| dsl_error("--f", text, e))
}

fn dsl_error(flag: &str, text: &str, e: Error) -> anyhow::Error {
    match e {
        Error::Parse { column, .. } => {
            let pad = " ".repeat(column.saturating_sub(1));
            usage(format!("{flag}: {e}\n  {text}\n  {pad}^"))
        }
        other => usage(format!("{flag}: {other}")),
    }
}

fn check(cond: bool, msg: impl Into<String>) -> anyhow::Result<()> {
    if cond {
        Ok(())
    } else {
        Err(usage(msg))
    }
}

/// A rendered report plus the verdict that `--strict` inspects.
pub struct Report {
    pub json: serde_json::Value,
    pub csv: String,
    pub verdict: Option<Verdict>,
}

impl Report {
    fn plain(json: serde_json::Value, csv: String) -> Self {
        Self { json, csv, verdict: None }
    }

    fn probe(r: ProbeResult) -> anyhow::Result<Self> {
        Ok(Self {
            json: serde_json::to_value(&r)?,
            csv: r.to_csv(),
            verdict: Some(r.verdict),
        })
    }
}

fn csv_table(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for r in rows {
        s.push_str(&r);
        s.push('\n');
    }
    s
}

fn coeff_rows(c: &[Complex64]) -> String {
    csv_table("index,re,im", c.iter().enumerate().map(|(i, v)| format!("{i},{},{}", v.re, v.im)))
}

/// Runs the resolved command.
pub fn execute(run: &RunConfig) -> anyhow::Result<Report> {
    let s = &run.settings;
    let report = match &run.command {
        Command::Moments { measure, n, all, method } => {
            let m = parse_measure(measure)?;
            let method = match method {
                MomentMethodArg::Auto => MomentMethod::Auto,
                MomentMethodArg::Quadrature => MomentMethod::Quadrature,
            };
            let table = MomentTable::with_method(&m, *n, method)?;
            let range = if *all { 0..=*n } else { *n..=*n };
            let rows: Vec<_> = range.clone().map(|k| json!({"n": k, "moment": table.get(k), "errBound": table.err_bound()[k]})).collect();
            let csv = csv_table("n,moment", range.map(|k| format!("{k},{}", table.get(k))));
            let json = if *all {
                json!({"measure": m.to_string(), "moments": rows})
            } else {
                json!({"measure": m.to_string(), "n": n, "moment": table.get(*n), "errBound": table.err_bound()[*n]})
            };
            Report::plain(json, csv)
        }
        Command::Tail { measure, t } => {
            let m = parse_measure(measure)?;
            let tails = t.iter().map(|&x| m.tail_mass(x)).collect::<Result<Vec<_>, _>>()?;
            let rows: Vec<_> = t.iter().zip(&tails).map(|(x, v)| json!({"t": x, "tail": v})).collect();
            let csv = csv_table("t,tail", t.iter().zip(&tails).map(|(x, v)| format!("{x},{v}")));
            Report::plain(json!({"measure": m.to_string(), "tails": rows}), csv)
        }
        Command::Carleson { measure, beta, s: exponent, ratio, len, threshold } => {
            let m = parse_measure(measure)?;
            let grid = TailGrid::new(*ratio, *len)?;
            check(*threshold > 0.0, "--threshold must be positive")?;
            let rep = classify_carleson(&m, *beta, grid, *exponent, *threshold)?;
            let rows = grid.complements().into_iter().enumerate().map(|(j, tc)| {
                let tail = m.tail_mass_c(tc);
                let r = tail * (1.0 - tc.ln()).powf(*beta) / tc.powf(rep.s);
                format!("{},{},{tail},{r}", j + 1, 1.0 - tc)
            });
            let csv = csv_table("j,t,tail,ratio", rows);
            let mut json = serde_json::to_value(&rep)?;
            json["measure"] = json!(m.to_string());
            Report::plain(json, csv)
        }
        Command::Apply { alpha, measure, f, n, method } => {
            let n = n.unwrap_or(s.truncation);
            let m = parse_measure(measure)?;
            let f = parse_function(f, n)?;
            let op = HankelOperator::new(*alpha, m.clone(), n)?;
            let method = method.map(ProductMethod::from).unwrap_or(s.probe.method);
            let rep = op.apply_with(&f, method)?;
            let csv = coeff_rows(rep.output.coeffs());
            let coeffs: Vec<[f64; 2]> = rep.output.coeffs().iter().map(|c| [c.re, c.im]).collect();
            let json = json!({
                "alpha": alpha,
                "measure": m.to_string(),
                "f": f.to_string(),
                "truncation": n,
                "method": rep.method,
                "truncationTailBound": rep.truncation_tail_bound,
                "inputClass": rep.input_class,
                "coefficients": coeffs,
            });
            Report::plain(json, csv)
        }
        Command::Integral { alpha, measure, f, re, im, n } => {
            let m = parse_measure(measure)?;
            let f = parse_function(f, n.unwrap_or(s.truncation))?;
            let z = Complex64::new(*re, *im);
            let rep = apply_integral(*alpha, &m, &f, z)?;
            let csv = csv_table(
                "re,im,valueRe,valueIm,errorEstimate,converged",
                [format!("{re},{im},{},{},{},{}", rep.re, rep.im, rep.error_estimate, rep.converged)],
            );
            let mut json = serde_json::to_value(rep)?;
            json["z"] = json!([re, im]);
            Report::plain(json, csv)
        }
        Command::Equiv { alpha, measure, f, zmax, radial, angular, n } => {
            check(*zmax > 0.0 && *zmax < 1.0, "--zmax must lie in (0,1)")?;
            check(*radial > 0 && *angular > 0, "--radial and --angular must be positive")?;
            let n = n.unwrap_or(s.truncation);
            let m = parse_measure(measure)?;
            let f = parse_function(f, n)?;
            let rep = equivalence_check(*alpha, &m, &f, &z_grid(*zmax, *radial, *angular), n)?;
            let csv = csv_table(
                "maxDeviation,worstRe,worstIm,points,hypothesisHolds",
                [format!(
                    "{},{},{},{},{}",
                    rep.max_deviation, rep.worst_z[0], rep.worst_z[1], rep.points, rep.hypothesis_holds
                )],
            );
            Report::plain(serde_json::to_value(&rep)?, csv)
        }
        Command::Norm { f, space, p, n } => {
            let f = parse_function(f, n.unwrap_or(s.truncation))?;
            let json = match space {
                SpaceArg::Hp => serde_json::to_value(hardy_norm(&f, *p, &s.discretization)?)?,
                SpaceArg::Bloch => serde_json::to_value(bloch_seminorm(&f, &s.discretization)?)?,
                SpaceArg::Coefsum => json!({"value": coeff_sum_check(&f, *p)?, "space": {"kind": "coefSum", "p": p}}),
                SpaceArg::Growth => serde_json::to_value(coeff_growth_check(&f, *p)?)?,
            };
            let value = json.get("value").or_else(|| json.get("maxRatio")).cloned().unwrap_or_default();
            let csv = csv_table("f,space,p,value", [format!("{f},{},{p},{value}", json!(space).as_str().unwrap_or(""))]);
            Report::plain(json, csv)
        }
        Command::Hs { alpha, measure, n } => {
            let m = parse_measure(measure)?;
            let sum = hilbert_schmidt_sum(*alpha, &m, n.unwrap_or(s.hs_truncation))?;
            let int = hilbert_schmidt_integral(*alpha, &m)?;
            let json = json!({
                "alpha": alpha,
                "measure": m.to_string(),
                "integral": int.value,
                "integralConverges": int.converges,
                "endpointSlope": int.endpoint_slope,
                "integralError": int.error_estimate,
                "sumConverges": sum.converges,
                "partialSum": sum.partial_sum,
                "tailEstimate": sum.tail_estimate,
                "finalIncrement": sum.final_increment,
                "truncation": sum.truncation,
                "dyadic": sum.dyadic,
            });
            let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
            let csv = csv_table(
                "integral,integralConverges,partialSum,sumConverges",
                [format!("{},{},{},{}", opt(int.value), int.converges, sum.partial_sum, sum.converges)],
            );
            Report::plain(json, csv)
        }
        Command::ProbeBounded(t) => {
            let m = parse_measure(&t.measure)?;
            Report::probe(probes::boundedness_probe(t.p, t.q, t.alpha, &m, &s.probe)?)?
        }
        Command::ProbeCompact(t) => {
            let m = parse_measure(&t.measure)?;
            Report::probe(probes::compactness_probe(t.p, t.q, t.alpha, &m, &s.probe)?)?
        }
        Command::ProbeEssential(t) => {
            let m = parse_measure(&t.measure)?;
            Report::probe(probes::essential_norm_proxy(t.p, t.q, t.alpha, &m, &s.probe)?)?
        }
        Command::CheckSufficiency(t) => {
            let m = parse_measure(&t.measure)?;
            Report::probe(probes::sufficiency_integral_check(t.p, t.q, t.alpha, &m, &s.probe)?)?
        }
        Command::ProbeLogBoundary { p, q, measure, .. } => {
            let m = match measure {
                Some(text) => parse_measure(text)?,
                None => probes::log_boundary_measure(*p, *q)?,
            };
            Report::probe(probes::log_carleson_boundary_probe(*p, *q, &m, &s.probe)?)?
        }
    };
    Ok(report)
}

fn exit_code(e: &anyhow::Error) -> i32 {
    if e.downcast_ref::<Usage>().is_some() || e.downcast_ref::<clap::Error>().is_some() {
        return EXIT_USAGE;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::Domain(_) | Error::InfiniteMass(_) | Error::Parse { .. }) => EXIT_USAGE,
        _ => EXIT_RUNTIME,
    }
}

fn emit(text: &str, output: Option<&Path>) -> anyhow::Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn run_inner(cli: &Cli) -> anyhow::Result<i32> {
    let run = resolve(cli)?;
    if cli.dump_config {
        let text = toml::to_string(&run).map_err(|e| anyhow!("cannot render config: {e}"))?;
        emit(&text, cli.output.as_deref())?;
        return Ok(EXIT_OK);
    }
    let report = match run.settings.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("building thread pool")?
            .install(|| execute(&run))?,
        None => execute(&run)?,
    };
    let text = match run.settings.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json)?;
            s.push('\n');
            s
        }
        Format::Csv => report.csv,
    };
    emit(&text, cli.output.as_deref())?;
    if run.settings.strict && report.verdict == Some(Verdict::Indeterminate) {
        return Ok(EXIT_INDETERMINATE);
    }
    Ok(EXIT_OK)
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run_inner(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}
