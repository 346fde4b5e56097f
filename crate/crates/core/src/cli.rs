//! Command-line front end. Exit codes: 0 success, 1 a verification check
//! failed, 2 usage or domain error.
//!
//! Parameter strings written as integers or `p/q` run the exact rational
//! pipeline; any decimal literal (or `--float`) switches to `f64`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::deletion::decrement_matrix;
use crate::eppf::{addition_residual, eppf};
use crate::error::{Error, Result};
use crate::frequency::rank;
use crate::oracle::checks::{
    deletion_law_check, leem_check, order_probability_check, record_independence_check, tau_regen_check,
};
use crate::oracle::law::exact_law;
use crate::oracle::stats::monte_carlo;
use crate::params::{ExtParams, Xi};
use crate::partition::Composition;
use crate::regen::{
    compound_poisson_set, crossbreed_set, decrement_from_phi, ordered_arrangement, phi_n, phi_nm,
    stick_breaking_set, LevyImageMeasure,
};
use crate::rng::RngHandle;
use crate::samplers::{crp_sample, gem_sample, paintbox_sample, tau_biased_perm, xi_order, Paintbox};
use crate::scalar::{is_decimal_literal, Rational, Scalar};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "partition-lab", version, about = "Exchangeable random partitions of the extended two-parameter family")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw partitions (crp, paintbox) or frequency vectors (gem) as NDJSON.
    Sample(SampleArgs),
    /// Evaluate p(λ).
    Eppf(EppfArgs),
    /// Decrement matrix q(n, m) for n <= N.
    Decrement(TableArgs),
    /// Φ(n) and Φ(n, m) of the (α, θ) Lévy measure.
    Phi(TableArgs),
    /// One random regenerative interval set.
    RegenSet(RegenArgs),
    /// Draw ◁_ξ orders of [k], or τ-biased permutations of weights.
    Order(OrderArgs),
    /// Run exact characterization checks and print a JSON report.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// α as an integer, p/q, or decimal. Negative α needs --m.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Number of colours M for negative α.
    #[arg(long)]
    pub m: Option<u32>,
    /// Coupon-collector limit with M colours.
    #[arg(long, conflicts_with_all = ["alpha", "theta", "m"])]
    pub coupon: Option<u32>,
    /// Force float mode even for rational input.
    #[arg(long)]
    pub float: bool,
}

impl ParamArgs {
    fn literals(&self) -> Vec<&str> {
        self.alpha.iter().chain(&self.theta).map(String::as_str).collect()
    }

    fn build<S: Scalar>(&self) -> Result<ExtParams<S>> {
        if let Some(m) = self.coupon {
            return ExtParams::coupon(m);
        }
        let alpha = S::parse_literal(self.alpha.as_deref().unwrap_or("0"))?;
        match self.m {
            Some(m) => {
                if self.theta.is_some() {
                    return Err(Error::InvalidParams("--m fixes θ = M|α|; do not pass --theta".into()));
                }
                ExtParams::neg_alpha(alpha, m)
            }
            None => {
                let theta = self
                    .theta
                    .as_deref()
                    .ok_or_else(|| Error::InvalidParams("--theta is required (or --m / --coupon)".into()))?;
                ExtParams::two_param(alpha, S::parse_literal(theta)?)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Crp,
    Gem,
    Paintbox,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum, default_value = "crp")]
    pub model: Model,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Ground-set size (crp, paintbox).
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Stop stick-breaking once the unbroken mass is below this.
    #[arg(long, default_value_t = 1e-6)]
    pub eps: f64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EppfArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Block sizes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub lambda: Vec<usize>,
    /// Default prints the bare value.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Largest n.
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    /// Range of the compound Poisson subordinator with beta(1, θ) jumps.
    CompoundPoisson,
    /// Partial products of i.i.d. beta(1, θ) factors.
    StickBreaking,
    /// GEM(α, 0) sets grafted into beta(1, θ) pieces.
    Crossbreed,
    /// GEM(α, θ) frequencies laid out in ◁_ξ order.
    Arrangement,
}

#[derive(Debug, Args)]
pub struct RegenArgs {
    #[arg(long, value_enum, default_value = "stick-breaking")]
    pub construction: Construction,
    #[command(flatten)]
    pub params: ParamArgs,
    /// ξ for `arrangement`; defaults to θ/α.
    #[arg(long)]
    pub xi: Option<String>,
    #[arg(long, default_value_t = 1e-6)]
    pub eps: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OrderArgs {
    /// Size of the ordered set (◁_ξ mode).
    #[arg(long)]
    pub k: Option<usize>,
    /// ξ >= 0 or `inf`.
    #[arg(long, conflicts_with = "tau")]
    pub xi: Option<String>,
    /// τ in [0, 1]; with --x, draws perm_τ(x).
    #[arg(long)]
    pub tau: Option<String>,
    /// Positive weights for perm_τ, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub x: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Normalization,
    Addition,
    Deletion,
    TauRegen,
    Decrement,
    Leem,
    Records,
    Order,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    /// Weights for the leem and records suites, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub x: Option<Vec<String>>,
    #[arg(long)]
    pub tau: Option<String>,
    #[arg(long)]
    pub xi: Option<String>,
    /// Largest accepted deviation; 0 in exact mode, 1e-12 in float mode.
    #[arg(long)]
    pub tolerance: Option<String>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

enum CliError {
    Domain(Error),
    Io(io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Domain(e) => e.fmt(f),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn exact_mode(p: &ParamArgs, extra: &[&str]) -> bool {
    !p.float && !p.literals().iter().chain(extra).any(|t| is_decimal_literal(t))
}

fn execute(command: &Command, stdout: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Sample(a) => with_output(&a.output, stdout, |w| sample(a, w)),
        Command::Eppf(a) => with_output(&a.output, stdout, |w| {
            if exact_mode(&a.params, &[]) { eppf_cmd::<Rational>(a, w) } else { eppf_cmd::<f64>(a, w) }
        }),
        Command::Decrement(a) => with_output(&a.output, stdout, |w| {
            if exact_mode(&a.params, &[]) { decrement_cmd::<Rational>(a, w) } else { decrement_cmd::<f64>(a, w) }
        }),
        Command::Phi(a) => with_output(&a.output, stdout, |w| {
            if exact_mode(&a.params, &[]) { phi_cmd::<Rational>(a, w) } else { phi_cmd::<f64>(a, w) }
        }),
        Command::RegenSet(a) => with_output(&a.output, stdout, |w| regen_cmd(a, w)),
        Command::Order(a) => with_output(&a.output, stdout, |w| order_cmd(a, w)),
        Command::Verify(a) => {
            let mut extra: Vec<&str> = a.x.iter().flatten().map(String::as_str).collect();
            extra.extend(a.tau.as_deref());
            extra.extend(a.xi.as_deref().filter(|x| *x != "inf"));
            extra.extend(a.tolerance.as_deref());
            with_output(&a.output, stdout, |w| {
                if exact_mode(&a.params, &extra) { verify_cmd::<Rational>(a, w) } else { verify_cmd::<f64>(a, w) }
            })
        }
    }
}

fn with_output(
    path: &Option<PathBuf>,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> CliResult<i32>,
) -> CliResult<i32> {
    match path {
        Some(p) => {
            let mut file = BufWriter::new(File::create(p)?);
            let code = body(&mut file)?;
            file.flush()?;
            Ok(code)
        }
        None => {
            let code = body(stdout)?;
            stdout.flush()?;
            Ok(code)
        }
    }
}

fn sample(a: &SampleArgs, w: &mut dyn Write) -> CliResult<i32> {
    // sampling is float-based; exact parameters are converted once
    let params: ExtParams<f64> = if exact_mode(&a.params, &[]) {
        a.params.build::<Rational>()?.to_f64()
    } else {
        a.params.build::<f64>()?
    };
    params.validate()?;
    let root = RngHandle::new(a.seed);
    let (model, n, eps) = (a.model, a.n, a.eps);
    let lines = monte_carlo(&root, a.count, |rng| -> Result<Value> {
        match model {
            Model::Crp => Ok(crp_sample(&params, n, rng)?.to_json()),
            Model::Gem => Ok(gem_sample(&params, eps, rng)?.1.to_json()),
            Model::Paintbox => {
                let ranked = rank(&gem_sample(&params, eps, rng)?.1);
                Ok(paintbox_sample(Paintbox::Ranked(&ranked), n, rng).to_json())
            }
        }
    })?;
    for line in lines {
        writeln!(w, "{line}")?;
    }
    Ok(EXIT_OK)
}

fn eppf_cmd<S: Scalar>(a: &EppfArgs, w: &mut dyn Write) -> CliResult<i32> {
    let params = a.params.build::<S>()?;
    let lambda = Composition::new(a.lambda.clone())?;
    let value = eppf(&params, &lambda)?;
    match a.format {
        None => writeln!(w, "{}", value.render())?,
        Some(Format::Json) => writeln!(
            w,
            "{}",
            json!({ "params": params.to_json(), "lambda": a.lambda, "value": value.to_json() })
        )?,
        Some(Format::Csv) => {
            let mut out = csv::Writer::from_writer(w);
            out.write_record(["lambda", "value"])?;
            let joined: Vec<String> = a.lambda.iter().map(usize::to_string).collect();
            out.write_record([joined.join(" "), value.render()])?;
            out.flush()?;
        }
    }
    Ok(EXIT_OK)
}

fn decrement_cmd<S: Scalar>(a: &TableArgs, w: &mut dyn Write) -> CliResult<i32> {
    let params = a.params.build::<S>()?;
    let q = decrement_matrix(&params, a.n)?;
    match a.format {
        Format::Csv => {
            let mut out = csv::Writer::from_writer(w);
            let mut header = vec!["n".to_string()];
            header.extend((1..=a.n).map(|m| m.to_string()));
            out.write_record(&header)?;
            for (i, row) in q.rows().iter().enumerate() {
                let mut record = vec![(i + 1).to_string()];
                record.extend(row.iter().map(Scalar::render));
                record.resize(a.n + 1, String::new());
                out.write_record(&record)?;
            }
            out.flush()?;
        }
        Format::Json => {
            let rows: Vec<Value> = q.rows().iter().map(|r| Value::Array(r.iter().map(Scalar::to_json).collect())).collect();
            writeln!(w, "{}", json!({ "params": params.to_json(), "rows": rows }))?;
        }
    }
    Ok(EXIT_OK)
}

fn phi_cmd<S: Scalar>(a: &TableArgs, w: &mut dyn Write) -> CliResult<i32> {
    let params = a.params.build::<S>()?;
    let measure = LevyImageMeasure::from_params(&params)?;
    let mut rows = Vec::new();
    for n in 1..=a.n {
        rows.push((n, None, phi_n(&measure, n)?));
        for m in 1..=n {
            rows.push((n, Some(m), phi_nm(&measure, n, m)?));
        }
    }
    match a.format {
        Format::Csv => {
            let mut out = csv::Writer::from_writer(w);
            out.write_record(["n", "m", "reduced", "scale", "value"])?;
            for (n, m, v) in &rows {
                out.write_record([
                    n.to_string(),
                    m.map(|m| m.to_string()).unwrap_or_default(),
                    v.reduced.render(),
                    v.scale.render(),
                    v.to_f64().render(),
                ])?;
            }
            out.flush()?;
        }
        Format::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|(n, m, v)| json!({ "n": n, "m": m, "reduced": v.reduced.to_json(), "scale": v.scale, "value": v.to_f64() }))
                .collect();
            writeln!(w, "{}", json!({ "params": params.to_json(), "phi": items }))?;
        }
    }
    Ok(EXIT_OK)
}

fn float_params(p: &ParamArgs) -> Result<ExtParams<f64>> {
    if exact_mode(p, &[]) {
        Ok(p.build::<Rational>()?.to_f64())
    } else {
        p.build::<f64>()
    }
}

fn parse_xi(text: &str) -> Result<Xi<f64>> {
    match f64::parse_literal(text)? {
        x if x.is_infinite() => Ok(Xi::Infinite),
        x => Xi::finite(x),
    }
}

fn regen_cmd(a: &RegenArgs, w: &mut dyn Write) -> CliResult<i32> {
    let params = float_params(&a.params)?;
    let mut rng = RngHandle::new(a.seed);
    let theta = params.theta().ok_or_else(|| Error::InvalidParams("regenerative sets need (α, θ)".into()))?;
    let alpha = params.alpha().unwrap_or(0.0);
    let set = match a.construction {
        Construction::CompoundPoisson => compound_poisson_set(theta, a.eps, &mut rng)?,
        Construction::StickBreaking => stick_breaking_set(theta, a.eps, &mut rng)?,
        Construction::Crossbreed => crossbreed_set(alpha, theta, a.eps, &mut rng)?,
        Construction::Arrangement => {
            let xi = match &a.xi {
                Some(t) => parse_xi(t)?,
                None => params.xi()?,
            };
            let (_, freqs) = gem_sample(&params, a.eps, &mut rng)?;
            ordered_arrangement(&freqs, &xi, &mut rng)?
        }
    };
    match a.format {
        Format::Csv => {
            let mut out = csv::Writer::from_writer(w);
            out.write_record(["left", "right", "resolved"])?;
            let mut all: Vec<(f64, f64, bool)> = set.components().iter().map(|&(l, r)| (l, r, true)).collect();
            all.extend(set.unresolved().iter().map(|&(l, r)| (l, r, false)));
            all.sort_by(|x, y| x.0.total_cmp(&y.0));
            for (l, r, resolved) in all {
                out.write_record([l.render(), r.render(), resolved.to_string()])?;
            }
            out.flush()?;
        }
        Format::Json => {
            let pairs = |v: &[(f64, f64)]| -> Value { v.iter().map(|&(l, r)| json!([l, r])).collect() };
            writeln!(
                w,
                "{}",
                json!({ "components": pairs(set.components()), "unresolved": pairs(set.unresolved()) })
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn order_cmd(a: &OrderArgs, w: &mut dyn Write) -> CliResult<i32> {
    let root = RngHandle::new(a.seed);
    let lines: Vec<Vec<usize>> = match (&a.x, &a.k) {
        (Some(x), _) => {
            let tau = f64::parse_literal(
                a.tau.as_deref().ok_or_else(|| Error::InvalidParams("perm_τ needs --tau".into()))?,
            )?;
            monte_carlo(&root, a.count, |rng| tau_biased_perm(x, tau, rng))?
        }
        (None, Some(k)) => {
            let k = *k;
            let xi = match (&a.xi, &a.tau) {
                (Some(t), _) => parse_xi(t)?,
                (None, Some(t)) => Xi::from_tau(&f64::parse_literal(t)?)?,
                (None, None) => return Err(Error::InvalidParams("◁_ξ needs --xi or --tau".into()).into()),
            };
            monte_carlo(&root, a.count, |rng| Ok(xi_order(k, &xi, rng)?.arrangement()))?
        }
        (None, None) => return Err(Error::InvalidParams("pass --k (◁_ξ order) or --x (perm_τ)".into()).into()),
    };
    for line in lines {
        let one_based: Vec<usize> = line.iter().map(|i| i + 1).collect();
        writeln!(w, "{}", json!(one_based))?;
    }
    Ok(EXIT_OK)
}

struct Report<S> {
    check: &'static str,
    params: Value,
    n: usize,
    deviation: S,
}

fn verify_cmd<S: Scalar>(a: &VerifyArgs, w: &mut dyn Write) -> CliResult<i32> {
    let tolerance = match &a.tolerance {
        Some(t) => S::parse_literal(t)?,
        None if S::EXACT => S::zero(),
        None => S::from_f64(1e-12).expect("finite"),
    };
    let wants = |s: Suite| a.suite == s || a.suite == Suite::All;
    let needs_params = [Suite::Normalization, Suite::Addition, Suite::Deletion, Suite::TauRegen, Suite::Decrement];
    let params = if needs_params.iter().any(|&s| wants(s)) { Some(a.params.build::<S>()?) } else { None };
    let x: Option<Vec<S>> = a.x.as_ref().map(|v| v.iter().map(|t| S::parse_literal(t)).collect()).transpose()?;
    let mut reports = Vec::new();
    let mut push = |check, params: Value, n, deviation| reports.push(Report { check, params, n, deviation });

    if let Some(p) = &params {
        let pj = p.to_json();
        let all = a.suite == Suite::All;
        if wants(Suite::Normalization) {
            push("normalization", pj.clone(), a.n, (exact_law(p, a.n)?.total() - S::one()).abs_val());
        }
        if wants(Suite::Addition) {
            let mut worst = S::zero();
            for lambda in Composition::all_of(a.n) {
                let r = addition_residual(p, &lambda)?.abs_val();
                if r > worst {
                    worst = r;
                }
            }
            push("addition", pj.clone(), a.n, worst);
        }
        if wants(Suite::Deletion) {
            push("deletion", pj.clone(), a.n, deletion_law_check(p, a.n)?);
        }
        // under `all`, kernel-based suites are skipped outside α, θ >= 0
        let kernel_ok = p.nonnegative_pair().is_ok();
        if wants(Suite::TauRegen) && (kernel_ok || !all) {
            push("tau-regen", pj.clone(), a.n, tau_regen_check(p, a.n)?.max());
        }
        let measure_ok = LevyImageMeasure::from_params(p).and_then(|m| m.validate()).is_ok();
        if wants(Suite::Decrement) && ((kernel_ok && measure_ok) || !all) {
            let direct = decrement_matrix(p, a.n)?;
            let via_phi = decrement_from_phi(&LevyImageMeasure::from_params(p)?, a.n)?;
            let mut worst = S::zero();
            for (r1, r2) in direct.rows().iter().zip(via_phi.rows()) {
                for (u, v) in r1.iter().zip(r2) {
                    let d = (u.clone() - v.clone()).abs_val();
                    if d > worst {
                        worst = d;
                    }
                }
            }
            push("decrement", pj.clone(), a.n, worst);
        }
    }
    if wants(Suite::Leem) && (x.is_some() || a.suite == Suite::Leem) {
        let x = x.as_ref().ok_or_else(|| Error::InvalidParams("leem needs --x".into()))?;
        let tau = S::parse_literal(a.tau.as_deref().ok_or_else(|| Error::InvalidParams("leem needs --tau".into()))?)?;
        push("leem", json!({ "x": x.iter().map(Scalar::to_json).collect::<Vec<_>>(), "tau": tau.to_json() }), x.len(), leem_check(x, &tau)?);
    }
    if wants(Suite::Records) && (x.is_some() || a.suite == Suite::Records) {
        let x = x.as_ref().ok_or_else(|| Error::InvalidParams("records needs --x".into()))?;
        push(
            "records",
            json!({ "x": x.iter().map(Scalar::to_json).collect::<Vec<_>>() }),
            x.len(),
            record_independence_check(x)?.max(),
        );
    }
    if wants(Suite::Order) && (a.xi.is_some() || a.suite == Suite::Order) {
        let text = a.xi.as_deref().ok_or_else(|| Error::InvalidParams("order needs --xi".into()))?;
        let xi = if text.trim() == "inf" { Xi::Infinite } else { Xi::finite(S::parse_literal(text)?)? };
        let xj = match &xi {
            Xi::Infinite => json!("inf"),
            Xi::Finite(v) => v.to_json(),
        };
        push("order", json!({ "xi": xj }), a.n, order_probability_check(&xi, a.n)?.max());
    }
    if reports.is_empty() {
        return Err(Error::InvalidParams("no applicable checks for the given arguments".into()).into());
    }
    let mut all_pass = true;
    let entries: Vec<Value> = reports
        .into_iter()
        .map(|r| {
            let pass = r.deviation <= tolerance;
            all_pass &= pass;
            json!({ "check": r.check, "params": r.params, "n": r.n, "deviation": r.deviation.to_json(), "pass": pass })
        })
        .collect();
    writeln!(w, "{}", serde_json::to_string_pretty(&Value::Array(entries)).expect("json"))?;
    Ok(if all_pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
