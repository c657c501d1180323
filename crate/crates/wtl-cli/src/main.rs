//! `wtl` — reproducible experiments over the width/transfer/sampling
//! machinery: exact widths to CSV, transfer reports with explicit constants,
//! empirical sampling-recovery curves, tractability classification and the
//! randomized verification suites.
//!
//! Every output file starts with a `# key = value` comment header carrying
//! the fully resolved configuration (including the seed), so stripping the
//! `# ` prefixes yields a config file that reproduces the output
//! byte-for-byte. `WTL_THREADS` caps worker parallelism.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use wtl::io::{fmt_sci, model_space_from_kv, parse_kv, width_csv};
use wtl::model_spaces::{
    tensor_top_eigenvalues, widths_from_eigenvalues, ModelSpace, WidthKind,
};
use wtl::sampler::{curve_csv, e_n_empirical_curve, CurveOptions};
use wtl::tractability::{
    fit_profile_ln, uwt_diagnostic, ClassificationReport, ProfileFamily, TabRow,
};
use wtl::transfer::{
    calibrate_qpt_display_constant, corollary_main_bound, corollary_reduction_profile,
    qpt_reduction_profile, BoundConstants, ComplexityProfile, TransferReport,
};
use wtl::verify::{run_all, Fault, VerifyConfig};

#[derive(Parser)]
#[command(name = "wtl", version, about = "widths, transfer bounds and sampling recovery lab")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact Gelfand/linear widths of a model space, as CSV
    Widths(WidthsArgs),
    /// Transfer report: explicit constants and the bound table over an
    /// accuracy grid
    Transfer(TransferArgs),
    /// Empirical sampling-recovery error curve for weighted least squares
    Sample(SampleArgs),
    /// Tractability classification and weak-notion diagnostics
    Classify(ClassifyArgs),
    /// Run the verification suites (bounds vs oracles, chain identities)
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct Common {
    /// Key-value config file supplying defaults for any long flag
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// PRNG seed
    #[arg(long)]
    seed: Option<u64>,
    /// Universal index-inflation constant of the sampling-width inequality
    #[arg(long)]
    b: Option<u64>,
    /// Tail exponent of the sampling-width inequality, in (0, 2)
    #[arg(long)]
    r: Option<f64>,
    /// Absolute constant of the weak-tractability transfer
    #[arg(long = "D")]
    big_d: Option<f64>,
}

#[derive(Args)]
struct WidthsArgs {
    #[command(flatten)]
    common: Common,
    /// geometric | stretched-exponential | explicit
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    /// Comma list of eigenvalues for the explicit family
    #[arg(long)]
    values: Option<String>,
    #[arg(long)]
    d: Option<usize>,
    /// Number of widths to emit
    #[arg(long)]
    count: Option<usize>,
}

#[derive(Args)]
struct TransferArgs {
    #[command(flatten)]
    common: Common,
    /// Profile scale (direct route)
    #[arg(long = "A")]
    big_a: Option<f64>,
    /// Profile exponent (direct route)
    #[arg(long = "B")]
    big_b: Option<f64>,
    /// Family constant (polynomial or quasi-polynomial route)
    #[arg(long)]
    c: Option<f64>,
    /// Poly-log exponent p (polynomial route: A = c d^q + 1, B = p)
    #[arg(long)]
    p: Option<f64>,
    /// Dimension degree q (polynomial route)
    #[arg(long)]
    q: Option<f64>,
    /// Quasi-polynomial exponent t (route: A = c e^t d^t, B = t (1 + ln d))
    #[arg(long)]
    t: Option<f64>,
    /// Dimension for the family routes
    #[arg(long)]
    d: Option<u64>,
    /// Accuracy grid: `e^-1..e^-5` or `e^-1,e^-3,e^-9`
    #[arg(long = "eps-grid")]
    eps_grid: Option<String>,
    /// Display-form constant for the quasi-polynomial route (grid-calibrated
    /// when omitted)
    #[arg(long = "display-C")]
    display_c: Option<f64>,
    /// CSV mirror of the bound table
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    values: Option<String>,
    #[arg(long)]
    d: Option<usize>,
    /// Comma list of sample counts, increasing
    #[arg(long = "n-grid")]
    n_grid: Option<String>,
    /// Fixed basis size (overrides the oversampling rule)
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    /// Oversampling factor in n = ceil(factor * m * ln(m+1))
    #[arg(long)]
    oversample: Option<f64>,
    /// Truncation factor M = factor * m for the exact error evaluation
    #[arg(long = "trunc-factor")]
    trunc_factor: Option<usize>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    common: Common,
    /// constant | poly | quasi-poly
    #[arg(long)]
    form: Option<String>,
    #[arg(long = "A")]
    big_a: Option<f64>,
    #[arg(long = "B")]
    big_b: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    /// CSV of (d, epsilon, n) observations; epsilon accepts `e^-k`
    #[arg(long)]
    data: Option<PathBuf>,
    /// Run the uniform-weak limit diagnostic
    #[arg(long)]
    uwt: bool,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Tuples per randomized suite (power-exp suite uses 5x)
    #[arg(long)]
    samples: Option<usize>,
    /// Self-test hook: lower every bound by 10% and expect failures
    #[arg(long = "inject-fault")]
    inject_fault: bool,
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("WTL_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Widths(args) => cmd_widths(args),
        Cmd::Transfer(args) => cmd_transfer(args),
        Cmd::Sample(args) => cmd_sample(args),
        Cmd::Classify(args) => cmd_classify(args),
        Cmd::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

/// Flag-over-config-over-default resolution against the key-value file.
struct Resolver {
    cfg: BTreeMap<String, String>,
    resolved: BTreeMap<String, String>,
}

impl Resolver {
    fn new(common: &Common) -> Result<Self> {
        let cfg = match &common.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                parse_kv(&text)?
            }
            None => BTreeMap::new(),
        };
        Ok(Self {
            cfg,
            resolved: BTreeMap::new(),
        })
    }

    fn get<T: FromStr + ToString + Clone>(
        &mut self,
        key: &str,
        flag: Option<T>,
    ) -> Result<Option<T>> {
        let value = match flag {
            Some(v) => Some(v),
            None => match self.cfg.get(key) {
                Some(raw) => Some(
                    raw.parse::<T>()
                        .map_err(|_| anyhow!("config key `{key}`: cannot parse `{raw}`"))?,
                ),
                None => None,
            },
        };
        if let Some(v) = &value {
            self.resolved.insert(key.to_string(), v.to_string());
        }
        Ok(value)
    }

    fn require<T: FromStr + ToString + Clone>(&mut self, key: &str, flag: Option<T>) -> Result<T> {
        self.get(key, flag)?
            .ok_or_else(|| anyhow!("missing required parameter `{key}` (flag or config)"))
    }

    fn get_or<T: FromStr + ToString + Clone>(
        &mut self,
        key: &str,
        flag: Option<T>,
        default: T,
    ) -> Result<T> {
        let v = self.get(key, flag)?.unwrap_or(default);
        self.resolved.insert(key.to_string(), v.to_string());
        Ok(v)
    }

    fn note(&mut self, key: &str, value: impl ToString) {
        self.resolved.insert(key.to_string(), value.to_string());
    }

    fn constants(&mut self, common: &Common) -> Result<BoundConstants<f64>> {
        let b = self.get_or("b", common.b, 1)?;
        let r = self.get_or("r", common.r, 1.0)?;
        let big_d = self.get_or("D", common.big_d, 1.0)?;
        let consts = BoundConstants::new(b, r, big_d)?;
        self.note(
            "idealized",
            if consts.is_idealized() { "true" } else { "false" },
        );
        Ok(consts)
    }

    fn header(&self, command: &str) -> String {
        let mut out = format!("# wtl {command}\n");
        for (k, v) in &self.resolved {
            let _ = writeln!(out, "# {k} = {v}");
        }
        out
    }
}

fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            let tmp = path.with_extension("tmp.partial");
            fs::write(&tmp, content).with_context(|| format!("writing {}", tmp.display()))?;
            fs::rename(&tmp, path).with_context(|| format!("renaming to {}", path.display()))?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn resolve_space(
    res: &mut Resolver,
    family: Option<String>,
    omega: Option<f64>,
    c: Option<f64>,
    kappa: Option<f64>,
    values: Option<String>,
    d: Option<usize>,
    count: usize,
) -> Result<(ModelSpace<f64>, usize)> {
    let family = res.require("family", family)?;
    let d = res.get_or("d", d, 1)?;
    let mut kv: BTreeMap<String, String> = BTreeMap::new();
    kv.insert("family".into(), family.clone());
    kv.insert("d".into(), d.to_string());
    kv.insert("count".into(), count.to_string());
    match family.as_str() {
        "geometric" => {
            let omega = res.require("omega", omega)?;
            kv.insert("omega".into(), omega.to_string());
        }
        "stretched-exponential" => {
            let c = res.require("c", c)?;
            let kappa = res.require("kappa", kappa)?;
            kv.insert("c".into(), c.to_string());
            kv.insert("kappa".into(), kappa.to_string());
        }
        "explicit" => {
            let values = res.require("values", values)?;
            kv.insert("values".into(), values);
        }
        other => bail!("unknown family `{other}`"),
    }
    Ok(model_space_from_kv::<f64>(&kv)?)
}

fn cmd_widths(args: WidthsArgs) -> Result<ExitCode> {
    let mut res = Resolver::new(&args.common)?;
    let count = res.require("count", args.count)?;
    let (space, count) = resolve_space(
        &mut res,
        args.family,
        args.omega,
        args.c,
        args.kappa,
        args.values,
        args.d,
        count,
    )?;
    let eigs = tensor_top_eigenvalues(&space, count)?;
    let widths = widths_from_eigenvalues(&eigs, WidthKind::Gelfand)?;
    let mut doc = res.header("widths");
    doc.push_str(&width_csv(&widths));
    emit(args.common.out.as_deref(), &doc)?;
    Ok(ExitCode::SUCCESS)
}

/// Parse `e^-1..e^-5` or `e^-1,e^-4,e^-9` into exponent values k.
fn parse_eps_grid(spec: &str) -> Result<Vec<u32>> {
    let token = |s: &str| -> Result<u32> {
        let rest = s
            .trim()
            .strip_prefix("e^-")
            .ok_or_else(|| anyhow!("accuracy token `{s}` must look like e^-K"))?;
        rest.parse::<u32>()
            .map_err(|_| anyhow!("accuracy token `{s}`: bad exponent"))
    };
    if let Some((lo, hi)) = spec.split_once("..") {
        let (lo, hi) = (token(lo)?, token(hi)?);
        if hi < lo {
            bail!("eps grid range must be increasing in the exponent");
        }
        Ok((lo..=hi).collect())
    } else {
        spec.split(',').map(token).collect()
    }
}

fn cmd_transfer(args: TransferArgs) -> Result<ExitCode> {
    let mut res = Resolver::new(&args.common)?;
    let consts = res.constants(&args.common)?;
    let grid_spec = res.get_or("eps-grid", args.eps_grid.clone(), "e^-1..e^-10".to_string())?;
    let ks = parse_eps_grid(&grid_spec)?;
    let ln_grid: Vec<f64> = ks.iter().map(|&k| k as f64).collect();

    let big_a = res.get("A", args.big_a)?;
    let big_b = res.get("B", args.big_b)?;
    let c = res.get("c", args.c)?;
    let p = res.get("p", args.p)?;
    let q = res.get("q", args.q)?;
    let t = res.get("t", args.t)?;

    let profile: ComplexityProfile<f64> = match (big_a, big_b, c, p, t) {
        (Some(a), Some(b), None, None, None) => {
            res.note("route", "profile");
            ComplexityProfile::new(a, b)?
        }
        (None, None, Some(c), Some(p), None) => {
            let q = res.get_or("q", q, 0.0)?;
            let d = res.require("d", args.d)?;
            res.note("route", "polynomial-family");
            let profile = corollary_reduction_profile(c, p, q, d)?;
            let sample = corollary_main_bound(c, p, q, &consts, d, (-1.0f64).exp())?;
            res.note("display_constant", fmt_sci(sample.display_constant));
            profile
        }
        (None, None, Some(c), None, Some(t)) => {
            let d = res.require("d", args.d)?;
            res.note("route", "quasi-polynomial-family");
            let profile = qpt_reduction_profile(c, t, d)?;
            let display_c = match res.get("display-C", args.display_c)? {
                Some(v) => v,
                None => {
                    let calib: Vec<(u64, f64)> = (1..=10u32)
                        .map(|j| (1u64 << j, (1u64 << j) as f64))
                        .filter(|&(dd, _)| dd as f64 > wtl::transfer::qpt_validity_threshold(c, t).unwrap_or(f64::INFINITY))
                        .collect();
                    calibrate_qpt_display_constant(c, t, &consts, &calib)?
                }
            };
            res.note("display_C", fmt_sci(display_c));
            profile
        }
        _ => bail!(
            "supply either --A/--B, or --c/--p[/--q] with --d, or --c/--t with --d (flags or config)"
        ),
    };
    res.note("effective_A", fmt_sci(profile.a()));
    res.note("effective_B", fmt_sci(profile.b()));

    let report = TransferReport::new(profile, consts, &ln_grid)?;
    let mut doc = res.header("transfer");
    doc.push_str(&report.to_json());
    emit(args.common.out.as_deref(), &doc)?;
    if let Some(csv_path) = &args.csv {
        let mut csv_doc = res.header("transfer (bound table)");
        csv_doc.push_str(&report.table_csv());
        emit(Some(csv_path), &csv_doc)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_sample(args: SampleArgs) -> Result<ExitCode> {
    let mut res = Resolver::new(&args.common)?;
    let consts = res.constants(&args.common)?;
    let seed = res.get_or("seed", args.common.seed, 0)?;
    let trials = res.get_or("trials", args.trials, 5)?;
    let oversample = res.get_or("oversample", args.oversample, 2.0)?;
    let trunc_factor = res.get_or("trunc-factor", args.trunc_factor, 4)?;
    let n_grid_spec = res.require("n-grid", args.n_grid)?;
    let n_grid: Vec<usize> = n_grid_spec
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| anyhow!("bad sample count `{s}` in n-grid"))
        })
        .collect::<Result<_>>()?;
    let m_override = res.get("m", args.m)?;
    // the curve enumerates its own spectra; count is a placeholder
    let (space, _) = resolve_space(
        &mut res,
        args.family,
        args.omega,
        args.c,
        args.kappa,
        args.values,
        args.d,
        1,
    )?;

    let opts = CurveOptions {
        oversample_factor: oversample,
        m_override,
        trunc_factor,
        consts,
    };
    let rows = e_n_empirical_curve(&space, &n_grid, trials, seed, &opts)?;
    let mut doc = res.header("sample");
    doc.push_str(&curve_csv(&rows));
    emit(args.common.out.as_deref(), &doc)?;
    Ok(ExitCode::SUCCESS)
}

/// Parse a `d,epsilon,n` observation file; epsilon accepts `e^-k` tokens.
fn parse_observations(path: &Path) -> Result<Vec<(u64, f64, f64)>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading data {}", path.display()))?;
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if lineno == 0 && line.starts_with('d') {
            continue; // header row
        }
        let parts: Vec<&str> = line.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            bail!("line {}: expected `d,epsilon,n`", lineno + 1);
        }
        let d: u64 = parts[0]
            .parse()
            .map_err(|_| anyhow!("line {}: bad d `{}`", lineno + 1, parts[0]))?;
        let ln_inv: f64 = if let Some(k) = parts[1].strip_prefix("e^-") {
            k.parse::<f64>()
                .map_err(|_| anyhow!("line {}: bad epsilon `{}`", lineno + 1, parts[1]))?
        } else {
            let eps: f64 = parts[1]
                .parse()
                .map_err(|_| anyhow!("line {}: bad epsilon `{}`", lineno + 1, parts[1]))?;
            if !(eps > 0.0 && eps < 1.0) {
                bail!("line {}: epsilon must lie in (0, 1)", lineno + 1);
            }
            -eps.ln()
        };
        let n: f64 = parts[2]
            .parse()
            .map_err(|_| anyhow!("line {}: bad n `{}`", lineno + 1, parts[2]))?;
        out.push((d, ln_inv, n));
    }
    Ok(out)
}

fn cmd_classify(args: ClassifyArgs) -> Result<ExitCode> {
    let mut res = Resolver::new(&args.common)?;
    let form = res.get("form", args.form)?;
    let family: ProfileFamily<f64> = if let Some(data) = &args.data {
        res.note("data", data.display());
        let observations = parse_observations(data)?;
        let mut by_d: BTreeMap<u64, Vec<(f64, f64)>> = BTreeMap::new();
        for (d, ln_inv, n) in observations {
            by_d.entry(d).or_default().push((ln_inv, n));
        }
        let mut rows = Vec::new();
        for (d, points) in by_d {
            let fit = fit_profile_ln(&points)
                .map_err(|e| anyhow!("fitting dimension d = {d}: {e}"))?;
            rows.push(TabRow {
                d,
                a: fit.profile.a(),
                b: fit.profile.b(),
            });
        }
        ProfileFamily::Tabulated(rows)
    } else {
        match form.as_deref() {
            Some("constant") => ProfileFamily::Constant {
                c: res.require("A", args.big_a)?,
                p: res.require("B", args.big_b)?,
            },
            Some("poly") => ProfileFamily::Polynomial {
                c: res.require("c", args.c)?,
                q: res.require("q", args.q)?,
                p: res.require("p", args.p)?,
            },
            Some("quasi-poly") => ProfileFamily::QuasiPoly {
                c: res.require("c", args.c)?,
                t: res.require("t", args.t)?,
            },
            Some(other) => bail!("unknown form `{other}` (constant | poly | quasi-poly)"),
            None => bail!("supply --form with parameters, or --data"),
        }
    };

    let mut report = ClassificationReport::build(&family)?;
    if args.uwt {
        let alpha = res.get_or("alpha", args.alpha, 0.5)?;
        let beta = res.get_or("beta", args.beta, 0.5)?;
        match &family {
            ProfileFamily::Tabulated(_) => {
                report
                    .notes
                    .push("uwt diagnostic skipped: tabulated families have no off-table bound".into());
            }
            declared => {
                let grid: Vec<(u64, f64)> = (1..=10u32)
                    .map(|j| (1u64 << j, (1u64 << j) as f64))
                    .collect();
                let bound = |d: u64, l: f64| declared.bound(d, l).unwrap_or(f64::NAN);
                let diag = uwt_diagnostic(&bound, alpha, beta, &grid)?;
                report
                    .diagnostics
                    .push((format!("alpha={alpha}, beta={beta}"), diag));
            }
        }
    }
    let mut doc = res.header("classify");
    doc.push_str(&report.to_json());
    emit(args.common.out.as_deref(), &doc)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let mut res = Resolver::new(&args.common)?;
    let seed = res.get_or("seed", args.common.seed, 0)?;
    let samples = res.get_or("samples", args.samples, 200)?;
    res.note("inject-fault", args.inject_fault);
    let cfg = VerifyConfig {
        samples_tail: samples,
        samples_gamma: samples,
        samples_power: samples * 5,
        seed,
        fault: if args.inject_fault {
            Fault::LowerBounds
        } else {
            Fault::None
        },
    };
    let suites = run_all::<f64>(&cfg)?;

    let mut doc = res.header("verify");
    let _ = writeln!(
        doc,
        "{:<26} {:>8} {:>11} {:>9}  status",
        "suite", "checked", "violations", "ms"
    );
    let mut all_pass = true;
    for suite in &suites {
        let status = if suite.passed() { "PASS" } else { "FAIL" };
        all_pass &= suite.passed();
        let _ = writeln!(
            doc,
            "{:<26} {:>8} {:>11} {:>9}  {status}",
            suite.name,
            suite.checked,
            suite.violations.len(),
            suite.elapsed_ms
        );
    }
    for suite in &suites {
        for violation in suite.violations.iter().take(3) {
            let _ = writeln!(doc, "counterexample [{}]: {violation}", suite.name);
        }
    }
    let _ = writeln!(doc, "overall: {}", if all_pass { "PASS" } else { "FAIL" });
    emit(args.common.out.as_deref(), &doc)?;
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
