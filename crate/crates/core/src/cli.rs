//! Command-line front end. Every subcommand resolves a [`RunConfig`] from
//! flags layered over an optional `key = value` file, then writes CSV tables,
//! JSON summaries and two-column plot text into the output directory.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::parse_kv;
use crate::error::{Error, Result};
use crate::jackson::{lemma51_constant, make_jackson, moment, multipliers};
use crate::kernels::{dyadic_t_grid, example_kernel, fit_hoelder, hoelder_modulus, ZonalKernelSpec, DEFAULT_U_GRID};
use crate::operators::{approx_numbers, decay_fit, operator_from_kernel, sqrt_op};
use crate::quadrature::QuadratureRule;
use crate::spaces::{space_params, Family, SpaceParams};
use crate::verify;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "jackson-approx", version, about = "Jackson kernels and approximation numbers on two-point homogeneous spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Moments,
    Multipliers,
    Kernel,
    Hoelder,
    Approx,
    Verify,
    Report,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Jackson moments J(mu) against the constant c_{m,gamma,l}.
    Moments(Flags),
    /// Multiplier sequences m_nu(n) for mu in [mu-min, mu-max].
    Multipliers(Flags),
    /// Writes a kernel spec file and its coefficient table.
    Kernel(Flags),
    /// Hoelder modulus of a kernel on the dyadic grid, with (beta_hat, B_hat).
    Hoelder(Flags),
    /// Approximation numbers of sqrt(K) with a decay fit.
    Approx(Flags),
    /// Runs the acceptance suite.
    Verify(Flags),
    /// Runs moments, multipliers, hoelder, approx and verify into one directory.
    Report(Flags),
}

#[derive(Args, Debug, Default, Clone)]
pub struct Flags {
    /// key = value file; flags given on the command line take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub l: Option<u32>,
    #[arg(long)]
    pub mu_min: Option<u32>,
    #[arg(long)]
    pub mu_max: Option<u32>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Highest degree (multipliers, kernel truncation) or index (approx).
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Chebyshev grid size over evaluation points (hoelder).
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Kernel spec file, or `constant` for K = 1. Defaults to the example kernel.
    #[arg(long)]
    pub kernel: Option<String>,
}

/// Fully resolved and validated parameters of one run.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub family: Family,
    pub m: u32,
    pub beta: f64,
    pub l: u32,
    pub mu_min: u32,
    pub mu_max: u32,
    pub gamma: f64,
    pub n_max: usize,
    pub grid: usize,
    /// Not part of the digest: results do not depend on where they are written.
    #[serde(skip)]
    pub out: PathBuf,
    pub seed: u64,
    pub kernel: Option<String>,
}

impl CommandKind {
    fn name(self) -> &'static str {
        match self {
            CommandKind::Moments => "moments",
            CommandKind::Multipliers => "multipliers",
            CommandKind::Kernel => "kernel",
            CommandKind::Hoelder => "hoelder",
            CommandKind::Approx => "approx",
            CommandKind::Verify => "verify",
            CommandKind::Report => "report",
        }
    }

    /// Per-command defaults: the S^2 moment sweep for moments and
    /// multipliers, the m = 3 example kernel for the kernel commands.
    fn defaults(self) -> BTreeMap<&'static str, String> {
        let kernel_cmd = matches!(self, CommandKind::Kernel | CommandKind::Hoelder | CommandKind::Approx);
        let (m, l, n_max) = match self {
            CommandKind::Multipliers => ("2", "2", "30"),
            CommandKind::Approx => ("3", "2", "5000"),
            _ if kernel_cmd => ("3", "2", "400"),
            _ => ("2", "2", "64"),
        };
        let (mu_min, mu_max) = if self == CommandKind::Multipliers { ("6", "6") } else { ("2", "64") };
        BTreeMap::from([
            ("family", "sphere".to_string()),
            ("m", m.to_string()),
            ("beta", "0.5".to_string()),
            ("l", l.to_string()),
            ("mu_min", mu_min.to_string()),
            ("mu_max", mu_max.to_string()),
            ("gamma", "1".to_string()),
            ("n_max", n_max.to_string()),
            ("grid", DEFAULT_U_GRID.to_string()),
            ("out", ".".to_string()),
            ("seed", "20240611".to_string()),
        ])
    }
}

impl Command {
    pub fn split(&self) -> (CommandKind, &Flags) {
        match self {
            Command::Moments(f) => (CommandKind::Moments, f),
            Command::Multipliers(f) => (CommandKind::Multipliers, f),
            Command::Kernel(f) => (CommandKind::Kernel, f),
            Command::Hoelder(f) => (CommandKind::Hoelder, f),
            Command::Approx(f) => (CommandKind::Approx, f),
            Command::Verify(f) => (CommandKind::Verify, f),
            Command::Report(f) => (CommandKind::Report, f),
        }
    }
}

fn parse<T: std::str::FromStr>(kv: &BTreeMap<String, String>, key: &str) -> Result<T> {
    let v = &kv[key];
    v.parse().map_err(|_| Error::Parse(format!("bad value '{v}' for '{key}'")))
}

const KNOWN_KEYS: [&str; 12] = [
    "family", "m", "beta", "l", "mu_min", "mu_max", "gamma", "n_max", "grid", "out", "seed", "kernel",
];

/// Defaults, then the config file, then flags.
pub fn resolve(kind: CommandKind, flags: &Flags) -> Result<RunConfig> {
    let mut kv: BTreeMap<String, String> = kind.defaults().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    if let Some(path) = &flags.config {
        let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        for (k, v) in parse_kv(&text)? {
            if !KNOWN_KEYS.contains(&k.as_str()) {
                return Err(Error::Parse(format!("unknown config key '{k}'")));
            }
            kv.insert(k, v);
        }
    }
    let mut set = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            kv.insert(k.to_string(), v);
        }
    };
    set("family", flags.family.clone());
    set("m", flags.m.map(|v| v.to_string()));
    set("beta", flags.beta.map(|v| v.to_string()));
    set("l", flags.l.map(|v| v.to_string()));
    set("mu_min", flags.mu_min.map(|v| v.to_string()));
    set("mu_max", flags.mu_max.map(|v| v.to_string()));
    set("gamma", flags.gamma.map(|v| v.to_string()));
    set("n_max", flags.n_max.map(|v| v.to_string()));
    set("grid", flags.grid.map(|v| v.to_string()));
    set("out", flags.out.as_ref().map(|v| v.display().to_string()));
    set("seed", flags.seed.map(|v| v.to_string()));
    set("kernel", flags.kernel.clone());

    let cfg = RunConfig {
        command: kind.name(),
        family: parse(&kv, "family")?,
        m: parse(&kv, "m")?,
        beta: parse(&kv, "beta")?,
        l: parse(&kv, "l")?,
        mu_min: parse(&kv, "mu_min")?,
        mu_max: parse(&kv, "mu_max")?,
        gamma: parse(&kv, "gamma")?,
        n_max: parse(&kv, "n_max")?,
        grid: parse(&kv, "grid")?,
        out: PathBuf::from(&kv["out"]),
        seed: parse(&kv, "seed")?,
        kernel: kv.get("kernel").cloned(),
    };
    validate(kind, &cfg)?;
    Ok(cfg)
}

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

fn validate(kind: CommandKind, c: &RunConfig) -> Result<()> {
    space_params(c.family, c.m)?;
    if c.l < 1 {
        return invalid("l must be >= 1");
    }
    if c.mu_min < 1 || c.mu_max < c.mu_min {
        return invalid(format!("need 1 <= mu-min <= mu-max, got {}..{}", c.mu_min, c.mu_max));
    }
    if !(c.beta > 0.0 && c.beta <= 1.0) {
        return invalid(format!("beta must lie in (0, 1], got {}", c.beta));
    }
    if c.grid < 1 {
        return invalid("grid must be >= 1");
    }
    match kind {
        CommandKind::Moments => {
            if !(c.gamma > 0.0) {
                return invalid(format!("gamma must be > 0, got {}", c.gamma));
            }
            if !(2.0 * c.l as f64 > c.gamma + c.m as f64) {
                return invalid(format!(
                    "moments need 2l > gamma + m, got 2*{} <= {} + {}",
                    c.l, c.gamma, c.m
                ));
            }
        }
        CommandKind::Approx if c.n_max < 1 => return invalid("n-max must be >= 1"),
        _ => {}
    }
    Ok(())
}

/// First 16 hex digits of the SHA-256 of the resolved configuration.
pub fn config_digest(cfg: &RunConfig) -> String {
    let json = serde_json::to_string(cfg).expect("config serializes");
    let hash = Sha256::digest(json.as_bytes());
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

struct Output<'a> {
    dir: &'a Path,
    digest: String,
    written: Vec<PathBuf>,
}

impl<'a> Output<'a> {
    fn new(cfg: &'a RunConfig) -> Result<Self> {
        fs::create_dir_all(&cfg.out).map_err(io_err)?;
        Ok(Output {
            dir: &cfg.out,
            digest: config_digest(cfg),
            written: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, body: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, body).map_err(io_err)?;
        self.written.push(path);
        Ok(())
    }

    fn csv<R: AsRef<[String]>>(&mut self, name: &str, header: &[&str], rows: &[R]) -> Result<()> {
        let mut buf = format!("# config-digest: {}\n", self.digest).into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(header).map_err(csv_err)?;
            for r in rows {
                w.write_record(r.as_ref()).map_err(csv_err)?;
            }
            w.flush().map_err(io_err)?;
        }
        self.write(name, &String::from_utf8(buf).expect("csv output is utf-8"))
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut v = serde_json::to_value(value).map_err(|e| Error::Internal(e.to_string()))?;
        if let serde_json::Value::Object(map) = &mut v {
            map.insert("config_digest".into(), serde_json::Value::String(self.digest.clone()));
        }
        let text = serde_json::to_string_pretty(&v).map_err(|e| Error::Internal(e.to_string()))?;
        self.write(name, &(text + "\n"))
    }

    fn plot(&mut self, name: &str, cols: (&str, &str), points: &[(f64, f64)]) -> Result<()> {
        let mut s = format!("# config-digest: {}\n# {} {}\n", self.digest, cols.0, cols.1);
        for (x, y) in points {
            let _ = writeln!(s, "{x:e} {y:e}");
        }
        self.write(name, &s)
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Internal(format!("i/o: {e}"))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Internal(format!("csv: {e}"))
}

fn f(x: f64) -> String {
    format!("{x:e}")
}

fn space_of(cfg: &RunConfig) -> Result<SpaceParams> {
    space_params(cfg.family, cfg.m)
}

fn load_kernel(cfg: &RunConfig) -> Result<ZonalKernelSpec> {
    match cfg.kernel.as_deref() {
        Some("constant") => Ok(ZonalKernelSpec::constant(space_of(cfg)?)),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
            ZonalKernelSpec::from_kv_str(&text)
        }
        None => {
            if cfg.family != Family::Sphere {
                return invalid("the example kernel is defined on spheres; pass --kernel for other families");
            }
            example_kernel(cfg.m, cfg.beta, cfg.n_max.max(1))
        }
    }
}

#[derive(Serialize)]
struct MomentsSummary {
    m: u32,
    l: u32,
    gamma: f64,
    constant: f64,
    max_scaled: f64,
    bound_holds: bool,
    slope: Option<f64>,
}

fn cmd_moments(cfg: &RunConfig) -> Result<i32> {
    let space = space_of(cfg)?;
    let c = lemma51_constant(cfg.m, cfg.gamma, cfg.l)?;
    let mut rows = Vec::new();
    let mut points = Vec::new();
    let mut max_scaled: f64 = 0.0;
    for mu in cfg.mu_min..=cfg.mu_max {
        let rule = QuadratureRule::for_jackson(mu as usize, cfg.l as usize, 0);
        let jp = make_jackson(&space, cfg.l, mu, &rule)?;
        let j = moment(&jp, cfg.gamma, &rule)?;
        let scaled = j * (mu as f64).powf(cfg.gamma);
        max_scaled = max_scaled.max(scaled);
        rows.push(vec![mu.to_string(), f(j), f(scaled), f(c)]);
        points.push((mu as f64, j));
    }
    let fit_pts: Vec<_> = points.iter().filter(|(mu, _)| *mu >= 4.0).collect();
    let slope = (fit_pts.len() >= 2).then(|| {
        let (x, y): (Vec<f64>, Vec<f64>) = fit_pts.iter().map(|(mu, j)| (mu.ln(), j.ln())).unzip();
        crate::fit::least_squares(&x, &y).slope
    });
    let holds = max_scaled <= c;
    let mut out = Output::new(cfg)?;
    out.csv("moments.csv", &["mu", "J", "J_mu_gamma", "c_constant"], &rows)?;
    out.plot("moments_plot.txt", ("mu", "J"), &points)?;
    out.json(
        "moments.json",
        &MomentsSummary {
            m: cfg.m,
            l: cfg.l,
            gamma: cfg.gamma,
            constant: c,
            max_scaled,
            bound_holds: holds,
            slope,
        },
    )?;
    println!("moments: max J*mu^gamma = {max_scaled:.6} vs c = {c:.6}: {}", if holds { "holds" } else { "VIOLATED" });
    Ok(if holds { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_multipliers(cfg: &RunConfig) -> Result<i32> {
    let space = space_of(cfg)?;
    let mut rows = Vec::new();
    let mut points = Vec::new();
    for mu in cfg.mu_min..=cfg.mu_max {
        let rule = QuadratureRule::for_jackson(mu as usize, cfg.l as usize, cfg.n_max);
        let jp = make_jackson(&space, cfg.l, mu, &rule)?;
        let ms = multipliers(&jp, cfg.n_max, &rule)?;
        for (n, v) in ms.values.iter().enumerate() {
            rows.push(vec![mu.to_string(), jp.nu.to_string(), n.to_string(), f(*v)]);
            if mu == cfg.mu_min {
                points.push((n as f64, *v));
            }
        }
    }
    let mut out = Output::new(cfg)?;
    out.csv("multipliers.csv", &["mu", "nu", "n", "multiplier"], &rows)?;
    out.plot("multipliers_plot.txt", ("n", "multiplier"), &points)?;
    println!("multipliers: {} rows", rows.len());
    Ok(EXIT_PASS)
}

fn cmd_kernel(cfg: &RunConfig) -> Result<i32> {
    let spec = load_kernel(cfg)?;
    let mut out = Output::new(cfg)?;
    out.write("kernel.kv", &format!("# config-digest: {}\n{}", out.digest, spec.to_kv_string()))?;
    let mult = operator_from_kernel(&spec);
    let rows: Vec<Vec<String>> = mult
        .entries
        .iter()
        .map(|e| vec![e.degree.to_string(), f(e.value), e.multiplicity.to_string()])
        .collect();
    out.csv("kernel_coeffs.csv", &["n", "lambda", "multiplicity"], &rows)?;
    println!(
        "kernel: {} coefficients on {} m={}, tail bound {:e}",
        spec.coeffs.len(),
        spec.space.family,
        spec.space.m,
        spec.tail_bound()
    );
    Ok(EXIT_PASS)
}

#[derive(Serialize)]
struct HoelderSummary {
    n_trunc: usize,
    tail_bound: f64,
    u_grid: usize,
    beta_hat: f64,
    b_hat: f64,
    beta: f64,
    max_ratio: f64,
}

fn cmd_hoelder(cfg: &RunConfig) -> Result<i32> {
    let spec = load_kernel(cfg)?;
    let t_grid = dyadic_t_grid(10, false);
    let omega = t_grid
        .iter()
        .map(|&t| hoelder_modulus(&spec, t, cfg.grid))
        .collect::<Result<Vec<_>>>()?;
    let est = fit_hoelder(&t_grid, &omega)?;
    let beta = spec.beta.unwrap_or(cfg.beta);
    let rows: Vec<Vec<String>> = t_grid
        .iter()
        .zip(&omega)
        .map(|(t, w)| vec![f(*t), f(*w), f(w / t.powf(beta))])
        .collect();
    let ratio = est.max_ratio(beta);
    let mut out = Output::new(cfg)?;
    out.csv("hoelder.csv", &["t", "omega", "omega_over_t_beta"], &rows)?;
    let pts: Vec<_> = t_grid.iter().copied().zip(omega.iter().copied()).collect();
    out.plot("hoelder_plot.txt", ("t", "omega"), &pts)?;
    out.json(
        "hoelder.json",
        &HoelderSummary {
            n_trunc: spec.n_trunc(),
            tail_bound: spec.tail_bound(),
            u_grid: cfg.grid,
            beta_hat: est.beta_hat,
            b_hat: est.b_hat,
            beta,
            max_ratio: ratio,
        },
    )?;
    println!("hoelder: beta_hat = {:.4}, B_hat = {:.6}, max omega/t^{beta} = {ratio:.6}", est.beta_hat, est.b_hat);
    Ok(if ratio.is_finite() { EXIT_PASS } else { EXIT_FAIL })
}

#[derive(Serialize)]
struct ApproxSummary {
    j_max: usize,
    exponent: f64,
    slope: Option<f64>,
    intercept: Option<f64>,
    max_residual: Option<f64>,
    fit_range: Option<(usize, usize)>,
}

fn cmd_approx(cfg: &RunConfig) -> Result<i32> {
    let spec = load_kernel(cfg)?;
    let root = sqrt_op(&operator_from_kernel(&spec))?;
    let a = approx_numbers(&root, cfg.n_max);
    let beta = spec.beta.unwrap_or(cfg.beta);
    let c = beta / (2.0 * spec.space.m as f64);
    let rows: Vec<Vec<String>> = a
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let j = i + 1;
            vec![j.to_string(), f(*v), f(v * (j as f64).powf(c))]
        })
        .collect();
    // fit over the last decade when it is available and strictly positive
    let range = (cfg.n_max / 100).max(1);
    let fit = if cfg.n_max >= 2 * range && a.iter().all(|v| *v > 0.0) {
        Some(decay_fit(&a, range, cfg.n_max)?)
    } else {
        None
    };
    let mut out = Output::new(cfg)?;
    out.csv("approx.csv", &["j", "a_j", "a_j_scaled"], &rows)?;
    let pts: Vec<_> = a.iter().enumerate().map(|(i, v)| ((i + 1) as f64, *v)).collect();
    out.plot("approx_plot.txt", ("j", "a_j"), &pts)?;
    out.json(
        "approx.json",
        &ApproxSummary {
            j_max: cfg.n_max,
            exponent: c,
            slope: fit.as_ref().map(|d| d.slope),
            intercept: fit.as_ref().map(|d| d.intercept),
            max_residual: fit.as_ref().map(|d| d.max_residual),
            fit_range: fit.as_ref().map(|d| d.range),
        },
    )?;
    match fit {
        Some(d) => println!("approx: slope over [{}, {}] = {:.4}", d.range.0, d.range.1, d.slope),
        None => println!("approx: {} values, no decay fit (sequence reaches 0)", a.len()),
    }
    Ok(EXIT_PASS)
}

#[derive(Serialize)]
struct VerifySummary {
    passed: bool,
    failed: Vec<u32>,
    criteria: Vec<verify::CriterionResult>,
}

fn cmd_verify(cfg: &RunConfig) -> Result<i32> {
    let results = verify::run_all(cfg.seed);
    for r in &results {
        println!("{}", r.line());
    }
    let failed: Vec<u32> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    let mut out = Output::new(cfg)?;
    out.json(
        "verify.json",
        &VerifySummary {
            passed: failed.is_empty(),
            failed: failed.clone(),
            criteria: results,
        },
    )?;
    if failed.is_empty() {
        println!("verify: all criteria pass");
        Ok(EXIT_PASS)
    } else {
        println!("verify: failed criteria {failed:?}");
        Ok(EXIT_FAIL)
    }
}

fn cmd_report(kind_cfg: &RunConfig, flags: &Flags) -> Result<i32> {
    let mut worst = EXIT_PASS;
    for kind in [
        CommandKind::Moments,
        CommandKind::Multipliers,
        CommandKind::Hoelder,
        CommandKind::Approx,
        CommandKind::Verify,
    ] {
        let mut sub = flags.clone();
        sub.out = Some(kind_cfg.out.clone());
        let cfg = resolve(kind, &sub)?;
        worst = worst.max(dispatch(kind, &cfg, &sub)?);
    }
    Ok(worst)
}

fn dispatch(kind: CommandKind, cfg: &RunConfig, flags: &Flags) -> Result<i32> {
    match kind {
        CommandKind::Moments => cmd_moments(cfg),
        CommandKind::Multipliers => cmd_multipliers(cfg),
        CommandKind::Kernel => cmd_kernel(cfg),
        CommandKind::Hoelder => cmd_hoelder(cfg),
        CommandKind::Approx => cmd_approx(cfg),
        CommandKind::Verify => cmd_verify(cfg),
        CommandKind::Report => cmd_report(cfg, flags),
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Parse(_) | Error::UnderResolved { .. } => EXIT_INVALID,
        _ => EXIT_FAIL,
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let (kind, flags) = cli.command.split();
    let result = resolve(kind, flags).and_then(|cfg| dispatch(kind, &cfg, flags));
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}
