//! Command-line front end: node generation, condition diagnostics,
//! interpolation runs and convergence sweeps.
//!
//! Settings come from flags and, optionally, a JSON file given with
//! `--config`; a flag always overrides the file.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use circle_interp::experiments::{convergence_sweep, powers_of_two, trig_sup_error, Corpus, SweepFamily};
use circle_interp::interp::{interpolate_fn, sup_error_on, CircleInterpolant};
use circle_interp::io::{self, fmt_f64, MeasureFile};
use circle_interp::laurent::DegreePlan;
use circle_interp::nodal::{default_grid_size, estimate_conditions, estimation_grid, roots_of_unimodular, NodalSystem};
use circle_interp::opuc::{paraorthogonal_nodes, MeasureSpec, ParaOrthogonalSpec};
use circle_interp::transforms::{
    chebyshev1_weight, chebyshev2_weight, interval_interpolate, interval_nodes_from_weight, trig_interpolate_paraorthogonal,
    trig_interpolate_symmetric, trig_nodes_symmetric, IntervalVariant, IntervalWeight,
};
use circle_interp::{angle_0_2pi, cis, Complex64, Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "CIRCLE_INTERP_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "circle-interp",
    version,
    about = "Laurent polynomial interpolation on the unit circle",
    after_help = "Settings are resolved in this order, later winning: built-in defaults, \
                  the --config JSON file, command-line flags.\n\
                  Exit status: 0 success, 1 invalid input, 2 numerical failure.\n\
                  Set CIRCLE_INTERP_THREADS to cap parallelism."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Nodes,
    Check,
    Interp,
    Interval,
    Trig,
    Sweep,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a node file (circle nodes, or interval nodes with --variant).
    Nodes(Opts),
    /// Grid estimates of B, L and the Lebesgue maximum as JSON.
    Check(Opts),
    /// Interpolate a corpus function on the circle.
    Interp(Opts),
    /// Polynomial interpolation on [-1, 1] through the circle.
    Interval(Opts),
    /// Trigonometric interpolation on [0, 2π].
    Trig(Opts),
    /// Convergence sweep over n; writes CSV and a JSON mirror.
    Sweep(Opts),
}

impl Command {
    fn split(self) -> (CommandKind, Opts) {
        match self {
            Command::Nodes(o) => (CommandKind::Nodes, o),
            Command::Check(o) => (CommandKind::Check, o),
            Command::Interp(o) => (CommandKind::Interp, o),
            Command::Interval(o) => (CommandKind::Interval, o),
            Command::Trig(o) => (CommandKind::Trig, o),
            Command::Sweep(o) => (CommandKind::Sweep, o),
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Every setting, all optional so that a config file can fill the gaps.
#[derive(Args, Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Opts {
    /// JSON config file with any of the settings below (flag names, `-` → `_`).
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Node family: roots-of-unity, roots-of-unimodular (uses --tau) or
    /// para-orthogonal (uses --measure, --tau) [default: para-orthogonal].
    #[arg(long)]
    pub family: Option<String>,
    /// `lebesgue` or a measure JSON file [default: lebesgue].
    #[arg(long)]
    pub measure: Option<String>,
    /// Unimodular parameter as `re,im` or `re` [default: 1].
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    /// File of nodes (one angle per line, or JSON [[re, im], ...]);
    /// replaces --family.
    #[arg(long)]
    pub nodes: Option<PathBuf>,
    /// Number of nodes (interior nodes for interval runs, half the nodes for
    /// symmetric trig runs).
    #[arg(long)]
    pub n: Option<usize>,
    /// Sweep sizes: `a:b` for the powers of two in [a, b], or `a,b,c`.
    #[arg(long)]
    pub ns: Option<String>,
    /// Ratio r in (0, 1); p = floor(r (n - 1)) [default: 0.5].
    #[arg(long)]
    pub r: Option<f64>,
    /// Test function: holder:<beta>, smooth-exp, step-smooth, lipschitz,
    /// boundary-half [default: holder:0.6].
    #[arg(long)]
    pub corpus: Option<String>,
    /// Interval node variant: mu1, mu2, mu3, mu4 [default: mu1].
    #[arg(long)]
    pub variant: Option<String>,
    /// Weight on [-1, 1]: chebyshev1, chebyshev2 or cheb1-poly:c0,c1,...
    /// (polynomial times the first-kind weight) [default: chebyshev1].
    #[arg(long)]
    pub weight: Option<String>,
    /// Trig node construction: symmetric or paraorthogonal [default: symmetric].
    #[arg(long)]
    pub mode: Option<String>,
    /// Uniform grid size for error and condition estimates.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Number of points in the dense evaluation CSV (0 disables).
    #[arg(long)]
    pub dense: Option<usize>,
    /// Path of the dense evaluation CSV [default: <out>.dense.csv].
    #[arg(long)]
    pub dense_out: Option<PathBuf>,
    /// Output path; stdout when absent. Sweeps also write <out>.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format for nodes and stdout sweeps.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl Opts {
    /// Fills unset fields from `other`.
    fn or(self, other: Opts) -> Opts {
        macro_rules! pick {
            ($($f:ident),*) => { Opts { config: self.config, $($f: self.$f.or(other.$f)),* } };
        }
        pick!(family, measure, tau, nodes, n, ns, r, corpus, variant, weight, mode, grid, dense, dense_out, out, format)
    }
}

/// Resolves `--config` and the flags into one settings record.
pub fn resolve(opts: Opts) -> Result<Opts> {
    let Some(path) = opts.config.clone() else {
        return Ok(opts);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::InvalidArgument(format!("config {}: {e}", path.display())))?;
    let file: Opts = serde_json::from_str(&text)
        .map_err(|e| Error::Validation(format!("config {}: {e}", path.display())))?;
    Ok(Opts { config: None, ..opts.or(file) })
}

pub fn parse_tau(s: &str) -> Result<Complex64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| {
        t.parse::<f64>()
            .map_err(|_| Error::InvalidArgument(format!("bad tau component {t:?}")))
    };
    let tau = match parts.as_slice() {
        [re] => Complex64::new(num(re)?, 0.0),
        [re, im] => Complex64::new(num(re)?, num(im)?),
        _ => return Err(Error::InvalidArgument(format!("tau must be `re` or `re,im`, got {s:?}"))),
    };
    if ((tau.norm() - 1.0).abs()) > 1e-12 {
        return Err(Error::InvalidArgument(format!("|tau| must be 1, got {}", tau.norm())));
    }
    Ok(tau)
}

pub fn parse_ns(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidArgument(format!("bad --ns {s:?}; use a:b or a,b,c"));
    if let Some((a, b)) = s.split_once(':') {
        let a = a.trim().parse().map_err(|_| bad())?;
        let b = b.trim().parse().map_err(|_| bad())?;
        return powers_of_two(a, b);
    }
    let ns: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    if ns.is_empty() || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("--ns must be strictly increasing".into()));
    }
    Ok(ns)
}

/// Weight on `[-1, 1]` by name.
pub fn parse_weight(s: &str) -> Result<IntervalWeight> {
    match s {
        "chebyshev1" => Ok(Arc::new(chebyshev1_weight)),
        "chebyshev2" => Ok(Arc::new(chebyshev2_weight)),
        _ => {
            let Some(list) = s.strip_prefix("cheb1-poly:") else {
                return Err(Error::InvalidArgument(format!(
                    "unknown weight {s:?}; use chebyshev1, chebyshev2 or cheb1-poly:c0,c1,..."
                )));
            };
            let c: Vec<f64> = list
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| Error::InvalidArgument(format!("bad coefficient {t:?}")))
                })
                .collect::<Result<_>>()?;
            Ok(Arc::new(move |x: f64| {
                c.iter().rev().fold(0.0, |acc, &a| acc * x + a) * chebyshev1_weight(x)
            }))
        }
    }
}

/// Settings after validation and defaulting.
struct Ctx {
    kind: CommandKind,
    opts: Opts,
    hash: String,
}

impl Ctx {
    fn new(kind: CommandKind, opts: Opts) -> Result<Self> {
        let canonical = serde_json::to_string(&json!({ "command": kind, "settings": &opts }))?;
        let digest = Sha256::digest(canonical.as_bytes());
        let hash = digest.iter().map(|b| format!("{b:02x}")).collect();
        Ok(Self { kind, opts, hash })
    }

    fn metadata(&self) -> serde_json::Value {
        json!({
            "version": circle_interp::VERSION,
            "command": self.kind,
            "config_hash": self.hash,
            "config": self.opts,
        })
    }

    fn n(&self) -> Result<usize> {
        match self.opts.n {
            Some(n) if n >= 1 => Ok(n),
            Some(_) => Err(Error::InvalidArgument("--n must be >= 1".into())),
            None => Err(Error::InvalidArgument("--n is required".into())),
        }
    }

    fn r(&self) -> Result<f64> {
        let r = self.opts.r.unwrap_or(0.5);
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidArgument(format!("--r must lie in (0, 1), got {r}")));
        }
        Ok(r)
    }

    fn tau(&self) -> Result<Complex64> {
        self.opts.tau.as_deref().map_or(Ok(Complex64::new(1.0, 0.0)), parse_tau)
    }

    fn measure(&self) -> Result<(MeasureFile, MeasureSpec)> {
        let file = io::load_measure(self.opts.measure.as_deref().unwrap_or("lebesgue"))?;
        let spec = file.to_measure()?;
        Ok((file, spec))
    }

    fn corpus(&self) -> Result<Corpus> {
        self.opts.corpus.as_deref().unwrap_or("holder:0.6").parse()
    }

    fn variant(&self) -> Result<IntervalVariant> {
        self.opts.variant.as_deref().unwrap_or("mu1").parse()
    }

    fn weight(&self) -> Result<IntervalWeight> {
        parse_weight(self.opts.weight.as_deref().unwrap_or("chebyshev1"))
    }

    fn family(&self) -> Result<SweepFamily> {
        let tau = self.tau()?;
        match self.opts.family.as_deref().unwrap_or("para-orthogonal") {
            "roots-of-unity" => {
                if self.opts.tau.is_some() && tau != Complex64::new(1.0, 0.0) {
                    return Err(Error::InvalidArgument(
                        "roots-of-unity takes no --tau; use roots-of-unimodular".into(),
                    ));
                }
                Ok(SweepFamily::roots_of_unity())
            }
            "roots-of-unimodular" => Ok(SweepFamily::RootsOfUnimodular { tau }),
            "para-orthogonal" => {
                let (file, measure) = self.measure()?;
                Ok(SweepFamily::ParaOrthogonal {
                    measure,
                    label: file.label(),
                    tau,
                })
            }
            other => Err(Error::InvalidArgument(format!("unknown family {other:?}"))),
        }
    }

    fn system(&self) -> Result<NodalSystem> {
        if let Some(path) = &self.opts.nodes {
            if !path.exists() {
                return Err(Error::InvalidArgument(format!("node file {} does not exist", path.display())));
            }
            return NodalSystem::new(io::read_nodes(path)?);
        }
        let n = self.n()?;
        match self.family()? {
            SweepFamily::RootsOfUnimodular { tau } => roots_of_unimodular(n, tau),
            SweepFamily::ParaOrthogonal { measure, tau, .. } => {
                paraorthogonal_nodes(&measure.opuc_state(n)?, &ParaOrthogonalSpec::new(n, tau)?)
            }
        }
    }

    fn grid(&self, default: usize) -> Result<usize> {
        match self.opts.grid {
            Some(0) => Err(Error::InvalidArgument("--grid must be positive".into())),
            Some(g) => Ok(g),
            None => Ok(default),
        }
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.opts.out {
            Some(p) => io::write_file(p, text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn emit_json(&self, body: serde_json::Value) -> Result<()> {
        let mut v = body;
        v["metadata"] = self.metadata();
        self.emit(&(serde_json::to_string_pretty(&v)? + "\n"))
    }

    fn dense_path(&self) -> Option<PathBuf> {
        if self.opts.dense.unwrap_or(0) == 0 {
            return None;
        }
        self.opts.dense_out.clone().or_else(|| {
            Some(match &self.opts.out {
                Some(p) => with_suffix(p, "dense.csv"),
                None => PathBuf::from("dense.csv"),
            })
        })
    }
}

fn with_suffix(p: &Path, ext: &str) -> PathBuf {
    let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    p.with_file_name(format!("{stem}.{ext}"))
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> Result<()> {
    let (kind, opts) = cli.command.split();
    let ctx = Ctx::new(kind, resolve(opts)?)?;
    match kind {
        CommandKind::Nodes => cmd_nodes(&ctx),
        CommandKind::Check => cmd_check(&ctx),
        CommandKind::Interp => cmd_interp(&ctx),
        CommandKind::Interval => cmd_interval(&ctx),
        CommandKind::Trig => cmd_trig(&ctx),
        CommandKind::Sweep => cmd_sweep(&ctx),
    }
}

fn cmd_nodes(ctx: &Ctx) -> Result<()> {
    let format = ctx.opts.format.unwrap_or(Format::Csv);
    if ctx.opts.variant.is_some() || ctx.opts.weight.is_some() {
        let sys = {
            let w = ctx.weight()?;
            interval_nodes_from_weight(move |x| w(x), ctx.n()?, ctx.variant()?)?
        };
        return match format {
            Format::Csv => ctx.emit(&io::interval_nodes_csv(&sys)),
            Format::Json => ctx.emit_json(json!({
                "variant": sys.variant(),
                "nodes": sys.rows().iter().map(|&(j, x, t, e)| json!({"j": j, "x": x, "theta": t, "endpoint": e})).collect::<Vec<_>>(),
            })),
        };
    }
    let system = ctx.system()?;
    match format {
        Format::Csv => ctx.emit(&io::nodes_csv(&system)),
        Format::Json => ctx.emit_json(json!({
            "source": system.source(),
            "nodes": system.nodes().iter().enumerate().map(|(j, z)| json!({
                "j": j + 1, "theta": angle_0_2pi(*z), "re": z.re, "im": z.im,
            })).collect::<Vec<_>>(),
        })),
    }
}

fn cmd_check(ctx: &Ctx) -> Result<()> {
    let system = ctx.system()?;
    let report = estimate_conditions(&system, ctx.grid(default_grid_size(system.len()))?);
    if let Some(w) = &report.warning {
        eprintln!("warning: {w}");
    }
    ctx.emit_json(json!({ "source": system.source(), "report": report }))
}

fn write_dense(path: &Path, header: [&str; 4], rows: Vec<[f64; 4]>) -> Result<()> {
    io::write_file(
        path,
        &io::csv_table(&header, rows.into_iter().map(|r| r.iter().map(|&x| fmt_f64(x)).collect())),
    )
}

fn circle_dense(interp: &CircleInterpolant, f: &Corpus, m: usize) -> Result<Vec<[f64; 4]>> {
    let thetas: Vec<f64> = (0..m).map(|k| TAU * k as f64 / m as f64).collect();
    let zs: Vec<Complex64> = thetas.iter().map(|&t| cis(t)).collect();
    let vals = interp.eval_many(&zs)?;
    Ok(thetas
        .iter()
        .zip(zs.iter().zip(vals))
        .map(|(&t, (&z, v))| {
            let fv = f.eval_circle(z).re;
            [t, fv, v.re, (fv - v).norm()]
        })
        .collect())
}

fn cmd_interp(ctx: &Ctx) -> Result<()> {
    let system = ctx.system()?;
    let n = system.len();
    let plan = if n == 1 {
        DegreePlan::with_split(1, 0)?
    } else {
        DegreePlan::from_ratio(n, ctx.r()?)?
    };
    let corpus = ctx.corpus()?;
    let f = |z: Complex64| corpus.eval_circle(z);
    let interp = interpolate_fn(&system, &plan, f)?;
    let grid = ctx.grid(8192)?;
    let sup_error = sup_error_on(&interp, &f, &estimation_grid(&system, grid))?;
    if let Some(path) = ctx.dense_path() {
        write_dense(&path, ["theta", "f", "interpolant", "error"], circle_dense(&interp, &corpus, ctx.opts.dense.unwrap())?)?;
    }
    ctx.emit_json(json!({
        "n": n, "p": plan.p, "q": plan.q, "s": plan.s,
        "corpus": corpus.name(),
        "sup_error": sup_error,
        "error_grid": grid,
    }))
}

fn cmd_interval(ctx: &Ctx) -> Result<()> {
    let n = ctx.n()?;
    let variant = ctx.variant()?;
    let corpus = ctx.corpus()?;
    let w = ctx.weight()?;
    let sys = interval_nodes_from_weight(move |x| w(x), n, variant)?;
    let f = |x: f64| corpus.eval_interval(x);
    let interp = interval_interpolate(&sys, f)?;
    let m = ctx.grid(8192)?;
    let mut rows = Vec::with_capacity(m + 1);
    let mut sup = 0.0f64;
    for k in 0..=m {
        let x = (std::f64::consts::PI * k as f64 / m as f64).cos();
        let v = interp.eval(x)?;
        let e = (f(x) - v).abs();
        sup = sup.max(e);
        rows.push([x, f(x), v, e]);
    }
    if let Some(path) = ctx.dense_path() {
        let step = (m / ctx.opts.dense.unwrap()).max(1);
        write_dense(&path, ["x", "f", "interpolant", "error"], rows.into_iter().step_by(step).collect())?;
    }
    ctx.emit_json(json!({
        "n": n,
        "variant": variant,
        "weight": ctx.opts.weight.as_deref().unwrap_or("chebyshev1"),
        "corpus": corpus.name(),
        "nodes": sys.all_nodes(),
        "chebyshev_coeffs": interp.chebyshev_coeffs(),
        "sup_error": sup,
        "error_grid": m + 1,
    }))
}

fn cmd_trig(ctx: &Ctx) -> Result<()> {
    let n = ctx.n()?;
    let corpus = ctx.corpus()?;
    let f = |t: f64| corpus.eval_angle(t);
    let mode = ctx.opts.mode.as_deref().unwrap_or("symmetric");
    let (poly, thetas) = match mode {
        "symmetric" => {
            let w = ctx.weight()?;
            let measure = circle_interp::transforms::szego_transform_weight(move |x| w(x))?;
            let thetas = trig_nodes_symmetric(&measure, n)?;
            (trig_interpolate_symmetric(&measure, n, f)?, thetas)
        }
        "paraorthogonal" => {
            let (_, measure) = ctx.measure()?;
            let state = measure.opuc_state(n)?;
            let tau = ctx.tau()?;
            let nodes = paraorthogonal_nodes(&state, &ParaOrthogonalSpec::new(n, tau)?)?;
            let thetas = nodes.nodes().iter().map(|&z| angle_0_2pi(z)).collect();
            (trig_interpolate_paraorthogonal(&state, tau, n, f)?, thetas)
        }
        other => return Err(Error::InvalidArgument(format!("unknown trig mode {other:?}"))),
    };
    let m = ctx.grid(8192)?;
    let sup = trig_sup_error(&poly, f, m);
    let node_residual = thetas.iter().map(|&t: &f64| (poly.eval(t) - f(t)).abs()).fold(0.0, f64::max);
    if let Some(path) = ctx.dense_path() {
        let k = ctx.opts.dense.unwrap();
        let rows = (0..k)
            .map(|i| {
                let t = TAU * i as f64 / k as f64;
                let v = poly.eval(t);
                [t, f(t), v, (f(t) - v).abs()]
            })
            .collect();
        write_dense(&path, ["theta", "f", "interpolant", "error"], rows)?;
    }
    ctx.emit_json(json!({
        "n": n,
        "mode": mode,
        "corpus": corpus.name(),
        "degree": poly.degree(),
        "a": poly.a,
        "b": poly.b,
        "imag_residue": poly.imag_residue,
        "node_residual": node_residual,
        "sup_error": sup,
        "error_grid": m,
    }))
}

fn cmd_sweep(ctx: &Ctx) -> Result<()> {
    let ns = parse_ns(
        ctx.opts
            .ns
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument("--ns is required".into()))?,
    )?;
    let corpus = ctx.corpus()?;
    let family = ctx.family()?;
    let res = convergence_sweep(&family, ctx.r()?, &ns, |z| corpus.eval_circle(z), &corpus.name())?;
    for (n, st) in res.ns.iter().zip(&res.status) {
        if let Some(msg) = st {
            eprintln!("warning: n = {n} failed: {msg}");
        }
    }
    let csv = io::sweep_csv(&res);
    let mut mirror = serde_json::to_value(&res)?;
    mirror["metadata"] = ctx.metadata();
    mirror["metadata"]["condition_grid"] = json!("max(4096, 16 n) uniform angles plus node midpoints and nodes");
    let mirror = serde_json::to_string_pretty(&mirror)? + "\n";
    match &ctx.opts.out {
        Some(p) => {
            io::write_file(p, &csv)?;
            io::write_file(&with_suffix(p, "json"), &mirror)
        }
        None => match ctx.opts.format.unwrap_or(Format::Csv) {
            Format::Csv => ctx.emit(&csv),
            Format::Json => ctx.emit(&mirror),
        },
    }
}

/// Installs the global thread pool size from [`THREADS_ENV`], if set.
pub fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidArgument(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))
}

/// Process exit status for an error: 2 numerical, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        2
    } else {
        1
    }
}
