//! Test functions, modulus-of-continuity estimates, best-approximation
//! proxies and convergence sweeps.

use std::collections::VecDeque;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::interp::{interpolate_fn, sup_error_on};
use crate::laurent::{forward_fft, inverse_fft, DegreePlan};
use crate::nodal::{default_grid_size, estimate_conditions, estimation_grid, roots_of_unimodular, NodalSystem};
use crate::opuc::{paraorthogonal_nodes, MeasureSpec, OpucState, ParaOrthogonalSpec};
use crate::{cis, Error, Result};

/// Uniform angles in sweep error grids (node midpoints are added).
pub const SWEEP_ERROR_GRID: usize = 8192;

/// Named test functions, given as functions of the angle `θ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", content = "beta", rename_all = "kebab-case")]
pub enum Corpus {
    /// `|sin(θ/2)|^β`, modulus of continuity `O(δ^β)`.
    Holder(f64),
    /// `exp(cos θ)`.
    SmoothExp,
    /// `½(1 + tanh(10 cos θ))`.
    StepSmooth,
    /// `|sin θ|`.
    Lipschitz,
    /// `|sin(θ/2)|^½`.
    BoundaryHalf,
}

impl Corpus {
    pub fn holder(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::InvalidArgument(format!("Hölder exponent must lie in (0, 1], got {beta}")));
        }
        Ok(Corpus::Holder(beta))
    }

    /// Short identifier, e.g. `holder:0.6`.
    pub fn name(&self) -> String {
        self.to_string()
    }

    /// Exponent of the modulus of continuity, where known.
    pub fn exponent(&self) -> Option<f64> {
        match self {
            Corpus::Holder(b) => Some(*b),
            Corpus::BoundaryHalf => Some(0.5),
            Corpus::Lipschitz => Some(1.0),
            Corpus::SmoothExp | Corpus::StepSmooth => None,
        }
    }

    pub fn eval_angle(&self, theta: f64) -> f64 {
        match *self {
            Corpus::Holder(b) => (0.5 * theta).sin().abs().powf(b),
            Corpus::BoundaryHalf => (0.5 * theta).sin().abs().sqrt(),
            Corpus::SmoothExp => theta.cos().exp(),
            Corpus::StepSmooth => 0.5 * (1.0 + (10.0 * theta.cos()).tanh()),
            Corpus::Lipschitz => theta.sin().abs(),
        }
    }

    /// `F(z)` for unimodular `z`.
    pub fn eval_circle(&self, z: Complex64) -> Complex64 {
        let v = match *self {
            // |sin(θ/2)| = |z - 1|/2 avoids the branch cut of arg
            Corpus::Holder(b) => (0.5 * (z - 1.0).norm()).powf(b),
            Corpus::BoundaryHalf => (0.5 * (z - 1.0).norm()).sqrt(),
            _ => self.eval_angle(z.arg()),
        };
        Complex64::new(v, 0.0)
    }

    /// `f(x) = F(arccos x)` on `[-1, 1]`.
    pub fn eval_interval(&self, x: f64) -> f64 {
        self.eval_angle(x.clamp(-1.0, 1.0).acos())
    }
}

impl fmt::Display for Corpus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Corpus::Holder(b) => write!(f, "holder:{b}"),
            Corpus::SmoothExp => f.write_str("smooth-exp"),
            Corpus::StepSmooth => f.write_str("step-smooth"),
            Corpus::Lipschitz => f.write_str("lipschitz"),
            Corpus::BoundaryHalf => f.write_str("boundary-half"),
        }
    }
}

impl FromStr for Corpus {
    type Err = Error;

    /// `name` or `name:param`; also accepts `holder(0.6)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, param) = match s.find([':', '(']) {
            Some(i) => (&s[..i], Some(s[i + 1..].trim_end_matches(')'))),
            None => (s, None),
        };
        let no_param = |c: Corpus| match param {
            None => Ok(c),
            Some(_) => Err(Error::InvalidArgument(format!("corpus {name} takes no parameter"))),
        };
        match name {
            "holder" => {
                let p = param.ok_or_else(|| Error::InvalidArgument("holder needs an exponent, e.g. holder:0.6".into()))?;
                let beta: f64 = p
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad Hölder exponent {p:?}")))?;
                Corpus::holder(beta)
            }
            "smooth-exp" => no_param(Corpus::SmoothExp),
            "step-smooth" => no_param(Corpus::StepSmooth),
            "lipschitz" => no_param(Corpus::Lipschitz),
            "boundary-half" => no_param(Corpus::BoundaryHalf),
            other => Err(Error::InvalidArgument(format!("unknown corpus function {other:?}"))),
        }
    }
}

/// Free-function form of [`Corpus::from_str`].
pub fn corpus(spec: &str) -> Result<Corpus> {
    spec.parse()
}

/// Estimated modulus of continuity at several scales.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulusProfile {
    /// Decreasing.
    pub deltas: Vec<f64>,
    pub lambda_hat: Vec<f64>,
    /// Slope of `log λ̂` against `log δ`; `None` when fewer than two
    /// estimates are positive.
    pub exponent_fit: Option<f64>,
}

/// Number of uniform steps `k` with chord `2 sin(πk/m) < δ`.
fn window_steps(delta: f64, m: usize) -> usize {
    if delta > 2.0 {
        return m / 2;
    }
    let mut k = ((2.0 * (0.5 * delta).asin()) * m as f64 / TAU).floor() as usize;
    while k > 0 && 2.0 * (PI * k as f64 / m as f64).sin() >= delta {
        k -= 1;
    }
    while k < m / 2 && 2.0 * (PI * (k + 1) as f64 / m as f64).sin() < delta {
        k += 1;
    }
    k
}

fn check_modulus_args(deltas: &[f64], grid_size: usize) -> Result<Vec<f64>> {
    if grid_size < 1024 {
        return Err(Error::InvalidArgument(format!("modulus grid must have >= 1024 points, got {grid_size}")));
    }
    if deltas.is_empty() || deltas.iter().any(|d| !(*d > 0.0)) {
        return Err(Error::InvalidArgument("deltas must be positive".into()));
    }
    let mut d = deltas.to_vec();
    d.sort_by(|a, b| b.total_cmp(a));
    d.dedup();
    Ok(d)
}

/// Largest `max - min` of a cyclic real sequence over windows of `w + 1`
/// consecutive entries.
fn sliding_range(v: &[f64], w: usize) -> f64 {
    let m = v.len();
    if w + 1 >= m {
        let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        return hi - lo;
    }
    let mut maxq: VecDeque<usize> = VecDeque::new();
    let mut minq: VecDeque<usize> = VecDeque::new();
    let mut best = 0.0f64;
    for i in 0..m + w {
        let x = v[i % m];
        while maxq.back().is_some_and(|&j| v[j % m] <= x) {
            maxq.pop_back();
        }
        maxq.push_back(i);
        while minq.back().is_some_and(|&j| v[j % m] >= x) {
            minq.pop_back();
        }
        minq.push_back(i);
        if i >= w {
            let start = i - w;
            while maxq.front().is_some_and(|&j| j < start) {
                maxq.pop_front();
            }
            while minq.front().is_some_and(|&j| j < start) {
                minq.pop_front();
            }
            best = best.max(v[maxq[0] % m] - v[minq[0] % m]);
        }
    }
    best
}

/// `λ̂(F, δ)` for a real function of the angle, on `grid_size` uniform
/// points, for each `δ` (returned in decreasing order).
pub fn estimate_modulus<F>(f: F, deltas: &[f64], grid_size: usize) -> Result<ModulusProfile>
where
    F: Fn(f64) -> f64 + Sync,
{
    let deltas = check_modulus_args(deltas, grid_size)?;
    let values: Vec<f64> = (0..grid_size)
        .into_par_iter()
        .map(|k| f(TAU * k as f64 / grid_size as f64))
        .collect();
    let lambda_hat: Vec<f64> = deltas
        .par_iter()
        .map(|&d| sliding_range(&values, window_steps(d, grid_size)))
        .collect();
    Ok(profile(deltas, lambda_hat))
}

/// As [`estimate_modulus`] for complex-valued `F` on the circle, by a
/// direct scan of all grid pairs within each window.
pub fn estimate_modulus_complex<F>(f: F, deltas: &[f64], grid_size: usize) -> Result<ModulusProfile>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let deltas = check_modulus_args(deltas, grid_size)?;
    let values: Vec<Complex64> = (0..grid_size)
        .into_par_iter()
        .map(|k| f(cis(TAU * k as f64 / grid_size as f64)))
        .collect();
    let lambda_hat = deltas
        .iter()
        .map(|&d| modulus_from_samples(&values, window_steps(d, grid_size)))
        .collect();
    Ok(profile(deltas, lambda_hat))
}

fn modulus_from_samples(values: &[Complex64], w: usize) -> f64 {
    let m = values.len();
    (0..m)
        .into_par_iter()
        .map(|a| {
            (1..=w.min(m - 1))
                .map(|k| (values[a] - values[(a + k) % m]).norm())
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

fn profile(deltas: Vec<f64>, lambda_hat: Vec<f64>) -> ModulusProfile {
    let pts: Vec<(f64, f64)> = deltas
        .iter()
        .zip(&lambda_hat)
        .filter(|(_, &l)| l > 0.0)
        .map(|(&d, &l)| (d.ln(), l.ln()))
        .collect();
    ModulusProfile {
        deltas,
        lambda_hat,
        exponent_fit: slope(&pts),
    }
}

/// Least-squares slope, `None` for fewer than two distinct abscissae.
pub fn slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Best-approximation proxy for `F` from `Λ_{-p,q}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NearBestReport {
    /// Smallest sup-grid error among the tapered Fourier means.
    pub proxy_error: f64,
    /// Taper width achieving `proxy_error` (0 is the plain partial sum).
    pub taper: usize,
    /// `2 λ̂(F, π/s)`, `s = min(p, q)`; infinite when `s = 0`.
    pub modulus_bound: f64,
    pub grid_size: usize,
}

fn near_best_grid(n: usize) -> usize {
    8192usize.max((8 * n).next_power_of_two())
}

/// Sup-grid error of the best of a few tapered truncations of the Fourier
/// series of `F` to `[-p, q]`. Each mean lies in `Λ_{-p,q}`, so this is an
/// upper bound for the error of best approximation (up to grid
/// resolution).
pub fn near_best_error<F>(f: F, plan: &DegreePlan) -> f64
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    near_best_samples(&samples(&f, near_best_grid(plan.n)), plan).0
}

/// [`near_best_error`] together with the modulus bound.
pub fn near_best_report<F>(f: F, plan: &DegreePlan) -> NearBestReport
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let m = near_best_grid(plan.n);
    let values = samples(&f, m);
    let (proxy_error, taper) = near_best_samples(&values, plan);
    let modulus_bound = if plan.s == 0 {
        f64::INFINITY
    } else {
        2.0 * modulus_from_samples(&values, window_steps(PI / plan.s as f64, m))
    };
    NearBestReport {
        proxy_error,
        taper,
        modulus_bound,
        grid_size: m,
    }
}

fn samples<F>(f: &F, m: usize) -> Vec<Complex64>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    (0..m)
        .into_par_iter()
        .map(|k| f(cis(TAU * k as f64 / m as f64)))
        .collect()
}

fn near_best_samples(values: &[Complex64], plan: &DegreePlan) -> (f64, usize) {
    let m = values.len();
    let mut spec = values.to_vec();
    forward_fft(m).process(&mut spec);
    for c in spec.iter_mut() {
        *c /= m as f64;
    }
    let (p, q) = (plan.p as i64, plan.q as i64);
    let mut tapers = vec![0, plan.s / 8, plan.s / 4, plan.s / 2];
    tapers.dedup();
    let ifft = inverse_fft(m);
    tapers
        .into_par_iter()
        .map(|t| {
            let mut buf = vec![Complex64::new(0.0, 0.0); m];
            let t1 = (t + 1) as f64;
            for k in -p..=q {
                let sigma = if k >= 0 {
                    ((q + 1 - k) as f64 / t1).min(1.0)
                } else {
                    ((p + 1 + k) as f64 / t1).min(1.0)
                };
                let idx = k.rem_euclid(m as i64) as usize;
                buf[idx] = spec[idx] * sigma;
            }
            ifft.process(&mut buf);
            let err = buf
                .iter()
                .zip(values)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            (err, t)
        })
        .reduce(|| (f64::INFINITY, 0), |a, b| if b.0 < a.0 { b } else { a })
}

/// Nodal family swept over `n`.
#[derive(Clone, Debug)]
pub enum SweepFamily {
    /// Roots of `z^n = τ`.
    RootsOfUnimodular { tau: Complex64 },
    /// Zeros of `φ_n + τ φ_n*` for `measure`.
    ParaOrthogonal {
        measure: MeasureSpec,
        label: String,
        tau: Complex64,
    },
}

impl SweepFamily {
    pub fn roots_of_unity() -> Self {
        SweepFamily::RootsOfUnimodular {
            tau: Complex64::new(1.0, 0.0),
        }
    }

    pub fn label(&self) -> String {
        match self {
            SweepFamily::RootsOfUnimodular { tau } => format!("roots-of-unimodular(tau={},{})", tau.re, tau.im),
            SweepFamily::ParaOrthogonal { label, tau, .. } => {
                format!("para-orthogonal({label},tau={},{})", tau.re, tau.im)
            }
        }
    }
}

/// Per-`n` diagnostics of a convergence sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub family: String,
    pub corpus: String,
    pub r: f64,
    pub ns: Vec<usize>,
    pub p: Vec<usize>,
    pub q: Vec<usize>,
    pub s: Vec<usize>,
    pub sup_errors: Vec<f64>,
    pub lebesgue_maxima: Vec<f64>,
    pub b_hats: Vec<f64>,
    pub l_hats: Vec<f64>,
    /// `None` where the pipeline succeeded, else the error message.
    pub status: Vec<Option<String>>,
    pub error_grid: usize,
}

impl SweepResult {
    pub fn len(&self) -> usize {
        self.ns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ns.is_empty()
    }

    pub fn all_ok(&self) -> bool {
        self.status.iter().all(Option::is_none)
    }
}

struct SweepRow {
    p: usize,
    q: usize,
    s: usize,
    sup_error: f64,
    lebesgue_max: f64,
    b_hat: f64,
    l_hat: f64,
}

/// Interpolates `F` at each `n` of the family with `p = floor(r(n-1))`,
/// recording the sup error on [`SWEEP_ERROR_GRID`] uniform angles plus node
/// midpoints and the grid estimates of `B`, `L` and the Lebesgue maximum.
/// A failing `n` is recorded with its error and `NaN` values.
pub fn convergence_sweep<F>(family: &SweepFamily, r: f64, ns: &[usize], f: F, corpus_name: &str) -> Result<SweepResult>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    if ns.is_empty() || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("ns must be nonempty and strictly increasing".into()));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!("ratio r must lie in (0, 1), got {r}")));
    }
    let n_max = *ns.last().unwrap();
    let state: Option<OpucState> = match family {
        SweepFamily::ParaOrthogonal { measure, .. } => Some(measure.opuc_state(n_max)?),
        _ => None,
    };
    let rows: Vec<Result<SweepRow>> = ns
        .par_iter()
        .map(|&n| {
            let system = match family {
                SweepFamily::RootsOfUnimodular { tau } => roots_of_unimodular(n, *tau)?,
                SweepFamily::ParaOrthogonal { tau, .. } => {
                    paraorthogonal_nodes(state.as_ref().unwrap(), &ParaOrthogonalSpec::new(n, *tau)?)?
                }
            };
            sweep_point(&system, r, &f)
        })
        .collect();

    let mut out = SweepResult {
        family: family.label(),
        corpus: corpus_name.to_string(),
        r,
        ns: ns.to_vec(),
        p: Vec::new(),
        q: Vec::new(),
        s: Vec::new(),
        sup_errors: Vec::new(),
        lebesgue_maxima: Vec::new(),
        b_hats: Vec::new(),
        l_hats: Vec::new(),
        status: Vec::new(),
        error_grid: SWEEP_ERROR_GRID,
    };
    for (&n, row) in ns.iter().zip(rows) {
        match row {
            Ok(row) => {
                out.p.push(row.p);
                out.q.push(row.q);
                out.s.push(row.s);
                out.sup_errors.push(row.sup_error);
                out.lebesgue_maxima.push(row.lebesgue_max);
                out.b_hats.push(row.b_hat);
                out.l_hats.push(row.l_hat);
                out.status.push(None);
            }
            Err(e) => {
                let plan = DegreePlan::from_ratio(n, r).ok();
                out.p.push(plan.as_ref().map_or(0, |pl| pl.p));
                out.q.push(plan.as_ref().map_or(0, |pl| pl.q));
                out.s.push(plan.as_ref().map_or(0, |pl| pl.s));
                for v in [
                    &mut out.sup_errors,
                    &mut out.lebesgue_maxima,
                    &mut out.b_hats,
                    &mut out.l_hats,
                ] {
                    v.push(f64::NAN);
                }
                out.status.push(Some(format!("{} contract: {e}", e.module())));
            }
        }
    }
    Ok(out)
}

fn sweep_point<F>(system: &NodalSystem, r: f64, f: &F) -> Result<SweepRow>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let n = system.len();
    let plan = DegreePlan::from_ratio(n, r)?;
    let interp = interpolate_fn(system, &plan, f)?;
    let grid = estimation_grid(system, SWEEP_ERROR_GRID);
    let sup_error = sup_error_on(&interp, f, &grid)?;
    let report = estimate_conditions(system, default_grid_size(n));
    Ok(SweepRow {
        p: plan.p,
        q: plan.q,
        s: plan.s,
        sup_error,
        lebesgue_max: report.lebesgue_max,
        b_hat: report.b_hat,
        l_hat: report.l_hat,
    })
}

/// Powers of two from `a` to `b` inclusive (both rounded to powers of two).
pub fn powers_of_two(a: usize, b: usize) -> Result<Vec<usize>> {
    if a == 0 || b < a {
        return Err(Error::InvalidArgument(format!("bad range {a}:{b}")));
    }
    let mut v = Vec::new();
    let mut n = a.next_power_of_two();
    while n <= b {
        v.push(n);
        n *= 2;
    }
    if v.is_empty() {
        return Err(Error::InvalidArgument(format!("no power of two in {a}:{b}")));
    }
    Ok(v)
}

/// `max |f(θ) - t(θ)|` over `grid_size` uniform angles.
pub fn trig_sup_error<F>(t: &crate::transforms::TrigPolynomial, f: F, grid_size: usize) -> f64
where
    F: Fn(f64) -> f64 + Sync,
{
    (0..grid_size)
        .into_par_iter()
        .map(|k| {
            let th = TAU * (k as f64 + 0.5) / grid_size as f64;
            (f(th) - t.eval(th)).abs()
        })
        .reduce(|| 0.0, f64::max)
}
