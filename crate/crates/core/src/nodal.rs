//! Unimodular nodal systems, the nodal polynomial `W_n(z) = ∏(z - z_j)`,
//! and grid estimates of the constants
//!
//! - `B <= |W_n'(z)| / n`
//! - `|W_n(z)|²/n² · Σ_j 1/|z - z_j|² <= L`
//!
//! which together bound the Lebesgue function by `(√L / B) √n`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::laurent::DegreePlan;
use crate::{angle_0_2pi, cis, Error, Result};

/// Maximum allowed `||z| - 1|` for a node.
pub const UNIMODULAR_TOL: f64 = 1e-12;
/// Minimum chordal distance between two nodes.
pub const DISTINCT_TOL: f64 = 1e-10;

/// Complex number stored as `mantissa · 2^exponent`.
///
/// Products of many factors (nodal polynomials of large degree) are kept in
/// this form so that neither overflow nor underflow occurs before the final
/// conversion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledComplex {
    pub mantissa: Complex64,
    pub exponent: i32,
}

const RENORM_EVERY: usize = 64;
const RENORM_GUARD: f64 = 1e120;

impl ScaledComplex {
    pub fn one() -> Self {
        Self {
            mantissa: Complex64::new(1.0, 0.0),
            exponent: 0,
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        let mut s = Self {
            mantissa: z,
            exponent: 0,
        };
        s.renormalize();
        s
    }

    /// Moves the binary exponent of the mantissa into `exponent`, leaving
    /// the mantissa's larger component in `[1/2, 2)`.
    pub fn renormalize(&mut self) {
        let m = self.mantissa.re.abs().max(self.mantissa.im.abs());
        if m == 0.0 || !m.is_finite() {
            return;
        }
        let e = m.log2().floor() as i32;
        if e != 0 {
            self.mantissa *= ldexp(1.0, -e);
            self.exponent += e;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == Complex64::new(0.0, 0.0)
    }

    /// `mantissa · 2^exponent` as a plain complex number (may overflow to
    /// infinity or underflow to zero).
    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            ldexp(self.mantissa.re, self.exponent),
            ldexp(self.mantissa.im, self.exponent),
        )
    }

    pub fn norm(&self) -> f64 {
        ldexp(self.mantissa.norm(), self.exponent)
    }

    /// `self · z`, where `z` is a plain complex number.
    pub fn scale(&self, z: Complex64) -> Complex64 {
        let m = self.mantissa * z;
        Complex64::new(ldexp(m.re, self.exponent), ldexp(m.im, self.exponent))
    }

    /// `|self| · x`.
    pub fn scale_norm(&self, x: f64) -> f64 {
        ldexp(self.mantissa.norm() * x, self.exponent)
    }

    pub fn mul_assign_complex(&mut self, z: Complex64) {
        self.mantissa *= z;
    }

    pub fn mul(&self, other: &ScaledComplex) -> ScaledComplex {
        let mut r = ScaledComplex {
            mantissa: self.mantissa * other.mantissa,
            exponent: self.exponent + other.exponent,
        };
        r.renormalize();
        r
    }

    /// Product of an iterator of complex factors.
    pub fn product<I: IntoIterator<Item = Complex64>>(factors: I) -> Self {
        let mut acc = Self::one();
        for (i, f) in factors.into_iter().enumerate() {
            acc.mantissa *= f;
            let m = acc.mantissa.re.abs().max(acc.mantissa.im.abs());
            if (i + 1) % RENORM_EVERY == 0 || !(1.0 / RENORM_GUARD..=RENORM_GUARD).contains(&m) {
                if m == 0.0 {
                    return ScaledComplex {
                        mantissa: Complex64::new(0.0, 0.0),
                        exponent: 0,
                    };
                }
                acc.renormalize();
            }
        }
        acc.renormalize();
        acc
    }
}

/// `x · 2^e` without intermediate overflow for large `|e|`.
pub fn ldexp(x: f64, e: i32) -> f64 {
    let mut x = x;
    let mut e = e;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e)
}

/// Where a nodal system came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NodeSource {
    /// The `n` roots of `z^n = c`.
    RootsOfUnimodular { c: Complex64 },
    /// Zeros of `φ_n + τ φ_n*`.
    ParaOrthogonal { n: usize, tau: Complex64 },
    UserSupplied,
}

/// Distinct unimodular nodes with cached `W_n'(z_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NodalSystem {
    nodes: Vec<Complex64>,
    derivs: Vec<Complex64>,
    source: NodeSource,
}

impl NodalSystem {
    /// Validates `nodes` and computes `W_n'(z_j) = ∏_{k≠j}(z_j - z_k)`.
    pub fn new(nodes: Vec<Complex64>) -> Result<Self> {
        Self::with_source(nodes, NodeSource::UserSupplied)
    }

    pub fn with_source(nodes: Vec<Complex64>, source: NodeSource) -> Result<Self> {
        validate_nodes(&nodes)?;
        let derivs = general_derivs(&nodes)?;
        Ok(Self {
            nodes,
            derivs,
            source,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn derivs(&self) -> &[Complex64] {
        &self.derivs
    }

    pub fn source(&self) -> &NodeSource {
        &self.source
    }

    /// Node arguments in `[0, 2π)`, in node order.
    pub fn angles(&self) -> Vec<f64> {
        self.nodes.iter().map(|&z| angle_0_2pi(z)).collect()
    }

    /// `W_n(z)` in scaled form.
    pub fn eval_nodal(&self, z: Complex64) -> ScaledComplex {
        ScaledComplex::product(self.nodes.iter().map(|&zj| z - zj))
    }

    /// `∏_{k≠j}(z - z_k)`, i.e. `W_n(z)/(z - z_j)` without cancellation.
    pub fn product_excluding(&self, z: Complex64, j: usize) -> ScaledComplex {
        ScaledComplex::product(
            self.nodes
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, &zk)| z - zk),
        )
    }

    /// Index of the node closest to `z`.
    pub fn nearest_node(&self, z: Complex64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (j, &zj) in self.nodes.iter().enumerate() {
            let d = (z - zj).norm_sqr();
            if d < best_d {
                best_d = d;
                best = j;
            }
        }
        best
    }

    /// `W_n'(z)` at an arbitrary point, stable near nodes.
    pub fn eval_nodal_derivative(&self, z: Complex64) -> Complex64 {
        self.point_quantities(z).derivative
    }

    /// Per-point quantities shared by the condition estimates and the
    /// Lebesgue function. Everything is expressed through the nearest node
    /// `m` and `P = ∏_{k≠m}(z - z_k)`, which removes the singularities at
    /// the nodes exactly.
    pub(crate) fn point_quantities(&self, z: Complex64) -> PointQuantities {
        let n = self.nodes.len();
        let m = self.nearest_node(z);
        let dm = z - self.nodes[m];
        let mut prod = ScaledComplex::one();
        let mut inv_sum = Complex64::new(0.0, 0.0);
        let mut inv_sq_sum = 0.0;
        let mut leb_sum = 0.0;
        let mut count = 0usize;
        for (k, (&zk, &dk)) in self.nodes.iter().zip(&self.derivs).enumerate() {
            if k == m {
                continue;
            }
            let d = z - zk;
            prod.mul_assign_complex(d);
            count += 1;
            if count.is_multiple_of(RENORM_EVERY) {
                prod.renormalize();
            }
            let inv = d.inv();
            inv_sum += inv;
            let a = d.norm();
            inv_sq_sum += 1.0 / (a * a);
            leb_sum += 1.0 / (dk.norm() * a);
        }
        prod.renormalize();
        let derivative = prod.scale(Complex64::new(1.0, 0.0) + dm * inv_sum);
        let dmn = dm.norm();
        let cond2 = {
            let pn = prod.norm();
            pn * pn * (1.0 + dmn * dmn * inv_sq_sum) / (n as f64 * n as f64)
        };
        let lebesgue = if dmn < near_node_eps(n) {
            1.0
        } else {
            prod.scale_norm(1.0 / self.derivs[m].norm() + dmn * leb_sum)
        };
        PointQuantities {
            derivative,
            cond2,
            lebesgue,
        }
    }
}

pub(crate) struct PointQuantities {
    pub derivative: Complex64,
    /// `|W_n(z)|²/n² · Σ_j 1/|z - z_j|²`, with its removable singularities
    /// filled in.
    pub cond2: f64,
    /// `Σ_j |W_n(z)| / (|W_n'(z_j)| |z - z_j|)`.
    pub lebesgue: f64,
}

/// Distance below which a point is treated as the node itself.
pub fn near_node_eps(n: usize) -> f64 {
    1e-13 * n as f64
}

fn validate_nodes(nodes: &[Complex64]) -> Result<()> {
    if nodes.is_empty() {
        return Err(Error::Validation("nodal system needs at least one node".into()));
    }
    for (j, z) in nodes.iter().enumerate() {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::Validation(format!("node {j} is not finite")));
        }
        let dev = (z.norm() - 1.0).abs();
        if dev > UNIMODULAR_TOL {
            return Err(Error::Validation(format!(
                "node {j} = {z} is off the unit circle by {dev:e}"
            )));
        }
    }
    // On the circle the chordally nearest pair is adjacent in argument.
    let mut order: Vec<(f64, usize)> = nodes
        .iter()
        .enumerate()
        .map(|(j, &z)| (angle_0_2pi(z), j))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = order.len();
    if n > 1 {
        for i in 0..n {
            let (a, b) = (order[i].1, order[(i + 1) % n].1);
            let d = (nodes[a] - nodes[b]).norm();
            if d <= DISTINCT_TOL {
                return Err(Error::Validation(format!(
                    "nodes {a} and {b} are {d:e} apart (minimum {DISTINCT_TOL:e})"
                )));
            }
        }
    }
    Ok(())
}

fn general_derivs(nodes: &[Complex64]) -> Result<Vec<Complex64>> {
    nodes
        .iter()
        .enumerate()
        .map(|(j, &zj)| {
            let p = ScaledComplex::product(
                nodes
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, &zk)| zj - zk),
            )
            .to_complex();
            if p.re.is_finite() && p.im.is_finite() && p != Complex64::new(0.0, 0.0) {
                Ok(p)
            } else {
                Err(Error::Validation(format!(
                    "W_n'(z_{j}) is not representable in double precision"
                )))
            }
        })
        .collect()
}

/// Free-function form of [`NodalSystem::new`].
pub fn make_nodal_system(nodes: Vec<Complex64>) -> Result<NodalSystem> {
    NodalSystem::new(nodes)
}

/// The `n` roots of `z^n = c` for unimodular `c`, so that
/// `W_n(z) = z^n - c` and `W_n'(z_j) = n z_j^{n-1} = n c / z_j`.
pub fn roots_of_unimodular(n: usize, c: Complex64) -> Result<NodalSystem> {
    if n == 0 {
        return Err(Error::Validation("need at least one node".into()));
    }
    let dev = (c.norm() - 1.0).abs();
    if dev > UNIMODULAR_TOL {
        return Err(Error::Validation(format!(
            "|c| must be 1, got |c| - 1 = {dev:e}"
        )));
    }
    let base = c.arg();
    let nodes: Vec<Complex64> = (0..n)
        .map(|k| cis((base + TAU * k as f64) / n as f64))
        .collect();
    let nf = n as f64;
    let derivs = nodes.iter().map(|z| c * z.conj() * nf).collect();
    Ok(NodalSystem {
        nodes,
        derivs,
        source: NodeSource::RootsOfUnimodular { c },
    })
}

/// `W_n(z)` as a mantissa/exponent pair.
pub fn eval_nodal_poly(system: &NodalSystem, z: Complex64) -> ScaledComplex {
    system.eval_nodal(z)
}

/// Recommended number of uniform grid angles for condition estimates.
pub fn default_grid_size(n: usize) -> usize {
    4096.max(16 * n)
}

/// Uniform angles `2πk/m`, the midpoints between consecutive node
/// arguments, and the nodes themselves.
pub fn estimation_grid(system: &NodalSystem, uniform: usize) -> Vec<Complex64> {
    let mut grid: Vec<Complex64> = (0..uniform)
        .map(|k| cis(TAU * k as f64 / uniform as f64))
        .collect();
    let mut angles = system.angles();
    angles.sort_by(f64::total_cmp);
    let n = angles.len();
    for i in 0..n {
        let a = angles[i];
        let b = if i + 1 < n { angles[i + 1] } else { angles[0] + TAU };
        grid.push(cis(0.5 * (a + b)));
    }
    grid.extend_from_slice(system.nodes());
    grid
}

/// Grid estimates of the constants controlling the Lebesgue function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodalConditionReport {
    pub n: usize,
    /// `min |W_n'(z)|/n` over the full grid (which includes the nodes).
    pub b_hat: f64,
    /// `min |W_n'(z_j)|/n` over the nodes only.
    pub b_hat_nodes: f64,
    /// `max |W_n(z)|²/n² Σ_j 1/|z - z_j|²` over the grid.
    pub l_hat: f64,
    /// `max Σ_j |l_j(z)|` over the grid.
    pub lebesgue_max: f64,
    /// `(√L̂ / B̂) √n`.
    pub lebesgue_bound: f64,
    /// Number of uniform angles requested.
    pub grid_size: usize,
    /// Total number of evaluation points (uniform, midpoints, nodes).
    pub grid_points: usize,
    pub warning: Option<String>,
}

/// Estimates `B`, `L` and the Lebesgue maximum on [`estimation_grid`].
pub fn estimate_conditions(system: &NodalSystem, grid_size: usize) -> NodalConditionReport {
    let n = system.len();
    let grid = estimation_grid(system, grid_size);
    let (b_grid, l_hat, leb_max) = grid
        .par_iter()
        .map(|&z| {
            let q = system.point_quantities(z);
            (q.derivative.norm() / n as f64, q.cond2, q.lebesgue)
        })
        .reduce(
            || (f64::INFINITY, 0.0f64, 0.0f64),
            |a, b| (a.0.min(b.0), a.1.max(b.1), a.2.max(b.2)),
        );
    let b_nodes = system
        .derivs()
        .iter()
        .map(|d| d.norm() / n as f64)
        .fold(f64::INFINITY, f64::min);
    let b_hat = b_grid.min(b_nodes);
    let warning = (grid_size < n).then(|| {
        format!("grid of {grid_size} angles is coarser than the {n} nodes; estimates unreliable")
    });
    NodalConditionReport {
        n,
        b_hat,
        b_hat_nodes: b_nodes,
        l_hat,
        lebesgue_max: leb_max,
        lebesgue_bound: l_hat.sqrt() / b_hat * (n as f64).sqrt(),
        grid_size,
        grid_points: grid.len(),
        warning,
    }
}

/// `Σ_j |l_{j,n-1}(z)|`; exactly 1 at the nodes.
pub fn lebesgue_function(system: &NodalSystem, plan: &DegreePlan, z: Complex64) -> Result<f64> {
    if plan.n != system.len() {
        return Err(Error::InvalidArgument(format!(
            "plan is for {} nodes, system has {}",
            plan.n,
            system.len()
        )));
    }
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("Lebesgue function at z = 0".into()));
    }
    let leb = system.point_quantities(z).lebesgue;
    // |z_j^p / z^p| = |z|^{-p} off the circle
    Ok(if leb == 1.0 { 1.0 } else { leb * z.norm().powi(-(plan.p as i32)) })
}
