//! Transfer of circle interpolation to `[-1, 1]` and to `[0, 2π]`.
//!
//! Under `x = (z + 1/z)/2` a weight `w` on `[-1, 1]` becomes the circle
//! weight `½ w(cos θ)|sin θ|`. Zeros of para-orthogonal polynomials of that
//! measure come in conjugate pairs (plus possibly `±1`), and their real
//! parts are the zeros of the orthogonal polynomials for `w`, `(1-x²)w`,
//! `(1-x)w` or `(1+x)w`, depending on the degree and `τ`:
//!
//! | variant | polynomial          | interval nodes          |
//! |---------|---------------------|-------------------------|
//! | `Mu1`   | `ω_{2n}(z, 1)`      | `n` interior            |
//! | `Mu2`   | `ω_{2n+2}(z, -1)`   | `n` interior, `-1`, `1` |
//! | `Mu3`   | `ω_{2n+1}(z, -1)`   | `n` interior, `1`       |
//! | `Mu4`   | `ω_{2n+1}(z, 1)`    | `n` interior, `-1`      |
//!
//! A function `f` on `[-1, 1]` lifts to `F(z) = f(Re z)`; interpolating `F`
//! on the conjugate-closed system and symmetrizing `½(L(z) + L(1/z))` gives
//! the polynomial interpolant of `f`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::interp::{interpolate, CircleInterpolant};
use crate::laurent::{DegreePlan, LaurentPolynomial};
use crate::nodal::NodalSystem;
use crate::opuc::{paraorthogonal_nodes, paraorthogonal_zeros, MeasureSpec, OpucState, ParaOrthogonalSpec};
use crate::{angle_0_2pi, cis, Error, Result};

/// Zeros with `|Im z|` at most this are taken to be `±1`.
pub const REAL_AXIS_TOL: f64 = 1e-12;
/// Tolerance for pairing a lower-half zero with its upper-half conjugate.
pub const CONJUGATE_PAIR_TOL: f64 = 1e-9;
/// Largest imaginary residue accepted from the symmetrized interpolant,
/// relative to the data scale.
pub const SYMMETRY_TOL: f64 = 1e-9;

/// Nonnegative weight on `[-1, 1]`.
pub type IntervalWeight = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `θ ↦ ½ w(cos θ) |sin θ|`.
pub fn szego_weight<W>(w: W) -> impl Fn(f64) -> f64 + Send + Sync
where
    W: Fn(f64) -> f64 + Send + Sync,
{
    move |theta: f64| 0.5 * w(theta.cos()) * theta.sin().abs()
}

/// The circle measure `½ w(cos θ) |sin θ| dθ` as a quadrature-weight
/// measure.
pub fn szego_transform_weight<W>(w: W) -> Result<MeasureSpec>
where
    W: Fn(f64) -> f64 + Send + Sync + 'static,
{
    MeasureSpec::from_weight(szego_weight(w))
}

/// `1/√(1-x²)`.
pub fn chebyshev1_weight(x: f64) -> f64 {
    1.0 / (1.0 - x * x).sqrt()
}

/// `√(1-x²)`.
pub fn chebyshev2_weight(x: f64) -> f64 {
    (1.0 - x * x).max(0.0).sqrt()
}

/// Which orthogonal family (and endpoint augmentation) the interval nodes
/// come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntervalVariant {
    Mu1,
    Mu2,
    Mu3,
    Mu4,
}

impl IntervalVariant {
    /// Degree and `τ` of the para-orthogonal polynomial for `n` interior
    /// nodes.
    pub fn paraorthogonal(&self, n: usize) -> (usize, Complex64) {
        match self {
            IntervalVariant::Mu1 => (2 * n, Complex64::new(1.0, 0.0)),
            IntervalVariant::Mu2 => (2 * n + 2, Complex64::new(-1.0, 0.0)),
            IntervalVariant::Mu3 => (2 * n + 1, Complex64::new(-1.0, 0.0)),
            IntervalVariant::Mu4 => (2 * n + 1, Complex64::new(1.0, 0.0)),
        }
    }

    pub fn endpoints(&self) -> EndpointFlags {
        match self {
            IntervalVariant::Mu1 => EndpointFlags { plus_one: false, minus_one: false },
            IntervalVariant::Mu2 => EndpointFlags { plus_one: true, minus_one: true },
            IntervalVariant::Mu3 => EndpointFlags { plus_one: true, minus_one: false },
            IntervalVariant::Mu4 => EndpointFlags { plus_one: false, minus_one: true },
        }
    }

    /// Lower window `p` of the circle plan for `n` interior nodes.
    pub fn plan_p(&self, n: usize) -> usize {
        match self {
            IntervalVariant::Mu1 => n,
            IntervalVariant::Mu2 => n + 1,
            IntervalVariant::Mu3 | IntervalVariant::Mu4 => n,
        }
    }
}

impl fmt::Display for IntervalVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IntervalVariant::Mu1 => "mu1",
            IntervalVariant::Mu2 => "mu2",
            IntervalVariant::Mu3 => "mu3",
            IntervalVariant::Mu4 => "mu4",
        };
        f.write_str(s)
    }
}

impl FromStr for IntervalVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mu1" | "1" => Ok(IntervalVariant::Mu1),
            "mu2" | "2" => Ok(IntervalVariant::Mu2),
            "mu3" | "3" => Ok(IntervalVariant::Mu3),
            "mu4" | "4" => Ok(IntervalVariant::Mu4),
            other => Err(Error::InvalidArgument(format!("unknown variant {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointFlags {
    pub plus_one: bool,
    pub minus_one: bool,
}

impl EndpointFlags {
    pub fn count(&self) -> usize {
        self.plus_one as usize + self.minus_one as usize
    }
}

/// Interval nodes together with their conjugate-closed circle preimages.
#[derive(Clone, Debug)]
pub struct IntervalNodalSystem {
    variant: IntervalVariant,
    /// Interior nodes, decreasing.
    xs: Vec<f64>,
    /// Upper-half-circle preimages of `xs`, increasing in argument.
    upper: Vec<Complex64>,
    endpoints: EndpointFlags,
    circle_system: NodalSystem,
}

impl IntervalNodalSystem {
    pub fn variant(&self) -> IntervalVariant {
        self.variant
    }

    /// Number of interior nodes.
    pub fn n(&self) -> usize {
        self.xs.len()
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn upper_zeros(&self) -> &[Complex64] {
        &self.upper
    }

    /// Arguments of the upper-half preimages, in `(0, π)`.
    pub fn thetas(&self) -> Vec<f64> {
        self.upper.iter().map(|z| z.arg()).collect()
    }

    pub fn endpoints(&self) -> EndpointFlags {
        self.endpoints
    }

    pub fn circle_system(&self) -> &NodalSystem {
        &self.circle_system
    }

    /// Interior nodes followed by the flagged endpoints (`1` before `-1`).
    pub fn all_nodes(&self) -> Vec<f64> {
        let mut v = self.xs.clone();
        if self.endpoints.plus_one {
            v.push(1.0);
        }
        if self.endpoints.minus_one {
            v.push(-1.0);
        }
        v
    }

    /// Rows `(j, x_j, θ_j, endpoint)` with 1-based `j`; endpoints carry
    /// `θ = 0` or `π`.
    pub fn rows(&self) -> Vec<(usize, f64, f64, bool)> {
        let mut rows: Vec<_> = self
            .xs
            .iter()
            .zip(&self.upper)
            .enumerate()
            .map(|(j, (&x, z))| (j + 1, x, z.arg(), false))
            .collect();
        let mut j = rows.len();
        if self.endpoints.plus_one {
            j += 1;
            rows.push((j, 1.0, 0.0, true));
        }
        if self.endpoints.minus_one {
            j += 1;
            rows.push((j, -1.0, PI, true));
        }
        rows
    }
}

/// Interval nodes from the para-orthogonal zeros of a circle measure
/// (already Szegő-transformed).
pub fn interval_nodes_from_measure(
    measure: &MeasureSpec,
    n: usize,
    variant: IntervalVariant,
) -> Result<IntervalNodalSystem> {
    let (deg, _) = variant.paraorthogonal(n);
    let state = measure.opuc_state(deg)?;
    interval_nodes_from_state(&state, n, variant)
}

/// Interval nodes for a weight `w` on `[-1, 1]`.
pub fn interval_nodes_from_weight<W>(w: W, n: usize, variant: IntervalVariant) -> Result<IntervalNodalSystem>
where
    W: Fn(f64) -> f64 + Send + Sync + 'static,
{
    interval_nodes_from_measure(&szego_transform_weight(w)?, n, variant)
}

pub fn interval_nodes_from_state(
    state: &OpucState,
    n: usize,
    variant: IntervalVariant,
) -> Result<IntervalNodalSystem> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one interior node".into()));
    }
    let (deg, tau) = variant.paraorthogonal(n);
    let zeros = paraorthogonal_zeros(state, &ParaOrthogonalSpec::new(deg, tau)?)?.zeros;

    let mut upper = Vec::new();
    let mut lower = Vec::new();
    let mut found = EndpointFlags { plus_one: false, minus_one: false };
    for z in zeros {
        if z.im > REAL_AXIS_TOL {
            upper.push(z);
        } else if z.im < -REAL_AXIS_TOL {
            lower.push(z);
        } else if z.re > 0.0 {
            found.plus_one = true;
        } else {
            found.minus_one = true;
        }
    }
    upper.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
    if upper.len() != lower.len() {
        return Err(Error::Symmetry(format!(
            "{} zeros above the real axis, {} below",
            upper.len(),
            lower.len()
        )));
    }
    for w in &lower {
        let best = upper
            .iter()
            .map(|u| (u.conj() - w).norm())
            .fold(f64::INFINITY, f64::min);
        if best > CONJUGATE_PAIR_TOL {
            return Err(Error::Symmetry(format!(
                "zero {w} has no conjugate partner (closest at {best:e})"
            )));
        }
    }
    let expected = variant.endpoints();
    if found != expected {
        return Err(Error::Variant(format!(
            "variant {variant} expects endpoints {expected:?}, zeros give {found:?}"
        )));
    }
    if upper.len() != n {
        return Err(Error::Variant(format!(
            "variant {variant} expects {n} interior nodes, found {}",
            upper.len()
        )));
    }

    let xs = upper.iter().map(|z| z.re).collect();
    let mut circle: Vec<Complex64> = upper.clone();
    circle.extend(upper.iter().map(|z| z.conj()));
    if found.plus_one {
        circle.push(Complex64::new(1.0, 0.0));
    }
    if found.minus_one {
        circle.push(Complex64::new(-1.0, 0.0));
    }
    Ok(IntervalNodalSystem {
        variant,
        xs,
        upper,
        endpoints: found,
        circle_system: NodalSystem::new(circle)?,
    })
}

/// Polynomial interpolant on `[-1, 1]` obtained through the circle.
#[derive(Clone, Debug)]
pub struct IntervalInterpolant {
    circle: CircleInterpolant,
    /// Chebyshev coefficients `e_k`: `Σ e_k T_k(x)`.
    chebyshev: Vec<f64>,
    scale: f64,
}

/// Interpolates `f` at the nodes of `sys` (interior and flagged endpoints).
pub fn interval_interpolate<F>(sys: &IntervalNodalSystem, f: F) -> Result<IntervalInterpolant>
where
    F: Fn(f64) -> f64,
{
    let circle = sys.circle_system();
    let values: Vec<Complex64> = circle
        .nodes()
        .iter()
        .map(|z| Complex64::new(f(z.re.clamp(-1.0, 1.0)), 0.0))
        .collect();
    // data on conjugate nodes must agree exactly
    let mut values = values;
    let n = sys.n();
    for j in 0..n {
        values[n + j] = values[j];
    }
    let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let plan = DegreePlan::with_split(circle.len(), sys.variant().plan_p(n))?;
    let interp = interpolate(circle, &plan, &values)?;
    let laurent = interp.to_laurent()?;
    let chebyshev = symmetrized_chebyshev(&laurent, scale)?;
    Ok(IntervalInterpolant {
        circle: interp,
        chebyshev,
        scale,
    })
}

/// Chebyshev coefficients of `½(L(z) + L(1/z))`.
fn symmetrized_chebyshev(l: &LaurentPolynomial, scale: f64) -> Result<Vec<f64>> {
    let m = l.p().max(l.q());
    let mut out = Vec::with_capacity(m + 1);
    for k in 0..=m as i64 {
        let e = if k == 0 {
            l.coeff(0)
        } else {
            l.coeff(k) + l.coeff(-k)
        };
        if e.im.abs() > SYMMETRY_TOL * scale {
            return Err(Error::Symmetry(format!(
                "Chebyshev coefficient {k} has imaginary part {:e}",
                e.im
            )));
        }
        out.push(e.re);
    }
    Ok(out)
}

impl IntervalInterpolant {
    pub fn circle_interpolant(&self) -> &CircleInterpolant {
        &self.circle
    }

    /// Coefficients in the Chebyshev basis `T_0, T_1, ...`.
    pub fn chebyshev_coeffs(&self) -> &[f64] {
        &self.chebyshev
    }

    /// Coefficients in the monomial basis `1, x, x², ...`.
    pub fn monomial_coeffs(&self) -> Vec<f64> {
        chebyshev_to_monomial(&self.chebyshev)
    }

    /// Value at `x ∈ [-1, 1]` via `½(L(z) + L(1/z))`,
    /// `z = x + i√(1-x²)`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(-1.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!("x = {x} outside [-1, 1]")));
        }
        let z = Complex64::new(x, (1.0 - x * x).max(0.0).sqrt());
        let v = if z.im == 0.0 {
            self.circle.eval(z)?
        } else {
            (self.circle.eval(z)? + self.circle.eval(z.conj())?) * 0.5
        };
        if v.im.abs() > SYMMETRY_TOL * self.scale {
            return Err(Error::Symmetry(format!(
                "symmetrized value at x = {x} has imaginary part {:e}",
                v.im
            )));
        }
        Ok(v.re)
    }

    /// Value by Clenshaw summation of the Chebyshev series.
    pub fn eval_chebyshev(&self, x: f64) -> f64 {
        clenshaw(&self.chebyshev, x)
    }
}

/// `Σ c_k T_k(x)`.
pub fn clenshaw(c: &[f64], x: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    c.first().copied().unwrap_or(0.0) + x * b1 - b2
}

fn chebyshev_to_monomial(c: &[f64]) -> Vec<f64> {
    let m = c.len();
    let mut out = vec![0.0; m.max(1)];
    let mut t_prev = vec![1.0];
    let mut t_cur = vec![0.0, 1.0];
    for (k, &ck) in c.iter().enumerate() {
        let t = match k {
            0 => t_prev.clone(),
            1 => t_cur.clone(),
            _ => {
                let mut next = vec![0.0; k + 1];
                for (i, &a) in t_cur.iter().enumerate() {
                    next[i + 1] += 2.0 * a;
                }
                for (i, &a) in t_prev.iter().enumerate() {
                    next[i] -= a;
                }
                t_prev = std::mem::replace(&mut t_cur, next);
                t_cur.clone()
            }
        };
        for (i, &a) in t.iter().enumerate() {
            out[i] += ck * a;
        }
    }
    out
}

/// A real trigonometric polynomial `a_0 + Σ_{k>=1} (a_k cos kθ + b_k sin kθ)`.
///
/// `b[0]` is unused and kept at zero so that `a` and `b` share indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigPolynomial {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// Largest imaginary part met while forming `a`, `b` from the complex
    /// Laurent coefficients.
    pub imag_residue: f64,
}

impl TrigPolynomial {
    pub fn degree(&self) -> usize {
        self.a.len().saturating_sub(1)
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let mut s = self.a[0];
        for k in 1..self.a.len() {
            let (sk, ck) = (k as f64 * theta).sin_cos();
            s += self.a[k] * ck + self.b[k] * sk;
        }
        s
    }

    /// `Re L(e^{iθ})` expanded in cosines and sines.
    pub fn from_laurent_real_part(l: &LaurentPolynomial) -> Self {
        let m = l.p().max(l.q());
        // Re L has coefficients d_k = (c_k + conj(c_{-k}))/2
        let d = |k: i64| (l.coeff(k) + l.coeff(-k).conj()) * 0.5;
        let mut a = vec![0.0; m + 1];
        let mut b = vec![0.0; m + 1];
        let d0 = d(0);
        a[0] = d0.re;
        let mut residue = d0.im.abs();
        for k in 1..=m {
            let (dp, dm) = (d(k as i64), d(-(k as i64)));
            let ak = dp + dm;
            let bk = (dp - dm) * Complex64::new(0.0, 1.0);
            residue = residue.max(ak.im.abs()).max(bk.im.abs());
            a[k] = ak.re;
            b[k] = bk.re;
        }
        Self {
            a,
            b,
            imag_residue: residue,
        }
    }
}

/// The `2n` angles `θ_j = arccos x_j` (`j = 1..n`, increasing) mirrored as
/// `θ_{n+j} = 2π - θ_{n-j+1}`, where `x_j` are the `Mu1` interval nodes.
pub fn trig_nodes_symmetric(measure: &MeasureSpec, n: usize) -> Result<Vec<f64>> {
    let sys = interval_nodes_from_measure(measure, n, IntervalVariant::Mu1)?;
    symmetric_angles(sys.xs())
}

fn symmetric_angles(xs: &[f64]) -> Result<Vec<f64>> {
    let mut thetas = Vec::with_capacity(2 * xs.len());
    for &x in xs {
        if x <= -1.0 || x >= 1.0 {
            return Err(Error::DegenerateAngle(format!(
                "node x = {x} is an endpoint and cannot be mirrored"
            )));
        }
        thetas.push(x.acos());
    }
    thetas.sort_by(f64::total_cmp);
    let n = thetas.len();
    for j in 0..n {
        thetas.push(TAU - thetas[n - 1 - j]);
    }
    Ok(thetas)
}

/// Interpolant of degree `<= n` at the `2n` symmetric angles, taken as
/// `Re L_{-n,n-1}(F; e^{iθ})` with `F(e^{iθ}) = f(θ)`.
pub fn trig_interpolate_symmetric<F>(measure: &MeasureSpec, n: usize, f: F) -> Result<TrigPolynomial>
where
    F: Fn(f64) -> f64,
{
    let thetas = trig_nodes_symmetric(measure, n)?;
    trig_interpolate_at(&thetas, n, f)
}

/// Interpolant of degree `<= floor(n/2)` at the arguments of the zeros of
/// `ω_n(z, τ)`; `p = n/2, q = n/2 - 1` for even `n`, `p = q = (n-1)/2` for
/// odd `n`.
pub fn trig_interpolate_paraorthogonal<F>(
    state: &OpucState,
    tau: Complex64,
    n: usize,
    f: F,
) -> Result<TrigPolynomial>
where
    F: Fn(f64) -> f64,
{
    let nodes = paraorthogonal_nodes(state, &ParaOrthogonalSpec::new(n, tau)?)?;
    let thetas: Vec<f64> = nodes.nodes().iter().map(|&z| angle_0_2pi(z)).collect();
    trig_interpolate_at(&thetas, paraorthogonal_trig_p(n), f)
}

/// Lower window used for trigonometric interpolation at `n` para-orthogonal
/// zeros.
pub fn paraorthogonal_trig_p(n: usize) -> usize {
    if n.is_multiple_of(2) {
        n / 2
    } else {
        (n - 1) / 2
    }
}

/// `Re L_{-p, N-1-p}` through `(e^{iθ_j}, f(θ_j))`.
pub fn trig_interpolate_at<F>(thetas: &[f64], p: usize, f: F) -> Result<TrigPolynomial>
where
    F: Fn(f64) -> f64,
{
    let system = NodalSystem::new(thetas.iter().map(|&t| cis(t)).collect())?;
    let plan = DegreePlan::with_split(system.len(), p)?;
    let values: Vec<Complex64> = thetas.iter().map(|&t| Complex64::new(f(t), 0.0)).collect();
    let l = interpolate(&system, &plan, &values)?.to_laurent()?;
    Ok(TrigPolynomial::from_laurent_real_part(&l))
}
