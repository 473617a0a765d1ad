//! Orthogonal polynomials on the unit circle.
//!
//! Convention: monic `φ_0 = 1` and
//!
//! ```text
//! φ_{k+1}(z) = z φ_k(z) - conj(α_k) φ_k*(z),     φ_k*(z) = z^k conj(φ_k(1/conj z))
//! ```
//!
//! so `φ_{k+1}(0) = -conj(α_k)`. Para-orthogonal polynomials
//! `ω_n(z, τ) = φ_n(z) + τ φ_n*(z)` with `|τ| = 1` have `n` simple zeros on
//! the unit circle; those zeros are the nodal systems used for
//! interpolation.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::nodal::{NodalSystem, NodeSource};
use crate::quadrature::{trigonometric_moments, QuadratureOptions};
use crate::roots::{eval_poly_with_derivative, polynomial_roots};
use crate::{angle_0_2pi, Error, Result};

/// Verblunsky coefficients this close to the circle are rejected.
pub const ALPHA_MARGIN: f64 = 1e-8;
/// Largest `||z| - 1|` accepted from the eigensolver before projection.
pub const ZERO_MODULUS_TOL: f64 = 1e-6;
/// Minimum chordal separation between zeros.
pub const ZERO_DISTINCT_TOL: f64 = 1e-10;

/// Conjugated reversal `z^k conj(p(1/conj z))` of a degree-`k` polynomial.
pub fn reversed(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs.iter().rev().map(|c| c.conj()).collect()
}

/// Monic OPUC `φ_0..φ_N` built from Verblunsky coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct OpucState {
    alphas: Vec<Complex64>,
    phis: Vec<Vec<Complex64>>,
    phi_stars: Vec<Vec<Complex64>>,
    phi_at_zero: Vec<Complex64>,
}

impl OpucState {
    /// Largest degree stored.
    pub fn degree(&self) -> usize {
        self.phis.len() - 1
    }

    pub fn alphas(&self) -> &[Complex64] {
        &self.alphas
    }

    /// Coefficients of `φ_k` in ascending powers.
    pub fn phi(&self, k: usize) -> &[Complex64] {
        &self.phis[k]
    }

    pub fn phi_star(&self, k: usize) -> &[Complex64] {
        &self.phi_stars[k]
    }

    pub fn phi_at_zero(&self) -> &[Complex64] {
        &self.phi_at_zero
    }
}

/// Runs the Szegő recurrence through degree `n`.
pub fn szego_recurrence(alphas: &[Complex64], n: usize) -> Result<OpucState> {
    if alphas.len() < n {
        return Err(Error::InvalidArgument(format!(
            "degree {n} needs {n} Verblunsky coefficients, got {}",
            alphas.len()
        )));
    }
    for (k, a) in alphas[..n].iter().enumerate() {
        let m = a.norm();
        if !(m < 1.0 - ALPHA_MARGIN) {
            return Err(Error::InvalidArgument(format!(
                "|α_{k}| = {m} is not inside the unit disk (margin {ALPHA_MARGIN:e})"
            )));
        }
    }
    let one = Complex64::new(1.0, 0.0);
    let mut phis = Vec::with_capacity(n + 1);
    let mut phi_stars = Vec::with_capacity(n + 1);
    phis.push(vec![one]);
    phi_stars.push(vec![one]);
    for (k, &alpha) in alphas[..n].iter().enumerate() {
        let (phi, star) = (&phis[k], &phi_stars[k]);
        let ac = alpha.conj();
        let mut next = vec![Complex64::new(0.0, 0.0); k + 2];
        for (i, c) in phi.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in star.iter().enumerate() {
            next[i] -= ac * c;
        }
        phi_stars.push(reversed(&next));
        phis.push(next);
    }
    let phi_at_zero = phis.iter().map(|p| p[0]).collect();
    Ok(OpucState {
        alphas: alphas[..n].to_vec(),
        phis,
        phi_stars,
        phi_at_zero,
    })
}

/// Nonnegative weight `θ ↦ w(θ)` on `[0, 2π)`.
pub type WeightFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum MeasureKind {
    /// `dθ/2π`.
    Lebesgue,
    /// Verblunsky coefficients `α_0..α_{m-1}`, zero afterwards
    /// (Bernstein–Szegő measures).
    FiniteVerblunsky(Vec<Complex64>),
    /// `w(θ) dθ`, handled through trapezoid moments.
    QuadratureWeight(WeightFn),
}

impl fmt::Debug for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureKind::Lebesgue => write!(f, "Lebesgue"),
            MeasureKind::FiniteVerblunsky(a) => f.debug_tuple("FiniteVerblunsky").field(a).finish(),
            MeasureKind::QuadratureWeight(_) => write!(f, "QuadratureWeight(..)"),
        }
    }
}

/// A measure on the unit circle together with its total mass.
#[derive(Clone, Debug)]
pub struct MeasureSpec {
    pub kind: MeasureKind,
    pub normalization: f64,
    pub quadrature: QuadratureOptions,
}

impl MeasureSpec {
    pub fn lebesgue() -> Self {
        Self {
            kind: MeasureKind::Lebesgue,
            normalization: 1.0,
            quadrature: QuadratureOptions::default(),
        }
    }

    pub fn finite_verblunsky(alphas: Vec<Complex64>) -> Result<Self> {
        for (k, a) in alphas.iter().enumerate() {
            if !(a.norm() < 1.0) {
                return Err(Error::InvalidArgument(format!("|α_{k}| = {} >= 1", a.norm())));
            }
        }
        Ok(Self {
            kind: MeasureKind::FiniteVerblunsky(alphas),
            normalization: 1.0,
            quadrature: QuadratureOptions::default(),
        })
    }

    /// Measure `w(θ) dθ`; the weight is checked for nonnegativity on the
    /// quadrature grid and its mass computed.
    pub fn from_weight<W>(weight: W) -> Result<Self>
    where
        W: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let weight: WeightFn = Arc::new(weight);
        let quadrature = QuadratureOptions::default();
        let w = weight.clone();
        let m = trigonometric_moments(move |t| w(t), 0, &quadrature)?;
        Ok(Self {
            kind: MeasureKind::QuadratureWeight(weight),
            normalization: m[0].re,
            quadrature,
        })
    }

    /// Bernstein–Szegő weight `1/|h(e^{iθ})|²` for a polynomial `h`
    /// (ascending coefficients) without zeros in the closed unit disk.
    pub fn bernstein_szego(h: Vec<Complex64>) -> Result<Self> {
        if h.iter().all(|c| *c == Complex64::new(0.0, 0.0)) {
            return Err(Error::InvalidArgument("h is identically zero".into()));
        }
        for r in polynomial_roots(&h)? {
            if r.norm() <= 1.0 + 1e-12 {
                return Err(Error::InvalidArgument(format!(
                    "h vanishes at {r} inside the closed unit disk"
                )));
            }
        }
        Self::from_weight(move |t| {
            let z = crate::cis(t);
            1.0 / crate::roots::eval_poly(&h, z).norm_sqr()
        })
    }

    /// First `n` Verblunsky coefficients of the measure.
    pub fn verblunsky(&self, n: usize) -> Result<Vec<Complex64>> {
        match &self.kind {
            MeasureKind::Lebesgue => Ok(vec![Complex64::new(0.0, 0.0); n]),
            MeasureKind::FiniteVerblunsky(a) => {
                let mut out: Vec<Complex64> = a.iter().take(n).copied().collect();
                out.resize(n, Complex64::new(0.0, 0.0));
                Ok(out)
            }
            MeasureKind::QuadratureWeight(_) => moments_to_verblunsky(self, n),
        }
    }

    /// OPUC state through degree `n`.
    pub fn opuc_state(&self, n: usize) -> Result<OpucState> {
        szego_recurrence(&self.verblunsky(n)?, n)
    }
}

/// Verblunsky coefficients `α_0..α_{n-1}` of a weight-specified measure.
///
/// With `m_k = ∫ e^{ikθ} w(θ) dθ`, orthogonality of `φ_{k+1}` to the
/// constants gives `conj(α_k) = ⟨z φ_k, 1⟩ / ⟨φ_k*, 1⟩`, both inner
/// products being linear combinations of the moments.
pub fn moments_to_verblunsky(spec: &MeasureSpec, n: usize) -> Result<Vec<Complex64>> {
    let weight = match &spec.kind {
        MeasureKind::QuadratureWeight(w) => w.clone(),
        _ => {
            return Err(Error::InvalidArgument(
                "moment recovery needs a quadrature-weight measure".into(),
            ))
        }
    };
    if n == 0 {
        return Ok(Vec::new());
    }
    let m = trigonometric_moments(move |t| weight(t), n, &spec.quadrature)?;
    let mut alphas = Vec::with_capacity(n);
    let mut phi = vec![Complex64::new(1.0, 0.0)];
    for k in 0..n {
        let star = reversed(&phi);
        let num: Complex64 = phi.iter().enumerate().map(|(i, c)| c * m[i + 1]).sum();
        let den: Complex64 = star.iter().enumerate().map(|(i, c)| c * m[i]).sum();
        if !(den.re > 0.0) {
            return Err(Error::InvalidMeasure(format!(
                "‖φ_{k}‖² = {den} is not positive"
            )));
        }
        let ac = num / den;
        if !(ac.norm() < 1.0) {
            return Err(Error::InvalidMeasure(format!(
                "recovered |α_{k}| = {} >= 1",
                ac.norm()
            )));
        }
        alphas.push(ac.conj());
        let mut next = vec![Complex64::new(0.0, 0.0); k + 2];
        for (i, c) in phi.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in star.iter().enumerate() {
            next[i] -= ac * c;
        }
        phi = next;
    }
    Ok(alphas)
}

/// Degree and unimodular parameter of `ω_n(z, τ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParaOrthogonalSpec {
    pub n: usize,
    pub tau: Complex64,
}

impl ParaOrthogonalSpec {
    pub fn new(n: usize, tau: Complex64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("para-orthogonal degree must be >= 1".into()));
        }
        let dev = (tau.norm() - 1.0).abs();
        if dev > crate::nodal::UNIMODULAR_TOL {
            return Err(Error::InvalidArgument(format!(
                "|τ| must be 1, got |τ| - 1 = {dev:e}"
            )));
        }
        Ok(Self { n, tau })
    }
}

/// Coefficients of `φ_n + τ φ_n*`.
pub fn paraorthogonal(state: &OpucState, spec: &ParaOrthogonalSpec) -> Result<Vec<Complex64>> {
    if spec.n > state.degree() {
        return Err(Error::InvalidArgument(format!(
            "state holds degree {}, need {}",
            state.degree(),
            spec.n
        )));
    }
    Ok(state
        .phi(spec.n)
        .iter()
        .zip(state.phi_star(spec.n))
        .map(|(a, b)| a + spec.tau * b)
        .collect())
}

/// Zeros of `ω_n(z, τ)` with diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct ParaOrthogonalZeros {
    /// Unimodular zeros sorted by argument in `[0, 2π)`.
    pub zeros: Vec<Complex64>,
    /// Largest `||z| - 1|` of the raw eigenvalues.
    pub max_modulus_deviation: f64,
    /// Largest `|ω_n(z_j)|` after polishing.
    pub max_residual: f64,
    pub coeffs: Vec<Complex64>,
}

/// Eigenvalues of the companion matrix, projected onto the circle and
/// polished by one Newton step.
pub fn paraorthogonal_zeros(state: &OpucState, spec: &ParaOrthogonalSpec) -> Result<ParaOrthogonalZeros> {
    let coeffs = paraorthogonal(state, spec)?;
    let raw = polynomial_roots(&coeffs)?;
    if raw.len() != spec.n {
        return Err(Error::RootFinding(format!(
            "expected {} zeros, found {}",
            spec.n,
            raw.len()
        )));
    }
    let mut max_dev = 0.0f64;
    let mut zeros = Vec::with_capacity(raw.len());
    for z in raw {
        let dev = (z.norm() - 1.0).abs();
        if !(dev <= ZERO_MODULUS_TOL) {
            return Err(Error::MeasureAssumptionViolated(format!(
                "zero {z} is off the unit circle by {dev:e}"
            )));
        }
        max_dev = max_dev.max(dev);
        let mut w = z / z.norm();
        let (v, d) = eval_poly_with_derivative(&coeffs, w);
        if d != Complex64::new(0.0, 0.0) {
            let stepped = w - v / d;
            let r = stepped.norm();
            if r.is_finite() && r > 0.0 {
                w = stepped / r;
            }
        }
        zeros.push(w);
    }
    zeros.sort_by(|a, b| angle_0_2pi(*a).total_cmp(&angle_0_2pi(*b)));
    let n = zeros.len();
    if n > 1 {
        for i in 0..n {
            let d = (zeros[i] - zeros[(i + 1) % n]).norm();
            if d <= ZERO_DISTINCT_TOL {
                return Err(Error::Degeneracy(format!(
                    "zeros {i} and {} of ω_{} are {d:e} apart",
                    (i + 1) % n,
                    spec.n
                )));
            }
        }
    }
    let max_residual = zeros
        .iter()
        .map(|&z| eval_poly_with_derivative(&coeffs, z).0.norm())
        .fold(0.0, f64::max);
    Ok(ParaOrthogonalZeros {
        zeros,
        max_modulus_deviation: max_dev,
        max_residual,
        coeffs,
    })
}

/// The zeros of `ω_n(z, τ)` as a nodal system.
pub fn paraorthogonal_nodes(state: &OpucState, spec: &ParaOrthogonalSpec) -> Result<NodalSystem> {
    let z = paraorthogonal_zeros(state, spec)?;
    NodalSystem::with_source(
        z.zeros,
        NodeSource::ParaOrthogonal {
            n: spec.n,
            tau: spec.tau,
        },
    )
}
