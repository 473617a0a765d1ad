//! Laurent polynomials on the window `-p..=q` and degree planning.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::{cis, Error, Result};

/// An element of `span{z^k : -p <= k <= q}`.
///
/// `coeffs[i]` is the coefficient of `z^(i - p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPolynomial {
    p: usize,
    q: usize,
    coeffs: Vec<Complex64>,
}

impl LaurentPolynomial {
    pub fn new(p: usize, q: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != p + q + 1 {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients for window [-{p}, {q}], got {}",
                p + q + 1,
                coeffs.len()
            )));
        }
        Ok(Self { p, q, coeffs })
    }

    pub fn zero(p: usize, q: usize) -> Self {
        Self {
            p,
            q,
            coeffs: vec![Complex64::new(0.0, 0.0); p + q + 1],
        }
    }

    /// Lowest exponent is `-p`.
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`; zero outside the window.
    pub fn coeff(&self, k: i64) -> Complex64 {
        let idx = k + self.p as i64;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[idx as usize]
        }
    }

    pub fn set_coeff(&mut self, k: i64, value: Complex64) -> Result<()> {
        let idx = k + self.p as i64;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            return Err(Error::InvalidArgument(format!(
                "exponent {k} outside window [-{}, {}]",
                self.p, self.q
            )));
        }
        self.coeffs[idx as usize] = value;
        Ok(())
    }

    /// Sum of coefficient moduli; bounds `|L(z)|` on the unit circle.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Evaluates at `z != 0`.
    ///
    /// The nonnegative part is evaluated by Horner in `z`, the negative part
    /// by Horner in `1/z`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z == Complex64::new(0.0, 0.0) {
            return Err(Error::Domain(
                "Laurent polynomial evaluated at z = 0".into(),
            ));
        }
        let p = self.p;
        let mut pos = Complex64::new(0.0, 0.0);
        for c in self.coeffs[p..].iter().rev() {
            pos = pos * z + c;
        }
        if p == 0 {
            return Ok(pos);
        }
        let w = z.inv();
        let mut neg = Complex64::new(0.0, 0.0);
        // coeffs[0] is z^{-p}, coeffs[p-1] is z^{-1}
        for c in self.coeffs[..p].iter() {
            neg = neg * w + c;
        }
        Ok(pos + neg * w)
    }
}

/// Free-function form of [`LaurentPolynomial::eval`].
pub fn eval_laurent(l: &LaurentPolynomial, z: Complex64) -> Result<Complex64> {
    l.eval(z)
}

/// Bookkeeping for the interpolation space `Λ_{-p,q}` with `p + q = n - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreePlan {
    pub n: usize,
    /// Target ratio `p/(n-1)`; `None` for plans built from an explicit split.
    pub r: Option<f64>,
    pub p: usize,
    pub q: usize,
    /// `min(p, q)`.
    pub s: usize,
}

impl DegreePlan {
    /// Plan with `p = floor(r (n-1))`.
    pub fn from_ratio(n: usize, r: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "degree plan needs n >= 2, got {n}"
            )));
        }
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "ratio r must lie in (0, 1), got {r}"
            )));
        }
        let p = (r * (n - 1) as f64).floor() as usize;
        let q = n - 1 - p;
        Ok(Self {
            n,
            r: Some(r),
            p,
            q,
            s: p.min(q),
        })
    }

    /// Plan with an explicit lower window `p`; valid for any `n >= 1`.
    pub fn with_split(n: usize, p: usize) -> Result<Self> {
        if n == 0 || p > n - 1 {
            return Err(Error::InvalidArgument(format!(
                "split p = {p} is incompatible with n = {n}"
            )));
        }
        let q = n - 1 - p;
        Ok(Self {
            n,
            r: None,
            p,
            q,
            s: p.min(q),
        })
    }
}

/// Free-function form of [`DegreePlan::from_ratio`].
pub fn make_degree_plan(n: usize, r: f64) -> Result<DegreePlan> {
    DegreePlan::from_ratio(n, r)
}

/// The `m`-th roots of unity `e^{2πij/m}`, `j = 0..m`.
pub fn roots_of_unity(m: usize) -> Vec<Complex64> {
    (0..m).map(|j| cis(TAU * j as f64 / m as f64)).collect()
}

/// Recovers the unique `L` in `Λ_{-p, m-1-p}` whose values at the `m`-th
/// roots of unity are `samples`.
///
/// `z^p L(z)` is a polynomial of degree `<= m-1`, so its coefficients are
/// the normalized DFT of the rotated samples.
pub fn coefficients_from_samples(samples: &[Complex64], p: usize) -> Result<LaurentPolynomial> {
    let m = samples.len();
    if m == 0 {
        return Err(Error::InvalidArgument("no samples supplied".into()));
    }
    if p >= m {
        return Err(Error::InvalidArgument(format!(
            "window p = {p} needs at least {} samples, got {m}",
            p + 1
        )));
    }
    let mut buf: Vec<Complex64> = samples
        .iter()
        .enumerate()
        .map(|(j, &u)| {
            // z_j^p via the reduced index keeps the phase exact
            let k = (j * p) % m;
            u * cis(TAU * k as f64 / m as f64)
        })
        .collect();
    let fft = forward_fft(m);
    fft.process(&mut buf);
    let scale = 1.0 / m as f64;
    for c in buf.iter_mut() {
        *c *= scale;
    }
    LaurentPolynomial::new(p, m - 1 - p, buf)
}

pub(crate) fn forward_fft(m: usize) -> Arc<dyn rustfft::Fft<f64>> {
    FftPlanner::<f64>::new().plan_fft_forward(m)
}

pub(crate) fn inverse_fft(m: usize) -> Arc<dyn rustfft::Fft<f64>> {
    FftPlanner::<f64>::new().plan_fft_inverse(m)
}
