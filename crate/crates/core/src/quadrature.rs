//! Trigonometric moments of a weight on `[0, 2π)` by the periodic
//! trapezoid rule.
//!
//! Nodes sit at the cell midpoints `2π(j + ½)/N`, which keeps weights with
//! removable `0/0` forms at `θ = 0, π` (Szegő transforms of Jacobi-type
//! weights) away from the singular points. The point count doubles until
//! two successive moment vectors agree.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::laurent::inverse_fft;
use crate::{cis, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureOptions {
    /// Stop once `max_k |m_k(N) - m_k(N/2)| <= tol · |m_0|`.
    pub tol: f64,
    pub min_points: usize,
    pub max_points: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            min_points: 256,
            max_points: 1 << 20,
        }
    }
}

/// Midpoint-rule nodes `2π(j + ½)/n`.
pub fn midpoint_angles(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |j| TAU * (j as f64 + 0.5) / n as f64)
}

/// `∫_0^{2π} e^{ikθ} w(θ) dθ` for `k = 0..=kmax`.
pub fn trigonometric_moments<W>(weight: W, kmax: usize, opts: &QuadratureOptions) -> Result<Vec<Complex64>>
where
    W: Fn(f64) -> f64,
{
    let mut n = opts.min_points.max((4 * (kmax + 1)).next_power_of_two());
    let mut prev = moments_at(&weight, kmax, n)?;
    loop {
        if n >= opts.max_points {
            return Err(Error::Convergence(format!(
                "trapezoid moments up to order {kmax} not converged at {n} points"
            )));
        }
        n *= 2;
        let next = moments_at(&weight, kmax, n)?;
        let scale = next[0].norm().max(f64::MIN_POSITIVE);
        let diff = next
            .iter()
            .zip(&prev)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if diff <= opts.tol * scale {
            return Ok(next);
        }
        prev = next;
    }
}

fn moments_at<W: Fn(f64) -> f64>(weight: &W, kmax: usize, n: usize) -> Result<Vec<Complex64>> {
    let mut buf = Vec::with_capacity(n);
    for (j, theta) in midpoint_angles(n).enumerate() {
        let w = weight(theta);
        if !w.is_finite() || w < 0.0 {
            return Err(Error::InvalidMeasure(format!(
                "weight is {w} at θ = {theta} (sample {j} of {n})"
            )));
        }
        buf.push(Complex64::new(w, 0.0));
    }
    inverse_fft(n).process(&mut buf);
    let h = TAU / n as f64;
    let out: Vec<Complex64> = (0..=kmax)
        .map(|k| buf[k] * cis(PI * k as f64 / n as f64) * h)
        .collect();
    if out[0].re <= 0.0 {
        return Err(Error::InvalidMeasure("weight has zero total mass".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_weight() {
        let m = trigonometric_moments(|_| 1.0 / TAU, 10, &QuadratureOptions::default()).unwrap();
        assert!((m[0].re - 1.0).abs() < 1e-14);
        for mk in &m[1..] {
            assert!(mk.norm() < 1e-14);
        }
    }

    #[test]
    fn poisson_kernel_moments() {
        // 1/|1 - a e^{iθ}|² = (1 - a²)^{-1} Σ a^{|k|} e^{ikθ}
        let a: f64 = 0.5;
        let w = |t: f64| 1.0 / (Complex64::new(1.0, 0.0) - a * cis(t)).norm_sqr();
        let m = trigonometric_moments(w, 20, &QuadratureOptions::default()).unwrap();
        for (k, mk) in m.iter().enumerate() {
            let want = TAU * a.powi(k as i32) / (1.0 - a * a);
            assert!((mk - Complex64::new(want, 0.0)).norm() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn rejects_negative_and_nonconvergent_weights() {
        assert!(matches!(
            trigonometric_moments(|t| t.cos(), 3, &QuadratureOptions::default()),
            Err(Error::InvalidMeasure(_))
        ));
        // a jump converges only at first order
        let opts = QuadratureOptions {
            max_points: 1 << 12,
            ..Default::default()
        };
        assert!(matches!(
            trigonometric_moments(|t| if t < 1.0 { 1.0 } else { 2.0 }, 3, &opts),
            Err(Error::Convergence(_))
        ));
    }
}
