//! Lagrange interpolation by Laurent polynomials on the unit circle.
//!
//! Given `n` distinct unimodular nodes `z_1..z_n` and a split `p + q = n - 1`,
//! there is exactly one Laurent polynomial in `span{z^k : -p <= k <= q}`
//! taking prescribed values at the nodes. This crate builds that interpolant
//! for arbitrary nodal systems, with particular support for the zeros of
//! para-orthogonal polynomials on the unit circle, and provides:
//!
//! - [`laurent`]: the Laurent polynomial value type and degree planning.
//! - [`nodal`]: nodal systems, the nodal polynomial, and numerical estimates
//!   of the constants that control the Lebesgue function.
//! - [`opuc`]: the Szegő recurrence, measures, para-orthogonal polynomials
//!   and their unimodular zeros.
//! - [`interp`]: fundamental polynomials and barycentric evaluation of the
//!   interpolant.
//! - [`transforms`]: transfer to polynomial interpolation on `[-1, 1]` and
//!   trigonometric interpolation on `[0, 2π]`.
//! - [`experiments`]: test-function corpus, modulus-of-continuity estimates,
//!   near-best approximation proxies and convergence sweeps.
//!
//! ```
//! use circle_interp::{interp, laurent::DegreePlan, nodal};
//! use num_complex::Complex64;
//!
//! let system = nodal::roots_of_unimodular(32, Complex64::new(1.0, 0.0)).unwrap();
//! let plan = DegreePlan::from_ratio(32, 0.5).unwrap();
//! let values: Vec<_> = system.nodes().iter().map(|z| z.exp()).collect();
//! let l = interp::interpolate(&system, &plan, &values).unwrap();
//! let z = Complex64::from_polar(1.0, 0.3);
//! assert!((l.eval(z).unwrap() - z.exp()).norm() < 1e-10);
//! ```

pub mod error;
pub mod experiments;
pub mod interp;
pub mod io;
pub mod laurent;
pub mod nodal;
pub mod opuc;
pub mod quadrature;
pub mod roots;
pub mod transforms;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Library version, embedded in CLI metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `e^{iθ}`.
#[inline]
pub fn cis(theta: f64) -> Complex64 {
    let (s, c) = theta.sin_cos();
    Complex64::new(c, s)
}

/// Argument of `z` reduced to `[0, 2π)`.
#[inline]
pub fn angle_0_2pi(z: Complex64) -> f64 {
    let a = z.arg();
    if a < 0.0 {
        let r = a + std::f64::consts::TAU;
        // arg just below zero can round up to exactly 2π
        if r >= std::f64::consts::TAU {
            0.0
        } else {
            r
        }
    } else {
        a
    }
}
