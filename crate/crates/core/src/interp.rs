//! The interpolation operator on the unit circle.
//!
//! With `W_n(z) = ∏(z - z_j)` the fundamental polynomials are
//!
//! ```text
//! l_j(z) = z_j^p W_n(z) / (W_n'(z_j) (z - z_j) z^p)
//! ```
//!
//! and the interpolant `L(z) = Σ l_j(z) u_j` is evaluated in first-form
//! barycentric style: `L(z) = W_n(z) z^{-p} Σ_j w_j u_j / (z - z_j)` with
//! `w_j = z_j^p / W_n'(z_j)`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::laurent::{coefficients_from_samples, roots_of_unity, DegreePlan, LaurentPolynomial};
use crate::nodal::{near_node_eps, NodalSystem, ScaledComplex};
use crate::{cis, Error, Result};

/// `z^{-p}` folded into a scaled product.
fn apply_inverse_power(w: ScaledComplex, z: Complex64, p: usize) -> ScaledComplex {
    if p == 0 {
        return w;
    }
    let mut out = w;
    out.mantissa *= cis(-(p as f64) * z.arg());
    let r = z.norm();
    if r != 1.0 {
        let l = -(p as f64) * r.log2();
        let e = l.floor();
        out.mantissa *= (l - e).exp2();
        out.exponent += e as i32;
    }
    out
}

fn check_nonzero(z: Complex64) -> Result<()> {
    if z == Complex64::new(0.0, 0.0) {
        Err(Error::Domain("interpolant evaluated at z = 0".into()))
    } else {
        Ok(())
    }
}

/// Index of a node within `near_node_eps(n)` of `z`, if any.
fn coincident_node(system: &NodalSystem, z: Complex64) -> Option<usize> {
    let eps = near_node_eps(system.len());
    let m = system.nearest_node(z);
    ((z - system.nodes()[m]).norm() < eps).then_some(m)
}

/// `z_j^p` from the node's argument.
fn node_power(zj: Complex64, p: usize) -> Complex64 {
    cis(p as f64 * zj.arg())
}

/// `l_j(z)` for the node with 0-based index `j`.
pub fn fundamental_polynomial(
    system: &NodalSystem,
    plan: &DegreePlan,
    j: usize,
    z: Complex64,
) -> Result<Complex64> {
    check_plan(system, plan)?;
    if j >= system.len() {
        return Err(Error::InvalidArgument(format!(
            "node index {j} out of range for {} nodes",
            system.len()
        )));
    }
    check_nonzero(z)?;
    if let Some(k) = coincident_node(system, z) {
        return Ok(if k == j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        });
    }
    let zj = system.nodes()[j];
    let w = node_power(zj, plan.p) / system.derivs()[j];
    let prod = apply_inverse_power(system.product_excluding(z, j), z, plan.p);
    Ok(prod.scale(w))
}

fn check_plan(system: &NodalSystem, plan: &DegreePlan) -> Result<()> {
    if plan.n != system.len() {
        return Err(Error::InvalidArgument(format!(
            "plan is for {} nodes, system has {}",
            plan.n,
            system.len()
        )));
    }
    Ok(())
}

/// The unique element of `Λ_{-p,q}` through `(z_j, u_j)`.
#[derive(Clone, Debug)]
pub struct CircleInterpolant {
    system: NodalSystem,
    plan: DegreePlan,
    values: Vec<Complex64>,
    weights: Vec<Complex64>,
}

/// Builds the interpolant of `values` on `system` in `Λ_{-p,q}`.
pub fn interpolate(
    system: &NodalSystem,
    plan: &DegreePlan,
    values: &[Complex64],
) -> Result<CircleInterpolant> {
    check_plan(system, plan)?;
    if values.len() != system.len() {
        return Err(Error::InvalidArgument(format!(
            "{} values for {} nodes",
            values.len(),
            system.len()
        )));
    }
    let weights = system
        .nodes()
        .iter()
        .zip(system.derivs())
        .map(|(&zj, &d)| node_power(zj, plan.p) / d)
        .collect();
    Ok(CircleInterpolant {
        system: system.clone(),
        plan: *plan,
        values: values.to_vec(),
        weights,
    })
}

/// Interpolates `f` sampled at the nodes.
pub fn interpolate_fn<F>(system: &NodalSystem, plan: &DegreePlan, f: F) -> Result<CircleInterpolant>
where
    F: Fn(Complex64) -> Complex64,
{
    let values: Vec<_> = system.nodes().iter().map(|&z| f(z)).collect();
    interpolate(system, plan, &values)
}

impl CircleInterpolant {
    pub fn system(&self) -> &NodalSystem {
        &self.system
    }

    pub fn plan(&self) -> &DegreePlan {
        &self.plan
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    /// `L(z)` for `z != 0`; returns the node value within `1e-13·n` of a
    /// node.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        check_nonzero(z)?;
        if let Some(m) = coincident_node(&self.system, z) {
            return Ok(self.values[m]);
        }
        let sum: Complex64 = self
            .system
            .nodes()
            .iter()
            .zip(&self.weights)
            .zip(&self.values)
            .map(|((&zj, &w), &u)| w * u / (z - zj))
            .sum();
        let w = apply_inverse_power(self.system.eval_nodal(z), z, self.plan.p);
        Ok(w.scale(sum))
    }

    pub fn eval_many(&self, zs: &[Complex64]) -> Result<Vec<Complex64>> {
        zs.par_iter().map(|&z| self.eval(z)).collect()
    }

    /// Coefficients of `L` recovered from `m` samples at the roots of
    /// unity, `m` the smallest power of two `>= 2n`. The window is
    /// `[-p, m-1-p]`; entries beyond `q` measure the round-off.
    pub fn coefficient_recovery(&self) -> Result<LaurentPolynomial> {
        let m = (2 * self.system.len()).next_power_of_two();
        let samples = self.eval_many(&roots_of_unity(m))?;
        coefficients_from_samples(&samples, self.plan.p)
    }

    /// `L` as an element of `Λ_{-p,q}`.
    pub fn to_laurent(&self) -> Result<LaurentPolynomial> {
        let full = self.coefficient_recovery()?;
        let (p, q) = (self.plan.p, self.plan.q);
        let coeffs = (-(p as i64)..=q as i64).map(|k| full.coeff(k)).collect();
        LaurentPolynomial::new(p, q, coeffs)
    }
}

/// Free-function form of [`CircleInterpolant::eval`].
pub fn eval_interpolant(interp: &CircleInterpolant, z: Complex64) -> Result<Complex64> {
    interp.eval(z)
}

/// `max |F(z) - L(z)|` over `grid_size` uniform points of the circle.
pub fn interpolation_error<F>(interp: &CircleInterpolant, f: F, grid_size: usize) -> Result<f64>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let zs: Vec<Complex64> = (0..grid_size)
        .map(|k| cis(TAU * k as f64 / grid_size as f64))
        .collect();
    sup_error_on(interp, &f, &zs)
}

/// `max |F(z) - L(z)|` over the given points.
pub fn sup_error_on<F>(interp: &CircleInterpolant, f: &F, zs: &[Complex64]) -> Result<f64>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    zs.par_iter()
        .map(|&z| interp.eval(z).map(|v| (f(z) - v).norm()))
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nodal::{make_nodal_system, roots_of_unimodular};
    use crate::opuc::{paraorthogonal_nodes, MeasureSpec, ParaOrthogonalSpec};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn grid(m: usize, offset: f64) -> Vec<Complex64> {
        (0..m).map(|k| cis(TAU * (k as f64 + offset) / m as f64)).collect()
    }

    fn test_systems() -> Vec<NodalSystem> {
        let bs = MeasureSpec::finite_verblunsky(vec![c(0.5, 0.0)]).unwrap();
        vec![
            roots_of_unimodular(3, c(1.0, 0.0)).unwrap(),
            roots_of_unimodular(17, cis(0.3)).unwrap(),
            make_nodal_system(vec![cis(0.1), cis(0.2), cis(2.0), cis(3.1), cis(4.4), cis(6.0)]).unwrap(),
            paraorthogonal_nodes(
                &bs.opuc_state(40).unwrap(),
                &ParaOrthogonalSpec::new(40, c(1.0, 0.0)).unwrap(),
            )
            .unwrap(),
        ]
    }

    #[test]
    fn delta_property() {
        for s in test_systems() {
            let n = s.len();
            for p in [0, n / 3, n - 1] {
                let plan = DegreePlan::with_split(n, p).unwrap();
                for j in 0..n {
                    for (k, &zk) in s.nodes().iter().enumerate() {
                        let v = fundamental_polynomial(&s, &plan, j, zk).unwrap();
                        let want = if j == k { 1.0 } else { 0.0 };
                        assert!((v - c(want, 0.0)).norm() <= 1e-11);
                    }
                }
            }
        }
    }

    #[test]
    fn fundamental_polynomial_examples() {
        let s = make_nodal_system(vec![c(1.0, 0.0)]).unwrap();
        let plan = DegreePlan::with_split(1, 0).unwrap();
        for &z in &grid(16, 0.3) {
            assert!((fundamental_polynomial(&s, &plan, 0, z).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        }
        let s = make_nodal_system(vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let plan = DegreePlan::with_split(2, 0).unwrap();
        let v = fundamental_polynomial(&s, &plan, 0, c(0.0, 1.0)).unwrap();
        assert!((v - c(0.5, 0.5)).norm() < 1e-15);
        assert!(fundamental_polynomial(&s, &plan, 0, c(0.0, 0.0)).is_err());
        assert!(fundamental_polynomial(&s, &plan, 2, c(0.0, 1.0)).is_err());
    }

    #[test]
    fn reproduces_window_members() {
        // z^2 on the 5th roots of unity with p = q = 2
        let s = roots_of_unimodular(5, c(1.0, 0.0)).unwrap();
        let plan = DegreePlan::with_split(5, 2).unwrap();
        let l = interpolate_fn(&s, &plan, |z| z * z).unwrap();
        let lp = l.to_laurent().unwrap();
        for k in -2..=2i64 {
            let want = if k == 2 { 1.0 } else { 0.0 };
            assert!((lp.coeff(k) - c(want, 0.0)).norm() < 1e-14);
        }
        // z^5 equals 1 on those nodes
        let l = interpolate_fn(&s, &plan, |z| z.powi(5)).unwrap();
        for &z in &grid(64, 0.1) {
            assert!((l.eval(z).unwrap() - c(1.0, 0.0)).norm() < 1e-13);
        }
        // 1/z on any system with p >= 1
        for s in test_systems() {
            let n = s.len();
            let plan = DegreePlan::with_split(n, 1.max(n / 2)).unwrap();
            let l = interpolate_fn(&s, &plan, |z| z.inv()).unwrap();
            for &z in &grid(97, 0.5) {
                assert!((l.eval(z).unwrap() - z.inv()).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn node_values_and_partition_of_unity() {
        for s in test_systems() {
            let n = s.len();
            let plan = DegreePlan::with_split(n, n / 2).unwrap();
            let vals: Vec<_> = (0..n).map(|j| c(j as f64, -(j as f64) * 0.5)).collect();
            let l = interpolate(&s, &plan, &vals).unwrap();
            for (j, &zj) in s.nodes().iter().enumerate() {
                assert_eq!(l.eval(zj).unwrap(), vals[j]);
            }
            let one = interpolate(&s, &plan, &vec![c(2.5, -1.0); n]).unwrap();
            for &z in &grid(500, 0.25) {
                assert!((one.eval(z).unwrap() - c(2.5, -1.0)).norm() <= 1e-12 * c(2.5, -1.0).norm());
                let sum: Complex64 = (0..n).map(|j| fundamental_polynomial(&s, &plan, j, z).unwrap()).sum();
                assert!((sum - c(1.0, 0.0)).norm() <= 1e-11);
            }
        }
    }

    #[test]
    fn matches_coefficient_recovery_path() {
        let s = roots_of_unimodular(64, c(1.0, 0.0)).unwrap();
        let plan = DegreePlan::from_ratio(64, 0.5).unwrap();
        let l = interpolate_fn(&s, &plan, |z| z.exp()).unwrap();
        // second path: coefficients straight from the node samples, since
        // the nodes are the 64th roots of unity
        let coeffs = coefficients_from_samples(l.values(), plan.p).unwrap();
        let z = cis(0.1);
        assert!((l.eval(z).unwrap() - coeffs.eval(z).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn aliasing_on_roots_of_unimodular() {
        for &(n, arg) in &[(8usize, 0.0), (13, 1.3), (64, -2.0)] {
            let cc = cis(arg);
            let s = roots_of_unimodular(n, cc).unwrap();
            let plan = DegreePlan::from_ratio(n, 0.4).unwrap();
            let l = interpolate_fn(&s, &plan, |z| z.powi(plan.q as i32 + 1)).unwrap();
            for &z in &grid(300, 0.37) {
                let want = cc * z.powi(-(plan.p as i32));
                assert!((l.eval(z).unwrap() - want).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn recovered_coefficients_stay_in_window() {
        for s in test_systems() {
            let n = s.len();
            let plan = DegreePlan::with_split(n, n / 3).unwrap();
            let l = interpolate_fn(&s, &plan, |z| (z * 0.7).exp() + z.conj()).unwrap();
            let full = l.coefficient_recovery().unwrap();
            let outside: f64 = (plan.q as i64 + 1..=full.q() as i64).map(|k| full.coeff(k).norm()).sum();
            assert!(outside <= 1e-11, "{outside:e}");
        }
    }

    #[test]
    fn interpolation_error_examples() {
        let s = make_nodal_system(vec![c(1.0, 0.0)]).unwrap();
        let plan = DegreePlan::with_split(1, 0).unwrap();
        let l = interpolate_fn(&s, &plan, |z| z).unwrap();
        let e = interpolation_error(&l, |z| z, 1024).unwrap();
        assert!((e - 2.0).abs() < 1e-15);

        let s = roots_of_unimodular(9, c(1.0, 0.0)).unwrap();
        let plan = DegreePlan::with_split(9, 4).unwrap();
        let f = |z: Complex64| 3.0 * z.powi(-4) + c(0.0, 1.0) * z.powi(4) - 2.0;
        let l = interpolate_fn(&s, &plan, f).unwrap();
        assert!(interpolation_error(&l, f, 4096).unwrap() <= 1e-11 * 6.0);
    }

    #[test]
    fn length_and_domain_errors() {
        let s = roots_of_unimodular(4, c(1.0, 0.0)).unwrap();
        let plan = DegreePlan::with_split(4, 2).unwrap();
        assert!(interpolate(&s, &plan, &[c(1.0, 0.0); 3]).is_err());
        assert!(interpolate(&s, &DegreePlan::with_split(5, 2).unwrap(), &[c(1.0, 0.0); 4]).is_err());
        let l = interpolate(&s, &plan, &[c(1.0, 0.0); 4]).unwrap();
        assert!(matches!(l.eval(c(0.0, 0.0)), Err(Error::Domain(_))));
        // off the circle the interpolant is still the Laurent polynomial
        let l = interpolate_fn(&s, &plan, |z| z.inv() * 2.0 + z).unwrap();
        let z = c(0.3, 0.2);
        assert!((l.eval(z).unwrap() - (z.inv() * 2.0 + z)).norm() < 1e-12);
    }
}
