//! Polynomial zeros as eigenvalues of the companion matrix.
//!
//! The companion matrix is already upper Hessenberg, so the eigenvalues are
//! found directly by a single-shift complex QR iteration with Wilkinson
//! shifts and deflation. Only the active block is updated since no Schur
//! vectors are needed.

use num_complex::Complex64;

use crate::{Error, Result};

const MAX_ITERS_PER_EIGENVALUE: usize = 60;

/// Dense row-major square matrix, just enough for the QR sweep.
struct Square {
    n: usize,
    a: Vec<Complex64>,
}

impl Square {
    #[inline]
    fn get(&self, i: usize, j: usize) -> Complex64 {
        self.a[i * self.n + j]
    }
    #[inline]
    fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.a[i * self.n + j] = v;
    }
}

/// `Σ coeffs[k] z^k` by Horner.
pub fn eval_poly(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Value and first derivative of `Σ coeffs[k] z^k`.
pub fn eval_poly_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        d = d * z + v;
        v = v * z + c;
    }
    (v, d)
}

/// Zeros of `Σ coeffs[k] z^k` (ascending powers), leading coefficient
/// nonzero.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut deg = coeffs.len().saturating_sub(1);
    while deg > 0 && coeffs[deg] == Complex64::new(0.0, 0.0) {
        deg -= 1;
    }
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[deg];
    if deg == 1 {
        return Ok(vec![-coeffs[0] / lead]);
    }
    let n = deg;
    let mut h = Square {
        n,
        a: vec![Complex64::new(0.0, 0.0); n * n],
    };
    // Frobenius form: ones on the subdiagonal, -c_k/c_n in the last column.
    for i in 1..n {
        h.set(i, i - 1, Complex64::new(1.0, 0.0));
    }
    for i in 0..n {
        h.set(i, n - 1, -coeffs[i] / lead);
    }
    balance(&mut h);
    hessenberg_eigenvalues(h)
}

/// Diagonal similarity scaling (Parlett–Reinsch) with powers of two.
fn balance(h: &mut Square) {
    let n = h.n;
    let radix = 2.0f64;
    let mut done = false;
    let mut sweeps = 0;
    while !done && sweeps < 100 {
        done = true;
        sweeps += 1;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += h.get(j, i).l1_norm();
                    r += h.get(i, j).l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / radix;
            while c < g {
                f *= radix;
                c *= radix * radix;
            }
            g = r * radix;
            while c > g {
                f /= radix;
                c /= radix * radix;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    let v = h.get(i, j) * inv;
                    h.set(i, j, v);
                }
                for j in 0..n {
                    let v = h.get(j, i) * f;
                    h.set(j, i, v);
                }
            }
        }
    }
}

fn hessenberg_eigenvalues(mut h: Square) -> Result<Vec<Complex64>> {
    let n = h.n;
    let mut eig = vec![Complex64::new(0.0, 0.0); n];
    let eps = f64::EPSILON;
    let mut hi = n - 1;
    let mut iters = 0usize;
    loop {
        if hi == 0 {
            eig[0] = h.get(0, 0);
            break;
        }
        // Locate the start of the unreduced block ending at `hi`.
        let mut lo = hi;
        while lo > 0 {
            let sub = h.get(lo, lo - 1).l1_norm();
            let mut diag = h.get(lo - 1, lo - 1).l1_norm() + h.get(lo, lo).l1_norm();
            if diag == 0.0 {
                diag = 1.0;
            }
            if sub <= eps * diag {
                h.set(lo, lo - 1, Complex64::new(0.0, 0.0));
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h.get(hi, hi);
            hi -= 1;
            iters = 0;
            continue;
        }
        iters += 1;
        if iters > MAX_ITERS_PER_EIGENVALUE {
            return Err(Error::RootFinding(format!(
                "QR iteration stalled at eigenvalue {hi} of {n}"
            )));
        }
        let shift = if iters.is_multiple_of(10) {
            // exceptional shift to break cycles
            h.get(hi, hi) + Complex64::new(0.75 * h.get(hi, hi - 1).norm(), 0.0)
        } else {
            wilkinson_shift(
                h.get(hi - 1, hi - 1),
                h.get(hi - 1, hi),
                h.get(hi, hi - 1),
                h.get(hi, hi),
            )
        };
        qr_sweep(&mut h, lo, hi, shift);
    }
    Ok(eig)
}

/// Eigenvalue of the trailing 2x2 block closer to its last diagonal entry.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let m1 = (a + d) * 0.5 + disc;
    let m2 = (a + d) * 0.5 - disc;
    if (m1 - d).norm() < (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// Rotation `[[c, s], [-conj(s), c]]` with real `c` annihilating `y` in
/// `(x, y)`.
#[inline]
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let r = ax.hypot(ay);
    let c = ax / r;
    // x / |x| is not unimodular when x is subnormal; rescale first so the
    // rotation stays unitary
    let xs = x / x.re.abs().max(x.im.abs());
    let phase = xs / xs.norm();
    let s = phase * y.conj() / r;
    (c, s)
}

fn qr_sweep(h: &mut Square, lo: usize, hi: usize, shift: Complex64) {
    let n = h.n;
    let mut x = h.get(lo, lo) - shift;
    let mut y = h.get(lo + 1, lo);
    for k in lo..hi {
        if k > lo {
            x = h.get(k, k - 1);
            y = h.get(k + 1, k - 1);
        }
        let (c, s) = givens(x, y);
        let sc = s.conj();
        // rows k, k+1 from the left
        let start = if k > lo { k - 1 } else { lo };
        let (r0, r1) = (k * n, (k + 1) * n);
        for j in start..=hi {
            let a = h.a[r0 + j];
            let b = h.a[r1 + j];
            h.a[r0 + j] = a * c + s * b;
            h.a[r1 + j] = b * c - sc * a;
        }
        if k > lo {
            h.a[r1 + k - 1] = Complex64::new(0.0, 0.0);
        }
        // columns k, k+1 from the right
        let end = (k + 2).min(hi);
        for i in lo..=end {
            let a = h.a[i * n + k];
            let b = h.a[i * n + k + 1];
            h.a[i * n + k] = a * c + sc * b;
            h.a[i * n + k + 1] = b * c - s * a;
        }
    }
}
