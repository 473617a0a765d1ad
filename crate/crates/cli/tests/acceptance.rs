//! Acceptance checks, one line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so that every criterion is
//! reported even when an earlier one fails; the process exits nonzero if
//! any criterion fails.

use std::f64::consts::{PI, TAU};
use std::process::Command;
use std::time::Instant;

use circle_interp::experiments::{convergence_sweep, estimate_modulus, trig_sup_error, Corpus, SweepFamily};
use circle_interp::interp::{interpolate, sup_error_on};
use circle_interp::laurent::{DegreePlan, LaurentPolynomial};
use circle_interp::nodal::{default_grid_size, estimate_conditions, estimation_grid, roots_of_unimodular, NodalSystem};
use circle_interp::opuc::{paraorthogonal_nodes, paraorthogonal_zeros, MeasureSpec, OpucState, ParaOrthogonalSpec};
use circle_interp::transforms::{
    chebyshev1_weight, chebyshev2_weight, interval_interpolate, interval_nodes_from_state, szego_transform_weight,
    trig_interpolate_paraorthogonal, trig_interpolate_symmetric, trig_nodes_symmetric, IntervalVariant,
};
use circle_interp::{angle_0_2pi, cis, Complex64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_c1c1;

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn one() -> Complex64 {
    c(1.0, 0.0)
}

fn bernstein_szego_half() -> MeasureSpec {
    MeasureSpec::finite_verblunsky(vec![c(0.5, 0.0)]).unwrap()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Laurent coefficients of the interpolant of `e_j`, evaluated by Horner
/// at every node.
fn delta_deviation(system: &NodalSystem, plan: &DegreePlan) -> f64 {
    let n = system.len();
    let mut worst = 0.0f64;
    for j in 0..n {
        let mut values = vec![c(0.0, 0.0); n];
        values[j] = one();
        let l = interpolate(system, plan, &values).unwrap().to_laurent().unwrap();
        for (k, &z) in system.nodes().iter().enumerate() {
            let want = if k == j { 1.0 } else { 0.0 };
            worst = worst.max((l.eval(z).unwrap() - want).norm());
        }
    }
    worst
}

fn criterion_1() -> Outcome {
    let mut worst = 0.0f64;
    for n in [8, 64, 256] {
        let s = roots_of_unimodular(n, one()).unwrap();
        worst = worst.max(delta_deviation(&s, &DegreePlan::from_ratio(n, 0.5).unwrap()));
    }
    let state = bernstein_szego_half().opuc_state(64).unwrap();
    for n in [8, 64] {
        let s = paraorthogonal_nodes(&state, &ParaOrthogonalSpec::new(n, one()).unwrap()).unwrap();
        worst = worst.max(delta_deviation(&s, &DegreePlan::from_ratio(n, 0.5).unwrap()));
    }
    check(worst <= 1e-11, format!("max |l_j(z_k) - δ_jk| = {worst:.3e} (tol 1e-11)"))
}

fn random_unimodular(rng: &mut ChaCha8Rng) -> Complex64 {
    cis(rng.gen_range(0.0..TAU))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let ns = [2usize, 3, 7, 16, 33, 64, 100, 128, 255, 256, 400, 512];
    let bs = bernstein_szego_half().opuc_state(512).unwrap();
    let alphas: Vec<Complex64> = (0..6)
        .map(|_| Complex64::from_polar(rng.gen_range(0.0..0.7), rng.gen_range(0.0..TAU)))
        .collect();
    let mixed = MeasureSpec::finite_verblunsky(alphas).unwrap().opuc_state(512).unwrap();
    let mut worst = 0.0f64;
    for case in 0..100 {
        let n = ns[rng.gen_range(0..ns.len())];
        let tau = random_unimodular(&mut rng);
        let system = match case % 3 {
            0 => roots_of_unimodular(n, tau).unwrap(),
            1 => paraorthogonal_nodes(&bs, &ParaOrthogonalSpec::new(n, tau).unwrap()).unwrap(),
            _ => paraorthogonal_nodes(&mixed, &ParaOrthogonalSpec::new(n, tau).unwrap()).unwrap(),
        };
        let p = rng.gen_range(0..n);
        let plan = DegreePlan::with_split(n, p).unwrap();
        let coeffs: Vec<Complex64> = (0..n)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let g = LaurentPolynomial::new(plan.p, plan.q, coeffs).unwrap();
        let values: Vec<Complex64> = system.nodes().iter().map(|&z| g.eval(z).unwrap()).collect();
        let l = interpolate(&system, &plan, &values).unwrap();
        let grid = estimation_grid(&system, 2048);
        let err = sup_error_on(&l, &|z: Complex64| g.eval(z).unwrap(), &grid).unwrap();
        worst = worst.max(err / g.l1_norm());
    }
    check(worst <= 1e-10, format!("max sup|L(G) - G| / Σ|c_k| = {worst:.3e} over 100 cases (tol 1e-10)"))
}

fn criterion_3() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;

    let leb = MeasureSpec::lebesgue().opuc_state(128).unwrap();
    let mut dev_roots = 0.0f64;
    for n in [4usize, 16, 128] {
        for tau in [one(), c(0.0, 1.0), cis(2.0)] {
            let zs = paraorthogonal_zeros(&leb, &ParaOrthogonalSpec::new(n, tau).unwrap()).unwrap().zeros;
            // roots of z^n = -τ
            for z in &zs {
                let best = (0..n)
                    .map(|k| (cis(((-tau).arg() + TAU * k as f64) / n as f64) - z).norm())
                    .fold(f64::INFINITY, f64::min);
                dev_roots = dev_roots.max(best);
            }
        }
    }
    ok &= dev_roots <= 1e-12;
    notes.push(format!("roots of -τ dev {dev_roots:.2e}"));

    let bs = bernstein_szego_half().opuc_state(512).unwrap();
    let z1 = paraorthogonal_zeros(&bs, &ParaOrthogonalSpec::new(1, one()).unwrap()).unwrap().zeros[0];
    let d1 = (z1 + 1.0).norm();
    ok &= d1 <= 1e-14;
    notes.push(format!("n=1 zero dev {d1:.2e}"));

    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let alphas: Vec<Complex64> = (0..10)
        .map(|_| Complex64::from_polar(rng.gen_range(0.0..0.8), rng.gen_range(0.0..TAU)))
        .collect();
    let mixed = MeasureSpec::finite_verblunsky(alphas).unwrap().opuc_state(512).unwrap();
    let cheb2 = szego_transform_weight(chebyshev2_weight).unwrap().opuc_state(512).unwrap();
    let mut max_dev = 0.0f64;
    let mut min_gap = f64::INFINITY;
    for state in [&leb, &bs, &mixed, &cheb2] {
        for n in [1usize, 2, 5, 32, 127, 128, 300, 512] {
            if n > state.degree() {
                continue;
            }
            for tau in [one(), c(-1.0, 0.0), cis(0.7)] {
                let z = paraorthogonal_zeros(state, &ParaOrthogonalSpec::new(n, tau).unwrap()).unwrap();
                max_dev = max_dev.max(z.max_modulus_deviation);
                for (i, a) in z.zeros.iter().enumerate() {
                    max_dev = max_dev.max((a.norm() - 1.0).abs());
                    if n > 1 {
                        min_gap = min_gap.min((a - z.zeros[(i + 1) % n]).norm());
                    }
                }
            }
        }
    }
    ok &= max_dev <= 1e-10 && min_gap > 1e-8;
    notes.push(format!("max ||z|-1| {max_dev:.2e} (pre-projection), min gap {min_gap:.2e}"));
    check(ok, notes.join("; "))
}

fn criterion_4() -> Outcome {
    let mut b_dev = 0.0f64;
    for n in [8usize, 64, 256, 512] {
        let r = estimate_conditions(&roots_of_unimodular(n, one()).unwrap(), default_grid_size(n));
        b_dev = b_dev.max((r.b_hat - 1.0).abs());
    }
    let leb = MeasureSpec::lebesgue().opuc_state(512).unwrap();
    let bs = bernstein_szego_half().opuc_state(512).unwrap();
    let cheb2 = szego_transform_weight(chebyshev2_weight).unwrap().opuc_state(512).unwrap();
    let mut systems = Vec::new();
    for n in [8usize, 64, 512] {
        systems.push(roots_of_unimodular(n, cis(1.0)).unwrap());
        for state in [&leb, &bs, &cheb2] {
            systems.push(paraorthogonal_nodes(state, &ParaOrthogonalSpec::new(n, cis(0.3)).unwrap()).unwrap());
        }
    }
    let mut worst_ratio = 0.0f64;
    for s in &systems {
        let r = estimate_conditions(s, default_grid_size(s.len()));
        worst_ratio = worst_ratio.max(r.lebesgue_max / r.lebesgue_bound);
    }
    check(
        b_dev <= 1e-9 && worst_ratio <= 1.0 + 1e-6,
        format!(
            "roots-of-unity |B̂ - 1| = {b_dev:.2e} (tol 1e-9); max Λ/((√L̂/B̂)√n) = {worst_ratio:.4} over {} systems (tol 1+1e-6)",
            systems.len()
        ),
    )
}

/// At most one increase, and that one within 5%.
fn nearly_monotone(e: &[f64]) -> bool {
    let ups: Vec<f64> = e.windows(2).filter(|w| w[1] > w[0]).map(|w| w[1] / w[0]).collect();
    ups.len() <= 1 && ups.iter().all(|&r| r <= 1.05)
}

fn criterion_5() -> Outcome {
    let f = Corpus::Holder(0.6);
    let ns: Vec<usize> = (5..=10).map(|k| 1usize << k).collect();
    let families = [
        SweepFamily::roots_of_unity(),
        SweepFamily::ParaOrthogonal {
            measure: bernstein_szego_half(),
            label: "bernstein-szego(0.5)".into(),
            tau: one(),
        },
    ];
    let mut ok = true;
    let mut notes = Vec::new();
    for fam in &families {
        let res = convergence_sweep(fam, 0.5, &ns, |z| f.eval_circle(z), "holder:0.6").unwrap();
        let e = &res.sup_errors;
        let ratio = e[e.len() - 1] / e[0];
        let good = res.all_ok() && ratio <= 0.5 && nearly_monotone(e);
        ok &= good;
        notes.push(format!("{}: e(1024)/e(32) = {ratio:.3}", fam.label()));
    }
    check(ok, notes.join("; ") + " (tol 0.5, nearly monotone)")
}

/// Second-form real barycentric interpolation at arbitrary nodes.
fn real_barycentric(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..n {
        let d = x - xs[j];
        if d == 0.0 {
            return ys[j];
        }
        // weight 1/∏(x_j - x_k), scaled by 2 per factor to stay in range
        let w: f64 = (0..n)
            .filter(|&k| k != j)
            .map(|k| 1.0 / (2.0 * (xs[j] - xs[k])))
            .product();
        num += w * ys[j] / d;
        den += w / d;
    }
    num / den
}

fn criterion_6() -> Outcome {
    let funcs: [(&str, fn(f64) -> f64); 3] =
        [("x^2", |x| x * x), ("|x|^0.6", |x| x.abs().powf(0.6)), ("exp", f64::exp)];
    let states = [
        ("chebyshev1", szego_transform_weight(chebyshev1_weight).unwrap().opuc_state(2 * 128 + 2).unwrap()),
        ("chebyshev2", szego_transform_weight(chebyshev2_weight).unwrap().opuc_state(2 * 128 + 2).unwrap()),
        (
            "(1+x²/2)/√(1-x²)",
            szego_transform_weight(|x: f64| (1.0 + 0.5 * x * x) * chebyshev1_weight(x))
                .unwrap()
                .opuc_state(2 * 128 + 2)
                .unwrap(),
        ),
    ];
    let variants = [IntervalVariant::Mu1, IntervalVariant::Mu2, IntervalVariant::Mu3, IntervalVariant::Mu4];
    let xs_eval: Vec<f64> = (0..=1000).map(|k| (PI * (k as f64 + 0.37) / 1000.7).cos()).collect();
    let mut worst = 0.0f64;
    let mut cases = 0;
    for (_, state) in &states {
        for &v in &variants {
            for n in [4usize, 17, 64, 128] {
                let sys = interval_nodes_from_state(state, n, v).unwrap();
                let nodes = sys.all_nodes();
                for (_, f) in &funcs {
                    let ys: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
                    let norm = xs_eval.iter().map(|&x| f(x).abs()).fold(0.0, f64::max);
                    let p = interval_interpolate(&sys, f).unwrap();
                    for &x in &xs_eval {
                        let d = (p.eval(x).unwrap() - real_barycentric(&nodes, &ys, x)).abs();
                        worst = worst.max(d / norm);
                    }
                    cases += 1;
                }
            }
        }
    }
    check(worst <= 1e-9, format!("max |circle lift - real barycentric| / ‖f‖ = {worst:.3e} over {cases} cases (tol 1e-9)"))
}

fn criterion_7() -> Outcome {
    let state = szego_transform_weight(chebyshev1_weight).unwrap().opuc_state(2 * 64 + 2).unwrap();
    let mut worst = 0.0f64;
    let mut endpoints_ok = true;
    for n in 1..=64usize {
        let nf = n as f64;
        let closed: [(IntervalVariant, Box<dyn Fn(usize) -> f64>); 4] = [
            (IntervalVariant::Mu1, Box::new(|k| ((2 * k - 1) as f64 * PI / (2.0 * nf)).cos())),
            (IntervalVariant::Mu2, Box::new(|k| (k as f64 * PI / (nf + 1.0)).cos())),
            (IntervalVariant::Mu3, Box::new(|k| (2.0 * k as f64 * PI / (2.0 * nf + 1.0)).cos())),
            (IntervalVariant::Mu4, Box::new(|k| ((2 * k - 1) as f64 * PI / (2.0 * nf + 1.0)).cos())),
        ];
        for (v, want) in &closed {
            let sys = interval_nodes_from_state(&state, n, *v).unwrap();
            for (k, &x) in sys.xs().iter().enumerate() {
                worst = worst.max((x - want(k + 1)).abs());
            }
            endpoints_ok &= sys.endpoints() == v.endpoints();
        }
    }
    check(
        worst <= 1e-11 && endpoints_ok,
        format!("max node deviation from closed forms {worst:.3e} for n = 1..64 (tol 1e-11); endpoints match: {endpoints_ok}"),
    )
}

fn criterion_8() -> Outcome {
    let cheb1 = szego_transform_weight(chebyshev1_weight).unwrap();
    let cheb2 = szego_transform_weight(chebyshev2_weight).unwrap();
    let bs: OpucState = bernstein_szego_half().opuc_state(256).unwrap();
    let holder = Corpus::Holder(0.6);
    let f = |t: f64| holder.eval_angle(t);
    let mut cond = 0.0f64;
    let mut residue = 0.0f64;
    let mut cos_dev = 0.0f64;
    let mut ok = true;
    let mut notes = Vec::new();

    for n in [2usize, 3, 5, 16] {
        for m in [&cheb1, &cheb2] {
            let t = trig_interpolate_symmetric(m, n, |th| th.cos()).unwrap();
            cos_dev = cos_dev.max((t.a[1] - 1.0).abs());
            for k in 0..=t.degree() {
                cos_dev = cos_dev.max(t.b[k].abs());
                if k != 1 {
                    cos_dev = cos_dev.max(t.a[k].abs());
                }
            }
        }
        let t = trig_interpolate_paraorthogonal(&bs, cis(0.4), 2 * n, |th| th.cos()).unwrap();
        for th in [0.1, 1.0, 2.5, 4.0] {
            cos_dev = cos_dev.max((t.eval(th) - th.cos()).abs());
        }
    }

    let ns = [16usize, 32, 64, 128, 256];
    let mut sym_err = Vec::new();
    let mut po_err = Vec::new();
    for &n in &ns {
        let thetas = trig_nodes_symmetric(&cheb2, n).unwrap();
        let t = trig_interpolate_symmetric(&cheb2, n, f).unwrap();
        residue = residue.max(t.imag_residue);
        for &th in &thetas {
            cond = cond.max((t.eval(th) - f(th)).abs());
        }
        sym_err.push(trig_sup_error(&t, f, 8192));

        let tau = one();
        let t = trig_interpolate_paraorthogonal(&bs, tau, n, f).unwrap();
        residue = residue.max(t.imag_residue);
        let nodes = paraorthogonal_nodes(&bs, &ParaOrthogonalSpec::new(n, tau).unwrap()).unwrap();
        for &z in nodes.nodes() {
            let th = angle_0_2pi(z);
            cond = cond.max((t.eval(th) - f(th)).abs());
        }
        po_err.push(trig_sup_error(&t, f, 8192));
    }
    ok &= cond <= 1e-11 && residue <= 1e-12 && cos_dev <= 1e-11;
    ok &= sym_err[ns.len() - 1] < sym_err[0] && po_err[ns.len() - 1] < po_err[0];
    notes.push(format!("node residual {cond:.2e}, imag residue {residue:.2e}, cos θ dev {cos_dev:.2e}"));
    notes.push(format!(
        "holder:0.6 error n=16→256: symmetric {:.3e}→{:.3e}, para-orthogonal {:.3e}→{:.3e}",
        sym_err[0],
        sym_err[ns.len() - 1],
        po_err[0],
        po_err[ns.len() - 1]
    ));
    check(ok, notes.join("; "))
}

fn criterion_9() -> Outcome {
    let deltas: Vec<f64> = (0..9).map(|i| 10f64.powf(-3.0 + 2.0 * i as f64 / 8.0)).collect();
    let mut worst = 0.0f64;
    let mut fits = Vec::new();
    for beta in [0.6, 0.8, 1.0] {
        let c = Corpus::Holder(beta);
        let p = estimate_modulus(|t| c.eval_angle(t), &deltas, 1 << 16).unwrap();
        let fit = p.exponent_fit.unwrap_or(f64::NAN);
        worst = worst.max((fit - beta).abs());
        fits.push(format!("β={beta}: {fit:.4}"));
    }
    check(worst <= 0.05, format!("{} (tol ±0.05)", fits.join(", ")))
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |name: &str| -> Result<Vec<u8>, String> {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_circle-interp"))
            .args(["sweep", "--family", "para-orthogonal", "--measure", "lebesgue", "--tau", "0,1"])
            .args(["--corpus", "holder:0.6", "--r", "0.5", "--ns", "8:256", "--out"])
            .arg(&out)
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("sweep exited with {status}"));
        }
        std::fs::read(&out).map_err(|e| e.to_string())
    };
    let a = run("a.csv")?;
    let b = run("b.csv")?;
    check(a == b && !a.is_empty(), format!("two sweep runs, {} CSV bytes, identical: {}", a.len(), a == b))
}

fn main() {
    // (name, check, runtime budget in seconds)
    let criteria: [(&str, fn() -> Outcome, Option<f64>); 10] = [
        ("delta property", criterion_1, Some(5.0)),
        ("exactness on the window", criterion_2, Some(30.0)),
        ("para-orthogonal zeros", criterion_3, None),
        ("condition constants", criterion_4, None),
        ("convergence sweeps", criterion_5, Some(180.0)),
        ("interval lift vs real barycentric", criterion_6, None),
        ("Chebyshev node families", criterion_7, None),
        ("trigonometric interpolation", criterion_8, None),
        ("modulus estimator", criterion_9, None),
        ("CLI determinism", criterion_10, None),
    ];
    let mut failed = 0;
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        let outcome = match (outcome, budget) {
            (Ok(d), Some(b)) if secs > *b => Err(format!("{d}; exceeded {b} s budget")),
            (o, _) => o,
        };
        match outcome {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d} [{secs:.2} s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {d} [{secs:.2} s]", i + 1)
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
