//! Acceptance criteria, one PASS/FAIL line each. Tolerances are pinned here;
//! published table values are typed in from the source tables, everything else
//! comes from oracles written in this file.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use deltareg::catalog::{catalog, catalog_lookup};
use deltareg::config::ExperimentConfig;
use deltareg::elliptic::{solve_regularized_1d, Helmholtz1D};
use deltareg::kernel::{ProfileShape, RadialProfile};
use deltareg::moment::{solve_moment_problem, MomentProblemSpec, Normalization};
use deltareg::spectral::{advect_leapfrog, kdv_solve, soliton, AdvectionRun, KdvRun, PeriodicGrid1D};
use deltareg::{bessel_j0_y0, run_study, ConvergenceReport, RowStatus};

// --- pinned tolerances -------------------------------------------------------
const RESIDUAL_TOL: f64 = 1e-10;
const TABLE1_TOL: f64 = 1e-10;
const SLOPE_TOL: f64 = 0.1;
const CUBIC_MIN_SLOPE: f64 = 3.9;
const RADIAL_TENSOR_TOL: f64 = 0.15;
const HELM1D_TOL: f64 = 0.05;
const HELM1D_ORACLE_TOL: f64 = 1e-10;
const HELM2D_BAND: (f64, f64) = (1.95, 2.05);
const HELM2D_MIN_TWO_MOMENT: f64 = 3.85;
const SOBOLEV_TOL: f64 = 0.05;
const PHASE_TOL: f64 = 1e-8;
const AMPLITUDE_TOL: f64 = 1e-9;
const SOLITON_TOL: f64 = 1e-6;
const MASS_TOL: f64 = 1e-10;
const MOMENTUM_TOL: f64 = 1e-6;
const BESSEL_TOL: f64 = 1e-7;
const ZERO_TOL: f64 = 1e-6;

// --- oracles -----------------------------------------------------------------

/// Composite Simpson with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + h * i as f64);
    }
    s * h / 3.0
}

/// Simpson over `[a, b]` split at every interior point of `cuts`.
fn simpson_split(f: impl Fn(f64) -> f64 + Copy, a: f64, b: f64, cuts: &[f64], n: usize) -> f64 {
    let mut pts = vec![a];
    pts.extend(cuts.iter().copied().filter(|c| *c > a && *c < b));
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    pts.windows(2).map(|w| simpson(f, w[0], w[1], n)).sum()
}

fn surface_factor(n: Normalization, dim: usize) -> f64 {
    match (n, dim) {
        (_, 1) => 2.0,
        (Normalization::SurfaceMeasure, _) => 2.0 * PI,
        (Normalization::UnitBallArea, _) => PI,
    }
}

/// `ν ∫₀^reach η(z) z^{k+n−1} dz`.
fn radial_moment(p: &RadialProfile, k: usize) -> f64 {
    let nu = surface_factor(p.normalization, p.dim);
    let e = (k + p.dim - 1) as i32;
    nu * simpson_split(|z| p.value(z) * z.powi(e), 0.0, p.reach, &p.breakpoints(), 4000)
}

fn least_squares_slope(hs: &[f64], es: &[f64]) -> f64 {
    let n = hs.len() as f64;
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = es.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// `|<δ_H, e^{−|x|²}> − 1|` by quadrature in `z = |x|/H`.
fn weak_star_oracle(name: &str, h: f64) -> f64 {
    let gauss = |p: &RadialProfile, w: f64, extra: i32| {
        simpson_split(|z| p.value(z) * (-(w * z).powi(2)).exp() * z.powi(extra), 0.0, p.reach, &p.breakpoints(), 20000)
    };
    let value = match name.strip_prefix("tensor:") {
        Some(base) => {
            let p = &catalog_lookup(base).unwrap().profile;
            (2.0 * gauss(p, h / 2f64.sqrt(), 0)).powi(2)
        }
        None => {
            let p = &catalog_lookup(name).unwrap().profile;
            surface_factor(p.normalization, p.dim) * gauss(p, h, p.dim as i32 - 1)
        }
    };
    (value - 1.0).abs()
}

fn green_1d(x: f64, y: f64, k0: f64) -> f64 {
    let a = k0 / 2.0;
    let (lo, hi) = if x < y { (x, y) } else { (y, x) };
    -(a * (1.0 + lo)).sin() * (a * (1.0 - hi)).sin() / (k0 * k0.sin())
}

/// Ascending series for `J₀` and `Y₀` with 40 terms.
fn series_j0_y0(x: f64) -> (f64, f64) {
    const GAMMA: f64 = 0.577_215_664_901_532_9;
    let (mut j, mut s) = (0.0, 0.0);
    let mut harmonic = 0.0;
    for k in 0..40 {
        let mut t = 1.0;
        for i in 1..=k {
            t *= (x / 2.0) * (x / 2.0) / (i * i) as f64;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        if k > 0 {
            harmonic += 1.0 / k as f64;
            s += -sign * harmonic * t;
        }
        j += sign * t;
    }
    (j, 2.0 / PI * (((x / 2.0).ln() + GAMMA) * j + s))
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa0 = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (f(m) > 0.0) == (fa0 > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn dft(u: &[f64]) -> Vec<(f64, f64)> {
    let n = u.len();
    (0..n)
        .map(|k| {
            u.iter().enumerate().fold((0.0, 0.0), |(re, im), (j, v)| {
                let t = -2.0 * PI * ((k * j) % n) as f64 / n as f64;
                (re + v * t.cos(), im + v * t.sin())
            })
        })
        .collect()
}

fn peak(x: &[f64], u: &[f64]) -> f64 {
    let (j, _) = u.iter().enumerate().fold((0, f64::MIN), |b, (i, &v)| if v > b.1 { (i, v) } else { b });
    let n = u.len();
    let (a, b, c) = (u[(j + n - 1) % n], u[j], u[(j + 1) % n]);
    x[j] + 0.5 * (a - c) / (a - 2.0 * b + c) * (x[1] - x[0])
}

// --- harness -----------------------------------------------------------------

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn ratio_at(report: &ConvergenceReport, kernel: &str, params_prefix: &str, h: f64) -> Option<f64> {
    report
        .rows
        .iter()
        .find(|r| r.kernel == kernel && r.params.starts_with(params_prefix) && r.h == Some(h))
        .and_then(|r| r.ratio)
}

fn shipped(text: &str) -> ConvergenceReport {
    let report = run_study(&ExperimentConfig::parse(text, &[]).expect("shipped config parses")).expect("study runs");
    assert!(!report.rows.iter().any(|r| r.status == RowStatus::Error), "error rows in {}", report.id);
    report
}

fn criterion_1() -> Outcome {
    let mut worst = (0.0_f64, String::new());
    for b in catalog() {
        let p = &b.profile;
        for k in (0..=b.entry.moments).filter(|k| k % 2 == 0) {
            let r = (radial_moment(p, k) - if k == 0 { 1.0 } else { 0.0 }).abs();
            if r > worst.0 {
                worst = (r, format!("{} order {k}", b.entry.name));
            }
        }
    }
    let mut eta25 = 0.0_f64;
    for name in ["eta_2_5_1d", "eta_2_5_2d"] {
        let ProfileShape::Moment(eta) = &catalog_lookup(name).unwrap().profile.shape else { unreachable!() };
        let c = eta.monomial.as_ref().unwrap();
        let at1: f64 = c.iter().sum();
        let d1: f64 = c.iter().enumerate().map(|(i, v)| i as f64 * v).sum();
        eta25 = eta25.max(at1.abs()).max(d1.abs()).max(c[1].abs());
    }
    outcome(
        worst.0 <= RESIDUAL_TOL && eta25 <= RESIDUAL_TOL,
        format!(
            "{} kernels; max residual {:.1e} ({}); eta_2_5 eta(1), eta'(1), eta'(0) <= {:.1e} (tol {RESIDUAL_TOL:.0e})",
            catalog().len(),
            worst.0,
            worst.1,
            eta25
        ),
    )
}

fn criterion_2() -> Outcome {
    let printed: [(MomentProblemSpec, Vec<f64>); 5] = [
        (MomentProblemSpec::legendre(1, 1, 0), vec![0.5]),
        (MomentProblemSpec::legendre(1, 1, 1).with_boundary_smoothness(1), vec![1.0, -1.0]),
        (MomentProblemSpec::legendre(1, 2, 2), vec![4.5, -18.0, 15.0]),
        (MomentProblemSpec::legendre(1, 2, 3).with_boundary_smoothness(1), vec![6.0, -36.0, 60.0, -30.0]),
        (
            MomentProblemSpec::legendre(1, 2, 5).with_boundary_smoothness(2).with_origin_smoothness(2),
            vec![4.5, 0.0, -150.0, 450.0, -472.5, 168.0],
        ),
    ];
    let mut worst = 0.0_f64;
    for (spec, want) in &printed {
        let got = solve_moment_problem(spec).map(|k| k.monomial.unwrap_or_default()).unwrap_or_default();
        if got.len() != want.len() {
            return outcome(false, format!("{spec:?}: {} coefficients, expected {}", got.len(), want.len()));
        }
        worst = worst.max(got.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
    }
    outcome(worst <= TABLE1_TOL, format!("5 forms; max coefficient difference {worst:.1e} (tol {TABLE1_TOL:.0e})"))
}

fn criterion_3() -> Outcome {
    let hs: Vec<f64> = (2..=6).map(|e| 2f64.powi(-e)).collect();
    let slope = |name: &str| {
        let es: Vec<f64> = hs.iter().map(|&h| weak_star_oracle(name, h)).collect();
        least_squares_slope(&hs, &es)
    };
    let one = ["eta_1_0_1d", "eta_1_1_1d", "eta_hat2", "eta_cos", "eta_cos_0_1d", "eta_1_1_2d", "eta_1_2_2d", "eta_cos_0_2d", "tensor:eta_1_1_1d"];
    let two = ["eta_2_2_1d", "eta_2_3_1d", "eta_2_5_1d", "eta_cos_2_1d", "eta_2_3_2d", "eta_2_5_2d", "tensor:eta_2_3_1d"];
    let mut pass = true;
    let mut spread = |names: &[&str], target: f64| {
        let s: Vec<f64> = names.iter().map(|n| slope(n)).collect();
        pass &= s.iter().all(|v| (v - target).abs() <= SLOPE_TOL);
        (s.iter().cloned().fold(f64::MAX, f64::min), s.iter().cloned().fold(f64::MIN, f64::max))
    };
    let s1 = spread(&one, 2.0);
    let s2 = spread(&two, 4.0);
    let cubic = slope("eta_cubic");
    let pairs = [("eta_1_1_2d", "tensor:eta_1_1_1d"), ("eta_2_3_2d", "tensor:eta_2_3_1d")];
    let gap = pairs.iter().map(|(a, b)| (slope(a) - slope(b)).abs()).fold(0.0, f64::max);
    pass &= cubic >= CUBIC_MIN_SLOPE && gap <= RADIAL_TENSOR_TOL;
    outcome(
        pass,
        format!(
            "1-moment slopes [{:.3}, {:.3}], 2-moment [{:.3}, {:.3}] (tol {SLOPE_TOL}); cubic {cubic:.3} >= {CUBIC_MIN_SLOPE}; radial/tensor gap {gap:.3} <= {RADIAL_TENSOR_TOL}",
            s1.0, s1.1, s2.0, s2.1
        ),
    )
}

fn criterion_4() -> Outcome {
    // published R(1/32) values of the 1D Helmholtz table
    let printed =
        [("eta_0_1_1d", 1.9965), ("eta_1_2_1d", 1.9924), ("eta_2_3_1d", 3.9961), ("eta_cos", 1.9889), ("eta_cubic", 3.9895)];
    let report = shipped(include_str!("../../../configs/helmholtz1d.conf"));
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, want) in printed {
        let r = ratio_at(&report, k, "", 1.0 / 32.0).unwrap_or(f64::NAN);
        pass &= (r - want).abs() <= HELM1D_TOL;
        parts.push(format!("{k} {r:.4}/{want}"));
    }
    // the convolution harness against a Green's-function oracle
    let d = catalog_lookup("eta_cubic").unwrap().radial(0.125).unwrap();
    let xs = [-0.9, -0.2, 0.1, 0.3, 0.75];
    let lib = solve_regularized_1d(&Helmholtz1D { k0: 10.0, kernel: d.clone(), hbar: 0.25 }, &xs).unwrap();
    let s = d.support_radius();
    let oracle_gap = xs
        .iter()
        .zip(&lib.values)
        .map(|(&x, v)| {
            let o = simpson_split(|y| green_1d(x, y, 10.0) * d.eval(&[y]).unwrap(), -s, s, &[-0.125, 0.0, 0.125, x], 4000);
            (o - v).abs()
        })
        .fold(0.0, f64::max);
    pass &= oracle_gap <= HELM1D_ORACLE_TOL;
    outcome(pass, format!("R(1/32) {} (tol {HELM1D_TOL}); solver vs Green oracle {oracle_gap:.1e}", parts.join(", ")))
}

fn criterion_5() -> Outcome {
    let report = shipped(include_str!("../../../configs/helmholtz2d.conf"));
    let r = |k| ratio_at(&report, k, "", 1.0 / 32.0).unwrap_or(f64::NAN);
    let (a, b, c) = (r("eta_0_1_2d"), r("eta_1_2_2d"), r("eta_2_3_2d"));
    let band = |v: f64| (HELM2D_BAND.0..=HELM2D_BAND.1).contains(&v);
    outcome(
        band(a) && band(b) && c >= HELM2D_MIN_TWO_MOMENT,
        format!(
            "R(1/32): eta_0_1 {a:.4}, eta_1_2 {b:.4} in [{}, {}]; eta_2_3 {c:.4} >= {HELM2D_MIN_TWO_MOMENT}",
            HELM2D_BAND.0, HELM2D_BAND.1
        ),
    )
}

fn criterion_6() -> Outcome {
    let report = shipped(include_str!("../../../configs/sobolev.conf"));
    let mut pass = true;
    let mut parts = Vec::new();
    for alpha in [0.25, 0.5, 0.9] {
        let rs: Vec<f64> = ["eta_0_1_2d", "eta_1_2_2d", "eta_2_3_2d"]
            .iter()
            .map(|k| ratio_at(&report, k, &format!("alpha={alpha}"), 1.0 / 128.0).unwrap_or(f64::NAN))
            .collect();
        pass &= rs.iter().all(|r| (r - alpha).abs() <= SOBOLEV_TOL);
        parts.push(format!("a={alpha}: {:.4}/{:.4}/{:.4}", rs[0], rs[1], rs[2]));
    }
    outcome(pass, format!("R(1/128) {} (tol {SOBOLEV_TOL})", parts.join("; ")))
}

fn criterion_7() -> Outcome {
    let grid = PeriodicGrid1D::new(1024, 2.0 * PI).unwrap();
    let (mut phase, mut amp) = (0.0_f64, 0.0_f64);
    let mut max_error = Vec::new();
    for name in ["eta_1_1_1d", "eta_2_3_1d"] {
        let run = AdvectionRun::new(grid, catalog_lookup(name).unwrap().radial(0.25).unwrap());
        let r = advect_leapfrog(&run).unwrap();
        let (c0, c1) = (dft(&r.initial), dft(&r.final_state));
        let top = c0.iter().map(|c| c.0.hypot(c.1)).fold(0.0, f64::max);
        for j in 0..grid.n {
            let m = if j <= grid.n / 2 { j as f64 } else { j as f64 - grid.n as f64 };
            let k = if j == grid.n / 2 { 0.0 } else { m };
            let (a0, a1) = (c0[j].0.hypot(c0[j].1), c1[j].0.hypot(c1[j].1));
            amp = amp.max((a1 - a0).abs());
            if a0 > 1e-3 * top {
                let want = -(r.steps as f64) * (k * r.dt).asin();
                let got = c1[j].1.atan2(c1[j].0) - c0[j].1.atan2(c0[j].0);
                let d = (got - want).rem_euclid(2.0 * PI);
                phase = phase.max(d.min(2.0 * PI - d));
            }
        }
        max_error.push(r.initial.iter().zip(&r.final_state).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
    }
    outcome(
        phase <= PHASE_TOL && amp <= AMPLITUDE_TOL && max_error[1] > max_error[0],
        format!(
            "T=36pi: phase vs arcsin law {phase:.1e} (tol {PHASE_TOL:.0e}); amplitude drift {amp:.1e} (tol {AMPLITUDE_TOL:.0e}); max E eta_2_3 {:.3} > eta_1_1 {:.3} at H=1/4",
            max_error[1], max_error[0]
        ),
    )
}

fn criterion_8() -> Outcome {
    let grid = PeriodicGrid1D::new(512, 16.0 * PI).unwrap();
    let x = grid.nodes();
    let dx = grid.dx();
    let mut run = KdvRun::new(grid, x.iter().map(|&x| soliton(x, 0.0, 1.0)).collect());
    run.t_final = 1.0;
    let r = kdv_solve(&run).unwrap();
    let u = &r.final_state().u;
    let err = x.iter().zip(u).map(|(&x, &u)| (u - soliton(x, 1.0, 1.0)).abs()).fold(0.0, f64::max);
    let mass = |v: &[f64]| v.iter().sum::<f64>() * dx;
    let mom = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>() * dx;
    let dm = (mass(u) - mass(&run.initial)).abs();
    let dp = (mom(u) - mom(&run.initial)).abs();
    let mut shifts = Vec::new();
    let mut completed = true;
    for h in [PI, PI / 2.0, PI / 4.0] {
        let d = catalog_lookup("eta_2_5_1d").unwrap().radial(h).unwrap();
        let mut imp = KdvRun::new(grid, x.iter().map(|&x| d.eval(&[x]).unwrap()).collect());
        completed &= kdv_solve(&imp).is_ok();
        // the soliton separates from the radiation well after t = 0.05
        imp.t_final = 4.0;
        match kdv_solve(&imp) {
            Ok(long) => shifts.push(peak(&x, &long.final_state().u) - peak(&x, &imp.initial)),
            Err(_) => completed = false,
        }
    }
    let pass = err <= SOLITON_TOL && dm <= MASS_TOL && dp <= MOMENTUM_TOL && completed && shifts.iter().all(|s| *s > 0.0);
    outcome(
        pass,
        format!(
            "soliton error {err:.1e} (tol {SOLITON_TOL:.0e}); mass drift {dm:.1e}; momentum drift {dp:.1e}; eta_2_5 runs to t=0.05 ok={completed}, peak shift at t=4 {:?}",
            shifts.iter().map(|s| (s * 1e3).round() / 1e3).collect::<Vec<_>>()
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut worst = 0.0_f64;
    for i in 1..=1000 {
        let x = 20.0 * i as f64 / 1000.0;
        let (j, y) = bessel_j0_y0(x).unwrap();
        let (oj, oy) = series_j0_y0(x);
        worst = worst.max((j - oj).abs()).max((y - oy).abs());
    }
    let zero = bisect(|x| bessel_j0_y0(x).unwrap().0, 2.0, 3.0);
    let oracle = bisect(|x| series_j0_y0(x).0, 2.0, 3.0);
    outcome(
        worst <= BESSEL_TOL && (zero - oracle).abs() <= ZERO_TOL,
        format!("max |diff| vs series {worst:.1e} (tol {BESSEL_TOL:.0e}); first zero {zero:.12} vs {oracle:.12}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("moment residuals", criterion_1),
        ("closed-form table", criterion_2),
        ("weak-* rates", criterion_3),
        ("1D Helmholtz rates", criterion_4),
        ("2D Helmholtz rates", criterion_5),
        ("weighted Sobolev rates", criterion_6),
        ("advection dispersion", criterion_7),
        ("KdV health", criterion_8),
        ("Bessel oracle", criterion_9),
    ];
    // `cargo test -- <filter>` passes a name filter; run everything regardless
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {} {:<24} {} [{:.1}s] {}",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
