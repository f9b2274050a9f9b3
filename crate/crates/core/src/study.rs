//! Runs an [`ExperimentConfig`] and assembles its [`ConvergenceReport`].
//!
//! Rows are computed in parallel and joined in job order, then sorted, so the
//! output does not depend on scheduling. A failing row records its error and
//! the remaining rows still run.

use rayon::prelude::*;

use crate::bessel::{bessel_series_j0_y0, j0};
use crate::catalog::{catalog_lookup, KernelBuilder};
use crate::config::{Bound, Check, ExperimentConfig, StudyKind, Target};
use crate::elliptic::{
    exact_profile_1d, exact_profile_2d_radial, exterior_radii, pointwise_error, solve_regularized_1d,
    solve_regularized_2d_radial, uniform_grid_1d, weighted_sobolev_error, Helmholtz1D, QuadratureMesh,
    RadialHelmholtz2D, WeightedNormSpec,
};
use crate::error::{Error, Result};
use crate::kernel::{ProfileShape, RegularizedDelta};
use crate::report::{ConvergenceReport, ReportRow, RowStatus};
use crate::spectral::{
    advect_leapfrog, kdv_solve, gaussian_source, soliton, AdvectionRun, KdvRun, PeriodicGrid1D,
};
use crate::weakstar::{convergence_slope, weak_star_error};

/// Soliton shape error allowed after the run.
pub const SOLITON_TOL: f64 = 1e-6;
/// `∫u²` drift allowed over a KdV soliton run.
pub const MOMENTUM_TOL: f64 = 1e-6;
/// Relative tolerance on the tracked soliton speed.
pub const SPEED_REL_TOL: f64 = 0.02;
/// Distance between the computed and reference first zero of `J₀`.
pub const ZERO_TOL: f64 = 1e-6;
/// Terms of the reference Bessel power series.
pub const SERIES_TERMS: usize = 40;

/// A kernel name from a config: a catalog name, or `tensor:<1D name>` for the
/// 2D tensor product shrunk into the ball.
#[derive(Debug, Clone)]
pub enum KernelRef {
    Radial(&'static KernelBuilder),
    Tensor(&'static KernelBuilder),
}

impl KernelRef {
    pub fn parse(name: &str) -> Result<Self> {
        match name.strip_prefix("tensor:") {
            Some(base) => {
                let b = catalog_lookup(base)?;
                if b.entry.dim != 1 {
                    return Err(Error::Dimension(format!("tensor factor `{base}` must be 1D")));
                }
                Ok(KernelRef::Tensor(b))
            }
            None => Ok(KernelRef::Radial(catalog_lookup(name)?)),
        }
    }

    pub fn builder(&self) -> &'static KernelBuilder {
        match self {
            KernelRef::Radial(b) | KernelRef::Tensor(b) => b,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            KernelRef::Radial(b) => b.entry.dim,
            KernelRef::Tensor(_) => 2,
        }
    }

    pub fn delta(&self, h: f64) -> Result<RegularizedDelta> {
        match self {
            KernelRef::Radial(b) => b.radial(h),
            KernelRef::Tensor(b) => b.tensor(2, h, true),
        }
    }
}

struct Job {
    kernel: String,
    params: String,
    h: Option<f64>,
    expected: Option<f64>,
}

pub fn run_study(cfg: &ExperimentConfig) -> Result<ConvergenceReport> {
    cfg.validate()?;
    let mut report = ConvergenceReport::new(cfg.id.clone(), cfg.study, cfg.tolerance);
    report.rows = match cfg.study {
        StudyKind::Weakstar | StudyKind::Helmholtz1d | StudyKind::Helmholtz2d | StudyKind::Helmholtz2dSobolev => {
            rate_study(cfg)
        }
        StudyKind::Moments => moments_study(cfg),
        StudyKind::Table1 => table1_study(cfg),
        StudyKind::Advect => advect_study(cfg),
        StudyKind::Kdv => kdv_study(cfg),
        StudyKind::Bessel => bessel_study(cfg),
    };
    report.sort();
    Ok(report)
}

fn rate_jobs(cfg: &ExperimentConfig) -> Vec<std::result::Result<Job, ReportRow>> {
    let mut jobs = Vec::new();
    for name in &cfg.kernels {
        let kref = match KernelRef::parse(name) {
            Ok(k) => k,
            Err(e) => {
                jobs.push(Err(ReportRow::new(name.clone(), "", None).failed(&e)));
                continue;
            }
        };
        let rate = kref.builder().entry.expected_rate();
        let param_sets: Vec<(String, Option<f64>)> = match cfg.study {
            StudyKind::Weakstar => vec![(format!("dim={}", kref.dim()), Some(rate))],
            StudyKind::Helmholtz2dSobolev => cfg
                .alpha
                .iter()
                .map(|&a| (format!("alpha={a}"), WeightedNormSpec::new(a, 2).ok().map(|s| s.expected_rate(0))))
                .collect(),
            _ => vec![(format!("k0={};hbar={}", cfg.k0, cfg.hbar), Some(rate))],
        };
        for (params, expected) in param_sets {
            for &h in &cfg.h {
                jobs.push(Ok(Job { kernel: name.clone(), params: params.clone(), h: Some(h), expected }));
            }
        }
    }
    jobs
}

fn alpha_of(params: &str) -> Option<f64> {
    params.strip_prefix("alpha=")?.parse().ok()
}

fn rate_error(cfg: &ExperimentConfig, job: &Job, exact_1d: &Option<crate::SolutionProfile>) -> Result<f64> {
    let kref = KernelRef::parse(&job.kernel)?;
    let h = job.h.expect("rate jobs have H");
    let d = kref.delta(h)?;
    match cfg.study {
        StudyKind::Weakstar => weak_star_error(&d),
        StudyKind::Helmholtz1d => {
            let nodes = uniform_grid_1d(cfg.samples);
            let reg = solve_regularized_1d(&Helmholtz1D { k0: cfg.k0, kernel: d, hbar: cfg.hbar }, &nodes)?;
            let exact = match exact_1d {
                Some(e) => e.clone(),
                None => exact_profile_1d(&nodes, cfg.k0)?,
            };
            pointwise_error(&exact, &reg, cfg.hbar)
        }
        StudyKind::Helmholtz2d => {
            let nodes = exterior_radii(cfg.hbar, cfg.samples);
            let problem = RadialHelmholtz2D { k0: cfg.k0, kernel: d, hbar: cfg.hbar };
            let reg = solve_regularized_2d_radial(&problem, &nodes)?;
            pointwise_error(&exact_profile_2d_radial(&nodes, cfg.k0)?, &reg, 0.0)
        }
        StudyKind::Helmholtz2dSobolev => {
            let spec = WeightedNormSpec::new(alpha_of(&job.params).expect("alpha param"), 2)?;
            let mesh = QuadratureMesh::graded(d.support_radius(), &[], 60, 32, 20);
            let problem = RadialHelmholtz2D { k0: cfg.k0, kernel: d, hbar: cfg.hbar };
            let reg = solve_regularized_2d_radial(&problem, &mesh.nodes)?;
            let exact = exact_profile_2d_radial(&mesh.nodes, cfg.k0)?;
            weighted_sobolev_error(&exact, &reg, &mesh, &spec)
        }
        _ => unreachable!("not a rate study"),
    }
}

fn rate_study(cfg: &ExperimentConfig) -> Vec<ReportRow> {
    let exact_1d = if cfg.study == StudyKind::Helmholtz1d {
        exact_profile_1d(&uniform_grid_1d(cfg.samples), cfg.k0).ok()
    } else {
        None
    };
    let jobs = rate_jobs(cfg);
    let computed: Vec<ReportRow> = jobs
        .into_par_iter()
        .map(|job| match job {
            Err(row) => row,
            Ok(job) => {
                let mut row = ReportRow::new(job.kernel.clone(), job.params.clone(), job.h);
                row.expected = job.expected;
                match rate_error(cfg, &job, &exact_1d) {
                    Ok(e) => {
                        row.error = Some(e);
                        row
                    }
                    Err(e) => row.failed(&e),
                }
            }
        })
        .collect();
    let mut rows = Vec::with_capacity(computed.len());
    let mut start = 0;
    while start < computed.len() {
        let key = (&computed[start].kernel, &computed[start].params);
        let end = start + computed[start..].iter().take_while(|r| (&r.kernel, &r.params) == key).count();
        let mut group = computed[start..end].to_vec();
        finish_group(cfg, &mut group);
        rows.extend(group);
        start = end;
    }
    rows
}

/// Fills ratios and slope for one (kernel, params) group and marks the row
/// that carries the acceptance decision.
fn finish_group(cfg: &ExperimentConfig, group: &mut [ReportRow]) {
    group.sort_by(|a, b| b.h.unwrap_or(0.0).total_cmp(&a.h.unwrap_or(0.0)));
    let ok: Vec<usize> = (0..group.len()).filter(|&i| group[i].status != RowStatus::Error && group[i].h.is_some()).collect();
    if ok.len() < 2 {
        return;
    }
    let hs: Vec<f64> = ok.iter().map(|&i| group[i].h.expect("filtered")).collect();
    let es: Vec<f64> = ok.iter().map(|&i| group[i].error.expect("filtered")).collect();
    let fit = match convergence_slope(&hs, &es) {
        Ok(f) => f,
        Err(e) => {
            let last = *ok.last().expect("two rows");
            group[last].status = RowStatus::Error;
            group[last].message = Some(e.to_string());
            return;
        }
    };
    for (j, &i) in ok.iter().enumerate() {
        group[i].slope = Some(fit.slope);
        group[i].ratio = fit.ratios.get(j).copied().flatten();
    }
    if !fit.warnings.is_empty() {
        let last = *ok.last().expect("two rows");
        group[last].message = Some(fit.warnings.join("; "));
    }
    let kernel = group[0].kernel.clone();
    let default_expected = group[0].expected;
    let target = cfg.target(&kernel, default_expected);
    let decide = |row: &mut ReportRow, value: Option<f64>, target: &Target| {
        row.expected = target.expected;
        row.status = match value {
            Some(v) if target.accepts(v) => RowStatus::Pass,
            _ => RowStatus::Fail,
        };
    };
    match cfg.check {
        Check::None => {}
        Check::Slope => {
            let last = *ok.last().expect("two rows");
            decide(&mut group[last], Some(fit.slope), &target);
        }
        Check::LastRatio => {
            let at = ok.iter().rev().copied().find(|&i| group[i].ratio.is_some()).unwrap_or(ok[ok.len() - 2]);
            let value = group[at].ratio;
            decide(&mut group[at], value, &target);
        }
    }
}

fn metric_row(kernel: &str, metric: &str, h: Option<f64>, value: f64, target: Option<&Target>) -> ReportRow {
    let mut row = ReportRow::new(kernel, format!("metric={metric}"), h);
    row.error = Some(value);
    if let Some(t) = target {
        row.expected = t.expected;
        row.status = if t.accepts(value) { RowStatus::Pass } else { RowStatus::Fail };
    }
    row
}

fn at_most(tol: f64) -> Target {
    Target { expected: Some(0.0), tolerance: tol, bound: Bound::TwoSided }
}

fn moments_study(cfg: &ExperimentConfig) -> Vec<ReportRow> {
    let mut rows = Vec::new();
    for name in &cfg.kernels {
        let b = match catalog_lookup(name) {
            Ok(b) => b,
            Err(e) => {
                rows.push(ReportRow::new(name.clone(), "", None).failed(&e));
                continue;
            }
        };
        let target = cfg.target(name, Some(0.0));
        for (k, r) in b.moment_residuals(b.entry.moments).iter().enumerate() {
            rows.push(metric_row(name, &format!("residual_{k}"), None, r.abs(), Some(&target)));
        }
        if let ProfileShape::Moment(eta) = &b.profile.shape {
            for j in 0..eta.spec.boundary_smoothness {
                rows.push(metric_row(name, &format!("d{j}_at_1"), None, eta.derivative(j, 1.0).abs(), Some(&target)));
            }
            for j in 1..eta.spec.origin_smoothness {
                rows.push(metric_row(name, &format!("d{j}_at_0"), None, eta.derivative(j, 0.0).abs(), Some(&target)));
            }
        }
    }
    rows
}

fn table1_study(cfg: &ExperimentConfig) -> Vec<ReportRow> {
    let mut rows = Vec::new();
    for name in &cfg.kernels {
        let row0 = || ReportRow::new(name.clone(), "", None);
        let Some(printed) = cfg.coeffs.get(name) else {
            rows.push(row0().failed(&Error::Config(format!("no `coeffs.{name}` given"))));
            continue;
        };
        let mono = catalog_lookup(name).and_then(|b| match &b.profile.shape {
            ProfileShape::Moment(eta) => eta
                .monomial
                .clone()
                .ok_or_else(|| Error::InvalidSpec(format!("`{name}` has no monomial form"))),
            _ => Err(Error::InvalidSpec(format!("`{name}` is not a moment-problem kernel"))),
        });
        let mono = match mono {
            Ok(m) => m,
            Err(e) => {
                rows.push(row0().failed(&e));
                continue;
            }
        };
        let n = printed.len().max(mono.len());
        let target = cfg.target(name, Some(0.0));
        for i in 0..n {
            let want = printed.get(i).copied().unwrap_or(0.0);
            let got = mono.get(i).copied().unwrap_or(0.0);
            let mut row = metric_row(name, &format!("coeff_{i}"), None, (got - want).abs(), Some(&target));
            row.expected = Some(want);
            rows.push(row);
        }
    }
    rows
}

fn advect_study(cfg: &ExperimentConfig) -> Vec<ReportRow> {
    let jobs: Vec<(String, f64)> = cfg.kernels.iter().flat_map(|k| cfg.h.iter().map(move |&h| (k.clone(), h))).collect();
    let amp = at_most(cfg.tolerance);
    jobs.into_par_iter()
        .flat_map_iter(|(name, h)| {
            let run = (|| {
                let grid = PeriodicGrid1D::new(cfg.n, cfg.length)?;
                let mut run = AdvectionRun::new(grid, catalog_lookup(&name)?.radial(h)?);
                run.t_final = cfg.t_final;
                if let Some(dt) = cfg.dt {
                    run.dt = dt;
                }
                run.startup = cfg.startup;
                let profile = crate::spectral::pointwise_error_after_periods(&run)?;
                let result = advect_leapfrog(&run)?;
                Ok::<_, Error>((profile, result))
            })();
            match run {
                Err(e) => vec![ReportRow::new(name, "", Some(h)).failed(&e)],
                Ok((profile, result)) => {
                    let drift = result
                        .initial_spectrum
                        .iter()
                        .zip(&result.final_spectrum)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max);
                    vec![
                        metric_row(&name, "max_error", Some(h), profile.max_error, None),
                        metric_row(&name, "amplitude_drift", Some(h), drift, Some(&amp)),
                        metric_row(&name, "phase_mismatch", Some(h), result.phase_mismatch, None),
                    ]
                }
            }
        })
        .collect()
}

enum Source {
    Kernel(&'static KernelBuilder),
    Gaussian,
    Soliton { c: f64, t: Option<f64> },
}

fn parse_source(name: &str) -> Result<Source> {
    if name == "gaussian" {
        return Ok(Source::Gaussian);
    }
    if let Some(rest) = name.strip_prefix("soliton:") {
        let mut it = rest.split(':');
        let c = crate::weakstar::parse_scalar(it.next().unwrap_or(""))?;
        let t = it.next().map(crate::weakstar::parse_scalar).transpose()?;
        return Ok(Source::Soliton { c, t });
    }
    let b = catalog_lookup(name)?;
    if b.entry.dim != 1 {
        return Err(Error::Dimension(format!("KdV needs a 1D kernel, `{name}` is {}D", b.entry.dim)));
    }
    Ok(Source::Kernel(b))
}

fn kdv_study(cfg: &ExperimentConfig) -> Vec<ReportRow> {
    let mut jobs: Vec<(String, Option<f64>)> = Vec::new();
    for name in &cfg.kernels {
        match parse_source(name) {
            Ok(Source::Kernel(_)) => jobs.extend(cfg.h.iter().map(|&h| (name.clone(), Some(h)))),
            _ => jobs.push((name.clone(), None)),
        }
    }
    let mass = at_most(cfg.tolerance);
    jobs.into_par_iter()
        .flat_map_iter(|(name, h)| kdv_rows(cfg, &name, h, &mass).unwrap_or_else(|e| vec![ReportRow::new(name, "", h).failed(&e)]))
        .collect()
}

fn kdv_rows(cfg: &ExperimentConfig, name: &str, h: Option<f64>, mass: &Target) -> Result<Vec<ReportRow>> {
    let grid = PeriodicGrid1D::new(cfg.n, cfg.length)?;
    let nodes = grid.nodes();
    let source = parse_source(name)?;
    let initial: Vec<f64> = match &source {
        Source::Kernel(b) => {
            let d = b.radial(h.expect("kernel sources have H"))?;
            if !grid.fits(d.support_radius()) {
                return Err(Error::Support { support: d.support_radius(), domain: grid.length / 2.0 });
            }
            nodes.iter().map(|&x| d.eval(&[x])).collect::<Result<_>>()?
        }
        Source::Gaussian => nodes.iter().map(|&x| gaussian_source(x, cfg.sigma, cfg.gaussian)).collect(),
        Source::Soliton { c, .. } => nodes.iter().map(|&x| soliton(x, 0.0, *c)).collect(),
    };
    let mut run = KdvRun::new(grid, initial);
    run.t_final = match source {
        Source::Soliton { t: Some(t), .. } => t,
        _ => cfg.t_final,
    };
    run.dt = cfg.dt.unwrap_or(run.dt);
    run.snapshots = cfg.snapshots.clone();
    run.dealias = cfg.dealias;
    let r = kdv_solve(&run)?;
    let fin = r.final_state();
    let max_abs = fin.u.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut rows = vec![
        metric_row(name, "mass_drift", h, r.mass_drift, Some(mass)),
        metric_row(name, "momentum_drift", h, r.momentum_drift, None),
        metric_row(name, "max_abs", h, max_abs, None),
    ];
    match source {
        Source::Soliton { c, .. } => {
            let err = nodes
                .iter()
                .zip(&fin.u)
                .map(|(&x, &u)| (u - soliton(x, fin.t, c)).abs())
                .fold(0.0, f64::max);
            rows.push(metric_row(name, "soliton_error", h, err, Some(&at_most(SOLITON_TOL))));
            rows[1] = metric_row(name, "momentum_drift", h, r.momentum_drift, Some(&at_most(MOMENTUM_TOL)));
            let shift = r.peaks.last().expect("final peak") - r.peaks[0];
            if fin.t > 0.0 {
                let speed = Target { expected: Some(c), tolerance: SPEED_REL_TOL * c, bound: Bound::TwoSided };
                rows.push(metric_row(name, "speed", h, shift / fin.t, Some(&speed)));
            }
        }
        _ => {
            let shift = r.peaks.last().expect("final peak") - r.peaks[0];
            rows.push(metric_row(name, "peak_shift", h, shift, None));
            if let Some(horizon) = cfg.peak_horizon {
                let mut long = run.clone();
                long.t_final = horizon;
                long.snapshots.clear();
                let lr = kdv_solve(&long)?;
                let shift = lr.peaks.last().expect("final peak") - lr.peaks[0];
                let positive = Target { expected: Some(0.0), tolerance: 0.0, bound: Bound::AtLeast };
                let mut row = metric_row(name, "peak_shift_extended", h, shift, Some(&positive));
                if shift <= 0.0 {
                    row.status = RowStatus::Fail;
                }
                row.params = format!("metric=peak_shift_extended;t={horizon}");
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

/// First zero of `f` in `[a, b]` by bisection to `~1e−15`.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> Result<f64> {
    let (mut fa, fb) = (f(a), f(b));
    if fa * fb > 0.0 {
        return Err(Error::Domain { value: a, domain: "a bracketing interval" });
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 || (b - a) < 1e-15 {
            return Ok(m);
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    Ok(0.5 * (a + b))
}

fn bessel_study(cfg: &ExperimentConfig) -> Vec<ReportRow> {
    let n = cfg.samples.max(1);
    let tol = at_most(cfg.tolerance);
    let (mut dj, mut dy) = (0.0_f64, 0.0_f64);
    let mut failure = None;
    for i in 1..=n {
        let x = 20.0 * i as f64 / n as f64;
        let (sj, sy) = bessel_series_j0_y0(x, SERIES_TERMS);
        match crate::bessel::bessel01(x) {
            Ok(b) => {
                dj = dj.max((b.j0 - sj).abs());
                dy = dy.max((b.y0 - sy).abs());
            }
            Err(e) => failure = Some(e),
        }
    }
    if let Some(e) = failure {
        return vec![ReportRow::new("bessel", "", None).failed(&e)];
    }
    let mut rows = vec![
        metric_row("bessel", "j0_max_diff", None, dj, Some(&tol)),
        metric_row("bessel", "y0_max_diff", None, dy, Some(&tol)),
    ];
    let zero = bisect(j0, 2.0, 3.0).and_then(|z| Ok((z, bisect(|x| bessel_series_j0_y0(x, SERIES_TERMS).0, 2.0, 3.0)?)));
    match zero {
        Ok((z, oracle)) => rows.push(metric_row("bessel", "first_zero_j0", None, (z - oracle).abs(), Some(&at_most(ZERO_TOL)))),
        Err(e) => rows.push(ReportRow::new("bessel", "metric=first_zero_j0", None).failed(&e)),
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> ExperimentConfig {
        ExperimentConfig::parse(text, &[]).unwrap()
    }

    #[test]
    fn weakstar_two_rows_give_one_ratio() {
        let r = run_study(&cfg("study = weakstar\nkernels = eta_1_1_1d\nh = 0.25, 0.125\ncheck = last_ratio\n")).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert_eq!(r.rows.iter().filter(|r| r.ratio.is_some()).count(), 1);
        assert!(r.rows[0].h > r.rows[1].h);
        assert_eq!(r.rows[0].status, RowStatus::Pass);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn unknown_kernel_gives_error_row() {
        let r = run_study(&cfg("study = weakstar\nkernels = eta_1_1_1d, eta_nope\nh = 0.25, 0.125\n")).unwrap();
        let bad: Vec<_> = r.rows.iter().filter(|r| r.status == RowStatus::Error).collect();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].kernel, "eta_nope");
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn tolerance_failure_exit_code() {
        let r = run_study(&cfg("study = weakstar\nkernels = eta_1_1_1d\nh = 0.25, 0.125\nexpected.eta_1_1_1d = 7\n")).unwrap();
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn deterministic_output() {
        let c = cfg("study = weakstar\nkernels = eta_2_3_1d, tensor:eta_1_1_1d, eta_1_1_2d\nh = 2^-2..2^-4\n");
        let a = run_study(&c).unwrap().to_csv();
        let b = run_study(&c).unwrap().to_csv();
        assert_eq!(a, b);
    }

    #[test]
    fn moments_and_table1() {
        let r = run_study(&cfg("study = moments\nkernels = eta_2_5_1d, eta_cubic\n")).unwrap();
        assert_eq!(r.exit_code(), 0);
        assert!(r.rows.iter().any(|r| r.params == "metric=d1_at_0"));
        let r = run_study(&cfg("study = table1\nkernels = eta_1_1_1d\ncoeffs.eta_1_1_1d = 1, -1\n")).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert_eq!(r.exit_code(), 0);
        let r = run_study(&cfg("study = table1\nkernels = eta_1_1_1d\ncoeffs.eta_1_1_1d = 1, -2\n")).unwrap();
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn bessel_table() {
        let r = run_study(&cfg("study = bessel\nsamples = 50\n")).unwrap();
        assert_eq!(r.rows.len(), 3);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn bisection() {
        let z = bisect(|x| x * x - 2.0, 0.0, 2.0).unwrap();
        assert!((z - 2f64.sqrt()).abs() < 1e-14);
        assert!(bisect(|x| x * x + 1.0, 0.0, 1.0).is_err());
    }
}
