//! `deltareg` — build regularized deltas and run the convergence studies.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use deltareg::catalog::{catalog, catalog_json, catalog_lookup};
use deltareg::config::{ExperimentConfig, Format};
use deltareg::moment::{solve_cosine_moment_problem, solve_moment_problem, MomentProblemSpec, Normalization};
use deltareg::report::format_sig12;
use deltareg::spectral::{
    advect_leapfrog, gaussian_source, kdv_solve, pointwise_error_after_periods, soliton, AdvectionRun,
    GaussianVariant, KdvRun, PeriodicGrid1D, Startup,
};
use deltareg::weakstar::{parse_h_schedule, parse_scalar};
use deltareg::{run_study, ConvergenceReport};

/// Configs shipped with the repository, one per acceptance table.
const TABLES: &[(&str, &str)] = &[
    ("moments", include_str!("../../../configs/moments.conf")),
    ("table1", include_str!("../../../configs/table1.conf")),
    ("weakstar", include_str!("../../../configs/weakstar.conf")),
    ("helmholtz1d", include_str!("../../../configs/helmholtz1d.conf")),
    ("helmholtz2d", include_str!("../../../configs/helmholtz2d.conf")),
    ("sobolev", include_str!("../../../configs/sobolev.conf")),
    ("advection", include_str!("../../../configs/advection.conf")),
    ("kdv", include_str!("../../../configs/kdv.conf")),
    ("kdv-gaussian", include_str!("../../../configs/kdv-gaussian.conf")),
    ("bessel", include_str!("../../../configs/bessel.conf")),
];

#[derive(Parser)]
#[command(name = "deltareg", version, about = "Moment-matched regularized deltas and their convergence studies")]
struct Cli {
    /// Write output here instead of stdout (a directory for `advect` and `kdv`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
    /// Assert that no random numbers are used; every computation is deterministic,
    /// so this is accepted and has no effect.
    #[arg(long, global = true)]
    seedless: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Inspect, solve and evaluate kernels.
    #[command(subcommand)]
    Kernel(KernelCommand),
    /// Weak-* error and slope against exp(-|x|^2).
    Weakstar(RateArgs),
    /// 1D Helmholtz pointwise convergence.
    Helmholtz1d(RateArgs),
    /// 2D radial Helmholtz pointwise convergence.
    Helmholtz2d(RateArgs),
    /// 2D radial Helmholtz convergence in weighted Sobolev norms.
    #[command(name = "helmholtz2d-sobolev")]
    Helmholtz2dSobolev(RateArgs),
    /// Spectral leapfrog advection of a regularized delta.
    Advect(AdvectArgs),
    /// KdV with impulse, Gaussian or soliton initial data.
    Kdv(KdvArgs),
    /// Run a shipped acceptance table (or any config file with --config).
    Reproduce(ReproduceArgs),
}

#[derive(Subcommand)]
enum KernelCommand {
    /// List the catalog.
    List,
    /// Solve a moment problem and print the profile.
    Solve(SolveArgs),
    /// Evaluate a catalog delta at points.
    Eval {
        #[arg(long)]
        kernel: String,
        #[arg(long = "H")]
        h: String,
        /// Comma-separated coordinates of one point; repeat for more points.
        #[arg(long, required = true)]
        point: Vec<String>,
    },
    /// Moment residuals of a catalog kernel.
    Moments {
        #[arg(long)]
        kernel: String,
        /// Highest order (defaults to the declared moment count).
        #[arg(long)]
        upto: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Legendre,
    Cosine,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    SurfaceMeasure,
    UnitBallArea,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long)]
    moments: usize,
    /// Polynomial degree, or highest cosine index.
    #[arg(long)]
    degree: usize,
    /// Derivatives 0..s that vanish at r = 1.
    #[arg(long, default_value_t = 0)]
    smoothness: usize,
    /// Derivatives 1..o that vanish at r = 0.
    #[arg(long, default_value_t = 0)]
    origin: usize,
    #[arg(long, value_enum, default_value_t = BasisArg::Legendre)]
    basis: BasisArg,
    #[arg(long, value_enum, default_value_t = NormArg::SurfaceMeasure)]
    normalization: NormArg,
}

#[derive(Args)]
struct RateArgs {
    /// Comma-separated catalog names (`tensor:<1D name>` for 2D tensor products).
    #[arg(long)]
    kernels: String,
    /// H schedule, e.g. `2^-2..2^-6` or `0.25,0.125`.
    #[arg(long = "H")]
    h: Option<String>,
    #[arg(long)]
    k0: Option<String>,
    #[arg(long)]
    hbar: Option<String>,
    /// Weighted-norm exponents (helmholtz2d-sobolev).
    #[arg(long)]
    alpha: Option<String>,
    /// Extra `key=value` config entries.
    #[arg(long = "set")]
    set: Vec<String>,
}

#[derive(Args)]
struct AdvectArgs {
    #[arg(long)]
    kernel: String,
    #[arg(long = "H")]
    h: String,
    #[arg(long = "N", default_value_t = 1024)]
    n: usize,
    #[arg(long = "T", default_value = "36*pi")]
    t: String,
    #[arg(long, default_value = "2*pi")]
    length: String,
    /// Time step (defaults to dx/8).
    #[arg(long)]
    dt: Option<String>,
    #[arg(long, value_enum, default_value_t = StartupArg::DiscreteMode)]
    startup: StartupArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum StartupArg {
    DiscreteMode,
    ExactTranslation,
}

#[derive(Args)]
struct KdvArgs {
    /// `kernel:<name>`, `gaussian`, or `soliton:<c>`.
    #[arg(long)]
    source: String,
    #[arg(long = "H")]
    h: Option<String>,
    #[arg(long = "N", default_value_t = 512)]
    n: usize,
    #[arg(long = "T", default_value = "0.05")]
    t: String,
    #[arg(long, default_value = "1e-4")]
    dt: String,
    #[arg(long, default_value = "16*pi")]
    length: String,
    /// Comma-separated snapshot times.
    #[arg(long)]
    snapshots: Option<String>,
    /// Gaussian width: `pi/64` or `1/(64pi)`.
    #[arg(long, default_value = "pi/64")]
    sigma: String,
    /// Use the unit-mass Gaussian instead of the printed prefactor.
    #[arg(long)]
    normalized_gaussian: bool,
    #[arg(long)]
    no_dealias: bool,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Table id; `list` prints the available ids.
    #[arg(long)]
    table: Option<String>,
    /// Run this config file instead of a shipped table.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "set")]
    set: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let format: Format = cli.format.into();
    let out = cli.out.as_deref();
    match cli.command {
        Command::Kernel(k) => kernel(k, format, out).map(|()| 0),
        Command::Weakstar(a) => rate("weakstar", a, format, out),
        Command::Helmholtz1d(a) => rate("helmholtz1d", a, format, out),
        Command::Helmholtz2d(a) => rate("helmholtz2d", a, format, out),
        Command::Helmholtz2dSobolev(a) => rate("helmholtz2d-sobolev", a, format, out),
        Command::Advect(a) => advect(a, format, out).map(|()| 0),
        Command::Kdv(a) => kdv(a, format, out).map(|()| 0),
        Command::Reproduce(a) => reproduce(a, format, out),
    }
}

fn write_or_print(bytes: &[u8], out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display()))
        }
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes).context("writing stdout")
        }
    }
}

fn finish(report: &ConvergenceReport, format: Format, out: Option<&Path>) -> Result<u8> {
    match out {
        Some(p) => report.write(format, p)?,
        None => write_or_print(&report.emit(format), None)?,
    }
    let (pass, fail, err) = report.rows.iter().fold((0, 0, 0), |(p, f, e), r| match r.status {
        deltareg::RowStatus::Pass => (p + 1, f, e),
        deltareg::RowStatus::Fail => (p, f + 1, e),
        deltareg::RowStatus::Error => (p, f, e + 1),
        deltareg::RowStatus::Info => (p, f, e),
    });
    eprintln!("{}: {pass} passed, {fail} failed, {err} errors", report.id);
    Ok(report.exit_code() as u8)
}

fn rate(study: &str, a: RateArgs, format: Format, out: Option<&Path>) -> Result<u8> {
    let mut pairs = BTreeMap::new();
    pairs.insert("study".to_string(), study.to_string());
    pairs.insert("kernels".to_string(), a.kernels);
    for (k, v) in [("h", a.h), ("k0", a.k0), ("hbar", a.hbar), ("alpha", a.alpha)] {
        if let Some(v) = v {
            pairs.insert(k.to_string(), v);
        }
    }
    for s in a.set {
        let (k, v) = s.split_once('=').with_context(|| format!("--set `{s}` is not key=value"))?;
        pairs.insert(k.trim().to_string(), v.trim().to_string());
    }
    let cfg = ExperimentConfig::from_pairs(&pairs)?;
    finish(&run_study(&cfg)?, format, out)
}

fn reproduce(a: ReproduceArgs, format: Format, out: Option<&Path>) -> Result<u8> {
    let cfg = match (&a.config, a.table.as_deref()) {
        (Some(path), _) => ExperimentConfig::from_file(path, &a.set)?,
        (None, Some("list")) | (None, None) => {
            for (id, _) in TABLES {
                println!("{id}");
            }
            return Ok(0);
        }
        (None, Some(id)) => {
            let Some((_, text)) = TABLES.iter().find(|(t, _)| *t == id) else {
                let ids: Vec<&str> = TABLES.iter().map(|t| t.0).collect();
                bail!("unknown table `{id}`; available: {}", ids.join(", "));
            };
            ExperimentConfig::parse(text, &a.set)?
        }
    };
    let out = out.map(Path::to_path_buf).or_else(|| cfg.out.clone());
    let format = if matches!(format, Format::Csv) { cfg.format } else { format };
    finish(&run_study(&cfg)?, format, out.as_deref())
}

fn kernel(cmd: KernelCommand, format: Format, out: Option<&Path>) -> Result<()> {
    let text = match cmd {
        KernelCommand::List => match format {
            Format::Json => catalog_json() + "\n",
            Format::Csv => {
                let mut s = String::from("name,dim,moments,smoothness,normalization,half_width,signed,closed_form\n");
                for k in catalog() {
                    let e = &k.entry;
                    let norm = serde_json::to_value(e.normalization)?;
                    writeln!(
                        s,
                        "{},{},{},{},{},{},{},\"{}\"",
                        e.name,
                        e.dim,
                        e.moments,
                        e.smoothness,
                        norm.as_str().unwrap_or_default(),
                        e.half_width_factor,
                        e.signed,
                        e.closed_form
                    )?;
                }
                s
            }
        },
        KernelCommand::Solve(a) => {
            let mut spec = match a.basis {
                BasisArg::Legendre => MomentProblemSpec::legendre(a.dim, a.moments, a.degree),
                BasisArg::Cosine => MomentProblemSpec::cosine(a.dim, a.moments, a.degree),
            }
            .with_boundary_smoothness(a.smoothness)
            .with_origin_smoothness(a.origin);
            spec = spec.with_normalization(match a.normalization {
                NormArg::SurfaceMeasure => Normalization::SurfaceMeasure,
                NormArg::UnitBallArea => Normalization::UnitBallArea,
            });
            let k = match a.basis {
                BasisArg::Legendre => solve_moment_problem(&spec)?,
                BasisArg::Cosine => solve_cosine_moment_problem(&spec)?,
            };
            match format {
                Format::Json => k.to_json() + "\n",
                Format::Csv => {
                    let (label, coeffs) = match &k.monomial {
                        Some(m) => ("power", m),
                        None => ("cos_index", &k.coeffs),
                    };
                    let mut s = format!("{label},coefficient\n");
                    for (i, c) in coeffs.iter().enumerate() {
                        writeln!(s, "{i},{}", format_sig12(*c))?;
                    }
                    s
                }
            }
        }
        KernelCommand::Eval { kernel, h, point } => {
            let d = catalog_lookup(&kernel)?.radial(parse_scalar(&h)?)?;
            let mut values = Vec::with_capacity(point.len());
            for p in &point {
                let x: Vec<f64> = p.split(',').map(parse_scalar).collect::<deltareg::Result<_>>()?;
                let v = d.eval(&x)?;
                values.push((x, v));
            }
            match format {
                Format::Json => {
                    let rows: Vec<_> = values.iter().map(|(x, v)| serde_json::json!({ "point": x, "value": v })).collect();
                    serde_json::to_string_pretty(&rows)? + "\n"
                }
                Format::Csv => {
                    let mut s = String::from("point,value\n");
                    for (p, (_, v)) in point.iter().zip(&values) {
                        writeln!(s, "\"{p}\",{}", format_sig12(*v))?;
                    }
                    s
                }
            }
        }
        KernelCommand::Moments { kernel, upto } => {
            let b = catalog_lookup(&kernel)?;
            let res = b.moment_residuals(upto.unwrap_or(b.entry.moments));
            match format {
                Format::Json => serde_json::to_string_pretty(&res)? + "\n",
                Format::Csv => {
                    let mut s = String::from("order,residual\n");
                    for (i, r) in res.iter().enumerate() {
                        writeln!(s, "{i},{}", format_sig12(*r))?;
                    }
                    s
                }
            }
        }
    };
    write_or_print(text.as_bytes(), out)
}

fn write_csv(dir: &Path, name: &str, header: &str, rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let mut s = format!("{header}\n");
    for r in rows {
        let cells: Vec<String> = r.into_iter().map(format_sig12).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    write_or_print(s.as_bytes(), Some(&dir.join(name)))
}

fn advect(a: AdvectArgs, format: Format, out: Option<&Path>) -> Result<()> {
    let grid = PeriodicGrid1D::new(a.n, parse_scalar(&a.length)?)?;
    let mut run = AdvectionRun::new(grid, catalog_lookup(&a.kernel)?.radial(parse_scalar(&a.h)?)?);
    run.t_final = parse_scalar(&a.t)?;
    if let Some(dt) = &a.dt {
        run.dt = parse_scalar(dt)?;
    }
    run.startup = match a.startup {
        StartupArg::DiscreteMode => Startup::DiscreteMode,
        StartupArg::ExactTranslation => Startup::ExactTranslation,
    };
    let profile = pointwise_error_after_periods(&run)?;
    let result = advect_leapfrog(&run)?;
    let drift = result
        .initial_spectrum
        .iter()
        .zip(&result.final_spectrum)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let meta = serde_json::json!({
        "kernel": a.kernel,
        "H": parse_scalar(&a.h)?,
        "N": a.n,
        "L": grid.length,
        "dt": result.dt,
        "T": run.t_final,
        "steps": result.steps,
        "startup": run.startup,
        "support": [profile.support.0, profile.support.1],
        "max_error": profile.max_error,
        "amplitude_drift": drift,
        "phase_mismatch": result.phase_mismatch,
    });
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            write_csv(dir, "error.csv", "x,E", profile.nodes.iter().zip(&profile.error).map(|(x, e)| vec![*x, *e]))?;
            let k = grid.wavenumbers();
            write_csv(
                dir,
                "spectra.csv",
                "k,initial,final",
                (0..grid.n).map(|j| vec![k[j], result.initial_spectrum[j], result.final_spectrum[j]]),
            )?;
            write_or_print((serde_json::to_string_pretty(&meta)? + "\n").as_bytes(), Some(&dir.join("meta.json")))
        }
        None => {
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&meta)? + "\n",
                Format::Csv => {
                    let mut s = String::from("x,E\n");
                    for (x, e) in profile.nodes.iter().zip(&profile.error) {
                        writeln!(s, "{},{}", format_sig12(*x), format_sig12(*e))?;
                    }
                    s
                }
            };
            write_or_print(text.as_bytes(), None)
        }
    }
}

fn kdv(a: KdvArgs, format: Format, out: Option<&Path>) -> Result<()> {
    let grid = PeriodicGrid1D::new(a.n, parse_scalar(&a.length)?)?;
    let nodes = grid.nodes();
    let initial: Vec<f64> = if a.source == "gaussian" {
        let variant = if a.normalized_gaussian { GaussianVariant::Normalized } else { GaussianVariant::AsPrinted };
        let sigma = parse_scalar(&a.sigma)?;
        nodes.iter().map(|&x| gaussian_source(x, sigma, variant)).collect()
    } else if let Some(c) = a.source.strip_prefix("soliton:") {
        let c = parse_scalar(c)?;
        nodes.iter().map(|&x| soliton(x, 0.0, c)).collect()
    } else if let Some(name) = a.source.strip_prefix("kernel:") {
        let h = a.h.as_deref().context("--H is required for kernel sources")?;
        let d = catalog_lookup(name)?.radial(parse_scalar(h)?)?;
        nodes.iter().map(|&x| d.eval(&[x])).collect::<deltareg::Result<_>>()?
    } else {
        bail!("source must be kernel:<name>, gaussian or soliton:<c>");
    };
    let mut run = KdvRun::new(grid, initial);
    run.t_final = parse_scalar(&a.t)?;
    run.dt = parse_scalar(&a.dt)?;
    run.dealias = !a.no_dealias;
    if let Some(s) = &a.snapshots {
        run.snapshots = parse_h_schedule(s).or_else(|_| s.split(',').map(parse_scalar).collect())?;
    }
    let r = kdv_solve(&run)?;
    let meta = serde_json::json!({
        "source": a.source,
        "N": a.n,
        "L": grid.length,
        "dt": run.dt,
        "T": run.t_final,
        "steps": r.steps,
        "dealias": r.dealias,
        "snapshot_times": r.snapshots.iter().map(|s| s.t).collect::<Vec<_>>(),
        "peaks": r.peaks,
        "mass_drift": r.mass_drift,
        "momentum_drift": r.momentum_drift,
    });
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            write_csv(
                dir,
                "snapshots.csv",
                "t,x,u",
                r.snapshots.iter().flat_map(|s| nodes.iter().zip(&s.u).map(move |(x, u)| vec![s.t, *x, *u])),
            )?;
            let k = grid.wavenumbers();
            write_csv(
                dir,
                "spectra.csv",
                "t,k,amplitude",
                r.snapshots.iter().flat_map(|s| k.iter().zip(&s.spectrum).map(move |(k, a)| vec![s.t, *k, *a])),
            )?;
            write_or_print((serde_json::to_string_pretty(&meta)? + "\n").as_bytes(), Some(&dir.join("meta.json")))
        }
        None => {
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&meta)? + "\n",
                Format::Csv => {
                    let mut s = String::from("t,peak\n");
                    for (snap, p) in r.snapshots.iter().zip(&r.peaks) {
                        writeln!(s, "{},{}", format_sig12(snap.t), format_sig12(*p))?;
                    }
                    s
                }
            };
            write_or_print(text.as_bytes(), None)
        }
    }
}
