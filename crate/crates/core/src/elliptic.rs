//! Helmholtz point-source benchmarks.
//!
//! Both regularized problems are solved by convolving the source with the exact
//! Green's function, so the only error left in `u − u_H` is the regularization
//! error itself.
//!
//! 1D: the reference solution on `[-1, 1]` is
//! `u(x) = −sin(a(1+min(x,0)))·sin(a(1−max(x,0))) / (k₀ sin k₀)`, `a = k₀/2`,
//! and `G(x, y)` is the same expression with `0` replaced by `y`.
//!
//! 2D (radial, unit disk): `u(r) = −w(r)/4` with `w = Y₀(kr) − (Y₀(k)/J₀(k))J₀(kr)`,
//! the solution of `−(Δ + k²)u = δ`, `u(1) = 0`. For a radial source `f`,
//!
//! ```text
//! u_H(r) = −(π/2) [ w(r) ∫₀^r J₀(ks) s f ds + J₀(kr) ∫_r^1 w(s) s f ds ].
//! ```

use serde::{Deserialize, Serialize};

use crate::bessel::bessel01;
use crate::error::{Error, Result};
use crate::kernel::{Geometry, RadialProfile, RegularizedDelta};
use crate::moment::Normalization;
use crate::quadrature::{cached_rule, order_doubling, panel_edges, GaussRule};

/// Dirichlet-eigenvalue guard for `|sin k₀|` and `|J₀(k₀)|`.
pub const RESONANCE_TOL: f64 = 1e-8;
pub const DEFAULT_K0: f64 = 10.0;
pub const DEFAULT_HBAR: f64 = 0.25;
/// Minimum number of samples outside the excluded ball.
pub const MIN_EXTERIOR_SAMPLES: usize = 2000;

#[derive(Debug, Clone, PartialEq)]
pub struct Helmholtz1D {
    pub k0: f64,
    pub kernel: RegularizedDelta,
    pub hbar: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialHelmholtz2D {
    pub k0: f64,
    pub kernel: RegularizedDelta,
    pub hbar: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileMeta {
    pub k0: f64,
    pub h: Option<f64>,
    pub kernel: String,
    pub dim: usize,
}

/// A sampled solution: `values[i] = u(nodes[i])`, `derivatives[i] = u′(nodes[i])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionProfile {
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
    pub derivatives: Vec<f64>,
    pub meta: ProfileMeta,
}

impl SolutionProfile {
    fn new(nodes: Vec<f64>, values: Vec<f64>, derivatives: Vec<f64>, meta: ProfileMeta) -> Result<Self> {
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain {
                value: f64::NAN,
                domain: "strictly increasing nodes",
            });
        }
        Ok(Self { nodes, values, derivatives, meta })
    }
}

/// Error weight `|x|^{2α}` with support/resolution coupling exponent `β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedNormSpec {
    pub alpha: f64,
    pub beta: f64,
}

impl WeightedNormSpec {
    pub fn new(alpha: f64, dim: usize) -> Result<Self> {
        let spec = Self { alpha, beta: 1.0 };
        spec.validate(dim)?;
        Ok(spec)
    }

    /// α must lie in `(n/2 − 1, n/2)`.
    pub fn validate(&self, dim: usize) -> Result<()> {
        let half = dim as f64 / 2.0;
        if !(self.alpha > half - 1.0 && self.alpha < half) {
            return Err(Error::Domain {
                value: self.alpha,
                domain: "alpha in (n/2 - 1, n/2)",
            });
        }
        if !(self.beta >= 1.0) {
            return Err(Error::Domain {
                value: self.beta,
                domain: "beta >= 1",
            });
        }
        Ok(())
    }

    /// Predicted rate `(α + (β − 1)(m + 1)) / β`.
    pub fn expected_rate(&self, moments: usize) -> f64 {
        (self.alpha + (self.beta - 1.0) * (moments as f64 + 1.0)) / self.beta
    }
}

/// Quadrature nodes and weights on `(0, 1]` shared by the exact and regularized
/// profiles entering [`weighted_sobolev_error`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureMesh {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureMesh {
    /// Panels graded geometrically toward `r = 0` inside `support` (halving
    /// `levels` times), every scaled breakpoint on a panel edge, and
    /// `outer_panels` uniform panels on `[support, 1]`.
    pub fn graded(support: f64, breaks: &[f64], levels: usize, outer_panels: usize, order: usize) -> Self {
        let mut edges: Vec<f64> = (0..=levels).map(|j| support * 0.5f64.powi(j as i32)).collect();
        edges.extend(breaks.iter().copied().filter(|b| *b > 0.0 && *b < 1.0));
        edges.extend((0..=outer_panels).map(|i| support + (1.0 - support) * i as f64 / outer_panels as f64));
        let edges = panel_edges(0.0, 1.0, &edges);
        let rule = cached_rule(order);
        let mut nodes = Vec::with_capacity(edges.len() * order);
        let mut weights = Vec::with_capacity(edges.len() * order);
        for w in edges.windows(2) {
            for (x, wt) in rule.mapped(w[0], w[1]) {
                nodes.push(x);
                weights.push(wt);
            }
        }
        Self { nodes, weights }
    }
}

fn guard_1d(k0: f64) -> Result<()> {
    let s = k0.sin();
    if s.abs() <= RESONANCE_TOL || k0 == 0.0 {
        return Err(Error::Resonance { k0, what: "sin(k0)", value: s });
    }
    Ok(())
}

fn guard_2d(k0: f64) -> Result<f64> {
    let j = bessel01(k0)?.j0;
    if j.abs() <= RESONANCE_TOL {
        return Err(Error::Resonance { k0, what: "J0(k0)", value: j });
    }
    Ok(j)
}

/// Green's function of the 1D problem, symmetric in `(x, y)`.
pub fn green_1d(x: f64, y: f64, k0: f64) -> f64 {
    let a = k0 / 2.0;
    -(a * (1.0 + x.min(y))).sin() * (a * (1.0 - x.max(y))).sin() / (k0 * k0.sin())
}

/// `∂G/∂x`.
pub fn green_1d_dx(x: f64, y: f64, k0: f64) -> f64 {
    let a = k0 / 2.0;
    let c = -1.0 / (k0 * k0.sin());
    if x < y {
        c * a * (a * (1.0 + x)).cos() * (a * (1.0 - y)).sin()
    } else {
        -c * a * (a * (1.0 + y)).sin() * (a * (1.0 - x)).cos()
    }
}

pub fn exact_point_solution_1d(x: f64, k0: f64) -> Result<f64> {
    guard_1d(k0)?;
    if x.abs() > 1.0 {
        return Err(Error::Domain { value: x, domain: "[-1, 1]" });
    }
    Ok(green_1d(x, 0.0, k0))
}

pub fn exact_profile_1d(nodes: &[f64], k0: f64) -> Result<SolutionProfile> {
    guard_1d(k0)?;
    let values = nodes.iter().map(|&x| exact_point_solution_1d(x, k0)).collect::<Result<_>>()?;
    let derivatives = nodes.iter().map(|&x| green_1d_dx(x, 0.0, k0)).collect();
    SolutionProfile::new(
        nodes.to_vec(),
        values,
        derivatives,
        ProfileMeta { k0, h: None, kernel: "point".into(), dim: 1 },
    )
}

/// `n + 1` equispaced nodes on `[-1, 1]`.
pub fn uniform_grid_1d(n: usize) -> Vec<f64> {
    (0..=n).map(|i| -1.0 + 2.0 * i as f64 / n as f64).collect()
}

fn radial_profile(d: &RegularizedDelta, dim: usize) -> Result<(&RadialProfile, f64)> {
    match &d.geometry {
        Geometry::Radial { profile, h } if d.dim == dim => Ok((profile, *h)),
        _ => Err(Error::Dimension(format!("expected a {dim}D radial delta, got `{}`", d.name()))),
    }
}

/// `∫ g(y) δ_H(y) dy` in `z = y/H`, panels split at ±breakpoints, 0 and `kink`.
fn convolve_1d(rule: &GaussRule, p: &RadialProfile, kink: f64, g: impl Fn(f64) -> f64) -> f64 {
    let mut breaks: Vec<f64> = p.breakpoints().iter().flat_map(|b| [*b, -*b]).collect();
    breaks.push(0.0);
    breaks.push(kink);
    panel_edges(-p.reach, p.reach, &breaks)
        .windows(2)
        .map(|w| rule.integrate(w[0], w[1], |z| p.value(z.abs()) * g(z)))
        .sum()
}

/// Regularized 1D solution at `nodes`, by Gauss convolution with `G` and its
/// `x`-derivative (order doubling to 1e-12).
pub fn solve_regularized_1d(problem: &Helmholtz1D, nodes: &[f64]) -> Result<SolutionProfile> {
    let k0 = problem.k0;
    guard_1d(k0)?;
    let (profile, h) = radial_profile(&problem.kernel, 1)?;
    let support = profile.reach * h;
    if support >= 1.0 {
        return Err(Error::Support { support, domain: 1.0 });
    }
    let mut values = Vec::with_capacity(nodes.len());
    let mut derivatives = Vec::with_capacity(nodes.len());
    for &x in nodes {
        let kink = x / h;
        values.push(order_doubling(16, 256, 1e-12, |rule| {
            convolve_1d(rule, profile, kink, |z| green_1d(x, h * z, k0))
        })?);
        derivatives.push(order_doubling(16, 256, 1e-12, |rule| {
            convolve_1d(rule, profile, kink, |z| green_1d_dx(x, h * z, k0))
        })?);
    }
    SolutionProfile::new(
        nodes.to_vec(),
        values,
        derivatives,
        ProfileMeta { k0, h: Some(h), kernel: profile.name.clone(), dim: 1 },
    )
}

/// `w(r) = Y₀(kr) − c J₀(kr)` and `w′(r)`, with `c = Y₀(k)/J₀(k)`.
fn w_and_derivative(r: f64, k: f64, c: f64) -> Result<(f64, f64, f64, f64)> {
    let b = bessel01(k * r)?;
    let w = b.y0 - c * b.j0;
    let dw = -k * (b.y1 - c * b.j1);
    Ok((w, dw, b.j0, b.j1))
}

fn bessel_ratio(k0: f64) -> Result<f64> {
    let j = guard_2d(k0)?;
    Ok(bessel01(k0)?.y0 / j)
}

pub fn exact_point_solution_2d_radial(r: f64, k0: f64) -> Result<f64> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::Domain { value: r, domain: "(0, 1]" });
    }
    let c = bessel_ratio(k0)?;
    Ok(-w_and_derivative(r, k0, c)?.0 / 4.0)
}

pub fn exact_profile_2d_radial(nodes: &[f64], k0: f64) -> Result<SolutionProfile> {
    let c = bessel_ratio(k0)?;
    let mut values = Vec::with_capacity(nodes.len());
    let mut derivatives = Vec::with_capacity(nodes.len());
    for &r in nodes {
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::Domain { value: r, domain: "(0, 1]" });
        }
        let (w, dw, _, _) = w_and_derivative(r, k0, c)?;
        values.push(-w / 4.0);
        derivatives.push(-dw / 4.0);
    }
    SolutionProfile::new(
        nodes.to_vec(),
        values,
        derivatives,
        ProfileMeta { k0, h: None, kernel: "point".into(), dim: 2 },
    )
}

/// Radial 2D solver state: precomputed source data for one kernel and `H`.
struct Radial2D<'a> {
    profile: &'a RadialProfile,
    h: f64,
    k: f64,
    c: f64,
    rule: std::sync::Arc<GaussRule>,
    /// Source breakpoints in `r`.
    breaks: Vec<f64>,
    support: f64,
}

impl Radial2D<'_> {
    fn source(&self, s: f64) -> f64 {
        self.profile.value(s / self.h) / (self.h * self.h)
    }

    fn edges(&self, a: f64, b: f64) -> Vec<f64> {
        panel_edges(a, b, &self.breaks)
    }

    /// `∫₀^r J₀(ks) s f(s) ds`.
    fn inner(&self, r: f64) -> Result<f64> {
        let r = r.min(self.support);
        let mut total = 0.0;
        for w in self.edges(0.0, r).windows(2) {
            for (s, wt) in self.rule.mapped(w[0], w[1]) {
                total += wt * bessel01(self.k * s)?.j0 * s * self.source(s);
            }
        }
        Ok(total)
    }

    /// `∫_r^1 w(s) s f(s) ds`, panels graded geometrically away from `r` to
    /// follow the logarithmic growth of `w` near the origin.
    fn outer(&self, r: f64) -> Result<f64> {
        if r >= self.support {
            return Ok(0.0);
        }
        let mut grid = Vec::new();
        let mut e = r;
        while e < self.support {
            grid.push(e);
            e *= 2.0;
        }
        grid.extend(&self.breaks);
        let mut total = 0.0;
        for w in panel_edges(r, self.support, &grid).windows(2) {
            for (s, wt) in self.rule.mapped(w[0], w[1]) {
                total += wt * w_and_derivative(s, self.k, self.c)?.0 * s * self.source(s);
            }
        }
        Ok(total)
    }
}

/// Regularized radial solution at `nodes ⊂ (0, 1]`. Panels use Gauss order
/// `order` (20 is accurate to ~1e-13 on the graded panels).
pub fn solve_regularized_2d_radial_with(problem: &RadialHelmholtz2D, nodes: &[f64], order: usize) -> Result<SolutionProfile> {
    let k = problem.k0;
    let c = bessel_ratio(k)?;
    let (profile, h) = radial_profile(&problem.kernel, 2)?;
    if profile.normalization != Normalization::SurfaceMeasure {
        return Err(Error::InvalidSpec(format!(
            "`{}` does not carry unit mass; use the surface-measure variant",
            profile.name
        )));
    }
    let support = profile.reach * h;
    if support >= 1.0 {
        return Err(Error::Support { support, domain: 1.0 });
    }
    let solver = Radial2D {
        profile,
        h,
        k,
        c,
        rule: cached_rule(order),
        breaks: profile.breakpoints().iter().map(|b| b * h).collect(),
        support,
    };
    let total_inner = solver.inner(support)?;
    let scale = -std::f64::consts::FRAC_PI_2;
    let mut values = Vec::with_capacity(nodes.len());
    let mut derivatives = Vec::with_capacity(nodes.len());
    for &r in nodes {
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::Domain { value: r, domain: "(0, 1]" });
        }
        let (w, dw, j0, j1) = w_and_derivative(r, k, c)?;
        let (i1, i2) = if r >= support {
            (total_inner, 0.0)
        } else {
            (solver.inner(r)?, solver.outer(r)?)
        };
        values.push(scale * (w * i1 + j0 * i2));
        derivatives.push(scale * (dw * i1 - k * j1 * i2));
    }
    SolutionProfile::new(
        nodes.to_vec(),
        values,
        derivatives,
        ProfileMeta { k0: k, h: Some(h), kernel: profile.name.clone(), dim: 2 },
    )
}

pub fn solve_regularized_2d_radial(problem: &RadialHelmholtz2D, nodes: &[f64]) -> Result<SolutionProfile> {
    solve_regularized_2d_radial_with(problem, nodes, 20)
}

/// `n` equispaced radii in `(a, 1]`.
pub fn exterior_radii(a: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| a + (1.0 - a) * i as f64 / n as f64).collect()
}

fn same_nodes(a: &SolutionProfile, b: &SolutionProfile) -> Result<()> {
    if a.nodes.len() != b.nodes.len() || a.nodes.iter().zip(&b.nodes).any(|(x, y)| x != y) {
        return Err(Error::Dimension("profiles are sampled on different nodes".into()));
    }
    Ok(())
}

/// `max |u − u_H|` over nodes with `|x| > hbar`.
pub fn pointwise_error(exact: &SolutionProfile, reg: &SolutionProfile, hbar: f64) -> Result<f64> {
    same_nodes(exact, reg)?;
    let mut count = 0usize;
    let mut sup = 0.0_f64;
    for ((x, u), uh) in exact.nodes.iter().zip(&exact.values).zip(&reg.values) {
        if x.abs() > hbar {
            count += 1;
            sup = sup.max((u - uh).abs());
        }
    }
    if count == 0 {
        return Err(Error::Domain { value: hbar, domain: "a nonempty exterior region" });
    }
    Ok(sup)
}

/// `(2π ∫₀¹ (u′ − u_H′)² r^{2α+1} dr)^{1/2}` on the nodes and weights of `mesh`
/// (both profiles must be sampled at `mesh.nodes`).
pub fn weighted_sobolev_error(
    exact: &SolutionProfile,
    reg: &SolutionProfile,
    mesh: &QuadratureMesh,
    spec: &WeightedNormSpec,
) -> Result<f64> {
    spec.validate(exact.meta.dim)?;
    same_nodes(exact, reg)?;
    if exact.nodes != mesh.nodes {
        return Err(Error::Dimension("profiles are not sampled on the quadrature mesh".into()));
    }
    let p = 2.0 * spec.alpha + 1.0;
    let sum: f64 = mesh
        .nodes
        .iter()
        .zip(&mesh.weights)
        .zip(exact.derivatives.iter().zip(&reg.derivatives))
        .map(|((r, w), (du, duh))| w * (du - duh).powi(2) * r.powf(p))
        .sum();
    Ok((2.0 * std::f64::consts::PI * sum).sqrt())
}
