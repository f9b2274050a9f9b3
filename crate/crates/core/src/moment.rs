//! The continuous finite moment problem for radial profiles `η` on `[0, 1]`.
//!
//! A profile is expanded in a truncated orthogonal basis and its coefficients are
//! fixed by the reduced radial moment rows
//!
//! ```text
//! ν(n) ∫₀¹ η(r) r^{n-1} dr = 1,     ∫₀¹ η(r) r^{θ+n-1} dr = 0   (θ = 1..m)
//! ```
//!
//! optionally followed by derivative constraints at `r = 1` (so the extended
//! delta vanishes smoothly at the edge of its support) and at `r = 0` (so the
//! radial extension is smooth through the origin).
//!
//! In one dimension the even extension makes every odd moment vanish, so a
//! one-moment profile only needs the mass row unless the degree calls for more.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::basis::{poly_derivative, poly_eval, shifted_legendre_monomial, BasisFamily, BasisKind};
use crate::error::{Error, Result};
use crate::linalg::DenseLinearSystem;
use crate::quadrature::{cached_rule, integrate_piecewise};

/// How the zeroth moment row is normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `∫_{ℝⁿ} δ_H = 1`; the radial factor is the unit sphere's surface measure
    /// (2 in 1D, 2π in 2D).
    SurfaceMeasure,
    /// The radial factor is the area of the unit ball (2 in 1D, π in 2D). 2D
    /// profiles built this way carry total mass 2.
    UnitBallArea,
}

impl Normalization {
    /// The factor `ν(n)` multiplying `∫₀¹ η r^{n-1} dr` in the mass row.
    pub fn radial_factor(self, dim: usize) -> f64 {
        match (self, dim) {
            (_, 1) => 2.0,
            (Normalization::SurfaceMeasure, 2) => 2.0 * PI,
            (Normalization::UnitBallArea, 2) => PI,
            // only one- and two-dimensional profiles are supported
            _ => f64::NAN,
        }
    }
}

/// Parameters of one finite moment problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentProblemSpec {
    pub dim: usize,
    pub moments: usize,
    /// Highest basis index (polynomial degree for the Legendre basis).
    pub degree: usize,
    pub basis: BasisKind,
    /// Derivative orders `0..s` forced to vanish at `r = 1`.
    pub boundary_smoothness: usize,
    /// Derivative orders `1..origin_smoothness` forced to vanish at `r = 0`.
    pub origin_smoothness: usize,
    pub normalization: Normalization,
}

impl MomentProblemSpec {
    pub fn legendre(dim: usize, moments: usize, degree: usize) -> Self {
        Self {
            dim,
            moments,
            degree,
            basis: BasisKind::ShiftedLegendre,
            boundary_smoothness: 0,
            origin_smoothness: 0,
            normalization: Normalization::SurfaceMeasure,
        }
    }

    pub fn cosine(dim: usize, moments: usize, max_index: usize) -> Self {
        Self {
            basis: BasisKind::Cosine,
            ..Self::legendre(dim, moments, max_index)
        }
    }

    pub fn with_boundary_smoothness(mut self, s: usize) -> Self {
        self.boundary_smoothness = s;
        self
    }

    pub fn with_origin_smoothness(mut self, s: usize) -> Self {
        self.origin_smoothness = s;
        self
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn family(&self) -> BasisFamily {
        BasisFamily::new(self.basis, self.degree)
    }

    /// Radial powers θ of the moment rows. A 1D one-moment problem drops the
    /// (automatically satisfied) first-moment row when keeping it would leave
    /// more rows than coefficients.
    pub fn moment_orders(&self) -> Vec<usize> {
        let mass_only = self.moments == 0
            || (self.dim == 1 && self.moments == 1 && self.degree + 1 < 2 + self.constraint_count());
        if mass_only {
            vec![0]
        } else {
            (0..=self.moments).collect()
        }
    }

    pub fn constraint_count(&self) -> usize {
        self.boundary_smoothness + self.origin_smoothness.saturating_sub(1)
    }

    pub fn row_count(&self) -> usize {
        self.moment_orders().len() + self.constraint_count()
    }

    fn validate(&self) -> Result<()> {
        if !(1..=2).contains(&self.dim) {
            return Err(Error::InvalidSpec(format!("dimension {} not in {{1, 2}}", self.dim)));
        }
        let rows = self.row_count();
        let unknowns = self.degree + 1;
        if rows != unknowns {
            return Err(Error::Dimension(format!(
                "{rows} constraint rows for {unknowns} basis coefficients (degree {})",
                self.degree
            )));
        }
        Ok(())
    }
}

/// A solved radial profile together with the problem that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "EtaKernelWire", into = "EtaKernelWire")]
pub struct EtaKernel {
    pub name: String,
    pub spec: MomentProblemSpec,
    /// Coordinates in the spec's basis.
    pub coeffs: Vec<f64>,
    /// Ascending monomial coefficients; present for the Legendre basis only.
    pub monomial: Option<Vec<f64>>,
}

impl EtaKernel {
    pub fn default_name(spec: &MomentProblemSpec) -> String {
        match spec.basis {
            BasisKind::ShiftedLegendre => format!("eta_{}_{}_{}d", spec.moments, spec.degree, spec.dim),
            BasisKind::Cosine => format!("eta_cos_{}_{}d", spec.moments, spec.dim),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// `η(r)` evaluated from the basis coordinates.
    pub fn value(&self, r: f64) -> f64 {
        let fam = self.spec.family();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c * fam.value(j, r))
            .sum()
    }

    /// `η(r)` evaluated from the monomial form, when available.
    pub fn monomial_value(&self, r: f64) -> Option<f64> {
        self.monomial.as_ref().map(|c| poly_eval(c, r))
    }

    pub fn derivative(&self, order: usize, r: f64) -> f64 {
        if order == 0 {
            return self.value(r);
        }
        match &self.monomial {
            Some(c) => poly_derivative(c, order, r),
            None => {
                let fam = self.spec.family();
                self.coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, c)| c * fam.derivative(j, order, r))
                    .sum()
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&EtaKernelWire::from(self)).expect("kernel serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: EtaKernelWire =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("kernel json: {e}")))?;
        Ok(wire.into())
    }
}

/// JSON layout of an [`EtaKernel`].
#[derive(Debug, Clone, Serialize, Deserialize)]
struct EtaKernelWire {
    name: String,
    dim: usize,
    m: usize,
    p: usize,
    basis: BasisKind,
    coeffs: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    monomial: Option<Vec<f64>>,
    normalization: Normalization,
    #[serde(default)]
    boundary_smoothness: usize,
    #[serde(default)]
    origin_smoothness: usize,
}

impl From<&EtaKernel> for EtaKernelWire {
    fn from(k: &EtaKernel) -> Self {
        Self {
            name: k.name.clone(),
            dim: k.spec.dim,
            m: k.spec.moments,
            p: k.spec.degree,
            basis: k.spec.basis,
            coeffs: k.coeffs.clone(),
            monomial: k.monomial.clone(),
            normalization: k.spec.normalization,
            boundary_smoothness: k.spec.boundary_smoothness,
            origin_smoothness: k.spec.origin_smoothness,
        }
    }
}

impl From<EtaKernel> for EtaKernelWire {
    fn from(k: EtaKernel) -> Self {
        Self::from(&k)
    }
}

impl From<EtaKernelWire> for EtaKernel {
    fn from(w: EtaKernelWire) -> Self {
        Self {
            name: w.name,
            spec: MomentProblemSpec {
                dim: w.dim,
                moments: w.m,
                degree: w.p,
                basis: w.basis,
                boundary_smoothness: w.boundary_smoothness,
                origin_smoothness: w.origin_smoothness,
                normalization: w.normalization,
            },
            coeffs: w.coeffs,
            monomial: w.monomial,
        }
    }
}

fn inner_product_order(spec: &MomentProblemSpec) -> usize {
    match spec.basis {
        // exact for r^{θ+n-1} P_j up to total degree m + n - 1 + p
        BasisKind::ShiftedLegendre => (spec.moments + spec.dim + spec.degree) / 2 + 2,
        BasisKind::Cosine => 48,
    }
}

/// Builds the square system for `spec`: moment rows first, then derivative rows.
pub fn assemble_moment_system(spec: &MomentProblemSpec) -> Result<DenseLinearSystem> {
    spec.validate()?;
    let fam = spec.family();
    let rule = cached_rule(inner_product_order(spec));
    let nu = spec.normalization.radial_factor(spec.dim);

    let mut matrix = Vec::with_capacity(spec.row_count());
    let mut rhs = Vec::with_capacity(spec.row_count());
    let mut labels = Vec::with_capacity(spec.row_count());

    for theta in spec.moment_orders() {
        let power = (theta + spec.dim - 1) as i32;
        let row: Vec<f64> = (0..fam.len())
            .map(|j| rule.integrate(0.0, 1.0, |r| r.powi(power) * fam.value(j, r)))
            .collect();
        matrix.push(row);
        rhs.push(if theta == 0 { 1.0 / nu } else { 0.0 });
        labels.push(if theta == 0 {
            "mass".to_string()
        } else {
            format!("moment {theta}")
        });
    }
    for k in 0..spec.boundary_smoothness {
        matrix.push((0..fam.len()).map(|j| fam.derivative(j, k, 1.0)).collect());
        rhs.push(0.0);
        labels.push(format!("d^{k} eta(1) = 0"));
    }
    for k in 1..spec.origin_smoothness {
        matrix.push((0..fam.len()).map(|j| fam.derivative(j, k, 0.0)).collect());
        rhs.push(0.0);
        labels.push(format!("d^{k} eta(0) = 0"));
    }
    DenseLinearSystem::new(matrix, rhs, labels)
}

/// Solves the moment problem in whichever basis `spec` names.
pub fn solve_moment_problem(spec: &MomentProblemSpec) -> Result<EtaKernel> {
    let system = assemble_moment_system(spec)?;
    let coeffs = system.solve()?;
    let monomial = match spec.basis {
        BasisKind::ShiftedLegendre => {
            let mut mono = vec![0.0; spec.degree + 1];
            for (j, c) in coeffs.iter().enumerate() {
                for (i, pc) in shifted_legendre_monomial(j).iter().enumerate() {
                    mono[i] += c * pc;
                }
            }
            Some(mono)
        }
        BasisKind::Cosine => None,
    };
    Ok(EtaKernel {
        name: EtaKernel::default_name(spec),
        spec: *spec,
        coeffs,
        monomial,
    })
}

/// Cosine-basis variant; rejects specs that name another basis.
pub fn solve_cosine_moment_problem(spec: &MomentProblemSpec) -> Result<EtaKernel> {
    if spec.basis != BasisKind::Cosine {
        return Err(Error::InvalidSpec(format!(
            "expected the cosine basis, got {:?}",
            spec.basis
        )));
    }
    solve_moment_problem(spec)
}

/// Radial moments `ν ∫₀^reach f(r) r^{θ+n-1} dr`, integrated panel-wise between
/// `breaks`.
pub(crate) fn radial_moments<F: Fn(f64) -> f64>(
    f: F,
    reach: f64,
    breaks: &[f64],
    dim: usize,
    nu: f64,
    upto: usize,
) -> Vec<f64> {
    let rule = cached_rule(40);
    (0..=upto)
        .map(|theta| {
            let power = (theta + dim - 1) as i32;
            nu * integrate_piecewise(|r| f(r) * r.powi(power), 0.0, reach, breaks, &rule, 2)
        })
        .collect()
}

/// Signed residuals of the compact moment conditions of the radial extension,
/// for orders `0..=upto`. Odd orders vanish identically by symmetry; even orders
/// report `ν ∫₀¹ η r^{θ+n-1} dr − [θ = 0]`.
pub fn moment_residuals(kernel: &EtaKernel, upto: usize) -> Vec<f64> {
    let nu = kernel.spec.normalization.radial_factor(kernel.spec.dim);
    symmetric_residuals(
        radial_moments(|r| kernel.value(r), 1.0, &[], kernel.spec.dim, nu, upto),
    )
}

pub(crate) fn symmetric_residuals(raw: Vec<f64>) -> Vec<f64> {
    raw.into_iter()
        .enumerate()
        .map(|(theta, v)| match theta {
            0 => v - 1.0,
            t if t % 2 == 1 => 0.0,
            _ => v,
        })
        .collect()
}

/// Residuals of the reduced half-line rows the solver imposes,
/// `ν ∫₀¹ η r^{θ+n-1} dr − [θ = 0]`, for every θ including odd ones.
pub fn reduced_moment_residuals(kernel: &EtaKernel, upto: usize) -> Vec<f64> {
    let nu = kernel.spec.normalization.radial_factor(kernel.spec.dim);
    radial_moments(|r| kernel.value(r), 1.0, &[], kernel.spec.dim, nu, upto)
        .into_iter()
        .enumerate()
        .map(|(theta, v)| if theta == 0 { v - 1.0 } else { v })
        .collect()
}
