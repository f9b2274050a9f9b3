//! Evaluable regularized deltas built from radial profiles.
//!
//! A [`RadialProfile`] is a function `η(z)`, `z = |x| / H ≥ 0`, vanishing for
//! `z > reach`. Moment-problem kernels have `reach = 1`; some literature kernels
//! are printed on `|z| ≤ 2` and keep that half-width factor as metadata.

use serde::{Deserialize, Serialize};

use crate::basis::poly_eval;
use crate::error::{Error, Result};
use crate::moment::{EtaKernel, Normalization};
use crate::quadrature::{cached_rule, panel_edges};

/// One polynomial piece of a piecewise profile, valid for `z ≤ upto`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub upto: f64,
    /// Ascending monomial coefficients in `z`.
    pub monomial: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ProfileShape {
    /// Solution of a finite moment problem on `[0, 1]`.
    Moment(EtaKernel),
    /// `Σ c_k cos(k π z / reach)`.
    Cosine { coeffs: Vec<f64> },
    /// Polynomial pieces in `|z|`; the boundary point belongs to the inner piece.
    Piecewise { pieces: Vec<Piece> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub name: String,
    pub dim: usize,
    /// Declared number of compact moment conditions.
    pub moments: usize,
    pub normalization: Normalization,
    /// Support half-width in units of `H`.
    pub reach: f64,
    pub shape: ProfileShape,
}

impl RadialProfile {
    pub fn from_moment(kernel: EtaKernel, moments: usize) -> Self {
        Self {
            name: kernel.name.clone(),
            dim: kernel.spec.dim,
            moments,
            normalization: kernel.spec.normalization,
            reach: 1.0,
            shape: ProfileShape::Moment(kernel),
        }
    }

    /// `η(z)` for `z ≥ 0`; zero outside the support.
    pub fn value(&self, z: f64) -> f64 {
        let z = z.abs();
        if z > self.reach {
            return 0.0;
        }
        match &self.shape {
            ProfileShape::Moment(k) => k.value(z),
            ProfileShape::Cosine { coeffs } => {
                let t = std::f64::consts::PI * z / self.reach;
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c * (k as f64 * t).cos())
                    .sum()
            }
            ProfileShape::Piecewise { pieces } => pieces
                .iter()
                .find(|p| z <= p.upto)
                .map_or(0.0, |p| poly_eval(&p.monomial, z)),
        }
    }

    /// Points in `(0, reach]` where the profile may lose smoothness, including the
    /// support edge.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.shape {
            ProfileShape::Piecewise { pieces } => pieces.iter().map(|p| p.upto).collect(),
            _ => vec![self.reach],
        }
    }

    /// Whether η takes negative values on its support (sampled).
    pub fn is_signed(&self) -> bool {
        (0..=400).any(|i| self.value(self.reach * i as f64 / 400.0) < -1e-14)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Geometry {
    /// `H^{-n} η(|x| / H)`.
    Radial { profile: RadialProfile, h: f64 },
    /// `∏ h̃_i^{-1} η_i(|x_i| / h̃_i)`.
    TensorProduct {
        axes: Vec<(RadialProfile, f64)>,
        /// False when the hypercube support was not shrunk into `B(0, H)`.
        ball_moments_guaranteed: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularizedDelta {
    pub geometry: Geometry,
    pub dim: usize,
}

impl RegularizedDelta {
    pub fn radial(profile: RadialProfile, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Domain {
                value: h,
                domain: "H > 0",
            });
        }
        if !(1..=2).contains(&profile.dim) {
            return Err(Error::Dimension(format!("radial profiles are 1D or 2D, got {}", profile.dim)));
        }
        let dim = profile.dim;
        Ok(Self {
            geometry: Geometry::Radial { profile, h },
            dim,
        })
    }

    pub fn name(&self) -> String {
        match &self.geometry {
            Geometry::Radial { profile, .. } => profile.name.clone(),
            Geometry::TensorProduct { axes, .. } => {
                let names: Vec<&str> = axes.iter().map(|(p, _)| p.name.as_str()).collect();
                format!("tensor({})", names.join(","))
            }
        }
    }

    /// Radius of the smallest centred ball containing the support.
    pub fn support_radius(&self) -> f64 {
        match &self.geometry {
            Geometry::Radial { profile, h } => profile.reach * h,
            Geometry::TensorProduct { axes, .. } => axes
                .iter()
                .map(|(p, h)| (p.reach * h).powi(2))
                .sum::<f64>()
                .sqrt(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, delta is {}D",
                x.len(),
                self.dim
            )));
        }
        Ok(match &self.geometry {
            Geometry::Radial { profile, h } => {
                let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                profile.value(r / h) / h.powi(self.dim as i32)
            }
            Geometry::TensorProduct { axes, .. } => axes
                .iter()
                .zip(x)
                .map(|((p, h), xi)| p.value(xi.abs() / h) / h)
                .product(),
        })
    }
}

/// Free-function form of [`RegularizedDelta::eval`].
pub fn eval_delta(d: &RegularizedDelta, x: &[f64]) -> Result<f64> {
    d.eval(x)
}

/// Product of 1D kernels. With `fit_in_ball`, every half-width is rescaled to
/// `H / √n` so the hypercube fits inside `B(0, H)`.
pub fn tensor_product(axes: Vec<(RadialProfile, f64)>, fit_in_ball: bool) -> Result<RegularizedDelta> {
    if axes.is_empty() {
        return Err(Error::Dimension("tensor product needs at least one axis".into()));
    }
    if let Some((p, _)) = axes.iter().find(|(p, _)| p.dim != 1) {
        return Err(Error::Dimension(format!(
            "tensor axis `{}` is {}D; only 1D kernels can be multiplied",
            p.name, p.dim
        )));
    }
    let n = axes.len();
    let scale = if fit_in_ball { (n as f64).sqrt() } else { 1.0 };
    let axes: Vec<(RadialProfile, f64)> = axes.into_iter().map(|(p, h)| (p, h / scale)).collect();
    if n == 1 {
        let (profile, h) = axes.into_iter().next().expect("one axis");
        return RegularizedDelta::radial(profile, h);
    }
    Ok(RegularizedDelta {
        geometry: Geometry::TensorProduct {
            axes,
            ball_moments_guaranteed: fit_in_ball,
        },
        dim: n,
    })
}

/// `∫ δ_H(x) e^{-ikx} dx` for a 1D radial delta, by Gauss panels no wider than
/// one oscillation period (order 20, so ≥ 10 nodes per period).
pub fn fourier_transform_1d(d: &RegularizedDelta, k: f64) -> Result<f64> {
    let (profile, h) = match &d.geometry {
        Geometry::Radial { profile, h } if d.dim == 1 => (profile, *h),
        _ => return Err(Error::Dimension("Fourier transform needs a 1D radial delta".into())),
    };
    let rule = cached_rule(20);
    let w = (k * h).abs();
    let period = if w > 0.0 { 2.0 * std::f64::consts::PI / w } else { f64::INFINITY };
    let edges = panel_edges(0.0, profile.reach, &profile.breakpoints());
    let mut total = 0.0;
    for win in edges.windows(2) {
        let (a, b) = (win[0], win[1]);
        let panels = ((b - a) / period).ceil().max(1.0) as usize;
        let width = (b - a) / panels as f64;
        for i in 0..panels {
            let lo = a + width * i as f64;
            let hi = if i + 1 == panels { b } else { lo + width };
            total += rule.integrate(lo, hi, |z| profile.value(z) * (w * z).cos());
        }
    }
    Ok(2.0 * total)
}
