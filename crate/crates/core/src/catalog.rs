//! Named kernels: the moment-problem family and the literature kernels.
//!
//! Moment-problem entries are produced by solving their moment system when the
//! catalog is first touched, not stored as literals.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::basis::BasisKind;
use crate::error::{Error, Result};
use crate::kernel::{tensor_product, Piece, ProfileShape, RadialProfile, RegularizedDelta};
use crate::moment::{radial_moments, solve_moment_problem, symmetric_residuals, MomentProblemSpec, Normalization};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelSource {
    Table1,
    CosineFamily,
    HatLiterature,
    CosLiterature,
    CubicLiterature,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub dim: usize,
    pub moments: usize,
    pub smoothness: String,
    pub closed_form: String,
    pub source: KernelSource,
    pub normalization: Normalization,
    /// Support half-width in units of `H` (2 for the `[-2H, 2H]` kernels).
    pub half_width_factor: f64,
    pub signed: bool,
}

impl CatalogEntry {
    /// Convergence order implied by the moment count for an even kernel: the
    /// next odd moment vanishes by symmetry, so `m` moments give `m + 1` rounded
    /// up to even.
    pub fn expected_rate(&self) -> f64 {
        (self.moments + 1 + (self.moments + 1) % 2) as f64
    }
}

/// A catalog entry together with its profile; builds deltas for any `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelBuilder {
    pub entry: CatalogEntry,
    pub profile: RadialProfile,
}

impl KernelBuilder {
    pub fn radial(&self, h: f64) -> Result<RegularizedDelta> {
        RegularizedDelta::radial(self.profile.clone(), h)
    }

    /// `dim`-fold tensor product of a 1D entry.
    pub fn tensor(&self, dim: usize, h: f64, fit_in_ball: bool) -> Result<RegularizedDelta> {
        tensor_product(vec![(self.profile.clone(), h); dim], fit_in_ball)
    }

    /// Moment residuals of the profile under its declared normalization, with the
    /// symmetric convention (odd orders vanish identically).
    pub fn moment_residuals(&self, upto: usize) -> Vec<f64> {
        let p = &self.profile;
        let nu = p.normalization.radial_factor(p.dim);
        symmetric_residuals(radial_moments(|z| p.value(z), p.reach, &p.breakpoints(), p.dim, nu, upto))
    }
}

struct MomentDef {
    name: &'static str,
    dim: usize,
    m: usize,
    p: usize,
    s: usize,
    origin: usize,
    basis: BasisKind,
    normalization: Normalization,
    declared: usize,
}

const fn leg(name: &'static str, dim: usize, m: usize, p: usize, s: usize, origin: usize, normalization: Normalization) -> MomentDef {
    // a mass-only profile also has a vanishing first moment by symmetry
    let declared = if m == 0 { 1 } else { m };
    MomentDef { name, dim, m, p, s, origin, basis: BasisKind::ShiftedLegendre, normalization, declared }
}

const fn cos(name: &'static str, dim: usize, m: usize, p: usize, normalization: Normalization, declared: usize) -> MomentDef {
    MomentDef { name, dim, m, p, s: 1, origin: 0, basis: BasisKind::Cosine, normalization, declared }
}

use Normalization::{SurfaceMeasure as SM, UnitBallArea as UB};

const MOMENT_DEFS: &[MomentDef] = &[
    leg("eta_0_1_1d", 1, 0, 1, 1, 0, SM),
    leg("eta_1_0_1d", 1, 1, 0, 0, 0, SM),
    leg("eta_1_1_1d", 1, 1, 1, 1, 0, SM),
    leg("eta_1_2_1d", 1, 1, 2, 1, 0, SM),
    leg("eta_2_2_1d", 1, 2, 2, 0, 0, SM),
    leg("eta_2_3_1d", 1, 2, 3, 1, 0, SM),
    leg("eta_2_5_1d", 1, 2, 5, 2, 2, SM),
    leg("eta_0_1_2d", 2, 0, 1, 1, 0, SM),
    leg("eta_1_1_2d", 2, 1, 1, 0, 0, SM),
    leg("eta_1_2_2d", 2, 1, 2, 1, 0, SM),
    leg("eta_2_2_2d", 2, 2, 2, 0, 0, SM),
    leg("eta_2_3_2d", 2, 2, 3, 1, 0, SM),
    leg("eta_2_5_2d", 2, 2, 5, 2, 2, SM),
    leg("eta_1_1_2d_table", 2, 1, 1, 0, 0, UB),
    leg("eta_1_2_2d_table", 2, 1, 2, 1, 0, UB),
    leg("eta_2_2_2d_table", 2, 2, 2, 0, 0, UB),
    leg("eta_2_3_2d_table", 2, 2, 3, 1, 0, UB),
    leg("eta_2_5_2d_table", 2, 2, 5, 2, 2, UB),
    // the single mass row also kills the first moment by symmetry
    cos("eta_cos_0_1d", 1, 0, 1, SM, 1),
    cos("eta_cos_2_1d", 1, 2, 3, SM, 2),
    cos("eta_cos_0_2d", 2, 0, 1, SM, 1),
    cos("eta_cos_2_2d", 2, 2, 3, SM, 2),
    cos("eta_cos_0_2d_table", 2, 0, 1, UB, 1),
    cos("eta_cos_2_2d_table", 2, 2, 3, UB, 2),
];

fn smoothness_label(boundary: usize) -> String {
    match boundary {
        0 => "discontinuous".to_string(),
        s => format!("C{}", s - 1),
    }
}

fn fmt_coeff(c: f64) -> String {
    format!("{:.12}", c).trim_end_matches('0').trim_end_matches('.').to_string()
}

fn describe_poly(coeffs: &[f64], var: &str) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.abs() > 1e-13)
        .map(|(j, c)| match j {
            0 => fmt_coeff(*c),
            1 => format!("{}*{var}", fmt_coeff(*c)),
            _ => format!("{}*{var}^{j}", fmt_coeff(*c)),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn describe_cosine(coeffs: &[f64], arg: &str) -> String {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| match k {
            0 => fmt_coeff(*c),
            1 => format!("{}*cos({arg})", fmt_coeff(*c)),
            _ => format!("{}*cos({k}{arg})", fmt_coeff(*c)),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn build_moment(def: &MomentDef) -> KernelBuilder {
    let mut spec = match def.basis {
        BasisKind::ShiftedLegendre => MomentProblemSpec::legendre(def.dim, def.m, def.p),
        BasisKind::Cosine => MomentProblemSpec::cosine(def.dim, def.m, def.p),
    };
    spec = spec
        .with_boundary_smoothness(def.s)
        .with_origin_smoothness(def.origin)
        .with_normalization(def.normalization);
    let kernel = solve_moment_problem(&spec)
        .unwrap_or_else(|e| panic!("catalog kernel {} does not solve: {e}", def.name))
        .with_name(def.name);
    let closed_form = match &kernel.monomial {
        Some(mono) => describe_poly(mono, "r"),
        None => describe_cosine(&kernel.coeffs, "πr"),
    };
    let profile = RadialProfile::from_moment(kernel, def.declared);
    let source = match def.basis {
        BasisKind::ShiftedLegendre => KernelSource::Table1,
        BasisKind::Cosine => KernelSource::CosineFamily,
    };
    finish(profile, def.s, closed_form, source)
}

fn finish(profile: RadialProfile, boundary: usize, closed_form: String, source: KernelSource) -> KernelBuilder {
    let entry = CatalogEntry {
        name: profile.name.clone(),
        dim: profile.dim,
        moments: profile.moments,
        smoothness: smoothness_label(boundary),
        closed_form,
        source,
        normalization: profile.normalization,
        half_width_factor: profile.reach,
        signed: profile.is_signed(),
    };
    KernelBuilder { entry, profile }
}

fn piecewise(name: &str, moments: usize, pieces: Vec<Piece>) -> RadialProfile {
    let reach = pieces.last().map_or(1.0, |p| p.upto);
    RadialProfile {
        name: name.into(),
        dim: 1,
        moments,
        normalization: Normalization::SurfaceMeasure,
        reach,
        shape: ProfileShape::Piecewise { pieces },
    }
}

fn literature() -> Vec<KernelBuilder> {
    let hat1 = piecewise("eta_hat1", 1, vec![Piece { upto: 1.0, monomial: vec![1.0, -1.0] }]);
    let hat2 = piecewise("eta_hat2", 1, vec![Piece { upto: 2.0, monomial: vec![0.5, -0.25] }]);
    // mass 1 and vanishing second moment, so three compact conditions hold
    let cubic = piecewise(
        "eta_cubic",
        3,
        vec![
            Piece { upto: 1.0, monomial: vec![1.0, -0.5, -1.0, 0.5] },
            Piece { upto: 2.0, monomial: vec![1.0, -11.0 / 6.0, 1.0, -1.0 / 6.0] },
        ],
    );
    let cosine = RadialProfile {
        name: "eta_cos".into(),
        dim: 1,
        moments: 1,
        normalization: Normalization::SurfaceMeasure,
        reach: 2.0,
        shape: ProfileShape::Cosine { coeffs: vec![0.25, 0.25] },
    };
    vec![
        finish(hat1, 1, "1 - |z|".into(), KernelSource::HatLiterature),
        finish(hat2, 1, "(2 - |z|)/4".into(), KernelSource::HatLiterature),
        finish(cosine, 1, "(1 + cos(π|z|/2))/4".into(), KernelSource::CosLiterature),
        finish(
            cubic,
            1,
            "1 - |z|/2 - |z|^2 + |z|^3/2 (|z| ≤ 1); 1 - 11|z|/6 + |z|^2 - |z|^3/6 (1 < |z| ≤ 2)".into(),
            KernelSource::CubicLiterature,
        ),
    ]
}

/// Every catalog kernel, in a fixed order.
pub fn catalog() -> &'static [KernelBuilder] {
    static CATALOG: OnceLock<Vec<KernelBuilder>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let mut all: Vec<KernelBuilder> = MOMENT_DEFS.iter().map(build_moment).collect();
        all.extend(literature());
        all
    })
}

pub fn catalog_names() -> Vec<&'static str> {
    catalog().iter().map(|k| k.entry.name.as_str()).collect()
}

pub fn catalog_lookup(name: &str) -> Result<&'static KernelBuilder> {
    catalog()
        .iter()
        .find(|k| k.entry.name == name)
        .ok_or_else(|| Error::UnknownKernel {
            name: name.to_string(),
            available: catalog_names().join(", "),
        })
}

/// JSON array of all catalog entries.
pub fn catalog_json() -> String {
    let entries: Vec<&CatalogEntry> = catalog().iter().map(|k| &k.entry).collect();
    serde_json::to_string_pretty(&entries).expect("catalog serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn residuals_vanish_for_every_entry() {
        for k in catalog() {
            let res = k.moment_residuals(k.entry.moments);
            for (theta, r) in res.iter().enumerate() {
                assert!(r.abs() <= 1e-10, "{} order {theta}: {r:e}", k.entry.name);
            }
        }
    }

    #[test]
    fn cubic_pieces_meet() {
        let k = catalog_lookup("eta_cubic").unwrap();
        let ProfileShape::Piecewise { pieces } = &k.profile.shape else { unreachable!() };
        let left = crate::basis::poly_eval(&pieces[0].monomial, 1.0);
        let right = crate::basis::poly_eval(&pieces[1].monomial, 1.0);
        assert_abs_diff_eq!(left, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(right, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(k.profile.value(1.0), 0.0, epsilon = 1e-15);
        assert!(k.entry.signed);
    }

    #[test]
    fn literature_spot_values() {
        assert_abs_diff_eq!(catalog_lookup("eta_hat2").unwrap().profile.value(0.0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(catalog_lookup("eta_cos").unwrap().profile.value(0.0), 0.5, epsilon = 1e-15);
        assert_eq!(catalog_lookup("eta_hat2").unwrap().entry.half_width_factor, 2.0);
        let k = catalog_lookup("eta_2_5_1d").unwrap();
        let crate::kernel::ProfileShape::Moment(eta) = &k.profile.shape else { unreachable!() };
        assert_abs_diff_eq!(eta.value(1.0), 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(eta.derivative(1, 1.0), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn unknown_name_lists_catalog() {
        match catalog_lookup("eta_9_9") {
            Err(Error::UnknownKernel { available, .. }) => assert!(available.contains("eta_cubic")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn json_dump_parses() {
        let v: serde_json::Value = serde_json::from_str(&catalog_json()).unwrap();
        assert_eq!(v.as_array().unwrap().len(), catalog().len());
    }
}
