//! Weak-* error of a regularized delta against `φ(x) = e^{-|x|²}` and
//! convergence-rate fitting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{Geometry, RadialProfile, RegularizedDelta};
use crate::moment::Normalization;
use crate::quadrature::{order_doubling, panel_edges, GaussRule};

/// Gauss orders tried by the doubling check.
pub const START_ORDER: usize = 16;
pub const MAX_ORDER: usize = 256;
/// Relative agreement required between successive orders.
pub const AGREEMENT_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFunction {
    /// `e^{-|x|²}`.
    Gaussian,
    /// `1`; the error is then the mass defect.
    Constant,
}

impl TestFunction {
    /// Value at `|x|² = r2`.
    fn at(self, r2: f64) -> f64 {
        match self {
            TestFunction::Gaussian => (-r2).exp(),
            TestFunction::Constant => 1.0,
        }
    }
}

/// `|∫ δ_H φ − 1|` with the Gaussian test function.
pub fn weak_star_error(d: &RegularizedDelta) -> Result<f64> {
    weak_star_error_with(d, TestFunction::Gaussian)
}

pub fn weak_star_error_with(d: &RegularizedDelta, phi: TestFunction) -> Result<f64> {
    Ok((apply_delta(d, phi)? - 1.0).abs())
}

/// Panel edges of a profile in the rescaled variable: the support and twice the
/// support, with every kernel breakpoint on a panel boundary.
fn scaled_edges(p: &RadialProfile) -> Vec<f64> {
    let mut breaks = p.breakpoints();
    breaks.push(p.reach);
    panel_edges(0.0, 2.0 * p.reach, &breaks)
}

fn half_line(rule: &GaussRule, p: &RadialProfile, weight: impl Fn(f64) -> f64) -> f64 {
    scaled_edges(p)
        .windows(2)
        .map(|w| rule.integrate(w[0], w[1], |z| p.value(z) * weight(z)))
        .sum()
}

/// `∫ δ_H φ`, computed in `z = x / H` where the support is `O(1)`.
pub fn apply_delta(d: &RegularizedDelta, phi: TestFunction) -> Result<f64> {
    match &d.geometry {
        Geometry::Radial { profile, h } => {
            let h = *h;
            match d.dim {
                1 => order_doubling(START_ORDER, MAX_ORDER, AGREEMENT_TOL, |rule| {
                    2.0 * half_line(rule, profile, |z| phi.at(h * h * z * z))
                }),
                2 => {
                    if profile.normalization != Normalization::SurfaceMeasure {
                        return Err(Error::InvalidSpec(format!(
                            "`{}` is not normalized to unit mass; use the surface-measure variant",
                            profile.name
                        )));
                    }
                    order_doubling(START_ORDER, MAX_ORDER, AGREEMENT_TOL, |rule| {
                        2.0 * std::f64::consts::PI * half_line(rule, profile, |z| z * phi.at(h * h * z * z))
                    })
                }
                n => Err(Error::Dimension(format!("radial weak-* error in {n}D"))),
            }
        }
        Geometry::TensorProduct { axes, .. } => {
            if axes.len() != 2 {
                return Err(Error::Dimension(format!("tensor weak-* error in {}D", axes.len())));
            }
            let (px, hx) = (&axes[0].0, axes[0].1);
            let (py, hy) = (&axes[1].0, axes[1].1);
            // full symmetric boxes in each axis, mapped to the rescaled variables
            let ex = mirrored(&scaled_edges(px));
            let ey = mirrored(&scaled_edges(py));
            order_doubling(START_ORDER, MAX_ORDER, AGREEMENT_TOL, |rule| {
                let mut total = 0.0;
                for wx in ex.windows(2) {
                    for (zx, wtx) in rule.mapped(wx[0], wx[1]) {
                        let fx = px.value(zx.abs());
                        if fx == 0.0 {
                            continue;
                        }
                        let x = hx * zx;
                        for wy in ey.windows(2) {
                            for (zy, wty) in rule.mapped(wy[0], wy[1]) {
                                let y = hy * zy;
                                total += wtx * wty * fx * py.value(zy.abs()) * phi.at(x * x + y * y);
                            }
                        }
                    }
                }
                total
            })
        }
    }
}

fn mirrored(half: &[f64]) -> Vec<f64> {
    let mut all: Vec<f64> = half.iter().rev().map(|e| -e).collect();
    all.extend(half.iter().skip(1));
    all
}

/// Least-squares log-log slope plus the successive ratios
/// `log₂(E_i / E_{i+1}) / log₂(H_i / H_{i+1})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    /// `ratios[i]` compares rows `i` and `i+1`; `None` if either was excluded.
    pub ratios: Vec<Option<f64>>,
    /// Indices dropped because their error was not positive.
    pub excluded: Vec<usize>,
    pub warnings: Vec<String>,
}

pub fn convergence_slope(hs: &[f64], es: &[f64]) -> Result<SlopeFit> {
    if hs.len() != es.len() {
        return Err(Error::Convergence(format!("{} H values but {} errors", hs.len(), es.len())));
    }
    if hs.len() < 2 {
        return Err(Error::Convergence("need at least two (H, E) pairs".into()));
    }
    if let Some(h) = hs.iter().find(|h| !(**h > 0.0)) {
        return Err(Error::Convergence(format!("H = {h} is not positive")));
    }
    let usable = |e: f64| e > 0.0 && e.is_finite();
    let mut excluded = Vec::new();
    let mut warnings = Vec::new();
    for (i, (&h, &e)) in hs.iter().zip(es).enumerate() {
        if !usable(e) {
            excluded.push(i);
            warnings.push(format!("E({h}) = {e} is below the quadrature floor; excluded"));
        }
    }
    let pts: Vec<(f64, f64)> = hs
        .iter()
        .zip(es)
        .filter(|(_, e)| usable(**e))
        .map(|(h, e)| (h.ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::Convergence("fewer than two positive errors".into()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Convergence("all H values coincide".into()));
    }
    let ratios = hs
        .windows(2)
        .zip(es.windows(2))
        .map(|(h, e)| {
            (usable(e[0]) && usable(e[1])).then(|| (e[0] / e[1]).log2() / (h[0] / h[1]).log2())
        })
        .collect();
    Ok(SlopeFit {
        slope: sxy / sxx,
        ratios,
        excluded,
        warnings,
    })
}

/// Parses an H schedule: a comma list whose items are numbers, `b^e`, `pi`,
/// `pi/d`, `c*pi`, or a power range `b^e1..b^e2` (unit exponent steps).
pub fn parse_h_schedule(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((lo, hi)) = item.split_once("..") {
            let (b1, e1) = parse_power(lo)?;
            let (b2, e2) = parse_power(hi)?;
            if b1 != b2 {
                return Err(Error::Config(format!("range `{item}` mixes bases")));
            }
            let step = if e2 >= e1 { 1 } else { -1 };
            let mut e = e1;
            loop {
                out.push(b1.powi(e));
                if e == e2 {
                    break;
                }
                e += step;
            }
        } else {
            out.push(parse_scalar(item)?);
        }
    }
    if out.is_empty() {
        return Err(Error::Config(format!("empty H schedule `{text}`")));
    }
    if let Some(h) = out.iter().find(|h| !(**h > 0.0 && h.is_finite())) {
        return Err(Error::Config(format!("H = {h} is not a positive number")));
    }
    Ok(out)
}

fn parse_power(s: &str) -> Result<(f64, i32)> {
    let (b, e) = s
        .trim()
        .split_once('^')
        .ok_or_else(|| Error::Config(format!("`{s}` is not of the form b^e")))?;
    let b: f64 = b.trim().parse().map_err(|_| Error::Config(format!("bad base in `{s}`")))?;
    let e: i32 = e.trim().parse().map_err(|_| Error::Config(format!("bad exponent in `{s}`")))?;
    Ok((b, e))
}

/// A number, `b^e`, `pi`, `pi/d`, or `c*pi`.
pub fn parse_scalar(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::Config(format!("cannot parse `{s}` as a number"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
    if s.contains('^') {
        let (b, e) = parse_power(s)?;
        return Ok(b.powi(e));
    }
    let pi = std::f64::consts::PI;
    if s.eq_ignore_ascii_case("pi") {
        return Ok(pi);
    }
    if let Some(d) = s.strip_prefix("pi/") {
        return Ok(pi / num(d)?);
    }
    if let Some(c) = s.strip_suffix("*pi") {
        return Ok(num(c)? * pi);
    }
    if let Some((n, d)) = s.split_once('/') {
        // `1/(64pi)`-style inputs
        let d = d.trim().trim_start_matches('(').trim_end_matches(')');
        if let Some(dd) = d.strip_suffix("pi") {
            let dd = dd.trim().trim_end_matches('*');
            let dd = if dd.is_empty() { 1.0 } else { num(dd)? };
            return Ok(num(n)? / (dd * pi));
        }
        return Ok(num(n)? / num(d)?);
    }
    num(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog, catalog_lookup};
    use crate::quadrature::gauss_legendre;
    use approx::assert_abs_diff_eq;

    #[test]
    fn box_kernel_matches_direct_oracle() {
        let h = 0.5;
        let d = catalog_lookup("eta_1_0_1d").unwrap().radial(h).unwrap();
        let r64 = gauss_legendre(64).unwrap();
        let oracle = (1.0 - r64.integrate(-h, h, |x| (-x * x).exp()) / (2.0 * h)).abs();
        let got = weak_star_error(&d).unwrap();
        assert_abs_diff_eq!(got, oracle, epsilon = 1e-14);
        // leading Taylor term H²/3
        assert!((got - h * h / 3.0).abs() < h.powi(4) / 5.0);
    }

    #[test]
    fn constant_test_function_gives_mass_defect() {
        for k in catalog().iter().filter(|k| k.entry.normalization == Normalization::SurfaceMeasure) {
            let d = k.radial(0.3).unwrap();
            assert!(weak_star_error_with(&d, TestFunction::Constant).unwrap() < 1e-12, "{}", k.entry.name);
        }
        let hat = catalog_lookup("eta_hat1").unwrap();
        let t = hat.tensor(2, 0.3, false).unwrap();
        assert!(weak_star_error_with(&t, TestFunction::Constant).unwrap() < 1e-12);
    }

    #[test]
    fn table_normalization_rejected_in_2d() {
        let d = catalog_lookup("eta_1_1_2d_table").unwrap().radial(0.25).unwrap();
        assert!(matches!(weak_star_error(&d), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn tensor_reduces_to_product_of_1d() {
        // e^{-x²-y²} separates, so the tensor integral is the square of the 1D one
        let hat = catalog_lookup("eta_2_3_1d").unwrap();
        let h = 0.4;
        let one = apply_delta(&hat.radial(h).unwrap(), TestFunction::Gaussian).unwrap();
        let two = apply_delta(&hat.tensor(2, h, false).unwrap(), TestFunction::Gaussian).unwrap();
        assert_abs_diff_eq!(two, one * one, epsilon = 1e-13);
    }

    #[test]
    fn slope_examples() {
        let hs = [1.0, 0.5, 0.25];
        let sq: Vec<f64> = hs.iter().map(|h| h * h).collect();
        assert_abs_diff_eq!(convergence_slope(&hs, &sq).unwrap().slope, 2.0, epsilon = 1e-12);
        let q: Vec<f64> = hs.iter().map(|h| 3.0 * h.powi(4)).collect();
        let fit = convergence_slope(&hs, &q).unwrap();
        assert_abs_diff_eq!(fit.slope, 4.0, epsilon = 1e-12);
        for r in fit.ratios {
            assert_abs_diff_eq!(r.unwrap(), 4.0, epsilon = 1e-12);
        }
        let fit = convergence_slope(&[1.0, 0.5, 0.25], &[1.0, 0.25, 0.0]).unwrap();
        assert_eq!(fit.excluded, vec![2]);
        assert_eq!(fit.ratios[1], None);
        assert!(convergence_slope(&[1.0], &[1.0]).is_err());
    }

    #[test]
    fn schedules() {
        assert_eq!(parse_h_schedule("2^-2..2^-4").unwrap(), vec![0.25, 0.125, 0.0625]);
        assert_eq!(parse_h_schedule("0.5, 2^-2").unwrap(), vec![0.5, 0.25]);
        let pis = parse_h_schedule("pi,pi/2,pi/4").unwrap();
        assert_abs_diff_eq!(pis[2], std::f64::consts::FRAC_PI_4, epsilon = 1e-15);
        assert_abs_diff_eq!(parse_scalar("1/(64pi)").unwrap(), 1.0 / (64.0 * std::f64::consts::PI), epsilon = 1e-18);
        assert_abs_diff_eq!(parse_scalar("-24/pi").unwrap(), -24.0 / std::f64::consts::PI, epsilon = 1e-15);
        assert_abs_diff_eq!(parse_scalar("1/(64*pi)").unwrap(), 1.0 / (64.0 * std::f64::consts::PI), epsilon = 1e-18);
        assert!(parse_h_schedule("2^-2..3^-4").is_err());
        assert!(parse_h_schedule("-1").is_err());
    }
}
