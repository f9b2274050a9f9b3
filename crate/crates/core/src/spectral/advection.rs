//! `u_t + u_x = 0` by Fourier collocation in space and leapfrog in time.
//!
//! The spectral derivative is diagonal in Fourier space, so the scheme is
//! stepped mode by mode: `û^{n+1} = û^{n−1} − 2 i k dt û^n`. Its physical mode
//! rotates by `e^{−iω dt}` per step with `sin(ω dt) = k dt`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fft::SpectralPlan;
use super::grid::PeriodicGrid1D;
use crate::error::{Error, Result};
use crate::kernel::RegularizedDelta;

/// How the second time level is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Startup {
    /// `û¹ = e^{−iω dt} û⁰` with the discrete frequency: only the physical
    /// leapfrog mode is excited, so every modal amplitude is exactly conserved.
    DiscreteMode,
    /// `û¹ = e^{−ik dt} û⁰` (exact translation); excites the parasitic mode at
    /// relative size `O((k dt)³)`.
    ExactTranslation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdvectionRun {
    pub grid: PeriodicGrid1D,
    pub kernel: RegularizedDelta,
    pub dt: f64,
    pub t_final: f64,
    pub startup: Startup,
}

impl AdvectionRun {
    /// Defaults: `dt = Δx/8`, `T = 36π`, discrete-mode start-up.
    pub fn new(grid: PeriodicGrid1D, kernel: RegularizedDelta) -> Self {
        Self {
            dt: grid.dx() / 8.0,
            t_final: 36.0 * std::f64::consts::PI,
            startup: Startup::DiscreteMode,
            grid,
            kernel,
        }
    }

    /// Number of steps and the (possibly slightly shortened) step landing on `T`.
    pub fn steps(&self) -> (usize, f64) {
        let n = (self.t_final / self.dt).ceil().max(1.0) as usize;
        // prefer the nominal dt when T is (to rounding) an integer multiple of it
        let nominal = (self.t_final / self.dt).round();
        if (nominal * self.dt - self.t_final).abs() <= 1e-9 * self.t_final {
            (nominal as usize, self.dt)
        } else {
            (n, self.t_final / n as f64)
        }
    }

    pub fn initial_data(&self) -> Result<Vec<f64>> {
        if self.kernel.dim != 1 {
            return Err(Error::Dimension("advection needs a 1D delta".into()));
        }
        let support = self.kernel.support_radius();
        if !self.grid.fits(support) {
            return Err(Error::Support { support, domain: self.grid.length / 2.0 });
        }
        self.grid.nodes().iter().map(|&x| self.kernel.eval(&[x])).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdvectionResult {
    pub nodes: Vec<f64>,
    pub initial: Vec<f64>,
    pub final_state: Vec<f64>,
    /// `|û_k|` in FFT order at `t = 0` and `t = T`.
    pub initial_spectrum: Vec<f64>,
    pub final_spectrum: Vec<f64>,
    pub steps: usize,
    pub dt: f64,
    pub t_final: f64,
    /// Largest phase deviation (radians) of any significant mode from
    /// `e^{−iω T}` with the leapfrog frequency `ω`.
    pub phase_mismatch: f64,
}

/// Leapfrog frequency `ω` with `sin(ω dt) = k dt`.
pub fn leapfrog_frequency(k: f64, dt: f64) -> f64 {
    (k * dt).asin() / dt
}

fn check_cfl(grid: &PeriodicGrid1D, dt: f64) -> Result<()> {
    let c = grid.k_max() * dt;
    if c >= 1.0 {
        return Err(Error::Cfl(c));
    }
    Ok(())
}

/// Advances the Fourier coefficients `u0_hat` by `steps` leapfrog steps.
pub(crate) fn leapfrog_modes(grid: &PeriodicGrid1D, u0_hat: &[Complex64], dt: f64, steps: usize, startup: Startup) -> Vec<Complex64> {
    let k = grid.derivative_wavenumbers();
    let mut out = Vec::with_capacity(u0_hat.len());
    for (j, &c0) in u0_hat.iter().enumerate() {
        let kj = k[j];
        let first = match startup {
            Startup::DiscreteMode => Complex64::from_polar(1.0, -(kj * dt).asin()) * c0,
            Startup::ExactTranslation => Complex64::from_polar(1.0, -kj * dt) * c0,
        };
        if steps == 0 {
            out.push(c0);
            continue;
        }
        let step = Complex64::new(0.0, -2.0 * kj * dt);
        let (mut prev, mut cur) = (c0, first);
        for _ in 1..steps {
            let next = prev + step * cur;
            prev = cur;
            cur = next;
        }
        out.push(cur);
    }
    out
}

pub fn advect_leapfrog(run: &AdvectionRun) -> Result<AdvectionResult> {
    let (steps, dt) = run.steps();
    check_cfl(&run.grid, dt)?;
    let initial = run.initial_data()?;
    let mut plan = SpectralPlan::new(run.grid.n)?;
    let u0_hat = plan.forward_real(&initial);
    let u_hat = leapfrog_modes(&run.grid, &u0_hat, dt, steps, run.startup);
    let t = dt * steps as f64;
    let floor = 1e-12 * u0_hat.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let phase_mismatch = run
        .grid
        .derivative_wavenumbers()
        .iter()
        .zip(u0_hat.iter().zip(&u_hat))
        .filter(|(_, (c0, _))| c0.norm() > floor)
        .map(|(&k, (c0, c))| {
            let predicted = c0 * Complex64::from_polar(1.0, -leapfrog_frequency(k, dt) * t);
            (c / predicted).arg().abs()
        })
        .fold(0.0, f64::max);
    Ok(AdvectionResult {
        phase_mismatch,
        nodes: run.grid.nodes(),
        final_state: plan.inverse_real(&u_hat),
        initial_spectrum: u0_hat.iter().map(|c| c.norm()).collect(),
        final_spectrum: u_hat.iter().map(|c| c.norm()).collect(),
        initial,
        steps,
        dt,
        t_final: run.t_final,
    })
}

/// Exact-in-time spectral solution: every mode multiplied by `e^{−ikT}`.
pub fn advect_exact(run: &AdvectionRun) -> Result<AdvectionResult> {
    let initial = run.initial_data()?;
    let mut plan = SpectralPlan::new(run.grid.n)?;
    let u0_hat = plan.forward_real(&initial);
    let k = run.grid.derivative_wavenumbers();
    let u_hat: Vec<Complex64> = u0_hat
        .iter()
        .zip(&k)
        .map(|(c, kj)| c * Complex64::from_polar(1.0, -kj * run.t_final))
        .collect();
    Ok(AdvectionResult {
        phase_mismatch: 0.0,
        nodes: run.grid.nodes(),
        final_state: plan.inverse_real(&u_hat),
        initial_spectrum: u0_hat.iter().map(|c| c.norm()).collect(),
        final_spectrum: u_hat.iter().map(|c| c.norm()).collect(),
        initial,
        steps: 0,
        dt: run.t_final,
        t_final: run.t_final,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorProfile {
    pub nodes: Vec<f64>,
    /// `|u(x, 0) − u(x, T)|`.
    pub error: Vec<f64>,
    /// Ends of the initial support interval.
    pub support: (f64, f64),
    pub max_error: f64,
}

fn error_profile(run: &AdvectionRun, result: &AdvectionResult) -> ErrorProfile {
    let error: Vec<f64> = result
        .initial
        .iter()
        .zip(&result.final_state)
        .map(|(a, b)| (a - b).abs())
        .collect();
    let s = run.kernel.support_radius();
    ErrorProfile {
        nodes: result.nodes.clone(),
        max_error: error.iter().cloned().fold(0.0, f64::max),
        error,
        support: (-s, s),
    }
}

/// Runs the leapfrog scheme to `T` (an integer number of periods) and returns
/// `E(x) = |u(x, 0) − u(x, T)|`.
pub fn pointwise_error_after_periods(run: &AdvectionRun) -> Result<ErrorProfile> {
    let periods = run.t_final / run.grid.length;
    if (periods - periods.round()).abs() > 1e-9 * periods.max(1.0) || periods.round() < 1.0 {
        return Err(Error::Period { t: run.t_final, period: run.grid.length });
    }
    let result = advect_leapfrog(run)?;
    Ok(error_profile(run, &result))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog_lookup;
    use std::f64::consts::PI;

    fn grid() -> PeriodicGrid1D {
        PeriodicGrid1D::new(64, 2.0 * PI).unwrap()
    }

    #[test]
    fn single_mode_phase_follows_dispersion_relation() {
        let g = grid();
        let dt = g.dx() / 8.0;
        let steps = 5000;
        for m in [1usize, 5, 17, 31] {
            let mut c = vec![Complex64::default(); g.n];
            c[m] = Complex64::new(1.0, 0.0);
            let out = leapfrog_modes(&g, &c, dt, steps, Startup::DiscreteMode);
            let k = g.wavenumbers()[m];
            let want = Complex64::from_polar(1.0, -leapfrog_frequency(k, dt) * dt * steps as f64);
            assert!((out[m] - want).norm() < 1e-10, "mode {m}");
            assert!((out[m].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_translation_startup_excites_parasitic_mode() {
        let g = grid();
        let dt = g.dx() / 8.0;
        let mut c = vec![Complex64::default(); g.n];
        c[31] = Complex64::new(1.0, 0.0);
        let amps: Vec<f64> = (1..40)
            .map(|n| leapfrog_modes(&g, &c, dt, n, Startup::ExactTranslation)[31].norm())
            .collect();
        let spread = amps.iter().cloned().fold(0.0, f64::max) - amps.iter().cloned().fold(2.0, f64::min);
        assert!(spread > 1e-4);
    }

    #[test]
    fn zero_data_and_exact_integration() {
        let g = grid();
        let zero = leapfrog_modes(&g, &vec![Complex64::default(); g.n], g.dx() / 8.0, 100, Startup::DiscreteMode);
        assert!(zero.iter().all(|c| c.norm() == 0.0));

        let d = catalog_lookup("eta_2_3_1d").unwrap().radial(0.5).unwrap();
        let mut run = AdvectionRun::new(g, d);
        run.t_final = 2.0 * PI;
        let exact = advect_exact(&run).unwrap();
        let err = exact.initial.iter().zip(&exact.final_state).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn guards() {
        let g = grid();
        let d = catalog_lookup("eta_1_1_1d").unwrap().radial(0.5).unwrap();
        let mut run = AdvectionRun::new(g, d.clone());
        run.t_final = 3.0;
        assert!(matches!(pointwise_error_after_periods(&run), Err(Error::Period { .. })));
        run.t_final = 2.0 * PI;
        run.dt = g.dx();
        assert!(matches!(advect_leapfrog(&run), Err(Error::Cfl(_))));
        let wide = catalog_lookup("eta_1_1_1d").unwrap().radial(4.0).unwrap();
        assert!(matches!(AdvectionRun::new(g, wide).initial_data(), Err(Error::Support { .. })));
    }

    #[test]
    fn one_period_error_within_dispersion_bound() {
        let g = PeriodicGrid1D::new(128, 2.0 * PI).unwrap();
        let d = catalog_lookup("eta_2_5_1d").unwrap().radial(1.5).unwrap();
        let mut run = AdvectionRun::new(g, d);
        run.t_final = 2.0 * PI;
        let e = pointwise_error_after_periods(&run).unwrap();
        let r = advect_leapfrog(&run).unwrap();
        // |u(T) − u(0)| ≤ N⁻¹ Σ |û_k| |e^{−iωT} − e^{−ikT}|
        let (_, dt) = run.steps();
        let bound: f64 = g
            .derivative_wavenumbers()
            .iter()
            .zip(&r.initial_spectrum)
            .map(|(&k, a)| a * 2.0 * ((leapfrog_frequency(k, dt) - k) * run.t_final / 2.0).sin().abs())
            .sum::<f64>()
            / g.n as f64;
        assert!(e.max_error <= bound + 1e-12, "{} > {bound}", e.max_error);
        for (a, b) in r.initial_spectrum.iter().zip(&r.final_spectrum) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}
