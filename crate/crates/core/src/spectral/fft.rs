use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Forward/inverse plans for one transform length. Each run owns its plan and
/// scratch buffer.
pub struct SpectralPlan {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

impl SpectralPlan {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let len = forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len());
        Ok(Self {
            n,
            forward,
            inverse,
            scratch: vec![Complex64::default(); len],
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `û_k = Σ_j u_j e^{-2πijk/N}` in place.
    pub fn forward(&mut self, buf: &mut [Complex64]) {
        self.forward.process_with_scratch(buf, &mut self.scratch);
    }

    /// Inverse of [`SpectralPlan::forward`], including the `1/N`.
    pub fn inverse(&mut self, buf: &mut [Complex64]) {
        self.inverse.process_with_scratch(buf, &mut self.scratch);
        let s = 1.0 / self.n as f64;
        for v in buf.iter_mut() {
            *v *= s;
        }
    }

    pub fn forward_real(&mut self, u: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = u.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.forward(&mut buf);
        buf
    }

    pub fn inverse_real(&mut self, coeffs: &[Complex64]) -> Vec<f64> {
        let mut buf = coeffs.to_vec();
        self.inverse(&mut buf);
        buf.into_iter().map(|c| c.re).collect()
    }
}

/// Forward transform of a power-of-two length vector.
pub fn dft(values: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut plan = SpectralPlan::new(values.len())?;
    let mut buf = values.to_vec();
    plan.forward(&mut buf);
    Ok(buf)
}

/// Inverse transform; `idft(dft(v)) = v`.
pub fn idft(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut plan = SpectralPlan::new(coeffs.len())?;
    let mut buf = coeffs.to_vec();
    plan.inverse(&mut buf);
    Ok(buf)
}
