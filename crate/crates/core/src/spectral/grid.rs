use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `N` equispaced nodes `x_j = −L/2 + jL/N` on a period of length `L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicGrid1D {
    pub n: usize,
    pub length: f64,
}

impl PeriodicGrid1D {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::Domain { value: length, domain: "L > 0" });
        }
        Ok(Self { n, length })
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| -self.length / 2.0 + j as f64 * self.dx()).collect()
    }

    /// Integer mode number of FFT slot `j`: `0..=N/2`, then `−N/2+1..−1`.
    pub fn mode(&self, j: usize) -> i64 {
        if j <= self.n / 2 {
            j as i64
        } else {
            j as i64 - self.n as i64
        }
    }

    /// Angular wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let base = 2.0 * std::f64::consts::PI / self.length;
        (0..self.n).map(|j| base * self.mode(j) as f64).collect()
    }

    /// Wavenumbers for odd derivatives: the unpaired Nyquist mode is zeroed.
    pub fn derivative_wavenumbers(&self) -> Vec<f64> {
        let mut k = self.wavenumbers();
        if self.n > 1 {
            k[self.n / 2] = 0.0;
        }
        k
    }

    pub fn k_max(&self) -> f64 {
        std::f64::consts::PI * self.n as f64 / self.length
    }

    /// Whether a kernel of half-width `support` fits strictly inside one period.
    pub fn fits(&self, support: f64) -> bool {
        support < self.length / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout() {
        let g = PeriodicGrid1D::new(8, 2.0 * std::f64::consts::PI).unwrap();
        let x = g.nodes();
        assert_eq!(x.len(), 8);
        assert!((x[0] + std::f64::consts::PI).abs() < 1e-15);
        let modes: Vec<i64> = (0..8).map(|j| g.mode(j)).collect();
        assert_eq!(modes, vec![0, 1, 2, 3, 4, -3, -2, -1]);
        assert_eq!(g.derivative_wavenumbers()[4], 0.0);
        assert!(PeriodicGrid1D::new(1000, 1.0).is_err());
    }
}
