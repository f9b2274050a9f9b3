//! Orthogonal bases on the scaled radial interval `[0, 1]`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    /// L²-orthonormal shifted Legendre polynomials on `[0, 1]`.
    ShiftedLegendre,
    /// `cos(k π r)`, `k = 0, 1, ...`.
    Cosine,
}

/// A basis family truncated at `max_index` (inclusive).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisFamily {
    pub kind: BasisKind,
    pub max_index: usize,
}

impl BasisFamily {
    pub fn new(kind: BasisKind, max_index: usize) -> Self {
        Self { kind, max_index }
    }

    pub fn len(&self) -> usize {
        self.max_index + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Value of the `k`-th member at `r`; no domain check.
    pub fn value(&self, k: usize, r: f64) -> f64 {
        match self.kind {
            BasisKind::ShiftedLegendre => legendre_unchecked(k, r),
            BasisKind::Cosine => cosine_derivative(k, 0, r),
        }
    }

    /// `order`-th derivative of the `k`-th member at `r`.
    pub fn derivative(&self, k: usize, order: usize, r: f64) -> f64 {
        match self.kind {
            BasisKind::ShiftedLegendre => {
                poly_derivative(&shifted_legendre_monomial(k), order, r)
            }
            BasisKind::Cosine => cosine_derivative(k, order, r),
        }
    }
}

fn legendre_unchecked(k: usize, r: f64) -> f64 {
    let x = 2.0 * r - 1.0;
    let (mut prev, mut cur) = (1.0, x);
    if k == 0 {
        return 1.0;
    }
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0) * x * cur - jf * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    (2.0 * k as f64 + 1.0).sqrt() * cur
}

/// Orthonormal shifted Legendre polynomial `P_k(r)` on `[0, 1]`, evaluated by the
/// three-term recurrence in `x = 2r - 1`.
pub fn shifted_legendre_eval(k: usize, r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain {
            value: r,
            domain: "[0, 1]",
        });
    }
    Ok(legendre_unchecked(k, r))
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Monomial coefficients (ascending powers of `r`) of `P_k`, from the alternating
/// binomial sum.
pub fn shifted_legendre_monomial(k: usize) -> Vec<f64> {
    let norm = (2.0 * k as f64 + 1.0).sqrt();
    (0..=k)
        .map(|j| {
            let sign = if (k + j) % 2 == 0 { 1.0 } else { -1.0 };
            sign * norm * binomial(k, j) * binomial(k + j, j).round()
        })
        .collect()
}

/// Horner evaluation of `Σ c_j r^j`.
pub fn poly_eval(coeffs: &[f64], r: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c)
}

/// `order`-th derivative of `Σ c_j r^j`.
pub fn poly_derivative(coeffs: &[f64], order: usize, r: f64) -> f64 {
    if order >= coeffs.len() {
        return 0.0;
    }
    let derived: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .skip(order)
        .map(|(j, c)| c * falling_factorial(j, order))
        .collect();
    poly_eval(&derived, r)
}

fn falling_factorial(j: usize, order: usize) -> f64 {
    (0..order).fold(1.0, |acc, i| acc * (j - i) as f64)
}

/// `d^order/dr^order cos(k π r)`.
pub fn cosine_derivative(k: usize, order: usize, r: f64) -> f64 {
    let w = k as f64 * PI;
    if k == 0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    // cos(w r + order π/2), reduced by quarter turns
    let base = match order % 4 {
        0 => (w * r).cos(),
        1 => -(w * r).sin(),
        2 => -(w * r).cos(),
        _ => (w * r).sin(),
    };
    w.powi(order as i32) * base
}
