//! Bessel functions `J₀, J₁, Y₀, Y₁` of real positive argument.
//!
//! For `x ≤ 25` the integer-order `J_n` come from Miller's backward recurrence
//! normalized by `J₀ + 2ΣJ_{2k} = 1`, and `Y₀, Y₁` from the Neumann series in
//! `J_{2k}`; all terms are bounded by one, so the absolute error stays near
//! machine precision. Beyond that the Hankel asymptotic expansion is summed to
//! its smallest term (`~e^{-2x}`).

use std::f64::consts::{FRAC_2_PI, PI};

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const ASYMPTOTIC_FROM: f64 = 25.0;
const RESCALE_ABOVE: f64 = 1e250;
// below this the truncated series is exact to rounding and the recurrence would
// overflow between rescalings
const SMALL_ARGUMENT: f64 = 1e-5;
// largest Miller start index below the asymptotic switch, plus two
const MILLER_LEN: usize = 25 + 40 + 30 + 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bessel01 {
    pub j0: f64,
    pub j1: f64,
    pub y0: f64,
    pub y1: f64,
}

/// `J₀, J₁, Y₀, Y₁` at `x > 0`.
pub fn bessel01(x: f64) -> Result<Bessel01> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            value: x,
            domain: "x > 0",
        });
    }
    Ok(if x >= ASYMPTOTIC_FROM {
        hankel(x)
    } else if x < SMALL_ARGUMENT {
        leading_series(x)
    } else {
        miller(x)
    })
}

/// `(J₀(x), Y₀(x))`.
pub fn bessel_j0_y0(x: f64) -> Result<(f64, f64)> {
    let b = bessel01(x)?;
    Ok((b.j0, b.y0))
}

/// `J₀`, defined for all real `x` (even).
pub fn j0(x: f64) -> f64 {
    let x = x.abs();
    if x == 0.0 {
        return 1.0;
    }
    bessel01(x).map_or(f64::NAN, |b| b.j0)
}

/// `J₁`, odd in `x`.
pub fn j1(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let v = bessel01(x.abs()).map_or(f64::NAN, |b| b.j1);
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// `(J₀(x), Y₀(x))` from the ascending power series truncated after `terms`
/// terms. Independent of [`bessel01`]; accurate to ~1e−9 for `x ≤ 20`.
pub fn bessel_series_j0_y0(x: f64, terms: usize) -> (f64, f64) {
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let (mut j0, mut tail) = (1.0, 0.0);
    for k in 1..terms {
        let kf = k as f64;
        term *= -q / (kf * kf);
        harmonic += 1.0 / kf;
        j0 += term;
        tail -= harmonic * term;
    }
    let y0 = FRAC_2_PI * (((x / 2.0).ln() + EULER_GAMMA) * j0 + tail);
    (j0, y0)
}

fn miller(x: f64) -> Bessel01 {
    // start well above x so the dominant backward solution has taken over
    let start = 2 * ((x as usize + 40 + (10.0 * x.cbrt()) as usize) / 2);
    let mut j = [0.0; MILLER_LEN];
    j[start] = 1e-300;
    for n in (1..=start).rev() {
        j[n - 1] = 2.0 * n as f64 / x * j[n] - j[n + 1];
        if j[n - 1].abs() > RESCALE_ABOVE {
            for v in j[n - 1..=start].iter_mut() {
                *v /= RESCALE_ABOVE;
            }
        }
    }
    let norm = j[0] + 2.0 * j[..=start].iter().step_by(2).skip(1).sum::<f64>();
    for v in j.iter_mut() {
        *v /= norm;
    }
    let log_term = (x / 2.0).ln() + EULER_GAMMA;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    for k in 1..=start / 2 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let kf = k as f64;
        s0 += sign * j[2 * k] / kf;
        s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / kf;
    }
    let y0 = FRAC_2_PI * (log_term * j[0] - 2.0 * s0);
    // Y₁ = −Y₀′, differentiating the Neumann series term by term
    let y1 = FRAC_2_PI * (log_term * j[1] - j[0] / x + s1);
    Bessel01 { j0: j[0], j1: j[1], y0, y1 }
}

fn leading_series(x: f64) -> Bessel01 {
    let log_term = (x / 2.0).ln() + EULER_GAMMA;
    let j0 = 1.0 - x * x / 4.0;
    let j1 = x / 2.0 - x * x * x / 16.0;
    Bessel01 {
        j0,
        j1,
        y0: FRAC_2_PI * (log_term * j0 + x * x / 4.0),
        y1: -FRAC_2_PI / x + x / PI * (log_term - 0.5),
    }
}

/// Hankel asymptotic `P_ν, Q_ν` for ν ∈ {0, 1}.
fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let (mut p, mut q) = (1.0_f64, 0.0_f64);
    let mut term = 1.0_f64;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        if term.abs() >= last || term.abs() < 1e-17 * p.abs().max(1.0) {
            break;
        }
        last = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
    }
    (p, q)
}

fn hankel(x: f64) -> Bessel01 {
    let amp = (FRAC_2_PI / x).sqrt();
    let (p0, q0) = hankel_pq(0.0, x);
    let (p1, q1) = hankel_pq(1.0, x);
    let c0 = x - PI / 4.0;
    let c1 = x - 3.0 * PI / 4.0;
    Bessel01 {
        j0: amp * (p0 * c0.cos() - q0 * c0.sin()),
        y0: amp * (p0 * c0.sin() + q0 * c0.cos()),
        j1: amp * (p1 * c1.cos() - q1 * c1.sin()),
        y1: amp * (p1 * c1.sin() + q1 * c1.cos()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn reference_values() {
        let b = bessel01(1.0).unwrap();
        assert_abs_diff_eq!(b.j0, 0.765_197_686_557_966_6, epsilon = 1e-15);
        assert_abs_diff_eq!(b.j1, 0.440_050_585_744_933_5, epsilon = 1e-15);
        assert_abs_diff_eq!(b.y0, 0.088_256_964_215_676_96, epsilon = 1e-15);
        assert_abs_diff_eq!(b.y1, -0.781_212_821_300_288_7, epsilon = 1e-15);
        let b = bessel01(10.0).unwrap();
        assert_abs_diff_eq!(b.j0, -0.245_935_764_451_348_3, epsilon = 1e-14);
        assert_abs_diff_eq!(b.y0, 0.055_671_167_283_599_4, epsilon = 1e-14);
        assert_abs_diff_eq!(b.y1, 0.249_015_424_206_953_9, epsilon = 1e-14);
    }

    #[test]
    fn continuous_across_the_switch() {
        let lo = miller(ASYMPTOTIC_FROM);
        let hi = hankel(ASYMPTOTIC_FROM);
        for (a, b) in [(lo.j0, hi.j0), (lo.j1, hi.j1), (lo.y0, hi.y0), (lo.y1, hi.y1)] {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn small_argument_branch_matches_recurrence() {
        let a = leading_series(SMALL_ARGUMENT);
        let b = miller(SMALL_ARGUMENT);
        assert_abs_diff_eq!(a.j0, b.j0, epsilon = 1e-15);
        assert_abs_diff_eq!(a.j1, b.j1, epsilon = 1e-15);
        assert_abs_diff_eq!(a.y0, b.y0, epsilon = 1e-14);
        assert!((a.y1 - b.y1).abs() <= 1e-14 * b.y1.abs());
        assert!(bessel01(1e-30).unwrap().y0.is_finite());
    }

    #[test]
    fn wronskian() {
        for i in 1..400 {
            let x = 0.05 * i as f64 + 0.003;
            let b = bessel01(x).unwrap();
            let w = b.j1 * b.y0 - b.j0 * b.y1;
            assert!((w - 2.0 / (PI * x)).abs() < 1e-13 * (1.0 + 1.0 / x), "x={x}");
        }
    }

    #[test]
    fn power_series_agrees() {
        for x in [0.1, 1.0, 7.3, 19.9] {
            let (j, y) = bessel_series_j0_y0(x, 40);
            let b = bessel01(x).unwrap();
            assert_abs_diff_eq!(j, b.j0, epsilon = 1e-8);
            assert_abs_diff_eq!(y, b.y0, epsilon = 1e-8);
        }
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(bessel_j0_y0(0.0).is_err());
        assert!(bessel_j0_y0(-1.0).is_err());
        assert_eq!(j0(0.0), 1.0);
        assert_abs_diff_eq!(j1(-1.0), -0.440_050_585_744_933_5, epsilon = 1e-15);
    }
}
