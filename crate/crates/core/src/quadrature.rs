//! Gauss–Legendre rules and composite integration helpers.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const NEWTON_MAX_ITER: usize = 100;

/// Nodes and weights of an `order`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub order: usize,
}

/// Legendre polynomial `P_n(x)` and its derivative by the three-term recurrence.
pub(crate) fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p_prev, mut p) = (1.0, x);
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = next;
    }
    let nf = n as f64;
    let dp = if (1.0 - x * x).abs() < f64::EPSILON {
        // endpoint limit P_n'(±1) = (±1)^{n+1} n(n+1)/2
        let sign = if x > 0.0 || n % 2 == 1 { 1.0 } else { -1.0 };
        sign * nf * (nf + 1.0) / 2.0
    } else {
        nf * (x * p - p_prev) / (x * x - 1.0)
    };
    (p, dp)
}

/// Builds the Gauss–Legendre rule by Newton iteration on the Legendre roots,
/// starting from Chebyshev-like initial guesses.
pub fn gauss_legendre(order: usize) -> Result<GaussRule> {
    if order == 0 {
        return Err(Error::Domain {
            value: 0.0,
            domain: "order >= 1",
        });
    }
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) || dx == 0.0 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence { order });
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // nodes ascending: the i-th root from the right mirrors to the left
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(GaussRule {
        nodes,
        weights,
        order,
    })
}

/// Process-wide cache of rules, keyed by order.
pub fn cached_rule(order: usize) -> Arc<GaussRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("gauss rule cache poisoned");
    guard
        .entry(order)
        .or_insert_with(|| {
            Arc::new(gauss_legendre(order).expect("Gauss-Legendre construction converges"))
        })
        .clone()
}

impl GaussRule {
    /// Single-panel integral of `f` over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let sum: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum();
        half * sum
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }
}

/// Composite Gauss rule over `panels` equal subintervals of `[a, b]`.
pub fn integrate_1d<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rule: &GaussRule, panels: usize) -> f64 {
    let panels = panels.max(1);
    let width = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == panels { b } else { lo + width };
            rule.integrate(lo, hi, &f)
        })
        .sum()
}

/// Sorts and deduplicates breakpoints, keeping those inside `[a, b]` plus the ends.
pub fn panel_edges(a: f64, b: f64, breaks: &[f64]) -> Vec<f64> {
    let mut edges: Vec<f64> = std::iter::once(a)
        .chain(breaks.iter().copied().filter(|&x| x > a && x < b))
        .chain(std::iter::once(b))
        .collect();
    edges.sort_by(|x, y| x.partial_cmp(y).expect("finite breakpoints"));
    edges.dedup_by(|x, y| (*x - *y).abs() <= 1e-15 * (1.0 + y.abs()));
    edges
}

/// Integrates over `[a, b]` with one Gauss panel between each pair of consecutive
/// breakpoints, each panel further split into `subdivisions` equal pieces.
pub fn integrate_piecewise<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    rule: &GaussRule,
    subdivisions: usize,
) -> f64 {
    let edges = panel_edges(a, b, breaks);
    edges
        .windows(2)
        .map(|w| integrate_1d(&f, w[0], w[1], rule, subdivisions))
        .sum()
}

/// Repeats `eval(order)` with doubled orders until two successive results agree to
/// `tol * max(1, |value|)`; returns the higher-order value.
pub fn order_doubling<F: Fn(&GaussRule) -> f64>(start: usize, max_order: usize, tol: f64, eval: F) -> Result<f64> {
    let mut order = start.max(1);
    let mut prev = eval(&cached_rule(order));
    let mut last_diff = f64::INFINITY;
    while order * 2 <= max_order {
        order *= 2;
        let next = eval(&cached_rule(order));
        last_diff = (next - prev).abs();
        if last_diff <= tol * next.abs().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Quadrature { tol, diff: last_diff })
}
