//! Quadrature building blocks shared across the crate: Gauss–Legendre rules
//! with cached nodes, oscillation-aware panel splitting, and deterministic
//! pairwise summation.

use num_complex::Complex64;
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::Mutex;

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
///
/// Computed once per order by Newton iteration on P_n and cached; the usual
/// orders here are 8..64 so the cache stays tiny.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    static CACHE: Lazy<Mutex<HashMap<usize, (Vec<f64>, Vec<f64>)>>> =
        Lazy::new(|| Mutex::new(HashMap::new()));
    assert!(n >= 2, "Gauss-Legendre order must be at least 2");
    let mut cache = CACHE.lock().unwrap();
    cache
        .entry(n)
        .or_insert_with(|| compute_gauss_legendre(n))
        .clone()
}

fn compute_gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess, then Newton on P_n(x).
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        // One clean-up evaluation at the converged node.
        let (_, dp) = legendre_and_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_and_derivative(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integrate a real function over [a, b] with one n-point rule.
pub fn integrate_panel<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut terms = Vec::with_capacity(n);
    for (x, w) in nodes.iter().zip(weights.iter()) {
        terms.push(w * f(c + h * x));
    }
    h * pairwise_sum(&terms)
}

/// Integrate a complex function over [a, b] with one n-point rule.
pub fn integrate_panel_complex<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    n: usize,
) -> Complex64 {
    let (nodes, weights) = gauss_legendre(n);
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut terms = Vec::with_capacity(n);
    for (x, w) in nodes.iter().zip(weights.iter()) {
        terms.push(f(c + h * x) * *w);
    }
    pairwise_sum_complex(&terms) * h
}

/// Integrate over [a, b] split into `panels` equal panels of `n` nodes each.
pub fn integrate_panels_complex<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    panels: usize,
    n: usize,
) -> Complex64 {
    let panels = panels.max(1);
    let step = (b - a) / panels as f64;
    let mut parts = Vec::with_capacity(panels);
    for p in 0..panels {
        let lo = a + step * p as f64;
        parts.push(integrate_panel_complex(&mut f, lo, lo + step, n));
    }
    pairwise_sum_complex(&parts)
}

pub fn integrate_panels<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    panels: usize,
    n: usize,
) -> f64 {
    let panels = panels.max(1);
    let step = (b - a) / panels as f64;
    let mut parts = Vec::with_capacity(panels);
    for p in 0..panels {
        let lo = a + step * p as f64;
        parts.push(integrate_panel(&mut f, lo, lo + step, n));
    }
    pairwise_sum(&parts)
}

/// Panel count that resolves a phase sweeping `total_phase` radians across the
/// interval, with `rad_per_panel` radians per panel and a floor of `min`.
pub fn oscillation_panels(total_phase: f64, rad_per_panel: f64, min: usize) -> usize {
    let need = (total_phase.abs() / rad_per_panel).ceil();
    if need.is_finite() {
        (need as usize).max(min)
    } else {
        min
    }
}

/// Deterministic pairwise (cascade) summation.  Order-stable and much less
/// prone to cancellation drift than a running left-to-right sum.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

pub fn pairwise_sum_complex(xs: &[Complex64]) -> Complex64 {
    match xs.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum_complex(&xs[..mid]) + pairwise_sum_complex(&xs[mid..])
        }
    }
}
