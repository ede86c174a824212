//! Gauss-Legendre nodes and weights on `[-1, 1]`.
//!
//! Rules are computed by Newton iteration on the Legendre recurrence and
//! cached per order; cached rules are immutable and shared.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// An `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes a fresh `n`-point rule, `n >= 1`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Shared cached rule of order `n`.
    pub fn cached(n: usize) -> Arc<GaussLegendre> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard
            .entry(n)
            .or_insert_with(|| Arc::new(GaussLegendre::new(n)))
            .clone()
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Applies the rule to `f` on `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let (half, mid) = (0.5 * (b - a), 0.5 * (b + a));
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(half * x + mid))
            .sum::<f64>()
    }
}

/// `(P_n(x), P_n'(x))`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 16, 64, 512, 1024] {
            let r = GaussLegendre::new(n);
            let s: f64 = r.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n = {n}, sum = {s}");
        }
    }

    #[test]
    fn exact_for_polynomials() {
        let r = GaussLegendre::new(8);
        // degree 15 is the limit for 8 nodes
        let got = r.integrate(0.0, 1.0, |t| t.powi(15));
        assert!((got - 1.0 / 16.0).abs() < 1e-15);
        let got = r.integrate(-1.0, 2.0, |t| 3.0 * t * t - t + 1.0);
        assert!((got - (9.0 - 1.5 + 3.0)).abs() < 1e-13);
    }

    #[test]
    fn nodes_sorted_and_symmetric() {
        let r = GaussLegendre::new(33);
        assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        for i in 0..33 {
            assert_eq!(r.nodes[i], -r.nodes[32 - i]);
        }
    }

    #[test]
    fn smooth_integrand() {
        let r = GaussLegendre::cached(16);
        let got = r.integrate(0.0, 2.0, f64::exp);
        assert!((got - (2f64.exp() - 1.0)).abs() < 1e-14);
    }
}
