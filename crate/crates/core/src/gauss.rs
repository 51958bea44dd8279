//! Gauss–Legendre quadrature rules.
//!
//! Nodes and weights are computed by Newton iteration on the Legendre
//! polynomial recurrence and cached per order. Used by the Fresnel
//! auxiliary-function table builder and the Gaussian-envelope slit
//! integrals; test oracles use adaptive Simpson instead so the two
//! quadrature routes stay independent.

use std::sync::OnceLock;

/// Nodes and weights on [-1, 1] for a given order.
#[derive(Debug, Clone)]
pub(crate) struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    fn compute(n: usize) -> Self {
        assert!(n >= 2);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Chebyshev-like initial guess for the i-th positive root.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                // Legendre recurrence: p0 = 1, p1 = x.
                let mut p0 = 1.0;
                let mut p1 = x;
                for j in 2..=n {
                    let jf = j as f64;
                    let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussRule { nodes, weights }
    }

    /// Integrate `f` over [a, b] with this rule.
    pub fn integrate<T, F>(&self, a: f64, b: f64, mut f: F) -> T
    where
        T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
        F: FnMut(f64) -> T,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = T::default();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * x) * w;
        }
        acc * half
    }
}

pub(crate) fn rule_20() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| GaussRule::compute(20))
}

pub(crate) fn rule_24() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| GaussRule::compute(24))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for rule in [rule_20(), rule_24()] {
            let sum: f64 = rule.weights.iter().sum();
            assert!((sum - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn integrates_polynomials_exactly() {
        // x^6 over [-1, 1] = 2/7.
        let v: f64 = rule_20().integrate(-1.0, 1.0, |x| x.powi(6));
        assert!((v - 2.0 / 7.0).abs() < 1e-14);
    }

    #[test]
    fn integrates_gaussian() {
        // erf-style integral with a known value: ∫_0^3 e^{-t^2} dt.
        let v: f64 = rule_24().integrate(0.0, 3.0, |t: f64| (-t * t).exp());
        assert!((v - 0.8862073482595214).abs() < 1e-12);
    }
}
