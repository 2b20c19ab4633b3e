//! Gauss rules from the Golub-Welsch eigenvalue construction.
//!
//! Jacobi rules are mapped to `[0, 1]` with weight `s^a (1 - s)^b`; Laguerre
//! rules carry weight `u^a e^(-u)` on `[0, inf)`.

use nalgebra::{DMatrix, SymmetricEigen};
use statrs::function::gamma::ln_gamma;

use crate::error::{domain, Result};
use crate::series::{C64, ZERO};

/// Number of nodes used by the operator quadratures.
pub const DEFAULT_NODES: usize = 64;

#[derive(Debug, Clone)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    fn from_jacobi_matrix(diag: &[f64], off: &[f64], mass: f64) -> Self {
        let n = diag.len();
        let mut m = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = diag[i];
        }
        for (i, b) in off.iter().enumerate() {
            m[(i, i + 1)] = *b;
            m[(i + 1, i)] = *b;
        }
        let eig = SymmetricEigen::new(m);
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| (eig.eigenvalues[i], mass * eig.eigenvectors[(0, i)].powi(2)))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (nodes, weights) = pairs.into_iter().unzip();
        Self { nodes, weights }
    }

    /// Gauss-Jacobi on `[0, 1]` for the weight `s^a (1 - s)^b`, `a, b > -1`.
    pub fn jacobi(n: usize, a: f64, b: f64) -> Result<Self> {
        if n == 0 {
            return Err(domain("a Gauss rule needs at least one node"));
        }
        if !(a > -1.0 && b > -1.0) {
            return Err(domain(format!("Jacobi exponents must exceed -1, got ({a}, {b})")));
        }
        // On [-1, 1] the weight is (1 - x)^b (1 + x)^a.
        let (pa, pb) = (b, a);
        let ab = pa + pb;
        let diag: Vec<f64> = (0..n)
            .map(|k| {
                if k == 0 {
                    (pb - pa) / (ab + 2.0)
                } else {
                    let t = 2.0 * k as f64 + ab;
                    (pb * pb - pa * pa) / (t * (t + 2.0))
                }
            })
            .collect();
        let off: Vec<f64> = (1..n)
            .map(|k| {
                let kf = k as f64;
                let t = 2.0 * kf + ab;
                if k == 1 {
                    (4.0 * (1.0 + pa) * (1.0 + pb) / (t * t * (t + 1.0))).sqrt()
                } else {
                    (4.0 * kf * (kf + pa) * (kf + pb) * (kf + ab)
                        / (t * t * (t + 1.0) * (t - 1.0)))
                        .sqrt()
                }
            })
            .collect();
        // Total mass of s^a (1-s)^b on [0, 1] is B(a+1, b+1).
        let mass = (ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + 2.0)).exp();
        let mut rule = Self::from_jacobi_matrix(&diag, &off, 1.0);
        let total: f64 = rule.weights.iter().sum();
        for w in &mut rule.weights {
            *w *= mass / total;
        }
        for x in &mut rule.nodes {
            *x = 0.5 * (1.0 + *x);
        }
        Ok(rule)
    }

    /// Gauss-Legendre on `[0, 1]`.
    pub fn legendre(n: usize) -> Result<Self> {
        Self::jacobi(n, 0.0, 0.0)
    }

    /// Generalized Gauss-Laguerre for the weight `u^a e^(-u)`, `a > -1`.
    pub fn laguerre(n: usize, a: f64) -> Result<Self> {
        if n == 0 {
            return Err(domain("a Gauss rule needs at least one node"));
        }
        if !(a > -1.0) {
            return Err(domain(format!("Laguerre exponent must exceed -1, got {a}")));
        }
        let diag: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + a + 1.0).collect();
        let off: Vec<f64> = (1..n).map(|k| (k as f64 * (k as f64 + a)).sqrt()).collect();
        Ok(Self::from_jacobi_matrix(&diag, &off, ln_gamma(a + 1.0).exp()))
    }

    /// Nodes in increasing order.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    pub fn integrate_complex(&self, f: impl Fn(f64) -> C64) -> C64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(ZERO, |acc, (&x, &w)| acc + f(x) * w)
    }
}
