//! Independent oracles and reporting helpers for the acceptance suite.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Coefficient of `z^(k-1)` in `(1 - z)^(-alpha)`, i.e.
/// `alpha (alpha + 1) ... (alpha + k - 2) / (k - 1)!`, as a running product.
pub fn rising_coefficient(alpha: f64, k: usize) -> f64 {
    (0..k.saturating_sub(1)).fold(1.0, |acc, j| acc * (alpha + j as f64) / (j + 1) as f64)
}

/// Tail `a_2 ..= a_order` with `|a_k| <= 1/k`, drawn from the seed.
pub fn random_tail(seed: u64, order: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (2..=order)
        .map(|k| {
            let radius = rng.gen::<f64>() / k as f64;
            Complex64::from_polar(radius, rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .collect()
}

/// One line of the acceptance summary.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}
