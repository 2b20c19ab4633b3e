//! Integral operators acting as coefficient multipliers on alpha series.
//!
//! * `phi1`: `((alpha+c)/z^c) int_0^z t^(c-1) f(t)^alpha dt`
//! * `phi2`: `(2^sigma / (z Gamma(sigma))) int_0^z log(z/t)^(sigma-1) f(t)^alpha dt`
//! * `phi3`: `binom(sigma+gamma, gamma) (sigma/z^gamma) int_0^z (1-t/z)^(sigma-1) t^(gamma-1) f(t)^alpha dt`
//!
//! Each maps `z^(alpha+k-1)` to `mu_k z^(alpha+k-1)`. The quadrature routines
//! evaluate the integrals directly and serve as an independent check.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{domain, Error, Result};
use crate::quadrature::{GaussRule, DEFAULT_NODES};
use crate::series::{
    evaluate_poly, AlphaSeries, FunctionCoefficients, OrdinarySeries, C64, ZERO,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum OperatorParams {
    Phi1 { c: f64 },
    Phi2 { sigma: f64 },
    Phi3 { sigma: f64, gamma: f64 },
}

impl OperatorParams {
    pub fn kind(&self) -> &'static str {
        match self {
            OperatorParams::Phi1 { .. } => "phi1",
            OperatorParams::Phi2 { .. } => "phi2",
            OperatorParams::Phi3 { .. } => "phi3",
        }
    }

    /// Builds parameters from a kind name; unused parameters are ignored.
    pub fn from_kind(kind: &str, c: f64, sigma: f64, gamma: f64) -> Result<Self> {
        match kind {
            "phi1" => Ok(OperatorParams::Phi1 { c }),
            "phi2" => Ok(OperatorParams::Phi2 { sigma }),
            "phi3" => Ok(OperatorParams::Phi3 { sigma, gamma }),
            _ => Err(Error::Parse(format!("unknown operator kind {kind:?}"))),
        }
    }

    pub fn validate(&self, alpha: f64) -> Result<()> {
        if !(alpha > 0.0) {
            return Err(domain(format!("alpha must be positive, got {alpha}")));
        }
        match *self {
            OperatorParams::Phi1 { c } if !(alpha + c > 0.0) => {
                Err(domain(format!("phi1 needs alpha + c > 0, got {}", alpha + c)))
            }
            OperatorParams::Phi2 { sigma } | OperatorParams::Phi3 { sigma, .. } if !(sigma > 0.0) => {
                Err(domain(format!("sigma must be positive, got {sigma}")))
            }
            OperatorParams::Phi3 { gamma, .. } if !(gamma > 0.0) => {
                Err(domain(format!("gamma must be positive, got {gamma}")))
            }
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            OperatorParams::Phi1 { c } => format!("phi1(c={c})"),
            OperatorParams::Phi2 { sigma } => format!("phi2(sigma={sigma})"),
            OperatorParams::Phi3 { sigma, gamma } => format!("phi3(sigma={sigma},gamma={gamma})"),
        }
    }
}

/// `mu_1 .. mu_N`, positive, starting at one and nonincreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierSequence {
    values: Vec<f64>,
}

impl MultiplierSequence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let first = *values.first().ok_or_else(|| domain("empty multiplier sequence"))?;
        if (first - 1.0).abs() > 1e-15 {
            return Err(Error::Normalization(format!("mu_1 = {first}")));
        }
        if values.iter().any(|&m| !(m > 0.0 && m.is_finite())) {
            return Err(domain("multipliers must be positive"));
        }
        if let Some(k) = values.windows(2).position(|w| w[1] > w[0]) {
            return Err(domain(format!("multipliers increase at k = {}", k + 2)));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// CSV with header `k,mu_k`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,mu_k\n");
        for (i, m) in self.values.iter().enumerate() {
            writeln!(out, "{},{}", i + 1, m).expect("writing to a String");
        }
        out
    }
}

fn gamma_ratio_multiplier(sigma: f64, gamma: f64, k: usize) -> f64 {
    // Gamma(s+g+1) Gamma(g+k) / (Gamma(g+1) Gamma(s+g+k))
    let head = ln_gamma(sigma + gamma + 1.0) - ln_gamma(gamma + 1.0);
    let tail = ln_gamma(gamma + k as f64) - ln_gamma(sigma + gamma + k as f64);
    (head + tail).exp()
}

/// Multipliers of the operator acting on `f^alpha`, `k = 1..order`.
pub fn multiplier_sequence(params: &OperatorParams, alpha: f64, order: usize) -> Result<MultiplierSequence> {
    params.validate(alpha)?;
    let values = (1..=order.max(1))
        .map(|k| match *params {
            OperatorParams::Phi1 { c } => (alpha + c) / ((alpha + c) + (k - 1) as f64),
            OperatorParams::Phi2 { sigma } => (2.0 / (k as f64 + 1.0)).powf(sigma),
            OperatorParams::Phi3 { sigma, gamma } => gamma_ratio_multiplier(sigma, gamma, k),
        })
        .collect();
    MultiplierSequence::new(values)
}

/// The `phi1` multipliers as typeset, `(alpha+c)/(alpha+c+k)`, without validation.
pub fn printed_phi1_multipliers(alpha: f64, c: f64, order: usize) -> Vec<f64> {
    (1..=order).map(|k| (alpha + c) / (alpha + c + k as f64)).collect()
}

pub fn apply_operator(fa: &AlphaSeries, params: &OperatorParams) -> Result<AlphaSeries> {
    if !fa.is_normalized() {
        return Err(Error::Normalization(format!("{}", fa.coeffs()[0])));
    }
    let mu = multiplier_sequence(params, fa.alpha(), fa.order())?;
    fa.scaled(mu.values())
}

/// The kernel `g_j^alpha` with coefficients `mu_k`, so that
/// `quasi_convolution(kernel, f^alpha) = apply_operator(f^alpha)`.
pub fn kernel_series(params: &OperatorParams, alpha: f64, order: usize) -> Result<AlphaSeries> {
    let mu = multiplier_sequence(params, alpha, order)?;
    AlphaSeries::new(alpha, mu.values().iter().map(|&m| C64::new(m, 0.0)).collect())
}

fn check_point(z: C64) -> Result<()> {
    if z.norm() < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("|z| = {} is not inside the unit disk", z.norm())))
    }
}

/// `(w(z s))^alpha` at the rule's nodes with the argument of `w` continued from
/// `w(0) = 1` along the ray.
fn ray_powers(w: &OrdinarySeries, z: C64, nodes: &[f64], alpha: f64) -> Vec<C64> {
    let mut arg = 0.0;
    let mut prev = 0.0;
    nodes
        .iter()
        .map(|&s| {
            let value = evaluate_poly(w.coeffs(), z * s);
            let mut step = value.arg() - prev;
            step -= std::f64::consts::TAU * (step / std::f64::consts::TAU).round();
            arg += step;
            prev = value.arg();
            C64::from_polar(value.norm().powf(alpha), alpha * arg)
        })
        .collect()
}

/// `phi1(z)^alpha` by Gauss-Jacobi quadrature after `t = z s`.
pub fn quadrature_phi1(f: &FunctionCoefficients, alpha: f64, c: f64, z: C64) -> Result<C64> {
    OperatorParams::Phi1 { c }.validate(alpha)?;
    check_point(z)?;
    if z == ZERO {
        return Ok(ZERO);
    }
    let rule = GaussRule::jacobi(DEFAULT_NODES, alpha + c - 1.0, 0.0)?;
    let powers = ray_powers(&f.quotient_by_z(), z, rule.nodes(), alpha);
    let integral = powers.iter().zip(rule.weights()).fold(ZERO, |acc, (p, &w)| acc + p * w);
    Ok((z.ln() * alpha).exp() * (alpha + c) * integral)
}

/// `phi2(z)` at `alpha = 1` after `t = z e^(-u)`:
/// `(2^sigma / Gamma(sigma)) z int_0^inf u^(sigma-1) e^(-2u) w(z e^(-u)) du`.
///
/// The integrand is singular just left of `u = 0` when `|z|` is near 1, so
/// `[0, 1]` takes a Gauss-Jacobi rule for the `u^(sigma-1)` endpoint and the
/// tail `[1, inf)` a Gauss-Laguerre rule after shifting.
pub fn quadrature_phi2(f: &FunctionCoefficients, sigma: f64, z: C64) -> Result<C64> {
    OperatorParams::Phi2 { sigma }.validate(1.0)?;
    check_point(z)?;
    let w = f.quotient_by_z();
    let integrand = |u: f64| {
        let e = (-u).exp();
        evaluate_poly(w.coeffs(), z * e) * (e * e)
    };
    let head = GaussRule::jacobi(DEFAULT_NODES, sigma - 1.0, 0.0)?.integrate_complex(integrand);
    // u = 1 + y/2, so e^(-2u) du = e^(-2) e^(-y) dy / 2
    let tail = GaussRule::laguerre(DEFAULT_NODES, 0.0)?.integrate_complex(|y| {
        let u = 1.0 + y / 2.0;
        evaluate_poly(w.coeffs(), z * (-u).exp()) * (u.powf(sigma - 1.0) * (-2f64).exp() / 2.0)
    });
    Ok(z * (head + tail) * (sigma * std::f64::consts::LN_2 - ln_gamma(sigma)).exp())
}

/// `phi3(z)` at `alpha = 1` by Gauss-Jacobi quadrature after `t = z s`.
pub fn quadrature_phi3(f: &FunctionCoefficients, sigma: f64, gamma: f64, z: C64) -> Result<C64> {
    OperatorParams::Phi3 { sigma, gamma }.validate(1.0)?;
    check_point(z)?;
    let rule = GaussRule::jacobi(DEFAULT_NODES, gamma, sigma - 1.0)?;
    let w = f.quotient_by_z();
    let integral = rule.integrate_complex(|s| evaluate_poly(w.coeffs(), z * s));
    // binom(sigma+gamma, gamma) * sigma
    let scale = (ln_gamma(sigma + gamma + 1.0) - ln_gamma(gamma + 1.0) - ln_gamma(sigma + 1.0)).exp()
        * sigma;
    Ok(z * integral * scale)
}

/// Kernels of the two transforms acting on analytic `p = p_0 + p_1 z + ...`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kernel", rename_all = "snake_case")]
pub enum ThetaKernel {
    /// `(2^sigma/(z Gamma(sigma))) int_0^z log(z/t)^(sigma-1) p(t) dt`
    Log { sigma: f64 },
    /// `binom(sigma+gamma, gamma) (sigma/z^gamma) int_0^z (1-t/z)^(sigma-1) t^(gamma-1) p(t) dt`
    Beta { sigma: f64, gamma: f64 },
}

impl ThetaKernel {
    fn validate(&self) -> Result<()> {
        match *self {
            ThetaKernel::Log { sigma } | ThetaKernel::Beta { sigma, .. } if !(sigma > 0.0) => {
                Err(domain(format!("sigma must be positive, got {sigma}")))
            }
            ThetaKernel::Beta { gamma, .. } if !(gamma > 0.0) => {
                Err(domain(format!("gamma must be positive, got {gamma}")))
            }
            _ => Ok(()),
        }
    }

    /// Image of the constant 1: `2^sigma` or `(sigma + gamma)/gamma`.
    pub fn constant_factor(&self) -> f64 {
        match *self {
            ThetaKernel::Log { sigma } => 2f64.powf(sigma),
            ThetaKernel::Beta { sigma, gamma } => (sigma + gamma) / gamma,
        }
    }

    fn factor(&self, k: usize) -> f64 {
        match *self {
            ThetaKernel::Log { sigma } => (2.0 / (k as f64 + 1.0)).powf(sigma),
            ThetaKernel::Beta { sigma, gamma } if k == 0 => (sigma + gamma) / gamma,
            ThetaKernel::Beta { sigma, gamma } => gamma_ratio_multiplier(sigma, gamma, k),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ThetaKernel::Log { sigma } => format!("log(sigma={sigma})"),
            ThetaKernel::Beta { sigma, gamma } => format!("beta(sigma={sigma},gamma={gamma})"),
        }
    }
}

/// Termwise image of `p` under the kernel.
pub fn theta_transform(p: &OrdinarySeries, kernel: &ThetaKernel) -> Result<OrdinarySeries> {
    kernel.validate()?;
    let coeffs = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, &c)| c * kernel.factor(k))
        .collect();
    OrdinarySeries::new(coeffs)
}
