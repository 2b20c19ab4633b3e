//! Truncated series with fractional leading exponent.
//!
//! A normalized analytic function `f(z) = z + a_2 z^2 + ...` is stored by its
//! coefficients ([`FunctionCoefficients`]). Its principal power `f(z)^alpha` is
//! the [`AlphaSeries`] `sum_k c_k z^(alpha + k - 1)`, and analytic-at-zero
//! quantities such as `D^n f^alpha / (alpha^n z^alpha)` live in
//! [`OrdinarySeries`].
//!
//! Every power `z^alpha` is the principal determination `exp(alpha Log z)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

pub type C64 = Complex64;

pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);

fn all_finite(coeffs: &[C64]) -> bool {
    coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
}

fn check_disk(z: C64) -> Result<()> {
    let r = z.norm();
    if r < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("|z| = {r} is not inside the unit disk")))
    }
}

/// `f(z) = z + sum_{k=2..N} a_k z^k`, stored exactly; there is no implied tail.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionCoefficients {
    // a_2 .. a_N
    tail: Vec<C64>,
}

impl FunctionCoefficients {
    /// Builds `f` from `a_2 .. a_N`. The truncation order is `coeffs.len() + 1`.
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(domain("a normalized function needs order N >= 2"));
        }
        if !all_finite(&coeffs) {
            return Err(domain("non-finite coefficient"));
        }
        Ok(Self { tail: coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    /// `f(z) = z` truncated at `order`.
    pub fn identity(order: usize) -> Self {
        Self { tail: vec![ZERO; order.max(2) - 1] }
    }

    pub fn order(&self) -> usize {
        self.tail.len() + 1
    }

    /// `a_2 .. a_N`.
    pub fn coeffs(&self) -> &[C64] {
        &self.tail
    }

    /// `a_k` for `k >= 1`, with `a_1 = 1` and zero beyond the order.
    pub fn coeff(&self, k: usize) -> C64 {
        match k {
            0 => ZERO,
            1 => ONE,
            _ => self.tail.get(k - 2).copied().unwrap_or(ZERO),
        }
    }

    /// Same function with zero coefficients appended up to `order`.
    pub fn zero_padded(&self, order: usize) -> Self {
        let mut tail = self.tail.clone();
        if order > self.order() {
            tail.resize(order - 1, ZERO);
        }
        Self { tail }
    }

    /// `f(z) / z = 1 + a_2 z + ...` as an ordinary series.
    pub fn quotient_by_z(&self) -> OrdinarySeries {
        let mut coeffs = Vec::with_capacity(self.order());
        coeffs.push(ONE);
        coeffs.extend_from_slice(&self.tail);
        OrdinarySeries { coeffs }
    }

    /// Returns `(f(z), f'(z), z f''(z))`.
    pub fn eval_jet(&self, z: C64) -> (C64, C64, C64) {
        let (mut f, mut d1, mut d2) = (ZERO, ZERO, ZERO);
        for k in (1..=self.order()).rev() {
            let a = self.coeff(k);
            let kf = k as f64;
            d2 = d2 * z + a * kf * (kf - 1.0);
            d1 = d1 * z + a * kf;
            f = f * z + a;
        }
        (f * z, d1, d2)
    }

    pub fn eval(&self, z: C64) -> C64 {
        z * evaluate_poly(&self.quotient_by_z().coeffs, z)
    }
}

/// `sum_{k=1..N} c_k z^(alpha + k - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSeries {
    alpha: f64,
    coeffs: Vec<C64>,
}

impl AlphaSeries {
    pub fn new(alpha: f64, coeffs: Vec<C64>) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(domain(format!("alpha must be positive, got {alpha}")));
        }
        if coeffs.is_empty() {
            return Err(domain("series order must be at least 1"));
        }
        if !all_finite(&coeffs) {
            return Err(domain("non-finite coefficient"));
        }
        Ok(Self { alpha, coeffs })
    }

    /// `z^alpha` truncated at `order`.
    pub fn monomial(alpha: f64, order: usize) -> Result<Self> {
        let mut coeffs = vec![ZERO; order.max(1)];
        coeffs[0] = ONE;
        Self::new(alpha, coeffs)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `c_1 .. c_N`.
    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// True when `c_1 = 1`, i.e. the series can be the power of a normalized function.
    pub fn is_normalized(&self) -> bool {
        self.coeffs[0] == ONE
    }

    /// `sum c_k z^(k-1)`, the factor multiplying `z^alpha`.
    pub fn ordinary_part(&self) -> OrdinarySeries {
        OrdinarySeries { coeffs: self.coeffs.clone() }
    }

    fn map_coeffs(&self, factor: impl Fn(usize) -> f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * factor(i + 1))
            .collect();
        Self { alpha: self.alpha, coeffs }
    }

    /// Multiplies `c_k` by `mu_k` (`mu` indexed from `k = 1`).
    pub fn scaled(&self, mu: &[f64]) -> Result<Self> {
        if mu.len() < self.order() {
            return Err(Error::Truncation { requested: self.order(), available: mu.len() });
        }
        Ok(self.map_coeffs(|k| mu[k - 1]))
    }

    pub fn to_json(&self) -> String {
        let record = AlphaRecord {
            alpha: self.alpha,
            order: self.order(),
            coeffs: pairs(&self.coeffs),
        };
        serde_json::to_string(&record).expect("series record serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: AlphaRecord =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if record.order != record.coeffs.len() {
            return Err(Error::Parse(format!(
                "order {} does not match {} coefficients",
                record.order,
                record.coeffs.len()
            )));
        }
        Self::new(record.alpha, unpairs(&record.coeffs))
    }
}

/// `sum_{k=0..M} p_k z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrdinarySeries {
    coeffs: Vec<C64>,
}

impl OrdinarySeries {
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(domain("ordinary series needs at least p_0"));
        }
        if !all_finite(&coeffs) {
            return Err(domain("non-finite coefficient"));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Highest stored power `M`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

impl FunctionCoefficients {
    pub fn to_json(&self) -> String {
        let record = FunctionRecord { order: self.order(), coeffs: pairs(&self.tail) };
        serde_json::to_string(&record).expect("function record serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: FunctionRecord =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if record.order != record.coeffs.len() + 1 {
            return Err(Error::Parse(format!(
                "order {} does not match {} coefficients a_2..a_N",
                record.order,
                record.coeffs.len()
            )));
        }
        Self::new(unpairs(&record.coeffs))
    }
}

impl OrdinarySeries {
    pub fn to_json(&self) -> String {
        let record = FunctionRecord { order: self.degree(), coeffs: pairs(&self.coeffs) };
        serde_json::to_string(&record).expect("series record serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct AlphaRecord {
    alpha: f64,
    order: usize,
    coeffs: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct FunctionRecord {
    order: usize,
    coeffs: Vec<[f64; 2]>,
}

fn pairs(coeffs: &[C64]) -> Vec<[f64; 2]> {
    coeffs.iter().map(|c| [c.re, c.im]).collect()
}

fn unpairs(pairs: &[[f64; 2]]) -> Vec<C64> {
    pairs.iter().map(|p| C64::new(p[0], p[1])).collect()
}

/// Coefficients of `w^exponent` for `w = 1 + w_1 z + ...`, first `len` terms.
///
/// `h_0 = 1`, `h_k = (1/k) sum_{j=1..k} ((exponent + 1) j - k) w_j h_{k-j}`.
fn power_recurrence(w: &[C64], exponent: f64, len: usize) -> Vec<C64> {
    let mut h = Vec::with_capacity(len);
    h.push(ONE);
    for k in 1..len {
        let mut acc = ZERO;
        for j in 1..=k.min(w.len() - 1) {
            acc += w[j] * h[k - j] * ((exponent + 1.0) * j as f64 - k as f64);
        }
        h.push(acc / k as f64);
    }
    h
}

/// The first `n` coefficients `A_1(alpha) .. A_n(alpha)` of `f(z)^alpha`.
pub fn alpha_power(f: &FunctionCoefficients, alpha: f64, n: usize) -> Result<AlphaSeries> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(domain(format!("alpha must be positive, got {alpha}")));
    }
    if n == 0 || n > f.order() {
        return Err(Error::Truncation { requested: n, available: f.order() });
    }
    let w = f.quotient_by_z();
    AlphaSeries::new(alpha, power_recurrence(&w.coeffs[..n], alpha, n))
}

/// Inverse of [`alpha_power`]: the normalized `f` whose `alpha` power is `s`.
pub fn alpha_root(s: &AlphaSeries) -> Result<FunctionCoefficients> {
    if !s.is_normalized() {
        return Err(Error::Normalization(format!("{}", s.coeffs[0])));
    }
    let w = power_recurrence(&s.coeffs, 1.0 / s.alpha, s.order().max(2));
    FunctionCoefficients::new(w[1..].to_vec())
}

/// Coefficient-wise product of two alpha series (the quasi-convolution).
pub fn quasi_convolution(fa: &AlphaSeries, ga: &AlphaSeries) -> Result<AlphaSeries> {
    if fa.alpha != ga.alpha {
        return Err(Error::Shape(format!("alpha {} vs {}", fa.alpha, ga.alpha)));
    }
    if fa.order() != ga.order() {
        return Err(Error::Shape(format!("order {} vs {}", fa.order(), ga.order())));
    }
    let coeffs = fa.coeffs.iter().zip(&ga.coeffs).map(|(a, b)| a * b).collect();
    Ok(AlphaSeries { alpha: fa.alpha, coeffs })
}

/// `alpha * int_0^z xi^(-1) s(xi) d xi`, termwise `c_k -> alpha / (alpha + k - 1) c_k`.
pub fn integral_quasi_convolution(s: &AlphaSeries) -> AlphaSeries {
    let alpha = s.alpha;
    s.map_coeffs(|k| alpha / (alpha + (k - 1) as f64))
}

fn check_order(n: i32) -> Result<()> {
    if n < 0 {
        Err(domain(format!("Salagean order must be nonnegative, got {n}")))
    } else {
        Ok(())
    }
}

/// `D^n`, with `D = z d/dz`: multiplies `c_k` by `(alpha + k - 1)^n`.
pub fn salagean(s: &AlphaSeries, n: i32) -> Result<AlphaSeries> {
    check_order(n)?;
    let alpha = s.alpha;
    Ok(s.map_coeffs(|k| (alpha + (k - 1) as f64).powi(n)))
}

/// Divides `c_k` by `(alpha + k - 1)^n`.
pub fn inverse_salagean(s: &AlphaSeries, n: i32) -> Result<AlphaSeries> {
    check_order(n)?;
    let alpha = s.alpha;
    Ok(s.map_coeffs(|k| (alpha + (k - 1) as f64).powi(n).recip()))
}

/// `D^n s / (alpha^n z^alpha)` as an ordinary series `q_{k-1} = ((alpha+k-1)/alpha)^n c_k`.
pub fn ratio_series(s: &AlphaSeries, n: i32) -> Result<OrdinarySeries> {
    check_order(n)?;
    if !s.is_normalized() {
        return Err(Error::Normalization(format!("{}", s.coeffs[0])));
    }
    let alpha = s.alpha;
    let coeffs = s
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c * ((alpha + i as f64) / alpha).powi(n))
        .collect();
    Ok(OrdinarySeries { coeffs })
}

pub(crate) fn evaluate_poly(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
}

/// `sum c_k z^(alpha+k-1)` with the principal power; zero at `z = 0`.
pub fn evaluate_alpha(s: &AlphaSeries, z: C64) -> Result<C64> {
    check_disk(z)?;
    if z == ZERO {
        return Ok(ZERO);
    }
    Ok((z.ln() * s.alpha).exp() * evaluate_poly(&s.coeffs, z))
}

/// Evaluates at `rho e^(i phi)` taking `z^alpha = rho^alpha e^(i alpha phi)` for
/// the given, unreduced angle. Agrees with [`evaluate_alpha`] for `phi` in `(-pi, pi]`.
pub fn evaluate_alpha_polar(s: &AlphaSeries, rho: f64, phi: f64) -> Result<C64> {
    if !(0.0..1.0).contains(&rho) {
        return Err(domain(format!("radius {rho} is not in [0, 1)")));
    }
    if rho == 0.0 {
        return Ok(ZERO);
    }
    let z = C64::from_polar(rho, phi);
    Ok(C64::from_polar(rho.powf(s.alpha), s.alpha * phi) * evaluate_poly(&s.coeffs, z))
}

pub fn evaluate_ordinary(p: &OrdinarySeries, z: C64) -> Result<C64> {
    check_disk(z)?;
    Ok(evaluate_poly(&p.coeffs, z))
}

/// Anything with a coefficient list that [`truncation_guard`] can inspect.
pub trait Coefficients {
    fn coefficients(&self) -> &[C64];
}

impl Coefficients for AlphaSeries {
    fn coefficients(&self) -> &[C64] {
        &self.coeffs
    }
}

impl Coefficients for OrdinarySeries {
    fn coefficients(&self) -> &[C64] {
        &self.coeffs
    }
}

/// Heuristic tail estimate `max_{k > N/2} |c_k| r^N / (1 - r)` for a series of
/// `N` stored coefficients evaluated at radius `r`.
pub fn truncation_guard<S: Coefficients + ?Sized>(s: &S, r: f64) -> f64 {
    guard_for(s.coefficients(), r)
}

pub(crate) fn guard_for(coeffs: &[C64], r: f64) -> f64 {
    let n = coeffs.len();
    let trailing = coeffs[n / 2..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    if trailing == 0.0 {
        return 0.0;
    }
    trailing * r.powi(n as i32) / (1.0 - r)
}

/// `(1/2pi) int_0^{2pi} f(r e^{i(theta - t)})^alpha g(r e^{it})^alpha dt` by the
/// `panels`-point trapezoidal rule. This is the quasi-convolution evaluated at
/// `r^2 e^{i theta}`.
///
/// Both powers come from the truncated alpha series, evaluated with the angles
/// `theta - t` and `t` carried continuously, so the product phase stays
/// `alpha * theta` along the whole circle.
pub fn circle_convolution_oracle(
    f: &FunctionCoefficients,
    g: &FunctionCoefficients,
    alpha: f64,
    r: f64,
    theta: f64,
    panels: usize,
) -> Result<C64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(domain(format!("radius {r} is not in (0, 1)")));
    }
    let order = f.order().min(g.order());
    if panels < 4 * order {
        return Err(Error::Precondition(format!(
            "need at least {} panels for order {order}, got {panels}",
            4 * order
        )));
    }
    let fa = alpha_power(f, alpha, order)?;
    let ga = alpha_power(g, alpha, order)?;
    let step = std::f64::consts::TAU / panels as f64;
    let mut acc = ZERO;
    for j in 0..panels {
        let t = j as f64 * step;
        acc += evaluate_alpha_polar(&fa, r, theta - t)? * evaluate_alpha_polar(&ga, r, t)?;
    }
    Ok(acc / panels as f64)
}
