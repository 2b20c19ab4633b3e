//! Convex null sequences and the positive-real-part functions built from them.

use std::fmt::Write as _;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::series::{OrdinarySeries, C64};

/// Absolute slack for comparing consecutive differences.
pub const CONVEXITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Descriptor {
    Explicit,
    /// `d_k = alpha^m / (alpha + k)^m`
    DFamily { alpha: f64, m: u32 },
    /// `c_0 = 1`, `c_k = 2 alpha^m / (alpha + k)^m`
    CFamily { alpha: f64, m: u32 },
}

impl Descriptor {
    /// Closed forms that tend to zero analytically.
    fn decays(&self) -> bool {
        !matches!(self, Descriptor::Explicit)
    }
}

/// Nonnegative reals `a_0 .. a_K` with an optional closed-form tag.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSequence {
    values: Vec<f64>,
    descriptor: Descriptor,
}

impl RealSequence {
    pub fn explicit(values: Vec<f64>) -> Result<Self> {
        Self::with_descriptor(values, Descriptor::Explicit)
    }

    fn with_descriptor(values: Vec<f64>, descriptor: Descriptor) -> Result<Self> {
        if values.len() < 3 {
            return Err(domain("a sequence needs at least a_0, a_1, a_2"));
        }
        if values.iter().any(|&a| !(a >= 0.0 && a.is_finite())) {
            return Err(domain("sequence values must be finite and nonnegative"));
        }
        Ok(Self { values, descriptor })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn descriptor(&self) -> Descriptor {
        self.descriptor
    }

    /// Index of the last stored value.
    pub fn last_index(&self) -> usize {
        self.values.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexNullReport {
    pub convex: bool,
    pub null_trend: bool,
    pub first_violation: Option<usize>,
    pub checked_to: usize,
}

impl ConvexNullReport {
    pub fn is_convex_null(&self) -> bool {
        self.convex && self.null_trend
    }
}

/// Checks `a_k - a_{k+1} >= a_{k+1} - a_{k+2} >= 0` for `k + 2 <= K`.
pub fn is_convex_null(seq: &RealSequence, k_max: usize) -> Result<ConvexNullReport> {
    if k_max > seq.last_index() || k_max < 2 {
        return Err(Error::Truncation { requested: k_max, available: seq.last_index() });
    }
    let a = &seq.values;
    let first_violation = (0..=k_max - 2).find(|&k| {
        let head = a[k] - a[k + 1];
        let next = a[k + 1] - a[k + 2];
        head < next - CONVEXITY_SLACK || next < -CONVEXITY_SLACK
    });
    Ok(ConvexNullReport {
        convex: first_violation.is_none(),
        null_trend: a[k_max] < a[0] / 100.0 || seq.descriptor.decays(),
        first_violation,
        checked_to: k_max,
    })
}

fn check_family(alpha: f64, m: u32) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(domain(format!("alpha must be positive, got {alpha}")));
    }
    if m == 0 {
        return Err(domain("m must be at least 1"));
    }
    Ok(())
}

/// `d_k = alpha^m / (alpha + k)^m` for `k = 0..=K`.
pub fn d_sequence(alpha: f64, m: u32, k_max: usize) -> Result<RealSequence> {
    check_family(alpha, m)?;
    let values = (0..=k_max.max(2))
        .map(|k| (alpha / (alpha + k as f64)).powi(m as i32))
        .collect();
    RealSequence::with_descriptor(values, Descriptor::DFamily { alpha, m })
}

/// `c_0 = 1` and `c_k = 2 alpha^m / (alpha + k)^m` for `1 <= k <= K`.
pub fn c_sequence(alpha: f64, m: u32, k_max: usize) -> Result<RealSequence> {
    check_family(alpha, m)?;
    let values = (0..=k_max.max(2))
        .map(|k| if k == 0 { 1.0 } else { 2.0 * (alpha / (alpha + k as f64)).powi(m as i32) })
        .collect();
    RealSequence::with_descriptor(values, Descriptor::CFamily { alpha, m })
}

/// `p(z) = a_0/2 + sum_{k=1..M} a_k z^k` for a convex null sequence.
pub fn lemma3_function(seq: &RealSequence, degree: usize) -> Result<OrdinarySeries> {
    let report = is_convex_null(seq, seq.last_index())?;
    if !report.is_convex_null() {
        return Err(Error::Precondition(format!(
            "sequence is not convex null (first violation at {:?})",
            report.first_violation
        )));
    }
    if degree > seq.last_index() {
        return Err(Error::Truncation { requested: degree, available: seq.last_index() });
    }
    let coeffs = seq.values[..=degree]
        .iter()
        .enumerate()
        .map(|(k, &a)| C64::new(if k == 0 { a / 2.0 } else { a }, 0.0))
        .collect();
    OrdinarySeries::new(coeffs)
}

/// Whether `(a - b)^m <= a^m - b^m`; requires `a > b > 0` and `m >= 1`.
pub fn power_difference_inequality(a: f64, b: f64, m: u32) -> Result<bool> {
    if !(a > b && b > 0.0) || m == 0 {
        return Err(Error::Precondition(format!("need a > b > 0 and m >= 1, got ({a}, {b}, {m})")));
    }
    let m = m as i32;
    Ok((a - b).powi(m) <= a.powi(m) - b.powi(m))
}

/// Exact head-convexity test for `c_sequence(alpha, 1)`:
/// `1 - 2a/(a+1) >= 2a/(a+1) - 2a/(a+2)`.
pub fn c_head_convex_exact(alpha: Ratio<i128>) -> bool {
    let one = Ratio::from_integer(1);
    let two = Ratio::from_integer(2);
    let c1 = two * alpha / (alpha + one);
    let c2 = two * alpha / (alpha + two);
    one - c1 >= c1 - c2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    DFamily,
    CFamily,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionCell {
    pub alpha: f64,
    pub m: u32,
    pub convex: bool,
    pub first_violation: Option<usize>,
}

pub fn map_convex_null_region(
    family: Family,
    alphas: &[f64],
    ms: &[u32],
    k_max: usize,
) -> Result<Vec<RegionCell>> {
    let mut cells = Vec::with_capacity(alphas.len() * ms.len());
    for &alpha in alphas {
        for &m in ms {
            let seq = match family {
                Family::DFamily => d_sequence(alpha, m, k_max)?,
                Family::CFamily => c_sequence(alpha, m, k_max)?,
            };
            let report = is_convex_null(&seq, k_max.max(2))?;
            cells.push(RegionCell {
                alpha,
                m,
                convex: report.is_convex_null(),
                first_violation: report.first_violation,
            });
        }
    }
    Ok(cells)
}

/// CSV with header `alpha,m,convex,first_violation`; an empty last field means no violation.
pub fn region_csv(cells: &[RegionCell]) -> String {
    let mut out = String::from("alpha,m,convex,first_violation\n");
    for c in cells {
        let v = c.first_violation.map(|k| k.to_string()).unwrap_or_default();
        writeln!(out, "{},{},{},{}", c.alpha, c.m, c.convex, v).expect("writing to a String");
    }
    out
}
