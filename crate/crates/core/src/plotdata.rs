//! CSV tables for external plotting.

use std::fmt::Write as _;

use crate::error::Result;
use crate::membership::{class_ratio, min_real_part, ClassSpec, SamplingGrid};
use crate::operators::{kernel_series, OperatorParams};
use crate::sequences::{map_convex_null_region, region_csv, Family};
use crate::series::{evaluate_ordinary, FunctionCoefficients, C64};

/// Rows `r,min_re`: the smallest real part of the class ratio on each circle.
pub fn min_re_vs_r(f: &FunctionCoefficients, spec: &ClassSpec, grid: &SamplingGrid) -> Result<String> {
    let ratio = class_ratio(f, spec)?;
    let mut out = String::from("r,min_re\n");
    for &r in grid.radii() {
        let circle = SamplingGrid::new(vec![r], grid.angles())?;
        let min = min_real_part(|z| evaluate_ordinary(&ratio, z), &circle)?;
        writeln!(out, "{r},{}", min.min_re).expect("writing to a String");
    }
    Ok(out)
}

/// Rows `r,theta,re` of `Re g^alpha/z^alpha` for the operator kernel.
pub fn kernel_re_heatmap(
    params: &OperatorParams,
    alpha: f64,
    order: usize,
    grid: &SamplingGrid,
) -> Result<String> {
    let kernel = kernel_series(params, alpha, order)?.ordinary_part();
    let mut out = String::from("r,theta,re\n");
    for i in 0..grid.len() {
        let (r, theta) = grid.point(i);
        let v = evaluate_ordinary(&kernel, C64::from_polar(r, theta))?;
        writeln!(out, "{r},{theta},{}", v.re).expect("writing to a String");
    }
    Ok(out)
}

/// Rows `alpha,m,convex,first_violation` for the c family.
pub fn convex_null_region(alphas: &[f64], ms: &[u32], k_max: usize) -> Result<String> {
    Ok(region_csv(&map_convex_null_region(Family::CFamily, alphas, ms, k_max)?))
}
