//! Sampled membership tests on the unit disk and constructive class members.
//!
//! Open conditions such as `Re q(z) > beta` are tested on a finite polar grid
//! as `min Re q >= beta - tol - guard`, where `guard` is the truncation tail
//! estimate of the sampled series at the largest grid radius.

use std::f64::consts::TAU;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::series::{
    alpha_power, alpha_root, evaluate_ordinary, ratio_series, truncation_guard,
    AlphaSeries, FunctionCoefficients, OrdinarySeries, C64, ONE, ZERO,
};

/// Radii `0.1, 0.2, ..., 0.9, 0.95`.
pub const DEFAULT_RADII: [f64; 10] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95];
pub const DEFAULT_ANGLES: usize = 256;
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

const SINGULAR: f64 = 1e-9;

/// Polar sampling grid `r e^{i theta}` with equispaced angles in `[0, 2 pi)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingGrid {
    radii: Vec<f64>,
    angles: usize,
}

impl SamplingGrid {
    pub fn new(radii: Vec<f64>, angles: usize) -> Result<Self> {
        if radii.is_empty() {
            return Err(domain("grid needs at least one radius"));
        }
        if angles < 8 {
            return Err(domain(format!("grid needs at least 8 angles, got {angles}")));
        }
        if !radii.iter().all(|&r| r > 0.0 && r < 1.0) {
            return Err(domain("grid radii must lie in (0, 1)"));
        }
        if !radii.windows(2).all(|w| w[0] < w[1]) {
            return Err(domain("grid radii must be strictly increasing"));
        }
        Ok(Self { radii, angles })
    }

    /// Default radii truncated at `r_max` (which is always included).
    pub fn up_to(r_max: f64, angles: usize) -> Result<Self> {
        let mut radii: Vec<f64> = DEFAULT_RADII.iter().copied().filter(|&r| r < r_max).collect();
        radii.push(r_max);
        Self::new(radii, angles)
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn angles(&self) -> usize {
        self.angles
    }

    pub fn r_max(&self) -> f64 {
        *self.radii.last().expect("grid is nonempty")
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.angles
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `(r, theta)` of the `index`-th point, radius-major.
    pub fn point(&self, index: usize) -> (f64, f64) {
        let r = self.radii[index / self.angles];
        let theta = TAU * (index % self.angles) as f64 / self.angles as f64;
        (r, theta)
    }
}

impl Default for SamplingGrid {
    fn default() -> Self {
        Self { radii: DEFAULT_RADII.to_vec(), angles: DEFAULT_ANGLES }
    }
}

/// Smallest sampled real part and where it occurs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMinimum {
    pub min_re: f64,
    pub argmin_r: f64,
    pub argmin_theta: f64,
}

/// Minimum of `Re eval(r e^{i theta})` over `grid`.
///
/// Points may be evaluated in parallel; the reduction scans in (r, theta)
/// order and keeps the first strict minimum, so ties resolve to the smallest
/// radius and then the smallest angle.
pub fn min_real_part<F>(eval: F, grid: &SamplingGrid) -> Result<GridMinimum>
where
    F: Fn(C64) -> Result<C64> + Sync,
{
    let values: Vec<Result<f64>> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let (r, theta) = grid.point(i);
            let v = eval(C64::from_polar(r, theta))?;
            if v.re.is_finite() {
                Ok(v.re)
            } else {
                Err(domain(format!("non-finite value at r = {r}, theta = {theta}")))
            }
        })
        .collect();
    let mut best: Option<(f64, usize)> = None;
    for (i, v) in values.into_iter().enumerate() {
        let v = v?;
        if best.map_or(true, |(b, _)| v < b) {
            best = Some((v, i));
        }
    }
    let (min_re, i) = best.expect("grid is nonempty");
    let (argmin_r, argmin_theta) = grid.point(i);
    Ok(GridMinimum { min_re, argmin_r, argmin_theta })
}

/// Outcome of one sampled lower-bound test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub min_re: f64,
    pub argmin_r: f64,
    pub argmin_theta: f64,
    pub threshold: f64,
    pub margin: f64,
    pub pass: bool,
    pub guard: f64,
    pub grid: SamplingGrid,
    /// Effective slack: requested tolerance plus the guard.
    pub tolerance: f64,
    /// False when the guard exceeds a tenth of the requested tolerance.
    pub trusted: bool,
}

impl MembershipReport {
    pub fn new(min: GridMinimum, threshold: f64, tol: f64, guard: f64, grid: &SamplingGrid) -> Self {
        let margin = min.min_re - threshold;
        let tolerance = tol + guard;
        Self {
            min_re: min.min_re,
            argmin_r: min.argmin_r,
            argmin_theta: min.argmin_theta,
            threshold,
            margin,
            pass: margin >= -tolerance,
            guard,
            grid: grid.clone(),
            tolerance,
            trusted: guard <= tol / 10.0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Tests `Re p(z) >= threshold` on the grid.
pub fn check_lower_bound(
    p: &OrdinarySeries,
    threshold: f64,
    grid: &SamplingGrid,
    tol: f64,
) -> Result<MembershipReport> {
    let min = min_real_part(|z| evaluate_ordinary(p, z), grid)?;
    let guard = truncation_guard(p, grid.r_max());
    Ok(MembershipReport::new(min, threshold, tol, guard, grid))
}

/// The triple `(n, alpha, beta)`: `Re D^n f^alpha / (alpha^n z^alpha) > beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassSpec {
    n: u32,
    alpha: f64,
    beta: f64,
}

impl ClassSpec {
    pub fn new(n: u32, alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(domain(format!("alpha must be positive, got {alpha}")));
        }
        if !(0.0..1.0).contains(&beta) {
            return Err(domain(format!("beta must lie in [0, 1), got {beta}")));
        }
        Ok(Self { n, alpha, beta })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Same `(n, alpha)` with another order.
    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.n, self.alpha, beta)
    }
}

/// The ratio series `D^n f^alpha / (alpha^n z^alpha)` for `spec`.
pub fn class_ratio(f: &FunctionCoefficients, spec: &ClassSpec) -> Result<OrdinarySeries> {
    let s = alpha_power(f, spec.alpha, f.order())?;
    ratio_series(&s, spec.n as i32)
}

/// Sampled test of `f` in `T_n^alpha(beta)`.
pub fn check_membership(
    f: &FunctionCoefficients,
    spec: &ClassSpec,
    grid: &SamplingGrid,
    tol: f64,
) -> Result<MembershipReport> {
    check_lower_bound(&class_ratio(f, spec)?, spec.beta, grid, tol)
}

/// Sampled convexity test `Re(1 + z g''/g') > 0`.
///
/// `g` is evaluated exactly as stored, so the report carries a zero guard.
pub fn check_convex(g: &FunctionCoefficients, grid: &SamplingGrid, tol: f64) -> Result<MembershipReport> {
    let min = min_real_part(
        |z| {
            let (_, d1, zd2) = g.eval_jet(z);
            if d1.norm() < SINGULAR {
                return Err(Error::Singularity { re: z.re, im: z.im, what: "g' vanishes".into() });
            }
            Ok(ONE + zd2 / d1)
        },
        grid,
    )?;
    Ok(MembershipReport::new(min, 0.0, tol, 0.0, grid))
}

/// Sampled test of starlikeness of the given order, `Re(z g'/g) > order`.
pub fn check_starlike_order(
    g: &FunctionCoefficients,
    order: f64,
    grid: &SamplingGrid,
    tol: f64,
) -> Result<MembershipReport> {
    let quotient = g.quotient_by_z();
    let min = min_real_part(
        |z| {
            let w = evaluate_ordinary(&quotient, z)?;
            if w.norm() < SINGULAR {
                return Err(Error::Singularity { re: z.re, im: z.im, what: "g vanishes".into() });
            }
            let (_, d1, _) = g.eval_jet(z);
            Ok(d1 / w)
        },
        grid,
    )?;
    Ok(MembershipReport::new(min, order, tol, 0.0, grid))
}

/// A finite probability measure on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct HerglotzAtoms {
    atoms: Vec<(f64, C64)>,
}

impl HerglotzAtoms {
    pub fn new(atoms: Vec<(f64, C64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(domain("need at least one atom"));
        }
        if atoms.iter().any(|(w, _)| !(*w >= 0.0)) {
            return Err(domain("atom weights must be nonnegative"));
        }
        let total: f64 = atoms.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(domain(format!("atom weights sum to {total}, not 1")));
        }
        if atoms.iter().any(|(_, x)| (x.norm() - 1.0).abs() > 1e-12) {
            return Err(domain("atom points must be unimodular"));
        }
        Ok(Self { atoms })
    }

    /// Unit mass at `e^{i angle}`.
    pub fn single(angle: f64) -> Self {
        Self { atoms: vec![(1.0, C64::from_polar(1.0, angle))] }
    }

    /// Equal weights at the given angles.
    pub fn uniform(angles: &[f64]) -> Result<Self> {
        let w = 1.0 / angles.len() as f64;
        let mut atoms: Vec<(f64, C64)> =
            angles.iter().map(|&a| (w, C64::from_polar(1.0, a))).collect();
        // absorb rounding so the weights sum to one
        let total: f64 = atoms.iter().map(|(w, _)| w).sum();
        if let Some(first) = atoms.first_mut() {
            first.0 += 1.0 - total;
        }
        Self::new(atoms)
    }

    /// `count` atoms with random angles and Dirichlet-like random weights.
    pub fn random(count: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw: Vec<(f64, f64)> =
            (0..count.max(1)).map(|_| (rng.gen::<f64>() + 0.05, rng.gen::<f64>() * TAU)).collect();
        let total: f64 = raw.iter().map(|(w, _)| w).sum();
        let mut atoms: Vec<(f64, C64)> =
            raw.iter().map(|&(w, a)| (w / total, C64::from_polar(1.0, a))).collect();
        let sum: f64 = atoms.iter().map(|(w, _)| w).sum();
        atoms[0].0 += 1.0 - sum;
        Self::new(atoms)
    }

    pub fn atoms(&self) -> &[(f64, C64)] {
        &self.atoms
    }
}

/// `p(z) = sum_j w_j (1 + x_j z)/(1 - x_j z)` up to `z^degree`.
pub fn caratheodory_from_atoms(atoms: &HerglotzAtoms, degree: usize) -> OrdinarySeries {
    let mut coeffs = vec![ZERO; degree + 1];
    coeffs[0] = ONE;
    for &(w, x) in &atoms.atoms {
        let mut power = ONE;
        for c in coeffs.iter_mut().skip(1) {
            power *= x;
            *c += power * (2.0 * w);
        }
    }
    OrdinarySeries::new(coeffs).expect("atom coefficients are finite")
}

/// A member of `T_n^alpha(beta)` whose ratio series is `beta + (1 - beta) p`.
pub fn generate_member(spec: &ClassSpec, atoms: &HerglotzAtoms, order: usize) -> Result<FunctionCoefficients> {
    if order < 2 {
        return Err(domain("member order must be at least 2"));
    }
    let p = caratheodory_from_atoms(atoms, order - 1);
    let alpha = spec.alpha;
    let coeffs: Vec<C64> = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, &pk)| {
            if i == 0 {
                ONE
            } else {
                pk * (1.0 - spec.beta) * (alpha / (alpha + i as f64)).powi(spec.n as i32)
            }
        })
        .collect();
    alpha_root(&AlphaSeries::new(alpha, coeffs)?)
}

/// Convex functions used as `g` in the closure checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CatalogId {
    Identity,
    /// `z / (1 - z)`
    HalfPlane,
    /// `-log(1 - z)`
    LogMap,
    /// `z / (1 - x z)` with `x = e^{i angle}`
    Rotated(f64),
}

impl CatalogId {
    pub fn all_default() -> [CatalogId; 4] {
        [CatalogId::Identity, CatalogId::HalfPlane, CatalogId::LogMap, CatalogId::Rotated(1.0)]
    }

    pub fn name(&self) -> String {
        match self {
            CatalogId::Identity => "identity".into(),
            CatalogId::HalfPlane => "half_plane".into(),
            CatalogId::LogMap => "log_map".into(),
            CatalogId::Rotated(a) => format!("rotated:{a}"),
        }
    }
}

impl std::str::FromStr for CatalogId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(CatalogId::Identity),
            "half_plane" => Ok(CatalogId::HalfPlane),
            "log_map" => Ok(CatalogId::LogMap),
            _ => match s.strip_prefix("rotated:") {
                Some(a) => a
                    .parse()
                    .map(CatalogId::Rotated)
                    .map_err(|_| Error::Parse(format!("bad rotation angle in {s:?}"))),
                None => Err(Error::Parse(format!("unknown catalog function {s:?}"))),
            },
        }
    }
}

pub fn convex_catalog(id: CatalogId, order: usize) -> FunctionCoefficients {
    let order = order.max(2);
    let coeffs: Vec<C64> = (2..=order)
        .map(|k| match id {
            CatalogId::Identity => ZERO,
            CatalogId::HalfPlane => ONE,
            CatalogId::LogMap => C64::new(1.0 / k as f64, 0.0),
            CatalogId::Rotated(a) => C64::from_polar(1.0, a * (k - 1) as f64),
        })
        .collect();
    FunctionCoefficients::new(coeffs).expect("catalog coefficients are finite")
}

/// `psi(u, v) = 1/2 + v / (alpha (1 + u))` on `(C \ {-1}) x C`; `None` off the domain.
pub fn psi(u: C64, v: C64, alpha: f64) -> Option<C64> {
    if u == C64::new(-1.0, 0.0) {
        return None;
    }
    Some(C64::new(0.5, 0.0) + v / ((ONE + u) * alpha))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiReport {
    pub alpha: f64,
    pub samples: usize,
    /// Largest `Re psi(i u2, v1)` over admissible samples.
    pub worst_re: f64,
    pub worst_u2: f64,
    pub worst_v1: f64,
    /// `worst_re <= 1e-12`.
    pub condition_holds: bool,
    /// `Re psi(1, 0)`, which must be positive.
    pub base_re: f64,
    pub excludes_minus_one: bool,
}

/// Samples `u2 in [-10, 10]`, `v1 <= -(1 + u2^2)/2` and records the worst
/// `Re psi(i u2, v1)`. Every fourth sample sits on the boundary `v1 = -(1+u2^2)/2`.
pub fn psi_condition_check(alpha: f64, samples: usize, seed: u64) -> Result<PsiReport> {
    if !(alpha > 0.0) {
        return Err(domain(format!("alpha must be positive, got {alpha}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..samples.max(1) {
        let u2 = rng.gen_range(-10.0..=10.0);
        let depth = if i % 4 == 0 { 0.0 } else { rng.gen_range(0.0..10.0) };
        let v1 = -(1.0 + u2 * u2) / 2.0 - depth;
        let value = psi(C64::new(0.0, u2), C64::new(v1, 0.0), alpha)
            .expect("i u2 is never -1")
            .re;
        if value > worst.0 {
            worst = (value, u2, v1);
        }
    }
    let base_re = psi(ONE, ZERO, alpha).expect("1 is in the domain").re;
    Ok(PsiReport {
        alpha,
        samples: samples.max(1),
        worst_re: worst.0,
        worst_u2: worst.1,
        worst_v1: worst.2,
        condition_holds: worst.0 <= 1e-12,
        base_re,
        excludes_minus_one: psi(C64::new(-1.0, 0.0), ONE, alpha).is_none(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid_to(r: f64) -> SamplingGrid {
        SamplingGrid::up_to(r, 256).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(SamplingGrid::new(vec![0.5, 0.4], 16).is_err());
        assert!(SamplingGrid::new(vec![0.5, 1.0], 16).is_err());
        assert!(SamplingGrid::new(vec![0.5], 4).is_err());
        assert_eq!(SamplingGrid::default().r_max(), 0.95);
        assert_eq!(grid_to(0.55).radii(), &[0.1, 0.2, 0.3, 0.4, 0.5, 0.55]);
    }

    #[test]
    fn constant_minimum_ties_to_first_point() {
        let m = min_real_part(|_| Ok(ONE), &SamplingGrid::default()).unwrap();
        assert_eq!(m.min_re, 1.0);
        assert_eq!((m.argmin_r, m.argmin_theta), (0.1, 0.0));
    }

    #[test]
    fn geometric_kernel_minimum() {
        let m = min_real_part(|z| Ok(ONE / (ONE - z)), &grid_to(0.9)).unwrap();
        assert_relative_eq!(m.min_re, 1.0 / 1.9, epsilon = 1e-12);
        assert_eq!(m.argmin_r, 0.9);
        assert_relative_eq!(m.argmin_theta, std::f64::consts::PI, epsilon = 1e-12);
    }

    #[test]
    fn errors_propagate() {
        let r = min_real_part(|z| if z.re < 0.0 { Err(domain("boom")) } else { Ok(z) }, &grid_to(0.5));
        assert!(r.is_err());
    }

    #[test]
    fn identity_is_member_of_everything() {
        let f = FunctionCoefficients::identity(32);
        let spec = ClassSpec::new(1, 1.0, 0.9).unwrap();
        let rep = check_membership(&f, &spec, &SamplingGrid::default(), 1e-6).unwrap();
        assert!(rep.pass && rep.trusted);
        assert_eq!(rep.min_re, 1.0);
    }

    #[test]
    fn half_plane_member_at_order_half() {
        let f = convex_catalog(CatalogId::HalfPlane, 4096);
        let spec = ClassSpec::new(0, 1.0, 0.5).unwrap();
        let rep = check_membership(&f, &spec, &grid_to(0.99), 1e-6).unwrap();
        assert!((rep.min_re - 1.0 / 1.99).abs() < 1e-9, "{}", rep.min_re);
        assert!(rep.pass);
    }

    #[test]
    fn spec_validation() {
        assert!(ClassSpec::new(0, 0.0, 0.0).is_err());
        assert!(ClassSpec::new(0, 1.0, 1.0).is_err());
        assert!(ClassSpec::new(0, 1.0, -0.1).is_err());
    }

    #[test]
    fn convexity_cases() {
        let grid = SamplingGrid::default();
        let rep = check_convex(&FunctionCoefficients::identity(8), &grid, 1e-6).unwrap();
        assert!(rep.pass && rep.min_re == 1.0);

        let g = convex_catalog(CatalogId::HalfPlane, 1024);
        let rep = check_convex(&g, &grid, 1e-6).unwrap();
        assert!(rep.pass);
        assert_relative_eq!(rep.min_re, 0.05 / 1.95, epsilon = 1e-9);

        // z + z^2: g' = 1 + 2z vanishes at -1/2, convexity fails just inside it
        let g = FunctionCoefficients::from_real(&[1.0]).unwrap();
        let near = SamplingGrid::new(vec![0.2, 0.45, 0.9], 256).unwrap();
        let rep = check_convex(&g, &near, 1e-6).unwrap();
        assert!(!rep.pass);
        let z = C64::new(-0.45, 0.0);
        let direct = (ONE + 2.0 * z / (ONE + 2.0 * z)).re;
        assert_relative_eq!(rep.min_re, direct, epsilon = 1e-12);
        assert_eq!(rep.argmin_r, 0.45);
        assert!(matches!(check_convex(&g, &grid, 1e-6), Err(Error::Singularity { .. })));

        // z + z^2 / 2 has g' = 1 + z, vanishing only at z = -1
        let g = FunctionCoefficients::from_real(&[0.5]).unwrap();
        assert!(check_convex(&g, &grid, 1e-6).is_ok());
        let g = FunctionCoefficients::from_real(&[1.0 / 1.9]).unwrap();
        let err = check_convex(&g, &SamplingGrid::new(vec![0.95], 8).unwrap(), 1e-6);
        assert!(matches!(err, Err(Error::Singularity { .. })));
    }

    #[test]
    fn starlike_cases() {
        let grid = SamplingGrid::default();
        let rep = check_starlike_order(&FunctionCoefficients::identity(8), 0.5, &grid, 1e-6).unwrap();
        assert_eq!(rep.min_re, 1.0);
        let g = convex_catalog(CatalogId::HalfPlane, 1024);
        let rep = check_starlike_order(&g, 0.5, &grid, 1e-6).unwrap();
        assert!(rep.pass);
        assert_relative_eq!(rep.min_re, 1.0 / 1.95, epsilon = 1e-9);
        // z - z^2 / 0.95 vanishes at z = 0.95
        let g = FunctionCoefficients::from_real(&[-1.0 / 0.95]).unwrap();
        let err = check_starlike_order(&g, 0.0, &SamplingGrid::new(vec![0.95], 8).unwrap(), 1e-6);
        assert!(matches!(err, Err(Error::Singularity { .. })));
    }

    #[test]
    fn atoms_validation_and_series() {
        assert!(HerglotzAtoms::new(vec![(0.5, ONE)]).is_err());
        assert!(HerglotzAtoms::new(vec![(1.0, C64::new(0.5, 0.0))]).is_err());
        assert!(HerglotzAtoms::new(vec![(1.5, ONE), (-0.5, -ONE)]).is_err());

        let p = caratheodory_from_atoms(&HerglotzAtoms::single(0.0), 10);
        assert_eq!(p.coeffs()[0], ONE);
        assert!(p.coeffs()[1..].iter().all(|c| *c == C64::new(2.0, 0.0)));

        let conj = HerglotzAtoms::new(vec![
            (0.5, C64::from_polar(1.0, 0.7)),
            (0.5, C64::from_polar(1.0, -0.7)),
        ])
        .unwrap();
        let p = caratheodory_from_atoms(&conj, 12);
        assert!(p.coeffs().iter().all(|c| c.im.abs() < 1e-15));
    }

    #[test]
    fn single_atom_minimum() {
        let p = caratheodory_from_atoms(&HerglotzAtoms::single(0.0), 2048);
        let rep = check_lower_bound(&p, 0.0, &grid_to(0.9), 1e-6).unwrap();
        assert_relative_eq!(rep.min_re, 0.1 / 1.9, epsilon = 1e-9);
    }

    #[test]
    fn generated_half_plane() {
        let spec = ClassSpec::new(0, 1.0, 0.5).unwrap();
        let f = generate_member(&spec, &HerglotzAtoms::single(0.0), 16).unwrap();
        for k in 2..=16 {
            assert!((f.coeff(k) - ONE).norm() < 1e-13, "a_{k} = {}", f.coeff(k));
        }
    }

    #[test]
    fn generated_members_pass_their_spec() {
        let antipodal = HerglotzAtoms::uniform(&[0.0, std::f64::consts::PI]).unwrap();
        let random = HerglotzAtoms::random(3, 11).unwrap();
        let grid = SamplingGrid::default();
        for n in 0..3 {
            for alpha in [0.5, 1.0, 1.5] {
                for beta in [0.0, 0.25, 0.5, 0.75] {
                    let spec = ClassSpec::new(n, alpha, beta).unwrap();
                    for atoms in [&antipodal, &random] {
                        let f = generate_member(&spec, atoms, 512).unwrap();
                        let rep = check_membership(&f, &spec, &grid, 1e-6).unwrap();
                        assert!(rep.pass && rep.trusted, "{spec:?}: {rep:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn near_unit_order_gives_identity() {
        let spec = ClassSpec::new(1, 0.7, 1.0 - 1e-12).unwrap();
        let f = generate_member(&spec, &HerglotzAtoms::single(0.3), 12).unwrap();
        assert!(f.coeffs().iter().all(|c| c.norm() < 1e-10));
    }

    #[test]
    fn catalog() {
        assert!(convex_catalog(CatalogId::Identity, 5).coeffs().iter().all(|c| *c == ZERO));
        assert!(convex_catalog(CatalogId::HalfPlane, 5).coeffs().iter().all(|c| *c == ONE));
        let log = convex_catalog(CatalogId::LogMap, 5);
        assert_relative_eq!(log.coeff(4).re, 0.25);
        let rot = convex_catalog(CatalogId::Rotated(0.5), 5);
        assert!((rot.coeff(3) - C64::from_polar(1.0, 1.0)).norm() < 1e-15);
        assert_eq!("rotated:0.5".parse::<CatalogId>().unwrap(), CatalogId::Rotated(0.5));
        assert!("koebe".parse::<CatalogId>().is_err());
    }

    #[test]
    fn convex_catalog_is_starlike_of_order_half() {
        let grid = SamplingGrid::default();
        for id in CatalogId::all_default() {
            let g = convex_catalog(id, 1024);
            let convex = check_convex(&g, &grid, 1e-6).unwrap();
            let star = check_starlike_order(&g, 0.5, &grid, 1e-6).unwrap();
            assert!(convex.pass && star.pass, "{}", id.name());
        }
    }

    #[test]
    fn psi_values() {
        let boundary = |u2: f64| -(1.0 + u2 * u2) / 2.0;
        let v = psi(C64::new(0.0, 3.0), C64::new(boundary(3.0), 0.0), 1.0).unwrap();
        assert_eq!(v.re, 0.0);
        let v = psi(C64::new(0.0, 1.0), C64::new(-1.0, 0.0), 0.5).unwrap();
        assert_relative_eq!(v.re, -0.5, epsilon = 1e-15);
        let v = psi(C64::new(0.0, 1.0), C64::new(-1.0, 0.0), 2.0).unwrap();
        assert_relative_eq!(v.re, 0.25, epsilon = 1e-15);
        assert!(psi(C64::new(-1.0, 0.0), ZERO, 1.0).is_none());
    }

    #[test]
    fn psi_check_reports() {
        let rep = psi_condition_check(1.0, 1000, 3).unwrap();
        assert!(rep.condition_holds && rep.excludes_minus_one);
        assert_eq!(rep.worst_re, 0.0);
        assert_eq!(rep.base_re, 0.5);
        let rep = psi_condition_check(2.0, 1000, 3).unwrap();
        assert!(!rep.condition_holds && rep.worst_re > 0.0);
    }
}
