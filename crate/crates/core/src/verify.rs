//! One-shot verification suites over parameter sweeps.
//!
//! Each suite expands into independent cases that run on a dedicated thread
//! pool. Cases are collected in enumeration order and every grid reduction is
//! order independent, so a report does not depend on the worker count.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::membership::{
    caratheodory_from_atoms, check_convex, check_lower_bound, check_membership,
    check_starlike_order, convex_catalog, generate_member, psi_condition_check, CatalogId,
    ClassSpec, HerglotzAtoms, MembershipReport, PsiReport, SamplingGrid,
};
use crate::operators::{apply_operator, kernel_series, theta_transform, OperatorParams, ThetaKernel};
use crate::sequences::{
    c_head_convex_exact, c_sequence, d_sequence, is_convex_null, lemma3_function,
    power_difference_inequality, ConvexNullReport, RealSequence,
};
use crate::series::{
    alpha_power, alpha_root, quasi_convolution, FunctionCoefficients, OrdinarySeries, C64,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Theorem1,
    Theorem2,
    Theorem3,
    Theorem4,
    Corollaries,
    Theorem5,
    Lemma3,
    Lemma4,
    Sequences,
    Psi,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Theorem1,
        Suite::Theorem2,
        Suite::Theorem3,
        Suite::Theorem4,
        Suite::Corollaries,
        Suite::Theorem5,
        Suite::Lemma3,
        Suite::Lemma4,
        Suite::Sequences,
        Suite::Psi,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Theorem1 => "theorem1",
            Suite::Theorem2 => "theorem2",
            Suite::Theorem3 => "theorem3",
            Suite::Theorem4 => "theorem4",
            Suite::Corollaries => "corollaries",
            Suite::Theorem5 => "theorem5",
            Suite::Lemma3 => "lemma3",
            Suite::Lemma4 => "lemma4",
            Suite::Sequences => "sequences",
            Suite::Psi => "psi",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// What a case measured.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CaseDetail {
    Membership { report: MembershipReport },
    /// A lower bound checked against two thresholds, with the input's own bound.
    TwoBounds { input: MembershipReport, base: MembershipReport, scaled: MembershipReport },
    Sequence { report: ConvexNullReport },
    Inequality { samples: usize, counterexamples: usize },
    HeadCondition { alpha: String, exact: bool, sampled: bool },
    Psi { report: PsiReport, expect_holds: bool },
    Failed { message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseReport {
    pub label: String,
    pub pass: bool,
    #[serde(flatten)]
    pub detail: CaseDetail,
}

impl CaseReport {
    fn from_result(label: String, result: Result<(bool, CaseDetail)>) -> Self {
        match result {
            Ok((pass, detail)) => Self { label, pass, detail },
            Err(e) => Self { label, pass: false, detail: CaseDetail::Failed { message: e.to_string() } },
        }
    }

    fn membership(report: MembershipReport) -> (bool, CaseDetail) {
        (report.pass && report.trusted, CaseDetail::Membership { report })
    }

    /// The membership report, if this case carries exactly one.
    pub fn report(&self) -> Option<&MembershipReport> {
        match &self.detail {
            CaseDetail::Membership { report } => Some(report),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub pass: bool,
    pub cases: Vec<CaseReport>,
    /// Known boundary anomalies: executed and reported but not counted.
    pub exceptions: Vec<CaseReport>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SuiteResult {
    /// JSON report; the wall time is left out so reruns compare equal.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("suite result serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,section,label,pass,min_re,threshold,margin,guard\n");
        let sections = [("case", &self.cases), ("exception", &self.exceptions)];
        for (section, cases) in sections {
            for c in cases.iter() {
                let nums = match c.report() {
                    Some(r) => format!("{},{},{},{}", r.min_re, r.threshold, r.margin, r.guard),
                    None => ",,,".into(),
                };
                writeln!(out, "{},{section},\"{}\",{},{nums}", self.suite, c.label, c.pass)
                    .expect("writing to a String");
            }
        }
        out
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseReport> {
        self.cases.iter().filter(|c| !c.pass)
    }
}

type Job = Box<dyn Fn() -> CaseReport + Send + Sync>;

struct Plan {
    cases: Vec<Job>,
    exceptions: Vec<Job>,
}

impl Plan {
    fn new() -> Self {
        Self { cases: Vec::new(), exceptions: Vec::new() }
    }

    fn push<F>(&mut self, label: String, f: F)
    where
        F: Fn() -> Result<(bool, CaseDetail)> + Send + Sync + 'static,
    {
        self.cases.push(Box::new(move || CaseReport::from_result(label.clone(), f())));
    }

    fn push_exception<F>(&mut self, label: String, f: F)
    where
        F: Fn() -> Result<(bool, CaseDetail)> + Send + Sync + 'static,
    {
        self.exceptions.push(Box::new(move || CaseReport::from_result(label.clone(), f())));
    }
}

/// Herglotz measures used to generate class members.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AtomSet {
    /// Unit mass at 1, the extremal half-plane map.
    Single,
    /// Equal masses at 1 and -1.
    Antipodal,
    /// Three random atoms from the seed.
    Random(u64),
}

impl AtomSet {
    pub fn atoms(&self) -> Result<HerglotzAtoms> {
        match *self {
            AtomSet::Single => Ok(HerglotzAtoms::single(0.0)),
            AtomSet::Antipodal => HerglotzAtoms::uniform(&[0.0, std::f64::consts::PI]),
            AtomSet::Random(seed) => HerglotzAtoms::random(3, seed),
        }
    }

    pub fn label(&self) -> String {
        match self {
            AtomSet::Single => "single".into(),
            AtomSet::Antipodal => "antipodal".into(),
            AtomSet::Random(seed) => format!("random({seed})"),
        }
    }
}

fn atom_sets(seed: u64) -> [AtomSet; 3] {
    [AtomSet::Single, AtomSet::Antipodal, AtomSet::Random(seed)]
}

fn atom_pairs(seed: u64) -> [(AtomSet, AtomSet); 3] {
    [
        (AtomSet::Single, AtomSet::Single),
        (AtomSet::Antipodal, AtomSet::Antipodal),
        (AtomSet::Random(seed), AtomSet::Random(seed.wrapping_add(1))),
    ]
}

/// Shared, cheaply cloned inputs of every case.
#[derive(Clone)]
struct Ctx {
    order: usize,
    grid: SamplingGrid,
    tol: f64,
}

impl Ctx {
    fn member(&self, n: u32, alpha: f64, beta: f64, atoms: AtomSet) -> Result<FunctionCoefficients> {
        generate_member(&ClassSpec::new(n, alpha, beta)?, &atoms.atoms()?, self.order)
    }

    /// The function whose alpha power is `f^alpha * g^alpha`.
    fn quasi_product(&self, f: &FunctionCoefficients, g: &FunctionCoefficients, alpha: f64) -> Result<FunctionCoefficients> {
        let fa = alpha_power(f, alpha, self.order)?;
        let ga = alpha_power(g, alpha, self.order)?;
        alpha_root(&quasi_convolution(&fa, &ga)?)
    }

    fn membership(&self, f: &FunctionCoefficients, n: u32, alpha: f64, threshold: f64) -> Result<(bool, CaseDetail)> {
        let spec = ClassSpec::new(n, alpha, threshold)?;
        Ok(CaseReport::membership(check_membership(f, &spec, &self.grid, self.tol)?))
    }

    fn lower_bound(&self, p: &OrdinarySeries, threshold: f64) -> Result<(bool, CaseDetail)> {
        Ok(CaseReport::membership(check_lower_bound(p, threshold, &self.grid, self.tol)?))
    }

    /// `phi` from `f in T_n(beta)` and `g in T_m(lambda)`, checked against `threshold`.
    #[allow(clippy::too_many_arguments)]
    fn product_case(
        &self,
        n: u32,
        m: u32,
        alpha: f64,
        beta: f64,
        lambda: f64,
        atoms: (AtomSet, AtomSet),
        threshold: f64,
    ) -> Result<(bool, CaseDetail)> {
        let f = self.member(n, alpha, beta, atoms.0)?;
        let g = self.member(m, alpha, lambda, atoms.1)?;
        let phi = self.quasi_product(&f, &g, alpha)?;
        self.membership(&phi, n, alpha, threshold)
    }
}

fn pairs(config: &RunConfig) -> Vec<(f64, f64)> {
    config.sweep("pair_beta").iter().copied().zip(config.sweep("pair_lambda").iter().copied()).collect()
}

fn operator_sweep(config: &RunConfig) -> Vec<OperatorParams> {
    let mut params: Vec<OperatorParams> =
        config.sweep("c").iter().map(|&c| OperatorParams::Phi1 { c }).collect();
    params.extend(config.sweep("sigma").iter().map(|&sigma| OperatorParams::Phi2 { sigma }));
    for &sigma in config.sweep("sigma") {
        for &gamma in config.sweep("gamma") {
            params.push(OperatorParams::Phi3 { sigma, gamma });
        }
    }
    params
}

fn kernel_sweep(config: &RunConfig) -> Vec<ThetaKernel> {
    let mut kernels: Vec<ThetaKernel> =
        config.sweep("sigma").iter().map(|&sigma| ThetaKernel::Log { sigma }).collect();
    for &sigma in config.sweep("sigma") {
        for &gamma in config.sweep("gamma") {
            kernels.push(ThetaKernel::Beta { sigma, gamma });
        }
    }
    kernels
}

fn plan_theorem1(ctx: &Ctx, config: &RunConfig, plan: &mut Plan) {
    for id in CatalogId::all_default() {
        let g = convex_catalog(id, ctx.order);
        let name = id.name();
        let (c, gc) = (ctx.clone(), g.clone());
        plan.push(format!("convex {name}"), move || {
            Ok(CaseReport::membership(check_convex(&gc, &c.grid, c.tol)?))
        });
        let (c, gc) = (ctx.clone(), g.clone());
        plan.push(format!("starlike(1/2) {name}"), move || {
            Ok(CaseReport::membership(check_starlike_order(&gc, 0.5, &c.grid, c.tol)?))
        });
        for &alpha in config.sweep("theorem1_alpha") {
            let (c, gc) = (ctx.clone(), g.clone());
            plan.push(format!("Re g^a/z^a > 1/2 g={name} alpha={alpha}"), move || {
                let ratio = alpha_power(&gc, alpha, c.order)?.ordinary_part();
                c.lower_bound(&ratio, 0.5)
            });
        }
    }
}

fn plan_theorem2(ctx: &Ctx, config: &RunConfig, plan: &mut Plan) -> Result<()> {
    for n in config.int_sweep("n")? {
        for &alpha in config.sweep("alpha") {
            for &beta in config.sweep("beta") {
                for atoms in atom_sets(config.seed) {
                    for id in CatalogId::all_default() {
                        let c = ctx.clone();
                        let label = format!(
                            "n={n} alpha={alpha} beta={beta} f={} g={}",
                            atoms.label(),
                            id.name()
                        );
                        plan.push(label, move || {
                            let f = c.member(n, alpha, beta, atoms)?;
                            let phi = c.quasi_product(&f, &convex_catalog(id, c.order), alpha)?;
                            c.membership(&phi, n, alpha, beta)
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

fn pair_label(n: u32, m: u32, alpha: f64, beta: f64, lambda: f64, atoms: (AtomSet, AtomSet)) -> String {
    format!(
        "n={n} m={m} alpha={alpha} beta={beta} lambda={lambda} f={} g={}",
        atoms.0.label(),
        atoms.1.label()
    )
}

/// `phi` at `beta + lambda - 1/2` for `m` in the sweep; `m = 0` rows are the plain-product case.
fn plan_theorem3(ctx: &Ctx, config: &RunConfig, plan: &mut Plan, only_m0: bool) -> Result<()> {
    for n in config.int_sweep("n")? {
        for &alpha in config.sweep("alpha") {
            for (beta, lambda) in pairs(config) {
                for m in config.int_sweep("m")? {
                    if only_m0 && m != 0 {
                        continue;
                    }
                    for atoms in atom_pairs(config.seed) {
                        let c = ctx.clone();
                        let threshold = beta + lambda - 0.5;
                        let prefix = if only_m0 { "corollary1 " } else { "" };
                        let label = format!("{prefix}{} threshold={threshold}", pair_label(n, m, alpha, beta, lambda, atoms));
                        plan.push(label, move || c.product_case(n, m, alpha, beta, lambda, atoms, threshold));
                    }
                }
            }
        }
    }
    Ok(())
}

/// `phi` at `beta + lambda/2` over the improved sweep; the `alpha = 1, m = 1`
/// cell goes to the exceptions.
fn plan_theorem4(ctx: &Ctx, config: &RunConfig, plan: &mut Plan, only_m1: bool) -> Result<()> {
    let ms = config.int_sweep("improved_m")?;
    let mut cells: Vec<(f64, u32, bool)> = Vec::new();
    for &alpha in config.sweep("improved_alpha") {
        for &m in &ms {
            if !only_m1 || m == 1 {
                cells.push((alpha, m, false));
            }
        }
    }
    if !only_m1 {
        cells.push((1.0, 1, true));
    }
    for (alpha, m, exception) in cells {
        for n in config.int_sweep("improved_n")? {
            for (beta, lambda) in pairs(config) {
                for atoms in atom_pairs(config.seed) {
                    let c = ctx.clone();
                    let threshold = beta + lambda / 2.0;
                    let prefix = if only_m1 { "corollary3 " } else { "" };
                    let mut label = format!("{prefix}{} threshold={threshold}", pair_label(n, m, alpha, beta, lambda, atoms));
                    let job = move || c.product_case(n, m, alpha, beta, lambda, atoms, threshold);
                    if exception {
                        label.push_str(" [c-sequence head violation at alpha=1, m=1]");
                        plan.push_exception(label, job);
                    } else {
                        plan.push(label, job);
                    }
                }
            }
        }
    }
    Ok(())
}

fn plan_corollaries(ctx: &Ctx, config: &RunConfig, plan: &mut Plan) -> Result<()> {
    plan_theorem3(ctx, config, plan, true)?;
    // g in T_0(1/2) leaves T_n(beta) invariant
    for n in config.int_sweep("n")? {
        for &alpha in config.sweep("alpha") {
            for &beta in config.sweep("beta") {
                for atoms in atom_pairs(config.seed) {
                    let c = ctx.clone();
                    let label = format!("corollary2 {} threshold={beta}", pair_label(n, 0, alpha, beta, 0.5, atoms));
                    plan.push(label, move || c.product_case(n, 0, alpha, beta, 0.5, atoms, beta));
                }
            }
        }
    }
    plan_theorem4(ctx, config, plan, true)?;
    // f, g in the same class T_n(beta), n >= 1
    for n in config.int_sweep("n")?.into_iter().filter(|&n| n >= 1) {
        for &alpha in config.sweep("improved_alpha") {
            for &beta in config.sweep("beta") {
                for atoms in atom_pairs(config.seed) {
                    let c = ctx.clone();
                    let label = format!("corollary4 {} threshold={beta}", pair_label(n, n, alpha, beta, beta, atoms));
                    plan.push(label, move || c.product_case(n, n, alpha, beta, beta, atoms, beta));
                }
            }
        }
    }
    Ok(())
}

fn plan_theorem5(ctx: &Ctx, config: &RunConfig, plan: &mut Plan) -> Result<()> {
    let params = operator_sweep(config);
    for &alpha in config.sweep("kernel_alpha") {
        for p in &params {
            let (c, p) = (ctx.clone(), *p);
            plan.push(format!("kernel {} alpha={alpha} Re > 1/2", p.label()), move || {
                c.lower_bound(&kernel_series(&p, alpha, c.order)?.ordinary_part(), 0.5)
            });
        }
    }
    for n in config.int_sweep("n")? {
        for &alpha in config.sweep("alpha") {
            for &beta in config.sweep("beta") {
                for atoms in atom_sets(config.seed) {
                    for p in &params {
                        let (c, p) = (ctx.clone(), *p);
                        let label = format!("{} n={n} alpha={alpha} beta={beta} f={}", p.label(), atoms.label());
                        plan.push(label, move || {
                            let f = c.member(n, alpha, beta, atoms)?;
                            let image = apply_operator(&alpha_power(&f, alpha, c.order)?, &p)?;
                            c.membership(&alpha_root(&image)?, n, alpha, beta)
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

fn plan_lemma3(ctx: &Ctx, config: &RunConfig, plan: &mut Plan) -> Result<()> {
    let order = ctx.order;
    let mut sequences: Vec<(String, RealSequence)> = Vec::new();
    for &alpha in config.sweep("sequence_alpha") {
        for m in config.int_sweep("sequence_m")? {
            sequences.push((format!("d_family({alpha},{m})"), d_sequence(alpha, m, order)?));
        }
    }
    for alpha in [0.25, 0.5] {
        for m in config.int_sweep("sequence_m")? {
            sequences.push((format!("c_family({alpha},{m})"), c_sequence(alpha, m, order)?));
        }
    }
    sequences.push((
        "geometric(1/2)".into(),
        RealSequence::explicit((0..=order).map(|k| 0.5f64.powi(k as i32)).collect())?,
    ));
    let mut unit = vec![0.0; order + 1];
    unit[0] = 1.0;
    sequences.push(("unit".into(), RealSequence::explicit(unit)?));

    for (name, seq) in sequences {
        if !is_convex_null(&seq, seq.last_index())?.is_convex_null() {
            continue;
        }
        let c = ctx.clone();
        plan.push(format!("Re p > 0 for {name}"), move || c.lower_bound(&lemma3_function(&seq, c.order)?, 0.0));
    }
    // auxiliary series 1 + sum d_k z^k behind the beta + lambda - 1/2 bound
    for &alpha in config.sweep("sequence_alpha") {
        for m in config.int_sweep("sequence_m")? {
            let c = ctx.clone();
            plan.push(format!("auxiliary 1 + sum d_k z^k > 1/2 for d_family({alpha},{m})"), move || {
                let d = d_sequence(alpha, m, c.order)?;
                c.lower_bound(&OrdinarySeries::from_real(d.values())?, 0.5)
            });
        }
    }
    Ok(())
}

fn plan_lemma4(ctx: &Ctx, config: &RunConfig, plan: &mut Plan) {
    for &shift in config.sweep("shift") {
        for atoms in atom_sets(config.seed) {
            for kernel in kernel_sweep(config) {
                let c = ctx.clone();
                let label = format!("{} shift={shift} p={}", kernel.label(), atoms.label());
                plan.push(label, move || {
                    let p = caratheodory_from_atoms(&atoms.atoms()?, c.order);
                    let coeffs: Vec<C64> = p
                        .coeffs()
                        .iter()
                        .enumerate()
                        .map(|(k, &pk)| if k == 0 { C64::new(1.0, 0.0) } else { pk * (1.0 - shift) })
                        .collect();
                    let q = OrdinarySeries::new(coeffs)?;
                    let image = theta_transform(&q, &kernel)?;
                    let input = check_lower_bound(&q, shift, &c.grid, c.tol)?;
                    let base = check_lower_bound(&image, shift, &c.grid, c.tol)?;
                    let scaled = check_lower_bound(&image, shift * kernel.constant_factor(), &c.grid, c.tol)?;
                    let ok = |r: &MembershipReport| r.pass && r.trusted;
                    let pass = ok(&input) && ok(&base) && ok(&scaled);
                    Ok((pass, CaseDetail::TwoBounds { input, base, scaled }))
                });
            }
        }
    }
}

fn plan_sequences(config: &RunConfig, plan: &mut Plan) -> Result<()> {
    let length = config.int_sweep("sequence_length")?;
    let samples = config.int_sweep("samples")?;
    for &k_max in &length {
        for &alpha in config.sweep("sequence_alpha") {
            for m in config.int_sweep("sequence_m")? {
                let k_max = k_max as usize;
                plan.push(format!("d_family({alpha},{m}) convex null to K={k_max}"), move || {
                    let report = is_convex_null(&d_sequence(alpha, m, k_max)?, k_max)?;
                    Ok((report.is_convex_null(), CaseDetail::Sequence { report }))
                });
            }
        }
    }
    for &count in &samples {
        let seed = config.seed;
        plan.push(format!("(a-b)^m <= a^m - b^m on {count} samples"), move || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut counterexamples = 0;
            for _ in 0..count {
                let a: f64 = rng.gen_range(0.01..10.0);
                let b = a * rng.gen_range(0.001..0.999);
                let m = rng.gen_range(1..=12u32);
                if !power_difference_inequality(a, b, m)? {
                    counterexamples += 1;
                }
            }
            let samples = count as usize;
            Ok((counterexamples == 0, CaseDetail::Inequality { samples, counterexamples }))
        });
    }
    // exact rational head condition against the floating-point verdict
    for num in 1..=30i128 {
        let alpha = Ratio::new(num, 20);
        plan.push(format!("c_family({alpha},1) head condition exact vs sampled"), move || {
            let exact = c_head_convex_exact(alpha);
            let value = *alpha.numer() as f64 / *alpha.denom() as f64;
            let report = is_convex_null(&c_sequence(value, 1, 2)?, 2)?;
            let sampled = report.first_violation != Some(0);
            Ok((exact == sampled, CaseDetail::HeadCondition { alpha: alpha.to_string(), exact, sampled }))
        });
    }
    plan.push_exception("c_family(1,1) convex null".into(), move || {
        let report = is_convex_null(&c_sequence(1.0, 1, 200)?, 200)?;
        Ok((report.is_convex_null(), CaseDetail::Sequence { report }))
    });
    Ok(())
}

fn plan_psi(config: &RunConfig, plan: &mut Plan) -> Result<()> {
    let samples = config.int_sweep("samples")?;
    let seed = config.seed;
    let alphas = config.sweep("psi_alpha").iter().map(|&a| (a, true));
    let controls = config.sweep("psi_control_alpha").iter().map(|&a| (a, false));
    for (alpha, expect_holds) in alphas.chain(controls) {
        for &count in &samples {
            let kind = if expect_holds { "Re psi <= 0" } else { "negative control, Re psi > 0 found" };
            plan.push(format!("{kind} alpha={alpha} samples={count}"), move || {
                let report = psi_condition_check(alpha, count as usize, seed)?;
                let pass = report.condition_holds == expect_holds
                    && report.base_re > 0.0
                    && report.excludes_minus_one;
                Ok((pass, CaseDetail::Psi { report, expect_holds }))
            });
        }
    }
    Ok(())
}

fn plan_suite(suite: Suite, config: &RunConfig) -> Result<Plan> {
    let ctx = Ctx { order: config.truncation, grid: config.grid()?, tol: config.tolerance };
    let mut plan = Plan::new();
    match suite {
        Suite::Theorem1 => plan_theorem1(&ctx, config, &mut plan),
        Suite::Theorem2 => plan_theorem2(&ctx, config, &mut plan)?,
        Suite::Theorem3 => plan_theorem3(&ctx, config, &mut plan, false)?,
        Suite::Theorem4 => plan_theorem4(&ctx, config, &mut plan, false)?,
        Suite::Corollaries => plan_corollaries(&ctx, config, &mut plan)?,
        Suite::Theorem5 => plan_theorem5(&ctx, config, &mut plan)?,
        Suite::Lemma3 => plan_lemma3(&ctx, config, &mut plan)?,
        Suite::Lemma4 => plan_lemma4(&ctx, config, &mut plan),
        Suite::Sequences => plan_sequences(config, &mut plan)?,
        Suite::Psi => plan_psi(config, &mut plan)?,
    }
    Ok(plan)
}

/// Runs `suite` on a pool of `workers` threads (0 picks the rayon default).
pub fn run_suite(suite: Suite, config: &RunConfig, workers: usize) -> Result<SuiteResult> {
    config.validate()?;
    let start = Instant::now();
    let plan = plan_suite(suite, config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Precondition(format!("cannot start worker pool: {e}")))?;
    let (cases, exceptions) = pool.install(|| {
        let cases: Vec<CaseReport> = plan.cases.par_iter().map(|job| job()).collect();
        let exceptions: Vec<CaseReport> = plan.exceptions.par_iter().map(|job| job()).collect();
        (cases, exceptions)
    });
    Ok(SuiteResult {
        suite: suite.name().to_string(),
        pass: !cases.is_empty() && cases.iter().all(|c| c.pass),
        cases,
        exceptions,
        wall_time: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> RunConfig {
        let mut c = RunConfig::default();
        c.truncation = 128;
        c.radii = vec![0.3, 0.6, 0.8];
        c.angles = 64;
        c.set("sweeps.samples", "500").unwrap();
        c
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("theorem9".parse::<Suite>().is_err());
    }

    #[test]
    fn psi_suite_passes_with_control() {
        let r = run_suite(Suite::Psi, &small(), 2).unwrap();
        assert!(r.pass);
        assert_eq!(r.cases.len(), 4);
        let json = r.to_json();
        assert!(json.contains("\"expect_holds\": false"));
        assert!(!json.contains("wall_time"));
    }

    #[test]
    fn sequences_suite_reports_exception() {
        let r = run_suite(Suite::Sequences, &small(), 1).unwrap();
        assert!(r.pass, "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.exceptions.len(), 1);
        assert!(!r.exceptions[0].pass);
    }

    #[test]
    fn failed_case_is_captured() {
        let mut c = small();
        c.set("sweeps.pair_beta", "0.9").unwrap();
        c.set("sweeps.pair_lambda", "0.9").unwrap();
        c.set("sweeps.m", "0").unwrap();
        c.set("sweeps.n", "0").unwrap();
        c.set("sweeps.alpha", "1").unwrap();
        // threshold 1.3 is outside [0, 1)
        let r = run_suite(Suite::Theorem3, &c, 1).unwrap();
        assert!(!r.pass);
        assert!(matches!(r.cases[0].detail, CaseDetail::Failed { .. }));
    }

    #[test]
    fn csv_has_fixed_header() {
        let r = run_suite(Suite::Theorem1, &small(), 0).unwrap();
        assert!(r.to_csv().starts_with("suite,section,label,pass,min_re,threshold,margin,guard\n"));
    }
}
