use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use quasiconv::config::RunConfig;
use quasiconv::membership::{generate_member, ClassSpec, HerglotzAtoms};
use quasiconv::operators::{
    apply_operator, multiplier_sequence, printed_phi1_multipliers, quadrature_phi1,
    quadrature_phi2, quadrature_phi3, MultiplierSequence, OperatorParams,
};
use quasiconv::series::{
    alpha_power, alpha_root, circle_convolution_oracle, evaluate_alpha, quasi_convolution,
    truncation_guard, FunctionCoefficients, C64,
};
use quasiconv::verify::{run_suite, CaseDetail, CaseReport, Suite, SuiteResult};
use quasiconv_verification::{random_tail, rising_coefficient, Verdict};

fn suite(s: Suite) -> SuiteResult {
    run_suite(s, &RunConfig::default(), 0).expect("suite runs")
}

fn worst_margin<'a>(cases: impl Iterator<Item = &'a CaseReport>) -> f64 {
    cases.filter_map(|c| c.report()).map(|r| r.margin).fold(f64::INFINITY, f64::min)
}

fn failing_labels(cases: &[&CaseReport]) -> String {
    let failed: Vec<&str> = cases.iter().filter(|c| !c.pass).map(|c| c.label.as_str()).collect();
    if failed.is_empty() {
        String::new()
    } else {
        format!("; failing: [{}]", failed.join("; "))
    }
}

fn fractional_power_oracle() -> Verdict {
    let order = 64;
    let f = FunctionCoefficients::from_real(&vec![1.0; order - 1]).unwrap();
    let mut worst: f64 = 0.0;
    for alpha in [0.25, 0.5, 1.0, 1.5] {
        let s = alpha_power(&f, alpha, order).unwrap();
        for k in 1..=order {
            let exact = rising_coefficient(alpha, k);
            worst = worst.max((s.coeffs()[k - 1].re - exact).abs() / exact);
            worst = worst.max(s.coeffs()[k - 1].im.abs() / exact);
        }
    }
    Verdict::new(worst <= 1e-12, format!("max relative error {worst:.2e} (limit 1e-12)"))
}

fn root_round_trip() -> Verdict {
    let order = 32;
    let mut worst: f64 = 0.0;
    for seed in 0..100 {
        let f = FunctionCoefficients::new(random_tail(seed, order)).unwrap();
        for alpha in [0.5, 0.7, 1.3] {
            let back = alpha_root(&alpha_power(&f, alpha, order).unwrap()).unwrap();
            for (a, b) in back.coeffs().iter().zip(f.coeffs()) {
                worst = worst.max((a - b).norm());
            }
        }
    }
    Verdict::new(worst <= 1e-10, format!("100 functions x 3 powers, max error {worst:.2e} (limit 1e-10)"))
}

fn circle_oracle_agreement() -> Verdict {
    let order = 64;
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_error: f64 = 0.0;
    for pair in 0..20u64 {
        for alpha in [0.5, 1.0, 2.0] {
            let spec = ClassSpec::new(0, alpha, 0.0).unwrap();
            let f = generate_member(&spec, &HerglotzAtoms::random(3, 2 * pair).unwrap(), order).unwrap();
            let g = generate_member(&spec, &HerglotzAtoms::random(2, 2 * pair + 1).unwrap(), order).unwrap();
            let product = quasi_convolution(
                &alpha_power(&f, alpha, order).unwrap(),
                &alpha_power(&g, alpha, order).unwrap(),
            )
            .unwrap();
            for rho in [0.3, 0.5, 0.7] {
                for theta in [0.0, 1.0, 2.5, -2.0] {
                    let series = evaluate_alpha(&product, C64::from_polar(rho, theta)).unwrap();
                    let circle =
                        circle_convolution_oracle(&f, &g, alpha, rho.sqrt(), theta, 4 * order + 64).unwrap();
                    let error = (series - circle).norm();
                    worst_error = worst_error.max(error);
                    worst_excess = worst_excess.max(error - 1e-8 - truncation_guard(&product, rho));
                }
            }
        }
    }
    Verdict::new(
        worst_excess <= 0.0,
        format!("20 pairs x alpha {{0.5,1,2}} x 12 points, max error {worst_error:.2e} (limit 1e-8 + guard)"),
    )
}

fn membership_suite(result: &SuiteResult, what: &str) -> Verdict {
    let cases: Vec<&CaseReport> = result.cases.iter().collect();
    Verdict::new(
        result.pass,
        format!(
            "{what}: {} cases, {} failed, worst margin {:.4}{}",
            cases.len(),
            result.failures().count(),
            worst_margin(result.cases.iter()),
            failing_labels(&cases)
        ),
    )
}

fn rows<'a>(result: &'a SuiteResult, prefix: &str) -> Vec<&'a CaseReport> {
    result.cases.iter().filter(|c| c.label.starts_with(prefix)).collect()
}

fn theorem3_rows() -> Verdict {
    let t3 = suite(Suite::Theorem3);
    let cor = suite(Suite::Corollaries);
    let mut cases: Vec<&CaseReport> = t3.cases.iter().collect();
    let cor1 = rows(&cor, "corollary1");
    let cor2 = rows(&cor, "corollary2");
    cases.extend(&cor1);
    cases.extend(&cor2);
    let betas = RunConfig::default().sweep("beta").to_vec();
    let exact_threshold = cor2
        .iter()
        .all(|c| c.report().is_some_and(|r| betas.contains(&r.threshold)));
    let pass = cases.iter().all(|c| c.pass) && exact_threshold && !cor1.is_empty() && !cor2.is_empty();
    Verdict::new(
        pass,
        format!(
            "{} theorem rows + {} corollary rows, worst margin {:.4}, lambda = 1/2 rows at threshold beta exactly: {exact_threshold}{}",
            t3.cases.len(),
            cor1.len() + cor2.len(),
            worst_margin(cases.iter().copied()),
            failing_labels(&cases)
        ),
    )
}

fn theorem4_rows() -> Verdict {
    let t4 = suite(Suite::Theorem4);
    let cor = suite(Suite::Corollaries);
    let mut cases: Vec<&CaseReport> = t4.cases.iter().collect();
    let cor34: Vec<&CaseReport> =
        cor.cases.iter().filter(|c| c.label.starts_with("corollary3") || c.label.starts_with("corollary4")).collect();
    cases.extend(&cor34);
    let exceptions_run = !t4.exceptions.is_empty()
        && t4.exceptions.iter().all(|c| !matches!(c.detail, CaseDetail::Failed { .. }));
    let failed = cases.iter().filter(|c| !c.pass).count();
    Verdict::new(
        failed == 0 && exceptions_run,
        format!(
            "{} cases ({} corollary rows), {failed} failed, worst margin {:.4}; {} documented exceptions executed, {} of them below threshold{}",
            cases.len(),
            cor34.len(),
            worst_margin(cases.iter().copied()),
            t4.exceptions.len(),
            t4.exceptions.iter().filter(|c| !c.pass).count(),
            failing_labels(&cases)
        ),
    )
}

fn operator_agreement() -> Verdict {
    let order = 512;
    let points = [
        C64::new(0.3, 0.0),
        C64::from_polar(0.5, std::f64::consts::FRAC_PI_4),
        C64::from_polar(0.9, 2.0),
    ];
    let member = generate_member(
        &ClassSpec::new(0, 1.0, 0.0).unwrap(),
        &HerglotzAtoms::random(3, 11).unwrap(),
        order,
    )
    .unwrap();
    let half_plane = FunctionCoefficients::from_real(&vec![1.0; order - 1]).unwrap();
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_error: f64 = 0.0;
    let mut count = 0;
    let mut record = |series: C64, quad: C64, guard: f64| {
        let error = (series - quad).norm();
        worst_error = worst_error.max(error);
        worst_excess = worst_excess.max(error - 1e-8 - guard);
        count += 1;
    };
    for f in [&half_plane, &member] {
        for alpha in [0.5, 1.0, 1.5] {
            let fa = alpha_power(f, alpha, order).unwrap();
            for c in [0.0, 0.5, 1.0, 2.0] {
                let image = apply_operator(&fa, &OperatorParams::Phi1 { c }).unwrap();
                for &z in &points {
                    let guard = truncation_guard(&image, z.norm());
                    record(evaluate_alpha(&image, z).unwrap(), quadrature_phi1(f, alpha, c, z).unwrap(), guard);
                }
            }
        }
        let fa = alpha_power(f, 1.0, order).unwrap();
        for sigma in [0.5, 1.0, 2.0] {
            let image = apply_operator(&fa, &OperatorParams::Phi2 { sigma }).unwrap();
            for &z in &points {
                let guard = truncation_guard(&image, z.norm());
                record(evaluate_alpha(&image, z).unwrap(), quadrature_phi2(f, sigma, z).unwrap(), guard);
            }
            for gamma in [0.5, 1.0, 2.0] {
                let image = apply_operator(&fa, &OperatorParams::Phi3 { sigma, gamma }).unwrap();
                for &z in &points {
                    let guard = truncation_guard(&image, z.norm());
                    record(evaluate_alpha(&image, z).unwrap(), quadrature_phi3(f, sigma, gamma, z).unwrap(), guard);
                }
            }
        }
    }
    let printed_rejected = (0..3).all(|i| {
        let (alpha, c) = [(0.5, 0.0), (1.0, 1.0), (1.5, 2.0)][i];
        MultiplierSequence::new(printed_phi1_multipliers(alpha, c, 16)).is_err()
    });
    let corrected_ok = [0.0, 0.5, 1.0, 2.0].iter().all(|&c| {
        multiplier_sequence(&OperatorParams::Phi1 { c }, 1.0, 16).is_ok_and(|m| m.values()[0] == 1.0)
    });
    Verdict::new(
        worst_excess <= 0.0 && printed_rejected && corrected_ok,
        format!(
            "{count} series/quadrature comparisons, max error {worst_error:.2e} (limit 1e-8 + guard); printed phi1 rejected: {printed_rejected}; corrected mu_1 = 1: {corrected_ok}"
        ),
    )
}

fn lemma4_bounds() -> Verdict {
    let result = suite(Suite::Lemma4);
    let mut base = f64::INFINITY;
    let mut scaled = f64::INFINITY;
    for c in &result.cases {
        if let CaseDetail::TwoBounds { base: b, scaled: s, .. } = &c.detail {
            base = base.min(b.margin);
            scaled = scaled.min(s.margin);
        }
    }
    let cases: Vec<&CaseReport> = result.cases.iter().collect();
    Verdict::new(
        result.pass,
        format!(
            "{} cases, worst margin over 0.3: {base:.4}, over 0.3 x constant factor: {scaled:.4}{}",
            cases.len(),
            failing_labels(&cases)
        ),
    )
}

fn sequences() -> Verdict {
    let seq = suite(Suite::Sequences);
    let lemma3 = suite(Suite::Lemma3);
    let counter = seq.cases.iter().find_map(|c| match c.detail {
        CaseDetail::Inequality { samples, counterexamples } => Some((samples, counterexamples)),
        _ => None,
    });
    let mut cases: Vec<&CaseReport> = seq.cases.iter().collect();
    cases.extend(lemma3.cases.iter());
    Verdict::new(
        seq.pass && lemma3.pass && counter.is_some_and(|(n, bad)| n == 10_000 && bad == 0),
        format!(
            "{} sequence cases, power-difference samples/counterexamples {:?}, {} construction cases with worst min Re {:.4}{}",
            seq.cases.len(),
            counter,
            lemma3.cases.len(),
            lemma3.cases.iter().filter_map(|c| c.report()).map(|r| r.min_re).fold(f64::INFINITY, f64::min),
            failing_labels(&cases)
        ),
    )
}

fn psi_condition() -> Verdict {
    let result = suite(Suite::Psi);
    let parts: Vec<String> = result
        .cases
        .iter()
        .filter_map(|c| match &c.detail {
            CaseDetail::Psi { report, .. } => Some(format!("alpha={} worst={:.3e}", report.alpha, report.worst_re)),
            _ => None,
        })
        .collect();
    Verdict::new(result.pass, parts.join(", "))
}

fn determinism() -> Verdict {
    let config = RunConfig::default();
    let mut identical = true;
    let mut names = Vec::new();
    for s in [Suite::Theorem2, Suite::Theorem4, Suite::Lemma4, Suite::Psi] {
        let one = run_suite(s, &config, 1).unwrap().to_json();
        let four = run_suite(s, &config, 4).unwrap().to_json();
        identical &= one == four;
        names.push(s.name());
    }
    Verdict::new(identical, format!("{} with 1 vs 4 workers byte-identical: {identical}", names.join(", ")))
}

type Criterion = (u32, &'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        (1, "fractional-power binomial oracle", fractional_power_oracle),
        (2, "root/power round trip", root_round_trip),
        (3, "circle integral vs quasi-convolution", circle_oracle_agreement),
        (4, "convex g gives Re g^a/z^a > 1/2", || membership_suite(&suite(Suite::Theorem1), "catalog x alpha")),
        (5, "convex g preserves T_n(beta)", || membership_suite(&suite(Suite::Theorem2), "n x alpha x beta x atoms x catalog")),
        (6, "threshold beta + lambda - 1/2", theorem3_rows),
        (7, "improved threshold beta + lambda/2", theorem4_rows),
        (8, "operator series vs quadrature", operator_agreement),
        (9, "operators preserve T_n(beta)", || membership_suite(&suite(Suite::Theorem5), "kinds x parameters x spec sweep")),
        (10, "integral transforms keep Re > beta", lemma4_bounds),
        (11, "convex null sequences", sequences),
        (12, "psi admissibility condition", psi_condition),
        (13, "determinism across worker counts", determinism),
    ];
    let mut failed = 0;
    for (n, name, check) in criteria {
        let verdict = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Verdict::new(false, "panicked"));
        if !verdict.pass {
            failed += 1;
        }
        println!(
            "criterion {n:>2} {}: {name}: {}",
            if verdict.pass { "PASS" } else { "FAIL" },
            verdict.detail
        );
    }
    println!("acceptance: {} of 13 criteria passed", 13 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
