use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use quasiconv::config::{OutputFormat, RunConfig};
use quasiconv::membership::{
    check_convex, check_membership, check_starlike_order, convex_catalog, generate_member,
    CatalogId, ClassSpec, HerglotzAtoms, MembershipReport,
};
use quasiconv::operators::{apply_operator, multiplier_sequence, OperatorParams};
use quasiconv::plotdata;
use quasiconv::series::{
    alpha_power, circle_convolution_oracle, evaluate_alpha, quasi_convolution, truncation_guard,
    AlphaSeries, FunctionCoefficients, C64,
};
use quasiconv::verify::{run_suite, Suite, SuiteResult};

/// Writes to stdout; a closed pipe ends the process quietly.
fn emit(args: std::fmt::Arguments) {
    use std::io::Write as _;
    if let Err(e) = std::io::stdout().lock().write_fmt(args) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write output: {e}");
        std::process::exit(2);
    }
}

macro_rules! print {
    ($($t:tt)*) => { emit(format_args!($($t)*)) };
}

macro_rules! println {
    ($($t:tt)*) => { emit(format_args!("{}\n", format_args!($($t)*))) };
}

#[derive(Parser)]
#[command(name = "quasiconv", version, about = "Quasi-convolution of fractional powers on the unit disk")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Flat key = value config file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_parser = ["json", "csv"])]
    format: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Truncation order N
    #[arg(long, global = true)]
    trunc: Option<usize>,
    /// Largest sampling radius
    #[arg(long, global = true)]
    rmax: Option<f64>,
    #[arg(long, global = true)]
    angles: Option<usize>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Cross-check quasi-convolutions against the circle integral
    #[arg(long, global = true)]
    oracle: bool,
    /// Worker threads for verification suites (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficients of f(z)^alpha
    Power {
        #[arg(long)]
        f: String,
        #[arg(long)]
        alpha: f64,
        #[arg(long = "n-trunc")]
        n_trunc: Option<usize>,
    },
    /// Quasi-convolution f^alpha * g^alpha
    Convolve {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        alpha: f64,
    },
    /// Operator multipliers and the image of f
    Operator {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        c: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, default_value = "identity")]
        f: String,
    },
    /// Sampled membership, convexity or starlikeness test
    Check {
        #[arg(long)]
        f: String,
        /// n,alpha,beta
        #[arg(long, conflicts_with_all = ["convex", "starlike"])]
        spec: Option<String>,
        #[arg(long)]
        convex: bool,
        /// Order of starlikeness
        #[arg(long)]
        starlike: Option<f64>,
    },
    /// A class member built from Herglotz atoms
    Generate {
        /// n,alpha,beta
        #[arg(long)]
        spec: String,
        /// single[:angle], antipodal or random:<count>
        #[arg(long, default_value = "single")]
        atoms: String,
    },
    /// Run a verification suite
    Verify {
        /// Suite name or "all"
        suite: String,
    },
    /// CSV tables for plotting
    Plotdata {
        #[arg(value_enum)]
        what: PlotKind,
        #[arg(long, default_value = "half_plane")]
        f: String,
        #[arg(long, default_value = "0,1,0")]
        spec: String,
        #[arg(long, value_enum, default_value = "phi2")]
        kind: Kind,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        c: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Phi1,
    Phi2,
    Phi3,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlotKind {
    MinReVsR,
    KernelReHeatmap,
    ConvexNullRegion,
}

impl Kind {
    fn params(self, c: f64, sigma: f64, gamma: f64) -> OperatorParams {
        match self {
            Kind::Phi1 => OperatorParams::Phi1 { c },
            Kind::Phi2 => OperatorParams::Phi2 { sigma },
            Kind::Phi3 => OperatorParams::Phi3 { sigma, gamma },
        }
    }
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Pass,
    Fail,
}

fn load_config(global: &Global) -> Result<RunConfig> {
    let mut config = match &global.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read config {}", path.display()))?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(n) = global.trunc {
        config.set("truncation", &n.to_string())?;
    }
    if let Some(a) = global.angles {
        config.set("angles", &a.to_string())?;
    }
    if let Some(t) = global.tol {
        config.set("tolerance", &t.to_string())?;
    }
    if let Some(s) = global.seed {
        config.set("seed", &s.to_string())?;
    }
    if let Some(f) = &global.format {
        config.set("format", f)?;
    }
    if let Some(r) = global.rmax {
        config.restrict_radius(r);
    }
    config.validate()?;
    Ok(config)
}

fn parse_function(text: &str, order: usize) -> Result<FunctionCoefficients> {
    match text.strip_prefix('@') {
        Some(path) => {
            let body = std::fs::read_to_string(path).with_context(|| format!("cannot read {path}"))?;
            Ok(FunctionCoefficients::from_json(&body)?)
        }
        None => Ok(convex_catalog(text.parse::<CatalogId>()?, order)),
    }
}

fn parse_spec(text: &str) -> Result<ClassSpec> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [n, alpha, beta] = parts.as_slice() else {
        bail!("--spec expects n,alpha,beta, got {text:?}");
    };
    let n = n.parse().with_context(|| format!("bad n in {text:?}"))?;
    let alpha = alpha.parse().with_context(|| format!("bad alpha in {text:?}"))?;
    let beta = beta.parse().with_context(|| format!("bad beta in {text:?}"))?;
    Ok(ClassSpec::new(n, alpha, beta)?)
}

fn parse_atoms(text: &str, seed: u64) -> Result<HerglotzAtoms> {
    let (name, arg) = text.split_once(':').unwrap_or((text, ""));
    let atoms = match (name, arg) {
        ("single", "") => HerglotzAtoms::single(0.0),
        ("single", a) => HerglotzAtoms::single(a.parse().context("bad atom angle")?),
        ("antipodal", "") => HerglotzAtoms::uniform(&[0.0, std::f64::consts::PI])?,
        ("random", n) => HerglotzAtoms::random(n.parse().context("bad atom count")?, seed)?,
        _ => bail!("unknown atoms {text:?} (single[:angle], antipodal, random:<count>)"),
    };
    Ok(atoms)
}

fn series_csv(coeffs: &[C64], first: usize) -> String {
    let mut out = String::from("k,re,im\n");
    for (i, c) in coeffs.iter().enumerate() {
        writeln!(out, "{},{},{}", i + first, c.re, c.im).expect("writing to a String");
    }
    out
}

fn report_csv(r: &MembershipReport) -> String {
    format!(
        "min_re,argmin_r,argmin_theta,threshold,margin,pass,guard,tolerance,trusted\n{},{},{},{},{},{},{},{},{}\n",
        r.min_re, r.argmin_r, r.argmin_theta, r.threshold, r.margin, r.pass, r.guard, r.tolerance, r.trusted
    )
}

fn emit_series(s: &AlphaSeries, format: OutputFormat) {
    match format {
        OutputFormat::Json => println!("{}", s.to_json()),
        OutputFormat::Csv => print!("{}", series_csv(s.coeffs(), 1)),
    }
}

#[derive(Serialize)]
struct OracleCheck {
    r: f64,
    theta: f64,
    series: [f64; 2],
    oracle: [f64; 2],
    error: f64,
    allowed: f64,
}

#[derive(Serialize)]
struct OperatorOutput<'a> {
    kind: &'a str,
    params: OperatorParams,
    alpha: f64,
    multipliers: &'a [f64],
    image: serde_json::Value,
}

fn cmd_convolve(config: &RunConfig, f: &str, g: &str, alpha: f64, oracle: bool) -> Result<Outcome> {
    let order = config.truncation;
    let f = parse_function(f, order)?;
    let g = parse_function(g, order)?;
    let n = f.order().min(g.order());
    let product = quasi_convolution(&alpha_power(&f, alpha, n)?, &alpha_power(&g, alpha, n)?)?;
    if !oracle {
        emit_series(&product, config.format);
        return Ok(Outcome::Pass);
    }
    let r_max = config.grid()?.r_max().min(0.7);
    let mut checks = Vec::new();
    for r in [0.3, 0.5, r_max] {
        for theta in [0.0, 1.0, 2.5, -2.0] {
            let series = evaluate_alpha(&product, C64::from_polar(r, theta))?;
            // the circle integral at radius sqrt(r) lands on r e^{i theta}
            let circle = circle_convolution_oracle(&f, &g, alpha, r.sqrt(), theta, 4 * n + 64)?;
            let allowed = 1e-8 + truncation_guard(&product, r);
            let error = (series - circle).norm();
            checks.push(OracleCheck { r, theta, series: [series.re, series.im], oracle: [circle.re, circle.im], error, allowed });
        }
    }
    let pass = checks.iter().all(|c| c.error <= c.allowed);
    match config.format {
        OutputFormat::Json => println!(
            "{}",
            serde_json::json!({ "series": serde_json::from_str::<serde_json::Value>(&product.to_json())?, "oracle": checks, "pass": pass })
        ),
        OutputFormat::Csv => {
            println!("r,theta,series_re,series_im,oracle_re,oracle_im,error,allowed");
            for c in &checks {
                println!("{},{},{},{},{},{},{},{}", c.r, c.theta, c.series[0], c.series[1], c.oracle[0], c.oracle[1], c.error, c.allowed);
            }
        }
    }
    Ok(if pass { Outcome::Pass } else { Outcome::Fail })
}

fn print_suite(result: &SuiteResult, format: OutputFormat) {
    match format {
        OutputFormat::Json => println!("{}", result.to_json()),
        OutputFormat::Csv => print!("{}", result.to_csv()),
    }
    let failed = result.failures().count();
    eprintln!(
        "{}: {} ({} cases, {} failed, {} exceptions) in {:.2?}",
        result.suite,
        if result.pass { "PASS" } else { "FAIL" },
        result.cases.len(),
        failed,
        result.exceptions.len(),
        result.wall_time
    );
}

/// Errors escaping `run` are usage, configuration or argument problems.
fn run(cli: Cli) -> Result<Outcome> {
    let config = load_config(&cli.global)?;
    let format = config.format;
    match cli.command {
        Command::Power { f, alpha, n_trunc } => {
            let n = n_trunc.unwrap_or(config.truncation);
            let f = parse_function(&f, n)?;
            emit_series(&alpha_power(&f, alpha, n)?, format);
            Ok(Outcome::Pass)
        }
        Command::Convolve { f, g, alpha } => cmd_convolve(&config, &f, &g, alpha, cli.global.oracle),
        Command::Operator { kind, alpha, c, sigma, gamma, f } => {
            let params = kind.params(c, sigma, gamma);
            let f = parse_function(&f, config.truncation)?;
            let mu = multiplier_sequence(&params, alpha, f.order())?;
            let image = apply_operator(&alpha_power(&f, alpha, f.order())?, &params)?;
            match format {
                OutputFormat::Json => {
                    let out = OperatorOutput {
                        kind: params.kind(),
                        params,
                        alpha,
                        multipliers: mu.values(),
                        image: serde_json::from_str(&image.to_json())?,
                    };
                    println!("{}", serde_json::to_string(&out)?);
                }
                OutputFormat::Csv => print!("{}", mu.to_csv()),
            }
            Ok(Outcome::Pass)
        }
        Command::Check { f, spec, convex, starlike } => {
            let f = parse_function(&f, config.truncation)?;
            let grid = config.grid()?;
            let report = if convex {
                check_convex(&f, &grid, config.tolerance)?
            } else if let Some(order) = starlike {
                check_starlike_order(&f, order, &grid, config.tolerance)?
            } else {
                let spec = spec.ok_or_else(|| anyhow!("check needs --spec, --convex or --starlike"))?;
                let spec = parse_spec(&spec)?;
                check_membership(&f, &spec, &grid, config.tolerance)?
            };
            match format {
                OutputFormat::Json => println!("{}", report.to_json()),
                OutputFormat::Csv => print!("{}", report_csv(&report)),
            }
            Ok(if report.pass && report.trusted { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Generate { spec, atoms } => {
            let spec = parse_spec(&spec)?;
            let atoms = parse_atoms(&atoms, config.seed)?;
            let f = generate_member(&spec, &atoms, config.truncation)?;
            match format {
                OutputFormat::Json => println!("{}", f.to_json()),
                OutputFormat::Csv => print!("{}", series_csv(f.coeffs(), 2)),
            }
            Ok(Outcome::Pass)
        }
        Command::Verify { suite } => {
            let suites: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse::<Suite>()?]
            };
            let mut pass = true;
            for s in suites {
                let result = run_suite(s, &config, cli.global.workers)?;
                print_suite(&result, format);
                pass &= result.pass;
            }
            Ok(if pass { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Plotdata { what, f, spec, kind, alpha, c, sigma, gamma } => {
            let grid = config.grid()?;
            let csv = match what {
                PlotKind::MinReVsR => {
                    let spec = parse_spec(&spec)?;
                    plotdata::min_re_vs_r(&parse_function(&f, config.truncation)?, &spec, &grid)?
                }
                PlotKind::KernelReHeatmap => {
                    plotdata::kernel_re_heatmap(&kind.params(c, sigma, gamma), alpha, config.truncation, &grid)?
                }
                PlotKind::ConvexNullRegion => plotdata::convex_null_region(
                    config.sweep("region_alpha"),
                    &config.int_sweep("region_m")?,
                    config.int_sweep("sequence_length")?[0] as usize,
                )?,
            };
            print!("{csv}");
            Ok(Outcome::Pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
